//! Expression-language parser: a symbol-table-driven maximal-munch
//! tokenizer and a recursive-descent grammar over declared symbols.
//! Derivative operators (`D+`, `J-`, `dx+`, `dth-`, `dz`, ...) are applied
//! during parsing, so a successful parse always yields a canonical
//! expression. Odd constants are written with a leading tilde (`~k1`).
//! Precedence: unary minus binds tightest, then `^`, then `*` and `/`,
//! then `+` and `-`. `parse(display(e))` reproduces `e` exactly.

use crate::expr::{Atom, ConstData, EngineError, FnData, GradedExpr, ParityClass};
use crate::gcsys::ClassicalChart;
use crate::scalar::GaussRat;
use crate::superfield::{Chart, Sector};
use std::collections::BTreeMap;
use thiserror::Error;

/// What a declared name stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    /// Bosonic coordinate.
    Coord,
    /// Fermionic coordinate.
    OddCoord,
    /// Dependent variable with declared coordinate dependencies.
    DepVar,
    /// Even function of the named coordinates.
    EvenFn { args: Vec<String> },
    /// Odd function of the named coordinates.
    OddFn { args: Vec<String> },
    /// Even constant.
    EvenConst,
    /// Odd constant (written `~name`).
    OddConst,
}

/// One declared symbol.
#[derive(Clone, Debug)]
pub struct SymbolDecl {
    pub name: String,
    pub kind: SymbolKind,
    /// Constant or function has no invertible body part.
    pub bodiless: bool,
    /// Declared vanishing power, if any.
    pub nilpotent: Option<u32>,
}

/// Declared symbols, looked up by maximal munch during tokenization.
#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    map: BTreeMap<String, SymbolDecl>,
}

impl SymbolTable {
    pub fn new() -> Self {
        SymbolTable::default()
    }

    /// Table with the four standard superspace coordinates and `eps`.
    pub fn standard() -> Self {
        let mut t = SymbolTable::new();
        t.declare_coord("x+");
        t.declare_coord("x-");
        t.declare_odd_coord("th+");
        t.declare_odd_coord("th-");
        t.declare_even_const("eps", false, None);
        t
    }

    /// Table with the two classical coordinates and `eps`.
    pub fn classical() -> Self {
        let mut t = SymbolTable::new();
        t.declare_coord("z");
        t.declare_coord("zb");
        t.declare_even_const("eps", false, None);
        t
    }

    pub fn declare(&mut self, decl: SymbolDecl) {
        self.map.insert(decl.name.clone(), decl);
    }

    pub fn declare_coord(&mut self, name: &str) {
        self.declare(SymbolDecl {
            name: name.to_string(),
            kind: SymbolKind::Coord,
            bodiless: false,
            nilpotent: None,
        });
    }

    pub fn declare_odd_coord(&mut self, name: &str) {
        self.declare(SymbolDecl {
            name: name.to_string(),
            kind: SymbolKind::OddCoord,
            bodiless: true,
            nilpotent: Some(2),
        });
    }

    pub fn declare_dep_var(&mut self, name: &str) {
        self.declare(SymbolDecl {
            name: name.to_string(),
            kind: SymbolKind::DepVar,
            bodiless: false,
            nilpotent: None,
        });
    }

    pub fn declare_even_const(&mut self, name: &str, bodiless: bool, nilpotent: Option<u32>) {
        self.declare(SymbolDecl {
            name: name.to_string(),
            kind: SymbolKind::EvenConst,
            bodiless,
            nilpotent,
        });
    }

    pub fn declare_odd_const(&mut self, name: &str) {
        self.declare(SymbolDecl {
            name: name.to_string(),
            kind: SymbolKind::OddConst,
            bodiless: true,
            nilpotent: Some(2),
        });
    }

    pub fn declare_even_fn(&mut self, name: &str, args: &[&str], bodiless: bool, nilpotent: Option<u32>) {
        self.declare(SymbolDecl {
            name: name.to_string(),
            kind: SymbolKind::EvenFn {
                args: args.iter().map(|s| s.to_string()).collect(),
            },
            bodiless,
            nilpotent,
        });
    }

    pub fn declare_odd_fn(&mut self, name: &str, args: &[&str]) {
        self.declare(SymbolDecl {
            name: name.to_string(),
            kind: SymbolKind::OddFn {
                args: args.iter().map(|s| s.to_string()).collect(),
            },
            bodiless: true,
            nilpotent: Some(2),
        });
    }

    pub fn get(&self, name: &str) -> Option<&SymbolDecl> {
        self.map.get(name)
    }

    /// Longest declared name starting at the front of `rest`.
    fn munch<'a>(&self, rest: &'a str) -> Option<&'a str> {
        let mut best: Option<&str> = None;
        for name in self.map.keys() {
            if rest.starts_with(name.as_str())
                && best.map_or(true, |b| name.len() > b.len())
            {
                best = Some(&rest[..name.len()]);
            }
        }
        best
    }
}

/// Chart the derivative operators act through.
#[derive(Clone, Debug)]
pub enum ParseChart {
    Graded(Chart),
    Classical(ClassicalChart),
}

/// Symbols plus chart: everything `parse` needs.
#[derive(Clone, Debug)]
pub struct ParserContext {
    pub table: SymbolTable,
    pub chart: ParseChart,
}

impl ParserContext {
    /// Standard superspace context.
    pub fn standard() -> Self {
        ParserContext {
            table: SymbolTable::standard(),
            chart: ParseChart::Graded(Chart::standard()),
        }
    }

    /// Classical two-coordinate context.
    pub fn classical() -> Self {
        ParserContext {
            table: SymbolTable::classical(),
            chart: ParseChart::Classical(ClassicalChart::standard()),
        }
    }

    fn operators(&self) -> Vec<&'static str> {
        match self.chart {
            ParseChart::Graded(_) => vec![
                "dth+", "dth-", "dx+", "dx-", "D+", "D-", "J+", "J-",
            ],
            ParseChart::Classical(_) => vec!["dz", "dzb"],
        }
    }

    fn apply_operator(&self, op: &str, e: &GradedExpr) -> Result<GradedExpr, ParseError> {
        match (&self.chart, op) {
            (ParseChart::Graded(ch), "D+") => Ok(ch.apply_d(Sector::Plus, e)),
            (ParseChart::Graded(ch), "D-") => Ok(ch.apply_d(Sector::Minus, e)),
            (ParseChart::Graded(ch), "J+") => Ok(ch.apply_j(Sector::Plus, e)),
            (ParseChart::Graded(ch), "J-") => Ok(ch.apply_j(Sector::Minus, e)),
            (ParseChart::Graded(ch), "dx+") => Ok(ch.apply_dx(Sector::Plus, e)),
            (ParseChart::Graded(ch), "dx-") => Ok(ch.apply_dx(Sector::Minus, e)),
            (ParseChart::Graded(ch), "dth+") => {
                Ok(crate::calculus::d_odd(e, &ch.fermionic[0]))
            }
            (ParseChart::Graded(ch), "dth-") => {
                Ok(crate::calculus::d_odd(e, &ch.fermionic[1]))
            }
            (ParseChart::Classical(ch), "dz") => Ok(ch.dz(e)),
            (ParseChart::Classical(ch), "dzb") => Ok(ch.dzb(e)),
            _ => Err(ParseError::Internal {
                msg: format!("operator {op} not available on this chart"),
            }),
        }
    }
}

/// Parse failure with source location.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("unknown symbol `{name}` at {line}:{col}")]
    UnknownSymbol { name: String, line: usize, col: usize },
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { msg: String, line: usize, col: usize },
    #[error("arity mismatch for `{name}` at {line}:{col}: declared {declared}, given {given}")]
    Arity {
        name: String,
        line: usize,
        col: usize,
        declared: usize,
        given: usize,
    },
    #[error("expression error at {line}:{col}: {source}")]
    Engine {
        line: usize,
        col: usize,
        source: EngineError,
    },
    #[error("internal parser error: {msg}")]
    Internal { msg: String },
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(u64),
    Imag,
    Symbol(String),
    Operator(String),
    Exp,
    Log,
    Tilde,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Semi,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn tokenize(ctx: &ParserContext, text: &str) -> Result<Vec<Spanned>, ParseError> {
    let ops = ctx.operators();
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut rest = text;
    while !rest.is_empty() {
        let c = rest.chars().next().unwrap();
        if c == '\n' {
            line += 1;
            col = 1;
            rest = &rest[1..];
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            rest = &rest[c.len_utf8()..];
            continue;
        }
        let here = (line, col);
        let punct = |t: Tok| Spanned {
            tok: t,
            line: here.0,
            col: here.1,
        };
        // a match that stops mid-identifier does not count: declared `phi`
        // must not split `phi1`
        let clean = |len: usize| -> bool {
            len > 0
                && !(rest[..len].ends_with(ident_char) && rest[len..].starts_with(ident_char))
        };
        // maximal munch over declared symbols and reserved operator names;
        // ties go to the operator since its name is reserved
        let sym_len = ctx.table.munch(rest).map_or(0, |s| s.len());
        let sym_len = if clean(sym_len) { sym_len } else { 0 };
        let mut op_len = 0usize;
        for op in &ops {
            if rest.starts_with(op) && op.len() > op_len && clean(op.len()) {
                op_len = op.len();
            }
        }
        if op_len >= sym_len && op_len > 0 {
            out.push(punct(Tok::Operator(rest[..op_len].to_string())));
            col += op_len;
            rest = &rest[op_len..];
            continue;
        }
        if sym_len > 0 {
            out.push(punct(Tok::Symbol(rest[..sym_len].to_string())));
            col += sym_len;
            rest = &rest[sym_len..];
            continue;
        }
        if rest.starts_with("exp") && clean(3) {
            out.push(punct(Tok::Exp));
            col += 3;
            rest = &rest[3..];
            continue;
        }
        if rest.starts_with("log") && clean(3) {
            out.push(punct(Tok::Log));
            col += 3;
            rest = &rest[3..];
            continue;
        }
        if c == 'i' && clean(1) {
            out.push(punct(Tok::Imag));
            col += 1;
            rest = &rest[1..];
            continue;
        }
        if c.is_ascii_digit() {
            let len = rest.chars().take_while(|c| c.is_ascii_digit()).count();
            if !clean(len) {
                return Err(ParseError::Syntax {
                    msg: format!("malformed number at `{}`", &rest[..len + 1]),
                    line: here.0,
                    col: here.1,
                });
            }
            let n: u64 = rest[..len].parse().map_err(|_| ParseError::Syntax {
                msg: format!("number `{}` out of range", &rest[..len]),
                line: here.0,
                col: here.1,
            })?;
            out.push(punct(Tok::Num(n)));
            col += len;
            rest = &rest[len..];
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let len = rest.chars().take_while(|ch| ident_char(*ch)).count();
            return Err(ParseError::UnknownSymbol {
                name: rest[..len].to_string(),
                line: here.0,
                col: here.1,
            });
        }
        let tok = match c {
            '~' => Tok::Tilde,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            _ => {
                return Err(ParseError::Syntax {
                    msg: format!("unexpected character `{c}`"),
                    line: here.0,
                    col: here.1,
                });
            }
        };
        out.push(punct(tok));
        col += c.len_utf8();
        rest = &rest[c.len_utf8()..];
    }
    Ok(out)
}

struct Parser<'a> {
    ctx: &'a ParserContext,
    toks: Vec<Spanned>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map(|s| (s.line, s.col))
            .unwrap_or((1, 1))
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::Syntax {
            msg: msg.into(),
            line,
            col,
        }
    }

    fn engine(&self, source: EngineError) -> ParseError {
        let (line, col) = self.here();
        ParseError::Engine { line, col, source }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        match self.next() {
            Some(s) if s.tok == tok => Ok(()),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.syntax(format!("expected {what}")))
            }
        }
    }

    fn expr(&mut self) -> Result<GradedExpr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().map(|s| s.tok.clone()) {
                Some(Tok::Plus) => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.next();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<GradedExpr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().map(|s| s.tok.clone()) {
                Some(Tok::Star) => {
                    self.next();
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.next();
                    let d = self.unary()?;
                    let inv = invert(&d).map_err(|e| self.engine(e))?;
                    acc = acc.mul(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<GradedExpr, ParseError> {
        if matches!(self.peek().map(|s| s.tok.clone()), Some(Tok::Minus)) {
            self.next();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<GradedExpr, ParseError> {
        let base = self.primary()?;
        if !matches!(self.peek().map(|s| s.tok.clone()), Some(Tok::Caret)) {
            return Ok(base);
        }
        self.next();
        // integer exponent (optionally negative) or a parenthesized even
        // expression, which routes through exp(q*log(base))
        let neg = if matches!(self.peek().map(|s| s.tok.clone()), Some(Tok::Minus)) {
            self.next();
            true
        } else {
            false
        };
        match self.peek().map(|s| s.tok.clone()) {
            Some(Tok::Num(n)) => {
                self.next();
                let p = base.powi(n as u32);
                if neg {
                    invert(&p).map_err(|e| self.engine(e))
                } else {
                    Ok(p)
                }
            }
            Some(Tok::LParen) => {
                self.next();
                let mut q = self.expr()?;
                self.expect(Tok::RParen, "`)` after exponent")?;
                if neg {
                    q = q.neg();
                }
                symbolic_power(&base, &q).map_err(|e| self.engine(e))
            }
            _ => Err(self.syntax("expected integer or parenthesized exponent after `^`")),
        }
    }

    fn primary(&mut self) -> Result<GradedExpr, ParseError> {
        let s = match self.next() {
            Some(s) => s,
            None => return Err(self.syntax("unexpected end of input")),
        };
        match s.tok {
            Tok::Num(n) => Ok(GradedExpr::int(n as i64)),
            Tok::Imag => Ok(GradedExpr::i()),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Minus => {
                // unary minus can also reach primary through exponent slots
                Ok(self.unary()?.neg())
            }
            Tok::Operator(op) => {
                self.expect(Tok::LParen, "`(` after derivative operator")?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                self.ctx.apply_operator(&op, &e)
            }
            Tok::Exp => {
                self.expect(Tok::LParen, "`(` after exp")?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                e.exp_series().map_err(|e| self.engine(e))
            }
            Tok::Log => {
                self.expect(Tok::LParen, "`(` after log")?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                log_of(&e).map_err(|e| self.engine(e))
            }
            Tok::Tilde => match self.next() {
                Some(Spanned {
                    tok: Tok::Symbol(name),
                    ..
                }) => self.symbol(&name, true),
                _ => Err(self.syntax("expected odd symbol name after `~`")),
            },
            Tok::Symbol(name) => self.symbol(&name, false),
            other => Err(self.syntax(format!("unexpected token {other:?}"))),
        }
    }

    fn symbol(&mut self, name: &str, tilde: bool) -> Result<GradedExpr, ParseError> {
        let decl = match self.ctx.table.get(name) {
            Some(d) => d.clone(),
            None => {
                let (line, col) = self.here();
                return Err(ParseError::UnknownSymbol {
                    name: name.to_string(),
                    line,
                    col,
                });
            }
        };
        let is_odd_marked = matches!(decl.kind, SymbolKind::OddConst | SymbolKind::OddFn { .. });
        if tilde != is_odd_marked {
            return Err(self.syntax(if tilde {
                format!("`{name}` is not an odd constant or odd function")
            } else {
                format!("odd symbol `{name}` must be written `~{name}`")
            }));
        }
        match decl.kind.clone() {
            SymbolKind::Coord => Ok(GradedExpr::atom(Atom::Coord(decl.name))),
            SymbolKind::OddCoord => Ok(GradedExpr::atom(Atom::OddCoord(decl.name))),
            SymbolKind::DepVar => Ok(GradedExpr::atom(Atom::DepVar(decl.name))),
            SymbolKind::EvenConst => Ok(GradedExpr::atom(Atom::EvenConst(ConstData {
                name: decl.name,
                bodiless: decl.bodiless,
                nilpotent: decl.nilpotent,
            }))),
            SymbolKind::OddConst => Ok(GradedExpr::atom(Atom::OddConst(ConstData {
                name: decl.name,
                bodiless: true,
                nilpotent: Some(2),
            }))),
            SymbolKind::EvenFn { args } => {
                let data = self.fn_call(&decl, &args)?;
                Ok(GradedExpr::atom(Atom::EvenFn(data)))
            }
            SymbolKind::OddFn { args } => {
                let data = self.fn_call(&decl, &args)?;
                Ok(GradedExpr::atom(Atom::OddFn(data)))
            }
        }
    }

    /// Parses an optional `(args; derivs)` suffix; a bare name expands to
    /// the declared arguments with zero derivatives.
    fn fn_call(&mut self, decl: &SymbolDecl, arg_names: &[String]) -> Result<FnData, ParseError> {
        let arity = arg_names.len();
        let default_args = |ctx: &ParserContext| -> Result<Vec<GradedExpr>, ParseError> {
            arg_names
                .iter()
                .map(|a| match ctx.table.get(a) {
                    Some(d) => match d.kind {
                        SymbolKind::Coord => Ok(GradedExpr::atom(Atom::Coord(a.clone()))),
                        SymbolKind::OddCoord => Ok(GradedExpr::atom(Atom::OddCoord(a.clone()))),
                        _ => Ok(GradedExpr::atom(Atom::Coord(a.clone()))),
                    },
                    None => Ok(GradedExpr::atom(Atom::Coord(a.clone()))),
                })
                .collect()
        };
        if !matches!(self.peek().map(|s| s.tok.clone()), Some(Tok::LParen)) {
            return Ok(FnData {
                name: decl.name.clone(),
                args: default_args(self.ctx)?,
                deriv: vec![0; arity],
                bodiless: decl.bodiless,
                nilpotent: decl.nilpotent,
            });
        }
        self.next();
        let mut args = vec![self.expr()?];
        while matches!(self.peek().map(|s| s.tok.clone()), Some(Tok::Comma)) {
            self.next();
            args.push(self.expr()?);
        }
        let mut deriv = vec![0u32; args.len()];
        if matches!(self.peek().map(|s| s.tok.clone()), Some(Tok::Semi)) {
            self.next();
            deriv.clear();
            loop {
                match self.next() {
                    Some(Spanned {
                        tok: Tok::Num(n), ..
                    }) => deriv.push(n as u32),
                    _ => return Err(self.syntax("expected derivative count")),
                }
                if matches!(self.peek().map(|s| s.tok.clone()), Some(Tok::Comma)) {
                    self.next();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen, "`)` after function arguments")?;
        if args.len() != arity || deriv.len() != arity {
            let (line, col) = self.here();
            return Err(ParseError::Arity {
                name: decl.name.clone(),
                line,
                col,
                declared: arity,
                given: args.len(),
            });
        }
        Ok(FnData {
            name: decl.name.clone(),
            args,
            deriv,
            bodiless: decl.bodiless,
            nilpotent: decl.nilpotent,
        })
    }
}

/// Exact inverse: single-monomial inversion when possible, otherwise the
/// terminating geometric series.
pub fn invert(e: &GradedExpr) -> Result<GradedExpr, EngineError> {
    if e.terms().len() == 1 {
        e.inv_monomial()
    } else {
        e.inv_series()
    }
}

/// `log` of a single plain body-carrying atom.
fn log_of(e: &GradedExpr) -> Result<GradedExpr, EngineError> {
    let terms = e.terms();
    if terms.len() == 1
        && terms[0].coeff.is_one()
        && terms[0].odd.is_empty()
        && terms[0].bos.len() == 1
        && terms[0].bos[0].1 == 1
    {
        let atom = terms[0].bos[0].0.clone();
        if atom.body_carrying() {
            return Ok(GradedExpr::atom(Atom::Log(Box::new(atom))));
        }
    }
    Err(EngineError::BadOperand {
        op: "log",
        expected: "a single plain body-carrying atom",
        got: e.display(),
    })
}

/// `base^q` for symbolic even `q`: rewrites to `exp(q*log(base))`, so the
/// base must be a single plain body-carrying atom.
fn symbolic_power(base: &GradedExpr, q: &GradedExpr) -> Result<GradedExpr, EngineError> {
    match q.parity() {
        ParityClass::Even | ParityClass::Zero => {}
        p => {
            return Err(EngineError::NonEvenExpArgument {
                parity: p,
                expr: q.display(),
            })
        }
    }
    let lg = log_of(base)?;
    q.mul(&lg).exp_series()
}

/// Parses `text` into a canonical expression under `ctx`.
pub fn parse(ctx: &ParserContext, text: &str) -> Result<GradedExpr, ParseError> {
    let toks = tokenize(ctx, text)?;
    // an identifier-looking chunk that never matched is an unknown symbol;
    // find one for a precise error before generic parsing
    let mut p = Parser {
        ctx,
        toks,
        pos: 0,
    };
    if p.toks.is_empty() {
        return Err(ParseError::Syntax {
            msg: "empty expression".to_string(),
            line: 1,
            col: 1,
        });
    }
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.syntax("trailing input"));
    }
    Ok(e)
}

/// Scalar shorthand: parses a rational or Gaussian-rational literal such
/// as `-3/2` or `(1+2*i)/4` with no symbols, for data-table cells.
pub fn parse_scalar(text: &str) -> Result<GaussRat, ParseError> {
    let ctx = ParserContext {
        table: SymbolTable::new(),
        chart: ParseChart::Classical(ClassicalChart::standard()),
    };
    let e = parse(&ctx, text)?;
    let terms = e.terms();
    if terms.is_empty() {
        return Ok(GaussRat::zero());
    }
    if terms.len() == 1 && terms[0].bos.is_empty() && terms[0].odd.is_empty() {
        return Ok(terms[0].coeff.clone());
    }
    Err(ParseError::Syntax {
        msg: format!("`{text}` is not a scalar"),
        line: 1,
        col: 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randgen::random_mixed_superfield;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx_with_fields() -> ParserContext {
        let mut ctx = ParserContext::standard();
        ctx.table.declare_even_fn("u", &["x+", "x-"], false, None);
        ctx.table.declare_odd_fn("g", &["x+"]);
        ctx.table.declare_even_const("a", false, None);
        ctx.table.declare_odd_const("k1");
        ctx
    }

    #[test]
    fn tokenizer_resolves_coordinate_names_by_maximal_munch() {
        let ctx = ctx_with_fields();
        let sum = parse(&ctx, "x+ + x-").unwrap();
        assert_eq!(sum.display(), "x+ + x-");
        let single = parse(&ctx, "x+^2").unwrap();
        assert_eq!(single.display(), "x+^2");
    }

    #[test]
    fn grassmann_squares_vanish_in_surface_syntax() {
        let ctx = ctx_with_fields();
        assert!(parse(&ctx, "th+^2").unwrap().is_zero());
        assert!(parse(&ctx, "th+*th+").unwrap().is_zero());
        let e = parse(&ctx, "th+*th- + th-*th+").unwrap();
        assert!(e.is_zero());
    }

    #[test]
    fn derivative_operators_apply_during_parsing() {
        let ctx = ctx_with_fields();
        let e = parse(&ctx, "D+(th+*th-)").unwrap();
        assert_eq!(e, parse(&ctx, "th-").unwrap());
        let j = parse(&ctx, "J+(x+)").unwrap();
        assert_eq!(j, parse(&ctx, "i*th+").unwrap());
    }

    #[test]
    fn function_calls_with_derivative_indices() {
        let ctx = ctx_with_fields();
        let bare = parse(&ctx, "u").unwrap();
        let full = parse(&ctx, "u(x+,x-)").unwrap();
        assert_eq!(bare, full);
        let dd = parse(&ctx, "dx+(u)").unwrap();
        assert_eq!(dd, parse(&ctx, "u(x+,x-;1,0)").unwrap());
        assert!(matches!(
            parse(&ctx, "u(x+)"),
            Err(ParseError::Arity { .. })
        ));
    }

    #[test]
    fn tilde_marks_odd_symbols() {
        let ctx = ctx_with_fields();
        let k = parse(&ctx, "~k1").unwrap();
        assert!(k.mul(&k).is_zero());
        assert!(parse(&ctx, "k1").is_err());
        assert!(parse(&ctx, "~a").is_err());
        let g = parse(&ctx, "~g(x+)").unwrap();
        assert_eq!(g.display(), "~g(x+)");
    }

    #[test]
    fn division_and_symbolic_powers() {
        let ctx = ctx_with_fields();
        let half_x = parse(&ctx, "x+/2").unwrap();
        assert_eq!(half_x.display(), "1/2*x+");
        let inv = parse(&ctx, "1/(2*x+)").unwrap();
        assert_eq!(inv.display(), "1/2*x+^-1");
        let sym = parse(&ctx, "x+^(a)").unwrap();
        assert_eq!(sym.display(), "exp(a*log(x+))");
        let shifted = parse(&ctx, "x+^(a-1)").unwrap();
        assert_eq!(shifted, parse(&ctx, "x+^(a)/x+").unwrap());
        let frac = parse(&ctx, "x+^(-1/2)").unwrap();
        assert_eq!(
            frac.mul(&frac),
            parse(&ctx, "1/x+").unwrap()
        );
    }

    #[test]
    fn exp_of_odd_rejected_with_location() {
        let ctx = ctx_with_fields();
        let err = parse(&ctx, "exp(th+)").unwrap_err();
        assert!(matches!(err, ParseError::Engine { .. }));
    }

    #[test]
    fn unknown_symbol_reported() {
        let ctx = ctx_with_fields();
        let err = parse(&ctx, "x+ * w").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains('w'), "{msg}");
    }

    #[test]
    fn display_round_trips_random_expressions() {
        let mut ctx = ParserContext::standard();
        ctx.table.declare_even_fn("u", &["x+", "x-"], false, None);
        ctx.table.declare_odd_fn("p", &["x+"]);
        ctx.table.declare_odd_fn("q", &["x-"]);
        ctx.table.declare_odd_const("a1");
        ctx.table.declare_odd_const("a2");
        ctx.table.declare_even_const("k", false, None);
        ctx.table.declare_even_const("m", false, None);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..200 {
            let e = random_mixed_superfield(&mut rng);
            let printed = e.display();
            let back = parse(&ctx, &printed)
                .unwrap_or_else(|err| panic!("reparse of `{printed}` failed: {err}"));
            assert_eq!(back, e, "round trip changed `{printed}`");
        }
    }

    #[test]
    fn classical_chart_operators() {
        let mut ctx = ParserContext::classical();
        ctx.table.declare_even_fn("u", &["z", "zb"], false, None);
        let e = parse(&ctx, "dz(dzb(u))").unwrap();
        assert_eq!(e, parse(&ctx, "u(z,zb;1,1)").unwrap());
    }
}
