//! Canonical graded expressions over a Grassmann algebra with unbounded
//! generators: exact Gaussian-rational coefficients, commuting (bosonic)
//! atoms with integer powers, and anticommuting (odd) atoms whose sorted
//! order absorbs permutation signs into the coefficient.
//!
//! Every public operation returns fully canonical values, so structural
//! equality is mathematical equality.

use crate::scalar::GaussRat;
use num::{BigRational, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Grading of an atom or homogeneous expression.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Parity {
    Even,
    Odd,
}

/// Parity classification of a whole expression.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ParityClass {
    Zero,
    Even,
    Odd,
    Mixed,
}

/// An opaque function application: named head, expression arguments, and a
/// derivative multi-index aligned with the arguments.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct FnData {
    pub name: String,
    pub args: Vec<GradedExpr>,
    pub deriv: Vec<u32>,
    pub bodiless: bool,
    pub nilpotent: Option<u32>,
}

/// A named constant (even or odd depending on the enclosing variant).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ConstData {
    pub name: String,
    pub bodiless: bool,
    pub nilpotent: Option<u32>,
}

/// The atom alphabet. Variant order fixes the canonical atom order:
/// even atoms sort before one another by variant rank then payload, and the
/// odd ranks order independent fermionic coordinates before displacement
/// symbols, odd functions, and fermionic constants.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Atom {
    /// Independent bosonic coordinate (`x+`, `x-`, `z`, `zb`).
    Coord(String),
    /// Declared even combination of coordinates (a symmetry variable).
    DepVar(String),
    /// Formal even square of a displacement symbol (`dp2`, `dm2`).
    DispSquare(String),
    EvenFn(FnData),
    EvenConst(ConstData),
    /// Formal logarithm of a single even body-carrying atom.
    Log(Box<Atom>),
    /// Exponential atom with an even argument.
    Exp(Box<GradedExpr>),
    /// Independent fermionic coordinate (`th+`, `th-`).
    OddCoord(String),
    /// Displacement symbol (`d+`, `d-`).
    Disp(String),
    OddFn(FnData),
    OddConst(ConstData),
}

impl Atom {
    pub fn coord(name: &str) -> Self {
        Atom::Coord(name.to_string())
    }
    pub fn dep(name: &str) -> Self {
        Atom::DepVar(name.to_string())
    }
    pub fn odd_coord(name: &str) -> Self {
        Atom::OddCoord(name.to_string())
    }
    pub fn even_const(name: &str) -> Self {
        Atom::EvenConst(ConstData {
            name: name.to_string(),
            bodiless: false,
            nilpotent: None,
        })
    }
    pub fn odd_const(name: &str) -> Self {
        Atom::OddConst(ConstData {
            name: name.to_string(),
            bodiless: true,
            nilpotent: Some(2),
        })
    }
    pub fn even_fn(name: &str, args: Vec<GradedExpr>, deriv: Vec<u32>) -> Self {
        Atom::EvenFn(FnData {
            name: name.to_string(),
            args,
            deriv,
            bodiless: false,
            nilpotent: None,
        })
    }
    pub fn odd_fn(name: &str, args: Vec<GradedExpr>, deriv: Vec<u32>) -> Self {
        Atom::OddFn(FnData {
            name: name.to_string(),
            args,
            deriv,
            bodiless: true,
            nilpotent: Some(2),
        })
    }

    pub fn parity(&self) -> Parity {
        match self {
            Atom::Coord(_)
            | Atom::DepVar(_)
            | Atom::DispSquare(_)
            | Atom::EvenFn(_)
            | Atom::EvenConst(_)
            | Atom::Log(_)
            | Atom::Exp(_) => Parity::Even,
            Atom::OddCoord(_) | Atom::Disp(_) | Atom::OddFn(_) | Atom::OddConst(_) => Parity::Odd,
        }
    }

    /// True when the atom has a nonzero body (invertibility prerequisite).
    pub fn body_carrying(&self) -> bool {
        match self {
            Atom::Coord(_) | Atom::DepVar(_) | Atom::Log(_) | Atom::Exp(_) => true,
            Atom::DispSquare(_) | Atom::OddCoord(_) | Atom::Disp(_) => false,
            Atom::EvenFn(f) | Atom::OddFn(f) => !f.bodiless,
            Atom::EvenConst(c) | Atom::OddConst(c) => !c.bodiless,
        }
    }

    /// Declared finite nilpotency degree, if any.
    pub fn nilpotency(&self) -> Option<u32> {
        match self {
            Atom::DispSquare(_) => Some(2),
            Atom::EvenFn(f) | Atom::OddFn(f) => f.nilpotent,
            Atom::EvenConst(c) | Atom::OddConst(c) => c.nilpotent,
            _ => None,
        }
    }

    /// Recursively checks whether `target` occurs anywhere inside this atom.
    pub fn mentions(&self, target: &Atom) -> bool {
        if self == target {
            return true;
        }
        match self {
            Atom::EvenFn(f) | Atom::OddFn(f) => f.args.iter().any(|a| a.mentions_atom(target)),
            Atom::Log(inner) => inner.mentions(target),
            Atom::Exp(e) => e.mentions_atom(target),
            _ => false,
        }
    }
}

/// One canonical term: an exact coefficient, sorted bosonic factors with
/// nonzero integer powers, and a strictly increasing odd-atom sequence.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Monomial {
    pub coeff: GaussRat,
    pub bos: Vec<(Atom, i64)>,
    pub odd: Vec<Atom>,
}

impl Monomial {
    pub fn scalar(c: GaussRat) -> Self {
        Monomial {
            coeff: c,
            bos: vec![],
            odd: vec![],
        }
    }

    pub fn degree(&self) -> i64 {
        let b: i64 = self.bos.iter().map(|(_, p)| p.abs()).sum();
        b + self.odd.len() as i64
    }

    /// True when the term has no odd atoms and every factor carries body.
    pub fn pure_body(&self) -> bool {
        self.odd.is_empty() && self.bos.iter().all(|(a, _)| a.body_carrying())
    }

    /// True when some factor forces nilpotency (odd atom, or an even atom
    /// with a declared finite nilpotency degree).
    pub fn provably_nilpotent(&self) -> bool {
        !self.odd.is_empty() || self.bos.iter().any(|(a, _)| a.nilpotency().is_some())
    }

    fn key_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.odd.cmp(&other.odd))
            .then_with(|| self.bos.cmp(&other.bos))
    }
}

/// A canonical graded expression: a sorted sum of monomials with distinct
/// keys and nonzero coefficients.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct GradedExpr {
    terms: Vec<Monomial>,
}

#[derive(Error, Debug)]
pub enum EngineError {
    #[error("exponential argument must be even, got parity {parity:?}: {expr}")]
    NonEvenExpArgument { parity: ParityClass, expr: String },
    #[error("soul part is not provably nilpotent (term `{term}` has no odd atom and no declared nilpotency degree)")]
    UnverifiableNilpotency { term: String },
    #[error("bosonic factor `{atom}` depends on odd atom `{odd}`; fermionic derivative undefined here")]
    OddDependentBosonic { atom: String, odd: String },
    #[error("expression is not an invertible monomial: {expr}")]
    NotInvertible { expr: String },
    #[error("substitution for `{atom}` changes parity")]
    ParityMismatch { atom: String },
    #[error("cannot substitute inside `{atom}`: mapped atom `{target}` occurs in a rigid position")]
    RigidSubstitution { atom: String, target: String },
    #[error("derivative with respect to `{atom}` requires an independent coordinate or declared atom")]
    BadDerivativeTarget { atom: String },
    #[error("{op} expects {expected}, got {got}")]
    BadOperand {
        op: &'static str,
        expected: &'static str,
        got: String,
    },
}

fn inv_factorial(k: u64) -> GaussRat {
    let mut f = BigRational::from_integer(1.into());
    for j in 2..=k {
        f *= BigRational::from_integer(j.into());
    }
    GaussRat::from_rational(f.recip())
}

/// Merges a power into a sorted bosonic factor list.
fn merge_power(bos: &mut Vec<(Atom, i64)>, atom: Atom, pow: i64) {
    if pow == 0 {
        return;
    }
    match bos.binary_search_by(|(a, _)| a.cmp(&atom)) {
        Ok(i) => {
            bos[i].1 += pow;
            if bos[i].1 == 0 {
                bos.remove(i);
            }
        }
        Err(i) => bos.insert(i, (atom, pow)),
    }
}

/// Sorts raw bosonic factors, merging duplicates and dropping zero powers.
fn sort_merge_bos(raw: Vec<(Atom, i64)>) -> Vec<(Atom, i64)> {
    let mut out: Vec<(Atom, i64)> = Vec::with_capacity(raw.len());
    for (a, p) in raw {
        merge_power(&mut out, a, p);
    }
    out
}

/// Sorts raw odd atoms, returning the permutation sign, or `None` when an
/// atom repeats (the term vanishes).
fn sort_odd(raw: Vec<Atom>) -> Option<(Vec<Atom>, i32)> {
    let mut v = raw;
    let mut sign = 1i32;
    // insertion sort, counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, sign))
}

/// Merges two sorted odd sequences, returning `None` on a repeat and the
/// Koszul sign of the interleaving otherwise.
fn merge_odd(a: &[Atom], b: &[Atom]) -> Option<(Vec<Atom>, i32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut sign = 1i32;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => return None,
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                // b[j] crosses the remaining a-atoms
                if (a.len() - i) % 2 == 1 {
                    sign = -sign;
                }
                out.push(b[j].clone());
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, sign))
}

impl GradedExpr {
    pub fn zero() -> Self {
        GradedExpr { terms: vec![] }
    }

    pub fn one() -> Self {
        GradedExpr::scalar(GaussRat::one())
    }

    pub fn scalar(c: GaussRat) -> Self {
        if c.is_zero() {
            return GradedExpr::zero();
        }
        GradedExpr {
            terms: vec![Monomial::scalar(c)],
        }
    }

    pub fn int(n: i64) -> Self {
        GradedExpr::scalar(GaussRat::from_int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        GradedExpr::scalar(GaussRat::from_ratio(num, den))
    }

    pub fn i() -> Self {
        GradedExpr::scalar(GaussRat::i())
    }

    pub fn atom(a: Atom) -> Self {
        let m = match a.parity() {
            Parity::Even => Monomial {
                coeff: GaussRat::one(),
                bos: vec![(a, 1)],
                odd: vec![],
            },
            Parity::Odd => Monomial {
                coeff: GaussRat::one(),
                bos: vec![],
                odd: vec![a],
            },
        };
        GradedExpr::from_raw(vec![m])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn parity(&self) -> ParityClass {
        if self.terms.is_empty() {
            return ParityClass::Zero;
        }
        let mut even = false;
        let mut odd = false;
        for t in &self.terms {
            if t.odd.len() % 2 == 0 {
                even = true;
            } else {
                odd = true;
            }
        }
        match (even, odd) {
            (true, false) => ParityClass::Even,
            (false, true) => ParityClass::Odd,
            _ => ParityClass::Mixed,
        }
    }

    /// True when `target` occurs anywhere in the expression.
    pub fn mentions_atom(&self, target: &Atom) -> bool {
        self.terms.iter().any(|t| {
            t.bos.iter().any(|(a, _)| a.mentions(target)) || t.odd.iter().any(|a| a.mentions(target))
        })
    }

    /// Builds a canonical expression from arbitrary raw monomials.
    pub fn from_raw(monos: Vec<Monomial>) -> Self {
        let mut out: Vec<Monomial> = Vec::with_capacity(monos.len());
        for m in monos {
            canonize_into(m, &mut out);
        }
        GradedExpr::merge_sorted(out)
    }

    fn merge_sorted(mut monos: Vec<Monomial>) -> Self {
        monos.sort_by(|a, b| a.key_cmp(b));
        let mut terms: Vec<Monomial> = Vec::with_capacity(monos.len());
        for m in monos {
            if let Some(last) = terms.last_mut() {
                if last.key_cmp(&m) == std::cmp::Ordering::Equal {
                    last.coeff = last.coeff.add(&m.coeff);
                    continue;
                }
            }
            terms.push(m);
        }
        terms.retain(|m| !m.coeff.is_zero());
        GradedExpr { terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        // both inputs are canonical; merge and combine equal keys
        let mut all = Vec::with_capacity(self.terms.len() + other.terms.len());
        all.extend(self.terms.iter().cloned());
        all.extend(other.terms.iter().cloned());
        GradedExpr::merge_sorted(all)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|m| Monomial {
                coeff: m.coeff.neg(),
                bos: m.bos.clone(),
                odd: m.odd.clone(),
            })
            .collect();
        GradedExpr { terms }
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        if c.is_zero() {
            return GradedExpr::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|m| Monomial {
                coeff: m.coeff.mul(c),
                bos: m.bos.clone(),
                odd: m.odd.clone(),
            })
            .collect();
        GradedExpr { terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                if let Some(m) = mul_mono(a, b) {
                    raw.push(m);
                }
            }
        }
        GradedExpr::from_raw(raw)
    }

    /// Product of a slice of factors, left to right.
    pub fn product(factors: &[GradedExpr]) -> Self {
        let mut acc = GradedExpr::one();
        for f in factors {
            acc = acc.mul(f);
        }
        acc
    }

    /// Small non-negative integer power by repeated multiplication.
    pub fn powi(&self, n: u32) -> Self {
        let mut acc = GradedExpr::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact inverse of a single invertible monomial (no odd atoms, nonzero
    /// coefficient, every factor body-carrying).
    pub fn inv_monomial(&self) -> Result<Self, EngineError> {
        if self.terms.len() != 1 {
            return Err(EngineError::NotInvertible {
                expr: self.display(),
            });
        }
        let m = &self.terms[0];
        if !m.odd.is_empty() || !m.bos.iter().all(|(a, _)| a.body_carrying()) {
            return Err(EngineError::NotInvertible {
                expr: self.display(),
            });
        }
        let inv = Monomial {
            coeff: m.coeff.inv(),
            bos: m.bos.iter().map(|(a, p)| (a.clone(), -p)).collect(),
            odd: vec![],
        };
        Ok(GradedExpr::from_raw(vec![inv]))
    }

    /// Exact inverse of `M(1+s)` where the body part is a single invertible
    /// monomial `M` and the soul `s` is provably nilpotent: the geometric
    /// series terminates. Errors otherwise.
    pub fn inv_series(&self) -> Result<Self, EngineError> {
        let (body, soul) = self.split_body_soul();
        let m_inv = body.inv_monomial()?;
        if soul.is_zero() {
            return Ok(m_inv);
        }
        let s = m_inv.mul(&soul);
        if let Some(bad) = s.terms.iter().find(|m| !m.provably_nilpotent()) {
            return Err(EngineError::UnverifiableNilpotency {
                term: display_monomial(bad, false),
            });
        }
        let mut acc = GradedExpr::one();
        let mut pw = GradedExpr::one();
        let mut k = 0u32;
        loop {
            k += 1;
            pw = pw.mul(&s).neg();
            if pw.is_zero() {
                break;
            }
            acc = acc.add(&pw);
            assert!(k < 128, "nilpotent inverse series failed to terminate");
        }
        Ok(acc.mul(&m_inv))
    }

    /// Splits into (pure-body part, soul part).
    pub fn split_body_soul(&self) -> (GradedExpr, GradedExpr) {
        let (body, soul): (Vec<_>, Vec<_>) =
            self.terms.iter().cloned().partition(|m| m.pure_body());
        (GradedExpr { terms: body }, GradedExpr { terms: soul })
    }

    /// Exact exponential: `exp(body)` stays an atom, the nilpotent soul is
    /// expanded as a terminating series. Errors when the argument is not
    /// even or the soul is not provably nilpotent.
    pub fn exp_series(&self) -> Result<GradedExpr, EngineError> {
        match self.parity() {
            ParityClass::Even | ParityClass::Zero => {}
            p => {
                return Err(EngineError::NonEvenExpArgument {
                    parity: p,
                    expr: self.display(),
                })
            }
        }
        let (_, soul) = self.split_body_soul();
        if let Some(bad) = soul.terms.iter().find(|m| !m.provably_nilpotent()) {
            return Err(EngineError::UnverifiableNilpotency {
                term: display_monomial(bad, false),
            });
        }
        let m = Monomial {
            coeff: GaussRat::one(),
            bos: vec![(Atom::Exp(Box::new(self.clone())), 1)],
            odd: vec![],
        };
        Ok(GradedExpr::from_raw(vec![m]))
    }
}

/// Terminating series `1 + s + s^2/2! + ...` for provably nilpotent `s`.
fn exp_nilpotent(soul: &GradedExpr) -> GradedExpr {
    let mut acc = GradedExpr::one();
    let mut pw = GradedExpr::one();
    let mut k: u64 = 0;
    loop {
        k += 1;
        pw = pw.mul(soul);
        if pw.is_zero() {
            break;
        }
        acc = acc.add(&pw.scale(&inv_factorial(k)));
        assert!(k < 128, "nilpotent exponential series failed to terminate");
    }
    acc
}

fn mul_mono(a: &Monomial, b: &Monomial) -> Option<Monomial> {
    let coeff = a.coeff.mul(&b.coeff);
    if coeff.is_zero() {
        return None;
    }
    let (odd, sign) = merge_odd(&a.odd, &b.odd)?;
    let mut bos = a.bos.clone();
    for (atom, p) in &b.bos {
        merge_power(&mut bos, atom.clone(), *p);
    }
    let coeff = if sign < 0 { coeff.neg() } else { coeff };
    Some(Monomial { coeff, bos, odd })
}

/// Canonicalizes one raw monomial, appending the resulting terms.
fn canonize_into(mut m: Monomial, out: &mut Vec<Monomial>) {
    if m.coeff.is_zero() {
        return;
    }
    m.bos = sort_merge_bos(std::mem::take(&mut m.bos));
    match sort_odd(std::mem::take(&mut m.odd)) {
        None => return,
        Some((odd, sign)) => {
            m.odd = odd;
            if sign < 0 {
                m.coeff = m.coeff.neg();
            }
        }
    }
    // declared nilpotency: kill saturated powers, reject inverse of nilpotent
    for (a, p) in &m.bos {
        if let Some(d) = a.nilpotency() {
            assert!(*p > 0, "negative power of nilpotent atom {a:?}");
            if *p >= d as i64 {
                return;
            }
        }
        debug_assert!(
            a.parity() == Parity::Even,
            "odd atom in bosonic factor list"
        );
    }
    // exponential recombination
    let mut exps: Vec<(GradedExpr, i64)> = vec![];
    m.bos.retain(|(a, p)| {
        if let Atom::Exp(e) = a {
            exps.push(((**e).clone(), *p));
            false
        } else {
            true
        }
    });
    if exps.is_empty() {
        out.push(m);
        return;
    }
    let single_plain = exps.len() == 1 && exps[0].1 == 1;
    let mut arg = GradedExpr::zero();
    for (e, p) in exps {
        arg = arg.add(&e.scale(&GaussRat::from_int(p)));
    }
    // extract integer parts of rational multiples of logarithm atoms
    let mut extracted: Vec<(Atom, i64)> = vec![];
    let mut kept: Vec<Monomial> = Vec::with_capacity(arg.terms.len());
    for t in arg.terms {
        let is_log_mono = t.odd.is_empty()
            && t.bos.len() == 1
            && t.bos[0].1 == 1
            && t.coeff.is_real()
            && matches!(t.bos[0].0, Atom::Log(_));
        if is_log_mono {
            let c = t.coeff.re.clone();
            let n_big = c.floor().to_integer();
            if let Some(n) = n_big.to_i64() {
                let r = &c - BigRational::from_integer(n_big);
                if n != 0 {
                    if let Atom::Log(inner) = &t.bos[0].0 {
                        extracted.push(((**inner).clone(), n));
                    }
                }
                if !r.is_zero() {
                    let mut t2 = t.clone();
                    t2.coeff = GaussRat::from_rational(r);
                    kept.push(t2);
                }
                continue;
            }
        }
        kept.push(t);
    }
    let arg = GradedExpr { terms: kept };
    for (a, p) in extracted.iter() {
        merge_power(&mut m.bos, a.clone(), *p);
    }
    let (body, soul) = arg.split_body_soul();
    let expandable = soul.terms.iter().all(|t| t.provably_nilpotent());
    let changed = !single_plain || !extracted.is_empty() || (expandable && !soul.is_zero());
    if !changed {
        // already reduced; reinstate the single exponential atom
        if !arg.is_zero() {
            merge_power(&mut m.bos, Atom::Exp(Box::new(arg)), 1);
        }
        out.push(m);
        return;
    }
    let mut result = GradedExpr { terms: vec![m] };
    if expandable {
        if !body.is_zero() {
            let e = Monomial {
                coeff: GaussRat::one(),
                bos: vec![(Atom::Exp(Box::new(body)), 1)],
                odd: vec![],
            };
            result = result.mul(&GradedExpr { terms: vec![e] });
        }
        if !soul.is_zero() {
            result = result.mul(&exp_nilpotent(&soul));
        }
    } else if !arg.is_zero() {
        let e = Monomial {
            coeff: GaussRat::one(),
            bos: vec![(Atom::Exp(Box::new(arg)), 1)],
            odd: vec![],
        };
        result = result.mul(&GradedExpr { terms: vec![e] });
    }
    out.extend(result.terms);
}

// ---------------------------------------------------------------------------
// rendering
// ---------------------------------------------------------------------------

pub fn display_atom(a: &Atom) -> String {
    match a {
        Atom::Coord(n) | Atom::DepVar(n) | Atom::OddCoord(n) | Atom::Disp(n) => n.clone(),
        Atom::DispSquare(n) => match n.as_str() {
            "d+" => "dp2".to_string(),
            "d-" => "dm2".to_string(),
            other => format!("sq({other})"),
        },
        Atom::EvenConst(c) => c.name.clone(),
        Atom::OddConst(c) => format!("~{}", c.name),
        Atom::EvenFn(f) => display_fn(f, false),
        Atom::OddFn(f) => display_fn(f, true),
        Atom::Log(inner) => format!("log({})", display_atom(inner)),
        Atom::Exp(e) => format!("exp({})", e.display()),
    }
}

fn display_fn(f: &FnData, odd: bool) -> String {
    let tilde = if odd { "~" } else { "" };
    let args: Vec<String> = f.args.iter().map(|a| a.display()).collect();
    if f.deriv.iter().all(|d| *d == 0) {
        format!("{tilde}{}({})", f.name, args.join(","))
    } else {
        let ds: Vec<String> = f.deriv.iter().map(|d| d.to_string()).collect();
        format!("{tilde}{}({};{})", f.name, args.join(","), ds.join(","))
    }
}

fn display_monomial(m: &Monomial, lead: bool) -> String {
    let mut factors: Vec<String> = Vec::new();
    for (a, p) in &m.bos {
        if *p == 1 {
            factors.push(display_atom(a));
        } else {
            factors.push(format!("{}^{}", display_atom(a), p));
        }
    }
    for a in &m.odd {
        factors.push(display_atom(a));
    }
    let coeff = &m.coeff;
    if factors.is_empty() {
        return if lead {
            coeff.display()
        } else {
            coeff.display()
        };
    }
    let body = factors.join("*");
    if coeff.is_one() {
        body
    } else if coeff.eq(&GaussRat::from_int(-1)) {
        format!("-{body}")
    } else {
        format!("{}*{}", coeff.display(), body)
    }
}

impl GradedExpr {
    /// Deterministic text form; terms in canonical order.
    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = display_monomial(&self.terms[0], true);
        for m in &self.terms[1..] {
            let rendered = display_monomial(m, false);
            if let Some(rest) = rendered.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(&rendered);
            }
        }
        s
    }
}

impl std::fmt::Display for GradedExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.display())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th(p: &str) -> GradedExpr {
        GradedExpr::atom(Atom::odd_coord(p))
    }

    #[test]
    fn odd_atoms_anticommute_and_square_to_zero() {
        let tp = th("th+");
        let tm = th("th-");
        assert_eq!(tp.mul(&tm), tm.mul(&tp).neg());
        assert!(tp.mul(&tp).is_zero());
    }

    #[test]
    fn permutation_sign_absorbed_into_coefficient() {
        // th- * th+ == -(th+ * th-)
        let tp = Atom::odd_coord("th+");
        let tm = Atom::odd_coord("th-");
        let raw = Monomial {
            coeff: GaussRat::one(),
            bos: vec![],
            odd: vec![tm.clone(), tp.clone()],
        };
        let e = GradedExpr::from_raw(vec![raw]);
        let expected = GradedExpr::from_raw(vec![Monomial {
            coeff: GaussRat::from_int(-1),
            bos: vec![],
            odd: vec![tp, tm],
        }]);
        assert_eq!(e, expected);
    }

    #[test]
    fn supercommutativity_of_scalars() {
        let a = GradedExpr::atom(Atom::even_const("a"));
        let b = GradedExpr::atom(Atom::even_const("b"));
        let c = GradedExpr::atom(Atom::odd_const("c0"));
        let g = th("th-").mul(&b);
        // odd * odd anticommutes
        let f_odd = th("th+").mul(&a);
        assert_eq!(f_odd.mul(&g), g.mul(&f_odd).neg());
        // a product of two odd factors is even and commutes
        let f_even = th("th+").mul(&c);
        assert_eq!(f_even.mul(&g), g.mul(&f_even));
    }

    #[test]
    fn exponentials_merge_and_cancel() {
        let x = GradedExpr::atom(Atom::coord("x+"));
        let ex = x.exp_series().unwrap();
        let emx = x.neg().exp_series().unwrap();
        assert_eq!(ex.mul(&emx), GradedExpr::one());
        let e2 = ex.mul(&ex);
        assert_eq!(e2, x.scale(&GaussRat::from_int(2)).exp_series().unwrap());
    }

    #[test]
    fn log_integer_extraction() {
        // exp(5/2 * log(x)) == x^2 * exp(1/2 * log(x))
        let xa = Atom::coord("x+");
        let l = GradedExpr::atom(Atom::Log(Box::new(xa.clone())));
        let e = l.scale(&GaussRat::from_ratio(5, 2)).exp_series().unwrap();
        let half = l.scale(&GaussRat::from_ratio(1, 2)).exp_series().unwrap();
        let x2 = GradedExpr::from_raw(vec![Monomial {
            coeff: GaussRat::one(),
            bos: vec![(xa, 2)],
            odd: vec![],
        }]);
        assert_eq!(e, x2.mul(&half));
    }

    #[test]
    fn log_negative_extraction_routes_agree() {
        // x^-1 * exp((a-1)*log(x)) == exp((a-2)*log(x)) after extraction
        let xa = Atom::coord("x+");
        let a = GradedExpr::atom(Atom::even_const("a"));
        let l = GradedExpr::atom(Atom::Log(Box::new(xa.clone())));
        let route1 = {
            let xinv = GradedExpr::from_raw(vec![Monomial {
                coeff: GaussRat::one(),
                bos: vec![(xa.clone(), -1)],
                odd: vec![],
            }]);
            let e = a.mul(&l).sub(&l).exp_series().unwrap();
            xinv.mul(&e)
        };
        let route2 = a.mul(&l).sub(&l.scale(&GaussRat::from_int(2))).exp_series().unwrap();
        assert_eq!(route1, route2);
    }

    #[test]
    fn exp_of_superfield_expands_soul() {
        // exp(u + th+ g + th- d + th+ th- v)
        //   == exp(u)(1 + th+ g + th- d + th+ th- (v - g d))
        let u = GradedExpr::atom(Atom::even_fn("u", vec![], vec![]));
        let g = GradedExpr::atom(Atom::odd_fn("g", vec![], vec![]));
        let d = GradedExpr::atom(Atom::odd_fn("d", vec![], vec![]));
        let v = GradedExpr::atom(Atom::even_fn("v", vec![], vec![]));
        let tp = th("th+");
        let tm = th("th-");
        let phi = u
            .add(&tp.mul(&g))
            .add(&tm.mul(&d))
            .add(&tp.mul(&tm).mul(&v));
        let lhs = phi.exp_series().unwrap();
        let eu = u.exp_series().unwrap();
        let soul = GradedExpr::one()
            .add(&tp.mul(&g))
            .add(&tm.mul(&d))
            .add(&tp.mul(&tm).mul(&v.sub(&g.mul(&d))));
        assert_eq!(lhs, eu.mul(&soul));
    }

    #[test]
    fn exp_rejects_unverifiable_soul() {
        // bodiless but not nilpotency-flagged
        let psi = GradedExpr::atom(Atom::EvenFn(FnData {
            name: "psi".into(),
            args: vec![],
            deriv: vec![],
            bodiless: true,
            nilpotent: None,
        }));
        assert!(psi.exp_series().is_err());
    }

    #[test]
    fn nilpotency_degree_kills_powers() {
        let b = Atom::EvenConst(ConstData {
            name: "B".into(),
            bodiless: true,
            nilpotent: Some(2),
        });
        let be = GradedExpr::atom(b);
        assert!(be.mul(&be).is_zero());
    }

    #[test]
    fn canonical_uniqueness_small() {
        // (th+ + th-)^2 = th+ th- + th- th+ = 0
        let s = th("th+").add(&th("th-"));
        assert!(s.mul(&s).is_zero());
    }

    #[test]
    fn inverse_monomial() {
        let x = Atom::coord("x+");
        let m = GradedExpr::from_raw(vec![Monomial {
            coeff: GaussRat::from_int(2),
            bos: vec![(x.clone(), 3)],
            odd: vec![],
        }]);
        let inv = m.inv_monomial().unwrap();
        assert_eq!(m.mul(&inv), GradedExpr::one());
        assert!(th("th+").inv_monomial().is_err());
    }

    #[test]
    fn inverse_series_terminates() {
        // (2 x (1 + th+ th- v))^-1 = (1/2) x^-1 (1 - th+ th- v)
        let x = GradedExpr::atom(Atom::coord("x+"));
        let v = GradedExpr::atom(Atom::even_fn("v", vec![], vec![]));
        let soul = th("th+").mul(&th("th-")).mul(&v);
        let e = x
            .scale(&GaussRat::from_int(2))
            .mul(&GradedExpr::one().add(&soul));
        let inv = e.inv_series().unwrap();
        assert_eq!(e.mul(&inv), GradedExpr::one());
        assert_eq!(inv.mul(&e), GradedExpr::one());
        // sums of body monomials are rejected
        let bad = x.add(&GradedExpr::one());
        assert!(bad.inv_series().is_err());
    }

    #[test]
    fn display_round_shape() {
        let x = GradedExpr::atom(Atom::coord("x+"));
        let e = x
            .mul(&x)
            .scale(&GaussRat::from_ratio(-3, 2))
            .add(&GradedExpr::one());
        assert_eq!(e.display(), "1 - 3/2*x+^2");
    }
}
