//! Oriented rewrite rules for constraint-aware reduction. Three shapes:
//! a function-derivative head rewritten to a closed form (matching any
//! higher derivative by differentiating the replacement), a two-atom
//! product rewritten to an expression, and an exponential-argument unfold
//! that peels integer multiples of a declared atom out of `exp`。Rule sets
//! validate a termination order up front and reduce to a fixpoint.

use crate::calculus::map_atoms;
use crate::expr::{Atom, EngineError, GradedExpr, Monomial};
use crate::scalar::GaussRat;
use num::{BigInt, ToPrimitive};
use thiserror::Error;

/// Iteration cap for the fixpoint loop.
const REDUCE_CAP: usize = 512;

/// One oriented rewrite.
#[derive(Clone, Debug)]
pub enum Rule {
    /// `name(args; deriv)` and every higher derivative of it rewrite to
    /// `rhs` (differentiated accordingly with respect to the function's
    /// formal arguments).
    FnDeriv {
        name: String,
        deriv: Vec<u32>,
        rhs: GradedExpr,
    },
    /// A monomial containing both atoms rewrites with the adjacent product
    /// `a*b` replaced by `rhs` (left-multiplied after sign extraction).
    PairProduct { a: Atom, b: Atom, rhs: GradedExpr },
    /// `exp(q*target + rest)` with integer `q` rewrites to
    /// `replacement^q * exp(rest)`; the replacement must be a single
    /// invertible monomial.
    ExpUnfold {
        target: Atom,
        replacement: GradedExpr,
    },
}

/// Rule failure or termination-order rejection.
#[derive(Debug, Error)]
pub enum RuleError {
    #[error("rule head `{head}` reachable from its own replacement")]
    SelfRecursive { head: String },
    #[error("rule dependency cycle through `{head}`")]
    CyclicRules { head: String },
    #[error("rule not orientable: {msg}")]
    NonOrientable { msg: String },
    #[error("reduction exceeded {cap} passes")]
    Diverged { cap: usize },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl Rule {
    fn head_display(&self) -> String {
        match self {
            Rule::FnDeriv { name, deriv, .. } => {
                let ds: Vec<String> = deriv.iter().map(|d| d.to_string()).collect();
                format!("{name}(;{})", ds.join(","))
            }
            Rule::PairProduct { a, b, .. } => format!(
                "{}*{}",
                crate::expr::display_atom(a),
                crate::expr::display_atom(b)
            ),
            Rule::ExpUnfold { target, .. } => {
                format!("exp(..{}..)", crate::expr::display_atom(target))
            }
        }
    }

    /// True when this rule could rewrite something inside `e`.
    fn feeds(&self, e: &GradedExpr) -> bool {
        match self {
            Rule::FnDeriv { name, deriv, .. } => {
                expr_has_fn_matching(e, name, deriv, false)
            }
            Rule::PairProduct { a, b, .. } => e
                .terms()
                .iter()
                .any(|m| monomial_has_atom(m, a) && monomial_has_atom(m, b)),
            Rule::ExpUnfold { target, .. } => exp_unfold_matches(e, target),
        }
    }
}

/// Does `e` contain an exponential atom whose argument carries an exact
/// integer multiple of `target`?
fn exp_unfold_matches(e: &GradedExpr, target: &Atom) -> bool {
    e.terms().iter().any(|m| {
        m.bos.iter().any(|(a, _)| match a {
            Atom::Exp(arg) => arg.terms().iter().any(|t| {
                t.odd.is_empty()
                    && t.bos.len() == 1
                    && t.bos[0].1 == 1
                    && &t.bos[0].0 == target
                    && integer_of(&t.coeff).is_some()
            }),
            _ => false,
        })
    })
}

fn monomial_has_atom(m: &Monomial, a: &Atom) -> bool {
    m.bos.iter().any(|(x, p)| x == a && *p > 0) || m.odd.iter().any(|x| x == a)
}

/// Does any function atom in `e` (recursively) match `name` with a
/// derivative multi-index that dominates `deriv` (strictly, when `strict`)?
fn expr_has_fn_matching(e: &GradedExpr, name: &str, deriv: &[u32], strict: bool) -> bool {
    fn atom_scan(a: &Atom, name: &str, deriv: &[u32], strict: bool) -> bool {
        match a {
            Atom::EvenFn(f) | Atom::OddFn(f) => {
                if f.name == name && f.deriv.len() == deriv.len() {
                    let dominates = f.deriv.iter().zip(deriv).all(|(x, y)| x >= y);
                    let total: u32 = f.deriv.iter().sum();
                    let base: u32 = deriv.iter().sum();
                    if dominates && (!strict || total > base) {
                        return true;
                    }
                }
                f.args
                    .iter()
                    .any(|arg| expr_has_fn_matching(arg, name, deriv, strict))
            }
            Atom::Exp(arg) => expr_has_fn_matching(arg, name, deriv, strict),
            Atom::Log(inner) => atom_scan(inner, name, deriv, strict),
            _ => false,
        }
    }
    e.terms().iter().any(|m| {
        m.bos
            .iter()
            .any(|(a, _)| atom_scan(a, name, deriv, strict))
            || m.odd.iter().any(|a| atom_scan(a, name, deriv, strict))
    })
}

/// Derivative of `e` with respect to a formal argument atom (a coordinate
/// or dependent variable treated as independent).
fn d_wrt(e: &GradedExpr, target: &Atom) -> Result<GradedExpr, RuleError> {
    let mut acc = GradedExpr::zero();
    for m in e.terms() {
        // even product rule over bosonic factors; odd factors cannot
        // depend on an even formal argument except through function atoms
        for idx in 0..m.bos.len() {
            let (a, p) = &m.bos[idx];
            let da = d_atom_wrt(a, target)?;
            if da.is_zero() {
                continue;
            }
            let mut rest = GradedExpr::scalar(m.coeff.clone().mul(&GaussRat::from_int(*p)));
            for (j, (b, q)) in m.bos.iter().enumerate() {
                let power = if j == idx { *q - 1 } else { *q };
                rest = rest.mul(&pow_atom(b, power)?);
            }
            rest = rest.mul(&da);
            for o in &m.odd {
                rest = rest.mul(&GradedExpr::atom(o.clone()));
            }
            acc = acc.add(&rest);
        }
        for idx in 0..m.odd.len() {
            let da = d_atom_wrt(&m.odd[idx], target)?;
            if da.is_zero() {
                continue;
            }
            let mut rest = GradedExpr::scalar(m.coeff.clone());
            for (b, q) in &m.bos {
                rest = rest.mul(&pow_atom(b, *q)?);
            }
            for (j, o) in m.odd.iter().enumerate() {
                if j == idx {
                    rest = rest.mul(&da);
                } else {
                    rest = rest.mul(&GradedExpr::atom(o.clone()));
                }
            }
            acc = acc.add(&rest);
        }
    }
    Ok(acc)
}

fn pow_atom(a: &Atom, p: i64) -> Result<GradedExpr, RuleError> {
    let base = GradedExpr::atom(a.clone());
    if p >= 0 {
        Ok(base.powi(p as u32))
    } else {
        Ok(base.inv_monomial()?.powi((-p) as u32))
    }
}

fn d_atom_wrt(a: &Atom, target: &Atom) -> Result<GradedExpr, RuleError> {
    if a == target {
        return Ok(GradedExpr::one());
    }
    match a {
        Atom::EvenFn(f) | Atom::OddFn(f) => {
            let mut acc = GradedExpr::zero();
            for (k, arg) in f.args.iter().enumerate() {
                let darg = d_wrt(arg, target)?;
                if darg.is_zero() {
                    continue;
                }
                let mut bumped = f.clone();
                bumped.deriv[k] += 1;
                let datom = match a {
                    Atom::EvenFn(_) => Atom::EvenFn(bumped),
                    _ => Atom::OddFn(bumped),
                };
                acc = acc.add(&darg.mul(&GradedExpr::atom(datom)));
            }
            Ok(acc)
        }
        Atom::Exp(arg) => {
            let darg = d_wrt(arg, target)?;
            if darg.is_zero() {
                return Ok(GradedExpr::zero());
            }
            Ok(GradedExpr::atom(a.clone()).mul(&darg))
        }
        Atom::Log(inner) => {
            if inner.as_ref() == target {
                return Ok(GradedExpr::atom(target.clone()).inv_monomial()?);
            }
            if inner.mentions(target) {
                return Err(RuleError::NonOrientable {
                    msg: format!(
                        "cannot differentiate log({}) with respect to {}",
                        crate::expr::display_atom(inner),
                        crate::expr::display_atom(target)
                    ),
                });
            }
            Ok(GradedExpr::zero())
        }
        _ => Ok(GradedExpr::zero()),
    }
}

fn apply_fn_deriv(
    e: &GradedExpr,
    name: &str,
    base: &[u32],
    rhs: &GradedExpr,
) -> Result<GradedExpr, RuleError> {
    // collect matched signatures first so the replacement map is pure
    let mut sigs: Vec<Vec<u32>> = Vec::new();
    collect_fn_sigs(e, name, base, &mut sigs);
    if sigs.is_empty() {
        return Ok(e.clone());
    }
    let mut cur = e.clone();
    for sig in sigs {
        // differentiate the replacement up to the matched signature
        let probe = find_fn_atom(&cur, name, &sig);
        let f = match probe {
            Some(f) => f,
            None => continue,
        };
        let mut value = rhs.clone();
        for (k, (have, want)) in sig.iter().zip(base).enumerate() {
            let extra = have - want;
            if extra == 0 {
                continue;
            }
            let arg = &f.args[k];
            let arg_atom = single_plain_atom(arg).ok_or_else(|| RuleError::NonOrientable {
                msg: format!(
                    "argument {} of `{name}` is `{arg}`, not a plain atom; cannot differentiate the replacement"
                , k + 1),
            })?;
            for _ in 0..extra {
                value = d_wrt(&value, &arg_atom)?;
            }
        }
        let target_even = Atom::EvenFn(crate::expr::FnData {
            deriv: sig.clone(),
            ..f.clone()
        });
        let target_odd = Atom::OddFn(crate::expr::FnData {
            deriv: sig.clone(),
            ..f.clone()
        });
        cur = map_atoms(&cur, &|a: &Atom| {
            if a == &target_even || a == &target_odd {
                Some(value.clone())
            } else {
                None
            }
        })?;
    }
    Ok(cur)
}

fn collect_fn_sigs(e: &GradedExpr, name: &str, base: &[u32], out: &mut Vec<Vec<u32>>) {
    fn scan_atom(a: &Atom, name: &str, base: &[u32], out: &mut Vec<Vec<u32>>) {
        match a {
            Atom::EvenFn(f) | Atom::OddFn(f) => {
                if f.name == name
                    && f.deriv.len() == base.len()
                    && f.deriv.iter().zip(base).all(|(x, y)| x >= y)
                    && !out.contains(&f.deriv)
                {
                    out.push(f.deriv.clone());
                }
                for arg in &f.args {
                    collect_fn_sigs(arg, name, base, out);
                }
            }
            Atom::Exp(arg) => collect_fn_sigs(arg, name, base, out),
            Atom::Log(inner) => scan_atom(inner, name, base, out),
            _ => {}
        }
    }
    for m in e.terms() {
        for (a, _) in &m.bos {
            scan_atom(a, name, base, out);
        }
        for a in &m.odd {
            scan_atom(a, name, base, out);
        }
    }
}

fn find_fn_atom(e: &GradedExpr, name: &str, sig: &[u32]) -> Option<crate::expr::FnData> {
    fn scan_atom(a: &Atom, name: &str, sig: &[u32]) -> Option<crate::expr::FnData> {
        match a {
            Atom::EvenFn(f) | Atom::OddFn(f) => {
                if f.name == name && f.deriv == sig {
                    return Some(f.clone());
                }
                f.args.iter().find_map(|arg| find_fn_atom(arg, name, sig))
            }
            Atom::Exp(arg) => find_fn_atom(arg, name, sig),
            Atom::Log(inner) => scan_atom(inner, name, sig),
            _ => None,
        }
    }
    for m in e.terms() {
        for (a, _) in &m.bos {
            if let Some(f) = scan_atom(a, name, sig) {
                return Some(f);
            }
        }
        for a in &m.odd {
            if let Some(f) = scan_atom(a, name, sig) {
                return Some(f);
            }
        }
    }
    None
}

fn single_plain_atom(e: &GradedExpr) -> Option<Atom> {
    let terms = e.terms();
    if terms.len() == 1
        && terms[0].coeff.is_one()
        && terms[0].odd.is_empty()
        && terms[0].bos.len() == 1
        && terms[0].bos[0].1 == 1
    {
        return Some(terms[0].bos[0].0.clone());
    }
    if terms.len() == 1
        && terms[0].coeff.is_one()
        && terms[0].bos.is_empty()
        && terms[0].odd.len() == 1
    {
        return Some(terms[0].odd[0].clone());
    }
    None
}

fn apply_pair_product(
    e: &GradedExpr,
    a: &Atom,
    b: &Atom,
    rhs: &GradedExpr,
) -> Result<GradedExpr, RuleError> {
    let mut acc = GradedExpr::zero();
    for m in e.terms() {
        if !(monomial_has_atom(m, a) && monomial_has_atom(m, b)) {
            acc = acc.add(&GradedExpr::from_raw(vec![m.clone()]));
            continue;
        }
        let mut rest = m.clone();
        let mut sign = GaussRat::one();
        let take = |rest: &mut Monomial, x: &Atom, sign: &mut GaussRat| {
            if let Some(i) = rest.odd.iter().position(|o| o == x) {
                if i % 2 == 1 {
                    *sign = sign.neg();
                }
                rest.odd.remove(i);
            } else if let Some(j) = rest.bos.iter().position(|(bb, p)| bb == x && *p > 0) {
                if rest.bos[j].1 == 1 {
                    rest.bos.remove(j);
                } else {
                    rest.bos[j].1 -= 1;
                }
            }
        };
        take(&mut rest, a, &mut sign);
        take(&mut rest, b, &mut sign);
        rest.coeff = rest.coeff.mul(&sign);
        let tail = GradedExpr::from_raw(vec![rest]);
        acc = acc.add(&rhs.mul(&tail));
    }
    Ok(acc)
}

fn integer_of(c: &GaussRat) -> Option<i64> {
    if !c.is_real() || !c.re.is_integer() {
        return None;
    }
    BigInt::to_i64(&c.re.to_integer())
}

fn apply_exp_unfold(
    e: &GradedExpr,
    target: &Atom,
    replacement: &GradedExpr,
) -> Result<GradedExpr, RuleError> {
    let mut acc = GradedExpr::zero();
    for m in e.terms() {
        let mut handled = false;
        for (idx, (a, p)) in m.bos.iter().enumerate() {
            let arg = match a {
                Atom::Exp(arg) => arg.as_ref(),
                _ => continue,
            };
            // find a term of the argument that is exactly q*target
            let q = arg.terms().iter().find_map(|t| {
                if t.odd.is_empty()
                    && t.bos.len() == 1
                    && t.bos[0].1 == 1
                    && &t.bos[0].0 == target
                {
                    integer_of(&t.coeff)
                } else {
                    None
                }
            });
            let q = match q {
                Some(q) if q != 0 && *p == 1 => q,
                _ => continue,
            };
            let stripped = arg.sub(
                &GradedExpr::atom(target.clone()).scale(&GaussRat::from_int(q)),
            );
            let factor = if q >= 0 {
                replacement.powi(q as u32)
            } else {
                replacement.inv_monomial()?.powi((-q) as u32)
            };
            let mut rest = m.clone();
            rest.bos.remove(idx);
            let tail = GradedExpr::from_raw(vec![rest]);
            let rebuilt = factor
                .mul(&stripped.exp_series()?)
                .mul(&tail);
            acc = acc.add(&rebuilt);
            handled = true;
            break;
        }
        if !handled {
            acc = acc.add(&GradedExpr::from_raw(vec![m.clone()]));
        }
    }
    Ok(acc)
}

/// Validated, ordered collection of rewrite rules.
#[derive(Clone, Debug, Default)]
pub struct RuleSet {
    rules: Vec<Rule>,
}

impl RuleSet {
    pub fn empty() -> Self {
        RuleSet::default()
    }

    /// Validates the termination order: no rule may feed itself, and the
    /// feeds-relation between rules must be acyclic.
    pub fn new(rules: Vec<Rule>) -> Result<Self, RuleError> {
        for r in &rules {
            let self_feeding = match r {
                Rule::FnDeriv { name, deriv, rhs } => {
                    // any occurrence at or above the head's derivative
                    // order re-triggers the rule, directly or after
                    // differentiation of the replacement
                    let base: u32 = deriv.iter().sum();
                    fn_orders(rhs, name)
                        .into_iter()
                        .any(|total| total >= base)
                }
                Rule::PairProduct { a, b, rhs } => rhs
                    .terms()
                    .iter()
                    .any(|m| monomial_has_atom(m, a) && monomial_has_atom(m, b)),
                Rule::ExpUnfold {
                    target,
                    replacement,
                } => exp_unfold_matches(replacement, target),
            };
            if self_feeding {
                return Err(RuleError::SelfRecursive {
                    head: r.head_display(),
                });
            }
            if let Rule::ExpUnfold { replacement, .. } = r {
                if replacement.terms().len() != 1 {
                    return Err(RuleError::NonOrientable {
                        msg: format!(
                            "exponential unfold replacement `{replacement}` is not a single monomial"
                        ),
                    });
                }
            }
            if let Rule::PairProduct { a, b, .. } = r {
                if a == b {
                    return Err(RuleError::NonOrientable {
                        msg: format!(
                            "product rule head `{}` repeats one atom",
                            r.head_display()
                        ),
                    });
                }
            }
        }
        // acyclicity of the feeds-relation via depth-first search
        let n = rules.len();
        let mut edges = vec![Vec::new(); n];
        for (i, r) in rules.iter().enumerate() {
            let rhs = match r {
                Rule::FnDeriv { rhs, .. } => rhs,
                Rule::PairProduct { rhs, .. } => rhs,
                Rule::ExpUnfold { replacement, .. } => replacement,
            };
            for (j, other) in rules.iter().enumerate() {
                if i != j && other.feeds(rhs) {
                    edges[i].push(j);
                }
            }
        }
        let mut state = vec![0u8; n];
        fn dfs(v: usize, edges: &[Vec<usize>], state: &mut [u8]) -> bool {
            state[v] = 1;
            for &w in &edges[v] {
                if state[w] == 1 {
                    return false;
                }
                if state[w] == 0 && !dfs(w, edges, state) {
                    return false;
                }
            }
            state[v] = 2;
            true
        }
        for v in 0..n {
            if state[v] == 0 && !dfs(v, &edges, &mut state) {
                return Err(RuleError::CyclicRules {
                    head: rules[v].head_display(),
                });
            }
        }
        Ok(RuleSet { rules })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Rewrites `e` to a fixpoint.
    pub fn reduce(&self, e: &GradedExpr) -> Result<GradedExpr, RuleError> {
        let mut cur = e.clone();
        if self.rules.is_empty() {
            return Ok(cur);
        }
        for _ in 0..REDUCE_CAP {
            let mut next = cur.clone();
            for r in &self.rules {
                next = match r {
                    Rule::FnDeriv { name, deriv, rhs } => {
                        apply_fn_deriv(&next, name, deriv, rhs)?
                    }
                    Rule::PairProduct { a, b, rhs } => apply_pair_product(&next, a, b, rhs)?,
                    Rule::ExpUnfold {
                        target,
                        replacement,
                    } => apply_exp_unfold(&next, target, replacement)?,
                };
            }
            if next == cur {
                return Ok(cur);
            }
            cur = next;
        }
        Err(RuleError::Diverged { cap: REDUCE_CAP })
    }
}

/// Total derivative orders of every occurrence of `name` in `e`.
fn fn_orders(e: &GradedExpr, name: &str) -> Vec<u32> {
    fn scan_atom(a: &Atom, name: &str, out: &mut Vec<u32>) {
        match a {
            Atom::EvenFn(f) | Atom::OddFn(f) => {
                if f.name == name {
                    out.push(f.deriv.iter().sum());
                }
                for arg in &f.args {
                    scan_expr(arg, name, out);
                }
            }
            Atom::Exp(arg) => scan_expr(arg, name, out),
            Atom::Log(inner) => scan_atom(inner, name, out),
            _ => {}
        }
    }
    fn scan_expr(e: &GradedExpr, name: &str, out: &mut Vec<u32>) {
        for m in e.terms() {
            for (a, _) in &m.bos {
                scan_atom(a, name, out);
            }
            for a in &m.odd {
                scan_atom(a, name, out);
            }
        }
    }
    let mut out = Vec::new();
    scan_expr(e, name, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse, ParserContext};

    fn ctx() -> ParserContext {
        let mut ctx = ParserContext::classical();
        ctx.table.declare_dep_var("xi");
        ctx.table.declare_even_fn("v", &["xi"], false, None);
        ctx.table.declare_even_fn("w", &["xi"], false, None);
        ctx.table.declare_even_const("k0", false, None);
        ctx.table.declare_even_const("a", false, None);
        ctx.table.declare_odd_const("Cp");
        ctx.table.declare_odd_const("Cm");
        ctx.table.declare_odd_const("Bp");
        ctx.table.declare_odd_const("Bm");
        ctx
    }

    fn p(c: &ParserContext, s: &str) -> GradedExpr {
        parse(c, s).unwrap()
    }

    #[test]
    fn ode_rule_rewrites_higher_derivatives_too() {
        let c = ctx();
        // v'' = (v')^2/v + k0^2 v: the second derivative and anything
        // above it must leave only v and v'
        let rhs = p(&c, "v(xi;1)^2/v(xi) + k0^2*v(xi)");
        let rules = RuleSet::new(vec![Rule::FnDeriv {
            name: "v".to_string(),
            deriv: vec![2],
            rhs: rhs.clone(),
        }])
        .unwrap();
        let reduced = rules.reduce(&p(&c, "v(xi;2)")).unwrap();
        assert_eq!(reduced, rhs);
        let third = rules.reduce(&p(&c, "v(xi;3)")).unwrap();
        // d/dxi of rhs, fully reduced: no derivative of order >= 2 left
        assert!(!expr_has_fn_matching(&third, "v", &[2], false));
        let by_hand = rules
            .reduce(&d_wrt(&rhs, &Atom::dep("xi")).unwrap())
            .unwrap();
        assert_eq!(third, by_hand);
    }

    #[test]
    fn pair_rule_extracts_signs() {
        let c = ctx();
        let rules = RuleSet::new(vec![Rule::PairProduct {
            a: Atom::odd_const("Cp"),
            b: Atom::odd_const("Bm"),
            rhs: p(&c, "-~Cm*~Bp"),
        }])
        .unwrap();
        let e = p(&c, "~Cp*~Bm");
        assert_eq!(rules.reduce(&e).unwrap(), p(&c, "-~Cm*~Bp"));
        // in reversed written order the monomial canonicalizes with a
        // sign, which must survive the rewrite
        let r = p(&c, "~Bm*~Cp");
        assert_eq!(rules.reduce(&r).unwrap(), p(&c, "~Cm*~Bp"));
        // spectator factors keep their positions
        let s = p(&c, "2*k0*~Cp*~Bm");
        assert_eq!(rules.reduce(&s).unwrap(), p(&c, "-2*k0*~Cm*~Bp"));
    }

    #[test]
    fn exp_unfold_peels_integer_multiples() {
        let c = ctx();
        let rules = RuleSet::new(vec![Rule::ExpUnfold {
            target: Atom::dep("xi"),
            replacement: p(&c, "w(xi)"),
        }])
        .unwrap();
        let e = p(&c, "exp(2*xi + a*z)");
        let out = rules.reduce(&e).unwrap();
        assert_eq!(out, p(&c, "w(xi)^2*exp(a*z)"));
        let neg = p(&c, "exp(-xi)");
        assert_eq!(rules.reduce(&neg).unwrap(), p(&c, "1/w(xi)"));
    }

    #[test]
    fn self_recursive_rules_rejected() {
        let c = ctx();
        let bad = RuleSet::new(vec![Rule::FnDeriv {
            name: "v".to_string(),
            deriv: vec![2],
            rhs: p(&c, "v(xi;2) + v(xi)"),
        }]);
        assert!(matches!(bad, Err(RuleError::SelfRecursive { .. })));
        let cyc = RuleSet::new(vec![
            Rule::PairProduct {
                a: Atom::odd_const("Cp"),
                b: Atom::odd_const("Bm"),
                rhs: p(&c, "-~Cm*~Bp"),
            },
            Rule::PairProduct {
                a: Atom::odd_const("Cm"),
                b: Atom::odd_const("Bp"),
                rhs: p(&c, "-~Cp*~Bm"),
            },
        ]);
        assert!(matches!(cyc, Err(RuleError::CyclicRules { .. })));
    }

    #[test]
    fn constraint_free_expression_unchanged() {
        let c = ctx();
        let rules = RuleSet::new(vec![Rule::FnDeriv {
            name: "v".to_string(),
            deriv: vec![2],
            rhs: p(&c, "k0^2*v(xi)"),
        }])
        .unwrap();
        let e = p(&c, "w(xi;3) + k0*z");
        assert_eq!(rules.reduce(&e).unwrap(), e);
    }

    #[test]
    fn matches_inside_exponential_arguments() {
        let c = ctx();
        let rules = RuleSet::new(vec![Rule::FnDeriv {
            name: "v".to_string(),
            deriv: vec![1],
            rhs: p(&c, "a*v(xi)"),
        }])
        .unwrap();
        let e = p(&c, "exp(z*v(xi;1))");
        let out = rules.reduce(&e).unwrap();
        assert_eq!(out, p(&c, "exp(a*z*v(xi))"));
    }
}
