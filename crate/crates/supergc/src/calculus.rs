//! Derivatives and substitution on canonical graded expressions: bosonic
//! coordinate derivatives with chain rules through declared dependencies and
//! function arguments, left fermionic derivatives with positional Koszul
//! signs, formal partials for vector-field actions, and parity-checked
//! atom substitution.

use crate::expr::{Atom, EngineError, GradedExpr, Monomial, Parity, ParityClass};
use crate::scalar::GaussRat;
use std::collections::BTreeMap;

/// Declared coordinate dependencies of `DepVar` atoms: for each dependent
/// variable, the partial derivative with respect to each coordinate.
#[derive(Clone, Debug, Default)]
pub struct DepTable {
    map: BTreeMap<String, BTreeMap<String, GradedExpr>>,
}

impl DepTable {
    pub fn empty() -> Self {
        DepTable::default()
    }

    /// Declares `d(dep)/d(coord) = value`.
    pub fn insert(&mut self, dep: &str, coord: &str, value: GradedExpr) {
        self.map
            .entry(dep.to_string())
            .or_default()
            .insert(coord.to_string(), value);
    }

    pub fn partial(&self, dep: &str, coord: &str) -> GradedExpr {
        self.map
            .get(dep)
            .and_then(|m| m.get(coord))
            .cloned()
            .unwrap_or_else(GradedExpr::zero)
    }
}

fn expr_of(m: Monomial) -> GradedExpr {
    GradedExpr::from_raw(vec![m])
}

/// Derivative of a single atom with respect to a bosonic coordinate.
fn datom_coord(a: &Atom, coord: &str, deps: &DepTable) -> GradedExpr {
    match a {
        Atom::Coord(n) => {
            if n == coord {
                GradedExpr::one()
            } else {
                GradedExpr::zero()
            }
        }
        Atom::DepVar(n) => deps.partial(n, coord),
        Atom::EvenFn(f) | Atom::OddFn(f) => {
            let odd = matches!(a, Atom::OddFn(_));
            let mut acc = GradedExpr::zero();
            for k in 0..f.args.len() {
                let darg = d_coord(&f.args[k], coord, deps);
                if darg.is_zero() {
                    continue;
                }
                let mut bumped = f.clone();
                bumped.deriv[k] += 1;
                let fa = if odd {
                    Atom::OddFn(bumped)
                } else {
                    Atom::EvenFn(bumped)
                };
                acc = acc.add(&darg.mul(&GradedExpr::atom(fa)));
            }
            acc
        }
        Atom::Log(inner) => {
            let dinner = datom_coord(inner, coord, deps);
            if dinner.is_zero() {
                return GradedExpr::zero();
            }
            let inv = expr_of(Monomial {
                coeff: GaussRat::one(),
                bos: vec![((**inner).clone(), -1)],
                odd: vec![],
            });
            inv.mul(&dinner)
        }
        Atom::Exp(arg) => {
            let darg = d_coord(arg, coord, deps);
            if darg.is_zero() {
                return GradedExpr::zero();
            }
            GradedExpr::atom(a.clone()).mul(&darg)
        }
        Atom::DispSquare(_)
        | Atom::EvenConst(_)
        | Atom::OddConst(_)
        | Atom::OddCoord(_)
        | Atom::Disp(_) => GradedExpr::zero(),
    }
}

/// Bosonic coordinate derivative (an even derivation; ordinary Leibniz).
pub fn d_coord(e: &GradedExpr, coord: &str, deps: &DepTable) -> GradedExpr {
    let mut acc = GradedExpr::zero();
    for m in e.terms() {
        for idx in 0..m.bos.len() {
            let (a, p) = &m.bos[idx];
            let da = datom_coord(a, coord, deps);
            if da.is_zero() {
                continue;
            }
            let mut rest = m.clone();
            rest.coeff = rest.coeff.mul(&GaussRat::from_int(*p));
            rest.bos[idx].1 -= 1;
            if rest.bos[idx].1 == 0 {
                rest.bos.remove(idx);
            }
            acc = acc.add(&expr_of(rest).mul(&da));
        }
        for i in 0..m.odd.len() {
            let da = datom_coord(&m.odd[i], coord, deps);
            if da.is_zero() {
                continue;
            }
            let prefix = Monomial {
                coeff: m.coeff.clone(),
                bos: m.bos.clone(),
                odd: m.odd[..i].to_vec(),
            };
            let suffix = Monomial {
                coeff: GaussRat::one(),
                bos: vec![],
                odd: m.odd[i + 1..].to_vec(),
            };
            acc = acc.add(&expr_of(prefix).mul(&da).mul(&expr_of(suffix)));
        }
    }
    acc
}

/// Left fermionic derivative with respect to the odd coordinate `theta`:
/// an odd derivation with graded Leibniz signs. The sign for removing the
/// coordinate at position `i` of the sorted odd sequence is `(-1)^i`.
pub fn d_odd(e: &GradedExpr, theta: &str) -> GradedExpr {
    let target = Atom::OddCoord(theta.to_string());
    let mut acc = GradedExpr::zero();
    for m in e.terms() {
        // opaque exponentials may hide the coordinate in their soul
        for idx in 0..m.bos.len() {
            let (a, p) = &m.bos[idx];
            if let Atom::Exp(arg) = a {
                if arg.mentions_atom(&target) {
                    let da = GradedExpr::atom(a.clone()).mul(&d_odd(arg, theta));
                    let mut rest = m.clone();
                    rest.coeff = rest.coeff.mul(&GaussRat::from_int(*p));
                    rest.bos[idx].1 -= 1;
                    if rest.bos[idx].1 == 0 {
                        rest.bos.remove(idx);
                    }
                    acc = acc.add(&da.mul(&expr_of(rest)));
                }
            }
        }
        for (i, a) in m.odd.iter().enumerate() {
            if *a == target {
                let mut rest = m.clone();
                rest.odd.remove(i);
                if i % 2 == 1 {
                    rest.coeff = rest.coeff.neg();
                }
                acc = acc.add(&expr_of(rest));
                break;
            }
        }
    }
    acc
}

/// Formal partial derivative with respect to an atom treated as an
/// independent variable. Errors when the atom occurs in a rigid position
/// (inside a function argument, logarithm, or exponential).
pub fn d_formal(e: &GradedExpr, target: &Atom) -> Result<GradedExpr, EngineError> {
    let mut acc = GradedExpr::zero();
    for m in e.terms() {
        for idx in 0..m.bos.len() {
            let (a, p) = &m.bos[idx];
            if a == target {
                let mut rest = m.clone();
                rest.coeff = rest.coeff.mul(&GaussRat::from_int(*p));
                rest.bos[idx].1 -= 1;
                if rest.bos[idx].1 == 0 {
                    rest.bos.remove(idx);
                }
                acc = acc.add(&expr_of(rest));
            } else if a.mentions(target) {
                return Err(EngineError::RigidSubstitution {
                    atom: crate::expr::display_atom(a),
                    target: crate::expr::display_atom(target),
                });
            }
        }
        for (i, a) in m.odd.iter().enumerate() {
            if a == target {
                let mut rest = m.clone();
                rest.odd.remove(i);
                if i % 2 == 1 {
                    rest.coeff = rest.coeff.neg();
                }
                acc = acc.add(&expr_of(rest));
                break;
            } else if a.mentions(target) {
                return Err(EngineError::RigidSubstitution {
                    atom: crate::expr::display_atom(a),
                    target: crate::expr::display_atom(target),
                });
            }
        }
    }
    Ok(acc)
}

/// Derivative along a named direction atom: bosonic coordinates use the
/// chain rule, odd coordinates use the left fermionic derivative, and any
/// other atom acts as a formal partial.
pub fn d_dir(e: &GradedExpr, dir: &Atom, deps: &DepTable) -> Result<GradedExpr, EngineError> {
    match dir {
        Atom::Coord(n) => Ok(d_coord(e, n, deps)),
        Atom::OddCoord(n) => Ok(d_odd(e, n)),
        _ => d_formal(e, dir),
    }
}

/// Rebuilds an expression, replacing atoms for which `f` returns a value.
/// Replacements are parity checked; the map recurses into function
/// arguments and exponential arguments, and the result is recanonicalized.
pub fn map_atoms<F>(e: &GradedExpr, f: &F) -> Result<GradedExpr, EngineError>
where
    F: Fn(&Atom) -> Option<GradedExpr>,
{
    let mut acc = GradedExpr::zero();
    for m in e.terms() {
        let mut part = GradedExpr::scalar(m.coeff.clone());
        for (a, p) in &m.bos {
            let fa = transform_atom(a, f)?;
            let pw = if *p >= 0 {
                fa.powi(*p as u32)
            } else {
                fa.inv_monomial()?.powi((-*p) as u32)
            };
            part = part.mul(&pw);
            if part.is_zero() {
                break;
            }
        }
        if !part.is_zero() {
            for a in &m.odd {
                part = part.mul(&transform_atom(a, f)?);
                if part.is_zero() {
                    break;
                }
            }
        }
        acc = acc.add(&part);
    }
    Ok(acc)
}

fn transform_atom<F>(a: &Atom, f: &F) -> Result<GradedExpr, EngineError>
where
    F: Fn(&Atom) -> Option<GradedExpr>,
{
    if let Some(v) = f(a) {
        let ok = match (a.parity(), v.parity()) {
            (_, ParityClass::Zero) => true,
            (Parity::Even, ParityClass::Even) => true,
            (Parity::Odd, ParityClass::Odd) => true,
            _ => false,
        };
        if !ok {
            return Err(EngineError::ParityMismatch {
                atom: crate::expr::display_atom(a),
            });
        }
        return Ok(v);
    }
    match a {
        Atom::EvenFn(fd) | Atom::OddFn(fd) => {
            let mut changed = false;
            let mut args = Vec::with_capacity(fd.args.len());
            for arg in &fd.args {
                let na = map_atoms(arg, f)?;
                if na != *arg {
                    changed = true;
                }
                args.push(na);
            }
            if !changed {
                return Ok(GradedExpr::atom(a.clone()));
            }
            let mut fd2 = fd.clone();
            fd2.args = args;
            let na = if matches!(a, Atom::OddFn(_)) {
                Atom::OddFn(fd2)
            } else {
                Atom::EvenFn(fd2)
            };
            Ok(GradedExpr::atom(na))
        }
        Atom::Log(inner) => {
            let ni = transform_atom(inner, f)?;
            if ni == GradedExpr::atom((**inner).clone()) {
                return Ok(GradedExpr::atom(a.clone()));
            }
            // the replacement must again be a single plain atom
            let terms = ni.terms();
            if terms.len() == 1
                && terms[0].coeff.is_one()
                && terms[0].odd.is_empty()
                && terms[0].bos.len() == 1
                && terms[0].bos[0].1 == 1
            {
                let atom = terms[0].bos[0].0.clone();
                Ok(GradedExpr::atom(Atom::Log(Box::new(atom))))
            } else {
                Err(EngineError::RigidSubstitution {
                    atom: crate::expr::display_atom(a),
                    target: ni.display(),
                })
            }
        }
        Atom::Exp(arg) => {
            let na = map_atoms(arg, f)?;
            if na == **arg {
                return Ok(GradedExpr::atom(a.clone()));
            }
            match na.parity() {
                ParityClass::Even | ParityClass::Zero => {}
                p => {
                    return Err(EngineError::NonEvenExpArgument {
                        parity: p,
                        expr: na.display(),
                    })
                }
            }
            Ok(GradedExpr::atom(Atom::Exp(Box::new(na))))
        }
        _ => Ok(GradedExpr::atom(a.clone())),
    }
}

/// Substitutes one atom by an expression of the same parity everywhere.
pub fn subst_atom(
    e: &GradedExpr,
    target: &Atom,
    value: &GradedExpr,
) -> Result<GradedExpr, EngineError> {
    map_atoms(e, &|a: &Atom| {
        if a == target {
            Some(value.clone())
        } else {
            None
        }
    })
}

/// Substitutes a named function head by an argument-independent value:
/// undifferentiated occurrences become `value`, differentiated ones vanish.
pub fn subst_fn_constant(
    e: &GradedExpr,
    name: &str,
    value: &GradedExpr,
) -> Result<GradedExpr, EngineError> {
    map_atoms(e, &|a: &Atom| match a {
        Atom::EvenFn(f) | Atom::OddFn(f) if f.name == name => {
            if f.deriv.iter().all(|d| *d == 0) {
                Some(value.clone())
            } else {
                Some(GradedExpr::zero())
            }
        }
        _ => None,
    })
}

/// Sets both named odd coordinates to zero (the body of a superfield).
pub fn at_theta_zero(e: &GradedExpr, thetas: &[&str]) -> GradedExpr {
    map_atoms(e, &|a: &Atom| match a {
        Atom::OddCoord(n) if thetas.contains(&n.as_str()) => Some(GradedExpr::zero()),
        _ => None,
    })
    .expect("setting odd coordinates to zero cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Atom;

    fn th(n: &str) -> GradedExpr {
        GradedExpr::atom(Atom::odd_coord(n))
    }

    #[test]
    fn fermionic_derivative_positional_signs() {
        let tp = th("th+");
        let tm = th("th-");
        let prod = tp.mul(&tm);
        assert_eq!(d_odd(&prod, "th+"), tm);
        assert_eq!(d_odd(&prod, "th-"), tp.neg());
    }

    #[test]
    fn fermionic_derivative_graded_leibniz() {
        // d(h g) = dh g + (-1)^{|h|} h dg on homogeneous h
        let g0 = GradedExpr::atom(Atom::odd_fn("g", vec![], vec![]));
        let h = th("th+").mul(&GradedExpr::atom(Atom::even_const("a"))); // odd
        let g = th("th-").mul(&g0); // even
        let lhs = d_odd(&h.mul(&g), "th-");
        let rhs = d_odd(&h, "th-")
            .mul(&g)
            .add(&h.mul(&d_odd(&g, "th-")).neg());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn coordinate_derivative_power_log_exp() {
        let x = Atom::coord("x+");
        let deps = DepTable::empty();
        let xe = GradedExpr::atom(x.clone());
        // d(x^2) = 2x
        assert_eq!(
            d_coord(&xe.mul(&xe), "x+", &deps),
            xe.scale(&GaussRat::from_int(2))
        );
        // d(x^-1) = -x^-2
        let xinv = xe.inv_monomial().unwrap();
        assert_eq!(
            d_coord(&xinv, "x+", &deps),
            xinv.mul(&xinv).neg()
        );
        // d log x = x^-1
        let lx = GradedExpr::atom(Atom::Log(Box::new(x.clone())));
        assert_eq!(d_coord(&lx, "x+", &deps), xinv);
        // d exp(a x) = a exp(a x)
        let a = GradedExpr::atom(Atom::even_const("a"));
        let eax = a.mul(&xe).exp_series().unwrap();
        assert_eq!(d_coord(&eax, "x+", &deps), a.mul(&eax));
    }

    #[test]
    fn chain_rule_through_declared_dependency() {
        // xi depends on x+ with d(xi)/d(x+) = -eps
        let mut deps = DepTable::empty();
        let eps = GradedExpr::atom(Atom::even_const("eps"));
        deps.insert("xi", "x+", eps.neg());
        deps.insert("xi", "x-", GradedExpr::one());
        let xi = GradedExpr::atom(Atom::dep("xi"));
        let psi = GradedExpr::atom(Atom::odd_fn("psi", vec![xi.clone()], vec![0]));
        let dpsi = GradedExpr::atom(Atom::odd_fn("psi", vec![xi], vec![1]));
        assert_eq!(d_coord(&psi, "x+", &deps), eps.neg().mul(&dpsi));
        assert_eq!(d_coord(&psi, "x-", &deps), dpsi);
    }

    #[test]
    fn formal_partial_and_rigidity() {
        let h = Atom::even_const("H");
        let he = GradedExpr::atom(h.clone());
        let e = he.mul(&he).add(&GradedExpr::one());
        assert_eq!(
            d_formal(&e, &h).unwrap(),
            he.scale(&GaussRat::from_int(2))
        );
        let rigid = he.exp_series().unwrap();
        assert!(d_formal(&rigid, &h).is_err());
    }

    #[test]
    fn substitution_recanonicalizes_exponentials() {
        // exp((a/2) log x) with a -> 3 becomes x * exp((1/2) log x)
        let x = Atom::coord("x+");
        let a = Atom::even_const("a");
        let lx = GradedExpr::atom(Atom::Log(Box::new(x.clone())));
        let e = GradedExpr::atom(a.clone())
            .scale(&GaussRat::from_ratio(1, 2))
            .mul(&lx)
            .exp_series()
            .unwrap();
        let subbed = subst_atom(&e, &a, &GradedExpr::int(3)).unwrap();
        let expected = GradedExpr::atom(x)
            .mul(&lx.scale(&GaussRat::from_ratio(1, 2)).exp_series().unwrap());
        assert_eq!(subbed, expected);
    }

    #[test]
    fn function_constant_substitution_kills_derivatives() {
        let xi = GradedExpr::atom(Atom::dep("xi"));
        let h0 = GradedExpr::atom(Atom::even_fn("h0", vec![xi.clone()], vec![0]));
        let h1 = GradedExpr::atom(Atom::even_fn("h0", vec![xi], vec![1]));
        let c = GradedExpr::atom(Atom::even_const("c"));
        let e = h0.add(&h1);
        assert_eq!(subst_fn_constant(&e, "h0", &c).unwrap(), c);
    }

    #[test]
    fn odd_substitution_keeps_order_signs() {
        // replace th- by th+ inside th+ th-: the square vanishes
        let tp = th("th+");
        let tm = th("th-");
        let c = GradedExpr::atom(Atom::odd_const("c0"));
        let prod = tp.mul(&tm);
        assert!(subst_atom(&prod, &Atom::odd_coord("th-"), &tp)
            .unwrap()
            .is_zero());
        // replace th- by the odd constant c: th+ c stays with positive sign
        let r = subst_atom(&prod, &Atom::odd_coord("th-"), &c).unwrap();
        assert_eq!(r, tp.mul(&c));
        // an even replacement for an odd atom is rejected
        let even = tp.mul(&c);
        assert!(subst_atom(&prod, &Atom::odd_coord("th-"), &even).is_err());
    }

    #[test]
    fn theta_restriction() {
        let tp = th("th+");
        let f = GradedExpr::one().add(&tp.mul(&GradedExpr::atom(Atom::odd_fn(
            "g",
            vec![],
            vec![],
        ))));
        assert_eq!(at_theta_zero(&f, &["th+", "th-"]), GradedExpr::one());
    }
}
