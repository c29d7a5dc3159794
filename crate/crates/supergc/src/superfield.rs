//! Superspace charts, θ-expansion of superfields, and the covariant
//! derivative operators `D±` and supersymmetry operators `J±` with their
//! anticommutation identities.

use crate::calculus::{at_theta_zero, d_coord, d_odd, map_atoms, DepTable};
use crate::expr::{Atom, GradedExpr};
use serde::Serialize;

/// Light-cone sector, selecting the (`x+`, `th+`) or (`x-`, `th-`) pair.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sector {
    Plus,
    Minus,
}

impl Sector {
    pub fn index(self) -> usize {
        match self {
            Sector::Plus => 0,
            Sector::Minus => 1,
        }
    }
    pub fn suffix(self) -> &'static str {
        match self {
            Sector::Plus => "+",
            Sector::Minus => "-",
        }
    }
}

/// A superspace chart: two bosonic and two fermionic coordinates plus
/// declared dependencies of named symmetry variables on the coordinates.
#[derive(Clone, Debug)]
pub struct Chart {
    pub bosonic: [String; 2],
    pub fermionic: [String; 2],
    pub deps: DepTable,
}

impl Chart {
    /// The standard chart (`x+`, `x-`; `th+`, `th-`) with no dependencies.
    pub fn standard() -> Self {
        Chart {
            bosonic: ["x+".to_string(), "x-".to_string()],
            fermionic: ["th+".to_string(), "th-".to_string()],
            deps: DepTable::empty(),
        }
    }

    pub fn with_deps(deps: DepTable) -> Self {
        let mut c = Chart::standard();
        c.deps = deps;
        c
    }

    pub fn coord(&self, s: Sector) -> &str {
        &self.bosonic[s.index()]
    }

    pub fn theta(&self, s: Sector) -> &str {
        &self.fermionic[s.index()]
    }

    fn theta_expr(&self, s: Sector) -> GradedExpr {
        GradedExpr::atom(Atom::odd_coord(self.theta(s)))
    }

    /// Covariant derivative `D = d/dθ − i θ d/dx` in the given sector.
    pub fn apply_d(&self, s: Sector, e: &GradedExpr) -> GradedExpr {
        let dth = d_odd(e, self.theta(s));
        let dx = d_coord(e, self.coord(s), &self.deps);
        dth.sub(&GradedExpr::i().mul(&self.theta_expr(s)).mul(&dx))
    }

    /// Supersymmetry operator `J = d/dθ + i θ d/dx` in the given sector.
    pub fn apply_j(&self, s: Sector, e: &GradedExpr) -> GradedExpr {
        let dth = d_odd(e, self.theta(s));
        let dx = d_coord(e, self.coord(s), &self.deps);
        dth.add(&GradedExpr::i().mul(&self.theta_expr(s)).mul(&dx))
    }

    /// Bosonic coordinate derivative in the given sector.
    pub fn apply_dx(&self, s: Sector, e: &GradedExpr) -> GradedExpr {
        d_coord(e, self.coord(s), &self.deps)
    }

    /// θ-components of an expression.
    pub fn theta_expand(&self, e: &GradedExpr) -> Superfield {
        let thetas = [self.theta(Sector::Plus), self.theta(Sector::Minus)];
        let dplus = d_odd(e, thetas[0]);
        Superfield {
            base: at_theta_zero(e, &thetas),
            plus: at_theta_zero(&dplus, &thetas),
            minus: at_theta_zero(&d_odd(e, thetas[1]), &thetas),
            top: at_theta_zero(&d_odd(&dplus, thetas[1]), &thetas),
        }
    }

    /// Rebuilds `base + θ⁺·plus + θ⁻·minus + θ⁺θ⁻·top`.
    pub fn recompose(&self, f: &Superfield) -> GradedExpr {
        let tp = self.theta_expr(Sector::Plus);
        let tm = self.theta_expr(Sector::Minus);
        f.base
            .add(&tp.mul(&f.plus))
            .add(&tm.mul(&f.minus))
            .add(&tp.mul(&tm).mul(&f.top))
    }

    /// Finite supersymmetry shift in the plus sector with odd parameter
    /// `eta`: `x+ -> x+ + i eta θ⁺`, `θ⁺ -> θ⁺ + eta`. Exact because
    /// `eta² = 0`; agrees with `(1 + eta J₊)`.
    pub fn susy_shift_plus(&self, e: &GradedExpr, eta: &GradedExpr) -> GradedExpr {
        let xp = Atom::coord(self.coord(Sector::Plus));
        let tp = Atom::odd_coord(self.theta(Sector::Plus));
        let new_x = GradedExpr::atom(xp.clone())
            .add(&GradedExpr::i().mul(eta).mul(&self.theta_expr(Sector::Plus)));
        let new_t = self.theta_expr(Sector::Plus).add(eta);
        map_atoms(e, &|a: &Atom| {
            if *a == xp {
                Some(new_x.clone())
            } else if *a == tp {
                Some(new_t.clone())
            } else {
                None
            }
        })
        .expect("supersymmetry shift preserves parity")
    }
}

/// θ-components of a superfield: the coefficients of 1, θ⁺, θ⁻, θ⁺θ⁻.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Superfield {
    pub base: GradedExpr,
    pub plus: GradedExpr,
    pub minus: GradedExpr,
    pub top: GradedExpr,
}

/// One operator identity evaluated across a sample set.
#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub holds: bool,
    /// Display form of the first nonzero residual, when any.
    pub counterexample: Option<String>,
}

/// Evaluates the full anticommutator grid of `D±`, `J±` plus the square
/// identities on every sample; each relation must canonicalize to zero.
pub fn check_operator_relations(chart: &Chart, samples: &[GradedExpr]) -> Vec<RelationCheck> {
    use Sector::{Minus, Plus};
    type Op = (char, Sector);
    let apply = |chart: &Chart, (kind, s): Op, e: &GradedExpr| -> GradedExpr {
        match kind {
            'D' => chart.apply_d(s, e),
            _ => chart.apply_j(s, e),
        }
    };
    let anti = |chart: &Chart, a: Op, b: Op, e: &GradedExpr| -> GradedExpr {
        apply(chart, a, &apply(chart, b, e)).add(&apply(chart, b, &apply(chart, a, e)))
    };
    // (name, lhs ops, rhs multiple of d/dx in sector): {a,b} - rhs = 0
    let cases: Vec<(String, Op, Op, Option<(i64, Sector)>)> = vec![
        ("{D+,D+} + 2i dx+".into(), ('D', Plus), ('D', Plus), Some((-2, Plus))),
        ("{D+,D-}".into(), ('D', Plus), ('D', Minus), None),
        ("{D-,D-} + 2i dx-".into(), ('D', Minus), ('D', Minus), Some((-2, Minus))),
        ("{J+,J+} - 2i dx+".into(), ('J', Plus), ('J', Plus), Some((2, Plus))),
        ("{J+,J-}".into(), ('J', Plus), ('J', Minus), None),
        ("{J-,J-} - 2i dx-".into(), ('J', Minus), ('J', Minus), Some((2, Minus))),
        ("{J+,D+}".into(), ('J', Plus), ('D', Plus), None),
        ("{J+,D-}".into(), ('J', Plus), ('D', Minus), None),
        ("{J-,D+}".into(), ('J', Minus), ('D', Plus), None),
        ("{J-,D-}".into(), ('J', Minus), ('D', Minus), None),
    ];
    let mut out = Vec::new();
    for (name, a, b, rhs) in cases {
        let mut holds = true;
        let mut counterexample = None;
        for e in samples {
            let mut r = anti(chart, a, b, e);
            if let Some((k, s)) = rhs {
                let dx = chart.apply_dx(s, e);
                r = r.sub(&GradedExpr::i().scale(&crate::scalar::GaussRat::from_int(k)).mul(&dx));
            }
            if !r.is_zero() {
                holds = false;
                counterexample = Some(r.display());
                break;
            }
        }
        out.push(RelationCheck {
            name,
            holds,
            counterexample,
        });
    }
    // square identities: D² = -i dx, J² = i dx
    for (name, kind, s, k) in [
        ("D+^2 + i dx+", 'D', Plus, -1i64),
        ("D-^2 + i dx-", 'D', Minus, -1),
        ("J+^2 - i dx+", 'J', Plus, 1),
        ("J-^2 - i dx-", 'J', Minus, 1),
    ] {
        let mut holds = true;
        let mut counterexample = None;
        for e in samples {
            let sq = apply(chart, (kind, s), &apply(chart, (kind, s), e));
            let dx = chart.apply_dx(s, e);
            let r = sq.sub(&GradedExpr::i().scale(&crate::scalar::GaussRat::from_int(k)).mul(&dx));
            if !r.is_zero() {
                holds = false;
                counterexample = Some(r.display());
                break;
            }
        }
        out.push(RelationCheck {
            name: name.to_string(),
            holds,
            counterexample,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Atom;

    fn chart() -> Chart {
        Chart::standard()
    }

    #[test]
    fn d_of_coordinates() {
        let c = chart();
        let tp = GradedExpr::atom(Atom::odd_coord("th+"));
        let xp = GradedExpr::atom(Atom::coord("x+"));
        assert_eq!(c.apply_d(Sector::Plus, &tp), GradedExpr::one());
        // D₊ x₊ = -i θ⁺
        assert_eq!(c.apply_d(Sector::Plus, &xp), GradedExpr::i().neg().mul(&tp));
        assert_eq!(c.apply_j(Sector::Plus, &tp), GradedExpr::one());
        assert_eq!(c.apply_j(Sector::Plus, &xp), GradedExpr::i().mul(&tp));
    }

    fn test_superfield() -> GradedExpr {
        let u = GradedExpr::atom(Atom::even_fn(
            "u",
            vec![
                GradedExpr::atom(Atom::coord("x+")),
                GradedExpr::atom(Atom::coord("x-")),
            ],
            vec![0, 0],
        ));
        let g = GradedExpr::atom(Atom::odd_fn(
            "g",
            vec![GradedExpr::atom(Atom::coord("x+"))],
            vec![0],
        ));
        let v = GradedExpr::atom(Atom::coord("x-"));
        let tp = GradedExpr::atom(Atom::odd_coord("th+"));
        let tm = GradedExpr::atom(Atom::odd_coord("th-"));
        u.add(&tp.mul(&g))
            .add(&tm.mul(&GradedExpr::atom(Atom::odd_const("a1"))))
            .add(&tp.mul(&tm).mul(&v))
    }

    #[test]
    fn expansion_round_trip() {
        let c = chart();
        let e = test_superfield();
        let f = c.theta_expand(&e);
        assert!(!f.base.is_zero());
        assert!(!f.top.is_zero());
        assert_eq!(c.recompose(&f), e);
    }

    #[test]
    fn square_identities_on_test_field() {
        let c = chart();
        let e = test_superfield();
        let dde = c.apply_d(Sector::Plus, &c.apply_d(Sector::Plus, &e));
        assert_eq!(dde, GradedExpr::i().neg().mul(&c.apply_dx(Sector::Plus, &e)));
        let jje = c.apply_j(Sector::Minus, &c.apply_j(Sector::Minus, &e));
        assert_eq!(jje, GradedExpr::i().mul(&c.apply_dx(Sector::Minus, &e)));
    }

    #[test]
    fn relation_grid_on_test_field() {
        let c = chart();
        let samples = vec![GradedExpr::one(), test_superfield()];
        let report = check_operator_relations(&c, &samples);
        assert_eq!(report.len(), 14);
        for r in &report {
            assert!(r.holds, "relation {} failed: {:?}", r.name, r.counterexample);
        }
    }

    #[test]
    fn susy_shift_matches_operator_to_first_order() {
        // polynomial-and-exponential field: nilpotent shifts expand exactly
        let c = chart();
        let xp = GradedExpr::atom(Atom::coord("x+"));
        let xm = GradedExpr::atom(Atom::coord("x-"));
        let tp = GradedExpr::atom(Atom::odd_coord("th+"));
        let tm = GradedExpr::atom(Atom::odd_coord("th-"));
        let e = xp
            .mul(&xp)
            .add(&xp.exp_series().unwrap())
            .add(&tp.mul(&tm).mul(&xm))
            .add(&tp.mul(&GradedExpr::atom(Atom::odd_const("a1"))).mul(&xp));
        let eta = GradedExpr::atom(Atom::odd_const("eta"));
        let shifted = c.susy_shift_plus(&e, &eta);
        let expected = e.add(&eta.mul(&c.apply_j(Sector::Plus, &e)));
        assert_eq!(shifted, expected);
    }
}
