//! The four Gauss–Codazzi residual systems transcribed as expression
//! templates over bound surface fields: classical (3 equations), bosonic
//! (6), fermionic (4, plus the pre-reduction 6-tuple), and fermionic with
//! constant normalization (3). Also the normalization-field compatibility
//! residuals.

use crate::calculus::{d_coord, DepTable};
use crate::expr::GradedExpr;
use crate::gw::SurfaceFields;
use crate::scalar::GaussRat;
use crate::superfield::{Chart, Sector};

/// A named residual expression; zero on exact solutions.
pub type Residual = (String, GradedExpr);

fn named(name: &str, e: GradedExpr) -> Residual {
    (name.to_string(), e)
}

fn half() -> GaussRat {
    GaussRat::from_ratio(1, 2)
}

// ---------------------------------------------------------------------------
// classical surfaces in R^3
// ---------------------------------------------------------------------------

/// Chart for the classical system: two conformal coordinates and declared
/// dependencies of symmetry variables.
#[derive(Clone, Debug)]
pub struct ClassicalChart {
    pub coords: [String; 2],
    pub deps: DepTable,
}

impl ClassicalChart {
    pub fn standard() -> Self {
        ClassicalChart {
            coords: ["z".to_string(), "zb".to_string()],
            deps: DepTable::empty(),
        }
    }

    pub fn with_deps(deps: DepTable) -> Self {
        let mut c = ClassicalChart::standard();
        c.deps = deps;
        c
    }

    pub fn dz(&self, e: &GradedExpr) -> GradedExpr {
        d_coord(e, &self.coords[0], &self.deps)
    }

    pub fn dzb(&self, e: &GradedExpr) -> GradedExpr {
        d_coord(e, &self.coords[1], &self.deps)
    }
}

/// Bound fields of the classical system.
#[derive(Clone, Debug)]
pub struct ClassicalFields {
    pub u: GradedExpr,
    pub e_u: GradedExpr,
    pub e_u_inv: GradedExpr,
    pub h: GradedExpr,
    pub q: GradedExpr,
    pub qb: GradedExpr,
}

impl ClassicalFields {
    /// Zero curvature data over a flat metric.
    pub fn flat() -> Self {
        ClassicalFields {
            u: GradedExpr::zero(),
            e_u: GradedExpr::one(),
            e_u_inv: GradedExpr::one(),
            h: GradedExpr::zero(),
            q: GradedExpr::zero(),
            qb: GradedExpr::zero(),
        }
    }

    /// Installs `u`, deriving `e^{±u}` exactly.
    pub fn set_u(&mut self, u: &GradedExpr) -> Result<(), crate::expr::EngineError> {
        self.u = u.clone();
        self.e_u = u.exp_series()?;
        self.e_u_inv = u.neg().exp_series()?;
        Ok(())
    }
}

/// Classical Gauss–Codazzi residuals:
/// `∂∂̄u + ½H²e^u − 2QQ̄e^{−u}`, `∂Q̄ − ½e^u ∂̄H`, `∂̄Q − ½e^u ∂H`.
pub fn classical_gc(ch: &ClassicalChart, fl: &ClassicalFields) -> Vec<Residual> {
    let gauss = ch
        .dz(&ch.dzb(&fl.u))
        .add(&fl.h.mul(&fl.h).mul(&fl.e_u).scale(&half()))
        .sub(&fl.q.mul(&fl.qb).mul(&fl.e_u_inv).scale(&GaussRat::from_int(2)));
    let codazzi_a = ch.dz(&fl.qb).sub(&fl.e_u.mul(&ch.dzb(&fl.h)).scale(&half()));
    let codazzi_b = ch.dzb(&fl.q).sub(&fl.e_u.mul(&ch.dz(&fl.h)).scale(&half()));
    vec![
        named("gauss", gauss),
        named("codazzi-a", codazzi_a),
        named("codazzi-b", codazzi_b),
    ]
}

// ---------------------------------------------------------------------------
// bosonic-normal surfaces
// ---------------------------------------------------------------------------

/// The six bosonic Gauss–Codazzi residuals.
pub fn bosonic_gc(chart: &Chart, fl: &SurfaceFields) -> Vec<Residual> {
    let dp = |e: &GradedExpr| chart.apply_d(Sector::Plus, e);
    let dm = |e: &GradedExpr| chart.apply_d(Sector::Minus, e);
    let two = GaussRat::from_int(2);
    let i = dm(&fl.r_plus)
        .add(&dp(&fl.t_minus))
        .add(&dp(&fl.s_plus))
        .sub(&dm(&fl.s_minus));
    let ii = dm(&fl.r_plus)
        .sub(&fl.r_minus.mul(&fl.t_plus))
        .add(&dp(&fl.s_plus))
        .add(&fl.s_minus.mul(&fl.s_plus))
        .add(
            &fl.h
                .mul(&fl.h)
                .mul(&fl.e_phi)
                .mul(&fl.f)
                .scale(&half()),
        )
        .sub(
            &fl.q_plus
                .mul(&fl.q_minus)
                .mul(&fl.e_phi_inv)
                .mul(&fl.f)
                .scale(&two),
        );
    let iii = fl
        .q_plus
        .mul(&fl.t_minus)
        .sub(&fl.r_minus.mul(&fl.q_minus))
        .add(&dm(&fl.q_plus))
        .sub(&fl.q_plus.mul(&fl.d_minus_phi))
        .add(&fl.e_phi.mul(&dp(&fl.h)).scale(&half()));
    let iv = fl
        .q_minus
        .mul(&fl.r_plus)
        .sub(&fl.t_plus.mul(&fl.q_plus))
        .add(&dp(&fl.q_minus))
        .sub(&fl.q_minus.mul(&fl.d_plus_phi))
        .sub(&fl.e_phi.mul(&dm(&fl.h)).scale(&half()));
    let v = dm(&fl.r_minus)
        .sub(&fl.s_plus.mul(&fl.r_minus))
        .sub(&fl.r_minus.mul(&fl.t_minus))
        .sub(&fl.r_plus.mul(&fl.s_minus))
        .add(&dp(&fl.s_minus))
        .add(&fl.q_plus.mul(&fl.h).mul(&fl.f).scale(&two));
    let vi = dp(&fl.t_plus)
        .add(&fl.s_minus.mul(&fl.t_plus))
        .sub(&fl.t_plus.mul(&fl.r_plus))
        .add(&fl.t_minus.mul(&fl.s_plus))
        .sub(&dm(&fl.s_plus))
        .add(&fl.q_minus.mul(&fl.h).mul(&fl.f).scale(&two));
    vec![
        named("i", i),
        named("ii", ii),
        named("iii", iii),
        named("iv", iv),
        named("v", v),
        named("vi", vi),
    ]
}

/// Normalization-field compatibility residuals for the bosonic system:
/// the two derivative relations for `f` and the bracket combination.
pub fn bosonic_df_residuals(chart: &Chart, fl: &SurfaceFields) -> Vec<Residual> {
    let dp = |e: &GradedExpr| chart.apply_d(Sector::Plus, e);
    let dm = |e: &GradedExpr| chart.apply_d(Sector::Minus, e);
    let df_plus = dp(&fl.f).sub(
        &fl.r_plus
            .sub(&fl.s_minus)
            .sub(&fl.d_plus_phi)
            .mul(&fl.f),
    );
    let df_minus = dm(&fl.f).sub(
        &fl.s_plus
            .add(&fl.t_minus)
            .sub(&fl.d_minus_phi)
            .mul(&fl.f),
    );
    let bracket = dm(&fl.r_plus)
        .sub(&dm(&fl.s_minus))
        .add(&dp(&fl.s_plus))
        .add(&dp(&fl.t_minus))
        .mul(&fl.f);
    vec![
        named("df+", df_plus),
        named("df-", df_minus),
        named("bracket", bracket),
    ]
}

// ---------------------------------------------------------------------------
// fermionic-normal surfaces
// ---------------------------------------------------------------------------

/// The six pre-reduction residuals of the fermionic zero-curvature
/// expansion, as printed before discarding the redundant pair.
pub fn fermionic_pre_gc(chart: &Chart, fl: &SurfaceFields) -> Vec<Residual> {
    let dp = |e: &GradedExpr| chart.apply_d(Sector::Plus, e);
    let dm = |e: &GradedExpr| chart.apply_d(Sector::Minus, e);
    let two = GaussRat::from_int(2);
    let codazzi_minus = dp(&fl.q_minus)
        .sub(&fl.e_phi.mul(&dm(&fl.h)).scale(&half()))
        .add(&fl.q_minus.mul(&fl.d_plus_phi.sub(&fl.r_plus)));
    let codazzi_plus = dm(&fl.q_plus)
        .add(&fl.e_phi.mul(&dp(&fl.h)).scale(&half()))
        .add(&fl.q_plus.mul(&fl.d_minus_phi.sub(&fl.t_minus)));
    let i = dm(&fl.r_plus).add(
        &fl.e_phi_inv
            .mul(&fl.q_plus)
            .mul(&fl.q_minus)
            .mul(&fl.f)
            .scale(&two),
    );
    let ii = codazzi_plus.mul(&fl.f);
    let iii = dp(&fl.t_minus).add(
        &fl.e_phi_inv
            .mul(&fl.q_minus)
            .mul(&fl.q_plus)
            .mul(&fl.f)
            .scale(&two),
    );
    let iv = codazzi_minus.mul(&fl.f);
    vec![
        named("i", i),
        named("ii", ii),
        named("iii", iii),
        named("iv", iv),
        named("v", codazzi_minus),
        named("vi", codazzi_plus),
    ]
}

/// The four fermionic Gauss–Codazzi residuals.
pub fn fermionic_gc(chart: &Chart, fl: &SurfaceFields) -> Vec<Residual> {
    let pre = fermionic_pre_gc(chart, fl);
    let dp = |e: &GradedExpr| chart.apply_d(Sector::Plus, e);
    let dm = |e: &GradedExpr| chart.apply_d(Sector::Minus, e);
    let i = dp(&fl.t_minus).add(&dm(&fl.r_plus));
    vec![
        named("i", i),
        named("ii", pre[0].1.clone()),
        named("iii", pre[4].1.clone()),
        named("iv", pre[5].1.clone()),
    ]
}

/// Normalization-field compatibility residuals for the fermionic system.
pub fn fermionic_df_residuals(chart: &Chart, fl: &SurfaceFields) -> Vec<Residual> {
    let dp = |e: &GradedExpr| chart.apply_d(Sector::Plus, e);
    let dm = |e: &GradedExpr| chart.apply_d(Sector::Minus, e);
    let df_plus = dp(&fl.f).sub(&fl.r_plus.sub(&fl.d_plus_phi).mul(&fl.f));
    let df_minus = dm(&fl.f).sub(&fl.t_minus.sub(&fl.d_minus_phi).mul(&fl.f));
    let bracket = dp(&fl.t_minus).add(&dm(&fl.r_plus)).mul(&fl.f);
    vec![
        named("df+", df_plus),
        named("df-", df_minus),
        named("bracket", bracket),
    ]
}

/// The three fermionic residuals in the constant-`f` gauge.
pub fn constant_f_gc(chart: &Chart, fl: &SurfaceFields) -> Vec<Residual> {
    let dp = |e: &GradedExpr| chart.apply_d(Sector::Plus, e);
    let dm = |e: &GradedExpr| chart.apply_d(Sector::Minus, e);
    let two = GaussRat::from_int(2);
    let i = dm(&fl.d_plus_phi).add(
        &fl.e_phi_inv
            .mul(&fl.q_plus)
            .mul(&fl.q_minus)
            .mul(&fl.f)
            .scale(&two),
    );
    let ii = dp(&fl.q_minus).sub(&fl.e_phi.mul(&dm(&fl.h)).scale(&half()));
    let iii = dm(&fl.q_plus).add(&fl.e_phi.mul(&dp(&fl.h)).scale(&half()));
    vec![named("i", i), named("ii", ii), named("iii", iii)]
}

// ---------------------------------------------------------------------------
// zero-curvature cross-checks
// ---------------------------------------------------------------------------

/// Entrywise decomposition of the fermionic zero-curvature residual into the
/// packaged six-equation system and the normalization-compatibility defects.
/// Every returned expression vanishes identically, for arbitrary fields.
pub fn fermionic_zcc_defects(chart: &Chart, fl: &SurfaceFields) -> Vec<Residual> {
    use crate::gw::fermionic_gw;
    use crate::matrix::{zcc_residual, SignMatrix};
    let (a_plus, a_minus) = fermionic_gw(fl);
    let z = zcc_residual(chart, &a_plus, &a_minus, &SignMatrix::identity());
    let pre = fermionic_pre_gc(chart, fl);
    let g = |k: usize| pre[k].1.clone();
    let df = fermionic_df_residuals(chart, fl);
    let two = GaussRat::from_int(2);
    let half_eph_h = fl.e_phi.mul(&fl.h).scale(&half());
    vec![
        named("entry11 - i", z.e[0][0].sub(&g(0))),
        named("entry22 - iii", z.e[1][1].sub(&g(2))),
        named("entry12", z.e[0][1].clone()),
        named("entry21", z.e[1][0].clone()),
        named("entry33", z.e[2][2].clone()),
        named(
            "entry31 + 2*exp(-phi)*v",
            z.e[2][0].add(&fl.e_phi_inv.mul(&g(4)).scale(&two)),
        ),
        named(
            "entry32 + 2*exp(-phi)*vi",
            z.e[2][1].add(&fl.e_phi_inv.mul(&g(5)).scale(&two)),
        ),
        named(
            "entry13 - ii + (1/2)*exp(phi)*H*df+ + Q+*df-",
            z.e[0][2]
                .sub(&g(1))
                .add(&half_eph_h.mul(&df[0].1))
                .add(&fl.q_plus.mul(&df[1].1)),
        ),
        named(
            "entry23 - iv + Q-*df+ - (1/2)*exp(phi)*H*df-",
            z.e[1][2]
                .sub(&g(3))
                .add(&fl.q_minus.mul(&df[0].1))
                .sub(&half_eph_h.mul(&df[1].1)),
        ),
    ]
}

/// Entrywise decomposition of the bosonic zero-curvature residual (sign
/// matrix diag(1, 1, -1)) into the packaged six-equation system and the
/// normalization-compatibility defects. Every returned expression vanishes
/// identically, for arbitrary fields.
pub fn bosonic_zcc_defects(chart: &Chart, fl: &SurfaceFields) -> Vec<Residual> {
    use crate::gw::bosonic_gw;
    use crate::matrix::{zcc_residual, SignMatrix};
    let (a_plus, a_minus) = bosonic_gw(fl);
    let sign = SignMatrix::new(1, GradedExpr::int(-1));
    let z = zcc_residual(chart, &a_plus, &a_minus, &sign);
    let gc = bosonic_gc(chart, fl);
    let b = |k: usize| gc[k].1.clone();
    let df = bosonic_df_residuals(chart, fl);
    let two = GaussRat::from_int(2);
    let half_eph_h = fl.e_phi.mul(&fl.h).scale(&half());
    vec![
        named("entry11 - ii", z.e[0][0].sub(&b(1))),
        named("entry11 + entry22 - i", z.e[0][0].add(&z.e[1][1]).sub(&b(0))),
        named("entry12 - v", z.e[0][1].sub(&b(4))),
        named("entry21 - vi", z.e[1][0].sub(&b(5))),
        named("entry33", z.e[2][2].clone()),
        named(
            "entry31 + 2*exp(-phi)*iv",
            z.e[2][0].add(&fl.e_phi_inv.mul(&b(3)).scale(&two)),
        ),
        named(
            "entry32 - 2*exp(-phi)*iii",
            z.e[2][1].sub(&fl.e_phi_inv.mul(&b(2)).scale(&two)),
        ),
        named(
            "entry13 - iii*f - (1/2)*exp(phi)*H*df+ - Q+*df-",
            z.e[0][2]
                .sub(&b(2).mul(&fl.f))
                .sub(&half_eph_h.mul(&df[0].1))
                .sub(&fl.q_plus.mul(&df[1].1)),
        ),
        named(
            "entry23 - iv*f - Q-*df+ + (1/2)*exp(phi)*H*df-",
            z.e[1][2]
                .sub(&b(3).mul(&fl.f))
                .sub(&fl.q_minus.mul(&df[0].1))
                .add(&half_eph_h.mul(&df[1].1)),
        ),
    ]
}

/// Defects of the block decomposition of the zero-curvature residual with
/// sign matrix diag(1, 1, -1): the 2x2 frame block, the two column entries,
/// the two row entries, and the corner scalar, each minus its closed block
/// expression. All nine vanish identically for arbitrary matrices.
pub fn subblock_zcc_defects(
    chart: &Chart,
    a_plus: &crate::matrix::SuperMatrix,
    a_minus: &crate::matrix::SuperMatrix,
) -> Vec<Residual> {
    use crate::matrix::{zcc_residual, SignMatrix};
    let sign = SignMatrix::new(1, GradedExpr::int(-1));
    let z = zcc_residual(chart, a_plus, a_minus, &sign);
    let d = |s: Sector, e: &GradedExpr| chart.apply_d(s, e);
    let at = |m: &crate::matrix::SuperMatrix, i: usize, j: usize| m.e[i][j].clone();
    let mut out = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            // a coupling's sign under diag(1, 1, -1) is the product of the
            // row sign and the contraction sign: flipped exactly when one
            // of the two indices is the third slot
            let mut want = d(Sector::Plus, &at(a_minus, i, j)).add(&d(Sector::Minus, &at(a_plus, i, j)));
            for k in 0..3 {
                let term_pm = at(a_plus, i, k).mul(&at(a_minus, k, j));
                let term_mp = at(a_minus, i, k).mul(&at(a_plus, k, j));
                if (i == 2) != (k == 2) {
                    want = want.add(&term_pm).add(&term_mp);
                } else {
                    want = want.sub(&term_pm).sub(&term_mp);
                }
            }
            out.push(named(
                &format!("block{}{}", i + 1, j + 1),
                z.e[i][j].sub(&want),
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gw::{generic_bosonic_fields, generic_fermionic_fields};

    #[test]
    fn equation_counts_per_variant() {
        let sch = Chart::standard();
        let cch = ClassicalChart::standard();
        let cfl = ClassicalFields::flat();
        let bfl = generic_bosonic_fields(&sch);
        let ffl = generic_fermionic_fields(&sch);
        assert_eq!(classical_gc(&cch, &cfl).len(), 3);
        assert_eq!(bosonic_gc(&sch, &bfl).len(), 6);
        assert_eq!(fermionic_gc(&sch, &ffl).len(), 4);
        assert_eq!(constant_f_gc(&sch, &ffl).len(), 3);
    }

    #[test]
    fn flat_classical_solution_is_exact() {
        let ch = ClassicalChart::standard();
        let fl = ClassicalFields::flat();
        for (name, r) in classical_gc(&ch, &fl) {
            assert!(r.is_zero(), "{name} residual nonzero: {r}");
        }
    }

    #[test]
    fn bosonic_first_equation_is_the_bracket_compatibility() {
        let chart = Chart::standard();
        let fl = generic_bosonic_fields(&chart);
        let gc = bosonic_gc(&chart, &fl);
        let df = bosonic_df_residuals(&chart, &fl);
        assert_eq!(gc[0].1.mul(&fl.f), df[2].1);
    }

    #[test]
    fn fermionic_first_equation_is_the_bracket_compatibility() {
        let chart = Chart::standard();
        let fl = generic_fermionic_fields(&chart);
        let gc = fermionic_gc(&chart, &fl);
        let df = fermionic_df_residuals(&chart, &fl);
        assert_eq!(gc[0].1.mul(&fl.f), df[2].1);
    }

    #[test]
    fn fermionic_zero_curvature_matches_equation_list() {
        let chart = Chart::standard();
        let fl = generic_fermionic_fields(&chart);
        for (name, defect) in fermionic_zcc_defects(&chart, &fl) {
            assert!(defect.is_zero(), "{name} defect nonzero: {defect}");
        }
    }

    #[test]
    fn bosonic_zero_curvature_matches_equation_list() {
        let chart = Chart::standard();
        let fl = generic_bosonic_fields(&chart);
        for (name, defect) in bosonic_zcc_defects(&chart, &fl) {
            assert!(defect.is_zero(), "{name} defect nonzero: {defect}");
        }
    }

    #[test]
    fn subblock_expansion_matches_block_equations() {
        use crate::expr::Parity;
        use crate::gw::generic_superfield;
        use crate::matrix::SuperMatrix;
        let chart = Chart::standard();
        let block = |tag: &str| {
            let g = |p: &str, parity: Parity| generic_superfield(&format!("{p}{tag}"), parity);
            SuperMatrix::from_rows([
                [
                    g("Fa", Parity::Odd),
                    g("Fb", Parity::Odd),
                    g("Ia", Parity::Even),
                ],
                [
                    g("Fc", Parity::Odd),
                    g("Fd", Parity::Odd),
                    g("Ib", Parity::Even),
                ],
                [
                    g("Ja", Parity::Even),
                    g("Jb", Parity::Even),
                    g("Et", Parity::Odd),
                ],
            ])
        };
        let a_plus = block("p");
        let a_minus = block("m");
        for (name, defect) in subblock_zcc_defects(&chart, &a_plus, &a_minus) {
            assert!(defect.is_zero(), "{name} defect nonzero: {defect}");
        }
    }
}
