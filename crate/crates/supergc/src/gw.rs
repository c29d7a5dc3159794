//! Builders for the linear-system matrices of conformally parametrized
//! surfaces in superspace: the bosonic, fermionic, and constant-f variants,
//! plus fully generic superfields for symbolic cross-checks.

use crate::expr::{Atom, GradedExpr, Parity};
use crate::matrix::SuperMatrix;
use crate::scalar::GaussRat;
use crate::superfield::{Chart, Sector};

/// The named surface fields entering the linear systems: the six
/// Christoffel-type potentials, the normal components `Q±`, the mean
/// curvature `H`, the conformal factor as `e^{±φ}` with its covariant
/// derivatives, and the normalization field `f`.
#[derive(Clone, Debug)]
pub struct SurfaceFields {
    pub r_plus: GradedExpr,
    pub r_minus: GradedExpr,
    pub s_plus: GradedExpr,
    pub s_minus: GradedExpr,
    pub t_plus: GradedExpr,
    pub t_minus: GradedExpr,
    pub q_plus: GradedExpr,
    pub q_minus: GradedExpr,
    pub h: GradedExpr,
    pub e_phi: GradedExpr,
    pub e_phi_inv: GradedExpr,
    pub d_plus_phi: GradedExpr,
    pub d_minus_phi: GradedExpr,
    pub f: GradedExpr,
}

impl SurfaceFields {
    /// Starts from all-zero fields with `f = 1` and `e^{±φ} = 1`.
    pub fn unit() -> Self {
        SurfaceFields {
            r_plus: GradedExpr::zero(),
            r_minus: GradedExpr::zero(),
            s_plus: GradedExpr::zero(),
            s_minus: GradedExpr::zero(),
            t_plus: GradedExpr::zero(),
            t_minus: GradedExpr::zero(),
            q_plus: GradedExpr::zero(),
            q_minus: GradedExpr::zero(),
            h: GradedExpr::zero(),
            e_phi: GradedExpr::one(),
            e_phi_inv: GradedExpr::one(),
            d_plus_phi: GradedExpr::zero(),
            d_minus_phi: GradedExpr::zero(),
            f: GradedExpr::one(),
        }
    }

    /// Installs the conformal factor from `φ` itself, deriving `e^{±φ}`
    /// exactly and the covariant derivatives `D±φ`.
    pub fn set_phi(&mut self, chart: &Chart, phi: &GradedExpr) -> Result<(), crate::expr::EngineError> {
        self.e_phi = phi.exp_series()?;
        self.e_phi_inv = phi.neg().exp_series()?;
        self.d_plus_phi = chart.apply_d(Sector::Plus, phi);
        self.d_minus_phi = chart.apply_d(Sector::Minus, phi);
        Ok(())
    }

    /// Installs the conformal factor from `e^{φ}` directly, inverting the
    /// nilpotent-soul series and recovering `D±φ = e^{−φ} D±(e^{φ})`.
    pub fn set_e_phi(&mut self, chart: &Chart, e_phi: &GradedExpr) -> Result<(), crate::expr::EngineError> {
        self.e_phi = e_phi.clone();
        self.e_phi_inv = e_phi.inv_series()?;
        self.d_plus_phi = self.e_phi_inv.mul(&chart.apply_d(Sector::Plus, e_phi));
        self.d_minus_phi = self.e_phi_inv.mul(&chart.apply_d(Sector::Minus, e_phi));
        Ok(())
    }
}

fn half() -> GaussRat {
    GaussRat::from_ratio(1, 2)
}

/// The linear-system matrices for a bosonic-normal surface:
///
/// ```text
/// A₊ = [  R⁺    R⁻     Q⁺f      ]     A₋ = [  S⁺      S⁻   ½e^φHf ]
///      [ -S⁺   -S⁻   -½e^φHf    ]          [  T⁺      T⁻    Q⁻f   ]
///      [  H   2e^{-φ}Q⁺   0     ]          [ -2e^{-φ}Q⁻  H    0   ]
/// ```
pub fn bosonic_gw(fl: &SurfaceFields) -> (SuperMatrix, SuperMatrix) {
    let hf2 = fl.e_phi.mul(&fl.h).mul(&fl.f).scale(&half());
    let a_plus = SuperMatrix::from_rows([
        [
            fl.r_plus.clone(),
            fl.r_minus.clone(),
            fl.q_plus.mul(&fl.f),
        ],
        [fl.s_plus.neg(), fl.s_minus.neg(), hf2.neg()],
        [
            fl.h.clone(),
            fl.e_phi_inv.mul(&fl.q_plus).scale(&GaussRat::from_int(2)),
            GradedExpr::zero(),
        ],
    ]);
    let a_minus = SuperMatrix::from_rows([
        [fl.s_plus.clone(), fl.s_minus.clone(), hf2],
        [
            fl.t_plus.clone(),
            fl.t_minus.clone(),
            fl.q_minus.mul(&fl.f),
        ],
        [
            fl.e_phi_inv.mul(&fl.q_minus).scale(&GaussRat::from_int(-2)),
            fl.h.clone(),
            GradedExpr::zero(),
        ],
    ]);
    (a_plus, a_minus)
}

/// The linear-system matrices for a fermionic-normal surface:
///
/// ```text
/// A₊ = [ Γ₁₁¹   0     Q⁺f   ]     A₋ = [ 0    0     ½e^φHf ]
///      [  0     0  -½e^φHf  ]          [ 0   Γ₂₂²    Q⁻f   ]
///      [  H  -2e^{-φ}Q⁺  0  ]          [ -2e^{-φ}Q⁻  -H  0 ]
/// ```
pub fn fermionic_gw(fl: &SurfaceFields) -> (SuperMatrix, SuperMatrix) {
    let hf2 = fl.e_phi.mul(&fl.h).mul(&fl.f).scale(&half());
    let a_plus = SuperMatrix::from_rows([
        [
            fl.r_plus.clone(),
            GradedExpr::zero(),
            fl.q_plus.mul(&fl.f),
        ],
        [GradedExpr::zero(), GradedExpr::zero(), hf2.neg()],
        [
            fl.h.clone(),
            fl.e_phi_inv.mul(&fl.q_plus).scale(&GaussRat::from_int(-2)),
            GradedExpr::zero(),
        ],
    ]);
    let a_minus = SuperMatrix::from_rows([
        [GradedExpr::zero(), GradedExpr::zero(), hf2],
        [
            GradedExpr::zero(),
            fl.t_minus.clone(),
            fl.q_minus.mul(&fl.f),
        ],
        [
            fl.e_phi_inv.mul(&fl.q_minus).scale(&GaussRat::from_int(-2)),
            fl.h.neg(),
            GradedExpr::zero(),
        ],
    ]);
    (a_plus, a_minus)
}

/// Fermionic matrices in the constant-`f` gauge, where the surviving
/// potentials reduce to `Γ₁₁¹ = D₊φ` and `Γ₂₂² = D₋φ`.
pub fn constant_f_gw(fl: &SurfaceFields) -> (SuperMatrix, SuperMatrix) {
    let mut fl2 = fl.clone();
    fl2.r_plus = fl.d_plus_phi.clone();
    fl2.t_minus = fl.d_minus_phi.clone();
    fermionic_gw(&fl2)
}

/// A fully generic superfield `p_0 + θ⁺ p_p + θ⁻ p_m + θ⁺θ⁻ p_t` whose
/// components are opaque functions of both bosonic coordinates with the
/// parities demanded by the requested overall parity.
pub fn generic_superfield(prefix: &str, parity: Parity) -> GradedExpr {
    let args = || {
        vec![
            GradedExpr::atom(Atom::coord("x+")),
            GradedExpr::atom(Atom::coord("x-")),
        ]
    };
    let comp = |suffix: &str, p: Parity| -> GradedExpr {
        let name = format!("{prefix}_{suffix}");
        GradedExpr::atom(match p {
            Parity::Even => Atom::even_fn(&name, args(), vec![0, 0]),
            Parity::Odd => Atom::odd_fn(&name, args(), vec![0, 0]),
        })
    };
    let flip = match parity {
        Parity::Even => Parity::Odd,
        Parity::Odd => Parity::Even,
    };
    let tp = GradedExpr::atom(Atom::odd_coord("th+"));
    let tm = GradedExpr::atom(Atom::odd_coord("th-"));
    comp("0", parity)
        .add(&tp.mul(&comp("p", flip)))
        .add(&tm.mul(&comp("m", flip)))
        .add(&tp.mul(&tm).mul(&comp("t", parity)))
}

/// Generic surface fields for the bosonic system: potentials odd,
/// `Q±`, `H`, `φ`, `f` even.
pub fn generic_bosonic_fields(chart: &Chart) -> SurfaceFields {
    let mut fl = SurfaceFields::unit();
    fl.r_plus = generic_superfield("Rp", Parity::Odd);
    fl.r_minus = generic_superfield("Rm", Parity::Odd);
    fl.s_plus = generic_superfield("Sp", Parity::Odd);
    fl.s_minus = generic_superfield("Sm", Parity::Odd);
    fl.t_plus = generic_superfield("Tp", Parity::Odd);
    fl.t_minus = generic_superfield("Tm", Parity::Odd);
    fl.q_plus = generic_superfield("Qp", Parity::Even);
    fl.q_minus = generic_superfield("Qm", Parity::Even);
    fl.h = generic_superfield("Hh", Parity::Even);
    fl.f = generic_superfield("ff", Parity::Even);
    let phi = generic_superfield("Ph", Parity::Even);
    fl.set_phi(chart, &phi)
        .expect("generic conformal factor expands");
    fl
}

/// Generic surface fields for the fermionic system: the two surviving
/// potentials, `Q±`, and `H` odd; `φ`, `f` even.
pub fn generic_fermionic_fields(chart: &Chart) -> SurfaceFields {
    let mut fl = SurfaceFields::unit();
    fl.r_plus = generic_superfield("Rp", Parity::Odd);
    fl.t_minus = generic_superfield("Tm", Parity::Odd);
    fl.q_plus = generic_superfield("Qp", Parity::Odd);
    fl.q_minus = generic_superfield("Qm", Parity::Odd);
    fl.h = generic_superfield("Hh", Parity::Odd);
    fl.f = generic_superfield("ff", Parity::Even);
    let phi = generic_superfield("Ph", Parity::Even);
    fl.set_phi(chart, &phi)
        .expect("generic conformal factor expands");
    fl
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bosonic_entries_as_printed() {
        let chart = Chart::standard();
        let fl = generic_bosonic_fields(&chart);
        let (a_plus, a_minus) = bosonic_gw(&fl);
        assert_eq!(a_plus.e[2][0], fl.h);
        assert_eq!(
            a_plus.e[2][1],
            fl.e_phi_inv.mul(&fl.q_plus).scale(&GaussRat::from_int(2))
        );
        assert_eq!(
            a_plus.e[1][2],
            fl.e_phi
                .mul(&fl.h)
                .mul(&fl.f)
                .scale(&GaussRat::from_ratio(-1, 2))
        );
        assert_eq!(a_minus.e[1][2], fl.q_minus.mul(&fl.f));
        assert!(a_plus.e[2][2].is_zero());
    }

    #[test]
    fn fermionic_entries_as_printed() {
        let chart = Chart::standard();
        let fl = generic_fermionic_fields(&chart);
        let (a_plus, a_minus) = fermionic_gw(&fl);
        assert_eq!(
            a_plus.e[2][1],
            fl.e_phi_inv.mul(&fl.q_plus).scale(&GaussRat::from_int(-2))
        );
        assert_eq!(a_minus.e[1][1], fl.t_minus);
        assert_eq!(a_minus.e[2][1], fl.h.neg());
        assert!(a_plus.e[0][1].is_zero());
    }

    #[test]
    fn constant_f_replaces_potentials() {
        let chart = Chart::standard();
        let fl = generic_fermionic_fields(&chart);
        let (a_plus, a_minus) = constant_f_gw(&fl);
        assert_eq!(a_plus.e[0][0], fl.d_plus_phi);
        assert_eq!(a_minus.e[1][1], fl.d_minus_phi);
    }

    #[test]
    fn zero_fields_give_zero_matrices() {
        let fl = SurfaceFields::unit();
        let (a_plus, a_minus) = bosonic_gw(&fl);
        assert!(a_plus.is_zero());
        assert!(a_minus.is_zero());
    }

    #[test]
    fn conformal_factor_routes_agree() {
        // e^{φ} installed directly matches exp of φ
        let chart = Chart::standard();
        let phi = generic_superfield("Ph", Parity::Even);
        let mut a = SurfaceFields::unit();
        a.set_phi(&chart, &phi).unwrap();
        let mut b = SurfaceFields::unit();
        b.set_e_phi(&chart, &a.e_phi).unwrap();
        assert_eq!(a.e_phi_inv, b.e_phi_inv);
        assert_eq!(a.d_plus_phi, b.d_plus_phi);
        assert_eq!(a.d_minus_phi, b.d_minus_phi);
    }
}
