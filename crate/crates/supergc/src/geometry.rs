//! Fundamental forms, discriminants, and mean/Gaussian curvatures for
//! classical and graded conformally parametrized surfaces. Forms are
//! expressed in formal displacement atoms: `dx`, `dy` classically, the
//! anticommuting pair `d+`, `d-` (with even square carriers `dp2`, `dm2`)
//! in the graded case.

use crate::expr::{Atom, GradedExpr};
use crate::gcsys::ClassicalFields;
use crate::gw::SurfaceFields;
use crate::scalar::GaussRat;
use serde::ser::SerializeStruct;
use serde::Serialize;

/// First and second fundamental forms with their coefficient matrices.
#[derive(Clone, Debug)]
pub struct FundamentalForms {
    /// First form in displacement atoms.
    pub first: GradedExpr,
    /// Second form in displacement atoms.
    pub second: GradedExpr,
    /// Coefficient matrix of the first form.
    pub metric: [[GradedExpr; 2]; 2],
    /// Coefficient matrix of the second form.
    pub shape: [[GradedExpr; 2]; 2],
}

/// Curvature data of a conformally parametrized surface.
#[derive(Clone, Debug)]
pub struct CurvatureReport {
    /// Gaussian curvature.
    pub gaussian: GradedExpr,
    /// Mean curvature.
    pub mean: GradedExpr,
    /// Umbilic condition: mean squared minus Gaussian.
    pub umbilic: GradedExpr,
    /// Discriminant of the first form, when the variant defines one.
    pub metric_discriminant: Option<GradedExpr>,
    /// Discriminant of the second form, when the variant defines one.
    pub shape_discriminant: Option<GradedExpr>,
}

fn matrix_strings(m: &[[GradedExpr; 2]; 2]) -> [[String; 2]; 2] {
    [
        [m[0][0].to_string(), m[0][1].to_string()],
        [m[1][0].to_string(), m[1][1].to_string()],
    ]
}

impl Serialize for FundamentalForms {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FundamentalForms", 4)?;
        st.serialize_field("first", &self.first.to_string())?;
        st.serialize_field("second", &self.second.to_string())?;
        st.serialize_field("metric", &matrix_strings(&self.metric))?;
        st.serialize_field("shape", &matrix_strings(&self.shape))?;
        st.end()
    }
}

impl Serialize for CurvatureReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CurvatureReport", 5)?;
        st.serialize_field("gaussian", &self.gaussian.to_string())?;
        st.serialize_field("mean", &self.mean.to_string())?;
        st.serialize_field("umbilic", &self.umbilic.to_string())?;
        st.serialize_field(
            "metric_discriminant",
            &self.metric_discriminant.as_ref().map(|e| e.to_string()),
        )?;
        st.serialize_field(
            "shape_discriminant",
            &self.shape_discriminant.as_ref().map(|e| e.to_string()),
        )?;
        st.end()
    }
}

fn half() -> GaussRat {
    GaussRat::from_ratio(1, 2)
}

/// Even displacement atom for the classical plane coordinates.
pub fn classical_displacement(name: &str) -> GradedExpr {
    GradedExpr::atom(Atom::even_const(name))
}

/// Odd displacement atom `d+` or `d-`.
pub fn displacement(name: &str) -> GradedExpr {
    GradedExpr::atom(Atom::Disp(name.to_string()))
}

/// Even carrier of a displacement square (`dp2` or `dm2`).
pub fn displacement_square(name: &str) -> GradedExpr {
    GradedExpr::atom(Atom::DispSquare(name.to_string()))
}

/// Shape matrix of the classical surface.
pub fn classical_shape_matrix(fl: &ClassicalFields) -> [[GradedExpr; 2]; 2] {
    let qsum = fl.q.add(&fl.qb);
    let qdiff_i = fl.q.sub(&fl.qb).mul(&GradedExpr::i());
    let euh = fl.e_u.mul(&fl.h);
    [
        [
            fl.e_u_inv.mul(&qsum.add(&euh)),
            fl.e_u_inv.mul(&qdiff_i),
        ],
        [
            fl.e_u_inv.mul(&qdiff_i),
            fl.e_u_inv.mul(&euh.sub(&qsum)),
        ],
    ]
}

/// Fundamental forms of the classical surface, in `dx`, `dy` atoms.
pub fn classical_forms(fl: &ClassicalFields) -> FundamentalForms {
    let dx = classical_displacement("dx");
    let dy = classical_displacement("dy");
    let dx2 = dx.mul(&dx);
    let dy2 = dy.mul(&dy);
    let first = fl.e_u.mul(&dx2.add(&dy2));
    let shape = classical_shape_matrix(fl);
    let second = fl
        .e_u
        .mul(&shape[0][0])
        .mul(&dx2)
        .add(&fl.e_u.mul(&shape[0][1]).mul(&dx).mul(&dy).scale(&GaussRat::from_int(2)))
        .add(&fl.e_u.mul(&shape[1][1]).mul(&dy2));
    let metric = [
        [GradedExpr::zero(), fl.e_u.scale(&half())],
        [fl.e_u.scale(&half()), GradedExpr::zero()],
    ];
    FundamentalForms {
        first,
        second,
        metric,
        shape,
    }
}

/// Mean and Gaussian curvature of the classical surface from the shape
/// matrix: half trace and determinant.
pub fn classical_curvatures(fl: &ClassicalFields) -> CurvatureReport {
    let b = classical_shape_matrix(fl);
    let mean = b[0][0].add(&b[1][1]).scale(&half());
    let gaussian = b[0][0].mul(&b[1][1]).sub(&b[0][1].mul(&b[1][0]));
    let umbilic = mean.mul(&mean).sub(&gaussian);
    CurvatureReport {
        gaussian,
        mean,
        umbilic,
        metric_discriminant: None,
        shape_discriminant: None,
    }
}

/// Coefficient matrix of the graded first form.
pub fn graded_metric_matrix(fl: &SurfaceFields) -> [[GradedExpr; 2]; 2] {
    let g12 = fl.e_phi.scale(&half());
    [
        [GradedExpr::zero(), g12.clone()],
        [g12.neg(), GradedExpr::zero()],
    ]
}

/// Coefficient matrix of the graded second form.
pub fn graded_shape_matrix(fl: &SurfaceFields) -> [[GradedExpr; 2]; 2] {
    let b12 = fl.e_phi.mul(&fl.h).scale(&half());
    [
        [fl.q_plus.clone(), b12.clone()],
        [b12.neg(), fl.q_minus.clone()],
    ]
}

/// Fundamental forms of the graded surface, in `d+`, `d-`, `dp2`, `dm2`
/// atoms.
pub fn graded_forms(fl: &SurfaceFields) -> FundamentalForms {
    let dp = displacement("d+");
    let dm = displacement("d-");
    let dpdm = dp.mul(&dm);
    let dp2 = displacement_square("d+");
    let dm2 = displacement_square("d-");
    let first = fl.f.mul(&dpdm).mul(&fl.e_phi);
    let second = fl.f.mul(
        &dp2.mul(&fl.q_plus)
            .add(&dpdm.mul(&fl.e_phi).mul(&fl.h))
            .add(&dm2.mul(&fl.q_minus)),
    );
    FundamentalForms {
        first,
        second,
        metric: graded_metric_matrix(fl),
        shape: graded_shape_matrix(fl),
    }
}

/// Product of the shape matrix with the explicit off-diagonal inverse of
/// the metric matrix.
pub fn shape_operator(fl: &SurfaceFields) -> [[GradedExpr; 2]; 2] {
    let s = graded_shape_matrix(fl);
    let two = GaussRat::from_int(2);
    let rinv01 = fl.e_phi_inv.scale(&two).neg();
    let rinv10 = fl.e_phi_inv.scale(&two);
    [
        [s[0][1].mul(&rinv10), s[0][0].mul(&rinv01)],
        [s[1][1].mul(&rinv10), s[1][0].mul(&rinv01)],
    ]
}

/// Curvatures of the graded surface: half trace and determinant of the
/// shape operator, with the form discriminants.
pub fn graded_curvatures(fl: &SurfaceFields) -> CurvatureReport {
    let so = shape_operator(fl);
    let mean = so[0][0].add(&so[1][1]).scale(&half());
    let gaussian = so[0][0].mul(&so[1][1]).sub(&so[0][1].mul(&so[1][0]));
    let umbilic = mean.mul(&mean).sub(&gaussian);
    let g = graded_metric_matrix(fl);
    let s = graded_shape_matrix(fl);
    let metric_disc = g[0][0].mul(&g[1][1]).add(&g[0][1].mul(&g[0][1]));
    let shape_disc = s[0][0].mul(&s[1][1]).add(&s[0][1].mul(&s[0][1]));
    CurvatureReport {
        gaussian,
        mean,
        umbilic,
        metric_discriminant: Some(metric_disc),
        shape_discriminant: Some(shape_disc),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gw::{generic_bosonic_fields, generic_fermionic_fields};
    use crate::superfield::Chart;

    #[test]
    fn flat_classical_curvatures_vanish() {
        let fl = ClassicalFields::flat();
        let rep = classical_curvatures(&fl);
        assert!(rep.gaussian.is_zero());
        assert!(rep.mean.is_zero());
        assert!(rep.umbilic.is_zero());
    }

    fn plane_fn(name: &str) -> GradedExpr {
        let args = vec![
            GradedExpr::atom(Atom::coord("z")),
            GradedExpr::atom(Atom::coord("zb")),
        ];
        GradedExpr::atom(Atom::even_fn(name, args, vec![0, 0]))
    }

    #[test]
    fn classical_mean_reproduces_input_and_umbilic_is_hopf_product() {
        let mut fl = ClassicalFields::flat();
        fl.set_u(&plane_fn("u")).unwrap();
        fl.h = plane_fn("Hh");
        fl.q = plane_fn("Qq");
        fl.qb = plane_fn("Qb");
        let rep = classical_curvatures(&fl);
        assert_eq!(rep.mean, fl.h);
        let four = GaussRat::from_int(4);
        let expect = fl
            .q
            .mul(&fl.qb)
            .mul(&fl.e_u_inv)
            .mul(&fl.e_u_inv)
            .scale(&four);
        assert_eq!(rep.umbilic, expect);
        let k_expect = fl.h.mul(&fl.h).sub(&expect);
        assert_eq!(rep.gaussian, k_expect);
    }

    #[test]
    fn graded_gaussian_matches_closed_form_generic() {
        let chart = Chart::standard();
        for fl in [
            generic_bosonic_fields(&chart),
            generic_fermionic_fields(&chart),
        ] {
            let rep = graded_curvatures(&fl);
            let four = GaussRat::from_int(4);
            let closed = fl
                .e_phi_inv
                .mul(&fl.e_phi_inv)
                .mul(&fl.q_plus)
                .mul(&fl.q_minus)
                .scale(&four)
                .add(&fl.h.mul(&fl.h));
            assert_eq!(rep.gaussian, closed);
            assert_eq!(rep.mean, fl.h);
            assert_eq!(
                rep.umbilic,
                fl.h.mul(&fl.h).sub(&closed),
            );
        }
    }

    #[test]
    fn fermionic_mean_square_vanishes() {
        let chart = Chart::standard();
        let fl = generic_fermionic_fields(&chart);
        let rep = graded_curvatures(&fl);
        assert!(rep.mean.mul(&rep.mean).is_zero());
        let four = GaussRat::from_int(4);
        let closed = fl
            .e_phi_inv
            .mul(&fl.e_phi_inv)
            .mul(&fl.q_plus)
            .mul(&fl.q_minus)
            .scale(&four);
        assert_eq!(rep.gaussian, closed);
    }

    #[test]
    fn unit_forms_are_bare_displacements() {
        let fl = SurfaceFields::unit();
        let forms = graded_forms(&fl);
        let dpdm = displacement("d+").mul(&displacement("d-"));
        assert_eq!(forms.first, dpdm);
        assert!(forms.second.is_zero());
    }

    #[test]
    fn discriminants_match_closed_forms() {
        let chart = Chart::standard();
        let fl = generic_bosonic_fields(&chart);
        let rep = graded_curvatures(&fl);
        let quarter = GaussRat::from_ratio(1, 4);
        let g = fl.e_phi.mul(&fl.e_phi).scale(&quarter);
        assert_eq!(rep.metric_discriminant.unwrap(), g);
        let b = fl
            .q_plus
            .mul(&fl.q_minus)
            .add(&fl.e_phi.mul(&fl.e_phi).mul(&fl.h).mul(&fl.h).scale(&quarter));
        assert_eq!(rep.shape_discriminant.unwrap(), b);
    }

    #[test]
    fn displacements_anticommute_and_squares_die() {
        let dp = displacement("d+");
        let dm = displacement("d-");
        assert_eq!(dp.mul(&dm), dm.mul(&dp).neg());
        assert!(dp.mul(&dp).is_zero());
        let dp2 = displacement_square("d+");
        assert!(dp2.mul(&dp2).is_zero());
    }
}
