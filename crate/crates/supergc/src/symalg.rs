//! The concrete symmetry algebras of the surface-compatibility systems:
//! generator bases for the bosonic extension, the fermionic extension, its
//! constant-torsion-function degeneration, and the finite classical algebra,
//! plus golden-table transcriptions and cell-by-cell comparison.

use crate::expr::{Atom, GradedExpr};
use crate::liesuper::{DirectionSpace, GeneratorBasis, StructureTable, SuperVectorField};
use crate::scalar::GaussRat;
use crate::verify::SystemKind;
use serde::{Deserialize, Serialize};

fn ec(name: &str) -> GradedExpr {
    GradedExpr::atom(Atom::even_const(name))
}

fn oc(name: &str) -> GradedExpr {
    GradedExpr::atom(Atom::odd_const(name))
}

fn co(name: &str) -> GradedExpr {
    GradedExpr::atom(Atom::coord(name))
}

fn th(name: &str) -> GradedExpr {
    GradedExpr::atom(Atom::odd_coord(name))
}

fn times(n: i64, e: GradedExpr) -> GradedExpr {
    e.scale(&GaussRat::from_int(n))
}

fn vf(parts: &[(&str, GradedExpr)]) -> SuperVectorField {
    let mut f = SuperVectorField::zero();
    for (dir, e) in parts {
        f.set(dir, e.clone());
    }
    f
}

/// Translation along a bosonic coordinate.
fn translation(coord: &str) -> SuperVectorField {
    vf(&[(coord, GradedExpr::one())])
}

/// Supersymmetry generator on one light-cone pair.
fn susy(theta: &str, coord: &str) -> SuperVectorField {
    vf(&[
        (theta, GradedExpr::one()),
        (coord, GradedExpr::i().mul(&th(theta))),
    ])
}

fn superspace_dirs() -> DirectionSpace {
    let mut s = DirectionSpace::new();
    s.coord("x+")
        .coord("x-")
        .odd_coord("th+")
        .odd_coord("th-")
        .even_field("phi");
    s
}

fn bosonic_basis() -> GeneratorBasis {
    let mut space = superspace_dirs();
    space
        .even_field("H")
        .even_field("Q+")
        .even_field("Q-")
        .odd_field("R+")
        .odd_field("R-")
        .odd_field("S+")
        .odd_field("S-")
        .odd_field("T+")
        .odd_field("T-")
        .even_field("f");
    let k1b = vf(&[
        ("x+", times(-2, co("x+"))),
        ("th+", th("th+").neg()),
        ("R+", oc("R+")),
        ("R-", times(2, oc("R-"))),
        ("S-", oc("S-")),
        ("T+", oc("T+").neg()),
        ("Q+", times(2, ec("Q+"))),
        ("phi", GradedExpr::one()),
    ]);
    let k2b = vf(&[
        ("x-", times(-2, co("x-"))),
        ("th-", th("th-").neg()),
        ("R-", oc("R-").neg()),
        ("S+", oc("S+")),
        ("T+", times(2, oc("T+"))),
        ("T-", oc("T-")),
        ("Q-", times(2, ec("Q-"))),
        ("phi", GradedExpr::one()),
    ]);
    let k0 = vf(&[
        ("H", ec("H").neg()),
        ("Q+", ec("Q+")),
        ("Q-", ec("Q-")),
        ("phi", GradedExpr::int(2)),
    ]);
    let c0 = vf(&[
        ("H", ec("H")),
        ("Q+", ec("Q+")),
        ("Q-", ec("Q-")),
        ("f", times(-2, ec("f"))),
    ]);
    GeneratorBasis {
        space,
        names: names(&["K1b", "P+", "J+", "K2b", "P-", "J-", "K0", "C0"]),
        fields: vec![
            k1b,
            translation("x+"),
            susy("th+", "x+"),
            k2b,
            translation("x-"),
            susy("th-", "x-"),
            k0,
            c0,
        ],
    }
}

fn fermionic_basis() -> GeneratorBasis {
    let mut space = superspace_dirs();
    space
        .odd_field("H")
        .odd_field("Q+")
        .odd_field("Q-")
        .odd_field("R+")
        .odd_field("T-")
        .even_field("f");
    let k1f = vf(&[
        ("x+", times(-2, co("x+"))),
        ("th+", th("th+").neg()),
        ("Q+", times(2, oc("Q+"))),
        ("R+", oc("R+")),
        ("phi", GradedExpr::one()),
    ]);
    let k2f = vf(&[
        ("x-", times(-2, co("x-"))),
        ("th-", th("th-").neg()),
        ("Q-", times(2, oc("Q-"))),
        ("T-", oc("T-")),
        ("phi", GradedExpr::one()),
    ]);
    let k0 = vf(&[
        ("H", oc("H").neg()),
        ("Q+", oc("Q+")),
        ("Q-", oc("Q-")),
        ("phi", GradedExpr::int(2)),
    ]);
    let c0 = vf(&[
        ("H", oc("H")),
        ("Q+", oc("Q+")),
        ("Q-", oc("Q-")),
        ("f", times(-2, ec("f"))),
    ]);
    let w = vf(&[("H", GradedExpr::one())]);
    GeneratorBasis {
        space,
        names: names(&["K1f", "P+", "J+", "K2f", "P-", "J-", "K0", "C0", "W"]),
        fields: vec![
            k1f,
            translation("x+"),
            susy("th+", "x+"),
            k2f,
            translation("x-"),
            susy("th-", "x-"),
            k0,
            c0,
            w,
        ],
    }
}

fn fermionic_constf_basis() -> GeneratorBasis {
    let mut space = superspace_dirs();
    space.odd_field("H").odd_field("Q+").odd_field("Q-");
    let kh1f = vf(&[
        ("x+", times(-2, co("x+"))),
        ("th+", th("th+").neg()),
        ("Q+", times(2, oc("Q+"))),
        ("phi", GradedExpr::one()),
    ]);
    let kh2f = vf(&[
        ("x-", times(-2, co("x-"))),
        ("th-", th("th-").neg()),
        ("Q-", times(2, oc("Q-"))),
        ("phi", GradedExpr::one()),
    ]);
    let k0 = vf(&[
        ("H", oc("H").neg()),
        ("Q+", oc("Q+")),
        ("Q-", oc("Q-")),
        ("phi", GradedExpr::int(2)),
    ]);
    let w = vf(&[("H", GradedExpr::one())]);
    GeneratorBasis {
        space,
        names: names(&["Kh1f", "P+", "J+", "Kh2f", "P-", "J-", "K0", "W"]),
        fields: vec![
            kh1f,
            translation("x+"),
            susy("th+", "x+"),
            kh2f,
            translation("x-"),
            susy("th-", "x-"),
            k0,
            w,
        ],
    }
}

fn classical_space() -> DirectionSpace {
    let mut s = DirectionSpace::new();
    s.coord("z")
        .coord("zb")
        .even_field("H")
        .even_field("Q")
        .even_field("Qb")
        .even_field("U");
    s
}

fn classical_basis() -> GeneratorBasis {
    let space = classical_space();
    let e0 = vf(&[
        ("H", ec("H").neg()),
        ("Q", ec("Q")),
        ("Qb", ec("Qb")),
        ("U", times(2, ec("U"))),
    ]);
    let e3 = vf(&[
        ("z", co("z")),
        ("Q", times(-2, ec("Q"))),
        ("U", ec("U").neg()),
    ]);
    let e5 = vf(&[
        ("z", co("z").powi(2)),
        ("Q", times(-4, co("z").mul(&ec("Q")))),
        ("U", times(-2, co("z").mul(&ec("U")))),
    ]);
    let e4 = vf(&[
        ("zb", co("zb")),
        ("Qb", times(-2, ec("Qb"))),
        ("U", ec("U").neg()),
    ]);
    let e6 = vf(&[
        ("zb", co("zb").powi(2)),
        ("Qb", times(-4, co("zb").mul(&ec("Qb")))),
        ("U", times(-2, co("zb").mul(&ec("U")))),
    ]);
    GeneratorBasis {
        space,
        names: names(&["e1", "e3", "e5", "e2", "e4", "e6", "e0"]),
        fields: vec![
            translation("z"),
            e3,
            e5,
            translation("zb"),
            e4,
            e6,
            e0,
        ],
    }
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// Generator basis of the symmetry algebra of the given system.
pub fn basis(kind: SystemKind) -> GeneratorBasis {
    match kind {
        SystemKind::Bosonic => bosonic_basis(),
        SystemKind::Fermionic => fermionic_basis(),
        SystemKind::FermionicConstantF => fermionic_constf_basis(),
        SystemKind::Classical => classical_basis(),
    }
}

/// Bundled golden-table name for the given system.
pub fn table_name(kind: SystemKind) -> &'static str {
    match kind {
        SystemKind::Bosonic => "bosonic",
        SystemKind::Fermionic => "fermionic",
        SystemKind::FermionicConstantF => "fermionic_constf",
        SystemKind::Classical => "classical_finite",
    }
}

/// Arbitrary-profile generator along `z`: for a symbol name `eta`, the
/// field `eta(z) d/dz + eta'(z) (-2Q d/dQ - U d/dU)`.
pub fn classical_profile_z(eta: &str) -> SuperVectorField {
    let z = co("z");
    let f = GradedExpr::atom(Atom::even_fn(eta, vec![z.clone()], vec![0]));
    let df = GradedExpr::atom(Atom::even_fn(eta, vec![z], vec![1]));
    vf(&[
        ("z", f),
        ("Q", times(-2, df.mul(&ec("Q")))),
        ("U", df.mul(&ec("U")).neg()),
    ])
}

/// Arbitrary-profile generator along `zb`, mirroring `classical_profile_z`.
pub fn classical_profile_zb(zeta: &str) -> SuperVectorField {
    let zb = co("zb");
    let f = GradedExpr::atom(Atom::even_fn(zeta, vec![zb.clone()], vec![0]));
    let df = GradedExpr::atom(Atom::even_fn(zeta, vec![zb], vec![1]));
    vf(&[
        ("zb", f),
        ("Qb", times(-2, df.mul(&ec("Qb")))),
        ("U", df.mul(&ec("U")).neg()),
    ])
}

/// A golden structure-table transcription, as bundled under `data/tables`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GoldenTable {
    /// Algebra key, matching the CLI spelling.
    pub algebra: String,
    /// Generator names in table order.
    pub generators: Vec<String>,
    /// Names of the odd generators.
    #[serde(default)]
    pub odd: Vec<String>,
    /// Bracket of each ordered (row, column) pair, expanded over the basis.
    pub rows: Vec<Vec<String>>,
    /// Free commentary on the algebra's structure.
    #[serde(default)]
    pub notes: String,
}

impl GoldenTable {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}

/// Cell-by-cell differences between a computed structure table and a golden
/// transcription; empty exactly when they agree everywhere.
pub fn table_diff(computed: &StructureTable, golden: &GoldenTable) -> Vec<String> {
    let mut out = Vec::new();
    if computed.names != golden.generators {
        out.push(format!(
            "generator order differs: computed {:?}, golden {:?}",
            computed.names, golden.generators
        ));
        return out;
    }
    for (name, flag) in computed.names.iter().zip(&computed.odd) {
        if golden.odd.contains(name) != *flag {
            out.push(format!("parity of {name} differs from the transcription"));
        }
    }
    if computed.entries.len() != golden.rows.len() {
        out.push(format!(
            "row count differs: computed {}, golden {}",
            computed.entries.len(),
            golden.rows.len()
        ));
        return out;
    }
    for (i, (crow, grow)) in computed.entries.iter().zip(&golden.rows).enumerate() {
        if crow.len() != grow.len() {
            out.push(format!("row {} length differs", computed.names[i]));
            continue;
        }
        for (k, (c, g)) in crow.iter().zip(grow).enumerate() {
            if c != g {
                out.push(format!(
                    "[{}, {}]: computed {}, golden {}",
                    computed.names[i], computed.names[k], c, g
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;
    use crate::liesuper::{antisymmetry_failures, build_table, jacobi_failures};

    fn check_table(kind: SystemKind) {
        let basis = basis(kind);
        let table = build_table(&basis).unwrap();
        let golden = data::load_table(table_name(kind)).unwrap();
        let diff = table_diff(&table, &golden);
        assert!(diff.is_empty(), "{}:\n{}", table_name(kind), diff.join("\n"));
    }

    #[test]
    fn bosonic_table_matches_transcription() {
        check_table(SystemKind::Bosonic);
    }

    #[test]
    fn fermionic_table_matches_transcription() {
        check_table(SystemKind::Fermionic);
    }

    #[test]
    fn fermionic_constf_table_matches_transcription() {
        check_table(SystemKind::FermionicConstantF);
    }

    #[test]
    fn classical_table_matches_transcription() {
        check_table(SystemKind::Classical);
    }

    #[test]
    fn antisymmetry_and_jacobi_hold_on_every_basis() {
        for kind in [
            SystemKind::Bosonic,
            SystemKind::Fermionic,
            SystemKind::FermionicConstantF,
            SystemKind::Classical,
        ] {
            let basis = basis(kind);
            let anti = antisymmetry_failures(&basis).unwrap();
            assert!(anti.is_empty(), "{:?}:\n{}", kind, anti.join("\n"));
            let jac = jacobi_failures(&basis).unwrap();
            assert!(jac.is_empty(), "{:?}:\n{}", kind, jac.join("\n"));
        }
    }

    #[test]
    fn profile_fields_close_into_the_profile_family() {
        let space = classical_space();
        let x1 = classical_profile_z("eta1");
        let x2 = classical_profile_z("eta2");
        let lhs = x1.bracket(&x2, &space).unwrap();

        let z = co("z");
        let e = |d: u32, n: &str| GradedExpr::atom(Atom::even_fn(n, vec![z.clone()], vec![d]));
        let wronski = e(0, "eta1")
            .mul(&e(1, "eta2"))
            .sub(&e(1, "eta1").mul(&e(0, "eta2")));
        let second = e(2, "eta1")
            .mul(&e(0, "eta2"))
            .sub(&e(0, "eta1").mul(&e(2, "eta2")));
        let rhs = vf(&[
            ("z", wronski),
            ("Q", times(2, second.mul(&ec("Q")))),
            ("U", second.mul(&ec("U"))),
        ]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn opposite_profile_fields_commute() {
        let space = classical_space();
        let x = classical_profile_z("eta");
        let y = classical_profile_zb("zeta");
        assert!(x.bracket(&y, &space).unwrap().is_zero());
    }

    #[test]
    fn profile_fields_commute_with_the_central_generator() {
        let basis = classical_basis();
        let e0 = basis.generator("e0").unwrap();
        for f in [classical_profile_z("eta"), classical_profile_zb("zeta")] {
            assert!(f.bracket(e0, &basis.space).unwrap().is_zero());
        }
    }

}
