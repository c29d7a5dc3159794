//! Graded 3×3 matrix algebra over canonical expressions and the
//! zero-curvature residual of linear superspace systems.

use crate::expr::GradedExpr;
use crate::superfield::{Chart, Sector};
use serde::Serialize;

/// A 3×3 matrix of graded expressions; entry products preserve left-right
/// order so odd entries pick up the correct signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperMatrix {
    pub e: [[GradedExpr; 3]; 3],
}

impl SuperMatrix {
    pub fn zero() -> Self {
        SuperMatrix {
            e: std::array::from_fn(|_| std::array::from_fn(|_| GradedExpr::zero())),
        }
    }

    pub fn identity() -> Self {
        let mut m = SuperMatrix::zero();
        for i in 0..3 {
            m.e[i][i] = GradedExpr::one();
        }
        m
    }

    pub fn from_rows(rows: [[GradedExpr; 3]; 3]) -> Self {
        SuperMatrix { e: rows }
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|r| r.iter().all(|x| x.is_zero()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = SuperMatrix::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] = self.e[i][j].add(&other.e[i][j]);
            }
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    /// Left-multiplies every entry by `c`.
    pub fn scale(&self, c: &GradedExpr) -> Self {
        self.map(|x| c.mul(x))
    }

    pub fn map<F: Fn(&GradedExpr) -> GradedExpr>(&self, f: F) -> Self {
        let mut m = SuperMatrix::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] = f(&self.e[i][j]);
            }
        }
        m
    }

    /// Matrix product with entry factors multiplied in left-right order.
    pub fn mul(&self, other: &Self) -> Self {
        let mut m = SuperMatrix::zero();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = GradedExpr::zero();
                for (k, row) in other.e.iter().enumerate() {
                    s = s.add(&self.e[i][k].mul(&row[j]));
                }
                m.e[i][j] = s;
            }
        }
        m
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        self.mul(other).add(&other.mul(self))
    }

    /// Canonical display strings, row-major.
    pub fn to_strings(&self) -> [[String; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.e[i][j].display()))
    }
}

impl Serialize for SuperMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

/// Diagonal sign matrix `diag(1, 1, ±ε)` scaled by a global sign.
#[derive(Clone, Debug)]
pub struct SignMatrix {
    pub diag: [GradedExpr; 3],
}

impl SignMatrix {
    /// `sign * diag(1, 1, third)`.
    pub fn new(sign: i64, third: GradedExpr) -> Self {
        let s = GradedExpr::int(sign);
        SignMatrix {
            diag: [s.clone(), s.clone(), s.mul(&third)],
        }
    }

    pub fn identity() -> Self {
        SignMatrix::new(1, GradedExpr::one())
    }

    /// `E * A` (scales rows).
    pub fn left_mul(&self, a: &SuperMatrix) -> SuperMatrix {
        let mut m = SuperMatrix::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] = self.diag[i].mul(&a.e[i][j]);
            }
        }
        m
    }
}

/// Zero-curvature residual `D₊A₋ + D₋A₊ − {EA₊, EA₋}` with the covariant
/// derivatives applied entrywise. Vanishes identically on a consistent
/// linear system.
pub fn zcc_residual(
    chart: &Chart,
    a_plus: &SuperMatrix,
    a_minus: &SuperMatrix,
    e: &SignMatrix,
) -> SuperMatrix {
    let d_plus_aminus = a_minus.map(|x| chart.apply_d(Sector::Plus, x));
    let d_minus_aplus = a_plus.map(|x| chart.apply_d(Sector::Minus, x));
    let ea_plus = e.left_mul(a_plus);
    let ea_minus = e.left_mul(a_minus);
    d_plus_aminus
        .add(&d_minus_aplus)
        .sub(&ea_plus.anticommutator(&ea_minus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Atom;
    use crate::randgen::random_mixed_superfield;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_and_sign_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut a = SuperMatrix::zero();
        for i in 0..3 {
            for j in 0..3 {
                a.e[i][j] = random_mixed_superfield(&mut rng);
            }
        }
        assert_eq!(a.mul(&SuperMatrix::identity()), a);
        assert_eq!(SuperMatrix::identity().mul(&a), a);
        for sign in [1, -1] {
            let e = SignMatrix::new(sign, GradedExpr::int(-1));
            let ee = e.left_mul(&e.left_mul(&SuperMatrix::identity()));
            assert_eq!(ee, SuperMatrix::identity());
        }
    }

    #[test]
    fn odd_entry_order_sensitivity() {
        let tp = GradedExpr::atom(Atom::odd_coord("th+"));
        let tm = GradedExpr::atom(Atom::odd_coord("th-"));
        let mut a = SuperMatrix::zero();
        a.e[0][1] = tp;
        let mut b = SuperMatrix::zero();
        b.e[1][0] = tm;
        let ab = a.mul(&b);
        let ba = b.mul(&a);
        assert_eq!(ab.e[0][0], ba.e[1][1].neg());
    }

    #[test]
    fn associativity_and_distributivity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..3 {
            let mut mats = vec![];
            for _ in 0..3 {
                let mut m = SuperMatrix::zero();
                for i in 0..3 {
                    for j in 0..3 {
                        // small entries keep the product tractable
                        if rng.gen_bool(0.5) {
                            m.e[i][j] = random_mixed_superfield(&mut rng);
                        }
                    }
                }
                mats.push(m);
            }
            let (a, b, c) = (&mats[0], &mats[1], &mats[2]);
            assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
            assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
        }
    }

    #[test]
    fn zcc_zero_on_zero_system() {
        let chart = Chart::standard();
        let z = SuperMatrix::zero();
        let e = SignMatrix::new(1, GradedExpr::int(-1));
        assert!(zcc_residual(&chart, &z, &z, &e).is_zero());
    }
}
