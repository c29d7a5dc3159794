//! Exact symbolic calculus on two-dimensional superspace and the machinery
//! built on top of it: superfield derivative operators, graded matrix
//! algebra with zero-curvature residuals, structure-constant tables for
//! vector-field superalgebras, adjoint orbits of exponentiated generators,
//! surface curvature invariants, and batch verification of closed-form
//! solution records.
//!
//! The engine is exact end to end: coefficients are Gaussian rationals,
//! odd generators anticommute with permutation signs absorbed into the
//! coefficient, and every operation returns a canonical form, so structural
//! equality is mathematical equality.
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! ```text
//! cargo run --example operator_identities    derivative operator algebra on random superfields
//! cargo run --example exp_expansion          exact exponentials of superfields
//! cargo run --example golden_tables          structure-constant tables for the three superalgebras
//! cargo run --example classical_algebra      the classical symmetry algebra and its commutation table
//! cargo run --example zcc_cross_check        linear-system residuals against zero-curvature expansion
//! cargo run --example verify_solutions       batch verification of the bundled solution records
//! cargo run --example curvatures             fundamental forms and curvature invariants
//! cargo run --example adjoint_orbits         conjugation of generators by exponentiated flows
//! cargo run --example subalgebra_audit       parity/closure audit of the subalgebra classification data
//! ```
//!
//! The same capabilities are scriptable through the `supergc` binary
//! (`verify`, `table`, `adjoint`, `curvature`, `subalgebras`, `canon`).

pub mod scalar;
pub mod expr;
pub mod calculus;
pub mod superfield;
pub mod randgen;
pub mod matrix;
pub mod gw;
pub mod gcsys;
pub mod geometry;
pub mod parser;
pub mod rules;
pub mod verify;
pub mod scenario;
pub mod data;
pub mod adjoint;
pub mod liesuper;
pub mod subalg;
pub mod symalg;
