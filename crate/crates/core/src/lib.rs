//! Reversed Dickson polynomials of the third kind over finite fields.
//!
//! `F_n(a, x) = D_{n,2}(a, x)` is evaluated three independent ways
//! (recurrence, explicit coefficients, functional equation in GF(q^2)) and
//! cross-checked against the Jacobsthal substitution. On top of that sit an
//! exhaustive permutation tester with its necessary-condition filters and a
//! generating-function computation of `sum_{a in GF(q)} F_n(1, a)`.
//!
//! - [`gf`]: GF(p^e), its quadratic extension, dense polynomials.
//! - [`dickson`]: coefficient forms and the evaluators.
//! - [`permcheck`]: permutation tests and necessary-condition filters.
//! - [`charsum`]: brute-force and recursive character sums.
//! - [`verify`]: named check suites used by the command-line tool.

pub mod charsum;
pub mod dickson;
pub mod error;
pub mod gf;
pub mod permcheck;
pub mod verify;

pub use dickson::{Kind, OddField};
pub use error::{Error, Result};
pub use gf::{DensePoly, FieldElem, FieldSpec, QuadExt};
