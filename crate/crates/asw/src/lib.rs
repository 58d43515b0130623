//! Exact arithmetic for Artin-Schreier-Witt towers over the projective line
//! in characteristic p.
//!
//! The crate computes higher a-numbers of the curves in a Z_p-tower with
//! minimal break ratios two independent ways and cross-validates them:
//!
//! - [`cartier`] builds the tower in standard form, realizes the Cartier
//!   operator on the space of regular differentials as a semilinear matrix
//!   over F_{p^nu}, and reads kernel dimensions off exact Gaussian
//!   elimination.
//! - [`profile`] evaluates the combinatorial side: break/genus formulas,
//!   the digit functions xi and mu, lattice-point counts, cutoff parameters,
//!   and the closed-form a-number bounds.
//!
//! [`lfun`] adds the T-adic side: the Frobenius element alpha, character
//! values at places, truncated Euler products, Fredholm determinants of the
//! nuclear matrix, and the Newton-versus-Hodge polygon comparison.
//! [`iwasawa`] hosts the Galois action and the executable structural checks
//! (T-action on monomials, traces, module structure).
//!
//! All arithmetic is exact: finite fields, sparse polynomials, truncated
//! T-series, and arbitrary-precision rationals. No floating point.

pub mod cartier;
pub mod error;
pub mod field;
pub mod func;
pub mod iwasawa;
pub mod lfun;
pub mod matrix;
pub mod poly;
pub mod profile;
pub mod series;
pub mod tower;
pub mod witt;

pub use error::{Error, Result};
pub use field::{FieldElem, FieldParams};
pub use func::FuncElem;
pub use poly::PolyOverField;
pub use profile::TowerProfile;
pub use series::TruncSeries;
pub use tower::{Tower, TowerSpec};
