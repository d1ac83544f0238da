//! Solution counts, bifurcation sweeps and reconstruction for the nonlocal
//! boundary blow-up problem
//!
//! ```text
//! A(‖u‖_{q1}, ‖u'‖_{r1}) u'' = λ B(‖u‖_{q2}, ‖u'‖_{r2}) u^p  on (−1, 1),   u(±1) = +∞
//! ```
//!
//! and its exponential counterpart. See the README for an overview.

// Tabulated constants are kept at their published precision, and `!(a > b)`
// is used on purpose so that NaN fails the test.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod bifurcation;
pub mod cli;
pub mod expcase;
pub mod exprdsl;
pub mod norms;
pub mod oracle;
pub mod quad;
pub mod roots;
pub mod scenarios;
pub mod specfun;
pub mod timemap;
pub mod verify;
