//! Arithmetic in `Z_ℓ` at finite absolute precision.
//!
//! Every value carries the precision its inputs justify: ring operations keep
//! the minimum precision of their operands and exact division by `ℓ^v` drops
//! `v` digits. Linear algebra runs over `Z/ℓ^m`, which is enough to read off
//! elementary divisors below `ℓ^m`.

mod int;
mod log;
mod matrix;

pub use int::{is_prime, pow_ell, PadicInt};
pub use log::{iwasawa_log, iwasawa_log_unit, teichmuller, teichmuller_of};
pub use matrix::{kernel_basis, smith_normal_form, Exponent, PMatrix, SnfResult};
