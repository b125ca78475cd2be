//! Logarithmic arithmetic of `Q` and quadratic fields.
//!
//! A place `𝔭` gets a degree `deg 𝔭 = f̃·deg q` (with `deg q = Log_Iw(q)` for
//! `q ≠ ℓ` and `deg ℓ = ℓ`) and a logarithmic valuation `ṽ_𝔭`. The
//! logarithmic class group is the quotient of degree-zero logarithmic
//! divisors by principal ones.

mod classgroup;
mod inertia;
mod structure;
mod valuation;

pub use classgroup::{log_class_group, log_class_group_at, LogClassGroup, LogOptions};
pub use inertia::{log_inertia, LogLocalData};
pub use structure::AbelianGroupStructure;
pub use valuation::{is_log_unit, log_divisor, log_valuation, place_degree, LogDivisor};
