//! Finitely presented torsion modules over `Λ = Z_ℓ[[T]]`, `T = γ − 1`:
//! finite levels `X_n = X/ω_n X`, capitulation kernels between levels,
//! Iwasawa invariants, and Γ-coinvariants of Tate twists.

mod invariants;
mod levels;
mod poly;
mod presentation;

pub use invariants::{
    characteristic_polynomial, iwasawa_invariants, level_decomposition, IwasawaInvariants, LevelDecomposition,
};
pub use levels::{capitulation_kernel, level_quotient, twisted_coinvariants, Finiteness, TwistedCoinvariants};
pub use presentation::{LambdaPresentation, DEFAULT_SIZE_CAP};
