//! Exact ℓ-adic engine for logarithmic class groups of `Q` and quadratic
//! fields, the wild étale kernel reports built on top of them, and a
//! synthetic Iwasawa codescent laboratory.
//!
//! The crate is organised bottom-up:
//!
//! - [`padic`]: `Z/ℓ^m` arithmetic, the Iwasawa logarithm, Smith normal form.
//! - [`quadfield`]: discriminants, primes, form class groups, units, S-units.
//! - [`logarith`]: logarithmic valuations, divisors and class groups.
//! - [`chidecomp`]: idempotents and characters of small abelian groups.
//! - [`wildkernel`]: wild kernel reports, reflection scans, cubic criteria.
//! - [`codescent`]: finitely presented Λ-modules and their level quotients.

pub mod chidecomp;
pub mod codescent;
pub mod error;
pub mod logarith;
pub mod padic;
pub mod quadfield;
pub mod wildkernel;

pub use error::{Error, Result};
pub use logarith::{AbelianGroupStructure, LogClassGroup};
pub use padic::{PMatrix, PadicInt};
pub use quadfield::{PlaceId, QuadField};
