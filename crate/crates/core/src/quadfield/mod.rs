//! Classical arithmetic of `Q` and quadratic fields `Q(√d)`.
//!
//! Ideals are handled through binary quadratic forms: the primitive ideal
//! `(a, (b+√D)/2)` corresponds to the form `(a, b, (b²−D)/4a)`. Class groups
//! are narrow form class groups, whose odd part is the odd part of the
//! ordinary class group.

mod classgroup;
mod element;
mod embed;
mod form;
mod ideal;
pub(crate) mod intlin;
mod sunits;
mod units;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::padic::is_prime;

pub use classgroup::{ClassGroupData, DEFAULT_DISC_BOUND, SYLOW_CAP};
pub use element::QuadElem;
pub use embed::{embed_at_ell, valuation_at, LocalNorm};
pub use form::{Form, Transform};
pub use ideal::QuadIdeal;
pub use sunits::{s_unit_system, SUnitOptions, SUnitSystem};
pub use units::fundamental_unit;

/// `Q` or a quadratic field `Q(√d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadField {
    d: Option<i64>,
    disc: i64,
}

/// Splitting behaviour of a rational prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LocalType {
    Rational,
    Split,
    Inert,
    Ramified,
}

/// A place of a quadratic field (or of `Q`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PlaceId {
    Finite { q: u64, index: u8, kind: LocalType },
    Infinite,
}

impl PlaceId {
    pub fn prime(&self) -> Option<u64> {
        match self {
            PlaceId::Finite { q, .. } => Some(*q),
            PlaceId::Infinite => None,
        }
    }

    pub fn kind(&self) -> Option<LocalType> {
        match self {
            PlaceId::Finite { kind, .. } => Some(*kind),
            PlaceId::Infinite => None,
        }
    }

    /// Residue degree over `Q`.
    pub fn residue_degree(&self) -> u32 {
        match self.kind() {
            Some(LocalType::Inert) => 2,
            _ => 1,
        }
    }

    /// Ramification index over `Q`.
    pub fn ramification(&self) -> u32 {
        match self.kind() {
            Some(LocalType::Ramified) => 2,
            _ => 1,
        }
    }

    /// The conjugate place (itself unless split).
    pub fn conjugate(&self) -> PlaceId {
        match *self {
            PlaceId::Finite { q, index, kind: LocalType::Split } => {
                PlaceId::Finite { q, index: 1 - index, kind: LocalType::Split }
            }
            p => p,
        }
    }
}

impl fmt::Display for PlaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceId::Infinite => write!(f, "∞"),
            PlaceId::Finite { q, index, kind: LocalType::Split } => {
                write!(f, "p{q}{}", if *index == 0 { "" } else { "'" })
            }
            PlaceId::Finite { q, .. } => write!(f, "p{q}"),
        }
    }
}

pub fn is_squarefree(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n.unsigned_abs();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p * p) {
            return false;
        }
        if m.is_multiple_of(p) {
            m /= p;
        }
        p += 1;
    }
    true
}

/// Squarefree kernel of a nonzero integer (sign kept).
pub fn squarefree_part(n: i64) -> i64 {
    assert!(n != 0, "squarefree part of zero");
    let mut m = n.unsigned_abs();
    let mut out = 1u64;
    let mut p = 2u64;
    while p * p <= m {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p;
        }
        p += 1;
    }
    out *= m;
    n.signum() * out as i64
}

/// Kronecker symbol `(D/q)` for a prime `q`.
pub fn kronecker(disc: i64, q: u64) -> i32 {
    if q == 2 {
        return match disc.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    let qb = BigInt::from(q);
    let a = BigInt::from(disc).mod_floor(&qb);
    if a.is_zero() {
        return 0;
    }
    let r = a.modpow(&BigInt::from((q - 1) / 2), &qb);
    if r == BigInt::from(1) {
        1
    } else {
        -1
    }
}

impl QuadField {
    pub fn rational() -> Self {
        Self { d: None, disc: 1 }
    }

    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 || !is_squarefree(d) {
            return invalid(format!("d = {d} is not a squarefree integer other than 0, 1"));
        }
        let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        Ok(Self { d: Some(d), disc })
    }

    pub fn d(&self) -> Option<i64> {
        self.d
    }

    /// Field discriminant (`1` for `Q`).
    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn is_rational(&self) -> bool {
        self.d.is_none()
    }

    pub fn is_real(&self) -> bool {
        self.d.is_some_and(|d| d > 0)
    }

    pub fn is_imaginary(&self) -> bool {
        self.d.is_some_and(|d| d < 0)
    }

    pub fn degree(&self) -> u32 {
        if self.is_rational() {
            1
        } else {
            2
        }
    }

    /// Trace of `ω` (`1` when `D ≡ 1 mod 4`, else `0`).
    pub(crate) fn omega_trace(&self) -> i64 {
        if self.disc.rem_euclid(4) == 1 {
            1
        } else {
            0
        }
    }

    /// The constant `c` in `ω² = t·ω + c`.
    pub(crate) fn omega_c(&self) -> i64 {
        if self.disc.rem_euclid(4) == 1 {
            (self.disc - 1) / 4
        } else {
            self.disc / 4
        }
    }

    pub fn splitting(&self, q: u64) -> LocalType {
        if self.is_rational() {
            return LocalType::Rational;
        }
        match kronecker(self.disc, q) {
            1 => LocalType::Split,
            -1 => LocalType::Inert,
            _ => LocalType::Ramified,
        }
    }

    /// Places above the prime `q`, index 0 first.
    pub fn split_prime(&self, q: u64) -> Result<Vec<PlaceId>> {
        if !is_prime(q) {
            return invalid(format!("{q} is not prime"));
        }
        let kind = self.splitting(q);
        let n = if kind == LocalType::Split { 2 } else { 1 };
        Ok((0..n).map(|index| PlaceId::Finite { q, index, kind }).collect())
    }

    /// `b` with `b² ≡ D mod 4q` and `0 ≤ b < 2q` defining the place of
    /// index 0 above a non-inert prime `q` as `(q, (b+√D)/2)`.
    pub(crate) fn place_b(&self, q: u64) -> Option<i64> {
        let q = q as i64;
        (0..2 * q).find(|b| (b * b - self.disc).rem_euclid(4 * q) == 0)
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.d {
            None => write!(f, "Q"),
            Some(d) => write!(f, "Q(√{d})"),
        }
    }
}

/// Validated constructor: `None` gives `Q`.
pub fn make_field(d: Option<i64>) -> Result<QuadField> {
    match d {
        None => Ok(QuadField::rational()),
        Some(d) => QuadField::new(d),
    }
}

/// Primes in increasing order starting at 2.
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime(n))
}

pub(crate) fn v_q(x: &BigInt, q: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let qb = BigInt::from(q);
    let mut y = x.abs();
    let mut v = 0;
    while (&y % &qb).is_zero() {
        y /= &qb;
        v += 1;
    }
    Some(v)
}
