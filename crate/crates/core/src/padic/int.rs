use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// `ℓ^k` as a big integer.
pub fn pow_ell(ell: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(ell), k as usize)
}

/// Deterministic primality test for the small moduli used throughout.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An ℓ-adic integer known modulo `ℓ^prec`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PadicInt {
    ell: u64,
    value: BigInt,
    prec: u32,
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.value, self.ell, self.prec)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self.value, self.ell, self.prec)
    }
}

pub(crate) fn check_ell(ell: u64) -> Result<()> {
    if ell == 2 || !is_prime(ell) {
        return invalid(format!("ℓ = {ell} is not an odd prime"));
    }
    Ok(())
}

impl PadicInt {
    pub fn new(ell: u64, value: impl Into<BigInt>, prec: u32) -> Result<Self> {
        check_ell(ell)?;
        if prec == 0 {
            return invalid("precision must be at least 1");
        }
        Ok(Self::reduced(ell, value.into(), prec))
    }

    /// Builds `num/den`; the denominator must be prime to ℓ.
    pub fn from_rational(ell: u64, num: &BigInt, den: &BigInt, prec: u32) -> Result<Self> {
        check_ell(ell)?;
        if den.is_zero() {
            return invalid("zero denominator");
        }
        let modulus = pow_ell(ell, prec);
        let d = den.mod_floor(&modulus);
        let inv = mod_inverse(&d, &modulus)
            .ok_or_else(|| Error::InvalidInput(format!("denominator {den} is divisible by {ell}")))?;
        Ok(Self::reduced(ell, num * inv, prec))
    }

    pub(crate) fn reduced(ell: u64, value: BigInt, prec: u32) -> Self {
        let modulus = pow_ell(ell, prec);
        Self { ell, value: value.mod_floor(&modulus), prec }
    }

    pub fn zero(ell: u64, prec: u32) -> Self {
        Self { ell, value: BigInt::zero(), prec }
    }

    pub fn one(ell: u64, prec: u32) -> Self {
        Self::reduced(ell, BigInt::one(), prec)
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Canonical representative in `[0, ℓ^prec)`.
    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn modulus(&self) -> BigInt {
        pow_ell(self.ell, self.prec)
    }

    /// Representative in `(-ℓ^prec/2, ℓ^prec/2]`.
    pub fn signed_value(&self) -> BigInt {
        let m = self.modulus();
        if &self.value * 2 > m {
            &self.value - m
        } else {
            self.value.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// ℓ-adic valuation, `None` when the value is zero at this precision.
    pub fn valuation(&self) -> Option<u32> {
        valuation_big(&self.value, self.ell)
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// Drops precision to `prec` (no-op if already lower).
    pub fn with_prec(&self, prec: u32) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::reduced(self.ell, self.value.clone(), prec.max(1))
    }

    pub fn inverse(&self) -> Result<Self> {
        let modulus = self.modulus();
        let inv =
            mod_inverse(&self.value, &modulus).ok_or_else(|| Error::InvalidInput(format!("{self:?} is not a unit")))?;
        Ok(Self { ell: self.ell, value: inv, prec: self.prec })
    }

    /// Division by an ℓ-adic unit.
    pub fn div_unit(&self, unit: &Self) -> Result<Self> {
        Ok(self * &unit.inverse()?)
    }

    /// Divides by `ℓ^v`, losing `v` digits of precision.
    pub fn exact_divide(&self, v: u32) -> Result<Self> {
        if v == 0 {
            return Ok(self.clone());
        }
        if v >= self.prec {
            return Err(Error::PrecisionExhausted(format!(
                "cannot divide a value known mod {}^{} by {}^{v}",
                self.ell, self.prec, self.ell
            )));
        }
        if let Some(val) = self.valuation() {
            if val < v {
                return invalid(format!("{self:?} is not divisible by {}^{v}", self.ell));
            }
        }
        let q = &self.value / pow_ell(self.ell, v);
        Ok(Self::reduced(self.ell, q, self.prec - v))
    }

    /// Splits `x = ℓ^v · u` with `u` a unit known to precision `prec - v`.
    pub fn unit_part(&self) -> Result<(u32, Self)> {
        let v = self
            .valuation()
            .ok_or_else(|| Error::PrecisionExhausted(format!("value is zero mod {}^{}", self.ell, self.prec)))?;
        Ok((v, self.exact_divide(v)?))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let e = BigInt::from(k.unsigned_abs());
        let value = base.value.modpow(&e, &self.modulus());
        Ok(Self { ell: self.ell, value, prec: self.prec })
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.signed_value().to_i64()
    }

    fn combine(&self, other: &Self, f: impl FnOnce(&BigInt, &BigInt) -> BigInt) -> Self {
        assert_eq!(self.ell, other.ell, "mixing different primes");
        let prec = self.prec.min(other.prec);
        Self::reduced(self.ell, f(&self.value, &other.value), prec)
    }
}

pub(crate) fn valuation_big(x: &BigInt, ell: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let ell_big = BigInt::from(ell);
    let mut v = 0;
    let mut y = x.abs();
    loop {
        let (q, r) = y.div_rem(&ell_big);
        if !r.is_zero() {
            return Some(v);
        }
        y = q;
        v += 1;
    }
}

pub(crate) fn mod_inverse(a: &BigInt, modulus: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(modulus).extended_gcd(modulus);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(modulus))
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&PadicInt> for &PadicInt {
            type Output = PadicInt;
            fn $method(self, rhs: &PadicInt) -> PadicInt {
                self.combine(rhs, |a, b| a $op b)
            }
        }
        impl $tr<PadicInt> for PadicInt {
            type Output = PadicInt;
            fn $method(self, rhs: PadicInt) -> PadicInt {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&PadicInt> for PadicInt {
            type Output = PadicInt;
            fn $method(self, rhs: &PadicInt) -> PadicInt {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);

impl Neg for &PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        PadicInt::reduced(self.ell, -&self.value, self.prec)
    }
}

impl Neg for PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        -&self
    }
}
