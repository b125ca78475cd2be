use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::QuadField;
use crate::error::{invalid, Result};

/// Field element `(x + y·ω)/den` over the integral basis `{1, ω}`, where
/// `ω = (1+√D)/2` if `D ≡ 1 mod 4` and `ω = √D/2` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadElem {
    field: QuadField,
    x: BigInt,
    y: BigInt,
    den: BigInt,
}

impl QuadElem {
    pub fn new(field: QuadField, x: BigInt, y: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return invalid("zero denominator");
        }
        if field.is_rational() && !y.is_zero() {
            return invalid("irrational element of Q");
        }
        Ok(Self::normalized(field, x, y, den))
    }

    fn normalized(field: QuadField, mut x: BigInt, mut y: BigInt, mut den: BigInt) -> Self {
        if den.is_negative() {
            x = -x;
            y = -y;
            den = -den;
        }
        let g = x.gcd(&y).gcd(&den);
        if !g.is_zero() && !g.is_one() {
            x /= &g;
            y /= &g;
            den /= &g;
        }
        Self { field, x, y, den }
    }

    pub fn from_int(field: QuadField, n: impl Into<BigInt>) -> Self {
        Self::normalized(field, n.into(), BigInt::zero(), BigInt::one())
    }

    pub fn from_rational(field: QuadField, r: &BigRational) -> Self {
        Self::normalized(field, r.numer().clone(), BigInt::zero(), r.denom().clone())
    }

    /// `ω` itself.
    pub fn omega(field: QuadField) -> Self {
        Self::normalized(field, BigInt::zero(), BigInt::one(), BigInt::one())
    }

    /// `(a + b√D)/2`.
    pub fn from_half_sqrt(field: QuadField, a: BigInt, b: BigInt) -> Self {
        let t = field.omega_trace();
        Self::normalized(field, a - &b * t, b * 2, BigInt::from(2))
    }

    /// `(a + b√d)/den`.
    pub fn from_sqrt_d(field: QuadField, a: BigInt, b: BigInt, den: BigInt) -> Self {
        if field.omega_trace() == 1 {
            // √d = 2ω − 1
            Self::normalized(field, a - &b, b * 2, den)
        } else {
            Self::normalized(field, a, b, den)
        }
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field, "elements of different fields");
        let t = self.field.omega_trace();
        let c = self.field.omega_c();
        let yy = &self.y * &other.y;
        let x = &self.x * &other.x + &yy * c;
        let y = &self.x * &other.y + &other.x * &self.y + &yy * t;
        Self::normalized(self.field, x, y, &self.den * &other.den)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::from_int(self.field, 1);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::normalized(self.field, &self.x * r.numer(), &self.y * r.numer(), &self.den * r.denom())
    }

    pub fn conj(&self) -> Self {
        let t = self.field.omega_trace();
        Self::normalized(self.field, &self.x + &self.y * t, -&self.y, self.den.clone())
    }

    /// Norm of the integral numerator `x + y·ω`.
    pub fn numerator_norm(&self) -> BigInt {
        let t = self.field.omega_trace();
        let c = self.field.omega_c();
        if self.field.is_rational() {
            return self.x.clone();
        }
        &self.x * &self.x + &self.x * &self.y * t - &self.y * &self.y * c
    }

    pub fn norm(&self) -> BigRational {
        let den = if self.field.is_rational() { self.den.clone() } else { &self.den * &self.den };
        BigRational::new(self.numerator_norm(), den)
    }

    pub fn trace(&self) -> BigRational {
        let t = self.field.omega_trace();
        let tr = if self.field.is_rational() { self.x.clone() } else { &self.x * 2 + &self.y * t };
        BigRational::new(tr, self.den.clone())
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return invalid("inverse of zero");
        }
        let n = self.norm();
        Ok(self.conj().scale(&n.recip()))
    }

    /// Coordinates `(a, b, den)` with the element equal to `(a + b√d)/den`.
    pub fn sqrt_d_coords(&self) -> (BigInt, BigInt, BigInt) {
        if self.field.omega_trace() == 1 {
            // x + y(1+√d)/2
            (&self.x * 2 + &self.y, self.y.clone(), &self.den * 2)
        } else {
            (self.x.clone(), self.y.clone(), self.den.clone())
        }
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (mut a, mut b, mut den) = self.sqrt_d_coords();
        let g = a.gcd(&b).gcd(&den);
        if !g.is_zero() {
            a /= &g;
            b /= &g;
            den /= &g;
        }
        let num = match self.field.d() {
            Some(d) if !b.is_zero() => {
                let sign = if b.is_negative() { "-" } else { "+" };
                let mag = b.abs();
                let coef = if mag.is_one() { String::new() } else { mag.to_string() };
                if a.is_zero() {
                    format!("{}{coef}√{d}", if b.is_negative() { "-" } else { "" })
                } else {
                    format!("{a}{sign}{coef}√{d}")
                }
            }
            _ => a.to_string(),
        };
        if den.is_one() {
            write!(f, "{num}")
        } else if b.is_zero() || a.is_zero() {
            write!(f, "{num}/{den}")
        } else {
            write!(f, "({num})/{den}")
        }
    }
}
