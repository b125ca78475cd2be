use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary quadratic form `a·x² + b·xy + c·y²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Form {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

/// Integer matrix `[[α, β], [γ, δ]]` acting by `(f∘M)(x, y) = f(αx+βy, γx+δy)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transform(pub [[BigInt; 2]; 2]);

impl Transform {
    pub fn identity() -> Self {
        Self([[BigInt::one(), BigInt::zero()], [BigInt::zero(), BigInt::one()]])
    }

    fn swap() -> Self {
        Self([[BigInt::zero(), -BigInt::one()], [BigInt::one(), BigInt::zero()]])
    }

    fn translate(k: BigInt) -> Self {
        Self([[BigInt::one(), k], [BigInt::zero(), BigInt::one()]])
    }

    pub fn then(&self, n: &Transform) -> Transform {
        let m = &self.0;
        let n = &n.0;
        let e = |i: usize, j: usize| &m[i][0] * &n[0][j] + &m[i][1] * &n[1][j];
        Transform([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    /// First column: the vector the transformed form evaluates at `(1, 0)`.
    pub fn first_column(&self) -> (BigInt, BigInt) {
        (self.0[0][0].clone(), self.0[1][0].clone())
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl Form {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        Self { a: a.into(), b: b.into(), c: c.into() }
    }

    /// Form with given `a`, `b` and discriminant `D`; `4a` must divide `b² − D`.
    pub fn from_ab(a: BigInt, b: BigInt, disc: i64) -> Self {
        let c = (&b * &b - disc) / (&a * 4);
        Self { a, b, c }
    }

    pub fn principal(disc: i64) -> Self {
        let b = BigInt::from(disc.rem_euclid(2));
        Self::from_ab(BigInt::one(), b, disc)
    }

    pub fn disc(&self) -> BigInt {
        &self.b * &self.b - &self.a * &self.c * 4
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c).is_one()
    }

    /// Inverse class.
    pub fn inverse(&self) -> Self {
        Self { a: self.a.clone(), b: -&self.b, c: self.c.clone() }
    }

    pub fn apply(&self, m: &Transform) -> Form {
        let [[al, be], [ga, de]] = &m.0;
        Form {
            a: self.eval(al, ga),
            b: &self.a * al * be * 2 + &self.b * (al * de + be * ga) + &self.c * ga * de * 2,
            c: self.eval(be, de),
        }
    }

    /// Gauss composition of primitive forms with positive leading coefficient.
    ///
    /// Returns the composite `(a₃, b₃, c₃)` together with
    /// `d₁ = gcd(a₁, a₂, (b₁+b₂)/2)`, so that the corresponding ideals satisfy
    /// `I₁·I₂ = d₁·I₃`.
    pub fn compose(f1: &Form, f2: &Form) -> (Form, BigInt) {
        let (f1, f2) = if f1.a > f2.a { (f2, f1) } else { (f1, f2) };
        let s: BigInt = (&f1.b + &f2.b) / 2;
        let n = &f2.b - &s;
        let (y1, d) = if (&f2.a % &f1.a).is_zero() {
            (BigInt::zero(), f1.a.clone())
        } else {
            let e = f2.a.extended_gcd(&f1.a);
            (e.x, e.gcd)
        };
        let (x2, y2, d1) = if (&s % &d).is_zero() {
            (BigInt::zero(), -BigInt::one(), d.clone())
        } else {
            let e = s.extended_gcd(&d);
            (e.x, -e.y, e.gcd)
        };
        let v1 = &f1.a / &d1;
        let v2 = &f2.a / &d1;
        let r = (&y1 * &y2 * &n - &x2 * &f2.c).mod_floor(&v1);
        let b3 = &f2.b + &v2 * &r * 2;
        let a3 = &v1 * &v2;
        let c3 = (&f2.c * &d1 + &r * (&f2.b + &v2 * &r)) / &v1;
        (Form { a: a3, b: b3, c: c3 }, d1)
    }

    pub fn is_reduced(&self) -> bool {
        let disc = self.disc();
        if disc.is_negative() {
            let ab = self.b.abs();
            if ab > self.a || self.a > self.c {
                return false;
            }
            !((ab == self.a || self.a == self.c) && self.b.is_negative())
        } else {
            let s = disc.sqrt();
            let a2 = self.a.abs() * 2;
            self.b.is_positive() && self.b <= s && &self.b + &a2 > s && &a2 - &self.b <= s
        }
    }

    /// Reduces the form, returning the reduced form and the transform `M`
    /// with `self∘M` equal to it.
    pub fn reduce_tracked(&self) -> Result<(Form, Transform)> {
        if self.disc().is_negative() {
            Ok(self.reduce_definite())
        } else {
            self.reduce_indefinite()
        }
    }

    pub fn reduce(&self) -> Result<Form> {
        Ok(self.reduce_tracked()?.0)
    }

    fn reduce_definite(&self) -> (Form, Transform) {
        let mut f = self.clone();
        let mut m = Transform::identity();
        loop {
            let two_a = &f.a * 2;
            let k = (&f.a - &f.b).div_floor(&two_a);
            if !k.is_zero() {
                let t = Transform::translate(k);
                f = f.apply(&t);
                m = m.then(&t);
            }
            if f.a > f.c || (f.a == f.c && f.b.is_negative()) {
                let t = Transform::swap();
                f = f.apply(&t);
                m = m.then(&t);
                continue;
            }
            return (f, m);
        }
    }

    fn reduce_indefinite(&self) -> Result<(Form, Transform)> {
        let mut f = self.clone();
        let mut m = Transform::identity();
        let limit = 64 + 8 * (self.a.bits() + self.c.bits() + self.b.bits());
        for _ in 0..limit {
            if f.is_reduced() {
                return Ok((f, m));
            }
            let (g, t) = f.rho();
            f = g;
            m = m.then(&t);
        }
        Err(Error::Internal(format!("indefinite form {self} failed to reduce")))
    }

    /// One reduction step `(a, b, c) ↦ (c, r, ·)` for indefinite forms.
    pub fn rho(&self) -> (Form, Transform) {
        let disc = self.disc();
        let s = disc.sqrt();
        let cc = self.c.abs();
        let two_c = &cc * 2;
        let bneg = -&self.b;
        let r = if cc > s {
            let r0 = bneg.mod_floor(&two_c);
            if r0 > cc {
                r0 - &two_c
            } else {
                r0
            }
        } else {
            &s - (&s - &bneg).mod_floor(&two_c)
        };
        let k = (&r + &self.b) / (&self.c * 2);
        let t = Transform::swap().then(&Transform::translate(k));
        (self.apply(&t), t)
    }

    /// The ρ-cycle of a reduced indefinite form, starting with itself.
    pub fn cycle(&self) -> Vec<Form> {
        let mut out = vec![self.clone()];
        let mut f = self.rho().0;
        while &f != self {
            out.push(f.clone());
            f = f.rho().0;
        }
        out
    }
}
