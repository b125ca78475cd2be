//! Cyclic cubic fields over `Q`, given by conductor.

use std::fmt;

use num_integer::Roots;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::quadfield::primes;

/// A cyclic cubic field `N = Q[X]/(X³ + aX² + bX + c)` of conductor `f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicCubicField {
    conductor: u64,
    /// `[a, b, c]`.
    poly: [i64; 3],
    ramified: Vec<u64>,
}

/// Prime-power factors of an admissible conductor: 9 and primes ≡ 1 mod 3.
pub fn conductor_factors(f: u64) -> Result<Vec<u64>> {
    if f < 7 {
        return invalid(format!("{f} is not the conductor of a cyclic cubic field"));
    }
    let mut n = f;
    let mut out = Vec::new();
    if n.is_multiple_of(3) {
        if !n.is_multiple_of(9) || n.is_multiple_of(27) {
            return invalid(format!("{f}: the 3-part of a cubic conductor is 1 or 9"));
        }
        out.push(9);
        n /= 9;
    }
    for p in primes() {
        if p * p > n {
            break;
        }
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) || p % 3 != 1 {
                return invalid(format!("{f}: prime factors other than 3 must be simple and ≡ 1 mod 3"));
            }
            out.push(p);
        }
    }
    if n > 1 {
        if n % 3 != 1 {
            return invalid(format!("{f}: prime factor {n} is not ≡ 1 mod 3"));
        }
        out.push(n);
    }
    out.sort_unstable();
    Ok(out)
}

/// Number of cyclic cubic fields of conductor `f`.
pub fn fields_with_conductor(f: u64) -> Result<usize> {
    Ok(1 << (conductor_factors(f)?.len() - 1))
}

fn discriminant([a, b, c]: [i64; 3]) -> i128 {
    let (a, b, c) = (i128::from(a), i128::from(b), i128::from(c));
    a * a * b * b - 4 * b * b * b - 4 * a * a * a * c - 27 * c * c + 18 * a * b * c
}

fn has_integer_root([a, b, c]: [i64; 3]) -> bool {
    let g = |x: i128| ((x + i128::from(a)) * x + i128::from(b)) * x + i128::from(c);
    if c == 0 {
        return true;
    }
    let c = c.unsigned_abs();
    let mut d = 1u64;
    while d * d <= c {
        if c % d == 0 {
            for r in [d, c / d] {
                let r = i128::from(r);
                if g(r) == 0 || g(-r) == 0 {
                    return true;
                }
            }
        }
        d += 1;
    }
    false
}

fn is_square(n: i128) -> bool {
    n >= 0 && {
        let r = n.sqrt();
        r * r == n
    }
}

fn primitive_root(q: u64) -> u64 {
    let phi = if q == 9 { 6 } else { q - 1 };
    (2..q)
        .find(|&g| {
            let mut x = 1;
            (1..phi).all(|_| {
                x = x * g % q;
                x != 1
            })
        })
        .expect("prime powers with a cyclic unit group have a primitive root")
}

/// Discrete logarithms mod 3 on `(Z/q)^×`, indexed by residue.
fn dlog_mod3(q: u64) -> Vec<Option<u8>> {
    let g = primitive_root(q);
    let mut table = vec![None; q as usize];
    let mut x = 1;
    let mut k = 0u64;
    while table[x as usize].is_none() {
        table[x as usize] = Some((k % 3) as u8);
        x = x * g % q;
        k += 1;
    }
    table
}

impl CyclicCubicField {
    /// The field of conductor `f` numbered `index < 2^{t−1}`, where `t` is the
    /// number of prime-power factors of `f`. Its polynomial is the minimal
    /// polynomial of a Gaussian period.
    pub fn from_conductor(f: u64, index: usize) -> Result<Self> {
        let factors = conductor_factors(f)?;
        let count = 1usize << (factors.len() - 1);
        if index >= count {
            return invalid(format!("conductor {f} has {count} cyclic cubic fields, index {index} is out of range"));
        }
        if f > 1_000_000 {
            return Err(Error::ResourceLimit(format!("conductor {f} exceeds 10^6")));
        }
        let tables: Vec<Vec<Option<u8>>> = factors.iter().map(|&q| dlog_mod3(q)).collect();
        // The character is Σ e_j·dlog_j with e_0 = 1 and e_j ∈ {1, 2} from the index bits.
        let weights: Vec<u64> =
            (0..factors.len()).map(|j| if j == 0 { 1 } else { 1 + ((index >> (j - 1)) & 1) as u64 }).collect();
        let chi = |a: u64| -> Option<usize> {
            let mut s = 0u64;
            for ((&q, table), &w) in factors.iter().zip(&tables).zip(&weights) {
                s += w * u64::from(table[(a % q) as usize]?);
            }
            Some((s % 3) as usize)
        };
        for s in 1..=6u32 {
            let mut periods = [0f64; 3];
            for a in 1..f {
                if let Some(v) = chi(a) {
                    let theta = 2.0 * std::f64::consts::PI * a as f64 / f as f64;
                    // Re (1 + ζ^a)^s for s > 1; the plain period ζ^a for s = 1.
                    periods[v] += if s == 1 {
                        theta.cos()
                    } else {
                        (2.0 * (theta / 2.0).cos()).powi(s as i32) * (f64::from(s) * theta / 2.0).cos()
                    };
                }
            }
            let [x, y, z] = periods;
            let e = [x + y + z, x * y + y * z + z * x, x * y * z];
            let rounded = e.map(|v| v.round());
            if e.iter().zip(&rounded).any(|(v, r)| (v - r).abs() > 1e-6 * r.abs().max(1.0)) {
                return Err(Error::PrecisionExhausted(format!("period polynomial for conductor {f}")));
            }
            let poly = [-rounded[0] as i64, rounded[1] as i64, -rounded[2] as i64];
            if let Ok(field) = Self::with_polynomial(f, poly) {
                return Ok(field);
            }
        }
        Err(Error::Internal(format!("no primitive period found for conductor {f}")))
    }

    /// A cyclic cubic field of conductor `f` with the given polynomial
    /// `X³ + aX² + bX + c`, checked to be irreducible with discriminant
    /// `f²·(square)`.
    pub fn with_polynomial(f: u64, poly: [i64; 3]) -> Result<Self> {
        let ramified: Vec<u64> = conductor_factors(f)?.into_iter().map(|q| if q == 9 { 3 } else { q }).collect();
        if has_integer_root(poly) {
            return invalid("the cubic polynomial is reducible over Q");
        }
        let disc = discriminant(poly);
        let f2 = i128::from(f) * i128::from(f);
        if !is_square(disc) {
            return invalid("the cubic polynomial does not define a cyclic field");
        }
        if disc % f2 != 0 || !is_square(disc / f2) {
            return invalid(format!("the discriminant {disc} is not compatible with conductor {f}"));
        }
        Ok(Self { conductor: f, poly, ramified })
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// `[a, b, c]` for `X³ + aX² + bX + c`.
    pub fn polynomial(&self) -> [i64; 3] {
        self.poly
    }

    /// Primes dividing the conductor, increasing.
    pub fn ramified_primes(&self) -> &[u64] {
        &self.ramified
    }

    pub fn discriminant(&self) -> i128 {
        discriminant(self.poly)
    }
}

impl fmt::Display for CyclicCubicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X^3")?;
        for (c, mono) in self.poly.iter().zip(["X^2", "X", ""]) {
            if *c != 0 {
                let sign = if *c < 0 { '-' } else { '+' };
                let mag = c.unsigned_abs();
                if mag == 1 && !mono.is_empty() {
                    write!(f, " {sign} {mono}")?;
                } else {
                    write!(f, " {sign} {mag}{mono}")?;
                }
            }
        }
        write!(f, " (conductor {})", self.conductor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn period_polynomials() {
        let cases = [(7, [1, -2, -1]), (13, [1, -4, 1]), (19, [1, -6, -7]), (9, [0, -3, 1])];
        for (f, poly) in cases {
            let n = CyclicCubicField::from_conductor(f, 0).unwrap();
            assert_eq!(n.polynomial(), poly, "conductor {f}");
            assert_eq!(n.discriminant(), i128::from(f * f));
        }
    }

    #[test]
    fn composite_conductors_give_every_field() {
        for f in [63u64, 91, 117, 133, 819] {
            let count = fields_with_conductor(f).unwrap();
            let mut polys = Vec::new();
            for idx in 0..count {
                let n = CyclicCubicField::from_conductor(f, idx).unwrap();
                assert_eq!(n.discriminant() % i128::from(f * f), 0);
                polys.push(n.polynomial());
            }
            polys.sort_unstable();
            polys.dedup();
            assert_eq!(polys.len(), count, "conductor {f}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        for f in [1, 3, 27, 5, 49, 14, 35] {
            assert!(CyclicCubicField::from_conductor(f, 0).is_err(), "{f}");
        }
        assert!(CyclicCubicField::from_conductor(7, 1).is_err());
        assert!(CyclicCubicField::with_polynomial(7, [0, 0, -2]).is_err());
        assert!(CyclicCubicField::with_polynomial(7, [0, -1, 0]).is_err());
        assert!(CyclicCubicField::with_polynomial(13, [1, -2, -1]).is_err());
        assert_eq!(fields_with_conductor(91).unwrap(), 2);
        assert_eq!(conductor_factors(819).unwrap(), vec![7, 9, 13]);
    }

    #[test]
    fn display() {
        let n = CyclicCubicField::from_conductor(7, 0).unwrap();
        assert_eq!(n.to_string(), "X^3 + X^2 - 2X - 1 (conductor 7)");
    }
}
