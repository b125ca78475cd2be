use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::inertia::{log_inertia, LogLocalData};
use crate::error::{invalid, Error, Result};
use crate::padic::{iwasawa_log, iwasawa_log_unit, PadicInt};
use crate::quadfield::{embed_at_ell, valuation_at, PlaceId, QuadElem, QuadField};

pub(crate) fn local_data(field: &QuadField, place: &PlaceId, ell: u64) -> Result<LogLocalData> {
    let q = place.prime().ok_or_else(|| Error::InvalidInput("archimedean place".into()))?;
    log_inertia(field, q, ell)?
        .into_iter()
        .find(|l| l.place == *place)
        .ok_or_else(|| Error::InvalidInput(format!("{place} is not a place of {field}")))
}

/// `deg 𝔭 = f̃·deg q`, with `deg q = Log_Iw(q)` for `q ≠ ℓ` and `deg ℓ = ℓ`.
pub fn place_degree(field: &QuadField, place: &PlaceId, ell: u64, m: u32) -> Result<PadicInt> {
    let data = local_data(field, place, ell)?;
    let q = place.prime().expect("finite place");
    let base =
        if q == ell { PadicInt::new(ell, ell, m)? } else { iwasawa_log(&BigInt::from(q), &BigInt::one(), ell, m)? };
    Ok(&base * &PadicInt::new(ell, data.f_tilde, m)?)
}

/// Logarithmic valuation `ṽ_𝔭(x)` modulo `ℓ^m`.
///
/// Away from ℓ this is `v_𝔭(x)·f/f̃`. Above ℓ it is
/// `−Log_Iw(N_𝔭(x))/deg 𝔭`, where the logarithm is taken one digit deeper
/// to absorb the factor ℓ in the degree.
pub fn log_valuation(field: &QuadField, place: &PlaceId, x: &QuadElem, ell: u64, m: u32) -> Result<PadicInt> {
    if x.is_zero() {
        return invalid("logarithmic valuation of zero");
    }
    let data = local_data(field, place, ell)?;
    let q = place.prime().expect("finite place");
    if q != ell {
        let v = valuation_at(field, place, x)?;
        return PadicInt::from_rational(ell, &BigInt::from(v * i64::from(data.f)), &BigInt::from(data.f_tilde), m);
    }
    let norms = embed_at_ell(field, x, ell, m + 1)?;
    let local =
        norms.iter().find(|n| n.place == *place).ok_or_else(|| Error::Internal(format!("no local norm at {place}")))?;
    let log = iwasawa_log_unit(&local.unit)?;
    let quotient = log.exact_divide(1)?;
    let f_tilde = PadicInt::new(ell, data.f_tilde, m)?;
    Ok(-quotient.div_unit(&f_tilde)?)
}

/// A logarithmic divisor `Σ n_𝔭 𝔭` with its degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogDivisor {
    pub coefficients: BTreeMap<PlaceId, PadicInt>,
    pub degree: PadicInt,
}

impl LogDivisor {
    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// Principal logarithmic divisor of `x`, supported on the places above ℓ
/// and the primes dividing `x`.
pub fn log_divisor(field: &QuadField, x: &QuadElem, ell: u64, m: u32) -> Result<LogDivisor> {
    if x.is_zero() {
        return invalid("logarithmic divisor of zero");
    }
    let mut primes = prime_divisors(&x.numerator_norm())?;
    primes.extend(prime_divisors(x.den())?);
    primes.push(ell);
    primes.sort_unstable();
    primes.dedup();
    let mut coefficients = BTreeMap::new();
    let mut degree = PadicInt::zero(ell, m);
    for q in primes {
        for place in field.split_prime(q)? {
            let v = log_valuation(field, &place, x, ell, m)?;
            if v.is_zero() {
                continue;
            }
            degree = degree + &v * &place_degree(field, &place, ell, m)?;
            coefficients.insert(place, v);
        }
    }
    Ok(LogDivisor { coefficients, degree })
}

/// Whether `x` is a logarithmic unit at precision `m`.
pub fn is_log_unit(field: &QuadField, x: &QuadElem, ell: u64, m: u32) -> Result<bool> {
    Ok(log_divisor(field, x, ell, m)?.is_zero())
}

const TRIAL_BOUND: u64 = 1_000_000;

/// Prime divisors by trial division; a cofactor below `TRIAL_BOUND²` is prime.
fn prime_divisors(n: &BigInt) -> Result<Vec<u64>> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return Ok(out);
    }
    let mut p = 2u64;
    while p <= TRIAL_BOUND && !n.is_one() {
        let pb = BigInt::from(p);
        if (&n % &pb).is_zero() {
            out.push(p);
            while (&n % &pb).is_zero() {
                n /= &pb;
            }
        }
        if BigInt::from(p) * BigInt::from(p) > n {
            break;
        }
        p += 1;
    }
    if !n.is_one() {
        let c = n
            .to_u64()
            .filter(|&c| c <= TRIAL_BOUND * TRIAL_BOUND)
            .ok_or_else(|| Error::ResourceLimit(format!("cannot factor {n}")))?;
        out.push(c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q() -> QuadField {
        QuadField::rational()
    }

    fn place(k: &QuadField, p: u64) -> PlaceId {
        k.split_prime(p).unwrap()[0]
    }

    fn int(k: QuadField, n: i64) -> QuadElem {
        QuadElem::from_int(k, n)
    }

    #[test]
    fn degrees() {
        let p3 = place(&q(), 3);
        assert_eq!(place_degree(&q(), &p3, 3, 5).unwrap().to_i64(), Some(3));
        let k = QuadField::new(-1).unwrap();
        assert_eq!(place_degree(&k, &place(&k, 3), 3, 5).unwrap().to_i64(), Some(6));
        let d2 = place_degree(&q(), &place(&q(), 2), 3, 3).unwrap();
        assert_eq!(d2.value(), &BigInt::from(24));
    }

    #[test]
    fn valuations() {
        let p3 = place(&q(), 3);
        assert!(log_valuation(&q(), &p3, &int(q(), 3), 3, 4).unwrap().is_zero());
        assert_eq!(log_valuation(&q(), &p3, &int(q(), 4), 3, 2).unwrap().value(), &BigInt::from(2));
        let p5 = place(&q(), 5);
        assert_eq!(log_valuation(&q(), &p5, &int(q(), 5), 3, 4).unwrap().to_i64(), Some(1));
    }

    #[test]
    fn sqrt_two_divisor() {
        let k = QuadField::new(2).unwrap();
        let s = QuadElem::from_sqrt_d(k, 0.into(), 1.into(), 1.into());
        let div = log_divisor(&k, &s, 3, 3).unwrap();
        assert_eq!(div.coefficients[&place(&k, 2)].value(), &BigInt::from(14));
        assert!(div.coefficients.contains_key(&place(&k, 3)));
        assert!(div.degree.is_zero());
    }

    #[test]
    fn torsion_and_units() {
        assert!(log_divisor(&q(), &int(q(), -1), 3, 6).unwrap().is_zero());
        let k = QuadField::new(-3).unwrap();
        let zeta = QuadElem::from_half_sqrt(k, (-1).into(), 1.into());
        assert!(is_log_unit(&k, &zeta, 3, 6).unwrap());
        assert!(is_log_unit(&q(), &int(q(), 3), 3, 6).unwrap());
        assert!(!is_log_unit(&q(), &int(q(), 4), 3, 6).unwrap());
        let r = QuadField::new(2).unwrap();
        let eps = QuadElem::from_sqrt_d(r, 1.into(), 1.into(), 1.into());
        assert!(is_log_unit(&r, &eps, 3, 8).unwrap());
    }

    #[test]
    fn product_formula_on_random_elements() {
        for d in [-23i64, -5, 2, 7, -1, 33] {
            let k = QuadField::new(d).unwrap();
            for (a, b) in [(3, 5), (7, -2), (12, 1), (1, 9)] {
                let x = QuadElem::from_sqrt_d(k, a.into(), b.into(), 1.into());
                let div = log_divisor(&k, &x, 3, 6).unwrap();
                assert!(div.degree.is_zero(), "d={d} x={x}");
                let y = x.scale(&BigRational::new(1.into(), 10.into()));
                assert!(log_divisor(&k, &y, 3, 6).unwrap().degree.is_zero());
            }
        }
    }
}
