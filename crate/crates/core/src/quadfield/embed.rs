use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{v_q, LocalType, PlaceId, QuadElem, QuadField};
use crate::error::{invalid, Error, Result};
use crate::padic::{pow_ell, PadicInt};

/// A local norm `ℓ^valuation · unit` at a place above ℓ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalNorm {
    pub place: PlaceId,
    pub valuation: i64,
    pub unit: PadicInt,
}

/// Image of `ω` in `Z_q` under the embedding of a split place, mod `q^prec`.
///
/// The place `(q, (b+√D)/2)` sends `ω` to `(1−b)/2` or `−b/2` modulo `q`;
/// Newton's iteration on the minimal polynomial of `ω` lifts it.
pub(crate) fn omega_root(field: &QuadField, q: u64, index: u8, prec: u32) -> Result<BigInt> {
    let b0 = field.place_b(q).ok_or_else(|| Error::Internal(format!("{q} does not split in {field}")))?;
    let b = if index == 0 { b0 } else { -b0 };
    let modulus = num_traits::pow(BigInt::from(q), prec as usize);
    let t = field.omega_trace();
    let c = field.omega_c();
    let mut r = BigInt::from(if t == 1 { (1 - b).div_euclid(2) } else { (-b).div_euclid(2) });
    let f = |x: &BigInt| -> BigInt { x * x - x * t - c };
    for _ in 0..=(prec.max(1).ilog2() + 2) {
        let fr = f(&r).mod_floor(&modulus);
        if fr.is_zero() {
            break;
        }
        let df = Integer::mod_floor(&(&r * 2 - BigInt::from(t)), &modulus);
        let e = df.extended_gcd(&modulus);
        if !e.gcd.is_one() {
            return Err(Error::Internal(format!("Hensel lift failed at {q}")));
        }
        r = (&r - fr * e.x).mod_floor(&modulus);
    }
    if !f(&r).mod_floor(&modulus).is_zero() {
        return Err(Error::Internal(format!("Hensel lift failed at {q}")));
    }
    Ok(r)
}

/// Classical valuation `v_𝔭(x)` at a finite place.
pub fn valuation_at(field: &QuadField, place: &PlaceId, x: &QuadElem) -> Result<i64> {
    let PlaceId::Finite { q, index, kind } = *place else {
        return invalid("valuation at an archimedean place");
    };
    if x.is_zero() {
        return invalid("valuation of zero");
    }
    let vden = v_q(x.den(), q).unwrap_or(0) as i64;
    let vnorm = || v_q(&x.numerator_norm(), q).unwrap_or(0) as i64;
    Ok(match kind {
        LocalType::Rational => v_q(x.x(), q).unwrap_or(0) as i64 - vden,
        LocalType::Inert => vnorm() / 2 - vden,
        LocalType::Ramified => vnorm() - 2 * vden,
        LocalType::Split => {
            let n = vnorm() as u32;
            let prec = n + 1;
            let r = omega_root(field, q, index, prec)?;
            let modulus = num_traits::pow(BigInt::from(q), prec as usize);
            let img = (x.x() + x.y() * r).mod_floor(&modulus);
            v_q(&img, q).map_or(prec as i64, i64::from) - vden
        }
    })
}

/// Local norms of `x` at the places above ℓ, in place order.
///
/// At a split place the local norm is the image of `x` in `Q_ℓ`; otherwise
/// it is the global norm.
pub fn embed_at_ell(field: &QuadField, x: &QuadElem, ell: u64, m: u32) -> Result<Vec<LocalNorm>> {
    if x.is_zero() {
        return invalid("local norm of zero");
    }
    let places = field.split_prime(ell)?;
    let mut out = Vec::with_capacity(places.len());
    for place in places {
        let PlaceId::Finite { index, kind, .. } = place else { unreachable!() };
        let (valuation, unit) = match kind {
            LocalType::Split => {
                let n = v_q(&x.numerator_norm(), ell).unwrap_or(0);
                let prec = m + n;
                let r = omega_root(field, ell, index, prec)?;
                let modulus = pow_ell(ell, prec);
                let img = (x.x() + x.y() * r).mod_floor(&modulus);
                let v =
                    v_q(&img, ell).ok_or_else(|| Error::Internal("image vanished below the norm valuation".into()))?;
                let num = PadicInt::new(ell, img / pow_ell(ell, v), prec - v)?.with_prec(m);
                let vd = v_q(x.den(), ell).unwrap_or(0);
                let den = PadicInt::from_rational(ell, &(x.den() / pow_ell(ell, vd)), &BigInt::one(), m)?;
                (v as i64 - vd as i64, num.div_unit(&den)?)
            }
            LocalType::Rational => rational_parts(&BigRational::new(x.x().clone(), x.den().clone()), ell, m)?,
            LocalType::Inert | LocalType::Ramified => rational_parts(&x.norm(), ell, m)?,
        };
        out.push(LocalNorm { place, valuation, unit });
    }
    Ok(out)
}

fn rational_parts(r: &BigRational, ell: u64, m: u32) -> Result<(i64, PadicInt)> {
    let vn = v_q(r.numer(), ell).unwrap_or(0);
    let vd = v_q(r.denom(), ell).unwrap_or(0);
    let unit = PadicInt::from_rational(ell, &(r.numer() / pow_ell(ell, vn)), &(r.denom() / pow_ell(ell, vd)), m)?;
    Ok((vn as i64 - vd as i64, unit))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(d: i64) -> QuadField {
        QuadField::new(d).unwrap()
    }

    #[test]
    fn split_images_multiply_to_norm() {
        let f = k(-23);
        let x = QuadElem::from_sqrt_d(f, 2.into(), 1.into(), 1.into());
        let norms = embed_at_ell(&f, &x, 3, 3).unwrap();
        assert_eq!(norms.len(), 2);
        let total: i64 = norms.iter().map(|n| n.valuation).sum();
        assert_eq!(total, 3);
        // Unit parts multiply to the unit part of N(x) = 27, i.e. 1.
        let prod = &norms[0].unit * &norms[1].unit;
        assert!(prod.value().is_one());
    }

    #[test]
    fn inert_and_ramified_use_global_norm() {
        let f = k(2);
        let s = QuadElem::from_sqrt_d(f, 0.into(), 1.into(), 1.into());
        let n = embed_at_ell(&f, &s, 3, 3).unwrap();
        assert_eq!(n.len(), 1);
        assert_eq!(n[0].valuation, 0);
        assert_eq!(n[0].unit.to_i64(), Some(-2));
        let g = k(-3);
        let zeta = QuadElem::from_half_sqrt(g, (-1).into(), 1.into());
        let n = embed_at_ell(&g, &zeta, 3, 4).unwrap();
        assert_eq!(n[0].unit.to_i64(), Some(1));
    }

    #[test]
    fn valuations_at_places() {
        let f = k(-23);
        let x = QuadElem::from_sqrt_d(f, 2.into(), 1.into(), 1.into());
        let ps = f.split_prime(3).unwrap();
        let v: Vec<i64> = ps.iter().map(|p| valuation_at(&f, p, &x).unwrap()).collect();
        assert_eq!(v.iter().sum::<i64>(), 3);
        assert!(v.contains(&0) && v.contains(&3));
        let i = k(-1);
        let one_plus_i = QuadElem::from_sqrt_d(i, 1.into(), 1.into(), 1.into());
        let p2 = i.split_prime(2).unwrap()[0];
        assert_eq!(valuation_at(&i, &p2, &one_plus_i).unwrap(), 1);
        let q = QuadField::rational();
        let p3 = q.split_prime(3).unwrap()[0];
        let x = QuadElem::from_rational(q, &BigRational::new(18.into(), 5.into()));
        assert_eq!(valuation_at(&q, &p3, &x).unwrap(), 2);
    }

    #[test]
    fn omega_root_at_two() {
        let f = k(-7);
        let r = omega_root(&f, 2, 0, 10).unwrap();
        let m = BigInt::from(1024);
        let v: BigInt = &r * &r - &r + 2;
        assert!(v.mod_floor(&m).is_zero());
    }
}
