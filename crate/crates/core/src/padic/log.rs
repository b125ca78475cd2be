use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::int::{check_ell, mod_inverse, pow_ell, valuation_big, PadicInt};
use crate::error::{invalid, Result};

/// Teichmüller representative of the residue `a mod ℓ`, modulo `ℓ^m`.
pub fn teichmuller(a: impl Into<BigInt>, ell: u64, m: u32) -> Result<PadicInt> {
    check_ell(ell)?;
    let a = a.into();
    if a.mod_floor(&BigInt::from(ell)).is_zero() {
        return invalid(format!("{a} is not a unit mod {ell}"));
    }
    let u = PadicInt::new(ell, a, m)?;
    Ok(teichmuller_of(&u))
}

/// Teichmüller representative `ω(u)` of a unit, at the precision of `u`.
///
/// Each application of `x ↦ x^ℓ` gains one correct digit.
pub fn teichmuller_of(u: &PadicInt) -> PadicInt {
    let modulus = u.modulus();
    let e = BigInt::from(u.ell());
    let mut x = u.value().clone();
    for _ in 0..u.prec() {
        x = x.modpow(&e, &modulus);
    }
    PadicInt::reduced(u.ell(), x, u.prec())
}

/// Iwasawa logarithm of `num/den` modulo `ℓ^m`.
///
/// Powers of ℓ and roots of unity have logarithm zero, so only the principal
/// part `⟨u⟩ = u/ω(u)` of the ℓ-free part contributes.
pub fn iwasawa_log(num: &BigInt, den: &BigInt, ell: u64, m: u32) -> Result<PadicInt> {
    check_ell(ell)?;
    if num.is_zero() || den.is_zero() {
        return invalid("logarithm of zero");
    }
    let strip = |x: &BigInt| {
        let v = valuation_big(x, ell).unwrap_or(0);
        x / pow_ell(ell, v)
    };
    let u = PadicInt::from_rational(ell, &strip(num), &strip(den), m)?;
    iwasawa_log_unit(&u)
}

/// Iwasawa logarithm of an ℓ-adic unit, at the precision of the input.
pub fn iwasawa_log_unit(u: &PadicInt) -> Result<PadicInt> {
    if !u.is_unit() {
        return invalid(format!("{u:?} is not a unit"));
    }
    let ell = u.ell();
    let p = u.prec();
    let principal = u * &teichmuller_of(u).inverse()?;
    let z = principal.value() - BigInt::one();

    // Terms z^k/k have valuation at least k - floor(log_ℓ k).
    let mut len = 1u32;
    while len - ilog(len, ell) < p {
        len += 1;
    }
    let working = p + ilog(len, ell) + 2;
    let modulus = pow_ell(ell, working);

    let mut acc = BigInt::zero();
    let mut zpow = BigInt::one();
    for k in 1..=len {
        zpow = (zpow * &z).mod_floor(&modulus);
        let vk = valuation_big(&BigInt::from(k), ell).unwrap_or(0);
        let unit_k = BigInt::from(k) / pow_ell(ell, vk);
        let inv = mod_inverse(&unit_k, &modulus).expect("prime-to-ℓ part is invertible");
        let term = (&zpow / pow_ell(ell, vk)) * inv;
        if k % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(PadicInt::reduced(ell, acc, p))
}

fn ilog(k: u32, ell: u64) -> u32 {
    let mut r = 0;
    let mut x = k as u64;
    while x >= ell {
        x /= ell;
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn log3(x: i64, m: u32) -> i64 {
        iwasawa_log(&x.into(), &1.into(), 3, m).unwrap().value().try_into().unwrap()
    }

    #[test]
    fn teichmuller_examples() {
        assert_eq!(teichmuller(1, 3, 3).unwrap().value(), &BigInt::from(1));
        assert_eq!(teichmuller(2, 3, 3).unwrap().value(), &BigInt::from(26));
        assert_eq!(teichmuller(2, 5, 2).unwrap().value(), &BigInt::from(7));
        assert!(teichmuller(6, 3, 3).is_err());
    }

    #[test]
    fn log_examples() {
        assert_eq!(log3(3, 5), 0);
        assert_eq!(log3(-1, 5), 0);
        assert_eq!(log3(4, 3), 21);
        assert_eq!(log3(2, 3), 24);
        assert!(iwasawa_log(&0.into(), &1.into(), 3, 3).is_err());
    }

    #[test]
    fn log_of_rational_is_difference() {
        let a = iwasawa_log(&7.into(), &5.into(), 5, 6).unwrap();
        let b = iwasawa_log(&7.into(), &1.into(), 5, 6).unwrap();
        let c = iwasawa_log(&5.into(), &1.into(), 5, 6).unwrap();
        assert!(c.is_zero());
        assert_eq!(a, b);
    }

    #[test]
    fn log_image_lies_in_ell_zl() {
        for x in 2..40 {
            let l = iwasawa_log(&BigInt::from(x), &1.into(), 7, 4).unwrap();
            assert!(l.is_zero() || l.valuation().unwrap() >= 1);
        }
    }
}
