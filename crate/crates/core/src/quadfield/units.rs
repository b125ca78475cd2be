use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{QuadElem, QuadField};
use crate::error::{invalid, Error, Result};

const MAX_PARTIAL_QUOTIENTS: usize = 1_000_000;

/// Fundamental unit `ε > 1` of a real quadratic field.
///
/// Expands `(1+√d)/2` (or `√d`) as a continued fraction and returns the
/// first convergent `p/q` whose associated element has norm `±1`.
pub fn fundamental_unit(field: &QuadField) -> Result<QuadElem> {
    let Some(d) = field.d().filter(|&d| d > 1) else {
        return invalid(format!("{field} is not real quadratic"));
    };
    let half = d.rem_euclid(4) == 1;
    let dd = BigInt::from(d);
    let s = dd.sqrt();
    // ω = (P + √d)/Q
    let (mut pp, mut qq) = if half { (BigInt::one(), BigInt::from(2)) } else { (BigInt::zero(), BigInt::one()) };
    let (mut p0, mut p1) = (BigInt::zero(), BigInt::one());
    let (mut q0, mut q1) = (BigInt::one(), BigInt::zero());
    let c = BigInt::from((1 - d) / 4);
    for _ in 0..MAX_PARTIAL_QUOTIENTS {
        let a = (&pp + &s) / &qq;
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        let norm = if half { &p2 * &p2 - &p2 * &q2 + &q2 * &q2 * &c } else { &p2 * &p2 - &dd * &q2 * &q2 };
        if norm == BigInt::one() || norm == -BigInt::one() {
            // ε = p − q·ω̄ = (p − q·t) + q·ω
            let t = field.omega_trace();
            return QuadElem::new(*field, &p2 - &q2 * t, q2, BigInt::one());
        }
        pp = &a * &qq - &pp;
        qq = (&dd - &pp * &pp) / &qq;
        (p0, p1) = (p1, p2);
        (q0, q1) = (q1, q2);
    }
    Err(Error::ResourceLimit(format!("continued fraction of {field} too long")))
}
