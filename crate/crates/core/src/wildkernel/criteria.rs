//! Triviality and surjectivity criteria over `F = Q`, `ℓ = 3`, for cyclic
//! cubic `N`.

use serde::Serialize;

use super::cubic::CyclicCubicField;
use super::local3::{has_root_in_b1u3, RootSearch};
use crate::error::{invalid, Error, Result};
use crate::logarith::{log_class_group, LogOptions};
use crate::quadfield::QuadField;

/// The logarithmically ramified primes `R̃` of `N/Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamificationProfile {
    pub log_ramified: Vec<u64>,
    /// Members of `R̃` that split in `Q(√−3)`, i.e. `p ≡ 1 mod 3`.
    pub split_in_l: Vec<u64>,
}

/// Computes `R̃`. A prime `p ≠ 3` is logarithmically ramified exactly when it
/// ramifies. At 3 the completion is locally cyclotomic exactly when the
/// defining cubic has a root in the compositum of `B₁` and the unramified
/// cubic extension of `Q₃`.
pub fn cubic_log_ramification(n: &CyclicCubicField, m: u32) -> Result<RamificationProfile> {
    let mut log_ramified = Vec::new();
    for &p in n.ramified_primes() {
        if p != 3 {
            log_ramified.push(p);
        } else if has_root_in_b1u3(n.polynomial(), m)? == RootSearch::None {
            log_ramified.push(3);
        }
    }
    let split_in_l = log_ramified.iter().copied().filter(|p| p % 3 == 1).collect();
    Ok(RamificationProfile { log_ramified, split_in_l })
}

/// Outcome of the triviality criterion for odd `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrivialityDecision {
    pub trivial: bool,
    pub profile: RamificationProfile,
    /// The single split log-ramified prime, when there is exactly one.
    pub witness: Option<u64>,
    /// `ẽ` of the witness in `N/Q`.
    pub ramification_index: Option<u32>,
    /// `(μ_L : μ_L ∩ N^loc)` at the witness: 1 when `ζ₃` is a local norm.
    pub norm_index: Option<u32>,
}

/// Decides triviality of the `ω^i`-part of the wild kernel quotient of `LN`
/// for odd `i`.
///
/// At most one prime of `R̃` may split in `L = Q(√−3)`; when one does, say
/// `p₀`, the quotient is trivial iff `ζ₃` is not a local norm at `p₀`, i.e.
/// iff `p₀ ≢ 1 mod 9`.
pub fn cor14_triviality(n: &CyclicCubicField, i: i64, m: u32) -> Result<TrivialityDecision> {
    if i.rem_euclid(2) != 1 {
        return invalid("the criterion applies to odd i only");
    }
    let profile = cubic_log_ramification(n, m)?;
    if profile.split_in_l.len() != 1 {
        // With no split prime the index condition is vacuous, even if 3 ∈ R̃.
        let trivial = profile.split_in_l.is_empty();
        return Ok(TrivialityDecision { trivial, profile, witness: None, ramification_index: None, norm_index: None });
    }
    let p0 = profile.split_in_l[0];
    // ζ₃ is a cube mod p₀ iff 9 | p₀ − 1; then it is a local norm.
    let norm_index = if p0 % 9 == 1 { 1 } else { 3 };
    // p₀ is tamely and totally ramified in N.
    let ramification_index = 3;
    Ok(TrivialityDecision {
        trivial: norm_index == ramification_index,
        profile,
        witness: Some(p0),
        ramification_index: Some(ramification_index),
        norm_index: Some(norm_index),
    })
}

/// Why corestriction is onto.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SurjectivityReason {
    /// `ω^i ≠ 1` while `Gal(LN/L)` carries the trivial character.
    NontrivialTwist,
    /// Some prime is logarithmically ramified in `N/Q`.
    LogRamified,
    /// `N` is the first layer of the cyclotomic `Z₃`-extension, so `LN ⊂ L^c`
    /// and `LN/L` is not disjoint from it.
    InsideCyclotomic,
}

/// Surjectivity of corestriction from `LN` to `L` on the `ω^i`-parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Corestriction {
    pub surjective: bool,
    pub reason: SurjectivityReason,
    /// `C̃l₃(Q) = 1` as certified by the engine, for even `i`.
    pub trivial_log_class_group_of_q: Option<bool>,
}

pub fn corestriction_surjectivity(n: &CyclicCubicField, i: i64, m: u32) -> Result<Corestriction> {
    if i.rem_euclid(2) == 1 {
        return Ok(Corestriction {
            surjective: true,
            reason: SurjectivityReason::NontrivialTwist,
            trivial_log_class_group_of_q: None,
        });
    }
    let q = log_class_group(&QuadField::rational(), 3, &LogOptions::default())?;
    let q_trivial = q.structure.is_trivial() && q.structure.stabilized;
    let profile = cubic_log_ramification(n, m)?;
    if !profile.log_ramified.is_empty() {
        return Ok(Corestriction {
            surjective: true,
            reason: SurjectivityReason::LogRamified,
            trivial_log_class_group_of_q: Some(q_trivial),
        });
    }
    // A log-unramified cyclic cubic field is cut out by C̃l₃(Q) = 1 together
    // with the cyclotomic direction, so it is the first cyclotomic layer.
    if !q_trivial {
        return Err(Error::Internal("the logarithmic class group of Q is not certified trivial".into()));
    }
    Ok(Corestriction {
        surjective: true,
        reason: SurjectivityReason::InsideCyclotomic,
        trivial_log_class_group_of_q: Some(true),
    })
}

/// `⟨ω^i, Σ_{p∈R̃} χ_p − χ_∞ − 1⟩` for `Δ = Gal(Q(√−3)/Q)`, where
/// `χ_p = 1 + ω` for `p ≡ 1 mod 3` and `χ_p = 1` otherwise.
pub fn genus_rank_lower_bound(log_ramified: &[u64], i: i64) -> i64 {
    let split = log_ramified.iter().filter(|&&p| p % 3 == 1).count() as i64;
    if i.rem_euclid(2) == 0 {
        log_ramified.len() as i64 - 2
    } else {
        split
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic(f: u64) -> CyclicCubicField {
        CyclicCubicField::from_conductor(f, 0).unwrap()
    }

    #[test]
    fn log_ramification() {
        assert_eq!(cubic_log_ramification(&cubic(7), 8).unwrap().log_ramified, vec![7]);
        assert!(cubic_log_ramification(&cubic(9), 8).unwrap().log_ramified.is_empty());
        for idx in 0..2 {
            let n = CyclicCubicField::from_conductor(63, idx).unwrap();
            assert_eq!(cubic_log_ramification(&n, 8).unwrap().log_ramified, vec![7]);
        }
        let p = cubic_log_ramification(&cubic(91), 8).unwrap();
        assert_eq!(p.split_in_l, vec![7, 13]);
    }

    #[test]
    fn cubic_triviality_examples() {
        let d7 = cor14_triviality(&cubic(7), 1, 8).unwrap();
        assert!(d7.trivial);
        assert_eq!((d7.witness, d7.norm_index), (Some(7), Some(3)));
        let d13 = cor14_triviality(&cubic(13), 1, 8).unwrap();
        assert!(d13.trivial);
        let d19 = cor14_triviality(&cubic(19), 1, 8).unwrap();
        assert!(!d19.trivial);
        assert_eq!(d19.norm_index, Some(1));
        assert!(!cor14_triviality(&cubic(91), 1, 8).unwrap().trivial);
        assert!(cor14_triviality(&cubic(9), 3, 8).unwrap().trivial);
        assert!(matches!(cor14_triviality(&cubic(7), 2, 8), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn corestriction_examples() {
        let c = corestriction_surjectivity(&cubic(7), 1, 8).unwrap();
        assert_eq!(c.reason, SurjectivityReason::NontrivialTwist);
        let c = corestriction_surjectivity(&cubic(9), 0, 8).unwrap();
        assert!(c.surjective);
        assert_eq!(c.reason, SurjectivityReason::InsideCyclotomic);
        let c = corestriction_surjectivity(&cubic(7), 0, 8).unwrap();
        assert_eq!(c.reason, SurjectivityReason::LogRamified);
        assert_eq!(c.trivial_log_class_group_of_q, Some(true));
    }

    #[test]
    fn genus_bound_examples() {
        assert_eq!(genus_rank_lower_bound(&[], 1), 0);
        assert_eq!(genus_rank_lower_bound(&[7], 0), -1);
        assert_eq!(genus_rank_lower_bound(&[7, 13], 1), 2);
        assert_eq!(genus_rank_lower_bound(&[7, 13], -1), 2);
        assert_eq!(genus_rank_lower_bound(&[3, 7], 2), 0);
    }
}
