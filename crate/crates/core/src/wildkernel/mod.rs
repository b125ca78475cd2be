//! Wild kernel quotients of `K₂` for the biquadratic frame
//! `L = Q(√d, √−3)` at `ℓ = 3`, and criteria for cyclic cubic extensions.
//!
//! The `ω^i`-component of `WK_{2i}(k)/3` is read off the logarithmic class
//! group of `k = Q(√d)` (even `i`) or of its mirror field `k* = Q(√−3d)`
//! (odd `i`).

mod criteria;
mod cubic;
mod local3;

use serde::Serialize;

pub use criteria::{
    cor14_triviality, corestriction_surjectivity, cubic_log_ramification, genus_rank_lower_bound, Corestriction,
    RamificationProfile, SurjectivityReason, TrivialityDecision,
};
pub use cubic::{conductor_factors, fields_with_conductor, CyclicCubicField};
pub use local3::{has_root_in_b1u3, RootSearch};

use crate::chidecomp::{component_dispatch, CharacterId, SourceField};
use crate::error::{invalid, Error, Result};
use crate::logarith::{log_class_group, AbelianGroupStructure, LogOptions};
use crate::quadfield::{is_squarefree, squarefree_part, QuadField};

/// How much of the full component is known to equal the wild kernel part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CandidateStatus {
    /// Exponent `s < r`: the full component is the wild kernel part.
    Unconditional,
    /// `s = r`: equality holds if the relevant map is injective.
    NeedsInjectivity,
    /// `s > r`: only the `ℓ^r`-quotient is determined.
    QuotientOnly,
}

/// Structure of the `ℓ^r`-quotient of the `ω^i`-part of the wild kernel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WKReport {
    pub d: i64,
    pub i: i64,
    pub r: u32,
    pub ell: u64,
    /// The character of `Δ` that `μ^{⊗i}` twists into; it does not change
    /// the abelian group.
    pub character: CharacterId,
    pub source: SourceField,
    pub quotient_structure: AbelianGroupStructure,
    pub full_candidate: AbelianGroupStructure,
    pub candidate_status: CandidateStatus,
}

impl WKReport {
    pub fn is_trivial(&self) -> bool {
        self.quotient_structure.is_trivial()
    }
}

fn truncate(s: &AbelianGroupStructure, r: u32) -> AbelianGroupStructure {
    AbelianGroupStructure { exponents: s.quotient(r), unresolved: 0, ..s.clone() }
}

/// Wild kernel quotient for `k = Q(√d)` and twist `i`.
pub fn wk_structure(d: i64, i: i64, r: u32, ell: u64, opts: &LogOptions) -> Result<WKReport> {
    if ell != 3 {
        return Err(Error::Unsupported(format!("the frame Q(√d, √−3) is built for ℓ = 3, not {ell}")));
    }
    if r == 0 {
        return invalid("r must be positive");
    }
    if r > 1 {
        return Err(Error::Unsupported(format!("μ_{{3^{r}}} is not contained in Q(√d, √−3)")));
    }
    let (character, source) = component_dispatch(d, i)?;
    let full = match source.field() {
        Some(field) => log_class_group(&field, ell, opts)?.structure,
        None => AbelianGroupStructure::exact(Vec::new()),
    };
    let s = if full.unresolved > 0 { u32::MAX } else { full.exponents.last().copied().unwrap_or(0) };
    let candidate_status = match s.cmp(&r) {
        std::cmp::Ordering::Less => CandidateStatus::Unconditional,
        std::cmp::Ordering::Equal => CandidateStatus::NeedsInjectivity,
        std::cmp::Ordering::Greater => CandidateStatus::QuotientOnly,
    };
    Ok(WKReport {
        d,
        i,
        r,
        ell,
        character,
        source,
        quotient_structure: truncate(&full, r),
        full_candidate: full,
        candidate_status,
    })
}

/// 3-ranks of the mirror pair `k = Q(√d)`, `k* = Q(√−3d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReflectionRow {
    pub d: i64,
    pub rank_k: usize,
    pub rank_k_star: usize,
    pub delta: i64,
    pub k_structure: AbelianGroupStructure,
    pub k_star_structure: AbelianGroupStructure,
}

impl ReflectionRow {
    /// `0 ≤ rg_k − rg_k* ≤ 1`.
    pub fn within_bounds(&self) -> bool {
        (0..=1).contains(&self.delta)
    }

    /// `0 ≤ rg_k* − rg_k ≤ 1`: the imaginary side dominates, as in the
    /// reflection inequality for an imaginary character and its mirror.
    pub fn mirror_bound_holds(&self) -> bool {
        (-1..=0).contains(&self.delta)
    }
}

/// Compares the 3-ranks of the logarithmic class groups of a real quadratic
/// field and its mirror.
pub fn reflection_check(d: i64, ell: u64, opts: &LogOptions) -> Result<ReflectionRow> {
    if ell != 3 {
        return Err(Error::Unsupported(format!("reflection is implemented for ℓ = 3, not {ell}")));
    }
    if d <= 1 || !is_squarefree(d) {
        return invalid(format!("{d} is not a squarefree integer > 1"));
    }
    if d == 3 {
        return invalid("d = 3 has no mirror field distinct from Q(√−3)");
    }
    let k = log_class_group(&QuadField::new(d)?, ell, opts)?.structure;
    let k_star = log_class_group(&QuadField::new(squarefree_part(-3 * d))?, ell, opts)?.structure;
    if !k.stabilized || !k_star.stabilized {
        return Err(Error::NotStabilized { cap: opts.max_precision });
    }
    let (rank_k, rank_k_star) = (k.rank(), k_star.rank());
    Ok(ReflectionRow {
        d,
        rank_k,
        rank_k_star,
        delta: rank_k as i64 - rank_k_star as i64,
        k_structure: k,
        k_star_structure: k_star,
    })
}

/// The three equivalent triviality statements for one component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrivialityReport {
    pub report: WKReport,
    pub wk_quotient_trivial: bool,
    pub exponent_quotient_trivial: bool,
    pub component_trivial: bool,
}

impl TrivialityReport {
    pub fn consistent(&self) -> bool {
        self.wk_quotient_trivial == self.exponent_quotient_trivial
            && self.exponent_quotient_trivial == self.component_trivial
    }
}

pub fn triviality_report(d: i64, i: i64, ell: u64, opts: &LogOptions) -> Result<TrivialityReport> {
    let report = wk_structure(d, i, 1, ell, opts)?;
    Ok(TrivialityReport {
        wk_quotient_trivial: report.is_trivial(),
        exponent_quotient_trivial: report.full_candidate.quotient(1).is_empty(),
        component_trivial: report.full_candidate.is_trivial(),
        report,
    })
}
