use std::fmt;

use serde::Serialize;

use crate::padic::Exponent;

/// A finite ℓ-group `⊕ Z/ℓ^{a_i}` as computed at a finite precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianGroupStructure {
    /// Positive exponents, nondecreasing.
    pub exponents: Vec<u32>,
    /// Cyclic factors not resolved at `precision_used`.
    pub unresolved: usize,
    pub precision_used: u32,
    /// The structure agrees at `m` and `m − 2` with every exponent `≤ m − 2`.
    pub stabilized: bool,
    /// Every elementary divisor was resolved at `precision_used`.
    pub finiteness_certificate: bool,
}

impl AbelianGroupStructure {
    /// Builds a structure from cokernel exponents; zeros are dropped.
    pub fn from_exponents(exps: &[Exponent], precision: u32) -> Self {
        let mut exponents: Vec<u32> = exps.iter().filter_map(|e| e.finite()).filter(|&a| a > 0).collect();
        exponents.sort_unstable();
        let unresolved = exps.iter().filter(|e| !e.is_resolved()).count();
        Self {
            exponents,
            unresolved,
            precision_used: precision,
            stabilized: false,
            finiteness_certificate: unresolved == 0,
        }
    }

    /// A structure known exactly (no precision involved).
    pub fn exact(mut exponents: Vec<u32>) -> Self {
        exponents.retain(|&a| a > 0);
        exponents.sort_unstable();
        Self { exponents, unresolved: 0, precision_used: 0, stabilized: true, finiteness_certificate: true }
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.is_empty() && self.unresolved == 0
    }

    /// ℓ-rank, counting unresolved factors.
    pub fn rank(&self) -> usize {
        self.exponents.len() + self.unresolved
    }

    /// `log_ℓ` of the order of the resolved part.
    pub fn log_order(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// Structure of `G/ℓ^r G`.
    pub fn quotient(&self, r: u32) -> Vec<u32> {
        let mut q: Vec<u32> = self.exponents.iter().map(|&a| a.min(r)).collect();
        q.extend(std::iter::repeat_n(r, self.unresolved));
        q.retain(|&a| a > 0);
        q
    }

    /// Same group, ignoring precision bookkeeping.
    pub fn same_group(&self, other: &Self) -> bool {
        self.exponents == other.exponents && self.unresolved == other.unresolved
    }
}

impl fmt::Display for AbelianGroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "1");
        }
        let mut parts: Vec<String> = self.exponents.iter().map(|a| format!("Z/ℓ^{a}")).collect();
        parts.extend((0..self.unresolved).map(|_| format!("Z/ℓ^(≥{})", self.precision_used)));
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_exponents_drops_trivial_factors() {
        let s = AbelianGroupStructure::from_exponents(
            &[Exponent::Finite(0), Exponent::Finite(2), Exponent::AtLeast(8), Exponent::Finite(1)],
            8,
        );
        assert_eq!(s.exponents, vec![1, 2]);
        assert_eq!(s.unresolved, 1);
        assert!(!s.finiteness_certificate);
        assert_eq!(s.rank(), 3);
        assert_eq!(s.quotient(1), vec![1, 1, 1]);
    }
}
