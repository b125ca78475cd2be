//! Characteristic polynomial, `μ`, `λ` and the fitted `ν` of the size law
//! `log_ℓ |X_n| = μℓ^n + λn + ν`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::levels::{capitulation_kernel, level_quotient};
use super::poly::{content_valuation, det, from_i64, gcd_q, Poly};
use super::presentation::LambdaPresentation;
use crate::error::{Error, Result};

const MAX_MINORS: usize = 10_000;
const MAX_GENERATORS: usize = 8;

fn combinations(r: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < r - k + p) else {
            return out;
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    (0..k).try_fold(1usize, |acc, i| acc.checked_mul(n - i).map(|v| v / (i + 1)))
}

/// Generator of the characteristic ideal: `ℓ^μ` times the primitive gcd over
/// `Q[T]` of the maximal minors (the determinant for a square matrix).
pub fn characteristic_polynomial(x: &LambdaPresentation) -> Result<Vec<BigInt>> {
    let (k, r) = (x.generators, x.relations());
    if k > MAX_GENERATORS || binomial(r, k).is_none_or(|c| c > MAX_MINORS) {
        return Err(Error::ResourceLimit(format!("{k}×{r} presentation has too many maximal minors")));
    }
    let entries: Vec<Vec<Poly>> = x.matrix.iter().map(|row| row.iter().map(|e| from_i64(e)).collect()).collect();
    let minors: Vec<Poly> = combinations(r, k)
        .into_iter()
        .map(|cols| {
            let sub: Vec<Vec<Poly>> =
                entries.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
            det(&sub)
        })
        .filter(|p| !p.is_empty())
        .collect();
    let mu = minors.iter().filter_map(|p| content_valuation(p, x.ell)).min().ok_or(Error::NotTorsion)?;
    let scale = num_traits::pow(BigInt::from(x.ell), mu as usize);
    Ok(gcd_q(&minors).into_iter().map(|c| c * &scale).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IwasawaInvariants {
    pub mu: u32,
    pub lambda: u32,
    pub char_poly: Vec<BigInt>,
    /// `(n, log_ℓ|X_n| − μℓ^n − λn)` for every level computed exactly.
    pub nu_table: Vec<(u32, i64)>,
    /// The common offset of the last two levels, when they agree.
    pub nu: Option<i64>,
}

impl IwasawaInvariants {
    /// Predicted `log_ℓ |X_n|`.
    pub fn predicted_log_size(&self, ell: u64, n: u32) -> Option<i64> {
        let base = i64::from(self.mu).checked_mul(i64::try_from(ell.checked_pow(n)?).ok()?)?;
        Some(base + i64::from(self.lambda) * i64::from(n) + self.nu?)
    }
}

/// `μ` and `λ` from the characteristic polynomial, and `ν` fitted on levels
/// `0..=max_level` (levels beyond the size cap are skipped).
pub fn iwasawa_invariants(x: &LambdaPresentation, max_level: u32) -> Result<IwasawaInvariants> {
    let char_poly = characteristic_polynomial(x)?;
    let mu = content_valuation(&char_poly, x.ell).ok_or(Error::NotTorsion)?;
    let ell = BigInt::from(x.ell);
    let scale = num_traits::pow(ell.clone(), mu as usize);
    let lambda = char_poly
        .iter()
        .position(|c| !(c / &scale % &ell).is_zero())
        .ok_or_else(|| Error::Internal("characteristic polynomial has no unit coefficient".into()))?
        as u32;
    let mut nu_table = Vec::new();
    for n in 0..=max_level {
        let s = match level_quotient(x, n) {
            Ok(s) => s,
            Err(Error::ResourceLimit(_)) => break,
            Err(e) => return Err(e),
        };
        if !s.finiteness_certificate {
            continue;
        }
        let Some(growth) = x.ell.checked_pow(n).and_then(|p| i64::try_from(p).ok()) else { break };
        nu_table.push((n, i64::from(s.log_order()) - i64::from(mu) * growth - i64::from(lambda) * i64::from(n)));
    }
    let nu = match nu_table.as_slice() {
        [.., (_, a), (_, b)] if a == b => Some(*b),
        _ => None,
    };
    Ok(IwasawaInvariants { mu, lambda, char_poly, nu_table, nu })
}

/// Splitting of a level into its infinite part and the capitulation kernel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelDecomposition {
    pub n: u32,
    /// `α_j` with `X_n ≅ ⊕ Z/ℓ^{n+α_j} ⊕ Cap_n`.
    pub alphas: Vec<i64>,
    pub capitulation: Vec<u32>,
    /// The multisets match at `n` and `n + 1` with the same `α_j`, and there
    /// are exactly `λ` of them.
    pub holds: bool,
}

fn multiset_minus(whole: &[u32], part: &[u32]) -> Option<Vec<u32>> {
    let mut rest = whole.to_vec();
    for p in part {
        let pos = rest.iter().position(|x| x == p)?;
        rest.remove(pos);
    }
    Some(rest)
}

/// Checks `X_n ≅ (⊕_{j ≤ λ} Z/ℓ^{n+α_j}) ⊕ Cap_n` by exponent multisets at
/// levels `n` and `n + 1`, using `Cap` relative to `j` further levels.
pub fn level_decomposition(x: &LambdaPresentation, n: u32, j: u32) -> Result<LevelDecomposition> {
    let inv = iwasawa_invariants(x, 0)?;
    if inv.mu != 0 {
        return Err(Error::Unsupported("the decomposition needs μ = 0".into()));
    }
    let mut rests = Vec::new();
    let mut caps = Vec::new();
    for level in [n, n + 1] {
        let xs = level_quotient(x, level)?;
        let cap = capitulation_kernel(x, level, j)?;
        if !xs.finiteness_certificate || !cap.finiteness_certificate {
            return Err(Error::PrecisionExhausted(format!("level {level} unresolved")));
        }
        rests.push(multiset_minus(&xs.exponents, &cap.exponents));
        caps.push(cap.exponents);
    }
    let alphas: Vec<i64> = rests[0].iter().flatten().map(|&e| i64::from(e) - i64::from(n)).collect();
    let holds = match (&rests[0], &rests[1]) {
        (Some(a), Some(b)) => {
            a.len() == inv.lambda as usize && a.iter().map(|e| e + 1).collect::<Vec<_>>() == *b && caps[0] == caps[1]
        }
        _ => false,
    };
    Ok(LevelDecomposition { n, alphas, capitulation: caps.swap_remove(0), holds })
}
