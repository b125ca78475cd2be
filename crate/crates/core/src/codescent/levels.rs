//! Finite levels `X_n = X/ω_n X`, transition kernels and twisted copoints.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use super::invariants::characteristic_polynomial;
use super::poly::{self, eval_mod, omega_quotient};
use super::presentation::LambdaPresentation;
use crate::error::{invalid, Error, Result};
use crate::logarith::AbelianGroupStructure;
use crate::padic::{pow_ell, smith_normal_form, Exponent, PMatrix, PadicInt};

/// `Z_ℓ[T]/ω_n ≅ Z_ℓ^N` with `N = ℓ^n`, coefficients mod `ℓ^m`.
struct Level {
    n_dim: usize,
    /// Coefficients `1..N−1` of `ω_n`; `T^N ≡ −Σ low[s]·T^s`.
    low: Vec<BigInt>,
    modulus: BigInt,
}

impl Level {
    fn new(ell: u64, n: u32, prec: u32) -> Self {
        let modulus = pow_ell(ell, prec);
        let mut low = poly::omega(ell, n);
        low.pop();
        let low = low.into_iter().map(|c| c.mod_floor(&modulus)).collect::<Vec<_>>();
        Self { n_dim: low.len(), low, modulus }
    }

    fn times_t(&self, v: &mut Vec<BigInt>) {
        let top = v.pop().expect("nonempty level");
        v.insert(0, BigInt::zero());
        if !top.is_zero() {
            for (x, w) in v.iter_mut().zip(&self.low).skip(1) {
                *x = (&*x - &top * w).mod_floor(&self.modulus);
            }
        }
    }

    fn reduce(&self, p: &[BigInt]) -> Vec<BigInt> {
        let mut r = vec![BigInt::zero(); self.n_dim];
        for c in p.iter().rev() {
            self.times_t(&mut r);
            r[0] = (&r[0] + c).mod_floor(&self.modulus);
        }
        r
    }

    /// Columns of multiplication by `p` in the basis `1, T, …, T^{N−1}`.
    fn mult_columns(&self, p: &[BigInt]) -> Vec<Vec<BigInt>> {
        let mut col = self.reduce(p);
        let mut cols = Vec::with_capacity(self.n_dim);
        for _ in 0..self.n_dim {
            cols.push(col.clone());
            self.times_t(&mut col);
        }
        cols
    }
}

fn level_dim(x: &LambdaPresentation, n: u32) -> Result<usize> {
    let size = x.ell.checked_pow(n).and_then(|nd| usize::try_from(nd).ok()).and_then(|nd| nd.checked_mul(x.generators));
    match size {
        Some(s) if s <= x.size_cap() => Ok(s / x.generators),
        _ => Err(Error::ResourceLimit(format!("level {n} exceeds the size cap {}", x.size_cap()))),
    }
}

/// Block matrix of `X_n`: rows `(generator, T^a)`, columns `(relation, T^s)`.
fn level_matrix(x: &LambdaPresentation, n: u32) -> Result<PMatrix> {
    let nd = level_dim(x, n)?;
    let level = Level::new(x.ell, n, x.precision);
    let (k, r) = (x.generators, x.relations());
    let mut m = PMatrix::zeros(x.ell, x.precision, k * nd, r * nd)?;
    for (i, row) in x.matrix.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            for (s, col) in level.mult_columns(&poly::from_i64(entry)).into_iter().enumerate() {
                for (a, c) in col.into_iter().enumerate() {
                    m.set(i * nd + a, j * nd + s, c);
                }
            }
        }
    }
    Ok(m)
}

fn structure(exps: &[Exponent], prec: u32) -> AbelianGroupStructure {
    let mut s = AbelianGroupStructure::from_exponents(exps, prec);
    s.stabilized = s.finiteness_certificate;
    s
}

/// Structure of `X_n = X/ω_n X`.
pub fn level_quotient(x: &LambdaPresentation, n: u32) -> Result<AbelianGroupStructure> {
    let snf = smith_normal_form(&level_matrix(x, n)?);
    Ok(structure(&snf.cokernel_exponents(), x.precision))
}

/// Kernel of `X_n → X_{n+j}`, induced by multiplication by `ω_{n+j}/ω_n`.
pub fn capitulation_kernel(x: &LambdaPresentation, n: u32, j: u32) -> Result<AbelianGroupStructure> {
    let (ell, m) = (x.ell, x.precision);
    let b = level_matrix(x, n)?;
    let b_up = level_matrix(x, n + j)?;
    let (nd, nd_up) = (level_dim(x, n)?, level_dim(x, n + j)?);
    let k = x.generators;

    let snf_up = smith_normal_form(&b_up);
    let up_exps: Vec<u32> = snf_up
        .cokernel_exponents()
        .into_iter()
        .map(|e| e.finite())
        .collect::<Option<_>>()
        .ok_or_else(|| Error::PrecisionExhausted(format!("X_{} is not finite mod {ell}^{m}", n + j)))?;
    let c = up_exps.iter().copied().max().unwrap_or(0);
    if c == 0 {
        return level_quotient(x, n);
    }

    // Φ: e_i·T^s ↦ e_i·T^s·ω_{n+j}/ω_n.
    let level_up = Level::new(ell, n + j, m);
    let nu_cols = level_up.mult_columns(&omega_quotient(ell, n, j));
    let mut phi = PMatrix::zeros(ell, m, k * nd_up, k * nd)?;
    for i in 0..k {
        for (s, col) in nu_cols.iter().take(nd).enumerate() {
            for (a, v) in col.iter().enumerate() {
                phi.set(i * nd_up + a, i * nd + s, v.clone());
            }
        }
    }
    // x ↦ X_{n+j} ≅ ⊕ Z/ℓ^{b_i}, every row rescaled to modulus ℓ^c.
    let mut g = snf_up.u.mul(&phi)?;
    let modulus = pow_ell(ell, m);
    for (i, &bi) in up_exps.iter().enumerate() {
        let f = pow_ell(ell, c - bi);
        for col in 0..g.cols() {
            let v = (g.get(i, col) * &f).mod_floor(&modulus);
            g.set(i, col, v);
        }
    }
    let snf_g = smith_normal_form(&g.with_prec(c));
    // Kernel lattice K = V·diag(ℓ^{k_i}) with k_i = c − g_i.
    let shifts: Vec<u32> = (0..k * nd)
        .map(|i| match snf_g.divisor_exponents.get(i) {
            Some(Exponent::Finite(gi)) => c - gi,
            _ => 0,
        })
        .collect();
    let v_rows: Vec<Vec<BigInt>> = (0..k * nd).map(|i| snf_g.v.row(i).to_vec()).collect();
    let v_inv = PMatrix::from_rows(ell, m, &v_rows)?.inverse()?;
    let w = v_inv.mul(&b)?;
    let drop = shifts.iter().copied().max().unwrap_or(0);
    if drop >= m {
        return Err(Error::PrecisionExhausted(format!("capitulation kernel needs precision above {m}")));
    }
    let new_prec = m - drop;
    let mut rows = Vec::with_capacity(w.rows());
    for (i, &ki) in shifts.iter().enumerate() {
        let f = pow_ell(ell, ki);
        let row: Vec<BigInt> = w
            .row(i)
            .iter()
            .map(|v| {
                let (q, r) = v.div_rem(&f);
                if r.is_zero() {
                    Ok(q)
                } else {
                    Err(Error::Internal("relation lattice not inside the kernel lattice".into()))
                }
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    let coords = PMatrix::from_rows(ell, new_prec, &rows)?;
    Ok(structure(&smith_normal_form(&coords).cokernel_exponents(), new_prec))
}

/// Whether the twisted copoints are finite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Finiteness {
    Finite,
    /// The characteristic polynomial vanishes at the twist point to the
    /// working precision.
    PossiblyInfinite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedCoinvariants {
    pub structure: AbelianGroupStructure,
    pub finiteness: Finiteness,
    /// `κ(γ)^{−i} − 1`.
    pub twist_point: PadicInt,
    /// The characteristic polynomial at the twist point.
    pub char_poly_value: PadicInt,
}

/// Γ-coinvariants of `X ⊗ κ^i`: the cokernel of the presentation evaluated
/// at `T = κ(γ)^{−i} − 1`.
pub fn twisted_coinvariants(x: &LambdaPresentation, i: i64, kappa: &PadicInt) -> Result<TwistedCoinvariants> {
    if kappa.ell() != x.ell {
        return invalid("κ(γ) lives over a different prime");
    }
    let one = PadicInt::one(x.ell, kappa.prec());
    if (kappa.clone() - one.clone()).valuation().is_some_and(|v| v == 0) {
        return invalid("κ(γ) must be ≡ 1 mod ℓ");
    }
    let prec = x.precision.min(kappa.prec());
    let t0 = (kappa.with_prec(prec).pow(-i)? - one.with_prec(prec)).with_prec(prec);
    let modulus = pow_ell(x.ell, prec);
    let rows: Vec<Vec<BigInt>> = x
        .matrix
        .iter()
        .map(|row| row.iter().map(|e| eval_mod(&poly::from_i64(e), t0.value(), &modulus)).collect())
        .collect();
    let snf = smith_normal_form(&PMatrix::from_rows(x.ell, prec, &rows)?);
    let char_poly = characteristic_polynomial(x)?;
    let value = PadicInt::new(x.ell, eval_mod(&char_poly, t0.value(), &modulus), prec)?;
    let finiteness = if value.is_zero() { Finiteness::PossiblyInfinite } else { Finiteness::Finite };
    Ok(TwistedCoinvariants {
        structure: structure(&snf.cokernel_exponents(), prec),
        finiteness,
        twist_point: t0,
        char_poly_value: value,
    })
}
