use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::int::{check_ell, mod_inverse, pow_ell, valuation_big, PadicInt};
use crate::error::{invalid, Error, Result};

/// Exponent of an elementary divisor `ℓ^a`.
///
/// `AtLeast(m)` marks a divisor that vanished at precision `m`: either a free
/// summand or a cyclic factor of order at least `ℓ^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Exponent {
    Finite(u32),
    AtLeast(u32),
}

impl Exponent {
    pub fn finite(self) -> Option<u32> {
        match self {
            Exponent::Finite(a) => Some(a),
            Exponent::AtLeast(_) => None,
        }
    }

    pub fn is_resolved(self) -> bool {
        matches!(self, Exponent::Finite(_))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(a) => write!(f, "{a}"),
            Exponent::AtLeast(m) => write!(f, ">={m}"),
        }
    }
}

/// Dense matrix over `Z/ℓ^m`, entries stored as canonical residues.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PMatrix {
    ell: u64,
    prec: u32,
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for PMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PMatrix {}x{} mod {}^{}", self.rows, self.cols, self.ell, self.prec)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl PMatrix {
    pub fn zeros(ell: u64, prec: u32, rows: usize, cols: usize) -> Result<Self> {
        check_ell(ell)?;
        if prec == 0 {
            return invalid("precision must be at least 1");
        }
        Ok(Self { ell, prec, rows, cols, data: vec![BigInt::zero(); rows * cols] })
    }

    pub fn identity(ell: u64, prec: u32, n: usize) -> Result<Self> {
        let mut m = Self::zeros(ell, prec, n, n)?;
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        Ok(m)
    }

    /// Builds a matrix from integer rows; all rows must have equal length.
    pub fn from_rows<T: Into<BigInt> + Clone>(ell: u64, prec: u32, rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return invalid("ragged matrix rows");
        }
        let mut m = Self::zeros(ell, prec, rows.len(), cols)?;
        for (i, r) in rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                m.set(i, j, x.clone().into());
            }
        }
        Ok(m)
    }

    /// Builds a matrix from ℓ-adic entries at the minimum of their precisions.
    pub fn from_padic_rows(ell: u64, rows: &[Vec<PadicInt>]) -> Result<Self> {
        let prec = rows.iter().flatten().map(PadicInt::prec).min();
        let Some(prec) = prec else {
            let cols = rows.first().map_or(0, Vec::len);
            return Self::zeros(ell, 1, rows.len(), cols);
        };
        if rows.iter().flatten().any(|x| x.ell() != ell) {
            return invalid("entries over different primes");
        }
        let ints: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|x| x.value().clone()).collect()).collect();
        Self::from_rows(ell, prec, &ints)
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> BigInt {
        pow_ell(self.ell, self.prec)
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn entry(&self, i: usize, j: usize) -> PadicInt {
        PadicInt::reduced(self.ell, self.get(i, j).clone(), self.prec)
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        let m = self.modulus();
        self.data[i * self.cols + j] = x.mod_floor(&m);
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self { data: vec![BigInt::zero(); self.data.len()], rows: self.cols, cols: self.rows, ..*self };
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    /// Reduces to a lower precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        let prec = prec.clamp(1, self.prec);
        let m = pow_ell(self.ell, prec);
        Self { data: self.data.iter().map(|x| x.mod_floor(&m)).collect(), prec, ..*self }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows || self.ell != other.ell {
            return invalid("incompatible matrix product");
        }
        let prec = self.prec.min(other.prec);
        let m = pow_ell(self.ell, prec);
        let mut out = Self::zeros(self.ell, prec, self.rows, other.cols)?;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
            for j in 0..other.cols {
                let x = &mut out.data[i * other.cols + j];
                *x = x.mod_floor(&m);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Inverse of a matrix invertible over `Z/ℓ^m`.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return invalid("inverse of a non-square matrix");
        }
        let n = self.rows;
        let m = self.modulus();
        let mut a = self.clone();
        let mut inv = Self::identity(self.ell, self.prec, n)?;
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !(a.get(r, c) % self.ell).is_zero())
                .ok_or_else(|| Error::InvalidInput("matrix is not invertible mod ℓ".into()))?;
            a.swap_rows(c, p);
            inv.swap_rows(c, p);
            let s = mod_inverse(a.get(c, c), &m).expect("unit pivot");
            a.scale_row(c, &s);
            inv.scale_row(c, &s);
            for r in 0..n {
                if r != c && !a.get(r, c).is_zero() {
                    let f = a.get(r, c).clone();
                    a.add_row_multiple(r, c, &(-&f));
                    inv.add_row_multiple(r, c, &(-&f));
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, s: &BigInt) {
        let m = self.modulus();
        for k in 0..self.cols {
            let x = &mut self.data[i * self.cols + k];
            *x = (&*x * s).mod_floor(&m);
        }
    }

    /// row_dst += f · row_src
    fn add_row_multiple(&mut self, dst: usize, src: usize, f: &BigInt) {
        let m = self.modulus();
        for k in 0..self.cols {
            let add = self.data[src * self.cols + k].clone() * f;
            let x = &mut self.data[dst * self.cols + k];
            *x = (&*x + add).mod_floor(&m);
        }
    }

    /// col_dst += f · col_src
    fn add_col_multiple(&mut self, dst: usize, src: usize, f: &BigInt) {
        let m = self.modulus();
        for r in 0..self.rows {
            let add = self.data[r * self.cols + src].clone() * f;
            let x = &mut self.data[r * self.cols + dst];
            *x = (&*x + add).mod_floor(&m);
        }
    }
}

/// Smith form `U·M·V = diag(ℓ^{a_i})` over `Z/ℓ^m`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    /// Nondecreasing exponents, one per diagonal slot (`min(rows, cols)`).
    pub divisor_exponents: Vec<Exponent>,
    pub u: PMatrix,
    pub v: PMatrix,
}

impl SnfResult {
    /// Exponents of `coker(M) = (Z/ℓ^m)^rows / M·(Z/ℓ^m)^cols`, free rows included.
    pub fn cokernel_exponents(&self) -> Vec<Exponent> {
        let prec = self.u.prec();
        let mut e = self.divisor_exponents.clone();
        e.extend(std::iter::repeat_n(Exponent::AtLeast(prec), self.u.rows() - e.len()));
        e
    }

    /// The diagonal matrix `D` the transforms produce.
    pub fn diagonal(&self) -> PMatrix {
        let mut d =
            PMatrix::zeros(self.u.ell(), self.u.prec(), self.u.rows(), self.v.rows()).expect("valid dimensions");
        for (i, e) in self.divisor_exponents.iter().enumerate() {
            if let Exponent::Finite(a) = e {
                d.set(i, i, pow_ell(d.ell(), *a));
            }
        }
        d
    }
}

/// Smith normal form with transforms.
///
/// Pivots on the entry of least valuation, breaking ties by smallest
/// `(row, col)`, so the output is deterministic.
pub fn smith_normal_form(m: &PMatrix) -> SnfResult {
    let (r, c) = (m.rows, m.cols);
    let ell = m.ell;
    let prec = m.prec;
    let modulus = m.modulus();
    let mut a = m.clone();
    let mut u = PMatrix::identity(ell, prec, r).expect("valid prime");
    let mut v = PMatrix::identity(ell, prec, c).expect("valid prime");
    let mut exps = Vec::with_capacity(r.min(c));

    for t in 0..r.min(c) {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for i in t..r {
            for j in t..c {
                if let Some(val) = valuation_big(a.get(i, j), ell) {
                    if best.is_none_or(|(b, _, _)| val < b) {
                        best = Some((val, i, j));
                        if val == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((val, pi, pj)) = best else {
            exps.extend(std::iter::repeat_n(Exponent::AtLeast(prec), r.min(c) - t));
            break;
        };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);

        let scale = pow_ell(ell, val);
        let unit = a.get(t, t) / &scale;
        let unit_inv = mod_inverse(&unit, &modulus).expect("pivot unit part is a unit");
        a.scale_row(t, &unit_inv);
        u.scale_row(t, &unit_inv);

        for i in t + 1..r {
            if a.get(i, t).is_zero() {
                continue;
            }
            let f = -(a.get(i, t) / &scale);
            a.add_row_multiple(i, t, &f);
            u.add_row_multiple(i, t, &f);
        }
        for j in t + 1..c {
            if a.get(t, j).is_zero() {
                continue;
            }
            let f = -(a.get(t, j) / &scale);
            a.add_col_multiple(j, t, &f);
            v.add_col_multiple(j, t, &f);
        }
        exps.push(Exponent::Finite(val));
    }
    SnfResult { divisor_exponents: exps, u, v }
}

/// Basis of `{x : Σ x_i·row_i ≡ 0}` after dividing the row by `ℓ^{v₀}`.
///
/// The pivot is the last entry of minimal valuation; the basis vectors are
/// `e_i − (row_i/row_pivot)·e_pivot` for `i ≠ pivot`, returned at precision
/// `m − v₀`.
pub fn kernel_basis(row: &[PadicInt]) -> Result<Vec<Vec<PadicInt>>> {
    let Some(first) = row.first() else {
        return Ok(Vec::new());
    };
    let ell = first.ell();
    let prec = row.iter().map(PadicInt::prec).min().unwrap_or(1);
    let row: Vec<PadicInt> = row.iter().map(|x| x.with_prec(prec)).collect();
    let mut pivot: Option<(u32, usize)> = None;
    for (i, x) in row.iter().enumerate() {
        if let Some(v) = x.valuation() {
            if pivot.is_none_or(|(b, _)| v <= b) {
                pivot = Some((v, i));
            }
        }
    }
    let (v0, p) = pivot.ok_or_else(|| Error::PrecisionExhausted(format!("row vanishes mod {ell}^{prec}")))?;
    let out_prec = prec - v0;
    let piv_inv = row[p].exact_divide(v0)?.inverse()?;
    let mut basis = Vec::with_capacity(row.len() - 1);
    for (i, x) in row.iter().enumerate() {
        if i == p {
            continue;
        }
        let ratio = match x.valuation() {
            Some(_) => &x.exact_divide(v0)? * &piv_inv,
            None => PadicInt::zero(ell, out_prec),
        };
        let mut vec = vec![PadicInt::zero(ell, out_prec); row.len()];
        vec[i] = PadicInt::one(ell, out_prec);
        vec[p] = -ratio;
        basis.push(vec);
    }
    Ok(basis)
}
