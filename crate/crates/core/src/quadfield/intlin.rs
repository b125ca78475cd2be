//! Integer row echelon forms and kernels of maps to finite abelian groups.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Hermite normal form of the row lattice: nonzero rows only, pivots
/// positive, entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for j in 0..cols {
        loop {
            let piv = (r..m.len()).filter(|&i| !m[i][j].is_zero()).min_by(|&x, &y| m[x][j].abs().cmp(&m[y][j].abs()));
            let Some(p) = piv else { break };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][j].is_zero() {
                    continue;
                }
                let q = m[i][j].div_floor(&m[r][j]);
                let (head, tail) = m.split_at_mut(i);
                for (x, y) in tail[0].iter_mut().zip(&head[r]) {
                    *x -= &q * y;
                }
                if !tail[0][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r >= m.len() || m[r][j].is_zero() {
            continue;
        }
        if m[r][j].is_negative() {
            for x in m[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = m[i][j].div_floor(&m[r][j]);
            if q.is_zero() {
                continue;
            }
            let (head, tail) = m.split_at_mut(r);
            for (x, y) in head[i].iter_mut().zip(&tail[0]) {
                *x -= &q * y;
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Lower-triangular variant: echelon from the last column backwards, rows
/// listed with the last pivot column first.
pub fn hnf_lower(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let rev: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().rev().cloned().collect()).collect();
    let mut h = hnf(&rev);
    for r in h.iter_mut() {
        r.reverse();
    }
    h.reverse();
    h
}

/// Basis of `{x ∈ Zⁿ : Σ xᵢ·cᵢ = 0 in ⊕ Z/mⱼ}` for images `cᵢ`.
pub fn kernel_mod(images: &[Vec<BigInt>], moduli: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = images.len();
    let k = moduli.len();
    let mut rows = Vec::with_capacity(n + k);
    for (i, c) in images.iter().enumerate() {
        let mut row = c.clone();
        row.extend((0..n).map(|t| BigInt::from((t == i) as i32)));
        rows.push(row);
    }
    for (j, mj) in moduli.iter().enumerate() {
        let mut row = vec![BigInt::zero(); k + n];
        row[j] = mj.clone();
        rows.push(row);
    }
    let h = hnf(&rows);
    let kernel: Vec<Vec<BigInt>> =
        h.into_iter().filter(|r| r[..k].iter().all(Zero::is_zero)).map(|r| r[k..].to_vec()).collect();
    hnf_lower(&kernel)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn hnf_basic() {
        let h = hnf(&big(&[&[2, 4], &[3, 5], &[0, 0]]));
        assert_eq!(h, big(&[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn kernel_of_opposite_classes() {
        let k = kernel_mod(&big(&[&[1], &[-1]]), &[BigInt::from(3)]);
        assert_eq!(k, big(&[&[3, 0], &[1, 1]]));
    }

    #[test]
    fn kernel_has_full_rank_and_maps_to_zero() {
        let imgs = big(&[&[1, 0], &[2, 1], &[0, 3]]);
        let mods = [BigInt::from(9), BigInt::from(3)];
        let k = kernel_mod(&imgs, &mods);
        assert_eq!(k.len(), 3);
        for v in &k {
            for j in 0..2 {
                let s: BigInt = v.iter().zip(&imgs).map(|(x, c)| x * &c[j]).sum();
                assert!((s % &mods[j]).is_zero());
            }
        }
    }
}
