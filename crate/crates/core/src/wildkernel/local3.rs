//! Root search for integer cubics in the ring of integers of the degree-9
//! field `B₁·U₃` over `Q₃`.
//!
//! `U₃ = Q₃(θ)` with `θ³ = θ + 1` is the unramified cubic extension and
//! `B₁ = Q₃(π)` with `π = ζ₉ + ζ₉⁻¹ + 1`, `π³ = 3π² − 3`, is the first layer of
//! the cyclotomic `Z₃`-extension. Their compositum contains every cyclic cubic
//! extension of `Q₃`. Elements are `Σ c_{ji} π^j θ^i` with `c_{ji}` mod `3^M`.

use crate::error::{invalid, Error, Result};

type Unr = [i128; 3];
type Elem = [Unr; 3];

/// Outcome of the search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootSearch {
    /// A residue class certified by Hensel's lemma contains a root.
    Found,
    /// Every branch was eliminated: no root exists.
    None,
}

struct Ring {
    modulus: i128,
    prec: u32,
}

impl Ring {
    fn red(&self, x: i128) -> i128 {
        x.rem_euclid(self.modulus)
    }

    fn unr_mul(&self, a: &Unr, b: &Unr) -> Unr {
        let mut c = [0i128; 5];
        for i in 0..3 {
            for j in 0..3 {
                c[i + j] = self.red(c[i + j] + self.red(a[i] * b[j]));
            }
        }
        // θ³ = θ + 1, θ⁴ = θ² + θ
        [self.red(c[0] + c[3]), self.red(c[1] + c[3] + c[4]), self.red(c[2] + c[4])]
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let mut p = [[0i128; 3]; 5];
        for j in 0..3 {
            for l in 0..3 {
                let w = self.unr_mul(&a[j], &b[l]);
                for i in 0..3 {
                    p[j + l][i] = self.red(p[j + l][i] + w[i]);
                }
            }
        }
        // π³ = 3π² − 3, π⁴ = 9π² − 3π − 9
        let mut out = [p[0], p[1], p[2]];
        for i in 0..3 {
            out[2][i] = self.red(out[2][i] + 3 * p[3][i] + 9 * p[4][i]);
            out[1][i] = self.red(out[1][i] - 3 * p[4][i]);
            out[0][i] = self.red(out[0][i] - 3 * p[3][i] - 9 * p[4][i]);
        }
        out
    }

    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        let mut out = *a;
        for j in 0..3 {
            for i in 0..3 {
                out[j][i] = self.red(a[j][i] + b[j][i]);
            }
        }
        out
    }

    fn scalar(&self, c: i128) -> Elem {
        let mut e = [[0i128; 3]; 3];
        e[0][0] = self.red(c);
        e
    }

    /// π-adic valuation, capped at `3M` (the element vanishes at this precision).
    fn valuation(&self, x: &Elem) -> u32 {
        let mut best = 3 * self.prec;
        for (j, w) in x.iter().enumerate() {
            for &c in w {
                if c != 0 {
                    let mut v = 0;
                    let mut y = c;
                    while y % 3 == 0 {
                        y /= 3;
                        v += 1;
                    }
                    best = best.min(3 * v + j as u32);
                }
            }
        }
        best
    }

    /// `g(x)`, `g'(x)` and `g''(x)/2` for `g = X³ + aX² + bX + c`.
    fn eval(&self, coeffs: &[i64; 3], x: &Elem) -> (Elem, Elem, Elem) {
        let [a, b, c] = coeffs.map(i128::from);
        let mut g = self.add(x, &self.scalar(a));
        g = self.add(&self.mul(&g, x), &self.scalar(b));
        g = self.add(&self.mul(&g, x), &self.scalar(c));
        let three_x = self.mul(x, &self.scalar(3));
        let mut dg = self.add(&three_x, &self.scalar(2 * a));
        dg = self.add(&self.mul(&dg, x), &self.scalar(b));
        let half_d2g = self.add(&three_x, &self.scalar(a));
        (g, dg, half_d2g)
    }
}

/// Whether `X³ + aX² + bX + c` has a root in `B₁·U₃`, searched π-adically
/// with coefficients known mod `3^prec`.
pub fn has_root_in_b1u3(coeffs: [i64; 3], prec: u32) -> Result<RootSearch> {
    if !(2..=30).contains(&prec) {
        return invalid("3-adic precision must lie in 2..=30");
    }
    let ring = Ring { modulus: 3i128.pow(prec), prec };
    let mut pi_pows = vec![ring.scalar(1)];
    let mut pi = [[0i128; 3]; 3];
    pi[1][0] = 1;
    for k in 1..=3 * prec as usize {
        pi_pows.push(ring.mul(&pi_pows[k - 1], &pi));
    }
    let digits: Vec<Unr> = (0..27).map(|n| [i128::from(n % 3), i128::from(n / 3 % 3), i128::from(n / 9)]).collect();

    let mut exhausted = false;
    let mut stack = vec![(ring.scalar(0), 0u32)];
    while let Some((x, k)) = stack.pop() {
        let (g, dg, h) = ring.eval(&coeffs, &x);
        let vg = ring.valuation(&g);
        let vdg = ring.valuation(&dg);
        // A root x + δ with v(δ) ≥ k forces g(x) = −(g'(x)δ + h(x)δ² + δ³).
        let need = (vdg + k).min(ring.valuation(&h) + 2 * k).min(3 * k).min(3 * prec);
        if vg < need {
            continue;
        }
        if vdg < 3 * prec && vg > 2 * vdg {
            return Ok(RootSearch::Found);
        }
        if k >= 3 * prec {
            exhausted = true;
            continue;
        }
        for d in digits.iter().rev() {
            let mut step = [[0i128; 3]; 3];
            step[0] = *d;
            let y = ring.add(&x, &ring.mul(&step, &pi_pows[k as usize]));
            stack.push((y, k + 1));
        }
    }
    if exhausted {
        Err(Error::PrecisionExhausted(format!("root search undecided at 3-adic precision {prec}")))
    } else {
        Ok(RootSearch::None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_relations_hold() {
        let r = Ring { modulus: 3i128.pow(10), prec: 10 };
        let mut pi = [[0i128; 3]; 3];
        pi[1][0] = 1;
        let pi3 = r.mul(&r.mul(&pi, &pi), &pi);
        let mut expected = [[0i128; 3]; 3];
        expected[2][0] = 3;
        expected[0][0] = r.red(-3);
        assert_eq!(pi3, expected);
        assert_eq!(r.valuation(&r.scalar(3)), 3);
        assert_eq!(r.valuation(&pi), 1);
    }

    #[test]
    fn conductor_nine_cubic_has_a_root() {
        assert_eq!(has_root_in_b1u3([0, -3, 1], 8).unwrap(), RootSearch::Found);
    }

    #[test]
    fn unramified_cubic_has_a_root() {
        assert_eq!(has_root_in_b1u3([0, -1, -1], 8).unwrap(), RootSearch::Found);
    }

    #[test]
    fn non_galois_cubic_has_no_root() {
        // X³ − 3 generates a non-normal cubic extension of Q₃.
        assert_eq!(has_root_in_b1u3([0, 0, -3], 8).unwrap(), RootSearch::None);
        // X³ − 2 as well (wildly ramified, not abelian).
        assert_eq!(has_root_in_b1u3([0, 0, -2], 8).unwrap(), RootSearch::None);
    }
}
