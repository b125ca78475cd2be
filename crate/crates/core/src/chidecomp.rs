//! Characters and idempotents of a small abelian group `Δ` of order prime
//! to ℓ, the cyclotomic character `ω`, and the mirror involution
//! `φ ↦ φ* = ω·φ⁻¹`.
//!
//! `Δ` is a product of cyclic groups whose orders divide `ℓ − 1`, so every
//! character takes values in the Teichmüller roots of unity of `Z_ℓ`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::padic::{smith_normal_form, teichmuller, Exponent, PMatrix, PadicInt};
use crate::quadfield::{squarefree_part, QuadField};

/// `Δ` as named cyclic factors, with the cyclotomic character recorded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupSpec {
    pub generators: Vec<(String, u32)>,
    /// Values of `ω` on the generators, as exponents of a primitive root.
    pub omega: Vec<u32>,
}

/// A linear character, given by `φ(g_j) = ζ_{n_j}^{k_j}` on each generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CharacterId {
    pub exponents: Vec<u32>,
}

impl GroupSpec {
    /// `Gal(Q(ζ₃)/Q)` generated by complex conjugation.
    pub fn c2() -> Self {
        Self { generators: vec![("tau".into(), 2)], omega: vec![1] }
    }

    /// `Gal(Q(√−3, √d)/Q)` with `τ` complex conjugation and `σ` fixing `Q(√−3)`.
    pub fn v4() -> Self {
        Self { generators: vec![("tau".into(), 2), ("sigma".into(), 2)], omega: vec![1, 0] }
    }

    pub fn order(&self) -> u32 {
        self.generators.iter().map(|(_, n)| n).product()
    }

    /// All elements as exponent vectors, in lexicographic order.
    pub fn elements(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new()];
        for (_, n) in &self.generators {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..*n).map(move |k| {
                        let mut w = v.clone();
                        w.push(k);
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// All characters, in the same order as [`elements`](Self::elements).
    pub fn characters(&self) -> Vec<CharacterId> {
        self.elements().into_iter().map(|exponents| CharacterId { exponents }).collect()
    }

    pub fn unit(&self) -> CharacterId {
        CharacterId { exponents: vec![0; self.generators.len()] }
    }

    pub fn omega(&self) -> CharacterId {
        CharacterId { exponents: self.omega.clone() }
    }

    fn index_of(&self, g: &[u32]) -> usize {
        g.iter().zip(&self.generators).fold(0, |acc, (k, (_, n))| acc * *n as usize + *k as usize)
    }

    fn mul_elems(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).zip(&self.generators).map(|((x, y), (_, n))| (x + y) % n).collect()
    }
}

impl CharacterId {
    pub fn is_unit(&self) -> bool {
        self.exponents.iter().all(|&k| k == 0)
    }

    pub fn is_cyclotomic(&self, group: &GroupSpec) -> bool {
        *self == group.omega()
    }

    /// Character value at `g` as a root-of-unity exponent of order `lcm n_j`.
    fn value_exponent(&self, group: &GroupSpec, g: &[u32]) -> (u32, u32) {
        let e = group.generators.iter().fold(1, |acc, (_, n)| lcm(acc, *n));
        let k =
            self.exponents.iter().zip(g).zip(&group.generators).map(|((k, x), (_, n))| k * x * (e / n)).sum::<u32>()
                % e;
        (k, e)
    }
}

/// `φ* = ω·φ⁻¹`.
pub fn mirror(group: &GroupSpec, phi: &CharacterId) -> CharacterId {
    let exponents = phi
        .exponents
        .iter()
        .zip(&group.omega)
        .zip(&group.generators)
        .map(|((k, w), (_, n))| (w + n - k % n) % n)
        .collect();
    CharacterId { exponents }
}

/// Idempotents `e_φ = (1/d) Σ_τ φ(τ⁻¹)·τ` in `(Z/ℓ^m)[Δ]`.
#[derive(Clone, Debug)]
pub struct IdempotentTable {
    pub group: GroupSpec,
    pub ell: u64,
    pub prec: u32,
    /// Coefficients indexed like [`GroupSpec::elements`].
    pub entries: Vec<(CharacterId, Vec<PadicInt>)>,
}

pub fn idempotents(group: &GroupSpec, ell: u64, m: u32) -> Result<IdempotentTable> {
    let d = group.order();
    if u64::from(d) % ell == 0 {
        return invalid(format!("ℓ = {ell} divides |Δ| = {d}"));
    }
    let e = group.generators.iter().fold(1, |acc, (_, n)| lcm(acc, *n));
    if !(ell - 1).is_multiple_of(u64::from(e)) {
        return Err(Error::Unsupported(format!("characters of exponent {e} are not defined over Z_{ell}")));
    }
    let zeta = primitive_root_of_unity(ell, e, m)?;
    let inv_d = PadicInt::new(ell, d, m)?.inverse()?;
    let elements = group.elements();
    let entries = group
        .characters()
        .into_iter()
        .map(|phi| {
            let coeffs = elements
                .iter()
                .map(|g| {
                    let (k, e) = phi.value_exponent(group, g);
                    let val = zeta.pow(i64::from((e - k) % e)).expect("unit power");
                    &val * &inv_d
                })
                .collect();
            (phi, coeffs)
        })
        .collect();
    Ok(IdempotentTable { group: group.clone(), ell, prec: m, entries })
}

fn primitive_root_of_unity(ell: u64, e: u32, m: u32) -> Result<PadicInt> {
    let g = (2..ell)
        .find(|&g| {
            let p = BigInt::from(ell);
            (1..ell - 1).all(|k| BigInt::from(g).modpow(&BigInt::from(k), &p) != BigInt::from(1))
        })
        .unwrap_or(1);
    let w = teichmuller(g, ell, m)?;
    w.pow(((ell - 1) / u64::from(e)) as i64)
}

fn lcm(a: u32, b: u32) -> u32 {
    a / num_integer::gcd(a, b) * b
}

impl IdempotentTable {
    pub fn get(&self, phi: &CharacterId) -> Option<&[PadicInt]> {
        self.entries.iter().find(|(c, _)| c == phi).map(|(_, v)| v.as_slice())
    }

    /// Product in the group ring.
    pub fn mul(&self, a: &[PadicInt], b: &[PadicInt]) -> Vec<PadicInt> {
        let elems = self.group.elements();
        let mut out = vec![PadicInt::zero(self.ell, self.prec); elems.len()];
        for (g, x) in elems.iter().zip(a) {
            for (h, y) in elems.iter().zip(b) {
                let k = self.group.index_of(&self.group.mul_elems(g, h));
                out[k] = &out[k] + &(x * y);
            }
        }
        out
    }

    /// The unit of the group ring.
    pub fn one(&self) -> Vec<PadicInt> {
        let n = self.group.order() as usize;
        let mut v = vec![PadicInt::zero(self.ell, self.prec); n];
        v[0] = PadicInt::one(self.ell, self.prec);
        v
    }

    /// `e_φ² = e_φ`, `e_φ·e_ψ = 0` and `Σ e_φ = 1`, exactly.
    pub fn verify(&self) -> bool {
        let zero = vec![PadicInt::zero(self.ell, self.prec); self.group.order() as usize];
        let mut sum = zero.clone();
        for (i, (_, a)) in self.entries.iter().enumerate() {
            for (j, (_, b)) in self.entries.iter().enumerate() {
                let p = self.mul(a, b);
                let expected = if i == j { a.to_vec() } else { zero.clone() };
                if p != expected {
                    return false;
                }
            }
            sum = sum.iter().zip(a).map(|(x, y)| x + y).collect();
        }
        sum == self.one()
    }

    /// `F_ℓ`-dimensions of the components `M^{e_φ}` of `M = F_ℓ^n`, where
    /// `actions[j]` is the matrix of the `j`-th generator.
    pub fn component_dimensions(&self, actions: &[PMatrix]) -> Result<Vec<(CharacterId, usize)>> {
        let Some(first) = actions.first() else {
            return invalid("no generator actions given");
        };
        let n = first.rows();
        let elems = self.group.elements();
        let mut out = Vec::new();
        for (phi, coeffs) in &self.entries {
            let mut e = PMatrix::zeros(self.ell, 1, n, n)?;
            for (g, c) in elems.iter().zip(coeffs) {
                let mut mat = PMatrix::identity(self.ell, 1, n)?;
                for (a, &k) in actions.iter().zip(g) {
                    for _ in 0..k {
                        mat = mat.mul(&a.with_prec(1))?;
                    }
                }
                for r in 0..n {
                    for s in 0..n {
                        let v = e.get(r, s) + mat.get(r, s) * c.value();
                        e.set(r, s, v);
                    }
                }
            }
            let rank = smith_normal_form(&e).divisor_exponents.iter().filter(|x| **x == Exponent::Finite(0)).count();
            out.push((phi.clone(), rank));
        }
        Ok(out)
    }
}

/// Which logarithmic class group carries the `i`-th wild kernel component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SourceField {
    /// `k = Q(√d)`, used for even `i`.
    K(QuadField),
    /// `k* = Q(√−3d)`, used for odd `i`.
    KStar(QuadField),
    /// `k = Q(√−3)`: every component is trivial.
    Cyclotomic,
}

impl SourceField {
    pub fn field(&self) -> Option<QuadField> {
        match self {
            SourceField::K(k) | SourceField::KStar(k) => Some(*k),
            SourceField::Cyclotomic => None,
        }
    }
}

/// The character `χ_d` of `k = Q(√d)` inside `Δ = Gal(Q(√−3, √d)/Q)`.
pub fn quadratic_character(d: i64) -> CharacterId {
    CharacterId { exponents: vec![u32::from(d < 0), 1] }
}

/// Dispatches the twist index `i` to `(character, source field)`: even `i`
/// uses `χ_d` and `k`, odd `i` uses its mirror `χ_{−3d} = ω·χ_d` and `k*`.
pub fn component_dispatch(d: i64, i: i64) -> Result<(CharacterId, SourceField)> {
    let k = QuadField::new(d)?;
    if d == -3 {
        let group = GroupSpec::c2();
        let phi = if i.rem_euclid(2) == 0 { group.unit() } else { group.omega() };
        return Ok((phi, SourceField::Cyclotomic));
    }
    let chi = quadratic_character(d);
    if i.rem_euclid(2) == 0 {
        Ok((chi, SourceField::K(k)))
    } else {
        let k_star = QuadField::new(squarefree_part(-3 * d))?;
        Ok((mirror(&GroupSpec::v4(), &chi), SourceField::KStar(k_star)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(t: u32, s: u32) -> CharacterId {
        CharacterId { exponents: vec![t, s] }
    }

    #[test]
    fn v4_table_matches_product_formulas() {
        let g = GroupSpec::v4();
        let t = idempotents(&g, 3, 3).unwrap();
        // Elements in order 1, σ, τ, τσ; ¼ ≡ 7 mod 27.
        let vals =
            |c: CharacterId| -> Vec<i64> { t.get(&c).unwrap().iter().map(|x| x.value().try_into().unwrap()).collect() };
        assert_eq!(vals(ch(0, 0)), vec![7, 7, 7, 7]);
        assert_eq!(vals(ch(1, 0)), vec![7, 7, 20, 20]);
        assert_eq!(vals(ch(0, 1)), vec![7, 20, 7, 20]);
        assert_eq!(vals(ch(1, 1)), vec![7, 20, 20, 7]);
        assert!(t.verify());
    }

    #[test]
    fn c2_and_high_precision() {
        let t = idempotents(&GroupSpec::c2(), 3, 5).unwrap();
        let half = PadicInt::new(3, 122, 5).unwrap();
        assert_eq!(t.get(&CharacterId { exponents: vec![0] }).unwrap(), &[half.clone(), half.clone()]);
        assert!(t.verify());
        for m in [1, 8, 32] {
            assert!(idempotents(&GroupSpec::v4(), 3, m).unwrap().verify());
        }
    }

    #[test]
    fn cyclic_of_order_ell_minus_one() {
        let g = GroupSpec { generators: vec![("g".into(), 4)], omega: vec![1] };
        assert!(idempotents(&g, 5, 6).unwrap().verify());
        assert!(idempotents(&g, 3, 6).is_err());
        assert!(idempotents(&GroupSpec { generators: vec![("g".into(), 3)], omega: vec![1] }, 3, 4).is_err());
    }

    #[test]
    fn mirror_examples() {
        let g = GroupSpec::v4();
        assert_eq!(mirror(&g, &g.unit()), g.omega());
        assert_eq!(mirror(&g, &g.omega()), g.unit());
        assert_eq!(mirror(&g, &ch(0, 1)), ch(1, 1));
        for c in g.characters() {
            assert_eq!(mirror(&g, &mirror(&g, &c)), c);
        }
    }

    #[test]
    fn dispatch_by_parity() {
        let (c0, s0) = component_dispatch(5, 0).unwrap();
        assert_eq!(s0, SourceField::K(QuadField::new(5).unwrap()));
        assert_eq!(c0, ch(0, 1));
        let (c1, s1) = component_dispatch(5, 1).unwrap();
        assert_eq!(s1, SourceField::KStar(QuadField::new(-15).unwrap()));
        assert_eq!(c1, ch(1, 1));
        assert_eq!(component_dispatch(5, -2).unwrap(), (c0, s0));
        assert_eq!(component_dispatch(-3, 7).unwrap().1, SourceField::Cyclotomic);
        assert_eq!(component_dispatch(-1, 1).unwrap().1, SourceField::KStar(QuadField::new(3).unwrap()));
    }

    #[test]
    fn component_dimensions_sum() {
        // Δ acting on F_3^3: τ = diag(1, −1, −1), σ = diag(−1, 1, −1).
        let tau = PMatrix::from_rows(3, 1, &[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]).unwrap();
        let sigma = PMatrix::from_rows(3, 1, &[vec![2, 0, 0], vec![0, 1, 0], vec![0, 0, 2]]).unwrap();
        let t = idempotents(&GroupSpec::v4(), 3, 1).unwrap();
        let dims = t.component_dimensions(&[tau, sigma]).unwrap();
        assert_eq!(dims.iter().map(|(_, n)| n).sum::<usize>(), 3);
        assert_eq!(dims, vec![(ch(0, 0), 0), (ch(0, 1), 1), (ch(1, 0), 1), (ch(1, 1), 1)]);
    }
}
