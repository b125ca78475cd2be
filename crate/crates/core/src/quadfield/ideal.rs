use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{Form, LocalType, PlaceId, QuadElem, QuadField};
use crate::error::{invalid, Error, Result};

/// Fractional ideal `scale · (a, (b+√D)/2)` with a primitive integral part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadIdeal {
    field: QuadField,
    scale: BigRational,
    form: Form,
}

impl QuadIdeal {
    pub fn unit(field: QuadField) -> Self {
        Self { field, scale: BigRational::one(), form: Form::principal(field.disc()) }
    }

    /// The prime ideal of a finite place.
    pub fn prime(field: QuadField, place: &PlaceId) -> Result<Self> {
        let PlaceId::Finite { q, index, kind } = *place else {
            return invalid("archimedean place has no ideal");
        };
        if field.is_rational() {
            return invalid("prime ideals are only modelled for quadratic fields");
        }
        let disc = field.disc();
        match kind {
            LocalType::Inert => {
                Ok(Self { field, scale: BigRational::from_integer(q.into()), form: Form::principal(disc) })
            }
            LocalType::Split | LocalType::Ramified => {
                let b = field.place_b(q).ok_or_else(|| Error::Internal(format!("no square root of D mod 4·{q}")))?;
                let b = if index == 0 { b } else { -b };
                let form = Form::from_ab(q.into(), b.into(), disc);
                Ok(Self { field, scale: BigRational::one(), form }.normalized())
            }
            LocalType::Rational => invalid("rational place in a quadratic field"),
        }
    }

    fn normalized(mut self) -> Self {
        let a = self.form.a.clone();
        let two_a = &a * 2;
        let mut b = self.form.b.mod_floor(&two_a);
        if b > a {
            b -= &two_a;
        }
        self.form = Form::from_ab(a, b, self.field.disc());
        self
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    /// The form attached to the primitive part.
    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn norm(&self) -> BigRational {
        &self.scale * &self.scale * BigRational::from_integer(self.form.a.clone())
    }

    pub fn conj(&self) -> Self {
        Self { field: self.field, scale: self.scale.clone(), form: self.form.inverse() }.normalized()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (form, d1) = Form::compose(&self.form, &other.form);
        Self { field: self.field, scale: &self.scale * &other.scale * BigRational::from_integer(d1), form }.normalized()
    }

    /// `self^e`; negative powers use `I⁻¹ = Ī / N(I)`.
    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 {
            let c = self.conj();
            let n = self.norm().recip();
            Self { scale: c.scale * n, ..c }
        } else {
            self.clone()
        };
        let mut acc = Self::unit(self.field);
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq);
            }
            sq = sq.mul(&sq);
            k >>= 1;
        }
        acc
    }

    /// A generator with positive norm, if the ideal is narrowly principal.
    ///
    /// Reduces the attached form while tracking the transform; a form of
    /// leading coefficient 1 in the reduced cycle yields `(x, y)` with
    /// `f(x, y) = 1`, and `x·a + y·(b+√D)/2` then has norm `a`.
    pub fn principal_generator(&self) -> Result<Option<QuadElem>> {
        let (mut g, mut m) = self.form.reduce_tracked()?;
        if self.field.is_real() {
            let start = g.clone();
            while !g.a.is_one() {
                let (h, t) = g.rho();
                g = h;
                m = m.then(&t);
                if g == start {
                    return Ok(None);
                }
            }
        } else if !g.a.is_one() {
            return Ok(None);
        }
        let (x, y) = m.first_column();
        debug_assert!(self.form.eval(&x, &y).is_one());
        let a = &self.form.a;
        let beta = QuadElem::from_half_sqrt(self.field, &x * a * 2 + &y * &self.form.b, y);
        let beta = beta.scale(&self.scale);
        debug_assert!(beta.norm().is_positive());
        Ok(Some(beta))
    }

    /// The primitive part as a `Z`-basis `(a, (b+√D)/2)` in `ω`-coordinates,
    /// scaled: rows `(x, y, den)`.
    pub fn basis(&self) -> [(BigInt, BigInt, BigInt); 2] {
        let a = QuadElem::from_int(self.field, self.form.a.clone()).scale(&self.scale);
        let g = QuadElem::from_half_sqrt(self.field, self.form.b.clone(), BigInt::one()).scale(&self.scale);
        [a, g].map(|e| (e.x().clone(), e.y().clone(), e.den().clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::intlin::hnf;

    fn field(d: i64) -> QuadField {
        QuadField::new(d).unwrap()
    }

    /// Integral lattice of `I` as rows over `{1, ω}` (scale must be integral).
    fn lattice(i: &QuadIdeal) -> Vec<Vec<BigInt>> {
        i.basis()
            .into_iter()
            .map(|(x, y, den)| {
                assert!(den.is_one());
                vec![x, y]
            })
            .collect()
    }

    /// Product lattice spanned by the four basis products.
    fn product_lattice(i: &QuadIdeal, j: &QuadIdeal) -> Vec<Vec<BigInt>> {
        let k = i.field();
        let mut rows = Vec::new();
        for (x1, y1, _) in i.basis() {
            for (x2, y2, _) in j.basis() {
                let e = QuadElem::new(k, x1.clone(), y1.clone(), 1.into())
                    .unwrap()
                    .mul(&QuadElem::new(k, x2.clone(), y2.clone(), 1.into()).unwrap());
                rows.push(vec![e.x().clone(), e.y().clone()]);
            }
        }
        rows
    }

    #[test]
    fn composition_matches_lattice_product() {
        for d in [-23i64, -5, -47, -71, 10, 79, 226, 33] {
            let k = field(d);
            let ps: Vec<QuadIdeal> = [2u64, 3, 5, 7, 11, 13]
                .iter()
                .flat_map(|&q| k.split_prime(q).unwrap())
                .filter(|p| p.kind() != Some(LocalType::Inert))
                .map(|p| QuadIdeal::prime(k, &p).unwrap())
                .collect();
            for i in &ps {
                for j in &ps {
                    let prod = i.mul(j);
                    assert_eq!(hnf(&lattice(&prod)), hnf(&product_lattice(i, j)), "d={d}");
                }
            }
        }
    }

    #[test]
    fn witness_for_cube_of_prime_over_three() {
        let k = field(-23);
        let p = QuadIdeal::prime(k, &k.split_prime(3).unwrap()[0]).unwrap();
        assert_eq!(p.principal_generator().unwrap(), None);
        let beta = p.pow(3).principal_generator().unwrap().unwrap();
        assert_eq!(beta.norm(), BigRational::from_integer(27.into()));
        let beta = p.pow(-3).principal_generator().unwrap().unwrap();
        assert_eq!(beta.norm(), BigRational::new(1.into(), 27.into()));
    }

    #[test]
    fn real_witness_walks_cycle() {
        let k = field(79);
        let p = QuadIdeal::prime(k, &k.split_prime(3).unwrap()[0]).unwrap();
        let mut found = None;
        for e in 1..=6 {
            if let Some(b) = p.pow(e).principal_generator().unwrap() {
                found = Some((e, b));
                break;
            }
        }
        let (e, b) = found.unwrap();
        assert_eq!(b.norm(), BigRational::from_integer(BigInt::from(3).pow(e as u32)));
    }
}
