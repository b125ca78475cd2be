use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::classgroup::ClassGroupData;
use super::intlin::kernel_mod;
use super::{fundamental_unit, valuation_at, PlaceId, QuadElem, QuadField, QuadIdeal};
use crate::error::{invalid, Error, Result};

/// Choices that change the generators but not the group they generate
/// after tensoring with `Z_ℓ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SUnitOptions {
    /// Use a second, unimodularly equivalent basis of the relation lattice.
    pub alternate_basis: bool,
}

/// Generators of the S-units modulo torsion, up to index prime to ℓ.
#[derive(Clone, Debug)]
pub struct SUnitSystem {
    pub field: QuadField,
    pub places: Vec<PlaceId>,
    pub generators: Vec<QuadElem>,
    /// Valuation vector of each generator at `places`.
    pub valuations: Vec<Vec<i64>>,
    /// Order of the torsion subgroup of the field's units.
    pub torsion_order: u32,
}

impl SUnitSystem {
    /// Index of the fundamental unit among the generators, if any.
    pub fn unit_count(&self) -> usize {
        usize::from(self.field.is_real())
    }
}

fn torsion_order(field: &QuadField) -> u32 {
    match field.d() {
        Some(-1) => 4,
        Some(-3) => 6,
        _ => 2,
    }
}

/// S-unit generators for the finite places `places`.
///
/// Relations among the classes of the places are computed in the ℓ-Sylow
/// subgroup of the narrow class group and multiplied by the prime-to-ℓ order
/// of the remaining class, which changes the lattice by an index prime to ℓ.
/// Each relation `r` yields a generator `β` of `∏ 𝔭^{r_𝔭}`.
pub fn s_unit_system(
    field: &QuadField,
    cg: &ClassGroupData,
    places: &[PlaceId],
    ell: u64,
    opts: SUnitOptions,
) -> Result<SUnitSystem> {
    if places.iter().any(|p| matches!(p, PlaceId::Infinite)) {
        return invalid("S must consist of finite places");
    }
    let mut generators = Vec::new();
    let mut valuations = Vec::new();
    if field.is_rational() {
        for (i, p) in places.iter().enumerate() {
            let q = p.prime().expect("finite place");
            generators.push(QuadElem::from_int(*field, q));
            valuations.push((0..places.len()).map(|j| i64::from(i == j)).collect());
        }
        return Ok(SUnitSystem { field: *field, places: places.to_vec(), generators, valuations, torsion_order: 2 });
    }
    if field.is_real() {
        generators.push(fundamental_unit(field)?);
        valuations.push(vec![0; places.len()]);
    }
    let sylow = cg.sylow(ell)?;
    let classes: Vec<usize> = places.iter().map(|p| cg.class_of_place(field, p)).collect::<Result<_>>()?;
    let images: Vec<Vec<BigInt>> =
        classes.iter().map(|&c| sylow.dlog(cg, c).into_iter().map(BigInt::from).collect()).collect();
    let moduli: Vec<BigInt> = sylow.moduli().into_iter().map(BigInt::from).collect();
    let mut kernel = kernel_mod(&images, &moduli);
    if opts.alternate_basis {
        for j in 0..kernel.len().saturating_sub(1) {
            let next = kernel[j + 1].clone();
            for (x, y) in kernel[j].iter_mut().zip(&next) {
                *x += y;
            }
        }
    }
    let h = cg.order() as i64;
    let primes: Vec<QuadIdeal> = places.iter().map(|p| QuadIdeal::prime(*field, p)).collect::<Result<_>>()?;
    for k in &kernel {
        let k: Vec<i64> = k
            .iter()
            .map(|x| x.to_i64().ok_or_else(|| Error::ResourceLimit("relation too large".into())))
            .collect::<Result<_>>()?;
        let mut class = cg.identity();
        for (&c, &e) in classes.iter().zip(&k) {
            class = cg.mul(class, cg.pow(c, e.rem_euclid(h) as u64));
        }
        let o = cg.element_order(class) as i64;
        let r: Vec<i64> = k.iter().map(|x| x * o).collect();
        let mut ideal = QuadIdeal::unit(*field);
        for (p, &e) in primes.iter().zip(&r) {
            if e != 0 {
                ideal = ideal.mul(&p.pow(e));
            }
        }
        let beta = ideal
            .principal_generator()?
            .ok_or_else(|| Error::Internal(format!("relation {r:?} does not give a principal ideal")))?;
        let vals: Vec<i64> = places.iter().map(|p| valuation_at(field, p, &beta)).collect::<Result<_>>()?;
        if vals != r || beta.norm().abs() != ideal.norm() {
            return Err(Error::Internal(format!("witness {beta} has the wrong divisor")));
        }
        generators.push(beta);
        valuations.push(vals);
    }
    Ok(SUnitSystem {
        field: *field,
        places: places.to_vec(),
        generators,
        valuations,
        torsion_order: torsion_order(field),
    })
}
