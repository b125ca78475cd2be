use std::collections::HashSet;

use serde::Serialize;

use super::structure::AbelianGroupStructure;
use super::valuation::{log_valuation, place_degree};
use crate::error::{invalid, Error, Result};
use crate::padic::{smith_normal_form, PMatrix, PadicInt};
use crate::quadfield::{
    primes, s_unit_system, ClassGroupData, LocalType, PlaceId, QuadField, SUnitOptions, SUnitSystem,
};

/// Tuning knobs for [`log_class_group`]. None of them changes the result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogOptions {
    pub start_precision: u32,
    pub max_precision: u32,
    /// Skip this many split primes before choosing `T`.
    pub t_skip: usize,
    /// Append this many further split primes to `T`.
    pub extra_t: usize,
    /// Multiply `deg 𝔭` by these ℓ-adic units (cycled over the places).
    pub degree_units: Vec<i64>,
    /// Use a second basis of the class relation lattice.
    pub alternate_basis: bool,
}

impl Default for LogOptions {
    fn default() -> Self {
        Self {
            start_precision: 8,
            max_precision: 64,
            t_skip: 0,
            extra_t: 0,
            degree_units: Vec::new(),
            alternate_basis: false,
        }
    }
}

/// The ℓ-group of logarithmic classes with the data that produced it.
#[derive(Clone, Debug)]
pub struct LogClassGroup {
    pub field: QuadField,
    pub ell: u64,
    pub structure: AbelianGroupStructure,
    /// Places above ℓ.
    pub s_places: Vec<PlaceId>,
    /// Auxiliary split primes whose classes generate the ℓ-part of `Cl`.
    pub t_places: Vec<PlaceId>,
    pub units: SUnitSystem,
    /// `deg 𝔭` for `𝔭 ∈ S ∪ T`, after any rescaling.
    pub degrees: Vec<PadicInt>,
    /// `ṽ_𝔭(g)`: one row per place, one column per generator.
    pub valuations: PMatrix,
}

impl LogClassGroup {
    pub fn places(&self) -> Vec<PlaceId> {
        self.s_places.iter().chain(&self.t_places).copied().collect()
    }

    /// `Σ_𝔭 ṽ_𝔭(g)·deg 𝔭` for every generator `g`; all vanish.
    pub fn product_formula_residuals(&self) -> Vec<PadicInt> {
        (0..self.valuations.cols())
            .map(|j| {
                let mut acc = PadicInt::zero(self.ell, self.valuations.prec());
                for (i, d) in self.degrees.iter().enumerate() {
                    acc = acc + &self.valuations.entry(i, j) * d;
                }
                acc
            })
            .collect()
    }
}

struct Setup {
    field: QuadField,
    ell: u64,
    s_places: Vec<PlaceId>,
    t_places: Vec<PlaceId>,
    units: SUnitSystem,
    units_scale: Vec<i64>,
}

/// Chooses `T`: split primes `q ≠ ℓ` added while they enlarge the subgroup of
/// the ℓ-Sylow of `Cl` generated by `S ∪ T`.
///
/// Any prime's class then lies in `⟨S ∪ T⟩` up to a prime-to-ℓ multiple, so
/// each logarithmic divisor is equivalent to one supported on `S ∪ T`
/// modulo principal divisors; restricting to `S ∪ T` loses no classes.
fn choose_t(
    field: &QuadField,
    cg: &ClassGroupData,
    s: &[PlaceId],
    ell: u64,
    opts: &LogOptions,
) -> Result<Vec<PlaceId>> {
    let sylow = cg.sylow(ell)?;
    let moduli = sylow.moduli();
    let target = sylow.order() as usize;
    let mut span: HashSet<Vec<u64>> = HashSet::from([vec![0; moduli.len()]]);
    let extend = |span: &mut HashSet<Vec<u64>>, v: &[u64]| {
        let mut frontier: Vec<Vec<u64>> = span.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            let y: Vec<u64> = x.iter().zip(v).zip(&moduli).map(|((a, b), m)| (a + b) % m).collect();
            if span.insert(y.clone()) {
                frontier.push(y);
            }
        }
    };
    for p in s {
        extend(&mut span, &sylow.dlog(cg, cg.class_of_place(field, p)?));
    }
    let mut t = Vec::new();
    let mut candidates =
        primes().filter(|&q| q != ell && field.splitting(q) == LocalType::Split).skip(opts.t_skip).take(200_000);
    while span.len() < target {
        let q =
            candidates.next().ok_or_else(|| Error::ResourceLimit("no generating set of split primes found".into()))?;
        let place = PlaceId::Finite { q, index: 0, kind: LocalType::Split };
        let v = sylow.dlog(cg, cg.class_of_place(field, &place)?);
        if !span.contains(&v) {
            extend(&mut span, &v);
            t.push(place);
        }
    }
    let kind = if field.is_rational() { LocalType::Rational } else { LocalType::Split };
    let chosen: Vec<u64> = t.iter().filter_map(PlaceId::prime).collect();
    let mut extra = primes()
        .filter(|&q| q != ell && (field.is_rational() || field.splitting(q) == LocalType::Split))
        .filter(|q| !chosen.contains(q))
        .skip(if field.is_rational() { 0 } else { opts.t_skip });
    for _ in 0..opts.extra_t {
        let q = extra.next().expect("infinitely many split primes");
        t.push(PlaceId::Finite { q, index: 0, kind });
    }
    Ok(t)
}

fn setup(field: &QuadField, ell: u64, opts: &LogOptions) -> Result<Setup> {
    let cg = ClassGroupData::new(field)?;
    let s_places = field.split_prime(ell)?;
    let t_places = choose_t(field, &cg, &s_places, ell, opts)?;
    let places: Vec<PlaceId> = s_places.iter().chain(&t_places).copied().collect();
    let units = s_unit_system(field, &cg, &places, ell, SUnitOptions { alternate_basis: opts.alternate_basis })?;
    if opts.degree_units.iter().any(|u| u.rem_euclid(ell as i64) == 0) {
        return invalid("degree rescaling factors must be ℓ-adic units");
    }
    let units_scale = if opts.degree_units.is_empty() {
        vec![1; places.len()]
    } else {
        (0..places.len()).map(|i| opts.degree_units[i % opts.degree_units.len()]).collect()
    };
    Ok(Setup { field: *field, ell, s_places, t_places, units, units_scale })
}

fn compute_at(setup: &Setup, m: u32) -> Result<LogClassGroup> {
    let ell = setup.ell;
    let places: Vec<PlaceId> = setup.s_places.iter().chain(&setup.t_places).copied().collect();
    let n = places.len();
    let g = setup.units.generators.len();
    let mut degrees = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    for (p, &u) in places.iter().zip(&setup.units_scale) {
        let u = PadicInt::new(ell, u, m)?;
        degrees.push(&place_degree(&setup.field, p, ell, m)? * &u);
        let row: Vec<PadicInt> = setup
            .units
            .generators
            .iter()
            .map(|x| log_valuation(&setup.field, p, x, ell, m)?.div_unit(&u))
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    let valuations = if g == 0 { PMatrix::zeros(ell, m, n, 0)? } else { PMatrix::from_padic_rows(ell, &rows)? };
    // Coordinates in the degree-zero lattice: with the pivot at an entry of
    // least valuation, the vectors e_i − (deg_i/deg_piv)·e_piv form a basis,
    // so a degree-zero vector's coordinates are its non-pivot entries.
    let mut pivot = None;
    for (i, d) in degrees.iter().enumerate() {
        if let Some(v) = d.valuation() {
            if pivot.is_none_or(|(b, _)| v <= b) {
                pivot = Some((v, i));
            }
        }
    }
    let (_, pivot) = pivot.ok_or_else(|| Error::PrecisionExhausted("all degrees vanish".into()))?;
    let kept: Vec<Vec<PadicInt>> =
        (0..n).filter(|&i| i != pivot).map(|i| (0..g).map(|j| valuations.entry(i, j)).collect()).collect();
    let reduced = if g == 0 { PMatrix::zeros(ell, m, n - 1, 0)? } else { PMatrix::from_padic_rows(ell, &kept)? };
    let snf = smith_normal_form(&reduced);
    let structure = AbelianGroupStructure::from_exponents(&snf.cokernel_exponents(), m);
    Ok(LogClassGroup {
        field: setup.field,
        ell,
        structure,
        s_places: setup.s_places.clone(),
        t_places: setup.t_places.clone(),
        units: setup.units.clone(),
        degrees,
        valuations,
    })
}

fn stabilize(setup: &Setup, m: u32) -> Result<LogClassGroup> {
    let mut hi = compute_at(setup, m)?;
    let lo = compute_at(setup, m - 2)?;
    let max = hi.structure.exponents.last().copied().unwrap_or(0);
    hi.structure.stabilized =
        hi.structure.finiteness_certificate && lo.structure.same_group(&hi.structure) && max + 2 <= m;
    Ok(hi)
}

/// Logarithmic class group at a single precision `m ≥ 4`.
pub fn log_class_group_at(field: &QuadField, ell: u64, m: u32, opts: &LogOptions) -> Result<LogClassGroup> {
    if m < 4 {
        return invalid("precision must be at least 4");
    }
    stabilize(&setup(field, ell, opts)?, m)
}

/// Logarithmic class group, doubling the precision from
/// `opts.start_precision` until the structure stabilizes or
/// `opts.max_precision` is reached.
pub fn log_class_group(field: &QuadField, ell: u64, opts: &LogOptions) -> Result<LogClassGroup> {
    if opts.start_precision < 4 || opts.max_precision < opts.start_precision {
        return invalid("need 4 ≤ start precision ≤ max precision");
    }
    let setup = setup(field, ell, opts)?;
    let mut m = opts.start_precision;
    loop {
        let result = stabilize(&setup, m)?;
        if result.structure.stabilized || m >= opts.max_precision {
            return Ok(result);
        }
        m = (2 * m).min(opts.max_precision);
    }
}
