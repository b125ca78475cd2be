use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed};

use super::{Form, PlaceId, QuadField, QuadIdeal};
use crate::error::{Error, Result};

/// Default bound on `|D|` for class group enumeration.
pub const DEFAULT_DISC_BOUND: i64 = 10_000_000;
/// Largest ℓ-Sylow subgroup handled by the discrete-log table.
pub const SYLOW_CAP: usize = 6561;

/// Narrow form class group of a discriminant, with class arithmetic.
#[derive(Clone, Debug)]
pub struct ClassGroupData {
    disc: i64,
    reps: Vec<Form>,
    index: HashMap<Form, usize>,
    orders: Vec<u64>,
    identity: usize,
}

/// ℓ-Sylow subgroup with a basis and a full discrete-log table.
#[derive(Clone, Debug)]
pub struct Sylow {
    pub ell: u64,
    /// Exponents `e_i` of the basis elements, nonincreasing.
    pub exponents: Vec<u32>,
    /// Class indices of the basis.
    pub basis: Vec<usize>,
    table: HashMap<usize, Vec<u64>>,
    projector: u64,
}

impl ClassGroupData {
    pub fn new(field: &QuadField) -> Result<Self> {
        Self::with_bound(field, DEFAULT_DISC_BOUND)
    }

    pub fn with_bound(field: &QuadField, bound: i64) -> Result<Self> {
        let disc = field.disc();
        if field.is_rational() {
            let f = Form::principal(1);
            return Ok(Self {
                disc,
                reps: vec![f.clone()],
                index: HashMap::from([(f, 0)]),
                orders: vec![1],
                identity: 0,
            });
        }
        if disc.abs() > bound {
            return Err(Error::ResourceLimit(format!("|D| = {} exceeds {bound}", disc.abs())));
        }
        let (reps, index) = if disc < 0 { enumerate_definite(disc) } else { enumerate_indefinite(disc) };
        let principal = Form::principal(disc).reduce()?;
        let identity = index[&principal];
        let mut cg = Self { disc, reps, index, orders: Vec::new(), identity };
        cg.orders = (0..cg.reps.len()).map(|i| cg.order_of(i)).collect();
        Ok(cg)
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// Narrow class number.
    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn rep(&self, i: usize) -> &Form {
        &self.reps[i]
    }

    pub fn element_order(&self, i: usize) -> u64 {
        self.orders[i]
    }

    pub fn class_of_form(&self, f: &Form) -> Result<usize> {
        let g = f.reduce()?;
        self.index.get(&g).copied().ok_or_else(|| Error::Internal(format!("reduced form {g} missing from class table")))
    }

    pub fn class_of_ideal(&self, ideal: &QuadIdeal) -> Result<usize> {
        self.class_of_form(ideal.form())
    }

    pub fn class_of_place(&self, field: &QuadField, place: &PlaceId) -> Result<usize> {
        if field.is_rational() {
            return Ok(self.identity);
        }
        self.class_of_ideal(&QuadIdeal::prime(*field, place)?)
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        let (f, _) = Form::compose(&self.reps[i], &self.reps[j]);
        self.class_of_form(&f).expect("composite of classes is a class")
    }

    pub fn pow(&self, i: usize, k: u64) -> usize {
        let mut acc = self.identity;
        let mut sq = i;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            k >>= 1;
        }
        acc
    }

    fn order_of(&self, i: usize) -> u64 {
        let mut x = i;
        let mut n = 1;
        while x != self.identity {
            x = self.mul(x, i);
            n += 1;
        }
        n
    }

    /// Exponents `a` of the `p`-primary part `⊕ Z/p^a`, nonincreasing.
    pub fn primary_exponents(&self, p: u64) -> Vec<u32> {
        let mut counts: Vec<usize> = Vec::new();
        for &o in &self.orders {
            if let Some(k) = power_of(o, p) {
                if counts.len() <= k as usize {
                    counts.resize(k as usize + 1, 0);
                }
                counts[k as usize] += 1;
            }
        }
        // |G[p^k]| = p^(Σ min(e_i, k)); successive differences count e_i ≥ k.
        let mut cumulative = 0usize;
        let mut logs = Vec::new();
        for c in &counts {
            cumulative += c;
            logs.push(ilog_exact(cumulative as u64, p));
        }
        let mut exps = Vec::new();
        for k in 1..logs.len() {
            let ge_k = logs[k] - logs[k - 1];
            for i in 0..ge_k as usize {
                if exps.len() <= i {
                    exps.push(0);
                }
                exps[i] += 1;
            }
        }
        exps
    }

    /// Elementary divisors `p^a` of the whole group, sorted.
    pub fn elementary_divisors(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for p in prime_factors(self.order() as u64) {
            for a in self.primary_exponents(p) {
                out.push(p.pow(a));
            }
        }
        out.sort_unstable();
        out
    }

    /// Invariant factors `n_1 | n_2 | …` (all > 1).
    pub fn invariant_factors(&self) -> Vec<u64> {
        let mut per_prime: Vec<Vec<u64>> = prime_factors(self.order() as u64)
            .into_iter()
            .map(|p| self.primary_exponents(p).into_iter().map(|a| p.pow(a)).collect())
            .collect();
        let len = per_prime.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![1u64; len];
        for v in per_prime.iter_mut() {
            for (i, x) in v.iter().enumerate() {
                out[len - 1 - i] *= x;
            }
        }
        out
    }

    /// ℓ-Sylow subgroup with a basis and discrete-log table.
    pub fn sylow(&self, ell: u64) -> Result<Sylow> {
        let elems: Vec<usize> = (0..self.order()).filter(|&i| power_of(self.orders[i], ell).is_some()).collect();
        if elems.len() > SYLOW_CAP {
            return Err(Error::ResourceLimit(format!(
                "{ell}-Sylow of order {} exceeds the discrete-log cap {SYLOW_CAP}",
                elems.len()
            )));
        }
        let exponents = self.primary_exponents(ell);
        let mut basis = Vec::new();
        let start: HashSet<usize> = HashSet::from([self.identity]);
        if !self.find_basis(ell, &elems, &exponents, &mut basis, &start) {
            return Err(Error::Internal("no basis found for the Sylow subgroup".into()));
        }
        let mut table = HashMap::from([(self.identity, vec![0u64; basis.len()])]);
        for (j, (&g, &e)) in basis.iter().zip(&exponents).enumerate() {
            let current: Vec<(usize, Vec<u64>)> = table.drain().collect();
            for (x, coords) in current {
                let mut y = x;
                for c in 0..ell.pow(e) {
                    let mut v = coords.clone();
                    v[j] = c;
                    table.insert(y, v);
                    y = self.mul(y, g);
                }
            }
        }
        let h = self.order() as u64;
        let ell_part = ell.pow(power_part(h, ell));
        let coprime = h / ell_part;
        let projector = coprime * mod_inv_u64(coprime % ell_part, ell_part);
        Ok(Sylow { ell, exponents, basis, table, projector })
    }

    fn find_basis(
        &self,
        ell: u64,
        elems: &[usize],
        exponents: &[u32],
        basis: &mut Vec<usize>,
        span: &HashSet<usize>,
    ) -> bool {
        let j = basis.len();
        if j == exponents.len() {
            return true;
        }
        let target = ell.pow(exponents[j]);
        for &x in elems {
            if self.orders[x] != target {
                continue;
            }
            if span.contains(&self.pow(x, target / ell)) {
                continue;
            }
            let mut next = HashSet::new();
            for &s in span {
                let mut y = s;
                for _ in 0..target {
                    next.insert(y);
                    y = self.mul(y, x);
                }
            }
            basis.push(x);
            if self.find_basis(ell, elems, exponents, basis, &next) {
                return true;
            }
            basis.pop();
        }
        false
    }
}

impl Sylow {
    pub fn order(&self) -> u64 {
        self.exponents.iter().map(|&e| self.ell.pow(e)).product()
    }

    pub fn moduli(&self) -> Vec<u64> {
        self.exponents.iter().map(|&e| self.ell.pow(e)).collect()
    }

    /// Coordinates of the ℓ-component of a class in the basis.
    pub fn dlog(&self, cg: &ClassGroupData, class: usize) -> Vec<u64> {
        let p = cg.pow(class, self.projector);
        self.table.get(&p).cloned().expect("projection lies in the Sylow subgroup")
    }
}

fn enumerate_definite(disc: i64) -> (Vec<Form>, HashMap<Form, usize>) {
    let mut reps = Vec::new();
    let amax = (disc.abs() / 3).sqrt();
    for a in 1..=amax {
        for b in -a + 1..=a {
            if (b - disc).rem_euclid(2) != 0 || (b * b - disc) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - disc) / (4 * a);
            if c < a || (b < 0 && a == c) {
                continue;
            }
            let f = Form::new(a, b, c);
            if f.is_primitive() {
                reps.push(f);
            }
        }
    }
    let index = reps.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
    (reps, index)
}

fn enumerate_indefinite(disc: i64) -> (Vec<Form>, HashMap<Form, usize>) {
    let s = disc.sqrt();
    let mut reduced = Vec::new();
    for a in (-s..=s).filter(|&a| a != 0) {
        for b in 1..=s {
            if (b - disc).rem_euclid(2) != 0 || (b * b - disc) % (4 * a) != 0 {
                continue;
            }
            let f = Form::new(a, b, (b * b - disc) / (4 * a));
            if f.is_reduced() && f.is_primitive() {
                reduced.push(f);
            }
        }
    }
    let mut index = HashMap::new();
    let mut reps = Vec::new();
    for f in reduced {
        if index.contains_key(&f) {
            continue;
        }
        let cycle = f.cycle();
        let rep = cycle
            .iter()
            .filter(|g| g.a.is_positive())
            .min_by(|x, y| (&x.a, &x.b).cmp(&(&y.a, &y.b)))
            .cloned()
            .unwrap_or_else(|| f.clone());
        let id = reps.len();
        reps.push(rep);
        for g in cycle {
            index.insert(g, id);
        }
    }
    (reps, index)
}

fn power_of(n: u64, p: u64) -> Option<u32> {
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some(k)
}

fn power_part(n: u64, p: u64) -> u32 {
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    k
}

fn ilog_exact(n: u64, p: u64) -> u32 {
    power_of(n, p).expect("subgroup order is a prime power")
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn mod_inv_u64(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let e = num_integer::Integer::extended_gcd(&BigInt::from(a), &BigInt::from(m));
    debug_assert!(e.gcd.is_one());
    let x = e.x % BigInt::from(m);
    let x = if x.is_negative() { x + BigInt::from(m) } else { x };
    u64::try_from(x).expect("fits")
}
