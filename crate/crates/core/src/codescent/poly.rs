//! Integer polynomials in `T`, stored constant term first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) type Poly = Vec<BigInt>;

pub(crate) fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub(crate) fn from_i64(c: &[i64]) -> Poly {
    trim(c.iter().map(|&x| BigInt::from(x)).collect())
}

pub(crate) fn add(a: &[BigInt], b: &[BigInt]) -> Poly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    trim(out)
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub(crate) fn neg(a: &[BigInt]) -> Poly {
    a.iter().map(|x| -x).collect()
}

/// `(1 + T)^e`.
pub(crate) fn one_plus_t_pow(e: u64) -> Poly {
    let mut out = Vec::with_capacity(e as usize + 1);
    let mut c = BigInt::one();
    out.push(c.clone());
    for s in 1..=e {
        c = c * BigInt::from(e - s + 1) / BigInt::from(s);
        out.push(c.clone());
    }
    out
}

/// `ω_n = (1 + T)^{ℓ^n} − 1`.
pub(crate) fn omega(ell: u64, n: u32) -> Poly {
    let mut p = one_plus_t_pow(ell.pow(n));
    p[0] -= 1;
    p
}

/// `ω_{n+j}/ω_n = Σ_{t < ℓ^j} (1 + T)^{t·ℓ^n}`.
pub(crate) fn omega_quotient(ell: u64, n: u32, j: u32) -> Poly {
    let step = ell.pow(n);
    (0..ell.pow(j)).fold(Vec::new(), |acc, t| add(&acc, &one_plus_t_pow(t * step)))
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
pub(crate) fn det(m: &[Vec<Poly>]) -> Poly {
    match m.len() {
        0 => vec![BigInt::one()],
        1 => trim(m[0][0].clone()),
        n => {
            let mut acc = Vec::new();
            for (j, entry) in m[0].iter().enumerate() {
                if entry.iter().all(Zero::is_zero) {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = mul(entry, &det(&minor));
                acc = if j % 2 == 0 { add(&acc, &term) } else { add(&acc, &neg(&term)) };
            }
            debug_assert!(n > 1);
            acc
        }
    }
}

fn content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Primitive integer polynomial with positive leading coefficient.
fn primitive(p: Poly) -> Poly {
    let p = trim(p);
    if p.is_empty() {
        return p;
    }
    let mut c = content(&p);
    if p.last().is_some_and(Signed::is_negative) {
        c = -c;
    }
    p.into_iter().map(|x| x / &c).collect()
}

fn to_rational(p: &[BigInt]) -> Vec<BigRational> {
    p.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

fn rem_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r: Vec<BigRational> = a.to_vec();
    let lead = b.last().expect("nonzero divisor");
    while r.len() >= b.len() {
        let q = r.last().expect("nonempty") / lead;
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &q * c;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

/// Primitive generator of the gcd over `Q[T]`, or empty if all vanish.
pub(crate) fn gcd_q(polys: &[Poly]) -> Poly {
    let mut g: Vec<BigRational> = Vec::new();
    for p in polys {
        let mut a = to_rational(&trim(p.clone()));
        let mut b = std::mem::take(&mut g);
        while !b.is_empty() {
            let r = rem_q(&a, &b);
            a = b;
            b = r;
        }
        g = a;
    }
    if g.is_empty() {
        return Vec::new();
    }
    let den = g.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    primitive(g.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect())
}

/// `v_ℓ` of the content, or `None` for the zero polynomial.
pub(crate) fn content_valuation(p: &[BigInt], ell: u64) -> Option<u32> {
    let c = content(p);
    if c.is_zero() {
        return None;
    }
    let ell = BigInt::from(ell);
    let mut c = c.abs();
    let mut v = 0;
    while (&c % &ell).is_zero() {
        c /= &ell;
        v += 1;
    }
    Some(v)
}

/// `p(x) mod modulus`.
pub(crate) fn eval_mod(p: &[BigInt], x: &BigInt, modulus: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(modulus))
}
