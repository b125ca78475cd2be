//! Independent oracles shared by the integration and acceptance tests.
//!
//! Nothing here calls into the engine: forms are composed by brute-force
//! Dirichlet composition, 3-adic logarithms are summed from the series.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type BinForm = (i64, i64, i64);

pub fn isqrt(n: i64) -> i64 {
    let mut s = (n as f64).sqrt() as i64;
    while s * s > n {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    s
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    a.gcd(&b).gcd(&c)
}

pub fn squarefree(n: i64) -> bool {
    let n = n.abs();
    (2..).take_while(|p| p * p <= n).all(|p| n % (p * p) != 0)
}

/// Fundamental discriminants `D` with `0 < |D| ≤ bound`, and the `d` with
/// `disc Q(√d) = D`.
pub fn fundamental_discriminants(bound: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for disc in -bound..=bound {
        if disc == 0 || disc == 1 {
            continue;
        }
        if disc.rem_euclid(4) == 1 && squarefree(disc) {
            out.push((disc, disc));
        } else if disc.rem_euclid(4) == 0 {
            let m = disc / 4;
            if matches!(m.rem_euclid(4), 2 | 3) && squarefree(m) {
                out.push((disc, m));
            }
        }
    }
    out
}

fn disc_of(f: BinForm) -> i64 {
    f.1 * f.1 - 4 * f.0 * f.2
}

/// Reduced primitive forms of a negative discriminant.
pub fn reduced_definite(disc: i64) -> Vec<BinForm> {
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= -disc {
        for b in (-a + 1)..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && a == c) || gcd3(a, b, c) != 1 {
                continue;
            }
            out.push((a, b, c));
        }
        a += 1;
    }
    out
}

fn is_reduced_indefinite(f: BinForm, s: i64) -> bool {
    let (a, b, _) = f;
    b > 0 && b <= s && s < 2 * a.abs() + b && 2 * a.abs() - b <= s
}

/// Reduced primitive forms of a positive nonsquare discriminant.
pub fn reduced_indefinite(disc: i64) -> Vec<BinForm> {
    let s = isqrt(disc);
    let mut out = Vec::new();
    for a in (-s..=s).filter(|a| *a != 0) {
        for b in 1..=s {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = (a, b, num / (4 * a));
            if is_reduced_indefinite(f, s) && gcd3(f.0, f.1, f.2) == 1 {
                out.push(f);
            }
        }
    }
    out
}

fn rho(f: BinForm, s: i64) -> BinForm {
    let (_, b, c) = f;
    let m = 2 * c.abs();
    let mut nb = (-b).rem_euclid(m);
    if c.abs() > s {
        if nb > c.abs() {
            nb -= m;
        }
    } else {
        while nb <= s - m {
            nb += m;
        }
        while nb > s {
            nb -= m;
        }
    }
    (c, nb, (nb * nb - disc_of(f)) / (4 * c))
}

/// A canonical representative of the proper equivalence class of `f`.
pub fn canonical(f: BinForm) -> BinForm {
    let disc = disc_of(f);
    if disc < 0 {
        let (mut a, mut b) = (f.0, f.1);
        let c = loop {
            let m = 2 * a;
            b = b.rem_euclid(m);
            if b > a {
                b -= m;
            }
            let c = (b * b - disc) / (4 * a);
            if a > c {
                (a, b) = (c, -b);
            } else {
                break c;
            }
        };
        if a == c && b < 0 {
            b = -b;
        }
        (a, b, c)
    } else {
        let s = isqrt(disc);
        let mut g = f;
        let mut steps = 0;
        while !is_reduced_indefinite(g, s) {
            g = rho(g, s);
            steps += 1;
            assert!(steps < 10_000, "reduction did not terminate for {f:?}");
        }
        let start = g;
        let mut best = g;
        loop {
            g = rho(g, s);
            if g == start {
                break;
            }
            best = best.min(g);
        }
        best
    }
}

fn eval(f: BinForm, x: i64, y: i64) -> i64 {
    f.0 * x * x + f.1 * x * y + f.2 * y * y
}

/// An equivalent form whose first coefficient is prime to `n`.
fn with_first_coefficient_prime_to(f: BinForm, n: i64) -> BinForm {
    for r in 1..200i64 {
        for x in -r..=r {
            for y in [-r, r].into_iter().chain(-r + 1..r) {
                if x.gcd(&y) != 1 {
                    continue;
                }
                let a = eval(f, x, y);
                if a == 0 || a.gcd(&n) != 1 {
                    continue;
                }
                // Complete (x, y) to a matrix of determinant 1.
                let e = x.extended_gcd(&y);
                let (rr, ss) = (-e.y, e.x);
                debug_assert_eq!(x * ss - y * rr, 1);
                let b = 2 * f.0 * x * rr + f.1 * (x * ss + y * rr) + 2 * f.2 * y * ss;
                let c = eval(f, rr, ss);
                return (a, b, c);
            }
        }
    }
    panic!("no representative of {f:?} prime to {n}")
}

/// Dirichlet composition of two forms of the same discriminant.
pub fn compose(f: BinForm, g: BinForm) -> BinForm {
    let disc = disc_of(f);
    assert_eq!(disc, disc_of(g));
    let g = with_first_coefficient_prime_to(g, f.0);
    let (a1, b1, a2, b2) = (f.0, f.1, g.0, g.1);
    let big_a = a1 * a2;
    let m = 2 * big_a.abs();
    let b = (0..m)
        .find(|b| (b - b1) % (2 * a1) == 0 && (b - b2) % (2 * a2) == 0 && (b * b - disc) % (4 * big_a) == 0)
        .expect("united forms always compose");
    canonical((big_a, b, (b * b - disc) / (4 * big_a)))
}

pub fn principal(disc: i64) -> BinForm {
    let b = disc.rem_euclid(2);
    canonical((1, b, (b * b - disc) / 4))
}

/// Narrow class group of a fundamental discriminant as its set of classes.
pub fn class_reps(disc: i64) -> Vec<BinForm> {
    let forms = if disc < 0 { reduced_definite(disc) } else { reduced_indefinite(disc) };
    let mut reps: Vec<BinForm> = forms.into_iter().map(canonical).collect();
    reps.sort_unstable();
    reps.dedup();
    reps
}

/// `#{x : x^n = 1}` in the class group, by composition.
pub fn n_torsion_count(disc: i64, reps: &[BinForm], n: u64) -> usize {
    let one = principal(disc);
    reps.iter()
        .filter(|&&f| {
            let mut acc = one;
            for _ in 0..n {
                acc = compose(acc, f);
            }
            acc == one
        })
        .count()
}

/// `#{x : x^n = 1}` in `⊕ Z/a_i`.
pub fn n_torsion_of_invariants(invariants: &[u64], n: u64) -> usize {
    invariants.iter().map(|a| a.gcd(&n) as usize).product()
}

// ---------------------------------------------------------------- 3-adics

pub fn pow3(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(3), k as usize)
}

pub fn v3(x: &BigInt) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let three = BigInt::from(3);
    let mut x = x.abs();
    let mut v = 0;
    while (&x % &three).is_zero() {
        x /= &three;
        v += 1;
    }
    Some(v)
}

/// Square roots of `n` modulo `3^k`, lifted digit by digit from mod 3.
pub fn sqrt_mod_3k(n: i64, k: u32) -> Vec<BigInt> {
    let n = BigInt::from(n);
    let mut roots: Vec<BigInt> =
        (0..3).map(BigInt::from).filter(|t: &BigInt| (t * t - &n).mod_floor(&BigInt::from(3)).is_zero()).collect();
    for j in 1..k {
        let step = pow3(j);
        let modulus = pow3(j + 1);
        let mut next = Vec::new();
        for t in &roots {
            for digit in 0..3u32 {
                let c: BigInt = t + &step * digit;
                if (&c * &c - &n).mod_floor(&modulus).is_zero() {
                    next.push(c);
                }
            }
        }
        roots = next;
    }
    roots
}

/// `v_3(Log_Iw(u))` for a 3-adic unit `u` known mod `3^n`, from the series
/// of `log(u²)`. `None` if the logarithm vanishes mod `3^n`.
pub fn log_valuation_of_unit(u: &BigInt, n: u32) -> Option<u32> {
    let modulus = pow3(n);
    assert!(v3(u) == Some(0), "not a unit");
    let z: BigInt = (u * u - 1u32).mod_floor(&modulus);
    if z.is_zero() {
        return None;
    }
    let mut sum = BigInt::zero();
    let mut zk = BigInt::one();
    for k in 1..=(2 * n + 4) {
        zk = (&zk * &z).mod_floor(&pow3(2 * n + 8));
        let vk = v3(&BigInt::from(k)).unwrap();
        let unit_k = BigInt::from(k) / pow3(vk);
        let inv = unit_k.modinv(&modulus).unwrap();
        let term = (&zk / pow3(vk)) * inv;
        if k % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    v3(&sum.mod_floor(&modulus))
}

/// Hand computation of `C̃l_3` for an imaginary `Q(√d)` in which 3 splits.
///
/// Finds `π = x + y√d` of norm `3^j` not divisible by 3, so `(π)` is a power
/// of one prime above 3. Its image at the other prime is a unit `u`, and
/// `C̃l ≅ Z_3/(Log u / 3)`. Returns the exponent of that cyclic group and `j`.
pub fn split_imaginary_oracle(d: i64, n: u32) -> (u32, u32) {
    assert!(d < 0 && (-d).rem_euclid(3) == 2, "3 must split in Q(√{d})");
    for j in 1..=16u32 {
        let target = 3i64.pow(j);
        let mut y = 0;
        while -d * y * y <= target {
            let x = isqrt(target + d * y * y);
            if x * x + (-d) * y * y == target && (x % 3 != 0 || y % 3 != 0) {
                let units: Vec<u32> = sqrt_mod_3k(d, n + j)
                    .into_iter()
                    .filter_map(|t| {
                        let img = (BigInt::from(x) + BigInt::from(y) * t).mod_floor(&pow3(n + j));
                        (v3(&img) == Some(0)).then(|| log_valuation_of_unit(&img, n).expect("log vanished"))
                    })
                    .collect();
                assert_eq!(units.len(), 1, "exactly one place sees a unit");
                return (units[0] - 1, j);
            }
            y += 1;
        }
    }
    panic!("no element of 3-power norm found for d = {d}");
}
