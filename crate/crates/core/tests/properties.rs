//! Property tests across the public API.

mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use common::*;
use logkernel::codescent::{twisted_coinvariants, Finiteness, LambdaPresentation};
use logkernel::logarith::{log_class_group, LogOptions};
use logkernel::padic::{iwasawa_log, smith_normal_form, PMatrix};
use logkernel::quadfield::{is_squarefree, LocalType};
use logkernel::wildkernel::{cubic_log_ramification, fields_with_conductor, wk_structure, CyclicCubicField};
use logkernel::{PadicInt, QuadField};

fn squarefree_d() -> impl Strategy<Value = i64> {
    (-3000i64..3000).prop_filter("squarefree, not 0 or 1", |&d| d != 0 && d != 1 && is_squarefree(d))
}

fn matrix(rows: usize, cols: usize, m: u32) -> impl Strategy<Value = Vec<Vec<i64>>> {
    let bound = 3i64.pow(m);
    prop::collection::vec(prop::collection::vec(0..bound, cols), rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn iwasawa_log_is_additive(a in 1i64..10_000, b in 1i64..10_000, ell in prop::sample::select(vec![3u64, 5, 7])) {
        let m = 10;
        let log = |x: i64| iwasawa_log(&BigInt::from(x), &BigInt::from(1), ell, m).unwrap();
        prop_assert_eq!(log(a * b), log(a) + log(b));
        prop_assert!(log(ell as i64).is_zero());
    }

    #[test]
    fn snf_transforms_diagonalise(a in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| matrix(r, c, 6)), scale in 0u32..3) {
        let m = 6;
        let entries: Vec<Vec<i64>> = a.iter().map(|row| row.iter().map(|x| x * 3i64.pow(scale) % 729).collect()).collect();
        let a = PMatrix::from_rows(3, m, &entries).unwrap();
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u.mul(&a).unwrap().mul(&snf.v).unwrap(), snf.diagonal());
        prop_assert!(snf.u.inverse().is_ok() && snf.v.inverse().is_ok());
    }

    #[test]
    fn snf_is_invariant_under_row_operations(a in matrix(3, 4, 5), k in 0i64..243, i in 0usize..3, j in 0usize..3) {
        prop_assume!(i != j);
        let m = 5;
        let mut b = a.clone();
        for c in 0..4 {
            b[i][c] = (b[i][c] + k * a[j][c]).rem_euclid(243);
        }
        b.swap(0, 2);
        let ea = smith_normal_form(&PMatrix::from_rows(3, m, &a).unwrap()).divisor_exponents;
        let eb = smith_normal_form(&PMatrix::from_rows(3, m, &b).unwrap()).divisor_exponents;
        prop_assert_eq!(ea, eb);
    }

    #[test]
    fn presentation_json_round_trip(
        k in 1usize..3,
        extra in 0usize..2,
        coeffs in prop::collection::vec(-20i64..20, 24),
        precision in 2u32..20,
    ) {
        let r = k + extra;
        let matrix: Vec<Vec<Vec<i64>>> = (0..k)
            .map(|i| (0..r).map(|j| coeffs[(i * r + j) * 2..(i * r + j) * 2 + 2].to_vec()).collect())
            .collect();
        let x = LambdaPresentation::new(3, precision, matrix).unwrap();
        let y = LambdaPresentation::from_json(&x.to_json()).unwrap();
        prop_assert_eq!(x.to_json(), y.to_json());
        prop_assert_eq!(x.matrix, y.matrix);
    }

    #[test]
    fn splitting_matches_square_roots(d in squarefree_d(), q in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 17, 19, 23])) {
        let k = QuadField::new(d).unwrap();
        let disc = k.disc();
        let expected = if disc.rem_euclid(q as i64) == 0 {
            LocalType::Ramified
        } else if q == 2 {
            if disc.rem_euclid(8) == 1 { LocalType::Split } else { LocalType::Inert }
        } else {
            let roots = (0..q as i64).filter(|x| (x * x - disc).rem_euclid(q as i64) == 0).count();
            if roots == 2 { LocalType::Split } else { LocalType::Inert }
        };
        prop_assert_eq!(k.splitting(q), expected);
        let places = k.split_prime(q).unwrap();
        prop_assert_eq!(places.len(), if expected == LocalType::Split { 2 } else { 1 });
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn wild_kernel_depends_on_parity_of_i(d in squarefree_d(), i in -6i64..6) {
        let o = LogOptions::default();
        let a = wk_structure(d, i, 1, 3, &o).unwrap();
        let b = wk_structure(d, i + 2, 1, 3, &o).unwrap();
        prop_assert_eq!(a.quotient_structure.exponents, b.quotient_structure.exponents);
        prop_assert_eq!(a.source, b.source);
    }

    #[test]
    fn cubic_log_ramification_is_the_tame_part(
        mask in 1u32..64,
        with_nine in any::<bool>(),
        index in 0usize..8,
    ) {
        let primes = [7u64, 13, 19, 31, 37, 43];
        let mut f: u64 = primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p).product();
        prop_assume!(f < 20_000);
        if with_nine {
            f *= 9;
        }
        let count = fields_with_conductor(f).unwrap();
        let n = CyclicCubicField::from_conductor(f, index % count).unwrap();
        let profile = cubic_log_ramification(&n, 8).unwrap();
        let tame: Vec<u64> = n.ramified_primes().iter().copied().filter(|&p| p != 3).collect();
        prop_assert_eq!(profile.log_ramified, tame);
    }

    #[test]
    fn twist_flag_agrees_with_char_poly(c0 in -30i64..30, c1 in -5i64..5, c2 in 0i64..2, i in -6i64..6) {
        let f = vec![c0, c1, c2];
        prop_assume!(f.iter().any(|&c| c != 0));
        let m = 10;
        let x = LambdaPresentation::cyclic(3, m, &f).unwrap();
        let tw = twisted_coinvariants(&x, i, &PadicInt::new(3, 4, m).unwrap()).unwrap();
        let modulus = pow3(m);
        let four = BigInt::from(4).modpow(&BigInt::from(i.unsigned_abs()), &modulus);
        let t0 = if i > 0 { four.modinv(&modulus).unwrap() } else { four } - 1;
        let value = f.iter().rev().fold(BigInt::from(0), |acc, c| acc * &t0 + c).mod_floor(&modulus);
        let expected = if value == BigInt::from(0) { Finiteness::PossiblyInfinite } else { Finiteness::Finite };
        prop_assert_eq!(tw.finiteness, expected);
        if expected == Finiteness::Finite {
            // Z_3/(f(t0)) for a cyclic module.
            let e = v3(&value).unwrap();
            let want: Vec<u32> = if e == 0 { vec![] } else { vec![e] };
            prop_assert_eq!(tw.structure.exponents, want);
        }
    }
}

/// With 3 split and prime to `h`, `C̃l ≅ Z_3/(Log u / 3)` for the unit image
/// `u` of a generator of a power of one prime above 3.
#[test]
fn split_imaginary_fields_match_hand_oracle() {
    let mut checked = 0;
    let mut nontrivial = 0;
    for d in -8000i64..-1 {
        if !(is_squarefree(d) && d.rem_euclid(3) == 1 && matches!(d.rem_euclid(4), 2 | 3)) {
            continue;
        }
        let h = class_reps(4 * d).len();
        if h.is_multiple_of(3) || h > 16 {
            continue;
        }
        let (e, _) = split_imaginary_oracle(d, 24);
        let s = log_class_group(&QuadField::new(d).unwrap(), 3, &LogOptions::default()).unwrap().structure;
        assert!(s.stabilized, "d = {d}");
        let expected: Vec<u32> = if e == 0 { vec![] } else { vec![e] };
        assert_eq!(s.exponents, expected, "d = {d}");
        checked += 1;
        nontrivial += usize::from(e > 0);
    }
    assert!(checked >= 30 && nontrivial >= 10, "{checked} fields, {nontrivial} nontrivial");
}
