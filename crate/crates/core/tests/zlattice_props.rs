mod common;

use common::{bi, mat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use torhom::zlattice::{crt_combine, gl_enumerate, satisfies_mod, smith_normal_form, solve_linear_mod, IntMatrix};

/// Determinant by cofactor expansion on small `i128` matrices.
fn det_small(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|c| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                sign * m[0][c] * det_small(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from determinantal divisors: `d_k = D_k / D_{k-1}` where
/// `D_k` is the gcd of all k×k minors.
fn invariant_factors_oracle(m: &[Vec<i128>]) -> Vec<i128> {
    let (r, c) = (m.len(), m.first().map_or(0, Vec::len));
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=r.min(c) {
        let mut g = 0i128;
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let minor: Vec<Vec<i128>> = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j]).collect()).collect();
                g = g.gcd(&det_small(&minor));
            }
        }
        if g == 0 {
            out.push(0);
            prev = 0;
        } else {
            out.push(g / prev);
            prev = g;
        }
    }
    out
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-10i64..=10, c), r))
}

fn is_unimodular(m: &IntMatrix) -> bool {
    m.det().map(|d| d.abs().is_one()).unwrap_or(false)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn snf_decomposition_is_exact(rows in small_matrix()) {
        let m = mat(&rows);
        let snf = smith_normal_form(&m);
        prop_assert_eq!(&(&snf.u * &m) * &snf.v, snf.d.clone());
        prop_assert!(is_unimodular(&snf.u));
        prop_assert!(is_unimodular(&snf.v));
        for r in 0..snf.d.rows() {
            for c in 0..snf.d.cols() {
                if r != c {
                    prop_assert!(snf.d[(r, c)].is_zero());
                }
            }
        }
        let d = snf.invariant_factors();
        for w in d.windows(2) {
            prop_assert!(!w[0].is_negative());
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        let oracle: Vec<BigInt> = invariant_factors_oracle(
            &rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect::<Vec<_>>(),
        ).into_iter().map(BigInt::from).collect();
        prop_assert_eq!(d, oracle);
    }

    #[test]
    fn snf_is_deterministic(rows in small_matrix()) {
        let m = mat(&rows);
        prop_assert_eq!(smith_normal_form(&m), smith_normal_form(&m));
    }

    #[test]
    fn solver_matches_exhaustive_enumeration(
        (modulus, rows, rhs) in (2i64..=9, 1usize..=3, 1usize..=3).prop_flat_map(|(n, r, k)| (
            Just(n),
            prop::collection::vec(prop::collection::vec(-9i64..=9, k), r),
            prop::collection::vec(-9i64..=9, r),
        ))
    ) {
        let m = mat(&rows);
        let rhs: Vec<BigInt> = rhs.iter().map(|&x| bi(x)).collect();
        let n = bi(modulus);
        let k = m.cols();
        let mut any = false;
        let total = (modulus as u64).pow(k as u32);
        for code in 0..total {
            let mut c = code;
            let x: Vec<BigInt> = (0..k).map(|_| { let d = c % modulus as u64; c /= modulus as u64; bi(d as i64) }).collect();
            if satisfies_mod(&m, &x, &rhs, &n) {
                any = true;
                break;
            }
        }
        let sol = solve_linear_mod(&m, &rhs, &n).unwrap();
        prop_assert_eq!(sol.is_some(), any);
        if let Some(sol) = sol {
            prop_assert!(satisfies_mod(&m, &sol.particular, &rhs, &n));
            for basis in &sol.kernel_basis {
                prop_assert!(satisfies_mod(&m, basis, &vec![BigInt::zero(); rhs.len()], &n));
            }
            let coeffs: Vec<BigInt> = (0..sol.kernel_basis.len()).map(|i| bi(i as i64 + 2)).collect();
            prop_assert!(satisfies_mod(&m, &sol.point(&coeffs), &rhs, &n));
        }
    }
}

/// Counts solutions by enumeration and through the solver's parametrization;
/// the kernel generators must span the whole homogeneous solution set.
#[test]
fn solver_parametrization_covers_every_solution() {
    type Case<'a> = (&'a [Vec<i64>], &'a [i64], i64);
    let cases: &[Case] = &[
        (&[vec![2, 4], vec![0, 3]], &[2, 3], 6),
        (&[vec![3, 0, 6]], &[3], 9),
        (&[vec![1, 1], vec![1, 1]], &[0, 0], 8),
        (&[vec![0, 0]], &[0], 4),
    ];
    for &(rows, rhs, n) in cases {
        let m = mat(rows);
        let rhs: Vec<BigInt> = rhs.iter().map(|&x| bi(x)).collect();
        let modulus = bi(n);
        let k = m.cols();
        let mut expected = std::collections::BTreeSet::new();
        for code in 0..(n as u64).pow(k as u32) {
            let mut c = code;
            let x: Vec<BigInt> = (0..k)
                .map(|_| {
                    let d = c % n as u64;
                    c /= n as u64;
                    bi(d as i64)
                })
                .collect();
            if satisfies_mod(&m, &x, &rhs, &modulus) {
                expected.insert(x);
            }
        }
        let sol = solve_linear_mod(&m, &rhs, &modulus).unwrap().unwrap();
        let mut got = std::collections::BTreeSet::new();
        let g = sol.kernel_basis.len();
        for code in 0..(n as u64).pow(g as u32) {
            let mut c = code;
            let coeffs: Vec<BigInt> = (0..g)
                .map(|_| {
                    let d = c % n as u64;
                    c /= n as u64;
                    bi(d as i64)
                })
                .collect();
            got.insert(sol.point(&coeffs));
        }
        assert_eq!(got, expected, "{rows:?} mod {n}");
    }
}

#[test]
fn crt_exhaustive_small_moduli() {
    for a in 1..=30i64 {
        for b in 1..=30i64 {
            if a.gcd(&b) != 1 {
                continue;
            }
            for x in 0..a {
                for y in 0..b {
                    let (r, prod) = crt_combine(&[(bi(x), bi(a)), (bi(y), bi(b))]).unwrap();
                    assert_eq!(prod, bi(a * b));
                    assert_eq!(r.mod_floor(&bi(a)), bi(x));
                    assert_eq!(r.mod_floor(&bi(b)), bi(y));
                }
            }
        }
    }
}

#[test]
fn gl_enumerate_is_unimodular_distinct_and_deterministic() {
    for n in 1..=3 {
        for depth in 0..=3 {
            let words = gl_enumerate(n, depth);
            assert_eq!(words[0], IntMatrix::identity(n));
            let distinct: std::collections::HashSet<_> = words.iter().collect();
            assert_eq!(distinct.len(), words.len());
            assert!(words.iter().all(is_unimodular));
            assert_eq!(words, gl_enumerate(n, depth));
            if depth > 0 {
                let shorter = gl_enumerate(n, depth - 1);
                assert_eq!(&words[..shorter.len()], &shorter[..]);
            }
        }
    }
}
