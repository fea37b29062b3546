#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;
use torhom::cells::{make_triple, CellMapRep, CupTriple};
use torhom::toric::CharacteristicData;
use torhom::zlattice::{gl_generators, IntMatrix};

pub fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn vb(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| bi(x)).collect()
}

pub fn mat(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows).unwrap()
}

pub fn triple(a: &[Vec<i64>], m: i64, b: &[i64], c: i64) -> CupTriple {
    let n = a.len();
    if m == 1 {
        make_triple(n, bi(1), mat(a), None, None).unwrap()
    } else {
        make_triple(n, bi(m), mat(a), Some(vb(b)), Some(bi(c))).unwrap()
    }
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize, bound: i64) -> IntMatrix {
    let mut a = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = bi(rng.gen_range(-bound..=bound));
            a[(i, j)] = v.clone();
            a[(j, i)] = v;
        }
    }
    a
}

pub fn random_triple(rng: &mut impl Rng, n: usize, m: i64, bound: i64) -> CupTriple {
    let a = random_symmetric(rng, n, bound);
    if m == 1 {
        return make_triple(n, bi(1), a, None, None).unwrap();
    }
    let b = (0..n).map(|_| bi(rng.gen_range(0..m))).collect();
    make_triple(n, bi(m), a, Some(b), Some(bi(rng.gen_range(0..m)))).unwrap()
}

/// Product of `factors` generators drawn uniformly from `gl_generators(n)`.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, factors: usize) -> IntMatrix {
    let gens = gl_generators(n);
    let mut w = IntMatrix::identity(n);
    for _ in 0..factors {
        w = &w * &gens[rng.gen_range(0..gens.len())];
    }
    w
}

pub fn random_unit(rng: &mut impl Rng, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    loop {
        let z = rng.gen_range(1..m);
        if z.gcd(&m) == 1 {
            return z;
        }
    }
}

/// A random equivalence representation whose `W` has at most `max_factors`
/// generator factors.
pub fn random_rep(rng: &mut impl Rng, n: usize, m: i64, max_factors: usize) -> CellMapRep {
    let factors = rng.gen_range(0..=max_factors);
    let w = random_unimodular(rng, n, factors);
    let y = if m == 1 { vec![bi(0); n] } else { (0..n).map(|_| bi(rng.gen_range(0..m))).collect() };
    CellMapRep::new(bi(m), w, y, bi(random_unit(rng, m))).unwrap()
}

/// Rejection-samples characteristic data with `edges` vectors and entries in
/// `[-bound, bound]`.
pub fn random_fan(rng: &mut impl Rng, edges: usize, bound: i64) -> CharacteristicData {
    loop {
        let xi: Vec<(i64, i64)> =
            (0..edges).map(|_| (rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound))).collect();
        if let Ok(data) = CharacteristicData::from_i64(&xi) {
            return data;
        }
    }
}

pub fn fan_json(data: &CharacteristicData) -> String {
    let xi: Vec<String> = data.vectors().iter().map(|[a, b]| format!("[{a},{b}]")).collect();
    format!("{{\"xi\":[{}]}}", xi.join(","))
}
