//! Characteristic data of a polygon and the invariants of the 4-dimensional
//! toric orbifold it determines.
//!
//! Indices in this module are 1-based and cyclic: vertex `i` is where edges
//! `i` and `i + 1` meet, and edge `k + 1` wraps to edge `1`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::zlattice::{factorize, is_prime, reduce, smith_normal_form, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("need at least 3 edge vectors, got {count}")]
    TooFewEdges { count: usize },
    #[error("vector {index} is not primitive")]
    NonPrimitive { index: usize },
    #[error("vectors {index} and {next} are linearly dependent")]
    AdjacentDependent { index: usize, next: usize },
}

impl ValidationError {
    pub fn kind(&self) -> &'static str {
        match self {
            ValidationError::TooFewEdges { .. } => "TooFewEdges",
            ValidationError::NonPrimitive { .. } => "NonPrimitive",
            ValidationError::AdjacentDependent { .. } => "AdjacentDependent",
        }
    }

    /// The offending 1-based index, if the error has one.
    pub fn index(&self) -> Option<usize> {
        match self {
            ValidationError::TooFewEdges { .. } => None,
            ValidationError::NonPrimitive { index } | ValidationError::AdjacentDependent { index, .. } => Some(*index),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("{0} is not a prime")]
    NotPrime(BigInt),
    #[error("p-component of {0} is undefined; need a positive integer")]
    NonPositive(BigInt),
    #[error("prime {p} does not divide m = {m}")]
    PrimeDoesNotDivide { p: BigInt, m: BigInt },
    #[error("vertex index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("no vertex attains the {p}-component of m = {m}; the input breaks the vertex lemma")]
    NoQualifyingVertex { p: BigInt, m: BigInt },
}

/// `det[u v]` for column vectors `u`, `v`.
pub fn det2(u: &[BigInt; 2], v: &[BigInt; 2]) -> BigInt {
    &u[0] * &v[1] - &u[1] * &v[0]
}

/// Checks that the cyclic list has at least three vectors, each primitive,
/// with every adjacent pair (including last/first) independent.
pub fn validate(xi: &[[BigInt; 2]]) -> Result<(), ValidationError> {
    let k = xi.len();
    if k < 3 {
        return Err(ValidationError::TooFewEdges { count: k });
    }
    if let Some(i) = xi.iter().position(|v| !v[0].gcd(&v[1]).is_one()) {
        return Err(ValidationError::NonPrimitive { index: i + 1 });
    }
    for i in 0..k {
        if det2(&xi[i], &xi[(i + 1) % k]).is_zero() {
            return Err(ValidationError::AdjacentDependent { index: i + 1, next: (i + 1) % k + 1 });
        }
    }
    Ok(())
}

/// Validated characteristic data: cyclically ordered primitive edge vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicData {
    xi: Vec<[BigInt; 2]>,
}

impl CharacteristicData {
    pub fn new(xi: Vec<[BigInt; 2]>) -> Result<Self, ValidationError> {
        validate(&xi)?;
        Ok(CharacteristicData { xi })
    }

    pub fn from_i64(xi: &[(i64, i64)]) -> Result<Self, ValidationError> {
        Self::new(xi.iter().map(|&(a, b)| [BigInt::from(a), BigInt::from(b)]).collect())
    }

    pub fn vectors(&self) -> &[[BigInt; 2]] {
        &self.xi
    }

    pub fn edge_count(&self) -> usize {
        self.xi.len()
    }

    /// Rank of `H²`, i.e. edge count minus two.
    pub fn n(&self) -> usize {
        self.xi.len() - 2
    }

    /// ξᵢ for a 1-based cyclic index.
    pub fn xi(&self, i: usize) -> &[BigInt; 2] {
        &self.xi[(i - 1) % self.xi.len()]
    }

    /// Applies `ξ ↦ U·ξ` to every vector. `U` must be 2×2 with `det = ±1`.
    pub fn transformed(&self, u: &IntMatrix) -> Self {
        assert!(u.rows() == 2 && u.cols() == 2, "need a 2x2 matrix");
        assert!(u.det().map(|d| d.abs().is_one()).unwrap_or(false), "need a unimodular matrix");
        let xi = self
            .xi
            .iter()
            .map(|v| {
                let w = u.mul_vec(v);
                [w[0].clone(), w[1].clone()]
            })
            .collect();
        CharacteristicData { xi }
    }

    pub fn reversed(&self) -> Self {
        CharacteristicData { xi: self.xi.iter().rev().cloned().collect() }
    }

    /// Matrix with columns ξᵢ, ξᵢ₊₁ (1-based).
    pub fn vertex_matrix(&self, i: usize) -> IntMatrix {
        let (u, v) = (self.xi(i), self.xi(i + 1));
        IntMatrix::new(2, 2, vec![u[0].clone(), v[0].clone(), u[1].clone(), v[1].clone()]).expect("2x2 shape")
    }
}

/// Symmetric table of `m_{i,j} = |det[ξᵢ ξⱼ]|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LensOrders {
    k: usize,
    table: Vec<BigInt>,
}

impl LensOrders {
    pub fn size(&self) -> usize {
        self.k
    }

    /// `m_{i,j}`, 1-based. The diagonal is zero.
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        assert!((1..=self.k).contains(&i) && (1..=self.k).contains(&j), "index out of range");
        &self.table[(i - 1) * self.k + (j - 1)]
    }

    /// `m_{i,i+1}` with cyclic wrap-around.
    pub fn adjacent(&self, i: usize) -> &BigInt {
        self.get(i, i % self.k + 1)
    }

    /// All pairs `(i, j, m_{i,j})` with `i < j`, row-major.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        (1..=self.k).flat_map(move |i| (i + 1..=self.k).map(move |j| (i, j, self.get(i, j))))
    }
}

pub fn lens_orders(data: &CharacteristicData) -> LensOrders {
    let k = data.edge_count();
    let mut table = vec![BigInt::zero(); k * k];
    for i in 0..k {
        for j in i + 1..k {
            let d = det2(&data.xi[i], &data.xi[j]).abs();
            table[j * k + i] = d.clone();
            table[i * k + j] = d;
        }
    }
    LensOrders { k, table }
}

/// `m = gcd{m_{i,j} : i < j}`, the order of `H³`.
pub fn torsion_order(data: &CharacteristicData) -> BigInt {
    torsion_from_orders(&lens_orders(data))
}

fn torsion_from_orders(orders: &LensOrders) -> BigInt {
    // adjacent orders are nonzero, so the gcd is at least 1
    orders.pairs().fold(BigInt::zero(), |g, (_, _, m)| g.gcd(m))
}

/// An abelian group `ℤ^free_rank ⊕ ℤ_torsion`; `torsion = 1` means no torsion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDescriptor {
    pub free_rank: usize,
    pub torsion: BigInt,
}

impl GroupDescriptor {
    pub fn free(rank: usize) -> Self {
        GroupDescriptor { free_rank: rank, torsion: BigInt::one() }
    }

    pub fn cyclic(order: BigInt) -> Self {
        GroupDescriptor { free_rank: 0, torsion: order }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_one()
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        if !self.torsion.is_one() {
            parts.push(format!("Z_{}", self.torsion));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Integral cohomology in degrees 0 through 4; everything above is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyTable {
    pub groups: [GroupDescriptor; 5],
}

impl CohomologyTable {
    pub fn h(&self, degree: usize) -> GroupDescriptor {
        self.groups.get(degree).cloned().unwrap_or_else(|| GroupDescriptor::free(0))
    }
}

pub fn cohomology(data: &CharacteristicData) -> CohomologyTable {
    CohomologyTable {
        groups: [
            GroupDescriptor::free(1),
            GroupDescriptor::free(0),
            GroupDescriptor::free(data.n()),
            GroupDescriptor::cyclic(torsion_order(data)),
            GroupDescriptor::free(1),
        ],
    }
}

/// The p-component of `t`: the largest power `p^r` dividing `t`.
pub fn nu_p(t: &BigInt, p: &BigInt) -> Result<BigInt, ToricError> {
    if !t.is_positive() {
        return Err(ToricError::NonPositive(t.clone()));
    }
    if !is_prime(p) {
        return Err(ToricError::NotPrime(p.clone()));
    }
    let mut power = BigInt::one();
    let mut rest = t.clone();
    while rest.is_multiple_of(p) {
        rest /= p;
        power *= p;
    }
    Ok(power)
}

/// Smallest vertex `i` with `ν_p(m_{i,i+1}) = ν_p(m)`.
pub fn vertex_for_prime(data: &CharacteristicData, p: &BigInt) -> Result<usize, ToricError> {
    let orders = lens_orders(data);
    let m = torsion_from_orders(&orders);
    if !is_prime(p) {
        return Err(ToricError::NotPrime(p.clone()));
    }
    if !m.is_multiple_of(p) {
        return Err(ToricError::PrimeDoesNotDivide { p: p.clone(), m });
    }
    let target = nu_p(&m, p)?;
    for i in 1..=orders.size() {
        if nu_p(orders.adjacent(i), p)? == target {
            return Ok(i);
        }
    }
    Err(ToricError::NoQualifyingVertex { p: p.clone(), m })
}

/// The cyclic isotropy group at a vertex, as a subgroup of `(ℚ/ℤ)²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LensDescriptor {
    pub vertex_index: usize,
    pub order: BigInt,
    /// Numerators `(x, y)` of the generator `(x/order, y/order)`, in `[0, order)`.
    pub kernel_generator: [BigInt; 2],
}

impl LensDescriptor {
    /// Both kernel congruences hold and the generator has exact order `order`.
    pub fn verify(&self, data: &CharacteristicData) -> bool {
        let m = data.vertex_matrix(self.vertex_index);
        let [x, y] = &self.kernel_generator;
        let image = m.mul_vec(&[x.clone(), y.clone()]);
        let kills = image.iter().all(|e| e.is_multiple_of(&self.order));
        kills && x.gcd(y).gcd(&self.order).is_one()
    }
}

/// Kernel of `(t₁, t₂) ↦ (t₁^{aᵢ} t₂^{aᵢ₊₁}, t₁^{bᵢ} t₂^{bᵢ₊₁})` at vertex `i`.
///
/// With `U M V = diag(1, d)` for the matrix `M` with columns ξᵢ, ξᵢ₊₁, the
/// second column of `V` divided by `d` generates `M⁻¹ℤ² / ℤ²`. The generator
/// is then normalized to the lexicographically smallest generator of the same
/// subgroup, so the result depends only on the subgroup.
pub fn vertex_kernel(data: &CharacteristicData, i: usize) -> Result<LensDescriptor, ToricError> {
    let len = data.edge_count();
    if !(1..=len).contains(&i) {
        return Err(ToricError::IndexOutOfRange { index: i, len });
    }
    let m = data.vertex_matrix(i);
    let snf = smith_normal_form(&m);
    let order = snf.d[(1, 1)].clone();
    debug_assert!(snf.d[(0, 0)].is_one(), "primitive columns give d1 = 1");
    let raw = [reduce(&snf.v[(0, 1)], &order), reduce(&snf.v[(1, 1)], &order)];
    let desc = LensDescriptor { vertex_index: i, kernel_generator: canonical_generator(&raw, &order), order };
    debug_assert!(desc.verify(data));
    Ok(desc)
}

/// Lexicographically smallest `k·g mod d` over units `k` of `ℤ_d`, for a
/// generator `g` of exact order `d`.
fn canonical_generator(g: &[BigInt; 2], d: &BigInt) -> [BigInt; 2] {
    if d.is_one() {
        return [BigInt::zero(), BigInt::zero()];
    }
    let [x, y] = g;
    if x.is_zero() {
        // y must be a unit
        return [BigInt::zero(), BigInt::one()];
    }
    // Units k send x to exactly the residues with gcd(·, d) = gcd(x, d); the
    // smallest such is g1 itself. Fix one such k0, then scan the stabilizer
    // k ≡ 1 (mod d/g1) for the smallest y.
    let g1 = x.gcd(d);
    let step = d / &g1;
    let x1 = x / &g1;
    let inv_x1 = crate::zlattice::mod_inverse(&x1, &step).unwrap_or_else(BigInt::zero);
    let k0 = lift_unit(&inv_x1, &step, d);
    let y0 = reduce(&(y * &k0), d);
    let mut best_y = y0.clone();
    let mut j = BigInt::zero();
    while j < g1 {
        let k = BigInt::one() + &j * &step;
        if k.gcd(d).is_one() {
            let cand = reduce(&(&y0 * &k), d);
            if cand < best_y {
                best_y = cand;
            }
        }
        j += 1;
    }
    [g1, best_y]
}

/// Some unit of `ℤ_d` congruent to `r` modulo `step`, where `step | d` and
/// `r` is a unit modulo `step`.
fn lift_unit(r: &BigInt, step: &BigInt, d: &BigInt) -> BigInt {
    let mut k = if step.is_one() { BigInt::one() } else { reduce(r, step) };
    while !k.gcd(d).is_one() {
        k += step;
    }
    k
}

/// Odd and even primes dividing `m`, ascending.
pub fn primes_dividing(m: &BigInt) -> Vec<BigInt> {
    factorize(m).into_iter().map(|(p, _)| p).collect()
}
