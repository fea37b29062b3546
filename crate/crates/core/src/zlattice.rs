//! Exact integer and modular linear algebra.
//!
//! Everything here works over [`BigInt`]; no operation truncates to machine
//! words. The Smith normal form is the workhorse: cokernel orders, modular
//! solvability and lens-space kernels are all read off from it.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },
    #[error("modulus must be at least {min}, got {got}")]
    ModulusTooSmall { min: u32, got: BigInt },
    #[error("moduli {0} and {1} are not coprime")]
    NonCoprime(BigInt, BigInt),
    #[error("vector ({0}, {1}) is not primitive")]
    NonPrimitive(BigInt, BigInt),
    #[error("matrix rows have unequal lengths")]
    Ragged,
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, LatticeError> {
        if data.len() != rows * cols {
            return Err(LatticeError::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                got: format!("{} entries", data.len()),
            });
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn diagonal<I: Into<BigInt>>(entries: impl IntoIterator<Item = I>) -> Self {
        let entries: Vec<BigInt> = entries.into_iter().map(Into::into).collect();
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.into_iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    /// Builds a matrix from nested rows. An empty outer vector gives a 0×0 matrix.
    pub fn from_rows<I: Into<BigInt> + Clone>(rows: &[Vec<I>]) -> Result<Self, LatticeError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LatticeError::Ragged);
        }
        let data = rows.iter().flat_map(|r| r.iter().cloned().map(Into::into)).collect();
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (r + 1..self.cols).all(|c| self[(r, c)] == self[(c, r)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, LatticeError> {
        if self.cols != rhs.rows {
            return Err(LatticeError::DimensionMismatch {
                expected: format!("{} rows", self.cols),
                got: format!("{} rows", rhs.rows),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * &rhs[(k, c)];
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `v · self`.
    pub fn left_mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows, "vector length must match row count");
        (0..self.cols).map(|c| v.iter().enumerate().map(|(r, x)| x * &self[(r, c)]).sum()).collect()
    }

    /// Matrix times column vector: `self · v`.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows).map(|r| self.row(r).iter().zip(v).map(|(a, x)| a * x).sum()).collect()
    }

    pub fn add(&self, rhs: &IntMatrix) -> Result<IntMatrix, LatticeError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LatticeError::DimensionMismatch {
                expected: format!("{}x{}", self.rows, self.cols),
                got: format!("{}x{}", rhs.rows, rhs.cols),
            });
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn map_entries(&self, f: impl Fn(&BigInt) -> BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt, LatticeError> {
        if !self.is_square() {
            return Err(LatticeError::DimensionMismatch {
                expected: "square matrix".into(),
                got: format!("{}x{}", self.rows, self.cols),
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !a[(r, k)].is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for c in 0..self.cols {
            let v = &self[(src, c)] * k;
            self.data[dst * self.cols + c] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for r in 0..self.rows {
            let v = &self[(r, src)] * k;
            self.data[r * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let idx = r * self.cols + c;
            self.data[idx] = -std::mem::take(&mut self.data[idx]);
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("incompatible matrix shapes")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (c, e) in self.row(r).iter().enumerate() {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal with `d₁ | d₂ | …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// The diagonal of `D`, length `min(rows, cols)`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().iter().take_while(|d| !d.is_zero()).count()
    }
}

/// Extended Euclid: returns `(g, x, y)` with `a·x + b·y = g = gcd(a, b) ≥ 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Canonical residue in `[0, modulus)`.
pub fn reduce(x: &BigInt, modulus: &BigInt) -> BigInt {
    x.mod_floor(modulus)
}

/// Inverse of `a` modulo `n`, if it exists.
pub fn mod_inverse(a: &BigInt, n: &BigInt) -> Option<BigInt> {
    let (g, x, _) = ext_gcd(&reduce(a, n), n);
    g.is_one().then(|| reduce(&x, n))
}

/// Smith normal form with a fixed pivot rule: the smallest nonzero absolute
/// entry of the active block, ties broken by row-major position.
pub fn smith_normal_form(m: &IntMatrix) -> SnfDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pr, pc)) = find_pivot(&d, t) else {
                return SnfDecomposition { u, d, v };
            };
            d.swap_rows(t, pr);
            u.swap_rows(t, pr);
            d.swap_cols(t, pc);
            v.swap_cols(t, pc);

            let pivot = d[(t, t)].clone();
            let mut cleared = true;
            for r in t + 1..rows {
                if d[(r, t)].is_zero() {
                    continue;
                }
                let q = -(&d[(r, t)] / &pivot);
                d.add_row_multiple(r, t, &q);
                u.add_row_multiple(r, t, &q);
                cleared &= d[(r, t)].is_zero();
            }
            for c in t + 1..cols {
                if d[(t, c)].is_zero() {
                    continue;
                }
                let q = -(&d[(t, c)] / &pivot);
                d.add_col_multiple(c, t, &q);
                v.add_col_multiple(c, t, &q);
                cleared &= d[(t, c)].is_zero();
            }
            if !cleared {
                continue;
            }

            // Enforce divisibility on the remaining block.
            let offender = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !d[(r, c)].is_multiple_of(&pivot)));
            match offender {
                Some(r) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, r, &one);
                    u.add_row_multiple(t, r, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfDecomposition { u, d, v }
}

fn find_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for r in t..d.rows() {
        for c in t..d.cols() {
            let a = d[(r, c)].abs();
            if a.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                best = Some((r, c, a));
            }
        }
    }
    best.map(|(r, c, _)| (r, c))
}

/// Solution set of a linear system over `ℤ_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModSolution {
    pub modulus: BigInt,
    pub particular: Vec<BigInt>,
    /// Generators of the homogeneous solutions; zero vectors are omitted.
    pub kernel_basis: Vec<Vec<BigInt>>,
}

impl ModSolution {
    /// `particular + Σ coeffs[i]·kernel_basis[i]`, reduced mod N.
    pub fn point(&self, coeffs: &[BigInt]) -> Vec<BigInt> {
        let mut x = self.particular.clone();
        for (k, basis) in coeffs.iter().zip(&self.kernel_basis) {
            for (xi, bi) in x.iter_mut().zip(basis) {
                *xi += k * bi;
            }
        }
        x.iter().map(|e| reduce(e, &self.modulus)).collect()
    }
}

/// Returns true iff `M · x ≡ rhs (mod N)`.
pub fn satisfies_mod(m: &IntMatrix, x: &[BigInt], rhs: &[BigInt], modulus: &BigInt) -> bool {
    m.mul_vec(x).iter().zip(rhs).all(|(l, r)| (l - r).is_multiple_of(modulus))
}

/// Solves `M · x ≡ rhs (mod N)` for composite `N` through the Smith form of `M`.
///
/// With `U M V = D`, substituting `x = V x'` turns the system into the
/// independent scalar congruences `dᵢ x'ᵢ ≡ (U rhs)ᵢ`, each solvable iff
/// `gcd(dᵢ, N)` divides the right-hand side. Rows beyond the rank must have a
/// zero right-hand side. Returns `Ok(None)` when no solution exists.
pub fn solve_linear_mod(m: &IntMatrix, rhs: &[BigInt], modulus: &BigInt) -> Result<Option<ModSolution>, LatticeError> {
    if *modulus < BigInt::from(2) {
        return Err(LatticeError::ModulusTooSmall { min: 2, got: modulus.clone() });
    }
    if rhs.len() != m.rows() {
        return Err(LatticeError::DimensionMismatch {
            expected: format!("rhs of length {}", m.rows()),
            got: format!("rhs of length {}", rhs.len()),
        });
    }
    let snf = smith_normal_form(m);
    let urhs: Vec<BigInt> = snf.u.mul_vec(rhs).iter().map(|e| reduce(e, modulus)).collect();
    let k = m.cols();
    let diag_len = m.rows().min(k);

    let mut x_prime = vec![BigInt::zero(); k];
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for (i, rhs_i) in urhs.iter().enumerate() {
        let d_i = if i < diag_len { snf.d[(i, i)].clone() } else { BigInt::zero() };
        let g = d_i.gcd(modulus);
        if !rhs_i.is_multiple_of(&g) {
            return Ok(None);
        }
        if i >= k {
            continue;
        }
        let sub_mod = modulus / &g;
        if !sub_mod.is_one() {
            let unit = reduce(&(&d_i / &g), &sub_mod);
            let inv = mod_inverse(&unit, &sub_mod).expect("d/g is a unit modulo N/g");
            x_prime[i] = reduce(&((rhs_i / &g) * inv), &sub_mod);
        }
        if !g.is_one() {
            let mut e = vec![BigInt::zero(); k];
            e[i] = sub_mod;
            gens.push(e);
        }
    }
    for i in m.rows()..k {
        // free columns past the last row
        let mut e = vec![BigInt::zero(); k];
        e[i] = BigInt::one();
        gens.push(e);
    }

    let to_x = |w: &[BigInt]| -> Vec<BigInt> { snf.v.mul_vec(w).iter().map(|e| reduce(e, modulus)).collect() };
    let particular = to_x(&x_prime);
    let kernel_basis = gens.iter().map(|g| to_x(g)).filter(|v| v.iter().any(|e| !e.is_zero())).collect();
    Ok(Some(ModSolution { modulus: modulus.clone(), particular, kernel_basis }))
}

/// Chinese remainder combination of `(residue, modulus)` pairs with pairwise
/// coprime moduli. Returns `(r, Π moduli)` with `0 ≤ r < Π moduli`.
pub fn crt_combine(pairs: &[(BigInt, BigInt)]) -> Result<(BigInt, BigInt), LatticeError> {
    let mut acc = (BigInt::zero(), BigInt::one());
    for (res, modulus) in pairs {
        if *modulus < BigInt::one() {
            return Err(LatticeError::ModulusTooSmall { min: 1, got: modulus.clone() });
        }
        let (g, p, _) = ext_gcd(&acc.1, modulus);
        if !g.is_one() {
            return Err(LatticeError::NonCoprime(acc.1.clone(), modulus.clone()));
        }
        // x = r0 + M0 * t with M0 t ≡ res - r0 (mod modulus), p = M0⁻¹ mod modulus
        let t = reduce(&((res - &acc.0) * p), modulus);
        let product = &acc.1 * modulus;
        let combined = reduce(&(&acc.0 + &acc.1 * t), &product);
        acc = (combined, product);
    }
    Ok(acc)
}

/// A determinant-one matrix sending the primitive vector `xi` to `(1, 0)ᵗ`.
pub fn unimodular_completion(xi: &[BigInt; 2]) -> Result<IntMatrix, LatticeError> {
    let (g, x, y) = ext_gcd(&xi[0], &xi[1]);
    if !g.is_one() {
        return Err(LatticeError::NonPrimitive(xi[0].clone(), xi[1].clone()));
    }
    IntMatrix::new(2, 2, vec![x, y, -xi[1].clone(), xi[0].clone()])
}

/// The fixed generating set of `GL_n(ℤ)` used by [`gl_enumerate`]:
/// transvections `E_ij(±1)`, transpositions, and single sign flips (last
/// coordinate first), in that order.
pub fn gl_generators(n: usize) -> Vec<IntMatrix> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for s in [1, -1] {
                let mut e = IntMatrix::identity(n);
                e[(i, j)] = BigInt::from(s);
                gens.push(e);
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut p = IntMatrix::identity(n);
            p.swap_rows(i, j);
            gens.push(p);
        }
    }
    for i in (0..n).rev() {
        let mut f = IntMatrix::identity(n);
        f[(i, i)] = BigInt::from(-1);
        gens.push(f);
    }
    gens
}

/// All distinct products of at most `depth` generators, in breadth-first
/// order (shorter words first, then generator order). Always starts with the
/// identity.
pub fn gl_enumerate(n: usize, depth: usize) -> Vec<IntMatrix> {
    let gens = gl_generators(n);
    let mut seen: HashSet<IntMatrix> = HashSet::new();
    let mut out = vec![IntMatrix::identity(n)];
    seen.insert(out[0].clone());
    let mut frontier = 0..1;
    for _ in 0..depth {
        let start = out.len();
        for idx in frontier.clone() {
            for g in &gens {
                let p = &out[idx] * g;
                if seen.insert(p.clone()) {
                    out.push(p);
                }
            }
        }
        frontier = start..out.len();
        if frontier.is_empty() {
            break;
        }
    }
    out
}

/// Splits `m ≥ 1` as `2ˢ · q` with `q` odd.
pub fn split_two_power(m: &BigInt) -> (u32, BigInt) {
    assert!(m.is_positive(), "split_two_power needs a positive integer");
    let s = m.trailing_zeros().unwrap_or(0) as u32;
    (s, m >> s)
}

/// Prime factorization by trial division, as `(p, exponent)` in increasing `p`.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(n.is_positive(), "factorize needs a positive integer");
    let mut rest = n.clone();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut e = 0;
        while rest.is_multiple_of(&p) {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if !rest.is_one() {
        out.push((rest, 1));
    }
    out
}

pub fn is_prime(p: &BigInt) -> bool {
    *p >= BigInt::from(2) && factorize(p).len() == 1 && factorize(p)[0].1 == 1
}
