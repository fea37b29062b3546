//! Algebraic shadows of the complexes `(⋁ⁿ S² ∨ P³(m)) ∪ e⁴`: cup-product
//! triples `(A, b, c)`, cellular map representations `(W, y, z)`, and the
//! laws connecting them.
//!
//! Positions are fixed: index `i` of `A` and `b` always refers to the i-th
//! sphere summand.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::zlattice::{reduce, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CellsError {
    #[error("cup product matrix is not symmetric")]
    Asymmetric,
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("torsion order must be at least 1, got {0}")]
    BadModulus(BigInt),
    #[error("m = {0} > 1 needs both b and c")]
    MissingTorsion(BigInt),
    #[error("shape mismatch: n = {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("modulus mismatch: m = {0} vs {1}")]
    ModulusMismatch(BigInt, BigInt),
    #[error("the attaching form readoff needs m = 1, got {0}")]
    TorsionPresent(BigInt),
}

/// Torsion part `(b, c)` of a cup-product triple; residues in `[0, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorsionCup {
    pub b: Vec<BigInt>,
    pub c: BigInt,
}

/// Cellular cup product representation. For `m = 1` there is no torsion part.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CupTriple {
    n: usize,
    m: BigInt,
    a: IntMatrix,
    torsion: Option<TorsionCup>,
}

impl CupTriple {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    pub fn a(&self) -> &IntMatrix {
        &self.a
    }

    pub fn torsion(&self) -> Option<&TorsionCup> {
        self.torsion.as_ref()
    }

    /// `b`, or the zero vector when `m = 1`.
    pub fn b(&self) -> Vec<BigInt> {
        self.torsion.as_ref().map_or_else(|| vec![BigInt::zero(); self.n], |t| t.b.clone())
    }

    /// `c`, or zero when `m = 1`.
    pub fn c(&self) -> BigInt {
        self.torsion.as_ref().map_or_else(BigInt::zero, |t| t.c.clone())
    }

    pub fn zero(n: usize, m: BigInt) -> Result<Self, CellsError> {
        let torsion = (m > BigInt::one()).then(|| TorsionCup { b: vec![BigInt::zero(); n], c: BigInt::zero() });
        make_triple(n, m, IntMatrix::zeros(n, n), torsion.as_ref().map(|t| t.b.clone()), torsion.map(|t| t.c))
    }

    /// Same `A`, torsion data re-expressed over a new modulus (entries reduced).
    pub fn with_modulus(&self, m: BigInt, b: Vec<BigInt>, c: BigInt) -> Result<Self, CellsError> {
        make_triple(self.n, m, self.a.clone(), Some(b), Some(c))
    }
}

/// Builds a triple, reducing `b` and `c` into `[0, m)`. For `m = 1` any
/// supplied `b`/`c` is dropped after its length is checked.
pub fn make_triple(
    n: usize,
    m: BigInt,
    a: IntMatrix,
    b: Option<Vec<BigInt>>,
    c: Option<BigInt>,
) -> Result<CupTriple, CellsError> {
    if m < BigInt::one() {
        return Err(CellsError::BadModulus(m));
    }
    if a.rows() != n || a.cols() != n {
        return Err(CellsError::LengthMismatch(format!("A is {}x{}, n = {n}", a.rows(), a.cols())));
    }
    if !a.is_symmetric() {
        return Err(CellsError::Asymmetric);
    }
    if let Some(b) = &b {
        if b.len() != n {
            return Err(CellsError::LengthMismatch(format!("b has length {}, n = {n}", b.len())));
        }
    }
    let torsion = if m.is_one() {
        None
    } else {
        match (b, c) {
            (Some(b), Some(c)) => Some(TorsionCup { b: b.iter().map(|x| reduce(x, &m)).collect(), c: reduce(&c, &m) }),
            _ => return Err(CellsError::MissingTorsion(m)),
        }
    };
    Ok(CupTriple { n, m, a, torsion })
}

/// Cellular map representation `(W, y, z)`: the induced maps on `H²` with
/// integral and mod-m coefficients. For `m = 1`, `y` and `z` are zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CellMapRep {
    pub m: BigInt,
    pub w: IntMatrix,
    pub y: Vec<BigInt>,
    pub z: BigInt,
}

impl CellMapRep {
    pub fn new(m: BigInt, w: IntMatrix, y: Vec<BigInt>, z: BigInt) -> Result<Self, CellsError> {
        if m < BigInt::one() {
            return Err(CellsError::BadModulus(m));
        }
        if !w.is_square() || y.len() != w.rows() {
            return Err(CellsError::LengthMismatch(format!(
                "W is {}x{}, y has length {}",
                w.rows(),
                w.cols(),
                y.len()
            )));
        }
        let y = y.iter().map(|e| reduce(e, &m)).collect();
        let z = reduce(&z, &m);
        Ok(CellMapRep { m, w, y, z })
    }

    /// `(I, 0, 1)`.
    pub fn identity(n: usize, m: BigInt) -> Self {
        CellMapRep::new(m, IntMatrix::identity(n), vec![BigInt::zero(); n], BigInt::one()).expect("valid")
    }

    /// A pure basis change on `H²`, for torsion-free complexes.
    pub fn from_matrix(w: IntMatrix) -> Self {
        let n = w.rows();
        CellMapRep::new(BigInt::one(), w, vec![BigInt::zero(); n], BigInt::zero()).expect("valid")
    }

    pub fn n(&self) -> usize {
        self.w.rows()
    }
}

/// `(A, b, c) ↦ (WᵗAW, yAW + z·bW, yAyᵗ + 2z·ybᵗ + z²c)`, residues mod m.
///
/// The factor 2 is kept as is; nothing here assumes m odd.
pub fn transform(t: &CupTriple, r: &CellMapRep) -> Result<CupTriple, CellsError> {
    if t.n != r.n() {
        return Err(CellsError::RankMismatch(t.n, r.n()));
    }
    if t.m != r.m {
        return Err(CellsError::ModulusMismatch(t.m.clone(), r.m.clone()));
    }
    let aw = &t.a * &r.w;
    let a_new = &r.w.transpose() * &aw;
    let torsion = t.torsion.as_ref().map(|tc| {
        let m = &t.m;
        let yaw = aw.left_mul_vec(&r.y);
        let bw = r.w.left_mul_vec(&tc.b);
        let b_new = yaw.iter().zip(&bw).map(|(p, q)| reduce(&(p + &r.z * q), m)).collect();
        TorsionCup { b: b_new, c: reduce(&torsion_c(&t.a, &tc.b, &tc.c, &r.y, &r.z), m) }
    });
    Ok(CupTriple { n: t.n, m: t.m.clone(), a: a_new, torsion })
}

/// `yAyᵗ + 2z·ybᵗ + z²c`, unreduced.
pub(crate) fn torsion_c(a: &IntMatrix, b: &[BigInt], c: &BigInt, y: &[BigInt], z: &BigInt) -> BigInt {
    let ay = a.mul_vec(y);
    let yay: BigInt = y.iter().zip(&ay).map(|(p, q)| p * q).sum();
    let yb: BigInt = y.iter().zip(b).map(|(p, q)| p * q).sum();
    yay + BigInt::from(2) * z * yb + z * z * c
}

/// Componentwise sum: the triple of the sum of attaching maps.
pub fn add(t1: &CupTriple, t2: &CupTriple) -> Result<CupTriple, CellsError> {
    if t1.n != t2.n {
        return Err(CellsError::RankMismatch(t1.n, t2.n));
    }
    if t1.m != t2.m {
        return Err(CellsError::ModulusMismatch(t1.m.clone(), t2.m.clone()));
    }
    let a = t1.a.add(&t2.a).expect("same shape");
    let torsion = match (&t1.torsion, &t2.torsion) {
        (Some(x), Some(y)) => Some(TorsionCup {
            b: x.b.iter().zip(&y.b).map(|(p, q)| reduce(&(p + q), &t1.m)).collect(),
            c: reduce(&(&x.c + &y.c), &t1.m),
        }),
        _ => None,
    };
    Ok(CupTriple { n: t1.n, m: t1.m.clone(), a, torsion })
}

/// Hopf coefficients `aᵢ` and Whitehead coefficients `a_{jk}` (j < k) of the
/// attaching map of a torsion-free complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttachingForm {
    pub diag: Vec<BigInt>,
    /// `a_{jk}` for `j < k`, in lexicographic `(j, k)` order.
    pub off: Vec<BigInt>,
}

impl AttachingForm {
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// `a_{jk}` for 0-based `j ≠ k`.
    pub fn off_at(&self, j: usize, k: usize) -> &BigInt {
        let (j, k) = if j < k { (j, k) } else { (k, j) };
        assert!(j != k && k < self.n(), "off-diagonal index out of range");
        let n = self.n();
        // rows 0..j contribute n-1, n-2, ... entries
        let base = j * (2 * n - j - 1) / 2;
        &self.off[base + (k - j - 1)]
    }
}

pub fn attaching_form(t: &CupTriple) -> Result<AttachingForm, CellsError> {
    if !t.m.is_one() {
        return Err(CellsError::TorsionPresent(t.m.clone()));
    }
    let n = t.n;
    let diag = (0..n).map(|i| t.a[(i, i)].clone()).collect();
    let off = (0..n).flat_map(|j| (j + 1..n).map(move |k| (j, k))).map(|(j, k)| t.a[(j, k)].clone()).collect();
    Ok(AttachingForm { diag, off })
}

pub fn form_to_triple(f: &AttachingForm) -> CupTriple {
    let n = f.n();
    assert_eq!(f.off.len(), n * n.saturating_sub(1) / 2, "off-diagonal length");
    let mut a = IntMatrix::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = f.diag[i].clone();
        for k in i + 1..n {
            a[(i, k)] = f.off_at(i, k).clone();
            a[(k, i)] = f.off_at(i, k).clone();
        }
    }
    CupTriple { n, m: BigInt::one(), a, torsion: None }
}

/// `det W = ±1` and `z` a unit mod m (no condition on z when `m = 1`).
pub fn is_equivalence_rep(r: &CellMapRep, m: &BigInt) -> bool {
    let det_ok = r.w.det().map(|d| d.abs().is_one()).unwrap_or(false);
    det_ok && (m.is_one() || r.z.gcd(m).is_one())
}
