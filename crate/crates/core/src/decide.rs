//! Decision procedures: splitting off the odd-torsion Moore space, and
//! equivalence of cup-product data under basis change.
//!
//! Equivalence verdicts are three-valued. `NotEquivalent` is only issued on a
//! genuine invariant certificate; a bounded search that finds nothing yields
//! `Inconclusive`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::cells::{self, transform, CellMapRep, CellsError, CupTriple};
use crate::exec::Exec;
use crate::zlattice::{
    crt_combine, ext_gcd, factorize, gl_enumerate, reduce, satisfies_mod, smith_normal_form, solve_linear_mod,
    split_two_power, IntMatrix, LatticeError,
};

/// Default word length for the `GL_n(ℤ)` search.
pub const DEFAULT_DEPTH: usize = 4;
/// Default cap on brute-force candidates.
pub const DEFAULT_BUDGET: u64 = 1_000_000;
/// Above this many `(z, y)` pairs the torsion search gives up as inconclusive.
const MAX_TORSION_PAIRS: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error(transparent)]
    Cells(#[from] CellsError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("q = {q} must be odd and divide m = {m}")]
    BadOddModulus { q: BigInt, m: BigInt },
    #[error("matrix is not symmetric")]
    Asymmetric,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("brute force needs {needed} candidates, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("splitting check failed: transformed torsion data not divisible by q = {0}")]
    SplitCheckFailed(BigInt),
}

// ---------------------------------------------------------------------------
// Splitting

/// The mod-q system `A·y ≡ −b`, `b·y ≡ −c`: the coefficient matrix is `A`
/// stacked over the row `b`, right-hand side `(−b, −c)`, all reduced mod q.
pub fn splitting_system(t: &CupTriple, q: &BigInt) -> Result<(IntMatrix, Vec<BigInt>), DecideError> {
    if !q.is_positive() || q.is_even() || !t.m().is_multiple_of(q) {
        return Err(DecideError::BadOddModulus { q: q.clone(), m: t.m().clone() });
    }
    let n = t.n();
    let b = t.b();
    let mut data = Vec::with_capacity((n + 1) * n);
    data.extend(t.a().entries().iter().map(|e| reduce(e, q)));
    data.extend(b.iter().map(|e| reduce(e, q)));
    let matrix = IntMatrix::new(n + 1, n, data)?;
    let mut rhs: Vec<BigInt> = b.iter().map(|e| reduce(&-e, q)).collect();
    rhs.push(reduce(&-t.c(), q));
    Ok((matrix, rhs))
}

fn system_holds(t: &CupTriple, y: &[BigInt], q: &BigInt) -> bool {
    let (m, rhs) = splitting_system(t, q).expect("q validated by caller");
    satisfies_mod(&m, y, &rhs, q)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSolution {
    pub prime: BigInt,
    pub prime_power: BigInt,
    pub y: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum SplitOutcome {
    Splits {
        /// Per-prime-power solutions that were combined.
        local: Vec<LocalSolution>,
        /// Solution of the mod-q system.
        y: Vec<BigInt>,
        /// `y' ≡ y (mod q)`, `y' ≡ 0 (mod 2ˢ)`.
        lift: Vec<BigInt>,
        /// The triple after the basis change `(I, y', 1)`.
        transformed: CupTriple,
        /// `(A, b' mod 2ˢ, c' mod 2ˢ)`, the cup data of the complementary summand.
        reduced: CupTriple,
    },
    NoSplit {
        /// First prime power whose local system has no solution.
        prime_power: BigInt,
    },
    NoOddPart,
}

/// `m = 2ˢ·q` and what happened when trying to split off `P³(q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitVerdict {
    pub m: BigInt,
    pub s: u32,
    pub q: BigInt,
    pub outcome: SplitOutcome,
}

impl SplitVerdict {
    pub fn label(&self) -> &'static str {
        match self.outcome {
            SplitOutcome::Splits { .. } => "Splits",
            SplitOutcome::NoSplit { .. } => "NoSplit",
            SplitOutcome::NoOddPart => "NoOddPart",
        }
    }
}

/// `ρ(0, y) = 2ˢ·α·y` where `2ˢα + qβ = 1`: the residue mod `2ˢq` that is
/// `y` mod q and `0` mod `2ˢ`.
pub fn lift_solution(y: &[BigInt], s: u32, q: &BigInt) -> Vec<BigInt> {
    let two_s = BigInt::one() << s;
    let (g, alpha, _beta) = ext_gcd(&two_s, q);
    assert!(g.is_one(), "2^s and q must be coprime");
    let m = &two_s * q;
    let factor = &two_s * alpha;
    y.iter().map(|yi| reduce(&(&factor * yi), &m)).collect()
}

/// Decides whether the complex splits as `Ĉ ∨ P³(q)` with `q` the odd part of
/// `m`. Each odd prime power of `q` is solved separately, the local solutions
/// are glued by CRT, lifted to `ℤ_m`, and the resulting basis change is
/// checked to kill `b` and `c` mod q before the verdict is returned.
pub fn decide_split(t: &CupTriple) -> Result<SplitVerdict, DecideError> {
    let m = t.m().clone();
    let (s, q) = split_two_power(&m);
    let verdict = |outcome| SplitVerdict { m: m.clone(), s, q: q.clone(), outcome };
    if q.is_one() {
        return Ok(verdict(SplitOutcome::NoOddPart));
    }

    let mut local = Vec::new();
    for (p, r) in factorize(&q) {
        let pr = p.pow(r);
        let (matrix, rhs) = splitting_system(t, &pr)?;
        match solve_linear_mod(&matrix, &rhs, &pr)? {
            Some(sol) => local.push(LocalSolution { prime: p, prime_power: pr, y: sol.particular }),
            None => return Ok(verdict(SplitOutcome::NoSplit { prime_power: pr })),
        }
    }

    let y = (0..t.n())
        .map(|i| {
            let pairs: Vec<_> = local.iter().map(|l| (l.y[i].clone(), l.prime_power.clone())).collect();
            crt_combine(&pairs).map(|(r, _)| r)
        })
        .collect::<Result<Vec<_>, _>>()?;
    debug_assert!(system_holds(t, &y, &q));

    let lift = lift_solution(&y, s, &q);
    let rep = CellMapRep::new(m.clone(), IntMatrix::identity(t.n()), lift.clone(), BigInt::one())?;
    let transformed = transform(t, &rep)?;
    let b_new = transformed.b();
    let c_new = transformed.c();
    if !b_new.iter().all(|e| e.is_multiple_of(&q)) || !c_new.is_multiple_of(&q) {
        return Err(DecideError::SplitCheckFailed(q));
    }

    let two_s = BigInt::one() << s;
    let reduced = if s == 0 {
        cells::make_triple(t.n(), BigInt::one(), t.a().clone(), None, None)?
    } else {
        t.with_modulus(two_s, b_new, c_new)?
    };
    Ok(verdict(SplitOutcome::Splits { local, y, lift, transformed, reduced }))
}

/// Result of exhaustive search over `(ℤ_q)ⁿ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteSplit {
    pub q: BigInt,
    /// All solutions in lexicographic order.
    pub solutions: Vec<Vec<BigInt>>,
}

impl BruteSplit {
    pub fn solvable(&self) -> bool {
        !self.solutions.is_empty()
    }
}

/// Decodes `code` into a vector of `len` digits base `base`, most
/// significant first.
fn digits(mut code: u64, base: u64, len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for slot in out.iter_mut().rev() {
        *slot = BigInt::from(code % base);
        code /= base;
    }
    out
}

fn checked_pow(base: u64, exp: usize) -> Option<u64> {
    (0..exp).try_fold(1u64, |acc, _| acc.checked_mul(base))
}

/// Tests every `y ∈ (ℤ_q)ⁿ` against the splitting system.
pub fn brute_force_split(t: &CupTriple, q: &BigInt, budget: u64) -> Result<BruteSplit, DecideError> {
    brute_force_split_with(t, q, budget, Exec::default())
}

pub fn brute_force_split_with(t: &CupTriple, q: &BigInt, budget: u64, exec: Exec) -> Result<BruteSplit, DecideError> {
    let (matrix, rhs) = splitting_system(t, q)?;
    let n = t.n();
    let exceeded = || DecideError::BudgetExceeded { needed: format!("{q}^{n}"), budget };
    let base = q.to_u64().ok_or_else(exceeded)?;
    let total = checked_pow(base, n).filter(|&c| c <= budget).ok_or_else(exceeded)?;
    let solutions = exec.filter_map_index(total, |code| {
        let y = digits(code, base, n);
        satisfies_mod(&matrix, &y, &rhs, q).then_some(y)
    });
    Ok(BruteSplit { q: q.clone(), solutions })
}

// ---------------------------------------------------------------------------
// Form invariants

/// `(n₊, n₀, n₋)`: counts of positive, zero and negative eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.positive, self.zero, self.negative)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormInvariants {
    pub abs_det: BigInt,
    pub signature: Signature,
    pub rank: usize,
    /// True iff every diagonal entry is even.
    pub even: bool,
}

/// Coefficients `[c₀, c₁, …, cₙ = 1]` of `det(λI − A)`, by Faddeev–LeVerrier.
/// All divisions are exact.
pub fn characteristic_polynomial(a: &IntMatrix) -> Vec<BigInt> {
    let n = a.rows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut mk = IntMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a * &mk;
        for i in 0..n {
            next[(i, i)] += &coeffs[n - k + 1];
        }
        mk = next;
        let amk = a * &mk;
        let trace: BigInt = (0..n).map(|i| amk[(i, i)].clone()).sum();
        coeffs[n - k] = -trace / BigInt::from(k);
    }
    coeffs
}

fn sign_changes<'a>(coeffs: impl Iterator<Item = &'a BigInt>) -> usize {
    let signs: Vec<bool> = coeffs.filter(|c| !c.is_zero()).map(|c| c.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Exact invariants of a symmetric integer matrix under `A ↦ WᵗAW`.
///
/// A real symmetric matrix has only real eigenvalues, so Descartes' rule is
/// exact on its characteristic polynomial: sign changes of `p(λ)` count the
/// positive roots and those of `p(−λ)` the negative ones.
pub fn form_invariants(a: &IntMatrix) -> Result<FormInvariants, DecideError> {
    if !a.is_symmetric() {
        return Err(DecideError::Asymmetric);
    }
    let n = a.rows();
    let poly = characteristic_polynomial(a);
    let positive = sign_changes(poly.iter());
    let flipped: Vec<BigInt> = poly.iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() }).collect();
    let negative = sign_changes(flipped.iter());
    let rank = smith_normal_form(a).rank();
    let signature = Signature { positive, zero: n - positive - negative, negative };
    debug_assert_eq!(signature.zero, n - rank);
    Ok(FormInvariants { abs_det: a.det()?.abs(), signature, rank, even: (0..n).all(|i| a[(i, i)].is_even()) })
}

// ---------------------------------------------------------------------------
// Equivalence

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantKind {
    /// Torsion order of `H³`.
    Modulus,
    /// Rank of `H²`.
    H2Rank,
    AbsDet,
    Signature,
    Rank,
    Parity,
    /// The full group was searched (only possible for `n = 1`).
    Exhaustive,
}

impl InvariantKind {
    pub fn name(self) -> &'static str {
        match self {
            InvariantKind::Modulus => "m differs",
            InvariantKind::H2Rank => "n differs",
            InvariantKind::AbsDet => "|det|",
            InvariantKind::Signature => "signature",
            InvariantKind::Rank => "rank",
            InvariantKind::Parity => "parity",
            InvariantKind::Exhaustive => "exhaustive search",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distinction {
    pub invariant: InvariantKind,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivOutcome {
    Equivalent { witness: CellMapRep },
    NotEquivalent { reason: Distinction },
    Inconclusive { depth: usize, searched: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivVerdict {
    pub outcome: EquivOutcome,
    /// Whether the verdict also settles homotopy type: true for odd m
    /// (including m = 1).
    pub homotopy_conclusive: bool,
}

impl EquivVerdict {
    pub fn label(&self) -> &'static str {
        match self.outcome {
            EquivOutcome::Equivalent { .. } => "Equivalent",
            EquivOutcome::NotEquivalent { .. } => "NotEquivalent",
            EquivOutcome::Inconclusive { .. } => "Inconclusive",
        }
    }

    pub fn witness(&self) -> Option<&CellMapRep> {
        match &self.outcome {
            EquivOutcome::Equivalent { witness } => Some(witness),
            _ => None,
        }
    }

    fn not_equivalent(invariant: InvariantKind, left: impl ToString, right: impl ToString, conclusive: bool) -> Self {
        EquivVerdict {
            outcome: EquivOutcome::NotEquivalent {
                reason: Distinction { invariant, left: left.to_string(), right: right.to_string() },
            },
            homotopy_conclusive: conclusive,
        }
    }
}

fn distinguish_forms(a: &IntMatrix, b: &IntMatrix) -> Result<Option<Distinction>, DecideError> {
    let (fa, fb) = (form_invariants(a)?, form_invariants(b)?);
    let d = |invariant, l: String, r: String| Some(Distinction { invariant, left: l, right: r });
    Ok(if fa.abs_det != fb.abs_det {
        d(InvariantKind::AbsDet, fa.abs_det.to_string(), fb.abs_det.to_string())
    } else if fa.signature != fb.signature {
        d(InvariantKind::Signature, fa.signature.to_string(), fb.signature.to_string())
    } else if fa.rank != fb.rank {
        d(InvariantKind::Rank, fa.rank.to_string(), fb.rank.to_string())
    } else if fa.even != fb.even {
        let p = |e| if e { "even" } else { "odd" }.to_string();
        d(InvariantKind::Parity, p(fa.even), p(fb.even))
    } else {
        None
    })
}

/// `gl_enumerate(n, depth)`, memoized per process.
pub fn gl_space(n: usize, depth: usize) -> Arc<Vec<IntMatrix>> {
    type Cache = Mutex<HashMap<(usize, usize), Arc<Vec<IntMatrix>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache lock").get(&(n, depth)) {
        return hit.clone();
    }
    let space = Arc::new(gl_enumerate(n, depth));
    cache.lock().expect("cache lock").entry((n, depth)).or_insert(space).clone()
}

fn congruent_by(w: &IntMatrix, a: &IntMatrix, target: &IntMatrix) -> bool {
    &(&w.transpose() * a) * w == *target
}

/// Searches `W ∈ gl_enumerate(n, depth)` with `WᵗAW = A'` after ruling out
/// the invariant certificates.
pub fn congruence_equiv(a: &IntMatrix, a2: &IntMatrix, depth: usize) -> Result<EquivVerdict, DecideError> {
    congruence_equiv_with(a, a2, depth, Exec::default())
}

pub fn congruence_equiv_with(
    a: &IntMatrix,
    a2: &IntMatrix,
    depth: usize,
    exec: Exec,
) -> Result<EquivVerdict, DecideError> {
    if !a.is_square() || a.rows() != a2.rows() || a.cols() != a2.cols() {
        return Err(DecideError::ShapeMismatch(format!("{}x{} vs {}x{}", a.rows(), a.cols(), a2.rows(), a2.cols())));
    }
    if let Some(reason) = distinguish_forms(a, a2)? {
        return Ok(EquivVerdict { outcome: EquivOutcome::NotEquivalent { reason }, homotopy_conclusive: true });
    }
    let space = gl_space(a.rows(), depth);
    let found = exec.find_map_first(&space, |w| congruent_by(w, a, a2).then(|| w.clone()));
    let outcome = match found {
        Some(w) => EquivOutcome::Equivalent { witness: CellMapRep::from_matrix(w) },
        None => EquivOutcome::Inconclusive { depth, searched: space.len() },
    };
    Ok(EquivVerdict { outcome, homotopy_conclusive: true })
}

struct TorsionSearch<'a> {
    m: BigInt,
    m_u64: u64,
    n: usize,
    units: Vec<BigInt>,
    a: &'a IntMatrix,
    b: Vec<BigInt>,
    c: BigInt,
    target_b: Vec<BigInt>,
    target_c: BigInt,
}

impl TorsionSearch<'_> {
    fn pairs(&self) -> Option<u64> {
        checked_pow(self.m_u64, self.n)?.checked_mul(self.units.len() as u64)
    }

    /// Decodes a search index into `(z, y)`: z outermost, then y in
    /// lexicographic order.
    fn decode(&self, idx: u64) -> (BigInt, Vec<BigInt>) {
        let per_z = checked_pow(self.m_u64, self.n).expect("bounded by pairs()");
        let z = self.units[(idx / per_z) as usize].clone();
        (z, digits(idx % per_z, self.m_u64, self.n))
    }

    fn c_matches(&self, y: &[BigInt], z: &BigInt) -> bool {
        reduce(&cells::torsion_c(self.a, &self.b, &self.c, y, z), &self.m) == self.target_c
    }

    fn b_matches(&self, y: &[BigInt], z: &BigInt, aw: &IntMatrix, bw: &[BigInt]) -> bool {
        let yaw = aw.left_mul_vec(y);
        yaw.iter().zip(bw).zip(&self.target_b).all(|((p, q), t)| reduce(&(p + z * q), &self.m) == *t)
    }
}

/// Searches for `(W, y, z)` with `transform(t, (W, y, z)) = t'`: `W` over
/// `gl_enumerate(n, depth)`, `z` over the units of `ℤ_m` ascending, `y` over
/// `(ℤ_m)ⁿ` lexicographically. The first witness in `(z, y, W)` order wins.
pub fn ring_equiv(t: &CupTriple, t2: &CupTriple, depth: usize) -> Result<EquivVerdict, DecideError> {
    ring_equiv_with(t, t2, depth, Exec::default())
}

pub fn ring_equiv_with(t: &CupTriple, t2: &CupTriple, depth: usize, exec: Exec) -> Result<EquivVerdict, DecideError> {
    if t.n() != t2.n() {
        return Err(DecideError::ShapeMismatch(format!("n = {} vs {}", t.n(), t2.n())));
    }
    let conclusive = t.m().is_odd() && t2.m().is_odd();
    if t.m() != t2.m() {
        return Ok(EquivVerdict::not_equivalent(InvariantKind::Modulus, t.m(), t2.m(), conclusive));
    }
    if let Some(reason) = distinguish_forms(t.a(), t2.a())? {
        return Ok(EquivVerdict { outcome: EquivOutcome::NotEquivalent { reason }, homotopy_conclusive: conclusive });
    }

    let space = gl_space(t.n(), depth);
    let candidates: Vec<usize> = exec.filter_indices(&space, |w| congruent_by(w, t.a(), t2.a()));
    let inconclusive = EquivVerdict {
        outcome: EquivOutcome::Inconclusive { depth, searched: space.len() },
        homotopy_conclusive: conclusive,
    };
    let m = t.m().clone();
    if m.is_one() {
        return Ok(match candidates.first() {
            Some(&i) => EquivVerdict {
                outcome: EquivOutcome::Equivalent { witness: CellMapRep::from_matrix(space[i].clone()) },
                homotopy_conclusive: conclusive,
            },
            None => inconclusive,
        });
    }
    if candidates.is_empty() {
        return Ok(inconclusive);
    }
    let Some(m_u64) = m.to_u64() else {
        return Ok(inconclusive);
    };

    let search = TorsionSearch {
        units: (1..m_u64).filter(|z| z.gcd(&m_u64) == 1).map(BigInt::from).collect(),
        m: m.clone(),
        m_u64,
        n: t.n(),
        a: t.a(),
        b: t.b(),
        c: t.c(),
        target_b: t2.b(),
        target_c: t2.c(),
    };
    let Some(total) = search.pairs().filter(|&p| p <= MAX_TORSION_PAIRS) else {
        return Ok(inconclusive);
    };
    let prepared: Vec<(usize, IntMatrix, Vec<BigInt>)> = candidates
        .iter()
        .map(|&i| {
            let w = &space[i];
            (i, t.a() * w, w.left_mul_vec(&search.b))
        })
        .collect();

    let found = exec.find_map_first_index(total, |idx| {
        let (z, y) = search.decode(idx);
        if !search.c_matches(&y, &z) {
            return None;
        }
        prepared.iter().find(|(_, aw, bw)| search.b_matches(&y, &z, aw, bw)).map(|(i, _, _)| (*i, y, z))
    });
    Ok(match found {
        Some((i, y, z)) => EquivVerdict {
            outcome: EquivOutcome::Equivalent { witness: CellMapRep::new(m, space[i].clone(), y, z)? },
            homotopy_conclusive: conclusive,
        },
        None => inconclusive,
    })
}

/// Exhaustive oracle for [`ring_equiv`]: every `(z, y, W)` in the same order,
/// no invariant shortcuts and no prefiltering of `W`.
pub fn brute_force_equiv(
    t: &CupTriple,
    t2: &CupTriple,
    depth: usize,
    budget: u64,
) -> Result<EquivVerdict, DecideError> {
    brute_force_equiv_with(t, t2, depth, budget, Exec::default())
}

pub fn brute_force_equiv_with(
    t: &CupTriple,
    t2: &CupTriple,
    depth: usize,
    budget: u64,
    exec: Exec,
) -> Result<EquivVerdict, DecideError> {
    if t.n() != t2.n() {
        return Err(DecideError::ShapeMismatch(format!("n = {} vs {}", t.n(), t2.n())));
    }
    let conclusive = t.m().is_odd() && t2.m().is_odd();
    if t.m() != t2.m() {
        return Ok(EquivVerdict::not_equivalent(InvariantKind::Modulus, t.m(), t2.m(), conclusive));
    }
    let m = t.m().clone();
    let n = t.n();
    let space = gl_space(n, depth);
    let exceeded = || DecideError::BudgetExceeded { needed: format!("|GL| * {m}^{n} * phi({m})"), budget };
    let m_u64 = m.to_u64().ok_or_else(exceeded)?;
    let (units, per_z): (Vec<BigInt>, u64) = if m.is_one() {
        (vec![BigInt::zero()], 1)
    } else {
        let units = (1..m_u64).filter(|z| z.gcd(&m_u64) == 1).map(BigInt::from).collect();
        (units, checked_pow(m_u64, n).ok_or_else(exceeded)?)
    };
    let total = per_z
        .checked_mul(units.len() as u64)
        .and_then(|p| p.checked_mul(space.len() as u64))
        .filter(|&c| c <= budget)
        .ok_or_else(exceeded)?;

    let w_count = space.len() as u64;
    let found = exec.find_map_first_index(total, |idx| {
        let (zy, wi) = (idx / w_count, (idx % w_count) as usize);
        let z = units[(zy / per_z) as usize].clone();
        let y = if m.is_one() { vec![BigInt::zero(); n] } else { digits(zy % per_z, m_u64, n) };
        let rep = CellMapRep::new(m.clone(), space[wi].clone(), y, z).ok()?;
        (transform(t, &rep).ok()? == *t2).then_some(rep)
    });
    let outcome = match found {
        Some(witness) => EquivOutcome::Equivalent { witness },
        // GL_1(ℤ) = {±1} is fully covered once depth ≥ 1
        None if n == 1 && depth >= 1 => EquivOutcome::NotEquivalent {
            reason: Distinction {
                invariant: InvariantKind::Exhaustive,
                left: format!("{} candidates", total),
                right: "no witness".into(),
            },
        },
        None => EquivOutcome::Inconclusive { depth, searched: space.len() },
    };
    Ok(EquivVerdict { outcome, homotopy_conclusive: conclusive })
}
