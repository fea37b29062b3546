//! Command-line surface: file formats, reports, and exit codes.
//!
//! Every command produces a JSON value with sorted keys and no timestamps, so
//! output is byte-identical for identical input and flags. Integers beyond
//! 2⁵³ in magnitude are written as decimal strings; input accepts either form.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::cells::{make_triple, CellMapRep, CupTriple};
use crate::decide::{
    brute_force_equiv, brute_force_split, decide_split, ring_equiv, DecideError, EquivOutcome, EquivVerdict,
    SplitOutcome, SplitVerdict, DEFAULT_BUDGET, DEFAULT_DEPTH,
};
use crate::toric::{
    cohomology, lens_orders, nu_p, primes_dividing, vertex_for_prime, vertex_kernel, CharacteristicData,
    CohomologyTable, LensDescriptor, LensOrders, ValidationError,
};
use crate::zlattice::{split_two_power, IntMatrix};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;
pub const EXIT_BUDGET: i32 = 5;

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad input: {0}")]
    Format(String),
    #[error("invalid characteristic data: {0}")]
    Validation(#[from] ValidationError),
}

impl InputError {
    pub fn exit_code(&self) -> i32 {
        match self {
            InputError::Io { .. } => EXIT_IO,
            _ => EXIT_INPUT,
        }
    }

    fn to_json(&self) -> Value {
        let mut err = Map::new();
        let kind = match self {
            InputError::Io { .. } => "Io",
            InputError::Json(_) => "MalformedJson",
            InputError::Format(_) => "BadInput",
            InputError::Validation(v) => {
                if let Some(i) = v.index() {
                    err.insert("index".into(), json!(i));
                }
                v.kind()
            }
        };
        err.insert("kind".into(), json!(kind));
        err.insert("message".into(), json!(self.to_string()));
        json!({ "error": err })
    }
}

/// JSON number when `|x| ≤ 2⁵³`, decimal string otherwise.
pub fn int_json(x: &BigInt) -> Value {
    let limit = BigInt::one() << 53;
    if x.abs() <= limit {
        let v: i64 = x.try_into().expect("fits in i64");
        json!(v)
    } else {
        json!(x.to_string())
    }
}

fn ints_json(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int_json).collect())
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|r| ints_json(m.row(r))).collect())
}

fn parse_int(v: &Value, what: &str) -> Result<BigInt, InputError> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        _ => return Err(InputError::Format(format!("{what}: expected an integer, got {v}"))),
    };
    text.parse::<BigInt>().map_err(|_| InputError::Format(format!("{what}: {text} is not an integer")))
}

fn parse_int_array(v: &Value, what: &str) -> Result<Vec<BigInt>, InputError> {
    v.as_array()
        .ok_or_else(|| InputError::Format(format!("{what}: expected an array")))?
        .iter()
        .map(|e| parse_int(e, what))
        .collect()
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, InputError> {
    v.as_object().ok_or_else(|| InputError::Format(format!("{what}: expected a JSON object")))
}

/// `{"xi": [[a1, b1], ...]}` in cyclic order.
pub fn parse_fan(text: &str) -> Result<CharacteristicData, InputError> {
    let v: Value = serde_json::from_str(text)?;
    let xi = object(&v, "fan")?.get("xi").ok_or_else(|| InputError::Format("fan: missing \"xi\"".into()))?;
    let vectors = xi
        .as_array()
        .ok_or_else(|| InputError::Format("xi: expected an array".into()))?
        .iter()
        .enumerate()
        .map(|(i, pair)| {
            let p = parse_int_array(pair, &format!("xi[{}]", i + 1))?;
            <[BigInt; 2]>::try_from(p).map_err(|_| InputError::Format(format!("xi[{}]: expected two entries", i + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CharacteristicData::new(vectors)?)
}

/// `{"n": int, "m": int, "A": [[...]], "b": [...], "c": int}`; `b`/`c` omitted when `m = 1`.
pub fn parse_triple(text: &str) -> Result<CupTriple, InputError> {
    let v: Value = serde_json::from_str(text)?;
    let obj = object(&v, "triple")?;
    let field = |k: &str| obj.get(k).ok_or_else(|| InputError::Format(format!("triple: missing \"{k}\"")));
    let n = parse_int(field("n")?, "n")?;
    let n: usize = n.try_into().map_err(|_| InputError::Format("n: expected a small non-negative integer".into()))?;
    let m = parse_int(field("m")?, "m")?;
    let rows = field("A")?
        .as_array()
        .ok_or_else(|| InputError::Format("A: expected an array of rows".into()))?
        .iter()
        .map(|r| parse_int_array(r, "A"))
        .collect::<Result<Vec<_>, _>>()?;
    let a = IntMatrix::from_rows(&rows).map_err(|e| InputError::Format(format!("A: {e}")))?;
    let b = obj.get("b").map(|b| parse_int_array(b, "b")).transpose()?;
    let c = obj.get("c").map(|c| parse_int(c, "c")).transpose()?;
    make_triple(n, m, a, b, c).map_err(|e| InputError::Format(e.to_string()))
}

pub fn triple_json(t: &CupTriple) -> Value {
    let mut obj = Map::new();
    obj.insert("n".into(), json!(t.n()));
    obj.insert("m".into(), int_json(t.m()));
    obj.insert("A".into(), matrix_json(t.a()));
    if let Some(tc) = t.torsion() {
        obj.insert("b".into(), ints_json(&tc.b));
        obj.insert("c".into(), int_json(&tc.c));
    }
    Value::Object(obj)
}

pub fn rep_json(r: &CellMapRep) -> Value {
    let mut obj = Map::new();
    obj.insert("W".into(), matrix_json(&r.w));
    if !r.m.is_one() {
        obj.insert("y".into(), ints_json(&r.y));
        obj.insert("z".into(), int_json(&r.z));
    }
    Value::Object(obj)
}

/// Everything computable from the characteristic data of one polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub n: usize,
    pub edge_count: usize,
    pub orders: LensOrders,
    pub m: BigInt,
    pub s: u32,
    pub q: BigInt,
    pub cohomology: CohomologyTable,
    /// `(p, ν_p(m), vertex)` for each prime dividing `m`.
    pub prime_vertices: Vec<(BigInt, BigInt, usize)>,
    pub lens: Vec<LensDescriptor>,
}

impl AnalysisReport {
    pub fn build(data: &CharacteristicData) -> Self {
        let orders = lens_orders(data);
        let cohomology = cohomology(data);
        let m = cohomology.h(3).torsion;
        let (s, q) = split_two_power(&m);
        let prime_vertices = primes_dividing(&m)
            .into_iter()
            .map(|p| {
                let nu = nu_p(&m, &p).expect("m > 0, p prime");
                let v = vertex_for_prime(data, &p).expect("every prime dividing m has a vertex");
                (p, nu, v)
            })
            .collect();
        let lens = (1..=data.edge_count()).map(|i| vertex_kernel(data, i).expect("index in range")).collect();
        AnalysisReport { n: data.n(), edge_count: data.edge_count(), orders, m, s, q, cohomology, prime_vertices, lens }
    }

    pub fn to_json(&self) -> Value {
        let orders: Vec<Value> = self
            .orders
            .pairs()
            .map(|(i, j, v)| json!({ "i": i, "j": j, "m_{i,j}": int_json(v), "adjacent": j == i + 1 || (i == 1 && j == self.edge_count) }))
            .collect();
        let mut cohom = Map::new();
        for (deg, g) in self.cohomology.groups.iter().enumerate() {
            cohom.insert(
                format!("H^{deg}"),
                json!({ "group": g.to_string(), "free_rank": g.free_rank, "torsion": int_json(&g.torsion) }),
            );
        }
        let primes: Vec<Value> = self
            .prime_vertices
            .iter()
            .map(|(p, nu, v)| json!({ "p": int_json(p), "nu_p(m)": int_json(nu), "vertex": v }))
            .collect();
        let lens: Vec<Value> = self
            .lens
            .iter()
            .map(|l| {
                json!({
                    "vertex": l.vertex_index,
                    "m_{i,i+1}": int_json(&l.order),
                    "kernel_generator": ints_json(&l.kernel_generator),
                })
            })
            .collect();
        json!({
            "n": self.n,
            "edge_count": self.edge_count,
            "lens_orders": orders,
            "m": int_json(&self.m),
            "s": self.s,
            "q": int_json(&self.q),
            "h3_trivial": self.m.is_one(),
            "cohomology": cohom,
            "primes": primes,
            "lens_spaces": lens,
        })
    }
}

/// A command's result: the JSON document and the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CmdOutput {
    pub value: Value,
    pub exit: i32,
}

impl CmdOutput {
    fn new(value: Value, exit: i32) -> Self {
        CmdOutput { value, exit }
    }

    fn from_input_error(e: &InputError) -> Self {
        CmdOutput::new(e.to_json(), e.exit_code())
    }

    fn from_decide_error(e: &DecideError) -> Self {
        let (kind, exit) = match e {
            DecideError::BudgetExceeded { .. } => ("BudgetExceeded", EXIT_BUDGET),
            _ => ("BadInput", EXIT_INPUT),
        };
        CmdOutput::new(json!({ "error": { "kind": kind, "message": e.to_string() } }), exit)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.value).expect("serializable") + "\n",
            Format::Text => {
                let mut lines = Vec::new();
                flatten_text(&self.value, "", &mut lines);
                lines.join("\n") + "\n"
            }
        }
    }
}

fn flatten_text(v: &Value, prefix: &str, out: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten_text(child, &key, out);
            }
        }
        Value::Array(items) if items.iter().any(Value::is_object) => {
            for (i, child) in items.iter().enumerate() {
                flatten_text(child, &format!("{prefix}[{i}]"), out);
            }
        }
        Value::String(s) => out.push(format!("{prefix}: {s}")),
        other => out.push(format!("{prefix}: {other}")),
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|source| InputError::Io { path: path.to_path_buf(), source })
}

pub fn analyze_text(text: &str) -> CmdOutput {
    match parse_fan(text) {
        Ok(data) => CmdOutput::new(AnalysisReport::build(&data).to_json(), EXIT_OK),
        Err(e) => CmdOutput::from_input_error(&e),
    }
}

pub fn cmd_analyze(path: &Path) -> CmdOutput {
    match read(path) {
        Ok(text) => analyze_text(&text),
        Err(e) => CmdOutput::from_input_error(&e),
    }
}

const SPLIT_NOTE: &str = "A NoSplit verdict cannot occur for the cup-product data of a 4-dimensional toric orbifold: \
every such space splits off P^3(q) for the odd part q of its torsion order. NoSplit therefore certifies that \
the input is not such data.";

pub fn split_json(v: &SplitVerdict) -> (Value, i32) {
    let mut obj = Map::new();
    obj.insert("verdict".into(), json!(v.label()));
    obj.insert("m".into(), int_json(&v.m));
    obj.insert("s".into(), json!(v.s));
    obj.insert("q".into(), int_json(&v.q));
    obj.insert("note".into(), json!(SPLIT_NOTE));
    let exit = match &v.outcome {
        SplitOutcome::Splits { local, y, lift, transformed, reduced } => {
            let local: Vec<Value> = local
                .iter()
                .map(|l| json!({ "p": int_json(&l.prime), "p^r": int_json(&l.prime_power), "y": ints_json(&l.y) }))
                .collect();
            obj.insert("local_solutions".into(), Value::Array(local));
            obj.insert("y".into(), ints_json(y));
            obj.insert("lift".into(), ints_json(lift));
            obj.insert("transformed".into(), triple_json(transformed));
            obj.insert("reduced".into(), triple_json(reduced));
            obj.insert("summand".into(), json!(format!("P^3({})", v.q)));
            EXIT_OK
        }
        SplitOutcome::NoSplit { prime_power } => {
            obj.insert("failing_prime_power".into(), int_json(prime_power));
            EXIT_NEGATIVE
        }
        SplitOutcome::NoOddPart => EXIT_OK,
    };
    (Value::Object(obj), exit)
}

pub fn split_triple(t: &CupTriple) -> CmdOutput {
    match decide_split(t) {
        Ok(v) => {
            let (value, exit) = split_json(&v);
            CmdOutput::new(value, exit)
        }
        Err(e) => CmdOutput::from_decide_error(&e),
    }
}

pub fn cmd_split(path: &Path) -> CmdOutput {
    match read(path).and_then(|t| parse_triple(&t)) {
        Ok(t) => split_triple(&t),
        Err(e) => CmdOutput::from_input_error(&e),
    }
}

pub fn equiv_json(v: &EquivVerdict) -> (Value, i32) {
    let mut obj = Map::new();
    obj.insert("verdict".into(), json!(v.label()));
    obj.insert("homotopy_conclusive".into(), json!(v.homotopy_conclusive));
    let exit = match &v.outcome {
        EquivOutcome::Equivalent { witness } => {
            obj.insert("witness".into(), rep_json(witness));
            EXIT_OK
        }
        EquivOutcome::NotEquivalent { reason } => {
            obj.insert(
                "reason".into(),
                json!({ "invariant": reason.invariant.name(), "left": reason.left, "right": reason.right }),
            );
            EXIT_NEGATIVE
        }
        EquivOutcome::Inconclusive { depth, searched } => {
            obj.insert("depth".into(), json!(depth));
            obj.insert("searched".into(), json!(searched));
            EXIT_INCONCLUSIVE
        }
    };
    (Value::Object(obj), exit)
}

fn n_differs(t1: &CupTriple, t2: &CupTriple) -> Option<CmdOutput> {
    (t1.n() != t2.n()).then(|| {
        let v = json!({
            "verdict": "NotEquivalent",
            "homotopy_conclusive": true,
            "reason": { "invariant": "n differs", "left": t1.n().to_string(), "right": t2.n().to_string() },
        });
        CmdOutput::new(v, EXIT_NEGATIVE)
    })
}

pub fn equiv_triples(t1: &CupTriple, t2: &CupTriple, depth: usize) -> CmdOutput {
    if let Some(out) = n_differs(t1, t2) {
        return out;
    }
    match ring_equiv(t1, t2, depth) {
        Ok(v) => {
            let (value, exit) = equiv_json(&v);
            CmdOutput::new(value, exit)
        }
        Err(e) => CmdOutput::from_decide_error(&e),
    }
}

fn read_two(a: &Path, b: &Path) -> Result<(CupTriple, CupTriple), InputError> {
    Ok((parse_triple(&read(a)?)?, parse_triple(&read(b)?)?))
}

pub fn cmd_equiv(a: &Path, b: &Path, depth: usize) -> CmdOutput {
    match read_two(a, b) {
        Ok((t1, t2)) => equiv_triples(&t1, &t2, depth),
        Err(e) => CmdOutput::from_input_error(&e),
    }
}

/// Brute-force counterpart of [`split_triple`], same JSON shape plus the
/// full solution list.
pub fn oracle_split_triple(t: &CupTriple, budget: u64) -> CmdOutput {
    let (s, q) = split_two_power(t.m());
    let mut obj = Map::new();
    obj.insert("oracle".into(), json!(true));
    obj.insert("m".into(), int_json(t.m()));
    obj.insert("s".into(), json!(s));
    obj.insert("q".into(), int_json(&q));
    if q.is_one() {
        obj.insert("verdict".into(), json!("NoOddPart"));
        return CmdOutput::new(Value::Object(obj), EXIT_OK);
    }
    match brute_force_split(t, &q, budget) {
        Ok(r) => {
            let solvable = r.solvable();
            obj.insert("verdict".into(), json!(if solvable { "Splits" } else { "NoSplit" }));
            obj.insert("solution_count".into(), json!(r.solutions.len()));
            obj.insert("solutions".into(), Value::Array(r.solutions.iter().map(|y| ints_json(y)).collect()));
            CmdOutput::new(Value::Object(obj), if solvable { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Err(e) => CmdOutput::from_decide_error(&e),
    }
}

pub fn oracle_equiv_triples(t1: &CupTriple, t2: &CupTriple, depth: usize, budget: u64) -> CmdOutput {
    if let Some(out) = n_differs(t1, t2) {
        return out;
    }
    match brute_force_equiv(t1, t2, depth, budget) {
        Ok(v) => {
            let (mut value, exit) = equiv_json(&v);
            value["oracle"] = json!(true);
            CmdOutput::new(value, exit)
        }
        Err(e) => CmdOutput::from_decide_error(&e),
    }
}

/// Sample moduli for the agreement sweep.
pub const SWEEP_MODULI: [u64; 7] = [3, 5, 6, 9, 12, 15, 45];

/// A random symmetric triple with `n ∈ 1..=3`, entries of `A` in `[-10, 10]`,
/// and `m` drawn from [`SWEEP_MODULI`].
pub fn random_triple(rng: &mut impl Rng) -> CupTriple {
    let n = rng.gen_range(1..=3usize);
    let m = SWEEP_MODULI[rng.gen_range(0..SWEEP_MODULI.len())];
    let mut a = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = BigInt::from(rng.gen_range(-10i64..=10));
            a[(i, j)] = v.clone();
            a[(j, i)] = v;
        }
    }
    let b = (0..n).map(|_| BigInt::from(rng.gen_range(0..m))).collect();
    let c = BigInt::from(rng.gen_range(0..m));
    make_triple(n, BigInt::from(m), a, Some(b), Some(c)).expect("well-formed")
}

/// Compares [`decide_split`] against [`brute_force_split`] on `count` seeded
/// random triples.
pub fn oracle_sweep(count: usize, seed: u64, budget: u64) -> CmdOutput {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut disagreements = Vec::new();
    let mut skipped = 0usize;
    for _ in 0..count {
        let t = random_triple(&mut rng);
        let fast = match decide_split(&t) {
            Ok(v) => v,
            Err(e) => return CmdOutput::from_decide_error(&e),
        };
        let slow = match brute_force_split(&t, &fast.q, budget) {
            Ok(r) => r,
            Err(DecideError::BudgetExceeded { .. }) => {
                skipped += 1;
                continue;
            }
            Err(e) => return CmdOutput::from_decide_error(&e),
        };
        let agree = match &fast.outcome {
            SplitOutcome::Splits { y, .. } => slow.solutions.contains(y),
            SplitOutcome::NoSplit { .. } => !slow.solvable(),
            SplitOutcome::NoOddPart => true,
        };
        if !agree {
            disagreements.push(triple_json(&t));
        }
    }
    let exit = if disagreements.is_empty() { EXIT_OK } else { EXIT_NEGATIVE };
    let value = json!({
        "seed": seed,
        "checked": count - skipped,
        "skipped_over_budget": skipped,
        "disagreements": disagreements,
    });
    CmdOutput::new(value, exit)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "torhom",
    version,
    about = "Invariants, Moore-space splittings and cup-product equivalence for 4-dimensional toric orbifolds"
)]
pub struct Cli {
    /// Output format
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lens orders, torsion, cohomology and vertex data of a fan file
    Analyze { fan: PathBuf },
    /// Decide whether a triple splits off the odd-torsion Moore space
    Split {
        triple: PathBuf,
        /// Accepted for symmetry with `equiv`; the splitting decision is exact
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Decide cup-product equivalence of two triples
    Equiv {
        a: PathBuf,
        b: PathBuf,
        /// Maximal word length of the GL_n(Z) search
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Brute-force cross-checks
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Exhaustive search over all candidate solutions of the splitting system
    Split {
        triple: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Exhaustive search over (W, y, z) without invariant shortcuts
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Compare the splitting solver with brute force on seeded random triples
    Sweep {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

pub fn execute(cli: &Cli) -> CmdOutput {
    match &cli.command {
        Command::Analyze { fan } => cmd_analyze(fan),
        Command::Split { triple, .. } => cmd_split(triple),
        Command::Equiv { a, b, depth } => cmd_equiv(a, b, *depth),
        Command::Oracle { which } => match which {
            OracleCommand::Split { triple, budget } => match read(triple).and_then(|t| parse_triple(&t)) {
                Ok(t) => oracle_split_triple(&t, *budget),
                Err(e) => CmdOutput::from_input_error(&e),
            },
            OracleCommand::Equiv { a, b, depth, budget } => match read_two(a, b) {
                Ok((t1, t2)) => oracle_equiv_triples(&t1, &t2, *depth, *budget),
                Err(e) => CmdOutput::from_input_error(&e),
            },
            OracleCommand::Sweep { count, seed, budget } => oracle_sweep(*count, *seed, *budget),
        },
    }
}

/// Parses arguments, runs the command, prints the result; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let out = execute(&cli);
    print!("{}", out.render(cli.format));
    out.exit
}
