use std::process::ExitCode;

use billiard_monodromy::construct::{
    self, ClassificationReport, CompositeWitness, ConstructError, DEFAULT_COMPOSITE_CAP,
};
use billiard_monodromy::exactla::{circulant, smith_normal_form, LinalgError};
use billiard_monodromy::monodromy::group_of;
use billiard_monodromy::oracle::{self, Caps, OracleError, StructureReport, DEFAULT_GROUP_CAP, DEFAULT_SPAN_CAP};
use billiard_monodromy::polyfp::{self, PolyError};
use billiard_monodromy::polygon::{enumerate_algebraic, enumerate_geometric, PolygonError, PolygonTuple};
use billiard_monodromy::serde_int;
use billiard_monodromy::{GroupDescriptor, Int, IntMatrix};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

const CAP_ENV: &str = "BILLIARD_MONODROMY_MAX_CAP";

#[derive(Parser)]
#[command(name = "billiard-monodromy", version, about = "Monodromy groups of rational billiards surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Print one JSON document instead of text
    #[arg(long)]
    json: bool,
    /// Largest column span the oracle may enumerate
    #[arg(long)]
    max_span: Option<usize>,
    /// Largest permutation group (or search space) that may be enumerated
    #[arg(long)]
    max_group: Option<usize>,
}

#[derive(Args)]
struct TupleArg {
    /// Modulus n
    #[arg(long)]
    n: u64,
    /// Comma-separated entries, e.g. 2,2,2,4
    #[arg(long, value_parser = parse_list)]
    tuple: List,
}

#[derive(Clone, Debug)]
struct List(Vec<u64>);

fn parse_list(s: &str) -> Result<List, String> {
    s.split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|e| format!("bad entry {x:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(List)
}

#[derive(Subcommand)]
enum Command {
    /// Monodromy group of a tuple
    Group {
        #[command(flatten)]
        tuple: TupleArg,
        /// Cross-check against the brute-force permutation closure
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Smith normal form of the circulant of a tuple, or of a matrix
    Snf {
        #[arg(long, required_unless_present = "matrix")]
        n: Option<u64>,
        #[arg(long, value_parser = parse_list, requires = "n", conflicts_with = "matrix")]
        tuple: Option<List>,
        /// Rows separated by ';', entries by ',', e.g. "1,2;3,4"
        #[arg(long, allow_hyphen_values = true)]
        matrix: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Brute-force structural checks of the group
    Verify {
        #[command(flatten)]
        tuple: TupleArg,
        #[command(flatten)]
        common: Common,
    },
    /// Factor x^k - 1 over F_p
    Factor {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        common: Common,
    },
    /// List every k-gon mod n with its group
    Enumerate {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u64,
        /// Algebraic tuples instead of geometric ones
        #[arg(long)]
        algebraic: bool,
        #[command(flatten)]
        common: Common,
    },
    /// All groups of k-gons modulo a prime p > k
    ClassifyPrime {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        common: Common,
    },
    /// All groups of triangles modulo n
    ClassifyTriangle {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        common: Common,
    },
    /// A k-gon mod p whose group is C_p^{k-d} : C_k
    Construct {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        common: Common,
    },
    /// CRT-combine two tuples with coprime moduli
    Combine {
        #[arg(long)]
        n1: u64,
        #[arg(long, value_parser = parse_list)]
        tuple1: List,
        #[arg(long)]
        n2: u64,
        #[arg(long, value_parser = parse_list)]
        tuple2: List,
        #[command(flatten)]
        common: Common,
    },
    /// Reduce a tuple modulo a proper factor of its modulus
    Project {
        #[command(flatten)]
        tuple: TupleArg,
        #[arg(long)]
        n1: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Repeat a tuple to ell entries
    Lift {
        #[command(flatten)]
        tuple: TupleArg,
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether some k-gon mod n has the given translation factors
    Composite {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = parse_list)]
        deltas: List,
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Domain(String),
    Cap(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Cap(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Cap(m) => m,
        }
    }
}

impl From<PolygonError> for Failure {
    fn from(e: PolygonError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<LinalgError> for Failure {
    fn from(e: LinalgError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::Cap(e.to_string())
    }
}

impl From<ConstructError> for Failure {
    fn from(e: ConstructError) -> Self {
        match e {
            ConstructError::CapExceeded { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type Outcome = Result<Output, Failure>;

struct Output {
    text: String,
    json: String,
}

impl Output {
    fn new<T: Serialize>(text: String, value: &T) -> Self {
        Output {
            text,
            json: serde_json::to_string(value).expect("output serializes"),
        }
    }
}

fn caps(common: &Common) -> Caps {
    let env = std::env::var(CAP_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok());
    Caps {
        span: common.max_span.or(env).unwrap_or(DEFAULT_SPAN_CAP),
        group: common.max_group.or(env).unwrap_or(DEFAULT_GROUP_CAP),
    }
}

fn tuple(n: u64, entries: &[u64]) -> Result<PolygonTuple, Failure> {
    Ok(PolygonTuple::geometric(entries.to_vec(), n)
        .or_else(|_| PolygonTuple::algebraic(entries.to_vec(), n))?)
}

fn group_line(g: &GroupDescriptor) -> String {
    format!("{g}, order {}", g.order())
}

#[derive(Serialize, Deserialize)]
struct OracleSummary {
    order: u64,
    ok: bool,
}

#[derive(Serialize, Deserialize)]
struct GroupOutput {
    tuple: PolygonTuple,
    group: GroupDescriptor,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    oracle: Option<OracleSummary>,
}

fn run_group(t: TupleArg, verify: bool, common: &Common) -> Outcome {
    let t = tuple(t.n, &t.tuple.0)?;
    let group = group_of(&t);
    let mut text = group_line(&group);
    let oracle = if verify {
        let order = oracle::group_order(&oracle::build_permutations(&t), caps(common).group)? as u64;
        let ok = group.order() == &order.into();
        text.push_str(&if ok {
            format!("\noracle: OK (|G|={order})")
        } else {
            format!("\noracle: MISMATCH (|G|={order})")
        });
        Some(OracleSummary { order, ok })
    } else {
        None
    };
    if oracle.as_ref().is_some_and(|o| !o.ok) {
        return Err(Failure::Domain(text));
    }
    Ok(Output::new(text, &GroupOutput { tuple: t, group, oracle }))
}

#[derive(Serialize, Deserialize)]
struct SnfOutput {
    #[serde(with = "serde_int::big_int_list")]
    divisors: Vec<Int>,
    #[serde(with = "serde_int::big_int_rows")]
    u: Vec<Vec<Int>>,
    #[serde(with = "serde_int::big_int_rows")]
    d: Vec<Vec<Int>>,
    #[serde(with = "serde_int::big_int_rows")]
    v: Vec<Vec<Int>>,
}

fn parse_matrix(s: &str) -> Result<IntMatrix, Failure> {
    let rows = s
        .split(';')
        .map(|r| {
            r.split(',')
                .map(|x| x.trim().parse::<Int>().map_err(|e| Failure::Domain(format!("bad entry {x:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntMatrix::from_rows(rows)?)
}

fn run_snf(n: Option<u64>, list: Option<List>, matrix: Option<String>) -> Outcome {
    let a: IntMatrix = match (matrix, list, n) {
        (Some(m), _, _) => parse_matrix(&m)?,
        (None, Some(l), Some(n)) => circulant(&tuple(n, &l.0)?),
        _ => return Err(Failure::Domain("give --matrix, or --n with --tuple".into())),
    };
    let s = smith_normal_form(&a);
    let divisors: Vec<String> = s.divisors.iter().map(|d| d.to_string()).collect();
    let text = format!(
        "divisors: ({})\nU =\n{}D =\n{}V =\n{}",
        divisors.join(","),
        s.u,
        s.d,
        s.v
    );
    let out = SnfOutput {
        divisors: s.divisors.clone(),
        u: s.u.to_rows(),
        d: s.d.to_rows(),
        v: s.v.to_rows(),
    };
    Ok(Output::new(text.trim_end().to_string(), &out))
}

fn run_verify(t: TupleArg, common: &Common) -> Outcome {
    let t = tuple(t.n, &t.tuple.0)?;
    let report: StructureReport = oracle::check_structure(&t, caps(common))?;
    let text = report.to_string().trim_end().to_string();
    if !report.all_passed() {
        return Err(Failure::Domain(text));
    }
    Ok(Output::new(text, &report))
}

#[derive(Serialize, Deserialize)]
struct FactorJson {
    coeffs: Vec<u64>,
    multiplicity: u32,
}

#[derive(Serialize, Deserialize)]
struct FactorOutput {
    k: usize,
    p: u64,
    factors: Vec<FactorJson>,
}

fn run_factor(k: usize, p: u64) -> Outcome {
    let factors = polyfp::factor_xk_minus_1(k, p)?;
    let parts: Vec<String> = factors
        .iter()
        .map(|(g, m)| {
            let base = if g.coeffs().iter().filter(|&&c| c != 0).count() > 1 {
                format!("({g})")
            } else {
                g.to_string()
            };
            if *m > 1 { format!("{base}^{m}") } else { base }
        })
        .collect();
    let text = format!("{} (mod {p})", parts.join(" "));
    let out = FactorOutput {
        k,
        p,
        factors: factors
            .iter()
            .map(|(g, m)| FactorJson { coeffs: g.coeffs().to_vec(), multiplicity: *m })
            .collect(),
    };
    Ok(Output::new(text, &out))
}

#[derive(Serialize, Deserialize)]
struct Entry {
    tuple: PolygonTuple,
    group: GroupDescriptor,
}

fn run_enumerate(k: usize, n: u64, algebraic: bool, common: &Common) -> Outcome {
    let size = (n as u128).checked_pow(k.saturating_sub(1) as u32).unwrap_or(u128::MAX);
    let cap = caps(common).group;
    if size > cap as u128 {
        return Err(Failure::Cap(format!("{n}^{} candidates exceed the cap {cap}", k.saturating_sub(1))));
    }
    let tuples = if algebraic { enumerate_algebraic(k, n) } else { enumerate_geometric(k, n) };
    let entries: Vec<Entry> = tuples
        .into_iter()
        .map(|t| Entry { group: group_of(&t), tuple: t })
        .collect();
    let text = entries
        .iter()
        .map(|e| format!("{}  {}", e.tuple, group_line(&e.group)))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Output::new(text, &entries))
}

fn classification_text(r: &ClassificationReport) -> String {
    let mut lines = Vec::new();
    for w in &r.witnesses {
        lines.push(format!("{}  witness {}", group_line(&w.group), w.tuple));
    }
    for e in &r.excluded {
        lines.push(format!("excluded: {} ({})", e.group, e.rule));
    }
    lines.join("\n")
}

fn run_classify_prime(k: usize, p: u64) -> Outcome {
    let r = construct::classify_prime(k, p)?;
    Ok(Output::new(classification_text(&r), &r))
}

fn run_classify_triangle(n: u64) -> Outcome {
    let r = construct::classify_triangles(n)?;
    Ok(Output::new(classification_text(&r), &r))
}

fn run_construct(k: usize, p: u64, d: usize) -> Outcome {
    let t = construct::construct_prime_case(k, p, d)?;
    let group = group_of(&t);
    let text = format!("{t}\n{}", group_line(&group));
    Ok(Output::new(text, &Entry { tuple: t, group }))
}

fn tuple_output(t: PolygonTuple) -> Output {
    let group = group_of(&t);
    let text = format!("{t}\n{}", group_line(&group));
    Output::new(text, &Entry { tuple: t, group })
}

fn run_combine(n1: u64, t1: List, n2: u64, t2: List) -> Outcome {
    let a = PolygonTuple::algebraic(t1.0, n1)?;
    let b = PolygonTuple::algebraic(t2.0, n2)?;
    let c = if a.k() == b.k() {
        construct::combine_crt(&a, &b)?
    } else {
        construct::combine_coprime_k(&a, &b)?
    };
    Ok(tuple_output(c))
}

fn run_project(t: TupleArg, n1: u64) -> Outcome {
    let t = PolygonTuple::algebraic(t.tuple.0, t.n)?;
    Ok(tuple_output(construct::project(&t, n1)?))
}

fn run_lift(t: TupleArg, ell: usize) -> Outcome {
    let t = PolygonTuple::algebraic(t.tuple.0, t.n)?;
    Ok(tuple_output(construct::lift(&t, ell)?))
}

fn run_composite(k: usize, n: u64, deltas: List, common: &Common) -> Outcome {
    let env = std::env::var(CAP_ENV).ok().and_then(|v| v.trim().parse::<u64>().ok());
    let cap = common.max_group.map(|c| c as u64).or(env).unwrap_or(DEFAULT_COMPOSITE_CAP);
    let w: CompositeWitness = construct::composite_feasible(k, n, &deltas.0, cap)?;
    let text = format!("feasible: {}\nwitness {}", group_line(&w.group), w.witness);
    Ok(Output::new(text, &w))
}

fn dispatch(command: Command) -> (bool, Outcome) {
    match command {
        Command::Group { tuple, verify, common } => (common.json, run_group(tuple, verify, &common)),
        Command::Snf { n, tuple, matrix, common } => (common.json, run_snf(n, tuple, matrix)),
        Command::Verify { tuple, common } => (common.json, run_verify(tuple, &common)),
        Command::Factor { k, p, common } => (common.json, run_factor(k, p)),
        Command::Enumerate { k, n, algebraic, common } => (common.json, run_enumerate(k, n, algebraic, &common)),
        Command::ClassifyPrime { k, p, common } => (common.json, run_classify_prime(k, p)),
        Command::ClassifyTriangle { n, common } => (common.json, run_classify_triangle(n)),
        Command::Construct { k, p, d, common } => (common.json, run_construct(k, p, d)),
        Command::Combine { n1, tuple1, n2, tuple2, common } => (common.json, run_combine(n1, tuple1, n2, tuple2)),
        Command::Project { tuple, n1, common } => (common.json, run_project(tuple, n1)),
        Command::Lift { tuple, ell, common } => (common.json, run_lift(tuple, ell)),
        Command::Composite { k, n, deltas, common } => (common.json, run_composite(k, n, deltas, &common)),
    }
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    error: &'a str,
    code: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    let (json, outcome) = dispatch(cli.command);
    match outcome {
        Ok(out) => {
            println!("{}", if json { out.json } else { out.text });
            ExitCode::SUCCESS
        }
        Err(f) => {
            if json {
                let body = ErrorJson { error: f.message(), code: f.code() };
                println!("{}", serde_json::to_string(&body).expect("error serializes"));
            } else {
                eprintln!("error: {}", f.message());
            }
            ExitCode::from(f.code())
        }
    }
}

