use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Args;
use rayon::prelude::*;
use serde::Deserialize;
use tenspec::{solve, Certificate, SolveStatus, SolverConfig};

use crate::gen::{build, read_terms, Family, FamilySpec};
use crate::solve::solve_failure;
use crate::{exit, Failure};

pub const DEFAULT_RANDOM_REPS: usize = 5;
pub const DEFAULT_STRUCTURED_REPS: usize = 1;

pub const CSV_HEADER: [&str; 12] = [
    "family",
    "d",
    "n",
    "tau",
    "reps",
    "time_s",
    "iters",
    "V",
    "cert",
    "certified_count",
    "converged",
    "error",
];

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Suite file (TOML).
    pub suite: PathBuf,
    /// Concurrent solves.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Repetitions for random families (cases may override).
    #[arg(long)]
    pub reps: Option<usize>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

/// One `[[case]]` table; `n` and `tau` may be lists, which expand into one
/// row each.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct CaseSpec {
    pub family: String,
    pub d: Option<usize>,
    pub n: Option<OneOrMany<usize>>,
    pub tau: Option<OneOrMany<f64>>,
    pub reps: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    pub zero_frac: Option<f64>,
    #[serde(default)]
    pub negate: bool,
    pub terms: Option<PathBuf>,
    /// Solver keys layered over the suite-wide `[solver]` table.
    pub solver: Option<toml::Table>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Suite {
    pub solver: Option<toml::Table>,
    #[serde(default)]
    pub case: Vec<CaseSpec>,
}

/// A fully resolved CSV row before running.
#[derive(Debug, Clone)]
pub struct Row {
    pub label: String,
    pub spec: FamilySpec,
    pub negate: bool,
    pub cfg: SolverConfig,
    pub reps: usize,
}

/// Result of one solve.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub time_s: f64,
    pub iters: usize,
    pub value: f64,
    pub certificate: Certificate,
    pub converged: bool,
}

pub fn parse_suite(text: &str) -> Result<Suite, String> {
    toml::from_str(text).map_err(|e| e.to_string())
}

fn config_for(
    base: &Option<toml::Table>,
    case: &CaseSpec,
    tau: Option<f64>,
) -> Result<SolverConfig, String> {
    let mut t = base.clone().unwrap_or_default();
    if let Some(over) = &case.solver {
        t.extend(over.clone());
    }
    if let Some(tau) = tau {
        t.insert("tau".into(), toml::Value::Float(tau));
    }
    let text = toml::to_string(&t).map_err(|e| e.to_string())?;
    SolverConfig::from_toml_str(&text).map_err(|e| e.to_string())
}

/// Expands the suite into rows in file order.
pub fn expand(
    suite: &Suite,
    reps_flag: Option<usize>,
    base_dir: &Path,
) -> Result<Vec<Row>, String> {
    let mut rows = Vec::new();
    for (ci, case) in suite.case.iter().enumerate() {
        let at = |m: String| format!("case {}: {m}", ci + 1);
        let family: Family = case.family.parse().map_err(at)?;
        let (d, ns) = if family.is_fixed() {
            (0, vec![0])
        } else {
            let d = case.d.ok_or_else(|| at("missing d".into()))?;
            let ns = case
                .n
                .as_ref()
                .ok_or_else(|| at("missing n".into()))?
                .to_vec();
            (d, ns)
        };
        let taus: Vec<Option<f64>> = match &case.tau {
            Some(t) => t.to_vec().into_iter().map(Some).collect(),
            None => vec![None],
        };
        let reps = case.reps.unwrap_or(if family.is_random() {
            reps_flag.unwrap_or(DEFAULT_RANDOM_REPS)
        } else {
            DEFAULT_STRUCTURED_REPS
        });
        if reps == 0 {
            return Err(at("reps must be at least 1".into()));
        }
        for &n in &ns {
            let mut spec = FamilySpec::new(family, d, n);
            spec.seed = case.seed;
            if let Some(z) = case.zero_frac {
                spec.zero_frac = z;
            }
            if family == Family::Monomials {
                let p = case
                    .terms
                    .as_ref()
                    .ok_or_else(|| at("monomials needs terms".into()))?;
                spec.terms = read_terms(&base_dir.join(p), n).map_err(at)?;
            }
            for &tau in &taus {
                let cfg = config_for(&suite.solver, case, tau).map_err(at)?;
                let label = if case.negate {
                    format!("-{family}")
                } else {
                    family.to_string()
                };
                rows.push(Row {
                    label,
                    spec: spec.clone(),
                    negate: case.negate,
                    cfg,
                    reps,
                });
            }
        }
    }
    Ok(rows)
}

/// Repetition `rep` uses seed `spec.seed + rep` for random families.
pub fn run_one(row: &Row, rep: usize) -> Result<Outcome, String> {
    let mut spec = row.spec.clone();
    if spec.family.is_random() {
        spec.seed = spec.seed.wrapping_add(rep as u64);
    }
    let mut a = build(&spec)?;
    if row.negate {
        a = -&a;
    }
    let t0 = Instant::now();
    let r = solve(&a, &row.cfg).map_err(|e| solve_failure(e).message)?;
    Ok(Outcome {
        time_s: t0.elapsed().as_secs_f64(),
        iters: r.iterations,
        value: r.eigenvalue,
        certificate: r.certificate,
        converged: r.status == SolveStatus::Converged,
    })
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    })
}

/// Summarizes the repetitions of one row into CSV fields.
pub fn summarize(row: &Row, results: &[Result<Outcome, String>]) -> Vec<String> {
    let ok: Vec<&Outcome> = results.iter().filter_map(|r| r.as_ref().ok()).collect();
    let errors: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    let fmt = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
    let cert = [
        Certificate::GlobalCertified,
        Certificate::StationaryOnly,
        Certificate::Degenerate,
    ]
    .into_iter()
    .map(|c| (c, ok.iter().filter(|o| o.certificate == c).count()))
    .filter(|(_, k)| *k > 0)
    .max_by_key(|(_, k)| *k)
    .map(|(c, _)| c.as_str())
    .unwrap_or("");
    let (d, n) = if row.spec.family.is_fixed() {
        tenspec::gen::example(match row.spec.family {
            Family::Example(k) => k,
            _ => unreachable!(),
        })
        .map(|t| (t.order(), t.dim()))
        .unwrap_or((0, 0))
    } else {
        (row.spec.d, row.spec.n)
    };
    let error = match errors.first() {
        Some(e) => format!("{}/{} failed: {e}", errors.len(), results.len()),
        None => String::new(),
    };
    vec![
        row.label.clone(),
        d.to_string(),
        n.to_string(),
        format!("{}", row.cfg.tau_for(d)),
        row.reps.to_string(),
        fmt(median(ok.iter().map(|o| o.time_s).collect())),
        fmt(median(ok.iter().map(|o| o.iters as f64).collect())),
        fmt(median(ok.iter().map(|o| o.value).collect())),
        cert.to_string(),
        ok.iter()
            .filter(|o| o.certificate == Certificate::GlobalCertified)
            .count()
            .to_string(),
        ok.iter().filter(|o| o.converged).count().to_string(),
        error,
    ]
}

/// Runs every row with at most `jobs` concurrent solves; rows come back in
/// suite order.
pub fn run_rows(rows: &[Row], jobs: usize) -> Result<Vec<Vec<String>>, String> {
    let tasks: Vec<(usize, usize)> = rows
        .iter()
        .enumerate()
        .flat_map(|(i, r)| (0..r.reps).map(move |k| (i, k)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| e.to_string())?;
    let results: Vec<Result<Outcome, String>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(i, k)| run_one(&rows[i], k))
            .collect()
    });
    let mut out = Vec::with_capacity(rows.len());
    let mut start = 0;
    for row in rows {
        out.push(summarize(row, &results[start..start + row.reps]));
        start += row.reps;
    }
    Ok(out)
}

pub fn write_csv<W: Write>(w: W, rows: &[Vec<String>]) -> Result<(), String> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(CSV_HEADER).map_err(|e| e.to_string())?;
    for r in rows {
        wr.write_record(r).map_err(|e| e.to_string())?;
    }
    wr.flush().map_err(|e| e.to_string())
}

pub fn run(args: &BenchArgs, out: &mut dyn Write, _err: &mut dyn Write) -> Result<i32, Failure> {
    let text = std::fs::read_to_string(&args.suite)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.suite.display())))?;
    let suite =
        parse_suite(&text).map_err(|e| Failure::usage(format!("{}: {e}", args.suite.display())))?;
    let base = args.suite.parent().unwrap_or(Path::new("."));
    let rows = expand(&suite, args.reps, base).map_err(Failure::usage)?;
    let table = run_rows(&rows, args.jobs).map_err(|e| Failure::new(exit::FAILURE, e))?;
    let written = match &args.out {
        Some(p) => std::fs::File::create(p)
            .map_err(|e| format!("{}: {e}", p.display()))
            .and_then(|f| write_csv(f, &table)),
        None => write_csv(out, &table),
    };
    written.map_err(|e| Failure::new(exit::FAILURE, e))?;
    Ok(exit::OK)
}
