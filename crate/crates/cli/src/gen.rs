use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use tenspec::tensor::write_tnsr;
use tenspec::{gen, DenseTensor, TnsrLayout};

use crate::{exit, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Hilbert,
    Log,
    Arctan,
    Fraction,
    SparseNonneg,
    Gaussian,
    Monomials,
    /// One of the five fixed small examples.
    Example(usize),
}

impl Family {
    pub fn is_random(self) -> bool {
        matches!(self, Family::SparseNonneg | Family::Gaussian)
    }

    /// Fixed examples carry their own order and dimension.
    pub fn is_fixed(self) -> bool {
        matches!(self, Family::Example(_))
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "hilbert" => Family::Hilbert,
            "log" => Family::Log,
            "arctan" => Family::Arctan,
            "fraction" => Family::Fraction,
            "sparse-nonneg" => Family::SparseNonneg,
            "gaussian" => Family::Gaussian,
            "monomials" => Family::Monomials,
            _ => match s.strip_prefix("example").and_then(|k| k.parse().ok()) {
                Some(k @ 1..=5) => Family::Example(k),
                _ => {
                    return Err(format!(
                        "unknown family `{s}` (expected hilbert, log, arctan, fraction, \
                         sparse-nonneg, gaussian, monomials, example1..example5)"
                    ))
                }
            },
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Hilbert => f.write_str("hilbert"),
            Family::Log => f.write_str("log"),
            Family::Arctan => f.write_str("arctan"),
            Family::Fraction => f.write_str("fraction"),
            Family::SparseNonneg => f.write_str("sparse-nonneg"),
            Family::Gaussian => f.write_str("gaussian"),
            Family::Monomials => f.write_str("monomials"),
            Family::Example(k) => write!(f, "example{k}"),
        }
    }
}

/// Everything needed to build one tensor.
#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub family: Family,
    pub d: usize,
    pub n: usize,
    pub seed: u64,
    pub zero_frac: f64,
    pub terms: Vec<(Vec<usize>, f64)>,
}

impl FamilySpec {
    pub fn new(family: Family, d: usize, n: usize) -> Self {
        Self {
            family,
            d,
            n,
            seed: 0,
            zero_frac: 0.9,
            terms: Vec::new(),
        }
    }
}

pub fn build(spec: &FamilySpec) -> Result<DenseTensor, String> {
    let (d, n) = (spec.d, spec.n);
    if !spec.family.is_fixed() && (d < 2 || n < 1) {
        return Err(format!("need d >= 2 and n >= 1 (got d={d}, n={n})"));
    }
    let r = match spec.family {
        Family::Hilbert => gen::hilbert(d, n),
        Family::Log => gen::log_tensor(d, n),
        Family::Arctan => gen::arctan_tensor(d, n),
        Family::Fraction => gen::fraction_tensor(d, n),
        Family::SparseNonneg => gen::random_sparse_nonneg(d, n, spec.zero_frac, spec.seed),
        Family::Gaussian => gen::random_gaussian_sym(d, n, spec.seed),
        Family::Monomials => gen::from_monomials(d, n, &spec.terms),
        Family::Example(k) => return gen::example(k).ok_or_else(|| format!("no example {k}")),
    };
    r.map_err(|e| e.to_string())
}

/// Reads monomial terms, one per line: `coeff e_1 … e_n`. Blank lines and
/// `#` comments are skipped.
pub fn read_terms(path: &Path, n: usize) -> Result<Vec<(Vec<usize>, f64)>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut terms = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = |m: String| format!("{}:{}: {m}", path.display(), i + 1);
        let mut toks = line.split_whitespace();
        let coeff: f64 = toks
            .next()
            .unwrap_or_default()
            .parse()
            .map_err(|_| at("invalid coefficient".into()))?;
        let alpha: Vec<usize> = toks
            .map(|t| t.parse().map_err(|_| at(format!("invalid exponent `{t}`"))))
            .collect::<Result<_, _>>()?;
        if alpha.len() != n {
            return Err(at(format!("expected {n} exponents, found {}", alpha.len())));
        }
        terms.push((alpha, coeff));
    }
    Ok(terms)
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// hilbert, log, arctan, fraction, sparse-nonneg, gaussian, monomials, example1..example5
    pub family: String,
    /// `<d> <n> [out]` for parametric families, `[out]` for the examples.
    #[arg(num_args = 0..=3)]
    pub params: Vec<String>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    /// Seed for the random families.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fraction of orbits zeroed by sparse-nonneg.
    #[arg(long, default_value_t = 0.9)]
    pub zero_frac: f64,
    /// Monomial file for the monomials family.
    #[arg(long)]
    pub terms: Option<PathBuf>,
    #[arg(long, default_value = "dense")]
    pub layout: TnsrLayout,
}

fn parse_usize(s: &str, what: &str) -> Result<usize, Failure> {
    s.parse()
        .map_err(|_| Failure::usage(format!("invalid {what} `{s}`")))
}

pub fn run(args: &GenArgs, out: &mut dyn Write, _err: &mut dyn Write) -> Result<i32, Failure> {
    let family: Family = args.family.parse().map_err(Failure::usage)?;
    let (mut spec, rest) = if family.is_fixed() {
        (FamilySpec::new(family, 0, 0), &args.params[..])
    } else {
        if args.params.len() < 2 {
            return Err(Failure::usage(format!("{family} needs <d> <n>")));
        }
        let d = parse_usize(&args.params[0], "order")?;
        let n = parse_usize(&args.params[1], "dimension")?;
        (FamilySpec::new(family, d, n), &args.params[2..])
    };
    if rest.len() > 1 {
        return Err(Failure::usage("too many positional arguments"));
    }
    let path = match (rest.first(), &args.out) {
        (Some(_), Some(_)) => return Err(Failure::usage("output given twice")),
        (Some(p), None) => Some(PathBuf::from(p)),
        (None, o) => o.clone(),
    };
    spec.seed = args.seed;
    spec.zero_frac = args.zero_frac;
    if family == Family::Monomials {
        let p = args
            .terms
            .as_ref()
            .ok_or_else(|| Failure::usage("monomials needs --terms <file>"))?;
        spec.terms = read_terms(p, spec.n).map_err(Failure::usage)?;
    }
    if family == Family::SparseNonneg && !(0.0..1.0).contains(&spec.zero_frac) {
        return Err(Failure::usage(format!(
            "zero-frac must lie in [0, 1), got {}",
            spec.zero_frac
        )));
    }
    let tensor = build(&spec).map_err(Failure::usage)?;

    let mut comments = vec![format!(
        "family={family} d={} n={}",
        tensor.order(),
        tensor.dim()
    )];
    if family.is_random() {
        comments.push(format!("seed={}", spec.seed));
    }
    if family == Family::SparseNonneg {
        comments.push(format!("zero-frac={}", spec.zero_frac));
    }
    let written = match path {
        Some(p) => std::fs::File::create(&p)
            .map_err(|e| e.to_string())
            .and_then(|f| {
                write_tnsr(std::io::BufWriter::new(f), &tensor, args.layout, &comments)
                    .map_err(|e| e.to_string())
            })
            .map_err(|e| format!("{}: {e}", p.display())),
        None => write_tnsr(out, &tensor, args.layout, &comments).map_err(|e| e.to_string()),
    };
    written.map_err(|e| Failure::new(exit::FAILURE, e))?;
    Ok(exit::OK)
}
