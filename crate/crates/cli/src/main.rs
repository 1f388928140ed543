//! `brickwork`: command-line front end.
//!
//! Every command prints one self-describing document carrying the resolved
//! configuration and the crate version. Exit codes: 0 success, 1 failed
//! verification, 2 invalid input, 3 cap or validity-window limit,
//! 4 calibration failure.

mod matrices;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use brickwork::characters::CharacterTable;
use brickwork::exact::format_rational;
use brickwork::hurwitz::{hurwitz_number_detailed, BranchProfile};
use brickwork::mc::quadrature::normal_second_moment_exact;
use brickwork::mc::{
    default_workers, gaussian_schur_average, mc_gaussian_schur, mc_moment, mc_normal_second_moment, mc_schur_split,
    mc_weingarten_monomial, normal_second_moment_quadrature, wick_product_moment, EnsembleConfig, EnsembleKind,
    MCEstimate, TraceWord,
};
use brickwork::oracle::Oracle;
use brickwork::partition::parse_profile_list;
use brickwork::schur::schur_from_power_sums;
use brickwork::series::{
    calibrate_normalization, coefficient_table, normal_proportionality, ModelSpec, Repr, SeriesCoefficient, Source,
};
use brickwork::verify::{run_suite, split_matrices, Suite, VerifyOptions, SIGMAS};
use brickwork::weingarten::{monomial_integral, weingarten_value, MonomialSpec};
use brickwork::{ComplexPowerSums, ErrorKind, ExactPowerSums, Partition, VERSION};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

impl From<brickwork::Error> for CliError {
    fn from(e: brickwork::Error) -> Self {
        let code = match e.kind() {
            ErrorKind::Validation => 2,
            ErrorKind::Limit => 3,
            ErrorKind::Calibration => 4,
        };
        CliError { code, message: e.to_string() }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "brickwork", version, about = "Exact Hurwitz numbers, Weingarten calculus and random-matrix checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; `verify` defaults to a pretty table, everything else to JSON.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the document here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for Monte Carlo and λ-sums (default: all cores; 1 gives canonical streams).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Hurwitz number from the Frobenius formula.
    Hurwitz {
        /// Profiles separated by `;`, parts by `,`, e.g. "2;1,1;2".
        #[arg(long)]
        profiles: String,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        euler: i64,
    },
    /// Brute-force factorization count in S_d.
    Oracle {
        #[arg(long, conflicts_with = "profiles")]
        kappa: Option<String>,
        #[arg(long, conflicts_with = "profiles")]
        mu: Option<String>,
        /// Copies of the brick class (2^k).
        #[arg(long, default_value_t = 0)]
        bricks: usize,
        /// A general profile list instead of κ, μ and bricks.
        #[arg(long)]
        profiles: Option<String>,
        #[arg(long, default_value_t = brickwork::oracle::DEFAULT_CAP)]
        cap: usize,
    },
    /// Weingarten function Wg_N(μ).
    Wg {
        #[arg(long)]
        mu: String,
        #[arg(long = "N")]
        size: usize,
    },
    /// Exact Haar integral of a U/U† monomial (1-based indices).
    Uintegral {
        #[arg(long, default_value = "")]
        a: String,
        #[arg(long, default_value = "")]
        b: String,
        #[arg(long, default_value = "")]
        ap: String,
        #[arg(long, default_value = "")]
        bp: String,
        #[arg(long = "N")]
        size: usize,
    },
    /// Character table of S_d.
    Characters {
        #[arg(long)]
        degree: usize,
    },
    /// Schur function at a power-sum point, e.g. --p "1:1,2:1/2".
    Schur {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        p: String,
    },
    /// Monte Carlo estimators.
    Mc {
        #[command(subcommand)]
        command: McCommand,
    },
    /// Perturbation-series coefficient tables.
    Series {
        #[arg(long, value_enum, default_value_t = ModelArg::Hermitian)]
        model: ModelArg,
        /// Number of random factors.
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long = "N")]
        size: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = ReprArg::Both)]
        repr: ReprArg,
        /// Largest k used to calibrate the exponent rule.
        #[arg(long, default_value_t = 2)]
        calibrate_k: usize,
        /// Matrix sizes used for calibration.
        #[arg(long, value_delimiter = ',', default_value = "3,4,5")]
        calibrate_sizes: Vec<usize>,
        /// JSON array of N `[re, im]` eigenvalues of C = C_n⋯C_1.
        #[arg(long)]
        spectrum_file: Option<PathBuf>,
        /// Compute terms with 2k > N anyway and label them.
        #[arg(long)]
        ignore_window: bool,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run an acceptance suite (or `all`).
    Verify {
        suite: String,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum McCommand {
    /// E[∏ tr (H₁C₁⋯H_nC_n)^{μ_i}] over independent GUE draws.
    Moment {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long = "N")]
        size: usize,
        #[arg(long)]
        mu: String,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// JSON object {"C": [matrix or null, …]} with one entry per slot.
        #[arg(long)]
        source_file: Option<PathBuf>,
    },
    /// ∫ s_λ(UAU†B) d*U against s_λ(A) s_λ(B) / s_λ(I).
    #[command(name = "prop1")]
    #[serde(rename = "prop1")]
    Split {
        #[arg(long)]
        lambda: String,
        #[arg(long = "N")]
        size: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// JSON object {"A": matrix, "B": matrix}; random matrices when absent.
        #[arg(long)]
        matrix_file: Option<PathBuf>,
    },
    /// Haar average of a U/U† monomial.
    Monomial {
        #[arg(long, default_value = "")]
        a: String,
        #[arg(long, default_value = "")]
        b: String,
        #[arg(long, default_value = "")]
        ap: String,
        #[arg(long, default_value = "")]
        bp: String,
        #[arg(long = "N")]
        size: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// E[s_λ(H)] over GUE for each λ in a `;`-separated list.
    Schur {
        #[arg(long)]
        lambda: String,
        #[arg(long = "N")]
        size: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// E[tr MM†] over the normal-matrix ensemble.
    Normal {
        #[arg(long = "N")]
        size: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModelArg {
    Hermitian,
    Normal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ReprArg {
    Moment,
    Schur,
    Hurwitz,
    Source,
    /// Schur and Hurwitz.
    Both,
    /// Moment, Schur, Hurwitz and source rows.
    All,
}

impl ReprArg {
    fn reprs(self) -> Vec<Repr> {
        match self {
            ReprArg::Moment => vec![Repr::Moment],
            ReprArg::Schur => vec![Repr::Schur],
            ReprArg::Hurwitz => vec![Repr::Hurwitz],
            ReprArg::Source => vec![Repr::Source],
            ReprArg::Both => vec![Repr::Schur, Repr::Hurwitz],
            ReprArg::All => vec![Repr::Moment, Repr::Schur, Repr::Hurwitz, Repr::Source],
        }
    }
}

/// What a command produced: a JSON body plus optional CSV rows and an exit code.
struct Outcome {
    body: Map<String, Value>,
    csv: Option<Vec<Vec<String>>>,
    text: Option<String>,
    code: u8,
}

impl Outcome {
    fn json(body: Value) -> Self {
        let body = match body {
            Value::Object(m) => m,
            other => Map::from_iter([("value".to_string(), other)]),
        };
        Outcome { body, csv: None, text: None, code: 0 }
    }
}

fn parse_partition(s: &str) -> CliResult<Partition> {
    s.parse().map_err(CliError::from)
}

fn parse_indices(s: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|e| CliError::validation(format!("index {t:?}: {e}"))))
        .collect()
}

fn monomial(a: &str, b: &str, ap: &str, bp: &str, n: usize) -> CliResult<MonomialSpec> {
    Ok(MonomialSpec::new(n, parse_indices(a)?, parse_indices(b)?, parse_indices(ap)?, parse_indices(bp)?)?)
}

fn check_size(n: usize) -> CliResult<()> {
    if n == 0 {
        return Err(CliError::validation("N must be at least 1"));
    }
    Ok(())
}

fn estimate_json(e: &MCEstimate, exact: Option<Complex64>) -> Value {
    let mut v = json!({
        "mean": [e.mean.re, e.mean.im],
        "std_error": e.std_error,
        "samples": e.samples,
        "seed": e.seed,
    });
    if let Some(x) = exact {
        v["exact"] = json!([x.re, x.im]);
        v["z_score"] = json!(e.z_score(x));
        v["within_tolerance"] = json!(e.within(x, SIGMAS));
        v["tolerance"] = json!(format!("{SIGMAS} SE"));
    }
    v
}

fn rational_c(r: &num_rational::BigRational) -> Complex64 {
    Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    let workers = cli.workers.unwrap_or_else(default_workers).max(1);
    match &cli.command {
        Command::Hurwitz { profiles, euler } => {
            let profile = BranchProfile::new(parse_profile_list(profiles)?, *euler)?;
            let h = hurwitz_number_detailed(&profile)?;
            Ok(Outcome::json(json!({
                "value": format_rational(&h.value),
                "degree": h.degree,
                "terms": h.terms,
            })))
        }
        Command::Oracle { kappa, mu, bricks, profiles, cap } => {
            let oracle = Oracle::with_cap(*cap)?;
            let count = match (profiles, kappa, mu) {
                (Some(list), _, _) => oracle.count_factorizations(&parse_profile_list(list)?)?,
                (None, Some(k), Some(m)) => {
                    oracle.count_brickwork(&parse_partition(k)?, &parse_partition(m)?, *bricks)?
                }
                _ => return Err(CliError::validation("give --profiles, or both --kappa and --mu")),
            };
            let value = format_rational(&count.over_factorial());
            Ok(Outcome::json(json!({
                "value": value,
                "count_over_factorial": value,
                "raw_count": count.raw_count,
                "degree": count.degree,
            })))
        }
        Command::Wg { mu, size } => {
            let v = weingarten_value(&parse_partition(mu)?, *size)?;
            Ok(Outcome::json(json!({ "value": format_rational(&v) })))
        }
        Command::Uintegral { a, b, ap, bp, size } => {
            let m = monomial(a, b, ap, bp, *size)?;
            let v = monomial_integral(&m)?;
            let (ba, bb) = brickwork::weingarten::balance_numbers(&m);
            Ok(Outcome::json(json!({ "value": format_rational(&v), "balance": [ba, bb] })))
        }
        Command::Characters { degree } => characters(*degree),
        Command::Schur { lambda, p } => {
            let lambda = parse_partition(lambda)?;
            match ExactPowerSums::parse(p) {
                Ok(spec) => {
                    let v = schur_from_power_sums(&lambda, &spec);
                    Ok(Outcome::json(json!({ "value": format_rational(&v), "exact": true })))
                }
                Err(_) => {
                    let spec = ComplexPowerSums::parse(p)?;
                    let v = schur_from_power_sums(&lambda, &spec);
                    Ok(Outcome::json(json!({ "value": [v.re, v.im], "exact": false })))
                }
            }
        }
        Command::Mc { command } => run_mc(command, workers),
        Command::Series {
            model,
            n,
            size,
            max_degree,
            repr,
            calibrate_k,
            calibrate_sizes,
            spectrum_file,
            ignore_window,
            ..
        } => series(
            *model,
            *n,
            *size,
            *max_degree,
            *repr,
            *calibrate_k,
            calibrate_sizes,
            spectrum_file.as_deref(),
            *ignore_window,
        ),
        Command::Verify { suite, samples, seed } => verify(suite, *samples, *seed, cli.workers.unwrap_or(1)),
    }
}

fn characters(degree: usize) -> CliResult<Outcome> {
    const CACHE_VERSION: u32 = 1;
    let cache = std::env::var_os("BRICKWORK_CACHE_DIR")
        .map(PathBuf::from)
        .map(|d| d.join(format!("characters-v{CACHE_VERSION}-{degree}.json")));
    if let Some(path) = &cache {
        if let Ok(text) = std::fs::read_to_string(path) {
            if let Ok(table) = serde_json::from_str::<CharacterTable>(&text) {
                if table.degree == degree {
                    return Ok(Outcome::json(json!({ "table": table, "cache": "hit" })));
                }
            }
        }
    }
    let table = CharacterTable::new(degree);
    let mut status = "disabled";
    if let Some(path) = &cache {
        status = "miss";
        if let Some(dir) = path.parent() {
            let _ = std::fs::create_dir_all(dir);
        }
        if let Ok(text) = serde_json::to_string(&table) {
            if std::fs::write(path, text).is_err() {
                status = "unwritable";
            }
        }
    }
    Ok(Outcome::json(json!({ "table": table, "cache": status })))
}

fn run_mc(command: &McCommand, workers: usize) -> CliResult<Outcome> {
    match command {
        McCommand::Moment { n, size, mu, samples, seed, source_file } => {
            check_size(*size)?;
            if *n == 0 {
                return Err(CliError::validation("n must be at least 1"));
            }
            let mu = parse_partition(mu)?;
            let (word, identity) = match source_file {
                None => (TraceWord::identity(*size, *n), true),
                Some(path) => {
                    let doc = matrices::read(path)?;
                    let list = matrices::field(&doc, "C")
                        .and_then(Value::as_array)
                        .ok_or_else(|| CliError::validation("source file needs a \"C\" array"))?;
                    let sources = list
                        .iter()
                        .map(|v| if v.is_null() { Ok(None) } else { matrices::matrix(v).map(Some) })
                        .collect::<CliResult<Vec<_>>>()?;
                    if sources.len() != *n {
                        return Err(CliError::validation(format!("expected {n} source slots, got {}", sources.len())));
                    }
                    let identity = sources.iter().all(Option::is_none);
                    (TraceWord::with_sources(*size, sources)?, identity)
                }
            };
            let cfg = EnsembleConfig::new(*size, EnsembleKind::Gue, *seed);
            let est = mc_moment(&word, &mu, *samples, &cfg, workers)?;
            let exact = if identity { Some(wick_product_moment(&mu, *n, *size)?) } else { None };
            let mut body = estimate_json(&est, exact.as_ref().map(rational_c));
            if let Some(x) = &exact {
                body["exact_rational"] = json!(format_rational(x));
            }
            Ok(Outcome::json(body))
        }
        McCommand::Split { lambda, size, samples, seed, matrix_file } => {
            check_size(*size)?;
            let lambda = parse_partition(lambda)?;
            let (a, b) = match matrix_file {
                Some(path) => {
                    let doc = matrices::read(path)?;
                    let get = |k: &str| {
                        matrices::field(&doc, k)
                            .ok_or_else(|| CliError::validation(format!("matrix file needs \"{k}\"")))
                            .and_then(matrices::matrix)
                    };
                    (get("A")?, get("B")?)
                }
                None => {
                    let (_, a, b) = split_matrices(*size, *seed).remove(0);
                    (a, b)
                }
            };
            if a.nrows() != *size || b.nrows() != *size {
                return Err(CliError::validation(format!("matrices must be {size}x{size}")));
            }
            let cfg = EnsembleConfig::new(*size, EnsembleKind::HaarUnitary, *seed);
            let res = mc_schur_split(&lambda, &a, &b, *samples, &cfg, workers)?;
            let mut body = estimate_json(&res.lhs, Some(res.rhs));
            body["a"] = matrices::to_json(&a);
            body["b"] = matrices::to_json(&b);
            Ok(Outcome::json(body))
        }
        McCommand::Monomial { a, b, ap, bp, size, samples, seed } => {
            let m = monomial(a, b, ap, bp, *size)?;
            let exact = monomial_integral(&m)?;
            let cfg = EnsembleConfig::new(*size, EnsembleKind::HaarUnitary, *seed);
            let est = mc_weingarten_monomial(&m, *samples, &cfg, workers)?;
            let mut body = estimate_json(&est, Some(rational_c(&exact)));
            body["exact_rational"] = json!(format_rational(&exact));
            Ok(Outcome::json(body))
        }
        McCommand::Schur { lambda, size, samples, seed } => {
            check_size(*size)?;
            let lambdas = parse_profile_list(lambda)?;
            let cfg = EnsembleConfig::new(*size, EnsembleKind::Gue, *seed);
            let est = mc_gaussian_schur(&lambdas, *samples, &cfg, workers);
            let rows = lambdas
                .iter()
                .zip(&est)
                .map(|(l, e)| {
                    let exact = gaussian_schur_average(l, *size)?;
                    let mut v = estimate_json(e, Some(rational_c(&exact)));
                    v["lambda"] = json!(l.to_string());
                    v["exact_rational"] = json!(format_rational(&exact));
                    Ok(v)
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok(Outcome::json(json!({ "estimates": rows })))
        }
        McCommand::Normal { size, samples, seed } => {
            check_size(*size)?;
            let cfg = EnsembleConfig::new(*size, EnsembleKind::Normal, *seed);
            let v = cfg.variance.covariance(*size);
            let est = mc_normal_second_moment(*samples, &cfg, workers);
            let numeric = normal_second_moment_quadrature(*size, v);
            let mut body = estimate_json(&est, Some(Complex64::new(numeric, 0.0)));
            body["closed_form"] = json!(normal_second_moment_exact(*size, v));
            Ok(Outcome::json(body))
        }
    }
}

fn row_json(row: &SeriesCoefficient, n: usize, spectrum: Option<&Source>) -> Value {
    let mut v = serde_json::to_value(row).expect("serializable row");
    if row.degree > n {
        v["label"] = json!("outside validity window");
    }
    if let (Some(source), Some(kappa)) = (spectrum, &row.kappa) {
        let pk = source.power_sum(kappa, n);
        v["p_kappa_c"] = json!([pk.re, pk.im]);
    }
    v
}

#[allow(clippy::too_many_arguments)]
fn series(
    model: ModelArg,
    factors: usize,
    size: usize,
    max_degree: usize,
    repr: ReprArg,
    calibrate_k: usize,
    calibrate_sizes: &[usize],
    spectrum_file: Option<&Path>,
    ignore_window: bool,
) -> CliResult<Outcome> {
    check_size(size)?;
    let source = match spectrum_file {
        None => Source::Identity,
        Some(path) => {
            let doc = matrices::read(path)?;
            let items = doc.as_array().ok_or_else(|| CliError::validation("spectrum file must be a JSON array"))?;
            let z = items
                .iter()
                .map(|v| {
                    let pair = v.as_array().filter(|a| a.len() == 2);
                    let f = |i: usize| pair.and_then(|a| a[i].as_f64());
                    match (f(0), f(1)) {
                        (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
                        _ => Err(CliError::validation(format!("expected [re, im], got {v}"))),
                    }
                })
                .collect::<CliResult<Vec<_>>>()?;
            Source::Spectrum(z)
        }
    };
    let spectral = matches!(source, Source::Spectrum(_));
    let mut code = 0;
    let mut text = None;
    let calibration;
    let spec = match model {
        ModelArg::Hermitian => {
            let report = calibrate_normalization(factors, calibrate_k, calibrate_sizes)?;
            let rule = report.rule;
            calibration = serde_json::to_value(&report).expect("serializable report");
            ModelSpec::hermitian(size, factors)?.with_source(source.clone())?.with_rule(rule)
        }
        ModelArg::Normal => {
            let spec = ModelSpec::normal(size, factors)?;
            let mut per_k = Map::new();
            for k in 1..=max_degree / 2 {
                let entry = match normal_proportionality(&spec, k) {
                    Ok(c) => json!({ "proportional": true, "constant": format_rational(&c) }),
                    Err(brickwork::Error::NoConsistentCalibration(table)) => {
                        code = 4;
                        text = Some(format!("no consistent calibration:\n{table}"));
                        json!({ "proportional": false, "discrepancy": table })
                    }
                    Err(e) => return Err(e.into()),
                };
                per_k.insert(k.to_string(), entry);
            }
            calibration = Value::Object(per_k);
            spec
        }
    };
    let reprs = if spectral { vec![Repr::Source] } else { repr.reprs() };
    let rows = coefficient_table(&spec, max_degree, &reprs, ignore_window)?;
    let spectrum = spectral.then_some(&source);
    let coefficients: Vec<Value> = rows.iter().map(|r| row_json(r, size, spectrum)).collect();
    let mut header = vec!["degree", "mu", "kappa", "repr", "value"];
    if model == ModelArg::Normal {
        header.push("profiles");
    }
    let mut csv_rows = vec![header.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
    for r in &rows {
        let mut line = vec![
            r.degree.to_string(),
            r.mu.to_string(),
            r.kappa.as_ref().map(ToString::to_string).unwrap_or_default(),
            r.repr.to_string(),
            format_rational(&r.value),
        ];
        if model == ModelArg::Normal {
            line.push(r.profiles.iter().map(ToString::to_string).collect::<Vec<_>>().join(";"));
        }
        csv_rows.push(line);
    }
    let body = json!({
        "model": spec,
        "coefficients": coefficients,
        "calibration": calibration,
    });
    let mut out = Outcome::json(body);
    out.csv = Some(csv_rows);
    out.code = code;
    if let Some(t) = text {
        eprintln!("{t}");
    }
    Ok(out)
}

fn verify(suite: &str, samples: u64, seed: u64, workers: usize) -> CliResult<Outcome> {
    let suites: Vec<Suite> = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse()?] };
    let opts = VerifyOptions { samples, seed, workers };
    let reports: Vec<_> = suites.iter().map(|&s| run_suite(s, &opts)).collect();
    let pass = reports.iter().all(|r| r.pass);
    let text = reports.iter().map(|r| r.table()).collect::<String>();
    let mut out = Outcome::json(json!({ "pass": pass, "reports": reports }));
    out.text = Some(text);
    out.code = if pass { 0 } else { 1 };
    Ok(out)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Hurwitz { .. } => "hurwitz",
        Command::Oracle { .. } => "oracle",
        Command::Wg { .. } => "wg",
        Command::Uintegral { .. } => "uintegral",
        Command::Characters { .. } => "characters",
        Command::Schur { .. } => "schur",
        Command::Mc { command } => match command {
            McCommand::Moment { .. } => "mc moment",
            McCommand::Split { .. } => "mc prop1",
            McCommand::Monomial { .. } => "mc monomial",
            McCommand::Schur { .. } => "mc schur",
            McCommand::Normal { .. } => "mc normal",
        },
        Command::Series { .. } => "series",
        Command::Verify { .. } => "verify",
    }
}

fn write_to(path: Option<&Path>, content: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| CliError::validation(format!("{}: {e}", p.display()))),
        None => {
            println!("{}", content.trim_end());
            Ok(())
        }
    }
}

fn csv_text(rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(r).map_err(|e| CliError::validation(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::validation(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::validation(e.to_string()))
}

fn pretty(body: &Map<String, Value>) -> String {
    body.iter()
        .filter(|(k, _)| k.as_str() != "config")
        .map(|(k, v)| match v {
            Value::String(s) => format!("{k}: {s}"),
            other => format!("{k}: {other}"),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn emit(cli: &Cli, outcome: &Outcome) -> CliResult<()> {
    let mut doc = Map::new();
    doc.insert("version".into(), json!(VERSION));
    doc.insert("command".into(), json!(command_name(&cli.command)));
    let mut config = serde_json::to_value(cli).expect("serializable config");
    config["workers"] = json!(cli.workers.unwrap_or_else(default_workers));
    doc.insert("config".into(), config);
    doc.extend(outcome.body.clone());
    let json_text = serde_json::to_string_pretty(&Value::Object(doc.clone())).expect("serializable document");

    if let Command::Series { json: json_path, csv: csv_path, .. } = &cli.command {
        if let Some(p) = json_path {
            write_to(Some(p), &json_text)?;
        }
        if let (Some(p), Some(rows)) = (csv_path, &outcome.csv) {
            write_to(Some(p), &csv_text(rows)?)?;
        }
    }
    let default = if matches!(cli.command, Command::Verify { .. }) { Format::Pretty } else { Format::Json };
    let content = match cli.format.unwrap_or(default) {
        Format::Json => json_text,
        Format::Csv => match &outcome.csv {
            Some(rows) => csv_text(rows)?,
            None => return Err(CliError::validation("csv output is only available for series")),
        },
        Format::Pretty => outcome.text.clone().unwrap_or_else(|| pretty(&outcome.body)),
    };
    write_to(cli.output.as_deref(), &content)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = run(&cli).and_then(|outcome| {
        emit(&cli, &outcome)?;
        Ok(outcome.code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
