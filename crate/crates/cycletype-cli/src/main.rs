//! Command-line front end: every computation as a subcommand with canonical
//! machine-readable output. Exit codes: 0 success, 1 domain error (violated
//! condition named on stderr), 2 usage error.

mod envelope;
mod events;
mod setspec;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cycletype::bounds::{BoundContext, BoundReport, TheoremBound};
use cycletype::dickman::DickmanTable;
use cycletype::exact::{self, JointSpec};
use cycletype::index_set::IndexSet;
use cycletype::montecarlo::{
    clt_empirical_error, estimate_event, smallest_cycle_experiment, uniform_growth_experiment,
    SampleConfig,
};
use cycletype::partitions::{DEFAULT_ENUM_CAP, MAX_ENUM_CAP};
use cycletype::rational::{to_canonical_string, to_f64};
use cycletype::suites;

use envelope::{rational_row, Envelope, Val};
use events::EventExpr;
use setspec::{parse_f64_list, parse_set, parse_usize_list};

#[derive(Parser)]
#[command(
    name = "cycletype",
    version,
    about = "Exact and asymptotic statistics of the cycle type of a uniform random permutation",
    after_help = "Sets are written as comma lists with inclusive ranges, e.g. \"1-5,8\".\n\
                  Identical invocations (including --seed for sampling) produce byte-identical output."
)]
struct Cli {
    /// Output format for the result envelope
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Degree cap for full cycle-type enumeration; cost grows like the
    /// partition count p(n) (~10^6 at n=60), hard ceiling 120
    #[arg(long, global = true, default_value_t = DEFAULT_ENUM_CAP)]
    exact_cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Exact laws in arbitrary-precision rational arithmetic
    Exact {
        #[command(subcommand)]
        op: ExactOp,
    },

    /// nu(n,m): probability that no cycle is longer than m (the quantity the
    /// Dickman sandwich rho(n/m) <= nu <= rho((n+1)/(m+1)) pins down)
    Nu {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },

    /// Dickman rho(u) by marching the integral equation v*rho(v) =
    /// integral of rho over [v-1, v] on a uniform grid
    Dickman {
        #[arg(long)]
        u: f64,
        /// Grid points per unit interval (the grid step is 1/STEP)
        #[arg(long, default_value_t = 1024)]
        step: u32,
        /// Also write the full table as CSV (u,rho rows) to this file
        #[arg(long, value_name = "FILE")]
        table_out: Option<PathBuf>,
    },

    /// Evaluate one explicit theorem bound. Names: thm5_joint, cor6_single,
    /// cor6_zero, thm7_lower, thm7_upper, thm7_twosided, thm8_strict,
    /// cor_two_equal, thm11_lower, thm12_large, thm13_sandwich, thm19_fixed
    Bounds {
        #[arg(long)]
        name: String,
        /// Scalar hypotheses as k=v pairs, e.g. "n=40,lambda=0.5"
        #[arg(long, default_value = "")]
        params: String,
        /// Index set(s), repeatable; order gives I_1, I_2, ...
        #[arg(long = "set")]
        sets: Vec<String>,
        /// Counts m_1,...,m_r for thm5_joint
        #[arg(long)]
        counts: Option<String>,
        /// Also compute the exact side and check the bound
        #[arg(long)]
        verify: bool,
    },

    /// Total-variation distance between the small-cycle vector (C_1..C_k)
    /// and independent Poisson variables with parameters 1, 1/2, ..., 1/k
    Tvd {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Cross-check against the definition-oracle (n <= 20, k <= 6)
        #[arg(long)]
        oracle: bool,
    },

    /// Seeded Monte Carlo sampling of cycle types
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Event predicate, e.g. "C[1]=0 & Ctotal>=3"
        #[arg(long, conflicts_with = "experiment")]
        event: Option<String>,
        /// Named experiment instead of a plain event
        #[arg(long, value_enum)]
        experiment: Option<Experiment>,
        /// uniform-growth: lower end of the index range
        #[arg(long)]
        xi: Option<usize>,
        /// smallest-cycle: lower end of the rank range
        #[arg(long)]
        theta: Option<usize>,
        /// clt: the index set (defaults to the full set)
        #[arg(long)]
        set: Option<String>,
        /// clt: comma list of w values (default -3.0..3.0 step 0.1)
        #[arg(long)]
        wgrid: Option<String>,
    },

    /// Run a verification suite and report every check
    Report {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Also write the envelope to this file
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ExactOp {
    /// Probability of one cycle type (Cauchy's formula)
    Cauchy {
        #[arg(long)]
        n: usize,
        /// Multiplicity vector m_1,...,m_n as a comma list
        #[arg(long = "type")]
        mult: String,
    },

    /// P(C_j = m) by the exact alternating series (Goncharov's local law)
    Goncharov {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        m: usize,
    },

    /// Joint law P(C_{I_1}=m_1, ..., C_{I_r}=m_r) over disjoint sets
    Joint {
        #[arg(long)]
        n: usize,
        #[arg(long = "set")]
        sets: Vec<String>,
        #[arg(long)]
        counts: String,
    },

    /// Joint binomial moment E prod C(C_{I_j}, m_j), its product bound
    /// prod H(I_j)^{m_j}/m_j!, and whether equality is attained
    Moments {
        #[arg(long)]
        n: usize,
        #[arg(long = "set")]
        sets: Vec<String>,
        #[arg(long)]
        counts: String,
    },

    /// Law of the total cycle count via unsigned Stirling numbers of the
    /// first kind: P(C=k) = |s(n,k)|/n!
    Stirling {
        #[arg(long)]
        n: usize,
        /// Report a single k instead of the whole law
        #[arg(long)]
        k: Option<usize>,
    },

    /// P(exactly k cycles, all lengths inside the set): the coefficient law
    /// of the restricted-support exponential generating function (Gruder)
    Gruder {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        set: String,
    },

    /// U(n,m): probability that every cycle is longer than m
    Usmall {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },

    /// i(n,k): probability that some set of size k is fixed (a product of
    /// cycles). Omitting --k prints the whole profile k = 0..n
    Fixedset {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
    },

    /// E 2^C, the expected number of fixed sets; equals n+1 exactly
    Divcount {
        #[arg(long)]
        n: usize,
    },

    /// P(D_j <= k): the j-th smallest cycle has length at most k
    Djcdf {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        k: usize,
    },

    /// Law of C_I conditioned on the total cycle count C = k
    Conditional {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        set: String,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Experiment {
    /// P(|C_[m] - log m| < 2 sqrt(log m log log m) for all m in [xi, n])
    UniformGrowth,
    /// P(|log D_j - j| < 3 sqrt(j log j) for all j in [theta, C])
    SmallestCycle,
    /// sup_w |P(C_I <= H + w sqrt(H)) - Phi(w)|
    Clt,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Suite {
    /// Exact laws against the n!-census oracle at small degrees
    SmallGrid,
    /// Theorem bounds verified against exact values
    Bounds,
    /// Total-variation grid with definition-oracle cross-checks
    Tvd,
}

enum AppError {
    Usage(String),
    Domain(String),
}

impl From<cycletype::Error> for AppError {
    fn from(e: cycletype::Error) -> Self {
        AppError::Domain(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Domain(format!("io error: {e}"))
    }
}

fn usage(msg: impl Into<String>) -> AppError {
    AppError::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(AppError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8, AppError> {
    let cap = cli.exact_cap.min(MAX_ENUM_CAP);
    let (env, code) = match cli.command {
        Command::Exact { op } => (run_exact(op, cap)?, 0),
        Command::Nu { n, m } => {
            let mut env = Envelope::new("nu", vec!["rational", "decimal"]);
            env.param("n", n).param("m", m);
            let v = exact::no_large_prob(n, m)?;
            env.push_row(rational_row(&v));
            (env, 0)
        }
        Command::Dickman { u, step, table_out } => {
            let mut env = Envelope::new("dickman", vec!["u", "rho"]);
            env.param("u", u).param("step", step);
            if u < 0.0 {
                return Err(cycletype::Error::domain("u must be nonnegative").into());
            }
            let table = DickmanTable::build(u.max(2.0).ceil() + 1.0, step)?;
            let rho = table.eval(u)?;
            let mut row = BTreeMap::new();
            row.insert("u".to_string(), Val::Float(u));
            row.insert("rho".to_string(), Val::Float(rho));
            env.push_row(row);
            if let Some(path) = table_out {
                let mut file = std::fs::File::create(&path)?;
                table.write_csv(&mut file)?;
                env.param("table_out", path.display().to_string());
            }
            (env, 0)
        }
        Command::Bounds {
            name,
            params,
            sets,
            counts,
            verify,
        } => (run_bounds(&name, &params, &sets, counts.as_deref(), verify, cap)?, 0),
        Command::Tvd { n, k, oracle } => {
            let mut env = Envelope::new("tvd", vec!["n", "k", "tvd", "oracle", "difference"]);
            env.param("n", n).param("k", k);
            let d = cycletype::tvd::tvd_small_cycles(n, k)?;
            let mut row = BTreeMap::new();
            row.insert("n".to_string(), Val::UInt(n as u64));
            row.insert("k".to_string(), Val::UInt(k as u64));
            row.insert("tvd".to_string(), Val::Float(d));
            if oracle {
                let o = cycletype::tvd::tvd_definition_oracle(n, k)?;
                row.insert("oracle".to_string(), Val::Float(o));
                row.insert("difference".to_string(), Val::Float((d - o).abs()));
            }
            env.push_row(row);
            (env, 0)
        }
        Command::Sample {
            n,
            trials,
            seed,
            workers,
            event,
            experiment,
            xi,
            theta,
            set,
            wgrid,
        } => (
            run_sample(
                n, trials, seed, workers, event, experiment, xi, theta, set, wgrid, cap,
            )?,
            0,
        ),
        Command::Report { suite, out } => {
            let (env, code) = run_report(suite, cap)?;
            if let Some(path) = out {
                let mut file = std::fs::File::create(&path)?;
                match cli.format {
                    Format::Json => env.write_json(&mut file)?,
                    Format::Csv => env.write_csv(&mut file)?,
                }
            }
            (env, code)
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match cli.format {
        Format::Json => env.write_json(&mut lock)?,
        Format::Csv => env.write_csv(&mut lock)?,
    }
    lock.flush()?;
    Ok(code)
}

fn parse_joint(n: usize, sets: &[String], counts: &str) -> Result<JointSpec, AppError> {
    if sets.is_empty() {
        return Err(usage("at least one --set is required"));
    }
    let sets: Vec<IndexSet> = sets
        .iter()
        .map(|s| parse_set(n, s).map_err(usage))
        .collect::<Result<_, _>>()?;
    let counts = parse_usize_list(counts).map_err(usage)?;
    Ok(JointSpec::new(n, sets, counts)?)
}

fn run_exact(op: ExactOp, cap: usize) -> Result<Envelope, AppError> {
    Ok(match op {
        ExactOp::Cauchy { n, mult } => {
            let mut env = Envelope::new("exact cauchy", vec!["rational", "decimal"]);
            env.param("n", n).param("type", &mult);
            let mult = parse_usize_list(&mult).map_err(usage)?;
            let t = cycletype::CycleType::from_multiplicities(n, &mult)?;
            env.push_row(rational_row(&exact::cauchy_pmf(&t)));
            env
        }
        ExactOp::Goncharov { n, j, m } => {
            let mut env = Envelope::new("exact goncharov", vec!["rational", "decimal"]);
            env.param("n", n).param("j", j).param("m", m);
            env.push_row(rational_row(&exact::goncharov_pmf(n, j, m)?));
            env
        }
        ExactOp::Joint { n, sets, counts } => {
            let mut env = Envelope::new("exact joint", vec!["rational", "decimal"]);
            env.param("n", n).param("counts", &counts);
            for (i, s) in sets.iter().enumerate() {
                env.param(&format!("set{}", i + 1), s);
            }
            let spec = parse_joint(n, &sets, &counts)?;
            env.push_row(rational_row(&exact::joint_pmf(&spec, cap)?));
            env
        }
        ExactOp::Moments { n, sets, counts } => {
            let mut env = Envelope::new(
                "exact moments",
                vec!["rational", "decimal", "bound_rational", "bound_decimal", "tight"],
            );
            env.param("n", n).param("counts", &counts);
            for (i, s) in sets.iter().enumerate() {
                env.param(&format!("set{}", i + 1), s);
            }
            let spec = parse_joint(n, &sets, &counts)?;
            let moment = exact::binomial_moment(&spec, cap)?;
            let bound = exact::binomial_moment_bound(&spec);
            let mut row = rational_row(&moment);
            row.insert(
                "bound_rational".to_string(),
                Val::Str(to_canonical_string(&bound)),
            );
            row.insert("bound_decimal".to_string(), Val::Float(to_f64(&bound)));
            row.insert(
                "tight".to_string(),
                Val::Bool(exact::binomial_moment_is_tight(&spec)),
            );
            env.push_row(row);
            env
        }
        ExactOp::Stirling { n, k } => {
            let mut env = Envelope::new("exact stirling", vec!["k", "rational", "decimal"]);
            env.param("n", n);
            let pmf = exact::total_cycles_pmf(n)?;
            let range: Vec<usize> = match k {
                Some(k) => {
                    env.param("k", k);
                    vec![k]
                }
                None => (1..=n).collect(),
            };
            for k in range {
                let mut row = rational_row(&pmf.prob(k));
                row.insert("k".to_string(), Val::UInt(k as u64));
                env.push_row(row);
            }
            env
        }
        ExactOp::Gruder { n, k, set } => {
            let mut env = Envelope::new("exact gruder", vec!["rational", "decimal"]);
            env.param("n", n).param("k", k).param("set", &set);
            let ambient = n.max(1);
            let parsed = parse_set(ambient, &set).map_err(usage)?;
            env.push_row(rational_row(&exact::gruder_count(n, k, &parsed)));
            env
        }
        ExactOp::Usmall { n, m } => {
            let mut env = Envelope::new("exact usmall", vec!["rational", "decimal"]);
            env.param("n", n).param("m", m);
            env.push_row(rational_row(&exact::no_small_prob(n, m)));
            env
        }
        ExactOp::Fixedset { n, k } => {
            let mut env = Envelope::new("exact fixedset", vec!["k", "rational", "decimal"]);
            env.param("n", n);
            let profile = exact::fixed_set_profile(n, cap)?;
            let range: Vec<usize> = match k {
                Some(k) => {
                    if k > n {
                        return Err(cycletype::Error::domain(format!(
                            "set size {k} exceeds degree {n}"
                        ))
                        .into());
                    }
                    env.param("k", k);
                    vec![k]
                }
                None => (0..=n).collect(),
            };
            for k in range {
                let mut row = rational_row(&profile[k]);
                row.insert("k".to_string(), Val::UInt(k as u64));
                env.push_row(row);
            }
            env
        }
        ExactOp::Divcount { n } => {
            let mut env = Envelope::new("exact divcount", vec!["rational", "decimal"]);
            env.param("n", n);
            env.push_row(rational_row(&exact::expected_divisor_count(n)?));
            env
        }
        ExactOp::Djcdf { n, j, k } => {
            let mut env = Envelope::new("exact djcdf", vec!["rational", "decimal"]);
            env.param("n", n).param("j", j).param("k", k);
            env.push_row(rational_row(&exact::smallest_cycle_cdf(n, j, k, cap)?));
            env
        }
        ExactOp::Conditional { n, set, k } => {
            let mut env = Envelope::new("exact conditional", vec!["h", "rational", "decimal"]);
            env.param("n", n).param("set", &set).param("k", k);
            let parsed = parse_set(n, &set).map_err(usage)?;
            let pmf = exact::conditional_pmf(n, &parsed, k, cap)?;
            for h in 0..=k {
                let mut row = rational_row(&pmf.prob(h));
                row.insert("h".to_string(), Val::UInt(h as u64));
                env.push_row(row);
            }
            env
        }
    })
}

fn params_map(spec: &str) -> Result<BTreeMap<String, String>, AppError> {
    let mut map = BTreeMap::new();
    if spec.trim().is_empty() {
        return Ok(map);
    }
    for pair in spec.split(',') {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| usage(format!("expected k=v in --params, got '{pair}'")))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn need_usize(map: &BTreeMap<String, String>, key: &str) -> Result<usize, AppError> {
    map.get(key)
        .ok_or_else(|| usage(format!("missing required parameter '{key}'")))?
        .parse()
        .map_err(|_| usage(format!("parameter '{key}' must be a nonnegative integer")))
}

fn need_f64(map: &BTreeMap<String, String>, key: &str) -> Result<f64, AppError> {
    map.get(key)
        .ok_or_else(|| usage(format!("missing required parameter '{key}'")))?
        .parse()
        .map_err(|_| usage(format!("parameter '{key}' must be a number")))
}

fn one_set(n: usize, sets: &[String]) -> Result<IndexSet, AppError> {
    match sets {
        [one] => parse_set(n, one).map_err(usage),
        [] => Err(usage("this bound requires exactly one --set")),
        _ => Err(usage("this bound takes exactly one --set")),
    }
}

fn run_bounds(
    name: &str,
    params: &str,
    sets: &[String],
    counts: Option<&str>,
    verify: bool,
    cap: usize,
) -> Result<Envelope, AppError> {
    let map = params_map(params)?;
    let n = need_usize(&map, "n")?;
    let bound = match name {
        "thm5_joint" => {
            if sets.is_empty() {
                return Err(usage("thm5_joint requires at least one --set"));
            }
            let counts = counts.ok_or_else(|| usage("thm5_joint requires --counts"))?;
            TheoremBound::Thm5Joint {
                spec: parse_joint(n, sets, counts)?,
            }
        }
        "cor6_single" => TheoremBound::Cor6Single {
            set: one_set(n, sets)?,
            m: need_usize(&map, "m")?,
        },
        "cor6_zero" => TheoremBound::Cor6Zero {
            set: one_set(n, sets)?,
        },
        "thm7_lower" => TheoremBound::Thm7Lower {
            set: one_set(n, sets)?,
            lambda: need_f64(&map, "lambda")?,
        },
        "thm7_upper" => TheoremBound::Thm7Upper {
            set: one_set(n, sets)?,
            lambda: need_f64(&map, "lambda")?,
        },
        "thm7_twosided" => TheoremBound::Thm7TwoSided {
            set: one_set(n, sets)?,
            psi: need_f64(&map, "psi")?,
        },
        "thm8_strict" => TheoremBound::Thm8Strict {
            set: one_set(n, sets)?,
            k: need_usize(&map, "k")?,
        },
        "cor_two_equal" => TheoremBound::CorTwoEqual {
            n,
            ell: need_usize(&map, "ell")?,
        },
        "thm11_lower" => TheoremBound::Thm11Lower {
            n,
            k: need_usize(&map, "k")?,
        },
        "thm12_large" => TheoremBound::Thm12Large {
            n,
            m: need_usize(&map, "m")?,
        },
        "thm13_sandwich" => TheoremBound::Thm13Sandwich {
            n,
            m: need_usize(&map, "m")?,
        },
        "thm19_fixed" => TheoremBound::Thm19Fixed {
            n,
            k: need_usize(&map, "k")?,
        },
        other => {
            return Err(usage(format!(
                "unknown bound '{other}'; see `cycletype bounds --help` for the list"
            )))
        }
    };
    // thm13 needs rho up to n/m
    let table = if name == "thm13_sandwich" {
        let m = need_usize(&map, "m")?.max(1);
        Some(DickmanTable::build(n as f64 / m as f64 + 1.0, 1024)?)
    } else {
        None
    };
    let ctx = BoundContext {
        exact_cap: cap,
        verify,
        dickman: table.as_ref(),
    };
    let report = bound.evaluate(&ctx)?;

    let mut env = Envelope::new(
        "bounds",
        vec!["name", "bound_value", "exact_value", "holds"],
    );
    env.param("name", name).param("verify", verify);
    for (k, v) in &report.params {
        env.param(k, v);
    }
    env.push_row(report_row(&report));
    Ok(env)
}

fn report_row(r: &BoundReport) -> BTreeMap<String, Val> {
    let mut row = BTreeMap::new();
    row.insert("name".to_string(), Val::Str(r.name.to_string()));
    row.insert("bound_value".to_string(), Val::Float(r.bound_value));
    if let Some(e) = r.exact_value {
        row.insert("exact_value".to_string(), Val::Float(e));
    }
    if let Some(h) = r.holds {
        row.insert("holds".to_string(), Val::Bool(h));
    }
    row
}

#[allow(clippy::too_many_arguments)]
fn run_sample(
    n: usize,
    trials: usize,
    seed: u64,
    workers: usize,
    event: Option<String>,
    experiment: Option<Experiment>,
    xi: Option<usize>,
    theta: Option<usize>,
    set: Option<String>,
    wgrid: Option<String>,
    cap: usize,
) -> Result<Envelope, AppError> {
    let config = SampleConfig::new(n, trials, seed, workers)?;
    let mut env = Envelope::new(
        "sample",
        vec![
            "experiment",
            "point",
            "half_width_95",
            "trials",
            "reference_rate",
            "sup_error",
        ],
    );
    env.param("n", n)
        .param("trials", trials)
        .param("seed", seed)
        .param("workers", workers);

    match (event, experiment) {
        (Some(expr), None) => {
            let parsed = EventExpr::parse(&expr).map_err(usage)?;
            env.param("event", parsed.source());
            let est = estimate_event(&config, move |t| parsed.eval(t))?;
            let mut row = BTreeMap::new();
            row.insert("experiment".to_string(), Val::Str("event".to_string()));
            row.insert("point".to_string(), Val::Float(est.point));
            row.insert("half_width_95".to_string(), Val::Float(est.half_width_95));
            row.insert("trials".to_string(), Val::UInt(est.trials as u64));
            env.push_row(row);
        }
        (None, Some(Experiment::UniformGrowth)) => {
            let xi = xi.ok_or_else(|| usage("uniform-growth requires --xi"))?;
            env.param("xi", xi);
            let est = uniform_growth_experiment(&config, xi)?;
            let mut row = BTreeMap::new();
            row.insert(
                "experiment".to_string(),
                Val::Str("uniform-growth".to_string()),
            );
            row.insert("point".to_string(), Val::Float(est.point));
            row.insert("half_width_95".to_string(), Val::Float(est.half_width_95));
            row.insert("trials".to_string(), Val::UInt(est.trials as u64));
            row.insert(
                "reference_rate".to_string(),
                Val::Float(1.0 / (xi as f64).ln().powf(1.0 / 3.0)),
            );
            env.push_row(row);
        }
        (None, Some(Experiment::SmallestCycle)) => {
            let theta = theta.ok_or_else(|| usage("smallest-cycle requires --theta"))?;
            env.param("theta", theta);
            let est = smallest_cycle_experiment(&config, theta)?;
            let mut row = BTreeMap::new();
            row.insert(
                "experiment".to_string(),
                Val::Str("smallest-cycle".to_string()),
            );
            row.insert("point".to_string(), Val::Float(est.point));
            row.insert("half_width_95".to_string(), Val::Float(est.half_width_95));
            row.insert("trials".to_string(), Val::UInt(est.trials as u64));
            row.insert(
                "reference_rate".to_string(),
                Val::Float(1.0 / (theta as f64).powf(1.0 / 3.0)),
            );
            env.push_row(row);
        }
        (None, Some(Experiment::Clt)) => {
            let parsed = match &set {
                Some(s) => parse_set(n, s).map_err(usage)?,
                None => IndexSet::full(n),
            };
            env.param("set", parsed.to_spec_string());
            let grid: Vec<f64> = match &wgrid {
                Some(g) => parse_f64_list(g).map_err(usage)?,
                None => (-30..=30).map(|i| i as f64 / 10.0).collect(),
            };
            env.param(
                "wgrid",
                wgrid.unwrap_or_else(|| "-3.0..3.0 step 0.1".to_string()),
            );
            let sup = clt_empirical_error(&config, &parsed, &grid, cap)?;
            let mut row = BTreeMap::new();
            row.insert("experiment".to_string(), Val::Str("clt".to_string()));
            row.insert("sup_error".to_string(), Val::Float(sup));
            row.insert("trials".to_string(), Val::UInt(trials as u64));
            env.push_row(row);
        }
        (None, None) => return Err(usage("sample requires --event or --experiment")),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with prevents this"),
    }
    Ok(env)
}

fn run_report(suite: Suite, cap: usize) -> Result<(Envelope, u8), AppError> {
    Ok(match suite {
        Suite::SmallGrid => {
            let mut env = Envelope::new("report small-grid", vec!["label", "ok", "detail"]);
            env.param("suite", "small-grid");
            let records = suites::small_grid_suite(6, cap)?;
            let mut all_ok = true;
            for r in records {
                all_ok &= r.ok;
                let mut row = BTreeMap::new();
                row.insert("label".to_string(), Val::Str(r.label));
                row.insert("ok".to_string(), Val::Bool(r.ok));
                row.insert("detail".to_string(), Val::Str(r.detail));
                env.push_row(row);
            }
            (env, u8::from(!all_ok))
        }
        Suite::Bounds => {
            let mut env = Envelope::new(
                "report bounds",
                vec!["name", "params", "bound_value", "exact_value", "holds"],
            );
            env.param("suite", "bounds");
            let table = DickmanTable::build(22.0, 1024)?;
            let degrees: Vec<usize> = (2..=10).chain([16, 20]).collect();
            let reports = suites::bounds_suite(&degrees, 5, 0x5EED, &table, cap)?;
            let mut all_hold = true;
            for r in reports {
                if r.holds == Some(false) {
                    all_hold = false;
                }
                let mut row = report_row(&r);
                let rendered: Vec<String> =
                    r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                row.insert("params".to_string(), Val::Str(rendered.join(" ")));
                env.push_row(row);
            }
            (env, u8::from(!all_hold))
        }
        Suite::Tvd => {
            let mut env = Envelope::new("report tvd", vec!["n", "k", "tvd", "oracle"]);
            env.param("suite", "tvd");
            let rows = suites::tvd_suite(14, 4)?;
            let mut all_ok = true;
            for r in rows {
                if let Some(o) = r.oracle {
                    all_ok &= (r.tvd - o).abs() < 1e-9;
                }
                let mut row = BTreeMap::new();
                row.insert("n".to_string(), Val::UInt(r.n as u64));
                row.insert("k".to_string(), Val::UInt(r.k as u64));
                row.insert("tvd".to_string(), Val::Float(r.tvd));
                if let Some(o) = r.oracle {
                    row.insert("oracle".to_string(), Val::Float(o));
                }
                env.push_row(row);
            }
            (env, u8::from(!all_ok))
        }
    })
}
