use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use explab::composite::{minimize_hr_over_hulls, optimality_certificate, set_divergence, SolverConfig};
use explab::divergence::{evaluate, DivergenceKind, State};
use explab::gallery::{self, CounterexampleReport};
use explab::io::{self, CurvePoint, Format};
use explab::tradeoff::{self, LegendreData, TildeCase};
use explab::typelab::{self, SymmetricTest};
use explab::verify::{self, SuiteConfig};
use explab::Herm;
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "explab", version, about = "Error exponents and counterexamples for composite hypothesis testing")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Numerical tolerance (solver gap for `composite`, row tolerance for `verify`).
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Seed for randomized instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Pairwise divergence of two states, optionally swept over an α grid.
    Divergence(DivergenceArgs),
    /// Hoeffding-type exponents of a pair.
    Tradeoff(TradeoffArgs),
    /// Composite divergences and the hull minimizer of H_r.
    Composite(CompositeArgs),
    /// Exact error probabilities of symmetric tests.
    Typelab(TypelabArgs),
    /// Worked counterexamples with their inequality reports.
    #[command(subcommand)]
    Gallery(GalleryCmd),
    /// Invariant suites.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Relative,
    Petz,
    Sandwiched,
    LogEuclidean,
    Maximal,
    MaxRel,
    Chernoff,
}

impl Kind {
    fn needs_alpha(self) -> bool {
        matches!(self, Kind::Petz | Kind::Sandwiched | Kind::LogEuclidean | Kind::Maximal)
    }

    fn with_alpha(self, a: f64) -> DivergenceKind {
        match self {
            Kind::Relative => DivergenceKind::Relative,
            Kind::Petz => DivergenceKind::Petz(a),
            Kind::Sandwiched => DivergenceKind::Sandwiched(a),
            Kind::LogEuclidean => DivergenceKind::LogEuclidean(a),
            Kind::Maximal => DivergenceKind::Maximal(a),
            Kind::MaxRel => DivergenceKind::MaxRel,
            Kind::Chernoff => DivergenceKind::Chernoff,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Kind::Relative => "relative",
            Kind::Petz => "petz",
            Kind::Sandwiched => "sandwiched",
            Kind::LogEuclidean => "log-euclidean",
            Kind::Maximal => "maximal",
            Kind::MaxRel => "max-rel",
            Kind::Chernoff => "chernoff",
        }
    }
}

#[derive(Args)]
struct PairArgs {
    /// State file: weight array, {"weights": [...]}, or {"dim", "re", "im"}.
    #[arg(long)]
    rho: PathBuf,
    #[arg(long)]
    sigma: PathBuf,
}

#[derive(Args)]
struct DivergenceArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long, value_enum, default_value_t = Kind::Relative)]
    kind: Kind,
    #[arg(long)]
    alpha: Option<f64>,
    /// α grid, `start:stop:step` or a comma list.
    #[arg(long, conflicts_with = "alpha")]
    grid: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TradeoffQuantity {
    /// H_r
    Hoeffding,
    /// H*_r
    Anti,
    /// Ψ̃(r) by the three-case formula
    TildePsi,
    /// Hellinger arc point μ_α (classical pairs)
    Arc,
}

#[derive(Args)]
struct TradeoffArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long, value_enum, default_value_t = TradeoffQuantity::Hoeffding)]
    quantity: TradeoffQuantity,
    /// Rate (or α for `arc`).
    #[arg(long, visible_alias = "alpha")]
    r: Option<f64>,
    /// Grid of rates (or α values for `arc`).
    #[arg(long, conflicts_with = "r")]
    grid: Option<String>,
}

#[derive(Args)]
struct CompositeArgs {
    /// Hypothesis-set file for the null: {"kind", "label", "states"}.
    #[arg(long)]
    null: PathBuf,
    #[arg(long)]
    alt: PathBuf,
    #[arg(long, value_enum, default_value_t = Kind::Relative)]
    kind: Kind,
    #[arg(long)]
    alpha: Option<f64>,
    /// Minimize H_r over the convex hulls at this rate (classical sets).
    #[arg(long)]
    r: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TestKind {
    /// Keep the null on {types P : D(P‖σ) ≥ r}.
    Ball,
    /// Likelihood-ratio test with per-symbol threshold c.
    Np,
}

#[derive(Args)]
struct TypelabArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long, value_enum, default_value_t = TestKind::Np)]
    test: TestKind,
    #[arg(long)]
    n: usize,
    /// Ball radius.
    #[arg(long)]
    r: Option<f64>,
    /// Likelihood-ratio threshold.
    #[arg(long)]
    c: Option<f64>,
}

#[derive(Args)]
struct TripleArgs {
    /// Quantum state files; all three default to the minimal 2x2 triple.
    #[arg(long, requires_all = ["sigma1", "sigma2"])]
    rho: Option<PathBuf>,
    #[arg(long)]
    sigma1: Option<PathBuf>,
    #[arg(long)]
    sigma2: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SteinState {
    /// The given ρ.
    Given,
    /// Top eigenvector of diff(σ₁, σ₂).
    Top,
    /// Invertible state with Tr ρ diff = δ/2.
    Half,
}

#[derive(Subcommand)]
enum GalleryCmd {
    /// Biased coins: constants, strong-converse gap, exhaustive finite-n bound.
    Coin {
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Rates for the strong-converse gap.
        #[arg(long, default_value = "0.2,0.5,1.0,1.4,2.0")]
        grid: String,
        /// Largest kn for the exhaustive check.
        #[arg(long, default_value_t = 14)]
        n: usize,
    },
    /// Digit-cylinder example on [0,1].
    Interval {
        #[arg(long, default_value_t = 10)]
        n: u32,
        #[arg(long, default_value_t = 0.3)]
        r: f64,
        /// Cylinder depth; defaults to m_n.
        #[arg(long)]
        depth: Option<u64>,
    },
    /// Composite Stein gap against the geometric mean.
    Stein {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long, value_enum, default_value_t = SteinState::Given)]
        state: SteinState,
    },
    /// Strict Stein separation of the 2x2 triple.
    Minimal,
    /// Direct-exponent separation at (r, t).
    Direct {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long, default_value_t = 0.2)]
        r: f64,
        #[arg(long, default_value_t = 0.2)]
        t: f64,
    },
    /// Random pure-state families via Gram matrices.
    Pure {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        /// Largest block length.
        #[arg(long, default_value_t = 30)]
        n: usize,
    },
    /// Combining pairwise tests for commuting null/alternative pairs.
    Semiclassical {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Use Neyman-Pearson projections as pairwise tests.
        #[arg(long)]
        np: bool,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// One suite by name.
    Suite {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(verify::SUITES))]
        name: String,
        /// Instances (0 = suite default).
        #[arg(long, default_value_t = 0)]
        count: usize,
    },
    /// Every suite.
    All {
        #[arg(long, default_value_t = 0)]
        count: usize,
    },
}

/// Either a report (pass/fail) or a plain value that always succeeds.
enum Output {
    Report(CounterexampleReport),
    Reports(Vec<CounterexampleReport>),
    Curve(Vec<CurvePoint>),
    Value { json: Value, ok: bool },
    Text(String),
}

fn read_state(p: &Path) -> Result<State> {
    Ok(io::read_state(p)?)
}

fn quantum(p: &Path) -> Result<Herm> {
    match read_state(p)? {
        State::Quantum(h) => Ok(h),
        State::Classical(_) => bail!("{}: expected a matrix state", p.display()),
    }
}

fn triple(t: &TripleArgs) -> Result<(Herm, Herm, Herm)> {
    match (&t.rho, &t.sigma1, &t.sigma2) {
        (Some(r), Some(a), Some(b)) => Ok((quantum(r)?, quantum(a)?, quantum(b)?)),
        (None, None, None) => Ok(gallery::minimal_triple()),
        _ => bail!("--rho, --sigma1 and --sigma2 go together"),
    }
}

fn grid_or_single(grid: &Option<String>, single: Option<f64>, what: &str) -> Result<Vec<f64>> {
    match (grid, single) {
        (Some(g), _) => Ok(io::parse_grid(g)?),
        (None, Some(x)) => Ok(vec![x]),
        (None, None) => bail!("give --{what} or --grid"),
    }
}

fn divergence(a: &DivergenceArgs) -> Result<Output> {
    let (rho, sigma) = (read_state(&a.pair.rho)?, read_state(&a.pair.sigma)?);
    if !a.kind.needs_alpha() {
        if a.alpha.is_some() || a.grid.is_some() {
            bail!("--kind {} takes no alpha", a.kind.name());
        }
        let v = evaluate(a.kind.with_alpha(f64::NAN), &rho, &sigma)?;
        return Ok(Output::Value {
            json: json!({ "kind": a.kind.name(), "value": v }),
            ok: true,
        });
    }
    let alphas = grid_or_single(&a.grid, a.alpha, "alpha")?;
    let points = alphas
        .iter()
        .map(|&x| Ok(CurvePoint::new(x, evaluate(a.kind.with_alpha(x), &rho, &sigma)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Output::Curve(points))
}

fn case_name(c: TildeCase) -> &'static str {
    match c {
        TildeCase::Zero => "zero",
        TildeCase::Interior => "interior",
        TildeCase::Linear => "linear",
    }
}

fn tradeoff_cmd(a: &TradeoffArgs) -> Result<Output> {
    let (rho, sigma) = (read_state(&a.pair.rho)?, read_state(&a.pair.sigma)?);
    let xs = grid_or_single(&a.grid, a.r, "r")?;
    let classical = match (&rho, &sigma) {
        (State::Classical(x), State::Classical(y)) => Some((x, y)),
        _ => None,
    };
    let points = match a.quantity {
        TradeoffQuantity::Hoeffding => xs
            .iter()
            .map(|&r| Ok(CurvePoint::new(r, tradeoff::hoeffding(&rho, &sigma, r)?)))
            .collect::<Result<Vec<_>>>()?,
        TradeoffQuantity::Anti => xs
            .iter()
            .map(|&r| Ok(CurvePoint::new(r, tradeoff::hoeffding_anti(&rho, &sigma, r)?)))
            .collect::<Result<Vec<_>>>()?,
        TradeoffQuantity::TildePsi => {
            let ld = match (&rho, &sigma) {
                (State::Classical(x), State::Classical(y)) => LegendreData::classical(x, y)?,
                (State::Quantum(x), State::Quantum(y)) => LegendreData::quantum_sandwiched(x, y)?,
                _ => bail!("states must be of the same kind"),
            };
            xs.iter()
                .map(|&r| {
                    let (v, c) = ld.tilde_psi(r)?;
                    Ok(CurvePoint::tagged(r, v, case_name(c)))
                })
                .collect::<Result<Vec<_>>>()?
        }
        TradeoffQuantity::Arc => {
            let (x, y) = classical.context("the Hellinger arc is implemented for classical pairs")?;
            let arcs = xs.iter().map(|&al| tradeoff::hellinger_arc(x, y, al)).collect::<explab::Result<Vec<_>>>()?;
            return Ok(Output::Value {
                json: serde_json::to_value(arcs)?,
                ok: true,
            });
        }
    };
    Ok(Output::Curve(points))
}

fn composite(a: &CompositeArgs, tol: f64) -> Result<Output> {
    let rs = io::read_hypothesis_set(&a.null)?;
    let ss = io::read_hypothesis_set(&a.alt)?;
    if a.kind.needs_alpha() != a.alpha.is_some() {
        bail!("--alpha is required exactly for the alpha-dependent kinds");
    }
    let pv = set_divergence(a.kind.with_alpha(a.alpha.unwrap_or(f64::NAN)), &rs, &ss)?;
    let mut out = json!({ "kind": a.kind.name(), "set_divergence": pv });
    let mut ok = true;
    if let Some(r) = a.r {
        let cfg = SolverConfig {
            gap_tol: tol.min(SolverConfig::default().gap_tol),
            ..SolverConfig::default()
        };
        let pair = minimize_hr_over_hulls(&rs, &ss, r, &cfg)?;
        let cert = match optimality_certificate(&pair, &rs, &ss) {
            Ok(c) => serde_json::to_value(c)?,
            Err(e @ explab::Error::CertificateFailed { .. }) => {
                ok = false;
                json!({ "error": e.to_string() })
            }
            Err(e) => return Err(e.into()),
        };
        out["r"] = json!(r);
        out["minimizer"] = serde_json::to_value(&pair)?;
        out["certificate"] = cert;
    }
    Ok(Output::Value { json: out, ok })
}

fn typelab_cmd(a: &TypelabArgs, format: Format) -> Result<Output> {
    let (rho, sigma) = match (read_state(&a.pair.rho)?, read_state(&a.pair.sigma)?) {
        (State::Classical(x), State::Classical(y)) => (x, y),
        _ => bail!("typelab works on classical weights"),
    };
    let (test, label, param): (SymmetricTest, &str, f64) = match a.test {
        TestKind::Ball => {
            let r = a.r.context("--test ball needs --r")?;
            (typelab::ball_test(&sigma, r, a.n)?, "r", r)
        }
        TestKind::Np => {
            let c = a.c.context("--test np needs --c")?;
            (typelab::np_test(&rho, &sigma, c, a.n)?, "c", c)
        }
    };
    if format == Format::Csv {
        return Ok(Output::Text(test.to_csv()));
    }
    let e = typelab::exact_errors(&test, &[rho], &[sigma.clone()])?;
    let mut out = json!({ "n": a.n, label: param, "types": test.len(), "errors": e });
    if let TestKind::Ball = a.test {
        let r = param;
        let bound = typelab::ball_log_beta_bound(a.n, sigma.len(), r);
        out["log_beta_bound"] = json!(bound);
        let lb = -e.neg_log_beta.to_float();
        out["beta_bound_holds"] = json!(lb <= bound);
        return Ok(Output::Value { json: out, ok: lb <= bound });
    }
    Ok(Output::Value { json: out, ok: true })
}

fn gallery_cmd(g: &GalleryCmd, seed: u64) -> Result<Output> {
    let rep = match g {
        GalleryCmd::Coin { k, grid, n } => gallery::coin_example_report(*k, &io::parse_grid(grid)?, *n)?,
        GalleryCmd::Interval { n, r, depth } => {
            let depth = match depth {
                Some(d) => *d,
                None => gallery::interval_constructed_test(*n, *r)?.m_n,
            };
            gallery::interval_example_report(*n, *r, depth)?
        }
        GalleryCmd::Stein { triple: t, state } => {
            let (rho, s1, s2) = triple(t)?;
            let rho = match state {
                SteinState::Given => rho,
                SteinState::Top => gallery::top_diff_state(&s1, &s2)?,
                SteinState::Half => gallery::half_delta_state(&s1, &s2)?,
            };
            gallery::stein_gap_report(&rho, &s1, &s2)?
        }
        GalleryCmd::Minimal => gallery::minimal_report()?,
        GalleryCmd::Direct { triple: t, r, t: rate } => {
            let (rho, s1, s2) = triple(t)?;
            gallery::tune_direct_example(&rho, &s1, &s2, *r, *rate)?
        }
        GalleryCmd::Pure { k, m, dim, n } => {
            let mut g = explab::random::rng(seed);
            let psis: Vec<_> = (0..*k).map(|_| explab::random::random_unit_vector(*dim, &mut g)).collect();
            let phis: Vec<_> = (0..*m).map(|_| explab::random::random_unit_vector(*dim, &mut g)).collect();
            gallery::pure_state_report(&psis, &phis, *n)?
        }
        GalleryCmd::Semiclassical { k, m, np } => {
            let (rhos, sigmas, tests) = gallery::random_semiclassical_instance(*k, *m, *np, seed);
            gallery::semiclassical_combine(&rhos, &sigmas, &tests)?.report
        }
    };
    Ok(Output::Report(rep))
}

fn verify_cmd(v: &VerifyCmd, tol: f64, seed: u64) -> Result<Output> {
    match v {
        VerifyCmd::Suite { name, count } => Ok(Output::Report(verify::run_suite(
            name,
            &SuiteConfig {
                tol,
                seed,
                count: *count,
            },
        )?)),
        VerifyCmd::All { count } => Ok(Output::Reports(verify::run_all(&SuiteConfig {
            tol,
            seed,
            count: *count,
        })?)),
    }
}

/// Leaf values of a JSON document as `path,value` rows.
fn flatten(v: &Value, prefix: &str, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(x, &join(prefix, k), rows)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| flatten(x, &join(prefix, &i.to_string()), rows)),
        Value::String(s) => rows.push((prefix.into(), s.clone())),
        other => rows.push((prefix.into(), other.to_string())),
    }
}

fn join(prefix: &str, k: &str) -> String {
    if prefix.is_empty() {
        k.into()
    } else {
        format!("{prefix}.{k}")
    }
}

fn emit(out: &Output, format: Format, w: &mut impl Write) -> Result<bool> {
    match out {
        Output::Report(r) => {
            io::emit_report(r, format, w)?;
            Ok(r.pass())
        }
        Output::Reports(rs) => {
            io::emit_reports(rs, format, w)?;
            Ok(rs.iter().all(CounterexampleReport::pass))
        }
        Output::Curve(pts) => {
            io::emit_curve(pts, format, w)?;
            Ok(true)
        }
        Output::Value { json, ok } => {
            match format {
                Format::Json => {
                    serde_json::to_writer_pretty(&mut *w, json)?;
                    writeln!(w)?;
                }
                Format::Csv => {
                    let mut rows = vec![];
                    flatten(json, "", &mut rows);
                    writeln!(w, "key,value")?;
                    for (k, v) in rows {
                        writeln!(w, "{k},{v}")?;
                    }
                }
            }
            Ok(*ok)
        }
        Output::Text(t) => {
            w.write_all(t.as_bytes())?;
            Ok(true)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    if let Ok(t) = std::env::var("EXPLAB_THREADS") {
        let n: usize = t.parse().with_context(|| format!("EXPLAB_THREADS={t}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let format = Format::from(cli.format);
    let out = match &cli.cmd {
        Cmd::Divergence(a) => divergence(a)?,
        Cmd::Tradeoff(a) => tradeoff_cmd(a)?,
        Cmd::Composite(a) => composite(a, cli.tol)?,
        Cmd::Typelab(a) => typelab_cmd(a, format)?,
        Cmd::Gallery(g) => gallery_cmd(g, cli.seed)?,
        Cmd::Verify(v) => verify_cmd(v, cli.tol, cli.seed)?,
    };
    let ok = match &cli.out {
        Some(p) => {
            let f = std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
            let mut w = std::io::BufWriter::new(f);
            let ok = emit(&out, format, &mut w)?;
            w.flush()?;
            ok
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            emit(&out, format, &mut w)?
        }
    };
    Ok(ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
