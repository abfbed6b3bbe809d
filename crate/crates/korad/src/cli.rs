//! Command-line front end: subcommand dispatch, config resolution, CSV
//! emission and the exit-code contract.
//!
//! Exit codes: 0 holds/success, 1 fails, 2 inconclusive, 3 computational
//! failure, 4 configuration error. The global `--tol`, `--grid` and
//! `--seed` flags (environment overrides `KORAD_TOL`, `KORAD_GRID`,
//! `KORAD_SEED`) tune the report tolerance band, the boundary value grid
//! and the sweep seed; all other tolerances are fixed by the solvers.

use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bvp::{self, BoundaryData, BvpProblem};
use crate::config::{write_csv, Config};
use crate::construct::{self, CspLocatedSpec, CspSpec, ExteriorSpec, KhasminskiiSpec, SlSpec};
use crate::error::ConfigError;
use crate::ko::{self, Endpoint};
use crate::nonlinearity::{DynFn, KernelKind, Triple};
use crate::verify::{self, CounterexampleCase, ResidualSide, SmoothProfile, TheoremParams};

#[derive(Parser, Debug)]
#[command(
    name = "korad",
    about = "radial ODE laboratory for quasilinear inequalities on model manifolds",
    version
)]
struct Cli {
    /// tolerance band for sign verdicts in reports
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// grid size for the boundary value solvers
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// seed for randomized sweeps
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a Keller-Osserman condition
    Ko(KoArgs),
    /// Boundary value problems
    Bvp {
        #[command(subcommand)]
        action: BvpAction,
    },
    /// Build a certified supersolution or potential
    Construct(ConstructArgs),
    /// Independent verification: residuals, counterexamples, theorems
    Verify {
        #[command(subcommand)]
        action: VerifyAction,
    },
    /// Theorem applicability table (alias of `verify theorems`)
    Theorems(ConfigArg),
    /// Dump the radial geometry of a model as CSV
    Model(ModelArgs),
}

#[derive(clap::Args, Debug)]
struct KoArgs {
    /// operator family for the flag form
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    chi: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long, value_enum, default_value = "zero")]
    endpoint: EndpointArg,
    #[arg(long, value_enum, default_value = "standard")]
    kind: KindArg,
    /// config file (overrides the flag form)
    #[arg(long)]
    config: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum EndpointArg {
    Zero,
    Infinity,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum KindArg {
    Standard,
    Mc,
}

#[derive(Subcommand, Debug)]
enum BvpAction {
    /// Solve a two-point problem and write the profile as CSV
    Solve(BvpSolveArgs),
}

#[derive(clap::Args, Debug)]
struct BvpSolveArgs {
    #[arg(long, value_enum)]
    kind: BvpKindArg,
    #[arg(long)]
    config: String,
    #[arg(long)]
    out: String,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BvpKindArg {
    Dirichlet,
    Mixed,
}

#[derive(clap::Args, Debug)]
struct ConstructArgs {
    #[arg(long)]
    kind: String,
    #[arg(long)]
    config: String,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand, Debug)]
enum VerifyAction {
    /// Residual sign report for an analytic profile on a model
    Residual(OutArgs),
    /// One counterexample-family check
    Counterexample(OutArgs),
    /// Theorem applicability table
    Theorems(ConfigArg),
}

#[derive(clap::Args, Debug)]
struct OutArgs {
    #[arg(long)]
    config: String,
    #[arg(long)]
    out: Option<String>,
    /// for counterexamples: run a seeded in/out random sweep of this many
    /// draws per side instead of the single configured check
    #[arg(long)]
    sweep: Option<usize>,
}

#[derive(clap::Args, Debug)]
struct ConfigArg {
    #[arg(long)]
    config: String,
}

#[derive(clap::Args, Debug)]
struct ModelArgs {
    #[arg(long)]
    config: String,
    #[arg(long)]
    out: String,
}

/// Exit code for a computational failure.
const EXIT_FAILURE: i32 = 3;
/// Exit code for a configuration error.
const EXIT_CONFIG: i32 = 4;

struct Globals {
    tol: f64,
    grid: usize,
    seed: u64,
}

fn env_or<T: std::str::FromStr>(name: &str, flag: Option<T>, default: T) -> T {
    flag.or_else(|| std::env::var(name).ok().and_then(|v| v.parse().ok()))
        .unwrap_or(default)
}

/// Parses `argv` and runs one command; returns the process exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { 0 };
        }
    };
    let globals = Globals {
        tol: env_or("KORAD_TOL", cli.tol, 1e-8),
        grid: env_or("KORAD_GRID", cli.grid, 512),
        seed: env_or("KORAD_SEED", cli.seed, 42),
    };
    let result = match cli.command {
        Command::Ko(args) => run_ko(args),
        Command::Bvp { action } => match action {
            BvpAction::Solve(args) => run_bvp_solve(args, &globals),
        },
        Command::Construct(args) => run_construct(args),
        Command::Verify { action } => match action {
            VerifyAction::Residual(args) => run_verify_residual(args, &globals),
            VerifyAction::Counterexample(args) => run_verify_counterexample(args, &globals),
            VerifyAction::Theorems(args) => run_theorems(args),
        },
        Command::Theorems(args) => run_theorems(args),
        Command::Model(args) => run_model(args),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Config(e)) => {
            eprintln!("korad: {e}");
            EXIT_CONFIG
        }
        Err(CliError::Computation(msg)) => {
            eprintln!("korad: {msg}");
            EXIT_FAILURE
        }
    }
}

enum CliError {
    Config(ConfigError),
    Computation(String),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Computation(format!("i/o error: {e}"))
    }
}

fn comp<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Computation(e.to_string())
}

fn run_ko(args: KoArgs) -> Result<i32, CliError> {
    let (triple, endpoint, kind) = if let Some(path) = &args.config {
        let cfg = Config::from_file(path)?;
        let triple = cfg.read_triple()?;
        let endpoint = match cfg.opt_str("ko.endpoint").unwrap_or("zero") {
            "zero" => Endpoint::Zero,
            "infinity" => Endpoint::Infinity,
            other => {
                return Err(CliError::Computation(format!("bad endpoint `{other}`")));
            }
        };
        let kind = match cfg.opt_str("ko.kind").unwrap_or("standard") {
            "standard" => KernelKind::Standard,
            "mc" => KernelKind::MeanCurvatureVariant,
            other => return Err(CliError::Computation(format!("bad kernel kind `{other}`"))),
        };
        cfg.reject_unknown()?;
        (triple, endpoint, kind)
    } else {
        let family = args.family.as_deref().unwrap_or("plaplace");
        if family != "plaplace" {
            return Err(CliError::Computation(format!(
                "flag form only supports --family plaplace, got `{family}` (use --config)"
            )));
        }
        let p = args.p.unwrap_or(2.0);
        let chi = args.chi.unwrap_or(p - 1.0);
        let omega = args.omega.unwrap_or(1.0);
        let triple = Triple::power_family(p, chi, omega);
        let endpoint = match args.endpoint {
            EndpointArg::Zero => Endpoint::Zero,
            EndpointArg::Infinity => Endpoint::Infinity,
        };
        let kind = match args.kind {
            KindArg::Standard => KernelKind::Standard,
            KindArg::Mc => KernelKind::MeanCurvatureVariant,
        };
        (triple, endpoint, kind)
    };
    let verdict = ko::ko_verdict(&triple, endpoint, kind).map_err(comp)?;
    println!(
        "ko endpoint={endpoint} kind={} outcome={} exponent={} fit_residual={:.3e} route={:?} decades={}",
        match kind {
            KernelKind::Standard => "standard",
            KernelKind::MeanCurvatureVariant => "mc",
        },
        verdict.outcome,
        verdict
            .exponent
            .map(|g| format!("{g:.6}"))
            .unwrap_or_else(|| "n/a".into()),
        verdict.fit_residual,
        verdict.route,
        verdict.decade_sums.len(),
    );
    Ok(verdict.outcome.exit_code())
}

fn read_bvp_problem(
    cfg: &Config,
    kind: BvpKindArg,
    grid: usize,
) -> Result<BvpProblem, CliError> {
    let triple = cfg.read_triple()?;
    let t_end = cfg.get_f64("bvp.t_end")?;
    let eta = cfg.get_f64("bvp.eta")?;
    let xi = cfg.get_f64("bvp.xi")?;
    let grid_n = cfg.opt_usize("bvp.grid", grid)?;
    let volume_factor: DynFn = match cfg.opt_str("bvp.volume").unwrap_or("unit") {
        "unit" => Arc::new(|_| 1.0),
        "model" => {
            let model = cfg.read_model()?;
            let r0 = cfg.opt_f64("bvp.r0", 0.0)?;
            Arc::new(move |t: f64| model.sphere_volume(r0 + t))
        }
        other => return Err(CliError::Computation(format!("bad bvp.volume `{other}`"))),
    };
    let weight_a: DynFn = match cfg.opt_str("bvp.weight").unwrap_or("unit") {
        "unit" => Arc::new(|_| 1.0),
        "powerdecay" => {
            let w = cfg.read_weight("bvp.aweight")?;
            Arc::new(move |t: f64| w.eval(t))
        }
        other => return Err(CliError::Computation(format!("bad bvp.weight `{other}`"))),
    };
    let boundary = match kind {
        BvpKindArg::Dirichlet => BoundaryData::Dirichlet { eta },
        BvpKindArg::Mixed => BoundaryData::Mixed { eta },
    };
    Ok(BvpProblem {
        triple,
        weight_a,
        volume_factor,
        t_end,
        boundary,
        gradient_ceiling: xi,
        grid_n,
    })
}

fn run_bvp_solve(args: BvpSolveArgs, globals: &Globals) -> Result<i32, CliError> {
    let cfg = Config::from_file(&args.config)?;
    let problem = read_bvp_problem(&cfg, args.kind, globals.grid)?;
    cfg.reject_unknown()?;
    let solution = match args.kind {
        BvpKindArg::Dirichlet => bvp::solve_dirichlet(&problem),
        BvpKindArg::Mixed => bvp::solve_mixed(&problem),
    }
    .map_err(comp)?;
    // independent residual of the integrated equation at the nodes
    let prof = &solution.profile;
    let phi = &problem.triple.phi;
    let mut residual = Vec::with_capacity(prof.len());
    let mut acc = 0.0;
    let mut prev = 0.0;
    let p0 = (problem.volume_factor)(prof.ts()[0]);
    let base = p0 * phi.eval_odd(prof.derivs()[0]);
    for i in 0..prof.len() {
        let t = prof.ts()[i];
        let p = (problem.volume_factor)(t);
        let integrand =
            p * (problem.weight_a)(t) * problem.triple.f_times_l(prof.values()[i], prof.derivs()[i].abs());
        if i > 0 {
            acc += 0.5 * (integrand + prev) * (t - prof.ts()[i - 1]);
        }
        prev = integrand;
        residual.push(p * phi.eval_odd(prof.derivs()[i]) - base - acc);
    }
    write_csv(
        &args.out,
        &["t", "w", "wprime", "residual"],
        &[prof.ts(), prof.values(), prof.derivs(), &residual],
    )?;
    println!(
        "bvp kind={:?} nodes={} origin_slope={:.6e} plateau_radius={:.6e} iterations={}",
        args.kind,
        prof.len(),
        solution.origin_slope,
        solution.plateau_radius,
        solution.picard_iterations,
    );
    Ok(0)
}

fn theta_from_config(cfg: &Config) -> Result<DynFn, CliError> {
    Ok(match cfg.opt_str("construct.theta").unwrap_or("zero") {
        "zero" => Arc::new(|_| 0.0),
        // bound for -Delta r on shrinking models (compact support side)
        "model-lower" => {
            let model = cfg.read_model()?;
            Arc::new(move |r: f64| (-model.laplacian(r)).max(0.0))
        }
        // bound for +Delta r on expanding models (Liouville side)
        "model-upper" => {
            let model = cfg.read_model()?;
            Arc::new(move |r: f64| model.laplacian(r).max(0.0))
        }
        other => {
            return Err(CliError::Computation(format!(
                "bad construct.theta `{other}`"
            )))
        }
    })
}

fn run_construct(args: ConstructArgs) -> Result<i32, CliError> {
    let cfg = Config::from_file(&args.config)?;
    let triple = cfg.read_triple()?;
    let profile = match args.kind.as_str() {
        "cspA" => {
            let spec = CspSpec {
                triple,
                beta: cfg.read_weight("beta")?,
                beta_bar: cfg.read_weight("betabar")?,
                theta: theta_from_config(&cfg)?,
                r0: cfg.opt_f64("construct.r0", 1.0)?,
                support_start: cfg.get_f64("construct.support_start")?,
                epsilon: cfg.opt_f64("construct.epsilon", 1.0)?,
            };
            cfg.reject_unknown()?;
            construct::build_csp_supersolution(&spec).map_err(comp)?
        }
        "cspB" => {
            let spec = CspLocatedSpec {
                triple,
                beta: cfg.read_weight("beta")?,
                theta: theta_from_config(&cfg)?,
                r0: cfg.opt_f64("construct.r0", 1.0)?,
                support_start: cfg.get_f64("construct.support_start")?,
                epsilon: cfg.opt_f64("construct.epsilon", 1.0)?,
                b2: cfg.opt_f64("construct.b2", construct::DEFAULT_B2)?,
            };
            cfg.reject_unknown()?;
            construct::build_csp_supersolution_located(&spec).map_err(comp)?
        }
        "sl" | "sl-mc" => {
            let spec = SlSpec {
                triple,
                beta: cfg.read_weight("beta")?,
                beta_bar: cfg.read_weight("betabar")?,
                theta: theta_from_config(&cfg)?,
                r0: cfg.opt_f64("construct.r0", 1.0)?,
                r1: cfg.get_f64("construct.r1")?,
                delta: cfg.opt_f64("construct.delta", 0.1)?,
                lambda: cfg.opt_f64("construct.lambda", 0.5)?,
                epsilon: cfg.opt_f64("construct.epsilon", 1.0)?,
                mc_variant: args.kind == "sl-mc",
            };
            cfg.reject_unknown()?;
            construct::build_sl_supersolution(&spec).map_err(comp)?
        }
        "khasminskii" => {
            let model = cfg.read_model()?;
            let spec = KhasminskiiSpec {
                triple,
                volume: Arc::new(move |r: f64| model.sphere_volume(r)),
                beta: cfg.read_weight("beta")?,
                r0: cfg.opt_f64("construct.r0", 1.0)?,
                r1: cfg.get_f64("construct.r1")?,
                eta: cfg.opt_f64("construct.eta", 0.5)?,
                epsilon: cfg.opt_f64("construct.epsilon", 0.1)?,
                k_const: cfg.opt_f64("construct.k", 1.0)?,
                r_max: cfg.opt_f64("construct.rmax", 1e6)?,
            };
            cfg.reject_unknown()?;
            construct::build_khasminskii(&spec).map_err(comp)?
        }
        "exterior" => {
            let model = cfg.read_model()?;
            let spec = ExteriorSpec {
                triple,
                volume: Arc::new(move |r: f64| model.sphere_volume(r)),
                beta: cfg.read_weight("beta")?,
                r0: cfg.opt_f64("construct.r0", 1.0)?,
                step: cfg.opt_f64("construct.step", 1.0)?,
                eta: cfg.get_f64("construct.eta")?,
                xi: cfg.opt_f64("construct.xi", 0.9)?,
            };
            cfg.reject_unknown()?;
            construct::solve_exterior_dirichlet(&spec).map_err(comp)?
        }
        other => {
            return Err(CliError::Computation(format!(
                "unknown construct kind `{other}` (cspA|cspB|sl|sl-mc|khasminskii|exterior)"
            )))
        }
    };
    for c in &profile.certificates {
        println!(
            "certificate {}: {} (value={:.6e}, tol={:.6e})",
            c.name,
            if c.passed { "pass" } else { "fail" },
            c.value,
            c.tolerance
        );
    }
    if let Some(out) = &args.out {
        let prof = &profile.profile;
        write_csv(
            out,
            &["r", "w", "wprime"],
            &[prof.ts(), prof.values(), prof.derivs()],
        )?;
    }
    Ok(if profile.all_passed() { 0 } else { 1 })
}

fn read_profile(cfg: &Config) -> Result<SmoothProfile, CliError> {
    Ok(match cfg.get_str("profile.family")? {
        "power" => SmoothProfile::power(
            cfg.opt_f64("profile.scale", 1.0)?,
            cfg.get_f64("profile.exponent")?,
        ),
        "shiftedpower" => SmoothProfile::shifted_power(
            cfg.opt_f64("profile.scale", 1.0)?,
            cfg.get_f64("profile.exponent")?,
        ),
        "oneplusr2" => SmoothProfile::power_of_one_plus_r2(cfg.get_f64("profile.exponent")?),
        "powerlog" => SmoothProfile::power_over_log(cfg.get_f64("profile.exponent")?),
        "constant" => SmoothProfile::constant(cfg.get_f64("profile.scale")?),
        other => {
            return Err(CliError::Computation(format!(
                "unknown profile family `{other}`"
            )))
        }
    })
}

fn run_verify_residual(args: OutArgs, globals: &Globals) -> Result<i32, CliError> {
    let cfg = Config::from_file(&args.config)?;
    let model = cfg.read_model()?;
    let triple = cfg.read_triple()?;
    let weight = cfg.read_weight("weight")?;
    let profile = read_profile(&cfg)?;
    let lo = cfg.opt_f64("scan.lo", 1.0)?;
    let hi = cfg.opt_f64("scan.hi", 100.0)?;
    let n = cfg.opt_usize("scan.n", 200)?;
    let side = match cfg.opt_str("verify.side").unwrap_or("nonneg") {
        "nonneg" => ResidualSide::NonNegative,
        "nonpos" => ResidualSide::NonPositive,
        other => return Err(CliError::Computation(format!("bad verify.side `{other}`"))),
    };
    cfg.reject_unknown()?;
    let rs: Vec<f64> = (0..=n)
        .map(|i| lo * (hi / lo).powf(i as f64 / n as f64))
        .collect();
    let weight_fn: DynFn = Arc::new(move |r: f64| weight.eval(r));
    let report = verify::residual_report(&model, &triple, &weight_fn, &profile, &rs);
    if let Some(out) = &args.out {
        let u: Vec<f64> = rs.iter().map(|&r| (profile.value)(r)).collect();
        let up: Vec<f64> = rs.iter().map(|&r| (profile.d1)(r)).collect();
        let rhs: Vec<f64> = rs
            .iter()
            .zip(u.iter().zip(&up))
            .map(|(&r, (&uv, &upv))| (weight_fn)(r) * triple.f_times_l(uv, upv.abs()))
            .collect();
        let lhs: Vec<f64> = report
            .residuals
            .iter()
            .zip(&rhs)
            .map(|(res, rh)| res + rh)
            .collect();
        write_csv(
            out,
            &["r", "u", "uprime", "lhs", "rhs", "residual"],
            &[&rs, &u, &up, &lhs, &rhs, &report.residuals],
        )?;
    }
    let tol = globals.tol * (1.0 + report.scale);
    let ok = match side {
        ResidualSide::NonNegative => report.min >= -tol,
        ResidualSide::NonPositive => report.max <= tol,
    };
    println!(
        "residual side={side:?} ok={ok} min={:.6e} at r={:.6e} max={:.6e}",
        report.min, report.argmin, report.max
    );
    Ok(if ok { 0 } else { 1 })
}

fn read_counterexample(cfg: &Config) -> Result<CounterexampleCase, CliError> {
    let family = cfg.get_str("family")?;
    Ok(match family {
        "cspintro" => CounterexampleCase::CspIntro {
            m: cfg.opt_usize("params.m", 3)?,
            alpha: cfg.get_f64("params.alpha")?,
            omega: cfg.get_f64("params.omega")?,
            beta: cfg.get_f64("params.beta")?,
        },
        "cspsharp" => CounterexampleCase::CspSharp {
            m: cfg.opt_usize("params.m", 3)?,
            p: cfg.opt_f64("params.p", 2.0)?,
            delta: cfg.get_f64("params.delta")?,
            mu: cfg.get_f64("params.mu")?,
            chi: cfg.get_f64("params.chi")?,
            omega: cfg.get_f64("params.omega")?,
            sigma: cfg.get_f64("params.sigma")?,
        },
        "wmppower" => CounterexampleCase::WmpPower {
            m: cfg.opt_usize("params.m", 3)?,
            p: cfg.opt_f64("params.p", 2.0)?,
            q: cfg.opt_f64("params.q", 1.0)?,
            kappa: cfg.opt_f64("params.kappa", 1.0)?,
            alpha: cfg.get_f64("params.alpha")?,
            kbar: cfg.opt_f64("params.kbar", 1.0)?,
            mu: cfg.get_f64("params.mu")?,
            chi: cfg.get_f64("params.chi")?,
            sigma: cfg.get_f64("params.sigma")?,
        },
        "wmplog" => CounterexampleCase::WmpLog {
            m: cfg.opt_usize("params.m", 3)?,
            p: cfg.opt_f64("params.p", 2.0)?,
            q: cfg.opt_f64("params.q", 1.0)?,
            kappa: cfg.opt_f64("params.kappa", 1.0)?,
            alpha: cfg.get_f64("params.alpha")?,
            mu: cfg.get_f64("params.mu")?,
            chi: cfg.get_f64("params.chi")?,
            sigma: cfg.get_f64("params.sigma")?,
        },
        "slsharp" => CounterexampleCase::SlSharp {
            m: cfg.opt_usize("params.m", 3)?,
            kappa: cfg.opt_f64("params.kappa", 1.0)?,
            alpha: cfg.get_f64("params.alpha")?,
            mu: cfg.get_f64("params.mu")?,
            chi: cfg.get_f64("params.chi")?,
            omega: cfg.get_f64("params.omega")?,
            sigma: cfg.get_f64("params.sigma")?,
        },
        other => {
            return Err(CliError::Computation(format!(
                "unknown counterexample family `{other}`"
            )))
        }
    })
}

fn run_verify_counterexample(args: OutArgs, globals: &Globals) -> Result<i32, CliError> {
    let cfg = Config::from_file(&args.config)?;
    if let Some(draws) = args.sweep {
        let family = cfg.get_str("family")?.to_string();
        cfg.reject_unknown()?;
        let (in_ok, in_total, out_ok, out_total) =
            gallery_sweep(&family, draws, globals.seed);
        println!(
            "counterexample sweep family={family} in_range={in_ok}/{in_total} out_of_range={out_ok}/{out_total}"
        );
        return Ok(if in_ok == in_total && out_ok == out_total { 0 } else { 1 });
    }
    let case = read_counterexample(&cfg)?;
    cfg.reject_unknown()?;
    let report = verify::counterexample_check(&case);
    println!(
        "counterexample supported={} in_range={} eventually_nonneg={} negative_found={} consistent={} stabilized_at={}",
        report.supported,
        report.in_range,
        report.eventually_nonneg,
        report.negative_found,
        report.consistent,
        report
            .stabilized_at
            .map(|r| format!("{r:.3e}"))
            .unwrap_or_else(|| "n/a".into()),
    );
    if let Some(out) = &args.out {
        let rs = &report.last_window.rs;
        let (u, up, lhs, rhs) = case.tabulate(report.comparison_constant, rs);
        write_csv(
            out,
            &["r", "u", "uprime", "lhs", "rhs", "residual"],
            &[rs, &u, &up, &lhs, &rhs, &report.last_window.residuals],
        )?;
    }
    Ok(if report.consistent { 0 } else { 1 })
}

fn run_theorems(args: ConfigArg) -> Result<i32, CliError> {
    let cfg = Config::from_file(&args.config)?;
    let params = TheoremParams {
        m: cfg.get_usize("params.m")?,
        p: cfg.opt_f64("params.p", 2.0)?,
        p_bar: cfg.opt_f64("params.pbar", 2.0)?,
        kappa: cfg.opt_f64("params.kappa", 0.0)?,
        alpha: cfg.get_f64("params.alpha")?,
        mu: cfg.get_f64("params.mu")?,
        chi: cfg.get_f64("params.chi")?,
        omega: cfg.get_f64("params.omega")?,
        v_infinity: cfg.opt_f64("params.vinf", 0.0)?,
    };
    cfg.reject_unknown()?;
    let verdicts = verify::theorem_applicability(&params);
    let mut all = true;
    for v in &verdicts {
        all &= v.applicable;
        match &v.failed_clause {
            None => println!("theorem {}: applicable", v.theorem.name()),
            Some(clause) => println!("theorem {}: not applicable (failed: {clause})", v.theorem.name()),
        }
    }
    Ok(if all { 0 } else { 1 })
}

fn run_model(args: ModelArgs) -> Result<i32, CliError> {
    let cfg = Config::from_file(&args.config)?;
    let model = cfg.read_model()?;
    let lo = cfg.opt_f64("dump.lo", 0.1)?;
    let hi = cfg.opt_f64("dump.hi", 10.0)?;
    let n = cfg.opt_usize("dump.n", 200)?;
    cfg.reject_unknown()?;
    let rs: Vec<f64> = (0..=n)
        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
        .collect();
    let g: Vec<f64> = rs.iter().map(|&r| model.g(r)).collect();
    let gp: Vec<f64> = rs.iter().map(|&r| model.g_prime(r)).collect();
    let v: Vec<f64> = rs.iter().map(|&r| model.sphere_volume(r)).collect();
    let lap: Vec<f64> = rs.iter().map(|&r| model.laplacian(r)).collect();
    write_csv(&args.out, &["r", "g", "gprime", "v", "laplacian"], &[&rs, &g, &gp, &v, &lap])?;
    println!("model dumped {} rows to {}", rs.len(), args.out);
    Ok(0)
}

/// Randomized in/out sweep of a counterexample family for the acceptance
/// suite and the gallery example; seeded and deterministic.
pub fn gallery_sweep(
    family: &str,
    draws: usize,
    seed: u64,
) -> (usize, usize, usize, usize) {

    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut in_ok = 0;
    let mut in_total = 0;
    let mut out_ok = 0;
    let mut out_total = 0;
    for _ in 0..draws {
        let (in_case, out_case) = draw_pair(family, &mut rng);
        in_total += 1;
        let rep = verify::counterexample_check(&in_case);
        if rep.in_range && rep.eventually_nonneg && rep.consistent {
            in_ok += 1;
        }
        out_total += 1;
        let rep = verify::counterexample_check(&out_case);
        if !rep.in_range && rep.negative_found {
            out_ok += 1;
        }
    }
    (in_ok, in_total, out_ok, out_total)
}

/// One admissible draw and its margin-violating partner.
fn draw_pair<R: rand::Rng>(family: &str, rng: &mut R) -> (CounterexampleCase, CounterexampleCase) {
    const MARGIN: f64 = 0.25;
    match family {
        "cspintro" => {
            let m = rng.gen_range(2..=5);
            let alpha = rng.gen_range(2.5..5.0);
            let omega = rng.gen_range(0.1..0.7);
            let beta_max = (alpha - 2.0) / (1.0 - omega);
            let beta = rng.gen_range(0.2..1.0) * beta_max;
            let beta_out = (alpha - 2.0 + MARGIN) / (1.0 - omega);
            (
                CounterexampleCase::CspIntro { m, alpha, omega, beta },
                CounterexampleCase::CspIntro { m, alpha, omega, beta: beta_out },
            )
        }
        "cspsharp" => {
            let m = rng.gen_range(2..=4);
            let p: f64 = rng.gen_range(1.5..3.0);
            let delta = rng.gen_range(0.2..1.5);
            let alpha = 2.0 * delta - 2.0;
            let chi = rng.gen_range(0.5..(p - 1.0).clamp(0.51, 1.5));
            let omega = rng.gen_range(0.05..chi - 0.3_f64.min(chi * 0.5));
            let mu = chi - alpha / 2.0 + rng.gen_range(0.3..1.5);
            let sigma_max = (mu - chi + alpha / 2.0) / (chi - omega);
            let sigma = rng.gen_range(0.2..1.0) * sigma_max;
            let sigma_out = (mu - chi + alpha / 2.0 + MARGIN) / (chi - omega);
            (
                CounterexampleCase::CspSharp { m, p, delta, mu, chi, omega, sigma },
                CounterexampleCase::CspSharp { m, p, delta, mu, chi, omega, sigma: sigma_out },
            )
        }
        "wmppower" => {
            let m = rng.gen_range(2..=4);
            let p: f64 = rng.gen_range(1.6..3.0);
            let q = rng.gen_range(1.0..p.min(2.0));
            let kappa = rng.gen_range(0.4..1.5);
            let chi = rng.gen_range(0.3..(p - 1.0));
            let sigma = rng.gen_range(0.3..2.5);
            // pick a case 1, 2 or 4 draw, then the margin partner violates
            // the exponent balance 1 + alpha/2 >= chi + 1 - mu - chi sigma
            let case = rng.gen_range(0..3);
            let (alpha, mu) = match case {
                0 => {
                    // case 1: chi sigma > chi + 1 - mu
                    let mu = chi + 1.0 - chi * sigma + rng.gen_range(0.3..1.0);
                    (rng.gen_range(-1.0..1.0), mu)
                }
                1 => {
                    // case 2: equality, alpha > -2
                    let mu = chi + 1.0 - chi * sigma;
                    (rng.gen_range(-1.0..1.0), mu)
                }
                _ => {
                    // case 4: gap > 0 with enough volume
                    let gap = rng.gen_range(0.2..0.8);
                    let mu = chi + 1.0 - chi * sigma - gap;
                    let alpha = 2.0 * (gap - 1.0) + rng.gen_range(0.0..1.0);
                    (alpha, mu)
                }
            };
            // the out partner sits at gap = 1/2 with the exponent balance
            // 1 + alpha/2 >= gap violated by the margin: every case fails
            let gap_out = 0.5;
            let mu_out = chi + 1.0 - chi * sigma - gap_out;
            let alpha_out = 2.0 * (gap_out - 1.0) - 2.0 * MARGIN;
            (
                CounterexampleCase::WmpPower { m, p, q, kappa, alpha, kbar: 1.0, mu, chi, sigma },
                CounterexampleCase::WmpPower {
                    m,
                    p,
                    q,
                    kappa,
                    alpha: alpha_out,
                    kbar: 1.0,
                    mu: mu_out,
                    chi,
                    sigma,
                },
            )
        }
        "wmplog" => {
            let m = rng.gen_range(2..=4);
            let p: f64 = rng.gen_range(1.6..3.0);
            let q = rng.gen_range(1.0..p.min(2.0));
            let kappa = rng.gen_range(0.4..1.5);
            let chi = rng.gen_range(0.3..(p - 1.0));
            let sigma = rng.gen_range(0.3..2.0);
            let gap = rng.gen_range(0.55..0.9);
            let mu = chi + 1.0 - chi * sigma - gap;
            // case 5 needs the volume limit to diverge: 1 + alpha/2 > gap;
            // the log factors make the borderline soft, so the out partner
            // violates the balance by a full unit
            let alpha = 2.0 * (gap - 1.0) + rng.gen_range(0.3..1.0);
            let alpha_out = 2.0 * (gap - 1.0) - 4.0 * MARGIN;
            (
                CounterexampleCase::WmpLog { m, p, q, kappa, alpha, mu, chi, sigma },
                CounterexampleCase::WmpLog { m, p, q, kappa, alpha: alpha_out, mu, chi, sigma },
            )
        }
        "slsharp" => {
            let m = rng.gen_range(2..=4);
            let kappa = rng.gen_range(0.4..1.5);
            let alpha = rng.gen_range(-1.0..1.5);
            let chi = rng.gen_range(0.4..1.5);
            let omega = rng.gen_range(0.0..chi - 0.2);
            let sigma = rng.gen_range(1.1..3.0);
            // 2 sigma (omega - chi) <= alpha/2 + mu - chi
            let bound = 2.0 * sigma * (omega - chi) + chi - alpha / 2.0;
            let mu = bound + rng.gen_range(0.1..1.0);
            let mu_out = bound - MARGIN;
            (
                CounterexampleCase::SlSharp { m, kappa, alpha, mu, chi, omega, sigma },
                CounterexampleCase::SlSharp { m, kappa, alpha, mu: mu_out, chi, omega, sigma },
            )
        }
        other => panic!("unknown family {other}"),
    }
}

pub const GALLERY_FAMILIES: [&str; 5] = ["cspintro", "cspsharp", "wmppower", "wmplog", "slsharp"];
