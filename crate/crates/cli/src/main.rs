//! Command-line front end: quantile transforms, confidence intervals,
//! Monte Carlo coverage experiments and efficiency summaries for the
//! built-in Lehmann-alternative families.
//!
//! Exit codes: 0 success, 2 flag error, 3 model-domain error, 4 data error,
//! 5 range error (a transformed value left the mean map's range).

mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hoci::interval::{self, ConfidenceSpec, IntervalResult, Method};
use hoci::mc::{run_coverage, CoverageReport, ExperimentSpec};
use hoci::models::{standardized_cumulants_at, CumulantModel, ExpLehmann, PowerLehmann};
use hoci::{edgeworth, efficiency::TransformedFamily, Error};
use report::{array, num, object, opt_cell, opt_num, string};
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "hoci", version, about = "Higher-order confidence intervals for one-parameter families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the quantile transforms eta_nj / xi_nj at given points
    Quantile(QuantileArgs),
    /// Confidence interval for the model parameter from data or a mean
    Interval(IntervalArgs),
    /// Monte Carlo coverage experiment over an n grid (with exact-oracle
    /// columns where available)
    Coverage(CoverageArgs),
    /// Influence/variance/efficiency summary of the mean-based estimate
    Efficiency(EfficiencyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelId {
    ExpLehmann,
    PowerLehmann,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodId {
    Constant,
    Pivot,
    General,
}

impl From<MethodId> for Method {
    fn from(m: MethodId) -> Method {
        match m {
            MethodId::Constant => Method::ConstantCumulant,
            MethodId::Pivot => Method::MonotonePivot,
            MethodId::General => Method::GeneralTransform,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct ModelArgs {
    /// Which built-in family
    #[arg(long, value_enum)]
    model: ModelId,
    /// Shape parameter of the power-Lehmann family (required there,
    /// rejected elsewhere)
    #[arg(long, allow_negative_numbers = true)]
    nu: Option<f64>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QuantileArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Parameter at which cumulants are evaluated
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    theta: f64,
    #[arg(long)]
    n: u64,
    /// Expansion order (0..=4)
    #[arg(long)]
    j: u32,
    /// Evaluation points, comma separated
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    x: Vec<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct IntervalArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum)]
    method: MethodId,
    #[arg(long)]
    j: u32,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Upper tail point (with --x2; defaults to the symmetric pair for
    /// --alpha)
    #[arg(long, requires = "x2", allow_negative_numbers = true)]
    x1: Option<f64>,
    #[arg(long, requires = "x1", allow_negative_numbers = true)]
    x2: Option<f64>,
    /// Data file: one observation per line, '#' comments
    #[arg(long, conflicts_with_all = ["mean", "n"])]
    data: Option<PathBuf>,
    /// Pre-aggregated sample mean (requires --n)
    #[arg(long, requires = "n", allow_negative_numbers = true)]
    mean: Option<f64>,
    /// Sample size when --mean is given
    #[arg(long)]
    n: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CoverageArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// True parameter of the data-generating model
    #[arg(long, allow_negative_numbers = true)]
    theta: f64,
    /// Sample-size grid, comma separated, strictly increasing
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u64>,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Expansion orders, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    j: Vec<u32>,
    /// Interval method (defaults to pivot for exp-lehmann, general for
    /// power-lehmann)
    #[arg(long, value_enum)]
    method: Option<MethodId>,
    /// Replications per (n, j) cell
    #[arg(long)]
    reps: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct EfficiencyArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, allow_negative_numbers = true)]
    theta: f64,
    #[command(flatten)]
    output: OutputArgs,
}

struct AppError {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> AppError {
    AppError { code, message: message.into() }
}

impl From<Error> for AppError {
    fn from(e: Error) -> AppError {
        let code = match &e {
            Error::InvalidSpec(_)
            | Error::OrderOutOfRange { .. }
            | Error::LengthMismatch { .. }
            | Error::InsufficientCumulants { .. } => 2,
            Error::Domain(_)
            | Error::NonPositiveVariance(_)
            | Error::ThetaDependentCumulants { .. }
            | Error::NonMonotonePivot
            | Error::ReplicationFailures { .. } => 3,
            Error::OutOfRange { .. }
            | Error::Truncation { .. }
            | Error::BracketNotFound { .. }
            | Error::StencilFailure { .. } => 5,
        };
        AppError { code, message: e.to_string() }
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Quantile(args) => cmd_quantile(args),
        Command::Interval(args) => cmd_interval(args),
        Command::Coverage(args) => cmd_coverage(args),
        Command::Efficiency(args) => cmd_efficiency(args),
    };
    if let Err(e) = result {
        eprintln!("error: {}", e.message);
        std::process::exit(e.code);
    }
}

fn build_model(args: &ModelArgs) -> Result<Box<dyn CumulantModel>, AppError> {
    match args.model {
        ModelId::ExpLehmann => {
            if args.nu.is_some() {
                return Err(fail(2, "--nu is not a parameter of exp-lehmann"));
            }
            Ok(Box::new(ExpLehmann::new()))
        }
        ModelId::PowerLehmann => {
            let nu = args.nu.ok_or_else(|| fail(2, "power-lehmann requires --nu"))?;
            Ok(Box::new(PowerLehmann::new(nu)?))
        }
    }
}

fn check_theta(model: &dyn CumulantModel, theta: f64) -> Result<(), AppError> {
    let (lo, hi) = model.theta_domain();
    if !theta.is_finite() || theta <= lo || theta >= hi {
        return Err(fail(3, format!("theta = {theta} outside the parameter domain ({lo}, {hi})")));
    }
    Ok(())
}

fn emit(out: &Option<PathBuf>, content: String) -> Result<(), AppError> {
    match out {
        None => {
            println!("{content}");
            Ok(())
        }
        Some(path) => std::fs::write(path, content + "\n")
            .map_err(|e| fail(4, format!("cannot write {}: {e}", path.display()))),
    }
}

// ------------------------------------------------------------------ quantile

fn cmd_quantile(args: QuantileArgs) -> Result<(), AppError> {
    if args.j > edgeworth::MAX_ORDER {
        return Err(fail(2, format!("--j {} exceeds the supported cap j <= 4", args.j)));
    }
    let model = build_model(&args.model)?;
    check_theta(model.as_ref(), args.theta)?;
    let spec = edgeworth::ExpansionSpec::new(args.n, args.j)?;
    let ell = standardized_cumulants_at(model.as_ref(), args.theta, args.j + 2)?;

    let mut rows = Vec::new();
    for &x in &args.x {
        let eta = edgeworth::eta_transform(x, &spec, &ell)?;
        let xi = edgeworth::xi_transform(x, &spec, &ell)?;
        let terms = edgeworth::eta_terms(x, &spec, &ell)?;
        rows.push((x, eta, xi, terms));
    }

    let content = match args.output.format {
        Format::Json => object(&[
            ("schema_version", "1".into()),
            ("command", string("quantile")),
            ("model", string(&model.describe())),
            ("theta", num(args.theta)),
            ("n", args.n.to_string()),
            ("j", args.j.to_string()),
            (
                "points",
                array(rows.iter().map(|(x, eta, xi, terms)| {
                    object(&[
                        ("point", num(*x)),
                        ("eta", num(*eta)),
                        ("xi", num(*xi)),
                        ("terms", report::nums(terms)),
                    ])
                })),
            ),
        ]),
        Format::Csv => {
            let mut out = String::from("point,eta,xi");
            for r in 1..=args.j {
                write!(out, ",term_{r}").unwrap();
            }
            for (x, eta, xi, terms) in &rows {
                write!(out, "\n{},{},{}", num(*x), num(*eta), num(*xi)).unwrap();
                for t in terms {
                    write!(out, ",{}", num(*t)).unwrap();
                }
            }
            out
        }
    };
    emit(&args.output.out, content)
}

// ------------------------------------------------------------------ interval

fn read_data(path: &PathBuf, support: (f64, f64)) -> Result<Vec<f64>, AppError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| fail(4, format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (idx, line) in raw.lines().enumerate() {
        let line = line.trim_end_matches('\r').trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| {
            fail(4, format!("{}:{}: not a number: '{line}'", path.display(), idx + 1))
        })?;
        if !v.is_finite() || v < support.0 || v > support.1 {
            return Err(fail(
                4,
                format!(
                    "{}:{}: value {v} outside the model support [{}, {}]",
                    path.display(),
                    idx + 1,
                    support.0,
                    support.1
                ),
            ));
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(fail(4, format!("{}: no observations", path.display())));
    }
    Ok(values)
}

fn interval_json(model: &dyn CumulantModel, spec: &ConfidenceSpec, mean: f64, r: &IntervalResult) -> String {
    let warnings: Vec<String> = if r.series_warning {
        vec![string(
            "correction magnitudes are not decreasing; the series may be past its useful order at this n",
        )]
    } else {
        Vec::new()
    };
    object(&[
        ("schema_version", "1".into()),
        ("command", string("interval")),
        ("model", string(&model.describe())),
        ("method", string(r.method.as_str())),
        ("n", spec.n.to_string()),
        ("j", r.j.to_string()),
        ("alpha", num(spec.alpha)),
        ("x1", num(spec.x1)),
        ("x2", num(spec.x2)),
        ("mean", num(mean)),
        ("lower", num(r.lower)),
        ("upper", num(r.upper)),
        ("corrections", report::nums(&r.corrections)),
        ("warnings", array(warnings)),
    ])
}

fn interval_csv(model: &dyn CumulantModel, spec: &ConfidenceSpec, mean: f64, r: &IntervalResult) -> String {
    let mut out = String::from("model,method,n,j,alpha,mean,lower,upper,series_warning");
    for i in 1..=r.corrections.len() {
        write!(out, ",corr_{i}").unwrap();
    }
    write!(
        out,
        "\n{},{},{},{},{},{},{},{},{}",
        model.describe(),
        r.method.as_str(),
        spec.n,
        r.j,
        num(spec.alpha),
        num(mean),
        num(r.lower),
        num(r.upper),
        r.series_warning
    )
    .unwrap();
    for c in &r.corrections {
        write!(out, ",{}", num(*c)).unwrap();
    }
    out
}

fn cmd_interval(args: IntervalArgs) -> Result<(), AppError> {
    let method: Method = args.method.into();
    if args.j > method.max_order() {
        return Err(fail(
            2,
            format!(
                "--j {} exceeds the cap for method {} (constant/pivot support j <= 4, general j <= 2)",
                args.j,
                method.as_str()
            ),
        ));
    }
    let model = build_model(&args.model)?;

    let (mean, n) = match (&args.data, args.mean) {
        (Some(path), None) => {
            let values = read_data(path, model.support())?;
            let n = values.len() as u64;
            (values.iter().sum::<f64>() / n as f64, n)
        }
        (None, Some(mean)) => {
            let n = args.n.ok_or_else(|| fail(2, "--mean requires --n"))?;
            (mean, n)
        }
        (None, None) => return Err(fail(2, "provide --data FILE or --mean VALUE with --n")),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };

    let spec = match (args.x1, args.x2) {
        (Some(x1), Some(x2)) => ConfidenceSpec::with_tails_and_alpha(x1, x2, args.alpha, args.j, n)?,
        (None, None) => ConfidenceSpec::symmetric(args.alpha, args.j, n)?,
        _ => unreachable!("clap requires"),
    };

    let result = interval::build_interval_from_mean(model.as_ref(), method, mean, &spec)?;
    if result.series_warning {
        eprintln!(
            "warning: correction magnitudes are not decreasing at n = {n}; \
             consider a smaller j"
        );
    }
    let content = match args.output.format {
        Format::Json => interval_json(model.as_ref(), &spec, mean, &result),
        Format::Csv => interval_csv(model.as_ref(), &spec, mean, &result),
    };
    emit(&args.output.out, content)
}

// ------------------------------------------------------------------ coverage

fn coverage_json(report: &CoverageReport) -> String {
    object(&[
        ("schema_version", "1".into()),
        ("command", string("coverage")),
        ("model", string(&report.model)),
        ("theta", num(report.theta)),
        ("alpha", num(report.alpha)),
        ("method", string(report.method.as_str())),
        ("reps", report.reps.to_string()),
        ("seed", report.seed.to_string()),
        (
            "cells",
            array(report.cells.iter().map(|c| {
                object(&[
                    ("n", c.n.to_string()),
                    ("j", c.j.to_string()),
                    ("coverage", num(c.coverage)),
                    ("mc_se", num(c.mc_se)),
                    ("abs_error", num(c.abs_error)),
                    ("exact_coverage", opt_num(c.exact_coverage)),
                    ("exact_abs_error", opt_num(c.exact_abs_error)),
                    ("failures", c.failures.to_string()),
                    ("series_diverging", c.series_diverging.to_string()),
                ])
            })),
        ),
        (
            "slopes",
            array(report.slopes.iter().map(|s| {
                object(&[
                    ("j", s.j.to_string()),
                    ("slope", num(s.fit.slope)),
                    ("intercept", num(s.fit.intercept)),
                    ("points_used", s.fit.points_used.to_string()),
                    ("excluded", s.fit.excluded.to_string()),
                    ("dropped_n", array(s.dropped_n.iter().map(|n| n.to_string()))),
                ])
            })),
        ),
    ])
}

fn coverage_csv(report: &CoverageReport) -> String {
    let mut out = String::from(
        "model,theta,method,alpha,reps,seed,n,j,coverage,mc_se,abs_error,exact_coverage,exact_abs_error,failures,slope",
    );
    for c in &report.cells {
        let slope = report
            .slopes
            .iter()
            .find(|s| s.j == c.j)
            .map(|s| s.fit.slope);
        write!(
            out,
            "\n{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            report.model,
            num(report.theta),
            report.method.as_str(),
            num(report.alpha),
            report.reps,
            report.seed,
            c.n,
            c.j,
            num(c.coverage),
            num(c.mc_se),
            num(c.abs_error),
            opt_cell(c.exact_coverage),
            opt_cell(c.exact_abs_error),
            c.failures,
            opt_cell(slope),
        )
        .unwrap();
    }
    out
}

fn cmd_coverage(args: CoverageArgs) -> Result<(), AppError> {
    if args.reps == 0 {
        return Err(fail(2, "--reps must be >= 1"));
    }
    if args.reps < 1000 {
        eprintln!(
            "warning: --reps {} is low for coverage estimation; standard errors will be large",
            args.reps
        );
    }
    let model = build_model(&args.model)?;
    check_theta(model.as_ref(), args.theta)?;
    let method: Method = args
        .method
        .map(Method::from)
        .unwrap_or(match args.model.model {
            ModelId::ExpLehmann => Method::MonotonePivot,
            ModelId::PowerLehmann => Method::GeneralTransform,
        });
    let spec = ExperimentSpec {
        theta: args.theta,
        n_grid: args.n.clone(),
        alpha: args.alpha,
        j_list: args.j.clone(),
        method,
        reps: args.reps,
        seed: args.seed,
    };
    let report = run_coverage(model.as_ref(), &spec)?;
    let content = match args.output.format {
        Format::Json => coverage_json(&report),
        Format::Csv => coverage_csv(&report),
    };
    emit(&args.output.out, content)
}

// ---------------------------------------------------------------- efficiency

fn cmd_efficiency(args: EfficiencyArgs) -> Result<(), AppError> {
    let family = match args.model.model {
        ModelId::ExpLehmann => {
            if args.model.nu.is_some() {
                return Err(fail(2, "--nu is not a parameter of exp-lehmann"));
            }
            TransformedFamily::exp_lehmann()
        }
        ModelId::PowerLehmann => {
            let nu = args.model.nu.ok_or_else(|| fail(2, "power-lehmann requires --nu"))?;
            TransformedFamily::power_lehmann(nu)?
        }
    };
    check_theta(family.model(), args.theta)?;
    let variance = family.asymptotic_variance(args.theta)?;
    let eff = family.relative_efficiency(args.theta)?;
    let bounded = family.influence_bounded();

    let content = match args.output.format {
        Format::Json => object(&[
            ("schema_version", "1".into()),
            ("command", string("efficiency")),
            ("model", string(&family.model().describe())),
            ("theta", num(args.theta)),
            ("asymptotic_variance", num(variance)),
            ("influence_bounded", bounded.to_string()),
            ("relative_efficiency", num(eff)),
        ]),
        Format::Csv => {
            let mut out =
                String::from("model,theta,asymptotic_variance,influence_bounded,relative_efficiency");
            write!(
                out,
                "\n{},{},{},{},{}",
                family.model().describe(),
                num(args.theta),
                num(variance),
                bounded,
                num(eff)
            )
            .unwrap();
            out
        }
    };
    emit(&args.output.out, content)
}
