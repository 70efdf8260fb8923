//! Command-line front end: profile ingestion, command dispatch, and
//! deterministic CSV/JSON emission.
//!
//! Exit codes: 0 success, 1 usage error, 2 numeric failure (divergence or
//! tolerance), 3 condition violation (without --force). Errors go to stderr
//! as machine-readable JSON.

use clap::{Args, Parser, Subcommand};
use radialft::diagnostics;
use radialft::error::Error;
use radialft::fraccalc::FractionalOrder;
use radialft::profiles::{parse_profile, RadialProfile};
use radialft::selftest;
use radialft::specfun::{kernel_q, kernel_Q, zeta_calibration, KernelParams};
use radialft::transform::{
    convex_asymptotic, inverse_eq5, transform_grid, TransformMethod, TransformRequest,
};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "radialft",
    version,
    about = "Radial Fourier transforms on R^n via one-dimensional reduction",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Forward transform over a radius grid.
    Transform(TransformArgs),
    /// Recover the profile from its transform by summability means.
    Invert(InvertArgs),
    /// Large-radius main term and remainder envelope (convex profiles).
    Asymptotic(AsymptoticArgs),
    /// Hypothesis checks and integrability criteria as a JSON report.
    Diagnose(DiagnoseArgs),
    /// n-dimensional vs one-dimensional L1 comparison over an N grid.
    Compare(CompareArgs),
    /// Kernel values (and their calibration constants) over a grid.
    Kernels(KernelsArgs),
    /// Run the acceptance suite; exit 0 when every criterion passes.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct ProfileOpts {
    /// Inline profile spec, e.g. "family=example1 alpha=2 beta=3".
    #[arg(long)]
    profile: Option<String>,
    /// File containing the profile spec (same grammar, line-oriented).
    #[arg(long)]
    profile_file: Option<String>,
}

impl ProfileOpts {
    fn load(&self) -> Result<RadialProfile, Error> {
        let text = match (&self.profile, &self.profile_file) {
            (Some(s), None) => s.clone(),
            (None, Some(path)) => std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read '{path}': {e}")))?,
            _ => {
                return Err(Error::Parse(
                    "exactly one of --profile / --profile-file is required".into(),
                ))
            }
        };
        parse_profile(&text)
    }
}

#[derive(Args)]
struct OutputOpts {
    /// csv (default) or json.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct TransformArgs {
    #[command(flatten)]
    profile: ProfileOpts,
    #[arg(long)]
    dim: u32,
    #[arg(long)]
    alpha: f64,
    /// Radius grid, start:stop:count[:log].
    #[arg(long = "r-grid")]
    r_grid: String,
    /// eq6 | direct | asymptotic | auto.
    #[arg(long, default_value = "auto")]
    method: String,
    /// Relative tolerance target.
    #[arg(long)]
    tol: Option<f64>,
    /// Bypass the hypothesis checks.
    #[arg(long)]
    force: bool,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct InvertArgs {
    #[command(flatten)]
    profile: ProfileOpts,
    #[arg(long)]
    dim: u32,
    #[arg(long)]
    alpha: f64,
    /// Recovery radii, start:stop:count[:log].
    #[arg(long = "r-grid")]
    r_grid: String,
    /// Truncation schedule (comma-separated), default 50,100,200,400.
    #[arg(long = "a-schedule")]
    a_schedule: Option<String>,
    /// Bypass the hypothesis checks.
    #[arg(long)]
    force: bool,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct AsymptoticArgs {
    #[command(flatten)]
    profile: ProfileOpts,
    #[arg(long)]
    dim: u32,
    /// Radius grid (r >= 2), start:stop:count[:log].
    #[arg(long = "r-grid")]
    r_grid: String,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct DiagnoseArgs {
    #[command(flatten)]
    profile: ProfileOpts,
    #[arg(long)]
    dim: u32,
    /// Order for the hypothesis checks; defaults to (n-1)/2.
    #[arg(long)]
    alpha: Option<f64>,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    profile: ProfileOpts,
    #[arg(long)]
    dim: u32,
    /// Upper-limit grid, start:stop:count[:log].
    #[arg(long = "N-grid")]
    n_grid: String,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct KernelsArgs {
    #[arg(long)]
    dim: u32,
    #[arg(long)]
    alpha: f64,
    /// Argument grid, start:stop:count[:log].
    #[arg(long = "r-grid")]
    r_grid: String,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct SelftestArgs {
    /// Comma-separated criterion ids (default: all twelve).
    #[arg(long)]
    criteria: Option<String>,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) | Error::Parse(_) => "usage",
        Error::ConditionViolation(_) => "condition_violation",
        Error::Divergence(_) => "divergence",
        Error::ToleranceNotMet { .. } => "tolerance",
        Error::AccelerationStalled { .. } => "acceleration",
        Error::Calibration(_) => "calibration",
        Error::Precision(_) => "precision",
        Error::Io(_) => "io",
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Domain(_) => 1,
        Error::ConditionViolation(_) => 3,
        _ => 2,
    }
}

fn fail(e: Error) -> i32 {
    let report = ErrorReport {
        error: ErrorBody {
            kind: error_kind(&e),
            message: e.to_string(),
        },
    };
    eprintln!("{}", serde_json::to_string(&report).expect("error json"));
    exit_code(&e)
}

/// Grid grammar start:stop:count[:log].
fn parse_grid(spec: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 && parts.len() != 4 {
        return Err(Error::Parse(format!(
            "grid must be start:stop:count[:log], got '{spec}'"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|e| Error::Parse(format!("bad grid start: {e}")))?;
    let stop: f64 = parts[1]
        .parse()
        .map_err(|e| Error::Parse(format!("bad grid stop: {e}")))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|e| Error::Parse(format!("bad grid count: {e}")))?;
    let log = match parts.get(3) {
        None => false,
        Some(&"log") => true,
        Some(other) => return Err(Error::Parse(format!("unknown grid suffix '{other}'"))),
    };
    if count == 0 {
        return Err(Error::Parse("grid count must be positive".into()));
    }
    if !start.is_finite() || !stop.is_finite() || !(stop >= start) {
        return Err(Error::Parse(
            "grid bounds must be finite with stop >= start".into(),
        ));
    }
    if log && !(start > 0.0) {
        return Err(Error::Parse("log grids need start > 0".into()));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    Ok((0..count)
        .map(|i| {
            let u = i as f64 / (count - 1) as f64;
            if log {
                start * (stop / start).powf(u)
            } else {
                start + (stop - start) * u
            }
        })
        .collect())
}

fn parse_schedule(spec: &Option<String>) -> Result<Vec<f64>, Error> {
    match spec {
        None => Ok(vec![50.0, 100.0, 200.0, 400.0]),
        Some(s) => s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad schedule entry: {e}")))
            })
            .collect(),
    }
}

fn emit(output: &OutputOpts, body: String) -> Result<(), Error> {
    match &output.out {
        None => {
            print!("{body}");
            Ok(())
        }
        Some(path) => std::fs::write(path, body).map_err(Error::from),
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn want_json(output: &OutputOpts) -> Result<bool, Error> {
    match output.format.as_str() {
        "csv" => Ok(false),
        "json" => Ok(true),
        other => Err(Error::Parse(format!(
            "format must be csv or json, got '{other}'"
        ))),
    }
}

fn cmd_transform(args: &TransformArgs) -> Result<(), Error> {
    let json = want_json(&args.output)?;
    let profile = args.profile.load()?;
    let radii = parse_grid(&args.r_grid)?;
    let method = TransformMethod::parse(&args.method)?;
    let mut req = TransformRequest::new(
        profile,
        args.dim,
        FractionalOrder::new(args.alpha)?,
        radii,
        method,
        args.force,
    );
    req.tol = args.tol;
    let results = transform_grid(&req)?;
    let body = if json {
        #[derive(Serialize)]
        struct Row {
            r: f64,
            fhat: f64,
            err_est: f64,
            method: &'static str,
            truncation_a: f64,
        }
        let rows: Vec<Row> = results
            .iter()
            .map(|t| Row {
                r: t.r,
                fhat: t.value,
                err_est: t.err_est,
                method: t.method.as_str(),
                truncation_a: t.truncation_a,
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("json rows") + "\n"
    } else {
        let mut s = String::from("r,fhat,err_est,method,truncation_A\n");
        for t in &results {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt(t.r),
                fmt(t.value),
                fmt(t.err_est),
                t.method.as_str(),
                fmt(t.truncation_a)
            ));
        }
        s
    };
    emit(&args.output, body)
}

fn cmd_invert(args: &InvertArgs) -> Result<(), Error> {
    let json = want_json(&args.output)?;
    let profile = args.profile.load()?;
    let radii = parse_grid(&args.r_grid)?;
    let schedule = parse_schedule(&args.a_schedule)?;
    if schedule.len() < 4 {
        return Err(Error::Parse("the truncation schedule needs >= 4 radii".into()));
    }
    let order = FractionalOrder::new(args.alpha)?;
    let a_max = schedule.iter().cloned().fold(0.0f64, f64::max);
    // Dense forward sampling backs the evaluable transform.
    let s_max = a_max + 1.0;
    let lo = 0.02;
    let count = (s_max * 26.0 / std::f64::consts::PI).ceil() as usize;
    let sample_radii: Vec<f64> = (0..count)
        .map(|i| lo + (s_max - lo) * i as f64 / (count - 1) as f64)
        .collect();
    let req = TransformRequest::new(
        profile,
        args.dim,
        order,
        sample_radii.clone(),
        TransformMethod::Eq6,
        args.force,
    );
    let sampled = transform_grid(&req)?;
    let spline = radialft::interp::CubicSpline::fit_uniform(
        sample_radii[0],
        *sample_radii.last().unwrap(),
        sampled.iter().map(|t| t.value).collect(),
    )?;
    let hat = move |s: f64| {
        if s <= 0.0 || s > a_max {
            0.0
        } else if s < spline.lo() {
            spline.eval(spline.lo())
        } else {
            spline.eval(s)
        }
    };
    let rows: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| inverse_eq5(&hat, args.dim, &order, r, &schedule).map(|v| (r, v)))
        .collect::<Result<_, _>>()?;
    let body = if json {
        #[derive(Serialize)]
        struct Row {
            r: f64,
            f0: f64,
        }
        let rows: Vec<Row> = rows.iter().map(|&(r, f0)| Row { r, f0 }).collect();
        serde_json::to_string_pretty(&rows).expect("json rows") + "\n"
    } else {
        let mut s = String::from("r,f0\n");
        for (r, v) in rows {
            s.push_str(&format!("{},{}\n", fmt(r), fmt(v)));
        }
        s
    };
    emit(&args.output, body)
}

fn cmd_asymptotic(args: &AsymptoticArgs) -> Result<(), Error> {
    let json = want_json(&args.output)?;
    let profile = args.profile.load()?;
    let radii = parse_grid(&args.r_grid)?;
    let rows: Vec<(f64, radialft::transform::AsymptoticResult)> = radii
        .iter()
        .map(|&r| convex_asymptotic(&profile, args.dim, r).map(|a| (r, a)))
        .collect::<Result<_, _>>()?;
    let body = if json {
        #[derive(Serialize)]
        struct Row {
            r: f64,
            main_term: f64,
            gamma: f64,
            theta_bound: f64,
        }
        let rows: Vec<Row> = rows
            .iter()
            .map(|&(r, a)| Row {
                r,
                main_term: a.main_term,
                gamma: a.gamma,
                theta_bound: a.theta_bound,
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("json rows") + "\n"
    } else {
        let mut s = String::from("r,main_term,gamma,theta_bound\n");
        for (r, a) in rows {
            s.push_str(&format!(
                "{},{},{},{}\n",
                fmt(r),
                fmt(a.main_term),
                fmt(a.gamma),
                fmt(a.theta_bound)
            ));
        }
        s
    };
    emit(&args.output, body)
}

fn cmd_diagnose(args: &DiagnoseArgs) -> Result<(), Error> {
    let json = want_json(&args.output)?;
    let profile = args.profile.load()?;
    let alpha = args.alpha.unwrap_or((args.dim as f64 - 1.0) / 2.0);
    let order = FractionalOrder::new(alpha)?;
    let verdicts = diagnostics::full_report(&profile, args.dim, &order)?;
    let body = if json {
        diagnostics::verdicts_to_json(&verdicts) + "\n"
    } else {
        let mut s = String::from("condition,status,value,uncertainty,slope\n");
        for v in &verdicts {
            let status = match v.status {
                diagnostics::Status::Pass => "pass",
                diagnostics::Status::Fail => "fail",
                diagnostics::Status::Undetermined => "undetermined",
            };
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                v.condition,
                status,
                fmt(v.evidence.value),
                fmt(v.evidence.uncertainty),
                fmt(v.evidence.slope)
            ));
        }
        s
    };
    emit(&args.output, body)
}

fn cmd_compare(args: &CompareArgs) -> Result<(), Error> {
    let json = want_json(&args.output)?;
    let profile = args.profile.load()?;
    let n_grid = parse_grid(&args.n_grid)?;
    let report = diagnostics::l1_comparison(&profile, args.dim, &n_grid)?;
    let body = if json {
        serde_json::to_string_pretty(&report).expect("report json") + "\n"
    } else {
        let mut s = String::from("N,lhs,rhs,residual,theta\n");
        for i in 0..report.n_grid.len() {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt(report.n_grid[i]),
                fmt(report.lhs[i]),
                fmt(report.rhs[i]),
                fmt(report.residual[i]),
                fmt(report.theta[i])
            ));
        }
        s.push_str(&format!(
            "# constant = {}, residual_bound = {}\n",
            fmt(report.constant),
            fmt(report.residual_bound)
        ));
        s
    };
    emit(&args.output, body)
}

fn cmd_kernels(args: &KernelsArgs) -> Result<(), Error> {
    let json = want_json(&args.output)?;
    let grid = parse_grid(&args.r_grid)?;
    let p = KernelParams::new(args.alpha, args.dim)?;
    let cal = zeta_calibration(&p)?;
    let rows: Vec<(f64, f64, f64)> = grid
        .iter()
        .map(|&t| Ok::<_, Error>((t, kernel_Q(&p, t)?, kernel_q(&p, t)?)))
        .collect::<Result<_, _>>()?;
    let body = if json {
        #[derive(Serialize)]
        struct KernelRow {
            t: f64,
            q_upper: f64,
            q_lower: f64,
        }
        #[derive(Serialize)]
        struct Out {
            alpha: f64,
            n: u32,
            zeta: f64,
            zeta_fit_residual: f64,
            rows: Vec<KernelRow>,
        }
        let out = Out {
            alpha: args.alpha,
            n: args.dim,
            zeta: cal.zeta,
            zeta_fit_residual: cal.fit_residual,
            rows: rows
                .iter()
                .map(|&(t, qu, ql)| KernelRow {
                    t,
                    q_upper: qu,
                    q_lower: ql,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&out).expect("kernel json") + "\n"
    } else {
        let mut s = format!(
            "# alpha = {}, n = {}, zeta = {}, zeta_fit_residual = {}\n",
            fmt(args.alpha),
            args.dim,
            fmt(cal.zeta),
            fmt(cal.fit_residual)
        );
        s.push_str("t,Q,q\n");
        for (t, qu, ql) in rows {
            s.push_str(&format!("{},{},{}\n", fmt(t), fmt(qu), fmt(ql)));
        }
        s
    };
    emit(&args.output, body)
}

fn cmd_selftest(args: &SelftestArgs) -> Result<i32, Error> {
    let ids: Vec<u32> = match &args.criteria {
        None => vec![],
        Some(s) => s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("bad criteria list: {e}")))
            })
            .collect::<Result<_, _>>()?,
    };
    let outcomes = selftest::run_selected(&ids);
    let body = selftest::render_outcomes(&outcomes);
    emit(&args.output, body)?;
    Ok(if outcomes.iter().all(|o| o.passed) { 0 } else { 2 })
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.cmd {
        Cmd::Transform(a) => cmd_transform(a).map(|_| 0),
        Cmd::Invert(a) => cmd_invert(a).map(|_| 0),
        Cmd::Asymptotic(a) => cmd_asymptotic(a).map(|_| 0),
        Cmd::Diagnose(a) => cmd_diagnose(a).map(|_| 0),
        Cmd::Compare(a) => cmd_compare(a).map(|_| 0),
        Cmd::Kernels(a) => cmd_kernels(a).map(|_| 0),
        Cmd::Selftest(a) => cmd_selftest(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => fail(e),
    }
}

fn main() {
    std::process::exit(run());
}
