//! The `transonic` command-line front end.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
//! 3 valid input without an interior shock.

pub mod config;
pub mod csv;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::numerics::uniform_grid;
use crate::radial::{
    assemble_solution, branch_speed_for, existence_report, momentum_flux_of_speed, BranchKind,
    Existence, ModelConfig, ShockSolution,
};
use crate::variational::{
    functional_scale, j_curve, j_prime, j_prime_by_quadrature, saddle_report, FD_STEP,
};
use crate::verify::run_suite;

pub use config::{RunConfig, DEFAULT_SWEEP_N};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NO_SHOCK: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "transonic",
    version,
    about = "Radial transonic shock solver and saddle-point check"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    /// Directory for CSV output (default: current directory).
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    /// Number of sweep points for profiles and curves.
    #[arg(long, global = true)]
    pub sweep_n: Option<usize>,
    /// Tolerance for the shock search and the maximiser of J.
    #[arg(long, global = true)]
    pub tol_root: Option<f64>,
    /// Absolute and relative tolerance for adaptive quadrature.
    #[arg(long, global = true)]
    pub tol_quad: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Locate the shock, print the report and write solution.csv.
    Solve { config: PathBuf },
    /// Write curve data as CSV (all curves unless --which is given).
    Curves {
        config: PathBuf,
        #[arg(long, value_enum)]
        which: Option<Curve>,
    },
    /// Run the invariant suite.
    Verify { config: PathBuf },
    /// Compare finite-difference and closed-form J' at both walls.
    JprimeTable { config: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Curve {
    K,
    H,
    J,
    I,
}

/// Failure mapped onto an exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: format!("error: {message}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoCrossing { .. } => Failure {
                code: EXIT_NO_SHOCK,
                message: format!("no interior shock: {e}"),
            },
            other => Failure::invalid(other),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::invalid(e)
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Parses arguments and runs, writing to the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T, O, E>(args: I, out: &mut O, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    O: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "{}", f.message);
            f.code
        }
    }
}

fn load(path: &Path, common: &CommonArgs) -> Result<(RunConfig, ModelConfig), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))?;
    let mut run = RunConfig::parse(&text).map_err(Failure::invalid)?;
    if let Some(dir) = &common.output_dir {
        run.output_dir = Some(dir.clone());
    }
    if let Some(n) = common.sweep_n {
        if n < 3 {
            return Err(Failure::invalid(format!(
                "--sweep-n must be at least 3, got {n}"
            )));
        }
        run.sweep_n = n;
    }
    if let Some(t) = common.tol_root {
        run.tol_root = Some(t);
    }
    if let Some(t) = common.tol_quad {
        run.tol_quad = Some(t);
    }
    let model = run.model().map_err(Failure::invalid)?;
    Ok((run, model))
}

fn output_path(run: &RunConfig, name: &str) -> PathBuf {
    run.output_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("."))
        .join(name)
}

fn dispatch<O: Write>(cli: &Cli, out: &mut O) -> Outcome {
    match &cli.command {
        Command::Solve { config } => {
            let (run, model) = load(config, &cli.common)?;
            cmd_solve(&run, &model, out)
        }
        Command::Curves { config, which } => {
            let (run, model) = load(config, &cli.common)?;
            cmd_curves(&run, &model, *which, out)
        }
        Command::Verify { config } => {
            let (run, model) = load(config, &cli.common)?;
            cmd_verify(&run, &model, out)
        }
        Command::JprimeTable { config } => {
            let (_, model) = load(config, &cli.common)?;
            cmd_jprime_table(&model, out)
        }
    }
}

fn print_header<O: Write>(model: &ModelConfig, out: &mut O) -> Result<Existence, Failure> {
    let rep = existence_report(model)?;
    writeln!(out, "classification  {:?}", rep.classification)?;
    writeln!(out, "mode            {:?}", model.mode())?;
    writeln!(out, "k0              {:.12}", rep.k0)?;
    writeln!(out, "k_a             {:.12}", rep.k_a)?;
    writeln!(out, "k_max(a)        {:.12}", rep.k_max_a)?;
    writeln!(out, "nu              {:.12}", rep.nu)?;
    writeln!(out, "H_A H_B         {:.10} {:.10}", rep.h_a, rep.h_b)?;
    writeln!(out, "H_C H_D         {:.10} {:.10}", rep.h_c, rep.h_d)?;
    Ok(rep.classification)
}

pub const SOLUTION_HEADER: [&str; 6] = ["r", "V", "rho", "p", "k", "phi"];

/// Rows of `solution.csv`, one per profile sample.
pub fn solution_rows(solution: &ShockSolution) -> Vec<Vec<f64>> {
    solution
        .profile
        .iter()
        .map(|s| vec![s.r, s.speed, s.rho, s.p, s.k, s.phi])
        .collect()
}

fn cmd_solve<O: Write>(run: &RunConfig, model: &ModelConfig, out: &mut O) -> Outcome {
    print_header(model, out)?;
    let solution = assemble_solution(model, run.sweep_n)?;
    let (s1, s2) = (&solution.state1, &solution.state2);
    writeln!(out, "r_s             {:.12}", solution.r_s)?;
    writeln!(out, "r_s bracket     {:.3e}", solution.r_s_uncertainty)?;
    writeln!(
        out,
        "upstream        V = {:.12}  rho = {:.12}  p = {:.12}",
        s1.speed, s1.rho, s1.p
    )?;
    writeln!(
        out,
        "downstream      V = {:.12}  rho = {:.12}  p = {:.12}",
        s2.speed, s2.rho, s2.p
    )?;
    let res = solution.residuals;
    writeln!(
        out,
        "RH residuals    mass {:.3e}  momentum {:.3e}  energy {:.3e}",
        res.mass, res.momentum, res.energy
    )?;
    writeln!(out, "Prandtl         V1 V2 - c*^2 = {:.3e}", res.prandtl)?;
    let path = output_path(run, "solution.csv");
    csv::write_file(&path, &SOLUTION_HEADER, &solution_rows(&solution))?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(EXIT_OK)
}

/// `(V², k(V, a), k(V, R))` over `[0, q̂₀²]`.
pub fn k_curve_rows(model: &ModelConfig, n: usize) -> crate::Result<Vec<Vec<f64>>> {
    let params = model.params();
    let top = params.q_hat0_sq();
    uniform_grid(0.0, top, n)?
        .into_iter()
        .enumerate()
        .map(|(i, v_sq)| {
            // k vanishes at rest and at the vacuum speed.
            let k = |r: f64| {
                if i == 0 || i == n - 1 {
                    Ok(0.0)
                } else {
                    params.entropy_from_state(v_sq.sqrt(), r)
                }
            };
            Ok(vec![v_sq, k(model.a())?, k(model.r_outer())?])
        })
        .collect()
}

/// `(r, H^sup(k0), H^sub(k_a), H^sub(k0))` over `[a, R]`. The last column
/// mixes the upstream entropy into the subsonic branch and is kept as a
/// reference for that mistake.
pub fn h_curve_rows(model: &ModelConfig, n: usize) -> crate::Result<Vec<Vec<f64>>> {
    let params = model.params();
    uniform_grid(model.a(), model.r_outer(), n)?
        .into_iter()
        .map(|r| {
            let wrong = branch_speed_for(params, BranchKind::Sub, model.k0(), r)?;
            Ok(vec![
                r,
                model.momentum_flux_h(BranchKind::Sup, r)?,
                model.momentum_flux_h(BranchKind::Sub, r)?,
                momentum_flux_of_speed(params, wrong),
            ])
        })
        .collect()
}

fn cmd_curves<O: Write>(
    run: &RunConfig,
    model: &ModelConfig,
    which: Option<Curve>,
    out: &mut O,
) -> Outcome {
    let classification = print_header(model, out)?;
    let wanted = |c: Curve| which.is_none_or(|w| w == c);
    let n = run.sweep_n;
    let mut code = EXIT_OK;

    if wanted(Curve::K) {
        let path = output_path(run, "k_curves.csv");
        csv::write_file(
            &path,
            &["v_sq", "k_at_a", "k_at_r_outer"],
            &k_curve_rows(model, n)?,
        )?;
        writeln!(out, "wrote {}", path.display())?;
    }
    if wanted(Curve::H) {
        let path = output_path(run, "h_curves.csv");
        csv::write_file(
            &path,
            &["r", "h_sup_k0", "h_sub_ka", "h_sub_k0"],
            &h_curve_rows(model, n)?,
        )?;
        writeln!(out, "wrote {}", path.display())?;
    }
    if wanted(Curve::J) {
        let sweep = j_curve(model, n)?;
        let rows: Vec<Vec<f64>> = sweep.samples.iter().map(|s| vec![s.x, s.value]).collect();
        let path = output_path(run, "j_curve.csv");
        csv::write_file(&path, &["eta", "j_over_2pi"], &rows)?;
        writeln!(out, "wrote {}", path.display())?;
    }
    if wanted(Curve::I) {
        let saddle = saddle_report(model, n)?;
        match saddle.i_scan {
            Some(scan) => {
                let rows: Vec<Vec<f64>> = scan
                    .curve
                    .samples
                    .iter()
                    .map(|s| vec![s.x, s.value])
                    .collect();
                let path = output_path(run, "i_curve.csv");
                csv::write_file(&path, &["x", "i_over_2pi"], &rows)?;
                writeln!(
                    out,
                    "wrote {} (eta* = {:.10}, |x| <= {})",
                    path.display(),
                    saddle.eta_star,
                    scan.x_max
                )?;
            }
            None => {
                writeln!(
                    out,
                    "skipped i_curve.csv: J is maximal at r = a ({classification:?}), no subsonic region to perturb"
                )?;
                if which == Some(Curve::I) {
                    code = EXIT_NO_SHOCK;
                }
            }
        }
    }
    Ok(code)
}

fn cmd_verify<O: Write>(run: &RunConfig, model: &ModelConfig, out: &mut O) -> Outcome {
    let report = run_suite(model, run.sweep_n)?;
    writeln!(out, "classification  {:?}", report.classification)?;
    for check in &report.checks {
        writeln!(out, "{check}")?;
    }
    let failed = report
        .checks
        .iter()
        .filter(|c| c.status == crate::verify::CheckStatus::Fail)
        .count();
    if failed == 0 {
        writeln!(out, "all checks passed")?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "{failed} check(s) failed")?;
        Ok(EXIT_VERIFY_FAILED)
    }
}

/// `[fd(R), closed(R), fd(a), closed(a)]` for `J'/2π`.
pub fn jprime_table(model: &ModelConfig) -> crate::Result<[f64; 4]> {
    let (a, r) = (model.a(), model.r_outer());
    Ok([
        j_prime_by_quadrature(r, FD_STEP, model)?,
        j_prime(r, model)?,
        j_prime_by_quadrature(a, FD_STEP, model)?,
        j_prime(a, model)?,
    ])
}

fn cmd_jprime_table<O: Write>(model: &ModelConfig, out: &mut O) -> Outcome {
    let [fd_r, cf_r, fd_a, cf_a] = jprime_table(model)?;
    writeln!(
        out,
        "scale K = gamma^(gamma/(gamma-1)) k_a^(1/(gamma-1)) = {:.12}",
        functional_scale(model)
    )?;
    writeln!(out, "{:<34} {:>20}", "quantity", "value")?;
    writeln!(
        out,
        "{:<34} {:>20.10}",
        "J'(R)/2pi  finite difference", fd_r
    )?;
    writeln!(out, "{:<34} {:>20.10}", "K (H_C - H_D)  closed form", cf_r)?;
    writeln!(
        out,
        "{:<34} {:>20.10}",
        "J'(a)/2pi  finite difference", fd_a
    )?;
    writeln!(out, "{:<34} {:>20.10}", "K (H_B - H_A)  closed form", cf_a)?;
    writeln!(
        out,
        "{:<34} {:>20.3e}",
        "|difference| at R",
        (fd_r - cf_r).abs()
    )?;
    writeln!(
        out,
        "{:<34} {:>20.3e}",
        "|difference| at a",
        (fd_a - cf_a).abs()
    )?;
    Ok(EXIT_OK)
}
