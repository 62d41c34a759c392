//! Command-line entry points: `family`, `plateau`, `assemble` and `verify`.
//!
//! Every command produces a [`RunReport`] printed as JSON on stdout. Exit
//! codes: 0 success, 1 verification failure or solver error, 2 I/O error,
//! 3 spec mismatch.

use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::assembler::{assemble, gauss_bonnet_closed, gauss_bonnet_terms, generate_group};
use crate::curvature::mean_curvature_round;
use crate::error::{domain, Error, Result};
use crate::families::{clifford, equator, is_clifford_congruent, lawson_topology, phi_c, tau_mn};
use crate::geometry::BergerParams;
use crate::io::{export_mesh, grid_mesh, load_checkpoint, save_checkpoint, write_json, Checkpoint, RunReport};
use crate::plateau::{
    build_polygon, init_mesh, lawson_piece_deviation, minimize_area, region_violation, PolygonSpec, SolveOptions, StepRule,
    Variant,
};
use crate::sinh_gordon::{psi_ab, solve_sinh_gordon};
use crate::sister::{sister_params, symmetry_transfer_catalog};
use crate::surface::ParamSurface;
use crate::verify::{max_mean_curvature, run_suite, Suite, EQUATOR_TOL, MINIMAL_TOL};

/// Absolute Gauss–Bonnet tolerance when the target vanishes.
pub const GB_ABS_TOL: f64 = 0.05;
/// Relative Gauss–Bonnet tolerance otherwise.
pub const GB_REL_TOL: f64 = 0.03;
/// Largest distance of a Lawson-polygon solution from the explicit piece,
/// relative to the piece diameter.
pub const LAWSON_DEV_TOL: f64 = 0.02;
/// Largest accepted violation of the region inequalities by a vertex.
pub const REGION_TOL: f64 = 1e-6;
/// Closed-surface Gauss–Bonnet is a combinatorial identity.
pub const CLOSED_GB_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "berger", version, about = "Minimal surfaces in Berger spheres")]
pub struct Cli {
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample an explicit surface family and report its mean curvature.
    Family(FamilyArgs),
    /// Solve the Plateau problem over a geodesic polygon and save the piece.
    Plateau(PlateauArgs),
    /// Reflect a saved piece into a closed surface and report its topology.
    Assemble(AssembleArgs),
    /// Run an invariant suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    Equator,
    Clifford,
    #[value(name = "phi_c")]
    PhiC,
    #[value(name = "psi_ab")]
    PsiAb,
    #[value(name = "tau_mn")]
    TauMn,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FamilyArgs {
    #[arg(value_enum)]
    pub name: FamilyName,
    #[arg(long, default_value_t = 0.5)]
    pub c: f64,
    #[arg(long, default_value_t = 1.3)]
    pub a: f64,
    #[arg(long, default_value_t = 0.6)]
    pub b: f64,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value_t = 4.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 0.7, allow_negative_numbers = true)]
    pub tau: f64,
    /// Samples per parameter direction.
    #[arg(long, default_value_t = 50)]
    pub grid: usize,
    /// Export the sampled patch (.obj, .ply or .json).
    #[arg(long)]
    pub export: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PlateauArgs {
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// orientable, nonorientable or lawson.
    #[arg(long, default_value = "orientable")]
    pub variant: Variant,
    #[arg(long, default_value_t = 40)]
    pub res: usize,
    #[arg(long, default_value_t = 4.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 0.7, allow_negative_numbers = true)]
    pub tau: f64,
    /// Directory for the checkpoint; it must exist.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Absolute gradient tolerance; defaults to 1e-7 × mean edge length.
    #[arg(long)]
    pub grad_tol: Option<f64>,
    /// Plain steepest descent instead of L-BFGS.
    #[arg(long)]
    pub steepest: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AssembleArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value = "orientable")]
    pub variant: Variant,
    #[arg(long)]
    pub obj: Option<PathBuf>,
    #[arg(long)]
    pub ply: Option<PathBuf>,
    /// Closed mesh as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

/// Exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) | Error::Json(_) => 2,
        Error::SpecMismatch(_) => 3,
        _ => 1,
    }
}

/// Parses `args`, runs the command, prints the report and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(report) => {
            match serde_json::to_string_pretty(&report) {
                Ok(text) => {
                    // a closed pipe (e.g. `| head`) is not an error of the run
                    let _ = writeln!(std::io::stdout(), "{text}");
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            }
            if let Some(path) = &cli.report {
                if let Err(e) = write_json(path, &report) {
                    eprintln!("error: {e}");
                    return 2;
                }
            }
            for c in report.failures() {
                eprintln!("FAILED {}: {:e} > {:e}", c.name, c.value, c.tolerance);
            }
            i32::from(!report.passed())
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(cli: &Cli) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Family(a) => cmd_family(a),
        Command::Plateau(a) => cmd_plateau(a),
        Command::Assemble(a) => cmd_assemble(a),
        Command::Verify(a) => cmd_verify(a),
    }?;
    report.wall_clock_s = start.elapsed().as_secs_f64();
    Ok(report)
}

fn config<T: Serialize>(args: &T) -> serde_json::Value {
    serde_json::to_value(args).unwrap_or(serde_json::Value::Null)
}

pub fn cmd_family(args: &FamilyArgs) -> Result<RunReport> {
    let mut report = RunReport::new("family", config(args));
    if args.grid == 0 {
        return domain("grid must be positive");
    }
    let params = BergerParams::new(args.kappa, args.tau)?;
    let surface: Box<dyn ParamSurface> = match args.name {
        FamilyName::Equator => {
            let h = max_mean_curvature(&params, &equator(), args.grid)?;
            report.check("max_abs_mean_curvature", h, EQUATOR_TOL);
            Box::new(equator())
        }
        FamilyName::Clifford => {
            report.check("max_abs_mean_curvature", max_mean_curvature(&params, &clifford(), args.grid)?, MINIMAL_TOL);
            Box::new(clifford())
        }
        FamilyName::PhiC => {
            let surf = phi_c(args.c);
            report.check("max_abs_mean_curvature", max_mean_curvature(&params, &surf, args.grid)?, MINIMAL_TOL);
            Box::new(surf)
        }
        FamilyName::PsiAb => {
            let (a, b) = (args.a, args.b);
            let lambda = a * b / 2.0;
            let energy = a * a + b * b;
            let probe = solve_sinh_gordon(lambda, energy, (0.0, 20.0), 0.01)?;
            let span = probe.period().unwrap_or(20.0);
            let surf = psi_ab(a, b, solve_sinh_gordon(lambda, energy, (0.0, span), 0.005)?)?;
            // Ψ_{a,b} is minimal for the round metric only
            let mut worst = 0.0f64;
            for (x, y) in surf.domain().interior_grid(args.grid) {
                worst = worst.max(mean_curvature_round(&surf, x, y)?.abs());
            }
            report.value("metric", "round");
            report.value("sinh_gordon_energy_drift", surf.solution().max_energy_drift());
            report.check("max_abs_mean_curvature", worst, MINIMAL_TOL);
            Box::new(surf)
        }
        FamilyName::TauMn => {
            let surf = tau_mn(args.m, args.n)?;
            report.check("max_abs_mean_curvature", max_mean_curvature(&params, &surf, args.grid)?, MINIMAL_TOL);
            let congruent = is_clifford_congruent(&surf, 20, 1e-12);
            if (args.m, args.n) == (1, 1) {
                report.check_flag("clifford_congruent", congruent);
            } else {
                report.value("clifford_congruent", congruent);
            }
            report.value("topology", lawson_topology(args.m, args.n, 2)?);
            Box::new(surf)
        }
    };
    if let Some(path) = &args.export {
        export_mesh(path, &grid_mesh(surface.as_ref(), args.grid))?;
        report.value("export", path);
    }
    Ok(report)
}

/// Tolerance used for the fundamental-piece Gauss–Bonnet check.
pub fn gauss_bonnet_tolerance(target: f64) -> f64 {
    if target.abs() < 1e-12 {
        GB_ABS_TOL
    } else {
        GB_REL_TOL * target.abs()
    }
}

pub fn checkpoint_name(m: u32, n: u32, variant: Variant) -> String {
    let v = match variant {
        Variant::Orientable => "orientable",
        Variant::Nonorientable => "nonorientable",
        Variant::Lawson => "lawson",
    };
    format!("piece_{v}_{m}_{n}.json")
}

fn require_dir(dir: &Path) -> Result<()> {
    if !dir.is_dir() {
        return Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("checkpoint directory {} does not exist", dir.display()),
        )));
    }
    Ok(())
}

pub fn cmd_plateau(args: &PlateauArgs) -> Result<RunReport> {
    require_dir(&args.out_dir)?;
    let mut report = RunReport::new("plateau", config(args));
    let params = BergerParams::new(args.kappa, args.tau)?;
    let spec = PolygonSpec::new(args.m, args.n, args.variant)?;
    let mesh = init_mesh(&build_polygon(&spec), args.res)?;
    let mut opts = SolveOptions { grad_tol: args.grad_tol, ..SolveOptions::default() };
    if let Some(it) = args.max_iter {
        opts.max_iter = it;
    }
    if args.steepest {
        opts.step_rule = StepRule::SteepestDescent;
    }
    let (piece, solve) = minimize_area(&params, &mesh, &opts)?;

    let path = args.out_dir.join(checkpoint_name(args.m, args.n, args.variant));
    save_checkpoint(&path, &Checkpoint::new(args.kappa, args.tau, args.m, args.n, args.variant, piece.clone(), Some(solve.clone())))?;
    report.value("checkpoint", &path);
    report.value("area", solve.area);
    report.value("initial_area", solve.initial_area);
    report.value("iterations", solve.iterations);
    report.value("min_angle_deg", solve.min_angle_deg);
    report.value("mean_curvature_residual", solve.mean_curvature_residual);
    report.value("vertices", piece.vertices.len());
    report.value("faces", piece.faces.len());
    report.check("grad_norm", solve.grad_norm, solve.grad_tol);
    report.check_flag("area_monotone", solve.area_monotone);
    report.check("region_violation", region_violation(&spec, &piece), REGION_TOL);

    let terms = gauss_bonnet_terms(&params, &piece)?;
    let target = spec.gauss_bonnet_target();
    report.value("gauss_bonnet", terms.integral());
    report.value("gauss_bonnet_terms", terms);
    report.value("gauss_bonnet_target", target);
    report.check("gauss_bonnet_error", (terms.integral() - target).abs(), gauss_bonnet_tolerance(target));
    if args.variant == Variant::Lawson {
        report.check("lawson_piece_deviation", lawson_piece_deviation(&spec, &piece), LAWSON_DEV_TOL);
    }
    Ok(report)
}

/// Euler characteristic of the closed surface, where it is known.
pub fn expected_chi(m: u32, n: u32, variant: Variant) -> Option<i64> {
    let mn = (m * n) as i64;
    match variant {
        Variant::Orientable => Some(2 * (1 - mn)),
        Variant::Nonorientable => Some(1 - mn),
        Variant::Lawson => ((m, n) == (1, 1)).then_some(0),
    }
}

pub fn cmd_assemble(args: &AssembleArgs) -> Result<RunReport> {
    let checkpoint = load_checkpoint(&args.checkpoint)?;
    checkpoint.ensure_matches(args.m, args.n, args.variant)?;
    if let Some(solve) = &checkpoint.solve {
        if !solve.converged {
            return Err(Error::NotConverged(format!(
                "checkpoint gradient norm {:.3e} above tolerance {:.3e}",
                solve.grad_norm, solve.grad_tol
            )));
        }
    }
    let mut report = RunReport::new("assemble", config(args));
    let params = BergerParams::new(checkpoint.kappa, checkpoint.tau)?;
    let spec = PolygonSpec::new(args.m, args.n, args.variant)?;
    let group = generate_group(&spec)?;
    let surface = assemble(&checkpoint.mesh, &group)?;

    report.value("group_order", group.order());
    report.value("copies", surface.copies);
    report.value("chi", surface.chi);
    report.value("genus", surface.genus);
    report.value("crosscaps", surface.crosscaps);
    report.value("orientable", surface.orientable);
    report.value("vertices", surface.mesh.used_vertex_count());
    report.value("faces", surface.mesh.faces.len());
    report.value("singular_vertex_report", &surface.singular_vertex_report);
    report.check_flag("closed", surface.mesh.is_closed());
    report.check_flag("polygon_vertex_links_are_disks", surface.singular_vertex_report.iter().all(|p| p.link_is_disk));
    if let Some(chi) = expected_chi(args.m, args.n, args.variant) {
        report.check("chi_error", (surface.chi - chi).abs() as f64, 0.0);
    }
    match args.variant {
        Variant::Orientable => {
            report.check_flag("orientable", surface.orientable);
            report.check_flag("embedded_near_polygon_vertices", surface.singular_vertex_report.iter().all(|p| p.is_embedded()));
        }
        Variant::Nonorientable => {
            report.check_flag("non_orientable", !surface.orientable);
        }
        Variant::Lawson => {}
    }
    if args.variant != Variant::Lawson {
        let expected = 2 * (args.m as usize + 1) * (args.n as usize + 1);
        report.check("orbit_ratio_error", (group.orbit_ratio as f64 - expected as f64).abs(), 0.0);
    }
    let gb = gauss_bonnet_closed(&params, &surface.mesh);
    report.value("gauss_bonnet_closed", gb);
    report.check("gauss_bonnet_closed_error", (gb - 2.0 * PI * surface.chi as f64).abs(), CLOSED_GB_TOL);

    report.value("symmetry_catalog", symmetry_transfer_catalog(&group)?);
    match sister_params(checkpoint.kappa, checkpoint.tau) {
        Ok(target) => report.value("sister_target", target),
        Err(e) => report.value("sister_target", e.to_string()),
    }
    for path in [&args.obj, &args.ply, &args.json].into_iter().flatten() {
        export_mesh(path, &surface.mesh)?;
    }
    Ok(report)
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<RunReport> {
    let mut report = run_suite(args.suite, args.seed)?;
    report.command = format!("verify {}", args.suite.name());
    report.config = config(args);
    Ok(report)
}
