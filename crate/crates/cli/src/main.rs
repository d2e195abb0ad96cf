//! `mostow-geo`: file-based front end to the `mostow_geo` library.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use mostow_geo::io::{matrix_json, number, read_frame, read_matrix, read_subspace};
use mostow_geo::linalg::{HermitianMatrix, PdMatrix};
use mostow_geo::mostow::{group_decompose, project_to_exp_subspace};
use mostow_geo::orbits::{affine_orbit_retract, isotropy_split, orbit_retract, OrbitFrame};
use mostow_geo::spd::{dist, geodesic_eval};
use mostow_geo::verify::{parse_suites, run_suite, Bound};
use mostow_geo::{ComplexMatrix, GeoError, ProjectionOptions};

/// Recomposition residual above which a retraction is reported as failed.
const RETRACT_TOL: f64 = 1e-8;

#[derive(Parser, Debug)]
#[command(name = "mostow-geo", version, about = "Geometry of positive-definite Hermitian matrices")]
struct Cli {
    /// Gradient-norm tolerance of the projection solver.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Iteration cap of the projection solver.
    #[arg(long, global = true, default_value_t = 500)]
    max_iter: usize,

    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factor an invertible matrix as x = k·f·e.
    Decompose {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        subspace: PathBuf,
        /// Fail unless the recomposition residual is below --tol.
        #[arg(long)]
        check: bool,
    },
    /// Project a positive-definite matrix onto exp E.
    Project {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        subspace: PathBuf,
    },
    /// Evaluate the geodesic from P to Q at time t.
    Geodesic {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
    /// Riemannian distance between P and Q.
    Dist {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
    },
    /// Retract g·x (or g·0 on an affine orbit) onto the compact orbit.
    OrbitRetract {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        frame: PathBuf,
        /// Derivation D; overrides the one in the frame file.
        #[arg(long)]
        derivation: Option<PathBuf>,
    },
    /// Run seeded property suites.
    Verify {
        /// curvature, triangles, convexity, mostow, orbits or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

/// Outcome of a command that ran to completion.
struct Report {
    body: String,
    /// Non-zero when the result violates an invariant or did not converge.
    status: u8,
    error: Option<GeoError>,
}

impl Report {
    fn ok(body: String) -> Self {
        Self { body, status: 0, error: None }
    }
}

fn exit_code(e: &GeoError) -> u8 {
    match e {
        GeoError::Io(_) | GeoError::Parse(_) => 3,
        GeoError::NonConvergence { .. } => 2,
        _ => 1,
    }
}

fn report_error(kind: &str, message: &str) {
    let v = json!({"error": {"kind": kind, "message": message}});
    eprintln!("{v}");
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn read_pd(path: &Path) -> mostow_geo::Result<PdMatrix> {
    PdMatrix::new(HermitianMatrix::new(read_matrix(path)?)?)
}

fn options(cli: &Cli) -> mostow_geo::Result<ProjectionOptions> {
    let opts = ProjectionOptions { tol: cli.tol, max_iter: cli.max_iter };
    opts.validate()?;
    Ok(opts)
}

fn threads() -> mostow_geo::Result<Option<usize>> {
    match std::env::var("MOSTOW_GEO_THREADS") {
        Err(_) => Ok(None),
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| GeoError::Validation(format!("MOSTOW_GEO_THREADS must be a count, got {s:?}"))),
    }
}

fn run(cli: &Cli) -> mostow_geo::Result<Report> {
    let opts = options(cli)?;
    match &cli.command {
        Command::Decompose { matrix, subspace, check } => {
            let x = read_matrix(matrix)?;
            let e = read_subspace(subspace)?;
            let factors = group_decompose(&x, &e, &opts)?;
            let r = factors.residuals(&x, &e);
            let mut out = json!({
                "k": matrix_json(factors.k.as_complex()),
                "f": matrix_json(factors.f.as_complex()),
                "e": matrix_json(factors.e.as_complex()),
                "iterations": factors.iterations,
                "residuals": {
                    "recomposition": number(r.recomposition),
                    "unitarity": number(r.unitarity),
                    "f_membership": number(r.f_membership),
                    "e_membership": number(r.e_membership),
                },
            });
            let mut status = 0;
            let mut error = None;
            if *check {
                let pass = r.recomposition <= cli.tol;
                out["check"] = json!({"residual": number(r.recomposition), "tol": number(cli.tol), "pass": pass});
                if !pass {
                    status = 1;
                    error = Some(GeoError::Validation(format!(
                        "recomposition residual {:.3e} exceeds tol {:.3e}",
                        r.recomposition, cli.tol
                    )));
                }
            }
            Ok(Report { body: pretty(&out), status, error })
        }
        Command::Project { matrix, subspace } => {
            let p = read_pd(matrix)?;
            let e = read_subspace(subspace)?;
            let r = project_to_exp_subspace(&p, &e, &opts)?;
            let out = json!({
                "foot": matrix_json(r.foot.as_complex()),
                "log_foot": matrix_json(r.log_foot.as_complex()),
                "distance": number(r.distance),
                "iterations": r.iterations,
                "grad_norm": number(r.grad_norm),
                "orthogonality": number(r.orthogonality),
                "converged": r.converged,
            });
            let error = (!r.converged).then_some(GeoError::NonConvergence {
                iterations: r.iterations,
                grad_norm: r.grad_norm,
            });
            Ok(Report { body: pretty(&out), status: if r.converged { 0 } else { 2 }, error })
        }
        Command::Geodesic { from, to, t } => {
            let point = geodesic_eval(&read_pd(from)?, &read_pd(to)?, *t)?;
            Ok(Report::ok(pretty(&matrix_json(point.as_complex()))))
        }
        Command::Dist { from, to } => {
            let d = dist(&read_pd(from)?, &read_pd(to)?)?;
            Ok(Report::ok(number(d).to_string()))
        }
        Command::OrbitRetract { group, frame, derivation } => {
            let g = read_matrix(group)?;
            let spec = read_frame(frame)?;
            let d = match derivation {
                Some(path) => Some(read_matrix(path)?),
                None => spec.derivation,
            };
            let (r, affine) = match d {
                Some(d) => {
                    if let Some(base) = &spec.base {
                        if base.norm_fro() != 0.0 {
                            return Err(GeoError::Validation(
                                "affine retraction starts at the origin; the frame base must be zero".into(),
                            ));
                        }
                    }
                    (affine_orbit_retract(&g, &OrbitFrame::affine(&d)?, &opts)?, true)
                }
                None => {
                    let base: ComplexMatrix = spec.base.expect("frame has a base or a derivation");
                    (orbit_retract(&g, &isotropy_split(&base)?, &opts)?, false)
                }
            };
            let out = json!({
                "z": matrix_json(&r.z),
                "a": matrix_json(&r.a),
                "u": matrix_json(r.u.as_complex()),
                "recomposition": number(r.recomposition),
                "affine": affine,
            });
            let (status, error) = if r.recomposition <= RETRACT_TOL {
                (0, None)
            } else {
                let msg = format!("recomposition residual {:.3e} exceeds {RETRACT_TOL:e}", r.recomposition);
                (1, Some(GeoError::NumericalFailure(msg)))
            };
            Ok(Report { body: pretty(&out), status, error })
        }
        Command::Verify { suite, n, trials } => {
            let suites = parse_suites(suite)?;
            let threads = threads()?;
            let mut rows = Vec::new();
            let mut all_pass = true;
            for s in suites {
                let o = run_suite(s, *n, *trials, cli.seed, threads)?;
                all_pass &= o.pass;
                let reduction = match o.kind {
                    Bound::AtMost => "max",
                    Bound::AtLeast => "min",
                };
                rows.push(json!({
                    "suite": s.name(),
                    "reduction": reduction,
                    "worst": number(o.worst),
                    "bound": number(o.bound),
                    "trials": o.trials,
                    "skipped": o.skipped,
                    "errors": o.errors,
                    "pass": o.pass,
                }));
            }
            let out = json!({
                "n": n,
                "trials": trials,
                "seed": cli.seed,
                "suites": rows,
                "pass": all_pass,
            });
            let error = (!all_pass).then(|| GeoError::Validation("property suite failed".into()));
            Ok(Report { body: pretty(&out), status: if all_pass { 0 } else { 1 }, error })
        }
    }
}

fn emit(cli: &Cli, body: &str) -> mostow_geo::Result<()> {
    let text = format!("{body}\n");
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| GeoError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| GeoError::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            report_error("usage", e.to_string().trim());
            return ExitCode::from(1);
        }
    };
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            report_error(e.kind(), &e.to_string());
            return ExitCode::from(exit_code(&e));
        }
    };
    if let Err(e) = emit(&cli, &report.body) {
        report_error(e.kind(), &e.to_string());
        return ExitCode::from(exit_code(&e));
    }
    if let Some(e) = &report.error {
        report_error(e.kind(), &e.to_string());
    }
    ExitCode::from(report.status)
}
