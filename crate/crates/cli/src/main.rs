//! Command-line surface: apply operators to bodies, list kernel multipliers,
//! run the verification suites, and reconstruct bodies from surface area
//! measures.
//!
//! Exit codes: 0 success, 1 check failures, 2 parse/usage errors,
//! 3 degenerate body, 4 infeasible measure.

mod io;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use convexcal_core::bmh::BmHomomorphism;
use convexcal_core::body::SupportSampleBody;
use convexcal_core::minkowski::{solve, MinkowskiInstance};
use convexcal_core::quad::support_grid;
use convexcal_core::zonal::legendre_coefficients;
use convexcal_core::Error as CoreError;

use io::{body_out, BodySpec, KernelSpec, LoadedBody, MeasureFile, Report};
use suites::SuiteConfig;

#[derive(Parser)]
#[command(
    name = "convexcal",
    version,
    about = "Convolution calculus for convex bodies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a zonal-kernel operator to a body; writes the realized body
    /// and a CSV of support samples.
    Apply {
        /// Body spec JSON file.
        #[arg(long)]
        body: PathBuf,
        /// Kernel spec (inline JSON or a path to a JSON file).
        #[arg(long)]
        kernel: String,
        /// Output path for the realized body JSON.
        #[arg(long, default_value = "apply_body.json")]
        out_body: PathBuf,
        /// Output path for the support-sample CSV.
        #[arg(long, default_value = "apply_samples.csv")]
        out_csv: PathBuf,
        /// Number of sample directions.
        #[arg(long, default_value_t = 302)]
        support_grid: usize,
        #[arg(long, default_value_t = 64)]
        grid_theta: usize,
        #[arg(long, default_value_t = 128)]
        grid_phi: usize,
    },
    /// Legendre (multiplier) coefficients of a kernel.
    Multipliers {
        /// Kernel spec (inline JSON or a path to a JSON file).
        #[arg(long)]
        kernel: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite and write a JSON report.
    Check {
        /// Suite: identities | inequalities | endomorphisms | roundtrip.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Optional tolerance override applied to every row.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 64)]
        grid_theta: usize,
        #[arg(long, default_value_t = 128)]
        grid_phi: usize,
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
        /// Report output path.
        #[arg(long, default_value = "report.json")]
        out: PathBuf,
    },
    /// Spherical-harmonic spectrum of a body's support function (or of its
    /// image under a kernel operator); writes a CSV of (k, m, coefficient).
    Spectrum {
        /// Body spec JSON file.
        #[arg(long)]
        body: PathBuf,
        /// Optional kernel spec; when given, the spectrum of h(Phi K, .) is
        /// emitted instead.
        #[arg(long)]
        kernel: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
        #[arg(long, default_value_t = 64)]
        grid_theta: usize,
        #[arg(long, default_value_t = 128)]
        grid_phi: usize,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct a body from a surface-area-measure file.
    Reconstruct {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long, default_value = "reconstructed.json")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Degenerate(msg)) => {
            eprintln!("error: degenerate body: {msg}");
            ExitCode::from(3)
        }
        Err(AppError::Infeasible(msg)) => {
            eprintln!("error: infeasible measure: {msg}");
            ExitCode::from(4)
        }
        Err(AppError::ChecksFailed(n)) => {
            eprintln!("{n} check(s) failed");
            ExitCode::from(1)
        }
        Err(AppError::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

enum AppError {
    Parse(String),
    Degenerate(String),
    Infeasible(String),
    ChecksFailed(usize),
    Other(String),
}

impl From<CoreError> for AppError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidInput(m) => AppError::Parse(m),
            CoreError::Degenerate(m) => AppError::Degenerate(m),
            CoreError::Infeasible(m) => AppError::Infeasible(m),
            CoreError::Numeric(m) => AppError::Other(m),
            e @ CoreError::NoConvergence { .. } => AppError::Other(e.to_string()),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Parse(format!("io: {e}"))
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, AppError> {
    serde_json::from_str(text).map_err(|e| AppError::Parse(format!("{what}: {e}")))
}

/// Kernel argument: inline JSON or a file path.
fn load_kernel(arg: &str) -> Result<KernelSpec, AppError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)?
    };
    parse_json(&text, "kernel spec")
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Apply {
            body,
            kernel,
            out_body,
            out_csv,
            support_grid: n_dirs,
            grid_theta,
            grid_phi,
        } => {
            let body_spec: BodySpec = parse_json(&std::fs::read_to_string(&body)?, "body spec")?;
            let kernel_spec = load_kernel(&kernel)?;
            let profile = kernel_spec.to_profile()?;
            let op = BmHomomorphism::new(profile, 12)?;
            let loaded = body_spec.load()?;
            let dirs = support_grid(n_dirs.max(26));
            let rule = convexcal_core::quad::SphereRule::product(grid_theta, grid_phi);
            let values: Vec<f64> = match &loaded {
                LoadedBody::Ball(b) => {
                    // exact: the image of a ball of radius r is the ball of
                    // radius r_phi r^2
                    let h = op.r_phi() * b.radius * b.radius;
                    dirs.iter().map(|_| h).collect()
                }
                other => {
                    let mu = other.measure(&rule)?;
                    dirs.iter().map(|&u| op.support_at(&mu, u)).collect()
                }
            };
            let mut csv = String::from("u1,u2,u3,h\n");
            for (u, h) in dirs.iter().zip(&values) {
                csv.push_str(&format!("{},{},{},{}\n", u[0], u[1], u[2], h));
            }
            std::fs::write(&out_csv, csv)?;
            let samples = SupportSampleBody::new(dirs, values)?;
            let realized = samples.to_polytope()?;
            let out = body_out(&realized.polytope, Some(realized.max_defect), None);
            std::fs::write(&out_body, serde_json::to_string_pretty(&out).unwrap())?;
            println!(
                "wrote {} and {} (volume {:.6})",
                out_body.display(),
                out_csv.display(),
                realized.polytope.volume()
            );
            Ok(())
        }
        Command::Multipliers {
            kernel,
            n,
            max_degree,
            out,
        } => {
            let kernel_spec = load_kernel(&kernel)?;
            let profile = kernel_spec.to_profile()?;
            let c = legendre_coefficients(&profile, n, max_degree)?;
            let mut csv = String::from("k,c_k,quad_error\n");
            for k in 0..=max_degree {
                csv.push_str(&format!("{},{},{}\n", k, c.value(k), c.quad_errors[k]));
            }
            match out {
                Some(path) => {
                    std::fs::write(&path, csv)?;
                    println!("wrote {}", path.display());
                }
                None => print!("{csv}"),
            }
            Ok(())
        }
        Command::Check {
            suite,
            seed,
            count,
            tol,
            grid_theta,
            grid_phi,
            max_degree,
            out,
        } => {
            let cfg = SuiteConfig {
                seed,
                count,
                grid_theta,
                grid_phi,
                max_degree,
                tol_override: tol,
            };
            let checks = match suite.as_str() {
                "identities" => suites::identities(&cfg),
                "inequalities" => suites::inequalities(&cfg),
                "endomorphisms" => suites::endomorphisms(&cfg),
                "roundtrip" => suites::roundtrip(&cfg),
                other => return Err(AppError::Parse(format!("unknown suite '{other}'"))),
            };
            let failed = checks.iter().filter(|c| !c.ok()).count();
            let report = Report {
                suite: suite.clone(),
                environment: io::Environment {
                    grid_theta,
                    grid_phi,
                    max_degree,
                    seed,
                    count,
                    tol_override: tol,
                    version: env!("CARGO_PKG_VERSION").to_string(),
                },
                passed: checks.len() - failed,
                failed,
                checks,
            };
            std::fs::write(&out, serde_json::to_string_pretty(&report).unwrap())?;
            println!(
                "suite {suite}: {} passed, {failed} failed -> {}",
                report.passed,
                out.display()
            );
            if failed > 0 {
                return Err(AppError::ChecksFailed(failed));
            }
            Ok(())
        }
        Command::Spectrum {
            body,
            kernel,
            max_degree,
            grid_theta,
            grid_phi,
            out,
        } => {
            let body_spec: BodySpec = parse_json(&std::fs::read_to_string(&body)?, "body spec")?;
            let loaded = body_spec.load()?;
            let rule = convexcal_core::quad::SphereRule::product(grid_theta, grid_phi);
            let expansion = match kernel {
                Some(arg) => {
                    let op = BmHomomorphism::new(load_kernel(&arg)?.to_profile()?, max_degree)?;
                    match &loaded {
                        LoadedBody::Ball(b) => {
                            let mut e =
                                convexcal_core::sphharm::HarmonicExpansion::zero(max_degree);
                            e.coeffs[0] = op.r_phi() * b.radius * b.radius;
                            e
                        }
                        other => {
                            let mu = other.measure(&rule)?;
                            convexcal_core::sphharm::HarmonicExpansion::from_fn(
                                |u| op.support_at(&mu, u),
                                max_degree,
                                &rule,
                            )
                        }
                    }
                }
                None => {
                    let h: Box<dyn Fn([f64; 3]) -> f64> = match &loaded {
                        LoadedBody::Poly(p) => {
                            let p = p.clone();
                            Box::new(move |u| p.support_raw(u))
                        }
                        LoadedBody::Ball(b) => {
                            let b = *b;
                            Box::new(move |u| convexcal_core::body::SupportFunction::support(&b, u))
                        }
                        LoadedBody::Ellipsoid(e) => {
                            let e = *e;
                            Box::new(move |u| e.support(u))
                        }
                        LoadedBody::Samples(s) => {
                            let p = s.to_polytope()?.polytope;
                            Box::new(move |u| p.support_raw(u))
                        }
                    };
                    convexcal_core::sphharm::HarmonicExpansion::from_fn(|u| h(u), max_degree, &rule)
                }
            };
            let mut csv = String::from(
                "k,m,coefficient
",
            );
            for k in 0..=max_degree {
                for m in -(k as isize)..=(k as isize) {
                    csv.push_str(&format!(
                        "{},{},{}
",
                        k,
                        m,
                        expansion.coeff(k, m)
                    ));
                }
            }
            match out {
                Some(path) => {
                    std::fs::write(&path, csv)?;
                    println!("wrote {}", path.display());
                }
                None => print!("{csv}"),
            }
            Ok(())
        }
        Command::Reconstruct { measure, out } => {
            let mf: MeasureFile = parse_json(&std::fs::read_to_string(&measure)?, "measure file")?;
            if mf.atoms.len() < 4 {
                return Err(AppError::Infeasible(format!(
                    "{} atoms cannot bound a body",
                    mf.atoms.len()
                )));
            }
            let atoms: Vec<([f64; 3], f64)> =
                mf.atoms.iter().map(|a| (a.normal, a.weight)).collect();
            let mu = convexcal_core::body::DiscreteSurfaceMeasure::new(atoms)?;
            let sol = solve(&MinkowskiInstance::new(mu))?;
            let out_body = body_out(
                &sol.polytope,
                Some(sol.max_rel_residual),
                Some(sol.iterations.len()),
            );
            std::fs::write(&out, serde_json::to_string_pretty(&out_body).unwrap())?;
            println!(
                "wrote {} (volume {:.6}, residual {:.3e})",
                out.display(),
                sol.polytope.volume(),
                sol.max_rel_residual
            );
            Ok(())
        }
    }
}
