//! Command-line front end: ingestion, analysis, parametrization,
//! evaluation, and verification as reproducible runs.
//!
//! Exit codes: 0 success, 2 not solvable, 3 not determinate (for
//! `solve`), 1 any other error. Every failure prints a single
//! machine-parsable `error: Name: detail` line on stderr. Reports carry
//! no timestamps, so runs with fixed inputs and seed are byte-identical.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tmtmp::determinacy::unique_solution;
use tmtmp::error::Error;
use tmtmp::io;
use tmtmp::lft::{resolvent_oracle, NevanlinnaCoefficients, SchurParameter};
use tmtmp::linalg::{c64, C64};
use tmtmp::measures::{measure_from_unitary_extension, MatrixMeasure};
use tmtmp::pipeline::{analyze, Analysis, Tolerances};

#[derive(Parser)]
#[command(
    name = "tmtmp",
    version,
    about = "Truncated matrix trigonometric moment problem solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ToleranceArgs {
    /// Relative rank threshold of the orthonormalization passes (also the
    /// determinacy residual threshold).
    #[arg(long, default_value_t = 1e-8)]
    rank_tol: f64,
    /// Relative PSD tolerance of the solvability test.
    #[arg(long, default_value_t = 1e-10)]
    psd_tol: f64,
}

impl ToleranceArgs {
    fn tolerances(&self) -> Tolerances {
        Tolerances {
            psd_tol: self.psd_tol,
            rank_tol: self.rank_tol,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Report solvability, dimensions, and the determinacy verdict.
    Check {
        /// Moment file (JSON).
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        tols: ToleranceArgs,
    },
    /// Write the unique solution of a determinate problem.
    Solve {
        #[arg(long)]
        input: PathBuf,
        /// Measure file to write; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        tols: ToleranceArgs,
    },
    /// Export the parametrization coefficients of an indeterminate problem.
    Coeffs {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        tols: ToleranceArgs,
    },
    /// Evaluate the parametrized transform at a disk point.
    Evaluate {
        #[arg(long)]
        input: PathBuf,
        /// Schur parameter file (JSON).
        #[arg(long)]
        param: PathBuf,
        /// Evaluation point as RE,IM with |zeta| < 1.
        #[arg(long)]
        zeta: String,
        #[command(flatten)]
        tols: ToleranceArgs,
    },
    /// Write the atomic solution selected by a constant unitary parameter.
    Extend {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        param: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        tols: ToleranceArgs,
    },
    /// Check that parametrized solutions reproduce the input moments.
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// Optional parameter file; without it the sweep uses F = 0, F = I,
        /// and a random contraction drawn from the seed.
        #[arg(long)]
        param: Option<PathBuf>,
        /// Seed of the random contraction in the default sweep.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        tols: ToleranceArgs,
    },
    /// Check a measure file against a moment file.
    VerifyMeasure {
        #[arg(long)]
        input: PathBuf,
        /// Measure file to verify.
        #[arg(long)]
        measure: PathBuf,
    },
}

const EXIT_NOT_SOLVABLE: u8 = 2;
const EXIT_NOT_DETERMINATE: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Check { input, tols } => check(&input, &tols.tolerances()),
        Command::Solve {
            input,
            output,
            tols,
        } => solve(&input, output.as_deref(), &tols.tolerances()),
        Command::Coeffs {
            input,
            output,
            tols,
        } => coeffs(&input, output.as_deref(), &tols.tolerances()),
        Command::Evaluate {
            input,
            param,
            zeta,
            tols,
        } => evaluate(&input, &param, &zeta, &tols.tolerances()),
        Command::Extend {
            input,
            param,
            output,
            tols,
        } => extend(&input, &param, output.as_deref(), &tols.tolerances()),
        Command::Verify {
            input,
            param,
            seed,
            tols,
        } => verify(&input, param.as_deref(), seed, &tols.tolerances()),
        Command::VerifyMeasure { input, measure } => verify_measure(&input, &measure),
    }
}

fn parse_zeta(raw: &str) -> Result<C64, Error> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::ParseError(format!(
            "zeta must be RE,IM (got {raw:?})"
        )));
    }
    let re: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::ParseError(format!("bad real part in zeta: {:?}", parts[0])))?;
    let im: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| Error::ParseError(format!("bad imaginary part in zeta: {:?}", parts[1])))?;
    Ok(c64(re, im))
}

fn analyzed(input: &Path, tol: &Tolerances) -> Result<Analysis, Error> {
    let moments = io::read_moments(input)?;
    analyze(moments, tol)
}

fn report_not_solvable(analysis: &Analysis) -> ExitCode {
    eprintln!(
        "error: NotSolvable: min eigenvalue {:e}",
        analysis.solvability.min_eigenvalue
    );
    ExitCode::from(EXIT_NOT_SOLVABLE)
}

fn emit(output: Option<&Path>, payload: &str) -> Result<(), Error> {
    match output {
        Some(path) => {
            std::fs::write(path, payload)?;
            eprintln!("wrote: {}", path.display());
        }
        None => println!("{payload}"),
    }
    Ok(())
}

fn check(input: &Path, tol: &Tolerances) -> Result<ExitCode, Error> {
    let analysis = analyzed(input, tol)?;
    println!("solvable: {}", analysis.solvability.solvable);
    println!("min_eigenvalue: {:e}", analysis.solvability.min_eigenvalue);
    println!("max_eigenvalue: {:e}", analysis.solvability.max_eigenvalue);
    if !analysis.is_solvable() {
        return Ok(ExitCode::from(EXIT_NOT_SOLVABLE));
    }
    let basis = analysis.basis.as_ref().expect("solvable analysis");
    let report = analysis.report.as_ref().expect("solvable analysis");
    println!("rho: {}", basis.rho);
    println!("tau: {}", basis.tau);
    println!("delta: {}", basis.delta);
    println!("omega1: {:?}", basis.omega1);
    println!("omega2: {:?}", basis.omega2);
    println!("determinate: {}", report.determinate);
    println!("routes_agree: {}", report.agree);
    let residuals: Vec<String> = report
        .condition_c_residuals
        .iter()
        .map(|r| format!("{r:e}"))
        .collect();
    println!("condition_c_residuals: [{}]", residuals.join(", "));
    println!("determinacy_threshold: {:e}", report.threshold);
    for flag in &basis.flags {
        println!(
            "near_threshold: pass={} index={} residual={:e} threshold={:e} accepted={}",
            flag.pass, flag.index, flag.residual, flag.threshold, flag.accepted
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn solve(input: &Path, output: Option<&Path>, tol: &Tolerances) -> Result<ExitCode, Error> {
    let analysis = analyzed(input, tol)?;
    if !analysis.is_solvable() {
        return Ok(report_not_solvable(&analysis));
    }
    let basis = analysis.basis.as_ref().expect("solvable analysis");
    if basis.delta != 0 {
        eprintln!(
            "error: NotDeterminate: problem has defect {}, the solution is not unique",
            basis.delta
        );
        return Ok(ExitCode::from(EXIT_NOT_DETERMINATE));
    }
    let mu = unique_solution(&analysis.gram, basis)?;
    emit(output, &io::write_measure(&mu))?;
    Ok(ExitCode::SUCCESS)
}

fn coefficients_of(analysis: &Analysis) -> Result<NevanlinnaCoefficients, Error> {
    let basis = analysis.basis.as_ref().expect("solvable analysis");
    NevanlinnaCoefficients::from_basis(basis, &analysis.gram)
}

fn coeffs(input: &Path, output: Option<&Path>, tol: &Tolerances) -> Result<ExitCode, Error> {
    let analysis = analyzed(input, tol)?;
    if !analysis.is_solvable() {
        return Ok(report_not_solvable(&analysis));
    }
    let c = coefficients_of(&analysis)?;
    emit(output, &io::write_coeffs(&c))?;
    Ok(ExitCode::SUCCESS)
}

fn evaluate(
    input: &Path,
    param: &Path,
    zeta_raw: &str,
    tol: &Tolerances,
) -> Result<ExitCode, Error> {
    let zeta = parse_zeta(zeta_raw)?;
    let analysis = analyzed(input, tol)?;
    if !analysis.is_solvable() {
        return Ok(report_not_solvable(&analysis));
    }
    let f = io::read_param(param)?;
    let c = coefficients_of(&analysis)?;
    let value = c.evaluate_transform(&f, zeta)?;
    println!("zeta: [{:e}, {:e}]", zeta.re, zeta.im);
    println!(
        "herglotz_of_m_transpose: {}",
        io::matrix_json_string(&value)
    );
    println!(
        "herglotz_of_m: {}",
        io::matrix_json_string(&value.transpose())
    );
    Ok(ExitCode::SUCCESS)
}

fn extend(
    input: &Path,
    param: &Path,
    output: Option<&Path>,
    tol: &Tolerances,
) -> Result<ExitCode, Error> {
    let analysis = analyzed(input, tol)?;
    if !analysis.is_solvable() {
        return Ok(report_not_solvable(&analysis));
    }
    let f = io::read_param(param)?;
    let basis = analysis.basis.as_ref().expect("solvable analysis");
    if !f.is_constant() {
        return Err(Error::ParseError(
            "extend requires a constant unitary parameter, got a polynomial".into(),
        ));
    }
    // the unitarity check happens inside the extension
    let mu = measure_from_unitary_extension(basis, &analysis.gram, &f.coeffs()[0])?;
    emit(output, &io::write_measure(&mu))?;
    Ok(ExitCode::SUCCESS)
}

fn moment_error(mu: &MatrixMeasure, analysis: &Analysis) -> f64 {
    let mut worst: f64 = 0.0;
    for k in 0..=analysis.moments.highest_index() {
        let diff = (&mu.moment(k as i64) - analysis.moments.moment(k)).frobenius_norm();
        worst = worst.max(diff);
    }
    worst
}

fn verify(
    input: &Path,
    param: Option<&Path>,
    seed: u64,
    tol: &Tolerances,
) -> Result<ExitCode, Error> {
    let analysis = analyzed(input, tol)?;
    if !analysis.is_solvable() {
        return Ok(report_not_solvable(&analysis));
    }
    let basis = analysis.basis.as_ref().expect("solvable analysis");
    let scale = analysis.moments.moment(0).frobenius_norm().max(1.0);
    let threshold = 1e-8 * scale;
    println!("tolerance: {threshold:e}");
    let mut all_ok = true;

    if basis.delta == 0 {
        // determinate: the unique solution must reproduce the data
        let mu = unique_solution(&analysis.gram, basis)?;
        let err = moment_error(&mu, &analysis);
        println!("unique_solution_moment_error: {err:e}");
        all_ok &= err <= threshold;
    } else {
        let c = coefficients_of(&analysis)?;
        let params: Vec<(String, SchurParameter)> = match param {
            Some(path) => vec![(format!("file({})", path.display()), io::read_param(path)?)],
            None => vec![
                ("zero".into(), SchurParameter::zero(basis.delta)),
                ("identity".into(), SchurParameter::identity(basis.delta)),
                (
                    format!("random(seed={seed})"),
                    SchurParameter::random_contraction(basis.delta, seed),
                ),
            ],
        };
        for (label, f) in &params {
            let taylor = c.taylor_moments(f, analysis.moments.highest_index() + 1)?;
            let mut err: f64 = 0.0;
            for (k, coeff) in taylor.iter().enumerate() {
                let expect = analysis.moments.moment(k).transpose();
                err = err.max((coeff - &expect).frobenius_norm());
            }
            println!("parameter: {label}");
            println!("max_moment_error: {err:e}");
            all_ok &= err <= threshold;

            if let Some(constant) = f.constant_unitary(1e-9) {
                let mu = measure_from_unitary_extension(basis, &analysis.gram, constant)?;
                let round = moment_error(&mu, &analysis);
                println!("measure_roundtrip_error: {round:e}");
                all_ok &= round <= threshold;
                // the measure's transform must match the formula as well
                let mut transform_err: f64 = 0.0;
                let mut rng = tmtmp::rng::SplitMix64::new(seed ^ 0x5eed);
                for _ in 0..5 {
                    let zeta = rng.disk_point(0.9);
                    let via_measure = mu.herglotz(zeta)?.transpose();
                    let via_formula = c.evaluate_transform(f, zeta)?;
                    transform_err = transform_err.max((&via_measure - &via_formula).max_abs());
                }
                println!("measure_transform_error: {transform_err:e}");
                all_ok &= transform_err <= threshold;
            }
        }
        // the two evaluation routes must agree independently of parameters
        let mut oracle_err: f64 = 0.0;
        let mut rng = tmtmp::rng::SplitMix64::new(seed.wrapping_add(1));
        let f = SchurParameter::random_contraction(basis.delta, seed.wrapping_add(2));
        for _ in 0..10 {
            let zeta = rng.disk_point(0.95);
            let a = c.evaluate_transform(&f, zeta)?;
            let b = resolvent_oracle(basis, &analysis.gram, &f, zeta)?;
            oracle_err = oracle_err.max((&a - &b).max_abs());
        }
        println!("oracle_agreement_error: {oracle_err:e}");
        all_ok &= oracle_err <= threshold;
    }

    println!("verdict: {}", if all_ok { "pass" } else { "fail" });
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn verify_measure(input: &Path, measure: &Path) -> Result<ExitCode, Error> {
    let moments = io::read_moments(input)?;
    let mu = io::read_measure(measure)?;
    if mu.n() != moments.block_size() {
        return Err(Error::ParseError(format!(
            "measure size {} does not match moment size {}",
            mu.n(),
            moments.block_size()
        )));
    }
    let scale = moments.moment(0).frobenius_norm().max(1.0);
    let threshold = 1e-8 * scale;
    let mut worst: f64 = 0.0;
    for k in 0..=moments.highest_index() {
        let diff = (&mu.moment(k as i64) - moments.moment(k)).frobenius_norm();
        println!("moment_error[{k}]: {diff:e}");
        worst = worst.max(diff);
    }
    println!("max_moment_error: {worst:e}");
    println!("tolerance: {threshold:e}");
    let ok = worst <= threshold;
    println!("verdict: {}", if ok { "pass" } else { "fail" });
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
