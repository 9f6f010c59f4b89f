use clap::{Args, Parser, Subcommand};
use mgl::analysis::{self, counting_sweep, run_invariant_suite, spectrum_rows};
use mgl::closed_form::{eigenpair_one_atom, eigenpair_two_atoms};
use mgl::measure::MeasureSpec;
use mgl::monodromy::{find_spectrum, ScanOptions};
use mgl::oracle::{compare_spectra, discretize, laplacian_profile, lowest_eigenpairs};
use mgl::plot::render_eigenfunction;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

/// Spectra of measure-geometric Laplacians: exact eigenvalues and
/// piecewise-sine eigenfunctions for measures with a continuous part plus
/// finitely many weighted point masses, cross-validated against a discrete
/// cycle-operator oracle.
#[derive(Parser)]
#[command(name = "mgl", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MeasureArg {
    /// Measure description as JSON: {"continuous": {...}, "atoms": [...]}.
    #[arg(long, value_name = "file.json")]
    measure: PathBuf,
    /// Emit a JSON report on stdout instead of the plain-text summary.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all eigenvalues with |b| up to a cutoff and write them as CSV.
    Spectrum {
        #[command(flatten)]
        measure: MeasureArg,
        /// Frequency cutoff: eigenvalues λ = −b² with b ≤ bmax.
        #[arg(long)]
        bmax: f64,
        /// Root refinement tolerance in b.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Output CSV path.
        #[arg(long, value_name = "spectrum.csv")]
        out: PathBuf,
    },
    /// Compare the analytic spectrum against the discrete cycle-operator oracle.
    Oracle {
        #[command(flatten)]
        measure: MeasureArg,
        /// Grid atoms per unit of continuous mass.
        #[arg(short = 'n', long = "grid")]
        grid: usize,
        /// Number of eigenvalues to compare.
        #[arg(short = 'm', long = "count")]
        count: usize,
        /// Output CSV path.
        #[arg(long, value_name = "compare.csv")]
        out: PathBuf,
    },
    /// Eigenvalue counting function of −Δ_η at one or more thresholds.
    Count {
        #[command(flatten)]
        measure: MeasureArg,
        /// Threshold x: counts eigenvalues of −Δ_η that are ≤ x.
        #[arg(long)]
        x: f64,
        /// Additional thresholds, comma separated.
        #[arg(long, value_delimiter = ',')]
        sweep: Vec<f64>,
    },
    /// Render one eigenfunction as an SVG figure.
    Plot {
        #[command(flatten)]
        measure: MeasureArg,
        /// Eigenpair index: the closed-form label k for the solved one- and
        /// two-atom families (may be negative), the |λ|-sorted rank otherwise.
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        /// Output SVG path.
        #[arg(long, value_name = "out.svg")]
        svg: PathBuf,
    },
    /// Run the full invariant suite; exits 0 exactly when every check passes.
    Check {
        #[command(flatten)]
        measure: MeasureArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

/// All numeric output carries 15 significant digits.
fn num(v: f64) -> String {
    format!("{v:.14e}")
}

fn load_measure(arg: &MeasureArg) -> Result<MeasureSpec, Box<dyn std::error::Error>> {
    let text = std::fs::read_to_string(&arg.measure)
        .map_err(|e| format!("cannot read {}: {e}", arg.measure.display()))?;
    Ok(MeasureSpec::from_json(&text)?)
}

#[derive(Serialize)]
struct SpectrumReport {
    measure: serde_json::Value,
    shift: f64,
    b_max: f64,
    scan_step: f64,
    max_det_deviation: f64,
    rows: Vec<analysis::SpectrumRow>,
}

#[derive(Serialize)]
struct OracleReport {
    measure: serde_json::Value,
    grid: usize,
    order: usize,
    rows: Vec<OracleRow>,
    max_relative_error: f64,
    length_mismatch: bool,
}

#[derive(Serialize)]
struct OracleRow {
    rank: usize,
    lambda_analytic: f64,
    lambda_oracle: f64,
    relative_error: f64,
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Spectrum {
            measure,
            bmax,
            tol,
            out,
        } => {
            if bmax.is_nan() || bmax <= 0.0 {
                return Err("bmax must be positive".into());
            }
            let spec = load_measure(&measure)?;
            let canonical = spec.to_canonical();
            let opts = ScanOptions {
                refine_width: tol.max(f64::EPSILON),
                ..ScanOptions::default()
            };
            let result = find_spectrum(&canonical.spec, bmax, &opts)?;
            let rows = spectrum_rows(&result);
            let n = canonical.spec.atom_count();
            let mut csv = String::new();
            write!(csv, "k_or_rank,b,lambda_minus_delta,multiplicity").unwrap();
            for j in 1..=n {
                write!(csv, ",a_{j}").unwrap();
            }
            for j in 1..=n {
                write!(csv, ",gamma_{j}").unwrap();
            }
            csv.push('\n');
            for row in &rows {
                write!(
                    csv,
                    "{},{},{},{}",
                    row.k_or_rank,
                    num(row.b),
                    num(row.lambda_minus_delta),
                    row.multiplicity
                )
                .unwrap();
                for a in &row.amplitudes {
                    write!(csv, ",{}", num(*a)).unwrap();
                }
                for g in &row.phases {
                    write!(csv, ",{}", num(*g)).unwrap();
                }
                csv.push('\n');
            }
            std::fs::write(&out, csv)?;
            if measure.json {
                let report = SpectrumReport {
                    measure: serde_json::to_value(&canonical.spec)?,
                    shift: canonical.shift,
                    b_max: result.b_max,
                    scan_step: result.step,
                    max_det_deviation: result.max_det_deviation,
                    rows,
                };
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!(
                    "{} eigenvalues (with multiplicity) up to b = {}; written to {}",
                    result.eigenvalue_count(),
                    num(bmax),
                    out.display()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle {
            measure,
            grid,
            count,
            out,
        } => {
            if grid < 10 {
                return Err("grid must be at least 10".into());
            }
            let spec = load_measure(&measure)?;
            let canonical = spec.to_canonical();
            // Enough analytic roots to cover the requested count.
            let b_max = (count as f64 + 3.0) * std::f64::consts::PI
                / canonical.spec.continuous().total_mass();
            let analytic = find_spectrum(&canonical.spec, b_max, &ScanOptions::default())?;
            let approx = discretize(&canonical.spec, grid);
            let profile = laplacian_profile(&approx)?;
            let pairs = lowest_eigenpairs(&profile, count.min(profile.order()))?;
            let lambdas: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let report = compare_spectra(&analytic, &lambdas, count);
            let mut csv = String::from("rank,lambda_analytic,lambda_oracle,relative_error\n");
            let mut rows = Vec::new();
            for (rank, (a, o, rel)) in report.entries.iter().enumerate() {
                writeln!(csv, "{rank},{},{},{}", num(*a), num(*o), num(*rel)).unwrap();
                rows.push(OracleRow {
                    rank,
                    lambda_analytic: *a,
                    lambda_oracle: *o,
                    relative_error: *rel,
                });
            }
            std::fs::write(&out, csv)?;
            if measure.json {
                let report = OracleReport {
                    measure: serde_json::to_value(&canonical.spec)?,
                    grid,
                    order: profile.order(),
                    rows,
                    max_relative_error: report.max_relative_error,
                    length_mismatch: report.length_mismatch,
                };
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!(
                    "compared {} eigenvalues at grid {} (order {}): max relative error {}",
                    report.entries.len(),
                    grid,
                    profile.order(),
                    num(report.max_relative_error)
                );
                println!("written to {}", out.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Count { measure, x, sweep } => {
            let spec = load_measure(&measure)?;
            let canonical = spec.to_canonical();
            let mut xs = vec![x];
            xs.extend(sweep);
            if xs.iter().any(|v| v.is_nan() || *v <= 0.0) {
                return Err("all thresholds must be positive".into());
            }
            let samples = counting_sweep(&canonical.spec, &xs)?;
            if measure.json {
                println!("{}", serde_json::to_string_pretty(&samples)?);
            } else {
                println!("x,count,ratio_pi_count_over_sqrt_x");
                for s in &samples {
                    println!("{},{},{}", num(s.x), s.count, num(s.ratio));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Plot { measure, k, svg } => {
            let spec = load_measure(&measure)?;
            let canonical = spec.to_canonical();
            let spec = &canonical.spec;
            let atoms = spec.atoms();
            let lebesgue = matches!(spec.continuous(), mgl::measure::ContinuousPart::Lebesgue);
            let pair = if lebesgue && atoms.len() == 1 {
                eigenpair_one_atom(atoms[0].alpha, k)
            } else if lebesgue
                && atoms.len() == 2
                && (atoms[0].z - 0.5).abs() < 1e-12
                && (atoms[0].alpha - atoms[1].alpha).abs() < 1e-12
            {
                eigenpair_two_atoms(atoms[0].alpha, k)
            } else {
                if k < 0 {
                    return Err("rank labels are nonnegative for general measures".into());
                }
                let rank = k as usize;
                let mut b_max =
                    (rank as f64 + 3.0) * std::f64::consts::PI / spec.continuous().total_mass();
                let mut result = find_spectrum(spec, b_max, &ScanOptions::default())?;
                while result.pairs.len() <= rank {
                    b_max *= 1.5;
                    result = find_spectrum(spec, b_max, &ScanOptions::default())?;
                }
                result.pairs.swap_remove(rank)
            };
            render_eigenfunction(&pair.eigenfunction, spec, &svg)?;
            if measure.json {
                let value = serde_json::json!({
                    "k": pair.k,
                    "b": pair.b,
                    "lambda_delta": pair.lambda,
                    "lambda_minus_delta": -pair.lambda,
                    "multiplicity": pair.multiplicity,
                    "svg": svg.display().to_string(),
                });
                println!("{}", serde_json::to_string_pretty(&value)?);
            } else {
                println!(
                    "k = {}: b = {}, lambda = {}; figure written to {}",
                    pair.k,
                    num(pair.b),
                    num(pair.lambda),
                    svg.display()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { measure } => {
            let spec = load_measure(&measure)?;
            let report = run_invariant_suite(&spec)?;
            if measure.json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                for c in &report.checks {
                    println!(
                        "{} {} (observed {}, bound {})",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.name,
                        num(c.observed),
                        num(c.bound)
                    );
                }
                println!(
                    "{} checks in {:.2} s",
                    report.checks.len(),
                    report.elapsed_seconds
                );
            }
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}
