//! Eigenvalue counting, orthogonality reports, and the invariant suite
//! behind `mgl check`.

use crate::calculus::{self, apply_nabla, energy, inner_product, PiecewiseSine};
use crate::measure::MeasureSpec;
use crate::monodromy::{self, find_spectrum, ScanOptions, SpectrumResult};
use crate::oracle;
use serde::Serialize;
use std::f64::consts::PI;
use std::time::Instant;

/// One sample of the eigenvalue counting function of −Δ_η.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CountingSample {
    /// Threshold on the eigenvalues of −Δ_η.
    pub x: f64,
    /// Number of eigenvalues ≤ x, counted with multiplicity.
    pub count: usize,
    /// π·count/√x; tends to 1 as x grows.
    pub ratio: f64,
}

/// Count eigenvalues λ of −Δ_η with λ ≤ x by enumerating discriminant roots
/// up to b = √x.
pub fn counting_function(spec: &MeasureSpec, x: f64) -> monodromy::Result<CountingSample> {
    assert!(x > 0.0, "threshold must be positive");
    let result = find_spectrum(spec, x.sqrt(), &ScanOptions::default())?;
    Ok(sample_from(&result, x))
}

fn sample_from(result: &SpectrumResult, x: f64) -> CountingSample {
    let sqrt_x = x.sqrt();
    let count: usize = result
        .roots
        .iter()
        .filter(|r| r.b <= sqrt_x + 1e-12)
        .map(|r| r.multiplicity)
        .sum();
    CountingSample {
        x,
        count,
        ratio: PI * count as f64 / sqrt_x,
    }
}

/// Counting samples for several thresholds, reusing one scan up to the
/// largest.
pub fn counting_sweep(spec: &MeasureSpec, xs: &[f64]) -> monodromy::Result<Vec<CountingSample>> {
    let max_x = xs.iter().cloned().fold(0.0f64, f64::max);
    assert!(max_x > 0.0);
    let result = find_spectrum(spec, max_x.sqrt(), &ScanOptions::default())?;
    Ok(xs.iter().map(|&x| sample_from(&result, x)).collect())
}

/// Gram matrix of the first m normalized eigenfunctions in ⟨·,·⟩_η.
#[derive(Debug, Clone, Serialize)]
pub struct GramReport {
    pub size: usize,
    pub max_off_diagonal: f64,
    pub max_diagonal_deviation: f64,
    pub gram: Vec<Vec<f64>>,
}

/// Build the Gram matrix of the first `m` eigenfunctions (sorted by |λ|).
pub fn orthogonality_suite(spec: &MeasureSpec, m: usize) -> monodromy::Result<GramReport> {
    let mut b_max = PI * (m as f64 + 2.0) / spec.continuous().total_mass();
    let mut result = find_spectrum(spec, b_max, &ScanOptions::default())?;
    while result.pairs.len() < m {
        b_max *= 1.5;
        result = find_spectrum(spec, b_max, &ScanOptions::default())?;
    }
    let funcs: Vec<&PiecewiseSine> = result
        .pairs
        .iter()
        .take(m)
        .map(|p| &p.eigenfunction)
        .collect();
    let mut gram = vec![vec![0.0f64; m]; m];
    let mut max_off: f64 = 0.0;
    let mut max_diag: f64 = 0.0;
    for i in 0..m {
        for j in 0..=i {
            let ip = inner_product(funcs[i], funcs[j], spec);
            gram[i][j] = ip;
            gram[j][i] = ip;
            if i == j {
                max_diag = max_diag.max((ip - 1.0).abs());
            } else {
                max_off = max_off.max(ip.abs());
            }
        }
    }
    Ok(GramReport {
        size: m,
        max_off_diagonal: max_off,
        max_diagonal_deviation: max_diag,
        gram,
    })
}

/// One named invariant with its bound and the observed value.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantCheck {
    pub name: String,
    pub bound: f64,
    pub observed: f64,
    pub passed: bool,
}

impl InvariantCheck {
    fn new(name: &str, observed: f64, bound: f64) -> Self {
        InvariantCheck {
            name: name.to_string(),
            bound,
            observed,
            passed: observed <= bound,
        }
    }
}

/// Outcome of the full invariant suite on one measure.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub measure: serde_json::Value,
    pub spectrum: Vec<SpectrumRow>,
    pub checks: Vec<InvariantCheck>,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRow {
    pub k_or_rank: i64,
    pub b: f64,
    pub lambda_minus_delta: f64,
    pub lambda_delta: f64,
    pub multiplicity: usize,
    pub amplitudes: Vec<f64>,
    pub phases: Vec<f64>,
}

pub fn spectrum_rows(result: &SpectrumResult) -> Vec<SpectrumRow> {
    result
        .pairs
        .iter()
        .map(|p| SpectrumRow {
            k_or_rank: p.k,
            b: p.b,
            lambda_minus_delta: p.b * p.b,
            lambda_delta: p.lambda,
            multiplicity: p.multiplicity,
            amplitudes: p
                .eigenfunction
                .segments()
                .iter()
                .map(|s| s.amplitude)
                .collect(),
            phases: p.eigenfunction.segments().iter().map(|s| s.phase).collect(),
        })
        .collect()
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Run every structural invariant the operator must satisfy on this measure:
/// unimodular transfer matrices, the zero mode, eigen-residuals, Gram
/// orthogonality, non-positivity (analytic and through the discrete cycle
/// operator), derivative mean-zero, energy symmetry, adjointness, and
/// counting monotonicity. Bounds are printed alongside observations; a
/// failed check names the violated bound.
pub fn run_invariant_suite(spec: &MeasureSpec) -> Result<RunReport, SuiteError> {
    let started = Instant::now();
    let canonical = spec.to_canonical();
    let spec = &canonical.spec;
    let mut checks = Vec::new();

    let b_max = 8.0 * PI / spec.continuous().total_mass();
    let result = find_spectrum(spec, b_max, &ScanOptions::default())?;

    checks.push(InvariantCheck::new(
        "transfer matrices unimodular (max |det − 1|)",
        result.max_det_deviation,
        1e-10,
    ));

    let disc0 = monodromy::discriminant(spec, 0.0)?;
    checks.push(InvariantCheck::new(
        "b = 0 is a discriminant root",
        disc0.abs(),
        1e-12,
    ));
    let zero_fn = monodromy::assemble_eigenfunction(spec, 0.0)?.remove(0);
    let flat = (0..64)
        .map(|i| {
            let x = (i as f64 + 0.5) / 64.0;
            (zero_fn.eval(spec, x) - 1.0 / spec.total_mass().sqrt()).abs()
        })
        .fold(0.0f64, f64::max);
    checks.push(InvariantCheck::new(
        "zero mode is the constant function",
        flat,
        1e-12,
    ));

    let mut worst_system: f64 = 0.0;
    let mut worst_pointwise: f64 = 0.0;
    let mut worst_norm: f64 = 0.0;
    let mut worst_mean: f64 = 0.0;
    let one = PiecewiseSine::constant(1.0, spec.atom_count());
    for p in &result.pairs {
        worst_system = worst_system.max(calculus::system_residual(&p.eigenfunction, spec));
        worst_pointwise = worst_pointwise.max(calculus::eigen_residual(
            &p.eigenfunction,
            p.lambda,
            spec,
            1000,
        ));
        worst_norm =
            worst_norm.max((inner_product(&p.eigenfunction, &p.eigenfunction, spec) - 1.0).abs());
        worst_mean =
            worst_mean.max(inner_product(&apply_nabla(&p.eigenfunction, spec), &one, spec).abs());
    }
    checks.push(InvariantCheck::new(
        "eigenpairs satisfy the matching system",
        worst_system,
        1e-10,
    ));
    checks.push(InvariantCheck::new(
        "pointwise Laplacian residual |Δf − λf|/max(1,|λ|)",
        worst_pointwise,
        1e-8,
    ));
    checks.push(InvariantCheck::new(
        "eigenfunctions normalized",
        worst_norm,
        1e-10,
    ));
    checks.push(InvariantCheck::new(
        "derivatives integrate to zero",
        worst_mean,
        1e-10,
    ));

    let m = result.pairs.len().clamp(2, 6);
    let gram = orthogonality_suite(spec, m)?;
    checks.push(InvariantCheck::new(
        "Gram off-diagonals",
        gram.max_off_diagonal,
        1e-8,
    ));
    checks.push(InvariantCheck::new(
        "Gram diagonal deviation",
        gram.max_diagonal_deviation,
        1e-10,
    ));

    let max_lambda = result
        .roots
        .iter()
        .map(|r| r.lambda)
        .fold(f64::NEG_INFINITY, f64::max);
    checks.push(InvariantCheck::new(
        "analytic eigenvalues non-positive",
        max_lambda,
        1e-10,
    ));

    let mut worst_energy_asym: f64 = 0.0;
    let mut worst_adjoint: f64 = 0.0;
    let mut min_energy: f64 = f64::INFINITY;
    for (i, p) in result.pairs.iter().enumerate().take(4) {
        for q in result.pairs.iter().take(i + 1) {
            let efg = energy(&p.eigenfunction, &q.eigenfunction, spec);
            let egf = energy(&q.eigenfunction, &p.eigenfunction, spec);
            worst_energy_asym = worst_energy_asym.max((efg - egf).abs());
            // E(f, g) = −⟨Δf, g⟩ = −λ⟨f, g⟩ for an eigenpair f.
            let want = -p.lambda * inner_product(&p.eigenfunction, &q.eigenfunction, spec);
            worst_adjoint = worst_adjoint.max((efg - want).abs() / 1.0f64.max(p.lambda.abs()));
        }
        min_energy = min_energy.min(energy(&p.eigenfunction, &p.eigenfunction, spec));
    }
    checks.push(InvariantCheck::new(
        "energy form symmetric",
        worst_energy_asym,
        1e-9,
    ));
    checks.push(InvariantCheck::new(
        "energy matches −⟨Δf, g⟩",
        worst_adjoint,
        1e-9,
    ));
    checks.push(InvariantCheck::new(
        "energy non-negative (−min)",
        -min_energy.min(0.0),
        1e-12,
    ));

    // Discrete oracle at a modest grid: exact zero mode, one-dimensional
    // kernel, non-positive spectrum, coarse agreement with the analytic
    // eigenvalues (first-order discretization: ~1/n relative).
    let approx = oracle::discretize(spec, 400);
    let profile = oracle::laplacian_profile(&approx)?;
    let take = result.roots.len().min(6);
    let pairs = oracle::lowest_eigenpairs(&profile, take)?;
    let oracle_lambdas: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    checks.push(InvariantCheck::new(
        "oracle eigenvalues non-positive",
        oracle_lambdas
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max),
        1e-10,
    ));
    checks.push(InvariantCheck::new(
        "oracle kernel is one-dimensional (−λ₁ > 1)",
        if oracle_lambdas.len() > 1 && oracle_lambdas[1] < -1.0 {
            0.0
        } else {
            1.0
        },
        0.5,
    ));
    let report = oracle::compare_spectra(&result, &oracle_lambdas, take);
    checks.push(InvariantCheck::new(
        "oracle matches analytic spectrum at n = 400",
        report.max_relative_error,
        2e-2,
    ));

    let xs = [4.0, 16.0, 64.0, 256.0];
    let sweep = counting_sweep(spec, &xs)?;
    let monotone = sweep.windows(2).all(|w| w[1].count >= w[0].count);
    checks.push(InvariantCheck::new(
        "counting function nondecreasing",
        if monotone { 0.0 } else { 1.0 },
        0.5,
    ));

    Ok(RunReport {
        measure: serde_json::to_value(spec).expect("measure serializes"),
        spectrum: spectrum_rows(&result),
        checks,
        elapsed_seconds: started.elapsed().as_secs_f64(),
    })
}

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error(transparent)]
    Spectrum(#[from] monodromy::SpectrumError),
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_atom() -> MeasureSpec {
        MeasureSpec::lebesgue_with_atoms(&[(1.0, 1.0 / PI)]).unwrap()
    }

    #[test]
    fn counting_includes_the_zero_mode() {
        let sample = counting_function(&one_atom(), 0.5).unwrap();
        assert!(sample.count >= 1);
    }

    #[test]
    fn counting_at_thirty_matches_enumeration() {
        // Eigenvalues of −Δ below 30: {0, ≈16.9, ≈29.3}.
        let sample = counting_function(&one_atom(), 30.0).unwrap();
        assert_eq!(sample.count, 3);
    }

    #[test]
    fn counting_is_monotone() {
        let xs = [1.0, 10.0, 30.0, 100.0, 400.0];
        let sweep = counting_sweep(&one_atom(), &xs).unwrap();
        for w in sweep.windows(2) {
            assert!(w[1].count >= w[0].count);
        }
    }

    #[test]
    fn gram_matrix_is_near_identity() {
        let report = orthogonality_suite(&one_atom(), 5).unwrap();
        assert_eq!(report.size, 5);
        assert!(report.max_off_diagonal <= 1e-8);
        assert!(report.max_diagonal_deviation <= 1e-10);
    }

    #[test]
    fn single_function_gram_has_no_off_diagonal() {
        let report = orthogonality_suite(&one_atom(), 1).unwrap();
        assert_eq!(report.size, 1);
        assert_eq!(report.max_off_diagonal, 0.0);
        assert!(report.max_diagonal_deviation <= 1e-10);
    }

    #[test]
    fn invariant_suite_passes_on_paper_measures() {
        let report = run_invariant_suite(&one_atom()).unwrap();
        for c in &report.checks {
            assert!(
                c.passed,
                "{}: observed {} > bound {}",
                c.name, c.observed, c.bound
            );
        }
        let two = MeasureSpec::lebesgue_with_atoms(&[(0.5, 1.0 / PI), (1.0, 1.0 / PI)]).unwrap();
        let report = run_invariant_suite(&two).unwrap();
        assert!(report.all_passed());
    }
}
