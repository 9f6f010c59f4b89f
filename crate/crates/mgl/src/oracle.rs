//! Independent verification path: replace the continuous part of η by many
//! small point masses and eigensolve the resulting weighted cycle operator.
//!
//! For a purely atomic measure with cyclic weights w₀, …, w_{M−1} the
//! Laplacian acts as the second difference quotient
//!
//! ```text
//! (Δf)ᵢ = ((f_{i+1} − f_i)/w_i − (f_i − f_{i−1})/w_{i−1}) / w_i
//! ```
//!
//! (indices mod M), the matrix form of the two one-sided derivative
//! formulas. Δ is self-adjoint in the weighted inner product Σ wᵢ fᵢ gᵢ and
//! non-positive; conjugating by D^{1/2} with D = diag(w) gives the symmetric
//! profile that is actually eigensolved. The kernel is spanned exactly by
//! D^{1/2}·𝟙 and is deflated analytically before the dense solve, so the
//! reported spectrum has an exact zero mode and strictly negative remainder.

use crate::eigen::{symmetric_eigen, EigenError};
use crate::measure::{MeasureSpec, POSITION_MERGE_TOL};
use crate::monodromy::SpectrumResult;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("cycle operator needs at least 3 atoms, got {0}")]
    TooFewAtoms(usize),
    #[error("requested {requested} eigenpairs from a profile of order {order}")]
    TooManyRequested { requested: usize, order: usize },
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

pub type Result<T> = std::result::Result<T, OracleError>;

/// A purely atomic stand-in for η: grid atoms carrying the continuous mass
/// plus the original atoms verbatim.
#[derive(Debug, Clone)]
pub struct AtomicApprox {
    positions: Vec<f64>,
    weights: Vec<f64>,
    /// true where the atom is one of the measure's own point masses.
    original: Vec<bool>,
}

impl AtomicApprox {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn original_flags(&self) -> &[bool] {
        &self.original
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Replace the continuous part by midpoint cells: every inter-atom segment
/// is split in x into cells (about `n` per unit of continuous mass), each
/// contributing one atom at its midpoint carrying the cell's ν-mass.
pub fn discretize(spec: &MeasureSpec, n: usize) -> AtomicApprox {
    let n = n.max(1);
    let mut positions = Vec::new();
    let mut weights = Vec::new();
    let mut original = Vec::new();
    let mut x_lo = 0.0;
    for atom in spec.atoms() {
        let x_hi = atom.z;
        let seg_mass = spec.continuous().cdf(x_hi) - spec.continuous().cdf(x_lo);
        let cells = ((n as f64 * seg_mass).round() as usize).max(1);
        for c in 0..cells {
            let lo = x_lo + (x_hi - x_lo) * c as f64 / cells as f64;
            let hi = x_lo + (x_hi - x_lo) * (c + 1) as f64 / cells as f64;
            let mid = 0.5 * (lo + hi);
            let mass = spec.continuous().cdf(hi) - spec.continuous().cdf(lo);
            if mass <= 0.0 {
                continue;
            }
            if (mid - x_hi).abs() < POSITION_MERGE_TOL {
                // Collision with the true atom: merge masses.
                positions.push(x_hi);
                weights.push(mass + atom.alpha);
                original.push(true);
                x_lo = x_hi;
                continue;
            }
            positions.push(mid);
            weights.push(mass);
            original.push(false);
        }
        if positions.last().map(|&p| p < x_hi).unwrap_or(true) {
            positions.push(x_hi);
            weights.push(atom.alpha);
            original.push(true);
        }
        x_lo = x_hi;
    }
    AtomicApprox {
        positions,
        weights,
        original,
    }
}

/// The symmetrized cycle operator `D^{1/2} Δ D^{−1/2}` as a dense matrix.
#[derive(Debug, Clone)]
pub struct SymmetricProfile {
    order: usize,
    matrix: Vec<f64>,
    weights: Vec<f64>,
}

impl SymmetricProfile {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.order + j]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The exact kernel direction D^{1/2}·𝟙, normalized.
    pub fn kernel_vector(&self) -> Vec<f64> {
        let mut q: Vec<f64> = self.weights.iter().map(|w| w.sqrt()).collect();
        let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut q {
            *x /= norm;
        }
        q
    }
}

/// Assemble the cyclic-tridiagonal symmetric profile. Both representations
/// of each off-diagonal entry reduce to the same closed form
/// `1/(wᵢ^{3/2} √w_{i+1})`, so the matrix is symmetric exactly.
pub fn laplacian_profile(a: &AtomicApprox) -> Result<SymmetricProfile> {
    let m = a.len();
    if m < 3 {
        return Err(OracleError::TooFewAtoms(m));
    }
    let w = &a.weights;
    let mut matrix = vec![0.0f64; m * m];
    for i in 0..m {
        let prev = (i + m - 1) % m;
        let next = (i + 1) % m;
        matrix[i * m + i] = -(1.0 / w[i]) * (1.0 / w[i] + 1.0 / w[prev]);
        let up = 1.0 / (w[i].powf(1.5) * w[next].sqrt());
        matrix[i * m + next] += up;
        matrix[next * m + i] += up;
    }
    Ok(SymmetricProfile {
        order: m,
        matrix,
        weights: a.weights.clone(),
    })
}

/// The `m` eigenvalues closest to zero with orthonormal eigenvectors (in the
/// symmetrized coordinates), most significant first. The zero mode is exact:
/// the known kernel is deflated by one Householder reflection before the
/// dense solve, which keeps every other eigenvalue strictly negative.
pub fn lowest_eigenpairs(p: &SymmetricProfile, m: usize) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = p.order;
    if m > n {
        return Err(OracleError::TooManyRequested {
            requested: m,
            order: n,
        });
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    let q = p.kernel_vector();
    // Householder vector u with (I − 2uuᵀ) q = e₀.
    let mut u = q.clone();
    u[0] -= 1.0;
    let u_norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let reflect = |v: &mut [f64], u: &[f64]| {
        let dot: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
        for (vi, ui) in v.iter_mut().zip(u) {
            *vi -= 2.0 * dot * ui;
        }
    };
    if u_norm < 1e-300 {
        // q already equals e₀ (degenerate single-direction case); fall back
        // to the plain solve.
        let dec = symmetric_eigen(p.matrix.clone(), n)?;
        let mut out = Vec::with_capacity(m);
        for j in (n - m..n).rev() {
            out.push((dec.eigenvalues[j], dec.eigenvector(j)));
        }
        return Ok(out);
    }
    for x in &mut u {
        *x /= u_norm;
    }
    // H B H as a rank-2 update of B with the vectors u and Bu.
    let bu: Vec<f64> = (0..n)
        .map(|i| {
            p.matrix[i * n..(i + 1) * n]
                .iter()
                .zip(&u)
                .map(|(m, uj)| m * uj)
                .sum()
        })
        .collect();
    let ubu: f64 = u.iter().zip(&bu).map(|(a, b)| a * b).sum();
    let mut h = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            h[i * n + j] = p.matrix[i * n + j] - 2.0 * u[i] * bu[j] - 2.0 * bu[i] * u[j]
                + 4.0 * ubu * u[i] * u[j];
        }
    }
    // In exact arithmetic row 0 and column 0 of H B H vanish (H e₀ = q spans
    // the kernel); zero them and solve the trailing block.
    let nn = n - 1;
    let mut block = vec![0.0f64; nn * nn];
    for i in 0..nn {
        for j in 0..nn {
            block[i * nn + j] = h[(i + 1) * n + (j + 1)];
        }
    }
    let dec = symmetric_eigen(block, nn)?;
    let mut out: Vec<(f64, Vec<f64>)> = Vec::with_capacity(m);
    out.push((0.0, q));
    // Ascending eigenvalues: the closest-to-zero negatives sit at the end.
    for idx in 0..m.saturating_sub(1) {
        let j = nn - 1 - idx;
        let y = dec.eigenvector(j);
        let mut v = vec![0.0f64; n];
        v[1..].copy_from_slice(&y);
        reflect(&mut v, &u);
        out.push((dec.eigenvalues[j], v));
    }
    Ok(out)
}

/// Relative agreement of the first `m` eigenvalues of the analytic spectrum
/// and an oracle list, both in the Δ_η (non-positive) convention sorted by
/// magnitude.
#[derive(Debug, Clone)]
pub struct ErrorReport {
    /// `(analytic λ, oracle λ, |difference| / max(1, |analytic|))`.
    pub entries: Vec<(f64, f64, f64)>,
    pub max_relative_error: f64,
    pub length_mismatch: bool,
}

pub fn compare_spectra(analytic: &SpectrumResult, oracle: &[f64], m: usize) -> ErrorReport {
    let mut analytic_lambdas: Vec<f64> = Vec::new();
    for r in &analytic.roots {
        for _ in 0..r.multiplicity {
            analytic_lambdas.push(r.lambda);
        }
    }
    analytic_lambdas.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap());
    let mut oracle_sorted = oracle.to_vec();
    oracle_sorted.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap());

    let take = m.min(analytic_lambdas.len()).min(oracle_sorted.len());
    let length_mismatch = take < m;
    let mut entries = Vec::with_capacity(take);
    let mut max_rel: f64 = 0.0;
    for i in 0..take {
        let a = analytic_lambdas[i];
        let o = oracle_sorted[i];
        let rel = (o - a).abs() / 1.0f64.max(a.abs());
        max_rel = max_rel.max(rel);
        entries.push((a, o, rel));
    }
    ErrorReport {
        entries,
        max_relative_error: max_rel,
        length_mismatch,
    }
}
