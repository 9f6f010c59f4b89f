//! General-N spectra through a 2×2 transfer-matrix reformulation.
//!
//! An eigenfunction candidate is propagated as the state (value, derivative)
//! in the measure coordinate t = F_ν(x). Across a segment of mass ΔF the
//! state rotates under `u″ = −b²u`; across an atom of weight α the two
//! matching equations
//!
//! ```text
//! v⁺ = v⁻ − α b² u⁻        (the atom value of Δ_η f is −b² f there)
//! u⁺ = u⁻ + α v⁺           (∇_η f is right-continuous at the atom)
//! ```
//!
//! are linear in the state, giving the unimodular jump factor
//! `[[1 − α²b², α], [−αb², 1]]`. The product of all factors over one period
//! is the monodromy M(b); a 2π-periodic state exists exactly when
//! `tr M(b) = 2` (det M = 1 forces the eigenvalues of M to be {μ, 1/μ}),
//! so the eigenvalues λ = −b² are the zeros of the discriminant
//! `tr M(b) − 2`. Every entry of M is an even function of b, which is why
//! scanning b ≥ 0 enumerates the whole spectrum.

use crate::calculus::{self, PiecewiseSine, SineSegment};
use crate::closed_form::{eigenpair_one_atom, eigenpair_two_atoms, EigenPair};
use crate::measure::{MeasureError, MeasureSpec};
use crate::roots::bisect_then_newton;
use std::f64::consts::{PI, TAU};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(
        "scan step too coarse: expected about {expected:.1} eigenvalues up to b_max, found {found}"
    )]
    ScanTooCoarse { expected: f64, found: usize },
    #[error("no fixed vector of the monodromy at b = {b}: discriminant {discriminant:.3e}")]
    InconsistentRoot { b: f64, discriminant: f64 },
    #[error("rotation index r = {r} out of range 2..={n}")]
    RotationOutOfRange { r: usize, n: usize },
    #[error("rotation requires equally spaced atoms over the Lebesgue part")]
    RotationUnsupported,
}

pub type Result<T> = std::result::Result<T, SpectrumError>;

/// Real 2×2 matrix acting on the (value, derivative) state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transfer2x2 {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl Transfer2x2 {
    pub const IDENTITY: Transfer2x2 = Transfer2x2 {
        m11: 1.0,
        m12: 0.0,
        m21: 0.0,
        m22: 1.0,
    };

    /// Determinant with a compensated correction term; the entries of long
    /// products grow like (αb)^{2N} while the determinant stays at 1, so the
    /// naive two-product form loses exactly the digits being checked.
    pub fn det(&self) -> f64 {
        let p = self.m12 * self.m21;
        let err = self.m12.mul_add(self.m21, -p);
        self.m11.mul_add(self.m22, -p) - err
    }

    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    pub fn apply(&self, u: f64, v: f64) -> (f64, f64) {
        (self.m11 * u + self.m12 * v, self.m21 * u + self.m22 * v)
    }

    /// `self · other` (apply `other` first). Entries use fused
    /// multiply-adds; unimodularity of long products survives to ~1e-11.
    pub fn compose(&self, other: &Transfer2x2) -> Transfer2x2 {
        Transfer2x2 {
            m11: self.m11.mul_add(other.m11, self.m12 * other.m21),
            m12: self.m11.mul_add(other.m12, self.m12 * other.m22),
            m21: self.m21.mul_add(other.m11, self.m22 * other.m21),
            m22: self.m21.mul_add(other.m12, self.m22 * other.m22),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.m11
            .abs()
            .max(self.m12.abs())
            .max(self.m21.abs())
            .max(self.m22.abs())
    }

    /// Entrywise distance from the identity.
    pub fn distance_from_identity(&self) -> f64 {
        (self.m11 - 1.0)
            .abs()
            .max(self.m12.abs())
            .max(self.m21.abs())
            .max((self.m22 - 1.0).abs())
    }
}

fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        let u2 = u * u;
        1.0 - u2 / 6.0 + u2 * u2 / 120.0
    } else {
        u.sin() / u
    }
}

/// Flow of `u″ = −b²u` over a segment of measure mass `d_f`:
/// `[[cos(b·dF), sin(b·dF)/b], [−b sin(b·dF), cos(b·dF)]]`, with the shear
/// `[[1, dF], [0, 1]]` as the b → 0 limit.
pub fn segment_propagator(b: f64, d_f: f64) -> Transfer2x2 {
    let s = (b * d_f).sin();
    Transfer2x2 {
        m11: (b * d_f).cos(),
        m12: d_f * sinc(b * d_f),
        m21: -b * s,
        m22: (b * d_f).cos(),
    }
}

/// Jump factor across an atom of weight α; unimodular for every (b, α).
pub fn atom_jump(b: f64, alpha: f64) -> Transfer2x2 {
    Transfer2x2 {
        m11: 1.0 - alpha * alpha * b * b,
        m12: alpha,
        m21: -alpha * b * b,
        m22: 1.0,
    }
}

fn segment_propagator_derivative(b: f64, d_f: f64) -> Transfer2x2 {
    // d/db of the propagator entries; m12 uses (u cos u − sin u)/u² which is
    // −u/3 + O(u³) near zero.
    let u = b * d_f;
    let g = if u.abs() < 1e-4 {
        -u / 3.0 + u * u * u / 30.0
    } else {
        (u * u.cos() - u.sin()) / (u * u)
    };
    Transfer2x2 {
        m11: -d_f * u.sin(),
        m12: d_f * d_f * g,
        m21: -u.sin() - u * u.cos(),
        m22: -d_f * u.sin(),
    }
}

fn atom_jump_derivative(b: f64, alpha: f64) -> Transfer2x2 {
    Transfer2x2 {
        m11: -2.0 * alpha * alpha * b,
        m12: 0.0,
        m21: -2.0 * alpha * b,
        m22: 0.0,
    }
}

/// Ordered product `J_N S_N ⋯ J_1 S_1` over the canonical measure.
pub fn monodromy(spec: &MeasureSpec, b: f64) -> Result<Transfer2x2> {
    spec.require_canonical()?;
    let bounds = spec.segment_cdf_bounds();
    let mut m = Transfer2x2::IDENTITY;
    for (j, atom) in spec.atoms().iter().enumerate() {
        m = segment_propagator(b, bounds[j + 1] - bounds[j]).compose(&m);
        m = atom_jump(b, atom.alpha).compose(&m);
    }
    Ok(m)
}

/// Monodromy together with its derivative in b (product rule across all
/// factors), used for Newton refinement and extremum location.
pub fn monodromy_with_derivative(spec: &MeasureSpec, b: f64) -> Result<(Transfer2x2, Transfer2x2)> {
    spec.require_canonical()?;
    let bounds = spec.segment_cdf_bounds();
    let mut m = Transfer2x2::IDENTITY;
    let mut dm = Transfer2x2 {
        m11: 0.0,
        m12: 0.0,
        m21: 0.0,
        m22: 0.0,
    };
    let push = |f: Transfer2x2, df: Transfer2x2, m: &mut Transfer2x2, dm: &mut Transfer2x2| {
        *dm = df.compose(m).add(&f.compose(dm));
        *m = f.compose(m);
    };
    for (j, atom) in spec.atoms().iter().enumerate() {
        let d_f = bounds[j + 1] - bounds[j];
        push(
            segment_propagator(b, d_f),
            segment_propagator_derivative(b, d_f),
            &mut m,
            &mut dm,
        );
        push(
            atom_jump(b, atom.alpha),
            atom_jump_derivative(b, atom.alpha),
            &mut m,
            &mut dm,
        );
    }
    Ok((m, dm))
}

impl Transfer2x2 {
    fn add(&self, other: &Transfer2x2) -> Transfer2x2 {
        Transfer2x2 {
            m11: self.m11 + other.m11,
            m12: self.m12 + other.m12,
            m21: self.m21 + other.m21,
            m22: self.m22 + other.m22,
        }
    }
}

/// `tr M(b) − 2`; zero exactly at the frequencies b with λ = −b² in the
/// spectrum.
pub fn discriminant(spec: &MeasureSpec, b: f64) -> Result<f64> {
    Ok(monodromy(spec, b)?.trace() - 2.0)
}

/// Scan controls for [`find_spectrum`].
#[derive(Debug, Clone)]
pub struct ScanOptions {
    /// Grid step override; the default is `min(0.05, π·min(ΔF_j, αⱼ)/8)`.
    pub step: Option<f64>,
    /// Bracket width for root refinement.
    pub refine_width: f64,
    /// ‖M − I‖∞ below this marks a two-dimensional fixed space.
    pub double_root_tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            step: None,
            refine_width: 1e-13,
            double_root_tol: 1e-8,
        }
    }
}

fn default_step(spec: &MeasureSpec) -> f64 {
    let bounds = spec.segment_cdf_bounds();
    let min_df = bounds
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let min_alpha = spec
        .atoms()
        .iter()
        .map(|a| a.alpha)
        .fold(f64::INFINITY, f64::min);
    (PI * min_df.min(min_alpha) / 8.0).min(0.05)
}

/// One zero of the discriminant.
#[derive(Debug, Clone, Copy)]
pub struct SpectralRoot {
    pub b: f64,
    pub lambda: f64,
    pub multiplicity: usize,
    /// Set when two simple zeros were closer than f64 can separate; the pair
    /// is reported once at the extremum with multiplicity 2.
    pub near_degenerate: bool,
}

/// Spectrum of the canonical measure up to a frequency cutoff.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    /// One entry per eigenfunction, sorted by |λ|.
    pub pairs: Vec<EigenPair>,
    /// Distinct discriminant zeros with multiplicities.
    pub roots: Vec<SpectralRoot>,
    pub b_max: f64,
    pub step: f64,
    pub refinements: usize,
    /// Largest |det − 1| seen across all monodromy evaluations of the scan.
    pub max_det_deviation: f64,
}

impl SpectrumResult {
    /// Number of eigenvalues counted with multiplicity.
    pub fn eigenvalue_count(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn lambdas_of_minus_laplacian(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for r in &self.roots {
            for _ in 0..r.multiplicity {
                out.push(r.b * r.b);
            }
        }
        out
    }
}

/// All eigenvalues λ = −b² with b in `[0, b_max]`, with eigenfunctions.
///
/// The discriminant is scanned on a uniform grid; sign changes are refined
/// by bisection plus Newton. Between grid points the derivative of the
/// discriminant locates extrema, which recovers pairs of roots whose
/// separating well is narrower than the grid (the spectral gaps close like
/// 1/k² for multiple atoms) and genuine double roots where M = I.
pub fn find_spectrum(spec: &MeasureSpec, b_max: f64, opts: &ScanOptions) -> Result<SpectrumResult> {
    spec.require_canonical()?;
    assert!(b_max > 0.0, "b_max must be positive");
    let step = opts.step.unwrap_or_else(|| default_step(spec));
    let cells = (b_max / step).ceil() as usize;
    let cells = cells.max(4);
    let h = b_max / cells as f64;

    let mut disc = Vec::with_capacity(cells + 1);
    let mut ddisc = Vec::with_capacity(cells + 1);
    let mut max_det_dev: f64 = 0.0;
    for i in 0..=cells {
        let b = i as f64 * h;
        let (m, dm) = monodromy_with_derivative(spec, b)?;
        max_det_dev = max_det_dev.max((m.det() - 1.0).abs());
        disc.push(m.trace() - 2.0);
        ddisc.push(dm.trace());
    }

    let disc_at = |b: f64| monodromy(spec, b).map(|m| m.trace() - 2.0);
    let refine = |lo: f64, hi: f64| -> f64 {
        bisect_then_newton(
            |b| monodromy(spec, b).unwrap().trace() - 2.0,
            |b| monodromy_with_derivative(spec, b).unwrap().1.trace(),
            lo,
            hi,
            opts.refine_width,
            5,
        )
    };

    let mut roots: Vec<SpectralRoot> = vec![SpectralRoot {
        b: 0.0,
        lambda: 0.0,
        multiplicity: 1,
        near_degenerate: false,
    }];
    let mut refinements = 0usize;
    let push_simple = |b: f64, roots: &mut Vec<SpectralRoot>| {
        roots.push(SpectralRoot {
            b,
            lambda: -b * b,
            multiplicity: 1,
            near_degenerate: false,
        });
    };

    for i in 1..cells {
        let (lo, hi) = (i as f64 * h, (i + 1) as f64 * h);
        let sign_change = disc[i] == 0.0 || (disc[i] < 0.0) != (disc[i + 1] < 0.0);
        if sign_change {
            push_simple(refine(lo, hi), &mut roots);
            refinements += 1;
            continue;
        }
        let extremum = (ddisc[i] < 0.0) != (ddisc[i + 1] < 0.0);
        if !extremum {
            continue;
        }
        // Locate the stationary point of the discriminant in this cell.
        let b_star = bisect_then_newton(
            |b| monodromy_with_derivative(spec, b).unwrap().1.trace(),
            |b| {
                // Secant-style slope estimate of disc′ is enough here.
                let eps = 1e-7;
                let d1 = monodromy_with_derivative(spec, b + eps).unwrap().1.trace();
                let d0 = monodromy_with_derivative(spec, b - eps).unwrap().1.trace();
                (d1 - d0) / (2.0 * eps)
            },
            lo,
            hi,
            opts.refine_width,
            3,
        );
        refinements += 1;
        let (m_star, _) = monodromy_with_derivative(spec, b_star)?;
        let d_star = m_star.trace() - 2.0;
        let noise_floor =
            32.0 * f64::EPSILON * m_star.max_abs().max(1.0) * (2 * spec.atom_count()) as f64;
        if m_star.distance_from_identity() <= opts.double_root_tol {
            roots.push(SpectralRoot {
                b: b_star,
                lambda: -b_star * b_star,
                multiplicity: 2,
                near_degenerate: false,
            });
        } else if d_star == 0.0 || (d_star < 0.0) != (disc[i] < 0.0) {
            // The well (or hump) between two simple roots fell inside one
            // grid cell; split the bracket at the extremum.
            push_simple(refine(lo, b_star), &mut roots);
            push_simple(refine(b_star, hi), &mut roots);
            refinements += 2;
        } else if d_star.abs() <= 1e-9f64.max(noise_floor) {
            // Two roots too close to separate in f64: report the pair once.
            roots.push(SpectralRoot {
                b: b_star,
                lambda: -b_star * b_star,
                multiplicity: 2,
                near_degenerate: true,
            });
        }
    }

    // Drop duplicate detections (a root straddling a grid point can be seen
    // by two neighbouring cells).
    roots.sort_by(|a, b| a.b.partial_cmp(&b.b).unwrap());
    roots.dedup_by(|next, prev| {
        if (next.b - prev.b).abs() < 1e-7 {
            prev.multiplicity = prev.multiplicity.max(next.multiplicity);
            true
        } else {
            false
        }
    });
    roots.retain(|r| r.b <= b_max + 1e-12);

    let expected = spec.continuous().total_mass() * b_max / PI + 1.0;
    let found: usize = roots.iter().map(|r| r.multiplicity).sum();
    if (found as f64) < 0.7 * expected - 2.0 {
        return Err(SpectrumError::ScanTooCoarse { expected, found });
    }

    let mut pairs = Vec::new();
    for root in &roots {
        let functions = assemble_eigenfunction(spec, root.b)?;
        let d = disc_at(root.b)?;
        debug_assert!(d.abs() < 1e-6, "retained non-root b = {}", root.b);
        for f in functions.into_iter().take(root.multiplicity) {
            pairs.push(EigenPair {
                k: 0,
                b: root.b,
                lambda: root.lambda,
                eigenfunction: f,
                multiplicity: root.multiplicity,
            });
        }
    }
    label_pairs(spec, &mut pairs, b_max);

    Ok(SpectrumResult {
        pairs,
        roots,
        b_max,
        step: h,
        refinements,
        max_det_deviation: max_det_dev,
    })
}

/// Attach the closed-form index k when the measure is one of the two solved
/// families; otherwise label by rank in the |λ|-sorted list.
fn label_pairs(spec: &MeasureSpec, pairs: &mut [EigenPair], b_max: f64) {
    let lebesgue = matches!(spec.continuous(), crate::measure::ContinuousPart::Lebesgue);
    let atoms = spec.atoms();
    let closed_form: Option<Box<dyn Fn(i64) -> f64>> = if lebesgue && atoms.len() == 1 {
        let alpha = atoms[0].alpha;
        Some(Box::new(move |k| eigenpair_one_atom(alpha, k).b))
    } else if lebesgue
        && atoms.len() == 2
        && (atoms[0].z - 0.5).abs() < 1e-12
        && (atoms[0].alpha - atoms[1].alpha).abs() < 1e-12
    {
        let alpha = atoms[0].alpha;
        Some(Box::new(move |k| eigenpair_two_atoms(alpha, k).b))
    } else {
        None
    };
    match closed_form {
        Some(b_of_k) => {
            let k_max = (b_max / TAU).ceil() as i64 + 2;
            let mut table: Vec<(f64, i64)> = Vec::new();
            for k in -k_max..=k_max {
                table.push((b_of_k(k).abs(), k));
            }
            for p in pairs.iter_mut() {
                let (_, k) = table
                    .iter()
                    .map(|&(bk, k)| ((bk - p.b).abs(), k))
                    .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
                    .unwrap();
                p.k = k;
            }
        }
        None => {
            for (rank, p) in pairs.iter_mut().enumerate() {
                p.k = rank as i64;
            }
        }
    }
}

/// Eigenfunctions at a discriminant root: one function for a simple root,
/// two η-orthonormal functions when M(b) = I. All outputs have unit η-norm,
/// positive amplitudes and phases in [0, 2π).
pub fn assemble_eigenfunction(spec: &MeasureSpec, b: f64) -> Result<Vec<PiecewiseSine>> {
    spec.require_canonical()?;
    let n = spec.atom_count();
    if b == 0.0 {
        let c = PiecewiseSine::constant(1.0 / spec.total_mass().sqrt(), n);
        return Ok(vec![c]);
    }
    let m = monodromy(spec, b)?;
    let dist = m.distance_from_identity();
    if dist <= 1e-8 {
        let f1 = state_to_function(spec, b, (1.0, 0.0));
        let f2 = state_to_function(spec, b, (0.0, 1.0));
        let g1 = f1.scaled(1.0 / calculus::norm(&f1, spec));
        let c = calculus::inner_product(&f2, &g1, spec);
        let f2_perp = f2.linear_combination(1.0, &g1, -c);
        let g2 = f2_perp.scaled(1.0 / calculus::norm(&f2_perp, spec));
        return Ok(vec![g1.normalized_phases(), g2.normalized_phases()]);
    }
    // Fixed vector of M from the larger row of M − I: for A = M − I with
    // det A = 2 − tr M ≈ 0, (a12, −a11) and (a22, −a21) both lie in ker A.
    let (a11, a12, a21, a22) = (m.m11 - 1.0, m.m12, m.m21, m.m22 - 1.0);
    let r1 = a11.hypot(a12);
    let r2 = a21.hypot(a22);
    let (u, v) = if r1 >= r2 { (a12, -a11) } else { (a22, -a21) };
    let norm_uv = u.hypot(v);
    if norm_uv <= 1e-12 * dist.max(1.0) {
        return Err(SpectrumError::InconsistentRoot {
            b,
            discriminant: m.trace() - 2.0,
        });
    }
    // Defensive: a fixed vector only exists near a root.
    let (fu, fv) = m.apply(u / norm_uv, v / norm_uv);
    let residual = (fu - u / norm_uv).hypot(fv - v / norm_uv);
    if residual > 1e-5 * m.max_abs().max(1.0) {
        return Err(SpectrumError::InconsistentRoot {
            b,
            discriminant: m.trace() - 2.0,
        });
    }
    let f = state_to_function(spec, b, (u / norm_uv, v / norm_uv));
    let g = f.scaled(1.0 / calculus::norm(&f, spec));
    Ok(vec![g.normalized_phases()])
}

/// Convert a starting state (u, v) at t = 0⁺ into per-segment amplitude and
/// phase by propagating through every factor.
fn state_to_function(spec: &MeasureSpec, b: f64, start: (f64, f64)) -> PiecewiseSine {
    let bounds = spec.segment_cdf_bounds();
    let (mut u, mut v) = start;
    let mut segments = Vec::with_capacity(spec.atom_count());
    for (j, atom) in spec.atoms().iter().enumerate() {
        let t0 = bounds[j];
        // u(t) = R sin(b(t − t0) + φ) with R, φ from the state at t0.
        let r = u.hypot(v / b);
        let phi = u.atan2(v / b);
        segments.push(SineSegment {
            amplitude: r,
            phase: phi - b * t0,
        });
        let (nu, nv) = segment_propagator(b, bounds[j + 1] - t0).apply(u, v);
        let (nu, nv) = atom_jump(b, atom.alpha).apply(nu, nv);
        u = nu;
        v = nv;
    }
    PiecewiseSine::new(b, segments)
}

/// A sine with piecewise-constant frequency in the position coordinate:
/// the pullback of an eigenfunction through a piecewise-linear distribution
/// function.
#[derive(Debug, Clone)]
pub struct PositionSine {
    pub pieces: Vec<SinePiece>,
}

#[derive(Debug, Clone, Copy)]
pub struct SinePiece {
    /// Piece covers (x_lo, x_hi].
    pub x_lo: f64,
    pub x_hi: f64,
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
}

impl PositionSine {
    pub fn eval(&self, x: f64) -> f64 {
        let piece = self
            .pieces
            .iter()
            .find(|p| x > p.x_lo && x <= p.x_hi)
            .or_else(|| self.pieces.first())
            .expect("position sine has pieces");
        piece.amplitude * (piece.frequency * x + piece.phase).sin()
    }
}

/// Compose an eigenfunction in the measure coordinate with F_ν: on each
/// linear piece of the distribution function with slope s the wave
/// `a sin(bF_ν(x) + γ)` becomes `a sin(b·s·x + γ + b(F₀ − s·x₀))`. For the
/// Lebesgue part this is the identity.
pub fn pullback_to_x(f: &PiecewiseSine, spec: &MeasureSpec) -> PositionSine {
    let atoms = spec.atoms();
    let cdf_pieces = spec.continuous().pieces();
    let b = f.frequency();
    let mut pieces = Vec::new();
    let mut z_lo = 0.0f64;
    for (j, atom) in atoms.iter().enumerate() {
        let seg = f.segments()[j];
        for &(x0, x1, f0, f1) in &cdf_pieces {
            let lo = z_lo.max(x0);
            let hi = atom.z.min(x1);
            if hi <= lo {
                continue;
            }
            let slope = (f1 - f0) / (x1 - x0);
            pieces.push(SinePiece {
                x_lo: lo,
                x_hi: hi,
                amplitude: seg.amplitude,
                frequency: b * slope,
                phase: seg.phase + b * (f0 - slope * x0),
            });
        }
        z_lo = atom.z;
    }
    PositionSine { pieces }
}

/// Rotate an eigenfunction of an equally spaced Lebesgue-plus-atoms measure
/// by r − 1 cells; the result is an eigenfunction (same λ) of the measure
/// with cyclically permuted weights. With equal weights that measure is the
/// original one.
pub fn rotate_eigenfunction(
    f: &PiecewiseSine,
    spec: &MeasureSpec,
    r: usize,
) -> Result<(PiecewiseSine, MeasureSpec)> {
    let n = spec.atom_count();
    if !(2..=n).contains(&r) {
        return Err(SpectrumError::RotationOutOfRange { r, n });
    }
    if !matches!(spec.continuous(), crate::measure::ContinuousPart::Lebesgue) {
        return Err(SpectrumError::RotationUnsupported);
    }
    for (i, a) in spec.atoms().iter().enumerate() {
        if (a.z - (i + 1) as f64 / n as f64).abs() > 1e-12 {
            return Err(SpectrumError::RotationUnsupported);
        }
    }
    let b = f.frequency();
    let forward = (n - r + 1) as f64 / n as f64;
    let backward = (r - 1) as f64 / n as f64;
    let mut segments = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let (src, shift) = if i + 1 < r {
            (i + n - r + 1, forward)
        } else {
            (i + 1 - r, -backward)
        };
        let old = f.segments()[src];
        segments.push(SineSegment {
            amplitude: old.amplitude,
            phase: old.phase + b * shift,
        });
        weights.push(spec.atoms()[src].alpha);
    }
    let rotated = PiecewiseSine::new(b, segments).normalized_phases();
    let measure = MeasureSpec::lebesgue_with_atoms(
        &weights
            .iter()
            .enumerate()
            .map(|(i, &alpha)| ((i + 1) as f64 / n as f64, alpha))
            .collect::<Vec<_>>(),
    )?;
    Ok((rotated, measure))
}
