//! Closed-form application of the measure derivative ∇_η, its adjoint ∇*_η,
//! and the Laplacian Δ_η = −∇*_η ∘ ∇_η to piecewise-sine functions, together
//! with the L²_η inner product and the energy form.
//!
//! Everything lives in the measure coordinate t = F_ν(x). On the interior of
//! a segment the derivative with respect to η is the classical derivative in
//! t; at an atom z with weight α it is the scaled one-sided difference of the
//! periodic extension:
//!
//! ```text
//! ∇_η f(z)  = (f(z⁺) − f(z)) / α        (forward, right limit)
//! ∇*_η g(z) = (g(z⁻) − g(z)) / α        (backward, left limit)
//! ```
//!
//! and on segment interiors `∇*_η g = −dg/dt`. With these conventions
//! ⟨∇_η f, g⟩_η = ⟨f, ∇*_η g⟩_η holds, Δ_η is non-positive, and eigenpairs
//! satisfy Δ_η f = λ f pointwise, atoms included.

use crate::harmonic::Harmonic;
use crate::measure::MeasureSpec;
use std::f64::consts::{FRAC_PI_2, TAU};

/// One segment of a piecewise sine: `t ↦ amplitude · sin(b·t + phase)`
/// on its inter-atom interval, in the measure coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineSegment {
    pub amplitude: f64,
    pub phase: f64,
}

/// An eigenfunction candidate `x ↦ aⱼ sin(b F_ν(x) + γⱼ)` on the j-th
/// inter-atom interval, left-continuous at atoms. The frequency b is global;
/// `b = 0` encodes the locally-constant case.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseSine {
    frequency: f64,
    segments: Vec<SineSegment>,
}

impl PiecewiseSine {
    pub fn new(frequency: f64, segments: Vec<SineSegment>) -> Self {
        assert!(!segments.is_empty(), "piecewise sine needs segments");
        PiecewiseSine {
            frequency,
            segments,
        }
    }

    /// Single global sine `sin(b t + γ)` spread over `n` segments.
    pub fn global_sine(frequency: f64, phase: f64, n: usize) -> Self {
        PiecewiseSine::new(
            frequency,
            vec![
                SineSegment {
                    amplitude: 1.0,
                    phase,
                };
                n
            ],
        )
    }

    /// The constant function with the given value.
    pub fn constant(value: f64, n: usize) -> Self {
        PiecewiseSine::new(
            0.0,
            vec![
                SineSegment {
                    amplitude: value,
                    phase: FRAC_PI_2,
                };
                n
            ],
        )
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn segments(&self) -> &[SineSegment] {
        &self.segments
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    /// The j-th segment as a wave in the measure coordinate.
    pub fn segment_harmonic(&self, j: usize) -> Harmonic {
        let s = self.segments[j];
        Harmonic::new(s.amplitude, self.frequency, s.phase)
    }

    /// Evaluate at x through the distribution function (left-continuous).
    pub fn eval(&self, spec: &MeasureSpec, x: f64) -> f64 {
        let j = spec.segment_of(x);
        self.segment_harmonic(j).eval(spec.continuous().cdf(x))
    }

    /// Value at the i-th atom (owned by segment i).
    pub fn value_at_atom(&self, spec: &MeasureSpec, i: usize) -> f64 {
        let bounds = spec.segment_cdf_bounds();
        self.segment_harmonic(i).eval(bounds[i + 1])
    }

    /// Right limit at the i-th atom; the last atom wraps periodically to the
    /// start of the first segment.
    pub fn right_limit_at_atom(&self, spec: &MeasureSpec, i: usize) -> f64 {
        let n = self.segments.len();
        if i + 1 < n {
            let bounds = spec.segment_cdf_bounds();
            self.segment_harmonic(i + 1).eval(bounds[i + 1])
        } else {
            self.segment_harmonic(0).eval(0.0)
        }
    }

    pub fn scaled(&self, s: f64) -> PiecewiseSine {
        PiecewiseSine::new(
            self.frequency,
            self.segments
                .iter()
                .map(|seg| SineSegment {
                    amplitude: seg.amplitude * s,
                    phase: seg.phase,
                })
                .collect(),
        )
    }

    /// `c₁·self + c₂·other` for two functions sharing one frequency
    /// (phasor addition segment by segment).
    pub fn linear_combination(&self, c1: f64, other: &PiecewiseSine, c2: f64) -> PiecewiseSine {
        assert_eq!(self.frequency, other.frequency);
        assert_eq!(self.segments.len(), other.segments.len());
        let segments = self
            .segments
            .iter()
            .zip(&other.segments)
            .map(|(a, b)| {
                let wave = Harmonic::new(a.amplitude * c1, self.frequency, a.phase)
                    .add_same_frequency(&Harmonic::new(b.amplitude * c2, self.frequency, b.phase));
                SineSegment {
                    amplitude: wave.amplitude,
                    phase: wave.phase,
                }
            })
            .collect();
        PiecewiseSine::new(self.frequency, segments)
    }

    /// Normalize amplitudes to be positive and phases into [0, 2π).
    pub fn normalized_phases(&self) -> PiecewiseSine {
        let segments = self
            .segments
            .iter()
            .map(|s| {
                let (amplitude, phase) = if s.amplitude < 0.0 {
                    (-s.amplitude, s.phase + std::f64::consts::PI)
                } else {
                    (s.amplitude, s.phase)
                };
                SineSegment {
                    amplitude,
                    phase: phase.rem_euclid(TAU),
                }
            })
            .collect();
        PiecewiseSine::new(self.frequency, segments)
    }
}

/// Which one-sided limit the atom values of a [`PiecewiseEval`] agree with
/// when the function lies in the corresponding operator domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Continuity {
    Left,
    Right,
}

/// Result of applying ∇_η, ∇*_η or Δ_η: one wave per segment interior plus
/// explicit values at the atoms.
#[derive(Debug, Clone)]
pub struct PiecewiseEval {
    pub interior: Vec<Harmonic>,
    pub atom_values: Vec<f64>,
    pub continuity: Continuity,
}

impl PiecewiseEval {
    /// Evaluate at x: atoms take their stored value, interior points follow
    /// the segment wave through F_ν.
    pub fn eval(&self, spec: &MeasureSpec, x: f64) -> f64 {
        for (i, a) in spec.atoms().iter().enumerate() {
            if x == a.z {
                return self.atom_values[i];
            }
        }
        let j = spec.segment_of(x);
        self.interior[j].eval(spec.continuous().cdf(x))
    }

    fn negated(&self) -> PiecewiseEval {
        PiecewiseEval {
            interior: self.interior.iter().map(|h| h.scaled(-1.0)).collect(),
            atom_values: self.atom_values.iter().map(|v| -v).collect(),
            continuity: self.continuity,
        }
    }
}

/// Anything with a per-segment wave and atom values can enter the η inner
/// product.
pub trait EtaFunction {
    fn segment_wave(&self, j: usize) -> Harmonic;
    fn atom_value(&self, spec: &MeasureSpec, i: usize) -> f64;
}

impl EtaFunction for PiecewiseSine {
    fn segment_wave(&self, j: usize) -> Harmonic {
        self.segment_harmonic(j)
    }
    fn atom_value(&self, spec: &MeasureSpec, i: usize) -> f64 {
        self.value_at_atom(spec, i)
    }
}

impl EtaFunction for PiecewiseEval {
    fn segment_wave(&self, j: usize) -> Harmonic {
        self.interior[j]
    }
    fn atom_value(&self, _spec: &MeasureSpec, i: usize) -> f64 {
        self.atom_values[i]
    }
}

/// ∇_η f: the classical t-derivative on segment interiors and the weighted
/// forward difference of the periodic extension at each atom.
pub fn apply_nabla(f: &PiecewiseSine, spec: &MeasureSpec) -> PiecewiseEval {
    let n = spec.atom_count();
    assert_eq!(f.segment_count(), n, "function does not match measure");
    let interior: Vec<Harmonic> = (0..n).map(|j| f.segment_harmonic(j).derivative()).collect();
    let atom_values: Vec<f64> = (0..n)
        .map(|i| {
            let jump = f.right_limit_at_atom(spec, i) - f.value_at_atom(spec, i);
            jump / spec.atoms()[i].alpha
        })
        .collect();
    PiecewiseEval {
        interior,
        atom_values,
        continuity: Continuity::Right,
    }
}

/// ∇*_η g: minus the classical t-derivative on segment interiors and the
/// weighted backward difference `(g(z⁻) − g(z))/α` at each atom.
pub fn apply_nabla_star(g: &PiecewiseEval, spec: &MeasureSpec) -> PiecewiseEval {
    let n = spec.atom_count();
    let bounds = spec.segment_cdf_bounds();
    let interior: Vec<Harmonic> = (0..n)
        .map(|j| g.interior[j].derivative().scaled(-1.0))
        .collect();
    let atom_values: Vec<f64> = (0..n)
        .map(|i| {
            let left_limit = g.interior[i].eval(bounds[i + 1]);
            (left_limit - g.atom_values[i]) / spec.atoms()[i].alpha
        })
        .collect();
    PiecewiseEval {
        interior,
        atom_values,
        continuity: Continuity::Left,
    }
}

/// Δ_η f = −∇*_η(∇_η f).
pub fn apply_laplacian(f: &PiecewiseSine, spec: &MeasureSpec) -> PiecewiseEval {
    apply_nabla_star(&apply_nabla(f, spec), spec).negated()
}

/// ⟨f, g⟩_η split into the continuous-part integral and the atom sum.
pub fn inner_product_split(
    f: &impl EtaFunction,
    g: &impl EtaFunction,
    spec: &MeasureSpec,
) -> (f64, f64) {
    let bounds = spec.segment_cdf_bounds();
    let mut continuous = 0.0;
    for j in 0..spec.atom_count() {
        continuous += Harmonic::integral_of_product(
            &f.segment_wave(j),
            &g.segment_wave(j),
            bounds[j],
            bounds[j + 1],
        );
    }
    let mut atomic = 0.0;
    for (i, a) in spec.atoms().iter().enumerate() {
        atomic += a.alpha * f.atom_value(spec, i) * g.atom_value(spec, i);
    }
    (continuous, atomic)
}

/// ⟨f, g⟩_η = ∫ f g dν + Σ αᵢ f(zᵢ) g(zᵢ), continuous part in closed form.
pub fn inner_product(f: &impl EtaFunction, g: &impl EtaFunction, spec: &MeasureSpec) -> f64 {
    let (continuous, atomic) = inner_product_split(f, g, spec);
    continuous + atomic
}

pub fn norm(f: &impl EtaFunction, spec: &MeasureSpec) -> f64 {
    inner_product(f, f, spec).max(0.0).sqrt()
}

/// Energy form E(f, g) = ⟨∇_η f, ∇_η g⟩_η.
pub fn energy(f: &PiecewiseSine, g: &PiecewiseSine, spec: &MeasureSpec) -> f64 {
    inner_product(&apply_nabla(f, spec), &apply_nabla(g, spec), spec)
}

/// Largest scaled violation of the 2N matching equations an eigenfunction
/// must satisfy at the atoms. Each equation is normalised by the size of its
/// own terms so the result is meaningful for large frequencies.
pub fn system_residual(f: &PiecewiseSine, spec: &MeasureSpec) -> f64 {
    let n = spec.atom_count();
    let b = f.frequency();
    let bounds = spec.segment_cdf_bounds();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let alpha = spec.atoms()[i].alpha;
        let own = f.segments()[i];
        let next = f.segments()[(i + 1) % n];
        let t_own = bounds[i + 1];
        let t_next = if i + 1 < n { bounds[i + 1] } else { 0.0 };
        let sin_own = own.amplitude * (b * t_own + own.phase).sin();
        let cos_own = own.amplitude * (b * t_own + own.phase).cos();
        let sin_next = next.amplitude * (b * t_next + next.phase).sin();
        let cos_next = next.amplitude * (b * t_next + next.phase).cos();

        let lhs1 = alpha * b * cos_next;
        let rhs1 = sin_next - sin_own;
        let scale1 = 1.0_f64
            .max(lhs1.abs())
            .max(sin_next.abs())
            .max(sin_own.abs());
        worst = worst.max((lhs1 - rhs1).abs() / scale1);

        let lhs2 = alpha * b * b * sin_own;
        let rhs2 = b * cos_own - b * cos_next;
        let scale2 = 1.0_f64
            .max(lhs2.abs())
            .max((b * cos_own).abs())
            .max((b * cos_next).abs());
        worst = worst.max((lhs2 - rhs2).abs() / scale2);
    }
    worst
}

/// sup |Δ_η f − λ f| / max(1, |λ|) over all atoms and `samples` interior
/// points per segment.
pub fn eigen_residual(f: &PiecewiseSine, lambda: f64, spec: &MeasureSpec, samples: usize) -> f64 {
    let lap = apply_laplacian(f, spec);
    let bounds = spec.segment_cdf_bounds();
    let scale = 1.0_f64.max(lambda.abs());
    let mut worst: f64 = 0.0;
    for i in 0..spec.atom_count() {
        let r = lap.atom_values[i] - lambda * f.value_at_atom(spec, i);
        worst = worst.max(r.abs());
    }
    for j in 0..spec.atom_count() {
        let (t0, t1) = (bounds[j], bounds[j + 1]);
        let fj = f.segment_harmonic(j);
        for s in 0..samples {
            let t = t0 + (t1 - t0) * (s as f64 + 0.5) / samples as f64;
            let r = lap.interior[j].eval(t) - lambda * fj.eval(t);
            worst = worst.max(r.abs());
        }
    }
    worst / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasureSpec;
    use std::f64::consts::PI;

    fn one_atom(alpha: f64) -> MeasureSpec {
        MeasureSpec::lebesgue_with_atoms(&[(1.0, alpha)]).unwrap()
    }

    #[test]
    fn nabla_of_constant_is_zero() {
        let spec = one_atom(0.7);
        let f = PiecewiseSine::constant(1.0, 1);
        let g = apply_nabla(&f, &spec);
        assert_eq!(g.atom_values[0], 0.0);
        assert_eq!(g.interior[0].amplitude, 0.0);
    }

    #[test]
    fn nabla_matches_difference_quotient_formula() {
        let alpha = 0.4;
        let spec = one_atom(alpha);
        let (b, gamma) = (3.0, 0.25);
        let f = PiecewiseSine::global_sine(b, gamma, 1);
        let g = apply_nabla(&f, &spec);
        let expected = (gamma.sin() - (b + gamma).sin()) / alpha;
        assert!((g.atom_values[0] - expected).abs() < 1e-14);
        // interior is b cos(bt + γ)
        let t = 0.37;
        assert!((g.interior[0].eval(t) - b * (b * t + gamma).cos()).abs() < 1e-14);
    }

    #[test]
    fn laplacian_of_constant_is_zero() {
        let spec = MeasureSpec::lebesgue_with_atoms(&[(0.5, 0.3), (1.0, 0.9)]).unwrap();
        let f = PiecewiseSine::constant(2.5, 2);
        let lap = apply_laplacian(&f, &spec);
        for v in &lap.atom_values {
            assert_eq!(*v, 0.0);
        }
        for h in &lap.interior {
            assert_eq!(h.eval(0.2), 0.0);
        }
    }

    #[test]
    fn laplacian_interior_is_minus_b_squared_times_f() {
        let spec = one_atom(1.0);
        let f = PiecewiseSine::global_sine(4.0, 1.1, 1);
        let lap = apply_laplacian(&f, &spec);
        for i in 0..10 {
            let t = 0.05 + 0.09 * i as f64;
            let want = -16.0 * f.segment_harmonic(0).eval(t);
            assert!((lap.interior[0].eval(t) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn mass_inner_product() {
        let alpha = 0.6;
        let spec = one_atom(alpha);
        let one = PiecewiseSine::constant(1.0, 1);
        let ip = inner_product(&one, &one, &spec);
        assert!((ip - (1.0 + alpha)).abs() < 1e-14);
    }

    #[test]
    fn full_period_sine_orthogonal_to_constants_in_continuous_part() {
        let spec = one_atom(0.5);
        let f = PiecewiseSine::global_sine(2.0 * PI, 0.0, 1);
        let one = PiecewiseSine::constant(1.0, 1);
        let (continuous, _) = inner_product_split(&f, &one, &spec);
        assert!(continuous.abs() < 1e-14);
    }

    #[test]
    fn energy_of_constant_vanishes() {
        let spec = one_atom(0.5);
        let f = PiecewiseSine::constant(1.0, 1);
        assert_eq!(energy(&f, &f, &spec), 0.0);
    }

    #[test]
    fn energy_is_symmetric_and_nonnegative() {
        let spec = MeasureSpec::lebesgue_with_atoms(&[(0.5, 0.2), (1.0, 0.8)]).unwrap();
        let f = PiecewiseSine::new(
            3.0,
            vec![
                SineSegment {
                    amplitude: 1.0,
                    phase: 0.3,
                },
                SineSegment {
                    amplitude: -0.4,
                    phase: 1.2,
                },
            ],
        );
        let g = PiecewiseSine::new(
            3.0,
            vec![
                SineSegment {
                    amplitude: 0.7,
                    phase: 2.0,
                },
                SineSegment {
                    amplitude: 1.1,
                    phase: 0.1,
                },
            ],
        );
        let efg = energy(&f, &g, &spec);
        let egf = energy(&g, &f, &spec);
        assert!((efg - egf).abs() < 1e-12);
        assert!(energy(&f, &f, &spec) >= -1e-12);
        assert!(energy(&g, &g, &spec) >= -1e-12);
    }

    #[test]
    fn mean_zero_identity_for_nabla() {
        // ⟨∇_η f, 1⟩_η = 0 exactly for the periodic difference structure.
        let spec = MeasureSpec::lebesgue_with_atoms(&[(0.3, 0.4), (0.7, 0.9), (1.0, 0.2)]).unwrap();
        let f = PiecewiseSine::new(
            5.0,
            vec![
                SineSegment {
                    amplitude: 1.0,
                    phase: 0.0,
                },
                SineSegment {
                    amplitude: 0.6,
                    phase: 1.0,
                },
                SineSegment {
                    amplitude: 1.3,
                    phase: 2.2,
                },
            ],
        );
        let one = PiecewiseSine::constant(1.0, 3);
        let ip = inner_product(&apply_nabla(&f, &spec), &one, &spec);
        assert!(ip.abs() < 1e-10, "mean of derivative = {ip}");
    }

    #[test]
    fn adjointness_of_nabla_and_nabla_star() {
        // ⟨∇f, g⟩ = ⟨f, ∇*g⟩ with g built as a right-continuous eval.
        let spec = MeasureSpec::lebesgue_with_atoms(&[(0.4, 0.5), (1.0, 0.7)]).unwrap();
        let f = PiecewiseSine::new(
            2.0,
            vec![
                SineSegment {
                    amplitude: 1.0,
                    phase: 0.2,
                },
                SineSegment {
                    amplitude: 0.8,
                    phase: 1.5,
                },
            ],
        );
        let g_sine = PiecewiseSine::new(
            2.0,
            vec![
                SineSegment {
                    amplitude: 0.9,
                    phase: 1.0,
                },
                SineSegment {
                    amplitude: 1.2,
                    phase: 0.4,
                },
            ],
        );
        // Make g right-continuous at atoms: atom value = right limit.
        let bounds = spec.segment_cdf_bounds();
        let g = PiecewiseEval {
            interior: (0..2).map(|j| g_sine.segment_harmonic(j)).collect(),
            atom_values: vec![
                g_sine.segment_harmonic(1).eval(bounds[1]),
                g_sine.segment_harmonic(0).eval(0.0),
            ],
            continuity: Continuity::Right,
        };
        let lhs = inner_product(&apply_nabla(&f, &spec), &g, &spec);
        let rhs = inner_product(&f, &apply_nabla_star(&g, &spec), &spec);
        assert!((lhs - rhs).abs() < 1e-12, "{lhs} vs {rhs}");
    }

    #[test]
    fn non_eigen_candidate_leaves_residual() {
        let spec = one_atom(1.0 / PI);
        let f = PiecewiseSine::global_sine(5.0, 0.7, 1);
        let res = eigen_residual(&f, -25.0, &spec, 100);
        assert!(
            res > 1e-3,
            "arbitrary (b, γ) must not look like an eigenpair"
        );
    }

    #[test]
    fn linear_combination_evaluates_pointwise() {
        let spec = MeasureSpec::lebesgue_with_atoms(&[(0.5, 0.2), (1.0, 0.8)]).unwrap();
        let f = PiecewiseSine::new(
            3.0,
            vec![
                SineSegment {
                    amplitude: 1.0,
                    phase: 0.3,
                },
                SineSegment {
                    amplitude: 0.4,
                    phase: 1.2,
                },
            ],
        );
        let g = PiecewiseSine::new(
            3.0,
            vec![
                SineSegment {
                    amplitude: 0.5,
                    phase: 2.8,
                },
                SineSegment {
                    amplitude: 0.9,
                    phase: 0.9,
                },
            ],
        );
        let combo = f.linear_combination(2.0, &g, -0.5);
        for i in 0..20 {
            let x = 0.05 * (i as f64 + 0.5);
            let want = 2.0 * f.eval(&spec, x) - 0.5 * g.eval(&spec, x);
            assert!((combo.eval(&spec, x) - want).abs() < 1e-12);
        }
    }
}
