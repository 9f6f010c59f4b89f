//! Exact spectra for one and two atoms via the transcendental tangent
//! equations.
//!
//! For `η = Λ + α δ₁` every eigenpair is indexed by an integer k: the phase
//! γ solves `tan γ = −2γα + απ/2 + 2πkα + 1` on (−π/2, π/2), the frequency
//! is `b = −2γ + π/2 + 2πk`, and the eigenvalue is `λ = −b²`. For
//! `η = Λ + α δ_{1/2} + α δ₁` the analogue reads
//! `tan γ₁ = 1 − 4αγ₁ + απ + 2πkα`, `b = −4γ₁ + π + 2πk`,
//! `γ₂ = −b − γ₁ + π/2`.
//!
//! All tangent equations are solved through the pole-free form
//! `sin c − cos(c)·rhs(c) = 0`, which has the same roots on (−π/2, π/2) and
//! a guaranteed sign change over the whole interval.

use crate::calculus::{PiecewiseSine, SineSegment};
use crate::roots::{bisect_then_newton, scan_sign_changes};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

const BRACKET_WIDTH: f64 = 1e-14;
const NEWTON_STEPS: usize = 5;
/// |d/dc (sin c − cos c · rhs)| below this at a root flags a near-double root.
const NEAR_TANGENT_DERIVATIVE: f64 = 1e-8;
/// Subintervals used to scan (−π/2, π/2) when β < 0 allows several roots.
const NEGATIVE_BETA_SCAN: usize = 10_000;

/// One eigenpair: integer label k, frequency b, eigenvalue λ = −b², and the
/// attached piecewise sine.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub k: i64,
    pub b: f64,
    pub lambda: f64,
    pub eigenfunction: PiecewiseSine,
    pub multiplicity: usize,
}

/// The parametric tangent-line equation
/// `tan c = −2cβ + sign·(βπ/2 + 1) + 2πβk` whose solutions generate the
/// one-atom spectrum (and, after substitution, the two-atom one).
#[derive(Debug, Clone, Copy)]
pub struct TanLineProblem {
    pub beta: f64,
    pub k: i64,
    pub sign: i8,
}

/// A solution of [`TanLineProblem`]: the phase c, the induced frequency
/// ξ = (tan c ∓ 1)/β, and a flag for roots where the defining function was
/// nearly tangent to zero (possible double root within f64 resolution).
#[derive(Debug, Clone, Copy)]
pub struct TanLineSolution {
    pub c: f64,
    pub xi: f64,
    pub near_tangent: bool,
}

impl TanLineProblem {
    fn rhs(&self, c: f64) -> f64 {
        let s = self.sign as f64;
        -2.0 * c * self.beta + s * (self.beta * FRAC_PI_2 + 1.0) + TAU * self.beta * self.k as f64
    }

    /// Pole-free residual with the same roots as `tan c − rhs(c)` on
    /// (−π/2, π/2).
    fn residual(&self, c: f64) -> f64 {
        c.sin() - c.cos() * self.rhs(c)
    }

    fn residual_derivative(&self, c: f64) -> f64 {
        c.cos() + c.sin() * self.rhs(c) + 2.0 * self.beta * c.cos()
    }

    /// At a root, `(tan c ∓ 1)/β` collapses to the linear expression
    /// `−2c ± π/2 + 2πk`, which stays well conditioned next to the poles.
    fn xi_of(&self, c: f64) -> f64 {
        let s = self.sign as f64;
        -2.0 * c + s * FRAC_PI_2 + TAU * self.k as f64
    }
}

/// Solve the tangent-line equation on (−π/2, π/2).
///
/// For β > 0 the right-hand side is strictly decreasing while tan is
/// strictly increasing, so exactly one root exists. For β < 0 there can be
/// up to three; all of them are returned, ordered by c. A double root —
/// the line tangent to the tangent curve — produces no sign change, so the
/// scan also refines stationary points of the residual and reports a touch
/// there as one flagged solution.
///
/// Panics if `beta == 0`.
pub fn solve_tan_line(p: &TanLineProblem) -> Vec<TanLineSolution> {
    assert!(p.beta != 0.0, "tangent-line problem requires nonzero beta");
    let f = |c: f64| p.residual(c);
    let df = |c: f64| p.residual_derivative(c);
    let solution_at = |c: f64| TanLineSolution {
        c,
        xi: p.xi_of(c),
        near_tangent: df(c).abs() < NEAR_TANGENT_DERIVATIVE,
    };
    if p.beta > 0.0 {
        let c = bisect_then_newton(f, df, -FRAC_PI_2, FRAC_PI_2, BRACKET_WIDTH, NEWTON_STEPS);
        return vec![solution_at(c)];
    }
    let mut out: Vec<TanLineSolution> =
        scan_sign_changes(f, -FRAC_PI_2, FRAC_PI_2, NEGATIVE_BETA_SCAN)
            .into_iter()
            .map(|(lo, hi)| {
                solution_at(bisect_then_newton(
                    f,
                    df,
                    lo,
                    hi,
                    BRACKET_WIDTH,
                    NEWTON_STEPS,
                ))
            })
            .collect();
    // Stationary points of the residual recover root pairs whose separating
    // arch fits inside one scan cell, and exact touches.
    for (lo, hi) in scan_sign_changes(df, -FRAC_PI_2, FRAC_PI_2, NEGATIVE_BETA_SCAN) {
        let c_star = bisect_then_newton(
            df,
            |c: f64| {
                let h = 1e-7;
                (df(c + h) - df(c - h)) / (2.0 * h)
            },
            lo,
            hi,
            BRACKET_WIDTH,
            3,
        );
        let f_star = f(c_star);
        let f_lo = f(lo);
        if f_star == 0.0 && f_lo == 0.0 {
            continue; // flat stretch already covered by the crossing scan
        }
        if f_star != 0.0 && f_lo != 0.0 && (f_star < 0.0) != (f_lo < 0.0) {
            out.push(solution_at(bisect_then_newton(
                f,
                df,
                lo,
                c_star,
                BRACKET_WIDTH,
                NEWTON_STEPS,
            )));
            out.push(solution_at(bisect_then_newton(
                f,
                df,
                c_star,
                hi,
                BRACKET_WIDTH,
                NEWTON_STEPS,
            )));
        } else if f_star.abs() <= 1e-12 {
            out.push(TanLineSolution {
                c: c_star,
                xi: p.xi_of(c_star),
                near_tangent: true,
            });
        }
    }
    out.sort_by(|a, b| a.c.partial_cmp(&b.c).unwrap());
    out.dedup_by(|a, b| (a.c - b.c).abs() < 1e-9);
    out
}

fn solve_unique_phase(beta: f64, k: i64, sign: i8) -> f64 {
    let p = TanLineProblem { beta, k, sign };
    debug_assert!(beta > 0.0);
    solve_tan_line(&p)[0].c
}

/// Eigenpair k of `Δ_η` for `η = Λ + α δ₁`.
///
/// k = 0 yields the constant eigenfunction with λ = 0 (γ = π/4 exactly).
pub fn eigenpair_one_atom(alpha: f64, k: i64) -> EigenPair {
    assert!(alpha > 0.0, "atom weight must be positive");
    if k == 0 {
        return EigenPair {
            k: 0,
            b: 0.0,
            lambda: 0.0,
            eigenfunction: PiecewiseSine::new(
                0.0,
                vec![SineSegment {
                    amplitude: 1.0,
                    phase: FRAC_PI_4,
                }],
            ),
            multiplicity: 1,
        };
    }
    let gamma = solve_unique_phase(alpha, k, 1);
    let b = -2.0 * gamma + FRAC_PI_2 + TAU * k as f64;
    EigenPair {
        k,
        b,
        lambda: -b * b,
        eigenfunction: PiecewiseSine::new(
            b,
            vec![SineSegment {
                amplitude: 1.0,
                phase: gamma,
            }],
        ),
        multiplicity: 1,
    }
}

/// The phase γ₁ of the two-atom family: unique root of
/// `tan γ₁ = 1 − 4αγ₁ + απ + 2πkα` on (−π/2, π/2).
pub fn two_atom_phase(alpha: f64, k: i64) -> f64 {
    // This is the one-atom tangent line with β = 2α and the offset of the
    // half-spaced geometry: rhs(c) = −4αc + απ + 2πkα + 1.
    let p = HalfSpacedLine { alpha, k };
    bisect_then_newton(
        |c| p.residual(c),
        |c| p.residual_derivative(c),
        -FRAC_PI_2,
        FRAC_PI_2,
        BRACKET_WIDTH,
        NEWTON_STEPS,
    )
}

struct HalfSpacedLine {
    alpha: f64,
    k: i64,
}

impl HalfSpacedLine {
    fn rhs(&self, c: f64) -> f64 {
        1.0 - 4.0 * self.alpha * c + self.alpha * PI + TAU * self.alpha * self.k as f64
    }
    fn residual(&self, c: f64) -> f64 {
        c.sin() - c.cos() * self.rhs(c)
    }
    fn residual_derivative(&self, c: f64) -> f64 {
        c.cos() + c.sin() * self.rhs(c) + 4.0 * self.alpha * c.cos()
    }
}

/// Eigenpair k of `Δ_η` for `η = Λ + α δ_{1/2} + α δ₁` (equal weights at
/// half spacing). γ₂ is reported modulo 2π in [0, 2π).
pub fn eigenpair_two_atoms(alpha: f64, k: i64) -> EigenPair {
    assert!(alpha > 0.0, "atom weight must be positive");
    if k == 0 {
        return EigenPair {
            k: 0,
            b: 0.0,
            lambda: 0.0,
            eigenfunction: PiecewiseSine::constant(1.0, 2),
            multiplicity: 1,
        };
    }
    let gamma1 = two_atom_phase(alpha, k);
    let b = -4.0 * gamma1 + PI + TAU * k as f64;
    let gamma2 = (-b - gamma1 + FRAC_PI_2).rem_euclid(TAU);
    EigenPair {
        k,
        b,
        lambda: -b * b,
        eigenfunction: PiecewiseSine::new(
            b,
            vec![
                SineSegment {
                    amplitude: 1.0,
                    phase: gamma1,
                },
                SineSegment {
                    amplitude: 1.0,
                    phase: gamma2,
                },
            ],
        ),
        multiplicity: 1,
    }
}

/// Outcome of matching a two-atom weight against the special families for
/// which λ = −1/α² is an eigenvalue.
#[derive(Debug, Clone)]
pub enum SpecialAlphaClass {
    /// α = 1/(π + 2πm): the eigenfunction is `sin(−x/α)` then
    /// `sin(−x/α + 3π/2)`, and it equals the pair with index k = −m − 1.
    Prime {
        m: u32,
        pair: EigenPair,
    },
    /// α = 1/(2 arctan(1/2) − 2 arctan 2 + 2πm): the eigenfunction is
    /// `sin(x/α + arctan 2)` then `sin(x/α + arctan 2 − 2 arctan(1/2) + π/2)`,
    /// equal to the pair with index k = m. Positive weights require m ≥ 1.
    DoublePrime {
        m: u32,
        pair: EigenPair,
    },
    NoMatch,
}

/// α values of the first family, `1/(π + 2πm)`.
pub fn alpha_prime(m: u32) -> f64 {
    1.0 / (PI + TAU * m as f64)
}

/// α values of the second family, `1/(2 arctan(1/2) − 2 arctan 2 + 2πm)`;
/// negative for m = 0, a valid weight from m = 1 on.
pub fn alpha_double_prime(m: u32) -> f64 {
    1.0 / (2.0 * 0.5f64.atan() - 2.0 * 2.0f64.atan() + TAU * m as f64)
}

/// Classify a two-atom weight against both special families within `tol`.
pub fn special_alpha_class(alpha: f64, tol: f64) -> SpecialAlphaClass {
    assert!(alpha > 0.0);
    let b_mag = 1.0 / alpha;
    let mut m = 0u32;
    loop {
        let prime = alpha_prime(m);
        let dprime = alpha_double_prime(m);
        if (alpha - prime).abs() <= tol {
            let pair = EigenPair {
                k: -(m as i64) - 1,
                b: -b_mag,
                lambda: -b_mag * b_mag,
                eigenfunction: PiecewiseSine::new(
                    -b_mag,
                    vec![
                        SineSegment {
                            amplitude: 1.0,
                            phase: 0.0,
                        },
                        SineSegment {
                            amplitude: 1.0,
                            phase: 1.5 * PI,
                        },
                    ],
                ),
                multiplicity: 1,
            };
            return SpecialAlphaClass::Prime { m, pair };
        }
        if dprime > 0.0 && (alpha - dprime).abs() <= tol {
            let g1 = 2.0f64.atan();
            let g2 = (g1 - 2.0 * 0.5f64.atan() + FRAC_PI_2).rem_euclid(TAU);
            let pair = EigenPair {
                k: m as i64,
                b: b_mag,
                lambda: -b_mag * b_mag,
                eigenfunction: PiecewiseSine::new(
                    b_mag,
                    vec![
                        SineSegment {
                            amplitude: 1.0,
                            phase: g1,
                        },
                        SineSegment {
                            amplitude: 1.0,
                            phase: g2,
                        },
                    ],
                ),
                multiplicity: 1,
            };
            return SpecialAlphaClass::DoublePrime { m, pair };
        }
        // Both families decrease toward zero; once they both fall below
        // alpha − tol no further m can match.
        if prime < alpha - tol && (dprime > 0.0 && dprime < alpha - tol) {
            return SpecialAlphaClass::NoMatch;
        }
        m += 1;
        if m > 1_000_000 {
            return SpecialAlphaClass::NoMatch;
        }
    }
}

/// Eigenvalues of the one-atom operator sorted by magnitude: index 0 is the
/// zero eigenvalue, and the enumeration alternates between the negative-k
/// and positive-k families.
pub fn one_atom_sorted_eigenvalues(alpha: f64, count: usize) -> Vec<f64> {
    let mut lambdas = vec![0.0];
    let mut k = 1i64;
    while lambdas.len() < count {
        lambdas.push(eigenpair_one_atom(alpha, -k).lambda);
        if lambdas.len() < count {
            lambdas.push(eigenpair_one_atom(alpha, k).lambda);
        }
        k += 1;
    }
    lambdas.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap());
    lambdas.truncate(count);
    lambdas
}

/// Eigenvalues of the two-atom operator sorted by magnitude.
pub fn two_atom_sorted_eigenvalues(alpha: f64, count: usize) -> Vec<f64> {
    let mut lambdas = vec![0.0];
    let mut k = 1i64;
    while lambdas.len() < count + 2 {
        lambdas.push(eigenpair_two_atoms(alpha, -k).lambda);
        lambdas.push(eigenpair_two_atoms(alpha, k).lambda);
        k += 1;
    }
    lambdas.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap());
    lambdas.truncate(count);
    lambdas
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::system_residual;
    use crate::measure::MeasureSpec;

    fn one_atom_spec(alpha: f64) -> MeasureSpec {
        MeasureSpec::lebesgue_with_atoms(&[(1.0, alpha)]).unwrap()
    }

    fn two_atom_spec(alpha: f64) -> MeasureSpec {
        MeasureSpec::lebesgue_with_atoms(&[(0.5, alpha), (1.0, alpha)]).unwrap()
    }

    #[test]
    fn k_zero_gives_quarter_pi_phase_and_zero_frequency() {
        for alpha in [0.1, 1.0 / PI, 2.0, 7.5] {
            let p = TanLineProblem {
                beta: alpha,
                k: 0,
                sign: 1,
            };
            let sols = solve_tan_line(&p);
            assert_eq!(sols.len(), 1);
            assert!((sols[0].c - FRAC_PI_4).abs() < 1e-13);
            assert!(sols[0].xi.abs() < 1e-12);
        }
    }

    #[test]
    fn one_atom_paper_example_values() {
        let alpha = 1.0 / PI;
        let p1 = eigenpair_one_atom(alpha, 1);
        assert!((p1.b - 5.416059).abs() < 1e-5);
        assert!((p1.eigenfunction.segments()[0].phase - 1.218961).abs() < 1e-5);
        assert!((p1.lambda + 29.3337).abs() < 1e-3);
        let p2 = eigenpair_one_atom(alpha, 2);
        assert!((p2.lambda + 130.4286).abs() < 1e-3);
        let p3 = eigenpair_one_atom(alpha, 3);
        assert!((p3.lambda + 309.0456).abs() < 1e-3);
    }

    #[test]
    fn tangent_root_defining_equation_residual() {
        // |tan γ − rhs| at the returned root stays tiny away from the pole.
        for (alpha, k) in [(0.3, 2i64), (1.0 / PI, 1), (4.0, -3), (0.05, 5)] {
            let p = TanLineProblem {
                beta: alpha,
                k,
                sign: 1,
            };
            let c = solve_tan_line(&p)[0].c;
            assert!((c.tan() - p.rhs(c)).abs() < 1e-12 * (1.0 + c.tan().abs()));
        }
    }

    #[test]
    fn negative_beta_roots_all_solve_the_pair_system() {
        // Dense-scan oracle: every root must satisfy both lines of the
        // (ξ, c) system that defines the tangent-line reduction.
        for (beta, k) in [(-0.05, 0i64), (-0.8, 1), (-2.5, -1), (-0.6, 0)] {
            let p = TanLineProblem { beta, k, sign: 1 };
            let sols = solve_tan_line(&p);
            assert!(
                (1..=3).contains(&sols.len()),
                "beta {beta} k {k}: {} roots",
                sols.len()
            );
            for s in &sols {
                let (xi, c) = (s.xi, s.c);
                let e1 = beta * xi * c.cos() - (c.sin() - (xi + c).sin());
                let e2 = beta * xi * xi * (xi + c).sin() - (xi * (xi + c).cos() - xi * c.cos());
                assert!(e1.abs() < 1e-11, "e1 {e1}");
                assert!(e2.abs() < 1e-11, "e2 {e2}");
            }
        }
    }

    #[test]
    fn negative_beta_can_have_three_roots() {
        // With a steep negative slope the line crosses tan three times.
        let p = TanLineProblem {
            beta: -2.0,
            k: 0,
            sign: 1,
        };
        let sols = solve_tan_line(&p);
        assert_eq!(sols.len(), 3);
    }

    #[test]
    fn exact_tangency_is_found_and_flagged() {
        // For β = −1, k = 0, sign +, the line 2c + 1 − π/2 is tangent to
        // tan c at c = π/4: a double root with no sign change.
        let p = TanLineProblem {
            beta: -1.0,
            k: 0,
            sign: 1,
        };
        let sols = solve_tan_line(&p);
        let touch = sols
            .iter()
            .find(|s| (s.c - FRAC_PI_4).abs() < 1e-6)
            .expect("tangency at pi/4 must be reported");
        assert!(touch.near_tangent);
        // The crossing to the left of the touch is still found.
        assert!(sols.iter().any(|s| s.c < 0.0 && !s.near_tangent));
    }

    #[test]
    fn pair_symmetry_between_sign_branches() {
        // −c_{−k}^− = c_k^+ and −ξ_{−k}^− = ξ_k^+.
        for (beta, k) in [(0.4, 1i64), (1.0 / PI, 3), (2.2, -2)] {
            let plus = solve_tan_line(&TanLineProblem { beta, k, sign: 1 })[0];
            let minus = solve_tan_line(&TanLineProblem {
                beta,
                k: -k,
                sign: -1,
            })[0];
            assert!((plus.c + minus.c).abs() < 1e-12);
            assert!((plus.xi + minus.xi).abs() < 1e-12);
        }
    }

    #[test]
    fn uniqueness_of_bracket_for_positive_beta() {
        // 1000 pseudo-random (α, k): exactly one sign change on the interval.
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let alpha = 0.01 + 9.99 * next();
            let k = (next() * 21.0) as i64 - 10;
            let p = TanLineProblem {
                beta: alpha,
                k,
                sign: 1,
            };
            let changes = scan_sign_changes(|c| p.residual(c), -FRAC_PI_2, FRAC_PI_2, 4000);
            assert_eq!(changes.len(), 1, "alpha {alpha} k {k}");
            let q = HalfSpacedLine { alpha, k };
            let changes = scan_sign_changes(|c| q.residual(c), -FRAC_PI_2, FRAC_PI_2, 4000);
            assert_eq!(changes.len(), 1, "two-atom alpha {alpha} k {k}");
        }
    }

    #[test]
    fn one_atom_pairs_satisfy_the_matching_system() {
        for k in [-3i64, -1, 1, 2, 5] {
            for alpha in [0.2, 1.0 / PI, 3.0] {
                let pair = eigenpair_one_atom(alpha, k);
                let res = system_residual(&pair.eigenfunction, &one_atom_spec(alpha));
                assert!(res < 1e-12, "alpha {alpha} k {k}: residual {res}");
            }
        }
    }

    #[test]
    fn two_atom_paper_example_values() {
        let alpha = 1.0 / PI;
        let m1 = eigenpair_two_atoms(alpha, -1);
        assert!((m1.b + PI).abs() < 1e-12);
        assert!((m1.lambda + PI * PI).abs() < 1e-11);
        assert!(m1.eigenfunction.segments()[0].phase.abs() < 1e-13);
        assert!((m1.eigenfunction.segments()[1].phase - 1.5 * PI).abs() < 1e-11);
        let m2 = eigenpair_two_atoms(alpha, -2);
        assert!((m2.b + 2.0 * PI).abs() < 1e-12);
        assert!((m2.eigenfunction.segments()[0].phase + FRAC_PI_4).abs() < 1e-13);
        for (k, lam) in [(1i64, 21.8176), (2, 106.9262), (3, 267.2330), (4, 505.3139)] {
            let p = eigenpair_two_atoms(alpha, k);
            assert!((p.lambda + lam).abs() < 1e-3, "k {k}: {}", p.lambda);
        }
    }

    #[test]
    fn two_atom_pairs_satisfy_the_matching_system() {
        for k in [-4i64, -1, 1, 3] {
            for alpha in [0.15, 1.0 / PI, 2.0] {
                let pair = eigenpair_two_atoms(alpha, k);
                let res = system_residual(&pair.eigenfunction, &two_atom_spec(alpha));
                assert!(res < 1e-12, "alpha {alpha} k {k}: residual {res}");
            }
        }
    }

    #[test]
    fn nonzero_pairs_jump_at_the_atom() {
        let alpha = 1.0 / PI;
        let spec = one_atom_spec(alpha);
        for k in [1i64, -1, 2] {
            let pair = eigenpair_one_atom(alpha, k);
            let jump = pair.eigenfunction.right_limit_at_atom(&spec, 0)
                - pair.eigenfunction.value_at_atom(&spec, 0);
            assert!(jump.abs() > 1e-3, "k {k} should be discontinuous");
        }
        let constant = eigenpair_one_atom(alpha, 0);
        let jump = constant.eigenfunction.right_limit_at_atom(&spec, 0)
            - constant.eigenfunction.value_at_atom(&spec, 0);
        assert!(jump.abs() < 1e-15);
    }

    #[test]
    fn special_alpha_prime_family() {
        let class = special_alpha_class(1.0 / PI, 1e-12);
        match class {
            SpecialAlphaClass::Prime { m, pair } => {
                assert_eq!(m, 0);
                assert_eq!(pair.k, -1);
                assert!((pair.lambda + PI * PI).abs() < 1e-12);
                // The corollary's function equals the k = −1 family member.
                let family = eigenpair_two_atoms(1.0 / PI, -1);
                let spec = two_atom_spec(1.0 / PI);
                for i in 0..40 {
                    let x = (i as f64 + 0.5) / 40.0;
                    assert!(
                        (pair.eigenfunction.eval(&spec, x) - family.eigenfunction.eval(&spec, x))
                            .abs()
                            < 1e-10
                    );
                }
            }
            other => panic!("expected prime class, got {other:?}"),
        }
    }

    #[test]
    fn special_alpha_double_prime_family() {
        let alpha = alpha_double_prime(1);
        let class = special_alpha_class(alpha, 1e-12);
        match class {
            SpecialAlphaClass::DoublePrime { m, pair } => {
                assert_eq!(m, 1);
                assert!((pair.eigenfunction.segments()[0].phase - 2.0f64.atan()).abs() < 1e-14);
                let family = eigenpair_two_atoms(alpha, 1);
                assert!((pair.b - family.b).abs() < 1e-10);
                let spec = two_atom_spec(alpha);
                for i in 0..40 {
                    let x = (i as f64 + 0.5) / 40.0;
                    assert!(
                        (pair.eigenfunction.eval(&spec, x) - family.eigenfunction.eval(&spec, x))
                            .abs()
                            < 1e-9
                    );
                }
            }
            other => panic!("expected double-prime class, got {other:?}"),
        }
    }

    #[test]
    fn generic_alpha_matches_nothing() {
        assert!(matches!(
            special_alpha_class(0.123, 1e-9),
            SpecialAlphaClass::NoMatch
        ));
    }

    #[test]
    fn double_prime_m_zero_is_not_a_weight() {
        assert!(alpha_double_prime(0) < 0.0);
    }

    #[test]
    fn one_atom_asymptotics() {
        let alpha = 1.0 / PI;
        let k = 10_000i64;
        let pair = eigenpair_one_atom(alpha, k);
        assert!((pair.b / (TAU * k as f64) - 1.0).abs() < 1e-3);
        assert!((pair.eigenfunction.segments()[0].phase - FRAC_PI_2).abs() < 1e-2);
        let neg = eigenpair_one_atom(alpha, -k);
        assert!((neg.b / (TAU * -k as f64) - 1.0).abs() < 1e-3);
        assert!((neg.eigenfunction.segments()[0].phase + FRAC_PI_2).abs() < 1e-2);
    }

    #[test]
    fn sorted_eigenvalue_growth_matches_weyl_rate() {
        let alpha = 1.0 / PI;
        let k = 10_000usize;
        let lambdas = one_atom_sorted_eigenvalues(alpha, k + 1);
        let target = (k as f64 * PI + FRAC_PI_2).powi(2);
        assert!((lambdas[k] / target + 1.0).abs() < 1e-2);
    }
}
