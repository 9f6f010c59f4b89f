//! Exact arithmetic on single-frequency waves `t ↦ A sin(ωt + φ)`.
//!
//! Products of two such waves integrate in closed form through the
//! product-to-sum identities, which keeps every inner product in the library
//! free of quadrature error.

use std::f64::consts::FRAC_PI_2;

/// `t ↦ amplitude · sin(frequency · t + phase)`. Constants are encoded with
/// zero frequency and phase π/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harmonic {
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
}

impl Harmonic {
    pub fn new(amplitude: f64, frequency: f64, phase: f64) -> Self {
        Harmonic {
            amplitude,
            frequency,
            phase,
        }
    }

    pub fn constant(value: f64) -> Self {
        Harmonic::new(value, 0.0, FRAC_PI_2)
    }

    pub fn zero() -> Self {
        Harmonic::new(0.0, 0.0, 0.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.amplitude * (self.frequency * t + self.phase).sin()
    }

    /// d/dt: `Aω sin(ωt + φ + π/2)`.
    pub fn derivative(&self) -> Harmonic {
        Harmonic::new(
            self.amplitude * self.frequency,
            self.frequency,
            self.phase + FRAC_PI_2,
        )
    }

    pub fn scaled(&self, s: f64) -> Harmonic {
        Harmonic::new(self.amplitude * s, self.frequency, self.phase)
    }

    /// Phasor sum of two waves sharing one frequency.
    ///
    /// Panics if the frequencies differ; callers combine only waves from the
    /// same eigenspace.
    pub fn add_same_frequency(&self, other: &Harmonic) -> Harmonic {
        assert_eq!(
            self.frequency, other.frequency,
            "phasor addition requires equal frequencies"
        );
        // A sin(x+φ) = Im(A e^{iφ} e^{ix}); add the complex amplitudes.
        let re = self.amplitude * self.phase.cos() + other.amplitude * other.phase.cos();
        let im = self.amplitude * self.phase.sin() + other.amplitude * other.phase.sin();
        let amplitude = re.hypot(im);
        let phase = if amplitude == 0.0 { 0.0 } else { im.atan2(re) };
        Harmonic::new(amplitude, self.frequency, phase)
    }

    /// ∫_{t0}^{t1} f(t) g(t) dt in closed form.
    pub fn integral_of_product(f: &Harmonic, g: &Harmonic, t0: f64, t1: f64) -> f64 {
        // sin X sin Y = (cos(X−Y) − cos(X+Y)) / 2
        let c = 0.5 * f.amplitude * g.amplitude;
        c * (integral_cos(f.frequency - g.frequency, f.phase - g.phase, t0, t1)
            - integral_cos(f.frequency + g.frequency, f.phase + g.phase, t0, t1))
    }

    /// ∫_{t0}^{t1} f(t) dt in closed form.
    pub fn integral(&self, t0: f64, t1: f64) -> f64 {
        // ∫ A sin(ωt + φ) dt = ∫ A cos(ωt + φ − π/2) dt
        self.amplitude * integral_cos(self.frequency, self.phase - FRAC_PI_2, t0, t1)
    }
}

/// ∫_{t0}^{t1} cos(ωt + φ) dt, stable for every ω including ω = 0:
/// the antiderivative difference equals `Δt · cos(ω·mid + φ) · sinc(ωΔt/2)`.
fn integral_cos(omega: f64, phi: f64, t0: f64, t1: f64) -> f64 {
    let dt = t1 - t0;
    let mid = 0.5 * (t0 + t1);
    dt * (omega * mid + phi).cos() * sinc(0.5 * omega * dt)
}

fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        let u2 = u * u;
        1.0 - u2 / 6.0 + u2 * u2 / 120.0
    } else {
        u.sin() / u
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let x = a + i as f64 * h;
            s += if i % 2 == 0 { 2.0 } else { 4.0 } * f(x);
        }
        s * h / 3.0
    }

    #[test]
    fn product_integral_matches_quadrature() {
        let f = Harmonic::new(1.3, 5.0, 0.4);
        let g = Harmonic::new(-0.7, 2.5, 1.9);
        let exact = Harmonic::integral_of_product(&f, &g, 0.2, 0.9);
        let quad = simpson(|t| f.eval(t) * g.eval(t), 0.2, 0.9, 10_000);
        assert!((exact - quad).abs() < 1e-10);
    }

    #[test]
    fn equal_frequency_product_integral() {
        let f = Harmonic::new(2.0, 2.0 * PI, 0.0);
        // ∫_0^1 (2 sin 2πt)² dt = 2
        let exact = Harmonic::integral_of_product(&f, &f, 0.0, 1.0);
        assert!((exact - 2.0).abs() < 1e-14);
    }

    #[test]
    fn full_period_sine_against_constant_vanishes() {
        let f = Harmonic::new(1.0, 2.0 * PI, 0.0);
        let one = Harmonic::constant(1.0);
        let exact = Harmonic::integral_of_product(&f, &one, 0.0, 1.0);
        assert!(exact.abs() < 1e-15);
    }

    #[test]
    fn constant_product_is_plain_area() {
        let a = Harmonic::constant(3.0);
        let b = Harmonic::constant(-2.0);
        assert!((Harmonic::integral_of_product(&a, &b, 0.0, 0.5) + 3.0).abs() < 1e-15);
    }

    #[test]
    fn near_zero_frequency_difference_is_stable() {
        let f = Harmonic::new(1.0, 10.0, 0.3);
        let g = Harmonic::new(1.0, 10.0 + 1e-9, 0.3);
        let exact = Harmonic::integral_of_product(&f, &g, 0.0, 1.0);
        let same = Harmonic::integral_of_product(&f, &f, 0.0, 1.0);
        assert!((exact - same).abs() < 1e-9);
    }

    #[test]
    fn phasor_addition_matches_pointwise_sum() {
        let f = Harmonic::new(1.1, 4.0, 0.7);
        let g = Harmonic::new(-0.4, 4.0, 2.9);
        let s = f.add_same_frequency(&g);
        for i in 0..50 {
            let t = i as f64 * 0.031;
            assert!((s.eval(t) - f.eval(t) - g.eval(t)).abs() < 1e-13);
        }
    }

    #[test]
    fn derivative_is_cosine_wave() {
        let f = Harmonic::new(2.0, 3.0, 0.5);
        let d = f.derivative();
        for i in 0..20 {
            let t = i as f64 * 0.07;
            let fd = 2.0 * 3.0 * (3.0 * t + 0.5).cos();
            assert!((d.eval(t) - fd).abs() < 1e-13);
        }
    }
}
