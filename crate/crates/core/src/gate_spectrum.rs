//! Spectral profile of a driving pulse.
//!
//! For a pulse ε(t) with accumulated phase φ(t) = ∫_{-∞}^t ε, the two
//! spectral functions are
//!
//! ```text
//! F±(ω) = ±∫ du e^{±iφ(u)} ε(u) e^{iωu}
//! ```
//!
//! and the input-state-averaged gate profile is S(ω) = (|F₋|² + |F₊|²)/3.
//! `GaussianNumeric` evaluates F± by trapezoid sums on a uniform grid spanning
//! ±8τ_g; `GaussianAnalytic` uses the displaced-Gaussian closed form
//! |F±|² ≈ α² exp(−τ_g²(ω ± α/(√(2π)τ_g))²).

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quantities::{EnvelopePath, PulseSpec};

/// Half-width of the time grid in units of τ_g.
pub const GRID_HALF_WIDTH: f64 = 8.0;
/// Number of samples on the time grid.
pub const GRID_POINTS: usize = 4096;

/// ε(t) = α/(√(2π)τ_g) · exp(−t²/(2τ_g²)), rad/ps.
pub fn envelope(t: f64, pulse: &PulseSpec) -> f64 {
    let x = t / pulse.tau_g;
    pulse.peak_rabi_frequency() * (-0.5 * x * x).exp()
}

/// φ(t) = (α/2)·erfc(−t/(√2 τ_g)), rad.
pub fn accumulated_phase(t: f64, pulse: &PulseSpec) -> f64 {
    0.5 * pulse.alpha * libm::erfc(-t / (SQRT_2 * pulse.tau_g))
}

/// Closed-form (|F₊(ω)|², |F₋(ω)|²).
pub fn f_squared_gaussian_approx(omega: f64, pulse: &PulseSpec) -> (f64, f64) {
    let a2 = pulse.alpha * pulse.alpha;
    let shift = pulse.peak_rabi_frequency();
    let tau = pulse.tau_g;
    let plus = tau * (omega + shift);
    let minus = tau * (omega - shift);
    (a2 * (-plus * plus).exp(), a2 * (-minus * minus).exp())
}

/// Sampled pulse with the phase factors folded into the quadrature weights.
#[derive(Debug, Clone)]
struct TimeGrid {
    times: Vec<f64>,
    phases: Vec<f64>,
    // w_j ε_j e^{+iφ_j} and w_j ε_j e^{-iφ_j}
    plus: Vec<Complex64>,
    minus: Vec<Complex64>,
}

impl TimeGrid {
    fn new(pulse: &PulseSpec) -> Result<Self> {
        let half = GRID_HALF_WIDTH * pulse.tau_g;
        let dt = 2.0 * half / (GRID_POINTS - 1) as f64;
        let times: Vec<f64> = (0..GRID_POINTS).map(|j| -half + j as f64 * dt).collect();
        let phases: Vec<f64> = times.iter().map(|&t| accumulated_phase(t, pulse)).collect();

        let alpha = pulse.alpha;
        let first = phases[0];
        let last = phases[GRID_POINTS - 1];
        if alpha > 0.0 && (first >= 1e-9 * alpha || (last - alpha).abs() >= 1e-9 * alpha) {
            return Err(Error::GridSupport(format!(
                "phi(start) = {first:e}, phi(end) - alpha = {:e}",
                last - alpha
            )));
        }

        let mut plus = Vec::with_capacity(GRID_POINTS);
        let mut minus = Vec::with_capacity(GRID_POINTS);
        for (j, (&t, &phi)) in times.iter().zip(&phases).enumerate() {
            let w = if j == 0 || j == GRID_POINTS - 1 {
                0.5 * dt
            } else {
                dt
            };
            let a = w * envelope(t, pulse);
            let (s, c) = phi.sin_cos();
            plus.push(Complex64::new(a * c, a * s));
            minus.push(Complex64::new(a * c, -a * s));
        }
        Ok(Self {
            times,
            phases,
            plus,
            minus,
        })
    }

    fn f_plus_minus(&self, omega: f64) -> (Complex64, Complex64) {
        let mut fp = Complex64::new(0.0, 0.0);
        let mut fm = Complex64::new(0.0, 0.0);
        for ((&t, p), m) in self.times.iter().zip(&self.plus).zip(&self.minus) {
            let (s, c) = (omega * t).sin_cos();
            let rot = Complex64::new(c, s);
            fp += p * rot;
            fm += m * rot;
        }
        (fp, -fm)
    }
}

/// Evaluator for F± and S(ω) of one pulse.
///
/// The numeric path builds its time grid once on construction; evaluation
/// afterwards is read-only and can be shared across threads.
#[derive(Debug, Clone)]
pub struct GateSpectrum {
    pulse: PulseSpec,
    grid: Option<TimeGrid>,
}

impl GateSpectrum {
    pub fn new(pulse: PulseSpec) -> Result<Self> {
        let grid = match pulse.envelope {
            EnvelopePath::GaussianAnalytic => None,
            EnvelopePath::GaussianNumeric => Some(TimeGrid::new(&pulse)?),
        };
        Ok(Self { pulse, grid })
    }

    /// Like [`GateSpectrum::new`] but always builds the time grid.
    pub fn numeric(pulse: PulseSpec) -> Result<Self> {
        let grid = Some(TimeGrid::new(&pulse)?);
        Ok(Self { pulse, grid })
    }

    pub fn pulse(&self) -> &PulseSpec {
        &self.pulse
    }

    /// Sample times and cached φ values of the numeric grid.
    pub fn phase_samples(&self) -> Option<(&[f64], &[f64])> {
        self.grid
            .as_ref()
            .map(|g| (g.times.as_slice(), g.phases.as_slice()))
    }

    /// Numerically evaluated (F₊(ω), F₋(ω)); `None` on the analytic path.
    pub fn f_plus_minus(&self, omega: f64) -> Option<(Complex64, Complex64)> {
        self.grid.as_ref().map(|g| g.f_plus_minus(omega))
    }

    /// (|F₊|², |F₋|²) by whichever path this evaluator was built for.
    pub fn f_squared(&self, omega: f64) -> (f64, f64) {
        match &self.grid {
            Some(g) => {
                let (p, m) = g.f_plus_minus(omega);
                (p.norm_sqr(), m.norm_sqr())
            }
            None => f_squared_gaussian_approx(omega, &self.pulse),
        }
    }

    /// S(ω) = (|F₋(ω)|² + |F₊(ω)|²)/3.
    pub fn spectral_function(&self, omega: f64) -> f64 {
        let (p, m) = self.f_squared(omega);
        (p + m) / 3.0
    }

    /// Frequency beyond which S is negligible: α/(√(2π)τ_g) + 12/τ_g.
    pub fn bandwidth(&self) -> f64 {
        self.pulse.peak_rabi_frequency() + 12.0 / self.pulse.tau_g
    }
}

/// One-shot numeric (F₊, F₋) at `omega`.
pub fn f_plus_minus_numeric(omega: f64, pulse: &PulseSpec) -> Result<(Complex64, Complex64)> {
    let grid = TimeGrid::new(pulse)?;
    Ok(grid.f_plus_minus(omega))
}

/// One-shot S(ω) along the path selected by `pulse.envelope`.
pub fn gate_spectral_function(omega: f64, pulse: &PulseSpec) -> Result<f64> {
    Ok(GateSpectrum::new(*pulse)?.spectral_function(omega))
}

/// Location of the closed-form peaks, ∓α/(√(2π)τ_g) for F±.
pub fn analytic_peak(pulse: &PulseSpec) -> f64 {
    pulse.alpha / ((2.0 * PI).sqrt() * pulse.tau_g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn pulse(alpha: f64, tau: f64) -> PulseSpec {
        PulseSpec::new(alpha, tau, EnvelopePath::GaussianNumeric).unwrap()
    }

    #[test]
    fn envelope_peak_value() {
        let p = pulse(PI, 1.0);
        assert_relative_eq!(
            envelope(0.0, &p),
            PI / (2.0 * PI).sqrt(),
            max_relative = 1e-15
        );
        assert_relative_eq!(envelope(0.0, &p), 1.2533, max_relative = 1e-4);
    }

    #[test]
    fn zero_area_pulse_is_silent() {
        let p = pulse(0.0, 1.0);
        for t in [-2.0, 0.0, 0.7] {
            assert_eq!(envelope(t, &p), 0.0);
        }
        let s = GateSpectrum::new(p).unwrap();
        assert_eq!(s.spectral_function(0.3), 0.0);
        let a = PulseSpec::new(0.0, 1.0, EnvelopePath::GaussianAnalytic).unwrap();
        assert_eq!(f_squared_gaussian_approx(0.4, &a), (0.0, 0.0));
        assert_eq!(gate_spectral_function(0.4, &a).unwrap(), 0.0);
    }

    #[test]
    fn trapezoid_area_equals_rotation_angle() {
        for (alpha, tau) in [(PI / 2.0, 1.0), (PI, 0.3), (0.01, 7.0)] {
            let p = pulse(alpha, tau);
            let half = GRID_HALF_WIDTH * tau;
            let dt = 2.0 * half / (GRID_POINTS - 1) as f64;
            let area: f64 = (0..GRID_POINTS)
                .map(|j| {
                    let w = if j == 0 || j == GRID_POINTS - 1 {
                        0.5
                    } else {
                        1.0
                    };
                    w * envelope(-half + j as f64 * dt, &p)
                })
                .sum::<f64>()
                * dt;
            assert_relative_eq!(area, alpha, max_relative = 1e-9);
        }
    }

    #[test]
    fn phase_limits() {
        let p = pulse(1.3, 2.0);
        assert!(accumulated_phase(-1e3, &p).abs() < 1e-300);
        assert_relative_eq!(accumulated_phase(0.0, &p), 0.65, max_relative = 1e-15);
        assert_relative_eq!(accumulated_phase(1e3, &p), 1.3, max_relative = 1e-15);
    }

    #[test]
    fn grid_captures_pulse_support() {
        let s = GateSpectrum::new(pulse(PI / 2.0, 1.5)).unwrap();
        let (_, phases) = s.phase_samples().unwrap();
        let alpha = PI / 2.0;
        assert!(phases[0] < 1e-9 * alpha);
        assert!((phases[phases.len() - 1] - alpha).abs() < 1e-9 * alpha);
    }

    #[test]
    fn weak_pulse_spectrum_is_plain_gaussian_transform() {
        let alpha = 1e-4;
        let tau = 1.3;
        let p = pulse(alpha, tau);
        let g = GateSpectrum::new(p).unwrap();
        for i in -40..=40 {
            let x = i as f64 * 0.05;
            let omega = x / tau;
            let (fp, fm) = g.f_plus_minus(omega).unwrap();
            let oracle = alpha * alpha * (-x * x).exp();
            assert!((fp.norm_sqr() / oracle - 1.0).abs() < 1e-3, "F+ at x={x}");
            assert!((fm.norm_sqr() / oracle - 1.0).abs() < 1e-3, "F- at x={x}");
        }
        let (fp0, _) = f_plus_minus_numeric(0.0, &p).unwrap();
        assert_relative_eq!(fp0.norm(), alpha, max_relative = 1e-4);
    }

    #[test]
    fn zero_frequency_transform_is_closed_form() {
        // F₊(0) = −i(e^{iα} − 1), so |F₊(0)|² = 4 sin²(α/2)
        for alpha in [0.3, PI / 2.0, PI] {
            let (fp, fm) = f_plus_minus_numeric(0.0, &pulse(alpha, 1.0)).unwrap();
            let exact = 4.0 * (alpha / 2.0).sin().powi(2);
            assert_relative_eq!(fp.norm_sqr(), exact, max_relative = 1e-12);
            assert_relative_eq!(fm.norm_sqr(), exact, max_relative = 1e-12);
        }
    }

    #[test]
    fn numeric_peaks_are_displaced_to_opposite_sides() {
        // The sampled maximum sits at ∓α/(2√π τ_g); the closed form places it
        // at ∓α/(√(2π) τ_g), a factor 1/√2 further out.
        let alpha = PI / 2.0;
        let tau = 1.0;
        let g = GateSpectrum::new(pulse(alpha, tau)).unwrap();
        let argmax = |pick: fn((f64, f64)) -> f64| {
            (-2000..=2000)
                .map(|i| i as f64 * 1e-3)
                .max_by(|a, b| pick(g.f_squared(*a)).total_cmp(&pick(g.f_squared(*b))))
                .unwrap()
        };
        let wp = argmax(|(p, _)| p);
        let wm = argmax(|(_, m)| m);
        assert!(wp < 0.0 && wm > 0.0);
        assert!((wp + wm).abs() < 1e-9);
        assert!((wp + alpha / (2.0 * PI.sqrt() * tau)).abs() < 5e-3);
    }

    #[test]
    fn closed_form_peak_heights() {
        let p = PulseSpec::new(PI / 2.0, 0.8, EnvelopePath::GaussianAnalytic).unwrap();
        let w = analytic_peak(&p);
        let a2 = p.alpha * p.alpha;
        assert_relative_eq!(
            f_squared_gaussian_approx(-w, &p).0,
            a2,
            max_relative = 1e-15
        );
        assert_relative_eq!(f_squared_gaussian_approx(w, &p).1, a2, max_relative = 1e-15);
    }

    #[test]
    fn analytic_profile_at_zero_frequency() {
        for alpha in [0.01, 0.1, 0.5] {
            let p = PulseSpec::new(alpha, 1.0, EnvelopePath::GaussianAnalytic).unwrap();
            let expected = 2.0 / 3.0 * alpha * alpha * (-alpha * alpha / (2.0 * PI)).exp();
            assert_relative_eq!(
                gate_spectral_function(0.0, &p).unwrap(),
                expected,
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn numeric_and_analytic_profiles_agree_for_weak_pulse() {
        let alpha = 0.1;
        let tau = 1.0;
        let num = GateSpectrum::new(pulse(alpha, tau)).unwrap();
        let ana =
            GateSpectrum::new(PulseSpec::new(alpha, tau, EnvelopePath::GaussianAnalytic).unwrap())
                .unwrap();
        let peak = ana.spectral_function(0.0);
        for i in -300..=300 {
            let x = i as f64 * 0.01;
            let (n, a) = (
                num.spectral_function(x / tau),
                ana.spectral_function(x / tau),
            );
            assert!((n - a).abs() / peak < 0.01, "x={x}: {n} vs {a}");
            if x.abs() <= 2.5 {
                assert!((n / a - 1.0).abs() < 0.01, "pointwise x={x}: {n} vs {a}");
            }
        }
    }

    #[test]
    fn numeric_profile_is_even() {
        let g = GateSpectrum::new(pulse(PI / 2.0, 0.7)).unwrap();
        let max = (0..=400)
            .map(|i| g.spectral_function(i as f64 * 0.05))
            .fold(0.0, f64::max);
        for i in 0..=400 {
            let w = i as f64 * 0.05;
            let d = (g.spectral_function(w) - g.spectral_function(-w)).abs();
            assert!(d / max < 1e-9);
        }
    }

    #[test]
    fn profile_depends_on_omega_tau_only() {
        for envelope in [
            EnvelopePath::GaussianAnalytic,
            EnvelopePath::GaussianNumeric,
        ] {
            let unit = GateSpectrum::new(PulseSpec::new(1.1, 1.0, envelope).unwrap()).unwrap();
            for tau in [0.2, 3.0] {
                let g = GateSpectrum::new(PulseSpec::new(1.1, tau, envelope).unwrap()).unwrap();
                for x in [-2.0, -0.4, 0.0, 0.9, 2.5] {
                    assert_relative_eq!(
                        g.spectral_function(x / tau),
                        unit.spectral_function(x),
                        max_relative = 1e-9
                    );
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn profile_is_bounded(alpha in 0.0f64..4.0, tau in 0.05f64..20.0, x in -6.0f64..6.0) {
            for envelope in [EnvelopePath::GaussianAnalytic, EnvelopePath::GaussianNumeric] {
                let p = PulseSpec::new(alpha, tau, envelope).unwrap();
                let g = GateSpectrum::new(p).unwrap();
                let s = g.spectral_function(x / tau);
                prop_assert!(s >= 0.0);
                prop_assert!(s <= 2.0 / 3.0 * alpha * alpha * (1.0 + 1e-12));
                let (fp, fm) = g.f_squared(x / tau);
                prop_assert!(fp <= alpha * alpha * (1.0 + 1e-12));
                prop_assert!(fm <= alpha * alpha * (1.0 + 1e-12));
            }
        }
    }
}
