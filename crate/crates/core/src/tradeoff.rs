//! Gate error budget and its optimization over gate duration.
//!
//! The non-Markovian error is the overlap
//!
//! ```text
//! δ_nM = ∫ dω R(ω, T) S(ω) / ω²
//! ```
//!
//! of the thermal reservoir density with the gate profile, and the Markovian
//! error grows linearly, δ_M = τ_g/τ_r. For R = R₀ω³ at T = 0 and weak pulses
//! the first reduces to γ_nM/τ_g² with γ_nM = α²R₀/3, so the total
//! γ_nM/τ_g² + τ_g/τ_r has a closed-form minimum.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{non_negative, positive, Error, Result};
use crate::gate_spectrum::GateSpectrum;
use crate::optimize::golden_section;
use crate::quadrature::{self, Tolerance};
use crate::quantities::{MarkovianChannel, PulseFamily, PulseSpec};
use crate::reservoir::ReservoirSpectrum;

/// Relative width (in τ_g) at which the numeric optimizer stops.
pub const OPTIMUM_REL_WIDTH: f64 = 1e-4;
const SCAN_POINTS: usize = 33;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    /// Gate duration, ps.
    pub tau_g: f64,
    /// K.
    pub temperature: f64,
    pub delta_nm: f64,
    pub delta_m: f64,
    pub delta_total: f64,
}

impl ErrorBudget {
    pub fn new(tau_g: f64, temperature: f64, delta_nm: f64, delta_m: f64) -> Self {
        Self {
            tau_g,
            temperature,
            delta_nm,
            delta_m,
            delta_total: delta_nm + delta_m,
        }
    }
}

/// How δ_nM is evaluated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DressingModel {
    /// Full overlap integral of R(ω, T) and S(ω).
    #[default]
    Integral,
    /// α²R₀/(3τ_g²); ignores temperature, cutoff and the pulse-induced peak
    /// displacement.
    LeadingOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimumMethod {
    AnalyticPowerLaw,
    NumericScan,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TradeoffResult {
    /// ps
    pub tau_opt: f64,
    pub delta_min: f64,
    pub budget: ErrorBudget,
    pub method: OptimumMethod,
}

/// Leading-order law α²R₀/(3τ_g²).
pub fn leading_order_error(alpha: f64, r0: f64, tau_g: f64) -> f64 {
    alpha * alpha * r0 / (3.0 * tau_g * tau_g)
}

/// Panel boundaries on [0, omega_max] at the scales where the integrand
/// changes: the displaced gate peak, multiples of 1/τ_g, and the reservoir
/// cutoff frequencies.
fn positive_breakpoints(gate: &GateSpectrum, spec: &ReservoirSpectrum, omega_max: f64) -> Vec<f64> {
    let inv_tau = 1.0 / gate.pulse().tau_g;
    let peak = gate.pulse().peak_rabi_frequency();
    let mut pts = vec![0.0, omega_max];
    for j in [0.5, 1.0, 2.0, 4.0, 8.0] {
        pts.push(j * inv_tau);
        pts.push(peak + j * inv_tau);
        pts.push(peak - j * inv_tau);
    }
    pts.push(peak);
    for w in spec.characteristic_frequencies() {
        for j in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
            pts.push(j * w);
        }
    }
    pts.retain(|&w| w >= 0.0 && w <= omega_max);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * omega_max);
    pts
}

/// δ_nM for one pulse, reservoir and temperature.
pub fn nonmarkovian_error(
    pulse: &PulseSpec,
    spec: &ReservoirSpectrum,
    temperature: f64,
) -> Result<f64> {
    non_negative("temperature", temperature)?;
    if pulse.alpha == 0.0 || spec.r0() == 0.0 {
        return Ok(0.0);
    }
    let gate = GateSpectrum::new(*pulse)?;
    let omega_max = gate.bandwidth();
    let at_zero = spec.thermal_over_omega_sq_at_zero(temperature) * gate.spectral_function(0.0);
    let integrand = |omega: f64| {
        if omega == 0.0 {
            at_zero
        } else {
            spec.thermal_unchecked(omega, temperature) / (omega * omega)
                * gate.spectral_function(omega)
        }
    };

    let positive = positive_breakpoints(&gate, spec, omega_max);
    let breakpoints: Vec<f64> = if temperature == 0.0 {
        positive
    } else {
        positive
            .iter()
            .rev()
            .map(|w| -w)
            .filter(|&w| w < 0.0)
            .chain(positive.iter().copied())
            .collect()
    };
    let est = quadrature::integrate(integrand, &breakpoints, Tolerance::default())?;
    Ok(est.value.max(0.0))
}

/// δ_M = γ_M τ_g.
pub fn markovian_error(tau_g: f64, ch: &MarkovianChannel) -> Result<f64> {
    Ok(positive("tau_g", tau_g)? * ch.gamma_m())
}

/// Full budget at one gate duration.
pub fn total_error(
    tau_g: f64,
    family: &PulseFamily,
    spec: &ReservoirSpectrum,
    temperature: f64,
    ch: &MarkovianChannel,
) -> Result<ErrorBudget> {
    let pulse = family.at(tau_g)?;
    let delta_nm = nonmarkovian_error(&pulse, spec, temperature)?;
    let delta_m = markovian_error(tau_g, ch)?;
    Ok(ErrorBudget::new(tau_g, temperature, delta_nm, delta_m))
}

/// Budget at one gate duration with δ_nM taken from `model`.
pub fn total_error_with(
    model: DressingModel,
    tau_g: f64,
    family: &PulseFamily,
    spec: &ReservoirSpectrum,
    temperature: f64,
    ch: &MarkovianChannel,
) -> Result<ErrorBudget> {
    match model {
        DressingModel::Integral => total_error(tau_g, family, spec, temperature, ch),
        DressingModel::LeadingOrder => {
            let pulse = family.at(tau_g)?;
            non_negative("temperature", temperature)?;
            let delta_nm = leading_order_error(pulse.alpha, spec.r0(), tau_g);
            Ok(ErrorBudget::new(
                tau_g,
                temperature,
                delta_nm,
                markovian_error(tau_g, ch)?,
            ))
        }
    }
}

/// Closed-form optimum of α²R₀/(3τ²) + τ/τ_r:
/// τ_opt = ((2/3)α²R₀τ_r)^{1/3}, δ_min = (3/2)(2α²R₀/(3τ_r²))^{1/3}.
pub fn analytic_optimum(alpha: f64, r0: f64, tau_r: f64) -> Result<TradeoffResult> {
    positive("alpha", alpha)?;
    positive("r0", r0)?;
    positive("tau_r", tau_r)?;
    let a2r0 = alpha * alpha * r0;
    let tau_opt = (2.0 / 3.0 * a2r0 * tau_r).cbrt();
    let delta_min = 1.5 * (2.0 * a2r0 / (3.0 * tau_r * tau_r)).cbrt();
    let budget = ErrorBudget::new(
        tau_opt,
        0.0,
        leading_order_error(alpha, r0, tau_opt),
        tau_opt / tau_r,
    );
    Ok(TradeoffResult {
        tau_opt,
        delta_min,
        budget,
        method: OptimumMethod::AnalyticPowerLaw,
    })
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| match i {
            0 => lo,
            _ if i == n - 1 => hi,
            _ => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}

/// Minimizes δ_total over τ_g ∈ `bracket` (ps).
///
/// A coarse logarithmic scan locates the minimum; if it lies on either end of
/// the bracket the search fails with [`Error::NoInteriorMinimum`]. Otherwise
/// golden-section search on ln τ_g refines it to [`OPTIMUM_REL_WIDTH`].
pub fn numeric_optimum(
    family: &PulseFamily,
    spec: &ReservoirSpectrum,
    temperature: f64,
    ch: &MarkovianChannel,
    bracket: (f64, f64),
) -> Result<TradeoffResult> {
    let (lo, hi) = (
        positive("tau_lo", bracket.0)?,
        positive("tau_hi", bracket.1)?,
    );
    if lo >= hi {
        return Err(Error::InvalidParameter {
            name: "tau_hi",
            value: hi,
            reason: "bracket must satisfy tau_lo < tau_hi",
        });
    }
    let taus = log_grid(lo, hi, SCAN_POINTS);
    let scan: Vec<ErrorBudget> = taus
        .par_iter()
        .map(|&t| total_error(t, family, spec, temperature, ch))
        .collect::<Result<_>>()?;
    let best = (0..scan.len())
        .min_by(|&i, &j| scan[i].delta_total.total_cmp(&scan[j].delta_total))
        .expect("scan is non-empty");
    if best == 0 || best == scan.len() - 1 {
        return Err(Error::NoInteriorMinimum {
            lower: lo,
            upper: hi,
            at: taus[best],
        });
    }

    let objective =
        |x: f64| total_error(x.exp(), family, spec, temperature, ch).map(|b| b.delta_total);
    let (x, _) = golden_section(
        objective,
        taus[best - 1].ln(),
        taus[best + 1].ln(),
        OPTIMUM_REL_WIDTH,
    )?;
    let refined = total_error(x.exp(), family, spec, temperature, ch)?;
    let budget = if refined.delta_total <= scan[best].delta_total {
        refined
    } else {
        scan[best]
    };
    Ok(TradeoffResult {
        tau_opt: budget.tau_g,
        delta_min: budget.delta_total,
        budget,
        method: OptimumMethod::NumericScan,
    })
}

/// Budgets for every (temperature, τ_g) pair, temperatures outermost.
///
/// Points are evaluated in parallel; the output order and values do not
/// depend on scheduling.
pub fn sweep(
    model: DressingModel,
    family: &PulseFamily,
    spec: &ReservoirSpectrum,
    temperatures: &[f64],
    ch: &MarkovianChannel,
    taus: &[f64],
) -> Result<Vec<ErrorBudget>> {
    let pairs: Vec<(f64, f64)> = temperatures
        .iter()
        .flat_map(|&t| taus.iter().map(move |&tau| (t, tau)))
        .collect();
    pairs
        .par_iter()
        .map(|&(t, tau)| total_error_with(model, tau, family, spec, t, ch))
        .collect()
}
