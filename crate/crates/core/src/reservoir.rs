//! Phonon reservoir spectral densities.
//!
//! The zero-temperature density J(ω) of longitudinal acoustic phonons coupled
//! through the deformation potential is R₀ω³G(ω): a super-ohmic power law
//! times a form-factor cutoff G set by the carrier wavefunction widths. The
//! thermal density R(ω, T) weights emission (ω > 0) by n_B + 1 and absorption
//! (ω < 0) by n_B, which makes it satisfy detailed balance by construction.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{non_negative, Result};
use crate::gauss_legendre::GaussLegendre;
use crate::quantities::{thermal_energy, DotGeometry, MaterialParams, HBAR_MEV_PS};

/// Order of the angular rule on u = cos θ ∈ [0, 1].
pub const ANGULAR_ORDER: usize = 64;

fn angular_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(ANGULAR_ORDER))
}

/// Low-frequency coefficient R₀ (ps²) of J(ω) ≈ R₀ω³:
/// (σe − σh)² / (16π² ϱ ħ c⁵).
pub fn r0_coefficient(m: &MaterialParams) -> f64 {
    let d = m.sigma_e - m.sigma_h;
    d * d / (16.0 * PI * PI * m.rho * HBAR_MEV_PS * m.c.powi(5))
}

/// Squared coupling anisotropy at wavevector `k` and direction cosine `u`.
#[inline]
fn coupling_profile(k: f64, u: f64, m: &MaterialParams, g: &DotGeometry) -> f64 {
    let k2 = 0.25 * k * k;
    let along = u * u * g.l_z * g.l_z;
    let perp = 1.0 - u * u;
    let fe = (-k2 * (perp * g.l_e * g.l_e + along)).exp();
    let fh = (-k2 * (perp * g.l_h * g.l_h + along)).exp();
    let amp = m.sigma_e * fe - m.sigma_h * fh;
    amp * amp
}

/// Form-factor cutoff G(ω) = J(ω)/(R₀ω³), the angular average of the
/// squared electron–hole coupling normalized to its k = 0 value.
///
/// Returns 1 at ω = 0. When σe = σh the normalization vanishes and the
/// result is 0 for every ω > 0.
pub fn cutoff_function(omega: f64, m: &MaterialParams, g: &DotGeometry) -> f64 {
    let omega = omega.abs();
    if omega == 0.0 {
        return 1.0;
    }
    let norm = (m.sigma_e - m.sigma_h).powi(2);
    if norm == 0.0 {
        return 0.0;
    }
    let k = omega / m.c;
    angular_rule().integrate(0.0, 1.0, |u| coupling_profile(k, u, m, g)) / norm
}

/// Deformation-potential reservoir of a Gaussian-confined dot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DotReservoir {
    pub r0: f64,
    pub material: MaterialParams,
    pub geometry: DotGeometry,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReservoirSpectrum {
    /// J(ω) = R₀ω³ with no cutoff.
    PowerLaw { r0: f64 },
    /// J(ω) = R₀ω³G(ω).
    QuantumDot(DotReservoir),
}

impl ReservoirSpectrum {
    pub fn power_law(r0: f64) -> Result<Self> {
        Ok(Self::PowerLaw {
            r0: non_negative("r0", r0)?,
        })
    }

    /// Dot reservoir whose R₀ follows from the material constants.
    pub fn quantum_dot(material: MaterialParams, geometry: DotGeometry) -> Self {
        Self::QuantumDot(DotReservoir {
            r0: r0_coefficient(&material),
            material,
            geometry,
        })
    }

    /// Replaces R₀ while keeping the cutoff shape.
    pub fn with_r0(self, r0: f64) -> Result<Self> {
        let r0 = non_negative("r0", r0)?;
        Ok(match self {
            Self::PowerLaw { .. } => Self::PowerLaw { r0 },
            Self::QuantumDot(d) => Self::QuantumDot(DotReservoir { r0, ..d }),
        })
    }

    pub fn r0(&self) -> f64 {
        match self {
            Self::PowerLaw { r0 } => *r0,
            Self::QuantumDot(d) => d.r0,
        }
    }

    /// Frequencies (rad/ps) where the spectrum changes character; used to seed
    /// quadrature panels. Empty for a pure power law.
    pub fn characteristic_frequencies(&self) -> Vec<f64> {
        match self {
            Self::PowerLaw { .. } => Vec::new(),
            Self::QuantumDot(d) => {
                let g = &d.geometry;
                let mut out: Vec<f64> = [g.l_e, g.l_h, g.l_z]
                    .iter()
                    .map(|l| d.material.c / l)
                    .collect();
                out.sort_by(f64::total_cmp);
                out.dedup();
                out
            }
        }
    }

    /// Zero-temperature density J(ω) (rad/ps) for ω ≥ 0; uses |ω| otherwise.
    pub fn zero_temperature(&self, omega: f64) -> f64 {
        let omega = omega.abs();
        match self {
            Self::PowerLaw { r0 } => r0 * omega.powi(3),
            Self::QuantumDot(d) => {
                d.r0 * omega.powi(3) * cutoff_function(omega, &d.material, &d.geometry)
            }
        }
    }

    /// Thermal density R(ω, T) (rad/ps) at signed frequency ω.
    pub fn thermal(&self, omega: f64, temperature: f64) -> Result<f64> {
        non_negative("temperature", temperature)?;
        Ok(self.thermal_unchecked(omega, temperature))
    }

    /// [`ReservoirSpectrum::thermal`] for a temperature already known to be
    /// finite and non-negative.
    pub(crate) fn thermal_unchecked(&self, omega: f64, temperature: f64) -> f64 {
        if omega == 0.0 || (omega < 0.0 && temperature == 0.0) {
            return 0.0;
        }
        let j = self.zero_temperature(omega);
        let n = if temperature == 0.0 {
            0.0
        } else {
            let x = HBAR_MEV_PS * omega.abs() / thermal_energy(temperature);
            1.0 / x.exp_m1()
        };
        if omega > 0.0 {
            (n + 1.0) * j
        } else {
            n * j
        }
    }

    /// lim_{ω→0} R(ω, T)/ω² = R₀·kBT/ħ (zero at T = 0).
    pub fn thermal_over_omega_sq_at_zero(&self, temperature: f64) -> f64 {
        self.r0() * thermal_energy(temperature) / HBAR_MEV_PS
    }
}

/// J(ω) for ω ≥ 0.
pub fn spectral_density_zero_t(omega: f64, spec: &ReservoirSpectrum) -> Result<f64> {
    non_negative("omega", omega)?;
    Ok(spec.zero_temperature(omega))
}

/// R(ω, T) at signed ω.
pub fn thermal_spectral_density(
    omega: f64,
    temperature: f64,
    spec: &ReservoirSpectrum,
) -> Result<f64> {
    spec.thermal(omega, temperature)
}

/// c / max(l_e, l_h, l_z): below this the dot spectrum is a pure power law.
pub fn cutoff_scale(m: &MaterialParams, g: &DotGeometry) -> f64 {
    m.c / g.max_width()
}
