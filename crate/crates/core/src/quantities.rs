//! Domain types and the fixed internal unit system.
//!
//! Every quantity inside the crate is expressed in
//!
//! | quantity          | unit            |
//! |-------------------|-----------------|
//! | time              | ps              |
//! | angular frequency | rad/ps          |
//! | energy            | meV             |
//! | length            | nm              |
//! | temperature       | K               |
//! | mass density      | meV·ps²/nm⁵     |
//!
//! Material data usually arrives in SI (kg/m³, m/s) with deformation
//! potentials in eV; [`convert_material`] moves it into the internal system.

use serde::{Deserialize, Serialize};

use crate::error::{non_negative, positive, Error, Result};

/// Reduced Planck constant, meV·ps.
pub const HBAR_MEV_PS: f64 = 0.658_211_956_9;
/// Boltzmann constant, meV/K.
pub const KB_MEV_PER_K: f64 = 0.086_173_332_62;

const JOULE_IN_MEV: f64 = 1.0 / 1.602_176_634e-22;

/// 1 eV expressed in meV.
pub const EV_IN_MEV: f64 = 1.0e3;
/// 1 m/s expressed in nm/ps.
pub const M_PER_S_IN_NM_PER_PS: f64 = 1.0e-3;
/// 1 kg/m³ expressed in meV·ps²/nm⁵ (kg = J·s²/m²).
pub const KG_PER_M3_IN_INTERNAL: f64 = JOULE_IN_MEV * 1.0e24 / 1.0e18 / 1.0e27;

/// Thermal energy kB·T in meV.
#[inline]
pub fn thermal_energy(temperature: f64) -> f64 {
    KB_MEV_PER_K * temperature
}

/// Bose–Einstein occupation of a mode with angular frequency `omega` (rad/ps)
/// at temperature `temperature` (K).
///
/// `T = 0` is handled as an exact branch and returns `0.0`.
pub fn bose_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if omega.is_nan() || omega <= 0.0 || omega.is_infinite() {
        return Err(Error::Domain(format!(
            "bose_occupation needs omega > 0 (got {omega}); pass |omega|"
        )));
    }
    non_negative("temperature", temperature)?;
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let x = HBAR_MEV_PS * omega / thermal_energy(temperature);
    Ok(1.0 / x.exp_m1())
}

/// Material constants as usually tabulated: SI density and sound speed,
/// deformation potentials in eV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiMaterial {
    /// kg/m³
    pub rho: f64,
    /// m/s
    pub c: f64,
    /// eV
    pub sigma_e: f64,
    /// eV
    pub sigma_h: f64,
}

/// Crystal parameters entering the deformation-potential coupling, in
/// internal units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    /// Mass density, meV·ps²/nm⁵.
    pub rho: f64,
    /// Longitudinal sound speed, nm/ps.
    pub c: f64,
    /// Electron deformation potential, meV.
    pub sigma_e: f64,
    /// Hole deformation potential, meV.
    pub sigma_h: f64,
}

impl MaterialParams {
    pub fn new(rho: f64, c: f64, sigma_e: f64, sigma_h: f64) -> Result<Self> {
        positive("rho", rho)?;
        positive("c", c)?;
        if !sigma_e.is_finite() || !sigma_h.is_finite() {
            return Err(Error::InvalidParameter {
                name: "sigma",
                value: if sigma_e.is_finite() {
                    sigma_h
                } else {
                    sigma_e
                },
                reason: "deformation potentials must be finite",
            });
        }
        Ok(Self {
            rho,
            c,
            sigma_e,
            sigma_h,
        })
    }

    /// GaAs: ϱ = 5370 kg/m³, c = 5110 m/s, σe = −14.6 eV, σh = −4.8 eV.
    pub fn gaas() -> Self {
        convert_material(&SiMaterial {
            rho: 5370.0,
            c: 5110.0,
            sigma_e: -14.6,
            sigma_h: -4.8,
        })
        .expect("GaAs constants are valid")
    }

    pub fn to_si(&self) -> SiMaterial {
        SiMaterial {
            rho: self.rho / KG_PER_M3_IN_INTERNAL,
            c: self.c / M_PER_S_IN_NM_PER_PS,
            sigma_e: self.sigma_e / EV_IN_MEV,
            sigma_h: self.sigma_h / EV_IN_MEV,
        }
    }
}

/// Converts tabulated SI/eV material data into internal units.
pub fn convert_material(si: &SiMaterial) -> Result<MaterialParams> {
    MaterialParams::new(
        positive("rho", si.rho)? * KG_PER_M3_IN_INTERNAL,
        positive("c", si.c)? * M_PER_S_IN_NM_PER_PS,
        si.sigma_e * EV_IN_MEV,
        si.sigma_h * EV_IN_MEV,
    )
}

/// Gaussian wavefunction widths of the confined carriers (nm).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DotGeometry {
    /// In-plane electron width.
    pub l_e: f64,
    /// In-plane hole width.
    pub l_h: f64,
    /// Width along the growth direction.
    pub l_z: f64,
}

impl DotGeometry {
    pub fn new(l_e: f64, l_h: f64, l_z: f64) -> Result<Self> {
        Ok(Self {
            l_e: positive("l_e", l_e)?,
            l_h: positive("l_h", l_h)?,
            l_z: positive("l_z", l_z)?,
        })
    }

    /// Flat dot with `l_h = 0.8 l_e` and `l_z = 0.2 l_e`.
    pub fn flat(l_e: f64) -> Result<Self> {
        Self::new(l_e, 0.8 * l_e, 0.2 * l_e)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.l_e * factor, self.l_h * factor, self.l_z * factor)
    }

    pub fn max_width(&self) -> f64 {
        self.l_e.max(self.l_h).max(self.l_z)
    }
}

/// Which route computes the pulse spectral functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum EnvelopePath {
    /// Closed-form displaced Gaussians for |F±|².
    #[default]
    GaussianAnalytic,
    /// Direct time-domain Fourier sums of the Gaussian pulse.
    GaussianNumeric,
}

/// A Gaussian rotation pulse of area `alpha` and duration `tau_g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    /// Rotation angle, rad.
    pub alpha: f64,
    /// Gate duration, ps.
    pub tau_g: f64,
    pub envelope: EnvelopePath,
}

impl PulseSpec {
    pub fn new(alpha: f64, tau_g: f64, envelope: EnvelopePath) -> Result<Self> {
        Ok(Self {
            alpha: non_negative("alpha", alpha)?,
            tau_g: positive("tau_g", tau_g)?,
            envelope,
        })
    }

    pub fn family(&self) -> PulseFamily {
        PulseFamily {
            alpha: self.alpha,
            envelope: self.envelope,
        }
    }

    /// Peak Rabi frequency ε(0) = α/(√(2π)τ_g), rad/ps.
    pub fn peak_rabi_frequency(&self) -> f64 {
        self.alpha / ((2.0 * std::f64::consts::PI).sqrt() * self.tau_g)
    }
}

/// Pulses sharing angle and envelope, parametrized by duration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseFamily {
    pub alpha: f64,
    pub envelope: EnvelopePath,
}

impl PulseFamily {
    pub fn new(alpha: f64, envelope: EnvelopePath) -> Result<Self> {
        Ok(Self {
            alpha: non_negative("alpha", alpha)?,
            envelope,
        })
    }

    pub fn at(&self, tau_g: f64) -> Result<PulseSpec> {
        PulseSpec::new(self.alpha, tau_g, self.envelope)
    }
}

/// Memoryless exponential damping at rate γ_M = 1/τ_r.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovianChannel {
    gamma_m: f64,
}

impl MarkovianChannel {
    /// Channel with characteristic time `tau_r` (ps).
    pub fn from_tau_r(tau_r: f64) -> Result<Self> {
        Ok(Self {
            gamma_m: 1.0 / positive("tau_r", tau_r)?,
        })
    }

    /// Channel with rate `gamma_m` (1/ps). Zero switches Markovian damping off.
    pub fn from_rate(gamma_m: f64) -> Result<Self> {
        Ok(Self {
            gamma_m: non_negative("gamma_m", gamma_m)?,
        })
    }

    pub fn gamma_m(&self) -> f64 {
        self.gamma_m
    }

    /// Infinite when the rate is zero.
    pub fn tau_r(&self) -> f64 {
        1.0 / self.gamma_m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn hbar_times_unit_frequency_is_0_658212_mev() {
        assert_relative_eq!(HBAR_MEV_PS * 1.0, 0.658212, max_relative = 1e-6);
    }

    #[test]
    fn zero_temperature_occupation_is_exactly_zero() {
        for omega in [1e-6, 0.3, 1.0, 50.0] {
            assert_eq!(bose_occupation(omega, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn occupation_is_one_at_ln2() {
        let t = 4.2;
        let omega = std::f64::consts::LN_2 * thermal_energy(t) / HBAR_MEV_PS;
        assert_relative_eq!(
            bose_occupation(omega, t).unwrap(),
            1.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn occupation_at_one_radps_ten_kelvin() {
        // 30-digit evaluation of 1/(exp(ħω/kBT) − 1) with the same constants.
        let oracle = 0.872_244_867_091_905;
        assert_relative_eq!(
            bose_occupation(1.0, 10.0).unwrap(),
            oracle,
            max_relative = 1e-13
        );
    }

    #[test]
    fn occupation_rejects_non_positive_frequency() {
        assert!(matches!(bose_occupation(0.0, 10.0), Err(Error::Domain(_))));
        assert!(matches!(bose_occupation(-1.0, 10.0), Err(Error::Domain(_))));
        assert!(bose_occupation(1.0, -1.0).is_err());
    }

    #[test]
    fn high_temperature_series_bound() {
        for t in [10.0, 77.0, 300.0] {
            for &x in &[1e-4, 1e-3, 0.01, 0.05, 0.099] {
                let omega = x * thermal_energy(t) / HBAR_MEV_PS;
                let n = bose_occupation(omega, t).unwrap();
                let classical = 1.0 / x;
                assert!((n - classical).abs() <= 0.5 + x / 12.0);
                // next order of the Laurent series 1/x − 1/2 + x/12
                assert!((n - (classical - 0.5 + x / 12.0)).abs() < 2e-6);
            }
        }
    }

    #[test]
    fn sound_speed_and_potential_conversion() {
        let m = convert_material(&SiMaterial {
            rho: 5370.0,
            c: 5110.0,
            sigma_e: 1.0,
            sigma_h: 0.0,
        })
        .unwrap();
        assert_relative_eq!(m.c, 5.11, max_relative = 1e-15);
        assert_relative_eq!(m.sigma_e, 1000.0, max_relative = 1e-15);
        // 1 kg/m³ = 6.241509074 meV ps²/nm⁵
        assert_relative_eq!(m.rho, 5370.0 * 6.241_509_074_460_763, max_relative = 1e-12);
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(DotGeometry::new(1.0, 0.0, 1.0).is_err());
        assert!(PulseSpec::new(-0.1, 1.0, EnvelopePath::GaussianAnalytic).is_err());
        assert!(PulseSpec::new(0.1, 0.0, EnvelopePath::GaussianAnalytic).is_err());
        assert!(MarkovianChannel::from_tau_r(0.0).is_err());
        assert!(MaterialParams::new(-1.0, 1.0, 0.0, 0.0).is_err());
        // equal potentials are allowed, they just decouple
        assert!(MaterialParams::new(1.0, 1.0, 3.0, 3.0).is_ok());
    }

    #[test]
    fn markovian_rate_and_time_are_reciprocal() {
        let ch = MarkovianChannel::from_tau_r(630.0).unwrap();
        assert!((ch.gamma_m() * ch.tau_r() - 1.0).abs() < 1e-12);
        assert!(MarkovianChannel::from_rate(0.0)
            .unwrap()
            .tau_r()
            .is_infinite());
    }

    proptest! {
        #[test]
        fn detailed_balance_of_occupation(omega in 1e-3f64..50.0, t in 0.1f64..300.0) {
            let n = bose_occupation(omega, t).unwrap();
            let boltz = (HBAR_MEV_PS * omega / thermal_energy(t)).exp();
            prop_assert!(((n + 1.0) - boltz * n).abs() <= 1e-10 * (n + 1.0));
        }

        #[test]
        fn material_round_trip(rho in 1e2f64..2e4, c in 1e2f64..2e4,
                               se in -30.0f64..30.0, sh in -30.0f64..30.0) {
            let si = SiMaterial { rho, c, sigma_e: se, sigma_h: sh };
            let back = convert_material(&si).unwrap().to_si();
            prop_assert!((back.rho / rho - 1.0).abs() < 1e-12);
            prop_assert!((back.c / c - 1.0).abs() < 1e-12);
            prop_assert!((back.sigma_e - se).abs() <= 1e-12 * se.abs());
            prop_assert!((back.sigma_h - sh).abs() <= 1e-12 * sh.abs());
        }
    }
}
