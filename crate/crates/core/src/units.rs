//! Physical constants, field-to-frequency formulas and conversion from the
//! dimensionless `ħω_z` energy unit to SI.

use serde::Serialize;

use crate::error::{Error, Result};

/// CODATA 2018 values in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    /// Reduced Planck constant (J·s).
    pub hbar: f64,
    /// Elementary charge (C).
    pub e_charge: f64,
    /// Electron rest mass (kg).
    pub m_e: f64,
    /// Speed of light in vacuum (m/s).
    pub c: f64,
}

impl PhysicalConstants {
    pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
        hbar: 1.054_571_817e-34,
        e_charge: 1.602_176_634e-19,
        m_e: 9.109_383_701_5e-31,
        c: 299_792_458.0,
    };

    /// Planck constant `h = 2πħ` (J·s).
    pub fn planck(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.hbar
    }

    /// Magnetic flux quantum `h/e` (Wb).
    pub fn flux_quantum(&self) -> f64 {
        self.planck() / self.e_charge
    }

    /// Electron rest energy `m_e c²` (J).
    pub fn rest_energy(&self) -> f64 {
        self.m_e * self.c * self.c
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

/// How the axial (z) oscillation frequency is specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxialSource {
    /// Electric-field gradient `k` (V/m²); `ω_z = √(e k / m_e)`.
    FieldGradient(f64),
    /// Angular frequency given directly (rad/s).
    AngularFrequency(f64),
}

/// Laboratory parameters of the field configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhysicalConfig {
    /// Magnetic field strength `B0` (T).
    pub b_tesla: f64,
    pub axial: AxialSource,
    /// Sample area (m²), only needed for the Landau degeneracy.
    pub area: Option<f64>,
    pub constants: PhysicalConstants,
}

impl PhysicalConfig {
    /// Builds a config from the optional gradient/frequency pair; exactly one
    /// of `k_grad` and `omega_z` must be set.
    pub fn new(b_tesla: f64, k_grad: Option<f64>, omega_z: Option<f64>, area: Option<f64>) -> Result<Self> {
        let axial = match (k_grad, omega_z) {
            (Some(k), None) => AxialSource::FieldGradient(k),
            (None, Some(w)) => AxialSource::AngularFrequency(w),
            (Some(_), Some(_)) => {
                return Err(Error::InvalidConfig(
                    "set only one of the field gradient and the axial frequency".into(),
                ))
            }
            (None, None) => {
                return Err(Error::InvalidConfig(
                    "one of the field gradient or the axial frequency is required".into(),
                ))
            }
        };
        let cfg = PhysicalConfig {
            b_tesla,
            axial,
            area,
            constants: PhysicalConstants::CODATA_2018,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Config whose axial frequency equals the cyclotron frequency at `b_tesla`.
    pub fn with_axial_from_field(b_tesla: f64, area: Option<f64>) -> Result<Self> {
        let probe = PhysicalConfig {
            b_tesla,
            axial: AxialSource::AngularFrequency(1.0),
            area,
            constants: PhysicalConstants::CODATA_2018,
        };
        let wc = cyclotron_frequency(&probe)?;
        Self::new(b_tesla, None, Some(wc), area)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b_tesla.is_finite() && self.b_tesla > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "magnetic field must be positive, got {}",
                self.b_tesla
            )));
        }
        let (what, v) = match self.axial {
            AxialSource::FieldGradient(k) => ("field gradient", k),
            AxialSource::AngularFrequency(w) => ("axial frequency", w),
        };
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidConfig(format!("{what} must be positive, got {v}")));
        }
        if let Some(a) = self.area {
            if !(a.is_finite() && a >= 0.0) {
                return Err(Error::InvalidConfig(format!("area must be non-negative, got {a}")));
            }
        }
        Ok(())
    }
}

/// `ω_c = e B0 / m_e` (rad/s).
pub fn cyclotron_frequency(cfg: &PhysicalConfig) -> Result<f64> {
    if !(cfg.b_tesla.is_finite() && cfg.b_tesla > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "magnetic field must be positive, got {}",
            cfg.b_tesla
        )));
    }
    let k = &cfg.constants;
    Ok(k.e_charge * cfg.b_tesla / k.m_e)
}

/// `ω_z = √(e k / m_e)`, or the configured frequency verbatim (rad/s).
pub fn axial_frequency(cfg: &PhysicalConfig) -> Result<f64> {
    match cfg.axial {
        AxialSource::FieldGradient(k) if k.is_finite() && k > 0.0 => {
            Ok((cfg.constants.e_charge * k / cfg.constants.m_e).sqrt())
        }
        AxialSource::AngularFrequency(w) if w.is_finite() && w > 0.0 => Ok(w),
        other => Err(Error::InvalidConfig(format!(
            "axial specification must be positive, got {other:?}"
        ))),
    }
}

/// Field gradient `k` (V/m²) producing axial frequency `omega_z`.
pub fn gradient_for_axial_frequency(omega_z: f64, constants: &PhysicalConstants) -> f64 {
    constants.m_e * omega_z * omega_z / constants.e_charge
}

/// Relativistic smallness `ε = ħω_z / (m_e c²)`.
pub fn epsilon(cfg: &PhysicalConfig) -> Result<f64> {
    let wz = axial_frequency(cfg)?;
    Ok(epsilon_for_axial_frequency(wz, &cfg.constants))
}

pub fn epsilon_for_axial_frequency(omega_z: f64, constants: &PhysicalConstants) -> f64 {
    constants.hbar * omega_z / constants.rest_energy()
}

/// Frequency ratio `w = ω_c / ω_z` implied by the config.
pub fn frequency_ratio(cfg: &PhysicalConfig) -> Result<f64> {
    Ok(cyclotron_frequency(cfg)? / axial_frequency(cfg)?)
}

/// Landau degeneracy `D = B0·A / (h/e)` as a real number.
pub fn landau_degeneracy(cfg: &PhysicalConfig) -> Result<f64> {
    let area = cfg
        .area
        .ok_or_else(|| Error::InvalidConfig("sample area is required for the Landau degeneracy".into()))?;
    if !(area.is_finite() && area >= 0.0) {
        return Err(Error::InvalidConfig(format!("area must be non-negative, got {area}")));
    }
    cyclotron_frequency(cfg)?;
    Ok(cfg.b_tesla * area / cfg.constants.flux_quantum())
}

/// Guiding-centre position `x0 = -ħ k_y / (e B0)` (m).
pub fn guiding_center(k_y: f64, cfg: &PhysicalConfig) -> Result<f64> {
    cyclotron_frequency(cfg)?;
    let k = &cfg.constants;
    Ok(-k.hbar * k_y / (k.e_charge * cfg.b_tesla))
}

/// Converts an energy in units of `ħω_z` to meV.
pub fn to_si_energy(value: f64, cfg: &PhysicalConfig) -> Result<f64> {
    let wz = axial_frequency(cfg)?;
    Ok(joules_to_mev(value * cfg.constants.hbar * wz, &cfg.constants))
}

pub fn joules_to_mev(joules: f64, constants: &PhysicalConstants) -> f64 {
    joules / constants.e_charge * 1e3
}
