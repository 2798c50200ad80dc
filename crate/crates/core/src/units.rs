//! Physical parameters (CGS) and the scales derived from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mass, charge, field strength and fundamental constants in CGS units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    mass: f64,
    charge: f64,
    field: f64,
    light_speed: f64,
    hbar: f64,
}

impl Default for PhysicalParams {
    /// Natural units: `m = q = B = c = hbar = 1`, hence `omega_c = 1`.
    fn default() -> Self {
        Self {
            mass: 1.0,
            charge: 1.0,
            field: 1.0,
            light_speed: 1.0,
            hbar: 1.0,
        }
    }
}

impl PhysicalParams {
    pub fn new(mass: f64, charge: f64, field: f64, light_speed: f64, hbar: f64) -> Result<Self> {
        let all = [mass, charge, field, light_speed, hbar];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("all parameters must be finite".into()));
        }
        if mass <= 0.0 || light_speed <= 0.0 || hbar <= 0.0 {
            return Err(Error::InvalidParams(
                "m, c and hbar must be positive".into(),
            ));
        }
        if field == 0.0 || charge == 0.0 {
            return Err(Error::InvalidParams("B and q must be non-zero".into()));
        }
        Ok(Self {
            mass,
            charge,
            field,
            light_speed,
            hbar,
        })
    }

    pub fn natural() -> Self {
        Self::default()
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }

    pub fn field(&self) -> f64 {
        self.field
    }

    pub fn light_speed(&self) -> f64 {
        self.light_speed
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Signed cyclotron frequency `qB / (mc)`.
    pub fn cyclotron_frequency(&self) -> f64 {
        self.charge * self.field / (self.mass * self.light_speed)
    }

    /// `sqrt(hbar / (m |omega_c|))`.
    pub fn magnetic_length(&self) -> f64 {
        (self.hbar / (self.mass * self.cyclotron_frequency().abs())).sqrt()
    }

    /// Landau level `hbar |omega_c| (n + 1/2)`.
    pub fn landau_level(&self, n: u32) -> f64 {
        self.hbar * self.cyclotron_frequency().abs() * (f64::from(n) + 0.5)
    }

    /// Hall resistivity `(hbar / q^2) (m omega_c l1 l2 / hbar)`.
    pub fn hall_resistivity(&self, l1: f64, l2: f64) -> f64 {
        let flux_number = self.mass * self.cyclotron_frequency() * l1 * l2 / self.hbar;
        self.hbar / (self.charge * self.charge) * flux_number
    }

    /// The coupling constants that enter operators and flows.
    pub fn coupling(&self) -> Coupling {
        Coupling {
            mass: self.mass,
            hbar: self.hbar,
            m_omega: self.mass * self.cyclotron_frequency(),
        }
    }

    pub fn profile(&self) -> ParamsProfile {
        ParamsProfile {
            m: self.mass,
            q: self.charge,
            b: self.field,
            c: self.light_speed,
            hbar: self.hbar,
        }
    }
}

/// Mass, `hbar` and the signed product `m * omega_c`.
///
/// Operators only ever see this triple. Unlike [`PhysicalParams`] it admits
/// `m_omega == 0`, the field-free limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub mass: f64,
    pub hbar: f64,
    pub m_omega: f64,
}

impl Coupling {
    pub fn field_free(mass: f64, hbar: f64) -> Self {
        Self {
            mass,
            hbar,
            m_omega: 0.0,
        }
    }

    /// Oscillator scale `sqrt(|m omega_c| / hbar)`, the inverse magnetic length.
    pub fn inverse_length(&self) -> f64 {
        (self.m_omega.abs() / self.hbar).sqrt()
    }
}

/// JSON parameter profile. Absent keys default to 1.0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsProfile {
    #[serde(default = "one")]
    pub m: f64,
    #[serde(default = "one")]
    pub q: f64,
    #[serde(rename = "B", default = "one")]
    pub b: f64,
    #[serde(default = "one")]
    pub c: f64,
    #[serde(default = "one")]
    pub hbar: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for ParamsProfile {
    fn default() -> Self {
        PhysicalParams::natural().profile()
    }
}

impl TryFrom<ParamsProfile> for PhysicalParams {
    type Error = Error;

    fn try_from(p: ParamsProfile) -> Result<Self> {
        PhysicalParams::new(p.m, p.q, p.b, p.c, p.hbar)
    }
}
