//! Gauge-specific Hamiltonians, constants of motion and magnetic translations.
//!
//! Landau gauge: `A = B(-y, 0, 0)`. Symmetric gauge: `A = (B/2)(-y, x, 0)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolic::{GaussianPolynomial, PolyDiffOperator, QuadraticExponent};
use crate::units::{Coupling, PhysicalParams};
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gauge {
    Landau,
    Symmetric,
}

impl Gauge {
    pub const ALL: [Gauge; 2] = [Gauge::Landau, Gauge::Symmetric];

    /// Vector potential divided by `B`, as `(A_x / B, A_y / B)`.
    pub fn potential_per_field(self, x: f64, y: f64) -> (f64, f64) {
        match self {
            Gauge::Landau => (-y, 0.0),
            Gauge::Symmetric => (-0.5 * y, 0.5 * x),
        }
    }
}

impl fmt::Display for Gauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gauge::Landau => "landau",
            Gauge::Symmetric => "symmetric",
        })
    }
}

impl FromStr for Gauge {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "landau" => Ok(Gauge::Landau),
            "symmetric" => Ok(Gauge::Symmetric),
            other => Err(format!("unknown gauge '{other}'")),
        }
    }
}

/// Selects one of the two constants of motion (or the family tied to it).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    First,
    Second,
}

impl Branch {
    pub const ALL: [Branch; 2] = [Branch::First, Branch::Second];
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::First => "first",
            Branch::Second => "second",
        })
    }
}

/// Kinetic momenta `(p_x - (q/c) A_x, p_y - (q/c) A_y)`.
pub fn kinetic_momenta(gauge: Gauge, k: Coupling) -> (PolyDiffOperator, PolyDiffOperator) {
    let px = PolyDiffOperator::momentum_x(k.hbar);
    let py = PolyDiffOperator::momentum_y(k.hbar);
    match gauge {
        Gauge::Landau => (px + PolyDiffOperator::y() * k.m_omega, py),
        Gauge::Symmetric => (
            px + PolyDiffOperator::y() * (0.5 * k.m_omega),
            py - PolyDiffOperator::x() * (0.5 * k.m_omega),
        ),
    }
}

pub fn hamiltonian(gauge: Gauge, params: &PhysicalParams) -> PolyDiffOperator {
    hamiltonian_for(gauge, params.coupling())
}

/// `(Pi_x^2 + Pi_y^2) / 2m` in normal form. Accepts the field-free coupling.
pub fn hamiltonian_for(gauge: Gauge, k: Coupling) -> PolyDiffOperator {
    let (pix, piy) = kinetic_momenta(gauge, k);
    (&pix * &pix + &piy * &piy) * (0.5 / k.mass)
}

pub fn invariant_pair(
    gauge: Gauge,
    params: &PhysicalParams,
) -> (PolyDiffOperator, PolyDiffOperator) {
    invariant_pair_for(gauge, params.coupling())
}

/// Landau: `(p_x, p_y + m w x)`. Symmetric: `(p_x - m w y / 2, p_y + m w x / 2)`.
pub fn invariant_pair_for(gauge: Gauge, k: Coupling) -> (PolyDiffOperator, PolyDiffOperator) {
    let px = PolyDiffOperator::momentum_x(k.hbar);
    let py = PolyDiffOperator::momentum_y(k.hbar);
    match gauge {
        Gauge::Landau => (px, py + PolyDiffOperator::x() * k.m_omega),
        Gauge::Symmetric => (
            px - PolyDiffOperator::y() * (0.5 * k.m_omega),
            py + PolyDiffOperator::x() * (0.5 * k.m_omega),
        ),
    }
}

/// The constant of motion `G` whose exponential `exp(-i lam G / (hbar m w))`
/// is `displacement(gauge, branch, lam)`.
///
/// Landau first is generated by `p_y + m w x` and Landau second by `p_x`;
/// symmetric first by `p_x - m w y / 2` and symmetric second by `p_y + m w x / 2`.
pub fn displacement_generator(
    gauge: Gauge,
    branch: Branch,
    params: &PhysicalParams,
) -> PolyDiffOperator {
    let (first, second) = invariant_pair(gauge, params);
    match (gauge, branch) {
        (Gauge::Landau, Branch::First) => second,
        (Gauge::Landau, Branch::Second) => first,
        (Gauge::Symmetric, Branch::First) => first,
        (Gauge::Symmetric, Branch::Second) => second,
    }
}

/// Magnetic translation in split form: `psi -> exp(i (kx x + ky y)) psi(x - sx, y - sy)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacementOp {
    shift: (f64, f64),
    wavevector: (f64, f64),
}

impl DisplacementOp {
    pub fn new(shift: (f64, f64), wavevector: (f64, f64)) -> Result<Self> {
        if ![shift.0, shift.1, wavevector.0, wavevector.1]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(Error::NonFinite("displacement parameters".into()));
        }
        Ok(Self { shift, wavevector })
    }

    /// Accepts only purely imaginary linear phases.
    pub fn from_exponent(shift: (f64, f64), phase: &QuadraticExponent) -> Result<Self> {
        let quadratic_free = [phase.xx, phase.yy, phase.xy]
            .iter()
            .all(|c| *c == Complex::default());
        if !quadratic_free
            || phase.x.re != 0.0
            || phase.y.re != 0.0
            || phase.constant != Complex::default()
        {
            return Err(Error::InvalidParams(
                "displacement phase must be a purely imaginary linear form".into(),
            ));
        }
        Self::new(shift, (phase.x.im, phase.y.im))
    }

    pub fn identity() -> Self {
        Self {
            shift: (0.0, 0.0),
            wavevector: (0.0, 0.0),
        }
    }

    /// Translation vector: the image is evaluated at `(x - sx, y - sy)`.
    pub fn shift(&self) -> (f64, f64) {
        self.shift
    }

    pub fn wavevector(&self) -> (f64, f64) {
        self.wavevector
    }

    pub fn phase(&self) -> QuadraticExponent {
        QuadraticExponent::linear_phase(self.wavevector.0, self.wavevector.1)
    }

    pub fn apply(&self, psi: &GaussianPolynomial) -> GaussianPolynomial {
        psi.translate(self.shift.0, self.shift.1)
            .mul_exp(&self.phase())
    }

    /// `self` after `first`, up to the constant phase picked up by commuting
    /// `self`'s phase past `first`'s shift.
    pub fn then(&self, first: &DisplacementOp) -> DisplacementOp {
        DisplacementOp {
            shift: (self.shift.0 + first.shift.0, self.shift.1 + first.shift.1),
            wavevector: (
                self.wavevector.0 + first.wavevector.0,
                self.wavevector.1 + first.wavevector.1,
            ),
        }
    }
}

/// Closed form of `exp(-i (lam / (hbar m w)) G)` with `G` from [`displacement_generator`].
///
/// The generator's translation and multiplication parts commute, so the
/// exponential factors into a translation by `lam / (m w)` along one axis and
/// a linear phase along the other.
pub fn displacement(
    gauge: Gauge,
    branch: Branch,
    lam: f64,
    params: &PhysicalParams,
) -> Result<DisplacementOp> {
    let k = params.coupling();
    if k.m_omega == 0.0 {
        return Err(Error::ZeroCyclotron);
    }
    let a = lam / k.m_omega;
    let h = k.hbar;
    let (shift, wavevector) = match (gauge, branch) {
        (Gauge::Landau, Branch::First) => ((0.0, a), (-lam / h, 0.0)),
        (Gauge::Landau, Branch::Second) => ((a, 0.0), (0.0, 0.0)),
        (Gauge::Symmetric, Branch::First) => ((a, 0.0), (0.0, 0.5 * lam / h)),
        (Gauge::Symmetric, Branch::Second) => ((0.0, a), (-0.5 * lam / h, 0.0)),
    };
    DisplacementOp::new(shift, wavevector)
}

pub fn gauge_transform_landau_to_symmetric(
    psi: &GaussianPolynomial,
    params: &PhysicalParams,
) -> GaussianPolynomial {
    gauge_transform_landau_to_symmetric_for(psi, params.coupling())
}

/// Multiplication by `exp(i m w x y / (2 hbar))`, i.e. the gauge function `chi = B x y / 2`.
pub fn gauge_transform_landau_to_symmetric_for(
    psi: &GaussianPolynomial,
    k: Coupling,
) -> GaussianPolynomial {
    let chi = QuadraticExponent {
        xy: Complex::new(0.0, 0.5 * k.m_omega / k.hbar),
        ..QuadraticExponent::zero()
    };
    psi.mul_exp(&chi)
}

/// Central value of `[first, second]` for the invariant pair: `-i hbar m w`.
pub fn invariant_commutator_value(params: &PhysicalParams) -> Complex {
    let k = params.coupling();
    Complex::new(0.0, -k.hbar * k.m_omega)
}
