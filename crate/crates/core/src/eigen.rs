//! Closed-form Landau eigenfunctions in both gauges, their degeneracy ladders,
//! the resummation of a ladder into a magnetic translation, flux phases and
//! stationary superpositions.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gauge::{self, Branch, DisplacementOp, Gauge};
use crate::symbolic::{GaussianPolynomial, PolyDiffOperator, QuadraticExponent};
use crate::units::PhysicalParams;
use crate::Complex;

/// Largest Hermite degree accepted by [`hermite_coeffs`] and [`eigenfunction`].
pub const HERMITE_CAP: u32 = 200;

/// Largest ladder depth accepted by [`ladder_state`] and [`resum_displaced`].
pub const LADDER_CAP: u32 = 64;

/// Tolerance used when a [`Superposition`] validates its members.
pub const EIGEN_TOL: f64 = 1e-10;

/// Physicists' Hermite polynomial `H_n`, coefficient `k` multiplying `z^k`.
pub fn hermite_coeffs(n: u32) -> Result<Vec<f64>> {
    if n > HERMITE_CAP {
        return Err(Error::HermiteCap {
            n,
            cap: HERMITE_CAP,
        });
    }
    let mut prev: Vec<f64> = vec![];
    let mut cur = vec![1.0];
    for k in 0..n {
        // H_{k+1} = 2z H_k - 2k H_{k-1}
        let mut next = vec![0.0; cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= 2.0 * f64::from(k) * c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// One of the four eigenfunction families: a gauge plus the constant of
/// motion the family diagonalises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Family {
    pub gauge: Gauge,
    pub branch: Branch,
}

impl Family {
    pub const LANDAU_FIRST: Family = Family::new(Gauge::Landau, Branch::First);
    pub const LANDAU_SECOND: Family = Family::new(Gauge::Landau, Branch::Second);
    pub const SYMMETRIC_FIRST: Family = Family::new(Gauge::Symmetric, Branch::First);
    pub const SYMMETRIC_SECOND: Family = Family::new(Gauge::Symmetric, Branch::Second);

    pub const ALL: [Family; 4] = [
        Family::LANDAU_FIRST,
        Family::LANDAU_SECOND,
        Family::SYMMETRIC_FIRST,
        Family::SYMMETRIC_SECOND,
    ];

    pub const fn new(gauge: Gauge, branch: Branch) -> Self {
        Self { gauge, branch }
    }

    /// The invariant this family is an eigenfunction of.
    pub fn defining_invariant(&self, params: &PhysicalParams) -> PolyDiffOperator {
        let (first, second) = gauge::invariant_pair(self.gauge, params);
        match self.branch {
            Branch::First => first,
            Branch::Second => second,
        }
    }

    /// Eigenvalue of [`Family::defining_invariant`]: `-lam` for Landau first, `+lam` otherwise.
    pub fn invariant_eigenvalue(&self, lam: f64) -> f64 {
        if *self == Family::LANDAU_FIRST {
            -lam
        } else {
            lam
        }
    }

    /// The partner invariant whose powers generate the degeneracy ladder.
    pub fn ladder_operator(&self, params: &PhysicalParams) -> PolyDiffOperator {
        let (first, second) = gauge::invariant_pair(self.gauge, params);
        match self.branch {
            Branch::First => second,
            Branch::Second => first,
        }
    }

    /// Branch of [`gauge::displacement`] generated by [`Family::ladder_operator`].
    pub fn ladder_displacement_branch(&self) -> Branch {
        match (self.gauge, self.branch) {
            (Gauge::Landau, b) => b,
            (Gauge::Symmetric, Branch::First) => Branch::Second,
            (Gauge::Symmetric, Branch::Second) => Branch::First,
        }
    }

    pub fn ladder_displacement(&self, lam: f64, params: &PhysicalParams) -> Result<DisplacementOp> {
        gauge::displacement(self.gauge, self.ladder_displacement_branch(), lam, params)
    }

    /// The family parameter reached by translating the `lam = 0` member with
    /// [`Family::ladder_displacement`]`(lam)`. Equal to `lam` except for the
    /// symmetric first family, where it is `-lam`.
    pub fn displaced_parameter(&self, lam: f64) -> f64 {
        if *self == Family::SYMMETRIC_FIRST {
            -lam
        } else {
            lam
        }
    }

    /// Branch of [`gauge::displacement`] generated by the defining invariant;
    /// it maps each family member to a phase multiple of itself.
    pub fn phase_displacement_branch(&self) -> Branch {
        match self.ladder_displacement_branch() {
            Branch::First => Branch::Second,
            Branch::Second => Branch::First,
        }
    }

    /// `s` in `U(mu) phi(lam) = exp(i s lam mu / (m w hbar)) phi(lam)` for the
    /// phase displacement.
    pub fn phase_sign(&self) -> f64 {
        if *self == Family::LANDAU_FIRST {
            1.0
        } else {
            -1.0
        }
    }

    pub fn name(&self) -> &'static str {
        match (self.gauge, self.branch) {
            (Gauge::Landau, Branch::First) => "landau-first",
            (Gauge::Landau, Branch::Second) => "landau-second",
            (Gauge::Symmetric, Branch::First) => "symmetric-first",
            (Gauge::Symmetric, Branch::Second) => "symmetric-second",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family '{s}'"))
    }
}

#[derive(Clone, Copy)]
enum Axis {
    X,
    Y,
}

/// `f_n(alpha v + beta)` with `v` the coordinate along `axis`.
fn oscillator(
    n: u32,
    axis: Axis,
    alpha: f64,
    beta: f64,
    params: &PhysicalParams,
) -> Result<GaussianPolynomial> {
    if n > HERMITE_CAP {
        return Err(Error::HermiteCap {
            n,
            cap: HERMITE_CAP,
        });
    }
    // H_n(alpha v + beta) as a polynomial in v, by the recurrence
    let mut prev: Vec<f64> = vec![];
    let mut cur = vec![1.0];
    for k in 0..n {
        let mut next = vec![0.0; cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += 2.0 * alpha * c;
            next[i] += 2.0 * beta * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= 2.0 * f64::from(k) * c;
        }
        prev = std::mem::replace(&mut cur, next);
    }

    let s2 = params.coupling().inverse_length().powi(2);
    let log_fact: f64 = (1..=n).map(|k| f64::from(k).ln()).sum();
    let log_norm = -0.5 * (f64::from(n) * std::f64::consts::LN_2 + log_fact)
        + 0.25 * (s2 / std::f64::consts::PI).ln();
    let norm = log_norm.exp();

    // exp(-(alpha v + beta)^2 / 2)
    let quad = Complex::new(-0.5 * alpha * alpha, 0.0);
    let lin = Complex::new(-alpha * beta, 0.0);
    let constant = Complex::new(-0.5 * beta * beta, 0.0);
    let exponent = match axis {
        Axis::X => QuadraticExponent {
            xx: quad,
            x: lin,
            constant,
            ..QuadraticExponent::zero()
        },
        Axis::Y => QuadraticExponent {
            yy: quad,
            y: lin,
            constant,
            ..QuadraticExponent::zero()
        },
    };

    let terms = cur.iter().enumerate().map(|(i, &c)| {
        let coeff = Complex::new(c * norm, 0.0);
        match axis {
            Axis::X => (i as u32, 0, coeff),
            Axis::Y => (0, i as u32, coeff),
        }
    });
    GaussianPolynomial::from_terms(exponent, terms)
}

/// The normalised oscillator `f_n(z)` as a function of `x` alone (`z = sign * s x`).
///
/// Used for parity and orthonormality checks; `s` is the inverse magnetic length.
pub fn oscillator_x(n: u32, sign: f64, params: &PhysicalParams) -> Result<GaussianPolynomial> {
    let s = params.coupling().inverse_length();
    oscillator(n, Axis::X, sign * s, 0.0, params)
}

/// Closed-form eigenfunction of `family` at level `n` and family parameter `lam`.
///
/// With `M = m w`, `s = sqrt(|M| / hbar)`:
///
/// * Landau first: `exp(-i lam x / hbar) f_n(s (y - lam / M))`
/// * Landau second: `exp(i (lam - M x) y / hbar) f_n(s (lam / M - x))`
/// * symmetric first: `exp(i (lam + M y / 2) x / hbar) f_n(s (lam / M + y))`
/// * symmetric second: `exp(i (lam - M x / 2) y / hbar) f_n(s (lam / M - x))`
pub fn eigenfunction(
    family: Family,
    n: u32,
    lam: f64,
    params: &PhysicalParams,
) -> Result<GaussianPolynomial> {
    let k = params.coupling();
    if k.m_omega == 0.0 {
        return Err(Error::ZeroCyclotron);
    }
    let m = k.m_omega;
    let h = k.hbar;
    let s = k.inverse_length();
    let center = lam / m;
    let (osc, phase) = match (family.gauge, family.branch) {
        (Gauge::Landau, Branch::First) => (
            oscillator(n, Axis::Y, s, -s * center, params)?,
            QuadraticExponent::linear_phase(-lam / h, 0.0),
        ),
        (Gauge::Landau, Branch::Second) => (
            oscillator(n, Axis::X, -s, s * center, params)?,
            QuadraticExponent {
                xy: Complex::new(0.0, -m / h),
                ..QuadraticExponent::linear_phase(0.0, lam / h)
            },
        ),
        (Gauge::Symmetric, Branch::First) => (
            oscillator(n, Axis::Y, s, s * center, params)?,
            QuadraticExponent {
                xy: Complex::new(0.0, 0.5 * m / h),
                ..QuadraticExponent::linear_phase(lam / h, 0.0)
            },
        ),
        (Gauge::Symmetric, Branch::Second) => (
            oscillator(n, Axis::X, -s, s * center, params)?,
            QuadraticExponent {
                xy: Complex::new(0.0, -0.5 * m / h),
                ..QuadraticExponent::linear_phase(0.0, lam / h)
            },
        ),
    };
    Ok(osc.mul_exp(&phase))
}

/// `j`-fold application of the family's ladder operator to its eigenfunction.
pub fn ladder_state(
    family: Family,
    n: u32,
    j: u32,
    lam: f64,
    params: &PhysicalParams,
) -> Result<GaussianPolynomial> {
    if j > LADDER_CAP {
        return Err(Error::LadderCap { j, cap: LADDER_CAP });
    }
    let op = family.ladder_operator(params);
    let mut psi = eigenfunction(family, n, lam, params)?;
    for _ in 0..j {
        psi = op.apply(&psi);
    }
    Ok(psi)
}

/// Partial sum `sum_{j <= j_max} (1/j!) (lam / (i hbar m w))^j L^j phi_n(0)`, the
/// Taylor truncation of `exp(-i lam L / (hbar m w))` on the `lam = 0` member.
pub fn resum_displaced(
    family: Family,
    n: u32,
    lam: f64,
    j_max: u32,
    params: &PhysicalParams,
) -> Result<GaussianPolynomial> {
    if j_max > LADDER_CAP {
        return Err(Error::LadderCap {
            j: j_max,
            cap: LADDER_CAP,
        });
    }
    let k = params.coupling();
    let op = family.ladder_operator(params);
    let step = Complex::new(lam, 0.0) / Complex::new(0.0, k.hbar * k.m_omega);
    let mut term = eigenfunction(family, n, 0.0, params)?;
    let mut coeff = Complex::new(1.0, 0.0);
    let mut sum = term.clone();
    for j in 1..=j_max {
        term = op.apply(&term);
        coeff = coeff * step / f64::from(j);
        sum = sum.add(&term.scale(coeff))?;
    }
    Ok(sum)
}

/// `exp(i lam1 lam2 / (m w hbar))`.
pub fn flux_phase(lam1: f64, lam2: f64, params: &PhysicalParams) -> Result<Complex> {
    let k = params.coupling();
    if k.m_omega == 0.0 {
        return Err(Error::ZeroCyclotron);
    }
    Ok(Complex::from_polar(1.0, lam1 * lam2 / (k.m_omega * k.hbar)))
}

/// Nearest integer `k` to `lam1 lam2 / (2 pi m w hbar)` when within `tol` of it.
pub fn is_flux_quantized(
    lam1: f64,
    lam2: f64,
    params: &PhysicalParams,
    tol: f64,
) -> Result<Option<i64>> {
    if !(tol > 0.0 && tol < 0.5) {
        return Err(Error::InvalidTolerance(tol));
    }
    let k = params.coupling();
    if k.m_omega == 0.0 {
        return Err(Error::ZeroCyclotron);
    }
    let ratio = lam1 * lam2 / (std::f64::consts::TAU * k.m_omega * k.hbar);
    let nearest = ratio.round();
    Ok(((ratio - nearest).abs() <= tol).then_some(nearest as i64))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionTerm {
    pub amplitude: Complex,
    pub level: u32,
    pub state: GaussianPolynomial,
}

/// Finite stationary superposition `sum a_k psi_k` of eigenstates of one gauge's Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct Superposition {
    gauge: Gauge,
    params: PhysicalParams,
    terms: Vec<SuperpositionTerm>,
}

impl Superposition {
    /// Rejects any member whose residual at its level exceeds [`EIGEN_TOL`].
    pub fn new(
        gauge: Gauge,
        params: PhysicalParams,
        terms: Vec<SuperpositionTerm>,
    ) -> Result<Self> {
        let h = gauge::hamiltonian(gauge, &params);
        for t in &terms {
            let e = Complex::new(params.landau_level(t.level), 0.0);
            let residual = h.residual(e, &t.state)?;
            if residual.is_nan() || residual > EIGEN_TOL {
                return Err(Error::NotEigenstate {
                    n: t.level,
                    residual,
                });
            }
        }
        Ok(Self {
            gauge,
            params,
            terms,
        })
    }

    pub fn gauge(&self) -> Gauge {
        self.gauge
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn terms(&self) -> &[SuperpositionTerm] {
        &self.terms
    }

    /// Multiplies each amplitude by `exp(-i E_n t / hbar)`.
    pub fn time_evolve(&self, t: f64) -> Self {
        let hbar = self.params.hbar();
        let terms = self
            .terms
            .iter()
            .map(|term| SuperpositionTerm {
                amplitude: term.amplitude
                    * Complex::from_polar(1.0, -self.params.landau_level(term.level) * t / hbar),
                level: term.level,
                state: term.state.clone(),
            })
            .collect();
        Self {
            gauge: self.gauge,
            params: self.params,
            terms,
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex {
        self.terms
            .iter()
            .map(|t| t.amplitude * t.state.eval(x, y))
            .sum()
    }
}
