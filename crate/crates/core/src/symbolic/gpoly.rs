use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::Complex;

use super::{binomial, fmt_complex, QuadraticExponent};

/// A closed-form function `P(x, y) * exp(Q(x, y))`.
///
/// `P` is a sparse table from monomial degrees `(a, b)` (meaning `x^a y^b`)
/// to complex coefficients. Exact zeros are never stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GaussianPolynomial {
    exponent: QuadraticExponent,
    poly: BTreeMap<(u32, u32), Complex>,
}

fn accumulate(poly: &mut BTreeMap<(u32, u32), Complex>, key: (u32, u32), c: Complex) {
    if c == Complex::new(0.0, 0.0) {
        return;
    }
    let slot = poly.entry(key).or_insert(Complex::new(0.0, 0.0));
    *slot += c;
    if *slot == Complex::new(0.0, 0.0) {
        poly.remove(&key);
    }
}

impl GaussianPolynomial {
    /// The zero function.
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex) -> Self {
        Self::monomial(c, 0, 0)
    }

    /// `c x^a y^b`.
    pub fn monomial(c: Complex, a: u32, b: u32) -> Self {
        let mut poly = BTreeMap::new();
        accumulate(&mut poly, (a, b), c);
        Self {
            exponent: QuadraticExponent::zero(),
            poly,
        }
    }

    /// `exp(Q)`.
    pub fn exp(exponent: QuadraticExponent) -> Self {
        Self::constant(Complex::new(1.0, 0.0)).mul_exp(&exponent)
    }

    /// Builds from an exponent and `(a, b, coefficient)` triples; repeated
    /// monomials are summed. Rejects non-finite input.
    pub fn from_terms<I>(exponent: QuadraticExponent, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32, Complex)>,
    {
        if !exponent.is_finite() {
            return Err(Error::NonFinite("exponent coefficient".into()));
        }
        let mut poly = BTreeMap::new();
        for (a, b, c) in terms {
            if !c.is_finite() {
                return Err(Error::NonFinite(format!("coefficient of x^{a} y^{b}")));
            }
            accumulate(&mut poly, (a, b), c);
        }
        Ok(Self { exponent, poly })
    }

    pub fn exponent(&self) -> &QuadraticExponent {
        &self.exponent
    }

    /// Monomials in ascending `(a, b)` order.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), Complex)> + '_ {
        self.poly.iter().map(|(k, v)| (*k, *v))
    }

    pub fn coeff(&self, a: u32, b: u32) -> Complex {
        self.poly.get(&(a, b)).copied().unwrap_or_default()
    }

    pub fn num_terms(&self) -> usize {
        self.poly.len()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.exponent.is_finite() && self.poly.values().all(|c| c.is_finite())
    }

    /// Euclidean norm over all polynomial coefficients.
    pub fn coeff_norm(&self) -> f64 {
        self.poly.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn degree_x(&self) -> u32 {
        self.poly.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> u32 {
        self.poly.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn scale(&self, c: Complex) -> Self {
        let mut poly = BTreeMap::new();
        for (k, v) in &self.poly {
            accumulate(&mut poly, *k, v * c);
        }
        Self {
            exponent: self.exponent,
            poly,
        }
    }

    /// Sum of two functions sharing the same exponent.
    ///
    /// The non-constant parts of the exponents must agree exactly; differing
    /// constants are folded into the polynomial of `other`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.exponent.without_constant() != other.exponent.without_constant() {
            return Err(Error::ExponentMismatch);
        }
        let ratio = (other.exponent.constant - self.exponent.constant).exp();
        let mut poly = self.poly.clone();
        for (k, v) in &other.poly {
            accumulate(&mut poly, *k, v * ratio);
        }
        Ok(Self {
            exponent: self.exponent,
            poly,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex::new(-1.0, 0.0)))
    }

    /// Multiplication by `c x^a y^b`.
    pub fn mul_monomial(&self, c: Complex, a: u32, b: u32) -> Self {
        let mut poly = BTreeMap::new();
        for (k, v) in &self.poly {
            accumulate(&mut poly, (k.0 + a, k.1 + b), v * c);
        }
        Self {
            exponent: self.exponent,
            poly,
        }
    }

    /// Multiplication by `exp(q)`: exponents add, the polynomial is untouched.
    pub fn mul_exp(&self, q: &QuadraticExponent) -> Self {
        Self {
            exponent: self.exponent + *q,
            poly: self.poly.clone(),
        }
    }

    /// Folds `exp(constant)` into the polynomial so the exponent has no constant term.
    pub fn absorb_constant(&self) -> Self {
        let factor = self.exponent.constant.exp();
        let mut out = self.scale(factor);
        out.exponent = self.exponent.without_constant();
        out
    }

    fn derivative(&self, axis: Axis) -> Self {
        let (g0, gx, gy) = match axis {
            Axis::X => self.exponent.grad_x(),
            Axis::Y => self.exponent.grad_y(),
        };
        let mut poly = BTreeMap::new();
        for (&(a, b), &c) in &self.poly {
            match axis {
                Axis::X if a > 0 => accumulate(&mut poly, (a - 1, b), c * f64::from(a)),
                Axis::Y if b > 0 => accumulate(&mut poly, (a, b - 1), c * f64::from(b)),
                _ => {}
            }
            accumulate(&mut poly, (a, b), c * g0);
            accumulate(&mut poly, (a + 1, b), c * gx);
            accumulate(&mut poly, (a, b + 1), c * gy);
        }
        Self {
            exponent: self.exponent,
            poly,
        }
    }

    /// `d/dx` by the product and chain rules.
    pub fn derivative_x(&self) -> Self {
        self.derivative(Axis::X)
    }

    pub fn derivative_y(&self) -> Self {
        self.derivative(Axis::Y)
    }

    /// `psi(x - dx, y - dy)`.
    pub fn translate(&self, dx: f64, dy: f64) -> Self {
        let mut poly = BTreeMap::new();
        for (&(a, b), &c) in &self.poly {
            for i in 0..=a {
                let cx = binomial(a, i) * (-dx).powi((a - i) as i32);
                if cx == 0.0 {
                    continue;
                }
                for k in 0..=b {
                    let cy = binomial(b, k) * (-dy).powi((b - k) as i32);
                    accumulate(&mut poly, (i, k), c * (cx * cy));
                }
            }
        }
        Self {
            exponent: self.exponent.translated(dx, dy),
            poly,
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex {
        self.eval_poly(x, y) * self.exponent.eval(x, y).exp()
    }

    /// `P(x, y)` alone.
    pub fn eval_poly(&self, x: f64, y: f64) -> Complex {
        let xs = powers(x, self.degree_x());
        let ys = powers(y, self.degree_y());
        self.poly
            .iter()
            .map(|(&(a, b), &c)| c * (xs[a as usize] * ys[b as usize]))
            .sum()
    }

    /// Returns `c` with `self = c * other` when the non-constant exponents
    /// agree within `tol` and the polynomials are proportional within
    /// `tol * |self|_coeff`; `None` otherwise.
    pub fn multiple_of(&self, other: &Self, tol: f64) -> Result<Option<Complex>> {
        if other.is_zero() {
            return Err(Error::ZeroFunction);
        }
        if self.is_zero() {
            return Ok(Some(Complex::new(0.0, 0.0)));
        }
        let scale = self
            .exponent
            .coefficients()
            .iter()
            .take(5)
            .map(|c| c.norm())
            .fold(1.0, f64::max);
        if self.exponent.shape_distance(&other.exponent) > tol * scale {
            return Ok(None);
        }
        let ratio = (other.exponent.constant - self.exponent.constant).exp();
        let mut cross = Complex::new(0.0, 0.0);
        let mut other_sq = 0.0;
        for (k, v) in &other.poly {
            let w = v * ratio;
            cross += w.conj() * self.coeff(k.0, k.1);
            other_sq += w.norm_sqr();
        }
        let c = cross / other_sq;
        let resid: f64 = self
            .union_keys(other)
            .iter()
            .map(|k| (self.coeff(k.0, k.1) - c * ratio * other.coeff(k.0, k.1)).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if resid <= tol * self.coeff_norm() {
            Ok(Some(c))
        } else {
            Ok(None)
        }
    }

    /// `|self - other|_coeff / |self|_coeff` once both are written over the
    /// same exponent, or `None` when the non-constant exponents differ.
    pub fn relative_distance(&self, other: &Self) -> Result<Option<f64>> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        if self.exponent.shape_distance(&other.exponent) > 0.0 {
            return Ok(None);
        }
        let ratio = (other.exponent.constant - self.exponent.constant).exp();
        let diff: f64 = self
            .union_keys(other)
            .iter()
            .map(|k| (self.coeff(k.0, k.1) - ratio * other.coeff(k.0, k.1)).norm_sqr())
            .sum();
        Ok(Some(diff.sqrt() / self.coeff_norm()))
    }

    /// Relative mismatch that is zero iff the two functions coincide: the
    /// larger of the exponent shape difference and the coefficient distance
    /// after folding the constant exponent terms together.
    pub fn mismatch(&self, other: &Self) -> Result<f64> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        let scale = self
            .exponent
            .coefficients()
            .iter()
            .take(5)
            .map(|c| c.norm())
            .fold(1.0, f64::max);
        let shape = self.exponent.shape_distance(&other.exponent) / scale;
        let ratio = (other.exponent.constant - self.exponent.constant).exp();
        let diff: f64 = self
            .union_keys(other)
            .iter()
            .map(|k| (self.coeff(k.0, k.1) - ratio * other.coeff(k.0, k.1)).norm_sqr())
            .sum();
        Ok(shape.max(diff.sqrt() / self.coeff_norm()))
    }
}

impl GaussianPolynomial {
    fn union_keys(&self, other: &Self) -> Vec<(u32, u32)> {
        let mut keys: Vec<_> = self.poly.keys().chain(other.poly.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys
    }
}

#[derive(Clone, Copy)]
enum Axis {
    X,
    Y,
}

fn powers(v: f64, n: u32) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = 1.0;
    for _ in 0..=n {
        out.push(acc);
        acc *= v;
    }
    out
}

impl fmt::Display for GaussianPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.exponent)?;
        if self.poly.is_empty() {
            return writeln!(f, "  0");
        }
        for (&(a, b), &c) in &self.poly {
            writeln!(f, "  x^{a} y^{b}: {}", fmt_complex(c))?;
        }
        Ok(())
    }
}
