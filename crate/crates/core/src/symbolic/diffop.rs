use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::Complex;

use super::{binomial, falling, fmt_complex, GaussianPolynomial};

/// Exponents of one normal-ordered term `x^xpow y^ypow dx^dxpow dy^dypow`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpTerm {
    pub xpow: u32,
    pub ypow: u32,
    pub dxpow: u32,
    pub dypow: u32,
}

impl OpTerm {
    pub const IDENTITY: Self = Self::new(0, 0, 0, 0);

    pub const fn new(xpow: u32, ypow: u32, dxpow: u32, dypow: u32) -> Self {
        Self {
            xpow,
            ypow,
            dxpow,
            dypow,
        }
    }
}

/// Differential operator with polynomial coefficients, kept in normal order:
/// multiplications to the left of derivatives, equal terms merged, zeros dropped.
///
/// Two operators are equal iff their normal forms are.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PolyDiffOperator {
    terms: BTreeMap<OpTerm, Complex>,
}

impl PolyDiffOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::scalar(Complex::new(1.0, 0.0))
    }

    pub fn scalar(c: Complex) -> Self {
        Self::term(c, OpTerm::IDENTITY)
    }

    pub fn term(c: Complex, t: OpTerm) -> Self {
        let mut op = Self::zero();
        op.accumulate(t, c);
        op
    }

    pub fn from_terms<I: IntoIterator<Item = (Complex, OpTerm)>>(terms: I) -> Self {
        let mut op = Self::zero();
        for (c, t) in terms {
            op.accumulate(t, c);
        }
        op
    }

    pub fn x() -> Self {
        Self::term(Complex::new(1.0, 0.0), OpTerm::new(1, 0, 0, 0))
    }

    pub fn y() -> Self {
        Self::term(Complex::new(1.0, 0.0), OpTerm::new(0, 1, 0, 0))
    }

    pub fn dx() -> Self {
        Self::term(Complex::new(1.0, 0.0), OpTerm::new(0, 0, 1, 0))
    }

    pub fn dy() -> Self {
        Self::term(Complex::new(1.0, 0.0), OpTerm::new(0, 0, 0, 1))
    }

    /// `-i hbar d/dx`.
    pub fn momentum_x(hbar: f64) -> Self {
        Self::dx() * Complex::new(0.0, -hbar)
    }

    /// `-i hbar d/dy`.
    pub fn momentum_y(hbar: f64) -> Self {
        Self::dy() * Complex::new(0.0, -hbar)
    }

    fn accumulate(&mut self, t: OpTerm, c: Complex) {
        if c == Complex::new(0.0, 0.0) {
            return;
        }
        let slot = self.terms.entry(t).or_insert(Complex::new(0.0, 0.0));
        *slot += c;
        if *slot == Complex::new(0.0, 0.0) {
            self.terms.remove(&t);
        }
    }

    /// Terms in lexicographic `(xpow, ypow, dxpow, dypow)` order.
    pub fn terms(&self) -> impl Iterator<Item = (OpTerm, Complex)> + '_ {
        self.terms.iter().map(|(t, c)| (*t, *c))
    }

    pub fn coeff(&self, t: OpTerm) -> Complex {
        self.terms.get(&t).copied().unwrap_or_default()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient modulus; 0 for the zero operator.
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// True when every coefficient has modulus at most `tol`.
    pub fn is_negligible(&self, tol: f64) -> bool {
        self.max_coeff() <= tol
    }

    /// Largest derivative order along either axis.
    pub fn max_derivative_order(&self) -> u32 {
        self.terms
            .keys()
            .map(|t| t.dxpow.max(t.dypow))
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self::from_terms(self.terms.iter().map(|(t, v)| (v * c, *t)))
    }

    /// Normal form of `self . other`, using `d^p x^c = sum_k C(p,k) c!/(c-k)! x^(c-k) d^(p-k)`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (l, &cl) in &self.terms {
            for (r, &cr) in &other.terms {
                for k in 0..=l.dxpow.min(r.xpow) {
                    let wx = binomial(l.dxpow, k) * falling(r.xpow, k);
                    for m in 0..=l.dypow.min(r.ypow) {
                        let wy = binomial(l.dypow, m) * falling(r.ypow, m);
                        let t = OpTerm::new(
                            l.xpow + r.xpow - k,
                            l.ypow + r.ypow - m,
                            l.dxpow - k + r.dxpow,
                            l.dypow - m + r.dypow,
                        );
                        out.accumulate(t, cl * cr * (wx * wy));
                    }
                }
            }
        }
        out
    }

    /// `[self, other] = self other - other self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &self.compose(other) - &other.compose(self)
    }

    /// Exact action on a Gaussian-polynomial function.
    pub fn apply(&self, psi: &GaussianPolynomial) -> GaussianPolynomial {
        let mut derivs: BTreeMap<(u32, u32), GaussianPolynomial> = BTreeMap::new();
        let mut out = GaussianPolynomial::zero().mul_exp(psi.exponent());
        for (t, &c) in &self.terms {
            let d = derivs
                .entry((t.dxpow, t.dypow))
                .or_insert_with(|| {
                    let mut d = psi.clone();
                    for _ in 0..t.dxpow {
                        d = d.derivative_x();
                    }
                    for _ in 0..t.dypow {
                        d = d.derivative_y();
                    }
                    d
                })
                .mul_monomial(c, t.xpow, t.ypow);
            out = out.add(&d).expect("derivatives share the exponent of psi");
        }
        out
    }

    /// `|(self - e) psi|_coeff / |psi|_coeff`; zero iff `psi` is an exact eigenfunction.
    pub fn residual(&self, e: Complex, psi: &GaussianPolynomial) -> Result<f64> {
        if psi.is_zero() {
            return Err(Error::ZeroFunction);
        }
        let lhs = self.apply(psi);
        let diff = lhs
            .sub(&psi.scale(e))
            .expect("operator action keeps the exponent");
        Ok(diff.coeff_norm() / psi.coeff_norm())
    }
}

impl Add<&PolyDiffOperator> for &PolyDiffOperator {
    type Output = PolyDiffOperator;

    fn add(self, rhs: &PolyDiffOperator) -> PolyDiffOperator {
        let mut out = self.clone();
        for (t, c) in &rhs.terms {
            out.accumulate(*t, *c);
        }
        out
    }
}

impl Sub<&PolyDiffOperator> for &PolyDiffOperator {
    type Output = PolyDiffOperator;

    fn sub(self, rhs: &PolyDiffOperator) -> PolyDiffOperator {
        let mut out = self.clone();
        for (t, c) in &rhs.terms {
            out.accumulate(*t, -c);
        }
        out
    }
}

impl Add for PolyDiffOperator {
    type Output = PolyDiffOperator;

    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Sub for PolyDiffOperator {
    type Output = PolyDiffOperator;

    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl Neg for PolyDiffOperator {
    type Output = PolyDiffOperator;

    fn neg(self) -> Self {
        self.scale(Complex::new(-1.0, 0.0))
    }
}

impl Mul<Complex> for PolyDiffOperator {
    type Output = PolyDiffOperator;

    fn mul(self, c: Complex) -> Self {
        self.scale(c)
    }
}

impl Mul<f64> for PolyDiffOperator {
    type Output = PolyDiffOperator;

    fn mul(self, c: f64) -> Self {
        self.scale(Complex::new(c, 0.0))
    }
}

/// Operator composition.
impl Mul<&PolyDiffOperator> for &PolyDiffOperator {
    type Output = PolyDiffOperator;

    fn mul(self, rhs: &PolyDiffOperator) -> PolyDiffOperator {
        self.compose(rhs)
    }
}

impl fmt::Display for PolyDiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for (t, &c) in &self.terms {
            writeln!(
                f,
                "{} x^{} y^{} dx^{} dy^{}",
                fmt_complex(c),
                t.xpow,
                t.ypow,
                t.dxpow,
                t.dypow
            )?;
        }
        Ok(())
    }
}
