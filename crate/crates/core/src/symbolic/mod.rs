//! Exact calculus on `P(x, y) * exp(Q(x, y))` and on polynomial-coefficient
//! differential operators in two variables.

mod diffop;
mod exponent;
mod gpoly;

pub use diffop::{OpTerm, PolyDiffOperator};
pub use exponent::QuadraticExponent;
pub use gpoly::GaussianPolynomial;

use crate::Complex;

/// Formats a complex coefficient deterministically with shortest round-trip
/// reals. Negative zero is folded into positive zero.
pub(crate) fn fmt_complex(c: Complex) -> String {
    let re = c.re + 0.0;
    let im = c.im + 0.0;
    format!("({re:?}, {im:?})")
}

pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * f64::from(n - i) / f64::from(i + 1);
    }
    acc.round()
}

/// `n (n-1) ... (n-k+1)`.
pub(crate) fn falling(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i))
}
