use std::fmt;
use std::ops::Add;

use crate::Complex;

use super::fmt_complex;

/// `Q(x, y) = xx x^2 + yy y^2 + xy x y + x x + y y + constant` with complex coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QuadraticExponent {
    pub xx: Complex,
    pub yy: Complex,
    pub xy: Complex,
    pub x: Complex,
    pub y: Complex,
    pub constant: Complex,
}

impl QuadraticExponent {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Purely imaginary linear phase `i (kx x + ky y)`.
    pub fn linear_phase(kx: f64, ky: f64) -> Self {
        Self {
            x: Complex::new(0.0, kx),
            y: Complex::new(0.0, ky),
            ..Self::default()
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex {
        self.xx * (x * x)
            + self.yy * (y * y)
            + self.xy * (x * y)
            + self.x * x
            + self.y * y
            + self.constant
    }

    /// `dQ/dx` as `(constant, coefficient of x, coefficient of y)`.
    pub fn grad_x(&self) -> (Complex, Complex, Complex) {
        (self.x, self.xx * 2.0, self.xy)
    }

    pub fn grad_y(&self) -> (Complex, Complex, Complex) {
        (self.y, self.xy, self.yy * 2.0)
    }

    /// Exponent of `exp(Q(x - dx, y - dy))`.
    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        Self {
            xx: self.xx,
            yy: self.yy,
            xy: self.xy,
            x: self.x - self.xx * (2.0 * dx) - self.xy * dy,
            y: self.y - self.yy * (2.0 * dy) - self.xy * dx,
            constant: self.eval(-dx, -dy),
        }
    }

    pub fn without_constant(&self) -> Self {
        Self {
            constant: Complex::new(0.0, 0.0),
            ..*self
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coefficients()
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest componentwise distance between the non-constant coefficients.
    pub fn shape_distance(&self, other: &Self) -> f64 {
        let a = self.coefficients();
        let b = other.coefficients();
        a[..5]
            .iter()
            .zip(&b[..5])
            .map(|(p, q)| (p - q).norm())
            .fold(0.0, f64::max)
    }

    pub fn coefficients(&self) -> [Complex; 6] {
        [self.xx, self.yy, self.xy, self.x, self.y, self.constant]
    }
}

impl Add for QuadraticExponent {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self {
            xx: self.xx + o.xx,
            yy: self.yy + o.yy,
            xy: self.xy + o.xy,
            x: self.x + o.x,
            y: self.y + o.y,
            constant: self.constant + o.constant,
        }
    }
}

impl fmt::Display for QuadraticExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["xx", "yy", "xy", "x", "y", "1"];
        write!(f, "exp[")?;
        for (i, (name, c)) in names.iter().zip(self.coefficients()).enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{name}={}", fmt_complex(c))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translation_matches_pointwise() {
        let q = QuadraticExponent {
            xx: Complex::new(-0.5, 0.1),
            yy: Complex::new(-0.3, 0.0),
            xy: Complex::new(0.0, 0.7),
            x: Complex::new(0.2, -1.0),
            y: Complex::new(0.0, 0.4),
            constant: Complex::new(0.3, 0.3),
        };
        let t = q.translated(1.25, -0.5);
        for &(x, y) in &[(0.0, 0.0), (1.0, 2.0), (-3.0, 0.5)] {
            let expect = q.eval(x - 1.25, y + 0.5);
            assert!((t.eval(x, y) - expect).norm() < 1e-13);
        }
    }
}
