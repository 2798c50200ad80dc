//! Finite-difference oracle: samples closed-form states on a uniform grid and
//! checks operator relations with second-order central stencils.
//!
//! Nothing here reuses the symbolic differentiation code; operators are read
//! only for their coefficients.

use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::eigen::Family;
use crate::error::{Error, Result};
use crate::gauge::{Branch, Gauge};
use crate::symbolic::{GaussianPolynomial, PolyDiffOperator};
use crate::units::PhysicalParams;
use crate::Complex;

/// `ln(f64::MAX)`; `exp` overflows above this.
const EXP_LIMIT: f64 = 709.78;

/// Residuals below this are treated as rounding noise by [`convergence_order`].
pub const ROUNDING_FLOOR: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    nx: usize,
    ny: usize,
}

impl Grid2D {
    pub fn new(
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
        nx: usize,
        ny: usize,
    ) -> Result<Self> {
        if ![x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        if x_max <= x_min || y_max <= y_min {
            return Err(Error::InvalidGrid("empty box".into()));
        }
        if nx < 8 || ny < 8 {
            return Err(Error::InvalidGrid(format!(
                "need at least 8 nodes per axis, got {nx}x{ny}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        })
    }

    /// Square box `[-half, half]^2` with `n` nodes per axis.
    pub fn square(half_width: f64, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, -half_width, half_width, n, n)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        (self.x_min, self.x_max, self.y_min, self.y_max)
    }

    pub fn hx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i == self.nx - 1 {
            self.x_max
        } else {
            self.x_min + i as f64 * self.hx()
        }
    }

    pub fn y(&self, j: usize) -> f64 {
        if j == self.ny - 1 {
            self.y_max
        } else {
            self.y_min + j as f64 * self.hy()
        }
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Box for checking a family member with `nodes` points per axis.
///
/// Along the localised axis the box spans the oscillator centre `+- 8 l_B`;
/// along the plane-wave axis it spans `+- 2 l_B` around the origin. The
/// residual is local, and the narrow extent keeps the `x y` cross phases
/// resolved.
pub fn verification_grid(
    family: Family,
    lam: f64,
    params: &PhysicalParams,
    nodes: usize,
) -> Result<Grid2D> {
    let k = params.coupling();
    if k.m_omega == 0.0 {
        return Err(Error::ZeroCyclotron);
    }
    let lb = params.magnetic_length();
    let center = lam / k.m_omega;
    let (wide, narrow) = (8.0 * lb, 2.0 * lb);
    match (family.gauge, family.branch) {
        (Gauge::Landau, Branch::First) => {
            Grid2D::new(-narrow, narrow, center - wide, center + wide, nodes, nodes)
        }
        (Gauge::Symmetric, Branch::First) => Grid2D::new(
            -narrow,
            narrow,
            -center - wide,
            -center + wide,
            nodes,
            nodes,
        ),
        (_, Branch::Second) => {
            Grid2D::new(center - wide, center + wide, -narrow, narrow, nodes, nodes)
        }
    }
}

/// Complex samples on a [`Grid2D`], row-major with `x` fastest.
///
/// After [`fd_apply`] the outermost ring of nodes holds no valid data; it is
/// zeroed and excluded from norms and inner products.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    grid: Grid2D,
    values: Vec<Complex>,
    ring: usize,
}

impl GridField {
    pub fn new(grid: Grid2D, values: Vec<Complex>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("grid field value".into()));
        }
        Ok(Self {
            grid,
            values,
            ring: 0,
        })
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn values(&self) -> &[Complex] {
        &self.values
    }

    /// Width of the invalid boundary ring (0 or 1).
    pub fn invalid_ring(&self) -> usize {
        self.ring
    }

    pub fn at(&self, i: usize, j: usize) -> Complex {
        self.values[j * self.grid.nx + i]
    }

    fn interior(&self, ring: usize) -> impl Iterator<Item = usize> + '_ {
        let nx = self.grid.nx;
        let ny = self.grid.ny;
        (ring..ny - ring).flat_map(move |j| (ring..nx - ring).map(move |i| j * nx + i))
    }

    /// Plain Euclidean norm over valid nodes.
    pub fn norm(&self) -> f64 {
        self.interior(self.ring)
            .map(|k| self.values[k].norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `self - scale * other` on the same grid.
    pub fn axpy(&self, scale: Complex, other: &GridField) -> Result<GridField> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - scale * b)
            .collect();
        Ok(GridField {
            grid: self.grid,
            values,
            ring: self.ring.max(other.ring),
        })
    }

    /// CSV with header `x,y,re,im`, one row per node, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "x,y,re,im")?;
        for j in 0..self.grid.ny {
            for i in 0..self.grid.nx {
                let v = self.at(i, j);
                writeln!(
                    w,
                    "{:.16e},{:.16e},{:.16e},{:.16e}",
                    self.grid.x(i),
                    self.grid.y(j),
                    v.re,
                    v.im
                )?;
            }
        }
        Ok(())
    }

    /// Reads back the format of [`GridField::write_csv`]. The grid is
    /// recovered from the first and last coordinates.
    pub fn read_csv<R: BufRead>(r: R) -> Result<GridField> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Csv("empty input".into()))?
            .map_err(|e| Error::Csv(e.to_string()))?;
        if header.trim() != "x,y,re,im" {
            return Err(Error::Csv(format!("unexpected header '{header}'")));
        }
        let mut rows = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::Csv(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<f64> = line
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Csv(format!("line {}: {e}", lineno + 2)))?;
            if fields.len() != 4 {
                return Err(Error::Csv(format!(
                    "line {}: expected 4 fields",
                    lineno + 2
                )));
            }
            rows.push([fields[0], fields[1], fields[2], fields[3]]);
        }
        let first = rows
            .first()
            .ok_or_else(|| Error::Csv("no data rows".into()))?;
        let nx = rows.iter().take_while(|r| r[1] == first[1]).count();
        if nx == 0 || rows.len() % nx != 0 {
            return Err(Error::Csv("rows do not form a rectangular grid".into()));
        }
        let ny = rows.len() / nx;
        let last = rows[rows.len() - 1];
        let grid = Grid2D::new(first[0], last[0], first[1], last[1], nx, ny)?;
        let values = rows.iter().map(|r| Complex::new(r[2], r[3])).collect();
        GridField::new(grid, values)
    }
}

/// Pointwise `P(x, y) exp(Q(x, y))` at every node.
pub fn sample(psi: &GaussianPolynomial, grid: &Grid2D) -> Result<GridField> {
    let nx = grid.nx;
    let rows: Vec<Result<Vec<Complex>>> = (0..grid.ny)
        .into_par_iter()
        .map(|j| {
            let y = grid.y(j);
            (0..nx)
                .map(|i| {
                    let x = grid.x(i);
                    let q = psi.exponent().eval(x, y);
                    if q.re > EXP_LIMIT {
                        return Err(Error::Overflow { x, y });
                    }
                    let v = psi.eval_poly(x, y) * q.exp();
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(Error::Overflow { x, y })
                    }
                })
                .collect()
        })
        .collect();
    let mut values = Vec::with_capacity(grid.len());
    for row in rows {
        values.extend(row?);
    }
    GridField::new(*grid, values)
}

/// 3-point central weights for the derivative of `order` (0, 1 or 2) at offsets -1, 0, +1.
fn stencil(order: u32, h: f64) -> [f64; 3] {
    match order {
        0 => [0.0, 1.0, 0.0],
        1 => [-0.5 / h, 0.0, 0.5 / h],
        _ => [1.0 / (h * h), -2.0 / (h * h), 1.0 / (h * h)],
    }
}

/// Applies `op` with central differences (tensor-product 3x3 stencils for
/// mixed terms). Multiplicative factors are evaluated exactly at the nodes.
pub fn fd_apply(op: &PolyDiffOperator, f: &GridField) -> Result<GridField> {
    let order = op.max_derivative_order();
    if order > 2 {
        return Err(Error::StencilOrder(order));
    }
    let grid = f.grid;
    let (nx, ny) = (grid.nx, grid.ny);
    let (hx, hy) = (grid.hx(), grid.hy());
    let terms: Vec<_> = op
        .terms()
        .map(|(t, c)| (t, c, stencil(t.dxpow, hx), stencil(t.dypow, hy)))
        .collect();
    let rows: Vec<Vec<Complex>> = (0..ny)
        .into_par_iter()
        .map(|j| {
            let mut row = vec![Complex::new(0.0, 0.0); nx];
            if j == 0 || j == ny - 1 {
                return row;
            }
            let y = grid.y(j);
            for (i, slot) in row.iter_mut().enumerate().take(nx - 1).skip(1) {
                let x = grid.x(i);
                let mut acc = Complex::new(0.0, 0.0);
                for (t, c, wx, wy) in &terms {
                    let mut d = Complex::new(0.0, 0.0);
                    for (b, wyb) in wy.iter().enumerate() {
                        if *wyb == 0.0 {
                            continue;
                        }
                        for (a, wxa) in wx.iter().enumerate() {
                            if *wxa == 0.0 {
                                continue;
                            }
                            d += f.values[(j + b - 1) * nx + (i + a - 1)] * (wxa * wyb);
                        }
                    }
                    acc += c * d * (x.powi(t.xpow as i32) * y.powi(t.ypow as i32));
                }
                *slot = acc;
            }
            row
        })
        .collect();
    Ok(GridField {
        grid,
        values: rows.into_iter().flatten().collect(),
        ring: 1,
    })
}

/// `|fd(op) psi - e psi| / |psi|` over interior nodes.
pub fn residual_norm(
    op: &PolyDiffOperator,
    e: Complex,
    psi: &GaussianPolynomial,
    grid: &Grid2D,
) -> Result<f64> {
    let f = sample(psi, grid)?;
    let hf = fd_apply(op, &f)?;
    let diff = hf.axpy(e, &f)?;
    let denom = f
        .interior(1)
        .map(|k| f.values[k].norm_sqr())
        .sum::<f64>()
        .sqrt();
    if denom == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(diff.norm() / denom)
}

/// Trapezoidal `<f, g> = sum w conj(f) g` over the valid nodes.
pub fn l2_inner(f: &GridField, g: &GridField) -> Result<Complex> {
    if f.grid != g.grid {
        return Err(Error::GridMismatch);
    }
    let ring = f.ring.max(g.ring);
    let grid = f.grid;
    let (i0, i1) = (ring, grid.nx - 1 - ring);
    let (j0, j1) = (ring, grid.ny - 1 - ring);
    let cell = grid.hx() * grid.hy();
    let mut acc = Complex::new(0.0, 0.0);
    for j in j0..=j1 {
        let wy = if j == j0 || j == j1 { 0.5 } else { 1.0 };
        for i in i0..=i1 {
            let wx = if i == i0 || i == i1 { 0.5 } else { 1.0 };
            let k = j * grid.nx + i;
            acc += f.values[k].conj() * g.values[k] * (wx * wy);
        }
    }
    Ok(acc * cell)
}

/// Trapezoidal L2 distance `sqrt(<f - g, f - g>)`.
pub fn l2_distance(f: &GridField, g: &GridField) -> Result<f64> {
    let d = f.axpy(Complex::new(1.0, 0.0), g)?;
    Ok(l2_inner(&d, &d)?.re.max(0.0).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// Least-squares slope of `ln(residual)` against `ln(h)`.
    pub order: f64,
    pub spacings: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Every residual sits at the rounding floor; `order` carries no information.
    pub floor_limited: bool,
}

/// Observed order of the stencil error over a sequence of grids (at least three).
pub fn convergence_order(
    op: &PolyDiffOperator,
    e: Complex,
    psi: &GaussianPolynomial,
    grids: &[Grid2D],
) -> Result<ConvergenceReport> {
    if grids.len() < 3 {
        return Err(Error::InvalidGrid("need at least three grids".into()));
    }
    let mut spacings = Vec::with_capacity(grids.len());
    let mut residuals = Vec::with_capacity(grids.len());
    for g in grids {
        spacings.push((g.hx() * g.hy()).sqrt());
        residuals.push(residual_norm(op, e, psi, g)?);
    }
    let floor_limited = residuals.iter().all(|r| *r < ROUNDING_FLOOR);
    let order = if floor_limited {
        f64::NAN
    } else {
        let xs: Vec<f64> = spacings.iter().map(|h| h.ln()).collect();
        let ys: Vec<f64> = residuals.iter().map(|r| r.ln()).collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        sxy / sxx
    };
    Ok(ConvergenceReport {
        order,
        spacings,
        residuals,
        floor_limited,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{OpTerm, QuadraticExponent};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn grid_validation() {
        assert!(Grid2D::new(0.0, 1.0, 0.0, 1.0, 7, 8).is_err());
        assert!(Grid2D::new(1.0, 1.0, 0.0, 1.0, 8, 8).is_err());
        let g = Grid2D::new(-1.0, 1.0, 0.0, 3.0, 9, 16).unwrap();
        assert_eq!(g.hx(), 0.25);
        assert_eq!(g.hy(), 0.2);
        assert_eq!(g.x(8), 1.0);
    }

    #[test]
    fn sample_constant_and_gaussian() {
        let g = Grid2D::square(2.0, 9).unwrap();
        let ones = sample(&GaussianPolynomial::constant(c(1.0, 0.0)), &g).unwrap();
        assert!(ones.values().iter().all(|v| *v == c(1.0, 0.0)));
        let gauss = GaussianPolynomial::exp(QuadraticExponent {
            xx: c(-1.0, 0.0),
            yy: c(-1.0, 0.0),
            ..Default::default()
        });
        let f = sample(&gauss, &g).unwrap();
        assert_eq!(f.at(4, 4), c(1.0, 0.0));
    }

    #[test]
    fn sample_flags_overflow() {
        let grow = GaussianPolynomial::exp(QuadraticExponent {
            xx: c(100.0, 0.0),
            ..Default::default()
        });
        let g = Grid2D::square(5.0, 11).unwrap();
        assert!(matches!(sample(&grow, &g), Err(Error::Overflow { .. })));
    }

    #[test]
    fn central_differences_exact_on_low_degree() {
        let g = Grid2D::new(-1.0, 2.0, -1.0, 1.0, 13, 9).unwrap();
        let x = sample(&GaussianPolynomial::monomial(c(1.0, 0.0), 1, 0), &g).unwrap();
        let dx = fd_apply(&PolyDiffOperator::dx(), &x).unwrap();
        let x2 = sample(&GaussianPolynomial::monomial(c(1.0, 0.0), 2, 0), &g).unwrap();
        let d2 = PolyDiffOperator::term(c(1.0, 0.0), OpTerm::new(0, 0, 2, 0));
        let dxx = fd_apply(&d2, &x2).unwrap();
        for j in 1..8 {
            for i in 1..12 {
                assert!((dx.at(i, j) - c(1.0, 0.0)).norm() < 1e-12);
                assert!((dxx.at(i, j) - c(2.0, 0.0)).norm() < 1e-11);
            }
        }
        assert_eq!(dx.at(0, 3), c(0.0, 0.0));
        assert_eq!(dx.invalid_ring(), 1);
    }

    #[test]
    fn mixed_derivative_exact_on_xy() {
        let g = Grid2D::square(1.0, 9).unwrap();
        let f = sample(&GaussianPolynomial::monomial(c(1.0, 0.0), 1, 1), &g).unwrap();
        let dxy = PolyDiffOperator::term(c(1.0, 0.0), OpTerm::new(0, 0, 1, 1));
        let out = fd_apply(&dxy, &f).unwrap();
        assert!((out.at(3, 5) - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rejects_third_derivatives() {
        let g = Grid2D::square(1.0, 9).unwrap();
        let f = sample(&GaussianPolynomial::constant(c(1.0, 0.0)), &g).unwrap();
        let d3 = PolyDiffOperator::term(c(1.0, 0.0), OpTerm::new(0, 0, 3, 0));
        assert_eq!(fd_apply(&d3, &f), Err(Error::StencilOrder(3)));
    }

    #[test]
    fn identity_residual_is_zero() {
        let g = Grid2D::square(3.0, 16).unwrap();
        let psi = GaussianPolynomial::monomial(c(1.0, 1.0), 1, 2);
        let r = residual_norm(&PolyDiffOperator::identity(), c(1.0, 0.0), &psi, &g).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn inner_product_checks() {
        let g = Grid2D::square(1.0, 9).unwrap();
        let f = sample(&GaussianPolynomial::monomial(c(1.0, 2.0), 1, 0), &g).unwrap();
        let ff = l2_inner(&f, &f).unwrap();
        assert!(ff.re >= 0.0 && ff.im == 0.0);
        let other = Grid2D::square(2.0, 9).unwrap();
        let h = sample(&GaussianPolynomial::constant(c(1.0, 0.0)), &other).unwrap();
        assert_eq!(l2_inner(&f, &h), Err(Error::GridMismatch));
        // trapezoid integrates constants exactly: area 4
        let one = sample(&GaussianPolynomial::constant(c(1.0, 0.0)), &g).unwrap();
        assert!((l2_inner(&one, &one).unwrap() - c(4.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let g = Grid2D::new(-1.3, 2.1, -0.7, 0.9, 8, 9).unwrap();
        let psi = GaussianPolynomial::exp(QuadraticExponent {
            xx: c(-0.3, 0.1),
            xy: c(0.0, 0.77),
            ..Default::default()
        })
        .mul_monomial(c(1.0 / 3.0, -2.0 / 7.0), 1, 2);
        let f = sample(&psi, &g).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x,y,re,im\n"));
        let back = GridField::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.values(), f.values());
        assert_eq!(back.grid().nx(), 8);
        assert_eq!(back.grid().ny(), 9);
    }

    #[test]
    fn csv_rejects_bad_header() {
        let r = GridField::read_csv("a,b,c,d\n1,2,3,4\n".as_bytes());
        assert!(matches!(r, Err(Error::Csv(_))));
    }

    #[test]
    fn floor_limited_convergence() {
        let grids: Vec<_> = [16, 32, 64]
            .iter()
            .map(|&n| Grid2D::square(2.0, n).unwrap())
            .collect();
        // x d/dx x^2 = 2 x^2 and the central difference is exact on quadratics
        let op = PolyDiffOperator::term(c(1.0, 0.0), OpTerm::new(1, 0, 1, 0));
        let psi = GaussianPolynomial::monomial(c(1.0, 0.0), 2, 0);
        let rep = convergence_order(&op, c(2.0, 0.0), &psi, &grids).unwrap();
        assert!(rep.floor_limited, "{:?}", rep.residuals);
        assert!(rep.order.is_nan());
    }
}
