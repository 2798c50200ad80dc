//! Classical Hamiltonian flow of the charged particle in either gauge,
//! integrated with fixed-step RK4.

use std::io::Write;

use crate::error::{Error, Result};
use crate::gauge::Gauge;
use crate::units::PhysicalParams;

/// Phase-space point with canonical momenta.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassicalState {
    pub x: f64,
    pub y: f64,
    pub px: f64,
    pub py: f64,
    pub t: f64,
}

impl ClassicalState {
    pub fn new(x: f64, y: f64, px: f64, py: f64) -> Self {
        Self {
            x,
            y,
            px,
            py,
            t: 0.0,
        }
    }

    /// Canonical state with physical velocity `(vx, vy)`: `p = m v + (q/c) A(x, y)`.
    pub fn from_velocity(
        gauge: Gauge,
        x: f64,
        y: f64,
        vx: f64,
        vy: f64,
        params: &PhysicalParams,
    ) -> Self {
        let m_omega = params.coupling().m_omega;
        let (ax, ay) = gauge.potential_per_field(x, y);
        // (q/c) A = m w (A / B)
        Self::new(
            x,
            y,
            params.mass() * vx + m_omega * ax,
            params.mass() * vy + m_omega * ay,
        )
    }

    fn is_finite(&self) -> bool {
        [self.x, self.y, self.px, self.py, self.t]
            .iter()
            .all(|v| v.is_finite())
    }
}

/// Time derivative of `(x, y, px, py)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StateRate {
    pub x: f64,
    pub y: f64,
    pub px: f64,
    pub py: f64,
}

/// Hamilton's equations for the gauge's Hamiltonian.
pub fn flow(gauge: Gauge, s: &ClassicalState, params: &PhysicalParams) -> StateRate {
    let m = params.mass();
    let w = params.cyclotron_frequency();
    let mw = m * w;
    match gauge {
        Gauge::Landau => {
            let kx = s.px + mw * s.y;
            StateRate {
                x: kx / m,
                y: s.py / m,
                px: 0.0,
                py: -w * kx,
            }
        }
        Gauge::Symmetric => {
            let kx = s.px + 0.5 * mw * s.y;
            let ky = s.py - 0.5 * mw * s.x;
            StateRate {
                x: kx / m,
                y: ky / m,
                px: 0.5 * w * ky,
                py: -0.5 * w * kx,
            }
        }
    }
}

/// Physical velocity `(dx/dt, dy/dt)`.
pub fn velocity(gauge: Gauge, s: &ClassicalState, params: &PhysicalParams) -> (f64, f64) {
    let r = flow(gauge, s, params);
    (r.x, r.y)
}

fn advance(s: &ClassicalState, r: &StateRate, h: f64) -> ClassicalState {
    ClassicalState {
        x: s.x + h * r.x,
        y: s.y + h * r.y,
        px: s.px + h * r.px,
        py: s.py + h * r.py,
        t: s.t + h,
    }
}

pub fn rk4_step(
    gauge: Gauge,
    s: &ClassicalState,
    dt: f64,
    params: &PhysicalParams,
) -> ClassicalState {
    let k1 = flow(gauge, s, params);
    let k2 = flow(gauge, &advance(s, &k1, 0.5 * dt), params);
    let k3 = flow(gauge, &advance(s, &k2, 0.5 * dt), params);
    let k4 = flow(gauge, &advance(s, &k3, dt), params);
    let w = |a: f64, b: f64, c: f64, d: f64| (a + 2.0 * b + 2.0 * c + d) / 6.0;
    ClassicalState {
        x: s.x + dt * w(k1.x, k2.x, k3.x, k4.x),
        y: s.y + dt * w(k1.y, k2.y, k3.y, k4.y),
        px: s.px + dt * w(k1.px, k2.px, k3.px, k4.px),
        py: s.py + dt * w(k1.py, k2.py, k3.py, k4.py),
        t: s.t + dt,
    }
}

/// Classical RK4 trajectory of `steps + 1` states starting with `s0`.
pub fn rk4_integrate(
    gauge: Gauge,
    s0: ClassicalState,
    dt: f64,
    steps: usize,
    params: &PhysicalParams,
) -> Result<Vec<ClassicalState>> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "time step must be positive, got {dt}"
        )));
    }
    if steps == 0 {
        return Err(Error::InvalidArgument("need at least one step".into()));
    }
    if !s0.is_finite() {
        return Err(Error::NonFinite("initial state".into()));
    }
    let mut out = Vec::with_capacity(steps + 1);
    out.push(s0);
    let mut s = s0;
    for _ in 0..steps {
        // time is advanced by index so it does not accumulate rounding
        let next = rk4_step(gauge, &s, dt, params);
        s = ClassicalState {
            t: s0.t + out.len() as f64 * dt,
            ..next
        };
        if !s.is_finite() {
            return Err(Error::NonFinite(format!("state at t = {}", s.t)));
        }
        out.push(s);
    }
    Ok(out)
}

/// The two momentum-like constants of motion and the Hamiltonian.
///
/// Landau: `(px, py + m w x, H_L)`. Symmetric: `(px - m w y / 2, py + m w x / 2, H_S)`.
pub fn invariants_eval(
    gauge: Gauge,
    s: &ClassicalState,
    params: &PhysicalParams,
) -> (f64, f64, f64) {
    let m = params.mass();
    let mw = params.coupling().m_omega;
    match gauge {
        Gauge::Landau => {
            let kx = s.px + mw * s.y;
            (s.px, s.py + mw * s.x, (kx * kx + s.py * s.py) / (2.0 * m))
        }
        Gauge::Symmetric => {
            let kx = s.px + 0.5 * mw * s.y;
            let ky = s.py - 0.5 * mw * s.x;
            (
                s.px - 0.5 * mw * s.y,
                s.py + 0.5 * mw * s.x,
                (kx * kx + ky * ky) / (2.0 * m),
            )
        }
    }
}

/// Radius of the least-squares (algebraic) circle through the `(x, y)` points.
pub fn orbit_radius_estimate(trajectory: &[ClassicalState]) -> Result<f64> {
    if trajectory.len() < 3 {
        return Err(Error::DegenerateGeometry("fewer than three points".into()));
    }
    let n = trajectory.len() as f64;
    let mx = trajectory.iter().map(|s| s.x).sum::<f64>() / n;
    let my = trajectory.iter().map(|s| s.y).sum::<f64>() / n;
    let (mut suu, mut svv, mut suv, mut suuu, mut svvv, mut suvv, mut svuu) =
        (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for s in trajectory {
        let u = s.x - mx;
        let v = s.y - my;
        suu += u * u;
        svv += v * v;
        suv += u * v;
        suuu += u * u * u;
        svvv += v * v * v;
        suvv += u * v * v;
        svuu += v * u * u;
    }
    let det = suu * svv - suv * suv;
    let spread = suu + svv;
    if spread == 0.0 || det <= 1e-12 * spread * spread {
        return Err(Error::DegenerateGeometry(
            "points are coincident or collinear".into(),
        ));
    }
    let rhs_u = 0.5 * (suuu + suvv);
    let rhs_v = 0.5 * (svvv + svuu);
    let a = (rhs_u * svv - rhs_v * suv) / det;
    let b = (suu * rhs_v - suv * rhs_u) / det;
    Ok((a * a + b * b + spread / n).sqrt())
}

/// First return time to the starting position, refined by a parabola through
/// the squared distance at the three samples around the minimum.
pub fn return_period(trajectory: &[ClassicalState]) -> Result<f64> {
    let start = trajectory
        .first()
        .ok_or_else(|| Error::DegenerateGeometry("empty trajectory".into()))?;
    let d2: Vec<f64> = trajectory
        .iter()
        .map(|s| (s.x - start.x).powi(2) + (s.y - start.y).powi(2))
        .collect();
    let far = d2.iter().cloned().fold(0.0, f64::max);
    if far == 0.0 {
        return Err(Error::DegenerateGeometry("trajectory does not move".into()));
    }
    let left = d2
        .iter()
        .position(|&d| d > 0.5 * far)
        .ok_or_else(|| Error::DegenerateGeometry("no excursion".into()))?;
    for k in left.max(1)..d2.len() - 1 {
        if d2[k] <= d2[k - 1] && d2[k] <= d2[k + 1] && d2[k] < 0.25 * far {
            let h = trajectory[k + 1].t - trajectory[k].t;
            let curv = d2[k - 1] - 2.0 * d2[k] + d2[k + 1];
            let offset = if curv > 0.0 {
                0.5 * h * (d2[k - 1] - d2[k + 1]) / curv
            } else {
                0.0
            };
            return Ok(trajectory[k].t + offset - start.t);
        }
    }
    Err(Error::DegenerateGeometry(
        "trajectory does not return within its span".into(),
    ))
}

/// CSV with header `t,x,y,px,py,c1,c2,H`.
pub fn write_trajectory_csv<W: Write>(
    mut w: W,
    gauge: Gauge,
    trajectory: &[ClassicalState],
    params: &PhysicalParams,
) -> std::io::Result<()> {
    writeln!(w, "t,x,y,px,py,c1,c2,H")?;
    for s in trajectory {
        let (c1, c2, h) = invariants_eval(gauge, s, params);
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            s.t, s.x, s.y, s.px, s.py, c1, c2, h
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn nat() -> PhysicalParams {
        PhysicalParams::natural()
    }

    #[test]
    fn landau_fixed_point() {
        let p = PhysicalParams::new(1.5, 2.0, 0.5, 1.0, 1.0).unwrap();
        let mw = p.coupling().m_omega;
        let s = ClassicalState::new(0.3, 2.0, -mw * 2.0, 0.0);
        let r = flow(Gauge::Landau, &s, &p);
        assert_eq!(r, StateRate::default());
    }

    #[test]
    fn landau_flow_example() {
        let r = flow(
            Gauge::Landau,
            &ClassicalState::new(0.0, 0.0, 0.0, 1.0),
            &nat(),
        );
        assert_eq!(
            r,
            StateRate {
                x: 0.0,
                y: 1.0,
                px: 0.0,
                py: 0.0
            }
        );
    }

    #[test]
    fn symmetric_origin_is_stationary() {
        let r = flow(Gauge::Symmetric, &ClassicalState::default(), &nat());
        assert_eq!(r, StateRate::default());
    }

    #[test]
    fn invariant_examples() {
        let l = invariants_eval(
            Gauge::Landau,
            &ClassicalState::new(0.0, 0.0, 0.0, 1.0),
            &nat(),
        );
        assert_eq!(l, (0.0, 1.0, 0.5));
        let s = invariants_eval(
            Gauge::Symmetric,
            &ClassicalState::new(1.0, 0.0, 0.0, 0.0),
            &nat(),
        );
        assert_eq!(s, (0.0, 0.5, 0.125));
    }

    #[test]
    fn single_step_is_consistent() {
        let p = nat();
        let s0 = ClassicalState::new(0.2, -0.4, 0.7, 0.1);
        let r = flow(Gauge::Symmetric, &s0, &p);
        for dt in [1e-2, 1e-3] {
            let s1 = rk4_step(Gauge::Symmetric, &s0, dt, &p);
            let euler = advance(&s0, &r, dt);
            let err = ((s1.x - euler.x).powi(2) + (s1.y - euler.y).powi(2)).sqrt();
            assert!(err < 2.0 * dt * dt, "{err}");
        }
    }

    #[test]
    fn rejects_bad_steps() {
        let p = nat();
        assert!(rk4_integrate(Gauge::Landau, ClassicalState::default(), 0.0, 10, &p).is_err());
        assert!(rk4_integrate(Gauge::Landau, ClassicalState::default(), 0.1, 0, &p).is_err());
        let t = rk4_integrate(Gauge::Landau, ClassicalState::default(), 0.1, 5, &p).unwrap();
        assert_eq!(t.len(), 6);
    }

    #[test]
    fn closed_orbit_after_one_period() {
        let p = nat();
        let s0 = ClassicalState::from_velocity(Gauge::Landau, 0.0, 0.0, 1.0, 0.0, &p);
        let traj = rk4_integrate(Gauge::Landau, s0, TAU / 1000.0, 1000, &p).unwrap();
        let end = traj.last().unwrap();
        assert!((end.x - s0.x).abs() < 1e-8 && (end.y - s0.y).abs() < 1e-8);
    }

    #[test]
    fn radius_fit() {
        let p = nat();
        for v in [1.0, 2.0] {
            let s0 = ClassicalState::from_velocity(Gauge::Symmetric, 0.5, -0.5, 0.0, v, &p);
            let traj = rk4_integrate(Gauge::Symmetric, s0, TAU / 1000.0, 1000, &p).unwrap();
            let r = orbit_radius_estimate(&traj).unwrap();
            assert!((r - v).abs() < 1e-6, "{r}");
        }
    }

    #[test]
    fn fixed_point_radius_is_degenerate() {
        let p = nat();
        let traj = rk4_integrate(Gauge::Landau, ClassicalState::default(), 0.1, 20, &p).unwrap();
        assert!(matches!(
            orbit_radius_estimate(&traj),
            Err(Error::DegenerateGeometry(_))
        ));
        assert!(return_period(&traj).is_err());
    }

    #[test]
    fn csv_header() {
        let p = nat();
        let traj = rk4_integrate(
            Gauge::Landau,
            ClassicalState::new(0.0, 0.0, 0.0, 1.0),
            0.1,
            2,
            &p,
        )
        .unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, Gauge::Landau, &traj, &p).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,x,y,px,py,c1,c2,H"));
        assert_eq!(lines.count(), 3);
    }
}
