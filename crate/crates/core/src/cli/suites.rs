use std::f64::consts::TAU;

use crate::classical::{self, ClassicalState};
use crate::eigen::{self, Family};
use crate::error::Result;
use crate::gauge::{self, Branch, DisplacementOp, Gauge};
use crate::grid::{self, Grid2D, GridField};
use crate::symbolic::{GaussianPolynomial, PolyDiffOperator, QuadraticExponent};
use crate::Complex;

use super::config::Settings;
use super::report::Check;

/// A file produced by an export suite, held in memory until every check ran.
#[derive(Debug, Clone, PartialEq)]
pub struct Export {
    pub file_name: String,
    pub contents: Vec<u8>,
}

#[derive(Debug, Default)]
pub struct SuiteOutput {
    pub checks: Vec<Check>,
    pub exports: Vec<Export>,
}

const DEFAULT_LAMS: [f64; 4] = [-3.2, 0.0, 1.0, 7.5];

fn label(family: Family, n: u32, lam: f64) -> String {
    format!("{family}:n={n}:lam={lam}")
}

fn lams(s: &Settings, default: &[f64]) -> Vec<f64> {
    s.lams.clone().unwrap_or_else(|| default.to_vec())
}

fn fmt_c(z: Complex) -> String {
    format!("({:e}, {:e})", z.re, z.im)
}

pub fn eigencheck(s: &Settings) -> Result<SuiteOutput> {
    let p = &s.params;
    let mut out = SuiteOutput::default();
    for family in &s.families {
        let h = gauge::hamiltonian(family.gauge, p);
        let inv = family.defining_invariant(p);
        for n in 0..=s.n_max.unwrap_or(10) {
            let e = Complex::new(p.landau_level(n), 0.0);
            for lam in lams(s, &DEFAULT_LAMS) {
                let psi = eigen::eigenfunction(*family, n, lam, p)?;
                let tag = label(*family, n, lam);
                out.checks.push(Check::at_most(
                    format!("energy:{tag}"),
                    h.residual(e, &psi)?,
                    s.tol.get("eigen_residual"),
                ));
                let ev = Complex::new(family.invariant_eigenvalue(lam), 0.0);
                out.checks.push(Check::at_most(
                    format!("invariant:{tag}"),
                    inv.residual(ev, &psi)?,
                    s.tol.get("invariant_factor"),
                ));
            }
        }
    }
    Ok(out)
}

pub fn commutators(s: &Settings) -> Result<SuiteOutput> {
    let p = &s.params;
    let k = p.coupling();
    let bound = s.tol.get("commutator");
    let mut out = SuiteOutput::default();
    let ih = Complex::new(0.0, p.hbar());
    let canonical = PolyDiffOperator::x().commutator(&PolyDiffOperator::momentum_x(p.hbar()))
        - PolyDiffOperator::scalar(ih);
    out.checks.push(Check::at_most(
        "canonical:[x,px]-i*hbar",
        canonical.max_coeff(),
        bound,
    ));
    for g in Gauge::ALL {
        let h = gauge::hamiltonian(g, p);
        let (c1, c2) = gauge::invariant_pair(g, p);
        out.checks.push(Check::at_most(
            format!("{g}:[H,C1]"),
            h.commutator(&c1).max_coeff(),
            bound,
        ));
        out.checks.push(Check::at_most(
            format!("{g}:[H,C2]"),
            h.commutator(&c2).max_coeff(),
            bound,
        ));
        let pair =
            c1.commutator(&c2) - PolyDiffOperator::scalar(gauge::invariant_commutator_value(p));
        out.checks.push(Check::at_most(
            format!("{g}:[C1,C2]+i*hbar*m*w"),
            pair.max_coeff(),
            bound,
        ));
        let (pix, piy) = gauge::kinetic_momenta(g, k);
        let kinetic = pix.commutator(&piy) - PolyDiffOperator::scalar(ih * k.m_omega);
        out.checks.push(Check::at_most(
            format!("{g}:[Pi_x,Pi_y]-i*hbar*m*w"),
            kinetic.max_coeff(),
            bound,
        ));
    }
    Ok(out)
}

/// The family member as the unpatched source formulas print it, where that
/// differs from the implemented convention.
fn printed_identity(
    family: Family,
    n: u32,
    lam: f64,
    s: &Settings,
) -> Result<(GaussianPolynomial, GaussianPolynomial)> {
    let p = &s.params;
    let k = p.coupling();
    let base = eigen::eigenfunction(family, n, 0.0, p)?;
    Ok(match (family.gauge, family.branch) {
        // oscillator centred at y = -lam/(m w)
        (Gauge::Landau, Branch::First) => {
            let printed = eigen::eigenfunction(family, n, -lam, p)?
                .mul_exp(&QuadraticExponent::linear_phase(-2.0 * lam / k.hbar, 0.0));
            (family.ladder_displacement(lam, p)?.apply(&base), printed)
        }
        // translation generated by p_y instead of p_x
        (Gauge::Landau, Branch::Second) => {
            let u = DisplacementOp::new((0.0, lam / k.m_omega), (0.0, 0.0))?;
            (u.apply(&base), eigen::eigenfunction(family, n, lam, p)?)
        }
        // parameter carried over without the sign flip
        (Gauge::Symmetric, _) => (
            family.ladder_displacement(lam, p)?.apply(&base),
            eigen::eigenfunction(family, n, lam, p)?,
        ),
    })
}

pub fn ladder(s: &Settings) -> Result<SuiteOutput> {
    let p = &s.params;
    let mut out = SuiteOutput::default();
    for family in &s.families {
        let h = gauge::hamiltonian(family.gauge, p);
        for n in 0..=s.n_max.unwrap_or(3) {
            let e = Complex::new(p.landau_level(n), 0.0);
            for lam in lams(s, &[1.0, -2.3]) {
                let tag = label(*family, n, lam);
                for j in 0..=s.j_max.unwrap_or(5) {
                    let state = eigen::ladder_state(*family, n, j, lam, p)?;
                    out.checks.push(Check::at_most(
                        format!("ladder:{tag}:j={j}"),
                        h.residual(e, &state)?,
                        s.tol.get("ladder_residual"),
                    ));
                }
                let base = eigen::eigenfunction(*family, n, 0.0, p)?;
                let moved = family.ladder_displacement(lam, p)?.apply(&base);
                let target = eigen::eigenfunction(*family, n, family.displaced_parameter(lam), p)?;
                out.checks.push(Check::at_most(
                    format!("displacement:{tag}"),
                    moved.mismatch(&target)?,
                    s.tol.get("displacement"),
                ));
            }
        }
        for lam in lams(s, &[1.0, -2.3]) {
            if lam == 0.0 {
                continue;
            }
            let (moved, printed) = printed_identity(*family, 0, lam, s)?;
            out.checks.push(Check::erratum(
                format!("printed-displacement:{}", label(*family, 0, lam)),
                moved.mismatch(&printed)?,
                s.tol.get("displacement"),
            ));
        }
    }
    Ok(out)
}

pub fn resum(s: &Settings) -> Result<SuiteOutput> {
    let p = &s.params;
    let lam = s.lam.unwrap_or(1.0);
    let grid = Grid2D::square(s.half_width, s.nodes.unwrap_or(201))?;
    let mut out = SuiteOutput::default();
    let mut j_values = s.j_values.clone();
    j_values.sort_unstable();
    j_values.dedup();
    for family in &s.families {
        let base = eigen::eigenfunction(*family, s.n, 0.0, p)?;
        let target = grid::sample(&family.ladder_displacement(lam, p)?.apply(&base), &grid)?;
        let tag = label(*family, s.n, lam);
        let mut distances = Vec::with_capacity(j_values.len());
        for &j in &j_values {
            let partial = grid::sample(&eigen::resum_displaced(*family, s.n, lam, j, p)?, &grid)?;
            distances.push(grid::l2_distance(&partial, &target)?);
        }
        let last = *j_values.last().expect("non-empty");
        out.checks.push(Check::at_most(
            format!("resum:{tag}:j_max={last}"),
            *distances.last().expect("non-empty"),
            s.tol.get("resum_distance"),
        ));
        // monotone beyond j = 10: count increases
        let increases = j_values
            .iter()
            .zip(distances.windows(2))
            .filter(|(&j, w)| j >= 10 && w[1] > w[0])
            .count();
        let trace: Vec<String> = j_values
            .iter()
            .zip(&distances)
            .map(|(j, d)| format!("{j}:{d:.3e}"))
            .collect();
        out.checks.push(
            Check::at_most(format!("resum-monotone:{tag}"), increases as f64, 0.0)
                .with_detail(trace.join(" ")),
        );
    }
    Ok(out)
}

pub fn phase(s: &Settings) -> Result<SuiteOutput> {
    let p = &s.params;
    let (lam1, lam2) = (s.lam1, s.lam2);
    let n = s.n;
    let mut out = SuiteOutput::default();
    let quantized = eigen::is_flux_quantized(lam1, lam2, p, s.tol.get("flux_tol"))?;
    let k_text = quantized.map_or_else(|| "none".to_string(), |k| k.to_string());
    for family in &s.families {
        // the family member carries its own branch's parameter, the displacement the other
        let (own, other) = match family.branch {
            Branch::First => (lam1, lam2),
            Branch::Second => (lam2, lam1),
        };
        let psi = eigen::eigenfunction(*family, n, own, p)?;
        let u = gauge::displacement(family.gauge, family.phase_displacement_branch(), other, p)?;
        let want = eigen::flux_phase(lam1, family.phase_sign() * lam2, p)?;
        let got = u
            .apply(&psi)
            .multiple_of(&psi, s.tol.get("phase_modulus"))?;
        let tag = label(*family, n, own);
        let (value, detail) = match got {
            Some(c) => ((c - want).norm(), format!("phase={} k={k_text}", fmt_c(c))),
            None => (f64::INFINITY, format!("not a multiple; k={k_text}")),
        };
        out.checks.push(
            Check::at_most(format!("phase:{tag}"), value, s.tol.get("phase_modulus"))
                .with_detail(detail),
        );
        if let (Some(_), Some(c)) = (quantized, got) {
            out.checks.push(Check::at_most(
                format!("trivial-phase:{tag}"),
                (c - Complex::new(1.0, 0.0)).norm(),
                s.tol.get("phase_modulus").max(TAU * s.tol.get("flux_tol")),
            ));
        }
    }
    Ok(out)
}

pub fn flux(s: &Settings) -> Result<SuiteOutput> {
    let p = &s.params;
    let k = p.coupling();
    let tol = s.tol.get("flux_tol");
    let lam2 = s.lam2;
    let mut out = SuiteOutput::default();
    let outcome = |found: Option<i64>, want: Option<i64>| {
        let value = if found == want { 0.0 } else { 1.0 };
        let shown = |v: Option<i64>| v.map_or_else(|| "none".to_string(), |k| k.to_string());
        (
            value,
            format!("found={} expected={}", shown(found), shown(want)),
        )
    };
    for &kk in &s.k_values {
        for (offset, want) in [(0.0, Some(kk)), (0.5, None)] {
            let target = kk as f64 + offset;
            let lam1 = TAU * target * k.m_omega * k.hbar / lam2;
            let found = eigen::is_flux_quantized(lam1, lam2, p, tol)?;
            let (value, detail) = outcome(found, want);
            out.checks.push(
                Check::at_most(format!("quantization:k={target}"), value, 0.0).with_detail(detail),
            );
        }
    }
    for kk in 1..=5u32 {
        let l1 = 1.3 * p.magnetic_length();
        let l2 = TAU * f64::from(kk) * k.hbar / (k.m_omega * l1);
        let rho = p.hall_resistivity(l1, l2);
        let want = TAU * f64::from(kk) * k.hbar / (p.charge() * p.charge());
        out.checks.push(Check::at_most(
            format!("hall:k={kk}"),
            ((rho - want) / want).abs(),
            s.tol.get("hall_relative"),
        ));
    }
    Ok(out)
}

fn period(s: &Settings) -> f64 {
    TAU / s.params.cyclotron_frequency().abs()
}

fn trajectory(s: &Settings, g: Gauge, periods: u32) -> Result<Vec<ClassicalState>> {
    let [x, y] = s.start;
    let [vx, vy] = s.velocity;
    let s0 = ClassicalState::from_velocity(g, x, y, vx, vy, &s.params);
    let steps = (periods * s.steps_per_period) as usize;
    classical::rk4_integrate(
        g,
        s0,
        period(s) / f64::from(s.steps_per_period),
        steps,
        &s.params,
    )
}

fn drift_checks(s: &Settings, g: Gauge, traj: &[ClassicalState], out: &mut SuiteOutput) {
    let c0 = classical::invariants_eval(g, &traj[0], &s.params);
    let start = [c0.0, c0.1, c0.2];
    let mut worst = [0.0f64; 3];
    for st in traj {
        let c = classical::invariants_eval(g, st, &s.params);
        for (w, (v, v0)) in worst.iter_mut().zip([c.0, c.1, c.2].iter().zip(&start)) {
            *w = w.max((v - v0).abs());
        }
    }
    for ((name, w), v0) in ["c1", "c2", "H"].iter().zip(worst).zip(start) {
        let check = if v0 == 0.0 {
            Check::at_most(format!("drift:{g}:{name}"), w, s.tol.get("drift_absolute"))
        } else {
            Check::at_most(
                format!("drift:{g}:{name}"),
                w / v0.abs(),
                s.tol.get("drift_relative"),
            )
        };
        out.checks.push(check);
    }
}

pub fn classical(s: &Settings) -> Result<SuiteOutput> {
    let p = &s.params;
    let periods = s.periods.unwrap_or(10);
    let mut out = SuiteOutput::default();
    let speed = s.velocity[0].hypot(s.velocity[1]);
    let mut trajectories = Vec::new();
    for g in Gauge::ALL {
        let traj = trajectory(s, g, periods)?;
        drift_checks(s, g, &traj, &mut out);
        let energy = classical::invariants_eval(g, &traj[0], p).2;
        let kinetic = 0.5 * p.mass() * speed * speed;
        let rel = if kinetic == 0.0 {
            energy.abs()
        } else {
            ((energy - kinetic) / kinetic).abs()
        };
        out.checks.push(Check::at_most(
            format!("energy:{g}"),
            rel,
            s.tol.get("drift_relative"),
        ));
        if speed > 0.0 {
            let r = classical::orbit_radius_estimate(&traj)?;
            let want = speed / p.cyclotron_frequency().abs();
            out.checks.push(Check::at_most(
                format!("radius:{g}"),
                (r - want).abs(),
                s.tol.get("radius"),
            ));
            let t = classical::return_period(&traj)?;
            out.checks.push(Check::at_most(
                format!("period:{g}"),
                ((t - period(s)) / period(s)).abs(),
                s.tol.get("period_relative"),
            ));
        }
        trajectories.push(traj);
    }
    let gap = trajectories[0]
        .iter()
        .zip(&trajectories[1])
        .map(|(a, b)| (a.x - b.x).hypot(a.y - b.y))
        .fold(0.0, f64::max);
    out.checks.push(Check::at_most(
        "gauge-agreement",
        gap,
        s.tol.get("gauge_agreement"),
    ));
    Ok(out)
}

pub fn gauge_compare(s: &Settings) -> Result<SuiteOutput> {
    let p = &s.params;
    let hs = gauge::hamiltonian(Gauge::Symmetric, p);
    let mut out = SuiteOutput::default();
    for branch in Branch::ALL {
        let family = Family::new(Gauge::Landau, branch);
        for n in 0..=s.n_max.unwrap_or(5) {
            let e = Complex::new(p.landau_level(n), 0.0);
            for lam in lams(s, &DEFAULT_LAMS) {
                let psi = eigen::eigenfunction(family, n, lam, p)?;
                let moved = gauge::gauge_transform_landau_to_symmetric(&psi, p);
                let tag = label(family, n, lam);
                out.checks.push(Check::at_most(
                    format!("covariance:{tag}"),
                    hs.residual(e, &moved)?,
                    s.tol.get("covariance_residual"),
                ));
                // first family lands on symmetric first at -lam, second on symmetric second at lam
                let (partner_family, partner_lam) = match branch {
                    Branch::First => (Family::SYMMETRIC_FIRST, -lam),
                    Branch::Second => (Family::SYMMETRIC_SECOND, lam),
                };
                let partner = eigen::eigenfunction(partner_family, n, partner_lam, p)?;
                out.checks.push(Check::at_most(
                    format!("maps-to:{tag}"),
                    moved.mismatch(&partner)?,
                    s.tol.get("covariance_residual"),
                ));
            }
        }
    }
    Ok(out)
}

fn roundtrip_check(field: &GridField, csv: &[u8]) -> Result<Check> {
    let back = GridField::read_csv(csv)?;
    let same_grid = back.grid() == field.grid();
    let differing = field
        .values()
        .iter()
        .zip(back.values())
        .filter(|(a, b)| a.re.to_bits() != b.re.to_bits() || a.im.to_bits() != b.im.to_bits())
        .count();
    let value = if same_grid {
        differing as f64
    } else {
        field.values().len() as f64
    };
    Ok(Check::at_most("csv-roundtrip", value, 0.0))
}

pub fn grid_export(s: &Settings) -> Result<SuiteOutput> {
    let p = &s.params;
    let family = s.family;
    let lam = s.lam.unwrap_or(0.0);
    let grid = grid::verification_grid(family, lam, p, s.nodes.unwrap_or(256))?;
    let psi = eigen::eigenfunction(family, s.n, lam, p)?;
    let field = grid::sample(&psi, &grid)?;
    let mut csv = Vec::new();
    field
        .write_csv(&mut csv)
        .map_err(|e| crate::Error::Csv(e.to_string()))?;
    let mut out = SuiteOutput::default();
    out.checks
        .push(roundtrip_check(&field, &csv)?.with_detail(format!(
            "{}x{} nodes, {family} n={} lam={lam}",
            grid.nx(),
            grid.ny(),
            s.n
        )));
    out.exports.push(Export {
        file_name: s
            .file
            .clone()
            .unwrap_or_else(|| format!("{family}_n{}.csv", s.n)),
        contents: csv,
    });
    Ok(out)
}

pub fn classical_export(s: &Settings) -> Result<SuiteOutput> {
    let g = s.gauge;
    let traj = trajectory(s, g, s.periods.unwrap_or(1))?;
    let mut out = SuiteOutput::default();
    drift_checks(s, g, &traj, &mut out);
    let mut csv = Vec::new();
    classical::write_trajectory_csv(&mut csv, g, &traj, &s.params)
        .map_err(|e| crate::Error::Csv(e.to_string()))?;
    out.exports.push(Export {
        file_name: s
            .file
            .clone()
            .unwrap_or_else(|| format!("trajectory_{g}.csv")),
        contents: csv,
    });
    Ok(out)
}
