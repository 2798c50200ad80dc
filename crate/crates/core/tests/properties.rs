use proptest::prelude::*;

use landau::classical::{self, ClassicalState};
use landau::eigen::{self, Family};
use landau::gauge::{self, Branch, Gauge};
use landau::grid::{self, Grid2D, GridField};
use landau::symbolic::{GaussianPolynomial, OpTerm, PolyDiffOperator, QuadraticExponent};
use landau::units::PhysicalParams;
use landau::Complex;

fn complex() -> impl Strategy<Value = Complex> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex::new(re, im))
}

/// Normalisable exponent: negative-definite real quadratic part, arbitrary phases.
fn exponent() -> impl Strategy<Value = QuadraticExponent> {
    (
        0.2..1.0f64,
        0.2..1.0f64,
        -0.1..0.1f64,
        -1.0..1.0f64,
        -1.0..1.0f64,
        -1.0..1.0f64,
        complex(),
    )
        .prop_map(|(a, b, r, phase, kx, ky, lin)| QuadraticExponent {
            xx: Complex::new(-a, 0.3 * phase),
            yy: Complex::new(-b, -0.2 * phase),
            xy: Complex::new(r, phase),
            x: Complex::new(0.3 * lin.re, kx),
            y: Complex::new(0.3 * lin.im, ky),
            constant: Complex::new(0.0, phase),
        })
}

fn gpoly() -> impl Strategy<Value = GaussianPolynomial> {
    (
        exponent(),
        prop::collection::vec((0..4u32, 0..4u32, complex()), 1..6),
    )
        .prop_map(|(e, terms)| GaussianPolynomial::from_terms(e, terms).unwrap())
        .prop_filter("non-zero", |g| !g.is_zero())
}

fn operator() -> impl Strategy<Value = PolyDiffOperator> {
    prop::collection::vec((complex(), 0..3u32, 0..3u32, 0..3u32, 0..3u32), 1..5).prop_map(|terms| {
        PolyDiffOperator::from_terms(
            terms
                .into_iter()
                .map(|(c, a, b, p, q)| (c, OpTerm::new(a, b, p, q))),
        )
    })
}

fn params() -> impl Strategy<Value = PhysicalParams> {
    (
        0.3..3.0f64,
        prop_oneof![-2.0..-0.3f64, 0.3..2.0f64],
        0.3..3.0f64,
        0.5..2.0f64,
        0.3..2.0f64,
    )
        .prop_map(|(m, q, b, c, h)| PhysicalParams::new(m, q, b, c, h).unwrap())
}

fn family() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::ALL.to_vec())
}

/// Relative distance that tolerates both sides vanishing.
fn distance(a: &GaussianPolynomial, b: &GaussianPolynomial) -> f64 {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => 0.0,
        (true, false) => b.coeff_norm(),
        (false, _) => a.mismatch(b).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn apply_is_a_homomorphism(a in operator(), b in operator(), psi in gpoly()) {
        let lhs = a.compose(&b).apply(&psi);
        let rhs = a.apply(&b.apply(&psi));
        prop_assert!(distance(&lhs, &rhs) <= 1e-9);
    }

    #[test]
    fn jacobi_identity(a in operator(), b in operator(), c in operator()) {
        let total = a.commutator(&b.commutator(&c))
            + b.commutator(&c.commutator(&a))
            + c.commutator(&a.commutator(&b));
        prop_assert!(total.is_negligible(1e-9), "{}", total.max_coeff());
    }

    #[test]
    fn commutator_is_antisymmetric(a in operator(), b in operator()) {
        let sum = a.commutator(&b) + b.commutator(&a);
        prop_assert!(sum.is_negligible(1e-12));
    }

    #[test]
    fn apply_is_linear(op in operator(), psi in gpoly(), coeffs in prop::collection::vec((0..3u32, 0..3u32, complex()), 1..4), a in complex(), b in complex()) {
        let phi = GaussianPolynomial::from_terms(*psi.exponent(), coeffs).unwrap();
        let combined = psi.scale(a).add(&phi.scale(b)).unwrap();
        let lhs = op.apply(&combined);
        let rhs = op.apply(&psi).scale(a).add(&op.apply(&phi).scale(b)).unwrap();
        prop_assert!(distance(&lhs, &rhs) <= 1e-10);
    }

    #[test]
    fn translations_compose(psi in gpoly(), d1 in (-1.5..1.5f64, -1.5..1.5f64), d2 in (-1.5..1.5f64, -1.5..1.5f64)) {
        let twice = psi.translate(d1.0, d1.1).translate(d2.0, d2.1);
        let once = psi.translate(d1.0 + d2.0, d1.1 + d2.1);
        prop_assert!(distance(&twice, &once) <= 1e-9);
        for (x, y) in [(0.1, -0.3), (1.2, 0.7)] {
            let direct = psi.eval(x - d1.0, y - d1.1);
            let shifted = psi.translate(d1.0, d1.1).eval(x, y);
            prop_assert!((direct - shifted).norm() <= 1e-9 * (1.0 + direct.norm()));
        }
    }

    #[test]
    fn derivative_commutes_with_translation(psi in gpoly(), dx in -1.5..1.5f64, dy in -1.5..1.5f64) {
        let a = psi.translate(dx, dy).derivative_x();
        let b = psi.derivative_x().translate(dx, dy);
        prop_assert!(distance(&a, &b) <= 1e-9);
        let a = psi.translate(dx, dy).derivative_y();
        let b = psi.derivative_y().translate(dx, dy);
        prop_assert!(distance(&a, &b) <= 1e-9);
    }

    #[test]
    fn inner_product_is_sesquilinear(values in prop::collection::vec((complex(), complex(), complex()), 64), a in complex(), b in complex()) {
        let grid = Grid2D::new(-1.0, 1.0, -2.0, 2.0, 8, 8).unwrap();
        let field = |k: usize| GridField::new(grid, values.iter().map(|v| [v.0, v.1, v.2][k]).collect()).unwrap();
        let (f, g, h) = (field(0), field(1), field(2));
        let combo = GridField::new(grid, g.values().iter().zip(h.values()).map(|(x, y)| a * x + b * y).collect()).unwrap();
        let lhs = grid::l2_inner(&f, &combo).unwrap();
        let rhs = a * grid::l2_inner(&f, &g).unwrap() + b * grid::l2_inner(&f, &h).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
        let swapped = grid::l2_inner(&g, &f).unwrap().conj();
        prop_assert!((swapped - grid::l2_inner(&f, &g).unwrap()).norm() <= 1e-13);
        prop_assert!(grid::l2_inner(&f, &f).unwrap().im.abs() <= 1e-14);
    }

    #[test]
    fn displacements_compose_up_to_phase(p in params(), fam in family(), n in 0..4u32, l1 in -2.0..2.0f64, l2 in -2.0..2.0f64) {
        let branch = fam.ladder_displacement_branch();
        let psi = eigen::eigenfunction(fam, n, 0.3, &p).unwrap();
        let u1 = gauge::displacement(fam.gauge, branch, l1, &p).unwrap();
        let u2 = gauge::displacement(fam.gauge, branch, l2, &p).unwrap();
        let u12 = gauge::displacement(fam.gauge, branch, l1 + l2, &p).unwrap();
        let stepwise = u2.apply(&u1.apply(&psi));
        let direct = u12.apply(&psi);
        let c = stepwise.multiple_of(&direct, 1e-9).unwrap();
        prop_assert!(c.is_some_and(|c| (c.norm() - 1.0).abs() <= 1e-9), "{c:?}");
        let composed = u2.then(&u1).apply(&psi);
        prop_assert!(distance(&composed, &stepwise) <= 1e-9);
    }

    #[test]
    fn eigenfunctions_for_any_units(p in params(), fam in family(), n in 0..6u32, lam in -4.0..4.0f64) {
        let psi = eigen::eigenfunction(fam, n, lam, &p).unwrap();
        let e = Complex::new(p.landau_level(n), 0.0);
        prop_assert!(gauge::hamiltonian(fam.gauge, &p).residual(e, &psi).unwrap() <= 1e-10);
        let ev = Complex::new(fam.invariant_eigenvalue(lam), 0.0);
        prop_assert!(fam.defining_invariant(&p).residual(ev, &psi).unwrap() <= 1e-10 * (1.0 + lam.abs()));
    }

    #[test]
    fn ladder_stays_in_level(p in params(), fam in family(), n in 0..3u32, j in 0..4u32, lam in -2.0..2.0f64) {
        let state = eigen::ladder_state(fam, n, j, lam, &p).unwrap();
        let e = Complex::new(p.landau_level(n), 0.0);
        prop_assert!(gauge::hamiltonian(fam.gauge, &p).residual(e, &state).unwrap() <= 1e-9);
    }

    #[test]
    fn gauge_transform_maps_eigenfunctions(p in params(), branch in prop::sample::select(Branch::ALL.to_vec()), n in 0..5u32, lam in -3.0..3.0f64) {
        let psi = eigen::eigenfunction(Family::new(Gauge::Landau, branch), n, lam, &p).unwrap();
        let moved = gauge::gauge_transform_landau_to_symmetric(&psi, &p);
        let e = Complex::new(p.landau_level(n), 0.0);
        prop_assert!(gauge::hamiltonian(Gauge::Symmetric, &p).residual(e, &moved).unwrap() <= 1e-10);
    }

    #[test]
    fn flux_phase_is_unimodular(p in params(), l1 in -5.0..5.0f64, l2 in -5.0..5.0f64) {
        let z = eigen::flux_phase(l1, l2, &p).unwrap();
        prop_assert!((z.norm() - 1.0).abs() <= 1e-14);
        let k = eigen::is_flux_quantized(l1, l2, &p, 0.25).unwrap();
        if let Some(k) = k {
            let ratio = l1 * l2 / (std::f64::consts::TAU * p.coupling().m_omega * p.hbar());
            prop_assert!((ratio - k as f64).abs() <= 0.25);
        }
    }

    #[test]
    fn magnetic_length_identity(p in params()) {
        let lb = p.magnetic_length();
        let w = p.cyclotron_frequency();
        prop_assert!((lb * lb * p.mass() * w.abs() / p.hbar() - 1.0).abs() <= 1e-12);
        prop_assert!((p.landau_level(1) - p.landau_level(0) - p.hbar() * w.abs()).abs() <= 1e-12 * p.hbar() * w.abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn displacement_is_unitary_on_grid(fam in family(), n in 0..3u32, lam in -1.5..1.5f64) {
        let p = PhysicalParams::natural();
        let grid = Grid2D::new(-9.0, 9.0, -9.0, 9.0, 181, 181).unwrap();
        // localise the plane-wave direction with a wide Gaussian envelope
        let envelope = QuadraticExponent {
            xx: Complex::new(-0.08, 0.0),
            yy: Complex::new(-0.08, 0.0),
            ..QuadraticExponent::zero()
        };
        let psi = eigen::eigenfunction(fam, n, 0.0, &p).unwrap().mul_exp(&envelope);
        let moved = fam.ladder_displacement(lam, &p).unwrap().apply(&psi);
        let a = grid::sample(&psi, &grid).unwrap().norm();
        let b = grid::sample(&moved, &grid).unwrap().norm();
        prop_assert!(((a - b) / a).abs() <= 1e-6, "{a} vs {b}");
    }

    #[test]
    fn hamiltonian_is_hermitian_on_localised_states(g in prop::sample::select(Gauge::ALL.to_vec()), f in gpoly(), h in gpoly()) {
        let p = PhysicalParams::natural();
        let op = gauge::hamiltonian(g, &p);
        let grid = Grid2D::new(-9.0, 9.0, -9.0, 9.0, 241, 241).unwrap();
        let s = |psi: &GaussianPolynomial| grid::sample(psi, &grid).unwrap();
        let lhs = grid::l2_inner(&s(&f), &s(&op.apply(&h))).unwrap();
        let rhs = grid::l2_inner(&s(&op.apply(&f)), &s(&h)).unwrap();
        let scale = s(&f).norm() * s(&op.apply(&h)).norm() + s(&op.apply(&f)).norm() * s(&h).norm();
        prop_assert!((lhs - rhs).norm() <= 1e-8 * scale.max(1e-300), "{lhs} vs {rhs}");
    }

    #[test]
    fn classical_constants_of_motion(g in prop::sample::select(Gauge::ALL.to_vec()), x in -2.0..2.0f64, y in -2.0..2.0f64, vx in -2.0..2.0f64, vy in -2.0..2.0f64) {
        let p = PhysicalParams::new(1.4, 0.8, 1.2, 1.0, 1.0).unwrap();
        let s0 = ClassicalState::from_velocity(g, x, y, vx, vy, &p);
        let period = std::f64::consts::TAU / p.cyclotron_frequency().abs();
        let traj = classical::rk4_integrate(g, s0, period / 1000.0, 3000, &p).unwrap();
        let c0 = classical::invariants_eval(g, &s0, &p);
        let c1 = classical::invariants_eval(g, traj.last().unwrap(), &p);
        for (a, b) in [(c0.0, c1.0), (c0.1, c1.1), (c0.2, c1.2)] {
            prop_assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0));
        }
        let (u, v) = classical::velocity(g, &s0, &p);
        prop_assert!((u - vx).abs() <= 1e-12 && (v - vy).abs() <= 1e-12);
        prop_assert!((c0.2 - 0.5 * p.mass() * (vx * vx + vy * vy)).abs() <= 1e-12 * (1.0 + c0.2));
    }

    #[test]
    fn csv_roundtrip_is_bit_exact(values in prop::collection::vec((-1e6..1e6f64, -1e-6..1e-6f64), 80)) {
        let grid = Grid2D::new(-0.3, 1.7, 2.0, 2.9, 10, 8).unwrap();
        let field = GridField::new(grid, values.iter().map(|&(a, b)| Complex::new(a, b)).collect()).unwrap();
        let mut buf = Vec::new();
        field.write_csv(&mut buf).unwrap();
        let back = GridField::read_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back.grid(), field.grid());
        for (a, b) in field.values().iter().zip(back.values()) {
            prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
            prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }
}
