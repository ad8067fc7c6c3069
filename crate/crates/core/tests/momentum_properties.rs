use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::Matrix2;
use num_complex::Complex64;
use proptest::prelude::*;
use qwalk_barrier::momentum::{
    closed_form_distribution, kernel, momentum_wavefunction, omega, position_wavefunction,
    position_wavefunction_with, ClosedFormSolver, IntegralForm, QuadratureSpec,
};
use qwalk_barrier::walk::{simulate, BarrierParams, CoinState, InitialState, ShiftKind};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Eigenvalues of a 2×2 matrix from its characteristic polynomial.
fn eigenvalues_2x2(m: &Matrix2<Complex64>) -> [Complex64; 2] {
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let disc = (tr * tr - 4.0 * det).sqrt();
    [(tr + disc) / 2.0, (tr - disc) / 2.0]
}

fn same_pair(a: [Complex64; 2], b: [Complex64; 2], tol: f64) -> bool {
    let direct = (a[0] - b[0]).norm().max((a[1] - b[1]).norm());
    let swapped = (a[0] - b[1]).norm().max((a[1] - b[0]).norm());
    direct.min(swapped) < tol
}

fn phi_grid() -> Vec<f64> {
    vec![0.0, 0.2, 0.5, 0.8, 1.1, 1.4, FRAC_PI_2]
}

#[test]
fn barrier_free_kernel_at_zero_momentum() {
    let kern = kernel(0.0, BarrierParams::none()).unwrap();
    let h = FRAC_1_SQRT_2;
    let want = Matrix2::new(c(h, 0.0), c(-h, 0.0), c(h, 0.0), c(h, 0.0));
    assert!((kern.matrix - want).norm() < 1e-15);
    let oracle = eigenvalues_2x2(&want);
    let expected = [
        Complex64::from_polar(1.0, FRAC_PI_4),
        Complex64::from_polar(1.0, -FRAC_PI_4),
    ];
    assert!(same_pair(oracle, expected, 1e-14));
    assert!(same_pair(kern.eigenvalues, expected, 1e-14));
}

#[test]
fn eigenvalues_at_half_pi_are_plus_minus_i() {
    let kern = kernel(FRAC_PI_2, BarrierParams::from_phi(0.8).unwrap()).unwrap();
    assert!((kern.eigenvalues[0] - c(0.0, 1.0)).norm() < 1e-15);
    assert!((kern.eigenvalues[1] - c(0.0, -1.0)).norm() < 1e-15);
}

#[test]
fn kernel_eigensystem_invariants() {
    for phi in phi_grid() {
        let b = BarrierParams::from_phi(phi).unwrap();
        for j in 0..64 {
            let k = -PI + (j as f64 + 0.37) * 2.0 * PI / 64.0;
            let kern = kernel(k, b).unwrap();
            let m = kern.matrix;
            let [lp, lm] = kern.eigenvalues;
            assert!((lp * lm - 1.0).norm() < 1e-12);
            assert!((lp + lm - 2f64.sqrt() * b.alpha() * k.cos()).norm() < 1e-12);
            let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            assert!((det - 1.0).norm() < 1e-12);
            assert!((m.adjoint() * m - Matrix2::identity()).norm() < 1e-12);
            assert!(same_pair(eigenvalues_2x2(&m), kern.eigenvalues, 1e-12));
            for (lambda, v) in kern.eigenvalues.iter().zip(&kern.eigenvectors) {
                assert!((v.norm() - 1.0).abs() < 1e-12, "phi {phi} k {k}");
                assert!((m * v - v * *lambda).norm() < 1e-12, "phi {phi} k {k}");
            }
        }
    }
}

#[test]
fn dispersion_is_antisymmetric_under_half_shift() {
    for alpha in [0.0, 0.3, 0.697, 1.0] {
        for j in 0..200 {
            let k = -PI + j as f64 * PI / 100.0;
            let shifted = omega(k + PI, alpha).omega;
            assert!((shifted - (PI - omega(k, alpha).omega)).abs() < 1e-12);
        }
    }
}

#[test]
fn eigen_power_matches_repeated_multiplication() {
    for phi in [0.0, 0.8, 1.3] {
        let b = BarrierParams::from_phi(phi).unwrap();
        for k in [-2.7, -0.9, 0.1, 1.2, 3.0] {
            let kern = kernel(k, b).unwrap();
            let mut acc = Matrix2::identity();
            for t in 0..=200u32 {
                let diff = (kern.power(t) - acc).norm();
                assert!(diff < 1e-10, "phi {phi} k {k} t {t}: {diff:e}");
                acc = kern.matrix * acc;
            }
        }
    }
}

#[test]
fn momentum_wavefunction_examples() {
    let b = BarrierParams::from_phi(0.8).unwrap();
    for k in [-1.0, 0.0, 2.5] {
        let psi0 = momentum_wavefunction(k, 0, b).unwrap();
        assert!(psi0.max_abs_diff(&CoinState::real(1.0, 0.0)) < 1e-14);
    }
    // M_0 (1, 0)ᵀ for the barrier-free kernel
    let psi = momentum_wavefunction(0.0, 1, BarrierParams::none()).unwrap();
    assert!(psi.max_abs_diff(&CoinState::real(FRAC_1_SQRT_2, FRAC_1_SQRT_2)) < 1e-15);
}

proptest! {
    #[test]
    fn momentum_wavefunction_has_unit_norm(k in -PI..PI, t in 0u32..300, phi in 0.0f64..1.5) {
        prop_assume!((phi - FRAC_PI_4).abs() > 1e-3);
        let b = BarrierParams::from_phi(phi).unwrap();
        let psi = momentum_wavefunction(k, t, b).unwrap();
        prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn momentum_wavefunction_matches_matrix_power(k in -PI..PI, t in 0u32..60, phi in 0.0f64..1.5) {
        prop_assume!((phi - FRAC_PI_4).abs() > 1e-3);
        let b = BarrierParams::from_phi(phi).unwrap();
        let m = kernel(k, b).unwrap().matrix;
        let mut v = nalgebra::Vector2::new(c(1.0, 0.0), c(0.0, 0.0));
        for _ in 0..t {
            v = m * v;
        }
        let psi = momentum_wavefunction(k, t, b).unwrap();
        prop_assert!(psi.max_abs_diff(&CoinState::new(v[0], v[1])) < 1e-11);
    }
}

#[test]
fn position_wavefunction_at_time_zero() {
    let q = QuadratureSpec::new(256).unwrap();
    for phi in [0.0, 0.8] {
        let b = BarrierParams::from_phi(phi).unwrap();
        let e = position_wavefunction(0, 0, b, q)
            .unwrap()
            .max_abs_diff(&CoinState::real(1.0, 0.0));
        assert!(e < 1e-13, "phi {phi}: {e:e}");
        assert!(
            position_wavefunction(3, 0, b, q)
                .unwrap()
                .max_abs_diff(&CoinState::ZERO)
                < 1e-13
        );
    }
}

#[test]
fn position_wavefunction_after_one_step() {
    let q = QuadratureSpec::new(64).unwrap();
    let b = BarrierParams::none();
    let oracle = simulate(InitialState::LeftLocalized, ShiftKind::FlipFlop, b, 1).unwrap();
    for form in [IntegralForm::Substituted, IntegralForm::Direct] {
        let psi = position_wavefunction_with(1, 1, b, q, form).unwrap();
        assert!(psi.max_abs_diff(&CoinState::real(FRAC_1_SQRT_2, 0.0)) < 1e-14);
        assert!(psi.max_abs_diff(&oracle.amplitude(1)) < 1e-14);
    }
}

#[test]
fn closed_form_two_steps() {
    let d =
        closed_form_distribution(2, BarrierParams::none(), QuadratureSpec::default_for(2)).unwrap();
    for (n, want) in [(-2, 0.25), (-1, 0.0), (0, 0.5), (1, 0.0), (2, 0.25)] {
        assert!((d.get(n) - want).abs() < 1e-14, "n = {n}");
    }
    let d = closed_form_distribution(
        0,
        BarrierParams::from_phi(0.4).unwrap(),
        QuadratureSpec::default_for(0),
    )
    .unwrap();
    assert_eq!(d.len(), 1);
    assert!((d.get(0) - 1.0).abs() < 1e-14);
}

#[test]
fn closed_form_matches_simulation_at_fine_resolution() {
    let b = BarrierParams::from_phi(0.8).unwrap();
    let q = QuadratureSpec::new(1 << 15).unwrap();
    let sim = simulate(InitialState::LeftLocalized, ShiftKind::FlipFlop, b, 100).unwrap();
    let solver = ClosedFormSolver::new(100, b, q, IntegralForm::Substituted).unwrap();
    let mut worst: f64 = 0.0;
    for n in -100..=100 {
        worst = worst.max(solver.amplitude(n).max_abs_diff(&sim.amplitude(n)));
    }
    assert!(worst < 1e-8, "{worst:e}");
    assert!((solver.distribution().total() - 1.0).abs() < 1e-8);
}

#[test]
fn integral_forms_agree() {
    for phi in [0.0, 0.3, 0.8, 1.2, FRAC_PI_2] {
        let b = BarrierParams::from_phi(phi).unwrap();
        for t in [5u32, 37, 80] {
            let q = QuadratureSpec::default_for(t as usize);
            let sub = ClosedFormSolver::new(t, b, q, IntegralForm::Substituted).unwrap();
            let dir = ClosedFormSolver::new(t, b, q, IntegralForm::Direct).unwrap();
            let ti = t as i64;
            for n in -ti - 2..=ti + 2 {
                let d = sub.amplitude(n).max_abs_diff(&dir.amplitude(n));
                assert!(d < 1e-10, "phi {phi} t {t} n {n}: {d:e}");
            }
        }
    }
}

#[test]
fn quadrature_error_shrinks_as_nodes_double() {
    let t = 20u32;
    let b = BarrierParams::from_phi(0.8).unwrap();
    let sim = simulate(
        InitialState::LeftLocalized,
        ShiftKind::FlipFlop,
        b,
        t as usize,
    )
    .unwrap();
    let ti = t as i64;
    let errors: Vec<(usize, f64)> = [8usize, 16, 32, 64, 128, 256, 512]
        .into_iter()
        .map(|n| {
            let s = ClosedFormSolver::new(
                t,
                b,
                QuadratureSpec::new(n).unwrap(),
                IntegralForm::Substituted,
            )
            .unwrap();
            let e = (-ti..=ti)
                .map(|x| s.amplitude(x).max_abs_diff(&sim.amplitude(x)))
                .fold(0.0, f64::max);
            (n, e)
        })
        .collect();
    // error falls until it reaches the rounding floor, from N = 4t on it stays there
    const FLOOR: f64 = 1e-12;
    for w in errors.windows(2) {
        let ((_, e0), (n1, e1)) = (w[0], w[1]);
        assert!(e1 <= e0 || e1 < FLOOR, "{errors:?}");
        if n1 >= 4 * t as usize {
            assert!(e1 < FLOOR, "{errors:?}");
        }
    }
    assert!(
        errors[0].1 > 1e-3,
        "coarse grid should be visibly wrong: {errors:?}"
    );
}

#[test]
fn closed_form_total_probability() {
    for phi in [0.0, 0.5, 1.0] {
        let b = BarrierParams::from_phi(phi).unwrap();
        let d = closed_form_distribution(60, b, QuadratureSpec::default_for(60)).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-10);
    }
}
