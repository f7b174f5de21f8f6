use num_traits::Zero;
use proptest::prelude::*;

use spiked_qes::wavefunction::eval_psi_second_derivative;
use spiked_qes::{
    count_nodes, derivative_jump, derivative_jump_exact, eval_psi, sample, solve, Parity,
    QesProblem, QesSolution,
};

fn ground() -> QesSolution {
    solve(QesProblem::even(1), 12).unwrap().remove(0)
}

/// Midpoint rule with 2e6 cells on [0, 12] for 2 * int (1+x)^2 exp(-(x+1)^2 + 1).
fn norm_squared_oracle() -> f64 {
    let cells = 2_000_000;
    let h = 12.0 / cells as f64;
    let sum: f64 = (0..cells)
        .map(|i| {
            let x = (i as f64 + 0.5) * h;
            (1.0 + x).powi(2) * (-(x + 1.0).powi(2) + 1.0).exp()
        })
        .sum();
    2.0 * sum * h
}

#[test]
fn ground_state_norm_matches_quadrature() {
    let oracle = norm_squared_oracle();
    // closed form 1 + (e sqrt(pi) / 2) erfc(1), frozen
    assert!((oracle - 1.378_936_078_070_656).abs() < 1e-10);
    let grid = sample(&ground(), 6.0, 601).unwrap();
    assert!(grid.norm.is_finite() && grid.norm > 0.0);
    assert!((grid.norm.powi(2) - oracle).abs() < 1e-6);
}

#[test]
fn ground_state_closed_form() {
    let g = ground();
    assert_eq!(g.energy, 3);
    assert_eq!(count_nodes(&g).unwrap(), 0);
    for i in 1..200 {
        let x = i as f64 * 0.03;
        let want = (1.0 + x) * (-(x * x / 2.0 + x)).exp();
        assert!((eval_psi(&g, x) - want).abs() <= 1e-14 * want.abs());
        assert!((eval_psi(&g, -x) - want).abs() <= 1e-14 * want.abs());
    }
    assert_eq!(derivative_jump(&g, 3).unwrap(), (-2.0, 2.0));
}

#[test]
fn tails_decay_with_wide_window() {
    for problem in [QesProblem::even(3), QesProblem::odd(4)] {
        for sol in solve(problem, 12).unwrap() {
            let x_max = sol.d().abs() + 8.0;
            let grid = sample(&sol, x_max, 801).unwrap();
            let max = grid.psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(grid.psi[800].abs() < 1e-6 * max);
            assert!(grid.psi[0].abs() < 1e-6 * max);
        }
    }
}

#[test]
fn c1_matching_and_node_parity() {
    for n in 1..=8 {
        for parity in [Parity::Even, Parity::Odd] {
            for sol in solve(QesProblem::new(n, parity), 12).unwrap() {
                let (l0, r0) = derivative_jump_exact(&sol, 0).unwrap();
                let (l1, r1) = derivative_jump_exact(&sol, 1).unwrap();
                assert_eq!(l0, r0);
                assert_eq!(l1, r1);
                match parity {
                    Parity::Even => assert!(r1.is_zero()),
                    Parity::Odd => assert!(r0.is_zero()),
                }
                let nodes = count_nodes(&sol).unwrap();
                assert_eq!(nodes % 2 == 1, parity == Parity::Odd);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn parity_mirror(n in 1usize..=6, odd in any::<bool>(), root in 0usize..8, x in 0.0f64..7.0) {
        let parity = if odd { Parity::Odd } else { Parity::Even };
        let sols = solve(QesProblem::new(n, parity), 12).unwrap();
        prop_assume!(!sols.is_empty());
        let sol = &sols[root % sols.len()];
        let a = eval_psi(sol, x);
        let b = eval_psi(sol, -x);
        prop_assert!((a - parity.sign() * b).abs() <= 1e-14 * a.abs());
    }

    #[test]
    fn half_line_schrodinger_residual(n in 1usize..=6, odd in any::<bool>(), root in 0usize..8, x in 0.01f64..8.0) {
        let parity = if odd { Parity::Odd } else { Parity::Even };
        let sols = solve(QesProblem::new(n, parity), 14).unwrap();
        prop_assume!(!sols.is_empty());
        let sol = &sols[root % sols.len()];
        let d = sol.d();
        let psi = eval_psi(sol, x);
        let second = eval_psi_second_derivative(sol, x);
        let v = (x - d).powi(2);
        let e = sol.energy as f64;
        let res = -second + v * psi - e * psi;
        let scale = second.abs() + (v + e) * psi.abs();
        prop_assert!(res.abs() < 1e-8 * scale.max(f64::MIN_POSITIVE), "res {res} scale {scale}");
    }
}
