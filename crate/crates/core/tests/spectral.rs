use spiked_qes::spectrum::{discretize, gap_at, DEFAULT_MARGIN};
use spiked_qes::{
    count_nodes, lowest_eigenvalues, solve, validate_solution, Parity, QesProblem, QesSolution,
    SpectrumOverrides, SpectrumRequest,
};

fn all_solutions(max_degree: usize) -> Vec<QesSolution> {
    (1..=max_degree)
        .flat_map(|n| [QesProblem::even(n), QesProblem::odd(n)])
        .flat_map(|p| solve(p, 12).unwrap())
        .collect()
}

#[test]
fn qes_energies_appear_at_node_index() {
    for sol in all_solutions(5) {
        let m = validate_solution(&sol, None).unwrap().matched.unwrap();
        assert!(m.gap < 5e-3, "{} d={}: gap {}", sol.problem, sol.d(), m.gap);
        assert!(m.index_matches_nodes, "{} d={}", sol.problem, sol.d());
        let parity_ok = match sol.problem.parity {
            Parity::Even => m.node_count.is_multiple_of(2),
            Parity::Odd => m.node_count % 2 == 1,
        };
        assert!(parity_ok);
    }
}

#[test]
fn second_order_convergence() {
    for sol in all_solutions(4) {
        let index = count_nodes(&sol).unwrap();
        let g: Vec<f64> = [2000, 4000, 8000]
            .iter()
            .map(|&n| gap_at(&sol, index, n))
            .collect();
        for ratio in [g[0] / g[1], g[1] / g[2]] {
            assert!((3.4..=4.6).contains(&ratio), "{} d={}: {ratio}", sol.problem, sol.d());
        }
    }
}

#[test]
fn box_size_insensitive_at_fixed_spacing() {
    for sol in all_solutions(3) {
        let d = sol.d();
        let small = SpectrumOverrides {
            half_width: Some(d.abs() + DEFAULT_MARGIN),
            points: Some(4001),
        };
        let h = 2.0 * small.half_width.unwrap() / 4002.0;
        // widen by ~4 keeping h: n + 1 = 2L / h must stay an even integer
        let cells = ((2.0 * (d.abs() + DEFAULT_MARGIN + 4.0) / h) / 2.0).round() as usize * 2;
        let large = SpectrumOverrides {
            half_width: Some(cells as f64 * h / 2.0),
            points: Some(cells - 1),
        };
        let a = validate_solution(&sol, Some(small)).unwrap();
        let b = validate_solution(&sol, Some(large)).unwrap();
        assert!((a.h - b.h).abs() < 1e-15);
        let (ma, mb) = (a.matched.unwrap(), b.matched.unwrap());
        assert!(
            (ma.nearest_eigenvalue - mb.nearest_eigenvalue).abs() < 1e-8,
            "{} d={d}",
            sol.problem
        );
    }
}

#[test]
fn inertia_window_holds_an_eigenvalue() {
    for sol in all_solutions(8) {
        let t = discretize(&SpectrumRequest::new(sol.d(), 1));
        let e = sol.energy as f64;
        assert!(t.count_below(e + 0.5) - t.count_below(e - 0.5) >= 1);
    }
}

#[test]
fn spectrum_is_nonnegative() {
    for d in [-3.0, -1.0, 0.0, 0.7, 2.5] {
        let r = lowest_eigenvalues(&SpectrumRequest::new(d, 8)).unwrap();
        assert!(r.eigenvalues.iter().all(|&e| e >= 0.0));
        assert!(r.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn even_n2_shift_has_energy_five() {
    let r = lowest_eigenvalues(&SpectrumRequest::new(1.5811388, 6)).unwrap();
    assert!(r.eigenvalues.iter().any(|e| (e - 5.0).abs() < 5e-3));
}
