//! Finite-difference spectrum of `H = -d^2/dx^2 + (|x| - d)^2` in a box.
//!
//! Second-order central differences with Dirichlet walls at `+-L` give a
//! symmetric tridiagonal matrix. Eigenvalues are located by bisection on the
//! inertia count (number of negative pivots of `T - lambda I`), which is
//! monotone in `lambda` and needs no convergence tuning.

use crate::error::{Error, Result};
use crate::family::QesSolution;
use crate::wavefunction::count_nodes;

/// Relative bracket width at which eigenvalue bisection stops.
pub const EIGEN_REL_TOL: f64 = 1e-13;

/// Default gap tolerance for matching `E = 2N + 1` at `L = |d| + 10`, `n ~ 4000`.
pub const MATCH_TOL: f64 = 5e-3;

pub const DEFAULT_MARGIN: f64 = 10.0;
pub const DEFAULT_POINTS: usize = 4000;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumRequest {
    pub d: f64,
    /// Half-width `L` of the box.
    pub half_width: f64,
    /// Requested interior points; even values are bumped to the next odd one
    /// so the kink at `x = 0` lies on a grid node.
    pub points: usize,
    /// Number of lowest eigenvalues.
    pub count: usize,
}

impl SpectrumRequest {
    pub fn new(d: f64, count: usize) -> Self {
        SpectrumRequest {
            d,
            half_width: d.abs() + DEFAULT_MARGIN,
            points: DEFAULT_POINTS,
            count,
        }
    }

    pub fn effective_points(&self) -> usize {
        self.points | 1
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.effective_points() + 1) as f64
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width.is_finite() && self.half_width > 0.0) {
            return Err(Error::InvalidRequest(format!(
                "half-width must be positive, got {}",
                self.half_width
            )));
        }
        if !self.d.is_finite() {
            return Err(Error::InvalidRequest("shift must be finite".into()));
        }
        if self.points < 16 {
            return Err(Error::InvalidRequest(format!(
                "need at least 16 interior points, got {}",
                self.points
            )));
        }
        if self.count == 0 || self.count > self.effective_points() {
            return Err(Error::InvalidRequest(format!(
                "eigenvalue count {} outside 1..={}",
                self.count,
                self.effective_points()
            )));
        }
        Ok(())
    }
}

/// Symmetric tridiagonal matrix with a constant off-diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: f64,
    pub xs: Vec<f64>,
    pub h: f64,
}

impl Tridiagonal {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `lambda`.
    pub fn count_below(&self, lambda: f64) -> usize {
        let e2 = self.off * self.off;
        // Tiny pivots are replaced by -pivmin, as in LAPACK's dstebz.
        let pivmin = f64::MIN_POSITIVE.max(e2 * f64::EPSILON * f64::EPSILON);
        let mut count = 0;
        let mut q = 1.0;
        for (i, &a) in self.diag.iter().enumerate() {
            q = if i == 0 { a - lambda } else { a - lambda - e2 / q };
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the spectrum.
    pub fn bounds(&self) -> (f64, f64) {
        let r = 2.0 * self.off.abs();
        let lo = self.diag.iter().cloned().fold(f64::INFINITY, f64::min) - r;
        let hi = self.diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + r;
        (lo, hi)
    }

    /// The `index`-th eigenvalue (0-based, ascending) by bisection within
    /// `[lo, hi]`, which must satisfy `count_below(lo) <= index < count_below(hi)`.
    pub fn eigenvalue_in(&self, index: usize, mut lo: f64, mut hi: f64) -> f64 {
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= EIGEN_REL_TOL * lo.abs().max(hi.abs()) {
                return mid;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }

    pub fn eigenvalue(&self, index: usize) -> f64 {
        let (lo, hi) = self.bounds();
        self.eigenvalue_in(index, lo, hi)
    }

    /// The `index`-th eigenvalue, bracketed by stepping outward from `guess`.
    pub fn eigenvalue_near(&self, index: usize, guess: f64) -> f64 {
        let (lo_bound, hi_bound) = self.bounds();
        let (mut lo, mut hi) = (guess, guess);
        let mut step = 1.0;
        while lo > lo_bound && self.count_below(lo) > index {
            lo = (lo - step).max(lo_bound);
            step *= 2.0;
        }
        step = 1.0;
        while hi < hi_bound && self.count_below(hi) <= index {
            hi = (hi + step).min(hi_bound);
            step *= 2.0;
        }
        self.eigenvalue_in(index, lo, hi)
    }

    /// The `k` smallest eigenvalues, ascending.
    pub fn lowest(&self, k: usize) -> Vec<f64> {
        let (lo, _) = self.bounds();
        let mut out = Vec::with_capacity(k);
        let mut floor = lo;
        for index in 0..k {
            let ev = self.eigenvalue_near(index, floor);
            out.push(ev);
            floor = ev;
        }
        out
    }
}

/// Potential `(|x| - d)^2`.
pub fn potential(x: f64, d: f64) -> f64 {
    let t = x.abs() - d;
    t * t
}

/// Grid `x_i = -L + i h`, `i = 1..=n`, `h = 2L / (n + 1)`; diagonal
/// `2/h^2 + V(x_i)`, off-diagonal `-1/h^2`.
pub fn discretize(req: &SpectrumRequest) -> Tridiagonal {
    let n = req.effective_points();
    let h = req.spacing();
    let mid = n.div_ceil(2);
    // Offsets from the central node keep the grid exactly symmetric with x = 0 on it.
    let xs: Vec<f64> = (1..=n)
        .map(|i| (i as f64 - mid as f64) * h)
        .collect();
    let inv_h2 = 1.0 / (h * h);
    let diag = xs.iter().map(|&x| 2.0 * inv_h2 + potential(x, req.d)).collect();
    Tridiagonal {
        diag,
        off: -inv_h2,
        xs,
        h,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumMatch {
    pub target_energy: f64,
    pub nearest_eigenvalue: f64,
    pub gap: f64,
    pub eigenindex: usize,
    pub node_count: usize,
    pub index_matches_nodes: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<f64>,
    pub h: f64,
    pub half_width: f64,
    /// Interior points actually used (always odd).
    pub points: usize,
    pub matched: Option<SpectrumMatch>,
}

impl SpectrumReport {
    /// Index and value of the eigenvalue closest to `target`.
    pub fn nearest(&self, target: f64) -> Option<(usize, f64)> {
        self.eigenvalues
            .iter()
            .cloned()
            .enumerate()
            .min_by(|a, b| (a.1 - target).abs().total_cmp(&(b.1 - target).abs()))
    }
}

pub fn lowest_eigenvalues(req: &SpectrumRequest) -> Result<SpectrumReport> {
    req.validate()?;
    let t = discretize(req);
    Ok(SpectrumReport {
        eigenvalues: t.lowest(req.count),
        h: t.h,
        half_width: req.half_width,
        points: t.len(),
        matched: None,
    })
}

/// Overrides for the grid used by [`validate_solution`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SpectrumOverrides {
    pub half_width: Option<f64>,
    pub points: Option<usize>,
}

/// Confirms that `E = 2N + 1` is an eigenvalue of the discretized operator
/// at the solution's shift, at the index given by the node count.
pub fn validate_solution(
    sol: &QesSolution,
    overrides: Option<SpectrumOverrides>,
) -> Result<SpectrumReport> {
    let nodes = count_nodes(sol)?;
    let o = overrides.unwrap_or_default();
    let d = sol.d();
    let req = SpectrumRequest {
        d,
        half_width: o.half_width.unwrap_or(d.abs() + DEFAULT_MARGIN),
        points: o.points.unwrap_or(DEFAULT_POINTS),
        count: nodes + 3,
    };
    let mut report = lowest_eigenvalues(&req)?;
    let target = sol.energy as f64;
    let (eigenindex, nearest) = report.nearest(target).expect("count >= 1");
    report.matched = Some(SpectrumMatch {
        target_energy: target,
        nearest_eigenvalue: nearest,
        gap: (nearest - target).abs(),
        eigenindex,
        node_count: nodes,
        index_matches_nodes: eigenindex == nodes,
    });
    Ok(report)
}

/// Gap `|lambda - (2N+1)|` for the eigenvalue at `index` on a grid of
/// `points` interior nodes, with the default box.
pub fn gap_at(sol: &QesSolution, index: usize, points: usize) -> f64 {
    let req = SpectrumRequest {
        d: sol.d(),
        half_width: sol.d().abs() + DEFAULT_MARGIN,
        points,
        count: index + 1,
    };
    let t = discretize(&req);
    let target = sol.energy as f64;
    (t.eigenvalue_near(index, target) - target).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{solve, QesProblem};

    #[test]
    fn discretize_examples() {
        let t = discretize(&SpectrumRequest::new(0.0, 1));
        let n = t.len();
        assert_eq!(n % 2, 1);
        for i in 0..n {
            assert_eq!(t.diag[i], t.diag[n - 1 - i]);
            let x = t.xs[i];
            assert!((t.diag[i] - (2.0 / (t.h * t.h) + x * x)).abs() < 1e-9);
        }
        assert_eq!(t.xs[n / 2], 0.0);
        assert_eq!(potential(1.0, 1.0), 0.0);
        assert_eq!(potential(0.0, -1.0), 1.0);
    }

    #[test]
    fn even_points_bumped_to_odd() {
        let req = SpectrumRequest::new(0.5, 2);
        assert_eq!(req.effective_points(), 4001);
        assert_eq!(lowest_eigenvalues(&req).unwrap().points, 4001);
    }

    #[test]
    fn count_is_monotone_and_complete() {
        let mut req = SpectrumRequest::new(0.3, 1);
        req.points = 33;
        let t = discretize(&req);
        let (lo, hi) = t.bounds();
        assert_eq!(t.count_below(lo), 0);
        assert_eq!(t.count_below(hi), t.len());
        let all = t.lowest(t.len());
        // high states pair up near the two walls, so only weak ordering holds
        for w in all.windows(2) {
            assert!(w[0] <= w[1] * (1.0 + 1e-12), "{} > {}", w[0], w[1]);
        }
        for (i, ev) in all.iter().enumerate() {
            assert!(t.count_below(*ev * (1.0 + 1e-12) + 1e-12) > i);
        }
    }

    #[test]
    fn small_matrix_against_closed_form() {
        // V = 0 limit: eigenvalues of tridiag(2, -1)/h^2 are (2 - 2cos(k pi/(n+1)))/h^2.
        let n = 17;
        let h = 0.1;
        let t = Tridiagonal {
            diag: vec![2.0 / (h * h); n],
            off: -1.0 / (h * h),
            xs: vec![0.0; n],
            h,
        };
        for (k, ev) in t.lowest(n).into_iter().enumerate() {
            let want = (2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos())
                / (h * h);
            assert!((ev - want).abs() < 1e-9 * want);
        }
    }

    #[test]
    fn harmonic_spectrum() {
        let report = lowest_eigenvalues(&SpectrumRequest::new(0.0, 4)).unwrap();
        for (ev, want) in report.eigenvalues.iter().zip([1.0, 3.0, 5.0, 7.0]) {
            assert!((ev - want).abs() < 5e-3);
        }
    }

    #[test]
    fn single_well_ground_state() {
        let report = lowest_eigenvalues(&SpectrumRequest::new(-1.0, 1)).unwrap();
        assert!((report.eigenvalues[0] - 3.0).abs() < 5e-3);
    }

    #[test]
    fn odd_n2_shift_has_energy_five() {
        let report =
            lowest_eigenvalues(&SpectrumRequest::new(std::f64::consts::FRAC_1_SQRT_2, 6)).unwrap();
        assert!(report.eigenvalues.iter().any(|e| (e - 5.0).abs() < 5e-3));
        assert!(report.eigenvalues.iter().all(|&e| e >= 0.0));
    }

    #[test]
    fn request_validation() {
        let mut req = SpectrumRequest::new(0.0, 3);
        req.points = 8;
        assert!(matches!(lowest_eigenvalues(&req), Err(Error::InvalidRequest(_))));
        let mut req = SpectrumRequest::new(0.0, 5000);
        req.points = 4000;
        assert!(lowest_eigenvalues(&req).is_err());
        let mut req = SpectrumRequest::new(0.0, 1);
        req.half_width = -1.0;
        assert!(lowest_eigenvalues(&req).is_err());
    }

    #[test]
    fn validate_examples() {
        let sols = solve(QesProblem::even(1), 12).unwrap();
        let m = validate_solution(&sols[0], None).unwrap().matched.unwrap();
        assert_eq!((m.eigenindex, m.node_count), (0, 0));
        assert!(m.index_matches_nodes && m.gap < 5e-3);
        let m = validate_solution(&sols[1], None).unwrap().matched.unwrap();
        assert_eq!((m.eigenindex, m.node_count), (2, 2));
        assert!(m.index_matches_nodes && m.gap < 5e-3);

        let quad = solve(QesProblem::even(3), 12).unwrap();
        let top = quad.last().unwrap();
        assert!((top.d() - 2.034_074_386_254_762).abs() < 1e-12);
        let m = validate_solution(top, None).unwrap().matched.unwrap();
        assert!(m.gap < 5e-3);
    }
}
