//! Full-line QES wavefunctions.
//!
//! On `x >= 0`, `psi(x) = exp(-x^2/2 + d x) * p(x)`; for `x < 0` the value is
//! mirrored with the parity sign.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::family::{Parity, QesSolution};
use crate::poly::{rat, to_f64, Rational, RationalPoly};
use crate::roots::{decimal_tolerance, simplest_in, SturmChain};

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// `psi(x)` with the unnormalized convention of the coefficient table.
pub fn eval_psi(sol: &QesSolution, x: f64) -> f64 {
    let d = sol.d();
    let half = |t: f64| (-0.5 * t * t + d * t).exp() * horner(&sol.coefficients, t);
    if x >= 0.0 {
        half(x)
    } else {
        sol.problem.parity.sign() * half(-x)
    }
}

/// `psi''` on the half-line `x > 0`, from the closed form.
pub fn eval_psi_second_derivative(sol: &QesSolution, x: f64) -> f64 {
    let d = sol.d();
    let p = &sol.coefficients;
    let dp: Vec<f64> = p.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect();
    let ddp: Vec<f64> = dp.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect();
    let g1 = d - x;
    let poly = horner(&ddp, x) + 2.0 * g1 * horner(&dp, x) + (g1 * g1 - 1.0) * horner(p, x);
    (-0.5 * x * x + d * x).exp() * poly
}

/// Uniformly sampled wavefunction on a symmetric grid.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveGrid {
    pub xs: Vec<f64>,
    pub psi: Vec<f64>,
    /// `psi / norm`.
    pub psi_normalized: Vec<f64>,
    /// L2 norm of `psi` by composite Simpson on the grid.
    pub norm: f64,
}

/// Composite Simpson rule on uniformly spaced samples (odd count, at least 3).
/// Error is `O(h^4)` for smooth integrands; the kink at the origin sits on a
/// node so each half-grid is smooth.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    debug_assert!(values.len() >= 3 && values.len() % 2 == 1);
    let last = values.len() - 1;
    let inner: f64 = values[1..last]
        .iter()
        .enumerate()
        .map(|(i, v)| if i % 2 == 0 { 4.0 * v } else { 2.0 * v })
        .sum();
    h / 3.0 * (values[0] + inner + values[last])
}

/// Samples `psi` on `n_points` uniform points spanning `[-x_max, x_max]`.
/// `n_points` must be odd so the origin is a grid point.
pub fn sample(sol: &QesSolution, x_max: f64, n_points: usize) -> Result<WaveGrid> {
    if !(x_max.is_finite() && x_max > 0.0) {
        return Err(Error::InvalidGrid(format!("x_max must be positive, got {x_max}")));
    }
    if n_points < 3 || n_points.is_multiple_of(2) {
        return Err(Error::InvalidGrid(format!(
            "n_points must be odd and at least 3, got {n_points}"
        )));
    }
    let m = (n_points - 1) as f64;
    // Written so that xs[mid] == 0 and xs[n-1-i] == -xs[i] exactly.
    let xs: Vec<f64> = (0..n_points)
        .map(|i| x_max * (2.0 * i as f64 - m) / m)
        .collect();
    let psi: Vec<f64> = xs.iter().map(|&x| eval_psi(sol, x)).collect();
    let h = 2.0 * x_max / m;
    let sq: Vec<f64> = psi.iter().map(|v| v * v).collect();
    let norm = simpson(&sq, h).sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::InvalidGrid(format!("degenerate norm {norm}")));
    }
    let psi_normalized = psi.iter().map(|v| v / norm).collect();
    Ok(WaveGrid {
        xs,
        psi,
        psi_normalized,
        norm,
    })
}

/// Polynomial part `p(x)` at an exact shift, with the origin zero of odd
/// parity divided out.
fn half_line_polynomial(sol: &QesSolution, d: &Rational) -> RationalPoly {
    let p = RationalPoly::new(sol.table.eval_at(d));
    match sol.problem.parity {
        Parity::Even => p,
        Parity::Odd => p.strip_x_power().1,
    }
}

/// Distinct positive roots of the polynomial part at shift `d`, or an error
/// if a root sits within `guard` of the origin.
fn positive_roots(sol: &QesSolution, d: &Rational, guard: &Rational) -> Result<usize> {
    let p = half_line_polynomial(sol, d);
    if p.is_zero() {
        return Err(Error::NodePrecision("polynomial part vanished".into()));
    }
    let chain = SturmChain::new(&p)?;
    let zero = Rational::zero();
    if chain.count_between(&zero, guard) != 0 {
        return Err(Error::NodePrecision(format!(
            "polynomial root within {} of the origin",
            to_f64(guard)
        )));
    }
    Ok(chain.count_above(&zero))
}

fn count_nodes_at(sol: &QesSolution) -> Result<usize> {
    let guard = decimal_tolerance(sol.digits.saturating_sub(2));
    // Low-height rational proxies keep the exact Sturm chains small: one near
    // each end of the shift bracket and one in the middle.
    let (lo, hi) = (&sol.d_bracket.lo, &sol.d_bracket.hi);
    let quarter = (hi - lo) / rat(4);
    let probes = [
        simplest_in(lo, &(lo + &quarter)),
        simplest_in(&(lo + &quarter), &(hi - &quarter)),
        simplest_in(&(hi - &quarter), hi),
    ];
    let counts = probes
        .iter()
        .map(|d| positive_roots(sol, d, &guard))
        .collect::<Result<Vec<_>>>()?;
    if counts.iter().any(|&c| c != counts[1]) {
        return Err(Error::NodePrecision(format!(
            "node count varies across the shift bracket: {counts:?}"
        )));
    }
    let origin = usize::from(sol.problem.parity == Parity::Odd);
    Ok(2 * counts[1] + origin)
}

/// Number of distinct real zeros of `psi` on the whole line.
///
/// Positive roots of the polynomial part are Sturm-counted exactly at three
/// rational shifts spread across the certified bracket; if they disagree,
/// or a root falls within `10^(2-digits)` of the origin, the shift is
/// refined with more digits and the count retried once.
pub fn count_nodes(sol: &QesSolution) -> Result<usize> {
    match count_nodes_at(sol) {
        Ok(n) => Ok(n),
        Err(Error::NodePrecision(_)) => count_nodes_at(&sol.refined(sol.digits + 10)?),
        Err(e) => Err(e),
    }
}

/// Exact one-sided limits `(psi^(order)(0-), psi^(order)(0+))`.
///
/// With `g(x) = -x^2/2 + d x`, right derivatives are `exp(g) q_m` where
/// `q_0 = p` and `q_{m+1} = q_m' + (d - x) q_m`; at the origin `exp(g) = 1`.
/// The left limit is `parity_sign * (-1)^order` times the right one.
pub fn derivative_jump_exact(sol: &QesSolution, order: u32) -> Result<(Rational, Rational)> {
    if order > 3 {
        return Err(Error::UnsupportedOrder(order));
    }
    let drift = RationalPoly::new(vec![sol.d_value.clone(), -Rational::one()]);
    let mut q = RationalPoly::new(sol.exact_coefficients());
    for _ in 0..order {
        q = &q.derivative() + &(&drift * &q);
    }
    let right = q.coeff(0);
    let mut factor = rat(if order.is_multiple_of(2) { 1 } else { -1 });
    if sol.problem.parity == Parity::Odd {
        factor = -factor;
    }
    Ok((&right * &factor, right))
}

pub fn derivative_jump(sol: &QesSolution, order: u32) -> Result<(f64, f64)> {
    let (l, r) = derivative_jump_exact(sol, order)?;
    Ok((to_f64(&l), to_f64(&r)))
}
