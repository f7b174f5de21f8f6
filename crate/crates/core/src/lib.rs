//! Exact construction and numerical verification of the quasi-exactly
//! solvable (QES) bound states of the spiked harmonic oscillator
//! `V(x) = (|x| - d)^2`.
//!
//! On the half-line `x >= 0` a QES state has the form
//! `psi(x) = exp(-x^2/2 + d x) * p(x)` with `p` a polynomial of degree `N`,
//! extended to `x < 0` by parity. The energy is always `E = 2N + 1`; the
//! admissible shifts `d` are the nonzero real roots of a condition
//! polynomial built from a tridiagonal continuant.
//!
//! Modules, bottom-up:
//!
//! * [`poly`] and [`roots`]: exact rational polynomials, Sturm chains and
//!   certified root isolation.
//! * [`family`]: coefficient polynomials `a_k(d)`, condition polynomials and
//!   assembled solutions.
//! * [`wavefunction`]: evaluation, sampling, node counting and one-sided
//!   derivatives at the origin.
//! * [`spectrum`]: an independent finite-difference eigenvalue oracle.

pub mod error;
pub mod family;
pub mod poly;
pub mod roots;
pub mod spectrum;
pub mod wavefunction;

pub use error::{Error, Result};
pub use family::{
    coefficients_by_determinant, coefficients_by_recurrence, condition_polynomial, ode_residual,
    reduced_condition, solve, CoefficientTable, Parity, QesProblem, QesSolution, ReducedCondition,
    WellType,
};
pub use poly::{Rational, RationalPoly};
pub use roots::{isolate_real_roots, refine_root, RootBracket, SturmChain};
pub use spectrum::{
    discretize, lowest_eigenvalues, validate_solution, SpectrumMatch, SpectrumOverrides,
    SpectrumReport, SpectrumRequest, Tridiagonal,
};
pub use wavefunction::{
    count_nodes, derivative_jump, derivative_jump_exact, eval_psi, sample, WaveGrid,
};
