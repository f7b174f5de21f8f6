//! Sturm chains, certified real-root isolation and bisection refinement.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{rat, sign_of, Rational, RationalPoly};

/// Sturm sequence `p, p', -rem(p, p'), ...` built with exact remainders.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<RationalPoly>,
}

impl SturmChain {
    pub fn new(p: &RationalPoly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut chain = vec![p.clone()];
        let mut next = p.derivative();
        while !next.is_zero() {
            let prev = chain.last().expect("chain is non-empty");
            let r = -prev.remainder(&next)?;
            chain.push(next);
            next = r;
        }
        Ok(SturmChain { chain })
    }

    pub fn polys(&self) -> &[RationalPoly] {
        &self.chain
    }

    fn variations<I: IntoIterator<Item = i8>>(signs: I) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in signs.into_iter().filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Sign variations of the chain evaluated exactly at `x`.
    pub fn variations_at(&self, x: &Rational) -> usize {
        Self::variations(self.chain.iter().map(|q| q.sign_at(x)))
    }

    /// Sign variations at `+inf` (or `-inf`), read off leading coefficients.
    pub fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::variations(self.chain.iter().map(|q| {
            let s = sign_of(q.leading_coeff().expect("chain entries are nonzero"));
            let odd = q.degree().unwrap_or(0) % 2 == 1;
            if !positive && odd {
                -s
            } else {
                s
            }
        }))
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count_between(&self, lo: &Rational, hi: &Rational) -> usize {
        self.variations_at(lo).saturating_sub(self.variations_at(hi))
    }

    /// Number of distinct real roots in `(lo, +inf)`.
    pub fn count_above(&self, lo: &Rational) -> usize {
        self.variations_at(lo)
            .saturating_sub(self.variations_at_infinity(true))
    }

    pub fn count_real(&self) -> usize {
        self.variations_at_infinity(false)
            .saturating_sub(self.variations_at_infinity(true))
    }
}

/// Open interval `(lo, hi)` holding exactly one distinct real root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootBracket {
    pub lo: Rational,
    pub hi: Rational,
    /// Sign of the polynomial at `lo`.
    pub sign_lo: i8,
    /// Sign of the polynomial at `hi`.
    pub sign_hi: i8,
    /// Multiplicity of the enclosed root in the polynomial that was isolated.
    pub multiplicity: usize,
}

impl RootBracket {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / rat(2)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo < x && x < &self.hi
    }
}

/// Strict bound `B` with every root satisfying `|x| < B`: `1 + max |a_i / a_n|`.
pub fn cauchy_bound(p: &RationalPoly) -> Result<Rational> {
    let lc = p.leading_coeff().ok_or(Error::ZeroPolynomial)?.abs();
    let n = p.degree().unwrap_or(0);
    let max = p.coeffs()[..n]
        .iter()
        .map(|c| c.abs() / &lc)
        .max()
        .unwrap_or_else(Rational::zero);
    Ok(max + Rational::one())
}

/// Isolates every distinct real root of `p` in a disjoint, ascending list of
/// brackets. Roots of the squarefree part are isolated; multiplicities come
/// from a squarefree factorization.
pub fn isolate_real_roots(p: &RationalPoly) -> Result<Vec<RootBracket>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.is_constant() {
        return Ok(Vec::new());
    }
    let sqf = p.squarefree_part()?;
    let chain = SturmChain::new(&sqf)?;
    let bound = cauchy_bound(&sqf)?;

    let mut found: Vec<(Rational, Rational)> = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        match chain.count_between(&lo, &hi) {
            0 => {}
            1 => found.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / rat(2);
                if sqf.sign_at(&mid) == 0 {
                    let (a, b) = isolate_exact_root(&sqf, &chain, &mid, &(&hi - &lo));
                    stack.push((b.clone(), hi));
                    stack.push((lo, a.clone()));
                    found.push((a, b));
                } else {
                    stack.push((mid.clone(), hi));
                    stack.push((lo, mid));
                }
            }
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));

    let factors = p.squarefree_factors()?;
    let factor_chains = factors
        .iter()
        .map(|(f, m)| Ok((SturmChain::new(f)?, *m)))
        .collect::<Result<Vec<_>>>()?;

    Ok(found
        .into_iter()
        .map(|(lo, hi)| {
            let multiplicity = factor_chains
                .iter()
                .find(|(c, _)| c.count_between(&lo, &hi) > 0)
                .map_or(1, |(_, m)| *m);
            RootBracket {
                sign_lo: p.sign_at(&lo),
                sign_hi: p.sign_at(&hi),
                lo,
                hi,
                multiplicity,
            }
        })
        .collect())
}

/// Shrinks a symmetric window around an exact root until it isolates it with
/// non-root endpoints.
fn isolate_exact_root(
    sqf: &RationalPoly,
    chain: &SturmChain,
    root: &Rational,
    width: &Rational,
) -> (Rational, Rational) {
    let mut eps = width / rat(4);
    loop {
        let a = root - &eps;
        let b = root + &eps;
        if sqf.sign_at(&a) != 0 && sqf.sign_at(&b) != 0 && chain.count_between(&a, &b) == 1 {
            return (a, b);
        }
        eps /= rat(2);
    }
}

fn validate_bracket(p: &RationalPoly, b: &RootBracket) -> Result<(RationalPoly, SturmChain)> {
    if b.lo >= b.hi {
        return Err(Error::InvalidBracket("lo must be below hi".into()));
    }
    let sqf = p.squarefree_part()?;
    let chain = SturmChain::new(&sqf)?;
    if sqf.sign_at(&b.lo) == 0 || sqf.sign_at(&b.hi) == 0 {
        return Err(Error::InvalidBracket("endpoint is a root".into()));
    }
    let count = chain.count_between(&b.lo, &b.hi);
    if count != 1 {
        return Err(Error::InvalidBracket(format!(
            "bracket holds {count} distinct roots"
        )));
    }
    Ok((sqf, chain))
}

/// Bisects `b` until its width is at most `width`, keeping a root-free pair
/// of endpoints. If a midpoint lands exactly on the root the result is the
/// degenerate bracket `lo == hi == root`.
fn bisect(sqf: &RationalPoly, b: &RootBracket, width: &Rational) -> (Rational, Rational) {
    let (mut lo, mut hi) = (b.lo.clone(), b.hi.clone());
    let s_lo = sqf.sign_at(&lo);
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / rat(2);
        let s = sqf.sign_at(&mid);
        if s == 0 {
            return (mid.clone(), mid);
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// `10^(-digits)` as an exact rational.
pub fn decimal_tolerance(digits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(10).pow(digits))
}

/// Narrows a valid bracket to width below `10^(-digits)`.
///
/// Returns the bracket and, if one was found, an exact rational root inside it.
pub fn narrow_bracket(
    p: &RationalPoly,
    b: &RootBracket,
    digits: u32,
) -> Result<(RootBracket, Option<Rational>)> {
    let (sqf, _) = validate_bracket(p, b)?;
    let tol = decimal_tolerance(digits);
    let (lo, hi) = bisect(&sqf, b, &(&tol / rat(2)));
    if lo == hi {
        let exact = lo;
        let lo = &exact - &tol / rat(4);
        let hi = &exact + &tol / rat(4);
        let out = RootBracket {
            sign_lo: p.sign_at(&lo),
            sign_hi: p.sign_at(&hi),
            lo,
            hi,
            multiplicity: b.multiplicity,
        };
        return Ok((out, Some(exact)));
    }
    let simple = simplest_in(&lo, &hi);
    let exact = (sqf.sign_at(&simple) == 0).then_some(simple);
    let out = RootBracket {
        sign_lo: p.sign_at(&lo),
        sign_hi: p.sign_at(&hi),
        lo,
        hi,
        multiplicity: b.multiplicity,
    };
    Ok((out, exact))
}

/// Rational approximation of the root in `b` with error below `10^(-digits)`.
///
/// Pure midpoint bisection, so the result depends only on the inputs.
/// Rational roots whose denominator is small relative to the precision are
/// returned exactly.
pub fn refine_root(p: &RationalPoly, b: &RootBracket, digits: u32) -> Result<Rational> {
    let (narrow, exact) = narrow_bracket(p, b, digits)?;
    Ok(exact.unwrap_or_else(|| narrow.midpoint()))
}

/// The rational with the smallest denominator in the closed interval `[lo, hi]`.
pub fn simplest_in(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    if lo <= &Rational::zero() && &Rational::zero() <= hi {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_in(&-hi, &-lo);
    }
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let next = &fl + Rational::one();
    if &next <= hi {
        return next;
    }
    let inner = simplest_in(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}
