//! Dense univariate polynomials with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Dense polynomial `sum coeffs[i] x^i`.
///
/// Canonical form: no trailing zero coefficients, so the zero polynomial is
/// the empty vector and `coeffs.last()` is the nonzero leading coefficient.
/// `BigRational` keeps every entry in lowest terms with a positive
/// denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, power: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); power + 1];
        coeffs[power] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Floating-point Horner evaluation with coefficients rounded to `f64`.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    /// Sign of `p(x)` as -1, 0 or +1.
    pub fn sign_at(&self, x: &Rational) -> i8 {
        sign_of(&self.eval(x))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Exact Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn remainder(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Quotient of a division known to be exact.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        debug_assert!(r.is_zero(), "exact_div left a remainder");
        Ok(q)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.remainder(&b).expect("divisor is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    /// Splits `p = content * primitive` where `primitive` has coprime integer
    /// coefficients and a positive leading coefficient.
    pub fn content_split(&self) -> Result<(Rational, Self)> {
        let lc = self.leading_coeff().ok_or(Error::ZeroPolynomial)?;
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = Rational::new(num_gcd, den_lcm);
        if lc.is_negative() {
            content = -content;
        }
        let primitive = self.scale(&content.recip());
        Ok((content, primitive))
    }

    /// Integer coefficients, if every coefficient is an integer.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    /// Largest `m` with `x^m | p`, and `p / x^m`. The zero polynomial yields `(0, 0)`.
    pub fn strip_x_power(&self) -> (usize, Self) {
        let m = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if m == self.coeffs.len() {
            return (0, Self::zero());
        }
        (m, Self::new(self.coeffs[m..].to_vec()))
    }

    /// True if every nonzero coefficient multiplies an even power.
    pub fn is_even(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| i % 2 == 0 || c.is_zero())
    }

    /// `p / gcd(p, p')`, made monic.
    pub fn squarefree_part(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = self.gcd(&self.derivative());
        Ok(self.exact_div(&g)?.monic())
    }

    /// Yun's squarefree factorization: `(factor, multiplicity)` pairs with
    /// non-constant, pairwise coprime, monic factors whose product (with
    /// multiplicities) is `p` up to a constant.
    pub fn squarefree_factors(&self) -> Result<Vec<(Self, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut out = Vec::new();
        if self.is_constant() {
            return Ok(out);
        }
        let dp = self.derivative();
        let a0 = self.gcd(&dp);
        let mut b = self.exact_div(&a0)?;
        let c = dp.exact_div(&a0)?;
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            let next_b = b.exact_div(&a)?;
            let next_c = d.exact_div(&a)?;
            if !a.is_constant() {
                out.push((a, i));
            }
            d = &next_c - &next_b.derivative();
            b = next_b;
            i += 1;
        }
        Ok(out)
    }

    /// Cross-multiplication test for `self = c * other` with `c != 0`.
    pub fn is_rational_multiple_of(&self, other: &Self) -> bool {
        match (self.leading_coeff(), other.leading_coeff()) {
            (Some(a), Some(b)) if self.degree() == other.degree() => {
                other.scale(a) == self.scale(b)
            }
            _ => false,
        }
    }

    /// Formats with the given variable name, descending powers: `2d^2 - 5`.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let abs = c.abs();
            let coef = if abs.is_integer() {
                abs.to_integer().to_string()
            } else {
                format!("({abs})")
            };
            match i {
                0 => out.push_str(&coef),
                _ => {
                    if !abs.is_one() {
                        out.push_str(&coef);
                    }
                    out.push_str(var);
                    if i > 1 {
                        out.push_str(&format!("^{i}"));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

pub fn sign_of(x: &Rational) -> i8 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Nearest-ish `f64` for a big rational, falling back to a scaled quotient
/// when numerator or denominator overflow `f64`.
pub fn to_f64(x: &Rational) -> f64 {
    if let Some(v) = x.to_f64().filter(|v| v.is_finite()) {
        return v;
    }
    let shift = x.numer().bits() as i64 - x.denom().bits() as i64 - 60;
    let scaled = if shift > 0 {
        Rational::new(x.numer().clone(), x.denom() << shift as usize)
    } else {
        Rational::new(x.numer() << (-shift) as usize, x.denom().clone())
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

fn add_coeffs(a: &[Rational], b: &[Rational], negate_b: bool) -> RationalPoly {
    let n = a.len().max(b.len());
    let zero = Rational::zero();
    RationalPoly::new(
        (0..n)
            .map(|i| {
                let x = a.get(i).unwrap_or(&zero);
                let y = b.get(i).unwrap_or(&zero);
                if negate_b {
                    x - y
                } else {
                    x + y
                }
            })
            .collect(),
    )
}

impl Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        add_coeffs(&self.coeffs, &rhs.coeffs, false)
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        add_coeffs(&self.coeffs, &rhs.coeffs, true)
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPoly::new(out)
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RationalPoly {
            type Output = RationalPoly;
            fn $m(self, rhs: RationalPoly) -> RationalPoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> RationalPoly {
        RationalPoly::from_ints(c)
    }

    #[test]
    fn canonical_zero_is_empty() {
        assert!(p(&[0, 0, 0]).is_zero());
        assert_eq!(p(&[0]).degree(), None);
        assert_eq!(p(&[1, 2, 0]).degree(), Some(1));
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(p(&[-5, 0, 2]).eval(&rat(0)), rat(-5));
        assert_eq!(RationalPoly::zero().eval(&ratio(7, 3)), rat(0));
        assert_eq!(RationalPoly::zero().eval_f64(2.5), 0.0);
        let d2 = (9.0 + 57f64.sqrt()) / 4.0;
        let quartic = p(&[3, 0, -9, 0, 2]);
        assert!(quartic.eval_f64(d2.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p(&[-5, 0, 2]).derivative(), p(&[0, 4]));
        assert!(p(&[7]).derivative().is_zero());
        assert_eq!(p(&[3, 0, -9, 0, 2]).derivative(), p(&[0, -18, 0, 8]));
    }

    #[test]
    fn remainder_examples() {
        assert!(p(&[0, 0, 1]).remainder(&p(&[0, 1])).unwrap().is_zero());
        assert_eq!(p(&[-5, 0, 2]).remainder(&p(&[0, 1])).unwrap(), p(&[-5]));
        assert!(p(&[0, -20, 0, 8])
            .remainder(&p(&[-5, 0, 2]))
            .unwrap()
            .is_zero());
        assert_eq!(
            p(&[1, 1]).remainder(&RationalPoly::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn content_split_examples() {
        let (c, prim) = p(&[0, -20, 0, 8]).content_split().unwrap();
        assert_eq!(c, rat(4));
        assert_eq!(prim, p(&[0, -5, 0, 2]));

        let (c, prim) = p(&[-5, 0, 2]).content_split().unwrap();
        assert_eq!(c, rat(1));
        assert_eq!(prim, p(&[-5, 0, 2]));

        let half = RationalPoly::new(vec![rat(0), ratio(-1, 2)]);
        let (c, prim) = half.content_split().unwrap();
        assert_eq!(c, ratio(-1, 2));
        assert_eq!(prim, p(&[0, 1]));

        assert_eq!(
            RationalPoly::zero().content_split(),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x - 1)^2 (x + 2)
        let f = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[2, 1]);
        assert_eq!(f.gcd(&f.derivative()), p(&[-1, 1]));
        assert_eq!(f.squarefree_part().unwrap(), &p(&[-1, 1]) * &p(&[2, 1]));
        let factors = f.squarefree_factors().unwrap();
        assert_eq!(factors, vec![(p(&[2, 1]), 1), (p(&[-1, 1]), 2)]);
    }

    #[test]
    fn yun_handles_cube_only() {
        let cube = &(&p(&[0, 1]) * &p(&[0, 1])) * &p(&[0, 1]);
        assert_eq!(cube.squarefree_factors().unwrap(), vec![(p(&[0, 1]), 3)]);
    }

    #[test]
    fn strip_and_parity() {
        let (m, r) = p(&[0, -20, 0, 8]).strip_x_power();
        assert_eq!((m, r.clone()), (1, p(&[-20, 0, 8])));
        assert!(r.is_even());
        assert!(!p(&[0, 1]).is_even());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-5, 0, 2]).display_with("d"), "2d^2 - 5");
        assert_eq!(p(&[0, -1]).display_with("d"), "-d");
        assert_eq!(RationalPoly::zero().to_string(), "0");
    }

    #[test]
    fn to_f64_handles_huge_values() {
        let big = Rational::new(BigInt::from(10).pow(400), BigInt::from(10).pow(399));
        assert!((to_f64(&big) - 10.0).abs() < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly_strategy() -> impl Strategy<Value = RationalPoly> {
            prop::collection::vec((-20i64..=20, 1i64..=6), 1..7).prop_map(|cs| {
                RationalPoly::new(cs.into_iter().map(|(n, d)| ratio(n, d)).collect())
            })
        }

        proptest! {
            #[test]
            fn content_split_round_trips(f in poly_strategy()) {
                prop_assume!(!f.is_zero());
                let (c, prim) = f.content_split().unwrap();
                prop_assert_eq!(prim.scale(&c), f);
                prop_assert!(prim.integer_coeffs().is_some());
                prop_assert!(prim.leading_coeff().unwrap().is_positive());
            }

            #[test]
            fn division_identity(f in poly_strategy(), g in poly_strategy()) {
                prop_assume!(!g.is_zero());
                let (q, r) = f.div_rem(&g).unwrap();
                prop_assert_eq!(&(&q * &g) + &r, f);
                prop_assert!(r.degree() < g.degree() || r.is_zero());
            }
        }
    }
}
