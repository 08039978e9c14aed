//! Dense univariate polynomials over the integers.
//!
//! [`QPoly`] is used for polynomials in `q = |G|`, but nothing in the type
//! depends on the name of the variable: evaluated t-polynomials and
//! Bezoutian entries reuse it.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::AlgebraError;

/// Polynomial with arbitrary-precision integer coefficients, stored in
/// ascending order with no trailing zeros. The zero polynomial is empty.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        Self::new(vec![c.into()])
    }

    /// `c * q^k`.
    pub fn monomial<T: Into<BigInt>>(c: T, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c.into());
        Self::new(coeffs)
    }

    /// The polynomial `q`.
    pub fn var() -> Self {
        Self::monomial(1, 1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `q^k`, zero past the end.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, q0: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * q0 + c)
    }

    pub fn eval_i64(&self, q0: i64) -> BigInt {
        self.eval(&BigInt::from(q0))
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
            acc * x + BigRational::from_integer(c.clone())
        })
    }

    /// `p(q + c)`, by repeated synthetic division (Taylor shift).
    pub fn taylor_shift(&self, c: &BigInt) -> QPoly {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &a[j + 1] * c;
                a[j] += t;
            }
        }
        QPoly::new(a)
    }

    /// Re-expands `p` in the variable `u = q - 1`: the result `r` satisfies
    /// `r(q - 1) = p(q)`.
    pub fn shift_to_u(&self) -> QPoly {
        self.taylor_shift(&BigInt::one())
    }

    /// Inverse of [`QPoly::shift_to_u`].
    pub fn shift_from_u(&self) -> QPoly {
        self.taylor_shift(&-BigInt::one())
    }

    /// Exact division by `q^k`; `None` if some coefficient below `q^k` is nonzero.
    pub fn div_q_power(&self, k: usize) -> Option<QPoly> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return None;
        }
        Some(QPoly::new(self.coeffs.iter().skip(k).cloned().collect()))
    }

    pub fn mul_q_power(&self, k: usize) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QPoly { coeffs }
    }

    pub fn scale(&self, c: &BigInt) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Exact quotient `self / d` in `Z[q]`, or `None` if `d` does not divide.
    pub fn div_exact(&self, d: &QPoly) -> Option<QPoly> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(QPoly::zero());
        }
        let lead = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return None;
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let (qc, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &qc * dc;
            }
            quot[i] = qc;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(QPoly::new(quot))
        } else {
            None
        }
    }

    /// True when every coefficient up to the degree is strictly positive.
    pub fn all_coeffs_positive(&self) -> bool {
        !self.is_zero() && self.coeffs.iter().all(Signed::is_positive)
    }

    pub fn all_coeffs_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Unique polynomial of degree at most `degree_bound` through the samples.
    ///
    /// Extra samples beyond `degree_bound + 1` are checked against the
    /// interpolant; a rational (non-integral) interpolant is rejected.
    pub fn interpolate(samples: &[(BigInt, BigInt)], degree_bound: usize) -> Result<QPoly, AlgebraError> {
        let needed = degree_bound + 1;
        for (i, (x, y)) in samples.iter().enumerate() {
            if let Some((_, y2)) = samples[..i].iter().find(|(x2, _)| x2 == x) {
                if y2 != y {
                    return Err(AlgebraError::InconsistentSamples);
                }
            }
        }
        let mut distinct: Vec<&(BigInt, BigInt)> = Vec::new();
        for s in samples {
            if !distinct.iter().any(|d| d.0 == s.0) {
                distinct.push(s);
            }
        }
        if distinct.len() < needed {
            return Err(AlgebraError::InsufficientSamples {
                needed,
                got: distinct.len(),
            });
        }
        let (fit, extra) = distinct.split_at(needed);

        // Newton divided differences over Q.
        let xs: Vec<BigRational> = fit.iter().map(|s| BigRational::from_integer(s.0.clone())).collect();
        let mut dd: Vec<BigRational> = fit.iter().map(|s| BigRational::from_integer(s.1.clone())).collect();
        for level in 1..needed {
            for i in (level..needed).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
            }
        }
        // Expand the Newton form into monomial coefficients.
        let mut coeffs: Vec<BigRational> = vec![BigRational::zero()];
        for i in (0..needed).rev() {
            // coeffs <- coeffs * (q - xs[i]) + dd[i]
            let mut next = vec![BigRational::zero(); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &xs[i];
            }
            next[0] += &dd[i];
            coeffs = next;
        }
        let mut ints = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            if !c.is_integer() {
                return Err(AlgebraError::NonIntegerCoefficients);
            }
            ints.push(c.to_integer());
        }
        let p = QPoly::new(ints);
        if extra.iter().any(|(x, y)| &p.eval(x) != y) {
            return Err(AlgebraError::InconsistentSamples);
        }
        Ok(p)
    }

    /// Expanded form, descending in `q`, using `var` as the variable name and
    /// `^` for powers, e.g. `q^2 + 5q + 10`.
    pub fn to_plain(&self, var: &str) -> String {
        self.render(var, |k| format!("^{k}"), "")
    }

    /// LaTeX form in the style `q^{2} + 5 q + 10`.
    pub fn to_latex(&self, var: &str) -> String {
        self.render(var, |k| format!("^{{{k}}}"), " ")
    }

    fn render(&self, var: &str, pow: impl Fn(usize) -> String, sep: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            match k {
                0 => out.push_str(&mag.to_string()),
                _ => {
                    if !mag.is_one() {
                        out.push_str(&mag.to_string());
                        out.push_str(sep);
                    }
                    out.push_str(var);
                    if k > 1 {
                        out.push_str(&pow(k));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({})", self.to_plain("q"))
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plain("q"))
    }
}

impl From<i64> for QPoly {
    fn from(c: i64) -> Self {
        QPoly::constant(c)
    }
}

impl From<BigInt> for QPoly {
    fn from(c: BigInt) -> Self {
        QPoly::constant(c)
    }
}

impl Zero for QPoly {
    fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for QPoly {
    fn one() -> Self {
        QPoly::constant(1)
    }
}

impl<'a> Add<&'a QPoly> for &QPoly {
    type Output = QPoly;

    fn add(self, rhs: &'a QPoly) -> QPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (a, b) in coeffs.iter_mut().zip(&short.coeffs) {
            *a += b;
        }
        QPoly::new(coeffs)
    }
}

impl<'a> Sub<&'a QPoly> for &QPoly {
    type Output = QPoly;

    fn sub(self, rhs: &'a QPoly) -> QPoly {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < rhs.coeffs.len() {
            coeffs.resize(rhs.coeffs.len(), BigInt::zero());
        }
        for (a, b) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
        QPoly::new(coeffs)
    }
}

impl<'a> Mul<&'a QPoly> for &QPoly {
    type Output = QPoly;

    fn mul(self, rhs: &'a QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QPoly::new(coeffs)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;

    fn neg(self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for QPoly {
    type Output = QPoly;

    fn neg(self) -> QPoly {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<QPoly> for QPoly {
            type Output = QPoly;
            fn $method(self, rhs: QPoly) -> QPoly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a QPoly> for QPoly {
            type Output = QPoly;
            fn $method(self, rhs: &'a QPoly) -> QPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<QPoly> for &QPoly {
            type Output = QPoly;
            fn $method(self, rhs: QPoly) -> QPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl AddAssign<&QPoly> for QPoly {
    fn add_assign(&mut self, rhs: &QPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigInt::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }
}

impl SubAssign<&QPoly> for QPoly {
    fn sub_assign(&mut self, rhs: &QPoly) {
        *self = &*self - rhs;
    }
}
