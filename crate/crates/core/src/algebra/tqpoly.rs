//! Polynomials in `t` whose coefficients are polynomials in `q`, and the
//! palindromic-completion step shared by every KL computation.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{AlgebraError, QPoly};

/// Ascending list of `q`-polynomial coefficients, no trailing zeros.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct TQPoly {
    coeffs: Vec<QPoly>,
}

impl TQPoly {
    pub fn new(mut coeffs: Vec<QPoly>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        TQPoly { coeffs }
    }

    /// Integer polynomial in `t` with constant `q`-coefficients.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| QPoly::constant(c)).collect())
    }

    /// `c * t^k`.
    pub fn monomial(c: QPoly, k: usize) -> Self {
        let mut coeffs = vec![QPoly::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[QPoly] {
        &self.coeffs
    }

    /// Coefficient of `t^i`, zero past the end.
    pub fn coeff(&self, i: usize) -> QPoly {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `t^d * p(1/t) == p` with `deg p == d`.
    pub fn is_palindromic_of_degree(&self, d: usize) -> bool {
        self.degree() == Some(d) && (0..=d).all(|i| self.coeffs[i] == self.coeffs[d - i])
    }

    pub fn shift_t(&self, k: usize) -> TQPoly {
        if self.is_zero() {
            return TQPoly::zero();
        }
        let mut coeffs = vec![QPoly::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        TQPoly { coeffs }
    }

    pub fn scale(&self, c: &QPoly) -> TQPoly {
        TQPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Replaces the coefficient of `t^i` by itself divided by `q^{2i}`.
    pub fn scale_t_by_qsquared(&self) -> Result<TQPoly, AlgebraError> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.div_q_power(2 * i).ok_or(AlgebraError::NotDivisible { t_power: i }))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TQPoly::new(coeffs))
    }

    /// Inverse of [`TQPoly::scale_t_by_qsquared`].
    pub fn unscale_t_by_qsquared(&self) -> TQPoly {
        TQPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c.mul_q_power(2 * i))
                .collect(),
        )
    }

    /// Coefficientwise evaluation at `q = q0`; the result is an integer
    /// polynomial in `t`, ascending.
    pub fn eval_at_q(&self, q0: &BigInt) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| c.eval(q0)).collect())
    }

    pub fn eval_at_q_i64(&self, q0: i64) -> QPoly {
        self.eval_at_q(&BigInt::from(q0))
    }

    /// The largest `q`-degree among the coefficients.
    pub fn q_degree(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(QPoly::degree).max()
    }

    /// Rebuilds a symbolic polynomial from evaluations at several `q`.
    ///
    /// Each `t`-coefficient is interpolated independently with the given
    /// `q`-degree bound.
    pub fn interpolate(samples: &[(BigInt, QPoly)], q_degree_bound: usize) -> Result<TQPoly, AlgebraError> {
        let t_len = samples
            .iter()
            .map(|(_, p)| p.coeffs().len())
            .max()
            .unwrap_or(0);
        let coeffs = (0..t_len)
            .map(|i| {
                let pts: Vec<(BigInt, BigInt)> = samples
                    .iter()
                    .map(|(x, p)| (x.clone(), p.coeff(i)))
                    .collect();
                QPoly::interpolate(&pts, q_degree_bound)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TQPoly::new(coeffs))
    }

    /// Solves for the KL polynomial given the non-bottom part of the Z sum.
    ///
    /// `known` must be `sum_{F != bottom} t^{rk F} P_{M/F}(t)` for a matroid of
    /// rank `d`. Returns the unique `P` of degree `< d/2` with `P + known`
    /// palindromic of degree `d`.
    pub fn palindromic_complete(known: &TQPoly, d: usize) -> Result<TQPoly, AlgebraError> {
        complete_palindromic(known.coeffs(), d).map(TQPoly::new)
    }

    /// `(t, q)` coefficient grid for serialization: outer index is the power
    /// of `t`, inner the power of `q`.
    pub fn to_grid(&self) -> Vec<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.coeffs().to_vec()).collect()
    }

    pub fn from_grid(grid: Vec<Vec<BigInt>>) -> Self {
        TQPoly::new(grid.into_iter().map(QPoly::new).collect())
    }

    /// Expanded form, ascending in `t`.
    pub fn to_plain(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coef = if c.coeffs().len() > 1 {
                format!("({})", c.to_plain("q"))
            } else {
                c.to_plain("q")
            };
            terms.push(match i {
                0 => coef,
                1 if c.is_one() => "t".to_string(),
                1 => format!("{coef}t"),
                _ if c.is_one() => format!("t^{i}"),
                _ => format!("{coef}t^{i}"),
            });
        }
        terms.join(" + ")
    }

    /// LaTeX form descending in `t` with expanded coefficients, e.g.
    /// `(q + 4) t + 1`.
    pub fn to_latex_expanded(&self) -> String {
        self.latex_with(|c| {
            if c.coeffs().len() > 1 {
                Some(format!("({})", c.to_latex("q")))
            } else {
                None
            }
        })
    }

    /// LaTeX form with each coefficient split into integer content and a
    /// primitive part, e.g. `25 {\left(3 q + 4\right)} t^{2}`.
    pub fn to_latex_factored(&self) -> String {
        self.latex_with(|c| {
            if c.coeffs().len() <= 1 {
                return None;
            }
            let g = c.content();
            let prim = QPoly::new(c.coeffs().iter().map(|a| a / &g).collect());
            let inner = format!("{{\\left({}\\right)}}", prim.to_latex("q"));
            Some(if g.is_one() { inner } else { format!("{g} {inner}") })
        })
    }

    fn latex_with(&self, nonconstant: impl Fn(&QPoly) -> Option<String>) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let tpow = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{{{i}}}"),
            };
            let coef = match nonconstant(c) {
                Some(s) => s,
                None if i > 0 && c.is_one() => String::new(),
                None => c.to_latex("q"),
            };
            terms.push(match (coef.is_empty(), tpow.is_empty()) {
                (true, _) => tpow,
                (false, true) => coef,
                (false, false) => format!("{coef} {tpow}"),
            });
        }
        terms.join(" + ")
    }
}

/// Palindromic completion over any coefficient ring.
///
/// Returns the coefficients of `P` (ascending, untrimmed only in the sense
/// that trailing zeros are removed by the caller's constructor).
pub fn complete_palindromic<C>(known: &[C], d: usize) -> Result<Vec<C>, AlgebraError>
where
    C: Clone + PartialEq + Zero + One,
    for<'a> &'a C: Sub<&'a C, Output = C> + Add<&'a C, Output = C>,
{
    let at = |i: usize| known.get(i).cloned().unwrap_or_else(C::zero);
    if d == 0 {
        // rank zero: only the bottom flat, P = 1
        return if known.iter().all(Zero::is_zero) {
            Ok(vec![C::one()])
        } else {
            Err(AlgebraError::NotCompletable(
                "rank-0 known part must vanish".into(),
            ))
        };
    }
    if known.len() > d + 1 {
        return Err(AlgebraError::NotCompletable(format!(
            "known part has degree {} > {d}",
            known.len() - 1
        )));
    }
    if !at(d).is_one() {
        return Err(AlgebraError::NotCompletable(format!(
            "coefficient of t^{d} must be 1"
        )));
    }
    if !at(0).is_zero() {
        return Err(AlgebraError::NotCompletable(
            "known part must have zero constant term".into(),
        ));
    }
    let half = d.div_ceil(2);
    let p: Vec<C> = (0..half).map(|i| &at(d - i) - &at(i)).collect();
    if !p[0].is_one() {
        return Err(AlgebraError::NotCompletable("P(0) != 1".into()));
    }
    // full re-check of Z = P + known
    let z: Vec<C> = (0..=d)
        .map(|i| match p.get(i) {
            Some(pi) => pi + &at(i),
            None => at(i),
        })
        .collect();
    if let Some(i) = (0..=d).find(|&i| z[i] != z[d - i]) {
        return Err(AlgebraError::NotCompletable(format!(
            "Z not palindromic at t^{i}"
        )));
    }
    let mut p = p;
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    Ok(p)
}

impl fmt::Debug for TQPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TQPoly({})", self.to_plain())
    }
}

impl fmt::Display for TQPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plain())
    }
}

impl Zero for TQPoly {
    fn zero() -> Self {
        TQPoly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for TQPoly {
    fn one() -> Self {
        TQPoly::new(vec![QPoly::one()])
    }
}

impl<'a> Add<&'a TQPoly> for &TQPoly {
    type Output = TQPoly;

    fn add(self, rhs: &'a TQPoly) -> TQPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        TQPoly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a TQPoly> for &TQPoly {
    type Output = TQPoly;

    fn sub(self, rhs: &'a TQPoly) -> TQPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        TQPoly::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a TQPoly> for &TQPoly {
    type Output = TQPoly;

    fn mul(self, rhs: &'a TQPoly) -> TQPoly {
        if self.is_zero() || rhs.is_zero() {
            return TQPoly::zero();
        }
        let mut coeffs = vec![QPoly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += &(a * b);
            }
        }
        TQPoly::new(coeffs)
    }
}

impl Add<TQPoly> for TQPoly {
    type Output = TQPoly;
    fn add(self, rhs: TQPoly) -> TQPoly {
        &self + &rhs
    }
}

impl Sub<TQPoly> for TQPoly {
    type Output = TQPoly;
    fn sub(self, rhs: TQPoly) -> TQPoly {
        &self - &rhs
    }
}

impl Mul<TQPoly> for TQPoly {
    type Output = TQPoly;
    fn mul(self, rhs: TQPoly) -> TQPoly {
        &self * &rhs
    }
}
