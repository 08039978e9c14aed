//! Truncated bivariate power series in `x` with polynomial-in-`y`
//! coefficients over the rationals, and the exponential generating
//! functions of (quasi) series-parallel matroids.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::QRat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenfunError {
    #[error("series has the wrong constant term for {0}")]
    BadConstantTerm(&'static str),
    #[error("series is not invertible: {0}")]
    NotInvertible(String),
    #[error("n! [x^{n} y^{k}] = {value} is not a nonnegative integer")]
    NonIntegralCoefficient { n: usize, k: usize, value: String },
    #[error("coefficient of x^{0} has y-degree larger than {0}")]
    YDegreeExceeded(usize),
    #[error("order {0} exceeds the supported maximum {MAX_ORDER}")]
    OrderTooLarge(usize),
}

/// Largest truncation order accepted by the named series.
pub const MAX_ORDER: usize = 20;

type YPoly = Vec<QRat>;

fn ytrim(mut p: YPoly) -> YPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn yadd(a: &[QRat], b: &[QRat]) -> YPoly {
    let len = a.len().max(b.len());
    let zero = QRat::zero();
    ytrim(
        (0..len)
            .map(|k| a.get(k).unwrap_or(&zero) + b.get(k).unwrap_or(&zero))
            .collect(),
    )
}

fn ymul(a: &[QRat], b: &[QRat]) -> YPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![QRat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ytrim(out)
}

fn yscale(a: &[QRat], c: &QRat) -> YPoly {
    ytrim(a.iter().map(|x| x * c).collect())
}

/// `sum_{i <= order} c_i(y) x^i`, exact modulo `x^{order + 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiSeries {
    order: usize,
    coeffs: Vec<YPoly>,
}

impl BiSeries {
    pub fn zero(order: usize) -> Self {
        BiSeries {
            order,
            coeffs: vec![Vec::new(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, QRat::one())
    }

    pub fn constant(order: usize, c: QRat) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = ytrim(vec![c]);
        s
    }

    /// The series `x`.
    pub fn x(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = vec![QRat::one()];
        }
        s
    }

    /// Builds from `f(i)` = coefficient list in `y` of `x^i`.
    pub fn from_fn(order: usize, f: impl Fn(usize) -> Vec<QRat>) -> Self {
        BiSeries {
            order,
            coeffs: (0..=order).map(|i| ytrim(f(i))).collect(),
        }
    }

    /// Integer coefficients, `rows[i][k]` for `x^i y^k`.
    pub fn from_i64_rows(order: usize, rows: &[&[i64]]) -> Self {
        Self::from_fn(order, |i| {
            rows.get(i)
                .map(|r| r.iter().map(|&c| QRat::from_integer(c.into())).collect())
                .unwrap_or_default()
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient list in `y` of `x^i`.
    pub fn x_coeff(&self, i: usize) -> &[QRat] {
        &self.coeffs[i]
    }

    pub fn coeff(&self, i: usize, k: usize) -> QRat {
        self.coeffs
            .get(i)
            .and_then(|c| c.get(k))
            .cloned()
            .unwrap_or_else(QRat::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_fn(order, |i| self.coeffs.get(i).cloned().unwrap_or_default())
    }

    fn check_same_order(&self, other: &Self) {
        assert_eq!(self.order, other.order, "series orders differ");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same_order(other);
        Self::from_fn(self.order, |i| yadd(&self.coeffs[i], &other.coeffs[i]))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-QRat::one()))
    }

    pub fn scale(&self, c: &QRat) -> Self {
        Self::from_fn(self.order, |i| yscale(&self.coeffs[i], c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same_order(other);
        Self::from_fn(self.order, |i| {
            (0..=i).fold(Vec::new(), |acc, j| {
                yadd(&acc, &ymul(&self.coeffs[j], &other.coeffs[i - j]))
            })
        })
    }

    /// Multiplies by `y^k`.
    pub fn mul_y_power(&self, k: usize) -> Self {
        Self::from_fn(self.order, |i| {
            if self.coeffs[i].is_empty() {
                Vec::new()
            } else {
                let mut c = vec![QRat::zero(); k];
                c.extend(self.coeffs[i].iter().cloned());
                c
            }
        })
    }

    pub fn derivative_x(&self) -> Self {
        Self::from_fn(self.order, |i| {
            if i < self.order {
                yscale(&self.coeffs[i + 1], &QRat::from_integer((i + 1).into()))
            } else {
                Vec::new()
            }
        })
    }

    /// Antiderivative with zero constant term; the `x^order` term of the
    /// integrand falls off the end.
    pub fn integrate_x(&self) -> Self {
        Self::from_fn(self.order, |i| {
            if i == 0 {
                Vec::new()
            } else {
                yscale(&self.coeffs[i - 1], &QRat::new(1.into(), (i as i64).into()))
            }
        })
    }

    /// `x -> c x`.
    pub fn scale_x(&self, c: &QRat) -> Self {
        let mut pow = QRat::one();
        let mut out = Self::zero(self.order);
        for i in 0..=self.order {
            out.coeffs[i] = yscale(&self.coeffs[i], &pow);
            pow *= c;
        }
        out
    }

    fn constant_term_is(&self, c: &QRat) -> bool {
        if c.is_zero() {
            self.coeffs[0].is_empty()
        } else {
            self.coeffs[0].len() == 1 && &self.coeffs[0][0] == c
        }
    }

    /// `exp(a)` for `a(0, y) = 0`, via `f' = a' f`.
    pub fn exp(&self) -> Result<Self, GenfunError> {
        if !self.constant_term_is(&QRat::zero()) {
            return Err(GenfunError::BadConstantTerm("exp"));
        }
        let mut f = Self::one(self.order);
        for i in 0..self.order {
            let mut acc = Vec::new();
            for j in 0..=i {
                let da = yscale(&self.coeffs[j + 1], &QRat::from_integer((j + 1).into()));
                acc = yadd(&acc, &ymul(&da, &f.coeffs[i - j]));
            }
            f.coeffs[i + 1] = yscale(&acc, &QRat::new(1.into(), ((i + 1) as i64).into()));
        }
        Ok(f)
    }

    /// `log(a)` for `a(0, y) = 1`, via `a g' = a'`.
    pub fn log(&self) -> Result<Self, GenfunError> {
        if !self.constant_term_is(&QRat::one()) {
            return Err(GenfunError::BadConstantTerm("log"));
        }
        // dg[i] = coefficient of x^i in g'
        let mut dg: Vec<YPoly> = Vec::with_capacity(self.order);
        for i in 0..self.order {
            let mut acc = yscale(&self.coeffs[i + 1], &QRat::from_integer((i + 1).into()));
            for (j, d) in dg.iter().enumerate() {
                acc = yadd(&acc, &yscale(&ymul(d, &self.coeffs[i - j]), &-QRat::one()));
            }
            dg.push(acc);
        }
        Ok(Self::from_fn(self.order, |i| {
            if i == 0 {
                Vec::new()
            } else {
                yscale(&dg[i - 1], &QRat::new(1.into(), (i as i64).into()))
            }
        }))
    }

    /// `1 / a` for `a(0, y)` a nonzero constant.
    pub fn recip(&self) -> Result<Self, GenfunError> {
        if self.coeffs[0].len() != 1 {
            return Err(GenfunError::NotInvertible(
                "constant term must be a nonzero constant".into(),
            ));
        }
        let inv0 = self.coeffs[0][0].recip();
        let mut out = Self::zero(self.order);
        out.coeffs[0] = vec![inv0.clone()];
        for i in 1..=self.order {
            let mut acc = Vec::new();
            for j in 1..=i {
                acc = yadd(&acc, &ymul(&self.coeffs[j], &out.coeffs[i - j]));
            }
            out.coeffs[i] = yscale(&acc, &-inv0.clone());
        }
        Ok(out)
    }

    /// `self(inner(x, y), y)`; requires `inner(0, y) = 0`.
    pub fn compose_x(&self, inner: &Self) -> Result<Self, GenfunError> {
        self.check_same_order(inner);
        if !inner.constant_term_is(&QRat::zero()) {
            return Err(GenfunError::BadConstantTerm("compose"));
        }
        let mut out = Self::zero(self.order);
        for i in (0..=self.order).rev() {
            out = out.mul(inner);
            out.coeffs[0] = yadd(&out.coeffs[0], &self.coeffs[i]);
        }
        Ok(out)
    }

    /// Compositional inverse in `x` by Newton iteration with doubling
    /// precision: `g <- g - (f(g) - x) / f'(g)`.
    pub fn comp_inverse_x(&self) -> Result<Self, GenfunError> {
        if !self.constant_term_is(&QRat::zero()) {
            return Err(GenfunError::NotInvertible("nonzero constant term".into()));
        }
        if self.order == 0 {
            return Ok(Self::zero(0));
        }
        if self.coeffs[1].len() != 1 {
            return Err(GenfunError::NotInvertible(
                "linear coefficient must be a nonzero constant".into(),
            ));
        }
        let mut prec = 1;
        let mut g = Self::x(1).scale(&self.coeffs[1][0].recip());
        while prec < self.order {
            prec = (2 * prec).min(self.order);
            let f = self.truncate(prec);
            let g_ext = g.truncate(prec);
            let residual = f.compose_x(&g_ext)?.sub(&Self::x(prec));
            let slope = f.derivative_x().compose_x(&g_ext)?.recip()?;
            g = g_ext.sub(&residual.mul(&slope));
        }
        Ok(g)
    }

    /// `a^{1/r}` for `a(0, y) = 1`.
    pub fn nth_root(&self, r: u32) -> Result<Self, GenfunError> {
        if r == 0 {
            return Err(GenfunError::NotInvertible("zeroth root".into()));
        }
        self.log()?
            .scale(&QRat::new(1.into(), (r as i64).into()))
            .exp()
    }

    pub fn pow(&self, r: u32) -> Self {
        (0..r).fold(Self::one(self.order), |acc, _| acc.mul(self))
    }

    /// Checks `deg_y [x^i] <= i` for every `i`.
    pub fn check_y_degrees(&self) -> Result<(), GenfunError> {
        match (0..=self.order).find(|&i| self.coeffs[i].len() > i + 1) {
            Some(i) => Err(GenfunError::YDegreeExceeded(i)),
            None => Ok(()),
        }
    }

    /// `n! [x^n y^k]` as integers; fails on any non-integral or negative entry.
    pub fn labeled_counts(&self) -> Result<Vec<Vec<BigInt>>, GenfunError> {
        let mut fact = BigInt::one();
        let mut out = Vec::with_capacity(self.order + 1);
        for n in 0..=self.order {
            if n > 0 {
                fact *= n;
            }
            let mut row = Vec::with_capacity(n + 1);
            for k in 0..=n {
                let v = self.coeff(n, k) * QRat::from_integer(fact.clone());
                if !v.is_integer() || v.is_negative() {
                    return Err(GenfunError::NonIntegralCoefficient {
                        n,
                        k,
                        value: v.to_string(),
                    });
                }
                row.push(v.to_integer());
            }
            out.push(row);
        }
        Ok(out)
    }

    /// One row per coefficient `x^n y^k`, `k <= n`.
    pub fn coefficient_rows(&self) -> Vec<CoefficientRow> {
        let mut fact = BigInt::one();
        let mut out = Vec::new();
        for n in 0..=self.order {
            if n > 0 {
                fact *= n;
            }
            for k in 0..=n {
                let c = self.coeff(n, k);
                let scaled = &c * QRat::from_integer(fact.clone());
                out.push(CoefficientRow {
                    n,
                    k,
                    numerator: c.numer().to_string(),
                    denominator: c.denom().to_string(),
                    labeled: scaled.is_integer().then(|| scaled.to_integer().to_string()),
                });
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientRow {
    pub n: usize,
    pub k: usize,
    pub numerator: String,
    pub denominator: String,
    /// `n!` times the coefficient, when integral.
    pub labeled: Option<String>,
}

fn check_order(order: usize) -> Result<(), GenfunError> {
    if order > MAX_ORDER {
        Err(GenfunError::OrderTooLarge(order))
    } else {
        Ok(())
    }
}

fn rat(num: i64, den: i64) -> QRat {
    QRat::new(num.into(), den.into())
}

/// `log(1 + x)`.
fn log1p(order: usize) -> BiSeries {
    BiSeries::from_fn(order, |i| {
        if i == 0 {
            Vec::new()
        } else {
            vec![rat(if i % 2 == 1 { 1 } else { -1 }, i as i64)]
        }
    })
}

/// `(1/y) log(1 + xy) + log(1 + x) - x`.
pub fn inner_function(order: usize) -> BiSeries {
    BiSeries::from_fn(order, |i| match i {
        0 | 1 => Vec::new(),
        _ => {
            let sign = if i % 2 == 1 { 1 } else { -1 };
            let mut c = vec![QRat::zero(); i];
            c[0] = rat(sign, i as i64);
            c[i - 1] += rat(sign, i as i64);
            c
        }
    })
    .add(&BiSeries::x(order))
}

/// Connected series-parallel matroids:
/// `C = x(y + 1) + y * integral of the x-inverse of the inner function`.
pub fn series_c(order: usize) -> Result<BiSeries, GenfunError> {
    check_order(order)?;
    let inv = inner_function(order).comp_inverse_x()?;
    let linear = BiSeries::from_fn(order, |i| {
        if i == 1 {
            vec![QRat::one(), QRat::one()]
        } else {
            Vec::new()
        }
    });
    let c = linear.add(&inv.integrate_x().mul_y_power(1));
    c.check_y_degrees()?;
    Ok(c)
}

/// Quasi series-parallel matroids: `A = exp(C)`.
pub fn series_a(order: usize) -> Result<BiSeries, GenfunError> {
    let a = series_c(order)?.exp()?;
    a.check_y_degrees()?;
    Ok(a)
}

/// Simple quasi series-parallel matroids: `S = A(log(1 + x), y) / (1 + x)`.
pub fn series_s(order: usize) -> Result<BiSeries, GenfunError> {
    let a = series_a(order)?;
    let geometric = BiSeries::from_fn(order, |i| vec![rat(if i % 2 == 0 { 1 } else { -1 }, 1)]);
    let s = geometric.mul(&a.compose_x(&log1p(order))?);
    s.check_y_degrees()?;
    Ok(s)
}

fn weighted_root(base: &BiSeries, q: u32) -> Result<BiSeries, GenfunError> {
    if q == 0 {
        return Err(GenfunError::NotInvertible("group order 0".into()));
    }
    let out = base.scale_x(&rat(q as i64, 1)).nth_root(q)?;
    out.check_y_degrees()?;
    out.labeled_counts()?;
    Ok(out)
}

/// `G`-labeled quasi series-parallel matroids for `|G| = q`: `A(qx, y)^{1/q}`.
pub fn series_ag(order: usize, q: u32) -> Result<BiSeries, GenfunError> {
    weighted_root(&series_a(order)?, q)
}

/// Simple `G`-labeled ones: `S(qx, y)^{1/q}`.
pub fn series_sg(order: usize, q: u32) -> Result<BiSeries, GenfunError> {
    weighted_root(&series_s(order)?, q)
}
