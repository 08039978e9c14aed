//! Bezout matrices, positivity certificates and Sturm sequences.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{QPoly, QRat};
use crate::par::Exec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("degree mismatch: deg f = {f}, deg g = {g}")]
    DegreeMismatch { f: usize, g: usize },
    #[error("matrix of dimension {0} exceeds the full-minor cap {MAX_MINOR_DIM}")]
    TooLarge(usize),
}

/// Largest dimension for the all-minors sweep.
pub const MAX_MINOR_DIM: usize = 10;

/// Coefficient ring for Bezout matrices and determinants.
pub trait Ring: Clone + PartialEq + Zero + One + Send + Sync
where
    for<'a> &'a Self: Add<&'a Self, Output = Self> + Sub<&'a Self, Output = Self> + Mul<&'a Self, Output = Self>,
{
    /// `self / d`, known to be exact.
    fn exact_div(&self, d: &Self) -> Self;
}

impl Ring for BigInt {
    fn exact_div(&self, d: &Self) -> Self {
        debug_assert!((self % d).is_zero());
        self / d
    }
}

impl Ring for QPoly {
    fn exact_div(&self, d: &Self) -> Self {
        self.div_exact(d).expect("exact division in Z[q]")
    }
}

impl Ring for QRat {
    fn exact_div(&self, d: &Self) -> Self {
        self / d
    }
}

/// Square symmetric matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymMatrix<R> {
    entries: Vec<Vec<R>>,
}

impl<R: Ring> SymMatrix<R>
where
    for<'a> &'a R: Add<&'a R, Output = R> + Sub<&'a R, Output = R> + Mul<&'a R, Output = R>,
{
    /// Returns `None` unless the rows form a symmetric square array.
    pub fn new(entries: Vec<Vec<R>>) -> Option<Self> {
        let d = entries.len();
        let ok = entries.iter().all(|r| r.len() == d)
            && (0..d).all(|i| (0..i).all(|j| entries[i][j] == entries[j][i]));
        ok.then_some(SymMatrix { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<R>] {
        &self.entries
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> SymMatrix<S>
    where
        for<'a> &'a S: Add<&'a S, Output = S> + Sub<&'a S, Output = S> + Mul<&'a S, Output = S>,
    {
        SymMatrix {
            entries: self.entries.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }

    /// Leading principal minors `D_1, ..., D_k` by fraction-free elimination
    /// without pivoting; stops after the first zero minor.
    pub fn leading_principal_minors(&self) -> Vec<R> {
        let d = self.dim();
        let mut a = self.entries.clone();
        let mut prev = R::one();
        let mut out = Vec::with_capacity(d);
        for k in 0..d {
            let pivot = a[k][k].clone();
            out.push(pivot.clone());
            if pivot.is_zero() {
                break;
            }
            for i in k + 1..d {
                for j in k + 1..d {
                    let v = &(&pivot * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = v.exact_div(&prev);
                }
            }
            prev = pivot;
        }
        out
    }

    pub fn determinant(&self) -> R {
        if self.dim() == 0 {
            return R::one();
        }
        let lp = self.leading_principal_minors();
        if lp.len() < self.dim() {
            // a zero leading minor stopped elimination; fall back to expansion
            return minor_det(&self.entries, &(0..self.dim()).collect::<Vec<_>>(), &(0..self.dim()).collect::<Vec<_>>());
        }
        lp.last().cloned().expect("nonempty")
    }
}

/// Laplace expansion along the first row; for small matrices and fallbacks.
fn minor_det<R: Ring>(m: &[Vec<R>], rows: &[usize], cols: &[usize]) -> R
where
    for<'a> &'a R: Add<&'a R, Output = R> + Sub<&'a R, Output = R> + Mul<&'a R, Output = R>,
{
    if rows.is_empty() {
        return R::one();
    }
    let mut acc = R::zero();
    for (k, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = &m[rows[0]][c] * &minor_det(m, &rows[1..], &rest);
        acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn degree_of<R: Zero>(p: &[R]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

/// `a_ij = [x^i y^j] (f(x) g(y) - f(y) g(x)) / (x - y)`, by synthetic
/// division in `x` over `R[y]`. Requires `deg f = d >= 1` and
/// `deg g` in `{d - 1, d}`.
pub fn bezout_matrix<R: Ring>(f: &[R], g: &[R]) -> Result<SymMatrix<R>, RootError>
where
    for<'a> &'a R: Add<&'a R, Output = R> + Sub<&'a R, Output = R> + Mul<&'a R, Output = R>,
{
    let df = degree_of(f).unwrap_or(0);
    let dg = degree_of(g).unwrap_or(0);
    if df == 0 || !(dg == df || dg + 1 == df) || degree_of(g).is_none() {
        return Err(RootError::DegreeMismatch { f: df, g: dg });
    }
    let d = df;
    let at = |p: &[R], i: usize| p.get(i).cloned().unwrap_or_else(R::zero);
    // h[a] = coefficient of x^a, a polynomial in y: f_a g(y) - g_a f(y)
    let h: Vec<Vec<R>> = (0..=d)
        .map(|a| (0..=d).map(|b| &(&at(f, a) * &at(g, b)) - &(&at(g, a) * &at(f, b))).collect())
        .collect();
    // quotient by (x - y): q[d-1] = h[d], q[a-1] = h[a] + y q[a]
    let mut q: Vec<Vec<R>> = vec![vec![R::zero(); d + 1]; d];
    q[d - 1] = h[d].clone();
    for a in (1..d).rev() {
        let mut row = h[a].clone();
        for b in 0..d {
            row[b + 1] = &row[b + 1] + &q[a][b];
        }
        q[a - 1] = row;
    }
    // remainder h[0] + y q[0] vanishes identically
    debug_assert!((0..=d).all(|b| {
        let shifted = if b == 0 { R::zero() } else { q[0][b - 1].clone() };
        (&h[0][b] + &shifted).is_zero()
    }));
    let entries = (0..d).map(|i| (0..d).map(|j| q[i][j].clone()).collect()).collect();
    Ok(SymMatrix::new(entries).expect("Bezout matrices are symmetric"))
}

/// Index sets of a minor, as sorted 0-based rows and columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinorWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// The minor expanded in `u = q - 1`, ascending.
    pub u_coeffs: Vec<String>,
}

/// How much of the matrix a certificate covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateLevel {
    AllMinors,
    LeadingPrincipalMinors,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TpCertificate {
    pub level: CertificateLevel,
    pub verdict: bool,
    /// Every checked minor has strictly positive `u`-coefficients in all
    /// degrees up to its own degree.
    pub strict: bool,
    pub minors_checked: usize,
    pub witness: Option<MinorWitness>,
}

/// Positive at every real `q >= 1`: positive constant term in `u = q - 1`
/// and no negative `u`-coefficient.
fn positive_in_u(u: &QPoly) -> bool {
    u.coeff(0).is_positive() && u.all_coeffs_nonnegative()
}

fn strictly_positive_in_u(u: &QPoly) -> bool {
    !u.is_zero() && u.all_coeffs_positive()
}

fn masks_of_size(d: usize, k: usize) -> Vec<u32> {
    (0u32..1 << d).filter(|m| m.count_ones() as usize == k).collect()
}

fn bits_of(m: u32) -> Vec<usize> {
    (0..32).filter(|&i| m & (1 << i) != 0).collect()
}

/// Visits every square minor exactly once. A minor on rows `R` and columns
/// `C` expands along the smallest row of `R` into minors on `R` minus that
/// row, so row sets form a tree rooted at the empty set; the walk is
/// depth-first and keeps one table (indexed by column set) per tree level.
pub fn for_each_minor<R: Ring>(m: &SymMatrix<R>, exec: Exec, visit: &mut impl FnMut(u32, u32, &R)) -> Result<(), RootError>
where
    for<'a> &'a R: Add<&'a R, Output = R> + Sub<&'a R, Output = R> + Mul<&'a R, Output = R>,
{
    let d = m.dim();
    if d > MAX_MINOR_DIM {
        return Err(RootError::TooLarge(d));
    }
    let cols_by_size: Vec<Vec<u32>> = (0..=d).map(|k| masks_of_size(d, k)).collect();
    let mut col_index = vec![0usize; 1 << d];
    for masks in &cols_by_size {
        for (i, &mk) in masks.iter().enumerate() {
            col_index[mk as usize] = i;
        }
    }
    struct Walk<'a, R> {
        m: &'a SymMatrix<R>,
        exec: Exec,
        cols_by_size: Vec<Vec<u32>>,
        col_index: Vec<usize>,
    }
    fn descend<R: Ring>(w: &Walk<'_, R>, rows: u32, prev: &[R], visit: &mut impl FnMut(u32, u32, &R))
    where
        for<'a> &'a R: Add<&'a R, Output = R> + Sub<&'a R, Output = R> + Mul<&'a R, Output = R>,
    {
        let limit = if rows == 0 { w.m.dim() } else { rows.trailing_zeros() as usize };
        let k = rows.count_ones() as usize + 1;
        for r in 0..limit {
            let grown = rows | (1 << r);
            let table: Vec<R> = w.exec.map(&w.cols_by_size[k], |&cm| {
                let mut acc = R::zero();
                for (pos, c) in bits_of(cm).into_iter().enumerate() {
                    let term = &w.m.entries[r][c] * &prev[w.col_index[(cm & !(1 << c)) as usize]];
                    acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                acc
            });
            for (&cm, v) in w.cols_by_size[k].iter().zip(&table) {
                visit(grown, cm, v);
            }
            descend(w, grown, &table, visit);
        }
    }
    let walk = Walk {
        m,
        exec,
        cols_by_size,
        col_index,
    };
    descend(&walk, 0, &[R::one()], visit);
    Ok(())
}

/// Ordering key: size, then row set, then column set (as sorted lists).
fn minor_key(rows: u32, cols: u32) -> (u32, Vec<usize>, Vec<usize>) {
    (rows.count_ones(), bits_of(rows), bits_of(cols))
}

/// Every square minor as `(rows, cols, det)`, sorted by [`minor_key`].
pub fn all_minors<R: Ring>(m: &SymMatrix<R>, exec: Exec) -> Result<Vec<(u32, u32, R)>, RootError>
where
    for<'a> &'a R: Add<&'a R, Output = R> + Sub<&'a R, Output = R> + Mul<&'a R, Output = R>,
{
    let mut out = Vec::new();
    for_each_minor(m, exec, &mut |r, c, v| out.push((r, c, v.clone())))?;
    out.sort_by_cached_key(|(r, c, _)| minor_key(*r, *c));
    Ok(out)
}

fn witness(rows: u32, cols: u32, u: &QPoly) -> MinorWitness {
    MinorWitness {
        rows: bits_of(rows),
        cols: bits_of(cols),
        u_coeffs: u.coeffs().iter().map(ToString::to_string).collect(),
    }
}

/// Certifies total positivity for every real `q >= 1`: the matrix is
/// rewritten in `u = q - 1` once (minors commute with the substitution) and
/// the sign pattern of every minor is checked. On failure the witness is
/// the first violating minor by size, then row set, then column set.
pub fn all_minors_positive_in_u(m: &SymMatrix<QPoly>, exec: Exec) -> Result<TpCertificate, RootError> {
    let mu = m.map(QPoly::shift_to_u);
    let mut strict = true;
    let mut checked = 0usize;
    let mut worst: Option<(u32, u32, QPoly)> = None;
    for_each_minor(&mu, exec, &mut |r, c, u| {
        checked += 1;
        strict &= strictly_positive_in_u(u);
        if !positive_in_u(u) && worst.as_ref().is_none_or(|(wr, wc, _)| minor_key(r, c) < minor_key(*wr, *wc)) {
            worst = Some((r, c, u.clone()));
        }
    })?;
    Ok(TpCertificate {
        level: CertificateLevel::AllMinors,
        verdict: worst.is_none(),
        strict: strict && worst.is_none(),
        minors_checked: checked,
        witness: worst.map(|(r, c, u)| witness(r, c, &u)),
    })
}

/// Weaker certificate for large matrices: leading principal minors only.
pub fn leading_minors_positive_in_u(m: &SymMatrix<QPoly>) -> TpCertificate {
    let lp = m.leading_principal_minors();
    let mut strict = true;
    for (k, p) in lp.iter().enumerate() {
        let u = p.shift_to_u();
        strict &= strictly_positive_in_u(&u);
        if !positive_in_u(&u) {
            let mask = (1u32 << (k + 1)) - 1;
            return TpCertificate {
                level: CertificateLevel::LeadingPrincipalMinors,
                verdict: false,
                strict: false,
                minors_checked: k + 1,
                witness: Some(witness(mask, mask, &u)),
            };
        }
    }
    TpCertificate {
        level: CertificateLevel::LeadingPrincipalMinors,
        verdict: lp.len() == m.dim(),
        strict,
        minors_checked: lp.len(),
        witness: None,
    }
}

/// Full sweep when the dimension allows, leading principal minors otherwise.
pub fn certify(m: &SymMatrix<QPoly>, exec: Exec) -> TpCertificate {
    if m.dim() <= MAX_MINOR_DIM {
        all_minors_positive_in_u(m, exec).expect("dimension checked")
    } else {
        leading_minors_positive_in_u(m)
    }
}

/// Entrywise evaluation at `q = q0`.
pub fn eval_matrix(m: &SymMatrix<QPoly>, q0: i64) -> SymMatrix<BigInt> {
    m.map(|p| p.eval_i64(q0))
}

/// Positive definiteness at `q = q0` via leading principal minors.
pub fn is_positive_definite_at(m: &SymMatrix<QPoly>, q0: i64) -> bool {
    is_positive_definite(&eval_matrix(m, q0))
}

pub fn is_positive_definite(m: &SymMatrix<BigInt>) -> bool {
    let lp = m.leading_principal_minors();
    lp.len() == m.dim() && lp.iter().all(Signed::is_positive)
}

/// Dense univariate polynomial over the rationals, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly(Vec<QRat>);

impl RatPoly {
    pub fn new(mut c: Vec<QRat>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        RatPoly(c)
    }

    pub fn from_ints(c: &[BigInt]) -> Self {
        Self::new(c.iter().cloned().map(QRat::from_integer).collect())
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| QRat::from_integer(x.into())).collect())
    }

    pub fn from_qpoly(p: &QPoly) -> Self {
        Self::from_ints(p.coeffs())
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn lead(&self) -> &QRat {
        self.0.last().expect("nonzero")
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * QRat::from_integer(i.into()))
                .collect(),
        )
    }

    /// `(quotient, remainder)`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dd = d.0.len() - 1;
        if r.len() <= dd {
            return (RatPoly(Vec::new()), self.clone());
        }
        let mut q = vec![QRat::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / d.lead();
            for (j, dc) in d.0.iter().enumerate() {
                r[i + j] -= &c * dc;
            }
            q[i] = c;
        }
        (Self::new(q), Self::new(r))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a
    }

    fn sign_at_infinity(&self, negative: bool) -> i32 {
        let s = if self.lead().is_positive() { 1 } else { -1 };
        if negative && self.degree().unwrap_or(0) % 2 == 1 {
            -s
        } else {
            s
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SturmReport {
    pub real_rooted: bool,
    pub distinct_real_roots: usize,
    pub squarefree_degree: usize,
}

fn sign_changes(signs: impl Iterator<Item = i32>) -> usize {
    let v: Vec<i32> = signs.collect();
    v.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Counts distinct real roots of `f != 0` with a Sturm chain on its
/// squarefree part.
pub fn sturm_real_rooted(f: &RatPoly) -> SturmReport {
    assert!(!f.is_zero(), "zero polynomial");
    let g = f.gcd(&f.derivative());
    let sf = f.div_rem(&g).0;
    let deg = sf.degree().unwrap_or(0);
    let mut chain = vec![sf.clone()];
    let mut next = sf.derivative();
    while !next.is_zero() {
        let r = chain.last().expect("nonempty").div_rem(&next).1;
        chain.push(next);
        next = RatPoly::new(r.0.iter().map(|c| -c).collect());
    }
    let at_neg = sign_changes(chain.iter().map(|p| p.sign_at_infinity(true)));
    let at_pos = sign_changes(chain.iter().map(|p| p.sign_at_infinity(false)));
    let roots = at_neg - at_pos;
    SturmReport {
        real_rooted: roots == deg,
        distinct_real_roots: roots,
        squarefree_degree: deg,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterlacingReport {
    pub bezout_positive_definite: bool,
    pub f_real_rooted: bool,
    pub g_real_rooted: bool,
}

/// Positive definiteness of `B(f, g)` for integer polynomials; by the
/// Krein-Naimark criterion this holds iff `f`, `g` are real-rooted with
/// strictly interlacing roots (and suitable leading signs).
pub fn interlaces(f: &QPoly, g: &QPoly) -> Result<bool, RootError> {
    let b = bezout_matrix(f.coeffs(), g.coeffs())?;
    Ok(is_positive_definite(&b))
}

/// [`interlaces`] plus independent Sturm checks of both polynomials.
pub fn interlacing_report(f: &QPoly, g: &QPoly) -> Result<InterlacingReport, RootError> {
    Ok(InterlacingReport {
        bezout_positive_definite: interlaces(f, g)?,
        f_real_rooted: sturm_real_rooted(&RatPoly::from_qpoly(f)).real_rooted,
        g_real_rooted: sturm_real_rooted(&RatPoly::from_qpoly(g)).real_rooted,
    })
}

/// Bezout matrix of two polynomials in `t` with coefficients in `Z[q]`.
pub fn bezout_symbolic(f: &crate::algebra::TQPoly, g: &crate::algebra::TQPoly) -> Result<SymMatrix<QPoly>, RootError> {
    bezout_matrix(f.coeffs(), g.coeffs())
}

/// Kind tag for certificate JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    TotalPositivity,
    PositiveDefinite,
    Sturm,
}

impl CertificateKind {
    fn tag(self) -> &'static str {
        match self {
            CertificateKind::TotalPositivity => "total_positivity",
            CertificateKind::PositiveDefinite => "pd",
            CertificateKind::Sturm => "sturm",
        }
    }
}

/// `{"kind", "n", "q", "verdict", "witness"}`; `q` is `"symbolic"` or an
/// integer.
pub fn certificate_json(kind: CertificateKind, n: usize, q: Value, verdict: bool, witness: Option<&MinorWitness>) -> Value {
    json!({
        "kind": kind.tag(),
        "n": n,
        "q": q,
        "verdict": verdict,
        "witness": witness.map(|w| json!({"rows": w.rows, "cols": w.cols, "u_coeffs": w.u_coeffs})),
    })
}
