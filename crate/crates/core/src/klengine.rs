//! Kazhdan–Lusztig and Z-polynomials: a generic engine on explicit lattices
//! and a symbolic recursion in `Z[q]` for Dowling geometries.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{complete_palindromic, AlgebraError, QPoly, TQPoly};
use crate::dowling::{whitney_row, DowlingError, DowlingLattice, LatticeCaps};
use crate::group::{FiniteGroup, GroupSpec};
use crate::lattice::{GradedLattice, LatticeError};
use crate::par::Exec;
use crate::qsp::{weighted_counts, QspError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KlError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Dowling(#[from] DowlingError),
    #[error(transparent)]
    Qsp(#[from] QspError),
    #[error("mismatch at n = {n}, t^{i} ({what}): expected {expected}, got {got}")]
    Mismatch {
        n: usize,
        i: usize,
        what: String,
        expected: String,
        got: String,
    },
}

/// Largest explicit lattice accepted by [`pz_from_lattice`].
pub const MAX_LATTICE_FLATS: usize = 200_000;
/// Largest `n` accepted by [`dowling_pz`].
pub const MAX_SYMBOLIC_N: usize = 40;

/// Runs the defining recursion on every upper interval of `lattice` and
/// returns `(P, Z)` of the whole lattice as integer polynomials in `t`.
pub fn pz_from_lattice(lattice: &GradedLattice) -> Result<(QPoly, QPoly), KlError> {
    pz_from_lattice_with(lattice, Exec::default())
}

pub fn pz_from_lattice_with(lattice: &GradedLattice, exec: Exec) -> Result<(QPoly, QPoly), KlError> {
    let len = lattice.len();
    if len > MAX_LATTICE_FLATS {
        return Err(LatticeError::TooLarge(format!("{len} elements > {MAX_LATTICE_FLATS}")).into());
    }
    let total = lattice.total_rank();
    let mut by_rank: Vec<Vec<usize>> = vec![Vec::new(); total + 1];
    for i in 0..len {
        by_rank[lattice.rank(i)].push(i);
    }
    // p[i] = P of the upper interval [i, top]
    let mut p: Vec<Vec<i128>> = vec![Vec::new(); len];
    let overflow = || LatticeError::TooLarge("coefficient exceeds 128 bits".into());
    for r in (0..=total).rev() {
        let level = exec.map_init(
            &by_rank[r],
            || (vec![0u32; len], 0u32, Vec::new()),
            |(seen, stamp, up), &x| -> Result<(Vec<i128>, Vec<i128>), KlError> {
                let corank = total - r;
                *stamp += 1;
                lattice.up_set_into(x, seen, *stamp, up);
                let mut known = vec![0i128; corank + 1];
                for &y in up.iter().skip(1) {
                    let shift = lattice.rank(y) - r;
                    for (k, c) in p[y].iter().enumerate() {
                        let slot = &mut known[shift + k];
                        *slot = slot.checked_add(*c).ok_or_else(overflow)?;
                    }
                }
                let px = complete_palindromic(&known, corank)?;
                Ok((px, known))
            },
        );
        for (&x, res) in by_rank[r].iter().zip(level) {
            let (px, known) = res?;
            if x == lattice.bottom() {
                let z: Vec<BigInt> = (0..=total)
                    .map(|i| BigInt::from(px.get(i).copied().unwrap_or(0) + known[i]))
                    .collect();
                let pb = px.iter().map(|&c| BigInt::from(c)).collect();
                return Ok((QPoly::new(pb), QPoly::new(z)));
            }
            p[x] = px;
        }
    }
    unreachable!("the bottom has rank 0")
}

/// Where a result came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Symbolic,
    Generic(GroupSpec),
}

/// `P` and `Z` of `Q_n`, with coefficients in `Z[q]` (constant in `q` for
/// generic results).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PZResult {
    pub n: usize,
    pub p: TQPoly,
    pub z: TQPoly,
    pub provenance: Provenance,
}

/// Exact JSON integer.
pub fn bigint_json(x: &BigInt) -> Value {
    Value::Number(serde_json::Number::from_str(&x.to_string()).expect("integer literal"))
}

/// `[[c_00, c_01, ...], ...]`: outer index `t`, inner `q`, ascending.
pub fn grid_json(p: &TQPoly) -> Value {
    Value::Array(
        p.to_grid()
            .iter()
            .map(|row| Value::Array(row.iter().map(bigint_json).collect()))
            .collect(),
    )
}

impl PZResult {
    pub fn to_json(&self) -> Value {
        let q = match &self.provenance {
            Provenance::Symbolic => json!("symbolic"),
            Provenance::Generic(spec) => json!(spec.order()),
        };
        json!({"n": self.n, "q": q, "P": grid_json(&self.p), "Z": grid_json(&self.z)})
    }

    /// `Z` palindromic of degree `n`, `deg P < n/2`, constant terms 1.
    pub fn check_invariants(&self) -> Result<(), String> {
        if !self.z.is_palindromic_of_degree(self.n) {
            return Err(format!("Z not palindromic of degree {}", self.n));
        }
        if self.n > 0 && 2 * self.p.degree().unwrap_or(0) >= self.n {
            return Err("deg P >= n/2".into());
        }
        if !self.p.coeff(0).is_one() || !self.z.coeff(0).is_one() || !self.z.coeff(self.n).is_one() {
            return Err("constant or leading term is not 1".into());
        }
        Ok(())
    }
}

/// `P` and `Z` of `Q_0, ..., Q_n` over `Z[q]`.
///
/// A flat with `k` blocks contracts to a geometry whose simplification is
/// `Q_k`, so `Z_{Q_m} = sum_k W(m, k) t^{m-k} P_{Q_k}` with `W` the flat
/// counts by block number.
pub fn dowling_pz_all(n: usize) -> Result<Vec<PZResult>, KlError> {
    if n > MAX_SYMBOLIC_N {
        return Err(DowlingError::CapExceeded(format!("n = {n} > {MAX_SYMBOLIC_N}")).into());
    }
    let mut ps: Vec<TQPoly> = vec![TQPoly::from_ints(&[1])];
    let mut out = vec![PZResult {
        n: 0,
        p: ps[0].clone(),
        z: ps[0].clone(),
        provenance: Provenance::Symbolic,
    }];
    for m in 1..=n {
        let w = whitney_row(m);
        let mut known = TQPoly::zero();
        for k in 0..m {
            known = &known + &ps[k].scale(&w[k]).shift_t(m - k);
        }
        let p = TQPoly::palindromic_complete(&known, m)?;
        let z = &p + &known;
        ps.push(p.clone());
        out.push(PZResult {
            n: m,
            p,
            z,
            provenance: Provenance::Symbolic,
        });
    }
    Ok(out)
}

pub fn dowling_pz(n: usize) -> Result<PZResult, KlError> {
    Ok(dowling_pz_all(n)?.pop().expect("nonempty"))
}

/// Generic-engine result for a concrete group.
pub fn lattice_pz(n: usize, spec: GroupSpec, caps: LatticeCaps, exec: Exec) -> Result<PZResult, KlError> {
    let group = spec.build().map_err(|e| DowlingError::Invalid(e.to_string()))?;
    let lattice = DowlingLattice::build_with(n, &group, caps, exec)?;
    let (p, z) = pz_from_lattice_with(&lattice.to_graded(), exec)?;
    let lift = |x: QPoly| TQPoly::new(x.coeffs().iter().map(|c| QPoly::constant(c.clone())).collect());
    Ok(PZResult {
        n,
        p: lift(p),
        z: lift(z),
        provenance: Provenance::Generic(spec),
    })
}

/// Which polynomial a coefficient check compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Which {
    P,
    Z,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoefficientCheck {
    pub i: usize,
    pub rank: usize,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub n: usize,
    pub mode: Which,
    pub checks: Vec<CoefficientCheck>,
}

/// Compares the `t^i` coefficient of `P_{Q_n}` (resp. `Z_{Q_n}`) with the
/// weighted count of simple (resp. all) quasi series-parallel matroids of
/// rank `n - i`.
pub fn verify_theorem1(n: usize, mode: Which) -> Result<TheoremReport, KlError> {
    let pz = dowling_pz(n)?;
    let counts = weighted_counts(n)?;
    let (poly, table) = match mode {
        Which::P => (&pz.p, &counts.count_simple),
        Which::Z => (&pz.z, &counts.count_all),
    };
    let mut checks = Vec::new();
    for i in 0..=n {
        let rank = n - i;
        let got = poly.coeff(i);
        if got != table[rank] {
            return Err(KlError::Mismatch {
                n,
                i,
                what: format!("{mode:?} vs weighted count at rank {rank}"),
                expected: got.to_plain("q"),
                got: table[rank].to_plain("q"),
            });
        }
        checks.push(CoefficientCheck {
            i,
            rank,
            value: got.to_plain("q"),
        });
    }
    Ok(TheoremReport { n, mode, checks })
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupCheck {
    pub group: String,
    pub order: usize,
    pub flats: usize,
    pub p: String,
    pub z: String,
}

/// Runs the generic engine on each group's lattice and compares with the
/// symbolic result evaluated at `q = |G|`.
pub fn verify_group_independence(n: usize, groups: &[GroupSpec], exec: Exec) -> Result<Vec<GroupCheck>, KlError> {
    let symbolic = dowling_pz(n)?;
    let mut out = Vec::new();
    for &spec in groups {
        let group: FiniteGroup = spec.build().map_err(|e| DowlingError::Invalid(e.to_string()))?;
        let lattice = DowlingLattice::build_with(n, &group, Default::default(), exec)?;
        let (p, z) = pz_from_lattice_with(&lattice.to_graded(), exec)?;
        let q0 = spec.order() as i64;
        for (what, got, want) in [("P", &p, symbolic.p.eval_at_q_i64(q0)), ("Z", &z, symbolic.z.eval_at_q_i64(q0))] {
            if *got != want {
                let i = (0..=n).find(|&i| got.coeff(i) != want.coeff(i)).unwrap_or(0);
                return Err(KlError::Mismatch {
                    n,
                    i,
                    what: format!("{what} over {spec}"),
                    expected: want.to_plain("t"),
                    got: got.to_plain("t"),
                });
            }
        }
        out.push(GroupCheck {
            group: spec.to_string(),
            order: spec.order(),
            flats: lattice.len(),
            p: p.to_plain("t"),
            z: z.to_plain("t"),
        });
    }
    Ok(out)
}

/// Rebuilds `(P, Z)` over `Z[q]` from concrete results at several orders.
/// Every `t`-coefficient of `Z_{Q_n}` has `q`-degree at most `n`, so `n + 1`
/// distinct orders determine it.
pub fn lift_to_symbolic(n: usize, samples: &[(usize, QPoly, QPoly)]) -> Result<(TQPoly, TQPoly), KlError> {
    let ps: Vec<(BigInt, QPoly)> = samples.iter().map(|(q, p, _)| (BigInt::from(*q), p.clone())).collect();
    let zs: Vec<(BigInt, QPoly)> = samples.iter().map(|(q, _, z)| (BigInt::from(*q), z.clone())).collect();
    Ok((TQPoly::interpolate(&ps, n)?, TQPoly::interpolate(&zs, n)?))
}

/// `q^{2m-2} (2m-3)!! (2m-1)^{m-2}` for `n = 2m - 1`, `m >= 2`.
pub fn odd_leading_coefficient(m: usize) -> QPoly {
    assert!(m >= 2);
    let dfact: BigInt = (1..=2 * m - 3).step_by(2).map(BigInt::from).product();
    let pow = num_traits::pow(BigInt::from(2 * m - 1), m - 2);
    QPoly::monomial(dfact * pow, 2 * m - 2)
}

/// Nonnegativity of every integer coefficient of `P` and `Z`.
pub fn all_nonnegative(r: &PZResult) -> bool {
    r.p.coeffs().iter().chain(r.z.coeffs()).all(QPoly::all_coeffs_nonnegative)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{k4_cycle_matroid, Matroid};

    fn q(c: &[i64]) -> QPoly {
        QPoly::from_i64s(c)
    }

    #[test]
    fn boolean_lattice() {
        let (p, z) = pz_from_lattice(&GradedLattice::boolean(2)).unwrap();
        assert_eq!(p, q(&[1]));
        assert_eq!(z, q(&[1, 2, 1]));
        let (p, z) = pz_from_lattice(&GradedLattice::boolean(0)).unwrap();
        assert_eq!((p, z), (q(&[1]), q(&[1])));
    }

    #[test]
    fn matroid_lattices() {
        let (p, z) = pz_from_lattice(&GradedLattice::of_flats(&k4_cycle_matroid()).unwrap()).unwrap();
        assert_eq!(p, q(&[1, 1]));
        assert_eq!(z, q(&[1, 7, 7, 1]));
        // rank 3: the linear coefficient is hyperplanes minus atoms
        let (p, _) = pz_from_lattice(&GradedLattice::of_flats(&Matroid::uniform(3, 4)).unwrap()).unwrap();
        assert_eq!(p, q(&[1, 6 - 4]));
        let (p, _) = pz_from_lattice(&GradedLattice::of_flats(&Matroid::uniform(3, 5)).unwrap()).unwrap();
        assert_eq!(p, q(&[1, 10 - 5]));
    }

    #[test]
    fn small_dowling_lattices() {
        let l = DowlingLattice::build(3, &FiniteGroup::cyclic(2).unwrap()).unwrap();
        let (p, z) = pz_from_lattice(&l.to_graded()).unwrap();
        assert_eq!(p, q(&[1, 4]));
        assert_eq!(z, q(&[1, 13, 13, 1]));
        let l = DowlingLattice::build(3, &FiniteGroup::cyclic(1).unwrap()).unwrap();
        assert_eq!(pz_from_lattice(&l.to_graded()).unwrap().0, q(&[1, 1]));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let l = DowlingLattice::build(4, &FiniteGroup::cyclic(3).unwrap()).unwrap().to_graded();
        assert_eq!(
            pz_from_lattice_with(&l, Exec::Sequential).unwrap(),
            pz_from_lattice_with(&l, Exec::Parallel).unwrap()
        );
    }

    #[test]
    fn symbolic_small() {
        let r = dowling_pz(1).unwrap();
        assert_eq!(r.p, TQPoly::from_ints(&[1]));
        assert_eq!(r.z, TQPoly::from_ints(&[1, 1]));
        assert_eq!(dowling_pz(2).unwrap().p, TQPoly::from_ints(&[1]));
        let r = dowling_pz(2).unwrap();
        assert_eq!(r.z, TQPoly::new(vec![q(&[1]), q(&[2, 1]), q(&[1])]));
        let r = dowling_pz(3).unwrap();
        assert_eq!(r.p, TQPoly::new(vec![q(&[1]), q(&[0, 0, 1])]));
        let r = dowling_pz(4).unwrap();
        assert_eq!(r.p.scale_t_by_qsquared().unwrap(), TQPoly::new(vec![q(&[1]), q(&[4, 1])]));
    }

    #[test]
    fn symbolic_n8() {
        let scaled = dowling_pz(8).unwrap().p.scale_t_by_qsquared().unwrap();
        let c2 = q(&[160, 340, 333, 134]).scale(&BigInt::from(7));
        let c3 = q(&[64, 89]).scale(&BigInt::from(105));
        assert_eq!(
            scaled,
            TQPoly::new(vec![q(&[1]), q(&[56, 70, 56, 28, 8, 1]), c2, c3])
        );
    }

    #[test]
    fn invariants_hold() {
        for r in dowling_pz_all(20).unwrap() {
            r.check_invariants().unwrap();
            assert!(all_nonnegative(&r), "n = {}", r.n);
            if r.n >= 1 {
                assert_eq!(r.z.coeff(r.n - 1), crate::dowling::whitney(r.n, 1));
            }
        }
        let w = whitney_row(3);
        assert_eq!(dowling_pz(3).unwrap().p.coeff(1), &w[1] - &w[2]);
        for m in 2..=7 {
            let r = dowling_pz(2 * m - 1).unwrap();
            assert_eq!(r.p.coeff(m - 1), odd_leading_coefficient(m), "m = {m}");
        }
    }

    #[test]
    fn theorem_small() {
        for n in 0..=5 {
            verify_theorem1(n, Which::P).unwrap();
            verify_theorem1(n, Which::Z).unwrap();
        }
        let r = verify_theorem1(5, Which::P).unwrap();
        assert_eq!(r.checks[2].value, "15q^4");
    }

    #[test]
    fn group_independence_small() {
        let groups = [GroupSpec::Cyclic(1), GroupSpec::Cyclic(2), GroupSpec::Symmetric(3), GroupSpec::Cyclic(6)];
        for n in 0..=3 {
            verify_group_independence(n, &groups, Exec::default()).unwrap();
        }
    }

    #[test]
    fn lifting_recovers_symbolic() {
        let n = 3;
        let samples: Vec<(usize, QPoly, QPoly)> = (1..=n + 1)
            .map(|m| {
                let r = lattice_pz(n, GroupSpec::Cyclic(m), LatticeCaps::default(), Exec::default()).unwrap();
                (m, r.p.eval_at_q_i64(0), r.z.eval_at_q_i64(0))
            })
            .collect();
        let (p, z) = lift_to_symbolic(n, &samples).unwrap();
        let s = dowling_pz(n).unwrap();
        assert_eq!((p, z), (s.p, s.z));
    }

    #[test]
    fn json_shape() {
        let v = dowling_pz(3).unwrap().to_json();
        assert_eq!(
            v.to_string(),
            r#"{"P":[[1],[0,0,1]],"Z":[[1],[3,3,1],[3,3,1],[1]],"n":3,"q":"symbolic"}"#
        );
        let big = dowling_pz(40).unwrap().to_json().to_string();
        assert!(big.len() > 1000);
    }
}
