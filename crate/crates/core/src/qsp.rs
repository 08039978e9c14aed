//! Enumeration of quasi series-parallel matroids on `{1..n}`.
//!
//! Connected series-parallel matroids are generated by closure under series
//! and parallel extensions; arbitrary quasi series-parallel matroids are
//! direct sums of those over set partitions of the ground set.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::QPoly;
use crate::group::{Elem, FiniteGroup};
use crate::matroid::{bit, elements, full, ElemSet, Matroid};
use crate::par::Exec;

/// Default enumeration cap on the ground-set size.
pub const DEFAULT_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QspError {
    #[error("n = {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },
}

fn check_cap(n: usize, cap: usize) -> Result<(), QspError> {
    if n > cap {
        Err(QspError::CapExceeded { n, cap })
    } else {
        Ok(())
    }
}

/// Connected series-parallel matroids on `{1..k}` for every `k <= n`.
///
/// `table[k]` lists the matroids on exactly `{1..k}`, sorted; `table[0]` is
/// empty. A connected series-parallel matroid on at least two elements has
/// an element in a series or parallel pair whose removal leaves a connected
/// series-parallel matroid, so level `k` is the closure of level `k - 1`
/// under both extensions with every possible new label.
pub fn connected_sp_table(n: usize, cap: usize, exec: Exec) -> Result<Vec<Vec<Matroid>>, QspError> {
    check_cap(n, cap)?;
    let mut table: Vec<Vec<Matroid>> = vec![Vec::new()];
    if n == 0 {
        return Ok(table);
    }
    table.push(vec![Matroid::uniform(0, 1), Matroid::uniform(1, 1)]);
    for k in 2..=n {
        let prev = &table[k - 1];
        let mut level: Vec<Matroid> = exec.flat_map(prev, |m| {
            let mut out = Vec::new();
            for new in 1..=k {
                // order-preserving map {1..k-1} -> {1..k} \ {new}
                let lifted = m.relabel(|e| if e >= new { e + 1 } else { e });
                for at in elements(lifted.ground()) {
                    if let Ok(p) = lifted.parallel_extension(at, new) {
                        out.push(p);
                    }
                    if let Ok(s) = lifted.series_extension(at, new) {
                        out.push(s);
                    }
                }
            }
            out
        });
        level.sort_unstable();
        level.dedup();
        table.push(level);
    }
    Ok(table)
}

/// Connected series-parallel matroids on exactly `{1..n}`.
pub fn connected_sp(n: usize) -> Result<Vec<Matroid>, QspError> {
    Ok(connected_sp_table(n, DEFAULT_CAP, Exec::default())?.pop().unwrap_or_default())
}

/// Set partitions of `{1..n}` as lists of block masks, in restricted-growth
/// string order. Blocks are listed by increasing minimum element.
pub fn set_partitions(n: usize) -> Vec<Vec<ElemSet>> {
    fn rec(i: usize, n: usize, blocks: &mut Vec<ElemSet>, out: &mut Vec<Vec<ElemSet>>) {
        if i > n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] |= bit(i);
            rec(i + 1, n, blocks, out);
            blocks[b] &= !bit(i);
        }
        blocks.push(bit(i));
        rec(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    rec(1, n, &mut Vec::new(), &mut out);
    out
}

/// Visits every quasi series-parallel matroid built over one set partition.
fn for_each_over_partition(
    table: &[Vec<Matroid>],
    blocks: &[ElemSet],
    mut visit: impl FnMut(&Matroid),
) {
    // relabel each block's connected pieces onto the block
    let pieces: Vec<Vec<Matroid>> = blocks
        .iter()
        .map(|&b| {
            let elems: Vec<usize> = elements(b).collect();
            table[elems.len()]
                .iter()
                .map(|m| m.relabel(|e| elems[e - 1]))
                .collect()
        })
        .collect();
    fn rec(pieces: &[Vec<Matroid>], acc: Option<Matroid>, visit: &mut impl FnMut(&Matroid)) {
        match pieces.split_first() {
            None => {
                if let Some(m) = acc {
                    visit(&m)
                }
            }
            Some((first, rest)) => {
                for p in first {
                    let next = match &acc {
                        None => p.clone(),
                        Some(a) => a.direct_sum(p).expect("blocks are disjoint"),
                    };
                    rec(rest, Some(next), visit);
                }
            }
        }
    }
    rec(&pieces, None, &mut visit);
}

/// All quasi series-parallel matroids on `{1..n}`, sorted.
pub fn qsp_all(n: usize) -> Result<Vec<Matroid>, QspError> {
    qsp_all_with(n, DEFAULT_CAP, Exec::default())
}

pub fn qsp_all_with(n: usize, cap: usize, exec: Exec) -> Result<Vec<Matroid>, QspError> {
    check_cap(n, cap)?;
    if n == 0 {
        return Ok(vec![Matroid::from_masks(0, vec![0]).expect("empty matroid")]);
    }
    let table = connected_sp_table(n, cap, exec)?;
    let partitions = set_partitions(n);
    let mut out = exec.flat_map(&partitions, |blocks| {
        let mut v = Vec::new();
        for_each_over_partition(&table, blocks, |m| v.push(m.clone()));
        v
    });
    out.sort_unstable();
    Ok(out)
}

/// Simple quasi series-parallel matroids on `{1..n}`, sorted.
pub fn qsp_simple(n: usize) -> Result<Vec<Matroid>, QspError> {
    Ok(qsp_all(n)?.into_iter().filter(Matroid::is_simple).collect())
}

/// Per-rank sums of `q^{n - c(M)}` over quasi series-parallel matroids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedCountTable {
    pub n: usize,
    /// Indexed by rank `0..=n`.
    pub count_all: Vec<QPoly>,
    pub count_simple: Vec<QPoly>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightedCountRow {
    pub rank: usize,
    pub count_all_qpoly: Vec<String>,
    pub count_simple_qpoly: Vec<String>,
}

impl WeightedCountTable {
    pub fn rows(&self) -> Vec<WeightedCountRow> {
        let strs = |p: &QPoly| p.coeffs().iter().map(|c| c.to_string()).collect();
        (0..=self.n)
            .map(|r| WeightedCountRow {
                rank: r,
                count_all_qpoly: strs(&self.count_all[r]),
                count_simple_qpoly: strs(&self.count_simple[r]),
            })
            .collect()
    }
}

/// Weighted counts by explicit enumeration: every assembled matroid has its
/// components and simplicity recomputed from its bases.
pub fn weighted_counts(n: usize) -> Result<WeightedCountTable, QspError> {
    weighted_counts_with(n, DEFAULT_CAP, Exec::default())
}

pub fn weighted_counts_with(n: usize, cap: usize, exec: Exec) -> Result<WeightedCountTable, QspError> {
    check_cap(n, cap)?;
    if n == 0 {
        // the empty matroid: rank 0, no components
        return Ok(WeightedCountTable {
            n,
            count_all: vec![QPoly::constant(1)],
            count_simple: vec![QPoly::constant(1)],
        });
    }
    let table = connected_sp_table(n, cap, exec)?;
    let partitions = set_partitions(n);
    // per partition: [rank][q-exponent] -> (all, simple)
    let partial = exec.map(&partitions, |blocks| {
        let mut all = vec![vec![0u64; n + 1]; n + 1];
        let mut simple = vec![vec![0u64; n + 1]; n + 1];
        for_each_over_partition(&table, blocks, |m| {
            let e = n - m.num_components();
            all[m.rank()][e] += 1;
            if m.is_simple() {
                simple[m.rank()][e] += 1;
            }
        });
        (all, simple)
    });
    let mut all = vec![vec![0u64; n + 1]; n + 1];
    let mut simple = vec![vec![0u64; n + 1]; n + 1];
    for (a, s) in partial {
        for r in 0..=n {
            for e in 0..=n {
                all[r][e] += a[r][e];
                simple[r][e] += s[r][e];
            }
        }
    }
    let to_poly = |row: &Vec<u64>| QPoly::new(row.iter().map(|&c| c.into()).collect());
    Ok(WeightedCountTable {
        n,
        count_all: all.iter().map(to_poly).collect(),
        count_simple: simple.iter().map(to_poly).collect(),
    })
}

/// Connected and simple members of `qsp_simple(n)` at a given rank.
pub fn count_connected_simple(n: usize, rank: usize) -> Result<usize, QspError> {
    let table = connected_sp_table(n, DEFAULT_CAP, Exec::default())?;
    Ok(table[n]
        .iter()
        .filter(|m| m.rank() == rank && m.is_simple())
        .count())
}

/// A group labeling in canonical form: the minimum element of every
/// connected component carries the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GLabeling {
    pub matroid: Matroid,
    /// `labels[e - 1]` is the label of element `e`; zero-padded up to the
    /// largest element of the ground set.
    pub labels: Vec<Elem>,
}

impl GLabeling {
    /// Canonical representative of the class of `labels` on `matroid`.
    pub fn canonical(matroid: Matroid, mut labels: Vec<Elem>, group: &FiniteGroup) -> GLabeling {
        for comp in matroid.components() {
            let first = comp.trailing_zeros() as usize;
            let shift = group.inv(labels[first]);
            for e in elements(comp) {
                labels[e - 1] = group.mul(shift, labels[e - 1]);
            }
        }
        GLabeling { matroid, labels }
    }
}

/// Largest ground set for which labelings are materialized.
pub const LABELING_MAX_N: usize = 8;
/// Largest group for which labelings are materialized.
pub const LABELING_MAX_ORDER: usize = 6;

/// One canonical representative per equivalence class of `G`-labelings.
pub fn g_labelings(m: &Matroid, group: &FiniteGroup) -> Result<Vec<GLabeling>, QspError> {
    let top = 32 - m.ground().leading_zeros() as usize;
    check_cap(m.size(), LABELING_MAX_N)?;
    check_cap(group.order(), LABELING_MAX_ORDER)?;
    let comps = m.components();
    // free positions: every element that is not the minimum of its component
    let free: Vec<usize> = comps
        .iter()
        .flat_map(|&c| elements(c & !(c & c.wrapping_neg())))
        .collect();
    let q = group.order();
    let total = q.pow(free.len() as u32);
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut labels = vec![group.identity(); top];
        let mut c = code;
        for &e in &free {
            labels[e - 1] = (c % q) as Elem;
            c /= q;
        }
        out.push(GLabeling {
            matroid: m.clone(),
            labels,
        });
    }
    out.sort();
    Ok(out)
}

/// Weighted count helper used by the rank-duality checks: `(rank, count)`.
pub fn rank_census(ms: &[Matroid]) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for m in ms {
        *out.entry(m.rank()).or_insert(0) += 1;
    }
    out
}

/// Convenience for tests and reports: `sum q^{n - c(M)}` over a list.
pub fn weight_sum(ms: &[Matroid]) -> QPoly {
    ms.iter().fold(QPoly::zero(), |acc, m| {
        let n = m.size();
        acc + QPoly::monomial(1, n - m.num_components())
    })
}

/// True when the list is closed under duality and contains only matroids on
/// `{1..n}`.
pub fn closed_under_duality(ms: &[Matroid], n: usize) -> bool {
    ms.iter()
        .all(|m| m.ground() == full(n) && ms.binary_search(&m.dual()).is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::all_matroids;

    #[test]
    fn connected_small() {
        assert_eq!(connected_sp(1).unwrap().len(), 2);
        assert_eq!(connected_sp(2).unwrap(), vec![Matroid::uniform(1, 2)]);
        let c3 = connected_sp(3).unwrap();
        assert_eq!(c3.len(), 2);
        assert!(c3.contains(&Matroid::uniform(1, 3)));
        assert!(c3.contains(&Matroid::uniform(2, 3)));
    }

    #[test]
    fn connected_matches_brute_force() {
        for n in 1..=5 {
            let brute: Vec<Matroid> = all_matroids(n)
                .into_iter()
                .filter(|m| m.is_connected() && !m.has_excluded_minor())
                .collect();
            assert_eq!(connected_sp(n).unwrap(), brute, "n = {n}");
        }
    }

    #[test]
    fn qsp_empty_ground_set() {
        let all = qsp_all(0).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].rank(), 0);
        assert_eq!(qsp_simple(0).unwrap().len(), 1);
    }

    #[test]
    fn qsp_two_elements() {
        let all = qsp_all(2).unwrap();
        assert_eq!(all.len(), 5);
        let mut ranks: Vec<usize> = all.iter().map(Matroid::rank).collect();
        ranks.sort();
        assert_eq!(ranks, vec![0, 1, 1, 1, 2]);
    }

    #[test]
    fn qsp_simple_three() {
        let s: Vec<Matroid> = qsp_simple(3)
            .unwrap()
            .into_iter()
            .filter(|m| m.rank() == 2)
            .collect();
        assert_eq!(s, vec![Matroid::uniform(2, 3)]);
    }

    #[test]
    fn set_partition_counts() {
        let bell: Vec<usize> = (1..=6).map(|n| set_partitions(n).len()).collect();
        assert_eq!(bell, vec![1, 2, 5, 15, 52, 203]);
        assert_eq!(set_partitions(3)[0], vec![0b111]);
    }

    #[test]
    fn weighted_examples() {
        let w3 = weighted_counts(3).unwrap();
        assert_eq!(w3.count_simple[2], QPoly::monomial(1, 2));
        assert_eq!(w3.count_simple[3], QPoly::constant(1));
        let w4 = weighted_counts(4).unwrap();
        assert_eq!(w4.count_simple[3], QPoly::from_i64s(&[0, 0, 4, 1]));
        let w2 = weighted_counts(2).unwrap();
        assert_eq!(w2.count_all[1], QPoly::from_i64s(&[2, 1]));
        assert_eq!(w2.count_all[0], QPoly::constant(1));
    }

    #[test]
    fn weighted_counts_match_materialized_list() {
        let n = 4;
        let all = qsp_all(n).unwrap();
        let w = weighted_counts(n).unwrap();
        for r in 0..=n {
            let at_r: Vec<Matroid> = all.iter().filter(|m| m.rank() == r).cloned().collect();
            assert_eq!(weight_sum(&at_r), w.count_all[r]);
        }
        assert_eq!(rank_census(&all).values().sum::<usize>(), all.len());
    }

    #[test]
    fn labelings() {
        let fig = Matroid::graphic(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 1)]);
        let z2 = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(g_labelings(&fig, &z2).unwrap().len(), 16);
        let triv = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(g_labelings(&fig, &triv).unwrap().len(), 1);
        let z3 = FiniteGroup::cyclic(3).unwrap();
        assert_eq!(g_labelings(&Matroid::uniform(2, 2), &z3).unwrap().len(), 1);
    }

    #[test]
    fn labeling_canonical_form_is_class_invariant() {
        let m = Matroid::uniform(1, 2).direct_sum(&Matroid::uniform(1, 2).relabel(|e| e + 2)).unwrap();
        let g = FiniteGroup::symmetric(3).unwrap();
        let base = GLabeling::canonical(m.clone(), vec![1, 4, 2, 5], &g);
        for h in g.elements() {
            for k in g.elements() {
                let shifted = vec![g.mul(h, 1), g.mul(h, 4), g.mul(k, 2), g.mul(k, 5)];
                assert_eq!(GLabeling::canonical(m.clone(), shifted, &g), base);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            weighted_counts_with(9, DEFAULT_CAP, Exec::Sequential),
            Err(QspError::CapExceeded { n: 9, cap: 8 })
        );
    }
}
