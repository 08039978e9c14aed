//! Explicit finite graded lattices given by their cover relations.

use std::collections::HashMap;

use thiserror::Error;

use crate::matroid::{bit, elements, submasks, ElemSet, Matroid};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lattice is not graded: {0}")]
    NotGraded(String),
    #[error("lattice too large: {0}")]
    TooLarge(String),
}

/// A bounded graded poset stored by up-covers. Element 0 need not be the
/// bottom; [`GradedLattice::bottom`] and [`GradedLattice::top`] locate them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedLattice {
    rank: Vec<usize>,
    up: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
}

impl GradedLattice {
    /// Checks that there is exactly one minimal and one maximal element, the
    /// minimal one has rank 0, covers raise rank by exactly one and every
    /// element lies above the bottom.
    pub fn new(rank: Vec<usize>, up: Vec<Vec<usize>>) -> Result<Self, LatticeError> {
        let n = rank.len();
        if n == 0 || up.len() != n {
            return Err(LatticeError::NotGraded("empty or mismatched input".into()));
        }
        let mut has_down = vec![false; n];
        for (i, covers) in up.iter().enumerate() {
            for &j in covers {
                if j >= n {
                    return Err(LatticeError::NotGraded(format!("cover index {j} out of range")));
                }
                if rank[j] != rank[i] + 1 {
                    return Err(LatticeError::NotGraded(format!(
                        "cover {i} -> {j} changes rank by {} ",
                        rank[j] as i64 - rank[i] as i64
                    )));
                }
                has_down[j] = true;
            }
        }
        let minimal: Vec<usize> = (0..n).filter(|&i| !has_down[i]).collect();
        let maximal: Vec<usize> = (0..n).filter(|&i| up[i].is_empty()).collect();
        if minimal.len() != 1 || maximal.len() != 1 {
            return Err(LatticeError::NotGraded(format!(
                "{} minimal and {} maximal elements",
                minimal.len(),
                maximal.len()
            )));
        }
        let (bottom, top) = (minimal[0], maximal[0]);
        if rank[bottom] != 0 {
            return Err(LatticeError::NotGraded("bottom has nonzero rank".into()));
        }
        Ok(GradedLattice { rank, up, bottom, top })
    }

    /// Subsets of an `r`-set ordered by inclusion.
    pub fn boolean(r: usize) -> Self {
        let size = 1usize << r;
        let rank = (0..size).map(|s| s.count_ones() as usize).collect();
        let up = (0..size)
            .map(|s| (0..r).filter(|i| s & (1 << i) == 0).map(|i| s | (1 << i)).collect())
            .collect();
        GradedLattice::new(rank, up).expect("boolean lattices are graded")
    }

    /// Lattice of flats of a matroid, by brute-force closure.
    pub fn of_flats(m: &Matroid) -> Result<Self, LatticeError> {
        if m.size() > 16 {
            return Err(LatticeError::TooLarge(format!("ground set of size {}", m.size())));
        }
        let mut flats: Vec<ElemSet> = submasks(m.ground())
            .filter(|&s| {
                let r = m.rank_of(s);
                elements(m.ground() & !s).all(|e| m.rank_of(s | bit(e)) > r)
            })
            .collect();
        flats.sort_by_key(|&f| (m.rank_of(f), f));
        let index: HashMap<ElemSet, usize> = flats.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let rank: Vec<usize> = flats.iter().map(|&f| m.rank_of(f)).collect();
        let up = flats
            .iter()
            .map(|&f| {
                let mut covers: Vec<usize> = flats
                    .iter()
                    .filter(|&&g| g & f == f && m.rank_of(g) == m.rank_of(f) + 1)
                    .map(|g| index[g])
                    .collect();
                covers.sort_unstable();
                covers
            })
            .collect();
        GradedLattice::new(rank, up)
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn rank(&self, i: usize) -> usize {
        self.rank[i]
    }

    pub fn total_rank(&self) -> usize {
        self.rank[self.top]
    }

    pub fn up_covers(&self, i: usize) -> &[usize] {
        &self.up[i]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Elements `>= i`, found by breadth-first search; `seen` is scratch
    /// space of length `len()` whose entries equal to `stamp` mark visited.
    pub fn up_set_into(&self, i: usize, seen: &mut [u32], stamp: u32, out: &mut Vec<usize>) {
        out.clear();
        out.push(i);
        seen[i] = stamp;
        let mut head = 0;
        while head < out.len() {
            let x = out[head];
            head += 1;
            for &y in &self.up[x] {
                if seen[y] != stamp {
                    seen[y] = stamp;
                    out.push(y);
                }
            }
        }
    }

    /// Counts per rank.
    pub fn rank_census(&self) -> Vec<usize> {
        let mut out = vec![0; self.total_rank() + 1];
        for &r in &self.rank {
            out[r] += 1;
        }
        out
    }

    /// Number of covers on the longest chain from bottom to top.
    pub fn longest_chain_len(&self) -> usize {
        self.chain_lengths().1
    }

    /// Number of covers on the shortest chain from bottom to top.
    pub fn shortest_chain_len(&self) -> usize {
        self.chain_lengths().0
    }

    fn chain_lengths(&self) -> (usize, usize) {
        let n = self.len();
        let mut shortest = vec![usize::MAX; n];
        let mut longest = vec![0usize; n];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| self.rank[i]);
        shortest[self.bottom] = 0;
        for &x in &order {
            if shortest[x] == usize::MAX {
                continue;
            }
            for &y in &self.up[x] {
                shortest[y] = shortest[y].min(shortest[x] + 1);
                longest[y] = longest[y].max(longest[x] + 1);
            }
        }
        (shortest[self.top], longest[self.top])
    }
}
