//! Labeled matroids stored by their bases.
//!
//! Elements are the integers `1..=32`; a set of elements is a `u32` mask with
//! element `e` at bit `e - 1`. Equality is labeled equality: two matroids are
//! equal iff they have the same ground set and the same bases.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::permutations;

/// Bit mask of elements.
pub type ElemSet = u32;

/// Largest ground set for which the exchange axiom is verified on construction.
pub const EXCHANGE_CHECK_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("not a matroid: {0}")]
    NotAMatroid(String),
    #[error("invalid extension site: {0}")]
    InvalidSite(String),
    #[error("element {0} out of range")]
    BadElement(usize),
    #[error("ground sets overlap")]
    Overlap,
}

#[inline]
pub fn bit(e: usize) -> ElemSet {
    1 << (e - 1)
}

/// Elements of a mask in increasing order.
pub fn elements(mask: ElemSet) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let e = m.trailing_zeros() as usize + 1;
            m &= m - 1;
            Some(e)
        }
    })
}

pub fn mask_of(elems: &[usize]) -> ElemSet {
    elems.iter().fold(0, |m, &e| m | bit(e))
}

/// Mask of `{1..n}`.
pub fn full(n: usize) -> ElemSet {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matroid {
    ground: ElemSet,
    rank: usize,
    /// Sorted ascending as integers.
    bases: Vec<ElemSet>,
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bases: Vec<Vec<usize>> = self.bases.iter().map(|&b| elements(b).collect()).collect();
        write!(
            f,
            "Matroid(E={:?}, r={}, bases={:?})",
            elements(self.ground).collect::<Vec<_>>(),
            self.rank,
            bases
        )
    }
}

impl Matroid {
    /// Matroid on `{1..n}` from lists of basis elements.
    pub fn from_bases(n: usize, bases: &[Vec<usize>]) -> Result<Self, MatroidError> {
        if n > 32 {
            return Err(MatroidError::BadElement(n));
        }
        let mut masks = Vec::with_capacity(bases.len());
        for b in bases {
            for &e in b {
                if e == 0 || e > n {
                    return Err(MatroidError::BadElement(e));
                }
            }
            let m = mask_of(b);
            if m.count_ones() as usize != b.len() {
                return Err(MatroidError::NotAMatroid("repeated element in a basis".into()));
            }
            masks.push(m);
        }
        Self::from_masks(full(n), masks)
    }

    /// Validated constructor from basis masks on an arbitrary ground set.
    pub fn from_masks(ground: ElemSet, mut bases: Vec<ElemSet>) -> Result<Self, MatroidError> {
        bases.sort_unstable();
        bases.dedup();
        let first = *bases
            .first()
            .ok_or_else(|| MatroidError::NotAMatroid("no bases".into()))?;
        let rank = first.count_ones() as usize;
        if bases.iter().any(|b| b.count_ones() as usize != rank) {
            return Err(MatroidError::NotAMatroid("bases are not equicardinal".into()));
        }
        if bases.iter().any(|b| b & !ground != 0) {
            return Err(MatroidError::NotAMatroid("basis outside ground set".into()));
        }
        let m = Matroid { ground, rank, bases };
        if ground.count_ones() as usize <= EXCHANGE_CHECK_LIMIT && !m.satisfies_exchange() {
            return Err(MatroidError::NotAMatroid("basis exchange fails".into()));
        }
        Ok(m)
    }

    /// Trusted constructor for bases produced by matroid operations.
    fn from_masks_unchecked(ground: ElemSet, mut bases: Vec<ElemSet>) -> Self {
        bases.sort_unstable();
        bases.dedup();
        let rank = bases[0].count_ones() as usize;
        debug_assert!(bases.iter().all(|b| b.count_ones() as usize == rank));
        Matroid { ground, rank, bases }
    }

    fn satisfies_exchange(&self) -> bool {
        let set: HashSet<ElemSet> = self.bases.iter().copied().collect();
        self.bases.iter().all(|&b1| {
            self.bases.iter().all(|&b2| {
                elements(b1 & !b2).all(|x| {
                    elements(b2 & !b1).any(|y| set.contains(&((b1 & !bit(x)) | bit(y))))
                })
            })
        })
    }

    /// `U_{r,n}` on `{1..n}`.
    pub fn uniform(r: usize, n: usize) -> Self {
        let bases = (0..=full(n)).filter(|m| m.count_ones() as usize == r).collect();
        Self::from_masks_unchecked(full(n), bases)
    }

    /// Cycle matroid of a multigraph on vertices `0..vertices`; edge `i`
    /// becomes element `i + 1`.
    pub fn graphic(vertices: usize, edges: &[(usize, usize)]) -> Self {
        let n = edges.len();
        let forest_rank = |mask: ElemSet| -> usize {
            let mut parent: Vec<usize> = (0..vertices).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                let mut r = x;
                while p[r] != r {
                    r = p[r];
                }
                p[x] = r;
                r
            }
            let mut r = 0;
            for e in elements(mask) {
                let (a, b) = edges[e - 1];
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                    r += 1;
                }
            }
            r
        };
        let r = forest_rank(full(n));
        let bases = (0..=full(n))
            .filter(|&m| m.count_ones() as usize == r && forest_rank(m) == r)
            .collect();
        Self::from_masks_unchecked(full(n), bases)
    }

    pub fn ground(&self) -> ElemSet {
        self.ground
    }

    pub fn size(&self) -> usize {
        self.ground.count_ones() as usize
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> &[ElemSet] {
        &self.bases
    }

    pub fn is_basis(&self, s: ElemSet) -> bool {
        self.bases.binary_search(&s).is_ok()
    }

    pub fn rank_of(&self, s: ElemSet) -> usize {
        self.bases
            .iter()
            .map(|b| (b & s).count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn is_independent(&self, s: ElemSet) -> bool {
        self.rank_of(s) == s.count_ones() as usize
    }

    pub fn loops(&self) -> ElemSet {
        let used = self.bases.iter().fold(0, |acc, b| acc | b);
        self.ground & !used
    }

    pub fn coloops(&self) -> ElemSet {
        self.bases.iter().fold(self.ground, |acc, b| acc & b)
    }

    /// Minimal dependent sets, sorted.
    pub fn circuits(&self) -> Vec<ElemSet> {
        let mut subsets: Vec<ElemSet> = submasks(self.ground)
            .filter(|&s| s.count_ones() as usize <= self.rank + 1)
            .collect();
        subsets.sort_by_key(|s| (s.count_ones(), *s));
        let mut out: Vec<ElemSet> = Vec::new();
        for s in subsets {
            if s == 0 || out.iter().any(|&c| c & !s == 0) {
                continue;
            }
            if !self.is_independent(s) {
                out.push(s);
            }
        }
        out.sort_unstable();
        out
    }

    /// Parallel classes of the non-loop elements, sorted by minimum element.
    pub fn parallel_classes(&self) -> Vec<ElemSet> {
        let mut remaining = self.ground & !self.loops();
        let mut out = Vec::new();
        while remaining != 0 {
            let e = remaining.trailing_zeros() as usize + 1;
            let class = elements(remaining)
                .filter(|&f| f == e || self.rank_of(bit(e) | bit(f)) == 1)
                .fold(0, |m, f| m | bit(f));
            out.push(class);
            remaining &= !class;
        }
        out
    }

    pub fn is_simple(&self) -> bool {
        self.loops() == 0 && self.parallel_classes().iter().all(|c| c.count_ones() == 1)
    }

    /// Connected components, sorted by minimum element.
    ///
    /// Uses fundamental circuits with respect to one basis: `x` outside the
    /// basis and `b` inside lie in a common circuit iff `B - b + x` is a
    /// basis, and these relations generate the connectivity relation.
    pub fn components(&self) -> Vec<ElemSet> {
        let elems: Vec<usize> = elements(self.ground).collect();
        let mut parent: Vec<usize> = (0..=32).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        let b0 = self.bases[0];
        for x in elements(self.ground & !b0) {
            for b in elements(b0) {
                if self.is_basis((b0 & !bit(b)) | bit(x)) {
                    let (rx, rb) = (find(&mut parent, x), find(&mut parent, b));
                    parent[rx] = rb;
                }
            }
        }
        let mut comps: Vec<ElemSet> = Vec::new();
        let mut seen = 0u32;
        for &e in &elems {
            if seen & bit(e) != 0 {
                continue;
            }
            let r = find(&mut parent, e);
            let comp = elems
                .iter()
                .filter(|&&f| find(&mut parent, f) == r)
                .fold(0, |m, &f| m | bit(f));
            seen |= comp;
            comps.push(comp);
        }
        comps
    }

    pub fn num_components(&self) -> usize {
        self.components().len()
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() <= 1
    }

    pub fn dual(&self) -> Matroid {
        Self::from_masks_unchecked(self.ground, self.bases.iter().map(|b| self.ground & !b).collect())
    }

    pub fn delete(&self, e: usize) -> Result<Matroid, MatroidError> {
        self.check_elem(e)?;
        let ground = self.ground & !bit(e);
        let bases: Vec<ElemSet> = if self.coloops() & bit(e) != 0 {
            self.bases.iter().map(|b| b & !bit(e)).collect()
        } else {
            self.bases.iter().copied().filter(|b| b & bit(e) == 0).collect()
        };
        Ok(Self::from_masks_unchecked(ground, bases))
    }

    pub fn contract(&self, e: usize) -> Result<Matroid, MatroidError> {
        self.check_elem(e)?;
        let ground = self.ground & !bit(e);
        let bases: Vec<ElemSet> = if self.loops() & bit(e) != 0 {
            self.bases.clone()
        } else {
            self.bases
                .iter()
                .filter(|&&b| b & bit(e) != 0)
                .map(|b| b & !bit(e))
                .collect()
        };
        Ok(Self::from_masks_unchecked(ground, bases))
    }

    /// `M / contract \ delete`; the two sets must be disjoint.
    pub fn minor(&self, contract: ElemSet, delete: ElemSet) -> Matroid {
        debug_assert_eq!(contract & delete, 0);
        let rest = self.ground & !contract & !delete;
        // rank function of the minor: r(A + C) - r(C); its bases are the
        // maximal-size sets B with B + (basis of C) a basis of M.
        let rc = self.rank_of(contract);
        let mut bases: Vec<ElemSet> = self
            .bases
            .iter()
            .filter(|&&b| (b & contract).count_ones() as usize == rc)
            .map(|&b| b & rest)
            .collect();
        let r = bases.iter().map(|b| b.count_ones()).max().unwrap_or(0);
        bases.retain(|b| b.count_ones() == r);
        Self::from_masks_unchecked(rest, bases)
    }

    /// Restriction to `s` (deletes the complement).
    pub fn restrict(&self, s: ElemSet) -> Matroid {
        self.minor(0, self.ground & !s)
    }

    pub fn direct_sum(&self, other: &Matroid) -> Result<Matroid, MatroidError> {
        if self.ground & other.ground != 0 {
            return Err(MatroidError::Overlap);
        }
        let bases = self
            .bases
            .iter()
            .flat_map(|&a| other.bases.iter().map(move |&b| a | b))
            .collect();
        Ok(Self::from_masks_unchecked(self.ground | other.ground, bases))
    }

    /// Relabels elements through `map` (must be injective on the ground set).
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Matroid {
        let apply = |m: ElemSet| elements(m).fold(0, |acc, e| acc | bit(map(e)));
        Self::from_masks_unchecked(apply(self.ground), self.bases.iter().map(|&b| apply(b)).collect())
    }

    /// Deletes loops and every parallel element except the smallest of its
    /// class. Returns the simple matroid and the parallel classes.
    pub fn simplify(&self) -> (Matroid, Vec<ElemSet>) {
        let classes = self.parallel_classes();
        let keep = classes.iter().fold(0, |m, c| m | (c & c.wrapping_neg()));
        (self.restrict(keep), classes)
    }

    /// Adds `new` parallel to `at`.
    pub fn parallel_extension(&self, at: usize, new: usize) -> Result<Matroid, MatroidError> {
        self.check_elem(at)?;
        if new == 0 || new > 32 || self.ground & bit(new) != 0 {
            return Err(MatroidError::InvalidSite(format!("{new} is not a fresh element")));
        }
        if self.loops() & bit(at) != 0 {
            return Err(MatroidError::InvalidSite(format!("{at} is a loop")));
        }
        let mut bases = self.bases.clone();
        bases.extend(
            self.bases
                .iter()
                .filter(|&&b| b & bit(at) != 0)
                .map(|&b| (b & !bit(at)) | bit(new)),
        );
        Ok(Self::from_masks_unchecked(self.ground | bit(new), bases))
    }

    /// Adds `new` in series with `at`.
    pub fn series_extension(&self, at: usize, new: usize) -> Result<Matroid, MatroidError> {
        self.check_elem(at)?;
        if self.coloops() & bit(at) != 0 {
            return Err(MatroidError::InvalidSite(format!("{at} is a coloop")));
        }
        Ok(self.dual().parallel_extension(at, new)?.dual())
    }

    fn check_elem(&self, e: usize) -> Result<(), MatroidError> {
        if e == 0 || e > 32 || self.ground & bit(e) == 0 {
            Err(MatroidError::BadElement(e))
        } else {
            Ok(())
        }
    }

    /// Brute-force isomorphism test by permutation search.
    pub fn is_isomorphic(&self, other: &Matroid) -> bool {
        if self.size() != other.size()
            || self.rank != other.rank
            || self.bases.len() != other.bases.len()
        {
            return false;
        }
        let a: Vec<usize> = elements(self.ground).collect();
        let b: Vec<usize> = elements(other.ground).collect();
        permutations(a.len()).into_iter().any(|perm| {
            let mut map = [0usize; 33];
            for (i, &e) in a.iter().enumerate() {
                map[e] = b[perm[i]];
            }
            self.relabel(|e| map[e]).bases == other.bases
        })
    }

    /// True iff some minor is isomorphic to `U_{2,4}` or to `M(K_4)`.
    pub fn has_excluded_minor(&self) -> bool {
        let u24 = Matroid::uniform(2, 4);
        let k4 = k4_cycle_matroid();
        let n = self.size();
        if self.rank < 2 || n < 4 || self.size() - self.rank < 2 {
            return false;
        }
        for x in submasks(self.ground) {
            let k = x.count_ones() as usize;
            let target = match k {
                4 => &u24,
                6 => &k4,
                _ => continue,
            };
            let rest = self.ground & !x;
            for c in submasks(rest) {
                // contracting a dependent set only adds loops; skip it
                if !self.is_independent(c) {
                    continue;
                }
                let m = self.minor(c, rest & !c);
                if m.rank == target.rank && m.bases.len() == target.bases.len() && m.is_isomorphic(target) {
                    return true;
                }
            }
        }
        false
    }

    pub fn to_json(&self) -> MatroidJson {
        let n = self.size();
        let contiguous = self.ground == full(n);
        let mut bases: Vec<Vec<usize>> = self.bases.iter().map(|&b| elements(b).collect()).collect();
        bases.sort();
        MatroidJson {
            n,
            ground: (!contiguous).then(|| elements(self.ground).collect()),
            bases,
        }
    }

    pub fn from_json(j: &MatroidJson) -> Result<Matroid, MatroidError> {
        match &j.ground {
            None => Matroid::from_bases(j.n, &j.bases),
            Some(g) => {
                let masks = j.bases.iter().map(|b| mask_of(b)).collect();
                Matroid::from_masks(mask_of(g), masks)
            }
        }
    }
}

/// Canonical JSON form: each basis ascending, basis list sorted
/// lexicographically. `ground` appears only when the ground set is not `{1..n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidJson {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ground: Option<Vec<usize>>,
    pub bases: Vec<Vec<usize>>,
}

/// All submasks of `mask`, including zero and `mask` itself.
pub fn submasks(mask: ElemSet) -> impl Iterator<Item = ElemSet> {
    let mut s = Some(mask);
    std::iter::from_fn(move || {
        let cur = s?;
        s = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

/// Cycle matroid of `K_4`.
pub fn k4_cycle_matroid() -> Matroid {
    Matroid::graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
}

/// Every matroid on `{1..n}`, `n <= 5`, by filtering candidate basis
/// families through the exchange axiom. Sorted.
pub fn all_matroids(n: usize) -> Vec<Matroid> {
    assert!(n <= 5, "all_matroids is only available for n <= 5");
    let mut out = Vec::new();
    for r in 0..=n {
        let rsets: Vec<ElemSet> = (0..=full(n)).filter(|m| m.count_ones() as usize == r).collect();
        for family in 1u64..(1u64 << rsets.len()) {
            let bases: Vec<ElemSet> = (0..rsets.len())
                .filter(|i| family >> i & 1 == 1)
                .map(|i| rsets[i])
                .collect();
            if let Ok(m) = Matroid::from_masks(full(n), bases) {
                out.push(m);
            }
        }
    }
    out.sort();
    out
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn universe() -> &'static Vec<Matroid> {
        static U: OnceLock<Vec<Matroid>> = OnceLock::new();
        U.get_or_init(|| {
            let mut v = all_matroids(4);
            v.extend(all_matroids(5));
            v
        })
    }

    fn any_matroid() -> impl Strategy<Value = Matroid> {
        (0..universe().len()).prop_map(|i| universe()[i].clone())
    }

    proptest! {
        #[test]
        fn basic_invariants(m in any_matroid()) {
            prop_assert_eq!(m.rank_of(m.ground()), m.rank());
            let circuits = m.circuits();
            for &a in &circuits {
                for &b in &circuits {
                    prop_assert!(a == b || a & b != a);
                }
            }
            // every parallel class lies inside one component
            let comps = m.components();
            for class in m.parallel_classes() {
                prop_assert!(comps.iter().any(|c| c & class == class));
            }
        }

        #[test]
        fn duality_invariants(m in any_matroid()) {
            let d = m.dual();
            prop_assert_eq!(d.dual(), m.clone());
            prop_assert_eq!(d.loops(), m.coloops());
            prop_assert_eq!(d.components(), m.components());
        }

        #[test]
        fn extension_inverses(m in any_matroid(), at in 1usize..=4) {
            if m.loops() & bit(at) == 0 {
                let p = m.parallel_extension(at, 7).unwrap();
                prop_assert_eq!(p.delete(7).unwrap(), m.clone());
                prop_assert_eq!(p.rank_of(bit(at) | bit(7)), 1);
            }
            if m.coloops() & bit(at) == 0 {
                let s = m.series_extension(at, 7).unwrap();
                prop_assert_eq!(s.contract(7).unwrap(), m.clone());
                let d = s.dual();
                prop_assert_eq!(d.rank_of(bit(at) | bit(7)), 1);
            }
        }
    }
}
