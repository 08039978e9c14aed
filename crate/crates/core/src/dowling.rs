//! Partial `G`-partitions, flat types, and explicit Dowling lattices.
//!
//! A flat of `Q_n(G)` is an equivalence class of partial `G`-partitions:
//! a support `S`, a partition of `S` into blocks and labels `S -> G`, up to
//! left translation on each block. The canonical representative numbers
//! blocks by their minimum element and puts the identity on that minimum.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::QPoly;
use crate::group::{Elem, FiniteGroup};
use crate::lattice::GradedLattice;
use crate::matroid::{bit, elements, ElemSet};
use crate::par::Exec;
use crate::qsp::GLabeling;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DowlingError {
    #[error("lattice too large: {0}")]
    CapExceeded(String),
    #[error("invalid partial G-partition: {0}")]
    Invalid(String),
    #[error("invalid group action element: {0}")]
    BadGamma(String),
    #[error("orbit computation left the item set")]
    OrbitEscapes,
}

/// Canonical partial `G`-partition of `{1..n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialGPartition {
    /// `block[e - 1]` is 0 when `e` is outside the support, otherwise the
    /// 1-based index of its block (blocks ordered by minimum element).
    block: Vec<u8>,
    /// Labels; the identity outside the support.
    labels: Vec<Elem>,
}

impl PartialGPartition {
    /// Canonicalizes arbitrary input. `blocks` must be disjoint nonempty
    /// subsets of `{1..n}`; `labels[e - 1]` is read for every `e` in the
    /// support.
    pub fn new(n: usize, blocks: &[Vec<usize>], labels: &[Elem], group: &FiniteGroup) -> Result<Self, DowlingError> {
        if labels.len() != n {
            return Err(DowlingError::Invalid("label vector length".into()));
        }
        let mut block = vec![0u8; n];
        for (i, b) in blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(DowlingError::Invalid("empty block".into()));
            }
            for &e in b {
                if e == 0 || e > n || block[e - 1] != 0 {
                    return Err(DowlingError::Invalid(format!("element {e}")));
                }
                block[e - 1] = (i + 1) as u8;
            }
        }
        if labels.iter().any(|&g| g as usize >= group.order()) {
            return Err(DowlingError::Invalid("label out of range".into()));
        }
        Ok(Self::canonicalize(block, labels.to_vec(), group))
    }

    /// Block ids may be arbitrary nonzero tags.
    fn canonicalize(mut block: Vec<u8>, mut labels: Vec<Elem>, group: &FiniteGroup) -> Self {
        let n = block.len();
        let mut renum: HashMap<u8, (u8, Elem)> = HashMap::new();
        let mut next = 1u8;
        for i in 0..n {
            let b = block[i];
            if b == 0 {
                labels[i] = group.identity();
                continue;
            }
            let (nb, shift) = *renum.entry(b).or_insert_with(|| {
                let v = (next, group.inv(labels[i]));
                next += 1;
                v
            });
            block[i] = nb;
            labels[i] = group.mul(shift, labels[i]);
        }
        PartialGPartition { block, labels }
    }

    pub fn n(&self) -> usize {
        self.block.len()
    }

    pub fn support(&self) -> ElemSet {
        (1..=self.n())
            .filter(|&e| self.block[e - 1] != 0)
            .fold(0, |m, e| m | bit(e))
    }

    pub fn num_blocks(&self) -> usize {
        self.block.iter().copied().max().unwrap_or(0) as usize
    }

    /// Blocks ordered by minimum element.
    pub fn blocks(&self) -> Vec<ElemSet> {
        let mut out = vec![0; self.num_blocks()];
        for (i, &b) in self.block.iter().enumerate() {
            if b != 0 {
                out[b as usize - 1] |= bit(i + 1);
            }
        }
        out
    }

    pub fn label(&self, e: usize) -> Elem {
        self.labels[e - 1]
    }

    pub fn rank(&self) -> usize {
        self.n() - self.num_blocks()
    }

    pub fn flat_type(&self) -> FlatType {
        let blocks = self.blocks();
        let used: u32 = blocks.iter().map(|b| b.count_ones()).sum();
        FlatType::new(
            self.n() - used as usize,
            blocks.iter().map(|b| b.count_ones() as usize).collect(),
        )
    }

    /// Bottom flat: every element a singleton block.
    pub fn bottom(n: usize, group: &FiniteGroup) -> Self {
        PartialGPartition {
            block: (1..=n as u8).collect(),
            labels: vec![group.identity(); n],
        }
    }

    /// Top flat: empty support.
    pub fn top(n: usize, group: &FiniteGroup) -> Self {
        PartialGPartition {
            block: vec![0; n],
            labels: vec![group.identity(); n],
        }
    }

    /// `self <= other` in the refinement order: `other` arises from `self`
    /// by merging and deleting blocks.
    pub fn leq(&self, other: &Self, group: &FiniteGroup) -> bool {
        if self.support() & other.support() != other.support() {
            return false;
        }
        for a in self.blocks() {
            let mut ids = elements(a).map(|e| other.block[e - 1]);
            let first = ids.next().expect("nonempty");
            if ids.any(|x| x != first) {
                return false;
            }
            if first == 0 {
                continue;
            }
            let mut es = elements(a);
            let x0 = es.next().expect("nonempty");
            let g = group.mul(other.label(x0), group.inv(self.label(x0)));
            if es.any(|x| other.label(x) != group.mul(g, self.label(x))) {
                return false;
            }
        }
        true
    }

    /// All flats covering `self`: delete one block, or merge two blocks
    /// after translating the second by some `g`.
    pub fn up_covers(&self, group: &FiniteGroup) -> Vec<PartialGPartition> {
        let k = self.num_blocks() as u8;
        let mut out = Vec::new();
        for d in 1..=k {
            let block: Vec<u8> = self.block.iter().map(|&b| if b == d { 0 } else { b }).collect();
            out.push(Self::canonicalize(block, self.labels.clone(), group));
        }
        for i in 1..=k {
            for j in i + 1..=k {
                for g in group.elements() {
                    let mut block = self.block.clone();
                    let mut labels = self.labels.clone();
                    for x in 0..block.len() {
                        if block[x] == j {
                            block[x] = i;
                            labels[x] = group.mul(g, labels[x]);
                        }
                    }
                    out.push(Self::canonicalize(block, labels, group));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> FlatJson {
        let blocks = self.blocks();
        FlatJson {
            s: elements(self.support()).collect(),
            blocks: blocks.iter().map(|&b| elements(b).collect()).collect(),
            labels: elements(self.support())
                .map(|e| (e.to_string(), self.label(e)))
                .collect(),
        }
    }

    pub fn from_json(n: usize, j: &FlatJson, group: &FiniteGroup) -> Result<Self, DowlingError> {
        let mut labels = vec![group.identity(); n];
        for (k, &g) in &j.labels {
            let e: usize = k
                .parse()
                .map_err(|_| DowlingError::Invalid(format!("label key {k}")))?;
            if e == 0 || e > n {
                return Err(DowlingError::Invalid(format!("label key {k}")));
            }
            labels[e - 1] = g;
        }
        let flat = Self::new(n, &j.blocks, &labels, group)?;
        let mut s = j.s.clone();
        s.sort_unstable();
        if elements(flat.support()).collect::<Vec<_>>() != s {
            return Err(DowlingError::Invalid("S does not match blocks".into()));
        }
        Ok(flat)
    }
}

/// `{"S": [...], "blocks": [[...]...], "labels": {elem: group_index}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatJson {
    #[serde(rename = "S")]
    pub s: Vec<usize>,
    pub blocks: Vec<Vec<usize>>,
    pub labels: BTreeMap<String, Elem>,
}

/// Orbit class of flats: number of unused elements and block sizes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlatType {
    pub n0: usize,
    /// Block sizes, sorted descending.
    pub sizes: Vec<usize>,
}

impl FlatType {
    pub fn new(n0: usize, mut sizes: Vec<usize>) -> Self {
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        FlatType { n0, sizes }
    }

    pub fn n(&self) -> usize {
        self.n0 + self.sizes.iter().sum::<usize>()
    }

    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }
}

/// Integer partitions of `m` into parts `<= max_part`, descending.
fn partitions(m: usize, max_part: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=m.min(max_part)).rev() {
        for mut rest in partitions(m - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All flat types for `n`, ordered by number of blocks, then `n0`, then sizes.
pub fn flat_types(n: usize) -> Vec<FlatType> {
    let mut out: Vec<FlatType> = (0..=n)
        .flat_map(|n0| {
            partitions(n - n0, n - n0)
                .into_iter()
                .map(move |sizes| FlatType { n0, sizes })
        })
        .collect();
    out.sort_by(|a, b| {
        (a.num_blocks(), a.n0, &a.sizes).cmp(&(b.num_blocks(), b.n0, &b.sizes))
    });
    out
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::from(1), |acc, i| acc * i)
}

/// Number of flats of the given type, as a polynomial in `q`:
/// `n! / (n0! prod n_i! prod mult_s!) * q^{sum (n_i - 1)}`.
pub fn flat_count(ty: &FlatType) -> QPoly {
    let mut denom = factorial(ty.n0);
    let mut mult: BTreeMap<usize, usize> = BTreeMap::new();
    for &s in &ty.sizes {
        denom *= factorial(s);
        *mult.entry(s).or_insert(0) += 1;
    }
    for &m in mult.values() {
        denom *= factorial(m);
    }
    let coeff = factorial(ty.n()) / denom;
    let exp: usize = ty.sizes.iter().map(|s| s - 1).sum();
    QPoly::monomial(coeff, exp)
}

/// Number of flats with `k` blocks (rank `n - k`).
pub fn whitney(n: usize, k: usize) -> QPoly {
    whitney_row(n).get(k).cloned().unwrap_or_default()
}

/// `whitney(n, k)` for `k = 0..=n`.
pub fn whitney_row(n: usize) -> Vec<QPoly> {
    let mut row = vec![QPoly::zero(); n + 1];
    for ty in flat_types(n) {
        row[ty.num_blocks()] += &flat_count(&ty);
    }
    row
}

/// Caps for explicit lattice construction.
#[derive(Debug, Clone, Copy)]
pub struct LatticeCaps {
    pub max_n: usize,
    pub max_order: usize,
    pub max_flats: usize,
}

impl Default for LatticeCaps {
    fn default() -> Self {
        LatticeCaps {
            max_n: 6,
            max_order: 6,
            max_flats: 150_000,
        }
    }
}

/// Explicit lattice of flats of `Q_n(G)` for a concrete group.
#[derive(Debug, Clone)]
pub struct DowlingLattice {
    n: usize,
    group: FiniteGroup,
    /// Sorted by rank, then canonical order.
    flats: Vec<PartialGPartition>,
    index: HashMap<PartialGPartition, usize>,
    up: Vec<Vec<usize>>,
}

impl DowlingLattice {
    pub fn build(n: usize, group: &FiniteGroup) -> Result<Self, DowlingError> {
        Self::build_with(n, group, LatticeCaps::default(), Exec::default())
    }

    pub fn build_with(n: usize, group: &FiniteGroup, caps: LatticeCaps, exec: Exec) -> Result<Self, DowlingError> {
        if n > caps.max_n || group.order() > caps.max_order {
            return Err(DowlingError::CapExceeded(format!(
                "n = {n}, |G| = {} (caps n <= {}, |G| <= {})",
                group.order(),
                caps.max_n,
                caps.max_order
            )));
        }
        let expected: BigInt = whitney_row(n)
            .iter()
            .map(|w| w.eval_i64(group.order() as i64))
            .sum();
        if expected > BigInt::from(caps.max_flats) {
            return Err(DowlingError::CapExceeded(format!(
                "{expected} flats > {}",
                caps.max_flats
            )));
        }
        let mut flats = enumerate_flats(n, group);
        flats.sort_by(|a, b| (a.rank(), a).cmp(&(b.rank(), b)));
        let index: HashMap<PartialGPartition, usize> =
            flats.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        let up = exec.map(&flats, |f| {
            let mut v: Vec<usize> = f.up_covers(group).iter().map(|c| index[c]).collect();
            v.sort_unstable();
            v.dedup();
            v
        });
        Ok(DowlingLattice {
            n,
            group: group.clone(),
            flats,
            index,
            up,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn flats(&self) -> &[PartialGPartition] {
        &self.flats
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn index_of(&self, f: &PartialGPartition) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn up_covers(&self, i: usize) -> &[usize] {
        &self.up[i]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.flats[a].leq(&self.flats[b], &self.group)
    }

    /// Flat counts per rank.
    pub fn rank_census(&self) -> Vec<usize> {
        let mut out = vec![0; self.n + 1];
        for f in &self.flats {
            out[f.rank()] += 1;
        }
        out
    }

    /// Flat counts per type.
    pub fn type_census(&self) -> BTreeMap<FlatType, usize> {
        let mut out = BTreeMap::new();
        for f in &self.flats {
            *out.entry(f.flat_type()).or_insert(0) += 1;
        }
        out
    }

    pub fn to_graded(&self) -> GradedLattice {
        GradedLattice::new(
            self.flats.iter().map(PartialGPartition::rank).collect(),
            self.up.clone(),
        )
        .expect("Dowling lattices are graded")
    }

    /// Reachability through cover steps (the generative order).
    pub fn reachable_from(&self, a: usize) -> HashSet<usize> {
        let mut seen = HashSet::from([a]);
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.up[x] {
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }
}

/// Every canonical partial `G`-partition of `{1..n}`.
pub fn enumerate_flats(n: usize, group: &FiniteGroup) -> Vec<PartialGPartition> {
    fn rec(i: usize, n: usize, k: u8, block: &mut Vec<u8>, labels: &mut Vec<Elem>, group: &FiniteGroup, out: &mut Vec<PartialGPartition>) {
        if i == n {
            out.push(PartialGPartition {
                block: block.clone(),
                labels: labels.clone(),
            });
            return;
        }
        // outside the support
        block[i] = 0;
        labels[i] = group.identity();
        rec(i + 1, n, k, block, labels, group, out);
        // new block; i is its minimum, so it carries the identity
        block[i] = k + 1;
        rec(i + 1, n, k + 1, block, labels, group, out);
        for b in 1..=k {
            for g in group.elements() {
                block[i] = b;
                labels[i] = g;
                rec(i + 1, n, k, block, labels, group, out);
            }
        }
        block[i] = 0;
        labels[i] = group.identity();
    }
    let mut out = Vec::new();
    rec(0, n, 0, &mut vec![0; n], &mut vec![group.identity(); n], group, &mut out);
    out
}

/// Element `((g_1..g_n), sigma, phi)` of `(G wr S_n) x| Aut(G)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GammaElement {
    pub translations: Vec<Elem>,
    /// `perm[i - 1] = sigma(i)`, 1-based values.
    pub perm: Vec<usize>,
    /// `automorphism[a] = phi(a)`.
    pub automorphism: Vec<Elem>,
}

impl GammaElement {
    pub fn new(translations: Vec<Elem>, perm: Vec<usize>, automorphism: Vec<Elem>, group: &FiniteGroup) -> Result<Self, DowlingError> {
        let n = perm.len();
        if translations.len() != n {
            return Err(DowlingError::BadGamma("translation length".into()));
        }
        let mut seen = vec![false; n + 1];
        for &p in &perm {
            if p == 0 || p > n || seen[p] {
                return Err(DowlingError::BadGamma("not a permutation".into()));
            }
            seen[p] = true;
        }
        let mut img = automorphism.clone();
        img.sort_unstable();
        img.dedup();
        if img.len() != group.order() || !group.is_homomorphism(&automorphism) {
            return Err(DowlingError::BadGamma("not an automorphism".into()));
        }
        if translations.iter().any(|&g| g as usize >= group.order()) {
            return Err(DowlingError::BadGamma("translation out of range".into()));
        }
        Ok(GammaElement {
            translations,
            perm,
            automorphism,
        })
    }

    pub fn identity(n: usize, group: &FiniteGroup) -> Self {
        GammaElement {
            translations: vec![group.identity(); n],
            perm: (1..=n).collect(),
            automorphism: group.identity_automorphism(),
        }
    }

    /// `((g, ..., g), id, inn_g)`, which acts trivially on flats.
    pub fn central(n: usize, g: Elem, group: &FiniteGroup) -> Self {
        GammaElement {
            translations: vec![g; n],
            perm: (1..=n).collect(),
            automorphism: group.inner_automorphism(g),
        }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    /// `(g, sigma, phi) * (h, tau, psi) = ((phi(h_i) g_{tau(i)})_i, sigma tau, phi psi)`.
    pub fn compose(&self, other: &GammaElement, group: &FiniteGroup) -> GammaElement {
        let n = self.n();
        let translations = (0..n)
            .map(|i| {
                let tau_i = other.perm[i] - 1;
                group.mul(
                    self.automorphism[other.translations[i] as usize],
                    self.translations[tau_i],
                )
            })
            .collect();
        let perm = (0..n).map(|i| self.perm[other.perm[i] - 1]).collect();
        let automorphism = other
            .automorphism
            .iter()
            .map(|&a| self.automorphism[a as usize])
            .collect();
        GammaElement {
            translations,
            perm,
            automorphism,
        }
    }

    /// `(gamma f)(sigma(i)) = phi(f(i)) g_i`, blocks moved by `sigma`.
    pub fn apply_flat(&self, flat: &PartialGPartition, group: &FiniteGroup) -> PartialGPartition {
        let n = self.n();
        let mut block = vec![0u8; n];
        let mut labels = vec![group.identity(); n];
        for i in 0..n {
            let j = self.perm[i] - 1;
            block[j] = flat.block[i];
            if flat.block[i] != 0 {
                labels[j] = group.mul(self.automorphism[flat.labels[i] as usize], self.translations[i]);
            }
        }
        PartialGPartition::canonicalize(block, labels, group)
    }

    /// Same action on labelings; the matroid's ground set is permuted by
    /// `sigma`. The labeling's ground set must be `{1..n}`.
    pub fn apply_labeling(&self, x: &GLabeling, group: &FiniteGroup) -> GLabeling {
        let n = self.n();
        let matroid = x.matroid.relabel(|e| self.perm[e - 1]);
        let mut labels = vec![group.identity(); n];
        for i in 0..n {
            labels[self.perm[i] - 1] =
                group.mul(self.automorphism[x.labels[i] as usize], self.translations[i]);
        }
        GLabeling::canonical(matroid, labels, group)
    }
}

/// Generators of `(G wr S_n) x| Aut(G)`: adjacent transpositions, a
/// translation of the first coordinate by each group element, and every
/// automorphism.
pub fn standard_generators(n: usize, group: &FiniteGroup) -> Vec<GammaElement> {
    let mut out = Vec::new();
    let id = GammaElement::identity(n, group);
    for i in 0..n.saturating_sub(1) {
        let mut g = id.clone();
        g.perm.swap(i, i + 1);
        out.push(g);
    }
    if n > 0 {
        for h in group.elements() {
            let mut g = id.clone();
            g.translations[0] = h;
            out.push(g);
        }
    }
    for phi in group.automorphisms() {
        let mut g = id.clone();
        g.automorphism = phi;
        out.push(g);
    }
    out
}

/// Orbit partition of `items` under the group generated by `gens`, as
/// sorted index lists ordered by their first member.
pub fn orbits<T, G>(items: &[T], gens: &[G], apply: impl Fn(&G, &T) -> T) -> Result<Vec<Vec<usize>>, DowlingError>
where
    T: Eq + Hash,
{
    let index: HashMap<&T, usize> = items.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut orbit_of = vec![usize::MAX; items.len()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for start in 0..items.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        orbit_of[start] = id;
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = apply(g, &items[x]);
                let &j = index.get(&y).ok_or(DowlingError::OrbitEscapes)?;
                if orbit_of[j] == usize::MAX {
                    orbit_of[j] = id;
                    members.push(j);
                    queue.push_back(j);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::Matroid;
    use crate::qsp::g_labelings;

    fn z(m: usize) -> FiniteGroup {
        FiniteGroup::cyclic(m).unwrap()
    }

    #[test]
    fn types_small() {
        let hyper: Vec<FlatType> = flat_types(3).into_iter().filter(|t| t.num_blocks() == 1).collect();
        assert_eq!(
            hyper,
            vec![
                FlatType::new(0, vec![3]),
                FlatType::new(1, vec![2]),
                FlatType::new(2, vec![1])
            ]
        );
        assert_eq!(flat_types(0), vec![FlatType::new(0, vec![])]);
        let bottom: Vec<FlatType> = flat_types(3).into_iter().filter(|t| t.num_blocks() == 3).collect();
        assert_eq!(bottom, vec![FlatType::new(0, vec![1, 1, 1])]);
    }

    #[test]
    fn counts_small() {
        assert_eq!(flat_count(&FlatType::new(1, vec![2])), QPoly::from_i64s(&[0, 3]));
        assert_eq!(flat_count(&FlatType::new(0, vec![3])), QPoly::monomial(1, 2));
        assert_eq!(flat_count(&FlatType::new(2, vec![1])), QPoly::constant(3));
        assert_eq!(whitney(3, 2), QPoly::from_i64s(&[3, 3]));
        assert_eq!(whitney(3, 1), QPoly::from_i64s(&[3, 3, 1]));
        for n in 0..6 {
            assert_eq!(whitney(n, n), QPoly::constant(1));
            assert_eq!(whitney(n, 0), QPoly::constant(1));
        }
    }

    /// Independent route: adding element n+1 either leaves it unused, makes
    /// it a singleton, or joins one of k blocks with one of q relative labels.
    fn whitney_by_recurrence(n: usize) -> Vec<QPoly> {
        let mut row = vec![QPoly::constant(1)];
        for m in 0..n {
            let mut next = vec![QPoly::zero(); m + 2];
            for k in 0..=m {
                let stay = QPoly::from_i64s(&[1, k as i64]);
                next[k] += &(&stay * &row[k]);
                next[k + 1] += &row[k];
            }
            row = next;
        }
        row
    }

    #[test]
    fn whitney_matches_recurrence() {
        for n in 0..=12 {
            assert_eq!(whitney_row(n), whitney_by_recurrence(n), "n = {n}");
        }
    }

    #[test]
    fn atom_formula() {
        for n in 2..=10 {
            let binom = (n * (n - 1) / 2) as i64;
            assert_eq!(whitney(n, n - 1), QPoly::from_i64s(&[n as i64, binom]));
        }
    }

    #[test]
    fn lattice_small() {
        let l = DowlingLattice::build(1, &z(5)).unwrap();
        assert_eq!(l.len(), 2);
        let l = DowlingLattice::build(3, &z(2)).unwrap();
        assert_eq!(l.rank_census(), vec![1, 9, 13, 1]);
        for (ty, count) in l.type_census() {
            assert_eq!(BigInt::from(count), flat_count(&ty).eval_i64(2), "{ty:?}");
        }
    }

    #[test]
    fn census_matches_counts_for_several_groups() {
        let groups = [z(1), z(2), z(3), FiniteGroup::symmetric(3).unwrap()];
        for g in &groups {
            for n in 0..=4 {
                let l = DowlingLattice::build(n, g).unwrap();
                let census = l.type_census();
                assert_eq!(census.len(), flat_types(n).len());
                for ty in flat_types(n) {
                    let got = census.get(&ty).copied().unwrap_or(0);
                    assert_eq!(BigInt::from(got), flat_count(&ty).eval_i64(g.order() as i64));
                }
                let total: BigInt = whitney_row(n).iter().map(|w| w.eval_i64(g.order() as i64)).sum();
                assert_eq!(BigInt::from(l.len()), total);
            }
        }
    }

    #[test]
    fn equal_order_groups_have_equal_census() {
        let a = DowlingLattice::build(3, &FiniteGroup::symmetric(3).unwrap()).unwrap();
        let b = DowlingLattice::build(3, &z(6)).unwrap();
        assert_eq!(a.type_census(), b.type_census());
    }

    #[test]
    fn order_predicate_matches_generative_definition() {
        for g in [z(1), z(2), z(3), FiniteGroup::symmetric(3).unwrap()] {
            for n in 0..=3 {
                let l = DowlingLattice::build(n, &g).unwrap();
                for a in 0..l.len() {
                    let reach = l.reachable_from(a);
                    for b in 0..l.len() {
                        assert_eq!(reach.contains(&b), l.leq(a, b), "n={n} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn lattice_is_graded_with_unique_ends() {
        let g = z(3);
        let l = DowlingLattice::build(4, &g).unwrap();
        let census = l.rank_census();
        assert_eq!((census[0], census[4]), (1, 1));
        assert_eq!(l.flats()[0], PartialGPartition::bottom(4, &g));
        assert_eq!(l.flats()[l.len() - 1], PartialGPartition::top(4, &g));
        for i in 0..l.len() {
            for &j in l.up_covers(i) {
                assert_eq!(l.flats()[j].rank(), l.flats()[i].rank() + 1);
            }
            if i + 1 < l.len() {
                assert!(!l.up_covers(i).is_empty());
            }
        }
        let gl = l.to_graded();
        assert_eq!(gl.longest_chain_len(), 4);
        assert_eq!(gl.shortest_chain_len(), 4);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            DowlingLattice::build(7, &z(2)),
            Err(DowlingError::CapExceeded(_))
        ));
        assert!(matches!(
            DowlingLattice::build(2, &z(7)),
            Err(DowlingError::CapExceeded(_))
        ));
    }

    #[test]
    fn json_roundtrip() {
        let g = z(3);
        let f = PartialGPartition::new(4, &[vec![4, 2], vec![3]], &[0, 2, 1, 1], &g).unwrap();
        let j = f.to_json();
        assert_eq!(j.blocks, vec![vec![2, 4], vec![3]]);
        assert_eq!(j.labels["2"], 0);
        assert_eq!(j.labels["4"], 2); // 2^{-1} * 1 = -2 + 1 = 2 (mod 3)
        assert_eq!(
            serde_json::to_string(&j).unwrap(),
            r#"{"S":[2,3,4],"blocks":[[2,4],[3]],"labels":{"2":0,"3":0,"4":2}}"#
        );
        assert_eq!(PartialGPartition::from_json(4, &j, &g).unwrap(), f);
    }

    #[test]
    fn gamma_identity_and_central_elements() {
        for g in [z(3), FiniteGroup::symmetric(3).unwrap()] {
            let l = DowlingLattice::build(3, &g).unwrap();
            let id = GammaElement::identity(3, &g);
            for f in l.flats() {
                assert_eq!(&id.apply_flat(f, &g), f);
                for h in g.elements() {
                    assert_eq!(&GammaElement::central(3, h, &g).apply_flat(f, &g), f);
                }
            }
        }
    }

    fn sample_gammas(n: usize, g: &FiniteGroup) -> Vec<GammaElement> {
        let auts = g.automorphisms();
        let perms = crate::group::permutations(n);
        let mut out = Vec::new();
        for (i, p) in perms.iter().enumerate() {
            let translations: Vec<Elem> = (0..n).map(|j| ((i + 2 * j) % g.order()) as Elem).collect();
            let perm: Vec<usize> = p.iter().map(|x| x + 1).collect();
            let aut = auts[i % auts.len()].clone();
            out.push(GammaElement::new(translations, perm, aut, g).unwrap());
        }
        out
    }

    #[test]
    fn gamma_composition_rule() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let l = DowlingLattice::build(3, &g).unwrap();
        let gammas = sample_gammas(3, &g);
        for a in &gammas {
            for b in &gammas {
                let ab = a.compose(b, &g);
                for f in l.flats().iter().step_by(7) {
                    assert_eq!(ab.apply_flat(f, &g), a.apply_flat(&b.apply_flat(f, &g), &g));
                }
            }
        }
    }

    #[test]
    fn gamma_preserves_order() {
        let g = z(3);
        let l = DowlingLattice::build(3, &g).unwrap();
        for gamma in sample_gammas(3, &g) {
            let image: Vec<usize> = l
                .flats()
                .iter()
                .map(|f| l.index_of(&gamma.apply_flat(f, &g)).unwrap())
                .collect();
            for a in 0..l.len() {
                for b in 0..l.len() {
                    assert_eq!(l.leq(a, b), l.leq(image[a], image[b]));
                }
            }
        }
    }

    #[test]
    fn orbits_are_flat_types() {
        for g in [z(2), FiniteGroup::symmetric(3).unwrap()] {
            let l = DowlingLattice::build(3, &g).unwrap();
            let gens = standard_generators(3, &g);
            let orbs = orbits(l.flats(), &gens, |gamma, f| gamma.apply_flat(f, &g)).unwrap();
            assert_eq!(orbs.len(), flat_types(3).len());
            for orb in &orbs {
                let ty = l.flats()[orb[0]].flat_type();
                assert!(orb.iter().all(|&i| l.flats()[i].flat_type() == ty));
            }
            assert_eq!(orbs.iter().map(Vec::len).sum::<usize>(), l.len());
        }
    }

    #[test]
    fn labelings_of_all_singleton_matroid_form_one_orbit() {
        let g = z(3);
        let m = Matroid::uniform(3, 3);
        let labs = g_labelings(&m, &g).unwrap();
        assert_eq!(labs.len(), 1);
        let gens = standard_generators(3, &g);
        // the permutation generators move the matroid; restrict to
        // translations and automorphisms, which fix it
        let fixing: Vec<GammaElement> = gens.into_iter().filter(|x| x.perm == vec![1, 2, 3]).collect();
        let orbs = orbits(&labs, &fixing, |gamma, x| gamma.apply_labeling(x, &g)).unwrap();
        assert_eq!(orbs.len(), 1);
    }

    #[test]
    fn labelings_of_connected_matroid_are_transitive() {
        // U_{2,3} has q^2 classes; translations act transitively on them
        let g = z(3);
        let m = Matroid::uniform(2, 3);
        let labs = g_labelings(&m, &g).unwrap();
        assert_eq!(labs.len(), 9);
        let id = GammaElement::identity(3, &g);
        let mut gens = Vec::new();
        for i in 0..3 {
            for h in g.elements() {
                let mut x = id.clone();
                x.translations[i] = h;
                gens.push(x);
            }
        }
        let orbs = orbits(&labs, &gens, |gamma, x| gamma.apply_labeling(x, &g)).unwrap();
        assert_eq!(orbs.len(), 1);
        assert_eq!(orbs[0].len(), 9);
    }

    #[test]
    fn invalid_inputs() {
        let g = z(2);
        assert!(PartialGPartition::new(3, &[vec![1], vec![1]], &[0, 0, 0], &g).is_err());
        assert!(PartialGPartition::new(3, &[vec![]], &[0, 0, 0], &g).is_err());
        assert!(GammaElement::new(vec![0, 0], vec![1, 1], vec![0, 1], &g).is_err());
        assert!(GammaElement::new(vec![0, 0], vec![2, 1], vec![1, 0], &g).is_err());
    }
}
