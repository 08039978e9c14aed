//! Finite groups given by their multiplication tables.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Index of a group element; `0..order`.
pub type Elem = u8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("table is not a valid group table: {0}")]
    NotAGroup(String),
    #[error("group too large: {0}")]
    TooLarge(String),
    #[error("cannot parse group spec {0:?} (expected cyclic:m or sym:k)")]
    BadSpec(String),
}

/// Parsed form of the `cyclic:m` / `sym:k` command-line strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic(usize),
    Symmetric(usize),
}

impl GroupSpec {
    pub fn build(self) -> Result<FiniteGroup, GroupError> {
        match self {
            GroupSpec::Cyclic(m) => FiniteGroup::cyclic(m),
            GroupSpec::Symmetric(k) => FiniteGroup::symmetric(k),
        }
    }

    pub fn order(self) -> usize {
        match self {
            GroupSpec::Cyclic(m) => m,
            GroupSpec::Symmetric(k) => (1..=k).product(),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupError::BadSpec(s.to_string());
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        let arg: usize = arg.trim().parse().map_err(|_| bad())?;
        if arg == 0 {
            return Err(bad());
        }
        match kind.trim() {
            "cyclic" => Ok(GroupSpec::Cyclic(arg)),
            "sym" => Ok(GroupSpec::Symmetric(arg)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(m) => write!(f, "cyclic:{m}"),
            GroupSpec::Symmetric(k) => write!(f, "sym:{k}"),
        }
    }
}

/// A finite group of order at most 255, by multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<Elem>,
    identity: Elem,
    inverses: Vec<Elem>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order)
    }
}

impl FiniteGroup {
    /// Validates a row-major table: `table[a * order + b] = a * b`.
    ///
    /// Associativity is checked exhaustively for orders up to 24.
    pub fn from_table(order: usize, table: Vec<Elem>) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::NotAGroup("empty group".into()));
        }
        if order > Elem::MAX as usize {
            return Err(GroupError::TooLarge(format!("order {order}")));
        }
        if table.len() != order * order {
            return Err(GroupError::NotAGroup("table has wrong size".into()));
        }
        if table.iter().any(|&x| x as usize >= order) {
            return Err(GroupError::NotAGroup("entry out of range".into()));
        }
        let at = |a: usize, b: usize| table[a * order + b] as usize;
        for a in 0..order {
            let mut row = vec![false; order];
            let mut col = vec![false; order];
            for b in 0..order {
                row[at(a, b)] = true;
                col[at(b, a)] = true;
            }
            if row.contains(&false) || col.contains(&false) {
                return Err(GroupError::NotAGroup("not a Latin square".into()));
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| at(e, a) == a && at(a, e) == a))
            .ok_or_else(|| GroupError::NotAGroup("no identity".into()))?;
        let inverses = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| at(a, b) == identity && at(b, a) == identity)
                    .map(|b| b as Elem)
                    .ok_or_else(|| GroupError::NotAGroup(format!("no inverse for {a}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if order <= 24 {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        if at(at(a, b), c) != at(a, at(b, c)) {
                            return Err(GroupError::NotAGroup(format!(
                                "not associative at ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(FiniteGroup {
            order,
            table,
            identity: identity as Elem,
            inverses,
        })
    }

    /// `Z/mZ` with element `i` standing for `i mod m`.
    pub fn cyclic(m: usize) -> Result<Self, GroupError> {
        if m == 0 {
            return Err(GroupError::NotAGroup("cyclic group of order 0".into()));
        }
        let table = (0..m * m).map(|x| ((x / m + x % m) % m) as Elem).collect();
        Self::from_table(m, table)
    }

    /// The symmetric group on `k <= 5` letters; elements are permutations in
    /// lexicographic order, composed as functions (`(a * b)(i) = a(b(i))`).
    pub fn symmetric(k: usize) -> Result<Self, GroupError> {
        if k > 5 {
            return Err(GroupError::TooLarge(format!("sym:{k}")));
        }
        let perms = permutations(k);
        let index = |p: &[usize]| perms.iter().position(|x| x == p).expect("closed") as Elem;
        let n = perms.len();
        let mut table = Vec::with_capacity(n * n);
        for a in &perms {
            for b in &perms {
                let c: Vec<usize> = (0..k).map(|i| a[b[i]]).collect();
                table.push(index(&c));
            }
        }
        Self::from_table(n, table)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order).map(|x| x as Elem)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverses[a as usize]
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// All automorphisms, each as the image list `phi[a]`. Brute force over
    /// permutations fixing the identity; intended for small groups.
    pub fn automorphisms(&self) -> Vec<Vec<Elem>> {
        let others: Vec<Elem> = self.elements().filter(|&a| a != self.identity).collect();
        let mut out = Vec::new();
        for perm in permutations(others.len()) {
            let mut phi = vec![self.identity; self.order];
            for (i, &src) in others.iter().enumerate() {
                phi[src as usize] = others[perm[i]];
            }
            if self.is_homomorphism(&phi) {
                out.push(phi);
            }
        }
        out
    }

    pub fn is_homomorphism(&self, phi: &[Elem]) -> bool {
        phi.len() == self.order
            && self.elements().all(|a| {
                self.elements().all(|b| {
                    phi[self.mul(a, b) as usize] == self.mul(phi[a as usize], phi[b as usize])
                })
            })
    }

    /// `inn_g(h) = g h g^{-1}`.
    pub fn inner_automorphism(&self, g: Elem) -> Vec<Elem> {
        self.elements()
            .map(|h| self.mul(self.mul(g, h), self.inv(g)))
            .collect()
    }

    pub fn identity_automorphism(&self) -> Vec<Elem> {
        self.elements().collect()
    }
}

/// All permutations of `0..k` in lexicographic order.
pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..k).rev().find(|&j| cur[j] > cur[i]).expect("exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}
