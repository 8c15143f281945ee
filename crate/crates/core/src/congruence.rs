//! Partitions, congruence generation and congruence lattices.

use std::collections::HashSet;
use std::fmt;

use crate::algebra::{for_each_tuple, FiniteAlgebra};
use crate::error::{Error, Result};

/// Union-find with path halving and union by rank.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect(), rank: vec![0; n] }
    }

    pub fn from_partition(p: &Partition) -> Self {
        let mut uf = UnionFind::new(p.n());
        for x in 0..p.n() {
            uf.parent[x] = p.rep(x) as u32;
        }
        uf
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    /// Merges the classes of `a` and `b`; returns whether they were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb as u32,
            std::cmp::Ordering::Greater => self.parent[rb] = ra as u32,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra as u32;
                self.rank[ra] += 1;
            }
        }
        true
    }

    pub fn to_partition(&mut self) -> Partition {
        let roots: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Partition::from_labels(&roots)
    }
}

/// An equivalence relation in canonical form: blocks are numbered in order
/// of their minimum element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    block: Vec<u32>,
    reps: Vec<u32>,
}

impl Partition {
    /// Kernel of a labelling: `x ~ y` iff `labels[x] == labels[y]`.
    pub fn from_labels<T: Eq + std::hash::Hash + Copy>(labels: &[T]) -> Self {
        let mut seen = std::collections::HashMap::new();
        let mut block = Vec::with_capacity(labels.len());
        let mut reps = Vec::new();
        for (x, l) in labels.iter().enumerate() {
            let b = *seen.entry(*l).or_insert_with(|| {
                reps.push(x as u32);
                reps.len() as u32 - 1
            });
            block.push(b);
        }
        Partition { block, reps }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut label = vec![usize::MAX; n];
        for (i, b) in blocks.iter().enumerate() {
            for &x in b {
                if x >= n || label[x] != usize::MAX {
                    return Err(Error::Format(format!("element {x} misplaced in partition")));
                }
                label[x] = i;
            }
        }
        if let Some(x) = label.iter().position(|&l| l == usize::MAX) {
            return Err(Error::Format(format!("element {x} missing from partition")));
        }
        Ok(Self::from_labels(&label))
    }

    pub fn zero(n: usize) -> Self {
        Partition { block: (0..n as u32).collect(), reps: (0..n as u32).collect() }
    }

    pub fn total(n: usize) -> Self {
        Partition { block: vec![0; n], reps: if n > 0 { vec![0] } else { vec![] } }
    }

    pub fn n(&self) -> usize {
        self.block.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.reps.len()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block[x] as usize
    }

    /// Minimum element of the block of `x`.
    pub fn rep(&self, x: usize) -> usize {
        self.reps[self.block[x] as usize] as usize
    }

    /// Minimum element of each block, increasing.
    pub fn reps(&self) -> Vec<usize> {
        self.reps.iter().map(|&r| r as usize).collect()
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.block[a] == self.block[b]
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.reps.len()];
        for (x, &b) in self.block.iter().enumerate() {
            out[b as usize].push(x);
        }
        out
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.reps.len()];
        self.block.iter().for_each(|&b| out[b as usize] += 1);
        out
    }

    /// All related pairs `(a,b)` in lex order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let blocks = self.blocks();
        let mut out = Vec::new();
        for a in 0..self.n() {
            for &b in &blocks[self.block_of(a)] {
                out.push((a, b));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.reps.len() == self.block.len()
    }

    pub fn is_total(&self) -> bool {
        self.reps.len() <= 1
    }

    pub fn leq(&self, other: &Partition) -> bool {
        self.n() == other.n() && (0..self.n()).all(|x| other.related(x, self.rep(x)))
    }

    pub fn join(&self, other: &Partition) -> Result<Partition> {
        if self.n() != other.n() {
            return Err(Error::CarrierMismatch(self.n(), other.n()));
        }
        let mut uf = UnionFind::from_partition(self);
        for x in 0..other.n() {
            uf.union(x, other.rep(x));
        }
        Ok(uf.to_partition())
    }

    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        if self.n() != other.n() {
            return Err(Error::CarrierMismatch(self.n(), other.n()));
        }
        let labels: Vec<(u32, u32)> = (0..self.n()).map(|x| (self.block[x], other.block[x])).collect();
        Ok(Partition::from_labels(&labels))
    }

    /// Parses `0,2|1,3`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let text = text.trim();
        let mut blocks = Vec::new();
        if !text.is_empty() {
            for b in text.split('|') {
                let block = b
                    .split(',')
                    .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Format(format!("bad element `{t}`"))))
                    .collect::<Result<Vec<_>>>()?;
                blocks.push(block);
            }
        }
        Self::from_blocks(n, &blocks)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", parts.join("|"))
    }
}

/// A partition known to be compatible with the operations of its carrier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence(Partition);

impl Congruence {
    /// Wraps a partition after checking compatibility with `a`.
    pub fn new(a: &FiniteAlgebra, p: Partition) -> Result<Self> {
        if p.n() != a.size() {
            return Err(Error::CarrierMismatch(p.n(), a.size()));
        }
        if !is_compatible(a, &p) {
            return Err(Error::IncompatiblePartition);
        }
        Ok(Congruence(p))
    }

    /// Wraps a partition whose compatibility is guaranteed by construction.
    pub fn from_partition(p: Partition) -> Self {
        Congruence(p)
    }

    pub fn zero(n: usize) -> Self {
        Congruence(Partition::zero(n))
    }

    pub fn total(n: usize) -> Self {
        Congruence(Partition::total(n))
    }

    pub fn partition(&self) -> &Partition {
        &self.0
    }

    pub fn join(&self, other: &Congruence) -> Result<Congruence> {
        Ok(Congruence(self.0.join(&other.0)?))
    }

    pub fn meet(&self, other: &Congruence) -> Result<Congruence> {
        Ok(Congruence(self.0.meet(&other.0)?))
    }
}

impl std::ops::Deref for Congruence {
    type Target = Partition;
    fn deref(&self) -> &Partition {
        &self.0
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Whether `p` is preserved by every operation in each coordinate.
pub fn is_compatible(a: &FiniteAlgebra, p: &Partition) -> bool {
    let sig = a.signature();
    let mut ok = true;
    let mut alt = Vec::new();
    for s in 0..sig.len() {
        let k = sig.arity(s);
        for i in 0..k {
            for_each_tuple(a.size(), k, |args| {
                if !ok || p.rep(args[i]) == args[i] {
                    return;
                }
                alt.clear();
                alt.extend_from_slice(args);
                alt[i] = p.rep(args[i]);
                ok = p.related(a.apply(s, args), a.apply(s, &alt));
            });
        }
    }
    ok
}

/// Least congruence containing `pairs`.
pub fn cg(a: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Congruence {
    cg_from(a, &Partition::zero(a.size()), pairs)
}

/// Least congruence containing `start` and `pairs`.
pub fn cg_from(a: &FiniteAlgebra, start: &Partition, pairs: &[(usize, usize)]) -> Congruence {
    let n = a.size();
    let sig = a.signature();
    let mut uf = UnionFind::from_partition(start);
    let mut work: Vec<(usize, usize)> = (0..n).filter(|&x| start.rep(x) != x).map(|x| (start.rep(x), x)).collect();
    for &(x, y) in pairs {
        if uf.union(x, y) {
            work.push((x, y));
        }
    }
    let mut t1 = Vec::new();
    let mut t2 = Vec::new();
    while let Some((x, y)) = work.pop() {
        for s in 0..sig.len() {
            let k = sig.arity(s);
            for i in 0..k {
                // Every tuple of the other k-1 coordinates.
                for_each_tuple(n, k - 1, |rest| {
                    t1.clear();
                    t1.extend_from_slice(&rest[..i]);
                    t1.push(x);
                    t1.extend_from_slice(&rest[i..]);
                    t2.clear();
                    t2.extend_from_slice(&t1);
                    t2[i] = y;
                    let (u, v) = (a.apply(s, &t1), a.apply(s, &t2));
                    if uf.union(u, v) {
                        work.push((u, v));
                    }
                });
            }
        }
    }
    Congruence(uf.to_partition())
}

/// Every congruence of `a`: the join closure of principal congruences.
/// Sorted by decreasing number of blocks, then canonically.
pub fn all_congruences(a: &FiniteAlgebra, limit: usize) -> Result<Vec<Congruence>> {
    let n = a.size();
    let mut principal: Vec<Congruence> = Vec::new();
    let mut seen: HashSet<Congruence> = HashSet::new();
    let zero = Congruence::zero(n);
    seen.insert(zero.clone());
    for x in 0..n {
        for y in x + 1..n {
            let c = cg(a, &[(x, y)]);
            if seen.insert(c.clone()) {
                principal.push(c);
                if seen.len() > limit {
                    return Err(Error::LimitExceeded(limit));
                }
            }
        }
    }
    let mut all: Vec<Congruence> = std::iter::once(zero).chain(principal.iter().cloned()).collect();
    let mut i = 0;
    while i < all.len() {
        for p in &principal {
            let j = all[i].join(p)?;
            if seen.insert(j.clone()) {
                all.push(j);
                if all.len() > limit {
                    return Err(Error::LimitExceeded(limit));
                }
            }
        }
        i += 1;
    }
    all.sort_by(|a, b| b.num_blocks().cmp(&a.num_blocks()).then_with(|| a.cmp(b)));
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::groups;

    #[test]
    fn cg_examples() {
        let z4 = groups::cyclic(4);
        assert_eq!(cg(&z4, &[(0, 2)]).to_string(), "0,2|1,3");
        assert!(cg(&z4, &[]).is_zero());
        assert!(cg(&z4, &[(3, 3)]).is_zero());
        assert!(cg(&z4, &[(0, 1)]).is_total());
    }

    #[test]
    fn lattice_sizes() {
        assert_eq!(all_congruences(&groups::cyclic(4), 100).unwrap().len(), 3);
        let s3 = all_congruences(&groups::symmetric(3), 100).unwrap();
        assert_eq!(s3.len(), 3);
        assert_eq!(s3[1].to_string(), "0,3,4|1,2,5");
        let a5 = groups::alternating(5);
        let c = cg(&a5, &[(0, 1)]);
        assert!(c.is_total());
        assert_eq!(all_congruences(&groups::cyclic(5), 100).unwrap().len(), 2);
        assert_eq!(all_congruences(&groups::dihedral(4), 2), Err(Error::LimitExceeded(2)));
    }

    #[test]
    fn join_meet_examples() {
        let z12 = groups::cyclic(12);
        let a = cg(&z12, &[(0, 4)]);
        let b = cg(&z12, &[(0, 6)]);
        assert_eq!(a.join(&b).unwrap(), cg(&z12, &[(0, 2)]));
        assert_eq!(a.join(&Congruence::zero(12)).unwrap(), a);
        assert_eq!(a.meet(&Congruence::total(12)).unwrap(), a);
        assert!(a.meet(&b).unwrap().is_zero());
        assert_eq!(a.join(&Congruence::zero(3)), Err(Error::CarrierMismatch(12, 3)));
    }

    #[test]
    fn partition_text() {
        let p = Partition::parse("1,3|0,2", 4).unwrap();
        assert_eq!(p.to_string(), "0,2|1,3");
        assert_eq!(p.reps(), vec![0, 1]);
        assert!(Partition::parse("0,1", 3).is_err());
        assert!(Partition::parse("0,1|1,2", 3).is_err());
        assert!(Congruence::new(&groups::cyclic(4), Partition::parse("0,1|2,3", 4).unwrap()).is_err());
    }
}
