//! Central extensions with trivial action.
//!
//! For a central congruence `α` of `A`, the pairs `(x, y) ∈ α` form the pair
//! algebra `A(α)`. Its quotient by `Δ_{α1}` is the kernel algebra `B`, an
//! abelian group under `x + y = m(x, 0, y)` whose operations are affine in
//! each argument. Every central extension is recovered from `B`, the quotient
//! `Q = A/α` and a 2-cocycle `T` by the basic construction `B ⊗^T Q`.
//!
//! Pairs are indexed in lex order and kernel elements by the minimal pair of
//! their class, so the diagonal class is always element 0.

use crate::abgroup::{decompose_group, GroupDecomposition, LinearMap};
use crate::algebra::{
    enumerate_homs, for_each_tuple, is_homomorphism, quotient, search_homs, FiniteAlgebra, HomSearch,
};
use crate::commutator::{commutator, is_central};
use crate::congruence::{cg, Congruence, Partition};
use crate::error::{Error, Result};
use crate::termlang::{CompiledTerm, Signature, VarietySpec};

/// Lex-ordered index of the pairs of an equivalence relation.
#[derive(Debug, Clone)]
pub struct PairIndex {
    /// Number of pairs whose first entry is below `x`.
    prefix: Vec<usize>,
    /// Position of `y` inside its block.
    pos: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    partition: Partition,
}

impl PairIndex {
    pub fn new(p: &Partition) -> Self {
        let n = p.n();
        let blocks = p.blocks();
        let mut pos = vec![0; n];
        for b in &blocks {
            for (i, &x) in b.iter().enumerate() {
                pos[x] = i;
            }
        }
        let mut prefix = Vec::with_capacity(n);
        let mut pairs = Vec::new();
        for x in 0..n {
            prefix.push(pairs.len());
            pairs.extend(blocks[p.block_of(x)].iter().map(|&y| (x, y)));
        }
        PairIndex { prefix, pos, pairs, partition: p.clone() }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pair(&self, i: usize) -> (usize, usize) {
        self.pairs[i]
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn index(&self, x: usize, y: usize) -> Option<usize> {
        self.partition.related(x, y).then(|| self.prefix[x] + self.pos[y])
    }

    pub fn diagonal(&self, x: usize) -> usize {
        self.prefix[x] + self.pos[x]
    }
}

/// The subalgebra `A(α)` of `A²`.
#[derive(Debug, Clone)]
pub struct PairAlgebra {
    pub algebra: FiniteAlgebra,
    pub index: PairIndex,
}

pub fn pair_algebra(a: &FiniteAlgebra, alpha: &Partition) -> Result<PairAlgebra> {
    if alpha.n() != a.size() {
        return Err(Error::CarrierMismatch(alpha.n(), a.size()));
    }
    let index = PairIndex::new(alpha);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut bad = false;
    let algebra = FiniteAlgebra::from_fn(&format!("{}(alpha)", a.name()), a.signature().clone(), index.len(), |s, args| {
        xs.clear();
        ys.clear();
        for &i in args {
            let (x, y) = index.pair(i);
            xs.push(x);
            ys.push(y);
        }
        index.index(a.apply(s, &xs), a.apply(s, &ys)).unwrap_or_else(|| {
            bad = true;
            0
        })
    })?;
    if bad {
        return Err(Error::IncompatiblePartition);
    }
    Ok(PairAlgebra { algebra, index })
}

/// `Δ_{αβ}`: generated by `((u,u),(v,v))` for `(u,v) ∈ β`.
pub fn delta_congruence(pa: &PairAlgebra, beta: &Partition) -> Congruence {
    let gens: Vec<(usize, usize)> =
        (0..beta.n()).map(|v| (pa.index.diagonal(beta.rep(v)), pa.index.diagonal(v))).collect();
    cg(&pa.algebra, &gens)
}

/// An abelian algebra with a designated idempotent zero, viewed as a group
/// with affine-free linear operations `f(x̄) = Σ r_{f,i}(x_i)`.
#[derive(Debug, Clone)]
pub struct KernelAlgebra {
    algebra: FiniteAlgebra,
    zero: usize,
    group: GroupDecomposition,
    r: Vec<Vec<LinearMap>>,
    m: CompiledTerm,
}

impl KernelAlgebra {
    /// Decomposes `alg` with `x + y = m(x, zero, y)` and verifies every table.
    pub fn from_abelian(algebra: FiniteAlgebra, zero: usize, m: &CompiledTerm) -> Result<Self> {
        let n = algebra.size();
        if zero >= n {
            return Err(Error::DecompositionFailed("zero out of range".into()));
        }
        let mut stack = Vec::new();
        let mut add = vec![0usize; n * n];
        for x in 0..n {
            for y in 0..n {
                add[x * n + y] = m.eval_with(&algebra, &[x, zero, y], &mut stack);
            }
        }
        let group = decompose_group(n, zero, |x, y| add[x * n + y])?;
        let moduli = group.moduli.clone();
        let sig = algebra.signature().clone();
        let mut r = Vec::with_capacity(sig.len());
        for s in 0..sig.len() {
            let k = sig.arity(s);
            if algebra.apply(s, &vec![zero; k]) != zero {
                return Err(Error::DecompositionFailed(format!("zero is not idempotent for `{}`", sig.name(s))));
            }
            let mut maps = Vec::with_capacity(k);
            for i in 0..k {
                let map = LinearMap::from_fn(&moduli, &moduli, |e| {
                    let mut args = vec![zero; k];
                    args[i] = group.element(e);
                    group.coords(algebra.apply(s, &args)).to_vec()
                })
                .map_err(|e| Error::DecompositionFailed(e.to_string()))?;
                maps.push(map);
            }
            r.push(maps);
        }
        let ka = KernelAlgebra { algebra, zero, group, r, m: m.clone() };
        ka.verify_tables()?;
        Ok(ka)
    }

    /// Uses the first idempotent as zero and the variety's difference term.
    pub fn from_variety(algebra: FiniteAlgebra, v: &VarietySpec) -> Result<Self> {
        let zero = crate::algebra::find_idempotents(&algebra).first().copied().ok_or(Error::NoIdempotent)?;
        Self::from_abelian(algebra, zero, &v.compiled_difference())
    }

    fn verify_tables(&self) -> Result<()> {
        let sig = self.algebra.signature();
        for s in 0..sig.len() {
            let k = sig.arity(s);
            let mut bad = None;
            for_each_tuple(self.size(), k, |args| {
                if bad.is_some() {
                    return;
                }
                let want = args.iter().enumerate().fold(self.zero, |acc, (i, &x)| {
                    self.add(acc, self.group.element(&self.r[s][i].apply(self.coords(x))))
                });
                if want != self.algebra.apply(s, args) {
                    bad = Some(args.to_vec());
                }
            });
            if let Some(args) = bad {
                return Err(Error::DecompositionFailed(format!(
                    "`{}` is not linear at {:?}",
                    sig.name(s),
                    args
                )));
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn signature(&self) -> &Signature {
        self.algebra.signature()
    }

    pub fn size(&self) -> usize {
        self.algebra.size()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn difference_term(&self) -> &CompiledTerm {
        &self.m
    }

    /// Component orders of `(B, +) ≅ ⊕ Z/c_j`.
    pub fn moduli(&self) -> &[u64] {
        &self.group.moduli
    }

    pub fn coords(&self, x: usize) -> &[u64] {
        self.group.coords(x)
    }

    pub fn element(&self, c: &[u64]) -> usize {
        self.group.element(c)
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        let c: Vec<u64> = self.coords(x).iter().zip(self.coords(y)).zip(self.moduli()).map(|((a, b), m)| (a + b) % m).collect();
        self.element(&c)
    }

    pub fn neg(&self, x: usize) -> usize {
        let c: Vec<u64> = self.coords(x).iter().zip(self.moduli()).map(|(a, m)| (m - a) % m).collect();
        self.element(&c)
    }

    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg(y))
    }

    /// The endomorphism `r_{f,i}` in coordinates.
    pub fn r(&self, sym: usize, i: usize) -> &LinearMap {
        &self.r[sym][i]
    }
}

/// A section `l` of `π` together with its trace `l∘π`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lifting {
    map: Vec<usize>,
}

impl Lifting {
    pub fn new(pi: &[usize], q_size: usize, map: Vec<usize>) -> Result<Self> {
        if map.len() != q_size || map.iter().enumerate().any(|(q, &x)| x >= pi.len() || pi[x] != q) {
            return Err(Error::NotASection);
        }
        Ok(Lifting { map })
    }

    /// Picks the least preimage of every element.
    pub fn minimal(pi: &[usize], q_size: usize) -> Result<Self> {
        let mut map = vec![usize::MAX; q_size];
        for (x, &q) in pi.iter().enumerate().rev() {
            map[q] = x;
        }
        if map.contains(&usize::MAX) {
            return Err(Error::NotSurjective);
        }
        Ok(Lifting { map })
    }

    /// Every section, when there are at most `limit`.
    pub fn all(pi: &[usize], q_size: usize, limit: usize) -> Result<Vec<Self>> {
        let mut fibres: Vec<Vec<usize>> = vec![Vec::new(); q_size];
        for (x, &q) in pi.iter().enumerate() {
            fibres[q].push(x);
        }
        let mut count = 1usize;
        for f in &fibres {
            count = count.checked_mul(f.len()).filter(|&c| c <= limit).ok_or(Error::LimitExceeded(limit))?;
        }
        let mut out = Vec::with_capacity(count);
        let mut idx = vec![0usize; q_size];
        loop {
            out.push(Lifting { map: idx.iter().zip(&fibres).map(|(&i, f)| f[i]).collect() });
            let mut j = q_size;
            loop {
                if j == 0 {
                    return Ok(out);
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < fibres[j].len() {
                    break;
                }
                idx[j] = 0;
            }
        }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, q: usize) -> usize {
        self.map[q]
    }

    pub fn trace(&self, pi: &[usize]) -> Vec<usize> {
        pi.iter().map(|&q| self.map[q]).collect()
    }
}

/// Per-symbol tables `T_f : Q^{ar f} → B` of kernel-algebra elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cocycle {
    tables: Vec<Vec<usize>>,
}

fn tuple_index(q_size: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &x| acc * q_size + x)
}

impl Cocycle {
    pub fn zero(sig: &Signature, q_size: usize, zero: usize) -> Self {
        let tables = (0..sig.len()).map(|s| vec![zero; q_size.pow(sig.arity(s) as u32)]).collect();
        Cocycle { tables }
    }

    pub fn from_tables(sig: &Signature, q_size: usize, b_size: usize, tables: Vec<Vec<usize>>) -> Result<Self> {
        if tables.len() != sig.len() {
            return Err(Error::Format(format!("expected {} tables, got {}", sig.len(), tables.len())));
        }
        for (s, t) in tables.iter().enumerate() {
            if t.len() != q_size.pow(sig.arity(s) as u32) {
                return Err(Error::Format(format!("table `{}` has {} entries", sig.name(s), t.len())));
            }
            if t.iter().any(|&v| v >= b_size) {
                return Err(Error::Format(format!("table `{}` has an out-of-range entry", sig.name(s))));
            }
        }
        Ok(Cocycle { tables })
    }

    /// `T_f(x̄) = f(x̄)` tabulated over `Q`.
    pub fn from_fn(sig: &Signature, q_size: usize, mut f: impl FnMut(usize, &[usize]) -> usize) -> Self {
        let tables = (0..sig.len())
            .map(|s| {
                let mut t = Vec::new();
                for_each_tuple(q_size, sig.arity(s), |args| t.push(f(s, args)));
                t
            })
            .collect();
        Cocycle { tables }
    }

    pub fn table(&self, sym: usize) -> &[usize] {
        &self.tables[sym]
    }

    pub fn tables(&self) -> &[Vec<usize>] {
        &self.tables
    }

    pub fn value(&self, sym: usize, q_size: usize, args: &[usize]) -> usize {
        self.tables[sym][tuple_index(q_size, args)]
    }

    pub fn is_zero(&self, zero: usize) -> bool {
        self.tables.iter().flatten().all(|&v| v == zero)
    }

    fn zip(&self, other: &Cocycle, f: impl Fn(usize, usize) -> usize) -> Cocycle {
        let tables = self
            .tables
            .iter()
            .zip(&other.tables)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect())
            .collect();
        Cocycle { tables }
    }

    pub fn add(&self, other: &Cocycle, b: &KernelAlgebra) -> Cocycle {
        self.zip(other, |x, y| b.add(x, y))
    }

    pub fn sub(&self, other: &Cocycle, b: &KernelAlgebra) -> Cocycle {
        self.zip(other, |x, y| b.sub(x, y))
    }

    pub fn neg(&self, b: &KernelAlgebra) -> Cocycle {
        Cocycle { tables: self.tables.iter().map(|t| t.iter().map(|&x| b.neg(x)).collect()).collect() }
    }

    /// Pushes every value along a map `B → E` of elements.
    pub fn push(&self, map: &[usize]) -> Cocycle {
        Cocycle { tables: self.tables.iter().map(|t| t.iter().map(|&x| map[x]).collect()).collect() }
    }

    /// `T ∘ φ` for `φ : Q' → Q`.
    pub fn pullback(&self, sig: &Signature, q_size: usize, phi: &[usize]) -> Cocycle {
        let mut img = Vec::new();
        Cocycle::from_fn(sig, phi.len(), |s, args| {
            img.clear();
            img.extend(args.iter().map(|&x| phi[x]));
            self.value(s, q_size, &img)
        })
    }

    /// Concatenated coordinates of every entry.
    pub fn to_vector(&self, b: &KernelAlgebra) -> Vec<u64> {
        self.tables.iter().flatten().flat_map(|&x| b.coords(x).iter().copied()).collect()
    }

    pub fn from_vector(sig: &Signature, q_size: usize, b: &KernelAlgebra, v: &[u64]) -> Result<Self> {
        let d = b.moduli().len();
        let mut chunks = v.chunks(d.max(1));
        let tables = (0..sig.len())
            .map(|s| {
                (0..q_size.pow(sig.arity(s) as u32))
                    .map(|_| if d == 0 { Some(b.zero()) } else { chunks.next().map(|c| b.element(c)) })
                    .collect::<Option<Vec<usize>>>()
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Format("cocycle vector too short".into()))?;
        Ok(Cocycle { tables })
    }
}

/// Moduli of the cocycle ambient group `⊕_{f, q̄} B`.
pub fn cocycle_moduli(sig: &Signature, q_size: usize, b: &KernelAlgebra) -> Vec<u64> {
    let entries: usize = (0..sig.len()).map(|s| q_size.pow(sig.arity(s) as u32)).sum();
    b.moduli().iter().copied().cycle().take(entries * b.moduli().len()).collect()
}

/// `B ⊗^T Q` with `(b, q)` encoded as `b·|Q| + q`, and its second projection.
pub fn basic_construction(b: &KernelAlgebra, q: &FiniteAlgebra, t: &Cocycle) -> Result<(FiniteAlgebra, Vec<usize>)> {
    if !b.signature().same_symbols(q.signature()) {
        return Err(Error::SignatureMismatch(format!("{} vs {}", b.signature(), q.signature())));
    }
    let sig = q.signature();
    Cocycle::from_tables(sig, q.size(), b.size(), t.tables.clone())?;
    let nq = q.size();
    let mut bs = Vec::new();
    let mut qs = Vec::new();
    let alg = FiniteAlgebra::from_fn(&format!("{}(x)T{}", b.algebra.name(), q.name()), sig.clone(), b.size() * nq, |s, args| {
        bs.clear();
        qs.clear();
        for &v in args {
            bs.push(v / nq);
            qs.push(v % nq);
        }
        let top = b.add(b.algebra.apply(s, &bs), t.value(s, nq, &qs));
        top * nq + q.apply(s, &qs)
    })?;
    let p2 = (0..alg.size()).map(|v| v % nq).collect();
    Ok((alg, p2))
}

/// A surjection `π : A → Q` with central kernel and its kernel algebra.
#[derive(Debug, Clone)]
pub struct CentralExtension {
    a: FiniteAlgebra,
    q: FiniteAlgebra,
    pi: Vec<usize>,
    pairs: PairIndex,
    /// Kernel-algebra element of every pair.
    class: Vec<usize>,
    kernel: KernelAlgebra,
}

impl CentralExtension {
    /// The extension `A → A/α`; fails unless `[α,1] = 0`.
    pub fn from_congruence(a: &FiniteAlgebra, alpha: &Partition, v: &VarietySpec, budget: usize) -> Result<Self> {
        if !is_central(a, alpha, budget)? {
            return Err(Error::NotCentral);
        }
        let (q, pi) = quotient(a, alpha)?;
        let pa = pair_algebra(a, alpha)?;
        let delta = delta_congruence(&pa, &Partition::total(a.size()));
        let (balg, class) = quotient(&pa.algebra, delta.partition())?;
        let mut balg = balg;
        balg.set_name(&format!("{}(alpha)/delta", a.name()));
        let kernel = KernelAlgebra::from_abelian(balg, class[pa.index.diagonal(0)], &v.compiled_difference())?;
        Ok(CentralExtension { a: a.clone(), q, pi, pairs: pa.index, class, kernel })
    }

    /// The extension `B ⊗^T Q → Q` with `class((b,q),(b',q)) = b' − b`.
    pub fn from_basic(b: &KernelAlgebra, q: &FiniteAlgebra, t: &Cocycle) -> Result<Self> {
        let (a, pi) = basic_construction(b, q, t)?;
        let nq = q.size();
        let pairs = PairIndex::new(&Partition::from_labels(&pi));
        let class = pairs.pairs().iter().map(|&(x, y)| b.sub(y / nq, x / nq)).collect();
        Ok(CentralExtension { a, q: q.clone(), pi, pairs, class, kernel: b.clone() })
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.a
    }

    pub fn quotient(&self) -> &FiniteAlgebra {
        &self.q
    }

    pub fn projection(&self) -> &[usize] {
        &self.pi
    }

    pub fn alpha(&self) -> &Partition {
        self.pairs.partition()
    }

    pub fn kernel(&self) -> &KernelAlgebra {
        &self.kernel
    }

    /// Kernel element of the pair `[x; y]`, for `π x = π y`.
    pub fn class(&self, x: usize, y: usize) -> Option<usize> {
        self.pairs.index(x, y).map(|i| self.class[i])
    }

    /// Recomputes `A(α)/Δ_{α1}` and checks it against the stored class map.
    pub fn verify_kernel(&self) -> Result<()> {
        let pa = pair_algebra(&self.a, self.alpha())?;
        let delta = delta_congruence(&pa, &Partition::total(self.a.size()));
        if *delta.partition() != Partition::from_labels(&self.class) {
            return Err(Error::VerificationFailed("class map differs from the pair-algebra quotient".into()));
        }
        Ok(())
    }

    pub fn minimal_lifting(&self) -> Lifting {
        Lifting::minimal(&self.pi, self.q.size()).expect("projection is onto")
    }

    /// `ψ(x) = (class(l π x, x), π x)` encoded as `b·|Q| + q`.
    pub fn psi(&self, l: &Lifting) -> Vec<usize> {
        let nq = self.q.size();
        (0..self.a.size())
            .map(|x| {
                let q = self.pi[x];
                self.class(l.apply(q), x).expect("same fibre") * nq + q
            })
            .collect()
    }

    /// Inverse of `ψ`: the element of the fibre over `q` at class `b` from `l(q)`.
    pub fn psi_inverse(&self, l: &Lifting) -> Vec<usize> {
        let psi = self.psi(l);
        let mut inv = vec![0; psi.len()];
        for (x, &y) in psi.iter().enumerate() {
            inv[y] = x;
        }
        inv
    }
}

/// `T_f(x̄) = class(l(f^Q x̄), f^A(l x̄))`.
pub fn extract_cocycle(ext: &CentralExtension, l: &Lifting) -> Result<Cocycle> {
    Lifting::new(&ext.pi, ext.q.size(), l.map.clone())?;
    let mut lifted = Vec::new();
    Ok(Cocycle::from_fn(ext.q.signature(), ext.q.size(), |s, args| {
        lifted.clear();
        lifted.extend(args.iter().map(|&x| l.apply(x)));
        let top = ext.a.apply(s, &lifted);
        ext.class(l.apply(ext.q.apply(s, args)), top).expect("π is a homomorphism")
    }))
}

/// Extracts `T` from `l` and checks that `ψ` is an isomorphism onto `B ⊗^T Q`.
pub fn verify_round_trip(ext: &CentralExtension, l: &Lifting) -> Result<Cocycle> {
    let t = extract_cocycle(ext, l)?;
    let (basic, _) = basic_construction(&ext.kernel, &ext.q, &t)?;
    let psi = ext.psi(l);
    let mut seen = vec![false; basic.size()];
    for &y in &psi {
        if std::mem::replace(&mut seen[y], true) {
            return Err(Error::VerificationFailed("ψ is not injective".into()));
        }
    }
    if psi.len() != basic.size() || !is_homomorphism(&ext.a, &basic, &psi) {
        return Err(Error::VerificationFailed("ψ is not an isomorphism".into()));
    }
    Ok(t)
}

/// `G_f(x̄) = f^B(h x̄) − h(f^Q x̄)`.
pub fn coboundary_from_witness(h: &[usize], q: &FiniteAlgebra, b: &KernelAlgebra) -> Cocycle {
    let mut img = Vec::new();
    Cocycle::from_fn(q.signature(), q.size(), |s, args| {
        img.clear();
        img.extend(args.iter().map(|&x| h[x]));
        b.sub(b.algebra.apply(s, &img), h[q.apply(s, args)])
    })
}

/// Derivations `Q → B`: the homomorphisms into the kernel algebra.
pub fn derivations(q: &FiniteAlgebra, b: &KernelAlgebra, limit: usize) -> Result<Vec<Vec<usize>>> {
    Ok(enumerate_homs(q, &b.algebra, None, limit)?.into_iter().map(|h| h.map).collect())
}

/// Whether `γ : A → A'` satisfies `π'∘γ = π` and `γ = m(γ∘r, r, id)` for the trace of `l`.
pub fn is_stabilizing(src: &CentralExtension, dst: &CentralExtension, l: &Lifting, gamma: &[usize]) -> bool {
    let r = l.trace(&src.pi);
    let m = src.kernel.difference_term();
    let mut stack = Vec::new();
    gamma.len() == src.a.size()
        && (0..src.a.size()).all(|x| {
            dst.pi[gamma[x]] == src.pi[x] && m.eval_with(&dst.a, &[gamma[r[x]], r[x], x], &mut stack) == gamma[x]
        })
}

/// `γ(x) = ψ⁻¹(ψ(x) + (d(π x), 0))`, verified to be a stabilizing automorphism.
pub fn stabilizing_automorphism(ext: &CentralExtension, l: &Lifting, d: &[usize]) -> Result<Vec<usize>> {
    if !is_homomorphism(&ext.q, &ext.kernel.algebra, d) {
        return Err(Error::VerificationFailed("d is not a derivation".into()));
    }
    let nq = ext.q.size();
    let psi = ext.psi(l);
    let inv = ext.psi_inverse(l);
    let gamma: Vec<usize> = psi
        .iter()
        .map(|&y| {
            let (b, q) = (y / nq, y % nq);
            inv[ext.kernel.add(b, d[q]) * nq + q]
        })
        .collect();
    let mut seen = vec![false; gamma.len()];
    gamma.iter().for_each(|&y| seen[y] = true);
    if seen.contains(&false) || !is_homomorphism(&ext.a, &ext.a, &gamma) {
        return Err(Error::VerificationFailed("γ is not an automorphism".into()));
    }
    if !is_stabilizing(ext, ext, l, &gamma) {
        return Err(Error::VerificationFailed("γ is not stabilizing".into()));
    }
    Ok(gamma)
}

/// Isomorphisms `src → dst` over `Q` satisfying the stabilizing condition
/// for `l`, found by search.
pub fn stabilizing_isomorphisms(
    src: &CentralExtension,
    dst: &CentralExtension,
    l: &Lifting,
    stop_after: Option<usize>,
    limit: usize,
) -> Result<Vec<Vec<usize>>> {
    if src.a.size() != dst.a.size() {
        return Ok(Vec::new());
    }
    let allowed = |x: usize, y: usize| src.pi[x] == dst.pi[y];
    let opts = HomSearch { injective: true, limit, allowed: Some(&allowed), ..HomSearch::default() };
    let mut out: Vec<Vec<usize>> =
        search_homs(&src.a, &dst.a, &opts)?.into_iter().filter(|g| is_stabilizing(src, dst, l, g)).collect();
    if let Some(k) = stop_after {
        out.truncate(k);
    }
    Ok(out)
}

/// The isomorphism `[a; b] ↦ m(a, b, u)` from the kernel algebra onto the
/// `α`-class of an idempotent `u`.
#[derive(Debug, Clone)]
pub struct IdealIso {
    /// The `α`-class of `u`, increasing.
    pub ideal: Vec<usize>,
    /// Image in `A` of every kernel element.
    pub map: Vec<usize>,
    pub ideal_algebra: FiniteAlgebra,
}

pub fn idempotent_ideal_iso(
    a: &FiniteAlgebra,
    alpha: &Partition,
    u: usize,
    v: &VarietySpec,
    budget: usize,
) -> Result<IdealIso> {
    let sig = a.signature();
    if (0..sig.len()).any(|s| a.apply(s, &vec![u; sig.arity(s)]) != u) {
        return Err(Error::NotIdempotent(u));
    }
    let ext = CentralExtension::from_congruence(a, alpha, v, budget)?;
    let m = v.compiled_difference();
    let ideal: Vec<usize> = (0..a.size()).filter(|&x| alpha.related(x, u)).collect();
    let ideal_algebra = a.restrict(&format!("I({})", a.name()), &ideal)?;
    let mut map = vec![usize::MAX; ext.kernel.size()];
    let mut stack = Vec::new();
    for (i, &(x, y)) in ext.pairs.pairs().iter().enumerate() {
        let img = m.eval_with(a, &[x, y, u], &mut stack);
        let c = ext.class[i];
        if map[c] == usize::MAX {
            map[c] = img;
        } else if map[c] != img {
            return Err(Error::VerificationFailed("map is not constant on Δ-classes".into()));
        }
    }
    let local: Vec<usize> = map
        .iter()
        .map(|x| ideal.binary_search(x).map_err(|_| Error::VerificationFailed("image leaves the ideal".into())))
        .collect::<Result<_>>()?;
    let mut sorted = local.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != ideal.len() || local.len() != ideal.len() {
        return Err(Error::VerificationFailed("map is not a bijection onto the ideal".into()));
    }
    if !is_homomorphism(ext.kernel.algebra(), &ideal_algebra, &local) {
        return Err(Error::VerificationFailed("map is not a homomorphism".into()));
    }
    Ok(IdealIso { ideal, map, ideal_algebra })
}

/// Outcome of the short-sequence check for `κ(α ∧ [1,1]) → A(α)/Δ → A/[1,1](β)/Δ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitReport {
    pub middle_size: usize,
    pub right_size: usize,
    pub kernel_size: usize,
    pub well_defined: bool,
    pub homomorphism: bool,
    pub surjective: bool,
    pub kernel_matches: bool,
    /// Whether a homomorphic section of `ξ` exists, when requested.
    pub split: Option<bool>,
}

impl SplitReport {
    pub fn exact(&self) -> bool {
        self.well_defined && self.homomorphism && self.surjective && self.kernel_matches
    }
}

/// The map `ξ : A(α)/Δ_{α1} → A/[1,1](β)/Δ_{β1}`, `[x; y] ↦ [x/γ; y/γ]`,
/// with `γ = [1,1]` and `β = (α ∨ γ)/γ`.
#[derive(Debug, Clone)]
pub struct SplitData {
    pub left: CentralExtension,
    pub right: CentralExtension,
    pub gamma: Congruence,
    /// Image of every kernel element; meaningful when `well_defined`.
    pub xi: Vec<usize>,
    pub well_defined: bool,
}

pub fn split_data(a: &FiniteAlgebra, alpha: &Partition, v: &VarietySpec, budget: usize) -> Result<SplitData> {
    let one = Partition::total(a.size());
    let gamma = commutator(a, &one, &one, budget)?;
    let left = CentralExtension::from_congruence(a, alpha, v, budget)?;
    let (ab, p) = quotient(a, &gamma)?;
    let join = alpha.join(&gamma)?;
    let beta_labels: Vec<usize> = gamma.reps().iter().map(|&x| join.block_of(x)).collect();
    let beta = Partition::from_labels(&beta_labels);
    let right = CentralExtension::from_congruence(&ab, &beta, v, budget)?;
    let mut xi = vec![usize::MAX; left.kernel.size()];
    let mut well_defined = true;
    for (i, &(x, y)) in left.pairs.pairs().iter().enumerate() {
        let img = right.class(p[x], p[y]).expect("β contains the image of α");
        let c = left.class[i];
        if xi[c] == usize::MAX {
            xi[c] = img;
        } else if xi[c] != img {
            well_defined = false;
        }
    }
    Ok(SplitData { left, right, gamma, xi, well_defined })
}

impl SplitData {
    /// Kernel elements of pairs in `α ∧ [1,1]`, increasing.
    pub fn commutator_part(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .left
            .pairs
            .pairs()
            .iter()
            .enumerate()
            .filter(|(_, &(x, y))| self.gamma.related(x, y))
            .map(|(i, _)| self.left.class[i])
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// A homomorphic section of `ξ`, if one exists.
    pub fn section(&self) -> Result<Option<Vec<usize>>> {
        let xi = &self.xi;
        let allowed = |x: usize, y: usize| xi[y] == x;
        let opts = HomSearch { allowed: Some(&allowed), stop_after: Some(1), ..HomSearch::default() };
        Ok(search_homs(self.right.kernel.algebra(), self.left.kernel.algebra(), &opts)?.into_iter().next())
    }
}

pub fn split_sequence_check(
    a: &FiniteAlgebra,
    alpha: &Partition,
    v: &VarietySpec,
    budget: usize,
    search_split: bool,
) -> Result<SplitReport> {
    let data = split_data(a, alpha, v, budget)?;
    let bl = data.left.kernel();
    let br = data.right.kernel();
    let xi = &data.xi;
    let homomorphism = data.well_defined && is_homomorphism(bl.algebra(), br.algebra(), xi);
    let mut hit = vec![false; br.size()];
    xi.iter().filter(|&&y| y < br.size()).for_each(|&y| hit[y] = true);
    let surjective = !hit.contains(&false);
    let in_kernel: Vec<usize> = (0..bl.size()).filter(|&c| xi[c] == br.zero()).collect();
    let kernel_matches = in_kernel == data.commutator_part();
    let split = if search_split && homomorphism { Some(data.section()?.is_some()) } else { None };
    Ok(SplitReport {
        middle_size: bl.size(),
        right_size: br.size(),
        kernel_size: in_kernel.len(),
        well_defined: data.well_defined,
        homomorphism,
        surjective,
        kernel_matches,
        split,
    })
}

/// Writes `cocycle <f>:` blocks, one row per value of the first argument.
pub fn write_cocycle(sig: &Signature, q_size: usize, t: &Cocycle) -> String {
    let mut out = String::new();
    for s in 0..sig.len() {
        out.push_str(&format!("cocycle {}:\n", sig.name(s)));
        let row = if sig.arity(s) == 0 { 1 } else { q_size.pow(sig.arity(s) as u32 - 1) };
        for chunk in t.table(s).chunks(row.max(1)) {
            let line: Vec<String> = chunk.iter().map(usize::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
    }
    out
}

pub fn parse_cocycle(text: &str, sig: &Signature, q_size: usize, b_size: usize) -> Result<Cocycle> {
    let mut tables: Vec<Option<Vec<usize>>> = vec![None; sig.len()];
    let mut cur: Option<usize> = None;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("cocycle ") {
            let name = rest.trim().strip_suffix(':').ok_or_else(|| Error::Syntax {
                line: ln,
                col: 1,
                msg: "expected `cocycle <name>:`".into(),
            })?;
            let s = sig.lookup(name.trim()).ok_or_else(|| Error::UnknownSymbol(name.trim().to_string()))?;
            if tables[s].is_some() {
                return Err(Error::Syntax { line: ln, col: 1, msg: format!("table for `{name}` given twice") });
            }
            tables[s] = Some(Vec::new());
            cur = Some(s);
            continue;
        }
        let s = cur.ok_or_else(|| Error::Syntax { line: ln, col: 1, msg: format!("unexpected `{line}`") })?;
        let t = tables[s].as_mut().expect("opened");
        for tok in line.split_whitespace() {
            t.push(tok.parse().map_err(|_| Error::Syntax { line: ln, col: 1, msg: format!("bad entry `{tok}`") })?);
        }
    }
    let tables = tables
        .into_iter()
        .enumerate()
        .map(|(s, t)| t.ok_or_else(|| Error::Format(format!("missing table for `{}`", sig.name(s)))))
        .collect::<Result<Vec<_>>>()?;
    Cocycle::from_tables(sig, q_size, b_size, tables)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{find_isomorphism, groups};
    use crate::commutator::center;
    use crate::congruence::cg;

    const BUDGET: usize = 1 << 20;

    fn groups_v() -> VarietySpec {
        groups::group_variety()
    }

    fn z4_ext() -> CentralExtension {
        let z4 = groups::cyclic(4);
        let alpha = cg(&z4, &[(0, 2)]);
        CentralExtension::from_congruence(&z4, &alpha, &groups_v(), BUDGET).unwrap()
    }

    fn z2_kernel() -> KernelAlgebra {
        KernelAlgebra::from_variety(groups::cyclic(2), &groups_v()).unwrap()
    }

    #[test]
    fn pair_algebra_sizes() {
        let z4 = groups::cyclic(4);
        assert_eq!(pair_algebra(&z4, &Partition::zero(4)).unwrap().algebra.size(), 4);
        let z2 = groups::cyclic(2);
        assert_eq!(pair_algebra(&z2, &Partition::total(2)).unwrap().algebra.size(), 4);
        let pa = pair_algebra(&z4, &cg(&z4, &[(0, 2)])).unwrap();
        assert_eq!(pa.algebra.size(), 8);
        for i in 0..pa.index.len() {
            let (x, y) = pa.index.pair(i);
            assert_eq!(pa.index.index(x, y), Some(i));
        }
        assert!(pa.index.pairs().windows(2).all(|w| w[0] < w[1]));
        let bad = Partition::from_labels(&[0, 0, 1, 1]);
        assert!(pair_algebra(&groups::cyclic(4), &bad).is_err());
    }

    #[test]
    fn delta_sizes() {
        let z2 = groups::cyclic(2);
        let pa = pair_algebra(&z2, &Partition::total(2)).unwrap();
        assert!(delta_congruence(&pa, &Partition::zero(2)).is_zero());
        assert_eq!(delta_congruence(&pa, &Partition::total(2)).num_blocks(), 2);
        let z4 = groups::cyclic(4);
        let pa = pair_algebra(&z4, &cg(&z4, &[(0, 2)])).unwrap();
        assert_eq!(delta_congruence(&pa, &Partition::total(4)).num_blocks(), 2);
    }

    #[test]
    fn kernel_algebras() {
        let ext = z4_ext();
        let b = ext.kernel();
        assert_eq!(b.moduli(), &[2]);
        assert_eq!(b.zero(), 0);
        assert!(find_isomorphism(b.algebra(), &groups::cyclic(2)).is_some());
        ext.verify_kernel().unwrap();

        let z3 = groups::cyclic(3);
        let full = CentralExtension::from_congruence(&z3, &Partition::total(3), &groups_v(), BUDGET).unwrap();
        assert!(find_isomorphism(full.kernel().algebra(), &z3).is_some());

        let triv = CentralExtension::from_congruence(&z3, &Partition::zero(3), &groups_v(), BUDGET).unwrap();
        assert_eq!(triv.kernel().size(), 1);

        let s3 = groups::symmetric(3);
        assert_eq!(
            CentralExtension::from_congruence(&s3, &Partition::total(6), &groups_v(), BUDGET).unwrap_err(),
            Error::NotCentral
        );
    }

    #[test]
    fn kernel_linear_maps() {
        let b = z2_kernel();
        let mul = b.signature().lookup("mul").unwrap();
        let inv = b.signature().lookup("inv").unwrap();
        assert_eq!(b.r(mul, 0).apply(&[1]), vec![1]);
        assert_eq!(b.r(mul, 1).apply(&[1]), vec![1]);
        assert_eq!(b.r(inv, 0).apply(&[1]), vec![1]);
        let z5 = KernelAlgebra::from_variety(groups::cyclic(5), &groups_v()).unwrap();
        let inv5 = z5.signature().lookup("inv").unwrap();
        assert_eq!(z5.r(inv5, 0).apply(&[1]), vec![4]);
        // a non-abelian table has no linear decomposition
        let s3 = groups::symmetric(3);
        assert!(KernelAlgebra::from_variety(s3, &groups_v()).is_err());
    }

    #[test]
    fn basic_construction_examples() {
        let b = z2_kernel();
        let q = groups::cyclic(2);
        let zero = Cocycle::zero(q.signature(), 2, 0);
        let (a, p2) = basic_construction(&b, &q, &zero).unwrap();
        assert!(find_isomorphism(&a, &groups::klein()).is_some());
        assert_eq!(p2, vec![0, 1, 0, 1]);

        let mul = q.signature().lookup("mul").unwrap();
        let inv = q.signature().lookup("inv").unwrap();
        let mul_reduct = |a: &FiniteAlgebra| {
            let sig = Signature::from_pairs(&[("mul", 2)]).unwrap();
            FiniteAlgebra::new("r", sig, a.size(), vec![a.table(mul).to_vec()]).unwrap()
        };
        // T_inv = 0: the multiplication is cyclic but inv is not its inverse
        let t0 = Cocycle::from_fn(q.signature(), 2, |s, args| usize::from(s == mul && args == [1, 1]));
        let (a0, _) = basic_construction(&b, &q, &t0).unwrap();
        assert!(find_isomorphism(&mul_reduct(&a0), &mul_reduct(&groups::cyclic(4))).is_some());
        assert!(find_isomorphism(&a0, &groups::cyclic(4)).is_none());
        let t = Cocycle::from_fn(q.signature(), 2, |s, args| {
            usize::from((s == mul && args == [1, 1]) || (s == inv && args == [1]))
        });
        let (a, _) = basic_construction(&b, &q, &t).unwrap();
        assert!(find_isomorphism(&a, &groups::cyclic(4)).is_some());
        let ext = CentralExtension::from_basic(&b, &q, &t).unwrap();
        ext.verify_kernel().unwrap();
        assert!(is_central(ext.algebra(), ext.alpha(), BUDGET).unwrap());
    }

    #[test]
    fn unary_shift_example() {
        // ⟨Z_2, g = id⟩ twisted by T_g ≡ −1
        let sig = Signature::from_pairs(&[("add", 2), ("neg", 1), ("zero", 0), ("g", 1)]).unwrap();
        let zn = FiniteAlgebra::from_fn("z2g", sig.clone(), 2, |s, args| match s {
            0 => (args[0] + args[1]) % 2,
            1 => args[0],
            2 => 0,
            _ => args[0],
        })
        .unwrap();
        let m = crate::termlang::parse_term("add(x, add(neg(y), z))", &sig).unwrap();
        let m = CompiledTerm::compile(&m, &["x".into(), "y".into(), "z".into()]).unwrap();
        let b = KernelAlgebra::from_abelian(zn.clone(), 0, &m).unwrap();
        let g = sig.lookup("g").unwrap();
        let t = Cocycle::from_fn(&sig, 2, |s, _| if s == g { b.neg(1) } else { 0 });
        let (a, _) = basic_construction(&b, &zn, &t).unwrap();
        for bv in 0..2 {
            for x in 0..2 {
                assert_eq!(a.apply(g, &[bv * 2 + x]), ((bv + 1) % 2) * 2 + x);
            }
        }
    }

    #[test]
    fn cocycle_extraction() {
        let ext = z4_ext();
        let l = Lifting::new(ext.projection(), 2, vec![0, 1]).unwrap();
        let t = verify_round_trip(&ext, &l).unwrap();
        let mul = ext.quotient().signature().lookup("mul").unwrap();
        assert_ne!(t.value(mul, 2, &[1, 1]), 0);
        assert_eq!(t.value(mul, 2, &[0, 1]), 0);
        assert!(Lifting::new(ext.projection(), 2, vec![0, 2]).is_err());

        let b = z2_kernel();
        let q = groups::cyclic(2);
        let prod = CentralExtension::from_basic(&b, &q, &Cocycle::zero(q.signature(), 2, 0)).unwrap();
        let l0 = Lifting::new(prod.projection(), 2, vec![0, 1]).unwrap();
        assert!(extract_cocycle(&prod, &l0).unwrap().is_zero(0));
    }

    #[test]
    fn round_trip_every_section() {
        let v = groups_v();
        for a in [groups::cyclic(4), groups::dihedral(4), groups::quaternion(), groups::klein()] {
            let z = center(&a, &v, BUDGET).unwrap();
            let ext = CentralExtension::from_congruence(&a, z.partition(), &v, BUDGET).unwrap();
            for l in Lifting::all(ext.projection(), ext.quotient().size(), 4096).unwrap() {
                verify_round_trip(&ext, &l).unwrap();
            }
        }
    }

    #[test]
    fn changing_section_shifts_by_coboundary() {
        let ext = z4_ext();
        let b = ext.kernel();
        let l = Lifting::new(ext.projection(), 2, vec![0, 1]).unwrap();
        let l2 = Lifting::new(ext.projection(), 2, vec![2, 3]).unwrap();
        let t = extract_cocycle(&ext, &l).unwrap();
        let t2 = extract_cocycle(&ext, &l2).unwrap();
        let h: Vec<usize> = (0..2).map(|q| ext.class(l.apply(q), l2.apply(q)).unwrap()).collect();
        let g = coboundary_from_witness(&h, ext.quotient(), b);
        assert_eq!(t2, t.add(&g, b));
    }

    #[test]
    fn coboundaries() {
        let b = z2_kernel();
        let q = groups::cyclic(2);
        assert!(coboundary_from_witness(&[0, 0], &q, &b).is_zero(0));
        assert!(coboundary_from_witness(&[0, 1], &q, &b).is_zero(0));
        let b3 = KernelAlgebra::from_variety(groups::cyclic(3), &groups_v()).unwrap();
        let q3 = groups::cyclic(3);
        let g = coboundary_from_witness(&[0, 1, 1], &q3, &b3);
        let mul = q3.signature().lookup("mul").unwrap();
        // h(1) + h(1) − h(2) = 1
        assert_eq!(g.value(mul, 3, &[1, 1]), 1);
        assert!(!g.is_zero(0));
    }

    #[test]
    fn stabilizing_automorphisms() {
        let b = z2_kernel();
        let q = groups::cyclic(2);
        let prod = CentralExtension::from_basic(&b, &q, &Cocycle::zero(q.signature(), 2, 0)).unwrap();
        let l = Lifting::new(prod.projection(), 2, vec![0, 1]).unwrap();
        assert_eq!(stabilizing_automorphism(&prod, &l, &[0, 0]).unwrap(), vec![0, 1, 2, 3]);
        // (0,1) ↔ (1,1)
        assert_eq!(stabilizing_automorphism(&prod, &l, &[0, 1]).unwrap(), vec![0, 3, 2, 1]);

        let ext = z4_ext();
        let l = ext.minimal_lifting();
        let ders = derivations(ext.quotient(), ext.kernel(), 100).unwrap();
        let homs = enumerate_homs(ext.quotient(), ext.kernel().algebra(), None, 100).unwrap();
        let found = stabilizing_isomorphisms(&ext, &ext, &l, None, 100).unwrap();
        assert_eq!(found.len(), homs.len());
        let mut built: Vec<Vec<usize>> =
            ders.iter().map(|d| stabilizing_automorphism(&ext, &l, d).unwrap()).collect();
        built.sort();
        let mut found = found;
        found.sort();
        assert_eq!(built, found);
    }

    #[test]
    fn idempotent_ideals() {
        let v = groups_v();
        let z4 = groups::cyclic(4);
        let iso = idempotent_ideal_iso(&z4, &cg(&z4, &[(0, 2)]), 0, &v, BUDGET).unwrap();
        assert_eq!(iso.ideal, vec![0, 2]);
        assert!(find_isomorphism(&iso.ideal_algebra, &groups::cyclic(2)).is_some());
        let triv = idempotent_ideal_iso(&z4, &Partition::zero(4), 0, &v, BUDGET).unwrap();
        assert_eq!(triv.ideal, vec![0]);
        assert_eq!(
            idempotent_ideal_iso(&z4, &cg(&z4, &[(0, 2)]), 1, &v, BUDGET).unwrap_err(),
            Error::NotIdempotent(1)
        );
        let d4 = groups::dihedral(4);
        let z = center(&d4, &v, BUDGET).unwrap();
        let iso = idempotent_ideal_iso(&d4, z.partition(), 0, &v, BUDGET).unwrap();
        assert_eq!(iso.ideal.len(), 2);
        // the ideal is {e, r²}: a central involution
        let r2 = iso.ideal[1];
        let mul = d4.signature().lookup("mul").unwrap();
        assert_eq!(d4.apply(mul, &[r2, r2]), 0);
        assert!((0..8).all(|x| d4.apply(mul, &[x, r2]) == d4.apply(mul, &[r2, x])));
    }

    #[test]
    fn split_sequences() {
        let v = groups_v();
        let z4 = groups::cyclic(4);
        let rep = split_sequence_check(&z4, cg(&z4, &[(0, 2)]).partition(), &v, BUDGET, true).unwrap();
        assert!(rep.exact());
        assert_eq!(rep.kernel_size, 1);
        assert_eq!(rep.middle_size, rep.right_size);
        assert_eq!(rep.split, Some(true));

        let d4 = groups::dihedral(4);
        let z = center(&d4, &v, BUDGET).unwrap();
        let rep = split_sequence_check(&d4, z.partition(), &v, BUDGET, false).unwrap();
        assert!(rep.exact());
        assert_eq!(rep.middle_size, rep.kernel_size * rep.right_size);
        // the center of D4 lies inside [1,1]
        assert_eq!(rep.kernel_size, 2);
        assert_eq!(rep.right_size, 1);
    }

    #[test]
    fn cocycle_text_round_trip() {
        let ext = z4_ext();
        let q = ext.quotient();
        let t = extract_cocycle(&ext, &ext.minimal_lifting()).unwrap();
        let text = write_cocycle(q.signature(), q.size(), &t);
        assert!(text.starts_with("cocycle mul:\n"));
        assert_eq!(parse_cocycle(&text, q.signature(), q.size(), 2).unwrap(), t);
        assert!(parse_cocycle("cocycle mul:\n0 0 0\n", q.signature(), 2, 2).is_err());
        assert!(parse_cocycle("cocycle foo:\n0\n", q.signature(), 2, 2).is_err());
    }

    #[test]
    fn vector_round_trip() {
        let ext = z4_ext();
        let q = ext.quotient();
        let b = ext.kernel();
        let t = extract_cocycle(&ext, &ext.minimal_lifting()).unwrap();
        let v = t.to_vector(b);
        assert_eq!(v.len(), cocycle_moduli(q.signature(), q.size(), b).len());
        assert_eq!(Cocycle::from_vector(q.signature(), q.size(), b, &v).unwrap(), t);
    }
}
