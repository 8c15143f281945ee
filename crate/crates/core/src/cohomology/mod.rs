//! Second cohomology of central data and the five-term sequence.
//!
//! Cocycle tables live in the ambient group `⊕_{f, q̄} B`, with entries in
//! symbol order and argument tuples in lex order. Compatibility with a
//! variety is linear in `T`: evaluating an axiom in `B ⊗^T Q` at `(b̄, q̄)`
//! gives the `B`-evaluation of the axiom plus, for every internal node of the
//! term tree, `T` at that node pushed to the root along the `r_{f,i}` maps.
//! `Z²` is the kernel of those equations, computed as a lattice.

use num_bigint::BigUint;

use crate::abgroup::{combine, element_order, LinearMap, Quotient, Subgroup};
use crate::algebra::{
    first_failing_axiom, for_each_tuple, quotient, FiniteAlgebra, FreePresentation,
};
use crate::commutator::commutator;
use crate::congruence::Partition;
use crate::error::{Error, Result};
use crate::extension::{
    basic_construction, coboundary_from_witness, cocycle_moduli, extract_cocycle, CentralExtension, Cocycle,
    KernelAlgebra, Lifting,
};
use crate::report::{Report, Reportable};
use crate::termlang::{Term, VarietySpec};

mod checks;

pub use checks::*;

const BATCH: usize = 32;

fn tuple_index(n: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &x| acc * n + x)
}

/// Start of each symbol's block of entries in a cocycle table.
fn entry_offsets(a: &FiniteAlgebra) -> Vec<usize> {
    let sig = a.signature();
    let mut off = Vec::with_capacity(sig.len() + 1);
    let mut acc = 0;
    for s in 0..sig.len() {
        off.push(acc);
        acc += a.size().pow(sig.arity(s) as u32);
    }
    off.push(acc);
    off
}

fn repeat_moduli(m: &[u64], times: usize) -> Vec<u64> {
    m.iter().copied().cycle().take(m.len() * times).collect()
}

fn ensure_in_variety(a: &FiniteAlgebra, v: &VarietySpec) -> Result<()> {
    if !a.signature().same_symbols(&v.signature) {
        return Err(Error::SignatureMismatch(format!("{} vs {}", a.signature(), v.signature)));
    }
    match first_failing_axiom(a, &v.axioms) {
        Some(i) => Err(Error::NotInVariety(format!("{} fails {}", a.name(), v.axioms[i].display(&v.signature)))),
        None => Ok(()),
    }
}

// ---------------------------------------------------------------------------
// Sparse linear systems over a block-structured ambient group

/// `± M · x[entry]`, with `M = id` when absent.
#[derive(Clone, Copy)]
struct Coef<'a> {
    entry: usize,
    map: Option<&'a LinearMap>,
    negate: bool,
}

/// Intersects a subgroup of `⊕ (block)` with kernels of vector equations,
/// batching violated equations.
struct Solver<'a> {
    ambient: Vec<u64>,
    block: Vec<u64>,
    group: Subgroup,
    gens: Vec<Vec<u64>>,
    batch: Vec<Vec<Coef<'a>>>,
}

impl<'a> Solver<'a> {
    fn new(start: Subgroup, block: &[u64]) -> Self {
        let gens = start.generators();
        Solver { ambient: start.moduli().to_vec(), block: block.to_vec(), group: start, gens, batch: Vec::new() }
    }

    fn eval(&self, eq: &[Coef], g: &[u64]) -> Vec<u64> {
        let d = self.block.len();
        let mut acc = vec![0u64; d];
        for c in eq {
            let x = &g[c.entry * d..(c.entry + 1) * d];
            let v = match c.map {
                Some(m) => m.apply(x),
                None => x.to_vec(),
            };
            for j in 0..d {
                let m = self.block[j];
                let vj = v[j] % m;
                acc[j] = if c.negate { (acc[j] + m - vj) % m } else { (acc[j] + vj) % m };
            }
        }
        acc
    }

    fn push(&mut self, eq: Vec<Coef<'a>>) -> Result<()> {
        if self.block.is_empty() || eq.is_empty() {
            return Ok(());
        }
        if self.gens.iter().any(|g| self.eval(&eq, g).iter().any(|&x| x != 0)) {
            self.batch.push(eq);
            if self.batch.len() >= BATCH {
                self.flush()?;
            }
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<()> {
        if self.batch.is_empty() {
            return Ok(());
        }
        let orders: Vec<u64> = self.gens.iter().map(|g| element_order(&self.ambient, g)).collect();
        let to = repeat_moduli(&self.block, self.batch.len());
        let rows = self.gens.iter().map(|g| self.batch.iter().flat_map(|eq| self.eval(eq, g)).collect()).collect();
        let map = LinearMap::new(&orders, &to, rows)?;
        let kernel: Vec<Vec<u64>> = map
            .kernel()
            .generators()
            .iter()
            .map(|k| {
                let terms: Vec<(i128, &[u64])> =
                    k.iter().zip(&self.gens).map(|(&c, g)| (c as i128, g.as_slice())).collect();
                combine(&self.ambient, &terms)
            })
            .collect();
        self.group = Subgroup::generated(&self.ambient, &kernel);
        self.gens = self.group.generators();
        self.batch.clear();
        Ok(())
    }

    fn finish(mut self) -> Result<Subgroup> {
        self.flush()?;
        Ok(self.group)
    }
}

/// A term tree flattened in post-order with path maps to the root.
struct LinNode {
    sym: Option<usize>,
    var: usize,
    children: Vec<usize>,
    path: LinearMap,
}

fn linearize(t: &Term, vars: &[String], b: &KernelAlgebra) -> Result<Vec<LinNode>> {
    fn go(t: &Term, vars: &[String], b: &KernelAlgebra, path: LinearMap, out: &mut Vec<LinNode>) -> Result<usize> {
        match t {
            Term::Var(x) => {
                let var = vars.iter().position(|v| v == x).ok_or_else(|| Error::MissingVariable(x.clone()))?;
                out.push(LinNode { sym: None, var, children: vec![], path });
                Ok(out.len() - 1)
            }
            Term::App(f, args) => {
                let mut children = Vec::with_capacity(args.len());
                for (i, arg) in args.iter().enumerate() {
                    let p = b.r(*f, i).then(&path)?;
                    children.push(go(arg, vars, b, p, out)?);
                }
                out.push(LinNode { sym: Some(*f), var: 0, children, path });
                Ok(out.len() - 1)
            }
        }
    }
    let m = b.moduli();
    let id = LinearMap::from_fn(m, m, |x| x.to_vec())?;
    let mut out = Vec::new();
    go(t, vars, b, id, &mut out)?;
    Ok(out)
}

fn side_coefs<'a>(
    nodes: &'a [LinNode],
    q: &FiniteAlgebra,
    offsets: &[usize],
    vals: &[usize],
    negate: bool,
    qv: &mut Vec<usize>,
    out: &mut Vec<Coef<'a>>,
) {
    qv.clear();
    let mut args = Vec::new();
    for n in nodes {
        match n.sym {
            None => qv.push(vals[n.var]),
            Some(f) => {
                args.clear();
                args.extend(n.children.iter().map(|&c| qv[c]));
                out.push(Coef { entry: offsets[f] + tuple_index(q.size(), &args), map: Some(&n.path), negate });
                qv.push(q.apply(f, &args));
            }
        }
    }
}

/// Lattice of `V`-compatible cocycles, optionally normalized at `zero`.
fn solve_cocycles(q: &FiniteAlgebra, b: &KernelAlgebra, v: &VarietySpec, start: Subgroup, normal_at: Option<usize>) -> Result<Subgroup> {
    let offsets = entry_offsets(q);
    let mut solver = Solver::new(start, b.moduli());
    let sig = q.signature();
    let mut trees = Vec::with_capacity(v.axioms.len());
    for ax in &v.axioms {
        trees.push((linearize(&ax.lhs, &ax.vars, b)?, linearize(&ax.rhs, &ax.vars, b)?, ax.vars.len()));
    }
    if let Some(z) = normal_at {
        for s in 0..sig.len() {
            let entry = offsets[s] + tuple_index(q.size(), &vec![z; sig.arity(s)]);
            solver.push(vec![Coef { entry, map: None, negate: false }])?;
        }
    }
    let mut qv = Vec::new();
    for (lhs, rhs, nvars) in &trees {
        let mut err = None;
        for_each_tuple(q.size(), *nvars, |vals| {
            if err.is_some() {
                return;
            }
            let mut eq = Vec::new();
            side_coefs(lhs, q, &offsets, vals, false, &mut qv, &mut eq);
            side_coefs(rhs, q, &offsets, vals, true, &mut qv, &mut eq);
            if let Err(e) = solver.push(eq) {
                err = Some(e);
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    solver.finish()
}

// ---------------------------------------------------------------------------
// Cocycles, coboundaries, cohomology

/// `Z²` or `B²` inside the ambient group of all cocycle tables.
#[derive(Debug, Clone)]
pub struct CocycleGroup {
    ambient: Vec<u64>,
    group: Subgroup,
    /// Members with `T_f(0′,…,0′) = 0`, and the idempotent `0′` used.
    normalized: Option<(usize, Subgroup)>,
}

impl CocycleGroup {
    pub fn ambient(&self) -> &[u64] {
        &self.ambient
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.group
    }

    pub fn order(&self) -> BigUint {
        self.group.order()
    }

    pub fn normalized(&self) -> Option<(usize, &Subgroup)> {
        self.normalized.as_ref().map(|(z, s)| (*z, s))
    }

    pub fn normalized_order(&self) -> Option<BigUint> {
        self.normalized.as_ref().map(|(_, s)| s.order())
    }

    pub fn contains(&self, t: &Cocycle, b: &KernelAlgebra) -> bool {
        self.group.contains(&t.to_vector(b))
    }

    /// Every member as a cocycle, sorted by coordinate vector.
    pub fn members(&self, q: &FiniteAlgebra, b: &KernelAlgebra, limit: usize) -> Result<Vec<Cocycle>> {
        self.group
            .elements(limit)?
            .iter()
            .map(|v| Cocycle::from_vector(q.signature(), q.size(), b, v))
            .collect()
    }
}

/// All `V`-compatible cocycles for `(Q, B)`; with `normalize`, also those
/// vanishing at the first idempotent of `Q` (when one exists).
pub fn cocycle_group(q: &FiniteAlgebra, b: &KernelAlgebra, v: &VarietySpec, normalize: bool) -> Result<CocycleGroup> {
    ensure_in_variety(q, v)?;
    ensure_in_variety(b.algebra(), v)?;
    let ambient = cocycle_moduli(q.signature(), q.size(), b);
    let group = solve_cocycles(q, b, v, Subgroup::full(&ambient), None)?;
    let normalized = match (normalize, crate::algebra::find_idempotents(q).first()) {
        (true, Some(&z)) => Some((z, normalized_cocycles(q, b, &group, z)?)),
        _ => None,
    };
    Ok(CocycleGroup { ambient, group, normalized })
}

fn normalized_cocycles(q: &FiniteAlgebra, b: &KernelAlgebra, z2: &Subgroup, zero: usize) -> Result<Subgroup> {
    let offsets = entry_offsets(q);
    let sig = q.signature();
    let mut solver = Solver::new(z2.clone(), b.moduli());
    for s in 0..sig.len() {
        let entry = offsets[s] + tuple_index(q.size(), &vec![zero; sig.arity(s)]);
        solver.push(vec![Coef { entry, map: None, negate: false }])?;
    }
    solver.finish()
}

/// The linear map `B^Q → cocycles`, `h ↦ G_h`.
pub fn coboundary_map(q: &FiniteAlgebra, b: &KernelAlgebra) -> Result<LinearMap> {
    let d = b.moduli().len();
    let from = repeat_moduli(b.moduli(), q.size());
    let to = cocycle_moduli(q.signature(), q.size(), b);
    LinearMap::from_fn(&from, &to, |x| {
        let h: Vec<usize> = x.chunks(d.max(1)).map(|c| b.element(c)).collect();
        coboundary_from_witness(&h, q, b).to_vector(b)
    })
}

/// `B² = {G_h : h ∈ B^Q}`.
pub fn coboundary_group(q: &FiniteAlgebra, b: &KernelAlgebra) -> Result<CocycleGroup> {
    let map = coboundary_map(q, b)?;
    let group = map.image(&Subgroup::full(map.from_moduli()));
    Ok(CocycleGroup { ambient: map.to_moduli().to_vec(), group, normalized: None })
}

/// Brute-force oracle: every table whose basic construction satisfies the
/// axioms, enumerated lex over (symbol, argument tuple, value).
pub fn brute_force_cocycles(q: &FiniteAlgebra, b: &KernelAlgebra, v: &VarietySpec, budget: usize) -> Result<Vec<Cocycle>> {
    let sig = q.signature();
    let sizes: Vec<usize> = (0..sig.len()).map(|s| q.size().pow(sig.arity(s) as u32)).collect();
    let entries: usize = sizes.iter().sum();
    let space = BigUint::from(b.size()).pow(entries as u32);
    if space > BigUint::from(budget) {
        return Err(Error::BudgetExceeded(budget));
    }
    let mut out = Vec::new();
    let mut err = None;
    for_each_tuple(b.size(), entries, |flat| {
        if err.is_some() {
            return;
        }
        let mut rest = flat;
        let tables: Vec<Vec<usize>> = sizes
            .iter()
            .map(|&n| {
                let (head, tail) = rest.split_at(n);
                rest = tail;
                head.to_vec()
            })
            .collect();
        let t = match Cocycle::from_tables(sig, q.size(), b.size(), tables) {
            Ok(t) => t,
            Err(e) => {
                err = Some(e);
                return;
            }
        };
        match basic_construction(b, q, &t) {
            Ok((alg, _)) if first_failing_axiom(&alg, &v.axioms).is_none() => out.push(t),
            Ok(_) => {}
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// `H²(Q, B) = Z² / B²` with coordinates on classes.
#[derive(Debug, Clone)]
pub struct Cohomology {
    q: FiniteAlgebra,
    b: KernelAlgebra,
    z2: CocycleGroup,
    b2: CocycleGroup,
    coboundary: LinearMap,
    quotient: Quotient,
}

/// Computes `Z²`, `B²` (with `B² ⊆ Z²` verified) and the quotient.
pub fn h2(q: &FiniteAlgebra, b: &KernelAlgebra, v: &VarietySpec) -> Result<Cohomology> {
    let z2 = cocycle_group(q, b, v, true)?;
    let coboundary = coboundary_map(q, b)?;
    let b2 = CocycleGroup {
        ambient: z2.ambient.clone(),
        group: coboundary.image(&Subgroup::full(coboundary.from_moduli())),
        normalized: None,
    };
    if !z2.group.contains_all(&b2.group) {
        return Err(Error::IncompatibleResult("a coboundary is not compatible".into()));
    }
    let quotient = Quotient::new(&z2.group, &b2.group)?;
    Ok(Cohomology { q: q.clone(), b: b.clone(), z2, b2, coboundary, quotient })
}

impl Cohomology {
    pub fn q(&self) -> &FiniteAlgebra {
        &self.q
    }

    pub fn b(&self) -> &KernelAlgebra {
        &self.b
    }

    pub fn z2(&self) -> &CocycleGroup {
        &self.z2
    }

    pub fn b2(&self) -> &CocycleGroup {
        &self.b2
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    pub fn coboundary_map(&self) -> &LinearMap {
        &self.coboundary
    }

    pub fn order(&self) -> BigUint {
        self.quotient.order()
    }

    pub fn invariant_factors(&self) -> Vec<u64> {
        self.quotient.invariant_factors()
    }

    pub fn is_trivial(&self) -> bool {
        self.quotient.is_trivial()
    }

    pub fn is_cocycle(&self, t: &Cocycle) -> bool {
        self.z2.contains(t, &self.b)
    }

    pub fn is_coboundary(&self, t: &Cocycle) -> bool {
        self.b2.contains(t, &self.b)
    }

    /// Coordinates of `[T]`; fails when `T` is not compatible.
    pub fn class_of(&self, t: &Cocycle) -> Result<Vec<u64>> {
        let v = t.to_vector(&self.b);
        if !self.z2.group.contains(&v) {
            return Err(Error::VerificationFailed("table is not a compatible cocycle".into()));
        }
        self.quotient.coords(&v)
    }

    pub fn same_class(&self, s: &Cocycle, t: &Cocycle) -> bool {
        self.is_coboundary(&s.sub(t, &self.b))
    }

    /// Some `h : Q → B` with `G_h = T`, when `T` is a coboundary.
    pub fn coboundary_witness(&self, t: &Cocycle) -> Option<Vec<usize>> {
        let x = self.coboundary.solve(&t.to_vector(&self.b))?;
        let d = self.b.moduli().len();
        if d == 0 {
            return Some(vec![self.b.zero(); self.q.size()]);
        }
        Some(x.chunks(d).map(|c| self.b.element(c)).collect())
    }

    /// A cocycle in the class with coordinates `y`.
    pub fn representative(&self, y: &[u64]) -> Cocycle {
        Cocycle::from_vector(self.q.signature(), self.q.size(), &self.b, &self.quotient.rep(y))
            .expect("quotient representatives have ambient length")
    }

    /// Class coordinates in lex order with one representative each.
    pub fn representatives(&self, limit: usize) -> Result<Vec<(Vec<u64>, Cocycle)>> {
        Ok(self.quotient.classes(limit)?.into_iter().map(|y| {
            let t = self.representative(&y);
            (y, t)
        }).collect())
    }

    /// Whether every class has a representative vanishing at the idempotent.
    pub fn normalized_reaches_all(&self) -> Option<bool> {
        self.z2.normalized.as_ref().map(|(_, n)| n.join(&self.b2.group) == self.z2.group)
    }
}

impl Reportable for Cohomology {
    fn write_to(&self, r: &mut Report) {
        r.list("invariant_factors", &self.invariant_factors());
        r.field("order", self.order());
        r.field("z2_order", self.z2.order());
        r.field("b2_order", self.b2.order());
        if let Some(n) = self.z2.normalized_order() {
            r.field("z2_normalized_order", n);
        }
    }
}

// ---------------------------------------------------------------------------
// Hom groups

/// Homomorphisms `S → E` as a subgroup of `E^S`.
#[derive(Debug, Clone)]
pub struct HomGroup {
    src_size: usize,
    ambient: Vec<u64>,
    group: Subgroup,
}

/// `Hom(S, E)`; with `zero = Some(z)` only maps sending `z` to `0`.
pub fn hom_group(src: &FiniteAlgebra, e: &KernelAlgebra, zero: Option<usize>) -> Result<HomGroup> {
    if !src.signature().same_symbols(e.signature()) {
        return Err(Error::SignatureMismatch(format!("{} vs {}", src.signature(), e.signature())));
    }
    let ambient = repeat_moduli(e.moduli(), src.size());
    let mut solver = Solver::new(Subgroup::full(&ambient), e.moduli());
    if let Some(z) = zero {
        solver.push(vec![Coef { entry: z, map: None, negate: false }])?;
    }
    let sig = src.signature();
    for s in 0..sig.len() {
        let k = sig.arity(s);
        let mut err = None;
        for_each_tuple(src.size(), k, |args| {
            if err.is_some() {
                return;
            }
            let mut eq = vec![Coef { entry: src.apply(s, args), map: None, negate: false }];
            eq.extend(args.iter().enumerate().map(|(i, &x)| Coef { entry: x, map: Some(e.r(s, i)), negate: true }));
            if let Err(er) = solver.push(eq) {
                err = Some(er);
            }
        });
        if let Some(er) = err {
            return Err(er);
        }
    }
    Ok(HomGroup { src_size: src.size(), ambient, group: solver.finish()? })
}

impl HomGroup {
    pub fn ambient(&self) -> &[u64] {
        &self.ambient
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.group
    }

    pub fn order(&self) -> BigUint {
        self.group.order()
    }

    pub fn invariant_factors(&self) -> Vec<u64> {
        Quotient::new(&self.group, &Subgroup::zero(&self.ambient)).map(|q| q.invariant_factors()).unwrap_or_default()
    }

    pub fn to_vector(e: &KernelAlgebra, map: &[usize]) -> Vec<u64> {
        map.iter().flat_map(|&x| e.coords(x).iter().copied()).collect()
    }

    pub fn to_map(&self, e: &KernelAlgebra, v: &[u64]) -> Vec<usize> {
        let d = e.moduli().len();
        if d == 0 {
            return vec![e.zero(); self.src_size];
        }
        v.chunks(d).map(|c| e.element(c)).collect()
    }

    pub fn contains(&self, e: &KernelAlgebra, map: &[usize]) -> bool {
        map.len() == self.src_size && self.group.contains(&Self::to_vector(e, map))
    }

    pub fn maps(&self, e: &KernelAlgebra, limit: usize) -> Result<Vec<Vec<usize>>> {
        Ok(self.group.elements(limit)?.iter().map(|v| self.to_map(e, v)).collect())
    }
}

// ---------------------------------------------------------------------------
// Inflation, restriction, transgression

/// Output block `j` is `Σ ± (input block i)` over `out[j]`.
fn block_map(block: &[u64], n_in: usize, out: &[Vec<(usize, bool)>]) -> Result<LinearMap> {
    let d = block.len();
    let from = repeat_moduli(block, n_in);
    let to = repeat_moduli(block, out.len());
    let mut rows = vec![vec![0u64; to.len()]; from.len()];
    for (j, terms) in out.iter().enumerate() {
        for &(i, neg) in terms {
            for c in 0..d {
                let m = block[c];
                let cell = &mut rows[i * d + c][j * d + c];
                *cell = if neg { (*cell + m - 1) % m } else { (*cell + 1) % m };
            }
        }
    }
    LinearMap::new(&from, &to, rows)
}

fn ensure_onto(pi: &[usize], q_size: usize) -> Result<()> {
    let mut hit = vec![false; q_size];
    for &y in pi {
        if y >= q_size {
            return Err(Error::NotSurjective);
        }
        hit[y] = true;
    }
    if hit.iter().all(|&h| h) {
        Ok(())
    } else {
        Err(Error::NotSurjective)
    }
}

/// Level at which inflation acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// `Hom(Q,E) → Hom(A,E)`, `φ ↦ φ∘π`.
    Hom,
    /// Cocycle tables over `Q` to those over `A`, `T ↦ T∘π`.
    H2,
}

/// Inflation along a surjection `π : A → Q`, on ambient groups.
pub fn inflation(pi: &[usize], q: &FiniteAlgebra, a: &FiniteAlgebra, e: &KernelAlgebra, level: Level) -> Result<LinearMap> {
    ensure_onto(pi, q.size())?;
    if pi.len() != a.size() {
        return Err(Error::CarrierMismatch(pi.len(), a.size()));
    }
    match level {
        Level::Hom => block_map(e.moduli(), q.size(), &pi.iter().map(|&y| vec![(y, false)]).collect::<Vec<_>>()),
        Level::H2 => {
            let sig = a.signature();
            let qoff = entry_offsets(q);
            let mut out = Vec::new();
            let mut img = Vec::new();
            for s in 0..sig.len() {
                for_each_tuple(a.size(), sig.arity(s), |args| {
                    img.clear();
                    img.extend(args.iter().map(|&x| pi[x]));
                    out.push(vec![(qoff[s] + tuple_index(q.size(), &img), false)]);
                });
            }
            block_map(e.moduli(), qoff[sig.len()], &out)
        }
    }
}

/// `ř(φ)(b) = φ(ψ⁻¹(b,q)) − φ(ψ⁻¹(0,q))` at `q = 0`, as a map `E^A → E^B`.
pub fn restriction_map(ext: &CentralExtension, l: &Lifting, e: &KernelAlgebra) -> Result<LinearMap> {
    restriction_at(ext, l, e, 0)
}

fn restriction_at(ext: &CentralExtension, l: &Lifting, e: &KernelAlgebra, q0: usize) -> Result<LinearMap> {
    let nq = ext.quotient().size();
    let inv = ext.psi_inverse(l);
    let b = ext.kernel();
    let base = inv[b.zero() * nq + q0];
    let out: Vec<Vec<(usize, bool)>> = (0..b.size()).map(|x| vec![(inv[x * nq + q0], false), (base, true)]).collect();
    block_map(e.moduli(), ext.algebra().size(), &out)
}

/// Restriction with its independence of the base point verified on every
/// generator of `Hom(A, E)`.
pub fn restriction(ext: &CentralExtension, e: &KernelAlgebra) -> Result<LinearMap> {
    let l = ext.minimal_lifting();
    let homs = hom_group(ext.algebra(), e, None)?;
    let r0 = restriction_at(ext, &l, e, 0)?;
    for q0 in 1..ext.quotient().size() {
        let rq = restriction_at(ext, &l, e, q0)?;
        for g in homs.group.generators() {
            if rq.apply(&g) != r0.apply(&g) {
                return Err(Error::IncompatibleResult(format!("restriction depends on the base point {q0}")));
            }
        }
    }
    Ok(r0)
}

/// `φ ↦ φ∘T` from `E^B` to cocycle tables over `Q` with values in `E`.
pub fn transgression_map(t: &Cocycle, q: &FiniteAlgebra, b_size: usize, e: &KernelAlgebra) -> Result<LinearMap> {
    let out: Vec<Vec<(usize, bool)>> = t.tables().iter().flatten().map(|&x| vec![(x, false)]).collect();
    if out.len() != entry_offsets(q)[q.signature().len()] {
        return Err(Error::Format("cocycle does not match the quotient".into()));
    }
    block_map(e.moduli(), b_size, &out)
}

/// `δ(φ, [T]) = [φ∘T]` as class coordinates in `H²(Q, E)`.
pub fn transgression(phi: &[usize], t: &Cocycle, hq: &Cohomology) -> Result<Vec<u64>> {
    let s = t.push(phi);
    if !hq.is_cocycle(&s) {
        return Err(Error::IncompatibleResult("φ∘T is not a compatible cocycle".into()));
    }
    hq.class_of(&s)
}

// ---------------------------------------------------------------------------
// The five-term sequence

/// Verdicts for `0 → Hom(Q,E) → Hom(A,E) → Hom(B,E) → H²(Q,E) → H²(A,E)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HsReport {
    /// Orders of the five groups in sequence order.
    pub orders: [BigUint; 5],
    pub invariant_factors: [Vec<u64>; 5],
    /// Composites `0→σ̌`, `ř∘σ̌`, `δ∘ř`, `σ̌∘δ` vanish.
    pub complex: [bool; 4],
    /// Exactness at `Hom(Q,E)`, `Hom(A,E)`, `Hom(B,E)`, `H²(Q,E)`.
    pub exact: [bool; 4],
    pub restriction_independent: bool,
    pub a_has_idempotent: bool,
    pub presentation_idempotent: Option<bool>,
}

impl HsReport {
    pub fn is_complex(&self) -> bool {
        self.complex.iter().all(|&c| c)
    }

    pub fn fully_exact(&self) -> bool {
        self.exact.iter().all(|&c| c)
    }
}

impl Reportable for HsReport {
    fn write_to(&self, r: &mut Report) {
        let names = ["hom_q_e", "hom_a_e", "hom_b_e", "h2_q_e", "h2_a_e"];
        for (i, n) in names.iter().enumerate() {
            r.field(&format!("order.{n}"), &self.orders[i]);
            r.list(&format!("invariant_factors.{n}"), &self.invariant_factors[i]);
        }
        for (i, c) in self.complex.iter().enumerate() {
            r.field(&format!("complex_{}", i + 1), c);
        }
        for (i, c) in self.exact.iter().enumerate() {
            r.field(&format!("exact_at_{}", i + 1), c);
        }
        r.field("restriction_independent", self.restriction_independent);
        r.field("a_has_idempotent", self.a_has_idempotent);
        match self.presentation_idempotent {
            Some(b) => r.field("presentation_idempotent", b),
            None => r.field("presentation_idempotent", "unchecked"),
        };
    }
}

fn same(s: &Subgroup, t: &Subgroup) -> bool {
    s.contains_all(t) && t.contains_all(s)
}

/// Whether `F/[θ,1]` has an idempotent for a presentation `F/θ ≅ Q`.
pub fn presentation_idempotent(p: &FreePresentation, budget: usize) -> Result<bool> {
    let f = p.f();
    let c = commutator(f, p.theta.partition(), &Partition::total(f.size()), budget)?;
    let (fp, _) = quotient(f, c.partition())?;
    Ok(!crate::algebra::find_idempotents(&fp).is_empty())
}

/// Builds all five groups and maps and checks the complex and exactness
/// conditions at every position.
pub fn hochschild_serre_check(
    ext: &CentralExtension,
    e: &KernelAlgebra,
    v: &VarietySpec,
    presentation_idem: Option<bool>,
) -> Result<HsReport> {
    let q = ext.quotient();
    let a = ext.algebra();
    let b = ext.kernel();
    let pi = ext.projection();
    let l = ext.minimal_lifting();
    let t = extract_cocycle(ext, &l)?;

    let g1 = hom_group(q, e, None)?;
    let g2 = hom_group(a, e, None)?;
    let g3 = hom_group(b.algebra(), e, Some(b.zero()))?;
    let hq = h2(q, e, v)?;
    let ha = h2(a, e, v)?;

    let s1 = inflation(pi, q, a, e, Level::Hom)?;
    let r = restriction_at(ext, &l, e, 0)?;
    let mut independent = true;
    for q0 in 1..q.size() {
        let rq = restriction_at(ext, &l, e, q0)?;
        independent &= g2.group.generators().iter().all(|g| rq.apply(g) == r.apply(g));
    }
    let delta = transgression_map(&t, q, b.size(), e)?;
    let s2 = inflation(pi, q, a, e, Level::H2)?;

    let z2q = hq.z2().subgroup();
    let b2q = hq.b2().subgroup();
    let b2a = ha.b2().subgroup();
    if !z2q.contains_all(&delta.image(&g3.group)) {
        return Err(Error::IncompatibleResult("transgression leaves Z²".into()));
    }

    let im1 = s1.image(&g1.group);
    let im2 = r.image(&g2.group);
    let im3 = delta.image(&g3.group);
    let complex = [
        s1.apply(&vec![0; s1.from_moduli().len()]).iter().all(|&x| x == 0),
        r.image(&im1).is_zero(),
        b2q.contains_all(&delta.image(&im2)),
        b2a.contains_all(&s2.image(&im3)),
    ];
    let exact = [
        g1.group.intersect(&s1.kernel()).is_zero(),
        same(&im1, &g2.group.intersect(&r.kernel())),
        same(&im2, &g3.group.intersect(&delta.preimage(b2q))),
        same(&im3.join(b2q), &z2q.intersect(&s2.preimage(b2a))),
    ];
    Ok(HsReport {
        orders: [g1.order(), g2.order(), g3.order(), hq.order(), ha.order()],
        invariant_factors: [
            g1.invariant_factors(),
            g2.invariant_factors(),
            g3.invariant_factors(),
            hq.invariant_factors(),
            ha.invariant_factors(),
        ],
        complex,
        exact,
        restriction_independent: independent,
        a_has_idempotent: !crate::algebra::find_idempotents(a).is_empty(),
        presentation_idempotent: presentation_idem,
    })
}
