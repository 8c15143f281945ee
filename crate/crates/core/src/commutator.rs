//! Term-condition commutator via the matrix recursion, centers, and the
//! predicates built on them.
//!
//! `M(α,β)` is the subalgebra of `A⁴` generated by the matrices
//! `[a a; b b]` for `(a,b) ∈ α` and `[u v; u v]` for `(u,v) ∈ β`, stored as
//! tuples `(r, s, u, v)`. Starting from `τ⁰ = 0`, round `i+1` relates `u`
//! and `v` whenever some `[r s; u v] ∈ M(α,β)` has `(r,s) ∈ τⁱ`, and takes
//! the transitive closure. The union of the rounds is `[α,β]`.

use crate::algebra::closure::{close, ClosureOptions, Subpower};
use crate::algebra::{satisfies, FiniteAlgebra};
use crate::congruence::{all_congruences, cg, Congruence, Partition, UnionFind};
use crate::error::{Error, Result};
use crate::termlang::{CompiledTerm, Term, VarietySpec};

/// Entry order of a stored matrix `[r s; u v]`.
pub type Matrix = [usize; 4];

/// The matrix subalgebra `M(α,β) ≤ A⁴`.
#[derive(Debug)]
pub struct MatrixAlgebra {
    sub: Subpower,
}

impl MatrixAlgebra {
    pub fn len(&self) -> usize {
        self.sub.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sub.is_empty()
    }

    pub fn matrix(&self, i: usize) -> Matrix {
        let t = self.sub.tuple(i);
        [t[0] as usize, t[1] as usize, t[2] as usize, t[3] as usize]
    }

    pub fn contains(&self, m: Matrix) -> bool {
        self.sub.find(&m.map(|x| x as u16)).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = Matrix> + '_ {
        (0..self.len()).map(|i| self.matrix(i))
    }

    /// The matrices as an algebra, refused above the table-size gate.
    pub fn to_algebra(&self, base: &FiniteAlgebra) -> Result<FiniteAlgebra> {
        self.sub.materialize(base, &format!("M({})", base.name()))
    }
}

fn check_carrier(a: &FiniteAlgebra, p: &Partition) -> Result<()> {
    if p.n() != a.size() {
        return Err(Error::CarrierMismatch(p.n(), a.size()));
    }
    Ok(())
}

pub fn matrix_algebra(a: &FiniteAlgebra, alpha: &Partition, beta: &Partition, budget: usize) -> Result<MatrixAlgebra> {
    check_carrier(a, alpha)?;
    check_carrier(a, beta)?;
    let mut seeds = Vec::new();
    for (x, y) in alpha.pairs() {
        seeds.extend([x, x, y, y].map(|e| e as u16));
    }
    for (u, v) in beta.pairs() {
        seeds.extend([u, v, u, v].map(|e| e as u16));
    }
    let opts = ClosureOptions { budget, ..ClosureOptions::default() };
    Ok(MatrixAlgebra { sub: close(a, 4, &seeds, &opts)? })
}

/// One round of the recursion.
#[derive(Debug, Clone)]
pub struct Round {
    pub tau: Partition,
    /// Pairs that merged two classes, each with a witnessing matrix.
    pub witnesses: Vec<((usize, usize), Matrix)>,
}

#[derive(Debug, Clone)]
pub struct CommutatorTrace {
    /// `τ¹, τ², …` up to the fixpoint, which is repeated once.
    pub rounds: Vec<Round>,
    pub matrix_size: usize,
}

#[derive(Debug, Clone)]
pub struct Commutator {
    pub value: Congruence,
    pub trace: CommutatorTrace,
}

/// `[α,β]` with its trace.
pub fn tc_commutator(a: &FiniteAlgebra, alpha: &Partition, beta: &Partition, budget: usize) -> Result<Commutator> {
    let m = matrix_algebra(a, alpha, beta, budget)?;
    let bound = alpha.meet(beta)?;
    let mut tau = Partition::zero(a.size());
    let mut rounds: Vec<Round> = Vec::new();
    loop {
        let mut uf = UnionFind::from_partition(&tau);
        let mut witnesses = Vec::new();
        for mat in m.iter() {
            let [r, s, u, v] = mat;
            if tau.related(r, s) && uf.union(u, v) {
                witnesses.push(((u, v), mat));
            }
        }
        let next = uf.to_partition();
        let stable = next == tau;
        let at_bound = next == bound;
        rounds.push(Round { tau: next.clone(), witnesses });
        tau = next;
        // [α,β] ≤ α ∧ β, so reaching the bound is also a fixpoint.
        if stable || at_bound {
            break;
        }
    }
    Ok(Commutator {
        value: Congruence::from_partition(tau),
        trace: CommutatorTrace { rounds, matrix_size: m.len() },
    })
}

pub fn commutator(a: &FiniteAlgebra, alpha: &Partition, beta: &Partition, budget: usize) -> Result<Congruence> {
    Ok(tc_commutator(a, alpha, beta, budget)?.value)
}

/// `R¹(α,β)`: pairs `(u,v)` with some `[r r; u v] ∈ M(α,β)`, sorted.
pub fn r1(a: &FiniteAlgebra, alpha: &Partition, beta: &Partition, budget: usize) -> Result<Vec<(usize, usize)>> {
    let m = matrix_algebra(a, alpha, beta, budget)?;
    let n = a.size();
    let mut hit = vec![false; n * n];
    for [r, s, u, v] in m.iter() {
        if r == s {
            hit[u * n + v] = true;
        }
    }
    Ok((0..n * n).filter(|&i| hit[i]).map(|i| (i / n, i % n)).collect())
}

/// Pairs of `rel` that lie in `p`.
pub fn meet_relation(p: &Partition, rel: &[(usize, usize)]) -> Vec<(usize, usize)> {
    rel.iter().copied().filter(|&(x, y)| p.related(x, y)).collect()
}

pub fn is_abelian(a: &FiniteAlgebra, budget: usize) -> Result<bool> {
    let one = Partition::total(a.size());
    Ok(commutator(a, &one, &one, budget)?.is_zero())
}

pub fn is_central(a: &FiniteAlgebra, alpha: &Partition, budget: usize) -> Result<bool> {
    let one = Partition::total(a.size());
    Ok(commutator(a, alpha, &one, budget)?.is_zero())
}

pub fn is_perfect(a: &FiniteAlgebra, budget: usize) -> Result<bool> {
    let one = Partition::total(a.size());
    Ok(commutator(a, &one, &one, budget)?.is_total())
}

/// Whether `γ = [1,1]` satisfies `[γ,γ] = γ`.
pub fn is_neutral_check(a: &FiniteAlgebra, budget: usize) -> Result<bool> {
    let one = Partition::total(a.size());
    let g = commutator(a, &one, &one, budget)?;
    Ok(commutator(a, &g, &g, budget)? == g)
}

/// The center `ζ`: largest `θ` with `[θ,1] = 0`.
///
/// Joins the central principal congruences and verifies the join; if the
/// verification fails, searches the congruence lattice instead.
pub fn center(a: &FiniteAlgebra, v: &VarietySpec, budget: usize) -> Result<Congruence> {
    if let Some(i) = v.axioms.iter().position(|ax| !satisfies(a, ax)) {
        return Err(Error::NotInVariety(format!("{} fails axiom {}", a.name(), i + 1)));
    }
    let n = a.size();
    let mut z = Congruence::zero(n);
    for x in 0..n {
        for y in x + 1..n {
            if z.related(x, y) {
                continue;
            }
            let c = cg(a, &[(x, y)]);
            if is_central(a, &c, budget)? {
                z = z.join(&c)?;
            }
        }
    }
    if is_central(a, &z, budget)? {
        return Ok(z);
    }
    let mut best: Option<Congruence> = None;
    for c in all_congruences(a, 100_000)? {
        if is_central(a, &c, budget)? {
            best = match best {
                Some(b) if c.leq(&b) => Some(b),
                Some(b) if b.leq(&c) => Some(c),
                Some(_) => return Err(Error::VerificationFailed("central congruences have no maximum".into())),
                None => Some(c),
            };
        }
    }
    best.ok_or_else(|| Error::VerificationFailed("no central congruence".into()))
}

/// Outcome of checking a candidate difference term.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DifferenceTermReport {
    /// `(x,y)` with `m(x,x,y) ≠ y`.
    pub idempotence_failures: Vec<(usize, usize)>,
    /// `(α, x, y)` with `x α y` but `(x, m(x,y,y)) ∉ [α,α]`.
    pub commutator_failures: Vec<(Partition, usize, usize)>,
    pub congruences_checked: usize,
}

impl DifferenceTermReport {
    pub fn passed(&self) -> bool {
        self.idempotence_failures.is_empty() && self.commutator_failures.is_empty()
    }
}

pub fn verify_difference_term(a: &FiniteAlgebra, m: &Term, budget: usize) -> Result<DifferenceTermReport> {
    let vars: Vec<String> = ["x", "y", "z"].map(String::from).to_vec();
    let mt = CompiledTerm::compile(m, &vars)?;
    let n = a.size();
    let mut rep = DifferenceTermReport::default();
    for x in 0..n {
        for y in 0..n {
            if mt.eval(a, &[x, x, y]) != y {
                rep.idempotence_failures.push((x, y));
            }
        }
    }
    let cons = all_congruences(a, 100_000)?;
    rep.congruences_checked = cons.len();
    for alpha in cons {
        let aa = commutator(a, &alpha, &alpha, budget)?;
        for (x, y) in alpha.pairs() {
            if !aa.related(x, mt.eval(a, &[x, y, y])) {
                rep.commutator_failures.push((alpha.partition().clone(), x, y));
            }
        }
    }
    Ok(rep)
}
