//! Finite algebras given by operation tables.

pub mod closure;
pub mod free;
pub mod groups;
pub mod homs;
pub mod io;

use crate::congruence::{Congruence, Partition};
use crate::error::{Error, Result};
use crate::termlang::{CompiledTerm, Identity, Signature};

pub use closure::{ClosureOptions, Origin, Strategy, Subpower};
pub use free::{free_algebra_hsp, presentation_of, FreeAlgebra, FreePresentation};
pub use homs::{enumerate_homs, find_isomorphism, is_homomorphism, search_homs, HomSearch, Homomorphism};

/// Default element budget for closures.
pub const DEFAULT_BUDGET: usize = 2_000_000;

/// A finite algebra on `{0..n-1}` with one table per signature symbol.
///
/// Tables are stored in row-major lex order of argument tuples, the first
/// argument being most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    sig: Signature,
    size: usize,
    tables: Vec<Vec<u32>>,
    labels: Option<Vec<String>>,
}

impl FiniteAlgebra {
    /// Validates table shapes and ranges.
    pub fn new(name: &str, sig: Signature, size: usize, tables: Vec<Vec<u32>>) -> Result<Self> {
        if size == 0 {
            return Err(Error::MalformedAlgebra("empty universe".into()));
        }
        if size > u16::MAX as usize + 1 {
            return Err(Error::MalformedAlgebra(format!("universe of size {size} too large")));
        }
        if tables.len() != sig.len() {
            return Err(Error::MalformedAlgebra(format!(
                "{} tables for {} symbols",
                tables.len(),
                sig.len()
            )));
        }
        for (s, t) in tables.iter().enumerate() {
            let want = size
                .checked_pow(sig.arity(s) as u32)
                .ok_or_else(|| Error::MalformedAlgebra("table too large".into()))?;
            if t.len() != want {
                return Err(Error::MalformedAlgebra(format!(
                    "table `{}` has {} entries, expected {want}",
                    sig.name(s),
                    t.len()
                )));
            }
            if let Some(bad) = t.iter().find(|&&v| v as usize >= size) {
                return Err(Error::MalformedAlgebra(format!(
                    "table `{}` has out-of-range entry {bad}",
                    sig.name(s)
                )));
            }
        }
        Ok(FiniteAlgebra { name: name.to_string(), sig, size, tables, labels: None })
    }

    /// Builds an algebra by evaluating `f(sym, args)` on every tuple.
    pub fn from_fn(
        name: &str,
        sig: Signature,
        size: usize,
        mut f: impl FnMut(usize, &[usize]) -> usize,
    ) -> Result<Self> {
        let mut tables = Vec::with_capacity(sig.len());
        for s in 0..sig.len() {
            let k = sig.arity(s);
            let mut t = Vec::new();
            for_each_tuple(size, k, |args| t.push(f(s, args) as u32));
            tables.push(t);
        }
        Self::new(name, sig, size, tables)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: &str) {
        self.name = name.to_string();
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn table(&self, sym: usize) -> &[u32] {
        &self.tables[sym]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::MalformedAlgebra("label count differs from size".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Label of `x`, or its index.
    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    #[inline]
    pub fn apply(&self, sym: usize, args: &[usize]) -> usize {
        let mut idx = 0usize;
        for &a in args {
            idx = idx * self.size + a;
        }
        self.tables[sym][idx] as usize
    }

    /// Replaces the signature by one with the same arities and new names.
    pub fn rename_symbols(&self, names: &[&str]) -> Result<Self> {
        if names.len() != self.sig.len() {
            return Err(Error::SignatureMismatch("name count".into()));
        }
        let pairs: Vec<(&str, usize)> =
            names.iter().enumerate().map(|(i, n)| (*n, self.sig.arity(i))).collect();
        let mut out = self.clone();
        out.sig = Signature::from_pairs(&pairs)?;
        Ok(out)
    }

    /// Adds a new symbol with the given table.
    pub fn with_operation(&self, name: &str, arity: usize, table: Vec<u32>) -> Result<Self> {
        let mut sig = self.sig.clone();
        sig.push(name, arity)?;
        let mut tables = self.tables.clone();
        tables.push(table);
        let mut out = Self::new(&self.name, sig, self.size, tables)?;
        out.labels = self.labels.clone();
        Ok(out)
    }

    /// Replaces the signature, keeping tables; arities must agree.
    pub fn with_signature(&self, sig: &Signature) -> Result<Self> {
        if !self.sig.same_symbols(sig) {
            return Err(Error::SignatureMismatch(format!("{} vs {}", self.sig, sig)));
        }
        let mut out = self.clone();
        out.sig = sig.clone();
        Ok(out)
    }

    /// The induced subalgebra on a closed subset given in increasing order.
    pub fn restrict(&self, name: &str, elems: &[usize]) -> Result<Self> {
        let mut index = vec![usize::MAX; self.size];
        for (i, &e) in elems.iter().enumerate() {
            index[e] = i;
        }
        let mut failed = false;
        let out = Self::from_fn(name, self.sig.clone(), elems.len(), |s, args| {
            let orig: Vec<usize> = args.iter().map(|&a| elems[a]).collect();
            let v = index[self.apply(s, &orig)];
            if v == usize::MAX {
                failed = true;
                0
            } else {
                v
            }
        })?;
        if failed {
            return Err(Error::VerificationFailed("subset is not closed".into()));
        }
        Ok(out)
    }
}

/// Calls `f` on every tuple of `{0..n-1}^k` in lex order.
pub fn for_each_tuple(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut t = vec![0usize; k];
    loop {
        f(&t);
        let mut j = k;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            t[j] += 1;
            if t[j] < n {
                break;
            }
            t[j] = 0;
        }
    }
}

/// Direct product with projections; `(a,b)` is encoded as `a·|B| + b`.
pub fn direct_product(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
) -> Result<(FiniteAlgebra, Vec<usize>, Vec<usize>)> {
    if !a.sig.same_symbols(&b.sig) {
        return Err(Error::SignatureMismatch(format!("{} vs {}", a.sig, b.sig)));
    }
    let nb = b.size;
    let name = format!("{}x{}", a.name, b.name);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let p = FiniteAlgebra::from_fn(&name, a.sig.clone(), a.size * nb, |s, args| {
        xs.clear();
        ys.clear();
        for &v in args {
            xs.push(v / nb);
            ys.push(v % nb);
        }
        a.apply(s, &xs) * nb + b.apply(s, &ys)
    })?;
    let p1 = (0..p.size).map(|v| v / nb).collect();
    let p2 = (0..p.size).map(|v| v % nb).collect();
    Ok((p, p1, p2))
}

/// A subalgebra with its inclusion map.
#[derive(Debug, Clone)]
pub struct Subalgebra {
    pub algebra: FiniteAlgebra,
    pub inclusion: Vec<usize>,
}

/// Least subuniverse of `p` containing `seeds`, in discovery order.
pub fn subalgebra_generated(p: &FiniteAlgebra, seeds: &[usize], budget: usize) -> Result<Subalgebra> {
    let flat: Vec<u16> = seeds.iter().map(|&s| s as u16).collect();
    let opts = ClosureOptions { budget, ..ClosureOptions::default() };
    let sub = closure::close(p, 1, &flat, &opts)?;
    let inclusion: Vec<usize> = (0..sub.len()).map(|i| sub.tuple(i)[0] as usize).collect();
    let algebra = sub.materialize(p, &format!("sub({})", p.name))?;
    Ok(Subalgebra { algebra, inclusion })
}

/// Quotient by a compatible partition, with the canonical surjection.
pub fn quotient(a: &FiniteAlgebra, theta: &Partition) -> Result<(FiniteAlgebra, Vec<usize>)> {
    if theta.n() != a.size {
        return Err(Error::CarrierMismatch(theta.n(), a.size));
    }
    if !crate::congruence::is_compatible(a, theta) {
        return Err(Error::IncompatiblePartition);
    }
    let reps: Vec<usize> = theta.reps().to_vec();
    let mut buf = Vec::new();
    let q = FiniteAlgebra::from_fn(&format!("{}/theta", a.name), a.sig.clone(), reps.len(), |s, args| {
        buf.clear();
        buf.extend(args.iter().map(|&x| reps[x]));
        theta.block_of(a.apply(s, &buf))
    })?;
    let pi = (0..a.size).map(|x| theta.block_of(x)).collect();
    Ok((q, pi))
}

/// Quotient by a congruence.
pub fn quotient_by(a: &FiniteAlgebra, theta: &Congruence) -> Result<(FiniteAlgebra, Vec<usize>)> {
    quotient(a, theta.partition())
}

/// Whether both sides of `id` agree under every assignment.
pub fn satisfies(a: &FiniteAlgebra, id: &Identity) -> bool {
    find_violation(a, id).is_none()
}

/// First assignment (in lex order over `id.vars`) where `id` fails.
pub fn find_violation(a: &FiniteAlgebra, id: &Identity) -> Option<Vec<usize>> {
    let l = CompiledTerm::compile(&id.lhs, &id.vars).ok()?;
    let r = CompiledTerm::compile(&id.rhs, &id.vars).ok()?;
    let mut stack = Vec::new();
    let mut bad = None;
    let mut found = false;
    for_each_tuple(a.size, id.vars.len(), |env| {
        if !found && l.eval_with(a, env, &mut stack) != r.eval_with(a, env, &mut stack) {
            found = true;
            bad = Some(env.to_vec());
        }
    });
    bad
}

/// Index of the first axiom that fails, if any.
pub fn first_failing_axiom(a: &FiniteAlgebra, axioms: &[Identity]) -> Option<usize> {
    axioms.iter().position(|id| !satisfies(a, id))
}

/// All `u` with `f(u,…,u) = u` for every symbol.
pub fn find_idempotents(a: &FiniteAlgebra) -> Vec<usize> {
    (0..a.size)
        .filter(|&u| {
            (0..a.sig.len()).all(|s| {
                let args = vec![u; a.sig.arity(s)];
                a.apply(s, &args) == u
            })
        })
        .collect()
}

/// Trivial one-element algebra.
pub fn trivial(sig: &Signature) -> FiniteAlgebra {
    FiniteAlgebra::from_fn("trivial", sig.clone(), 1, |_, _| 0).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::cg;
    use crate::termlang::parse_identity;

    #[test]
    fn product_examples() {
        let z2 = groups::cyclic(2);
        let (k, p1, p2) = direct_product(&z2, &z2).unwrap();
        assert_eq!(k.size(), 4);
        for x in 0..4 {
            assert_eq!(k.apply(0, &[x, x]), 0);
        }
        assert_eq!(p1, vec![0, 0, 1, 1]);
        assert_eq!(p2, vec![0, 1, 0, 1]);
        let t = trivial(z2.signature());
        let (z2t, _, _) = direct_product(&z2, &t).unwrap();
        assert!(find_isomorphism(&z2t, &z2).is_some());
        let (z12, _, _) = direct_product(&groups::cyclic(3), &groups::cyclic(4)).unwrap();
        assert_eq!(z12.size(), 12);
        let renamed = groups::cyclic(2).rename_symbols(&["a", "b", "c"]).unwrap();
        assert!(direct_product(&z2, &renamed).is_err());
        let other = z2.with_operation("g", 1, vec![1, 0]).unwrap();
        assert!(matches!(direct_product(&z2, &other), Err(Error::SignatureMismatch(_))));
    }

    #[test]
    fn subalgebra_examples() {
        let z4 = groups::cyclic(4);
        assert_eq!(subalgebra_generated(&z4, &[1], 100).unwrap().algebra.size(), 4);
        assert_eq!(subalgebra_generated(&z4, &[0], 100).unwrap().inclusion, vec![0]);
        assert_eq!(subalgebra_generated(&z4, &[2], 100).unwrap().inclusion, vec![2, 0]);
        assert_eq!(subalgebra_generated(&z4, &[1], 2).map(|_| ()), Err(Error::BudgetExceeded(2)));
    }

    #[test]
    fn quotient_examples() {
        let z4 = groups::cyclic(4);
        let th = cg(&z4, &[(0, 2)]);
        let (q, pi) = quotient_by(&z4, &th).unwrap();
        assert!(find_isomorphism(&q, &groups::cyclic(2)).is_some());
        assert_eq!(pi, vec![0, 1, 0, 1]);
        let (q0, _) = quotient(&z4, &Partition::zero(4)).unwrap();
        assert_eq!(q0, FiniteAlgebra { name: q0.name.clone(), ..z4.clone() });
        let (q1, _) = quotient(&z4, &Partition::total(4)).unwrap();
        assert_eq!(q1.size(), 1);
        let bad = Partition::from_labels(&[0, 0, 1, 1]);
        assert_eq!(quotient(&z4, &bad).map(|_| ()), Err(Error::IncompatiblePartition));
    }

    #[test]
    fn satisfies_examples() {
        let z4 = groups::cyclic(4);
        let s3 = groups::symmetric(3);
        let comm = parse_identity("mul(x,y) = mul(y,x)", z4.signature()).unwrap();
        assert!(satisfies(&z4, &comm));
        assert!(!satisfies(&s3, &comm));
        let refl = parse_identity("x = x", z4.signature()).unwrap();
        assert!(satisfies(&s3, &refl));
    }

    #[test]
    fn idempotent_examples() {
        assert_eq!(find_idempotents(&groups::cyclic(4)), vec![0]);
        let b = groups::cyclic(2)
            .rename_symbols(&["add", "neg", "zero"])
            .unwrap()
            .with_operation("g", 1, vec![1, 0])
            .unwrap();
        assert!(find_idempotents(&b).is_empty());
        let sl = FiniteAlgebra::new(
            "sl",
            Signature::from_pairs(&[("meet", 2)]).unwrap(),
            2,
            vec![vec![0, 0, 0, 1]],
        )
        .unwrap();
        assert_eq!(find_idempotents(&sl), vec![0, 1]);
    }

    #[test]
    fn malformed_tables_rejected() {
        let sig = Signature::from_pairs(&[("f", 1)]).unwrap();
        assert!(FiniteAlgebra::new("a", sig.clone(), 2, vec![vec![0]]).is_err());
        assert!(FiniteAlgebra::new("a", sig, 2, vec![vec![0, 2]]).is_err());
    }
}
