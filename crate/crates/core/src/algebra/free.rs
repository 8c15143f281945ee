//! Free algebras in `HSP(A)` as subpowers of `A^{A^k}` and free presentations.

use super::closure::{close, ClosureOptions, Origin, Subpower};
use super::{is_homomorphism, FiniteAlgebra};
use crate::congruence::{Congruence, Partition};
use crate::error::{Error, Result};

/// The free algebra on `k` generators in `HSP(base)`.
#[derive(Debug)]
pub struct FreeAlgebra {
    pub algebra: FiniteAlgebra,
    /// Element index of each free generator.
    pub generators: Vec<usize>,
    pub base: FiniteAlgebra,
    pub k: usize,
    sub: Subpower,
}

impl FreeAlgebra {
    /// Evaluates the unique extension of `x_i ↦ images[i]` into `target`,
    /// replaying the closure provenance. The result is a homomorphism exactly
    /// when `target` satisfies the identities of `base` on these images.
    pub fn eval_map(&self, target: &FiniteAlgebra, images: &[usize]) -> Vec<usize> {
        let prov = self.sub.provenance().expect("free algebras keep provenance");
        let mut out = Vec::with_capacity(prov.len());
        let mut buf = Vec::new();
        for o in prov {
            let v = match o {
                Origin::Seed(i) => images[*i as usize],
                Origin::Op(s, args) => {
                    buf.clear();
                    buf.extend(args.iter().map(|&e| out[e as usize]));
                    target.apply(*s as usize, &buf)
                }
            };
            out.push(v);
        }
        out
    }

    /// The homomorphism extending `images`, verified on full tables.
    pub fn extend(&self, target: &FiniteAlgebra, images: &[usize]) -> Result<Vec<usize>> {
        if images.len() != self.k {
            return Err(Error::Format(format!("expected {} generator images", self.k)));
        }
        let map = self.eval_map(target, images);
        if !is_homomorphism(&self.algebra, target, &map) {
            return Err(Error::NotInVariety(target.name().to_string()));
        }
        Ok(map)
    }

    /// The tuple in `A^{A^k}` representing element `x`.
    pub fn tuple(&self, x: usize) -> &[u16] {
        self.sub.tuple(x)
    }
}

/// Subalgebra of `A^{A^k}` generated by the `k` projections. Coordinates of
/// the power are assignments `A^k` in lex order, first variable most
/// significant.
pub fn free_algebra_hsp(a: &FiniteAlgebra, k: usize, budget: usize) -> Result<FreeAlgebra> {
    if k == 0 {
        return Err(Error::Format("free algebra needs at least one generator".into()));
    }
    let n = a.size();
    let width = n.checked_pow(k as u32).filter(|&w| w <= 1 << 20).ok_or(Error::BudgetExceeded(budget))?;
    let mut seeds = Vec::with_capacity(k * width);
    for i in 0..k {
        let stride = n.pow((k - 1 - i) as u32);
        seeds.extend((0..width).map(|c| ((c / stride) % n) as u16));
    }
    let opts = ClosureOptions { budget, provenance: true, ..ClosureOptions::default() };
    let sub = close(a, width, &seeds, &opts)?;
    let algebra = sub.materialize(a, &format!("F({},{k})", a.name()))?;
    let generators = sub.seed_elements().to_vec();
    Ok(FreeAlgebra { algebra, generators, base: a.clone(), k, sub })
}

/// `F/θ ≅ Q` with θ the kernel of the evaluation map.
#[derive(Debug)]
pub struct FreePresentation {
    pub free: FreeAlgebra,
    pub images: Vec<usize>,
    /// Evaluation homomorphism `F → Q`.
    pub eval: Vec<usize>,
    pub theta: Congruence,
    pub target: FiniteAlgebra,
    /// Block of θ ↦ element of Q.
    pub iso: Vec<usize>,
}

impl FreePresentation {
    pub fn f(&self) -> &FiniteAlgebra {
        &self.free.algebra
    }
}

/// Presents `q` over `HSP(a)` on `k` generators sent to `images`.
pub fn presentation_of(
    q: &FiniteAlgebra,
    a: &FiniteAlgebra,
    k: usize,
    images: &[usize],
    budget: usize,
) -> Result<FreePresentation> {
    if images.len() != k || images.iter().any(|&x| x >= q.size()) {
        return Err(Error::Format(format!("expected {k} generator images in range")));
    }
    if !q.signature().same_symbols(a.signature()) {
        return Err(Error::SignatureMismatch(format!("{} vs {}", q.signature(), a.signature())));
    }
    let free = free_algebra_hsp(a, k, budget)?;
    let eval = free.eval_map(q, images);
    if !is_homomorphism(&free.algebra, q, &eval) {
        return Err(Error::NotInVariety(q.name().to_string()));
    }
    let mut hit = vec![false; q.size()];
    eval.iter().for_each(|&y| hit[y] = true);
    if hit.iter().any(|h| !h) {
        return Err(Error::NotGenerated);
    }
    let theta = Congruence::from_partition(Partition::from_labels(&eval));
    let iso = theta.reps().iter().map(|&r| eval[r]).collect();
    Ok(FreePresentation { free, images: images.to_vec(), eval, theta, target: q.clone(), iso })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{find_isomorphism, groups, quotient_by, trivial};

    #[test]
    fn free_algebra_examples() {
        let z2 = groups::cyclic(2);
        let f = free_algebra_hsp(&z2, 2, 1000).unwrap();
        assert_eq!(f.algebra.size(), 4);
        assert!(find_isomorphism(&f.algebra, &groups::klein()).is_some());
        assert_eq!(free_algebra_hsp(&groups::symmetric(3), 1, 1000).unwrap().algebra.size(), 6);
        assert_eq!(free_algebra_hsp(&groups::cyclic(3), 1, 1000).unwrap().algebra.size(), 3);
    }

    #[test]
    fn presentation_examples() {
        let z2 = groups::cyclic(2);
        let p = presentation_of(&z2, &z2, 1, &[1], 1000).unwrap();
        assert!(p.theta.is_zero());
        let p = presentation_of(&z2, &z2, 2, &[1, 1], 1000).unwrap();
        assert_eq!(p.theta.num_blocks(), 2);
        assert!(p.theta.blocks().iter().all(|b| b.len() == 2));
        let (fq, _) = quotient_by(p.f(), &p.theta).unwrap();
        assert!(find_isomorphism(&fq, &z2).is_some());
        let t = trivial(z2.signature());
        let p = presentation_of(&t, &groups::cyclic(3), 1, &[0], 1000).unwrap();
        assert!(p.theta.is_total());
        assert_eq!(presentation_of(&z2, &z2, 1, &[0], 1000).map(|_| ()), Err(Error::NotGenerated));
        let z4 = groups::cyclic(4);
        assert!(matches!(presentation_of(&z4, &z2, 1, &[1], 1000), Err(Error::NotInVariety(_))));
    }
}
