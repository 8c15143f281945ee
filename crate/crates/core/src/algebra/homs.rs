//! Homomorphism search by backtracking over a generating sequence.

use super::{for_each_tuple, FiniteAlgebra};
use crate::error::{Error, Result};

/// A map between algebras that commutes with every operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    pub map: Vec<usize>,
    pub zero_preserving: bool,
}

/// Full-table check that `map` commutes with every operation.
pub fn is_homomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[usize]) -> bool {
    if map.len() != a.size() || map.iter().any(|&y| y >= b.size()) {
        return false;
    }
    if !a.signature().same_symbols(b.signature()) {
        return false;
    }
    let mut ok = true;
    let mut img = Vec::new();
    for s in 0..a.signature().len() {
        for_each_tuple(a.size(), a.signature().arity(s), |args| {
            if ok {
                img.clear();
                img.extend(args.iter().map(|&x| map[x]));
                ok = map[a.apply(s, args)] == b.apply(s, &img);
            }
        });
        if !ok {
            return false;
        }
    }
    true
}

/// Search constraints.
pub struct HomSearch<'a> {
    /// Required `(zero of A, zero of B)` correspondence.
    pub zeros: Option<(usize, usize)>,
    pub injective: bool,
    /// Error out when more than this many maps exist.
    pub limit: usize,
    /// Stop after this many maps without error.
    pub stop_after: Option<usize>,
    /// Admissible images: `allowed(x, y)` must hold for `map[x] = y`.
    pub allowed: Option<&'a dyn Fn(usize, usize) -> bool>,
}

impl Default for HomSearch<'_> {
    fn default() -> Self {
        HomSearch { zeros: None, injective: false, limit: 1_000_000, stop_after: None, allowed: None }
    }
}

#[derive(Clone, Copy)]
enum Step {
    Gen,
    Op(usize),
}

/// Elements of `a` layered by a greedy generating sequence.
struct Layout {
    order: Vec<usize>,
    steps: Vec<Step>,
    args: Vec<Vec<usize>>,
    gens: Vec<usize>,
    layer_end: Vec<usize>,
}

fn layout(a: &FiniteAlgebra) -> Layout {
    let n = a.size();
    let sig = a.signature();
    let mut pos = vec![usize::MAX; n];
    let mut lay = Layout { order: Vec::new(), steps: Vec::new(), args: Vec::new(), gens: Vec::new(), layer_end: Vec::new() };
    let mut done = vec![0usize; sig.len()];
    let add = |lay: &mut Layout, pos: &mut Vec<usize>, x: usize, step: Step, args: Vec<usize>| {
        if pos[x] == usize::MAX {
            pos[x] = lay.order.len();
            lay.order.push(x);
            lay.steps.push(step);
            lay.args.push(args);
        }
    };
    for x in 0..n {
        if pos[x] != usize::MAX {
            continue;
        }
        lay.gens.push(x);
        add(&mut lay, &mut pos, x, Step::Gen, vec![]);
        loop {
            let mut grew = false;
            for s in 0..sig.len() {
                let k = sig.arity(s);
                let m = lay.order.len();
                let d = done[s];
                if k == 0 {
                    if d == 0 {
                        done[s] = 1;
                        let v = a.apply(s, &[]);
                        add(&mut lay, &mut pos, v, Step::Op(s), vec![]);
                        grew = true;
                    }
                    continue;
                }
                if d >= m {
                    continue;
                }
                done[s] = m;
                let snapshot: Vec<usize> = lay.order[..m].to_vec();
                for_each_tuple(m, k, |idx| {
                    if idx.iter().all(|&i| i < d) {
                        return;
                    }
                    let els: Vec<usize> = idx.iter().map(|&i| snapshot[i]).collect();
                    let v = a.apply(s, &els);
                    if pos[v] == usize::MAX {
                        add(&mut lay, &mut pos, v, Step::Op(s), els);
                        grew = true;
                    }
                });
            }
            if !grew {
                break;
            }
        }
        lay.layer_end.push(lay.order.len());
    }
    lay
}

/// All homomorphisms `a → b` satisfying the constraints, in lex order of
/// generator images.
pub fn search_homs(a: &FiniteAlgebra, b: &FiniteAlgebra, opts: &HomSearch) -> Result<Vec<Vec<usize>>> {
    if !a.signature().same_symbols(b.signature()) {
        return Err(Error::SignatureMismatch(format!("{} vs {}", a.signature(), b.signature())));
    }
    let lay = layout(a);
    let mut img = vec![usize::MAX; a.size()];
    let mut used = vec![false; b.size()];
    let mut out = Vec::new();
    let mut st = Search { a, b, opts, lay: &lay, out: &mut out };
    st.go(0, &mut img, &mut used)?;
    Ok(out)
}

struct Search<'s> {
    a: &'s FiniteAlgebra,
    b: &'s FiniteAlgebra,
    opts: &'s HomSearch<'s>,
    lay: &'s Layout,
    out: &'s mut Vec<Vec<usize>>,
}

impl Search<'_> {
    fn done(&self) -> bool {
        self.opts.stop_after.is_some_and(|k| self.out.len() >= k)
    }

    fn admissible(&self, x: usize, y: usize, used: &[bool]) -> bool {
        if self.opts.injective && used[y] {
            return false;
        }
        if let Some((za, zb)) = self.opts.zeros {
            if x == za && y != zb {
                return false;
            }
        }
        self.opts.allowed.is_none_or(|f| f(x, y))
    }

    fn go(&mut self, layer: usize, img: &mut Vec<usize>, used: &mut Vec<bool>) -> Result<()> {
        if self.done() {
            return Ok(());
        }
        if layer == self.lay.gens.len() {
            if self.out.len() >= self.opts.limit {
                return Err(Error::LimitExceeded(self.opts.limit));
            }
            self.out.push(img.clone());
            return Ok(());
        }
        let start = if layer == 0 { 0 } else { self.lay.layer_end[layer - 1] };
        let end = self.lay.layer_end[layer];
        let g = self.lay.gens[layer];
        for y in 0..self.b.size() {
            if !self.admissible(g, y, used) {
                continue;
            }
            let mut assigned = Vec::new();
            let ok = self.extend(start, end, g, y, img, used, &mut assigned);
            if ok && self.consistent(start, end, img) {
                self.go(layer + 1, img, used)?;
            }
            for x in assigned {
                used[img[x]] = false;
                img[x] = usize::MAX;
            }
            if self.done() {
                break;
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        start: usize,
        end: usize,
        g: usize,
        y: usize,
        img: &mut [usize],
        used: &mut [bool],
        assigned: &mut Vec<usize>,
    ) -> bool {
        let mut buf = Vec::new();
        for p in start..end {
            let x = self.lay.order[p];
            let v = match self.lay.steps[p] {
                Step::Gen => {
                    debug_assert_eq!(x, g);
                    y
                }
                Step::Op(s) => {
                    buf.clear();
                    buf.extend(self.lay.args[p].iter().map(|&e| img[e]));
                    self.b.apply(s, &buf)
                }
            };
            if p > start && !self.admissible(x, v, used) {
                return false;
            }
            img[x] = v;
            used[v] = true;
            assigned.push(x);
        }
        true
    }

    /// Checks commutation on tuples of the current subuniverse that involve
    /// at least one element of the newest layer.
    fn consistent(&self, start: usize, end: usize, img: &[usize]) -> bool {
        let sig = self.a.signature();
        let elems = &self.lay.order[..end];
        let mut ok = true;
        let mut args = Vec::new();
        let mut bargs = Vec::new();
        for s in 0..sig.len() {
            let k = sig.arity(s);
            if k == 0 {
                continue;
            }
            for_each_tuple(end, k, |idx| {
                if !ok || idx.iter().all(|&i| i < start) {
                    return;
                }
                args.clear();
                args.extend(idx.iter().map(|&i| elems[i]));
                bargs.clear();
                bargs.extend(args.iter().map(|&x| img[x]));
                ok = img[self.a.apply(s, &args)] == self.b.apply(s, &bargs);
            });
            if !ok {
                return false;
            }
        }
        for s in 0..sig.len() {
            if sig.arity(s) == 0 && img[self.a.apply(s, &[])] != self.b.apply(s, &[]) {
                return false;
            }
        }
        true
    }
}

/// All homomorphisms, optionally zero preserving.
pub fn enumerate_homs(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    zeros: Option<(usize, usize)>,
    limit: usize,
) -> Result<Vec<Homomorphism>> {
    let opts = HomSearch { zeros, limit, ..HomSearch::default() };
    Ok(search_homs(a, b, &opts)?
        .into_iter()
        .map(|map| Homomorphism { map, zero_preserving: zeros.is_some() })
        .collect())
}

/// Some isomorphism `a → b`, if one exists.
pub fn find_isomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Option<Vec<usize>> {
    if a.size() != b.size() {
        return None;
    }
    let opts = HomSearch { injective: true, stop_after: Some(1), ..HomSearch::default() };
    search_homs(a, b, &opts).ok()?.into_iter().next()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::groups;

    #[test]
    fn hom_counts() {
        let z2 = groups::cyclic(2);
        let z3 = groups::cyclic(3);
        let h = enumerate_homs(&z2, &z3, Some((0, 0)), 100).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(enumerate_homs(&groups::cyclic(4), &groups::cyclic(2), None, 100).unwrap().len(), 2);
        assert_eq!(enumerate_homs(&groups::cyclic(6), &groups::cyclic(6), None, 100).unwrap().len(), 6);
        let s3 = groups::symmetric(3);
        let ends = enumerate_homs(&s3, &s3, None, 100).unwrap();
        // 6 automorphisms, 3 maps onto subgroups of order 2, trivial map
        assert_eq!(ends.len(), 10);
        assert!(ends.iter().any(|h| h.map == (0..6).collect::<Vec<_>>()));
        for h in &ends {
            assert!(is_homomorphism(&s3, &s3, &h.map));
        }
    }

    #[test]
    fn coprime_unary_expansions() {
        let mk = |n: usize| {
            groups::cyclic(n).with_operation("g", 1, (0..n as u32).collect()).unwrap()
        };
        let h = enumerate_homs(&mk(2), &mk(3), Some((0, 0)), 10).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].map, vec![0, 0]);
    }

    #[test]
    fn limit_reported() {
        let z6 = groups::cyclic(6);
        assert_eq!(enumerate_homs(&z6, &z6, None, 3), Err(Error::LimitExceeded(3)));
    }

    #[test]
    fn isomorphisms() {
        assert!(find_isomorphism(&groups::klein(), &groups::cyclic(4)).is_none());
        assert!(find_isomorphism(&groups::dihedral(3), &groups::symmetric(3)).is_some());
        assert!(find_isomorphism(&groups::quaternion(), &groups::dihedral(4)).is_none());
    }
}
