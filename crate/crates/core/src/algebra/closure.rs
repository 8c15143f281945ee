//! Subpower closure: the least subset of `A^w` containing given tuples and
//! closed under coordinatewise operations.
//!
//! The generic strategy is a semi-naive BFS: rounds process symbols in
//! signature order and argument tuples in lex order, skipping tuples made only
//! of elements already processed for that symbol. When some binary symbol is a
//! group operation on the base algebra, the group strategy computes the
//! generated subgroup by right multiplication with a pruned generator list and
//! closes the remaining symbols semi-naively.

use std::collections::HashMap;

use super::FiniteAlgebra;
use crate::error::{Error, Result};

/// Dense index arrays are used up to this many potential keys.
const DENSE_LIMIT: u64 = 1 << 25;
const ABSENT: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Auto,
    Generic,
}

#[derive(Debug, Clone)]
pub struct ClosureOptions {
    pub budget: usize,
    pub provenance: bool,
    pub strategy: Strategy,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions { budget: super::DEFAULT_BUDGET, provenance: false, strategy: Strategy::Auto }
    }
}

/// How an element entered the closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Seed(u32),
    Op(u16, Box<[u32]>),
}

#[derive(Debug)]
enum Index {
    Dense(Vec<u32>),
    Packed(HashMap<u64, u32>),
    Wide(HashMap<Box<[u16]>, u32>),
}

/// A closed subset of `A^w` with elements in discovery order.
#[derive(Debug)]
pub struct Subpower {
    width: usize,
    base_n: usize,
    arena: Vec<u16>,
    index: Index,
    provenance: Option<Vec<Origin>>,
    seed_elems: Vec<usize>,
}

impl Subpower {
    fn new(width: usize, base_n: usize, provenance: bool) -> Self {
        let key_space = (base_n as u64).checked_pow(width as u32);
        let index = match key_space {
            Some(k) if k <= DENSE_LIMIT => Index::Dense(vec![ABSENT; k as usize]),
            Some(_) => Index::Packed(HashMap::new()),
            None => Index::Wide(HashMap::new()),
        };
        Subpower {
            width,
            base_n,
            arena: Vec::new(),
            index,
            provenance: provenance.then(Vec::new),
            seed_elems: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arena.len() / self.width.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.arena.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn tuple(&self, i: usize) -> &[u16] {
        &self.arena[i * self.width..(i + 1) * self.width]
    }

    /// Element index of each seed, in seed order.
    pub fn seed_elements(&self) -> &[usize] {
        &self.seed_elems
    }

    pub fn provenance(&self) -> Option<&[Origin]> {
        self.provenance.as_deref()
    }

    fn key(&self, t: &[u16]) -> u64 {
        t.iter().fold(0u64, |acc, &d| acc * self.base_n as u64 + d as u64)
    }

    pub fn find(&self, t: &[u16]) -> Option<usize> {
        match &self.index {
            Index::Dense(v) => {
                let i = v[self.key(t) as usize];
                (i != ABSENT).then_some(i as usize)
            }
            Index::Packed(m) => m.get(&self.key(t)).map(|&i| i as usize),
            Index::Wide(m) => m.get(t).map(|&i| i as usize),
        }
    }

    /// Inserts `t`; returns its index and whether it is new.
    fn insert(&mut self, t: &[u16], origin: impl FnOnce() -> Origin, budget: usize) -> Result<(usize, bool)> {
        let next = self.len();
        let key = match &self.index {
            Index::Wide(_) => 0,
            _ => self.key(t),
        };
        let existing = match &mut self.index {
            Index::Dense(v) => {
                let slot = &mut v[key as usize];
                if *slot != ABSENT {
                    Some(*slot as usize)
                } else {
                    if next >= budget {
                        return Err(Error::BudgetExceeded(budget));
                    }
                    *slot = next as u32;
                    None
                }
            }
            Index::Packed(m) => match m.get(&key) {
                Some(&i) => Some(i as usize),
                None => {
                    if next >= budget {
                        return Err(Error::BudgetExceeded(budget));
                    }
                    m.insert(key, next as u32);
                    None
                }
            },
            Index::Wide(m) => match m.get(t) {
                Some(&i) => Some(i as usize),
                None => {
                    if next >= budget {
                        return Err(Error::BudgetExceeded(budget));
                    }
                    m.insert(t.into(), next as u32);
                    None
                }
            },
        };
        if let Some(i) = existing {
            return Ok((i, false));
        }
        self.arena.extend_from_slice(t);
        if let Some(p) = &mut self.provenance {
            p.push(origin());
        }
        Ok((next, true))
    }

    /// Builds the operation tables of the closed subset.
    pub fn materialize(&self, base: &FiniteAlgebra, name: &str) -> Result<FiniteAlgebra> {
        let n = self.len();
        let sig = base.signature().clone();
        for s in 0..sig.len() {
            let cells = (n as u128).pow(sig.arity(s) as u32);
            if cells > 200_000_000 {
                return Err(Error::BudgetExceeded(n));
            }
        }
        let w = self.width;
        let mut out = vec![0u16; w];
        let mut cols: Vec<&[u16]> = Vec::new();
        let mut args = Vec::new();
        let mut missing = false;
        let alg = FiniteAlgebra::from_fn(name, sig, n, |s, elems| {
            cols.clear();
            cols.extend(elems.iter().map(|&e| self.tuple(e)));
            for (c, o) in out.iter_mut().enumerate() {
                args.clear();
                args.extend(cols.iter().map(|t| t[c] as usize));
                *o = base.apply(s, &args) as u16;
            }
            match self.find(&out) {
                Some(i) => i,
                None => {
                    missing = true;
                    0
                }
            }
        })?;
        if missing {
            return Err(Error::VerificationFailed("closure is not closed".into()));
        }
        Ok(alg)
    }
}

/// Finds a binary symbol interpreted as a group operation, if `n` is small
/// enough to verify associativity exhaustively.
pub fn find_group_symbol(a: &FiniteAlgebra) -> Option<usize> {
    let n = a.size();
    if n > 256 {
        return None;
    }
    let sig = a.signature();
    'sym: for s in 0..sig.len() {
        if sig.arity(s) != 2 {
            continue;
        }
        let t = a.table(s);
        let op = |x: usize, y: usize| t[x * n + y] as usize;
        let Some(e) = (0..n).find(|&e| (0..n).all(|x| op(e, x) == x && op(x, e) == x)) else {
            continue;
        };
        for x in 0..n {
            if !(0..n).any(|y| op(x, y) == e) {
                continue 'sym;
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = op(x, y);
                for z in 0..n {
                    if op(xy, z) != op(x, op(y, z)) {
                        continue 'sym;
                    }
                }
            }
        }
        return Some(s);
    }
    None
}

/// Closes `seeds` (flattened tuples of width `width`) under the operations of
/// `base` applied coordinatewise.
pub fn close(base: &FiniteAlgebra, width: usize, seeds: &[u16], opts: &ClosureOptions) -> Result<Subpower> {
    assert!(width > 0 && seeds.len().is_multiple_of(width), "seed buffer must hold whole tuples");
    let group = match opts.strategy {
        Strategy::Auto => find_group_symbol(base),
        Strategy::Generic => None,
    };
    let mut eng = Engine {
        base,
        sub: Subpower::new(width, base.size(), opts.provenance),
        budget: opts.budget,
        done: vec![0; base.signature().len()],
        buf: vec![0; width],
        args: Vec::new(),
    };
    match group {
        Some(g) => eng.run_group(g, seeds)?,
        None => eng.run_generic(seeds)?,
    }
    Ok(eng.sub)
}

struct Engine<'a> {
    base: &'a FiniteAlgebra,
    sub: Subpower,
    budget: usize,
    done: Vec<usize>,
    buf: Vec<u16>,
    args: Vec<usize>,
}

impl Engine<'_> {
    fn compute(&mut self, sym: usize, elems: &[usize]) {
        let w = self.sub.width;
        for c in 0..w {
            self.args.clear();
            for &e in elems {
                self.args.push(self.sub.arena[e * w + c] as usize);
            }
            self.buf[c] = self.base.apply(sym, &self.args) as u16;
        }
    }

    fn insert_computed(&mut self, sym: usize, elems: &[usize]) -> Result<(usize, bool)> {
        let t = std::mem::take(&mut self.buf);
        let r = self.sub.insert(&t, || Origin::Op(sym as u16, elems.iter().map(|&e| e as u32).collect()), self.budget);
        self.buf = t;
        r
    }

    fn add_seeds(&mut self, seeds: &[u16]) -> Result<Vec<usize>> {
        let w = self.sub.width;
        let mut fresh = Vec::new();
        for (i, t) in seeds.chunks(w).enumerate() {
            let (idx, new) = self.sub.insert(t, || Origin::Seed(i as u32), self.budget)?;
            self.sub.seed_elems.push(idx);
            if new {
                fresh.push(idx);
            }
        }
        Ok(fresh)
    }

    /// One semi-naive pass over `sym`; returns whether anything new appeared.
    fn pass(&mut self, sym: usize) -> Result<bool> {
        let k = self.base.signature().arity(sym);
        let n = self.sub.len();
        let d = self.done[sym];
        self.done[sym] = n;
        if k == 0 {
            if d == 0 {
                self.done[sym] = n.max(1);
                self.compute(sym, &[]);
                return Ok(self.insert_computed(sym, &[])?.1);
            }
            return Ok(false);
        }
        if d >= n {
            return Ok(false);
        }
        let mut grew = false;
        let mut t = vec![0usize; k];
        // Enumerate tuples in lex order over [0,n)^k with some coordinate >= d.
        loop {
            let any_new = t.iter().any(|&x| x >= d);
            if any_new {
                self.compute(sym, &t);
                grew |= self.insert_computed(sym, &t)?.1;
            } else {
                // Jump the last coordinate straight to d.
                t[k - 1] = d;
                continue;
            }
            let mut j = k;
            loop {
                if j == 0 {
                    return Ok(grew);
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

    fn run_generic(&mut self, seeds: &[u16]) -> Result<()> {
        self.add_seeds(seeds)?;
        let nsym = self.base.signature().len();
        loop {
            let mut grew = false;
            for s in 0..nsym {
                grew |= self.pass(s)?;
            }
            let settled = (0..nsym).all(|s| {
                let k = self.base.signature().arity(s);
                (k == 0 && self.done[s] > 0) || (k > 0 && self.done[s] >= self.sub.len())
            });
            if !grew && settled {
                return Ok(());
            }
        }
    }

    fn run_group(&mut self, g: usize, seeds: &[u16]) -> Result<()> {
        let w = self.sub.width;
        let nsym = self.base.signature().len();
        let mut gens: Vec<usize> = Vec::new();
        let mut processed: Vec<usize> = Vec::new();
        // Seeds are admitted one at a time so that redundant ones are pruned.
        for (i, t) in seeds.chunks(w).enumerate() {
            let (idx, new) = self.sub.insert(t, || Origin::Seed(i as u32), self.budget)?;
            self.sub.seed_elems.push(idx);
            if new {
                gens.push(idx);
                processed.push(0);
                self.grow_group(g, &gens, &mut processed)?;
            }
        }
        loop {
            self.grow_group(g, &gens, &mut processed)?;
            let before = self.sub.len();
            for s in 0..nsym {
                if s != g {
                    self.pass(s)?;
                }
            }
            let after = self.sub.len();
            if after == before {
                let settled = (0..nsym).filter(|&s| s != g).all(|s| {
                    let k = self.base.signature().arity(s);
                    (k == 0 && self.done[s] > 0) || (k > 0 && self.done[s] >= after)
                });
                if settled {
                    return Ok(());
                }
                continue;
            }
            for e in before..after {
                gens.push(e);
                processed.push(0);
            }
        }
    }

    /// Right-multiplies every element by every generator until closed.
    fn grow_group(&mut self, g: usize, gens: &[usize], processed: &mut [usize]) -> Result<()> {
        let n = self.base.size();
        let table = self.base.table(g);
        let w = self.sub.width;
        loop {
            let mut any = false;
            for (gi, &gen) in gens.iter().enumerate() {
                while processed[gi] < self.sub.len() {
                    let e = processed[gi];
                    processed[gi] += 1;
                    any = true;
                    for c in 0..w {
                        let x = self.sub.arena[e * w + c] as usize;
                        let y = self.sub.arena[gen * w + c] as usize;
                        self.buf[c] = table[x * n + y] as u16;
                    }
                    self.insert_computed(g, &[e, gen])?;
                }
            }
            if !any {
                return Ok(());
            }
        }
    }
}
