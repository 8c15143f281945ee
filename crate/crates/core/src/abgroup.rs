//! Finite abelian groups `⊕ Z/c_t` given by coordinate moduli.
//!
//! Subgroups are stored in Howell form: a row per pivot column `t` whose
//! pivot `g_t` divides `c_t`, with `(c_t/g_t)·row_t` in the span of the
//! later rows. The form is canonical, and greedy reduction decides
//! membership. Kernels, preimages and intersections are read off graph
//! subgroups. Quotients use a Smith form modulo the exponent.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// `(g, a, b)` with `a·x + b·y = g = gcd(x, y) ≥ 0`.
pub fn xgcd(x: i128, y: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (x, y);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

fn md(x: i128, c: u64) -> u64 {
    x.rem_euclid(c as i128) as u64
}

fn mulmod(a: u64, b: u64, c: u64) -> u64 {
    ((a as u128 * b as u128) % c as u128) as u64
}

/// Reduces `v` coordinatewise.
pub fn reduce_vec(moduli: &[u64], v: &[i128]) -> Vec<u64> {
    v.iter().zip(moduli).map(|(&x, &c)| md(x, c)).collect()
}

/// `Σ k_i · v_i` with coefficients given as signed integers.
pub(crate) fn combine(moduli: &[u64], terms: &[(i128, &[u64])]) -> Vec<u64> {
    (0..moduli.len())
        .map(|j| {
            let c = moduli[j];
            terms.iter().fold(0u64, |acc, (k, v)| (acc + mulmod(md(*k, c), v[j], c)) % c)
        })
        .collect()
}

/// Order of `v` in the group.
pub fn element_order(moduli: &[u64], v: &[u64]) -> u64 {
    v.iter().zip(moduli).fold(1, |acc, (&x, &c)| lcm(acc, c / gcd(x % c, c)))
}

/// A subgroup of `⊕ Z/c_t` in Howell form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    moduli: Vec<u64>,
    rows: Vec<Option<Vec<u64>>>,
}

impl Subgroup {
    pub fn zero(moduli: &[u64]) -> Self {
        assert!(moduli.iter().all(|&c| c >= 1), "moduli must be positive");
        Subgroup { moduli: moduli.to_vec(), rows: vec![None; moduli.len()] }
    }

    pub fn full(moduli: &[u64]) -> Self {
        let mut s = Self::zero(moduli);
        for t in 0..moduli.len() {
            if moduli[t] > 1 {
                let mut e = vec![0; moduli.len()];
                e[t] = 1;
                s.rows[t] = Some(e);
            }
        }
        s
    }

    pub fn generated<V: AsRef<[u64]>>(moduli: &[u64], gens: &[V]) -> Self {
        let mut s = Self::zero(moduli);
        for g in gens {
            s.insert_raw(g.as_ref());
        }
        s.canonicalize();
        s
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn dim(&self) -> usize {
        self.moduli.len()
    }

    pub fn insert(&mut self, v: &[u64]) {
        self.insert_raw(v);
        self.canonicalize();
    }

    fn insert_raw(&mut self, v: &[u64]) {
        let k = self.moduli.len();
        assert_eq!(v.len(), k, "vector length differs from group rank");
        let mut queue = vec![v.iter().zip(&self.moduli).map(|(&x, &c)| x % c).collect::<Vec<u64>>()];
        while let Some(mut w) = queue.pop() {
            for t in 0..k {
                let c = self.moduli[t];
                let x = w[t] % c;
                if x == 0 {
                    continue;
                }
                match self.rows[t].take() {
                    None => {
                        let (g, a, _) = xgcd(x as i128, c as i128);
                        let row = combine(&self.moduli, &[(a, &w)]);
                        queue.push(combine(&self.moduli, &[((c as i128) / g, &w)]));
                        self.rows[t] = Some(row);
                        break;
                    }
                    Some(row) => {
                        let gt = row[t];
                        if x.is_multiple_of(gt) {
                            w = combine(&self.moduli, &[(1, &w), (-((x / gt) as i128), &row)]);
                            self.rows[t] = Some(row);
                            continue;
                        }
                        let (g, a, b) = xgcd(gt as i128, x as i128);
                        let new_row = combine(&self.moduli, &[(a, &row), (b, &w)]);
                        let rest =
                            combine(&self.moduli, &[((gt as i128) / g, &w), (-(x as i128) / g, &row)]);
                        queue.push(rest);
                        queue.push(combine(&self.moduli, &[((c as i128) / g, &new_row)]));
                        self.rows[t] = Some(new_row);
                        break;
                    }
                }
            }
        }
    }

    fn canonicalize(&mut self) {
        let k = self.moduli.len();
        for r in 0..k {
            let Some(mut row) = self.rows[r].take() else { continue };
            for j in r + 1..k {
                if let Some(pj) = &self.rows[j] {
                    let q = row[j] / pj[j];
                    if q > 0 {
                        row = combine(&self.moduli, &[(1, &row), (-(q as i128), pj)]);
                    }
                }
            }
            self.rows[r] = Some(row);
        }
    }

    /// Howell rows, in pivot order.
    pub fn generators(&self) -> Vec<Vec<u64>> {
        self.rows.iter().flatten().cloned().collect()
    }

    /// Remainder of greedy reduction and the coefficient of each row.
    pub fn reduce(&self, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let mut w: Vec<u64> = v.iter().zip(&self.moduli).map(|(&x, &c)| x % c).collect();
        let mut coeffs = Vec::new();
        for t in 0..self.moduli.len() {
            if let Some(row) = &self.rows[t] {
                let q = w[t] / row[t];
                coeffs.push(q);
                if q > 0 {
                    w = combine(&self.moduli, &[(1, &w), (-(q as i128), row)]);
                }
            }
        }
        (w, coeffs)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).0.iter().all(|&x| x == 0)
    }

    pub fn contains_all(&self, other: &Subgroup) -> bool {
        other.rows.iter().flatten().all(|r| self.contains(r))
    }

    pub fn order(&self) -> BigUint {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(t, r)| r.as_ref().map(|r| BigUint::from(self.moduli[t] / r[t])))
            .fold(BigUint::one(), |a, b| a * b)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Option::is_none)
    }

    pub fn join(&self, other: &Subgroup) -> Subgroup {
        let mut s = self.clone();
        for r in other.rows.iter().flatten() {
            s.insert_raw(r);
        }
        s.canonicalize();
        s
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let k = self.dim();
        let moduli: Vec<u64> = self.moduli.iter().chain(&self.moduli).copied().collect();
        let mut gens = Vec::new();
        for s in self.generators() {
            gens.push(s.iter().chain(&s).copied().collect::<Vec<_>>());
        }
        for t in other.generators() {
            gens.push(t.iter().copied().chain(std::iter::repeat_n(0, k)).collect());
        }
        Subgroup::generated(&moduli, &gens).tail(k)
    }

    /// Subgroup of the last `dim - skip` coordinates formed by the rows whose
    /// pivots lie there; by the Howell property these span the elements
    /// vanishing on the first `skip` coordinates.
    fn tail(&self, skip: usize) -> Subgroup {
        let gens: Vec<Vec<u64>> = self.rows[skip..].iter().flatten().map(|r| r[skip..].to_vec()).collect();
        Subgroup::generated(&self.moduli[skip..], &gens)
    }

    /// All elements, when there are at most `limit`.
    pub fn elements(&self, limit: usize) -> Result<Vec<Vec<u64>>> {
        let gens: Vec<(Vec<u64>, u64)> = self
            .rows
            .iter()
            .enumerate()
            .filter_map(|(t, r)| r.as_ref().map(|r| (r.clone(), self.moduli[t] / r[t])))
            .collect();
        if self.order() > BigUint::from(limit) {
            return Err(Error::LimitExceeded(limit));
        }
        let mut out = vec![vec![0; self.dim()]];
        // Each coset representative chain: pivot rows with coefficients below c_t/g_t.
        for (row, k) in gens.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * *k as usize);
            for base in &out {
                let mut cur = base.clone();
                for _ in 0..*k {
                    next.push(cur.clone());
                    cur = combine(&self.moduli, &[(1, &cur), (1, row)]);
                }
            }
            out = next;
        }
        out.sort();
        Ok(out)
    }
}

/// A homomorphism `⊕ Z/a_t → ⊕ Z/b_s`, `x ↦ x·M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    from: Vec<u64>,
    to: Vec<u64>,
    rows: Vec<Vec<u64>>,
}

impl LinearMap {
    /// Checks that `a_t · row_t = 0` for every row.
    pub fn new(from: &[u64], to: &[u64], rows: Vec<Vec<u64>>) -> Result<Self> {
        if rows.len() != from.len() || rows.iter().any(|r| r.len() != to.len()) {
            return Err(Error::Format("matrix shape does not match the groups".into()));
        }
        let rows: Vec<Vec<u64>> = rows.into_iter().map(|r| r.iter().zip(to).map(|(&x, &c)| x % c).collect()).collect();
        for (t, r) in rows.iter().enumerate() {
            if combine(to, &[(from[t] as i128, r)]).iter().any(|&x| x != 0) {
                return Err(Error::VerificationFailed(format!("map is not well defined on coordinate {t}")));
            }
        }
        Ok(LinearMap { from: from.to_vec(), to: to.to_vec(), rows })
    }

    /// Builds the matrix by applying a Z-linear function to unit vectors.
    pub fn from_fn(from: &[u64], to: &[u64], f: impl Fn(&[u64]) -> Vec<u64>) -> Result<Self> {
        let rows = (0..from.len())
            .map(|t| {
                let mut e = vec![0; from.len()];
                if from[t] > 1 {
                    e[t] = 1;
                }
                f(&e)
            })
            .collect();
        Self::new(from, to, rows)
    }

    pub fn from_moduli(&self) -> &[u64] {
        &self.from
    }

    pub fn to_moduli(&self) -> &[u64] {
        &self.to
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        let terms: Vec<(i128, &[u64])> =
            x.iter().zip(&self.rows).filter(|(&k, _)| k != 0).map(|(&k, r)| (k as i128, r.as_slice())).collect();
        combine(&self.to, &terms)
    }

    pub fn image(&self, s: &Subgroup) -> Subgroup {
        Subgroup::generated(&self.to, &s.generators().iter().map(|g| self.apply(g)).collect::<Vec<_>>())
    }

    /// `{x : x·M ∈ t}`.
    pub fn preimage(&self, t: &Subgroup) -> Subgroup {
        let k = self.to.len();
        let moduli: Vec<u64> = self.to.iter().chain(&self.from).copied().collect();
        let mut gens: Vec<Vec<u64>> = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            let mut g = r.clone();
            g.extend((0..self.from.len()).map(|j| u64::from(i == j)));
            gens.push(g);
        }
        for tg in t.generators() {
            gens.push(tg.iter().copied().chain(std::iter::repeat_n(0, self.from.len())).collect());
        }
        Subgroup::generated(&moduli, &gens).tail(k)
    }

    pub fn kernel(&self) -> Subgroup {
        self.preimage(&Subgroup::zero(&self.to))
    }

    /// Some `x` with `x·M = y`, when `y` lies in the image.
    pub fn solve(&self, y: &[u64]) -> Option<Vec<u64>> {
        let k = self.to.len();
        let moduli: Vec<u64> = self.to.iter().chain(&self.from).copied().collect();
        let gens: Vec<Vec<u64>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().copied().chain((0..self.from.len()).map(|j| u64::from(i == j))).collect())
            .collect();
        let graph = Subgroup::generated(&moduli, &gens);
        let target: Vec<u64> = y.iter().copied().chain(std::iter::repeat_n(0, self.from.len())).collect();
        let (rem, _) = graph.reduce(&target);
        if rem[..k].iter().any(|&v| v != 0) {
            return None;
        }
        let x = reduce_vec(&self.from, &rem[k..].iter().map(|&v| -(v as i128)).collect::<Vec<_>>());
        debug_assert_eq!(self.apply(&x), reduce_vec(&self.to, &y.iter().map(|&v| v as i128).collect::<Vec<_>>()));
        Some(x)
    }

    /// Matrix rows: the image of each unit vector.
    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &LinearMap) -> Result<LinearMap> {
        if self.to != next.from {
            return Err(Error::Format("maps do not compose".into()));
        }
        LinearMap::new(&self.from, &next.to, self.rows.iter().map(|r| next.apply(r)).collect())
    }
}

/// Diagonal form of a row lattice over `Z/d` with tracked column operations.
#[derive(Debug, Clone)]
pub struct Smith {
    /// Component orders, each dividing `d` (and `d` for free columns).
    pub diag: Vec<u64>,
    /// Column transform: coordinates are `x·V`.
    pub v: Vec<Vec<u64>>,
    /// Inverse of `v`.
    pub vinv: Vec<Vec<u64>>,
}

fn unit_multiplier(x: u64, d: u64) -> u64 {
    // u with u·x ≡ gcd(x,d) (mod d) and gcd(u,d) = 1
    let (g, a, _) = xgcd(x as i128, d as i128);
    let step = d as i128 / g;
    (0..g)
        .map(|k| md(a + k * step, d))
        .find(|&u| gcd(u, d) == 1)
        .expect("a unit multiplier exists")
}

/// Smith form of the lattice spanned by `rows` together with `d·Z^ncols`.
pub fn smith_mod(rows: &[Vec<u64>], ncols: usize, d: u64) -> Smith {
    assert!(d >= 1);
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x % d).collect()).collect();
    let nr = m.len();
    let mut v: Vec<Vec<u64>> = (0..ncols).map(|i| (0..ncols).map(|j| u64::from(i == j) % d.max(2)).collect()).collect();
    let mut vinv = v.clone();
    if d == 1 {
        return Smith { diag: vec![1; ncols], v, vinv };
    }
    let mut diag = vec![d; ncols];
    let mut p = 0;
    while p < ncols && p < nr {
        // pivot with the smallest ideal
        let mut best: Option<(u64, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(p) {
            for (j, &x) in row.iter().enumerate().skip(p) {
                if x != 0 {
                    let g = gcd(x, d);
                    if best.is_none_or(|(bg, _, _)| g < bg) {
                        best = Some((g, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        m.swap(p, pi);
        if pj != p {
            for row in m.iter_mut() {
                row.swap(p, pj);
            }
            for row in v.iter_mut() {
                row.swap(p, pj);
            }
            vinv.swap(p, pj);
        }
        loop {
            let u = unit_multiplier(m[p][p], d);
            for x in m[p].iter_mut() {
                *x = mulmod(*x, u, d);
            }
            let g = m[p][p];
            let mut clean = true;
            for i in p + 1..nr {
                let b = m[i][p];
                if b == 0 {
                    continue;
                }
                if b.is_multiple_of(g) {
                    let q = (b / g) as i128;
                    for j in 0..ncols {
                        m[i][j] = md(m[i][j] as i128 - q * m[p][j] as i128, d);
                    }
                } else {
                    let (g2, a, c) = xgcd(g as i128, b as i128);
                    let (bb, gg) = (b as i128 / g2, g as i128 / g2);
                    for j in 0..ncols {
                        let (x, y) = (m[p][j] as i128, m[i][j] as i128);
                        m[p][j] = md(a * x + c * y, d);
                        m[i][j] = md(-bb * x + gg * y, d);
                    }
                    clean = false;
                    break;
                }
            }
            if !clean {
                continue;
            }
            for j in p + 1..ncols {
                let b = m[p][j];
                if b == 0 {
                    continue;
                }
                if b.is_multiple_of(g) {
                    let q = (b / g) as i128;
                    for row in m.iter_mut() {
                        row[j] = md(row[j] as i128 - q * row[p] as i128, d);
                    }
                    for row in v.iter_mut() {
                        row[j] = md(row[j] as i128 - q * row[p] as i128, d);
                    }
                    for t in 0..ncols {
                        vinv[p][t] = md(vinv[p][t] as i128 + q * vinv[j][t] as i128, d);
                    }
                } else {
                    let (g2, a, c) = xgcd(g as i128, b as i128);
                    let (bb, gg) = (b as i128 / g2, g as i128 / g2);
                    // columns (p, j) ← (a·p + c·j, −bb·p + gg·j)
                    for row in m.iter_mut().chain(v.iter_mut()) {
                        let (x, y) = (row[p] as i128, row[j] as i128);
                        row[p] = md(a * x + c * y, d);
                        row[j] = md(-bb * x + gg * y, d);
                    }
                    // rows (p, j) of the inverse ← (gg·p + bb·j, −c·p + a·j)
                    for t in 0..ncols {
                        let (x, y) = (vinv[p][t] as i128, vinv[j][t] as i128);
                        vinv[p][t] = md(gg * x + bb * y, d);
                        vinv[j][t] = md(-c * x + a * y, d);
                    }
                    clean = false;
                    break;
                }
            }
            if clean {
                break;
            }
        }
        diag[p] = m[p][p];
        p += 1;
    }
    Smith { diag, v, vinv }
}

fn factorize(mut x: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= x {
        if x.is_multiple_of(p) {
            let mut q = 1;
            while x.is_multiple_of(p) {
                x /= p;
                q *= p;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if x > 1 {
        out.push((x, x));
    }
    out
}

/// Invariant factors `d₁ | d₂ | …` (all > 1) of `⊕ Z/c_i`.
pub fn invariant_factors(orders: &[u64]) -> Vec<u64> {
    let mut by_prime: HashMap<u64, Vec<u64>> = HashMap::new();
    for &c in orders {
        for (p, q) in factorize(c) {
            by_prime.entry(p).or_default().push(q);
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for qs in by_prime.values_mut() {
        qs.sort_unstable_by(|a, b| b.cmp(a));
        for (i, &q) in qs.iter().enumerate() {
            out[len - 1 - i] *= q;
        }
    }
    out
}

/// The subquotient `top / bottom` of an ambient group, with coordinates.
#[derive(Debug, Clone)]
pub struct Quotient {
    moduli: Vec<u64>,
    top: Subgroup,
    bottom: Subgroup,
    gens: Vec<Vec<u64>>,
    /// Kept component orders (all > 1).
    factors: Vec<u64>,
    /// Columns of `V` for kept components.
    v: Vec<Vec<u64>>,
    /// Rows of `V⁻¹` for kept components.
    vinv: Vec<Vec<u64>>,
}

impl Quotient {
    pub fn new(top: &Subgroup, bottom: &Subgroup) -> Result<Self> {
        if top.moduli != bottom.moduli {
            return Err(Error::Format("subgroups of different groups".into()));
        }
        if !top.contains_all(bottom) {
            return Err(Error::VerificationFailed("bottom is not contained in top".into()));
        }
        let moduli = top.moduli.clone();
        let gens = top.generators();
        let orders: Vec<u64> = gens.iter().map(|g| element_order(&moduli, g)).collect();
        let r = gens.len();
        let d = orders.iter().fold(1, |a, &b| lcm(a, b));
        let phi = LinearMap::new(&orders, &moduli, gens.clone())?;
        let mut rel = phi.preimage(bottom).generators();
        for (i, &o) in orders.iter().enumerate() {
            let mut e = vec![0; r];
            e[i] = o % d.max(1);
            rel.push(e);
        }
        let sm = smith_mod(&rel, r, d);
        let keep: Vec<usize> = (0..r).filter(|&j| sm.diag[j] > 1).collect();
        Ok(Quotient {
            moduli,
            top: top.clone(),
            bottom: bottom.clone(),
            factors: keep.iter().map(|&j| sm.diag[j]).collect(),
            v: keep.iter().map(|&j| (0..r).map(|t| sm.v[t][j]).collect()).collect(),
            vinv: keep.iter().map(|&j| sm.vinv[j].clone()).collect(),
            gens,
        })
    }

    pub fn top(&self) -> &Subgroup {
        &self.top
    }

    pub fn bottom(&self) -> &Subgroup {
        &self.bottom
    }

    /// Orders of the coordinate components (not necessarily a divisor chain).
    pub fn component_orders(&self) -> &[u64] {
        &self.factors
    }

    pub fn invariant_factors(&self) -> Vec<u64> {
        invariant_factors(&self.factors)
    }

    pub fn order(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |a, &b| a * BigUint::from(b))
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Coordinates of the class of `x ∈ top`.
    pub fn coords(&self, x: &[u64]) -> Result<Vec<u64>> {
        let (rem, k) = self.top.reduce(x);
        if rem.iter().any(|&e| e != 0) {
            return Err(Error::VerificationFailed("element is not in the subgroup".into()));
        }
        Ok(self
            .v
            .iter()
            .zip(&self.factors)
            .map(|(col, &s)| k.iter().zip(col).fold(0, |acc, (&a, &b)| (acc + mulmod(a % s, b % s, s)) % s))
            .collect())
    }

    /// A representative in `top` of the class with coordinates `y`.
    pub fn rep(&self, y: &[u64]) -> Vec<u64> {
        let r = self.gens.len();
        let mut x = vec![0i128; r];
        for (yj, row) in y.iter().zip(&self.vinv) {
            for t in 0..r {
                x[t] += *yj as i128 * row[t] as i128;
            }
        }
        let terms: Vec<(i128, &[u64])> = x.iter().zip(&self.gens).map(|(&k, g)| (k, g.as_slice())).collect();
        combine(&self.moduli, &terms)
    }

    pub fn is_zero_class(&self, x: &[u64]) -> bool {
        self.bottom.contains(x)
    }

    /// Coordinates of every class, in lex order, when there are at most `limit`.
    pub fn classes(&self, limit: usize) -> Result<Vec<Vec<u64>>> {
        if self.order() > BigUint::from(limit) {
            return Err(Error::LimitExceeded(limit));
        }
        let mut out = vec![vec![]];
        for &s in &self.factors {
            out = out
                .into_iter()
                .flat_map(|p: Vec<u64>| {
                    (0..s).map(move |y| {
                        let mut q = p.clone();
                        q.push(y);
                        q
                    })
                })
                .collect();
        }
        Ok(out)
    }
}

/// Coordinates for a finite abelian group given by an addition table.
#[derive(Debug, Clone)]
pub struct GroupDecomposition {
    /// Component orders, all > 1.
    pub moduli: Vec<u64>,
    /// Element generating each component.
    pub gens: Vec<usize>,
    coords: Vec<Vec<u64>>,
    index: HashMap<Vec<u64>, usize>,
}

impl GroupDecomposition {
    pub fn coords(&self, x: usize) -> &[u64] {
        &self.coords[x]
    }

    pub fn element(&self, c: &[u64]) -> usize {
        let key: Vec<u64> = c.iter().zip(&self.moduli).map(|(&x, &m)| x % m).collect();
        self.index[&key]
    }

    pub fn size(&self) -> usize {
        self.coords.len()
    }
}

/// Decomposes `({0..n-1}, add, zero)` as `⊕ Z/c_j`; verifies the result.
pub fn decompose_group(n: usize, zero: usize, add: impl Fn(usize, usize) -> usize) -> Result<GroupDecomposition> {
    let fail = |m: &str| Error::DecompositionFailed(m.to_string());
    let mut coef: Vec<Option<Vec<u64>>> = vec![None; n];
    coef[zero] = Some(vec![]);
    let mut xs: Vec<usize> = Vec::new();
    let mut relations: Vec<Vec<i128>> = Vec::new();
    for cand in 0..n {
        if coef[cand].is_some() {
            continue;
        }
        let i = xs.len();
        xs.push(cand);
        let members: Vec<usize> = (0..n).filter(|&e| coef[e].is_some()).collect();
        let mut mult = zero;
        let mut k = 0u64;
        let rel = loop {
            k += 1;
            mult = add(mult, cand);
            if let Some(c) = &coef[mult] {
                break c.clone();
            }
            if k as usize > n {
                return Err(fail("element of infinite order"));
            }
        };
        let mut row: Vec<i128> = rel.iter().map(|&c| -(c as i128)).collect();
        row.resize(i, 0);
        row.push(k as i128);
        relations.push(row);
        for &s in &members {
            let mut cur = s;
            for j in 1..k {
                cur = add(cur, cand);
                if coef[cur].is_some() {
                    return Err(fail("table is not an abelian group"));
                }
                let mut c = coef[s].clone().expect("member");
                c.resize(i, 0);
                c.push(j);
                coef[cur] = Some(c);
            }
        }
    }
    let r = xs.len();
    let d = n as u64;
    let rows: Vec<Vec<u64>> = relations
        .iter()
        .map(|row| (0..r).map(|j| md(*row.get(j).unwrap_or(&0), d)).collect())
        .collect();
    let sm = smith_mod(&rows, r, d);
    let keep: Vec<usize> = (0..r).filter(|&j| sm.diag[j] > 1).collect();
    let moduli: Vec<u64> = keep.iter().map(|&j| sm.diag[j]).collect();
    let scalar = |k: u64, x: usize| (0..k).fold(zero, |acc, _| add(acc, x));
    let gens: Vec<usize> = keep
        .iter()
        .map(|&j| (0..r).fold(zero, |acc, t| add(acc, scalar(sm.vinv[j][t] % d, xs[t]))))
        .collect();
    let mut coords = Vec::with_capacity(n);
    let mut index = HashMap::new();
    for (e, c) in coef.iter().enumerate() {
        let mut c = c.clone().ok_or_else(|| fail("element not reached"))?;
        c.resize(r, 0);
        let y: Vec<u64> = keep
            .iter()
            .zip(&moduli)
            .map(|(&j, &s)| (0..r).fold(0, |acc, t| (acc + mulmod(c[t] % s, sm.v[t][j] % s, s)) % s))
            .collect();
        if index.insert(y.clone(), e).is_some() {
            return Err(fail("coordinates are not injective"));
        }
        coords.push(y);
    }
    let dec = GroupDecomposition { moduli, gens, coords, index };
    for x in 0..n {
        for y in 0..n {
            let s: Vec<u64> =
                dec.coords[x].iter().zip(&dec.coords[y]).zip(&dec.moduli).map(|((a, b), m)| (a + b) % m).collect();
            if dec.index.get(&s) != Some(&add(x, y)) {
                return Err(fail("coordinates do not respect addition"));
            }
        }
    }
    Ok(dec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn brute_span(moduli: &[u64], gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
        let mut set = BTreeSet::from([vec![0; moduli.len()]]);
        let mut frontier = vec![vec![0; moduli.len()]];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y: Vec<u64> = x.iter().zip(g).zip(moduli).map(|((a, b), m)| (a + b) % m).collect();
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    #[test]
    fn xgcd_identity() {
        for (x, y) in [(6, 10), (0, 5), (7, 0), (-4, 6), (12, 18)] {
            let (g, a, b) = xgcd(x, y);
            assert_eq!(a * x + b * y, g);
            assert_eq!(g, num_integer_gcd(x, y));
        }
    }

    fn num_integer_gcd(x: i128, y: i128) -> i128 {
        if y == 0 {
            x.abs()
        } else {
            num_integer_gcd(y, x % y)
        }
    }

    #[test]
    fn howell_examples() {
        let m = [4, 6, 2];
        let s = Subgroup::generated(&m, &[vec![2, 3, 1]]);
        assert_eq!(s.order(), BigUint::from(2u32));
        let s = Subgroup::generated(&m, &[vec![1, 1, 1]]);
        assert_eq!(s.order(), BigUint::from(12u32));
        assert_eq!(Subgroup::full(&m).order(), BigUint::from(48u32));
        assert!(Subgroup::zero(&m).is_zero());
        let a = Subgroup::generated(&m, &[vec![2, 0, 0], vec![0, 3, 1]]);
        let b = Subgroup::generated(&m, &[vec![0, 3, 1], vec![2, 0, 0]]);
        assert_eq!(a, b);
    }

    #[test]
    fn kernels_and_quotients() {
        // Z/4 → Z/2, x ↦ x mod 2
        let f = LinearMap::new(&[4], &[2], vec![vec![1]]).unwrap();
        assert_eq!(f.kernel().order(), BigUint::from(2u32));
        assert!(LinearMap::new(&[3], &[2], vec![vec![1]]).is_err());
        let full = Subgroup::full(&[4, 6]);
        let sub = Subgroup::generated(&[4, 6], &[vec![2, 3]]);
        let q = Quotient::new(&full, &sub).unwrap();
        assert_eq!(q.order(), BigUint::from(12u32));
        assert_eq!(q.invariant_factors(), vec![12]);
        for c in q.classes(100).unwrap() {
            let x = q.rep(&c);
            assert_eq!(q.coords(&x).unwrap(), c);
        }
        assert!(q.is_zero_class(&[2, 3]));
        assert_eq!(q.coords(&[2, 3]).unwrap(), vec![0; q.component_orders().len()]);
    }

    #[test]
    fn invariant_factor_examples() {
        assert_eq!(invariant_factors(&[2, 3]), vec![6]);
        assert_eq!(invariant_factors(&[2, 2, 4]), vec![2, 2, 4]);
        assert_eq!(invariant_factors(&[6, 4]), vec![2, 12]);
        assert!(invariant_factors(&[1]).is_empty());
    }

    #[test]
    fn decompositions() {
        let z12 = decompose_group(12, 0, |a, b| (a + b) % 12).unwrap();
        assert_eq!(invariant_factors(&z12.moduli), vec![12]);
        let k4 = decompose_group(4, 0, |a, b| a ^ b).unwrap();
        assert_eq!(k4.moduli, vec![2, 2]);
        // Z/2 × Z/6 encoded as 6a + b
        let g = decompose_group(12, 0, |x, y| ((x / 6 + y / 6) % 2) * 6 + (x % 6 + y % 6) % 6).unwrap();
        assert_eq!(invariant_factors(&g.moduli), vec![2, 6]);
        assert!(decompose_group(3, 0, |a, b| (a * b) % 3).is_err());
        let t = decompose_group(1, 0, |_, _| 0).unwrap();
        assert!(t.moduli.is_empty());
    }

    proptest! {
        #[test]
        fn howell_matches_brute_force(
            moduli in proptest::collection::vec(1u64..7, 1..4),
            raw in proptest::collection::vec(proptest::collection::vec(0u64..12, 4), 0..4),
            probe in proptest::collection::vec(0u64..12, 4),
        ) {
            let k = moduli.len();
            let gens: Vec<Vec<u64>> = raw.iter().map(|g| g[..k].iter().zip(&moduli).map(|(x, m)| x % m).collect()).collect();
            let s = Subgroup::generated(&moduli, &gens);
            let span = brute_span(&moduli, &gens);
            prop_assert_eq!(s.order(), BigUint::from(span.len()));
            let p: Vec<u64> = probe[..k].iter().zip(&moduli).map(|(x, m)| x % m).collect();
            prop_assert_eq!(s.contains(&p), span.contains(&p));
            let elems: BTreeSet<Vec<u64>> = s.elements(10_000).unwrap().into_iter().collect();
            prop_assert_eq!(elems, span);
        }

        #[test]
        fn lattice_operations(
            moduli in proptest::collection::vec(1u64..7, 1..4),
            ga in proptest::collection::vec(proptest::collection::vec(0u64..12, 4), 0..3),
            gb in proptest::collection::vec(proptest::collection::vec(0u64..12, 4), 0..3),
        ) {
            let k = moduli.len();
            let cut = |g: &Vec<Vec<u64>>| -> Vec<Vec<u64>> { g.iter().map(|v| v[..k].to_vec()).collect() };
            let (ga, gb) = (cut(&ga), cut(&gb));
            let a = Subgroup::generated(&moduli, &ga);
            let b = Subgroup::generated(&moduli, &gb);
            let sa = brute_span(&moduli, &ga);
            let sb = brute_span(&moduli, &gb);
            let meet: BTreeSet<Vec<u64>> = sa.intersection(&sb).cloned().collect();
            prop_assert_eq!(a.intersect(&b).order(), BigUint::from(meet.len()));
            let all: Vec<Vec<u64>> = ga.iter().chain(&gb).cloned().collect();
            prop_assert_eq!(a.join(&b).order(), BigUint::from(brute_span(&moduli, &all).len()));
            prop_assert_eq!(a.join(&b), b.join(&a));
            let q = Quotient::new(&a.join(&b), &b).unwrap();
            prop_assert_eq!(q.order() * b.order(), a.join(&b).order());
            for x in sa.iter().take(20) {
                let c = q.coords(x).unwrap();
                let back = q.rep(&c);
                prop_assert!(b.contains(&reduce_vec(&moduli, &back.iter().zip(x).map(|(&p, &q)| p as i128 - q as i128).collect::<Vec<_>>())));
            }
        }

        #[test]
        fn preimage_matches_brute_force(
            from in proptest::collection::vec(1u64..5, 1..3),
            to in proptest::collection::vec(1u64..5, 1..3),
            entries in proptest::collection::vec(0u64..20, 9),
        ) {
            // make the matrix well defined by scaling each row
            let rows: Vec<Vec<u64>> = (0..from.len()).map(|i| {
                (0..to.len()).map(|j| {
                    let c = to[j];
                    let unit = c / gcd(from[i], c);
                    (entries[i * 3 + j] * unit) % c
                }).collect()
            }).collect();
            let f = LinearMap::new(&from, &to, rows).unwrap();
            let all = Subgroup::full(&from).elements(1000).unwrap();
            let kernel: BTreeSet<Vec<u64>> = all.iter().filter(|x| f.apply(x).iter().all(|&v| v == 0)).cloned().collect();
            let got: BTreeSet<Vec<u64>> = f.kernel().elements(1000).unwrap().into_iter().collect();
            prop_assert_eq!(got, kernel);
            let img: BTreeSet<Vec<u64>> = all.iter().map(|x| f.apply(x)).collect();
            prop_assert_eq!(f.image(&Subgroup::full(&from)).order(), BigUint::from(img.len()));
            for y in &img {
                let x = f.solve(y).unwrap();
                prop_assert_eq!(&f.apply(&x), y);
            }
            let outside = Subgroup::full(&to).elements(1000).unwrap().into_iter().find(|y| !img.contains(y));
            if let Some(y) = outside {
                prop_assert!(f.solve(&y).is_none());
            }
        }
    }
}
