//! Standard finite groups as algebras over `mul/2, inv/1, e/0`, plus the
//! group and abelian-group varieties.

use super::FiniteAlgebra;
use crate::termlang::{parse_identity, parse_term, Signature, VarietySpec};

pub fn group_signature() -> Signature {
    Signature::from_pairs(&[("mul", 2), ("inv", 1), ("e", 0)]).expect("static signature")
}

/// Builds a group algebra from its multiplication; `0` must be the identity.
pub fn from_mul(name: &str, n: usize, mul: impl Fn(usize, usize) -> usize) -> FiniteAlgebra {
    let inv: Vec<usize> = (0..n)
        .map(|x| (0..n).find(|&y| mul(x, y) == 0).expect("every element has an inverse"))
        .collect();
    FiniteAlgebra::from_fn(name, group_signature(), n, |s, a| match s {
        0 => mul(a[0], a[1]),
        1 => inv[a[0]],
        _ => 0,
    })
    .expect("group tables are well formed")
}

pub fn cyclic(n: usize) -> FiniteAlgebra {
    from_mul(&format!("Z{n}"), n, |a, b| (a + b) % n)
}

/// `Z₂ × Z₂` with `(a,b) ↦ 2a+b`.
pub fn klein() -> FiniteAlgebra {
    from_mul("V4", 4, |a, b| a ^ b)
}

/// Dihedral group of order `2n`; `r^i s^j` is encoded as `i + n·j`.
pub fn dihedral(n: usize) -> FiniteAlgebra {
    from_mul(&format!("D{n}"), 2 * n, |a, b| {
        let (i, x) = (a % n, a / n);
        let (j, y) = (b % n, b / n);
        let k = if x == 0 { (i + j) % n } else { (i + n - j) % n };
        k + n * ((x + y) % 2)
    })
}

/// `Z_p × Z_p` with `(a,b) ↦ p·a + b`.
pub fn elementary(p: usize) -> FiniteAlgebra {
    from_mul(&format!("Z{p}^2"), p * p, |x, y| ((x / p + y / p) % p) * p + (x + y) % p)
}

/// Unitriangular `3×3` matrices over `Z_p`: `(a,b,c)·(a′,b′,c′) =
/// (a+a′, b+b′, c+c′+a·b′)`, encoded as `p²a + pb + c`.
pub fn heisenberg(p: usize) -> FiniteAlgebra {
    from_mul(&format!("Heis{p}"), p * p * p, |x, y| {
        let (a, b, c) = (x / (p * p), x / p % p, x % p);
        let (d, f, g) = (y / (p * p), y / p % p, y % p);
        ((a + d) % p) * p * p + ((b + f) % p) * p + (c + g + a * f) % p
    })
}

/// Quaternion group: `0..8` encode `1, i, j, k, -1, -i, -j, -k`.
pub fn quaternion() -> FiniteAlgebra {
    // Unit products among 1,i,j,k as (sign, unit).
    const T: [[(u8, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    from_mul("Q8", 8, |a, b| {
        let (sa, ua) = (a / 4, a % 4);
        let (sb, ub) = (b / 4, b % 4);
        let (s, u) = T[ua][ub];
        ((sa + sb + s as usize) % 2) * 4 + u
    })
    .with_labels(
        ["1", "i", "j", "k", "-1", "-i", "-j", "-k"].iter().map(|s| s.to_string()).collect(),
    )
    .expect("eight labels")
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..k).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (1..k).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| p[j] > p[i - 1]).expect("exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

fn parity(p: &[usize]) -> usize {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2
}

fn perm_group(name: &str, perms: Vec<Vec<usize>>) -> FiniteAlgebra {
    let n = perms.len();
    let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed under composition");
    // (p·q)(x) = p(q(x))
    let table: Vec<usize> = (0..n * n)
        .map(|ab| {
            let (p, q) = (&perms[ab / n], &perms[ab % n]);
            let r: Vec<usize> = q.iter().map(|&x| p[x]).collect();
            index(&r)
        })
        .collect();
    let labels = perms
        .iter()
        .map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(""))
        .collect();
    from_mul(name, n, |a, b| table[a * n + b]).with_labels(labels).expect("labels match")
}

/// Symmetric group on `k` points; elements in lex order of one-line notation.
pub fn symmetric(k: usize) -> FiniteAlgebra {
    perm_group(&format!("S{k}"), permutations(k))
}

/// Alternating group on `k` points.
pub fn alternating(k: usize) -> FiniteAlgebra {
    perm_group(&format!("A{k}"), permutations(k).into_iter().filter(|p| parity(p) == 0).collect())
}

const GROUP_AXIOMS: [&str; 5] = [
    "mul(mul(x,y),z) = mul(x,mul(y,z))",
    "mul(e,x) = x",
    "mul(x,e) = x",
    "mul(inv(x),x) = e",
    "mul(x,inv(x)) = e",
];

fn variety(extra: &[&str]) -> VarietySpec {
    let sig = group_signature();
    let axioms = GROUP_AXIOMS
        .iter()
        .chain(extra)
        .map(|a| parse_identity(a, &sig).expect("static axiom"))
        .collect();
    let m = parse_term("mul(mul(x,inv(y)),z)", &sig).expect("static term");
    VarietySpec::new(sig, axioms, m).expect("static variety")
}

/// Groups with `m(x,y,z) = x·y⁻¹·z`.
pub fn group_variety() -> VarietySpec {
    variety(&[])
}

/// Groups satisfying extra identities (e.g. an exponent law).
pub fn group_variety_with(extra: &[&str]) -> VarietySpec {
    variety(extra)
}

/// Identities of `S₃` used for its variety: `x⁶ = e` and `[x², y²] = e`.
pub fn s3_variety() -> VarietySpec {
    variety(&[
        "mul(mul(mul(x,x),mul(x,x)),mul(x,x)) = e",
        "mul(mul(x,x),mul(y,y)) = mul(mul(y,y),mul(x,x))",
    ])
}

/// Groups of exponent 3.
pub fn exponent3_variety() -> VarietySpec {
    variety(&["mul(x,mul(x,x)) = e"])
}

/// `add/2, neg/1, zero/0, g/1`: abelian groups with one extra unary symbol.
pub fn unary_abelian_signature() -> Signature {
    Signature::from_pairs(&[("add", 2), ("neg", 1), ("zero", 0), ("g", 1)]).expect("static signature")
}

/// `⟨Z_n, g⟩` for a unary map `g` on residues.
pub fn cyclic_with_unary(n: usize, g: impl Fn(usize) -> usize) -> FiniteAlgebra {
    FiniteAlgebra::from_fn(&format!("Z{n}g"), unary_abelian_signature(), n, |s, a| match s {
        0 => (a[0] + a[1]) % n,
        1 => (n - a[0]) % n,
        2 => 0,
        _ => g(a[0]) % n,
    })
    .expect("tables are well formed")
}

/// Abelian groups with an unconstrained unary `g`; `m(x,y,z) = x − y + z`.
pub fn unary_abelian_variety() -> VarietySpec {
    let sig = unary_abelian_signature();
    let axioms = [
        "add(add(x,y),z) = add(x,add(y,z))",
        "add(x,y) = add(y,x)",
        "add(x,zero) = x",
        "add(x,neg(x)) = zero",
    ]
    .iter()
    .map(|a| parse_identity(a, &sig).expect("static axiom"))
    .collect();
    let m = parse_term("add(add(x,neg(y)),z)", &sig).expect("static term");
    VarietySpec::new(sig, axioms, m).expect("static variety")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::satisfies;

    #[test]
    fn orders_and_axioms() {
        let v = group_variety();
        for g in [cyclic(4), klein(), dihedral(4), quaternion(), symmetric(3), alternating(4)] {
            for ax in &v.axioms {
                assert!(satisfies(&g, ax), "{} fails {}", g.name(), ax.display(&v.signature));
            }
        }
        assert_eq!(symmetric(3).size(), 6);
        assert_eq!(alternating(5).size(), 60);
        assert_eq!(dihedral(4).size(), 8);
        for ax in &s3_variety().axioms {
            assert!(satisfies(&symmetric(3), ax));
        }
        for ax in &exponent3_variety().axioms {
            assert!(satisfies(&heisenberg(3), ax) && satisfies(&elementary(3), ax));
        }
        assert!(!satisfies(&dihedral(4), &s3_variety().axioms[5]));
    }

    #[test]
    fn quaternion_relations() {
        let q = quaternion();
        // i² = j² = k² = ijk = -1
        assert_eq!(q.apply(0, &[1, 1]), 4);
        assert_eq!(q.apply(0, &[2, 2]), 4);
        assert_eq!(q.apply(0, &[q.apply(0, &[1, 2]), 3]), 4);
    }

    #[test]
    fn dihedral_relations() {
        let d = dihedral(4);
        // s r s = r⁻¹
        let srs = d.apply(0, &[d.apply(0, &[4, 1]), 4]);
        assert_eq!(srs, 3);
    }
}
