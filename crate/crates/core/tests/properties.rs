use proptest::prelude::*;

use cext::algebra::io::{parse_algebra, write_algebra};
use cext::algebra::{groups, FiniteAlgebra};
use cext::commutator::{commutator, meet_relation, r1};
use cext::congruence::{all_congruences, cg, Partition};
use cext::termlang::{parse_term, Signature, Term};

const BUDGET: usize = 1 << 20;

fn term_strategy() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["x", "y", "z"]).prop_map(Term::var),
        Just(Term::App(2, vec![])),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::App(0, vec![a, b])),
            inner.prop_map(|a| Term::App(1, vec![a])),
        ]
    })
}

fn corpus() -> Vec<FiniteAlgebra> {
    vec![groups::cyclic(4), groups::klein(), groups::symmetric(3), groups::dihedral(4), groups::quaternion()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn term_display_parses_back(t in term_strategy()) {
        let sig: Signature = groups::group_signature();
        prop_assert_eq!(parse_term(&t.display(&sig), &sig).unwrap(), t);
    }

    #[test]
    fn algebra_text_round_trip(n in 1usize..5, seed in prop::collection::vec(0usize..5, 40)) {
        let sig = Signature::from_pairs(&[("f", 2), ("g", 1), ("c", 0)]).unwrap();
        let a = FiniteAlgebra::from_fn("rand", sig, n, |s, args| {
            let i = args.iter().fold(s, |acc, &x| acc * n + x);
            seed[i % seed.len()] % n
        }).unwrap();
        prop_assert_eq!(parse_algebra(&write_algebra(&a)).unwrap(), a);
    }

    #[test]
    fn commutator_is_monotone_and_below_meet(g in 0usize..5, i in 0usize..64, j in 0usize..64, k in 0usize..64) {
        let a = &corpus()[g];
        let cons = all_congruences(a, 1 << 10).unwrap();
        let (al, be, ga) = (&cons[i % cons.len()], &cons[j % cons.len()], &cons[k % cons.len()]);
        let c = commutator(a, al.partition(), be.partition(), BUDGET).unwrap();
        prop_assert!(c.partition().leq(al.meet(be).unwrap().partition()));
        prop_assert_eq!(&c, &commutator(a, be.partition(), al.partition(), BUDGET).unwrap());
        let big = al.join(ga).unwrap();
        let c2 = commutator(a, big.partition(), be.partition(), BUDGET).unwrap();
        prop_assert!(c.partition().leq(c2.partition()));
    }

    #[test]
    fn commbase_on_expanded_cyclic_groups(n in 2usize..9, mult in 0usize..9, i in 0usize..64, j in 0usize..64) {
        // Z_n with x ↦ mult·x has congruences Cg(0,d) for d | n.
        let a = groups::cyclic(n).with_operation("u", 1, (0..n).map(|x| ((mult * x) % n) as u32).collect()).unwrap();
        let cons = all_congruences(&a, 1 << 10).unwrap();
        let abelian: Vec<_> = cons.iter().filter(|c| commutator(&a, c.partition(), c.partition(), BUDGET).unwrap().is_zero()).collect();
        let al = abelian[i % abelian.len()].partition();
        let be = cons[j % cons.len()].partition();
        let lhs = al.meet(commutator(&a, be, be, BUDGET).unwrap().partition()).unwrap().pairs();
        prop_assert_eq!(lhs, meet_relation(al, &r1(&a, be, be, BUDGET).unwrap()));
    }

    #[test]
    fn principal_congruences_are_least(g in 0usize..5, x in 0usize..8, y in 0usize..8) {
        let a = &corpus()[g];
        let (x, y) = (x % a.size(), y % a.size());
        let c = cg(a, &[(x, y)]);
        for d in all_congruences(a, 1 << 10).unwrap() {
            if d.partition().related(x, y) {
                prop_assert!(c.partition().leq(d.partition()));
            }
        }
        prop_assert!(c.partition().related(x, y));
        prop_assert!(Partition::zero(a.size()).leq(c.partition()));
    }
}
