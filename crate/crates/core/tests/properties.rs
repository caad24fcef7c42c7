//! Randomized properties of the transformations, checked against truth
//! tables over at most 7 variables.

mod common;

use common::*;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tdd::compile::{canonical_from_table, compile_table};
use tdd::convert::{obdd_to_tdd, tdd_to_obdd, Obdd};
use tdd::diagram::Tdd;
use tdd::minimize::{canonize, equivalent};
use tdd::oracle::BoolFunTable;
use tdd::transform::{apply, condition, determinize, forget, negate, BinOp};
use tdd::vtree::{linear_vtree, VarOrder};
use tdd::Var;

struct Case {
    f: BoolFunTable,
    c: Tdd,
}

fn case(seed: u64, n: u32) -> Case {
    let mut rng = StdRng::seed_from_u64(seed);
    let vt = arc(random_vtree(&mut rng, &vars(n)));
    let f = random_table(&mut rng, n);
    let c = compile_table(&f, vt).unwrap();
    Case { f, c }
}

fn pair(seed: u64, n: u32) -> (Case, Case) {
    let a = case(seed, n);
    let mut rng = StdRng::seed_from_u64(seed ^ 0x5555);
    let g = random_table(&mut rng, n);
    let c = compile_table(&g, a.c.diagram().vtree_arc().clone()).unwrap();
    (a, Case { f: g, c })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn compiled_table_round_trips(seed in any::<u64>(), n in 1u32..=7) {
        let k = case(seed, n);
        prop_assert_eq!(k.c.truth_table().unwrap(), k.f.clone());
        prop_assert_eq!(k.c.count().to_u64().unwrap(), k.f.count_models());
    }

    #[test]
    fn negation(seed in any::<u64>(), n in 1u32..=7) {
        let k = case(seed, n);
        let neg = negate(&k.c);
        prop_assert_eq!(neg.truth_table().unwrap(), k.f.not());
        prop_assert!(is_full(neg.diagram()));
    }

    #[test]
    fn binary_operations(seed in any::<u64>(), n in 1u32..=6, table in 0u8..16) {
        let (a, b) = pair(seed, n);
        let op = BinOp::new(table).unwrap();
        let r = apply(op, &a.c, &b.c).unwrap();
        prop_assert_eq!(r.truth_table().unwrap(), a.f.zip_with(&b.f, |x, y| op.eval(x, y)).unwrap());
        prop_assert!(r.diagram().width() <= (a.c.diagram().width() + 1) * (b.c.diagram().width() + 1));
    }

    #[test]
    fn conditioning(seed in any::<u64>(), n in 2u32..=7, x in 1u32..=7, b: bool) {
        let k = case(seed, n);
        let x = Var(1 + (x - 1) % n);
        let r = condition(&k.c, x, b).unwrap();
        let tau = tdd::Assignment::from_pairs([(x, b)]);
        let rest = r.truth_table().unwrap();
        prop_assert_eq!(rest, k.f.restrict(&tau).unwrap());
    }

    #[test]
    fn conditioning_the_last_variable_is_refused(seed in any::<u64>()) {
        let k = case(seed, 1);
        prop_assert!(condition(&k.c, Var(1), true).is_err());
    }

    #[test]
    fn forgetting(seed in any::<u64>(), n in 2u32..=6, mask in 1u64..64) {
        let k = case(seed, n);
        let ys: Vec<Var> = (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).map(Var).collect();
        prop_assume!(!ys.is_empty() && ys.len() < n as usize);
        let g = forget(&k.c, &ys).unwrap();
        let d = determinize(&g);
        prop_assert_eq!(d.truth_table().unwrap(), k.f.exists(&ys).unwrap());
    }

    #[test]
    fn canonical_form_is_unique(seed in any::<u64>(), n in 1u32..=6) {
        let (a, _) = pair(seed, n);
        let canon = canonize(&a.c);
        let direct = canonical_from_table(&a.f, a.c.diagram().vtree_arc().clone()).unwrap();
        prop_assert_eq!(canon.diagram().family_sizes(), direct.diagram().family_sizes());
        prop_assert!(equivalent(&canon, &direct).unwrap());
        // canonize is idempotent
        prop_assert_eq!(canonize(&canon).diagram().family_sizes(), canon.diagram().family_sizes());
    }

    #[test]
    fn equivalence_agrees_with_tables(seed in any::<u64>(), n in 1u32..=6) {
        let (a, b) = pair(seed, n);
        prop_assert_eq!(equivalent(&a.c, &b.c).unwrap(), a.f == b.f);
        prop_assert!(equivalent(&a.c, &canonize(&a.c)).unwrap());
    }

    #[test]
    fn obdd_round_trip(seed in any::<u64>(), n in 1u32..=7) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = random_table(&mut rng, n);
        let mut vs = vars(n);
        for i in (1..vs.len()).rev() {
            vs.swap(i, rng.gen_range(0..=i));
        }
        let order = VarOrder::new(vs).unwrap();
        let b = Obdd::from_table(&f, &order).unwrap();
        let c = obdd_to_tdd(&b).unwrap();
        prop_assert_eq!(c.truth_table().unwrap(), f.clone());
        prop_assert!(c.diagram().size() <= 3 * b.level_complete().size());
        prop_assert_eq!(tdd_to_obdd(&c).unwrap().reduce(), b);
        let lin = linear_vtree(&order.reversed());
        prop_assert!(c.diagram().vtree() == &lin);
    }
}
