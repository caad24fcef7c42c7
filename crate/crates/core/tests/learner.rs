mod common;

use common::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use tdd::compile::canonical_from_table;
use tdd::diagram::single_model_tdd;
use tdd::learn::{learn, tdd_teacher, truth_table_teacher};
use tdd::minimize::equivalent;
use tdd::vtree::{balanced_vtree, VarOrder};
use tdd::Assignment;

#[test]
fn learns_canonical_tdds_of_random_tables() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..40 {
        let n = 1 + (rand::Rng::gen_range(&mut rng, 0..6));
        let vt = arc(random_vtree(&mut rng, &vars(n)));
        let f = random_table(&mut rng, n);
        let target = canonical_from_table(&f, vt.clone()).unwrap();
        let (h, stats) = learn(vt, &mut truth_table_teacher(f.clone())).unwrap();
        assert_eq!(h.truth_table().unwrap(), f);
        assert_eq!(h.diagram().family_sizes(), target.diagram().family_sizes());
        let s = target.diagram().num_nodes();
        assert!(stats.equivalence_queries <= s + 1);
        assert!(stats.membership_queries <= 4 * (s + 1) * (s + 1) * n as usize);
    }
}

/// A single model of 8 variables over a balanced vtree. Query counts are
/// pinned from the first run.
#[test]
fn single_model_from_a_tdd_teacher() {
    let vs = vars(8);
    let vt = arc(balanced_vtree(&VarOrder::new(vs.clone()).unwrap()));
    let tau = Assignment::from_bits(&vs, 0b1011_0010);
    let target = single_model_tdd(&tau, vt.clone()).unwrap();
    let (h, stats) = learn(vt, &mut tdd_teacher(target.clone())).unwrap();
    assert!(equivalent(&h, &target).unwrap());
    assert_eq!(h.count(), 1u32.into());
    assert_eq!((stats.membership_queries, stats.equivalence_queries), PINNED);
}

const PINNED: (usize, usize) = (17, 3);
