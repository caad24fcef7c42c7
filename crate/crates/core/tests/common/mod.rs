//! Generators and checks shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use tdd::cnf::CnfFormula;
use tdd::diagram::Diagram;
use tdd::oracle::BoolFunTable;
use tdd::vtree::{Shape, Vtree};
use tdd::Var;

pub fn vars(n: u32) -> Vec<Var> {
    (1..=n).map(Var).collect()
}

/// Uniformly shuffled leaves, random split points.
pub fn random_vtree(rng: &mut StdRng, vs: &[Var]) -> Vtree {
    let mut vs = vs.to_vec();
    vs.shuffle(rng);
    fn go(rng: &mut StdRng, vs: &[Var]) -> Shape {
        if vs.len() == 1 {
            return Shape::Leaf(vs[0]);
        }
        let k = rng.gen_range(1..vs.len());
        Shape::node(go(rng, &vs[..k]), go(rng, &vs[k..]))
    }
    Vtree::from_shape(&go(rng, &vs)).unwrap()
}

pub fn random_cnf(rng: &mut StdRng, n: u32, m: usize, max_len: usize) -> CnfFormula {
    let clauses: Vec<Vec<i64>> = (0..m)
        .map(|_| {
            let len = rng.gen_range(1..=max_len.min(n as usize));
            let mut vs: Vec<u32> = (1..=n).collect();
            vs.shuffle(rng);
            vs[..len].iter().map(|&v| if rng.gen_bool(0.5) { v as i64 } else { -(v as i64) }).collect()
        })
        .collect();
    let refs: Vec<&[i64]> = clauses.iter().map(|c| c.as_slice()).collect();
    CnfFormula::from_dimacs_clauses(n, &refs)
}

pub fn random_table(rng: &mut StdRng, n: u32) -> BoolFunTable {
    let density: f64 = [0.05, 0.3, 0.5, 0.7, 0.95][rng.gen_range(0..5)];
    let rows: Vec<bool> = (0..1u64 << n).map(|_| rng.gen_bool(density)).collect();
    BoolFunTable::from_rows(vars(n), &rows).unwrap()
}

/// Clauses over every window of `k+1` consecutive variables: primal
/// treewidth `k`.
pub fn band_cnf(rng: &mut StdRng, n: u32, k: u32) -> CnfFormula {
    let mut cls = Vec::new();
    for i in 1..=n - k {
        for _ in 0..2 {
            let c: Vec<i64> = (i..=i + k).map(|v| if rng.gen_bool(0.5) { v as i64 } else { -(v as i64) }).collect();
            cls.push(c);
        }
    }
    let refs: Vec<&[i64]> = cls.iter().map(|c| c.as_slice()).collect();
    CnfFormula::from_dimacs_clauses(n, &refs)
}

/// Binary clauses on the edges of a `rows x cols` grid, variable
/// `r * cols + c + 1` column by column.
pub fn grid_cnf(rng: &mut StdRng, rows: u32, cols: u32) -> CnfFormula {
    let id = |r: u32, c: u32| (c * rows + r + 1) as i64;
    let mut sign = |v: i64| if rng.gen_bool(0.5) { v } else { -v };
    let mut cls = Vec::new();
    for c in 0..cols {
        for r in 0..rows {
            if r + 1 < rows {
                cls.push(vec![sign(id(r, c)), sign(id(r + 1, c))]);
            }
            if c + 1 < cols {
                cls.push(vec![sign(id(r, c)), sign(id(r, c + 1))]);
            }
        }
    }
    let refs: Vec<&[i64]> = cls.iter().map(|c| c.as_slice()).collect();
    CnfFormula::from_dimacs_clauses(rows * cols, &refs)
}

/// Same-family nodes have pairwise disjoint model sets: the model counts of
/// a family add up to the size of their union.
pub fn families_disjoint(d: &Diagram) -> bool {
    let tables = d.node_tables().unwrap();
    tables.iter().all(|fam| {
        let Some(first) = fam.first() else { return true };
        let mut union = first.clone();
        let mut sum = first.count_models();
        for t in &fam[1..] {
            union = union.zip_with(t, |a, b| a || b).unwrap();
            sum += t.count_models();
        }
        sum == union.count_models()
    })
}

/// Every assignment of a family's variables satisfies exactly one node.
pub fn is_full(d: &Diagram) -> bool {
    let tables = d.node_tables().unwrap();
    tables.iter().enumerate().all(|(t, fam)| {
        let rows = 1u64 << d.vtree().vars(t).len();
        (0..rows).all(|i| fam.iter().filter(|f| f.get(i)).count() == 1)
    })
}

pub fn arc(v: Vtree) -> Arc<Vtree> {
    Arc::new(v)
}
