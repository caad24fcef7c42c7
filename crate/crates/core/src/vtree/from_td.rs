//! Vtrees derived from tree decompositions.
//!
//! Each variable `x` gets a leaf on the edge above `t(x)`, the shallowest bag
//! containing `x`. Bags whose subtree holds no variable disappear, a bag with
//! several nonempty children folds them left to right, and the leaves hung
//! above one bag are chained in increasing variable order.

use std::collections::BTreeMap;

use super::{Shape, Vtree};
use crate::circuit::{Circuit, Gate};
use crate::cnf::CnfFormula;
use crate::error::{Error, Result};
use crate::graph::{TreeDecomp, Vertex};
use crate::var::Var;

/// Leaf-attachment construction for the given `(vertex, variable)` pairs.
/// Does not validate `td`.
pub fn vtree_from_td(td: &TreeDecomp, leaves: &[(Vertex, Var)]) -> Result<Vtree> {
    if leaves.is_empty() {
        return Err(Error::EmptyOrder);
    }
    let depth = td.depths();
    let preorder = td.preorder();
    let mut rank = vec![0; td.len()];
    for (i, &t) in preorder.iter().enumerate() {
        rank[t] = i;
    }
    let mut hung: BTreeMap<usize, Vec<Var>> = BTreeMap::new();
    for &(vertex, var) in leaves {
        let top = (0..td.len())
            .filter(|&t| td.bag(t).contains(&vertex))
            .min_by_key(|&t| (depth[t], rank[t]))
            .ok_or_else(|| Error::InvalidDecomposition(format!("vertex {vertex} is in no bag")))?;
        hung.entry(top).or_default().push(var);
    }
    for vs in hung.values_mut() {
        vs.sort_unstable();
    }
    let mut built: Vec<Option<Shape>> = vec![None; td.len()];
    for &t in preorder.iter().rev() {
        let mut cur: Option<Shape> = None;
        for &c in td.children(t) {
            if let Some(s) = built[c].take() {
                cur = Some(match cur {
                    None => s,
                    Some(acc) => Shape::node(acc, s),
                });
            }
        }
        for &x in hung.get(&t).into_iter().flatten() {
            cur = Some(match cur {
                None => Shape::Leaf(x),
                Some(acc) => Shape::node(acc, Shape::Leaf(x)),
            });
        }
        built[t] = cur;
    }
    Vtree::from_shape(&built[0].take().expect("at least one variable"))
}

/// Vtree from a tree decomposition of the primal graph of `f`.
pub fn vtree_from_primal_td(td: &TreeDecomp, f: &CnfFormula) -> Result<Vtree> {
    td.validate(&f.primal_graph())?;
    let leaves: Vec<(Vertex, Var)> = f.vars().into_iter().map(|v| (v.0, v)).collect();
    vtree_from_td(td, &leaves)
}

/// Vtree from a tree decomposition of the incidence graph of `f`
/// (clause `j` is vertex `f.clause_vertex(j)`).
pub fn vtree_from_incidence_td(td: &TreeDecomp, f: &CnfFormula) -> Result<Vtree> {
    td.validate(&f.incidence_graph())?;
    let leaves: Vec<(Vertex, Var)> = f.vars().into_iter().map(|v| (v.0, v)).collect();
    vtree_from_td(td, &leaves)
}

/// Vtree from a tree decomposition of the circuit graph. The output gate is
/// added to every bag before validation.
pub fn vtree_from_circuit_td(td: &TreeDecomp, c: &Circuit) -> Result<Vtree> {
    let td = td.with_vertex_everywhere(c.output());
    td.validate(&c.graph())?;
    let leaves: Vec<(Vertex, Var)> = c
        .gates()
        .iter()
        .filter_map(|(&id, g)| if let Gate::Input(v) = g { Some((id, *v)) } else { None })
        .collect();
    vtree_from_td(&td, &leaves)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::graph::min_fill_td;

    fn bag(vs: &[u32]) -> BTreeSet<u32> {
        vs.iter().copied().collect()
    }

    #[test]
    fn single_bag_single_clause() {
        let f = CnfFormula::from_dimacs_clauses(2, &[&[1, 2]]);
        let td = TreeDecomp::new(vec![bag(&[1, 2])], &[]).unwrap();
        let t = vtree_from_primal_td(&td, &f).unwrap();
        assert_eq!(t.all_vars(), &[Var(1), Var(2)]);
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn path_decomposition_gives_linear_vtree() {
        let f = CnfFormula::from_dimacs_clauses(4, &[&[1, 2], &[2, 3], &[3, 4]]);
        let td = TreeDecomp::new(vec![bag(&[1, 2]), bag(&[2, 3]), bag(&[3, 4])], &[(0, 1), (1, 2)]).unwrap();
        let t = vtree_from_primal_td(&td, &f).unwrap();
        let leaf = |v| Shape::Leaf(Var(v));
        assert_eq!(
            t.shape(),
            Shape::node(Shape::node(Shape::node(leaf(4), leaf(3)), leaf(1)), leaf(2))
        );
    }

    #[test]
    fn incidence_star() {
        let f = CnfFormula::from_dimacs_clauses(3, &[&[1, 2], &[2, 3]]);
        let (c0, c1) = (f.clause_vertex(0), f.clause_vertex(1));
        let td = TreeDecomp::new(
            vec![bag(&[2]), bag(&[2, c0]), bag(&[1, c0]), bag(&[2, c1]), bag(&[3, c1])],
            &[(0, 1), (1, 2), (0, 3), (3, 4)],
        )
        .unwrap();
        let t = vtree_from_incidence_td(&td, &f).unwrap();
        assert_eq!(t.all_vars(), &[Var(1), Var(2), Var(3)]);
    }

    #[test]
    fn invalid_decomposition_rejected() {
        let f = CnfFormula::from_dimacs_clauses(3, &[&[1, 2], &[2, 3]]);
        let td = TreeDecomp::new(vec![bag(&[1, 2]), bag(&[3])], &[(0, 1)]).unwrap();
        assert!(matches!(vtree_from_primal_td(&td, &f), Err(Error::InvalidDecomposition(_))));
    }

    #[test]
    fn circuit_single_and() {
        let c = crate::circuit::and_chain_circuit(2);
        let td = min_fill_td(&c.graph());
        let t = vtree_from_circuit_td(&td, &c).unwrap();
        assert_eq!(t.all_vars(), &[Var(1), Var(2)]);
        assert_eq!(t.len(), 3);
    }
}
