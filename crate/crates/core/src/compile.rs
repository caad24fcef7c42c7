//! Bottom-up compilation of CNF formulas and circuits.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::circuit::{Circuit, Gate, GateId};
use crate::cnf::CnfFormula;
use crate::diagram::{
    clause_tdd, constant_tdd, literal_tdd, single_model_tdd, validate_deterministic, Diagram, Label, NTdd, Node, NodeId,
    Pair, Tdd,
};
use crate::error::{Error, Result};
use crate::graph::{min_fill_td, TreeDecomp};
use crate::minimize::canonize;
use crate::oracle::BoolFunTable;
use crate::transform::{apply, conjoin, negate, BinOp};
use crate::var::{Lit, Var};
use crate::vtree::{VtreeId, VtreeNode};
use crate::vtree::{
    balanced_vtree, linear_vtree, vtree_from_circuit_td, vtree_from_incidence_td, vtree_from_primal_td, VarOrder,
    Vtree,
};

/// One step of a compilation: the canonical diagram after it, and the
/// product it was minimized from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub width: usize,
    pub size: usize,
    pub product_width: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VtreeKind {
    Balanced,
    Linear,
    PrimalTd,
    IncidenceTd,
}

impl std::str::FromStr for VtreeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "balanced" => VtreeKind::Balanced,
            "linear" => VtreeKind::Linear,
            "primal-td" => VtreeKind::PrimalTd,
            "incidence-td" => VtreeKind::IncidenceTd,
            _ => return Err(Error::Malformed(format!("unknown vtree kind `{s}`"))),
        })
    }
}

/// A vtree for `f`. Decomposition-based kinds use `td` when given, and a
/// min-fill decomposition of the matching graph otherwise.
pub fn cnf_vtree(f: &CnfFormula, kind: VtreeKind, td: Option<&TreeDecomp>) -> Result<Vtree> {
    match kind {
        VtreeKind::Balanced => Ok(balanced_vtree(&VarOrder::new(f.vars())?)),
        VtreeKind::Linear => Ok(linear_vtree(&VarOrder::new(f.vars())?)),
        VtreeKind::PrimalTd => {
            let own;
            let td = match td {
                Some(td) => td,
                None => {
                    own = min_fill_td(&f.primal_graph());
                    &own
                }
            };
            vtree_from_primal_td(td, f)
        }
        VtreeKind::IncidenceTd => {
            let own;
            let td = match td {
                Some(td) => td,
                None => {
                    own = min_fill_td(&f.incidence_graph());
                    &own
                }
            };
            vtree_from_incidence_td(td, f)
        }
    }
}

/// Vtree from a min-fill decomposition of the circuit graph.
pub fn circuit_vtree(c: &Circuit) -> Result<Vtree> {
    vtree_from_circuit_td(&min_fill_td(&c.graph()), c)
}

/// Conjoins the clauses one at a time in `order` (default: file order),
/// canonizing after every step.
pub fn compile_cnf(f: &CnfFormula, vtree: Arc<Vtree>, order: Option<&[usize]>) -> Result<(Tdd, Vec<Step>)> {
    for v in f.vars() {
        if !vtree.contains(v) {
            return Err(Error::UnknownVariable(v));
        }
    }
    let reordered;
    let f = match order {
        Some(o) => {
            reordered = f.reordered(o)?;
            &reordered
        }
        None => f,
    };
    let mut c = constant_tdd(true, vtree.clone());
    let mut log = Vec::with_capacity(f.clauses().len());
    for clause in f.clauses() {
        let ct = clause_tdd(clause, vtree.clone())?;
        let p = conjoin(&c, &ct)?;
        c = canonize(&p);
        log.push(Step { width: c.width(), size: c.size(), product_width: p.width() });
    }
    Ok((c, log))
}

/// Gate-by-gate compilation: inputs become literals, `not` negates, `and`/`or`
/// fold `apply` left to right; every result is canonized.
pub fn compile_circuit(circ: &Circuit, vtree: Arc<Vtree>) -> Result<(Tdd, Vec<Step>)> {
    if circ.vars() != vtree.all_vars() {
        return Err(Error::VtreeMismatch);
    }
    let mut done: BTreeMap<GateId, Tdd> = BTreeMap::new();
    let mut log = Vec::new();
    let record = |c: Tdd, product_width: usize, log: &mut Vec<Step>| -> Tdd {
        let m = canonize(&c);
        log.push(Step { width: m.width(), size: m.size(), product_width });
        m
    };
    for g in circ.topological_order()? {
        let res = match circ.gate(g) {
            Gate::Input(v) => canonize(&literal_tdd(Lit::pos(*v), vtree.clone())?),
            Gate::Not(a) => {
                let n = negate(&done[a]);
                let w = n.width();
                record(n, w, &mut log)
            }
            Gate::And(cs) | Gate::Or(cs) => {
                let and = matches!(circ.gate(g), Gate::And(_));
                let op = if and { BinOp::AND } else { BinOp::OR };
                match cs.split_first() {
                    None => canonize(&constant_tdd(and, vtree.clone())),
                    Some((first, rest)) => {
                        let mut acc = done[first].clone();
                        for c in rest {
                            let p = apply(op, &acc, &done[c])?;
                            let w = p.width();
                            acc = record(p, w, &mut log);
                        }
                        acc
                    }
                }
            }
        };
        done.insert(g, res);
    }
    Ok((done.remove(&circ.output()).unwrap(), log))
}

/// Canonical TDD of a truth table, as the union of single-model diagrams.
pub fn compile_table(f: &BoolFunTable, vtree: Arc<Vtree>) -> Result<Tdd> {
    if f.vars() != vtree.all_vars() {
        return Err(Error::VtreeMismatch);
    }
    let mut c = constant_tdd(false, vtree.clone());
    for i in f.models() {
        let m = single_model_tdd(&f.assignment_of(i), vtree.clone())?;
        c = canonize(&apply(BinOp::OR, &c, &m)?);
    }
    Ok(canonize(&c))
}

/// Canonical TDD of a truth table built directly from its subfunctions: the
/// nodes of family `t` are the distinct satisfiable restrictions of `f` by
/// assignments of the variables below `t`.
pub fn canonical_from_table(f: &BoolFunTable, vtree: Arc<Vtree>) -> Result<Tdd> {
    if f.vars() != vtree.all_vars() {
        return Err(Error::VtreeMismatch);
    }
    let n = f.num_vars();
    let bit = |v: Var| f.vars().binary_search(&v).unwrap();
    // class reps (as row-index bits) per vtree node
    let mut reps: Vec<Vec<u64>> = vec![Vec::new(); vtree.len()];
    let mut families: Vec<Vec<Node>> = vec![Vec::new(); vtree.len()];
    let class_at = |t: VtreeId, tau: u64, reps: &mut Vec<Vec<u64>>, tables: &mut HashMap<(VtreeId, Vec<bool>), NodeId>| {
        let inside: u64 = vtree.vars(t).iter().map(|&v| 1u64 << bit(v)).sum();
        let rest: Vec<usize> = (0..n).filter(|&i| inside >> i & 1 == 0).collect();
        let row: Vec<bool> = (0..1u64 << rest.len())
            .map(|j| {
                let mut i = tau;
                for (k, &p) in rest.iter().enumerate() {
                    i |= (j >> k & 1) << p;
                }
                f.get(i)
            })
            .collect();
        if !row.contains(&true) {
            return None;
        }
        let next = reps[t].len() as NodeId;
        let g = *tables.entry((t, row)).or_insert(next);
        if g == next {
            reps[t].push(tau);
        }
        Some(g)
    };
    let mut tables = HashMap::new();
    for t in vtree.bottom_up() {
        match vtree.node(t) {
            VtreeNode::Leaf(x) => {
                let one = 1u64 << bit(x);
                let a = class_at(t, 0, &mut reps, &mut tables);
                let b = class_at(t, one, &mut reps, &mut tables);
                let mut masks = vec![0u8; reps[t].len()];
                if let Some(a) = a {
                    masks[a as usize] |= 1;
                }
                if let Some(b) = b {
                    masks[b as usize] |= 2;
                }
                families[t] = masks.into_iter().map(|m| Node::Leaf(Label::from_mask(m))).collect();
            }
            VtreeNode::Internal(l, r) => {
                let mut pairs: Vec<Vec<Pair>> = Vec::new();
                for a in 0..reps[l].len() {
                    for b in 0..reps[r].len() {
                        let tau = reps[l][a] | reps[r][b];
                        if let Some(g) = class_at(t, tau, &mut reps, &mut tables) {
                            if g as usize == pairs.len() {
                                pairs.push(Vec::new());
                            }
                            pairs[g as usize].push((a as NodeId, b as NodeId));
                        }
                    }
                }
                families[t] = pairs.into_iter().map(Node::internal).collect();
            }
        }
    }
    if families[0].is_empty() {
        return Ok(canonize(&constant_tdd(false, vtree)));
    }
    let d = Diagram::new(vtree, families, 0)?;
    let c = validate_deterministic(NTdd::from(d)).map_err(|v| Error::Malformed(format!("{v:?}")))?;
    Ok(canonize(&c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{and_chain_circuit, parity_circuit, parse_circuit};
    use crate::cnf::parse_dimacs;
    use crate::format::write_tdd;
    use crate::oracle::fun_from_cnf;

    #[test]
    fn empty_and_unsat_formulas() {
        let f = CnfFormula::new(3, vec![]);
        let vt = Arc::new(cnf_vtree(&f, VtreeKind::Balanced, None).unwrap());
        let (c, log) = compile_cnf(&f, vt.clone(), None).unwrap();
        assert_eq!(c.count(), 8u32.into());
        assert!(log.is_empty());
        let f = parse_dimacs("p cnf 3 2\n1 2 0\n0\n").unwrap();
        let (c, _) = compile_cnf(&f, vt, None).unwrap();
        assert!(c.is_empty_marker());
    }

    #[test]
    fn clause_order_does_not_matter() {
        let f = parse_dimacs("p cnf 5 4\n1 -2 0\n2 3 -4 0\n-1 4 5 0\n-3 -5 0\n").unwrap();
        for kind in [VtreeKind::Balanced, VtreeKind::Linear, VtreeKind::PrimalTd, VtreeKind::IncidenceTd] {
            let vt = Arc::new(cnf_vtree(&f, kind, None).unwrap());
            let (a, _) = compile_cnf(&f, vt.clone(), None).unwrap();
            let (b, _) = compile_cnf(&f, vt.clone(), Some(&[3, 1, 0, 2])).unwrap();
            assert_eq!(write_tdd(&a), write_tdd(&b));
            assert_eq!(a.truth_table().unwrap(), fun_from_cnf(&f).unwrap());
            let t = compile_table(&fun_from_cnf(&f).unwrap(), vt.clone()).unwrap();
            assert_eq!(write_tdd(&a), write_tdd(&t));
            let t = canonical_from_table(&fun_from_cnf(&f).unwrap(), vt).unwrap();
            assert_eq!(write_tdd(&a), write_tdd(&t));
        }
    }

    #[test]
    fn circuits() {
        let c = parse_circuit("input 1\ninput 2\nand 3 1 2\noutput 3\n").unwrap();
        let vt = Arc::new(circuit_vtree(&c).unwrap());
        assert_eq!(compile_circuit(&c, vt).unwrap().0.count(), 1u32.into());
        let p = parity_circuit(4);
        let vt = Arc::new(circuit_vtree(&p).unwrap());
        let (t, _) = compile_circuit(&p, vt).unwrap();
        assert_eq!(t.count(), 8u32.into());
        let a = and_chain_circuit(6);
        let vt = Arc::new(circuit_vtree(&a).unwrap());
        assert_eq!(compile_circuit(&a, vt).unwrap().0.count(), 1u32.into());
    }

    #[test]
    fn vtree_must_cover_formula() {
        let f = CnfFormula::from_dimacs_clauses(3, &[&[1, 3]]);
        let vt = Arc::new(balanced_vtree(&VarOrder::natural(2).unwrap()));
        assert!(compile_cnf(&f, vt, None).is_err());
    }
}
