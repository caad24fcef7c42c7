//! Transformations: zero elimination, variable removal, conditioning,
//! fullness, negation, conjunction, apply, forgetting and determinization.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::diagram::{empty_marker, Diagram, Label, NTdd, Node, NodeId, Pair, Tdd};
use crate::error::{Error, Result};
use crate::var::Var;
use crate::vtree::{Vtree, VtreeNode};

type Families = Vec<Vec<Node>>;

/// Keeps the nodes flagged in `keep`, renumbering them in order and dropping
/// pairs that mention removed nodes. The output must be kept.
pub(crate) fn filter_nodes(d: &Diagram, keep: &[Vec<bool>]) -> Diagram {
    let vt = d.vtree();
    let remap: Vec<Vec<Option<NodeId>>> = keep
        .iter()
        .map(|k| {
            let mut next = 0;
            k.iter()
                .map(|&b| {
                    b.then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        })
        .collect();
    let families: Families = (0..vt.len())
        .map(|t| {
            d.family(t)
                .iter()
                .enumerate()
                .filter(|(g, _)| keep[t][*g])
                .map(|(_, n)| match (n, vt.node(t)) {
                    (Node::Leaf(l), _) => Node::Leaf(*l),
                    (Node::Internal(ps), VtreeNode::Internal(l, r)) => Node::Internal(
                        ps.iter()
                            .filter_map(|&(a, b)| Some((remap[l][a as usize]?, remap[r][b as usize]?)))
                            .collect(),
                    ),
                    _ => unreachable!(),
                })
                .collect()
        })
        .collect();
    let out = remap[0][d.out() as usize].expect("output kept");
    Diagram::new_unchecked(d.vtree_arc().clone(), families, out)
}

fn eliminate_zeros_diagram(d: &Diagram) -> Option<Diagram> {
    let alive = d.alive();
    if !alive[0][d.out() as usize] {
        return None;
    }
    Some(filter_nodes(d, &alive))
}

/// Removes nodes without models (0 leaves, empty inputs, and everything that
/// only depends on them). An unsatisfiable input gives the empty marker.
pub fn eliminate_zeros(c: &Tdd) -> Tdd {
    match eliminate_zeros_diagram(c) {
        Some(d) => Tdd::trusted(d),
        None => empty_marker(c.vtree_arc().clone()),
    }
}

pub fn eliminate_zeros_ntdd(c: &NTdd) -> NTdd {
    match eliminate_zeros_diagram(c) {
        Some(d) => NTdd::from(d),
        None => NTdd::from(empty_marker(c.vtree_arc().clone())),
    }
}

/// Drops the leaf of `x`, whose nodes must all be constants, and merges the
/// nodes below its parent accordingly. Works on nTDDs; preserves determinism.
fn remove_constant_leaf(d: &Diagram, x: Var) -> Result<Diagram> {
    let vt = d.vtree();
    let leaf = vt.leaf_of(x).ok_or(Error::UnknownVariable(x))?;
    if d.family(leaf).iter().any(|n| matches!(n.label(), Label::Pos | Label::Neg)) {
        return Err(Error::SyntacticDependence(x));
    }
    let (new_vt, map) = vt.remove_leaf(x)?;
    let new_vt = Arc::new(new_vt);
    if d.family(leaf).iter().all(|n| n.label() == Label::False) {
        return Ok(empty_marker(new_vt).into_diagram());
    }
    let p = vt.parent(leaf).unwrap();
    let u = vt.sibling(leaf).unwrap();
    let (pl, _) = vt.children(p).unwrap();
    let leaf_is_left = pl == leaf;
    let ones: Vec<bool> = d.family(leaf).iter().map(|n| n.label() == Label::True).collect();
    // U_h for each p-node h: the u-nodes paired with a 1-node of the leaf.
    let merged: Vec<Node> = d
        .family(p)
        .iter()
        .map(|h| {
            let us = h.pairs().iter().filter_map(|&(a, b)| {
                let (xl, un) = if leaf_is_left { (a, b) } else { (b, a) };
                ones[xl as usize].then_some(un)
            });
            match vt.node(u) {
                VtreeNode::Leaf(_) => {
                    Node::Leaf(us.fold(Label::False, |acc, g| acc.or(d.node(u, g).label())))
                }
                VtreeNode::Internal(..) => {
                    Node::internal(us.flat_map(|g| d.node(u, g).pairs().iter().copied()).collect())
                }
            }
        })
        .collect();
    let mut families: Families = vec![Vec::new(); new_vt.len()];
    for t in 0..vt.len() {
        if let Some(nt) = map[t] {
            families[nt] = if t == u { merged.clone() } else { d.family(t).to_vec() };
        }
    }
    // `u` now sits where `p` was, with the same node indices; no pair list changes.
    Ok(Diagram::new_unchecked(new_vt, families, d.out()))
}

pub fn remove_unused_variable(c: &Tdd, x: Var) -> Result<Tdd> {
    Ok(Tdd::trusted(remove_constant_leaf(c, x)?))
}

fn relabel_leaf(d: &Diagram, x: Var, f: impl Fn(Label) -> Label) -> Result<Diagram> {
    let leaf = d.vtree().leaf_of(x).ok_or(Error::UnknownVariable(x))?;
    let (vt, mut families, out) = d.clone().into_parts();
    for n in &mut families[leaf] {
        *n = Node::Leaf(f(n.label()));
    }
    Ok(Diagram::new_unchecked(vt, families, out))
}

/// `f[x/b]` over the vtree without `x`.
pub fn condition(c: &Tdd, x: Var, b: bool) -> Result<Tdd> {
    let relabeled = relabel_leaf(c, x, |l| match l {
        Label::Pos | Label::Neg => Label::from_mask(if l.eval(b) { 3 } else { 0 }),
        other => other,
    })?;
    let out = remove_constant_leaf(&relabeled, x)?;
    debug_assert!(out.size() <= c.size() && out.width() <= c.width());
    Ok(Tdd::trusted(out))
}

fn make_full_families(d: &Diagram) -> Families {
    let vt = d.vtree();
    let mut families: Families = d.families().to_vec();
    for t in vt.bottom_up() {
        match vt.node(t) {
            VtreeNode::Leaf(_) => {
                let has = |l: Label| families[t].iter().any(|n| n.label() == l);
                if has(Label::True) {
                    continue;
                }
                match (has(Label::Pos), has(Label::Neg)) {
                    (false, false) => families[t].push(Node::Leaf(Label::True)),
                    (true, false) => families[t].push(Node::Leaf(Label::Neg)),
                    (false, true) => families[t].push(Node::Leaf(Label::Pos)),
                    (true, true) => {}
                }
            }
            VtreeNode::Internal(l, r) => {
                let (nl, nr) = (families[l].len(), families[r].len());
                let mut covered = vec![false; nl * nr];
                for n in &families[t] {
                    for &(a, b) in n.pairs() {
                        covered[a as usize * nr + b as usize] = true;
                    }
                }
                let rest: Vec<Pair> = (0..nl * nr)
                    .filter(|&i| !covered[i])
                    .map(|i| ((i / nr) as NodeId, (i % nr) as NodeId))
                    .collect();
                if !rest.is_empty() {
                    families[t].push(Node::Internal(rest));
                }
            }
        }
    }
    families
}

/// Adds at most one node per family so that every assignment of `vars(t)`
/// satisfies exactly one `t`-node.
pub fn make_full(c: &Tdd) -> Tdd {
    let families = make_full_families(c);
    let out = Tdd::trusted_parts(c.vtree_arc().clone(), families, c.out());
    debug_assert!(out.width() <= c.width() + 1);
    out
}

/// Merges root nodes into one output node (the union of their inputs or
/// labels) and one complement node.
fn merge_root(vt: Arc<Vtree>, mut families: Families, is_out: impl Fn(usize) -> bool) -> Tdd {
    let root = std::mem::take(&mut families[0]);
    let (mut yes, mut no): (Vec<Node>, Vec<Node>) = (Vec::new(), Vec::new());
    for (g, n) in root.into_iter().enumerate() {
        if is_out(g) {
            yes.push(n);
        } else {
            no.push(n);
        }
    }
    let merge = |ns: Vec<Node>| -> Node {
        if vt.is_leaf(0) {
            Node::Leaf(ns.iter().fold(Label::False, |acc, n| acc.or(n.label())))
        } else {
            Node::internal(ns.into_iter().flat_map(|n| n.pairs().to_vec()).collect())
        }
    };
    let has_rest = !no.is_empty();
    families[0].push(merge(yes));
    if has_rest {
        families[0].push(merge(no));
    }
    Tdd::trusted_parts(vt, families, 0)
}

/// Full TDD computing `¬f`: the old output becomes the complement node, every
/// other root node merges into the new output.
pub fn negate(c: &Tdd) -> Tdd {
    let families = make_full_families(c);
    let out = c.out() as usize;
    let res = merge_root(c.vtree_arc().clone(), families, |g| g != out);
    debug_assert!(res.width() <= c.width() + 1);
    res
}

fn check_same_vtree(a: &Diagram, b: &Diagram) -> Result<()> {
    if a.same_vtree(b) {
        Ok(())
    } else {
        Err(Error::VtreeMismatch)
    }
}

/// Product of two diagrams over the same vtree, materialized top-down from
/// the given root pairs. Returns the families and the root products in order.
fn product(a: &Diagram, b: &Diagram, roots: &[Pair], label: impl Fn(Label, Label) -> Label) -> Families {
    let vt = a.vtree();
    let mut index: Vec<HashMap<Pair, NodeId>> = vec![HashMap::new(); vt.len()];
    let mut list: Vec<Vec<Pair>> = vec![Vec::new(); vt.len()];
    for &p in roots {
        index[0].insert(p, list[0].len() as NodeId);
        list[0].push(p);
    }
    let mut families: Families = vec![Vec::new(); vt.len()];
    for t in 0..vt.len() {
        match vt.node(t) {
            VtreeNode::Leaf(_) => {
                families[t] = list[t]
                    .iter()
                    .map(|&(g1, g2)| Node::Leaf(label(a.node(t, g1).label(), b.node(t, g2).label())))
                    .collect();
            }
            VtreeNode::Internal(l, r) => {
                let mut fam = Vec::with_capacity(list[t].len());
                for i in 0..list[t].len() {
                    let (g1, g2) = list[t][i];
                    let mut ps = Vec::new();
                    for &(a1, a2) in a.node(t, g1).pairs() {
                        for &(b1, b2) in b.node(t, g2).pairs() {
                            let li = intern(&mut index[l], &mut list[l], (a1, b1));
                            let ri = intern(&mut index[r], &mut list[r], (a2, b2));
                            ps.push((li, ri));
                        }
                    }
                    fam.push(Node::internal(ps));
                }
                families[t] = fam;
            }
        }
    }
    families
}

fn intern(index: &mut HashMap<Pair, NodeId>, list: &mut Vec<Pair>, p: Pair) -> NodeId {
    *index.entry(p).or_insert_with(|| {
        list.push(p);
        (list.len() - 1) as NodeId
    })
}

/// `C1 ∧ C2` by the product construction, built from the output pair only.
pub fn conjoin(c1: &Tdd, c2: &Tdd) -> Result<Tdd> {
    check_same_vtree(c1, c2)?;
    let families = product(c1, c2, &[(c1.out(), c2.out())], Label::and);
    let res = Tdd::trusted_parts(c1.vtree_arc().clone(), families, 0);
    debug_assert!(res.width() <= c1.width() * c2.width());
    debug_assert!(res.size() <= c1.size() * c2.size());
    Ok(res)
}

/// A binary Boolean operation as a truth table: bit `2a + b` is `op(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinOp(pub u8);

impl BinOp {
    pub const AND: BinOp = BinOp(0b1000);
    pub const OR: BinOp = BinOp(0b1110);
    pub const XOR: BinOp = BinOp(0b0110);
    pub const IFF: BinOp = BinOp(0b1001);
    pub const IMPLIES: BinOp = BinOp(0b1011);
    pub const NAND: BinOp = BinOp(0b0111);
    pub const NOR: BinOp = BinOp(0b0001);

    pub fn new(table: u8) -> Result<BinOp> {
        if table > 15 {
            return Err(Error::Malformed(format!("{table} is not a 4-bit truth table")));
        }
        Ok(BinOp(table))
    }

    pub fn eval(self, a: bool, b: bool) -> bool {
        self.0 >> ((a as u8) << 1 | b as u8) & 1 == 1
    }

    pub fn all() -> impl Iterator<Item = BinOp> {
        (0..16).map(BinOp)
    }
}

impl FromStr for BinOp {
    type Err = Error;
    fn from_str(s: &str) -> Result<BinOp> {
        Ok(match s {
            "and" => BinOp::AND,
            "or" => BinOp::OR,
            "xor" => BinOp::XOR,
            "iff" | "xnor" => BinOp::IFF,
            "implies" | "imp" => BinOp::IMPLIES,
            "nand" => BinOp::NAND,
            "nor" => BinOp::NOR,
            _ => return Err(Error::Malformed(format!("unknown operation `{s}`"))),
        })
    }
}

impl fmt::Display for BinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match *self {
            BinOp::AND => "and",
            BinOp::OR => "or",
            BinOp::XOR => "xor",
            BinOp::IFF => "iff",
            BinOp::IMPLIES => "implies",
            BinOp::NAND => "nand",
            BinOp::NOR => "nor",
            BinOp(t) => return write!(f, "op{t:04b}"),
        };
        f.write_str(name)
    }
}

/// `op(C1, C2)`: product of the full versions from all root pairs, root
/// products merged by whether `op` holds on (is-output, is-output).
pub fn apply(op: BinOp, c1: &Tdd, c2: &Tdd) -> Result<Tdd> {
    check_same_vtree(c1, c2)?;
    let f1 = make_full(c1);
    let f2 = make_full(c2);
    let (n1, n2) = (f1.family(0).len() as NodeId, f2.family(0).len() as NodeId);
    let roots: Vec<Pair> = (0..n1).flat_map(|a| (0..n2).map(move |b| (a, b))).collect();
    let families = product(&f1, &f2, &roots, Label::and);
    let (o1, o2) = (c1.out(), c2.out());
    let res = merge_root(c1.vtree_arc().clone(), families, |i| {
        let (a, b) = roots[i];
        op.eval(a == o1, b == o2)
    });
    debug_assert!(res.width() <= (c1.width() + 1) * (c2.width() + 1));
    Ok(res)
}

/// `∃Y. f` over the vtree without `Y`; may be non-deterministic.
pub fn forget(c: &Tdd, ys: &[Var]) -> Result<NTdd> {
    forget_ntdd(&c.to_ntdd(), ys)
}

pub fn forget_ntdd(c: &NTdd, ys: &[Var]) -> Result<NTdd> {
    let mut ys = ys.to_vec();
    ys.sort_unstable();
    ys.dedup();
    for &y in &ys {
        if !c.vtree().contains(y) {
            return Err(Error::UnknownVariable(y));
        }
    }
    if ys.len() == c.vars().len() {
        return Err(Error::LastVariable);
    }
    let mut d = c.diagram().clone();
    for &y in &ys {
        d = relabel_leaf(&d, y, |l| if l == Label::False { l } else { Label::True })?;
    }
    for &y in &ys {
        d = remove_constant_leaf(&d, y)?;
    }
    debug_assert!(d.width() <= c.width() && d.size() <= c.size());
    Ok(NTdd::from(d))
}

/// `f[x/0] ∨ f[x/1]`, deterministic.
pub fn forget_single(c: &Tdd, x: Var) -> Result<Tdd> {
    apply(BinOp::OR, &condition(c, x, false)?, &condition(c, x, true)?)
}

/// Subset construction over `t`-shapes (sets of `t`-nodes satisfied by an
/// assignment). Only realizable shapes become nodes; the result is full.
pub fn determinize(c: &NTdd) -> Tdd {
    let vt = c.vtree();
    let mut shapes: Vec<Vec<Vec<NodeId>>> = vec![Vec::new(); vt.len()];
    let mut families: Families = vec![Vec::new(); vt.len()];
    for t in vt.bottom_up() {
        match vt.node(t) {
            VtreeNode::Leaf(_) => {
                let of = |b: bool| -> Vec<NodeId> {
                    (0..c.family(t).len() as NodeId).filter(|&g| c.node(t, g).label().eval(b)).collect()
                };
                let (s0, s1) = (of(false), of(true));
                if s0 == s1 {
                    shapes[t] = vec![s0];
                    families[t] = vec![Node::Leaf(Label::True)];
                } else {
                    shapes[t] = vec![s0, s1];
                    families[t] = vec![Node::Leaf(Label::Neg), Node::Leaf(Label::Pos)];
                }
            }
            VtreeNode::Internal(l, r) => {
                let fam = c.family(t);
                let member = |ss: &[Vec<NodeId>], n: usize| -> Vec<Vec<bool>> {
                    ss.iter()
                        .map(|s| {
                            let mut m = vec![false; n];
                            for &g in s {
                                m[g as usize] = true;
                            }
                            m
                        })
                        .collect()
                };
                let ml = member(&shapes[l], c.family(l).len());
                let mr = member(&shapes[r], c.family(r).len());
                let mut index: HashMap<Vec<NodeId>, NodeId> = HashMap::new();
                let mut new_shapes = Vec::new();
                let mut new_nodes: Vec<Vec<Pair>> = Vec::new();
                for (i, si) in ml.iter().enumerate() {
                    for (j, sj) in mr.iter().enumerate() {
                        let s: Vec<NodeId> = (0..fam.len() as NodeId)
                            .filter(|&g| {
                                fam[g as usize].pairs().iter().any(|&(a, b)| si[a as usize] && sj[b as usize])
                            })
                            .collect();
                        let id = *index.entry(s.clone()).or_insert_with(|| {
                            new_shapes.push(s);
                            new_nodes.push(Vec::new());
                            (new_nodes.len() - 1) as NodeId
                        });
                        new_nodes[id as usize].push((i as NodeId, j as NodeId));
                    }
                }
                shapes[t] = new_shapes;
                families[t] = new_nodes.into_iter().map(Node::internal).collect();
            }
        }
    }
    let out = c.out();
    let root_shapes = std::mem::take(&mut shapes[0]);
    let res = merge_root(c.vtree_arc().clone(), families, |g| root_shapes[g].contains(&out));
    debug_assert!(c.width() >= 63 || res.width() <= 1usize << c.width().max(1));
    res
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Clause;
    use crate::diagram::tests::{vt_bal, vt_lin};
    use crate::diagram::{clause_tdd, constant_tdd, determinism_violation, literal_tdd, single_model_tdd};
    use crate::oracle::BoolFunTable;
    use crate::var::{Assignment, Lit};

    fn clause(ls: &[i64], vt: &Arc<Vtree>) -> Tdd {
        clause_tdd(&Clause::from_dimacs(ls), vt.clone()).unwrap()
    }

    fn table(d: &Diagram) -> BoolFunTable {
        d.truth_table().unwrap()
    }

    fn lit(l: i64, vt: &Arc<Vtree>) -> Tdd {
        literal_tdd(Lit::from_dimacs(l), vt.clone()).unwrap()
    }

    #[test]
    fn zero_elimination_keeps_function() {
        let vt = vt_bal(3);
        let c = conjoin(&clause(&[1, 2], &vt), &clause(&[-1, 3], &vt)).unwrap();
        let z = eliminate_zeros(&c);
        assert_eq!(table(&z), table(&c));
        assert!(z.families().iter().flatten().all(|n| match n {
            Node::Leaf(l) => *l != Label::False,
            Node::Internal(ps) => !ps.is_empty(),
        }));
        let cl = clause(&[1, 2], &vt);
        assert_eq!(eliminate_zeros(&cl), cl);
        let none = conjoin(&lit(1, &vt), &lit(-1, &vt)).unwrap();
        assert!(eliminate_zeros(&none).is_empty_marker());
    }

    #[test]
    fn remove_unused() {
        let vt = vt_lin(2);
        let one = constant_tdd(true, vt.clone());
        let r = remove_unused_variable(&one, Var(2)).unwrap();
        assert_eq!(r.vars(), &[Var(1)]);
        assert_eq!(r.count(), 2u32.into());
        assert_eq!(remove_unused_variable(&lit(2, &vt), Var(2)).unwrap_err(), Error::SyntacticDependence(Var(2)));
    }

    #[test]
    fn condition_examples() {
        let vt = vt_lin(2);
        let and = conjoin(&lit(1, &vt), &lit(2, &vt)).unwrap();
        let c1 = condition(&and, Var(1), true).unwrap();
        assert_eq!(table(&c1), BoolFunTable::from_index_fn(vec![Var(2)], |i| i == 1).unwrap());
        let c0 = condition(&and, Var(1), false).unwrap();
        assert_eq!(table(&c0).count_models(), 0);
        assert!(condition(&and, Var(5), true).is_err());
    }

    #[test]
    fn condition_matches_restrict_on_every_leaf_position() {
        let vt = vt_bal(5);
        let c = conjoin(&clause(&[1, -2, 5], &vt), &clause(&[2, 3, -4], &vt)).unwrap();
        let f = table(&c);
        for x in 1..=5 {
            for b in [false, true] {
                let r = condition(&c, Var(x), b).unwrap();
                assert_eq!(table(&r), f.restrict(&Assignment::from_pairs([(Var(x), b)])).unwrap());
                assert!(determinism_violation(&r).is_none());
            }
        }
    }

    #[test]
    fn make_full_is_full() {
        let vt = vt_bal(4);
        let c = conjoin(&clause(&[1, 2], &vt), &clause(&[-3, 4], &vt)).unwrap();
        let f = make_full(&c);
        assert_eq!(table(&f), table(&c));
        assert!(f.width() <= c.width() + 1);
        let tabs = f.node_tables().unwrap();
        for fam in &tabs {
            let n = fam[0].num_rows();
            for i in 0..n {
                assert_eq!(fam.iter().filter(|t| t.get(i)).count(), 1);
            }
        }
    }

    #[test]
    fn negate_examples() {
        let vt = vt_lin(3);
        let one = constant_tdd(true, vt.clone());
        assert_eq!(table(&negate(&one)).count_models(), 0);
        let c = clause(&[1, 2], &vt);
        let n = negate(&c);
        assert_eq!(table(&n), table(&c).not());
        assert_eq!(table(&negate(&n)), table(&c));
        let zero = constant_tdd(false, vt);
        assert_eq!(table(&negate(&zero)).count_models(), 8);
    }

    #[test]
    fn conjoin_examples() {
        let vt = vt_bal(3);
        let c = clause(&[1, -2], &vt);
        let one = constant_tdd(true, vt.clone());
        assert_eq!(table(&conjoin(&c, &one).unwrap()), table(&c));
        assert_eq!(table(&conjoin(&lit(1, &vt), &lit(-1, &vt)).unwrap()).count_models(), 0);
        assert_eq!(conjoin(&c, &constant_tdd(true, vt_lin(3))).unwrap_err(), Error::VtreeMismatch);
    }

    #[test]
    fn apply_all_ops() {
        let vt = vt_bal(4);
        let a = conjoin(&clause(&[1, 2], &vt), &clause(&[-3], &vt)).unwrap();
        let b = clause(&[-1, 3, 4], &vt);
        let (ta, tb) = (table(&a), table(&b));
        for op in BinOp::all() {
            let r = apply(op, &a, &b).unwrap();
            assert_eq!(table(&r), ta.zip_with(&tb, |x, y| op.eval(x, y)).unwrap(), "{op}");
            assert!(determinism_violation(&r).is_none());
        }
        assert_eq!(table(&apply(BinOp::XOR, &a, &a).unwrap()).count_models(), 0);
        let or = apply(BinOp::OR, &lit(1, &vt), &lit(2, &vt)).unwrap();
        assert_eq!(table(&or), table(&clause(&[1, 2], &vt)));
    }

    #[test]
    fn forget_examples() {
        let vt = vt_lin(2);
        let and = conjoin(&lit(1, &vt), &lit(2, &vt)).unwrap();
        let f = forget(&and, &[Var(1)]).unwrap();
        assert_eq!(table(&f), BoolFunTable::from_index_fn(vec![Var(2)], |i| i == 1).unwrap());
        assert_eq!(forget(&and, &[]).unwrap().diagram(), and.diagram());
        assert!(forget(&and, &[Var(1), Var(2)]).is_err());
        let xor = apply(BinOp::XOR, &lit(1, &vt), &lit(2, &vt)).unwrap();
        let s = forget_single(&xor, Var(1)).unwrap();
        assert_eq!(table(&s).count_models(), 2);
        let s = forget_single(&and, Var(2)).unwrap();
        assert_eq!(table(&s), BoolFunTable::from_index_fn(vec![Var(1)], |i| i == 1).unwrap());
    }

    #[test]
    fn determinize_union_of_models() {
        let vt = vt_bal(3);
        let t1 = single_model_tdd(&Assignment::from_bits(&[Var(1), Var(2), Var(3)], 0b101), vt.clone()).unwrap();
        let t2 = single_model_tdd(&Assignment::from_bits(&[Var(1), Var(2), Var(3)], 0b011), vt.clone()).unwrap();
        // Non-deterministic union: the two single-model diagrams side by side.
        let mut fams: Families = Vec::new();
        for t in 0..vt.len() {
            let mut f = t1.family(t).to_vec();
            let off = f.len() as NodeId;
            for n in t2.family(t) {
                f.push(match n {
                    Node::Leaf(l) => Node::Leaf(*l),
                    Node::Internal(ps) => Node::internal(ps.iter().map(|&(a, b)| (a + off, b + off)).collect()),
                });
            }
            fams.push(f);
        }
        fams[0] = vec![Node::internal(vec![(0, 0), (1, 1)])];
        let n = NTdd::new(vt.clone(), fams, 0).unwrap();
        let d = determinize(&n);
        assert_eq!(d.count(), 2u32.into());
        assert_eq!(table(&d), table(&n));
    }

    #[test]
    fn determinize_of_forget() {
        let vt = vt_bal(5);
        let c = conjoin(&clause(&[1, 2, 3], &vt), &clause(&[-3, 4, -5], &vt)).unwrap();
        let f = forget(&c, &[Var(3)]).unwrap();
        let d = determinize(&f);
        assert_eq!(table(&d), table(&c).exists(&[Var(3)]).unwrap());
        let dd = determinize(&c.to_ntdd());
        assert_eq!(table(&dd), table(&c));
        assert!(dd.width() <= c.width() + 1);
    }

    #[test]
    fn single_variable_vtree() {
        let vt = vt_lin(1);
        let x = lit(1, &vt);
        assert_eq!(table(&negate(&x)).count_models(), 1);
        let or = apply(BinOp::OR, &x, &negate(&x)).unwrap();
        assert_eq!(table(&or).count_models(), 2);
        assert!(condition(&x, Var(1), true).is_err());
    }
}
