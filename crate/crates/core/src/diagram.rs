//! nTDD and TDD circuits.
//!
//! A diagram keeps one family of nodes per vtree node. Leaf nodes carry a
//! label, internal nodes a sorted list of input pairs `(l, r)` indexing the
//! left and right child families. The output is an index into the root family.

use std::collections::HashMap;
use std::fmt;
use std::ops::{ControlFlow, Deref};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::cnf::Clause;
use crate::error::{Error, Result};
use crate::oracle::BoolFunTable;
use crate::var::{Assignment, Lit, Var};
use crate::vtree::{Vtree, VtreeId, VtreeNode};

pub type NodeId = u32;
pub type Pair = (NodeId, NodeId);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Pos,
    Neg,
    True,
    False,
}

impl Label {
    pub fn eval(self, value: bool) -> bool {
        match self {
            Label::Pos => value,
            Label::Neg => !value,
            Label::True => true,
            Label::False => false,
        }
    }

    pub fn models(self) -> u32 {
        match self {
            Label::Pos | Label::Neg => 1,
            Label::True => 2,
            Label::False => 0,
        }
    }

    /// Label satisfied by exactly the values where both are.
    pub fn and(self, other: Label) -> Label {
        Label::from_mask(self.mask() & other.mask())
    }

    pub fn or(self, other: Label) -> Label {
        Label::from_mask(self.mask() | other.mask())
    }

    pub fn not(self) -> Label {
        Label::from_mask(!self.mask() & 3)
    }

    /// Bit 0: satisfied by 0, bit 1: satisfied by 1.
    pub fn mask(self) -> u8 {
        match self {
            Label::False => 0,
            Label::Neg => 1,
            Label::Pos => 2,
            Label::True => 3,
        }
    }

    pub fn from_mask(m: u8) -> Label {
        match m & 3 {
            0 => Label::False,
            1 => Label::Neg,
            2 => Label::Pos,
            _ => Label::True,
        }
    }

    pub fn of_lit(positive: bool) -> Label {
        if positive {
            Label::Pos
        } else {
            Label::Neg
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Leaf(Label),
    Internal(Vec<Pair>),
}

impl Node {
    pub fn label(&self) -> Label {
        match self {
            Node::Leaf(l) => *l,
            Node::Internal(_) => panic!("internal node has no label"),
        }
    }

    pub fn pairs(&self) -> &[Pair] {
        match self {
            Node::Internal(p) => p,
            Node::Leaf(_) => &[],
        }
    }

    /// Sorted, duplicate-free pair list.
    pub fn internal(mut pairs: Vec<Pair>) -> Node {
        pairs.sort_unstable();
        pairs.dedup();
        Node::Internal(pairs)
    }
}

/// The shared representation of nTDDs and TDDs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    vtree: Arc<Vtree>,
    families: Vec<Vec<Node>>,
    out: NodeId,
}

impl Diagram {
    /// Checks that families match the vtree, labels sit at leaves, pairs
    /// reference existing child nodes and the output exists.
    pub fn new(vtree: Arc<Vtree>, families: Vec<Vec<Node>>, out: NodeId) -> Result<Diagram> {
        let d = Diagram { vtree, families, out };
        d.check()?;
        Ok(d)
    }

    pub(crate) fn new_unchecked(vtree: Arc<Vtree>, families: Vec<Vec<Node>>, out: NodeId) -> Diagram {
        let d = Diagram { vtree, families, out };
        debug_assert!(d.check().is_ok(), "{:?}", d.check());
        d
    }

    fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Malformed(m));
        if self.families.len() != self.vtree.len() {
            return bad(format!("{} families for {} vtree nodes", self.families.len(), self.vtree.len()));
        }
        for (t, fam) in self.families.iter().enumerate() {
            match self.vtree.node(t) {
                VtreeNode::Leaf(_) => {
                    if fam.iter().any(|n| !matches!(n, Node::Leaf(_))) {
                        return bad(format!("vtree leaf {t} has an internal node"));
                    }
                }
                VtreeNode::Internal(l, r) => {
                    let (nl, nr) = (self.families[l].len() as NodeId, self.families[r].len() as NodeId);
                    for (g, n) in fam.iter().enumerate() {
                        let Node::Internal(ps) = n else {
                            return bad(format!("internal vtree node {t} has a leaf node"));
                        };
                        if ps.windows(2).any(|w| w[0] >= w[1]) {
                            return bad(format!("pairs of node {g} at {t} are not sorted"));
                        }
                        if let Some(p) = ps.iter().find(|p| p.0 >= nl || p.1 >= nr) {
                            return bad(format!("node {g} at {t} references missing pair ({},{})", p.0, p.1));
                        }
                    }
                }
            }
        }
        if self.out as usize >= self.families[0].len() {
            return bad(format!("output {} is not a root node", self.out));
        }
        Ok(())
    }

    pub fn vtree(&self) -> &Vtree {
        &self.vtree
    }

    pub fn vtree_arc(&self) -> &Arc<Vtree> {
        &self.vtree
    }

    pub fn same_vtree(&self, other: &Diagram) -> bool {
        Arc::ptr_eq(&self.vtree, &other.vtree) || *self.vtree == *other.vtree
    }

    pub fn vars(&self) -> &[Var] {
        self.vtree.all_vars()
    }

    pub fn families(&self) -> &[Vec<Node>] {
        &self.families
    }

    pub fn family(&self, t: VtreeId) -> &[Node] {
        &self.families[t]
    }

    pub fn node(&self, t: VtreeId, g: NodeId) -> &Node {
        &self.families[t][g as usize]
    }

    pub fn out(&self) -> NodeId {
        self.out
    }

    pub fn into_parts(self) -> (Arc<Vtree>, Vec<Vec<Node>>, NodeId) {
        (self.vtree, self.families, self.out)
    }

    pub fn width(&self) -> usize {
        self.families.iter().map(|f| f.len()).max().unwrap_or(0)
    }

    /// Total number of input pairs.
    pub fn size(&self) -> usize {
        self.families.iter().flatten().map(|n| n.pairs().len()).sum()
    }

    pub fn num_nodes(&self) -> usize {
        self.families.iter().map(|f| f.len()).sum()
    }

    pub fn family_sizes(&self) -> Vec<usize> {
        self.families.iter().map(|f| f.len()).collect()
    }

    /// The empty-function marker: every family is empty except the root
    /// family, which holds a single node without models.
    pub fn is_empty_marker(&self) -> bool {
        self.families[1..].iter().all(|f| f.is_empty())
            && self.families[0].len() == 1
            && match &self.families[0][0] {
                Node::Leaf(l) => *l == Label::False,
                Node::Internal(ps) => ps.is_empty(),
            }
    }

    fn check_domain(&self, tau: &Assignment) -> Result<()> {
        if !tau.covers_exactly(self.vars()) {
            return Err(Error::DomainMismatch(format!("expected exactly the variables {:?}", self.vars())));
        }
        Ok(())
    }

    /// Per family, which nodes `tau` satisfies (`tau` may assign extra variables).
    pub fn satisfied(&self, tau: &Assignment) -> Vec<Vec<bool>> {
        let mut sat: Vec<Vec<bool>> = vec![Vec::new(); self.families.len()];
        for t in self.vtree.bottom_up() {
            sat[t] = match self.vtree.node(t) {
                VtreeNode::Leaf(x) => {
                    let b = tau.get(x).unwrap_or(false);
                    self.families[t].iter().map(|n| n.label().eval(b)).collect()
                }
                VtreeNode::Internal(l, r) => self.families[t]
                    .iter()
                    .map(|n| n.pairs().iter().any(|&(a, b)| sat[l][a as usize] && sat[r][b as usize]))
                    .collect(),
            };
        }
        sat
    }

    pub fn evaluate(&self, tau: &Assignment) -> Result<bool> {
        self.check_domain(tau)?;
        Ok(self.satisfied(tau)[0][self.out as usize])
    }

    /// The function of every node as a table over `vars(t)`.
    pub fn node_tables(&self) -> Result<Vec<Vec<BoolFunTable>>> {
        let mut tables: Vec<Vec<BoolFunTable>> = vec![Vec::new(); self.families.len()];
        for t in self.vtree.bottom_up() {
            let vars = self.vtree.vars(t).to_vec();
            tables[t] = match self.vtree.node(t) {
                VtreeNode::Leaf(_) => self.families[t]
                    .iter()
                    .map(|n| BoolFunTable::from_index_fn(vars.clone(), |i| n.label().eval(i == 1)))
                    .collect::<Result<_>>()?,
                VtreeNode::Internal(l, r) => {
                    let pos = |sub: &[Var]| -> Vec<usize> {
                        sub.iter().map(|v| vars.binary_search(v).unwrap()).collect()
                    };
                    let sl = spread(&pos(self.vtree.vars(l)));
                    let sr = spread(&pos(self.vtree.vars(r)));
                    let mut fam = Vec::with_capacity(self.families[t].len());
                    for n in &self.families[t] {
                        let mut tab = BoolFunTable::constant(vars.clone(), false)?;
                        for &(a, b) in n.pairs() {
                            let ta = &tables[l][a as usize];
                            let tb = &tables[r][b as usize];
                            let mb: Vec<u64> = tb.models().collect();
                            for ia in ta.models() {
                                for &ib in &mb {
                                    tab.set(sl[ia as usize] | sr[ib as usize], true);
                                }
                            }
                        }
                        fam.push(tab);
                    }
                    fam
                }
            };
        }
        Ok(tables)
    }

    /// The computed function as a table over all variables.
    pub fn truth_table(&self) -> Result<BoolFunTable> {
        Ok(self.node_tables()?.swap_remove(0).swap_remove(self.out as usize))
    }

    /// Whether each node has a model, bottom-up.
    pub fn alive(&self) -> Vec<Vec<bool>> {
        let mut alive: Vec<Vec<bool>> = vec![Vec::new(); self.families.len()];
        for t in self.vtree.bottom_up() {
            alive[t] = match self.vtree.node(t) {
                VtreeNode::Leaf(_) => self.families[t].iter().map(|n| n.label() != Label::False).collect(),
                VtreeNode::Internal(l, r) => self.families[t]
                    .iter()
                    .map(|n| n.pairs().iter().any(|&(a, b)| alive[l][a as usize] && alive[r][b as usize]))
                    .collect(),
            };
        }
        alive
    }

    pub fn is_satisfiable(&self) -> bool {
        self.alive()[0][self.out as usize]
    }
}

fn spread(positions: &[usize]) -> Vec<u64> {
    let mut out = vec![0u64; 1 << positions.len()];
    for (k, &p) in positions.iter().enumerate() {
        let half = 1 << k;
        for j in 0..half {
            out[half + j] = out[j] | 1 << p;
        }
    }
    out
}

/// A possibly non-deterministic TDD.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NTdd(Diagram);

/// A TDD satisfying syntactic determinism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tdd(Diagram);

impl Deref for NTdd {
    type Target = Diagram;
    fn deref(&self) -> &Diagram {
        &self.0
    }
}

impl Deref for Tdd {
    type Target = Diagram;
    fn deref(&self) -> &Diagram {
        &self.0
    }
}

impl From<Diagram> for NTdd {
    fn from(d: Diagram) -> NTdd {
        NTdd(d)
    }
}

impl From<Tdd> for NTdd {
    fn from(t: Tdd) -> NTdd {
        NTdd(t.0)
    }
}

impl NTdd {
    pub fn new(vtree: Arc<Vtree>, families: Vec<Vec<Node>>, out: NodeId) -> Result<NTdd> {
        Diagram::new(vtree, families, out).map(NTdd)
    }

    pub fn diagram(&self) -> &Diagram {
        &self.0
    }

    pub fn into_diagram(self) -> Diagram {
        self.0
    }
}

impl Tdd {
    /// For constructions that are deterministic by design. Checked in debug builds.
    pub(crate) fn trusted(d: Diagram) -> Tdd {
        debug_assert!(determinism_violation(&d).is_none(), "{:?}", determinism_violation(&d));
        Tdd(d)
    }

    pub(crate) fn trusted_parts(vtree: Arc<Vtree>, families: Vec<Vec<Node>>, out: NodeId) -> Tdd {
        Tdd::trusted(Diagram::new_unchecked(vtree, families, out))
    }

    pub fn diagram(&self) -> &Diagram {
        &self.0
    }

    pub fn into_diagram(self) -> Diagram {
        self.0
    }

    pub fn to_ntdd(&self) -> NTdd {
        NTdd(self.0.clone())
    }

    /// Model count by bottom-up sums of products over pairs.
    pub fn count(&self) -> BigUint {
        let vt = self.vtree();
        let mut cnt: Vec<Vec<BigUint>> = vec![Vec::new(); vt.len()];
        for t in vt.bottom_up() {
            cnt[t] = match vt.node(t) {
                VtreeNode::Leaf(_) => self.family(t).iter().map(|n| BigUint::from(n.label().models())).collect(),
                VtreeNode::Internal(l, r) => self
                    .family(t)
                    .iter()
                    .map(|n| {
                        n.pairs()
                            .iter()
                            .fold(BigUint::zero(), |acc, &(a, b)| acc + &cnt[l][a as usize] * &cnt[r][b as usize])
                    })
                    .collect(),
            };
        }
        cnt[0][self.out() as usize].clone()
    }

    /// Calls `f` on each model once; stops early on `Break`. Returns the
    /// number of models visited.
    pub fn for_each_model(&self, mut f: impl FnMut(&Assignment) -> ControlFlow<()>) -> usize {
        let alive = self.alive();
        if !alive[0][self.out() as usize] {
            return 0;
        }
        let mut tau = Assignment::new();
        let mut pending = vec![(0usize, self.out())];
        let mut visited = 0;
        let _ = self.expand(&alive, &mut pending, &mut tau, &mut f, &mut visited);
        visited
    }

    fn expand(
        &self,
        alive: &[Vec<bool>],
        pending: &mut Vec<(VtreeId, NodeId)>,
        tau: &mut Assignment,
        f: &mut impl FnMut(&Assignment) -> ControlFlow<()>,
        visited: &mut usize,
    ) -> ControlFlow<()> {
        let Some((t, g)) = pending.pop() else {
            *visited += 1;
            return f(tau);
        };
        let res = match self.vtree().node(t) {
            VtreeNode::Leaf(x) => {
                let label = self.node(t, g).label();
                let mut r = ControlFlow::Continue(());
                for b in [false, true] {
                    if label.eval(b) {
                        tau.set(x, b);
                        r = self.expand(alive, pending, tau, f, visited);
                        tau.remove(x);
                        if r.is_break() {
                            break;
                        }
                    }
                }
                r
            }
            VtreeNode::Internal(l, r) => {
                let mut res = ControlFlow::Continue(());
                for &(a, b) in self.node(t, g).pairs() {
                    if !(alive[l][a as usize] && alive[r][b as usize]) {
                        continue;
                    }
                    pending.push((r, b));
                    pending.push((l, a));
                    res = self.expand(alive, pending, tau, f, visited);
                    pending.pop();
                    pending.pop();
                    if res.is_break() {
                        break;
                    }
                }
                res
            }
        };
        pending.push((t, g));
        res
    }

    /// Up to `limit` models in enumeration order.
    pub fn models(&self, limit: usize) -> Vec<Assignment> {
        let mut out = Vec::new();
        if limit == 0 {
            return out;
        }
        self.for_each_model(|tau| {
            out.push(tau.clone());
            if out.len() >= limit {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        out
    }

    /// Any model, found greedily through live nodes.
    pub fn any_model(&self) -> Option<Assignment> {
        self.models(1).pop()
    }

    pub fn certificate_of(&self, tau: &Assignment) -> Result<Option<Certificate>> {
        CertificateWalker::new(self).certificate(tau)
    }
}

/// One chosen node per vtree node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate(pub Vec<NodeId>);

/// Pair-to-parent lookup tables for linear-time certificate extraction.
pub struct CertificateWalker<'a> {
    tdd: &'a Tdd,
    parent_of: Vec<HashMap<Pair, NodeId>>,
    leaf_of: Vec<[Option<NodeId>; 2]>,
}

impl<'a> CertificateWalker<'a> {
    pub fn new(tdd: &'a Tdd) -> Self {
        let vt = tdd.vtree();
        let mut parent_of = vec![HashMap::new(); vt.len()];
        let mut leaf_of = vec![[None, None]; vt.len()];
        for t in 0..vt.len() {
            for (g, n) in tdd.family(t).iter().enumerate() {
                match n {
                    Node::Leaf(l) => {
                        for b in [false, true] {
                            if l.eval(b) {
                                leaf_of[t][b as usize] = Some(g as NodeId);
                            }
                        }
                    }
                    Node::Internal(ps) => {
                        for &p in ps {
                            parent_of[t].insert(p, g as NodeId);
                        }
                    }
                }
            }
        }
        CertificateWalker { tdd, parent_of, leaf_of }
    }

    /// The unique certificate of `tau`, if `tau` is a model.
    pub fn certificate(&self, tau: &Assignment) -> Result<Option<Certificate>> {
        self.tdd.check_domain(tau)?;
        let vt = self.tdd.vtree();
        let mut chosen = vec![0; vt.len()];
        for t in vt.bottom_up() {
            let g = match vt.node(t) {
                VtreeNode::Leaf(x) => self.leaf_of[t][tau.get(x).unwrap() as usize],
                VtreeNode::Internal(l, r) => self.parent_of[t].get(&(chosen[l], chosen[r])).copied(),
            };
            match g {
                Some(g) => chosen[t] = g,
                None => return Ok(None),
            }
        }
        Ok((chosen[0] == self.tdd.out()).then_some(Certificate(chosen)))
    }
}

/// A violation of syntactic determinism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Repeated literal/constant labels, or a `1` next to a non-zero label.
    LeafLabels { vtree_node: VtreeId, nodes: Vec<NodeId> },
    /// A pair feeding two distinct nodes.
    SharedPair { vtree_node: VtreeId, pair: Pair, nodes: (NodeId, NodeId) },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LeafLabels { vtree_node, nodes } => {
                write!(f, "vtree leaf {vtree_node}: conflicting labels on nodes {nodes:?}")
            }
            Violation::SharedPair { vtree_node, pair, nodes } => write!(
                f,
                "vtree node {vtree_node}: pair ({},{}) feeds nodes {} and {}",
                pair.0, pair.1, nodes.0, nodes.1
            ),
        }
    }
}

pub fn determinism_violation(d: &Diagram) -> Option<Violation> {
    for (t, fam) in d.families().iter().enumerate() {
        if d.vtree().is_leaf(t) {
            let mut by_label: HashMap<Label, Vec<NodeId>> = HashMap::new();
            for (g, n) in fam.iter().enumerate() {
                by_label.entry(n.label()).or_default().push(g as NodeId);
            }
            for l in [Label::Pos, Label::Neg, Label::True] {
                if let Some(gs) = by_label.get(&l).filter(|gs| gs.len() > 1) {
                    return Some(Violation::LeafLabels { vtree_node: t, nodes: gs.clone() });
                }
            }
            if let Some(ones) = by_label.get(&Label::True) {
                let others: Vec<NodeId> = [Label::Pos, Label::Neg]
                    .iter()
                    .filter_map(|l| by_label.get(l))
                    .flatten()
                    .copied()
                    .collect();
                if !others.is_empty() {
                    let mut nodes = ones.clone();
                    nodes.extend(others);
                    return Some(Violation::LeafLabels { vtree_node: t, nodes });
                }
            }
        } else {
            let mut owner: HashMap<Pair, NodeId> = HashMap::new();
            for (g, n) in fam.iter().enumerate() {
                for &p in n.pairs() {
                    if let Some(h) = owner.insert(p, g as NodeId) {
                        return Some(Violation::SharedPair { vtree_node: t, pair: p, nodes: (h, g as NodeId) });
                    }
                }
            }
        }
    }
    None
}

/// `Ok(Tdd)` when both syntactic determinism conditions hold.
pub fn validate_deterministic(c: NTdd) -> std::result::Result<Tdd, Violation> {
    match determinism_violation(&c.0) {
        None => Ok(Tdd(c.0)),
        Some(v) => Err(v),
    }
}

// Builders

pub(crate) fn empty_marker(vtree: Arc<Vtree>) -> Tdd {
    let mut families = vec![Vec::new(); vtree.len()];
    families[0].push(if vtree.is_leaf(0) { Node::Leaf(Label::False) } else { Node::Internal(Vec::new()) });
    Tdd::trusted_parts(vtree, families, 0)
}

/// Width-1 diagram where leaf `t` gets `label(t, x)` and every internal node
/// the single pair `(0, 0)`.
fn width_one(vtree: Arc<Vtree>, label: impl Fn(Var) -> Label) -> Tdd {
    let families = (0..vtree.len())
        .map(|t| match vtree.node(t) {
            VtreeNode::Leaf(x) => vec![Node::Leaf(label(x))],
            VtreeNode::Internal(..) => vec![Node::Internal(vec![(0, 0)])],
        })
        .collect();
    Tdd::trusted_parts(vtree, families, 0)
}

pub fn constant_tdd(value: bool, vtree: Arc<Vtree>) -> Tdd {
    if value {
        width_one(vtree, |_| Label::True)
    } else {
        empty_marker(vtree)
    }
}

pub fn literal_tdd(lit: Lit, vtree: Arc<Vtree>) -> Result<Tdd> {
    if !vtree.contains(lit.var) {
        return Err(Error::UnknownVariable(lit.var));
    }
    Ok(width_one(vtree, |x| if x == lit.var { Label::of_lit(lit.positive) } else { Label::True }))
}

/// Accepts exactly `tau`, which must assign exactly the vtree's variables.
pub fn single_model_tdd(tau: &Assignment, vtree: Arc<Vtree>) -> Result<Tdd> {
    if !tau.covers_exactly(vtree.all_vars()) {
        return Err(Error::DomainMismatch("assignment must cover exactly the vtree variables".into()));
    }
    Ok(width_one(vtree, |x| Label::of_lit(tau.get(x).unwrap())))
}

/// Width-2 TDD for a clause. Node 0 of each family is `d_t`, the negated
/// clause restricted to `vars(t)`; node 1, present only where the clause
/// mentions a variable below `t`, is `c_t`, the clause restricted to `vars(t)`.
pub fn clause_tdd(c: &Clause, vtree: Arc<Vtree>) -> Result<Tdd> {
    for l in c.lits() {
        if !vtree.contains(l.var) {
            return Err(Error::UnknownVariable(l.var));
        }
    }
    if c.is_tautology() {
        return Ok(constant_tdd(true, vtree));
    }
    if c.is_empty() {
        return Ok(empty_marker(vtree));
    }
    let mut families: Vec<Vec<Node>> = vec![Vec::new(); vtree.len()];
    for t in vtree.bottom_up() {
        families[t] = match vtree.node(t) {
            VtreeNode::Leaf(x) => match c.lits().iter().find(|l| l.var == x) {
                Some(l) => vec![Node::Leaf(Label::of_lit(!l.positive)), Node::Leaf(Label::of_lit(l.positive))],
                None => vec![Node::Leaf(Label::True)],
            },
            VtreeNode::Internal(l, r) => {
                let cl = families[l].len() == 2;
                let cr = families[r].len() == 2;
                let mut fam = vec![Node::Internal(vec![(0, 0)])];
                if cl || cr {
                    let mut ps = vec![];
                    if cl {
                        ps.push((1, 0));
                    }
                    if cr {
                        ps.push((0, 1));
                    }
                    if cl && cr {
                        ps.push((1, 1));
                    }
                    fam.push(Node::internal(ps));
                }
                fam
            }
        };
    }
    Ok(Tdd::trusted_parts(vtree, families, 1))
}
