//! Variable trees: rooted binary trees whose leaves carry the variables.
//!
//! Nodes are stored in preorder with the root at index 0, so every child has a
//! larger index than its parent. Iterating indices in decreasing order visits
//! children before parents; two vtrees are structurally equal exactly when
//! their node vectors are equal.

mod from_td;
mod text;

use std::collections::BTreeMap;

pub use from_td::{vtree_from_circuit_td, vtree_from_incidence_td, vtree_from_primal_td, vtree_from_td};

use crate::error::{Error, Result};
use crate::var::Var;

pub type VtreeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VtreeNode {
    Leaf(Var),
    Internal(VtreeId, VtreeId),
}

/// Owned tree shape used to build vtrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    Leaf(Var),
    Node(Box<Shape>, Box<Shape>),
}

impl Shape {
    pub fn node(left: Shape, right: Shape) -> Shape {
        Shape::Node(Box::new(left), Box::new(right))
    }
}

/// An ordered sequence of distinct variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarOrder(Vec<Var>);

impl VarOrder {
    pub fn new(vars: Vec<Var>) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::EmptyOrder);
        }
        let mut seen = std::collections::BTreeSet::new();
        for &v in &vars {
            if !seen.insert(v) {
                return Err(Error::DuplicateVariable(v));
            }
        }
        Ok(VarOrder(vars))
    }

    /// `1..=n`.
    pub fn natural(n: u32) -> Result<Self> {
        VarOrder::new((1..=n).map(Var).collect())
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    pub fn reversed(&self) -> VarOrder {
        VarOrder(self.0.iter().rev().copied().collect())
    }
}

#[derive(Debug, Clone)]
pub struct Vtree {
    nodes: Vec<VtreeNode>,
    parent: Vec<Option<VtreeId>>,
    vars: Vec<Vec<Var>>,
    leaf_of_var: BTreeMap<Var, VtreeId>,
}

impl PartialEq for Vtree {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
    }
}

impl Eq for Vtree {}

impl Vtree {
    pub fn from_shape(shape: &Shape) -> Result<Vtree> {
        fn emit(s: &Shape, out: &mut Vec<VtreeNode>) -> VtreeId {
            let id = out.len();
            match s {
                Shape::Leaf(v) => out.push(VtreeNode::Leaf(*v)),
                Shape::Node(l, r) => {
                    out.push(VtreeNode::Leaf(Var(0)));
                    let li = emit(l, out);
                    let ri = emit(r, out);
                    out[id] = VtreeNode::Internal(li, ri);
                }
            }
            id
        }
        let mut nodes = Vec::new();
        emit(shape, &mut nodes);
        Vtree::from_preorder(nodes)
    }

    /// Builds from a node list that is already in preorder (root at 0).
    fn from_preorder(nodes: Vec<VtreeNode>) -> Result<Vtree> {
        let n = nodes.len();
        let mut parent = vec![None; n];
        let mut leaf_of_var = BTreeMap::new();
        for (i, node) in nodes.iter().enumerate() {
            match *node {
                VtreeNode::Leaf(v) => {
                    if leaf_of_var.insert(v, i).is_some() {
                        return Err(Error::DuplicateVariable(v));
                    }
                }
                VtreeNode::Internal(l, r) => {
                    parent[l] = Some(i);
                    parent[r] = Some(i);
                }
            }
        }
        let mut vars: Vec<Vec<Var>> = vec![Vec::new(); n];
        for i in (0..n).rev() {
            vars[i] = match nodes[i] {
                VtreeNode::Leaf(v) => vec![v],
                VtreeNode::Internal(l, r) => {
                    let mut vs = vars[l].clone();
                    vs.extend_from_slice(&vars[r]);
                    vs.sort_unstable();
                    vs
                }
            };
        }
        Ok(Vtree { nodes, parent, vars, leaf_of_var })
    }

    pub fn shape(&self) -> Shape {
        self.shape_at(self.root())
    }

    pub fn shape_at(&self, t: VtreeId) -> Shape {
        match self.nodes[t] {
            VtreeNode::Leaf(v) => Shape::Leaf(v),
            VtreeNode::Internal(l, r) => Shape::node(self.shape_at(l), self.shape_at(r)),
        }
    }

    pub fn root(&self) -> VtreeId {
        0
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, t: VtreeId) -> VtreeNode {
        self.nodes[t]
    }

    pub fn nodes(&self) -> &[VtreeNode] {
        &self.nodes
    }

    pub fn is_leaf(&self, t: VtreeId) -> bool {
        matches!(self.nodes[t], VtreeNode::Leaf(_))
    }

    pub fn children(&self, t: VtreeId) -> Option<(VtreeId, VtreeId)> {
        match self.nodes[t] {
            VtreeNode::Internal(l, r) => Some((l, r)),
            VtreeNode::Leaf(_) => None,
        }
    }

    pub fn leaf_var(&self, t: VtreeId) -> Option<Var> {
        match self.nodes[t] {
            VtreeNode::Leaf(v) => Some(v),
            VtreeNode::Internal(..) => None,
        }
    }

    pub fn parent(&self, t: VtreeId) -> Option<VtreeId> {
        self.parent[t]
    }

    pub fn sibling(&self, t: VtreeId) -> Option<VtreeId> {
        let p = self.parent[t]?;
        let (l, r) = self.children(p).expect("parent is internal");
        Some(if l == t { r } else { l })
    }

    /// Sorted variables below `t`.
    pub fn vars(&self, t: VtreeId) -> &[Var] {
        &self.vars[t]
    }

    pub fn all_vars(&self) -> &[Var] {
        &self.vars[0]
    }

    pub fn num_vars(&self) -> usize {
        self.vars[0].len()
    }

    pub fn leaf_of(&self, v: Var) -> Option<VtreeId> {
        self.leaf_of_var.get(&v).copied()
    }

    pub fn contains(&self, v: Var) -> bool {
        self.leaf_of_var.contains_key(&v)
    }

    /// Children before parents.
    pub fn bottom_up(&self) -> impl Iterator<Item = VtreeId> {
        (0..self.nodes.len()).rev()
    }

    pub fn depth(&self) -> usize {
        let mut depth = vec![0usize; self.len()];
        let mut best = 0;
        for t in 1..self.len() {
            depth[t] = depth[self.parent[t].unwrap()] + 1;
            best = best.max(depth[t]);
        }
        best
    }

    /// Every internal node has at least one leaf child.
    pub fn is_linear(&self) -> bool {
        self.nodes.iter().all(|n| match *n {
            VtreeNode::Leaf(_) => true,
            VtreeNode::Internal(l, r) => self.is_leaf(l) || self.is_leaf(r),
        })
    }

    /// The order induced by a linear vtree: the leaf hanging off the root
    /// first, then the order of the other subtree.
    pub fn linear_order(&self) -> Result<VarOrder> {
        if !self.is_linear() {
            return Err(Error::NonLinearVtree);
        }
        let mut out = Vec::with_capacity(self.num_vars());
        let mut t = self.root();
        loop {
            match self.nodes[t] {
                VtreeNode::Leaf(v) => {
                    out.push(v);
                    break;
                }
                VtreeNode::Internal(l, r) => {
                    let (leaf, rest) = if self.is_leaf(l) { (l, r) } else { (r, l) };
                    out.push(self.leaf_var(leaf).unwrap());
                    t = rest;
                }
            }
        }
        VarOrder::new(out)
    }

    /// `T \ x`: deletes the leaf of `x` and contracts its parent. Also returns
    /// the map from old node ids to new ones (`None` for the two removed nodes).
    pub fn remove_leaf(&self, x: Var) -> Result<(Vtree, Vec<Option<VtreeId>>)> {
        let leaf = self.leaf_of(x).ok_or(Error::UnknownVariable(x))?;
        if self.len() == 1 {
            return Err(Error::LastVariable);
        }
        let contracted = self.parent[leaf].unwrap();
        let mut map = vec![None; self.len()];
        let mut out = Vec::with_capacity(self.len() - 2);
        self.rebuild_without(self.root(), leaf, contracted, &mut out, &mut map);
        Ok((Vtree::from_preorder(out)?, map))
    }

    fn rebuild_without(
        &self,
        t: VtreeId,
        leaf: VtreeId,
        contracted: VtreeId,
        out: &mut Vec<VtreeNode>,
        map: &mut [Option<VtreeId>],
    ) -> VtreeId {
        if t == contracted {
            let other = self.sibling(leaf).unwrap();
            return self.rebuild_without(other, leaf, contracted, out, map);
        }
        let id = out.len();
        map[t] = Some(id);
        match self.nodes[t] {
            VtreeNode::Leaf(v) => out.push(VtreeNode::Leaf(v)),
            VtreeNode::Internal(l, r) => {
                out.push(VtreeNode::Leaf(Var(0)));
                let li = self.rebuild_without(l, leaf, contracted, out, map);
                let ri = self.rebuild_without(r, leaf, contracted, out, map);
                out[id] = VtreeNode::Internal(li, ri);
            }
        }
        id
    }
}

/// `T_π`: the root's left child is the leaf of the first variable and its
/// right child is the linear vtree of the remaining order.
pub fn linear_vtree(order: &VarOrder) -> Vtree {
    let vars = order.vars();
    let mut shape = Shape::Leaf(*vars.last().unwrap());
    for &v in vars.iter().rev().skip(1) {
        shape = Shape::node(Shape::Leaf(v), shape);
    }
    Vtree::from_shape(&shape).expect("orders have distinct variables")
}

/// Recursive midpoint split; the left half gets `⌈n/2⌉` variables.
pub fn balanced_vtree(order: &VarOrder) -> Vtree {
    fn split(vars: &[Var]) -> Shape {
        if vars.len() == 1 {
            return Shape::Leaf(vars[0]);
        }
        let mid = vars.len().div_ceil(2);
        Shape::node(split(&vars[..mid]), split(&vars[mid..]))
    }
    Vtree::from_shape(&split(order.vars())).expect("orders have distinct variables")
}
