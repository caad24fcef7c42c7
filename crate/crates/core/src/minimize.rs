//! Canonical minimization by twin contraction, and equivalence through
//! canonical forms.
//!
//! Two `t1`-nodes are twins when, for every parent node `g`, they have the
//! same siblings in `E(g)`. Contracting twins never changes the function; on
//! a TDD without zeros and with a single root node, contracting until no
//! twins remain leaves one node per nontrivial subfunction.

use std::collections::HashMap;

use crate::diagram::{empty_marker, Label, Node, NodeId, Pair, Tdd};
use crate::error::{Error, Result};
use crate::transform::{eliminate_zeros, filter_nodes};
use crate::vtree::{Vtree, VtreeId, VtreeNode};

type Families = Vec<Vec<Node>>;

/// Siblings of every `t1`-node, per parent node, as sorted `(parent, sibling)` lists.
fn signatures(vt: &Vtree, families: &Families, t1: VtreeId) -> Vec<Vec<Pair>> {
    let t = vt.parent(t1).expect("not the root");
    let (l, _) = vt.children(t).unwrap();
    let mut sig = vec![Vec::new(); families[t1].len()];
    for (g, n) in families[t].iter().enumerate() {
        for &(a, b) in n.pairs() {
            if l == t1 {
                sig[a as usize].push((g as NodeId, b));
            } else {
                sig[b as usize].push((g as NodeId, a));
            }
        }
    }
    for s in &mut sig {
        s.sort_unstable();
    }
    sig
}

fn twin_groups(vt: &Vtree, families: &Families, t1: VtreeId) -> Vec<Vec<NodeId>> {
    let sig = signatures(vt, families, t1);
    let mut groups: Vec<Vec<NodeId>> = Vec::new();
    let mut by_sig: HashMap<&[Pair], usize> = HashMap::new();
    for (g, s) in sig.iter().enumerate() {
        let i = *by_sig.entry(s.as_slice()).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[i].push(g as NodeId);
    }
    groups.retain(|g| g.len() > 1);
    groups
}

/// Groups of mutually twin nodes in family `t` (groups of size one omitted).
pub fn find_twins(c: &Tdd, t: VtreeId) -> Result<Vec<Vec<NodeId>>> {
    if t == c.vtree().root() {
        return Err(Error::RootFamily);
    }
    Ok(twin_groups(c.vtree(), &c.families().to_vec(), t))
}

/// Merges each group into one node (union of inputs, or of labels at a
/// leaf) and rewires the parent family. Nodes outside groups keep their
/// relative order; each merged node takes the place of its first member.
fn contract_groups(vt: &Vtree, families: &mut Families, t1: VtreeId, groups: &[Vec<NodeId>]) {
    let n = families[t1].len();
    let mut rep: Vec<NodeId> = (0..n as NodeId).collect();
    for grp in groups {
        for &g in grp {
            rep[g as usize] = grp[0];
        }
    }
    let mut new_id = vec![NodeId::MAX; n];
    let mut next = 0;
    for g in 0..n {
        if rep[g] as usize == g {
            new_id[g] = next;
            next += 1;
        }
    }
    let old = std::mem::take(&mut families[t1]);
    let mut fam: Vec<Option<Node>> = vec![None; next as usize];
    for (g, node) in old.into_iter().enumerate() {
        let slot = &mut fam[new_id[rep[g] as usize] as usize];
        *slot = Some(match (slot.take(), node) {
            (None, node) => node,
            (Some(Node::Leaf(a)), Node::Leaf(b)) => Node::Leaf(a.or(b)),
            (Some(Node::Internal(mut a)), Node::Internal(b)) => {
                a.extend(b);
                Node::internal(a)
            }
            _ => unreachable!("a family holds one kind of node"),
        });
    }
    families[t1] = fam.into_iter().map(Option::unwrap).collect();
    let t = vt.parent(t1).unwrap();
    let left = vt.children(t).unwrap().0 == t1;
    let m = |g: NodeId| new_id[rep[g as usize] as usize];
    for node in &mut families[t] {
        let ps: Vec<Pair> = node
            .pairs()
            .iter()
            .map(|&(a, b)| if left { (m(a), b) } else { (a, m(b)) })
            .collect();
        *node = Node::internal(ps);
    }
}

/// Contracts one pair of twins.
pub fn contract_twins(c: &Tdd, t: VtreeId, g1: NodeId, g2: NodeId) -> Result<Tdd> {
    if t == c.vtree().root() {
        return Err(Error::RootFamily);
    }
    let n = c.family(t).len() as NodeId;
    if g1 == g2 || g1 >= n || g2 >= n {
        return Err(Error::NotTwins(g1, g2));
    }
    let mut families = c.families().to_vec();
    let sig = signatures(c.vtree(), &families, t);
    if sig[g1 as usize] != sig[g2 as usize] {
        return Err(Error::NotTwins(g1, g2));
    }
    let group = vec![g1.min(g2), g1.max(g2)];
    contract_groups(c.vtree(), &mut families, t, &[group]);
    let res = Tdd::trusted_parts(c.vtree_arc().clone(), families, c.out());
    debug_assert!(res.size() <= c.size());
    Ok(res)
}

/// Keeps the output as the only root node and drops nodes it cannot reach.
fn prune(c: &Tdd) -> Tdd {
    let vt = c.vtree();
    let mut reach: Vec<Vec<bool>> = c.families().iter().map(|f| vec![false; f.len()]).collect();
    reach[0][c.out() as usize] = true;
    for t in 0..vt.len() {
        if let VtreeNode::Internal(l, r) = vt.node(t) {
            for (g, n) in c.family(t).iter().enumerate() {
                if reach[t][g] {
                    for &(a, b) in n.pairs() {
                        reach[l][a as usize] = true;
                        reach[r][b as usize] = true;
                    }
                }
            }
        }
    }
    Tdd::trusted(filter_nodes(c, &reach))
}

/// Sorts every family (leaves by label, internal nodes by their remapped
/// pair lists), children first.
fn canonical_order(vt: &Vtree, families: &mut Families) {
    let mut perm: Vec<Vec<NodeId>> = vec![Vec::new(); vt.len()];
    for t in vt.bottom_up() {
        if let VtreeNode::Internal(l, r) = vt.node(t) {
            for n in &mut families[t] {
                let ps = n.pairs().iter().map(|&(a, b)| (perm[l][a as usize], perm[r][b as usize])).collect();
                *n = Node::internal(ps);
            }
        }
        let mut order: Vec<usize> = (0..families[t].len()).collect();
        order.sort_by(|&a, &b| match (&families[t][a], &families[t][b]) {
            (Node::Leaf(x), Node::Leaf(y)) => x.cmp(y),
            (Node::Internal(x), Node::Internal(y)) => x.cmp(y),
            _ => unreachable!(),
        });
        let mut p = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            p[old] = new as NodeId;
        }
        let old = std::mem::take(&mut families[t]);
        let mut slots: Vec<Option<Node>> = old.into_iter().map(Some).collect();
        families[t] = order.iter().map(|&o| slots[o].take().unwrap()).collect();
        perm[t] = p;
    }
}

/// The canonical minimal TDD computing the same function over the same vtree.
pub fn canonize(c: &Tdd) -> Tdd {
    let z = eliminate_zeros(c);
    if z.is_empty_marker() {
        return empty_marker(c.vtree_arc().clone());
    }
    let p = prune(&z);
    let vt = p.vtree_arc().clone();
    let mut families = p.families().to_vec();
    loop {
        let mut changed = false;
        for t1 in vt.bottom_up().filter(|&t| t != vt.root()) {
            let groups = twin_groups(&vt, &families, t1);
            if !groups.is_empty() {
                contract_groups(&vt, &mut families, t1, &groups);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    canonical_order(&vt, &mut families);
    debug_assert!(families[0].len() == 1);
    let res = Tdd::trusted_parts(vt, families, 0);
    debug_assert!(res.families().iter().flatten().all(|n| !matches!(n, Node::Leaf(Label::False))));
    res
}

/// Same function, decided by comparing canonical forms.
pub fn equivalent(c1: &Tdd, c2: &Tdd) -> Result<bool> {
    if !c1.same_vtree(c2) {
        return Err(Error::VtreeMismatch);
    }
    Ok(canonize(c1).families() == canonize(c2).families())
}
