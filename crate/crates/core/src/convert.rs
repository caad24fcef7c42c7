//! OBDDs and their conversion to and from TDDs over linear vtrees.
//!
//! An OBDD reading `x1 .. xn` becomes a TDD over the linear vtree of the
//! reversed order: the node of family `{x1..xi}` for an OBDD node `v` at
//! level `i+1` accepts the assignments whose path from the source reaches `v`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::diagram::{constant_tdd, Label, Node, NodeId, Tdd};
use crate::error::{Error, Result};
use crate::oracle::BoolFunTable;
use crate::var::{Assignment, Var};
use crate::vtree::{linear_vtree, VarOrder, VtreeNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ORef {
    Sink(bool),
    Node(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ObddNode {
    pub var: Var,
    pub lo: ORef,
    pub hi: ORef,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obdd {
    order: VarOrder,
    nodes: Vec<ObddNode>,
    source: ORef,
}

impl Obdd {
    /// Checks references and that edges go forward in `order`.
    pub fn new(order: VarOrder, nodes: Vec<ObddNode>, source: ORef) -> Result<Obdd> {
        let b = Obdd { order, nodes, source };
        let level = b.levels()?;
        let bad = |m: String| Err(Error::Malformed(m));
        let lvl = |r: ORef| match r {
            ORef::Sink(_) => Some(usize::MAX),
            ORef::Node(i) => level.get(i as usize).copied(),
        };
        if lvl(b.source).is_none() {
            return bad("source is not a node".into());
        }
        for (i, n) in b.nodes.iter().enumerate() {
            for c in [n.lo, n.hi] {
                match lvl(c) {
                    None => return bad(format!("node {i} points to a missing node")),
                    Some(l) if l <= level[i] => return bad(format!("edge from node {i} goes backwards")),
                    _ => {}
                }
            }
        }
        Ok(b)
    }

    fn levels(&self) -> Result<Vec<usize>> {
        let pos: HashMap<Var, usize> = self.order.vars().iter().enumerate().map(|(i, &v)| (v, i)).collect();
        self.nodes.iter().map(|n| pos.get(&n.var).copied().ok_or(Error::UnknownVariable(n.var))).collect()
    }

    pub fn constant(order: VarOrder, value: bool) -> Obdd {
        Obdd { order, nodes: Vec::new(), source: ORef::Sink(value) }
    }

    pub fn order(&self) -> &VarOrder {
        &self.order
    }

    pub fn nodes(&self) -> &[ObddNode] {
        &self.nodes
    }

    pub fn source(&self) -> ORef {
        self.source
    }

    /// Decision nodes plus the two sinks.
    pub fn size(&self) -> usize {
        self.nodes.len() + 2
    }

    pub fn evaluate(&self, tau: &Assignment) -> Result<bool> {
        let mut r = self.source;
        loop {
            match r {
                ORef::Sink(b) => return Ok(b),
                ORef::Node(i) => {
                    let n = self.nodes[i as usize];
                    let b = tau.get(n.var).ok_or(Error::UnknownVariable(n.var))?;
                    r = if b { n.hi } else { n.lo };
                }
            }
        }
    }

    pub fn truth_table(&self) -> Result<BoolFunTable> {
        let mut vars = self.order.vars().to_vec();
        vars.sort();
        let f = BoolFunTable::from_fn(vars, |tau| self.evaluate(tau).unwrap())?;
        Ok(f)
    }

    /// Number of decision nodes per level of the order.
    pub fn level_widths(&self) -> Vec<usize> {
        let mut w = vec![0; self.order.vars().len()];
        for l in self.levels().expect("checked on construction") {
            w[l] += 1;
        }
        w
    }

    /// Keeps the nodes reachable from the source, sorted by level and then
    /// by first visit of a depth-first walk (0-edge first), so isomorphic
    /// OBDDs come out identical.
    fn trimmed(&self) -> Obdd {
        let level = self.levels().expect("checked on construction");
        let mut rank = vec![usize::MAX; self.nodes.len()];
        let mut next = 0;
        let mut stack = Vec::new();
        if let ORef::Node(i) = self.source {
            stack.push(i);
        }
        while let Some(i) = stack.pop() {
            if rank[i as usize] != usize::MAX {
                continue;
            }
            rank[i as usize] = next;
            next += 1;
            let n = self.nodes[i as usize];
            for c in [n.hi, n.lo] {
                if let ORef::Node(j) = c {
                    stack.push(j);
                }
            }
        }
        let mut ids: Vec<usize> = (0..self.nodes.len()).filter(|&i| rank[i] != usize::MAX).collect();
        ids.sort_by_key(|&i| (level[i], rank[i]));
        let mut map = vec![u32::MAX; self.nodes.len()];
        for (k, &i) in ids.iter().enumerate() {
            map[i] = k as u32;
        }
        let re = |r: ORef| match r {
            ORef::Node(i) => ORef::Node(map[i as usize]),
            s => s,
        };
        let nodes = ids.iter().map(|&i| ObddNode { lo: re(self.nodes[i].lo), hi: re(self.nodes[i].hi), ..self.nodes[i] }).collect();
        Obdd { order: self.order.clone(), nodes, source: re(self.source) }
    }

    /// Merges isomorphic nodes and drops redundant tests.
    pub fn reduce(&self) -> Obdd {
        let b = self.trimmed();
        let mut map: Vec<ORef> = vec![ORef::Sink(false); b.nodes.len()];
        let mut unique: HashMap<ObddNode, u32> = HashMap::new();
        let mut nodes: Vec<ObddNode> = Vec::new();
        let re = |r: ORef, map: &[ORef]| match r {
            ORef::Node(i) => map[i as usize],
            s => s,
        };
        // Trimmed nodes are sorted by level, so children come later.
        for i in (0..b.nodes.len()).rev() {
            let n = b.nodes[i];
            let (lo, hi) = (re(n.lo, &map), re(n.hi, &map));
            map[i] = if lo == hi {
                lo
            } else {
                let key = ObddNode { var: n.var, lo, hi };
                let id = *unique.entry(key).or_insert_with(|| {
                    nodes.push(key);
                    (nodes.len() - 1) as u32
                });
                ORef::Node(id)
            };
        }
        let source = re(b.source, &map);
        Obdd { order: b.order.clone(), nodes, source }.trimmed()
    }

    /// Equivalent OBDD in which every path tests every variable, with only
    /// reachable nodes.
    pub fn level_complete(&self) -> Obdd {
        let b = self.trimmed();
        let vars = b.order.vars().to_vec();
        let n = vars.len();
        let level = b.levels().expect("checked on construction");
        let level_of = |r: ORef| match r {
            ORef::Sink(_) => n,
            ORef::Node(i) => level[i as usize],
        };
        let mut nodes = b.nodes.clone();
        // (target, level) -> dummy testing vars[level] with both edges to target
        let mut dummies: HashMap<(ORef, usize), u32> = HashMap::new();
        fn pad(
            target: ORef,
            from: usize,
            to: usize,
            vars: &[Var],
            nodes: &mut Vec<ObddNode>,
            dummies: &mut HashMap<(ORef, usize), u32>,
        ) -> ORef {
            let mut r = target;
            for l in (from..to).rev() {
                r = ORef::Node(*dummies.entry((target, l)).or_insert_with(|| {
                    nodes.push(ObddNode { var: vars[l], lo: r, hi: r });
                    (nodes.len() - 1) as u32
                }));
            }
            r
        }
        for i in 0..b.nodes.len() {
            let nd = b.nodes[i];
            let lo = pad(nd.lo, level[i] + 1, level_of(nd.lo), &vars, &mut nodes, &mut dummies);
            let hi = pad(nd.hi, level[i] + 1, level_of(nd.hi), &vars, &mut nodes, &mut dummies);
            nodes[i] = ObddNode { lo, hi, ..nd };
        }
        let source = pad(b.source, 0, level_of(b.source), &vars, &mut nodes, &mut dummies);
        Obdd { order: b.order, nodes, source }.trimmed()
    }

    /// The reduced OBDD of `f` over `order`.
    pub fn from_table(f: &BoolFunTable, order: &VarOrder) -> Result<Obdd> {
        let mut sorted = order.vars().to_vec();
        sorted.sort();
        if sorted != f.vars() {
            return Err(Error::VtreeMismatch);
        }
        // Rows of a subfunction, indexed by the remaining variables in order.
        let bit: Vec<usize> = order.vars().iter().map(|v| f.vars().binary_search(v).unwrap()).collect();
        let n = bit.len();
        let mut rows = Vec::with_capacity(1 << n);
        for i in 0..1u64 << n {
            let mut j = 0u64;
            for (k, &b) in bit.iter().enumerate() {
                j |= (i >> k & 1) << b;
            }
            rows.push(f.get(j));
        }
        let mut nodes = Vec::new();
        let mut unique = HashMap::new();
        fn build(
            rows: &[bool],
            level: usize,
            vars: &[Var],
            nodes: &mut Vec<ObddNode>,
            unique: &mut HashMap<ObddNode, u32>,
        ) -> ORef {
            if rows.iter().all(|&b| b) {
                return ORef::Sink(true);
            }
            if !rows.iter().any(|&b| b) {
                return ORef::Sink(false);
            }
            // Bit 0 of a row index is the current variable.
            let lo: Vec<bool> = rows.iter().step_by(2).copied().collect();
            let hi: Vec<bool> = rows.iter().skip(1).step_by(2).copied().collect();
            let lo = build(&lo, level + 1, vars, nodes, unique);
            let hi = build(&hi, level + 1, vars, nodes, unique);
            if lo == hi {
                return lo;
            }
            let key = ObddNode { var: vars[level], lo, hi };
            ORef::Node(*unique.entry(key).or_insert_with(|| {
                nodes.push(key);
                (nodes.len() - 1) as u32
            }))
        }
        let source = build(&rows, 0, order.vars(), &mut nodes, &mut unique);
        Ok(Obdd { order: order.clone(), nodes, source }.trimmed())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("order");
        for v in self.order.vars() {
            write!(s, " {v}").unwrap();
        }
        s.push_str("\nsink0 0\nsink1 1\n");
        let id = |r: ORef| match r {
            ORef::Sink(b) => b as u32,
            ORef::Node(i) => i + 2,
        };
        for (i, n) in self.nodes.iter().enumerate() {
            writeln!(s, "node {} {} {} {}", i + 2, n.var, id(n.lo), id(n.hi)).unwrap();
        }
        writeln!(s, "source {}", id(self.source)).unwrap();
        s
    }

    /// Parses the line format written by [`Obdd::to_text`]. Ids are arbitrary
    /// non-negative integers; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Obdd> {
        let mut order = None;
        let mut sinks: HashMap<u64, bool> = HashMap::new();
        let mut raw: Vec<(usize, u64, Var, u64, u64)> = Vec::new();
        let mut source = None;
        for (ln, line) in text.lines().enumerate() {
            let ln = ln + 1;
            let err = |m: &str| Error::Parse { line: ln, msg: m.to_string() };
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let kw = it.next().unwrap();
            let nums: Vec<u64> = it.map(|w| w.parse().map_err(|_| err(&format!("bad number `{w}`")))).collect::<Result<_>>()?;
            match (kw, nums.as_slice()) {
                ("order", vs) if order.is_none() => {
                    order = Some(VarOrder::new(vs.iter().map(|&v| Var(v as u32)).collect()).map_err(|e| err(&e.to_string()))?)
                }
                ("sink0", [id]) | ("sink1", [id]) => {
                    if sinks.insert(*id, kw == "sink1").is_some() {
                        return Err(err("duplicate id"));
                    }
                }
                ("node", [id, var, lo, hi]) => raw.push((ln, *id, Var(*var as u32), *lo, *hi)),
                ("source", [id]) if source.is_none() => source = Some((ln, *id)),
                _ => return Err(err(&format!("unexpected `{line}`"))),
            }
        }
        let order = order.ok_or(Error::Parse { line: 0, msg: "missing order".into() })?;
        let (sln, source) = source.ok_or(Error::Parse { line: 0, msg: "missing source".into() })?;
        let mut index: HashMap<u64, ORef> = sinks.iter().map(|(&id, &b)| (id, ORef::Sink(b))).collect();
        for (k, &(ln, id, ..)) in raw.iter().enumerate() {
            if index.insert(id, ORef::Node(k as u32)).is_some() {
                return Err(Error::Parse { line: ln, msg: format!("duplicate id {id}") });
            }
        }
        let look = |ln: usize, id: u64| index.get(&id).copied().ok_or(Error::Parse { line: ln, msg: format!("unknown id {id}") });
        let nodes = raw
            .iter()
            .map(|&(ln, _, var, lo, hi)| Ok(ObddNode { var, lo: look(ln, lo)?, hi: look(ln, hi)? }))
            .collect::<Result<Vec<_>>>()?;
        Obdd::new(order, nodes, look(sln, source)?)
    }
}

/// TDD over the linear vtree of the reversed order.
pub fn obdd_to_tdd(b: &Obdd) -> Result<Tdd> {
    let order = b.order().reversed();
    let vt = Arc::new(linear_vtree(&order));
    let b = b.level_complete();
    let vars = b.order().vars().to_vec();
    let n = vars.len();
    if let ORef::Sink(v) = b.source() {
        return Ok(constant_tdd(v, vt));
    }
    // t[i]: vtree node over vars[0..=i]; families[t[i]] indexed by the
    // targets reached after reading vars[0..=i].
    let mut t = vec![0usize; n];
    {
        let mut cur = vt.root();
        for i in (0..n).rev() {
            t[i] = cur;
            if let VtreeNode::Internal(_, r) = vt.node(cur) {
                cur = r;
            }
        }
    }
    let level = b.levels()?;
    let mut by_level: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (i, &l) in level.iter().enumerate() {
        by_level[l].push(i as u32);
    }
    let mut families: Vec<Vec<Node>> = vec![Vec::new(); vt.len()];
    // Index of each level-(i+1) target inside family t[i].
    let targets = |i: usize| -> Vec<ORef> {
        if i + 1 < n {
            by_level[i + 1].iter().map(|&j| ORef::Node(j)).collect()
        } else {
            vec![ORef::Sink(true), ORef::Sink(false)]
        }
    };
    let mut prev: HashMap<u32, NodeId> = HashMap::new();
    for i in 0..n {
        let tg = targets(i);
        let pos: HashMap<ORef, NodeId> = tg.iter().enumerate().map(|(k, &r)| (r, k as NodeId)).collect();
        if i == 0 {
            let mut masks = vec![0u8; tg.len()];
            for &u in &by_level[0] {
                let nd = b.nodes()[u as usize];
                masks[pos[&nd.lo] as usize] |= 1;
                masks[pos[&nd.hi] as usize] |= 2;
            }
            families[t[0]] = masks.into_iter().map(|m| Node::Leaf(Label::from_mask(m))).collect();
        } else {
            // Left child of t[i] is the leaf of vars[i], holding [Neg, Pos].
            let (leaf, _) = vt.children(t[i]).unwrap();
            families[leaf] = vec![Node::Leaf(Label::Neg), Node::Leaf(Label::Pos)];
            let mut pairs = vec![Vec::new(); tg.len()];
            for &u in &by_level[i] {
                let nd = b.nodes()[u as usize];
                pairs[pos[&nd.lo] as usize].push((0, prev[&u]));
                pairs[pos[&nd.hi] as usize].push((1, prev[&u]));
            }
            families[t[i]] = pairs.into_iter().map(Node::internal).collect();
        }
        prev = tg
            .iter()
            .enumerate()
            .filter_map(|(k, r)| match r {
                ORef::Node(j) => Some((*j, k as NodeId)),
                ORef::Sink(_) => None,
            })
            .collect();
    }
    let out = 0; // targets(n-1) lists the 1-sink first
    let d = crate::diagram::Diagram::new(vt, families, out)?;
    crate::diagram::validate_deterministic(d.into())
        .map_err(|v| Error::Malformed(format!("converted OBDD is not deterministic: {v:?}")))
}

/// OBDD reading the vtree's linear order backwards, one decision node per
/// node of the TDD. Edges that reach no node go to the 0-sink.
pub fn tdd_to_obdd(c: &Tdd) -> Result<Obdd> {
    let vt = c.vtree();
    let lin = vt.linear_order()?;
    let order = lin.reversed();
    let vars = order.vars().to_vec();
    let n = vars.len();
    // chain[i]: vtree node over vars[0..=i]; leaf[i]: leaf of vars[i].
    let mut chain = vec![0usize; n];
    let mut cur = vt.root();
    for i in (0..n).rev() {
        chain[i] = cur;
        if let VtreeNode::Internal(l, r) = vt.node(cur) {
            cur = if vt.is_leaf(l) && vt.leaf_var(l) == Some(vars[i]) { r } else { l };
        }
    }
    let mut nodes: Vec<ObddNode> = Vec::new();
    // obdd[i][g]: decision node testing vars[i+1] standing for node g of chain[i].
    let mut ids: Vec<Vec<ORef>> = vec![Vec::new(); n];
    for i in (0..n).rev() {
        let fam_len = c.family(chain[i]).len();
        ids[i] = if i + 1 == n {
            (0..fam_len).map(|g| ORef::Sink(g as NodeId == c.out())).collect()
        } else {
            let t = chain[i + 1];
            let (l, r) = vt.children(t).unwrap();
            let leaf_left = l != chain[i];
            let leaf = if leaf_left { l } else { r };
            let leaf_fam = c.family(leaf);
            // target of (b, g): the node of t with pair (a, g), a satisfied by b
            let mut next: HashMap<(bool, NodeId), ORef> = HashMap::new();
            for (h, nd) in c.family(t).iter().enumerate() {
                for &(p, q) in nd.pairs() {
                    let (a, g) = if leaf_left { (p, q) } else { (q, p) };
                    for b in [false, true] {
                        if leaf_fam[a as usize].label().eval(b) {
                            next.insert((b, g), ids[i + 1][h]);
                        }
                    }
                }
            }
            (0..fam_len as NodeId)
                .map(|g| {
                    let get = |b| next.get(&(b, g)).copied().unwrap_or(ORef::Sink(false));
                    nodes.push(ObddNode { var: vars[i + 1], lo: get(false), hi: get(true) });
                    ORef::Node((nodes.len() - 1) as u32)
                })
                .collect()
        };
    }
    let leaf0 = c.family(chain[0]);
    let pick = |b: bool| leaf0.iter().position(|nd| nd.label().eval(b)).map(|g| ids[0][g]).unwrap_or(ORef::Sink(false));
    nodes.push(ObddNode { var: vars[0], lo: pick(false), hi: pick(true) });
    let source = ORef::Node((nodes.len() - 1) as u32);
    Ok(Obdd::new(order, nodes, source)?.trimmed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minimize::canonize;
    use crate::oracle::fun_from_cnf;
    use crate::cnf::parse_dimacs;
    use crate::par::Exec;

    fn ord(vs: &[u32]) -> VarOrder {
        VarOrder::new(vs.iter().map(|&v| Var(v)).collect()).unwrap()
    }

    #[test]
    fn single_variable() {
        let b = Obdd::parse("order 1\nsink0 0\nsink1 1\nnode 5 1 0 1\nsource 5\n").unwrap();
        let c = obdd_to_tdd(&b).unwrap();
        assert_eq!(c.count(), 1u32.into());
        assert!(c.size() <= 3 * b.size());
        let back = tdd_to_obdd(&c).unwrap();
        assert_eq!(back.truth_table().unwrap(), b.truth_table().unwrap());
    }

    #[test]
    fn text_round_trip_and_errors() {
        let f = BoolFunTable::from_index_fn((1..=4).map(Var).collect(), |i| i % 3 == 1).unwrap();
        let b = Obdd::from_table(&f, &ord(&[3, 1, 4, 2])).unwrap();
        assert_eq!(Obdd::parse(&b.to_text()).unwrap(), b);
        assert!(Obdd::parse("order 1 2\nsink0 0\nsink1 1\nnode 2 2 0 3\nnode 3 1 0 1\nsource 2\n").is_err());
        assert!(Obdd::parse("order 1\nsink0 0\nnode 2 1 0 7\nsource 2\n").is_err());
    }

    #[test]
    fn long_edges_and_constants() {
        // x1 ? 1 : x3, skipping x2
        let b = Obdd::parse("order 1 2 3\nsink0 0\nsink1 1\nnode 2 1 3 1\nnode 3 3 0 1\nsource 2\n").unwrap();
        let c = obdd_to_tdd(&b).unwrap();
        assert_eq!(c.truth_table().unwrap(), b.truth_table().unwrap());
        assert!(c.size() <= 3 * b.level_complete().size());
        let k = Obdd::constant(ord(&[1, 2]), true);
        assert_eq!(obdd_to_tdd(&k).unwrap().count(), 4u32.into());
        let back = tdd_to_obdd(&canonize(&obdd_to_tdd(&k).unwrap())).unwrap().reduce();
        assert_eq!(back.source(), ORef::Sink(true));
    }

    #[test]
    fn widths_match_subfunction_counts() {
        let f = fun_from_cnf(&parse_dimacs("p cnf 5 3\n1 -2 3 0\n-1 4 0\n2 -5 0\n").unwrap()).unwrap();
        let order = ord(&[2, 5, 1, 3, 4]);
        let b = Obdd::from_table(&f, &order).unwrap();
        let c = obdd_to_tdd(&b).unwrap();
        assert_eq!(c.truth_table().unwrap(), f);
        let m = canonize(&c);
        assert_eq!(m.family_sizes(), f.subfunction_profile(m.vtree(), true, Exec::Sequential).unwrap());
        let back = tdd_to_obdd(&m).unwrap();
        assert_eq!(back.order(), &order);
        assert_eq!(back.truth_table().unwrap(), f);
        assert_eq!(back.reduce(), b);
    }

    #[test]
    fn non_linear_vtree_is_rejected() {
        let c = constant_tdd(true, crate::diagram::tests::vt_bal(4));
        assert_eq!(tdd_to_obdd(&c), Err(Error::NonLinearVtree));
    }
}
