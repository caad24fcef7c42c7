//! Undirected graphs and tree decompositions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type Vertex = u32;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<Vertex, BTreeSet<Vertex>>,
}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    pub fn add_vertex(&mut self, v: Vertex) {
        self.adj.entry(v).or_default();
    }

    /// Self-loops are ignored.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        self.add_vertex(u);
        self.add_vertex(v);
        if u != v {
            self.adj.get_mut(&u).unwrap().insert(v);
            self.adj.get_mut(&v).unwrap().insert(u);
        }
    }

    pub fn add_clique(&mut self, vs: &[Vertex]) {
        for (i, &u) in vs.iter().enumerate() {
            self.add_vertex(u);
            for &v in &vs[i + 1..] {
                self.add_edge(u, v);
            }
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.keys().copied()
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.values().map(|n| n.len()).sum::<usize>() / 2
    }

    pub fn has_vertex(&self, v: Vertex) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj.get(&u).is_some_and(|n| n.contains(&v))
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.get(&v).into_iter().flatten().copied()
    }

    /// Each edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }
}

/// A tree decomposition. Bag 0 is the root; children are listed in
/// increasing bag index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomp {
    bags: Vec<BTreeSet<Vertex>>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl TreeDecomp {
    /// Builds from bags and tree edges, rooted at bag 0.
    pub fn new(bags: Vec<BTreeSet<Vertex>>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = bags.len();
        if n == 0 {
            return Err(Error::InvalidDecomposition("no bags".into()));
        }
        if edges.len() != n - 1 {
            return Err(Error::InvalidDecomposition(format!(
                "not a tree: {} bags but {} edges",
                n,
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidDecomposition(format!("edge ({a},{b}) names a missing bag")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for &u in &adj[t] {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some(t);
                    children[t].push(u);
                    stack.push(u);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidDecomposition("not a tree: disconnected".into()));
        }
        for c in &mut children {
            c.sort_unstable();
        }
        Ok(TreeDecomp { bags, parent, children })
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn bag(&self, t: usize) -> &BTreeSet<Vertex> {
        &self.bags[t]
    }

    pub fn bags(&self) -> &[BTreeSet<Vertex>] {
        &self.bags
    }

    pub fn parent(&self, t: usize) -> Option<usize> {
        self.parent[t]
    }

    pub fn children(&self, t: usize) -> &[usize] {
        &self.children[t]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len()).filter_map(|t| self.parent[t].map(|p| (p, t))).collect()
    }

    /// Max bag size minus one (0 when every bag is empty).
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// Bags in preorder from the root.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![0];
        while let Some(t) = stack.pop() {
            out.push(t);
            stack.extend(self.children[t].iter().rev());
        }
        out
    }

    pub fn depths(&self) -> Vec<usize> {
        let mut d = vec![0; self.len()];
        for t in self.preorder() {
            if let Some(p) = self.parent[t] {
                d[t] = d[p] + 1;
            }
        }
        d
    }

    /// Same tree with `v` added to every bag.
    pub fn with_vertex_everywhere(&self, v: Vertex) -> TreeDecomp {
        let mut td = self.clone();
        for b in &mut td.bags {
            b.insert(v);
        }
        td
    }

    /// Checks that the decomposition covers every vertex and edge of `g`,
    /// that each vertex occupies a connected subtree, and that bags only
    /// name vertices of `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let mut occ: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
        for (t, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if !g.has_vertex(v) {
                    return Err(Error::InvalidDecomposition(format!("bag {t} contains unknown vertex {v}")));
                }
                occ.entry(v).or_default().push(t);
            }
        }
        for v in g.vertices() {
            if !occ.contains_key(&v) {
                return Err(Error::InvalidDecomposition(format!("vertex {v} is in no bag")));
            }
        }
        for (u, v) in g.edges() {
            if !self.bags.iter().any(|b| b.contains(&u) && b.contains(&v)) {
                return Err(Error::InvalidDecomposition(format!(
                    "completeness: edge {{{u},{v}}} is in no bag"
                )));
            }
        }
        // A set of bags is connected iff exactly one of them has its parent outside the set.
        for (v, ts) in &occ {
            let tops = ts
                .iter()
                .filter(|&&t| self.parent[t].is_none_or(|p| !self.bags[p].contains(v)))
                .count();
            if tops != 1 {
                return Err(Error::InvalidDecomposition(format!(
                    "connectedness: bags containing {v} are not connected"
                )));
            }
        }
        Ok(())
    }

    /// PACE-2017 `.td` text. Bags are numbered from 1 in the file.
    pub fn to_pace(&self, num_vertices: usize) -> String {
        let mut s = String::new();
        let max = self.bags.iter().map(|b| b.len()).max().unwrap_or(0);
        writeln!(s, "s td {} {} {}", self.len(), max, num_vertices).unwrap();
        for (t, bag) in self.bags.iter().enumerate() {
            write!(s, "b {}", t + 1).unwrap();
            for v in bag {
                write!(s, " {v}").unwrap();
            }
            s.push('\n');
        }
        for (a, b) in self.edges() {
            writeln!(s, "{} {}", a + 1, b + 1).unwrap();
        }
        s
    }

    pub fn parse_pace(text: &str) -> Result<TreeDecomp> {
        let perr = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
        let mut nbags = None;
        let mut bags: Vec<Option<BTreeSet<Vertex>>> = Vec::new();
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let toks: Vec<&str> = raw.split_whitespace().collect();
            match toks.first().copied() {
                None | Some("c") => {}
                Some("s") => {
                    if toks.len() != 5 || toks[1] != "td" {
                        return Err(perr(line, "expected `s td <bags> <max-bag> <vertices>`"));
                    }
                    let n: usize = toks[2].parse().map_err(|_| perr(line, "bad bag count"))?;
                    nbags = Some(n);
                    bags = vec![None; n];
                }
                Some("b") => {
                    let n = nbags.ok_or_else(|| perr(line, "bag before header"))?;
                    let id: usize = toks
                        .get(1)
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| perr(line, "bad bag id"))?;
                    if id == 0 || id > n {
                        return Err(perr(line, "bag id out of range"));
                    }
                    let mut bag = BTreeSet::new();
                    for t in &toks[2..] {
                        bag.insert(t.parse().map_err(|_| perr(line, "bad vertex"))?);
                    }
                    if bags[id - 1].replace(bag).is_some() {
                        return Err(perr(line, "duplicate bag id"));
                    }
                }
                Some(_) => {
                    let n = nbags.ok_or_else(|| perr(line, "edge before header"))?;
                    if toks.len() != 2 {
                        return Err(perr(line, "expected an edge `a b`"));
                    }
                    let a: usize = toks[0].parse().map_err(|_| perr(line, "bad edge"))?;
                    let b: usize = toks[1].parse().map_err(|_| perr(line, "bad edge"))?;
                    if a == 0 || b == 0 || a > n || b > n {
                        return Err(perr(line, "edge names a missing bag"));
                    }
                    edges.push((a - 1, b - 1));
                }
            }
        }
        if nbags.is_none() {
            return Err(perr(0, "missing `s td` header"));
        }
        let bags = bags
            .into_iter()
            .enumerate()
            .map(|(i, b)| b.ok_or_else(|| perr(0, &format!("bag {} missing", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        TreeDecomp::new(bags, &edges)
    }
}

/// Tree decomposition from a min-fill elimination ordering (ties broken by
/// smaller degree, then smaller vertex id).
pub fn min_fill_td(g: &Graph) -> TreeDecomp {
    if g.num_vertices() == 0 {
        return TreeDecomp::new(vec![BTreeSet::new()], &[]).unwrap();
    }
    let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> =
        g.vertices().map(|v| (v, g.neighbors(v).collect())).collect();
    let mut order = Vec::with_capacity(adj.len());
    let mut elim_bags = Vec::with_capacity(adj.len());
    while !adj.is_empty() {
        let v = *adj
            .iter()
            .min_by_key(|(&v, ns)| (fill_in(&adj, ns), ns.len(), v))
            .unwrap()
            .0;
        let ns: Vec<Vertex> = adj.remove(&v).unwrap().into_iter().collect();
        for (i, &a) in ns.iter().enumerate() {
            adj.get_mut(&a).unwrap().remove(&v);
            for &b in &ns[i + 1..] {
                adj.get_mut(&a).unwrap().insert(b);
                adj.get_mut(&b).unwrap().insert(a);
            }
        }
        let mut bag: BTreeSet<Vertex> = ns.into_iter().collect();
        bag.insert(v);
        order.push(v);
        elim_bags.push(bag);
    }
    let n = order.len();
    let pos: BTreeMap<Vertex, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // Bag i hangs below the bag of its earliest later-eliminated neighbour;
    // component roots hang below the last bag.
    let mut edges = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let up = elim_bags[i]
            .iter()
            .filter(|&&u| u != order[i])
            .map(|u| pos[u])
            .min()
            .unwrap_or(n - 1);
        edges.push((i, up));
    }
    // Renumber so the last eliminated vertex's bag becomes bag 0.
    let bags: Vec<BTreeSet<Vertex>> = elim_bags.into_iter().rev().collect();
    let edges: Vec<(usize, usize)> = edges.into_iter().map(|(a, b)| (n - 1 - b, n - 1 - a)).collect();
    TreeDecomp::new(bags, &edges).expect("elimination tree is a tree")
}

fn fill_in(adj: &BTreeMap<Vertex, BTreeSet<Vertex>>, ns: &BTreeSet<Vertex>) -> usize {
    let ns: Vec<&Vertex> = ns.iter().collect();
    let mut missing = 0;
    for (i, a) in ns.iter().enumerate() {
        let na = &adj[a];
        missing += ns[i + 1..].iter().filter(|b| !na.contains(b)).count();
    }
    missing
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: u32) -> Graph {
        let mut g = Graph::new();
        for i in 1..n {
            g.add_edge(i, i + 1);
        }
        g
    }

    #[test]
    fn min_fill_on_tree_has_width_one() {
        let g = path(10);
        let td = min_fill_td(&g);
        td.validate(&g).unwrap();
        assert_eq!(td.width(), 1);
        let mut star = Graph::new();
        for i in 2..8 {
            star.add_edge(1, i);
        }
        let td = min_fill_td(&star);
        td.validate(&star).unwrap();
        assert_eq!(td.width(), 1);
    }

    #[test]
    fn min_fill_on_clique() {
        let mut g = Graph::new();
        g.add_clique(&[1, 2, 3, 4]);
        let td = min_fill_td(&g);
        td.validate(&g).unwrap();
        assert_eq!(td.width(), 3);
    }

    #[test]
    fn min_fill_on_grid_and_disconnected() {
        let mut g = Graph::new();
        let id = |r: u32, c: u32| r * 4 + c + 1;
        for r in 0..3 {
            for c in 0..4 {
                if c + 1 < 4 {
                    g.add_edge(id(r, c), id(r, c + 1));
                }
                if r + 1 < 3 {
                    g.add_edge(id(r, c), id(r + 1, c));
                }
            }
        }
        g.add_vertex(100);
        g.add_edge(200, 201);
        let td = min_fill_td(&g);
        td.validate(&g).unwrap();
        assert_eq!(td.width(), 3);
    }

    #[test]
    fn validate_reports_violations() {
        let g = path(3);
        let b = |vs: &[u32]| vs.iter().copied().collect::<BTreeSet<_>>();
        let td = TreeDecomp::new(vec![b(&[1, 2]), b(&[3])], &[(0, 1)]).unwrap();
        let e = td.validate(&g).unwrap_err();
        assert!(matches!(e, Error::InvalidDecomposition(ref m) if m.contains("completeness")));
        let td = TreeDecomp::new(vec![b(&[1, 2]), b(&[2, 3]), b(&[1])], &[(0, 1), (1, 2)]).unwrap();
        let e = td.validate(&g).unwrap_err();
        assert!(matches!(e, Error::InvalidDecomposition(ref m) if m.contains("connectedness")));
        assert!(TreeDecomp::new(vec![b(&[1]), b(&[2])], &[]).is_err());
    }

    #[test]
    fn pace_round_trip() {
        let g = path(6);
        let td = min_fill_td(&g);
        let text = td.to_pace(6);
        let back = TreeDecomp::parse_pace(&text).unwrap();
        assert_eq!(back, td);
        assert!(TreeDecomp::parse_pace("s td 1 1 1\nb 2 1\n").is_err());
    }
}
