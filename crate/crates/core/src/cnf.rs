//! CNF formulas, DIMACS parsing and the primal/incidence graphs.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::var::{Assignment, Lit, Var};

/// A clause: sorted, duplicate-free literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause(Vec<Lit>);

impl Clause {
    pub fn new<I: IntoIterator<Item = Lit>>(lits: I) -> Clause {
        let mut v: Vec<Lit> = lits.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Clause(v)
    }

    pub fn from_dimacs(lits: &[i64]) -> Clause {
        Clause::new(lits.iter().map(|&l| Lit::from_dimacs(l)))
    }

    pub fn lits(&self) -> &[Lit] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Contains both `x` and `¬x` for some `x`.
    pub fn is_tautology(&self) -> bool {
        self.0.windows(2).any(|w| w[0].var == w[1].var)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.0.iter().map(|l| l.var).collect();
        vs.dedup();
        vs
    }

    pub fn satisfied_by(&self, tau: &Assignment) -> bool {
        self.0.iter().any(|l| tau.get(l.var).is_some_and(|b| l.satisfied_by(b)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CnfFormula {
    vars: BTreeSet<Var>,
    clauses: Vec<Clause>,
    dropped_tautologies: usize,
}

impl CnfFormula {
    /// Formula over `1..=num_vars` plus whatever the clauses mention.
    /// Tautological clauses are dropped and counted.
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> CnfFormula {
        let mut f = CnfFormula { vars: (1..=num_vars).map(Var).collect(), ..Default::default() };
        for c in clauses {
            f.push_clause(c);
        }
        f
    }

    pub fn from_dimacs_clauses(num_vars: u32, clauses: &[&[i64]]) -> CnfFormula {
        CnfFormula::new(num_vars, clauses.iter().map(|c| Clause::from_dimacs(c)).collect())
    }

    /// Returns false (and drops the clause) for tautologies.
    pub fn push_clause(&mut self, c: Clause) -> bool {
        if c.is_tautology() {
            self.dropped_tautologies += 1;
            return false;
        }
        self.vars.extend(c.vars());
        self.clauses.push(c);
        true
    }

    pub fn vars(&self) -> Vec<Var> {
        self.vars.iter().copied().collect()
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn dropped_tautologies(&self) -> usize {
        self.dropped_tautologies
    }

    /// Σ |vars(c)|.
    pub fn size(&self) -> usize {
        self.clauses.iter().map(|c| c.len()).sum()
    }

    pub fn satisfied_by(&self, tau: &Assignment) -> bool {
        self.clauses.iter().all(|c| c.satisfied_by(tau))
    }

    /// Same variables, clauses permuted by `order` (a permutation of clause indices).
    pub fn reordered(&self, order: &[usize]) -> Result<CnfFormula> {
        let mut seen = vec![false; self.clauses.len()];
        if order.len() != seen.len() {
            return Err(Error::Malformed("clause order is not a permutation".into()));
        }
        for &i in order {
            if i >= seen.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Malformed("clause order is not a permutation".into()));
            }
        }
        Ok(CnfFormula {
            vars: self.vars.clone(),
            clauses: order.iter().map(|&i| self.clauses[i].clone()).collect(),
            dropped_tautologies: self.dropped_tautologies,
        })
    }

    /// Vertices are the variables; two variables are adjacent when they share a clause.
    pub fn primal_graph(&self) -> Graph {
        let mut g = Graph::new();
        for v in &self.vars {
            g.add_vertex(v.0);
        }
        for c in &self.clauses {
            let vs: Vec<Vertex> = c.vars().iter().map(|v| v.0).collect();
            g.add_clique(&vs);
        }
        g
    }

    /// Vertex of clause `j` in the incidence graph: numbered after the largest variable.
    pub fn clause_vertex(&self, j: usize) -> Vertex {
        self.vars.iter().next_back().map_or(0, |v| v.0) + 1 + j as Vertex
    }

    /// Bipartite graph between variables and clauses.
    pub fn incidence_graph(&self) -> Graph {
        let mut g = Graph::new();
        for v in &self.vars {
            g.add_vertex(v.0);
        }
        for (j, c) in self.clauses.iter().enumerate() {
            let cv = self.clause_vertex(j);
            g.add_vertex(cv);
            for v in c.vars() {
                g.add_edge(v.0, cv);
            }
        }
        g
    }

    pub fn to_dimacs(&self) -> String {
        let n = self.vars.iter().next_back().map_or(0, |v| v.0);
        let mut s = format!("p cnf {} {}\n", n, self.clauses.len());
        for c in &self.clauses {
            for l in c.lits() {
                write!(s, "{} ", l.to_dimacs()).unwrap();
            }
            s.push_str("0\n");
        }
        s
    }
}

/// Parses DIMACS CNF. Comment lines start with `c`; clauses may span lines
/// and end with `0`; a trailing `%` line (SATLIB style) ends the input.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let perr = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
    let mut header: Option<(u32, usize)> = None;
    let mut f = CnfFormula::default();
    let mut current: Vec<i64> = Vec::new();
    let mut seen_clauses = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        if t.starts_with('%') {
            break;
        }
        if t.starts_with('p') {
            let toks: Vec<&str> = t.split_whitespace().collect();
            if header.is_some() || toks.len() != 4 || toks[1] != "cnf" {
                return Err(perr(line, "expected a single `p cnf <vars> <clauses>` header"));
            }
            let n = toks[2].parse().map_err(|_| perr(line, "bad variable count"))?;
            let m = toks[3].parse().map_err(|_| perr(line, "bad clause count"))?;
            header = Some((n, m));
            f.vars = (1..=n).map(Var).collect();
            continue;
        }
        let (n, _) = header.ok_or_else(|| perr(line, "clause before header"))?;
        for tok in t.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| perr(line, &format!("bad literal `{tok}`")))?;
            if lit == 0 {
                f.push_clause(Clause::from_dimacs(&current));
                current.clear();
                seen_clauses += 1;
            } else {
                if lit.unsigned_abs() > n as u64 {
                    return Err(perr(line, &format!("literal {lit} exceeds declared variable count")));
                }
                current.push(lit);
            }
        }
    }
    let (_, m) = header.ok_or_else(|| perr(0, "missing header"))?;
    if !current.is_empty() {
        f.push_clause(Clause::from_dimacs(&current));
        seen_clauses += 1;
    }
    if seen_clauses != m {
        return Err(perr(0, &format!("header declares {m} clauses, found {seen_clauses}")));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basic() {
        let f = parse_dimacs("c hi\np cnf 3 2\n1 -2 0\n2 3\n 0\n").unwrap();
        assert_eq!(f.num_vars(), 3);
        assert_eq!(f.clauses().len(), 2);
        assert_eq!(f.clauses()[1], Clause::from_dimacs(&[3, 2]));
        assert_eq!(parse_dimacs(&f.to_dimacs()).unwrap(), f);
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert_eq!(
            parse_dimacs("p cnf 2 1\n1 x 0\n").unwrap_err(),
            Error::Parse { line: 2, msg: "bad literal `x`".into() }
        );
        assert!(parse_dimacs("1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 2\n1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 3 0\n").is_err());
    }

    #[test]
    fn tautologies_dropped() {
        let f = parse_dimacs("p cnf 2 2\n1 -1 0\n2 0\n").unwrap();
        assert_eq!(f.clauses().len(), 1);
        assert_eq!(f.dropped_tautologies(), 1);
        assert_eq!(f.num_vars(), 2);
    }

    #[test]
    fn empty_clause_kept() {
        let f = parse_dimacs("p cnf 1 1\n0\n").unwrap();
        assert!(f.clauses()[0].is_empty());
    }

    #[test]
    fn graphs() {
        let f = CnfFormula::from_dimacs_clauses(1, &[&[1]]);
        let g = f.primal_graph();
        assert_eq!((g.num_vertices(), g.num_edges()), (1, 0));
        let f = CnfFormula::from_dimacs_clauses(3, &[&[1, 2], &[-2, 3]]);
        let g = f.primal_graph();
        assert!(g.has_edge(1, 2) && g.has_edge(2, 3) && !g.has_edge(1, 3));
        let inc = f.incidence_graph();
        assert_eq!(inc.num_vertices(), 5);
        assert_eq!(inc.num_edges(), 4);
        assert!(inc.has_edge(2, 4) && inc.has_edge(2, 5));
    }
}
