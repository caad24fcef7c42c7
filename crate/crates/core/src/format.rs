//! Text formats for diagrams and the d-DNNF export.
//!
//! TDD files:
//!
//! ```text
//! tdd inline
//! vtree <count>
//! ...vtree lines...
//! root <id>
//! F <vtree-id> <node-count>
//! n <id> lit +<var> | n <id> lit -<var> | n <id> const 0|1
//! n <id> pairs (l,r) (l,r) ...
//! out <id>
//! ```
//!
//! `tdd file <path>` in place of `tdd inline` reads the vtree from a separate
//! file (resolved by [`read_tdd_file`] relative to the TDD file).

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use crate::diagram::{Diagram, Label, NTdd, Node, NodeId};
use crate::error::{Error, Result};
use crate::oracle::BoolFunTable;
use crate::var::{Assignment, Var};
use crate::vtree::{Vtree, VtreeNode};

pub fn write_tdd(d: &Diagram) -> String {
    let mut s = String::from("tdd inline\n");
    s.push_str(&d.vtree().to_text());
    for (t, fam) in d.families().iter().enumerate() {
        writeln!(s, "F {} {}", t, fam.len()).unwrap();
        for (g, n) in fam.iter().enumerate() {
            match n {
                Node::Leaf(l) => {
                    let x = d.vtree().leaf_var(t).unwrap();
                    match l {
                        Label::Pos => writeln!(s, "n {g} lit +{x}"),
                        Label::Neg => writeln!(s, "n {g} lit -{x}"),
                        Label::True => writeln!(s, "n {g} const 1"),
                        Label::False => writeln!(s, "n {g} const 0"),
                    }
                    .unwrap();
                }
                Node::Internal(ps) => {
                    write!(s, "n {g} pairs").unwrap();
                    for (a, b) in ps {
                        write!(s, " ({a},{b})").unwrap();
                    }
                    s.push('\n');
                }
            }
        }
    }
    writeln!(s, "out {}", d.out()).unwrap();
    s
}

/// Parses a TDD with an inline vtree.
pub fn parse_tdd(text: &str) -> Result<NTdd> {
    parse_tdd_with(text, |_| {
        Err(Error::Parse { line: 1, msg: "external vtree files need read_tdd_file".into() })
    })
}

pub fn read_tdd_file(path: &Path) -> std::io::Result<Result<NTdd>> {
    let text = std::fs::read_to_string(path)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(parse_tdd_with(&text, |name| {
        let p = dir.join(name);
        let vt = std::fs::read_to_string(&p)
            .map_err(|e| Error::Parse { line: 1, msg: format!("{}: {e}", p.display()) })?;
        Vtree::parse(&vt)
    }))
}

fn parse_tdd_with(text: &str, load: impl Fn(&str) -> Result<Vtree>) -> Result<NTdd> {
    let perr = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('c'));
    let (hline, header) = lines.next().ok_or_else(|| perr(0, "empty input"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let vtree = match toks.as_slice() {
        ["tdd", "inline"] => Vtree::parse_lines(&mut lines)?,
        ["tdd", "file", name] => load(name)?,
        _ => return Err(perr(hline, "expected `tdd inline` or `tdd file <path>`")),
    };
    let n = vtree.len();
    let mut families: Vec<Option<Vec<Node>>> = vec![None; n];
    let mut current: Option<(usize, usize)> = None;
    let mut out = None;
    let mut last = hline;
    let mut refs: Vec<(usize, usize, usize, (NodeId, NodeId))> = Vec::new();
    let close = |cur: Option<(usize, usize)>, fams: &Vec<Option<Vec<Node>>>, line: usize| -> Result<()> {
        if let Some((t, want)) = cur {
            let got = fams[t].as_ref().unwrap().len();
            if got != want {
                return Err(perr(line, &format!("family {t} declares {want} nodes, found {got}")));
            }
        }
        Ok(())
    };
    for (line, raw) in lines {
        last = line;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks[0] {
            "F" => {
                close(current, &families, line)?;
                let (t, cnt) = match toks.as_slice() {
                    [_, t, c] => (
                        t.parse::<usize>().map_err(|_| perr(line, "bad vtree id"))?,
                        c.parse::<usize>().map_err(|_| perr(line, "bad node count"))?,
                    ),
                    _ => return Err(perr(line, "expected `F <vtree-id> <count>`")),
                };
                if t >= n {
                    return Err(perr(line, "family for a missing vtree node"));
                }
                if families[t].replace(Vec::new()).is_some() {
                    return Err(perr(line, "family declared twice"));
                }
                current = Some((t, cnt));
            }
            "n" => {
                let (t, _) = current.ok_or_else(|| perr(line, "node outside a family"))?;
                let fam = families[t].as_mut().unwrap();
                let id: usize = toks.get(1).and_then(|s| s.parse().ok()).ok_or_else(|| perr(line, "bad node id"))?;
                if id != fam.len() {
                    return Err(perr(line, "node ids must be consecutive from 0"));
                }
                let node = match (vtree.node(t), toks.get(2).copied()) {
                    (VtreeNode::Leaf(x), Some("lit")) => {
                        let lit = toks.get(3).ok_or_else(|| perr(line, "missing literal"))?;
                        let (pos, v) = match lit.as_bytes().first() {
                            Some(b'+') => (true, &lit[1..]),
                            Some(b'-') => (false, &lit[1..]),
                            _ => return Err(perr(line, "literal needs a sign")),
                        };
                        let v: u32 = v.parse().map_err(|_| perr(line, "bad literal"))?;
                        if Var(v) != x {
                            return Err(perr(line, &format!("literal on {v} at the leaf of {x}")));
                        }
                        Node::Leaf(Label::of_lit(pos))
                    }
                    (VtreeNode::Leaf(_), Some("const")) => match toks.get(3).copied() {
                        Some("0") => Node::Leaf(Label::False),
                        Some("1") => Node::Leaf(Label::True),
                        _ => return Err(perr(line, "constant must be 0 or 1")),
                    },
                    (VtreeNode::Internal(l, r), Some("pairs")) => {
                        let mut ps = Vec::new();
                        for tok in &toks[3..] {
                            let p = tok
                                .strip_prefix('(')
                                .and_then(|s| s.strip_suffix(')'))
                                .and_then(|s| s.split_once(','))
                                .and_then(|(a, b)| Some((a.parse::<NodeId>().ok()?, b.parse::<NodeId>().ok()?)))
                                .ok_or_else(|| perr(line, &format!("bad pair `{tok}`")))?;
                            refs.push((line, l, r, p));
                            ps.push(p);
                        }
                        Node::internal(ps)
                    }
                    _ => return Err(perr(line, "node kind does not match its vtree node")),
                };
                families[t].as_mut().unwrap().push(node);
            }
            "out" => {
                close(current.take(), &families, line)?;
                let id: NodeId = toks.get(1).and_then(|s| s.parse().ok()).ok_or_else(|| perr(line, "bad output"))?;
                out = Some(id);
            }
            _ => return Err(perr(line, "unrecognized line")),
        }
        if out.is_some() && toks[0] != "out" {
            return Err(perr(line, "content after `out`"));
        }
    }
    let out = out.ok_or_else(|| perr(last, "missing `out` line"))?;
    let families = families
        .into_iter()
        .enumerate()
        .map(|(t, f)| f.ok_or_else(|| perr(last, &format!("family {t} missing"))))
        .collect::<Result<Vec<_>>>()?;
    for (line, l, r, p) in refs {
        if p.0 as usize >= families[l].len() || p.1 as usize >= families[r].len() {
            return Err(perr(line, &format!("pair ({},{}) references a missing node", p.0, p.1)));
        }
    }
    NTdd::new(Arc::new(vtree), families, out).map_err(|e| perr(last, &e.to_string()))
}

/// c2d-style NNF: `nnf v e n`, then `L <lit>`, `A k c...`, `O 0 k c...` lines;
/// children refer to earlier lines and the last line is the root. Only nodes
/// reachable from the output are emitted.
pub fn to_ddnnf(d: &Diagram) -> String {
    let vt = d.vtree();
    let mut reach: Vec<Vec<bool>> = d.families().iter().map(|f| vec![false; f.len()]).collect();
    reach[0][d.out() as usize] = true;
    for t in 0..vt.len() {
        if let VtreeNode::Internal(l, r) = vt.node(t) {
            for (g, n) in d.family(t).iter().enumerate() {
                if reach[t][g] {
                    for &(a, b) in n.pairs() {
                        reach[l][a as usize] = true;
                        reach[r][b as usize] = true;
                    }
                }
            }
        }
    }
    let mut lines: Vec<String> = Vec::new();
    let mut edges = 0usize;
    let mut lits: HashMap<i64, usize> = HashMap::new();
    let mut lit = |lines: &mut Vec<String>, l: i64| -> usize {
        *lits.entry(l).or_insert_with(|| {
            lines.push(format!("L {l}"));
            lines.len() - 1
        })
    };
    let mut idx: Vec<Vec<usize>> = d.families().iter().map(|f| vec![usize::MAX; f.len()]).collect();
    for t in vt.bottom_up() {
        for (g, n) in d.family(t).iter().enumerate() {
            if !reach[t][g] {
                continue;
            }
            let id = match (n, vt.node(t)) {
                (Node::Leaf(label), VtreeNode::Leaf(x)) => {
                    let x = x.0 as i64;
                    match label {
                        Label::Pos => lit(&mut lines, x),
                        Label::Neg => lit(&mut lines, -x),
                        Label::True => {
                            let (a, b) = (lit(&mut lines, x), lit(&mut lines, -x));
                            edges += 2;
                            lines.push(format!("O 0 2 {a} {b}"));
                            lines.len() - 1
                        }
                        Label::False => {
                            lines.push("O 0 0".into());
                            lines.len() - 1
                        }
                    }
                }
                (Node::Internal(ps), VtreeNode::Internal(l, r)) => {
                    let mut ands = Vec::with_capacity(ps.len());
                    for &(a, b) in ps {
                        lines.push(format!("A 2 {} {}", idx[l][a as usize], idx[r][b as usize]));
                        edges += 2;
                        ands.push(lines.len() - 1);
                    }
                    let mut s = format!("O 0 {}", ands.len());
                    for a in &ands {
                        write!(s, " {a}").unwrap();
                    }
                    edges += ands.len();
                    lines.push(s);
                    lines.len() - 1
                }
                _ => unreachable!("families match the vtree"),
            };
            idx[t][g] = id;
        }
    }
    let nvars = vt.all_vars().iter().map(|v| v.0).max().unwrap_or(0);
    let mut s = format!("nnf {} {} {}\n", lines.len(), edges, nvars);
    for l in lines {
        s.push_str(&l);
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NnfNode {
    Lit(i64),
    And(Vec<usize>),
    Or(Vec<usize>),
}

/// A parsed NNF; the last node is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nnf {
    pub nodes: Vec<NnfNode>,
    pub num_vars: u32,
}

impl Nnf {
    pub fn parse(text: &str) -> Result<Nnf> {
        let perr = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
        let mut nodes = Vec::new();
        let mut num_vars = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let toks: Vec<&str> = raw.split_whitespace().collect();
            if toks.is_empty() || toks[0] == "c" {
                continue;
            }
            let nums = toks[1..]
                .iter()
                .map(|t| t.parse::<i64>().map_err(|_| perr(line, "bad number")))
                .collect::<Result<Vec<i64>>>()?;
            let child = |k: i64| -> Result<usize> {
                if k < 0 || k as usize >= nodes.len() {
                    Err(perr(line, "child must refer to an earlier node"))
                } else {
                    Ok(k as usize)
                }
            };
            let node = match (toks[0], nums.as_slice()) {
                ("nnf", [_, _, n]) => {
                    num_vars = Some(*n as u32);
                    continue;
                }
                ("L", [l]) if *l != 0 => NnfNode::Lit(*l),
                ("A", [k, cs @ ..]) if *k as usize == cs.len() => {
                    NnfNode::And(cs.iter().map(|&c| child(c)).collect::<Result<_>>()?)
                }
                ("O", [_, k, cs @ ..]) if *k as usize == cs.len() => {
                    NnfNode::Or(cs.iter().map(|&c| child(c)).collect::<Result<_>>()?)
                }
                _ => return Err(perr(line, "unrecognized NNF line")),
            };
            nodes.push(node);
        }
        let num_vars = num_vars.ok_or_else(|| perr(0, "missing nnf header"))?;
        if nodes.is_empty() {
            return Err(perr(0, "no nodes"));
        }
        Ok(Nnf { nodes, num_vars })
    }

    pub fn eval(&self, tau: &Assignment) -> bool {
        let mut val = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            val.push(match n {
                NnfNode::Lit(l) => tau.get(Var(l.unsigned_abs() as u32)).unwrap_or(false) == (*l > 0),
                NnfNode::And(cs) => cs.iter().all(|&c| val[c]),
                NnfNode::Or(cs) => cs.iter().any(|&c| val[c]),
            });
        }
        *val.last().unwrap()
    }

    pub fn table(&self, vars: Vec<Var>) -> Result<BoolFunTable> {
        BoolFunTable::from_fn(vars, |tau| self.eval(tau))
    }
}
