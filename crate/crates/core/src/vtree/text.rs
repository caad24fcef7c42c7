//! Line-based vtree format:
//!
//! ```text
//! vtree <node-count>
//! L <id> <var>
//! I <id> <left> <right>
//! root <id>
//! ```
//!
//! Ids in a file may be arbitrary; reading renumbers into preorder.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{Shape, Vtree, VtreeNode};
use crate::error::{Error, Result};
use crate::var::Var;

impl Vtree {
    pub fn to_text(&self) -> String {
        let mut s = format!("vtree {}\n", self.len());
        self.write_body(&mut s);
        s
    }

    pub(crate) fn write_body(&self, s: &mut String) {
        for (i, n) in self.nodes().iter().enumerate().rev() {
            match *n {
                VtreeNode::Leaf(v) => writeln!(s, "L {i} {v}").unwrap(),
                VtreeNode::Internal(l, r) => writeln!(s, "I {i} {l} {r}").unwrap(),
            }
        }
        writeln!(s, "root {}", self.root()).unwrap();
    }

    pub fn parse(text: &str) -> Result<Vtree> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let v = Vtree::parse_lines(&mut lines)?;
        if let Some((line, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(Error::Parse { line, msg: "trailing content after root".into() });
        }
        Ok(v)
    }

    /// Reads from the `vtree` header through the `root` line.
    pub(crate) fn parse_lines<'a, I>(lines: &mut I) -> Result<Vtree>
    where
        I: Iterator<Item = (usize, &'a str)>,
    {
        let perr = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
        let mut count = None;
        let mut nodes: BTreeMap<usize, (usize, VtreeNode)> = BTreeMap::new();
        let mut last_line = 0;
        for (line, raw) in lines.by_ref() {
            last_line = line;
            let toks: Vec<&str> = raw.split_whitespace().collect();
            if toks.is_empty() || toks[0] == "c" {
                continue;
            }
            let nums: Vec<usize> = toks[1..]
                .iter()
                .map(|t| t.parse().map_err(|_| perr(line, &format!("bad number `{t}`"))))
                .collect::<Result<_>>()?;
            match (toks[0], nums.as_slice()) {
                ("vtree", &[n]) if count.is_none() => count = Some(n),
                (_, _) if count.is_none() => return Err(perr(line, "expected `vtree <count>`")),
                ("L", &[id, v]) => {
                    if v == 0 || v > u32::MAX as usize {
                        return Err(perr(line, "bad variable"));
                    }
                    if nodes.insert(id, (line, VtreeNode::Leaf(Var(v as u32)))).is_some() {
                        return Err(perr(line, "duplicate node id"));
                    }
                }
                ("I", &[id, l, r]) => {
                    if nodes.insert(id, (line, VtreeNode::Internal(l, r))).is_some() {
                        return Err(perr(line, "duplicate node id"));
                    }
                }
                ("root", &[root]) => {
                    let n = count.unwrap();
                    if nodes.len() != n {
                        return Err(perr(line, &format!("header declares {n} nodes, found {}", nodes.len())));
                    }
                    let shape = build(&nodes, root, line, 0)?;
                    let v = Vtree::from_shape(&shape).map_err(|e| perr(line, &e.to_string()))?;
                    if v.len() != n {
                        return Err(perr(line, "nodes unreachable from the root"));
                    }
                    return Ok(v);
                }
                _ => return Err(perr(line, "unrecognized vtree line")),
            }
        }
        Err(perr(last_line, "missing `root` line"))
    }
}

fn build(nodes: &BTreeMap<usize, (usize, VtreeNode)>, id: usize, line: usize, depth: usize) -> Result<Shape> {
    if depth > nodes.len() {
        return Err(Error::Parse { line, msg: "vtree contains a cycle".into() });
    }
    let (_, node) = nodes
        .get(&id)
        .ok_or_else(|| Error::Parse { line, msg: format!("undefined vtree node {id}") })?;
    Ok(match *node {
        VtreeNode::Leaf(v) => Shape::Leaf(v),
        VtreeNode::Internal(l, r) => Shape::node(
            build(nodes, l, line, depth + 1)?,
            build(nodes, r, line, depth + 1)?,
        ),
    })
}
