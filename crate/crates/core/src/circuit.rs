//! Boolean circuits over input/not/and/or gates.
//!
//! Text format, one gate per line (`c` starts a comment):
//!
//! ```text
//! input <id> [<var>]      # variable defaults to the gate id
//! not <id> <child>
//! and <id> <child>...
//! or <id> <child>...
//! output <id>
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::var::{Assignment, Var};

pub type GateId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    Input(Var),
    Not(GateId),
    And(Vec<GateId>),
    Or(Vec<GateId>),
}

impl Gate {
    pub fn children(&self) -> &[GateId] {
        match self {
            Gate::Input(_) => &[],
            Gate::Not(c) => std::slice::from_ref(c),
            Gate::And(cs) | Gate::Or(cs) => cs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    gates: BTreeMap<GateId, Gate>,
    output: GateId,
}

impl Circuit {
    /// Checks references, acyclicity and that each variable has one input gate.
    pub fn new(gates: BTreeMap<GateId, Gate>, output: GateId) -> Result<Circuit> {
        if !gates.contains_key(&output) {
            return Err(Error::Malformed(format!("output gate {output} is undefined")));
        }
        let mut vars = BTreeSet::new();
        for (id, g) in &gates {
            for c in g.children() {
                if !gates.contains_key(c) {
                    return Err(Error::Malformed(format!("gate {id} reads undefined gate {c}")));
                }
            }
            if let Gate::Input(v) = g {
                if !vars.insert(*v) {
                    return Err(Error::DuplicateVariable(*v));
                }
            }
        }
        let c = Circuit { gates, output };
        c.topological_order()?;
        Ok(c)
    }

    pub fn gates(&self) -> &BTreeMap<GateId, Gate> {
        &self.gates
    }

    pub fn gate(&self, id: GateId) -> &Gate {
        &self.gates[&id]
    }

    pub fn output(&self) -> GateId {
        self.output
    }

    /// Sorted input variables.
    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .gates
            .values()
            .filter_map(|g| if let Gate::Input(v) = g { Some(*v) } else { None })
            .collect();
        vs.sort_unstable();
        vs
    }

    /// Gates reachable from the output, children first.
    pub fn topological_order(&self) -> Result<Vec<GateId>> {
        // 0 = new, 1 = on stack, 2 = done
        let mut state: BTreeMap<GateId, u8> = BTreeMap::new();
        let mut order = Vec::new();
        let mut stack = vec![(self.output, 0usize)];
        state.insert(self.output, 1);
        while let Some((g, i)) = stack.pop() {
            let cs = self.gates[&g].children();
            if i < cs.len() {
                stack.push((g, i + 1));
                let c = cs[i];
                match state.get(&c).copied().unwrap_or(0) {
                    0 => {
                        state.insert(c, 1);
                        stack.push((c, 0));
                    }
                    1 => return Err(Error::CyclicCircuit),
                    _ => {}
                }
            } else {
                state.insert(g, 2);
                order.push(g);
            }
        }
        Ok(order)
    }

    pub fn evaluate(&self, tau: &Assignment) -> Result<bool> {
        let mut val: BTreeMap<GateId, bool> = BTreeMap::new();
        for g in self.topological_order()? {
            let v = match &self.gates[&g] {
                Gate::Input(x) => tau
                    .get(*x)
                    .ok_or_else(|| Error::DomainMismatch(format!("variable {x} unassigned")))?,
                Gate::Not(c) => !val[c],
                Gate::And(cs) => cs.iter().all(|c| val[c]),
                Gate::Or(cs) => cs.iter().any(|c| val[c]),
            };
            val.insert(g, v);
        }
        Ok(val[&self.output])
    }

    /// Undirected graph on gate ids with an edge between each gate and its inputs.
    pub fn graph(&self) -> Graph {
        let mut g = Graph::new();
        for (&id, gate) in &self.gates {
            g.add_vertex(id);
            for &c in gate.children() {
                g.add_edge(id, c);
            }
        }
        g
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (id, g) in &self.gates {
            match g {
                Gate::Input(v) if v.0 == *id => writeln!(s, "input {id}"),
                Gate::Input(v) => writeln!(s, "input {id} {v}"),
                Gate::Not(c) => writeln!(s, "not {id} {c}"),
                Gate::And(cs) | Gate::Or(cs) => {
                    write!(s, "{} {id}", if matches!(g, Gate::And(_)) { "and" } else { "or" }).unwrap();
                    for c in cs {
                        write!(s, " {c}").unwrap();
                    }
                    writeln!(s)
                }
            }
            .unwrap();
        }
        writeln!(s, "output {}", self.output).unwrap();
        s
    }
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let perr = |line: usize, msg: String| Error::Parse { line, msg };
    let mut gates = BTreeMap::new();
    let mut output = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.split('#').next().unwrap();
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if toks.is_empty() || toks[0] == "c" {
            continue;
        }
        let nums = toks[1..]
            .iter()
            .map(|t| t.parse::<u32>().map_err(|_| perr(line, format!("bad id `{t}`"))))
            .collect::<Result<Vec<u32>>>()?;
        let id = *nums.first().ok_or_else(|| perr(line, "missing gate id".into()))?;
        let gate = match (toks[0], nums.len()) {
            ("output", 1) => {
                if output.replace(id).is_some() {
                    return Err(perr(line, "second output line".into()));
                }
                continue;
            }
            ("input", 1) => Gate::Input(Var(id)),
            ("input", 2) => Gate::Input(Var(nums[1])),
            ("not", 2) => Gate::Not(nums[1]),
            ("and", _) => Gate::And(nums[1..].to_vec()),
            ("or", _) => Gate::Or(nums[1..].to_vec()),
            (kw, _) => return Err(perr(line, format!("bad `{kw}` line"))),
        };
        if let Gate::Input(Var(0)) = gate {
            return Err(perr(line, "variable 0 is not allowed".into()));
        }
        if gates.insert(id, gate).is_some() {
            return Err(perr(line, format!("gate {id} defined twice")));
        }
    }
    let output = output.ok_or_else(|| perr(0, "missing output line".into()))?;
    Circuit::new(gates, output)
}

/// Incremental circuit construction with fresh gate ids.
#[derive(Debug, Default)]
pub struct CircuitBuilder {
    gates: BTreeMap<GateId, Gate>,
    next: GateId,
}

impl CircuitBuilder {
    /// Gate ids start above `reserved` so inputs can use their variable ids.
    pub fn new(reserved: u32) -> Self {
        CircuitBuilder { gates: BTreeMap::new(), next: reserved + 1 }
    }

    fn push(&mut self, g: Gate) -> GateId {
        let id = self.next;
        self.next += 1;
        self.gates.insert(id, g);
        id
    }

    /// Input gate whose id is the variable id itself.
    pub fn input(&mut self, v: Var) -> GateId {
        self.gates.insert(v.0, Gate::Input(v));
        v.0
    }

    pub fn not(&mut self, a: GateId) -> GateId {
        self.push(Gate::Not(a))
    }

    pub fn and(&mut self, cs: Vec<GateId>) -> GateId {
        self.push(Gate::And(cs))
    }

    pub fn or(&mut self, cs: Vec<GateId>) -> GateId {
        self.push(Gate::Or(cs))
    }

    pub fn xor(&mut self, a: GateId, b: GateId) -> GateId {
        let na = self.not(a);
        let nb = self.not(b);
        let l = self.and(vec![a, nb]);
        let r = self.and(vec![na, b]);
        self.or(vec![l, r])
    }

    pub fn build(self, output: GateId) -> Result<Circuit> {
        Circuit::new(self.gates, output)
    }
}

/// Parity of `x1..xn` as a chain of xor gadgets.
pub fn parity_circuit(n: u32) -> Circuit {
    let mut b = CircuitBuilder::new(n);
    let mut acc = b.input(Var(1));
    for i in 2..=n {
        let x = b.input(Var(i));
        acc = b.xor(acc, x);
    }
    b.build(acc).expect("well-formed")
}

/// `x1 ∧ … ∧ xn` as a chain of binary ands.
pub fn and_chain_circuit(n: u32) -> Circuit {
    let mut b = CircuitBuilder::new(n);
    let mut acc = b.input(Var(1));
    for i in 2..=n {
        let x = b.input(Var(i));
        acc = b.and(vec![acc, x]);
    }
    b.build(acc).expect("well-formed")
}
