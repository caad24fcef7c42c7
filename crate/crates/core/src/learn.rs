//! Exact learning of canonical TDDs from membership and equivalence queries.
//!
//! For every vtree node `t` the learner keeps representatives `nodes[t]`
//! (assignments of the variables below `t`) and distinguishing tests
//! `tests[t]` (assignments of the remaining variables). Two representatives
//! are equivalent at `t` when they agree on every test. Once the state is
//! closed and consistent, the classes at each node form a full TDD that is
//! submitted as a hypothesis.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::diagram::{validate_deterministic, Label, NTdd, Node, NodeId, Tdd};
use crate::error::{Error, Result};
use crate::minimize::{canonize, equivalent};
use crate::oracle::BoolFunTable;
use crate::transform::{apply, eliminate_zeros, BinOp};
use crate::var::{Assignment, Var};
use crate::vtree::{Vtree, VtreeId, VtreeNode};

pub trait Teacher {
    /// Value of the hidden function on a total assignment.
    fn membership(&mut self, tau: &Assignment) -> Result<bool>;
    /// `None` if `h` represents the hidden function, else a disagreement.
    fn equivalence(&mut self, h: &Tdd) -> Result<Option<Assignment>>;
}

pub struct TableTeacher {
    f: BoolFunTable,
}

pub fn truth_table_teacher(f: BoolFunTable) -> TableTeacher {
    TableTeacher { f }
}

impl Teacher for TableTeacher {
    fn membership(&mut self, tau: &Assignment) -> Result<bool> {
        self.f.eval(tau)
    }

    fn equivalence(&mut self, h: &Tdd) -> Result<Option<Assignment>> {
        if h.vars() != self.f.vars() {
            return Err(Error::VtreeMismatch);
        }
        for i in 0..self.f.num_rows() {
            let tau = self.f.assignment_of(i);
            if h.evaluate(&tau)? != self.f.get(i) {
                return Ok(Some(tau));
            }
        }
        Ok(None)
    }
}

pub struct TddTeacher {
    c: Tdd,
}

pub fn tdd_teacher(c: Tdd) -> TddTeacher {
    TddTeacher { c }
}

impl Teacher for TddTeacher {
    fn membership(&mut self, tau: &Assignment) -> Result<bool> {
        self.c.evaluate(tau)
    }

    fn equivalence(&mut self, h: &Tdd) -> Result<Option<Assignment>> {
        if equivalent(h, &self.c)? {
            return Ok(None);
        }
        let diff = eliminate_zeros(&apply(BinOp::XOR, h, &self.c)?);
        Ok(diff.any_model())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LearnStats {
    /// Distinct assignments sent to the teacher.
    pub membership_queries: usize,
    pub equivalence_queries: usize,
    /// Closure or consistency repairs performed.
    pub repairs: usize,
}

struct Learner<'a, T: Teacher + ?Sized> {
    vt: Arc<Vtree>,
    teacher: &'a mut T,
    nodes: Vec<Vec<Assignment>>,
    tests: Vec<Vec<Assignment>>,
    answers: HashMap<Assignment, bool>,
    rows: HashMap<(VtreeId, Assignment), Vec<bool>>,
    stats: LearnStats,
}

impl<T: Teacher + ?Sized> Learner<'_, T> {
    fn member(&mut self, tau: &Assignment) -> Result<bool> {
        if let Some(&b) = self.answers.get(tau) {
            return Ok(b);
        }
        let b = self.teacher.membership(tau)?;
        self.stats.membership_queries += 1;
        self.answers.insert(tau.clone(), b);
        Ok(b)
    }

    /// Answers of `tau` on the tests of `t`, extended as tests are added.
    fn row(&mut self, t: VtreeId, tau: &Assignment) -> Result<Vec<bool>> {
        let key = (t, tau.clone());
        let mut row = self.rows.remove(&key).unwrap_or_default();
        for i in row.len()..self.tests[t].len() {
            let full = tau.product(&self.tests[t][i])?;
            row.push(self.member(&full)?);
        }
        self.rows.insert(key, row.clone());
        Ok(row)
    }

    /// Representatives of `t` with the right domain. Only the seed at the
    /// root lacks it.
    fn reps(&self, t: VtreeId) -> Vec<Assignment> {
        let xs = self.vt.vars(t);
        self.nodes[t].iter().filter(|a| a.covers_exactly(xs)).cloned().collect()
    }

    fn products(&self, t: VtreeId) -> Result<Vec<Assignment>> {
        let (l, r) = self.vt.children(t).expect("internal node");
        let (ls, rs) = (self.reps(l), self.reps(r));
        let mut out = Vec::with_capacity(ls.len() * rs.len());
        for a in &ls {
            for b in &rs {
                out.push(a.product(b)?);
            }
        }
        Ok(out)
    }

    fn add_node(&mut self, t: VtreeId, tau: Assignment) {
        if !self.nodes[t].contains(&tau) {
            self.nodes[t].push(tau);
        }
    }

    /// Adds one witness per failure until every product has a class.
    fn close(&mut self) -> Result<()> {
        loop {
            let mut changed = false;
            for t in self.vt.bottom_up().collect::<Vec<_>>() {
                if self.vt.is_leaf(t) {
                    continue;
                }
                let mut known: BTreeSet<Vec<bool>> = BTreeSet::new();
                for tau in self.reps(t) {
                    known.insert(self.row(t, &tau)?);
                }
                for p in self.products(t)? {
                    let row = self.row(t, &p)?;
                    if known.insert(row) {
                        self.add_node(t, p);
                        self.stats.repairs += 1;
                        changed = true;
                    }
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }

    /// Finds one inconsistency and repairs it with a new test.
    fn make_consistent(&mut self) -> Result<bool> {
        for t in self.vt.bottom_up().collect::<Vec<_>>() {
            let Some((l, r)) = self.vt.children(t) else { continue };
            for (child, other) in [(l, r), (r, l)] {
                let reps = self.reps(child);
                let others = self.reps(other);
                for i in 0..reps.len() {
                    for j in i + 1..reps.len() {
                        if self.row(child, &reps[i])? != self.row(child, &reps[j])? {
                            continue;
                        }
                        for o in &others {
                            let a = self.row(t, &reps[i].product(o)?)?;
                            let b = self.row(t, &reps[j].product(o)?)?;
                            if let Some(k) = (0..a.len()).find(|&k| a[k] != b[k]) {
                                let test = o.product(&self.tests[t][k])?;
                                self.tests[child].push(test);
                                self.stats.repairs += 1;
                                return Ok(true);
                            }
                        }
                    }
                }
            }
        }
        Ok(false)
    }

    /// Class rows at every vtree node, in order of first representative.
    fn classes(&mut self) -> Result<Vec<Vec<Vec<bool>>>> {
        let mut out = vec![Vec::new(); self.vt.len()];
        for t in 0..self.vt.len() {
            for tau in self.reps(t) {
                let row = self.row(t, &tau)?;
                if !out[t].contains(&row) {
                    out[t].push(row);
                }
            }
        }
        Ok(out)
    }

    fn num_classes(&mut self) -> Result<usize> {
        Ok(self.classes()?.iter().map(Vec::len).sum())
    }

    /// The full TDD whose nodes are the classes of a closed, consistent state.
    fn hypothesis(&mut self) -> Result<Tdd> {
        let classes = self.classes()?;
        let vt = self.vt.clone();
        let mut families: Vec<Vec<Node>> = vec![Vec::new(); vt.len()];
        for t in vt.bottom_up() {
            let class_of = |row: &Vec<bool>| classes[t].iter().position(|c| c == row).map(|i| i as NodeId);
            match vt.node(t) {
                VtreeNode::Leaf(x) => {
                    let zero = self.row(t, &Assignment::from_pairs([(x, false)]))?;
                    let one = self.row(t, &Assignment::from_pairs([(x, true)]))?;
                    families[t] = if zero == one {
                        vec![Node::Leaf(Label::True)]
                    } else {
                        let mut fam = vec![Node::Leaf(Label::Neg); classes[t].len()];
                        fam[class_of(&one).unwrap() as usize] = Node::Leaf(Label::Pos);
                        fam
                    };
                }
                VtreeNode::Internal(l, r) => {
                    let mut pairs = vec![Vec::new(); classes[t].len()];
                    let (ls, rs) = (self.reps(l), self.reps(r));
                    let mut seen = BTreeSet::new();
                    for a in &ls {
                        let ca = classes[l].iter().position(|c| *c == self.row(l, a).unwrap()).unwrap() as NodeId;
                        for b in &rs {
                            let cb = classes[r].iter().position(|c| *c == self.row(r, b).unwrap()).unwrap() as NodeId;
                            if !seen.insert((ca, cb)) {
                                continue;
                            }
                            let row = self.row(t, &a.product(b)?)?;
                            let g = class_of(&row).ok_or_else(|| Error::Malformed("state is not closed".into()))?;
                            pairs[g as usize].push((ca, cb));
                        }
                    }
                    families[t] = pairs.into_iter().map(Node::internal).collect();
                }
            }
        }
        // The root test is the empty assignment, so a root row is the value.
        let out = match classes[0].iter().position(|c| c == &[true]) {
            Some(i) => i as NodeId,
            None => {
                families[0].push(if vt.is_leaf(0) { Node::Leaf(Label::False) } else { Node::internal(Vec::new()) });
                (families[0].len() - 1) as NodeId
            }
        };
        validate_deterministic(NTdd::new(vt, families, out)?)
            .map_err(|v| Error::Malformed(format!("hypothesis is not deterministic: {v:?}")))
    }
}

/// Learns the canonical TDD of the teacher's function over `vtree`.
pub fn learn<T: Teacher + ?Sized>(vtree: Arc<Vtree>, teacher: &mut T) -> Result<(Tdd, LearnStats)> {
    let n = vtree.len();
    let mut st = Learner {
        vt: vtree.clone(),
        teacher,
        nodes: vec![Vec::new(); n],
        tests: vec![Vec::new(); n],
        answers: HashMap::new(),
        rows: HashMap::new(),
        stats: LearnStats::default(),
    };
    st.nodes[0].push(Assignment::new());
    st.tests[0].push(Assignment::new());
    for t in 0..n {
        if let VtreeNode::Leaf(x) = vtree.node(t) {
            st.nodes[t] = vec![Assignment::from_pairs([(x, false)]), Assignment::from_pairs([(x, true)])];
        }
    }
    let all: Vec<Var> = vtree.all_vars().to_vec();
    loop {
        loop {
            st.close()?;
            if !st.make_consistent()? {
                break;
            }
        }
        let h = st.hypothesis()?;
        let before = st.num_classes()?;
        st.stats.equivalence_queries += 1;
        let Some(cex) = st.teacher.equivalence(&h)? else {
            return Ok((canonize(&h), st.stats));
        };
        if !cex.covers_exactly(&all) {
            return Err(Error::InconsistentTeacher(format!("counterexample {cex} is not total")));
        }
        if st.member(&cex)? == h.evaluate(&cex)? {
            return Err(Error::InconsistentTeacher(format!("counterexample {cex} agrees with the hypothesis")));
        }
        for t in 0..n {
            if !vtree.is_leaf(t) {
                let part = cex.restrict(vtree.vars(t));
                st.add_node(t, part);
            }
        }
        loop {
            st.close()?;
            if !st.make_consistent()? {
                break;
            }
        }
        if st.num_classes()? <= before {
            return Err(Error::InconsistentTeacher("counterexample separated no class".into()));
        }
    }
}
