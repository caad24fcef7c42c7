//! Truth-table Boolean functions used as ground truth.
//!
//! Variables are kept sorted; the table index of an assignment is
//! `Σ τ(vars[i]) << i`, so the first variable is the least significant bit.

use std::collections::HashSet;

use crate::cnf::CnfFormula;
use crate::error::{Error, Result};
use crate::par::{map_range, map_slice, Exec};
use crate::var::{Assignment, Var};
use crate::vtree::Vtree;

pub const DEFAULT_VAR_LIMIT: usize = 20;

/// Largest table the oracle builds. `TDD_ORACLE_VAR_LIMIT` overrides the default.
pub fn var_limit() -> usize {
    std::env::var("TDD_ORACLE_VAR_LIMIT")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_VAR_LIMIT)
        .min(32)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoolFunTable {
    vars: Vec<Var>,
    bits: Vec<u64>,
}

fn words(n: usize) -> usize {
    if n >= 6 {
        1 << (n - 6)
    } else {
        1
    }
}

impl BoolFunTable {
    fn check_vars(mut vars: Vec<Var>) -> Result<Vec<Var>> {
        vars.sort_unstable();
        if let Some(w) = vars.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVariable(w[0]));
        }
        if vars.len() > var_limit() {
            return Err(Error::TooManyVariables(vars.len(), var_limit()));
        }
        Ok(vars)
    }

    pub fn constant(vars: Vec<Var>, value: bool) -> Result<Self> {
        let vars = Self::check_vars(vars)?;
        let mut t = BoolFunTable { bits: vec![0; words(vars.len())], vars };
        if value {
            for i in 0..t.num_rows() {
                t.set(i, true);
            }
        }
        Ok(t)
    }

    /// Table from a predicate on row indices.
    pub fn from_index_fn(vars: Vec<Var>, f: impl Fn(u64) -> bool) -> Result<Self> {
        let vars = Self::check_vars(vars)?;
        let mut t = BoolFunTable { bits: vec![0; words(vars.len())], vars };
        for i in 0..t.num_rows() {
            if f(i) {
                t.set(i, true);
            }
        }
        Ok(t)
    }

    pub fn from_fn(vars: Vec<Var>, f: impl Fn(&Assignment) -> bool) -> Result<Self> {
        let sorted = Self::check_vars(vars)?;
        let vs = sorted.clone();
        Self::from_index_fn(sorted, |i| f(&Assignment::from_bits(&vs, i)))
    }

    /// Table from explicit rows (`rows[i]` is the value at index `i`).
    pub fn from_rows(vars: Vec<Var>, rows: &[bool]) -> Result<Self> {
        let n = vars.len();
        if rows.len() != 1usize << n {
            return Err(Error::Malformed(format!("{} rows for {} variables", rows.len(), n)));
        }
        Self::from_index_fn(vars, |i| rows[i as usize])
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_rows(&self) -> u64 {
        1u64 << self.vars.len()
    }

    pub fn get(&self, i: u64) -> bool {
        self.bits[(i >> 6) as usize] >> (i & 63) & 1 == 1
    }

    pub fn set(&mut self, i: u64, value: bool) {
        let w = &mut self.bits[(i >> 6) as usize];
        if value {
            *w |= 1 << (i & 63);
        } else {
            *w &= !(1 << (i & 63));
        }
    }

    pub fn index_of(&self, tau: &Assignment) -> Result<u64> {
        let mut idx = 0;
        for (i, &v) in self.vars.iter().enumerate() {
            let b = tau
                .get(v)
                .ok_or_else(|| Error::DomainMismatch(format!("variable {v} unassigned")))?;
            idx |= (b as u64) << i;
        }
        Ok(idx)
    }

    pub fn assignment_of(&self, i: u64) -> Assignment {
        Assignment::from_bits(&self.vars, i)
    }

    /// Value on `tau`; variables outside the table are ignored.
    pub fn eval(&self, tau: &Assignment) -> Result<bool> {
        Ok(self.get(self.index_of(tau)?))
    }

    pub fn count_models(&self) -> u64 {
        if self.vars.len() < 6 {
            (self.bits[0] & ((1u64 << self.num_rows()) - 1)).count_ones() as u64
        } else {
            self.bits.iter().map(|w| w.count_ones() as u64).sum()
        }
    }

    pub fn is_satisfiable(&self) -> bool {
        self.count_models() > 0
    }

    pub fn models(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.num_rows()).filter(move |&i| self.get(i))
    }

    pub fn not(&self) -> BoolFunTable {
        BoolFunTable::from_index_fn(self.vars.clone(), |i| !self.get(i)).unwrap()
    }

    /// Pointwise combination of two tables over the same variables.
    pub fn zip_with(&self, other: &BoolFunTable, op: impl Fn(bool, bool) -> bool) -> Result<BoolFunTable> {
        if self.vars != other.vars {
            return Err(Error::DomainMismatch("tables over different variables".into()));
        }
        BoolFunTable::from_index_fn(self.vars.clone(), |i| op(self.get(i), other.get(i)))
    }

    /// `f[τ]`: the function over the unassigned variables.
    pub fn restrict(&self, tau: &Assignment) -> Result<BoolFunTable> {
        let mut fixed = 0u64;
        let mut rest = Vec::new();
        let mut rest_pos = Vec::new();
        for v in tau.domain() {
            if self.vars.binary_search(&v).is_err() {
                return Err(Error::UnknownVariable(v));
            }
        }
        for (i, &v) in self.vars.iter().enumerate() {
            match tau.get(v) {
                Some(b) => fixed |= (b as u64) << i,
                None => {
                    rest.push(v);
                    rest_pos.push(i);
                }
            }
        }
        let spread = spread_table(&rest_pos);
        BoolFunTable::from_index_fn(rest, |j| self.get(fixed | spread[j as usize]))
    }

    /// `∃ ys. f` over the remaining variables.
    pub fn exists(&self, ys: &[Var]) -> Result<BoolFunTable> {
        let mut pos = Vec::new();
        for &y in ys {
            pos.push(self.vars.binary_search(&y).map_err(|_| Error::UnknownVariable(y))?);
        }
        let rest_pos: Vec<usize> = (0..self.vars.len()).filter(|i| !pos.contains(i)).collect();
        let rest: Vec<Var> = rest_pos.iter().map(|&i| self.vars[i]).collect();
        let spread_rest = spread_table(&rest_pos);
        let spread_y = spread_table(&pos);
        BoolFunTable::from_index_fn(rest, |j| {
            spread_y.iter().any(|&y| self.get(spread_rest[j as usize] | y))
        })
    }

    /// The same function over a superset of variables.
    pub fn extend(&self, vars: &[Var]) -> Result<BoolFunTable> {
        let mut all: Vec<Var> = vars.to_vec();
        all.sort_unstable();
        all.dedup();
        let mut pos = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            pos.push(all.binary_search(v).map_err(|_| Error::UnknownVariable(*v))?);
        }
        BoolFunTable::from_index_fn(all, |i| {
            let j = pos.iter().enumerate().fold(0u64, |acc, (k, &p)| acc | ((i >> p) & 1) << k);
            self.get(j)
        })
    }

    /// Number of distinct `f[τ]` for `τ ∈ 2^Y`, optionally counting only
    /// those with at least one model.
    pub fn count_subfunctions(&self, ys: &[Var], nontrivial_only: bool, exec: Exec) -> Result<usize> {
        Ok(self.subfunctions(ys, exec)?.iter().filter(|s| !nontrivial_only || s.iter().any(|&w| w != 0)).count())
    }

    /// The distinct `Y`-subfunctions as packed bit rows over `X \ Y`.
    fn subfunctions(&self, ys: &[Var], exec: Exec) -> Result<HashSet<Vec<u64>>> {
        let mut ypos = Vec::with_capacity(ys.len());
        for &y in ys {
            ypos.push(self.vars.binary_search(&y).map_err(|_| Error::UnknownVariable(y))?);
        }
        ypos.sort_unstable();
        ypos.dedup();
        let rest_pos: Vec<usize> = (0..self.vars.len()).filter(|i| ypos.binary_search(i).is_err()).collect();
        let spread_y = spread_table(&ypos);
        let spread_rest = spread_table(&rest_pos);
        let rows = spread_rest.len();
        let rows_of = |t: usize| -> Vec<u64> {
            let base = spread_y[t];
            let mut out = vec![0u64; rows.div_ceil(64)];
            for (j, &r) in spread_rest.iter().enumerate() {
                if self.get(base | r) {
                    out[j >> 6] |= 1 << (j & 63);
                }
            }
            out
        };
        let all = map_range(exec, spread_y.len(), rows_of);
        Ok(all.into_iter().collect())
    }

    /// Nontrivial (or all) `vars(t)`-subfunction counts for every vtree node.
    pub fn subfunction_profile(&self, vtree: &Vtree, nontrivial_only: bool, exec: Exec) -> Result<Vec<usize>> {
        if vtree.all_vars() != self.vars.as_slice() {
            return Err(Error::VtreeMismatch);
        }
        let ids: Vec<usize> = (0..vtree.len()).collect();
        // Parallelize over nodes; each node's count runs sequentially.
        map_slice(exec, &ids, |&t| self.count_subfunctions(vtree.vars(t), nontrivial_only, Exec::Sequential))
            .into_iter()
            .collect()
    }

    /// `max_t` of the nontrivial subfunction counts.
    pub fn factor_width(&self, vtree: &Vtree, exec: Exec) -> Result<usize> {
        Ok(self.subfunction_profile(vtree, true, exec)?.into_iter().max().unwrap_or(0))
    }

    /// `table <vars...>` followed by one `0`/`1` character per row, row 0
    /// first; whitespace between rows is ignored.
    pub fn to_text(&self) -> String {
        let mut s = String::from("table");
        for v in &self.vars {
            s.push_str(&format!(" {v}"));
        }
        for i in 0..self.num_rows() {
            if i % 64 == 0 {
                s.push('\n');
            }
            s.push(if self.get(i) { '1' } else { '0' });
        }
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<BoolFunTable> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (_, head) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty table".into() })?;
        let mut words = head.split_whitespace();
        if words.next() != Some("table") {
            return Err(Error::Parse { line: 1, msg: "expected `table`".into() });
        }
        let vars = words
            .map(|w| w.parse::<u32>().ok().filter(|&v| v > 0).map(Var))
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::Parse { line: 1, msg: "bad variable".into() })?;
        let mut sorted = vars.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVariable(sorted.windows(2).find(|w| w[0] == w[1]).unwrap()[0]));
        }
        let mut rows = Vec::new();
        for (ln, l) in lines {
            for ch in l.chars().filter(|c| !c.is_whitespace()) {
                match ch {
                    '0' => rows.push(false),
                    '1' => rows.push(true),
                    _ => return Err(Error::Parse { line: ln + 1, msg: format!("unexpected `{ch}`") }),
                }
            }
        }
        if vars.len() >= 64 || rows.len() as u64 != 1u64 << vars.len() {
            return Err(Error::Parse { line: 0, msg: format!("{} rows for {} variables", rows.len(), vars.len()) });
        }
        // Re-index rows onto the sorted variable order.
        let pos: Vec<usize> = sorted.iter().map(|v| vars.iter().position(|w| w == v).unwrap()).collect();
        BoolFunTable::from_index_fn(sorted, |i| {
            let j = pos.iter().enumerate().fold(0u64, |acc, (k, &p)| acc | (i >> k & 1) << p);
            rows[j as usize]
        })
    }

    /// Rows as a hex string, most significant word first.
    pub fn to_hex(&self) -> String {
        let mut s = String::new();
        for (k, w) in self.bits.iter().enumerate().rev() {
            let w = if self.vars.len() < 6 && k == 0 { w & ((1u64 << self.num_rows()) - 1) } else { *w };
            s.push_str(&format!("{w:016x}"));
        }
        s
    }
}

/// `spread[j]` places the bits of `j` at `positions`.
fn spread_table(positions: &[usize]) -> Vec<u64> {
    let mut out = vec![0u64; 1 << positions.len()];
    for (k, &p) in positions.iter().enumerate() {
        let half = 1 << k;
        for j in 0..half {
            out[half + j] = out[j] | 1 << p;
        }
    }
    out
}

/// Table of a CNF over its variables.
pub fn fun_from_cnf(f: &CnfFormula) -> Result<BoolFunTable> {
    let vars = f.vars();
    let masks: Vec<(u64, u64)> = f
        .clauses()
        .iter()
        .map(|c| {
            c.lits().iter().fold((0, 0), |(p, n), l| {
                let bit = 1u64 << vars.binary_search(&l.var).unwrap();
                if l.positive {
                    (p | bit, n)
                } else {
                    (p, n | bit)
                }
            })
        })
        .collect();
    BoolFunTable::from_index_fn(vars, |i| masks.iter().all(|&(p, n)| i & p != 0 || !i & n != 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vtree::{balanced_vtree, linear_vtree, VarOrder};

    fn vs(n: u32) -> Vec<Var> {
        (1..=n).map(Var).collect()
    }

    fn parity(n: u32) -> BoolFunTable {
        BoolFunTable::from_index_fn(vs(n), |i| i.count_ones() % 2 == 1).unwrap()
    }

    #[test]
    fn cnf_tables() {
        let f = CnfFormula::from_dimacs_clauses(1, &[&[1]]);
        let t = fun_from_cnf(&f).unwrap();
        assert!(!t.get(0) && t.get(1));
        let f = CnfFormula::from_dimacs_clauses(2, &[&[1, 2]]);
        assert_eq!(fun_from_cnf(&f).unwrap().count_models(), 3);
        let f = CnfFormula::from_dimacs_clauses(2, &[&[1, -2]]);
        let t = fun_from_cnf(&f).unwrap();
        assert!(!t.get(0b10));
        assert_eq!(t.count_models(), 3);
    }

    #[test]
    fn limit_enforced() {
        let e = BoolFunTable::constant(vs(var_limit() as u32 + 1), true).unwrap_err();
        assert!(matches!(e, Error::TooManyVariables(..)));
    }

    #[test]
    fn restrict_examples() {
        let and = BoolFunTable::from_index_fn(vs(2), |i| i == 3).unwrap();
        let x2 = BoolFunTable::from_index_fn(vec![Var(2)], |i| i == 1).unwrap();
        assert_eq!(and.restrict(&Assignment::from_pairs([(Var(1), true)])).unwrap(), x2);
        let zero = and.restrict(&Assignment::from_pairs([(Var(1), false)])).unwrap();
        assert_eq!(zero, BoolFunTable::constant(vec![Var(2)], false).unwrap());
        let p = parity(4);
        let r = p.restrict(&Assignment::from_pairs([(Var(1), true), (Var(2), false)])).unwrap();
        let expected = BoolFunTable::from_index_fn(vec![Var(3), Var(4)], |i| i.count_ones() % 2 == 0).unwrap();
        assert_eq!(r, expected);
        assert!(p.restrict(&Assignment::from_pairs([(Var(9), true)])).is_err());
        let full = p.restrict(&Assignment::from_bits(&vs(4), 0b0111)).unwrap();
        assert_eq!(full.num_vars(), 0);
        assert!(full.get(0));
    }

    #[test]
    fn parity_has_two_subfunctions() {
        let p = parity(5);
        for ys in [vec![Var(1)], vec![Var(2), Var(4)], vec![Var(1), Var(2), Var(3), Var(5)]] {
            assert_eq!(p.count_subfunctions(&ys, true, Exec::Sequential).unwrap(), 2);
        }
        assert_eq!(p.count_subfunctions(&[], true, Exec::Sequential).unwrap(), 1);
        assert_eq!(p.count_subfunctions(&vs(5), false, Exec::Sequential).unwrap(), 2);
        assert_eq!(p.count_subfunctions(&vs(5), true, Exec::Sequential).unwrap(), 1);
    }

    #[test]
    fn constant_one_width() {
        let one = BoolFunTable::constant(vs(4), true).unwrap();
        let t = balanced_vtree(&VarOrder::natural(4).unwrap());
        assert_eq!(one.factor_width(&t, Exec::Parallel).unwrap(), 1);
    }

    #[test]
    fn exists_and_extend() {
        let and = BoolFunTable::from_index_fn(vs(2), |i| i == 3).unwrap();
        let x2 = BoolFunTable::from_index_fn(vec![Var(2)], |i| i == 1).unwrap();
        assert_eq!(and.exists(&[Var(1)]).unwrap(), x2);
        let e = x2.extend(&vs(3)).unwrap();
        assert_eq!(e.count_models(), 4);
        assert!(e.get(0b010) && !e.get(0b101));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let f = BoolFunTable::from_index_fn(vs(10), |i| (i * 2654435761) >> 7 & 1 == 1).unwrap();
        let t = linear_vtree(&VarOrder::natural(10).unwrap());
        assert_eq!(
            f.subfunction_profile(&t, true, Exec::Sequential).unwrap(),
            f.subfunction_profile(&t, true, Exec::Parallel).unwrap()
        );
    }

    #[test]
    fn restrict_composes() {
        let f = BoolFunTable::from_index_fn(vs(6), |i| (i * 40503) % 7 < 3).unwrap();
        let t1 = Assignment::from_pairs([(Var(2), true), (Var(5), false)]);
        let t2 = Assignment::from_pairs([(Var(1), false)]);
        assert_eq!(
            f.restrict(&t1).unwrap().restrict(&t2).unwrap(),
            f.restrict(&t1.product(&t2).unwrap()).unwrap()
        );
    }

    #[test]
    fn table_text_round_trip() {
        let f = BoolFunTable::from_index_fn(vec![Var(2), Var(5), Var(7)], |i| i % 3 == 0).unwrap();
        assert_eq!(BoolFunTable::parse(&f.to_text()).unwrap(), f);
        // columns listed out of order: row bit 0 is x3
        let g = BoolFunTable::parse("table 3 1\n0100\n").unwrap();
        assert_eq!(g.vars(), &[Var(1), Var(3)]);
        assert!(g.eval(&Assignment::from_pairs([(Var(3), true), (Var(1), false)])).unwrap());
        assert_eq!(g.count_models(), 1);
        assert!(BoolFunTable::parse("table 1\n011\n").is_err());
    }
}
