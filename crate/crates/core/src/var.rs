use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A propositional variable, identified by a positive integer as in DIMACS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub var: Var,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: Var) -> Lit {
        Lit { var, positive: true }
    }

    pub fn neg(var: Var) -> Lit {
        Lit { var, positive: false }
    }

    /// From a signed DIMACS integer. Panics on 0.
    pub fn from_dimacs(v: i64) -> Lit {
        assert!(v != 0, "0 is not a literal");
        Lit { var: Var(v.unsigned_abs() as u32), positive: v > 0 }
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var.0 as i64
        } else {
            -(self.var.0 as i64)
        }
    }

    pub fn negated(self) -> Lit {
        Lit { var: self.var, positive: !self.positive }
    }

    pub fn satisfied_by(self, value: bool) -> bool {
        value == self.positive
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A (possibly partial) Boolean assignment: total on its own domain.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(BTreeMap<Var, bool>);

impl Assignment {
    pub fn new() -> Self {
        Assignment(BTreeMap::new())
    }

    pub fn from_pairs<I: IntoIterator<Item = (Var, bool)>>(pairs: I) -> Self {
        Assignment(pairs.into_iter().collect())
    }

    /// Assignment over `vars` read from the low bits of `bits` (first var = bit 0).
    pub fn from_bits(vars: &[Var], bits: u64) -> Self {
        Assignment(vars.iter().enumerate().map(|(i, &v)| (v, bits >> i & 1 == 1)).collect())
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.0.get(&var).copied()
    }

    pub fn set(&mut self, var: Var, value: bool) {
        self.0.insert(var, value);
    }

    pub fn remove(&mut self, var: Var) -> Option<bool> {
        self.0.remove(&var)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.0.iter().map(|(&v, &b)| (v, b))
    }

    pub fn restrict(&self, vars: &[Var]) -> Assignment {
        Assignment(vars.iter().filter_map(|&v| self.get(v).map(|b| (v, b))).collect())
    }

    /// The product of two assignments over disjoint domains.
    pub fn product(&self, other: &Assignment) -> Result<Assignment> {
        let mut out = self.clone();
        for (v, b) in other.iter() {
            if out.0.insert(v, b).is_some() {
                return Err(Error::DomainMismatch(format!("variable {v} assigned twice")));
            }
        }
        Ok(out)
    }

    /// Domain equals `vars` exactly.
    pub fn covers_exactly(&self, vars: &[Var]) -> bool {
        self.0.len() == vars.len() && vars.iter().all(|v| self.0.contains_key(v))
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, b) in self.iter() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}", if b { v.0 as i64 } else { -(v.0 as i64) })?;
        }
        Ok(())
    }
}

impl FromIterator<(Var, bool)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (Var, bool)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}
