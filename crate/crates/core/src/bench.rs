//! Benchmark functions (HWB, MUX, PARITY) and factor-width reports.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::oracle::BoolFunTable;
use crate::par::{map_slice, Exec};
use crate::var::Var;
use crate::vtree::{balanced_vtree, linear_vtree, VarOrder, Vtree};

fn vars(n: usize) -> Vec<Var> {
    (1..=n as u32).map(Var).collect()
}

/// Hidden weighted bit over `x1..xn` (variables 1..n): the value of `x_S`
/// where `S` is the number of ones, and 0 when `S = 0`.
pub fn hwb(n: usize) -> Result<BoolFunTable> {
    if n == 0 {
        return Err(Error::EmptyOrder);
    }
    BoolFunTable::from_index_fn(vars(n), |i| {
        let s = i.count_ones();
        s > 0 && i >> (s - 1) & 1 == 1
    })
}

/// Variables of the multiplexer with `k` address bits: `x_0..x_{k-1}` are
/// variables `1..=k`, `y_0..y_{2^k-1}` follow.
pub fn mux_vars(k: usize) -> (Vec<Var>, Vec<Var>) {
    let n = 1usize << k;
    let xs = (1..=k as u32).map(Var).collect();
    let ys = (k as u32 + 1..=(k + n) as u32).map(Var).collect();
    (xs, ys)
}

/// `y_j` for `j = sum x_i 2^i`.
pub fn mux(k: usize) -> Result<BoolFunTable> {
    if k == 0 {
        return Err(Error::EmptyOrder);
    }
    let (xs, ys) = mux_vars(k);
    BoolFunTable::from_index_fn(vars(xs.len() + ys.len()), |i| {
        let j = i & ((1 << k) - 1);
        i >> (k as u64 + j) & 1 == 1
    })
}

/// Address bits first, then data bits.
pub fn mux_order(k: usize) -> VarOrder {
    let (mut xs, ys) = mux_vars(k);
    xs.extend(ys);
    VarOrder::new(xs).expect("distinct")
}

pub fn parity(n: usize) -> Result<BoolFunTable> {
    if n == 0 {
        return Err(Error::EmptyOrder);
    }
    BoolFunTable::from_index_fn(vars(n), |i| i.count_ones() % 2 == 1)
}

pub fn by_name(name: &str, n: usize) -> Result<BoolFunTable> {
    match name {
        "hwb" => hwb(n),
        "mux" => mux(n),
        "parity" => parity(n),
        _ => Err(Error::Malformed(format!("unknown benchmark `{name}`"))),
    }
}

/// The vtrees reported by default: balanced, linear over the natural order,
/// and linear over its reverse.
pub fn standard_vtrees(f: &BoolFunTable) -> Result<Vec<(String, Vtree)>> {
    let order = VarOrder::new(f.vars().to_vec())?;
    Ok(vec![
        ("balanced".into(), balanced_vtree(&order)),
        ("linear".into(), linear_vtree(&order)),
        ("linear-rev".into(), linear_vtree(&order.reversed())),
    ])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub function: String,
    pub n: usize,
    pub kind: String,
    /// Nontrivial subfunction count per vtree node.
    pub profile: Vec<usize>,
}

impl Report {
    pub fn max(&self) -> usize {
        self.profile.iter().copied().max().unwrap_or(0)
    }
}

/// Subfunction profiles of `f` over each vtree, computed in parallel per vtree.
pub fn fw_report(function: &str, n: usize, f: &BoolFunTable, vtrees: &[(String, Vtree)], exec: Exec) -> Result<Vec<Report>> {
    map_slice(exec, vtrees, |(kind, vt)| {
        Ok(Report {
            function: function.to_string(),
            n,
            kind: kind.clone(),
            profile: f.subfunction_profile(vt, true, Exec::Sequential)?,
        })
    })
    .into_iter()
    .collect()
}

pub fn reports_to_csv(reports: &[Report]) -> String {
    let mut s = String::from("function,n,vtree-kind,vtree-node,subfunction-count,max\n");
    for r in reports {
        let m = r.max();
        for (t, c) in r.profile.iter().enumerate() {
            writeln!(s, "{},{},{},{},{},{}", r.function, r.n, r.kind, t, c, m).unwrap();
        }
    }
    s
}

/// Factor width of HWB_n on the balanced vtree for each `n`, one instance
/// per task.
pub fn hwb_sweep(ns: &[usize], exec: Exec) -> Result<Vec<usize>> {
    map_slice(exec, ns, |&n| {
        let f = hwb(n)?;
        f.factor_width(&balanced_vtree(&VarOrder::new(f.vars().to_vec())?), Exec::Sequential)
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::var::Assignment;

    #[test]
    fn hwb_values() {
        let h = hwb(1).unwrap();
        assert!(!h.get(0) && h.get(1));
        let h = hwb(2).unwrap();
        // rows: 00 -> 0, x1=1 -> S=1 -> x1 = 1, x2=1 -> S=1 -> x1 = 0, 11 -> x2 = 1
        assert_eq!((0..4).map(|i| h.get(i)).collect::<Vec<_>>(), [false, true, false, true]);
        assert!(hwb(7).unwrap().get(127));
    }

    #[test]
    fn mux_values() {
        let m = mux(1).unwrap();
        let (xs, ys) = mux_vars(1);
        let tau = Assignment::from_pairs([(xs[0], false), (ys[0], true), (ys[1], false)]);
        assert!(m.eval(&tau).unwrap());
        let m = mux(2).unwrap();
        let (xs, ys) = mux_vars(2);
        let mut tau = Assignment::from_pairs(ys.iter().map(|&y| (y, false)));
        tau.set(xs[0], true);
        tau.set(xs[1], false);
        tau.set(ys[1], true);
        assert!(m.eval(&tau).unwrap());
        tau.set(ys[1], false);
        tau.set(ys[2], true);
        assert!(!m.eval(&tau).unwrap());
    }

    #[test]
    fn parity_profile() {
        let p = parity(4).unwrap();
        assert_eq!(p.count_models(), 8);
        for (_, vt) in standard_vtrees(&p).unwrap() {
            let prof = p.subfunction_profile(&vt, true, Exec::Sequential).unwrap();
            for t in 0..vt.len() {
                if t != vt.root() {
                    assert_eq!(prof[t], 2);
                }
            }
        }
    }

    #[test]
    fn csv_has_one_row_per_node() {
        let p = parity(3).unwrap();
        let vts = standard_vtrees(&p).unwrap();
        let rs = fw_report("parity", 3, &p, &vts, Exec::default()).unwrap();
        let csv = reports_to_csv(&rs);
        assert_eq!(csv.lines().count(), 1 + 3 * 5);
        assert!(csv.lines().nth(1).unwrap().starts_with("parity,3,balanced,0,1,2"));
    }

    #[test]
    fn sweep_is_the_same_in_both_modes() {
        let ns = [4, 5, 6, 7];
        assert_eq!(hwb_sweep(&ns, Exec::Sequential).unwrap(), hwb_sweep(&ns, Exec::Parallel).unwrap());
    }
}
