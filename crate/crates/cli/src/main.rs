use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use tdd::bench::{by_name, fw_report, reports_to_csv, standard_vtrees};
use tdd::circuit::parse_circuit;
use tdd::cnf::parse_dimacs;
use tdd::compile::{circuit_vtree, cnf_vtree, compile_circuit, compile_cnf, Step, VtreeKind};
use tdd::convert::{obdd_to_tdd, tdd_to_obdd, Obdd};
use tdd::diagram::{validate_deterministic, NTdd, Tdd};
use tdd::format::{read_tdd_file, to_ddnnf, write_tdd};
use tdd::graph::TreeDecomp;
use tdd::learn::{learn, tdd_teacher, truth_table_teacher};
use tdd::minimize::{canonize, equivalent};
use tdd::oracle::BoolFunTable;
use tdd::par::Exec;
use tdd::transform::{apply, condition, determinize, forget, negate, BinOp};
use tdd::vtree::{balanced_vtree, linear_vtree, VarOrder, Vtree};
use tdd::Var;

#[derive(Parser)]
#[command(name = "tdd", version, about = "Tree decision diagrams")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compile a DIMACS CNF clause by clause.
    Compile {
        cnf: PathBuf,
        /// balanced, linear, primal-td, incidence-td, or a vtree file.
        #[arg(long, default_value = "primal-td")]
        vtree: String,
        /// PACE tree decomposition for the td-based vtrees.
        #[arg(long)]
        td: Option<PathBuf>,
        /// Clause order as comma-separated 1-based clause numbers.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// Print the canonical width after every clause to stderr.
        #[arg(long)]
        log_widths: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compile a circuit gate by gate.
    CompileCircuit {
        circuit: PathBuf,
        /// A vtree file; default is derived from a min-fill decomposition.
        #[arg(long)]
        vtree: Option<PathBuf>,
        #[arg(long)]
        log_widths: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact model count.
    Count { tdd: PathBuf },
    /// Print models, one per line, as signed variables.
    Enumerate {
        tdd: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        limit: usize,
    },
    Canonize {
        tdd: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Negate {
        tdd: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Condition {
        tdd: PathBuf,
        #[arg(short = 'x', long)]
        var: u32,
        #[arg(short = 'b', long, value_parser = clap::value_parser!(u8).range(0..=1))]
        value: u8,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Apply {
        /// and, or, xor, iff, implies, nand, nor.
        #[arg(long)]
        op: String,
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Existentially quantify variables; the result is nondeterministic.
    Forget {
        tdd: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        vars: Vec<u32>,
        /// Determinize the result.
        #[arg(long)]
        determinize: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Determinize {
        tdd: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exit 0 when equivalent, 1 otherwise.
    Equiv { a: PathBuf, b: PathBuf },
    /// OBDD to TDD, or TDD over a linear vtree to OBDD.
    Convert {
        #[arg(long)]
        from: Kind,
        input: PathBuf,
        /// Reduce the produced OBDD.
        #[arg(long)]
        reduce: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Learn a hidden function given as a TDD or truth-table file.
    Learn {
        hidden: PathBuf,
        /// balanced, linear, or a vtree file; a TDD target uses its own vtree by default.
        #[arg(long)]
        vtree: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Subfunction counts of a benchmark function as CSV.
    Bench {
        function: String,
        #[arg(short, long)]
        n: usize,
        #[arg(long)]
        sequential: bool,
    },
    /// c2d-style d-DNNF.
    ToNnf {
        tdd: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Obdd,
    Tdd,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_ntdd(path: &Path) -> Result<NTdd> {
    read_tdd_file(path)
        .with_context(|| format!("reading {}", path.display()))?
        .with_context(|| format!("parsing {}", path.display()))
}

fn load_tdd(path: &Path) -> Result<Tdd> {
    validate_deterministic(load_ntdd(path)?).map_err(|v| anyhow!("{}: not deterministic: {v:?}", path.display()))
}

fn load_vtree(path: &Path) -> Result<Vtree> {
    Vtree::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}

fn log_widths(steps: &[Step], what: &str) {
    for (i, s) in steps.iter().enumerate() {
        eprintln!("{what} {} width {} size {} product-width {}", i + 1, s.width, s.size, s.product_width);
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Compile { cnf, vtree, td, order, log_widths: log, output } => {
            let f = parse_dimacs(&read(&cnf)?).with_context(|| format!("parsing {}", cnf.display()))?;
            let td = match td {
                Some(p) => Some(TreeDecomp::parse_pace(&read(&p)?).with_context(|| format!("parsing {}", p.display()))?),
                None => None,
            };
            let vt = match vtree.parse::<VtreeKind>() {
                Ok(kind) => cnf_vtree(&f, kind, td.as_ref())?,
                Err(_) => load_vtree(Path::new(&vtree))?,
            };
            let order: Option<Vec<usize>> = match order {
                Some(o) => Some(
                    o.iter()
                        .map(|&i| i.checked_sub(1).ok_or_else(|| anyhow!("clause numbers start at 1")))
                        .collect::<Result<_>>()?,
                ),
                None => None,
            };
            let (c, steps) = compile_cnf(&f, Arc::new(vt), order.as_deref())?;
            if log {
                log_widths(&steps, "clause");
            }
            emit(output.as_deref(), &write_tdd(&c))?;
        }
        Cmd::CompileCircuit { circuit, vtree, log_widths: log, output } => {
            let circ = parse_circuit(&read(&circuit)?).with_context(|| format!("parsing {}", circuit.display()))?;
            let vt = match vtree {
                Some(p) => load_vtree(&p)?,
                None => circuit_vtree(&circ)?,
            };
            let (c, steps) = compile_circuit(&circ, Arc::new(vt))?;
            if log {
                log_widths(&steps, "step");
            }
            emit(output.as_deref(), &write_tdd(&c))?;
        }
        Cmd::Count { tdd } => println!("{}", load_tdd(&tdd)?.count()),
        Cmd::Enumerate { tdd, limit } => {
            let c = load_tdd(&tdd)?;
            let out = io::stdout();
            let mut out = io::BufWriter::new(out.lock());
            let mut err = None;
            let mut printed = 0usize;
            c.for_each_model(|m| {
                if printed >= limit {
                    return std::ops::ControlFlow::Break(());
                }
                printed += 1;
                match writeln!(out, "{m}") {
                    Ok(()) => std::ops::ControlFlow::Continue(()),
                    Err(e) => {
                        err = Some(e);
                        std::ops::ControlFlow::Break(())
                    }
                }
            });
            out.flush()?;
            if let Some(e) = err {
                return Err(e.into());
            }
            if !c.is_satisfiable() {
                eprintln!("no models");
                return Ok(ExitCode::from(2));
            }
        }
        Cmd::Canonize { tdd, output } => emit(output.as_deref(), &write_tdd(&canonize(&load_tdd(&tdd)?)))?,
        Cmd::Negate { tdd, output } => emit(output.as_deref(), &write_tdd(&negate(&load_tdd(&tdd)?)))?,
        Cmd::Condition { tdd, var, value, output } => {
            let c = condition(&load_tdd(&tdd)?, Var(var), value == 1)?;
            emit(output.as_deref(), &write_tdd(&c))?;
        }
        Cmd::Apply { op, a, b, output } => {
            let op: BinOp = op.parse()?;
            let c = apply(op, &load_tdd(&a)?, &load_tdd(&b)?)?;
            emit(output.as_deref(), &write_tdd(&c))?;
        }
        Cmd::Forget { tdd, vars, determinize: det, output } => {
            let vars: Vec<Var> = vars.into_iter().map(Var).collect();
            let nt = forget(&load_tdd(&tdd)?, &vars)?;
            let text = if det { write_tdd(&determinize(&nt)) } else { write_tdd(nt.diagram()) };
            emit(output.as_deref(), &text)?;
        }
        Cmd::Determinize { tdd, output } => emit(output.as_deref(), &write_tdd(&determinize(&load_ntdd(&tdd)?)))?,
        Cmd::Equiv { a, b } => {
            if equivalent(&load_tdd(&a)?, &load_tdd(&b)?)? {
                println!("equivalent");
            } else {
                println!("not equivalent");
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Convert { from, input, reduce, output } => {
            let text = match from {
                Kind::Obdd => {
                    let b = Obdd::parse(&read(&input)?).with_context(|| format!("parsing {}", input.display()))?;
                    write_tdd(obdd_to_tdd(&b)?.diagram())
                }
                Kind::Tdd => {
                    let c = load_tdd(&input)?;
                    let b = tdd_to_obdd(&c).map_err(|e| anyhow!("{e}: only TDDs over linear vtrees convert to OBDDs"))?;
                    if reduce { b.reduce() } else { b }.to_text()
                }
            };
            emit(output.as_deref(), &text)?;
        }
        Cmd::Learn { hidden, vtree, output } => {
            let text = read(&hidden)?;
            let order_of = |vars: &[Var]| VarOrder::new(vars.to_vec());
            let pick = |vars: &[Var], default: Option<Arc<Vtree>>| -> Result<Arc<Vtree>> {
                Ok(match vtree.as_deref() {
                    Some("balanced") => Arc::new(balanced_vtree(&order_of(vars)?)),
                    Some("linear") => Arc::new(linear_vtree(&order_of(vars)?)),
                    Some(p) => Arc::new(load_vtree(Path::new(p))?),
                    None => match default {
                        Some(v) => v,
                        None => Arc::new(balanced_vtree(&order_of(vars)?)),
                    },
                })
            };
            let (c, stats) = if text.trim_start().starts_with("table") {
                let f = BoolFunTable::parse(&text).with_context(|| format!("parsing {}", hidden.display()))?;
                let vt = pick(f.vars(), None)?;
                learn(vt, &mut truth_table_teacher(f))?
            } else {
                let target = load_tdd(&hidden)?;
                let vt = pick(target.vars(), Some(target.vtree_arc().clone()))?;
                if vt.all_vars() != target.vars() {
                    bail!("vtree variables differ from the hidden function's");
                }
                let target = if Arc::ptr_eq(&vt, target.vtree_arc()) {
                    target
                } else {
                    let f = target.truth_table()?;
                    tdd::compile::canonical_from_table(&f, vt.clone())?
                };
                learn(vt, &mut tdd_teacher(target))?
            };
            eprintln!(
                "membership queries {} equivalence queries {} repairs {}",
                stats.membership_queries, stats.equivalence_queries, stats.repairs
            );
            emit(output.as_deref(), &write_tdd(&c))?;
        }
        Cmd::Bench { function, n, sequential } => {
            let f = by_name(&function, n)?;
            let vts = standard_vtrees(&f)?;
            let exec = if sequential { Exec::Sequential } else { Exec::Parallel };
            let rs = fw_report(&function, n, &f, &vts, exec)?;
            print!("{}", reports_to_csv(&rs));
        }
        Cmd::ToNnf { tdd, output } => emit(output.as_deref(), &to_ddnnf(load_tdd(&tdd)?.diagram()))?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
