//! The `scc` command line tool.
//!
//! Exit codes: 0 success, 1 verification failure, 2 infeasible instance,
//! 3 invalid input (including I/O and parse errors), 4 enumeration bound
//! exceeded.

pub mod dot;
pub mod schema;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use itertools::Itertools;
use serde::Serialize;

use crate::covering::{BruteForceCores, CoreOracle, Instance, DEFAULT_ENUM_BOUND};
use crate::error::{Error, Result};
use crate::oracle::{
    gap_experiment, gap_sweep, verify_cores_lemma, verify_feasibility_lemma, GapReport,
    OracleConfig, Report, SweepRow,
};
use crate::rational::{self, Rational};
use crate::tightgen::{analytic_initial_cores, degree_identities, generate, GadgetParams, LabeledInstance};
use crate::wgmv::{dual_objective, run as run_wgmv, TiePolicy};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_INVALID_INPUT: i32 = 3;
pub const EXIT_BOUND: i32 = 4;

pub const ENUM_BOUND_VAR: &str = "SCC_ENUM_BOUND";

#[derive(Debug, Parser)]
#[command(name = "scc", version, about = "Small cuts cover: primal-dual solver, tight instances, verifiers")]
pub struct Cli {
    /// Worker threads for enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a gadget instance as JSON.
    Generate {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
        /// Added to every blue link cost, e.g. 1/100.
        #[arg(long, default_value = "0", value_parser = parse_rational)]
        epsilon: Rational,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the primal-dual algorithm on an instance file.
    Solve {
        instance: PathBuf,
        #[arg(long, default_value = "adversarial-red-first", value_parser = parse_policy)]
        policy: TiePolicy,
        /// Write the full run trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Check cores, feasible sets and the ratio on a gadget instance.
    Verify {
        #[arg(long, requires_all = ["p", "k"], conflicts_with = "instance")]
        q: Option<u64>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long, default_value = "0", value_parser = parse_rational)]
        epsilon: Rational,
        /// Verify an instance file instead of generating one.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long, default_value = "adversarial-red-first", value_parser = parse_policy)]
        policy: TiePolicy,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ratio at the largest admissible p for each k, against the closed form.
    Experiment {
        #[arg(long, value_delimiter = ',', default_values_t = [5u64, 6, 7, 8, 9, 10, 11])]
        k: Vec<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render an instance file as Graphviz DOT.
    ExportDot {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_policy(s: &str) -> std::result::Result<TiePolicy, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Infeasible(_) => EXIT_INFEASIBLE,
        Error::BoundExceeded { .. } => EXIT_BOUND,
        Error::Invariant(_) => EXIT_VERIFY_FAILED,
        _ => EXIT_INVALID_INPUT,
    }
}

/// Integers without a denominator, everything else as `num/den`.
fn show(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        rational::format(r)
    }
}

fn enum_bound() -> Result<usize> {
    match std::env::var(ENUM_BOUND_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("{ENUM_BOUND_VAR}={v:?} is not a node count"))),
        Err(_) => Ok(DEFAULT_ENUM_BOUND),
    }
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn read_instance(path: &Path) -> Result<Instance> {
    schema::instance_from_json(&fs::read_to_string(path)?)
}

/// A generated instance whose graph still satisfies every degree identity.
fn as_intact_gadget(inst: &Instance) -> Option<LabeledInstance> {
    let li = LabeledInstance::from_instance(inst.clone()).ok()?;
    degree_identities(&li).iter().all(|c| c.holds()).then_some(li)
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    passed: bool,
    failures: Vec<String>,
    cores: &'a Report,
    feasibility: &'a Report,
    gap: &'a GapReport,
}

#[derive(Serialize)]
struct SweepOutput<'a> {
    passed: bool,
    rows: &'a [SweepRow],
}

fn execute(cli: Cli) -> Result<i32> {
    let bound = enum_bound()?;
    let cfg = OracleConfig {
        node_bound: bound,
        jobs: cli.jobs.max(1),
        ..OracleConfig::default()
    };
    // Ignored if a pool already exists (e.g. repeated calls in one process).
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build_global();

    match cli.command {
        Command::Generate {
            q,
            p,
            k,
            epsilon,
            out,
        } => {
            let li = generate(&GadgetParams::new(q, p, k, epsilon)?)?;
            write_or_print(out.as_deref(), &schema::instance_to_json(&li.instance))?;
            eprintln!(
                "generated q={q} p={p} k={k}: {} nodes, {} links",
                li.n(),
                li.instance.links.len()
            );
            Ok(EXIT_OK)
        }
        Command::Solve {
            instance,
            policy,
            trace,
        } => {
            let inst = read_instance(&instance)?;
            let gadget = as_intact_gadget(&inst);
            let brute = BruteForceCores { bound };
            let analytic;
            let oracle: &dyn CoreOracle = match &gadget {
                Some(li) => {
                    analytic = analytic_initial_cores(li, bound);
                    &analytic
                }
                None => &brute,
            };
            let out = run_wgmv(&inst, oracle, policy)?;
            let cost = out.cost(&inst);
            let dual = dual_objective(&out.duals);
            let g = &inst.graph;
            println!("policy: {policy}");
            if out.selected.is_empty() {
                println!("cost {}, empty solution", show(&cost));
            } else {
                let names = out
                    .selected
                    .iter()
                    .map(|&e| {
                        let l = &inst.links[e];
                        format!("{}:{}-{}", e, g.display_name(l.u), g.display_name(l.v))
                    })
                    .join(" ");
                println!("selected: {names}");
                println!("cost {}, dual {}", show(&cost), show(&dual));
            }
            println!("dual objective: {}", show(&dual));
            if dual > rational::zero() {
                println!("ratio vs dual bound: {}", show(&(&cost / &dual)));
            }
            println!(
                "iterations: {}, deletions: {}",
                out.trace.iterations.len(),
                out.trace.deletions.len()
            );
            if let Some(path) = trace {
                fs::write(path, schema::trace_to_json(&out.trace))?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            q,
            p,
            k,
            epsilon,
            instance,
            policy,
            out,
        } => {
            let li = match (instance, q, p, k) {
                (Some(path), ..) => LabeledInstance::from_instance(read_instance(&path)?)?,
                (None, Some(q), Some(p), Some(k)) => generate(&GadgetParams::new(q, p, k, epsilon)?)?,
                _ => {
                    return Err(Error::InvalidInput(
                        "verify needs --q, --p and --k, or --instance".into(),
                    ))
                }
            };
            let cores = verify_cores_lemma(&li, bound)?;
            let feasibility = verify_feasibility_lemma(&li, bound)?;
            let gap = gap_experiment(&li, policy, &cfg)?;
            let failures: Vec<String> = cores
                .failures()
                .chain(feasibility.failures())
                .map(|c| c.name.clone())
                .chain(gap.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()))
                .collect();
            let passed = failures.is_empty();
            let report = VerifyOutput {
                passed,
                failures,
                cores: &cores,
                feasibility: &feasibility,
                gap: &gap,
            };
            let mut text = serde_json::to_string_pretty(&report)?;
            text.push('\n');
            write_or_print(out.as_deref(), &text)?;
            eprintln!(
                "{}: {} checks, ratio {}",
                if passed { "PASS" } else { "FAIL" },
                cores.checks.len() + feasibility.checks.len() + gap.checks.len(),
                show(&gap.ratio)
            );
            Ok(if passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
        Command::Experiment { k, out } => {
            let rows = gap_sweep(&k, &cfg)?;
            for r in &rows {
                println!(
                    "k={:<3} p={:<3} ratio={:<6} formula={:<6} opt={} {}",
                    r.k,
                    r.p,
                    show(&r.ratio),
                    show(&r.formula_value),
                    if r.opt_analytic { "analytic" } else { "enumerated" },
                    if r.matches { "ok" } else { "MISMATCH" }
                );
            }
            let passed = rows.iter().all(|r| r.matches);
            if let Some(path) = out {
                let mut text = serde_json::to_string_pretty(&SweepOutput { passed, rows: &rows })?;
                text.push('\n');
                fs::write(path, text)?;
            }
            Ok(if passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
        Command::ExportDot { instance, out } => {
            let inst = read_instance(&instance)?;
            write_or_print(out.as_deref(), &dot::to_dot(&inst))?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}

pub fn main() -> i32 {
    main_with(std::env::args_os())
}
