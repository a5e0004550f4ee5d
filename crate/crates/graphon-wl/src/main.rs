use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use graphon_wl::digest::fingerprint_digest;
use graphon_wl::format::{multigraph_to_json, parse_graph_or_graphon, parse_graphon_or_graph, parse_multigraph};
use graphon_wl::harness::{self, any_violation, EquivalenceReport};
use graphon_wl::pairs::{curated_graph_pairs, fig1_pair, random_graph_pairs, random_graphon_pairs};
use graphon_wl::sexpr::parse_term;
use graphon_wl_core::enumeration::{enumerate_patterns, find_distinguisher, EnumerationSpec};
use graphon_wl_core::lp::{
    build_doubly_stochastic_commutant, build_lk, build_markov_commutant, feasible, Feasibility, LinearSystem, OperatorFamily,
};
use graphon_wl_core::operators::{hom_density_bruteforce, term_density};
use graphon_wl_core::refinement::{refine_jointly, Algorithm, ModeFlag};
use graphon_wl_core::StepGraphon;

#[derive(Parser)]
#[command(name = "graphon-wl", version, about = "Exact Weisfeiler-Leman tools for graphs and step graphons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Colref,
    Owl,
    Simple,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Graphon,
    Graph,
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemKind {
    Lk,
    Ds,
    Markov,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Oblivious,
    Kernel,
    Simple,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Colref,
    Kwl,
    Graphon,
    Simple,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    Fig1,
}

#[derive(clap::Args)]
struct RefineArgs {
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, value_enum, default_value = "graphon")]
    mode: Mode,
}

#[derive(Subcommand)]
enum Command {
    /// Refine one graphon and print class counts per round.
    Refine {
        #[command(flatten)]
        args: RefineArgs,
        file: PathBuf,
    },
    /// Refine two graphons against one color table.
    Compare {
        #[command(flatten)]
        args: RefineArgs,
        left: PathBuf,
        right: PathBuf,
    },
    /// Decide feasibility of L^k, AX = XB, or a Markov commutant system.
    Lp {
        #[arg(long, value_enum)]
        system: SystemKind,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        perm_invariant: bool,
        #[arg(long, value_enum, default_value = "oblivious")]
        family: Family,
        /// Print the nonzero entries of the solution.
        #[arg(long)]
        witness: bool,
        left: PathBuf,
        right: PathBuf,
    },
    /// List patterns of bounded treewidth, one JSON document per line.
    Enumerate {
        #[arg(long)]
        tw: usize,
        #[arg(long)]
        max_vertices: usize,
        #[arg(long)]
        simple: bool,
        #[arg(long, default_value_t = 3)]
        max_mult: u32,
        /// Include disconnected patterns.
        #[arg(long)]
        all: bool,
    },
    /// Search for a pattern of treewidth below k with different densities.
    Distinguish {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        simple: bool,
        left: PathBuf,
        right: PathBuf,
    },
    /// Run a cross-validation suite on seeded random pairs.
    Harness {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the verdicts on a built-in counterexample.
    Counterexample {
        #[arg(value_enum)]
        which: Example,
    },
    /// Homomorphism density of a pattern file or a term in a graphon.
    Density {
        #[arg(long, conflicts_with = "term", required_unless_present = "term")]
        pattern: Option<PathBuf>,
        #[arg(long)]
        term: Option<String>,
        graphon: PathBuf,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graphon(path: &Path) -> Result<StepGraphon> {
    parse_graphon_or_graph(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn algorithm(args: &RefineArgs) -> Algorithm {
    let mode = match args.mode {
        Mode::Graphon => ModeFlag::Graphon,
        Mode::Graph => ModeFlag::Graph,
    };
    match args.algo {
        Algo::Colref => Algorithm::ColorRefinement(mode),
        Algo::Owl => Algorithm::Oblivious { k: args.k, mode },
        Algo::Simple => Algorithm::Simple { k: args.k },
    }
}

fn print_solution(system: &LinearSystem, result: Feasibility, show_witness: bool) -> bool {
    match result.witness() {
        Some(x) => {
            println!("FEASIBLE");
            if show_witness {
                for (j, v) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                    println!("{} = {}", system.name(j), v);
                }
            }
            true
        }
        None => {
            println!("INFEASIBLE");
            false
        }
    }
}

fn print_reports(reports: &[EquivalenceReport]) -> bool {
    for r in reports {
        println!("{r}");
    }
    let violations = reports.iter().filter(|r| r.classification.is_violation()).count();
    let inconclusive = reports
        .iter()
        .filter(|r| matches!(r.classification, harness::Classification::InconclusiveBudget(_)))
        .count();
    let findings: usize = reports.iter().map(|r| r.findings.len()).sum();
    println!(
        "{} reports: {} violations, {} inconclusive, {} findings",
        reports.len(),
        violations,
        inconclusive,
        findings
    );
    !any_violation(reports)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Refine { args, file } => {
            let w = load_graphon(&file)?;
            let run = refine_jointly(&[&w], algorithm(&args))?;
            let coloring = &run.colorings[0];
            for r in 0..coloring.round_count() {
                println!("round {r}: {} classes", coloring.class_count(r));
            }
            println!("digest {}", fingerprint_digest(&run.table, &run.fingerprints[0]));
        }
        Command::Compare { args, left, right } => {
            let (u, w) = (load_graphon(&left)?, load_graphon(&right)?);
            let run = refine_jointly(&[&u, &w], algorithm(&args))?;
            match run.first_difference(0, 1) {
                None => println!("EQUAL"),
                Some(r) => println!("DIFFER at round {r}"),
            }
        }
        Command::Lp { system, k, perm_invariant, family, witness, left, right } => {
            let (l, r) = (read(&left)?, read(&right)?);
            match system {
                SystemKind::Lk => {
                    let lk = build_lk(&parse_graph_or_graphon(&l)?, &parse_graph_or_graphon(&r)?, k)?;
                    print_solution(&lk.system, lk.solve(), witness);
                }
                SystemKind::Ds => {
                    let ds = build_doubly_stochastic_commutant(&parse_graph_or_graphon(&l)?, &parse_graph_or_graphon(&r)?)?;
                    print_solution(&ds, feasible(&ds), witness);
                }
                SystemKind::Markov => {
                    let family = match family {
                        Family::Oblivious => OperatorFamily::Oblivious,
                        Family::Kernel => OperatorFamily::Kernel,
                        Family::Simple => OperatorFamily::Simple,
                    };
                    let ms = build_markov_commutant(
                        &parse_graphon_or_graph(&l)?,
                        &parse_graphon_or_graph(&r)?,
                        k,
                        family,
                        perm_invariant,
                    )?;
                    print_solution(&ms.system, feasible(&ms.system), witness);
                }
            }
        }
        Command::Enumerate { tw, max_vertices, simple, max_mult, all } => {
            let spec = EnumerationSpec {
                max_vertices,
                max_edge_multiplicity: if simple { 1 } else { max_mult },
                treewidth_bound: tw,
                simple_only: simple,
                connected_only: !all,
            };
            let mut out = std::io::stdout().lock();
            for g in enumerate_patterns(&spec)? {
                // Stop quietly when the reader goes away, e.g. under `head`.
                if writeln!(out, "{}", multigraph_to_json(&g)).is_err() {
                    break;
                }
            }
        }
        Command::Distinguish { k, simple, left, right } => {
            let (u, w) = (load_graphon(&left)?, load_graphon(&right)?);
            let spec = if simple { EnumerationSpec::simple_graphs(0) } else { EnumerationSpec::multigraphs(0) };
            match find_distinguisher(&u, &w, k, &spec)? {
                Some(f) => println!(
                    "{} {} vs {}",
                    multigraph_to_json(&f),
                    hom_density_bruteforce(&f, &u)?,
                    hom_density_bruteforce(&f, &w)?
                ),
                None => println!("none"),
            }
        }
        Command::Harness { suite, k, pairs, seed } => {
            println!("seed {seed}");
            let reports = match suite {
                SuiteArg::Colref => {
                    let mut p = curated_graph_pairs();
                    p.extend(random_graph_pairs(seed, pairs, 6));
                    harness::run_colref_suite(&p)?
                }
                SuiteArg::Kwl => {
                    if !(1..=2).contains(&k) {
                        bail!("the kwl suite takes k in 1..=2");
                    }
                    let mut p = curated_graph_pairs();
                    p.extend(random_graph_pairs(seed, pairs, 6));
                    harness::run_kwl_suite(&p, k)?
                }
                SuiteArg::Graphon | SuiteArg::Simple => {
                    let mut p = vec![fig1_pair()];
                    p.extend(random_graphon_pairs(seed, pairs, 4));
                    if matches!(suite, SuiteArg::Graphon) {
                        harness::run_graphon_suite(&p, k)?
                    } else {
                        harness::run_simple_suite(&p, k)?
                    }
                }
            };
            if !print_reports(&reports) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Counterexample { which: Example::Fig1 } => {
            println!("{}", harness::counterexample_fig1()?);
        }
        Command::Density { pattern, term, graphon } => {
            let w = load_graphon(&graphon)?;
            let value = match (pattern, term) {
                (Some(p), _) => hom_density_bruteforce(&parse_multigraph(&read(&p)?)?, &w)?,
                (None, Some(t)) => term_density(&parse_term(&t)?, &w)?,
                (None, None) => bail!("give --pattern or --term"),
            };
            println!("{value}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
