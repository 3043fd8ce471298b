//! Command-line front end: every subcommand is a thin adapter over the
//! library, wiring file I/O and exit codes (0 success, 1 domain error,
//! 2 I/O or format error).

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dcnet::bigraph::{BipartiteGraph, GraphJson};
use dcnet::construct::{
    double_cover_join, gen_circulant, gen_cycle, iterate, three_step_iterated, ConstructedGraph,
    ConstructedJson,
};
use dcnet::dcn::{dcn_counts, method_a, method_b, table_qfz, Dcn, DcnCounts, DcnJson, Method};
use dcnet::error::Error;
use dcnet::routing;
use dcnet::sweeps::{sweep_one_to_one, trial_one_to_many, SweepReport};
use dcnet::tdesign::{TdJson, TransversalDesign};
use dcnet::verify::{menger_count, DisjointMode, PathSet};

#[derive(Parser)]
#[command(name = "dcnet", version, about = "Data-centre network topologies from transversal designs")]
struct Cli {
    /// Emit machine-readable JSON instead of human text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and verify transversal designs
    #[command(subcommand)]
    Td(TdCmd),
    /// Generate base bipartite graphs
    #[command(subcommand)]
    Base(BaseCmd),
    /// Run the 2-step and 3-step constructions
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Convert graphs to data-centre networks and reproduce counts
    #[command(subcommand)]
    Dcn(DcnCmd),
    /// Construct disjoint path systems
    #[command(subcommand)]
    Route(RouteCmd),
    /// Verify path systems and sweep the routing guarantees
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum TdCmd {
    /// Build a [delta,k]-transversal design
    Build {
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every defining property of a design
    Verify {
        /// design JSON (defaults to standard input)
        #[arg(long)]
        r#in: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BaseCmd {
    /// Cycle on 2n vertices
    Cycle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Circulant-style (delta,delta)-regular graph
    Circulant {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Join two copies of a square regular graph
    DoubleCover {
        #[arg(long)]
        r#in: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy)]
enum VariantArg {
    TwoStep,
    ThreeStep,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Blow a base graph up by a transversal design
    TwoStep(ConstructArgs),
    /// The dual of the 2-step result
    ThreeStep(ConstructArgs),
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    base: PathBuf,
    #[arg(long)]
    td: PathBuf,
    #[arg(long, default_value_t = 1)]
    iterations: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy)]
enum MethodArg {
    A,
    B,
}

#[derive(Subcommand)]
enum DcnCmd {
    /// Attach servers and level-2 switches to a graph (c copies)
    MethodA {
        #[arg(long)]
        r#in: PathBuf,
        #[arg(long, default_value_t = 1)]
        c: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pair up level-1 switches of a Method-A network
    MethodB {
        #[arg(long)]
        r#in: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form device counts for an iterated 3-step construction
    Counts {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        e: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        delta: u64,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 1)]
        iterations: u32,
        #[arg(long, default_value_t = 1)]
        c: u64,
        #[arg(long, value_enum)]
        method: MethodArg,
    },
    /// Reproduce the published 64-port comparison table
    TableQfz,
}

#[derive(Subcommand)]
enum RouteCmd {
    /// Internally-disjoint paths between two blocks
    OneToOne {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        src: String,
        #[arg(long)]
        dst: String,
        #[arg(long)]
        emit_paths: Option<PathBuf>,
    },
    /// Edge-disjoint paths from one block to many targets
    OneToMany {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        src: String,
        /// comma-separated block ids
        #[arg(long, value_delimiter = ',')]
        targets: Vec<String>,
        #[arg(long)]
        emit_paths: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy)]
enum ModeArg {
    Internal,
    Edge,
}

#[derive(ValueEnum, Clone, Copy)]
enum RoutineArg {
    OneToOne,
    OneToMany,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Check a path system against a graph
    Paths {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        paths: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Maximum number of disjoint paths between two elements
    Menger {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        src: String,
        #[arg(long)]
        dst: String,
        #[arg(long, value_enum, default_value = "internal")]
        mode: ModeArg,
    },
    /// Run a routing construction across a whole graph and re-verify it
    Sweep {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        routine: RoutineArg,
        /// random trials for the one-to-many routine
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Error> {
    match path {
        Some(p) => Ok(std::fs::read_to_string(p)?),
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            Ok(buf)
        }
    }
}

fn emit(out: &Option<PathBuf>, text: String) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn load_bigraph(path: &Path) -> Result<BipartiteGraph, Error> {
    let text = std::fs::read_to_string(path)?;
    if let Ok(j) = serde_json::from_str::<ConstructedJson>(&text) {
        return Ok(ConstructedGraph::from_json(&j)?.graph().clone());
    }
    let j: GraphJson = serde_json::from_str(&text)?;
    BipartiteGraph::from_json(&j)
}

fn print_counts(label: &str, c: &DcnCounts) {
    println!(
        "{label:18} ports {:3}  diameter {}  servers {:>9}  level-1 {:>7}  level-2 {:>7}  switches {:>7}",
        c.ports, c.diameter, c.servers, c.level1, c.level2, c.switches
    );
}

fn print_pathset(ps: &PathSet, json: bool) -> Result<(), Error> {
    if json {
        println!("{}", serde_json::to_string_pretty(ps)?);
    } else {
        for (i, p) in ps.paths.iter().enumerate() {
            println!("path {i} (length {}): {}", p.len(), p.elements.join(" - "));
        }
        println!(
            "{} paths, {:?}-disjoint, length bound {}",
            ps.paths.len(),
            ps.mode,
            ps.length_bound
        );
    }
    Ok(())
}

fn report_sweep(name: &str, report: &SweepReport, json: bool) -> Result<(), Error> {
    if json {
        println!(
            "{}",
            serde_json::json!({
                "routine": name,
                "cases": report.cases,
                "failures": report.failures,
            })
        );
    } else {
        println!("{name}: {} cases, {} failures", report.cases, report.failures.len());
        for f in &report.failures {
            println!("  {f}");
        }
    }
    if report.is_ok() {
        Ok(())
    } else {
        Err(Error::RoutingSelfCheck(format!(
            "{} of {} sweep cases failed",
            report.failures.len(),
            report.cases
        )))
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Td(cmd) => match cmd {
            TdCmd::Build { delta, k, out } => {
                let t = TransversalDesign::build(delta, k)?;
                emit(&out, serde_json::to_string_pretty(&t.to_json())?)
            }
            TdCmd::Verify { r#in } => {
                let j: TdJson = serde_json::from_str(&read_input(&r#in)?)?;
                let t = TransversalDesign::from_json(&j)?;
                let report = t.verify();
                if cli.json {
                    println!("{}", serde_json::to_string_pretty(&report)?);
                } else if report.is_valid() {
                    println!("valid [{},{}]-transversal design", t.delta(), t.k());
                } else {
                    for v in &report.violations {
                        println!("{v}");
                    }
                }
                if report.is_valid() {
                    Ok(())
                } else {
                    Err(Error::BadDesignParams(format!(
                        "{} violations",
                        report.violations.len()
                    )))
                }
            }
        },
        Command::Base(cmd) => {
            let (graph, out) = match cmd {
                BaseCmd::Cycle { n, out } => (gen_cycle(n)?, out),
                BaseCmd::Circulant { n, delta, out } => (gen_circulant(n, delta)?, out),
                BaseCmd::DoubleCover { r#in, out } => {
                    let j: GraphJson = serde_json::from_str(&read_input(&r#in)?)?;
                    (double_cover_join(&BipartiteGraph::from_json(&j)?)?, out)
                }
            };
            emit(&out, serde_json::to_string_pretty(&graph.to_json())?)
        }
        Command::Construct(cmd) => {
            let (args, three) = match cmd {
                ConstructCmd::TwoStep(a) => (a, false),
                ConstructCmd::ThreeStep(a) => (a, true),
            };
            let base = BipartiteGraph::from_json(&serde_json::from_str::<GraphJson>(
                &std::fs::read_to_string(&args.base)?,
            )?)?;
            let td = TransversalDesign::load(&args.td)?;
            let built = if three {
                three_step_iterated(&base, &td, args.iterations)?
            } else {
                iterate(&base, &td, args.iterations)?
            };
            emit(&args.out, serde_json::to_string_pretty(&built.to_json())?)
        }
        Command::Dcn(cmd) => match cmd {
            DcnCmd::MethodA { r#in, c, out } => {
                let dcn = method_a(&load_bigraph(&r#in)?, c)?;
                emit(&out, serde_json::to_string_pretty(&dcn.to_json())?)
            }
            DcnCmd::MethodB { r#in, out } => {
                let j: DcnJson = serde_json::from_str(&std::fs::read_to_string(&r#in)?)?;
                let dcn = method_b(&Dcn::from_json(&j)?)?;
                emit(&out, serde_json::to_string_pretty(&dcn.to_json())?)
            }
            DcnCmd::Counts {
                n,
                e,
                d,
                delta,
                k,
                iterations,
                c,
                method,
            } => {
                let method = match method {
                    MethodArg::A => Method::A,
                    MethodArg::B => Method::B,
                };
                let counts = dcn_counts(n, e, d, delta, k, iterations, c, method)?;
                if cli.json {
                    println!("{}", serde_json::to_string_pretty(&counts)?);
                } else {
                    print_counts("counts", &counts);
                }
                Ok(())
            }
            DcnCmd::TableQfz => {
                let rows = table_qfz();
                if cli.json {
                    println!("{}", serde_json::to_string_pretty(&rows)?);
                } else {
                    for row in &rows {
                        print_counts(&row.network, &row.counts);
                    }
                }
                Ok(())
            }
        },
        Command::Route(cmd) => match cmd {
            RouteCmd::OneToOne {
                graph,
                src,
                dst,
                emit_paths,
            } => {
                let h = ConstructedGraph::load(&graph)?;
                let r = routing::one_to_one(&h, &src, &dst)?;
                if !cli.json {
                    println!(
                        "promised {} paths (lambda {}, mu {}, {} common neighbours)",
                        r.promised, r.lambda, r.mu, r.common
                    );
                }
                print_pathset(&r.pathset, cli.json)?;
                if let Some(p) = emit_paths {
                    std::fs::write(&p, serde_json::to_string_pretty(&r.pathset)?)?;
                }
                Ok(())
            }
            RouteCmd::OneToMany {
                graph,
                src,
                targets,
                emit_paths,
            } => {
                let h = ConstructedGraph::load(&graph)?;
                let ps = routing::one_to_many(&h, &src, &targets)?;
                print_pathset(&ps, cli.json)?;
                if let Some(p) = emit_paths {
                    std::fs::write(&p, serde_json::to_string_pretty(&ps)?)?;
                }
                Ok(())
            }
        },
        Command::Verify(cmd) => match cmd {
            VerifyCmd::Paths { graph, paths, mode } => {
                let g = load_bigraph(&graph)?;
                let mut ps: PathSet = serde_json::from_str(&std::fs::read_to_string(&paths)?)?;
                if let Some(mode) = mode {
                    ps.mode = match mode {
                        ModeArg::Internal => DisjointMode::Internal,
                        ModeArg::Edge => DisjointMode::Edge,
                    };
                }
                let violations = ps.violations(&g);
                if cli.json {
                    println!("{}", serde_json::json!({ "violations": violations }));
                } else if violations.is_empty() {
                    println!("ok: {} paths, {:?}-disjoint", ps.paths.len(), ps.mode);
                } else {
                    for v in &violations {
                        println!("{v}");
                    }
                }
                if violations.is_empty() {
                    Ok(())
                } else {
                    Err(Error::RoutingSelfCheck(format!("{} violations", violations.len())))
                }
            }
            VerifyCmd::Menger {
                graph,
                src,
                dst,
                mode,
            } => {
                let g = load_bigraph(&graph)?;
                let mode = match mode {
                    ModeArg::Internal => DisjointMode::Internal,
                    ModeArg::Edge => DisjointMode::Edge,
                };
                let count = menger_count(&g, g.elem(&src)?, g.elem(&dst)?, mode)?;
                if cli.json {
                    println!("{}", serde_json::json!({ "count": count }));
                } else {
                    println!("{count}");
                }
                Ok(())
            }
            VerifyCmd::Sweep {
                graph,
                routine,
                trials,
                seed,
            } => {
                let h = ConstructedGraph::load(&graph)?;
                match routine {
                    RoutineArg::OneToOne => {
                        let report = sweep_one_to_one(&h)?;
                        report_sweep("one-to-one", &report, cli.json)
                    }
                    RoutineArg::OneToMany => {
                        eprintln!("seed {seed}");
                        let report = trial_one_to_many(&h, trials, seed)?;
                        report_sweep("one-to-many", &report, cli.json)
                    }
                }
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) | Error::Json(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
