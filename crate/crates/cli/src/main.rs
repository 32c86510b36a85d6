use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use wlcp::branch::{bp_solve, BranchError, BranchKind, SelectRule, SolverConfig, Status};
use wlcp::io::{
    gen_set1, gen_set2, gen_set3, parse_dimacs_col, parse_orlib_scp, parse_solution, parse_wlcp,
    write_dimacs_col, write_solution, write_wlcp, write_wlcp_with_comments, GenParamsSet1,
    GenParamsSet2, GenParamsSet3,
};
use wlcp::model::Violation;
use wlcp::oracle::{brute_force, OracleResult, DEFAULT_MAX_ASSIGNMENTS};
use wlcp::preprocess::{reduce, Reduction};
use wlcp::{canonicalize, verify_coloring, Instance};

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

/// Exact solver for the weighted list coloring problem.
#[derive(Parser, Debug)]
#[command(name = "wlcp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve an instance to optimality.
    Solve(SolveArgs),
    /// Generate a random instance in the native format.
    Gen {
        #[command(subcommand)]
        set: GenSet,
    },
    /// Apply clique precoloring and print the reduced instance.
    Preprocess {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Convert an instance to another format.
    Convert {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "wlcp")]
        to: OutFormat,
    },
    /// Check a solution file against an instance.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        solution: PathBuf,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    file: PathBuf,
    /// Input format; guessed from the extension when absent.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Wlcp,
    Dimacs,
    Scp,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Wlcp,
    Dimacs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum BranchArg {
    Edge,
    Color,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SelectArg {
    Std,
    Alt,
    Alt1,
    Alt2,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "color")]
    branch: BranchArg,
    /// Selection rule; defaults to alt2 for color and std for edge branching.
    #[arg(long, value_enum)]
    select: Option<SelectArg>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long, default_value_t = 1000.0)]
    big_m: f64,
    #[arg(long, default_value_t = 1.1)]
    beta: f64,
    #[arg(long)]
    no_preprocess: bool,
    /// Solve by exhaustive enumeration instead.
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print search statistics as JSON on stderr.
    #[arg(long)]
    stats: bool,
    /// Write the best coloring to this file.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum GenSet {
    /// Random classes over a G(n, p) graph.
    Set1 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        /// Number of classes.
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        mult: usize,
        /// Class weights: one value for all classes or one per class.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        weights: Vec<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Nested vertex sets with decreasing size.
    Set2 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Graph coloring of a G(n, p) graph.
    Set3 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(anyhow::Error),
    Numeric(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Solve(args) => solve(&args),
        Command::Gen { set } => {
            print!("{}", generate(set)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Preprocess { input } => {
            let inst = load(&input)?;
            match reduce(&canonicalize(inst)) {
                Reduction::Infeasible => println!("status=infeasible"),
                Reduction::Reduced(canon, log) => {
                    let kept: Vec<String> = log.kept.iter().map(|v| (v + 1).to_string()).collect();
                    let comments = vec![
                        format!("offset {}", log.weight_offset),
                        format!("steps {}", log.steps.len()),
                        format!("kept {}", kept.join(" ")),
                    ];
                    print!("{}", write_wlcp_with_comments(canon.base(), &comments));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Convert { input, to } => {
            let inst = load(&input)?;
            match to {
                OutFormat::Wlcp => print!("{}", write_wlcp(&inst)),
                OutFormat::Dimacs => print!("{}", write_dimacs_col(inst.graph())),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { input, solution } => {
            let inst = load(&input)?;
            let text = read(&solution)?;
            let f = parse_solution(&text, inst.n())
                .with_context(|| format!("parsing {}", solution.display()))?;
            match verify_coloring(&inst, &f) {
                Ok(c) => {
                    println!("valid weight={}", c.weight);
                    Ok(ExitCode::SUCCESS)
                }
                Err(violations) => {
                    let msgs: Vec<String> = violations.iter().map(one_based).collect();
                    println!("invalid {}", msgs.join("; "));
                    Ok(ExitCode::FAILURE)
                }
            }
        }
    }
}

fn one_based(v: &Violation) -> String {
    match *v {
        Violation::WrongLength { expected, got } => {
            format!("solution covers {got} vertices, expected {expected}")
        }
        Violation::NotInList { vertex, color } => {
            format!("color {} not in list of vertex {}", color + 1, vertex + 1)
        }
        Violation::EdgeConflict { u, v, color } => {
            format!(
                "edge {}-{} has both endpoints colored {}",
                u + 1,
                v + 1,
                color + 1
            )
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn detect(path: &Path) -> Format {
    match path.extension().and_then(|e| e.to_str()) {
        Some("col") => Format::Dimacs,
        Some("scp" | "txt") => Format::Scp,
        _ => Format::Wlcp,
    }
}

fn load(input: &InputArgs) -> Result<Instance> {
    let text = read(&input.file)?;
    let format = input.format.unwrap_or_else(|| detect(&input.file));
    let inst = match format {
        Format::Wlcp => parse_wlcp(&text),
        Format::Dimacs => parse_dimacs_col(&text, 1),
        Format::Scp => parse_orlib_scp(&text),
    };
    inst.with_context(|| format!("parsing {}", input.file.display()))
}

fn generate(set: GenSet) -> Result<String> {
    let inst = match set {
        GenSet::Set1 {
            n,
            p,
            q,
            k,
            mult,
            weights,
            seed,
        } => {
            if weights.len() != 1 && weights.len() != k {
                bail!("--weights needs one value or {k} values");
            }
            gen_set1(&GenParamsSet1 {
                n,
                p,
                num_classes: k,
                mult,
                weights,
                q,
                seed,
            })
        }
        GenSet::Set2 { n, p, k, t, seed } => gen_set2(&GenParamsSet2 {
            n,
            p,
            num_classes: k,
            t,
            seed,
        }),
        GenSet::Set3 { n, p, seed } => gen_set3(&GenParamsSet3 { n, p, seed }),
    };
    Ok(write_wlcp(&inst))
}

fn solver_config(args: &SolveArgs) -> Result<SolverConfig> {
    let branch_kind = match args.branch {
        BranchArg::Edge => BranchKind::Edge,
        BranchArg::Color => BranchKind::Color,
    };
    let select_rule = match (args.select, branch_kind) {
        (None, BranchKind::Color) => SelectRule::Alt2,
        (None, BranchKind::Edge) | (Some(SelectArg::Std), _) => SelectRule::Std,
        (Some(SelectArg::Alt), _) => SelectRule::Alt,
        (Some(SelectArg::Alt1), _) => SelectRule::Alt1,
        (Some(SelectArg::Alt2), _) => SelectRule::Alt2,
    };
    let time_limit = match args.time_limit {
        Some(s) if !(s >= 0.0 && s.is_finite()) => {
            bail!("--time-limit must be a nonnegative number of seconds")
        }
        Some(s) => Some(Duration::from_secs_f64(s)),
        None => None,
    };
    let cfg = SolverConfig {
        branch_kind,
        select_rule,
        time_limit,
        big_m: args.big_m,
        beta: args.beta,
        seed: args.seed,
        preprocess: !args.no_preprocess,
        pricing_budget: None,
    };
    cfg.validate()?;
    Ok(cfg)
}

struct Report {
    status: &'static str,
    value: Option<u64>,
    bound: f64,
    nodes: usize,
    lps: usize,
    cols: usize,
    time_s: f64,
}

impl Report {
    fn line(&self) -> String {
        let value = self
            .value
            .map_or_else(|| "-".to_string(), |v| v.to_string());
        format!(
            "status={} value={} bound={:.6} nodes={} lps={} cols={} time_s={:.3}",
            self.status, value, self.bound, self.nodes, self.lps, self.cols, self.time_s
        )
    }
}

fn solve(args: &SolveArgs) -> Result<ExitCode, Failure> {
    let inst = load(&args.input)?;
    let cfg = solver_config(args)?;
    let (report, best, stats) = if args.oracle {
        let start = Instant::now();
        let res = brute_force(&inst, DEFAULT_MAX_ASSIGNMENTS).map_err(anyhow::Error::from)?;
        let time_s = start.elapsed().as_secs_f64();
        let (status, best) = match res {
            OracleResult::Optimal(c) => ("optimal", Some(c)),
            OracleResult::Infeasible => ("infeasible", None),
        };
        let value = best.as_ref().map(|c| c.weight);
        let bound = value.map_or(f64::INFINITY, |v| v as f64);
        let report = Report {
            status,
            value,
            bound,
            nodes: 0,
            lps: 0,
            cols: 0,
            time_s,
        };
        (report, best, json!({ "oracle": true, "time_s": time_s }))
    } else {
        let out = match bp_solve(&inst, &cfg) {
            Ok(out) => out,
            Err(e @ BranchError::NumericFailure(_)) => return Err(Failure::Numeric(e.into())),
            Err(e) => return Err(Failure::Usage(e.into())),
        };
        let status = match out.status {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::TimeLimit => "timelimit",
        };
        let value = out.best.as_ref().map(|c| c.weight);
        let report = Report {
            status,
            value,
            bound: out.bound,
            nodes: out.stats.nodes,
            lps: out.stats.lp_solves,
            cols: out.stats.columns,
            time_s: out.stats.time_s,
        };
        let stats = serde_json::to_value(&out.stats).map_err(anyhow::Error::from)?;
        (report, out.best, stats)
    };
    println!("{}", report.line());
    if args.stats {
        eprintln!("{stats}");
    }
    if let (Some(path), Some(best)) = (&args.output, &best) {
        fs::write(path, write_solution(&best.assignment))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}
