use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use splitdecomp::testkit::{GenSpec, DEFAULT_ORACLE_BOUND};
use splitdecomp_cli::commands::{self, DecomposeOptions, FamilyName, PairMethod, StressSpec};
use splitdecomp_cli::report::{Report, Status};

/// Strong arc decompositions and good branching pairs of split digraphs.
///
/// Exit codes: 0 success, 1 exception / no decomposition / no pair,
/// 2 invalid input or unmet precondition, 3 internal error.
#[derive(Parser)]
#[command(name = "splitdecomp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split the arcs of a graph file into two strong spanning classes.
    Decompose {
        file: PathBuf,
        /// Run and verify, but print only the status and verification result.
        #[arg(long)]
        verify_only: bool,
        #[arg(long)]
        json: bool,
        /// The input is a semicomplete multigraph (empty `v1:`).
        #[arg(long)]
        semicomplete: bool,
        /// Leave timings out of the report.
        #[arg(long)]
        no_timing: bool,
    },
    /// Find an out-branching and an arc-disjoint in-branching.
    GoodPair {
        file: PathBuf,
        #[arg(long)]
        root_out: String,
        #[arg(long)]
        root_in: String,
        #[arg(long, value_enum, default_value_t = PairMethod::Auto)]
        method: PairMethod,
        #[arg(long, default_value_t = 64)]
        oracle_bound: usize,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        no_timing: bool,
    },
    /// Print a generated graph file.
    Generate {
        #[command(subcommand)]
        what: Generate,
    },
    /// Decompose many random instances in parallel and summarize.
    Stress {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        n1_min: usize,
        #[arg(long, default_value_t = 5)]
        n1_max: usize,
        #[arg(long, default_value_t = 4)]
        n2_min: usize,
        #[arg(long, default_value_t = 9)]
        n2_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Compare against the exhaustive oracle on instances with at most
        /// this many arcs.
        #[arg(long, default_value_t = DEFAULT_ORACLE_BOUND)]
        oracle_bound: usize,
        #[command(flatten)]
        sampler: Sampler,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        no_timing: bool,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Subcommand)]
enum Generate {
    /// A member of a counterexample family with no good (u,v)-pair.
    Family {
        #[arg(value_enum)]
        family: FamilyName,
        #[arg(long, default_value_t = 1)]
        w_size: usize,
    },
    /// A random split digraph.
    Random {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        sampler: Sampler,
    },
}

#[derive(Args)]
struct Sampler {
    /// Comma-separated: strong, two_arc_strong, three_arc_strong,
    /// v1_degree_3, semicomplete_split.
    #[arg(long, default_value = "two_arc_strong,v1_degree_3")]
    enforce: String,
    #[arg(long, default_value_t = 0.6)]
    cross_density: f64,
    #[arg(long, default_value_t = 0.3)]
    orientation_bias: f64,
    #[arg(long, default_value_t = 0.5)]
    forward_bias: f64,
    #[arg(long, default_value_t = 20_000)]
    max_attempts: usize,
}

impl Sampler {
    fn spec(&self, n1: usize, n2: usize, seed: u64) -> Result<GenSpec, String> {
        let mut spec = GenSpec::new(n1, n2, seed).enforce(&commands::parse_enforce(&self.enforce)?);
        spec.cross_density = self.cross_density;
        spec.orientation_bias = self.orientation_bias;
        spec.forward_bias = self.forward_bias;
        spec.max_attempts = self.max_attempts;
        Ok(spec)
    }
}

fn read(command: &'static str, path: &PathBuf, run: impl FnOnce(&str) -> Report) -> Report {
    match std::fs::read_to_string(path) {
        Ok(text) => run(&text),
        Err(e) => Report::error(command, Status::Invalid, format!("cannot read {}: {e}", path.display()), None),
    }
}

fn emit(mut report: Report, json: bool, no_timing: bool) -> ExitCode {
    if no_timing {
        report.timing_ms = None;
    }
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    ExitCode::from(report.status.exit_code())
}

fn usage_error(message: String) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Decompose { file, verify_only, json, semicomplete, no_timing } => {
            let report = read("decompose", &file, |text| {
                commands::decompose(text, DecomposeOptions { verify_only, semicomplete })
            });
            emit(report, json, no_timing)
        }
        Command::GoodPair { file, root_out, root_in, method, oracle_bound, json, no_timing } => {
            let report =
                read("good-pair", &file, |text| commands::good_pair(text, &root_out, &root_in, method, oracle_bound));
            emit(report, json, no_timing)
        }
        Command::Generate { what } => {
            let out = match what {
                Generate::Family { family, w_size } => commands::generate_family(family, w_size),
                Generate::Random { n1, n2, seed, sampler } => {
                    sampler.spec(n1, n2, seed).and_then(|spec| commands::generate_random(&spec))
                }
            };
            match out {
                Ok(text) => {
                    print!("{text}");
                    ExitCode::SUCCESS
                }
                Err(e) => usage_error(e),
            }
        }
        Command::Stress {
            count,
            n1_min,
            n1_max,
            n2_min,
            n2_max,
            seed,
            oracle_bound,
            sampler,
            json,
            no_timing,
            threads,
        } => {
            if n1_min > n1_max || n2_min > n2_max {
                return usage_error("empty size range".into());
            }
            let template = match sampler.spec(n1_min, n2_min, seed) {
                Ok(t) => t,
                Err(e) => return usage_error(e),
            };
            let spec = StressSpec { count, n1: (n1_min, n1_max), n2: (n2_min, n2_max), seed, template, oracle_bound };
            let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads.unwrap_or(0)).build() {
                Ok(p) => p,
                Err(e) => return usage_error(e.to_string()),
            };
            let summary = pool.install(|| commands::stress(&spec, !no_timing));
            if json {
                println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
            } else {
                print!("{}", summary.to_text());
            }
            if summary.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
    }
}
