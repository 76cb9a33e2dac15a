//! `dpcount`: curve counts on del Pezzo surfaces from the command line.

use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dpcount_core::table::{sweep, sweep_classes};
use dpcount_core::{parse_class, Error, GwEngine, ResultRecord, Suite, SurfaceModel, SweepBounds, CACHE_ENV};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "dpcount", version, about = "Rational and rational cuspidal curve counts on del Pezzo surfaces")]
struct Cli {
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Tsv, global = true)]
    format: Format,

    /// Persistent cache of computed counts.
    #[arg(long, env = CACHE_ENV, global = true)]
    cache_path: Option<PathBuf>,

    /// Worker threads for sweeps (0 = one per core).
    #[arg(long, default_value_t = 0, global = true)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print N for a class `d;m1,...,mk`.
    Nbeta {
        #[arg(allow_hyphen_values = true)]
        class: String,
    },
    /// Print the cuspidal count C, its two terms and the validity flag.
    Cbeta {
        #[arg(allow_hyphen_values = true)]
        class: String,
    },
    /// Sweep canonical classes with m_i <= d and δ >= 1.
    Table {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        dmax: i64,
        #[arg(long)]
        mmax: Option<i64>,
    },
    /// Run a verification suite; exits 1 on any failure.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
    },
    /// List the seed classes and their counts.
    Seeds {
        #[arg(long)]
        k: usize,
    },
    /// Check every nondegenerate relation in the divisor pool against N.
    Consistency {
        #[arg(allow_hyphen_values = true)]
        class: String,
        /// Use only the first N pool divisors.
        #[arg(long)]
        pool_size: Option<usize>,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

enum Failure {
    Usage(String),
    Compute(String),
    Suite,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Compute(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Compute(format!("write failed: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let engine = GwEngine::new();

    if let Some(path) = &cli.cache_path {
        match engine.load_cache(path) {
            Ok(report) => {
                for (line, reason) in &report.rejected {
                    eprintln!("warning: cache {}:{line} skipped: {reason}", path.display());
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        }
    }
    let cached = engine.memo_len();

    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start {} worker threads: {e}", cli.jobs);
            return ExitCode::from(1);
        }
    };
    let outcome = pool.install(|| run(&cli, &engine));

    if let Some(path) = &cli.cache_path {
        if engine.memo_len() != cached {
            if let Err(e) = engine.save_cache(path) {
                eprintln!("warning: {e}");
            }
        }
    }

    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Suite) => ExitCode::from(1),
    }
}

fn run(cli: &Cli, engine: &GwEngine) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match &cli.command {
        Command::Nbeta { class } => {
            let (surface, beta) = parse_class(class)?;
            let n = engine.n_beta(&surface, &beta)?;
            match cli.format {
                Format::Tsv => writeln!(out, "N={n}")?,
                Format::Json => writeln!(
                    out,
                    "{}",
                    json!({ "k": surface.k(), "class": beta.to_string(), "n": n.to_string() })
                )?,
            }
        }
        Command::Cbeta { class } => {
            let (surface, beta) = parse_class(class)?;
            let c = engine.c_beta(&surface, &beta)?;
            for w in &c.warnings {
                eprintln!("warning: {w}");
            }
            match cli.format {
                Format::Tsv => {
                    writeln!(out, "C={} valid={}", c.value, c.valid)?;
                    writeln!(out, "first_term={}", c.first_term)?;
                    writeln!(out, "boundary_term={}", c.boundary_term)?;
                }
                Format::Json => {
                    let mut v = serde_json::to_value(&c).map_err(|e| Failure::Compute(e.to_string()))?;
                    v["k"] = json!(surface.k());
                    v["class"] = json!(beta.to_string());
                    writeln!(out, "{v}")?;
                }
            }
        }
        Command::Table { k, dmax, mmax } => {
            let bounds = SweepBounds {
                k: *k,
                dmax: *dmax,
                mmax: *mmax,
            };
            let surface = SurfaceModel::new(*k)?;
            let classes = sweep_classes(bounds)?;
            let result = sweep(engine, &surface, &classes)?;
            for class in &result.skipped {
                eprintln!("note: skipped {class}: outside the cusp formula's hypotheses");
            }
            write_records(&mut out, cli.format, &result.records)?;
        }
        Command::Verify { suite } => {
            let report = suite.run(engine);
            match cli.format {
                Format::Tsv => writeln!(out, "{report}")?,
                Format::Json => writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&report).map_err(|e| Failure::Compute(e.to_string()))?
                )?,
            }
            out.flush()?;
            if !report.passed() {
                return Err(Failure::Suite);
            }
        }
        Command::Seeds { k } => {
            let surface = SurfaceModel::new(*k)?;
            let seeds = engine.seed_classes(&surface);
            match cli.format {
                Format::Tsv => {
                    for (class, n) in &seeds {
                        writeln!(out, "{k}\t{class}\t{n}")?;
                    }
                }
                Format::Json => {
                    let rows: Vec<_> = seeds
                        .iter()
                        .map(|(c, n)| json!({ "k": k, "class": c.to_string(), "n": n.to_string() }))
                        .collect();
                    writeln!(out, "{}", serde_json::Value::Array(rows))?;
                }
            }
        }
        Command::Consistency { class, pool_size } => {
            let (surface, beta) = parse_class(class)?;
            let report = engine.consistency_check(&surface, &beta, pool_size.unwrap_or(usize::MAX))?;
            match cli.format {
                Format::Tsv => writeln!(out, "{}", report.to_string().trim_end())?,
                Format::Json => writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&report).map_err(|e| Failure::Compute(e.to_string()))?
                )?,
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn write_records(out: &mut impl Write, format: Format, records: &[ResultRecord]) -> Result<(), Failure> {
    match format {
        Format::Tsv => {
            for r in records {
                writeln!(out, "{}", r.to_tsv())?;
            }
        }
        Format::Json => {
            let text = serde_json::to_string(records).map_err(|e| Failure::Compute(e.to_string()))?;
            writeln!(out, "{text}")?;
        }
    }
    Ok(())
}
