use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use waring_core::gen::{gen_identifiable, gen_unidentifiable, gen_unidentifiable_split, GeneratedInstance};
use waring_core::io::{
    format_hilbert_table, format_kruskal, format_syzygy_dump, run_check, CriteriaSelection, InputError, InstanceFile,
    ReportFile,
};
use waring_core::octic::{normalization_check, run_octic14, SystemMode};
use waring_core::{GenError, Instance, PrimeField, Verdict, DEFAULT_PRIME};

const EXIT_INCONCLUSIVE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_EXHAUSTED: u8 = 3;

#[derive(Parser)]
#[command(name = "waring", version, about = "Certify identifiability of Waring decompositions over prime fields")]
struct Cli {
    /// Worker threads for subset enumeration (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run identifiability criteria on an instance file and write a report
    Check {
        path: PathBuf,
        #[arg(long, default_value = "full")]
        mode: SystemMode,
        #[arg(long, default_value = "all")]
        criteria: CriteriaSelection,
        /// Write the JSON report here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include per-criterion wall-clock timings (not part of the digest)
        #[arg(long)]
        timings: bool,
    },
    /// Generate a seeded octic instance with known ground truth
    Gen {
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "WARING_PRIME", default_value_t = DEFAULT_PRIME)]
        prime: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the Hilbert function and its first difference
    Hilbert {
        path: PathBuf,
        /// Largest degree to tabulate (default: one past stabilization)
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Print the degree-d Kruskal rank and the number of subsets examined
    Kruskal {
        path: PathBuf,
        #[arg(long)]
        d: u32,
    },
    /// Dump the Hilbert-Burch matrix, normalization matrix and linear system
    Syzygy {
        path: PathBuf,
        #[arg(long, default_value = "full")]
        mode: SystemMode,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Identifiable,
    Unidentifiable,
    /// Unidentifiable with a fully rational second decomposition (small primes)
    UnidentifiableSplit,
}

enum Failure {
    Input(anyhow::Error),
    Exhausted(anyhow::Error),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.into())
    }
}

fn load(path: &Path) -> Result<(Instance, Vec<u8>), Failure> {
    let (file, bytes) = InstanceFile::load(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Input)?;
    let inst = file
        .to_instance()
        .with_context(|| format!("in {}", path.display()))
        .map_err(Failure::Input)?;
    Ok((inst, bytes))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::Input),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check(
    path: &Path,
    mode: SystemMode,
    criteria: CriteriaSelection,
    out: Option<&Path>,
    timings: bool,
) -> Result<u8, Failure> {
    let (inst, bytes) = load(path)?;
    let outcome = run_check(&inst, criteria, mode);
    let report = ReportFile::new(&bytes, &inst, criteria, mode, outcome, timings);
    write_output(out, &report.to_pretty())?;
    if out.is_some() {
        println!("{}", report.verdict.short());
    }
    Ok(match report.verdict {
        Verdict::IdentifiableOfRank { .. } | Verdict::ComputesRank { .. } | Verdict::NotIdentifiable { .. } => 0,
        Verdict::Degenerate { .. } | Verdict::Inconclusive { .. } => EXIT_INCONCLUSIVE,
    })
}

fn gen(kind: GenKind, seed: u64, prime: u64, out: Option<&Path>) -> Result<u8, Failure> {
    let field = PrimeField::new(prime)
        .with_context(|| format!("--prime {prime}"))
        .map_err(Failure::Input)?;
    let (result, name): (Result<GeneratedInstance, GenError>, _) = match kind {
        GenKind::Identifiable => (gen_identifiable(seed, field), "identifiable"),
        GenKind::Unidentifiable => (gen_unidentifiable(seed, field), "unidentifiable"),
        GenKind::UnidentifiableSplit => (gen_unidentifiable_split(seed, field), "unidentifiable-split"),
    };
    let generated = result.map_err(|e| match e {
        GenError::ScanBudgetExceeded { .. } => Failure::Input(e.into()),
        other => Failure::Exhausted(other.into()),
    })?;
    let file = InstanceFile::from_generated(&generated, name);
    write_output(out, &file.to_canonical_string())?;
    Ok(0)
}

fn hilbert(path: &Path, max_degree: Option<u32>) -> Result<u8, Failure> {
    let (inst, _) = load(path)?;
    let points = inst.points();
    let j_max = max_degree.unwrap_or_else(|| {
        // h reaches the length by degree len - 1
        let stable = (0..points.len() as u32)
            .find(|&j| points.hilbert_value(j) == points.len())
            .unwrap_or(points.len() as u32);
        stable + 1
    });
    print!("{}", format_hilbert_table(&points.hilbert_profile(j_max)));
    Ok(0)
}

fn kruskal(path: &Path, d: u32) -> Result<u8, Failure> {
    let (inst, _) = load(path)?;
    print!("{}", format_kruskal(&inst.points().kruskal_rank(d)));
    Ok(0)
}

fn syzygy(path: &Path, mode: SystemMode) -> Result<u8, Failure> {
    let (inst, _) = load(path)?;
    match run_octic14(&inst, mode) {
        Ok((report, fam)) => {
            let normalization = normalization_check(&fam.base);
            print!("{}", format_syzygy_dump(&report, &fam, &normalization.matrix));
            Ok(0)
        }
        Err(e) => {
            eprintln!("waring: {e}");
            Ok(EXIT_INCONCLUSIVE)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("waring: --jobs: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    let result = match cli.command {
        Command::Check {
            path,
            mode,
            criteria,
            out,
            timings,
        } => check(&path, mode, criteria, out.as_deref(), timings),
        Command::Gen { kind, seed, prime, out } => gen(kind, seed, prime, out.as_deref()),
        Command::Hilbert { path, max_degree } => hilbert(&path, max_degree),
        Command::Kruskal { path, d } => kruskal(&path, d),
        Command::Syzygy { path, mode } => syzygy(&path, mode),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(e)) => {
            eprintln!("waring: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Exhausted(e)) => {
            eprintln!("waring: {e:#}");
            ExitCode::from(EXIT_EXHAUSTED)
        }
    }
}
