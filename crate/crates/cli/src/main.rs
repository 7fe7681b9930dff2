//! `tess`: generate tessellation patches, check their face-distance
//! geometry, certify compactly supported eigenfunctions of elliptic
//! operators, and draw patches as SVG.
//!
//! Exit codes: 0 success, 1 property or expectation failure, 2 bad flags,
//! bad input, or insufficient patch radius.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Failure;

#[derive(Parser, Debug)]
#[command(name = "tess", version, about = "Plane tessellation patches: geometry checks and eigenfunction certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a generated patch in the `tess 1` text format.
    ///
    /// Face, vertex and complete-vertex counts go to stderr.
    Generate {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Check a patch against the tessellation conditions.
    ///
    /// TSV: `key<TAB>value` rows (faces, vertices, complete_vertices,
    /// violations, curvature) followed by one `violation<TAB>text` row per
    /// problem. JSONL: a single object with the same keys.
    Validate(Common),
    /// Run the distance-ball property suite for k = 0..=kmax.
    ///
    /// TSV: a `# curvature` comment, then columns
    /// `k admissible tube cut_locus sphere_edge alternation belabel notes` with
    /// PASS/FAIL cells. JSONL: one object per k. Patches with positive
    /// curvature are checked in advisory mode and always exit 0.
    VerifyGeometry {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        kmax: usize,
    },
    /// Exact search for eigenfunctions supported in the given sets.
    ///
    /// TSV: columns `seed support size certificate`, one row per (seed,
    /// support), then `# total=N found=F notfound=M`. JSONL: one object per
    /// row and a final summary object. Certificates read
    /// `NOTFOUND dims=d1,...` or `FOUND lambda=<num/den | minpoly:c0,...>
    /// u=<vid>:<value>,... dims=...`.
    Cse {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        operator: OperatorArgs,
        /// `ball:<vid>:<r>`, `list:<vid>,<vid>,...` or `face:<fid>`; repeatable.
        #[arg(long, required = true, value_parser = parse_support)]
        support: Vec<SupportSpec>,
        #[arg(long)]
        expect: Option<Expect>,
    },
    /// Outside-in vanishing trace for a symbolic eigenfunction.
    ///
    /// TSV: `layer k boundary eliminated stalled` rows, each followed by
    /// `elim k vertex equation_at coefficient rule` rows, then
    /// `result success` or `result failure <reason>`. Exit 1 on failure.
    UcTrace {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        operator: OperatorArgs,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
    },
    /// Ball and sphere sizes with mean face Euler characteristic.
    ///
    /// TSV columns: `k ball sphere mean_chi ratio`, where ratio is
    /// |B_{k+1}|/|B_k|. All rationals are printed as num/den.
    Growth {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        kmax: usize,
    },
    /// Draw a disc patch with a barycentric layout, faces coloured by the
    /// sign of their Euler characteristic.
    Render(Common),
}

/// Where the patch comes from.
#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Patch file in the `tess 1` format.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["regular", "kagome"])]
    pub input: Option<PathBuf>,
    /// Regular tiling with p-gons, q at each vertex.
    #[arg(long, num_args = 2, value_names = ["P", "Q"], conflicts_with = "kagome")]
    pub regular: Option<Vec<usize>>,
    /// Trihexagonal (3.6.3.6) tiling.
    #[arg(long)]
    pub kagome: bool,
    /// Generated patches contain the closed face ball of this radius.
    #[arg(long)]
    pub radius: Option<usize>,
    /// Base face f0; defaults to the generator's base face or the smallest id.
    #[arg(long, value_name = "FID")]
    pub face: Option<u32>,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug, Clone)]
pub struct OperatorArgs {
    #[arg(long, value_enum, default_value_t = OperatorKind::Random)]
    pub operator: OperatorKind,
    /// Seeds for random operators.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub seed: Vec<u64>,
    /// Random entries are n/d with |n|, d at most this.
    #[arg(long, default_value_t = 4)]
    pub magnitude: u32,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Tsv,
    Jsonl,
    Svg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Random,
    Adjacency,
    Laplacian,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expect {
    None,
    Some,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupportSpec {
    Ball { center: u32, r: usize },
    List(Vec<u32>),
    Face(u32),
}

impl std::fmt::Display for SupportSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SupportSpec::Ball { center, r } => write!(f, "ball:{center}:{r}"),
            SupportSpec::List(ids) => {
                let ids: Vec<String> = ids.iter().map(u32::to_string).collect();
                write!(f, "list:{}", ids.join(","))
            }
            SupportSpec::Face(fid) => write!(f, "face:{fid}"),
        }
    }
}

fn parse_support(s: &str) -> Result<SupportSpec, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("bad id {t:?} in support {s:?}"));
    if let Some(rest) = s.strip_prefix("ball:") {
        let (c, r) = rest.split_once(':').ok_or_else(|| format!("expected ball:<vid>:<r>, got {s:?}"))?;
        let r = r.parse().map_err(|_| format!("bad radius {r:?}"))?;
        Ok(SupportSpec::Ball { center: num(c)?, r })
    } else if let Some(rest) = s.strip_prefix("list:") {
        rest.split(',').filter(|t| !t.is_empty()).map(num).collect::<Result<_, _>>().map(SupportSpec::List)
    } else if let Some(rest) = s.strip_prefix("face:") {
        Ok(SupportSpec::Face(num(rest)?))
    } else {
        Err(format!("expected ball:<vid>:<r>, list:<ids> or face:<fid>, got {s:?}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let (result, output) = match &cli.command {
        Command::Generate { source, output } => (commands::generate(source, &mut out), output),
        Command::Validate(c) => (commands::validate(c, &mut out), &c.output),
        Command::VerifyGeometry { common, kmax } => {
            (commands::verify_geometry(common, *kmax, &mut out), &common.output)
        }
        Command::Cse { common, operator, support, expect } => {
            (commands::cse(common, operator, support, *expect, &mut out), &common.output)
        }
        Command::UcTrace { common, operator, kmax } => {
            (commands::uc_trace(common, operator, *kmax, &mut out), &common.output)
        }
        Command::Growth { common, kmax } => (commands::growth(common, *kmax, &mut out), &common.output),
        Command::Render(c) => (commands::render(c, &mut out), &c.output),
    };

    if !out.is_empty() {
        let written = match output {
            Some(path) => std::fs::write(path, &out).map_err(|e| format!("cannot write {}: {e}", path.display())),
            None => {
                use std::io::Write;
                std::io::stdout().write_all(out.as_bytes()).map_err(|e| e.to_string())
            }
        };
        if let Err(msg) = written {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
