//! `toricode`: classify small lattice polygons and search their codes.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use toricode::engine::{classify, EngineConfig};
use toricode::format;
use toricode::reproduce::{self, format_champion, format_table};
use toricode::survey::{run_survey, write_survey_csv, BudgetOptions, DistanceMode, SurveyJob};
use toricode_core::classify::box_stats;
use toricode_core::gf::Field;
use toricode_core::ldp::{all_embeddings, gorenstein_index, is_ldp, minimum_box};
use toricode_core::polygon::format_polygon;

#[derive(Parser)]
#[command(name = "toricode", version, about = "Lattice polygon classification and toric code search")]
struct Cli {
    /// Worker threads for parallel stages (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    /// Seed for sampled diagnostics.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct BudgetArgs {
    /// Message-class cap for exhaustive distance computations.
    #[arg(long, default_value_t = 1u64 << 27)]
    budget_messages: u64,

    /// Enumeration cap for the systematic-form search (deterministic).
    #[arg(long, default_value_t = u64::MAX)]
    budget_steps: u64,

    /// Wall-clock cap in seconds for the systematic-form search.
    #[arg(long)]
    budget_secs: Option<u64>,
}

impl BudgetArgs {
    fn options(&self) -> BudgetOptions {
        BudgetOptions {
            exact_messages: self.budget_messages,
            bz_steps: self.budget_steps,
            bz_seconds: self.budget_secs,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify all polygons in the box [0,m]² up to equivalence.
    Classify {
        #[arg(long = "box")]
        box_size: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Spill pending work to this directory (enables --resume).
        #[arg(long)]
        spill: Option<PathBuf>,
        #[arg(long)]
        resume: bool,
        /// In-memory class budget when not spilling.
        #[arg(long, default_value_t = 8_000_000)]
        max_classes: usize,
        /// Progress lines on stderr.
        #[arg(long)]
        progress: bool,
    },
    /// Per-box statistics of a polygon file (grouped by minimum box).
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimum bounding square per polygon.
    Minbox {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also list every embedding into the target box.
        #[arg(long)]
        emit_embeddings: bool,
        /// Box size for --emit-embeddings (defaults to each minimum).
        #[arg(long = "box")]
        box_size: Option<u32>,
    },
    /// Interior-origin/primitive-vertex check, index and minimum box.
    Ldp {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generator matrices over F_q.
    Code {
        #[arg(long)]
        q: u16,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Dump each matrix (header q,n,k then k rows of n codes).
        #[arg(long)]
        dump_matrix: bool,
        /// Re-embed each polygon into its minimum box first.
        #[arg(long)]
        minbox: bool,
    },
    /// Minimum distances over F_q.
    Mindist {
        #[arg(long)]
        q: u16,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = ["exact", "bz"], default_value = "bz")]
        mode: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        minbox: bool,
        #[arg(long)]
        resume: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Row-combination upper bounds d_b over F_q.
    Dbound {
        #[arg(long)]
        q: u16,
        #[arg(long = "in")]
        input: PathBuf,
        /// Support-size budget r.
        #[arg(long, default_value_t = 4)]
        rows: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        minbox: bool,
        #[arg(long)]
        resume: bool,
    },
    /// Batch survey: minimum box, minimal field, distance data, per-k table.
    Survey {
        /// Polygon file to survey (alternative to --box).
        #[arg(long = "in", conflicts_with = "box_size")]
        input: Option<PathBuf>,
        /// Survey a fresh classification of this box instead of a file.
        #[arg(long = "box")]
        box_size: Option<u32>,
        /// Restrict to polygons whose minimal field is in this list.
        #[arg(long, value_delimiter = ',')]
        q: Option<Vec<u16>>,
        #[arg(long, value_parser = ["bound", "exact", "bz", "disqualify"], default_value = "bound")]
        mode: String,
        /// Support-size budget for --mode bound / disqualify.
        #[arg(long, default_value_t = 4)]
        rows: u32,
        /// Best-known distance table (CSV q,n,k,d).
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        resume: bool,
        /// Random subsample of this many polygons (seeded).
        #[arg(long)]
        sample: Option<usize>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Rebuild the headline results.
    Reproduce {
        #[command(subcommand)]
        what: ReproduceWhat,
    },
}

#[derive(Subcommand)]
enum ReproduceWhat {
    /// The classification counts for boxes up to --max-m.
    Table1 {
        #[arg(long, default_value_t = 5)]
        max_m: u32,
        #[arg(long)]
        spill: Option<PathBuf>,
        #[arg(long)]
        resume: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        progress: bool,
    },
    /// The [36,19,12] code over F_7.
    Champion {
        #[arg(long)]
        out: Option<PathBuf>,
        /// Scan checkpoint file (enables --resume).
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        resume: bool,
        #[arg(long)]
        progress: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

/// True result means "partial output" (exit code 2).
fn run(cli: Cli) -> Result<bool> {
    let workers = cli.workers;
    match cli.command {
        Command::Classify { box_size, out, spill, resume, max_classes, progress } => {
            let cfg = EngineConfig {
                m: box_size,
                workers,
                spill,
                max_in_memory: max_classes,
                resume,
                progress,
            };
            let run = classify(&cfg)?;
            let mut w = format::output(out.as_deref())?;
            format::write_polygons(&mut w, run.classes.iter().map(|e| &e.representative))?;
            writeln!(w, "# stats")?;
            writeln!(w, "# m,count,max_vertices,count_max")?;
            for m in 1..=box_size {
                let s = box_stats(&run, m);
                writeln!(w, "# {},{},{},{}", s.m, s.count_exact, s.max_vertices, s.count_max_vertex)?;
            }
            Ok(false)
        }
        Command::Stats { input, out } => {
            let polygons = format::parse_polygon_file(&input)?;
            let mut per_m = std::collections::BTreeMap::<u32, Vec<u32>>::new();
            for (_, p) in &polygons {
                let min = minimum_box(p);
                per_m.entry(min.m).or_default().push(p.vertex_count() as u32);
            }
            let mut w = format::output(out.as_deref())?;
            writeln!(w, "m,count,max_vertices,count_max")?;
            for (m, verts) in per_m {
                let maxv = verts.iter().copied().max().unwrap_or(0);
                let nmax = verts.iter().filter(|&&v| v == maxv).count();
                writeln!(w, "{},{},{},{}", m, verts.len(), maxv, nmax)?;
            }
            Ok(false)
        }
        Command::Minbox { input, out, emit_embeddings, box_size } => {
            let polygons = format::parse_polygon_file(&input)?;
            let mut w = format::output(out.as_deref())?;
            writeln!(w, "id,min_m")?;
            for (id, p) in &polygons {
                let min = minimum_box(p);
                writeln!(w, "{id},{}", min.m)?;
                if emit_embeddings {
                    let target = box_size.unwrap_or(min.m);
                    match all_embeddings(p, target) {
                        Ok(embeddings) => {
                            for e in &embeddings {
                                writeln!(w, "{}", format_polygon(e))?;
                            }
                        }
                        Err(e) => writeln!(w, "# polygon {id}: {e}")?,
                    }
                }
            }
            Ok(false)
        }
        Command::Ldp { input, out } => {
            let polygons = format::parse_polygon_file(&input)?;
            let mut w = format::output(out.as_deref())?;
            writeln!(w, "id,is_ldp,index,min_m")?;
            for (id, p) in &polygons {
                let ldp = is_ldp(p);
                let index = if ldp {
                    gorenstein_index(p).map(|l| l.to_string()).unwrap_or_default()
                } else {
                    String::new()
                };
                writeln!(w, "{id},{ldp},{index},{}", minimum_box(p).m)?;
            }
            Ok(false)
        }
        Command::Code { q, input, out, dump_matrix, minbox } => {
            let polygons = format::parse_polygon_file(&input)?;
            let field = Field::new(q)?;
            let mut w = format::output(out.as_deref())?;
            let mut partial = false;
            writeln!(w, "id,q,n,k")?;
            for (id, p) in &polygons {
                let placed =
                    if minbox { minimum_box(p).embeddings[0].1.clone() } else { p.clone() };
                match toricode_core::code::generator_matrix(&placed, &field) {
                    Ok(g) => {
                        writeln!(w, "{id},{q},{},{}", g.n(), g.k())?;
                        if dump_matrix {
                            format::write_matrix(&mut w, &g)?;
                        }
                    }
                    Err(e) => {
                        writeln!(w, "# polygon {id}: {e}")?;
                        partial = true;
                    }
                }
            }
            Ok(partial)
        }
        Command::Mindist { q, input, mode, out, minbox, resume, budget } => {
            let polygons = format::parse_polygon_file(&input)?;
            let mode = match mode.as_str() {
                "exact" => DistanceMode::Exact,
                _ => DistanceMode::Bz,
            };
            let job = SurveyJob {
                fixed_q: Some(q),
                reembed: minbox,
                budget: budget.options(),
                checkpoint: out.as_ref().map(|p| p.with_extension("progress")),
                resume,
                ..SurveyJob::new(polygons, mode)
            };
            survey_to_csv(&job, out)
        }
        Command::Dbound { q, input, rows, out, minbox, resume } => {
            let polygons = format::parse_polygon_file(&input)?;
            let job = SurveyJob {
                fixed_q: Some(q),
                reembed: minbox,
                checkpoint: out.as_ref().map(|p| p.with_extension("progress")),
                resume,
                ..SurveyJob::new(polygons, DistanceMode::Bound(rows))
            };
            survey_to_csv(&job, out)
        }
        Command::Survey { input, box_size, q, mode, rows, table, out, resume, sample, budget } => {
            let mut polygons = match (&input, box_size) {
                (Some(path), _) => format::parse_polygon_file(path)?,
                (None, Some(m)) => {
                    let run = classify(&EngineConfig { m, workers, ..EngineConfig::default() })?;
                    run.classes
                        .iter()
                        .enumerate()
                        .map(|(i, e)| ((i + 1).to_string(), e.representative.clone()))
                        .collect()
                }
                (None, None) => bail!("survey needs --in FILE or --box M"),
            };
            if let Some(n) = sample {
                // Seeded partial Fisher-Yates, then input order restored.
                let mut rng = toricode::rng::SplitMix64::new(cli.seed);
                let total = polygons.len();
                for i in 0..n.min(total) {
                    let j = i + rng.below((total - i) as u64) as usize;
                    polygons.swap(i, j);
                }
                polygons.truncate(n);
                polygons.sort_by_key(|(id, _)| id.parse::<u64>().unwrap_or(u64::MAX));
            }
            let mode = match mode.as_str() {
                "exact" => DistanceMode::Exact,
                "bz" => DistanceMode::Bz,
                "disqualify" => DistanceMode::Disqualify(rows),
                _ => DistanceMode::Bound(rows),
            };
            let table = table
                .as_deref()
                .map(format::load_distance_table)
                .transpose()
                .context("load distance table")?;
            if matches!(mode, DistanceMode::Disqualify(_)) && table.is_none() {
                bail!("--mode disqualify needs --table");
            }
            let job = SurveyJob {
                qs: q,
                budget: budget.options(),
                table,
                checkpoint: out.as_ref().map(|p| p.with_extension("progress")),
                resume,
                ..SurveyJob::new(polygons, mode)
            };
            survey_to_csv(&job, out)
        }
        Command::Reproduce { what } => match what {
            ReproduceWhat::Table1 { max_m, spill, resume, out, progress } => {
                let cfg = EngineConfig {
                    m: max_m,
                    workers,
                    spill,
                    resume,
                    progress,
                    ..EngineConfig::default()
                };
                let report = reproduce::reproduce_table(max_m, &cfg)?;
                let mut w = format::output(out.as_deref())?;
                write!(w, "{}", format_table(&report))?;
                Ok(!report.all_match)
            }
            ReproduceWhat::Champion { out, checkpoint, resume, progress, budget } => {
                let cfg = EngineConfig { workers, ..EngineConfig::default() };
                let report = reproduce::reproduce_champion(
                    &cfg,
                    &budget.options(),
                    checkpoint,
                    resume,
                    progress,
                )?;
                let mut w = format::output(out.as_deref())?;
                write!(w, "{}", format_champion(&report)?)?;
                let certified = report.champions.len() == 1
                    && report.champion_is_ldp
                    && report.champion_origin_2_2;
                Ok(!certified)
            }
        },
    }
}

fn survey_to_csv(job: &SurveyJob, out: Option<PathBuf>) -> Result<bool> {
    let result = run_survey(job)?;
    let mut w = format::output(out.as_deref())?;
    write_survey_csv(&mut w, &result)?;
    Ok(result.partial)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
