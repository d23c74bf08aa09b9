//! `jpeg-rdh` command line.
//!
//! Exit codes: 0 success, 1 usage or other error, 2 payload exceeds
//! capacity, 3 input is not a supported JPEG, 4 no valid embedded record.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cost::frequency_cost_table;
use crate::embed::{bits_to_bytes, bytes_to_bits, extract, max_payload, EmbedOptions, Strategy};
use crate::error::Error;
use crate::jpeg::tables::estimate_quality;
use crate::jpeg::{parse_jpeg, serialize_jpeg, CoefficientImage};
use crate::report::{embed_and_measure, AnalysisReport, SCHEMA_VERSION};
use crate::select::HouOrder;
use crate::transform::{decompress, PixelImage};

#[derive(Debug, Parser)]
#[command(
    name = "jpeg-rdh",
    version,
    about = "Reversible data hiding in baseline JPEG files"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hide a payload file in a cover JPEG.
    Embed(EmbedArgs),
    /// Recover the payload and the original JPEG from a stego file.
    Extract(ExtractArgs),
    /// Sweep payload sizes and strategies over covers and report the results.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[arg(long)]
    pub cover: PathBuf,
    /// Binary file, read as bits, most significant bit first.
    #[arg(long)]
    pub payload: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = Strategy::MultiObjective)]
    pub strategy: Strategy,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = HouOrder::Descending)]
    pub hou_order: HouOrder,
    /// Write a JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Uncompressed original (binary PGM) for a second PSNR figure.
    #[arg(long)]
    pub original: Option<PathBuf>,
    /// Write the decompressed stego luminance as a binary PGM.
    #[arg(long)]
    pub dump_pgm: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long)]
    pub stego: PathBuf,
    #[arg(long)]
    pub payload_out: PathBuf,
    /// Write the restored cover JPEG here.
    #[arg(long)]
    pub restored: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long, required = true)]
    pub cover: Vec<PathBuf>,
    /// Payload sizes in bits; random payloads are generated from `--seed`.
    #[arg(long, required = true)]
    pub payload_bits: Vec<u64>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Strategy::MultiObjective, Strategy::Huang, Strategy::Hou])]
    pub strategies: Vec<Strategy>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = HouOrder::Descending)]
    pub hou_order: HouOrder,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON document here instead of standard output.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Covers processed in parallel.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

/// Maps an error to the documented exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InsufficientCapacity { .. } | Error::InsufficientAuxCapacity { .. } => 2,
        Error::UnsupportedFormat(_) | Error::CorruptStream(_) | Error::MissingTable(_) => 3,
        Error::AuxDecode(_) | Error::TruncatedStego => 4,
        _ => 1,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Embed(a) => cmd_embed(&a),
        Command::Extract(a) => cmd_extract(&a),
        Command::Analyze(a) => cmd_analyze(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn read_cover(path: &Path) -> Result<CoefficientImage, Error> {
    parse_jpeg(&std::fs::read(path)?)
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), Error> {
    let text =
        serde_json::to_string_pretty(value).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

pub fn cmd_embed(a: &EmbedArgs) -> Result<i32, Error> {
    let cover = read_cover(&a.cover)?;
    let payload = bytes_to_bits(&std::fs::read(&a.payload)?);
    let original = a.original.as_ref().map(PixelImage::read_pgm).transpose()?;
    let options = EmbedOptions {
        strategy: a.strategy,
        alpha: a.alpha,
        hou_order: a.hou_order,
    };
    let measured = embed_and_measure(
        &a.cover.to_string_lossy(),
        &cover,
        &payload,
        &options,
        original.as_ref(),
    )?;
    std::fs::write(&a.output, &measured.stego_bytes)?;
    if let Some(path) = &a.report {
        write_json(path, &measured.report)?;
    }
    if let Some(path) = &a.dump_pgm {
        decompress(&measured.outcome.stego).write_pgm(path)?;
    }
    let r = &measured.report;
    println!(
        "embedded {} bits ({} blocks), PSNR {}, scan bits {:+} ({:+.3}%)",
        r.payload_bits,
        r.selected_count,
        r.psnr_db.map_or("inf".to_owned(), |p| format!("{p:.2} dB")),
        r.increase_bits,
        r.increase_percent
    );
    Ok(0)
}

pub fn cmd_extract(a: &ExtractArgs) -> Result<i32, Error> {
    let stego = read_cover(&a.stego)?;
    let (bits, restored) = extract(&stego)?;
    if bits.len() % 8 != 0 {
        eprintln!(
            "warning: payload is {} bits, last byte zero-padded",
            bits.len()
        );
    }
    std::fs::write(&a.payload_out, bits_to_bytes(&bits))?;
    if let Some(path) = &a.restored {
        std::fs::write(path, serialize_jpeg(&restored)?)?;
    }
    println!("extracted {} bits", bits.len());
    Ok(0)
}

/// Deterministic pseudo-random payload.
pub fn random_payload(bits: u64, seed: u64) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..bits).map(|_| rng.gen::<bool>()).collect()
}

/// One analyze entry: a report or the reason the run failed.
#[derive(Debug, Serialize)]
pub struct AnalyzeEntry {
    pub cover_path: String,
    pub payload_bits: u64,
    pub strategy: &'static str,
    #[serde(flatten)]
    pub report: Option<AnalysisReport>,
    pub error: Option<String>,
}

/// Per-cover summary with the one-unit cost of each frequency.
#[derive(Debug, Serialize)]
pub struct CoverSummary {
    pub cover_path: String,
    pub qf_estimate: u8,
    pub capacity_bits: u64,
    /// `frequency_costs[u][v]`: mean squared pixel change of a unit change at (u, v).
    pub frequency_costs: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeDocument {
    pub schema: u32,
    pub covers: Vec<CoverSummary>,
    pub reports: Vec<AnalyzeEntry>,
}

fn analyze_cover(
    a: &AnalyzeArgs,
    path: &Path,
) -> Result<(CoverSummary, Vec<AnalyzeEntry>, bool), Error> {
    let cover = read_cover(path)?;
    let name = path.to_string_lossy().into_owned();
    let table = frequency_cost_table(cover.luma_quant());
    let summary = CoverSummary {
        cover_path: name.clone(),
        qf_estimate: estimate_quality(cover.luma_quant()),
        capacity_bits: max_payload(
            &cover,
            &EmbedOptions {
                alpha: a.alpha,
                hou_order: a.hou_order,
                ..EmbedOptions::default()
            },
        )?,
        frequency_costs: table.chunks(8).map(<[f64]>::to_vec).collect(),
    };
    let mut entries = Vec::new();
    let mut over_capacity = false;
    for &bits in &a.payload_bits {
        let payload = random_payload(bits, a.seed);
        for &strategy in &a.strategies {
            let options = EmbedOptions {
                strategy,
                alpha: a.alpha,
                hou_order: a.hou_order,
            };
            let (report, error) = match embed_and_measure(&name, &cover, &payload, &options, None) {
                Ok(m) => (Some(m.report), None),
                Err(e) => {
                    over_capacity |= exit_code(&e) == 2;
                    (None, Some(e.to_string()))
                }
            };
            entries.push(AnalyzeEntry {
                cover_path: name.clone(),
                payload_bits: bits,
                strategy: strategy.name(),
                report,
                error,
            });
        }
    }
    Ok((summary, entries, over_capacity))
}

pub fn cmd_analyze(a: &AnalyzeArgs) -> Result<i32, Error> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.max(1))
        .build()
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    let results: Vec<_> =
        pool.install(|| a.cover.par_iter().map(|p| analyze_cover(a, p)).collect());

    let mut doc = AnalyzeDocument {
        schema: SCHEMA_VERSION,
        covers: Vec::new(),
        reports: Vec::new(),
    };
    let mut over_capacity = false;
    for result in results {
        let (summary, entries, over) = result?;
        doc.covers.push(summary);
        doc.reports.extend(entries);
        over_capacity |= over;
    }
    match &a.json {
        Some(path) => write_json(path, &doc)?,
        None => println!(
            "{}",
            serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(std::io::Error::other(e)))?
        ),
    }
    Ok(if over_capacity { 2 } else { 0 })
}
