// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use mordell_core::discriminants::{enumerate_progression, write_newline_delimited};
use mordell_core::selmer::twist_record;
use mordell_core::stats::{nh_mean, scan_family, DirectSource, NhMean, Theorem2Report, TwistFamily};
use mordell_core::{class_group_summary, ClassGroupSummary, FamilyReport, ProgressionFamily, Sign, SummarySource};
use serde::Serialize;

use crate::cache::Cache;
use crate::output::{describe_summary, describe_twist, write_trace};
use crate::verify::{self, Level};

/// Rank bounds for quadratic twists of Mordell curves y² = x³ − A.
#[derive(Debug, Parser)]
#[command(name = "mordell", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Class number and 3-torsion of a fundamental discriminant.
    #[command(allow_negative_numbers = true)]
    Classgroup {
        delta: i64,
        #[arg(long)]
        json: bool,
    },
    /// Selmer dimension and rank bound of the twist y² = x³ − A·D³.
    #[command(allow_negative_numbers = true)]
    Twist {
        a: i64,
        d: i64,
        #[arg(long)]
        json: bool,
    },
    /// Scan the twist family of A below X and print its report as JSON.
    ///
    /// The CSV trace has the columns D,delta,h,h3_rank,selmer_dim,rank_bound.
    /// Rationals are printed as {"exact": "p/q", "approx": <12 significant digits>}.
    #[command(allow_negative_numbers = true)]
    Scan {
        a: i64,
        #[arg(long = "max-x")]
        max_x: u64,
        /// Largest k in the certified proportions.
        #[arg(long, default_value_t = 3)]
        k: u32,
        /// Worker threads; 0 picks one per core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Newline-delimited JSON cache of class group data.
        #[arg(long, env = "MORDELL_CACHE")]
        cache: Option<PathBuf>,
        /// Write the per-twist CSV trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run the oracle suites.
    Verify {
        #[arg(long, value_enum, default_value_t = Level::Quick)]
        level: Level,
        /// Audit this cache and quarantine bad entries.
        #[arg(long, env = "MORDELL_CACHE")]
        cache: Option<PathBuf>,
    },
    /// Stream fundamental discriminants Δ ≡ m mod N, 0 < |Δ| < X, one per line.
    #[command(allow_negative_numbers = true)]
    Enumerate {
        #[arg(long = "max-x")]
        max_x: u64,
        #[arg(long)]
        residue: i64,
        #[arg(long)]
        modulus: u64,
        #[arg(long, value_enum, default_value_t = SignArg::Negative)]
        sign: SignArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Negative,
    Positive,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Negative => Sign::Negative,
            SignArg::Positive => Sign::Positive,
        }
    }
}

/// Everything `scan` prints to stdout.
#[derive(Debug, Serialize)]
pub struct ScanOutput {
    pub report: FamilyReport,
    pub theorem2: Theorem2Report,
    pub nh_mean: NhMean,
}

pub fn run(cli: Cli) -> anyhow::Result<bool> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Classgroup { delta, json } => {
            let s = class_group_summary(delta)?;
            if json {
                serde_json::to_writer(&mut out, &s)?;
                writeln!(out)?;
            } else {
                writeln!(out, "{}", describe_summary(&s))?;
            }
        }
        Command::Twist { a, d, json } => {
            let r = twist_record(a, d)?;
            if json {
                serde_json::to_writer(&mut out, &r)?;
                writeln!(out)?;
            } else {
                writeln!(out, "{}", describe_twist(&r))?;
            }
        }
        Command::Scan { a, max_x, k, jobs, cache, trace } => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
            let cache = cache.map(Cache::open).transpose()?;
            let output = pool.install(|| match &cache {
                Some(c) => scan(a, max_x, k, c),
                None => scan(a, max_x, k, &DirectSource),
            })?;
            if let Some(c) = &cache {
                let appended = c.flush()?;
                let st = c.stats();
                eprintln!("cache: {} loaded, {} hits, {} misses, {appended} appended", st.loaded, st.hits, st.misses);
            }
            if let Some(path) = trace {
                let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                let mut w = BufWriter::new(f);
                write_trace(&mut w, &output.1)?;
                w.flush()?;
            }
            serde_json::to_writer_pretty(&mut out, &output.0)?;
            writeln!(out)?;
        }
        Command::Verify { level, cache } => {
            let results = verify::run(level, cache.as_deref())?;
            for r in &results {
                writeln!(out, "{r}")?;
            }
            let failed: Vec<&str> = results.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
            if failed.is_empty() {
                writeln!(out, "all {} suites passed", results.len())?;
            } else {
                writeln!(out, "failed: {}", failed.join(", "))?;
                return Ok(false);
            }
        }
        Command::Enumerate { max_x, residue, modulus, sign } => {
            let family = ProgressionFamily::new(max_x, residue, modulus, sign.into())?;
            let mut w = BufWriter::new(out);
            write_newline_delimited(&mut w, enumerate_progression(&family))?;
            w.flush()?;
        }
    }
    Ok(true)
}

type ScanRows = Vec<mordell_core::stats::ScanRow>;

fn scan<S: SummarySource>(a: i64, x: u64, k: u32, source: &S) -> anyhow::Result<(ScanOutput, ScanRows)> {
    let scan = scan_family(a, x, k, source)?;
    let theorem2 = Theorem2Report::from_scan(&scan)?;
    let family = TwistFamily::new(a, x)?;
    let seen = Scanned { rows: scan.rows.iter().map(|r| (r.summary.delta, r.summary)).collect(), fallback: source };
    let nh = nh_mean(&family.discriminant_family(), &seen)?;
    Ok((ScanOutput { report: scan.report, theorem2, nh_mean: nh }, scan.rows))
}

/// Summaries already produced by the scan, so the second pass is free.
struct Scanned<'a, S> {
    rows: HashMap<i64, ClassGroupSummary>,
    fallback: &'a S,
}

impl<S: SummarySource> SummarySource for Scanned<'_, S> {
    fn summary(&self, delta: i64) -> mordell_core::Result<ClassGroupSummary> {
        match self.rows.get(&delta) {
            Some(s) => Ok(*s),
            None => self.fallback.summary(delta),
        }
    }
}
