//! Command-line front end.

use std::fs;
use std::io::{self, BufRead, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::json;

use crate::choose::Rate;
use crate::config::{BackendKind, Config};
use crate::dataset::{self, GenerateOptions, PairRecord, Report};
use crate::engine::{Level, Variant};
use crate::error::{Error, Result};
use crate::hangul::{compose_conjoining, segment};
use crate::metrics::{self, Provenance};
use crate::rules::iconological::{Angle, GlyphLevel};
use crate::rules::phonological::LiaisonDirection;
use crate::rules::pragmatic::SymbolPool;

pub const EXIT_OTHER: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FILE: i32 = 3;
pub const EXIT_CONFIG: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "hangul-obfus", version, about = "Korean text obfuscation toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the three-level paired dataset from a source corpus.
    Generate(GenerateArgs),
    /// Apply one rule to each line of a file or stdin.
    Apply(ApplyArgs),
    /// Print statistics for a generated dataset directory.
    Stats {
        #[arg(long)]
        dataset: PathBuf,
    },
    /// chrF between parallel hypothesis and reference files.
    Score {
        #[arg(long)]
        hyp: PathBuf,
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long, default_value_t = metrics::DEFAULT_MAX_N)]
        max_n: usize,
        #[arg(long, default_value_t = metrics::DEFAULT_BETA)]
        beta: f64,
    },
    /// Undo recorded passes for records generated with provenance.
    Invert {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// TOML config; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Override a rule rate, `id=rate`; repeatable.
    #[arg(long = "rate-override", value_name = "ID=RATE")]
    pub rate_override: Vec<String>,
    #[arg(long, value_name = "offline|remote|replay")]
    pub translit_backend: Option<BackendKind>,
    /// Comma-separated symbols; a pair is written `open close`.
    #[arg(long)]
    pub symbol_pool: Option<String>,
    #[arg(long)]
    pub dict_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Comma-separated subset of easy,normal,hard.
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<Level>>,
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Keep per-pass edits in each record so they can be inverted.
    #[arg(long)]
    pub with_provenance: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct ApplyArgs {
    #[arg(long)]
    pub rule: u8,
    /// Text file; stdin when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub direction: Option<LiaisonDirection>,
    #[arg(long)]
    pub angle: Option<Angle>,
    /// Glyph level for rule 10: character or subsyllabic.
    #[arg(long)]
    pub level: Option<GlyphLevel>,
    /// Rate for this run instead of the rule's default.
    #[arg(long)]
    pub rate: Option<f64>,
    /// Print a JSON object with edits per line instead of plain text.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::UnknownRule(_) => EXIT_USAGE,
        Error::Io(_) | Error::Parse { .. } | Error::EmptyCorpus => EXIT_FILE,
        Error::Config(_) => EXIT_CONFIG,
        _ => EXIT_OTHER,
    }
}

fn report_error(e: &Error) -> i32 {
    let line = json!({ "error": e.kind(), "message": e.to_string() });
    let _ = writeln!(io::stderr(), "{line}");
    exit_code(e)
}

/// Parses arguments and runs; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            let line = json!({ "error": "usage", "message": e.to_string().trim() });
            let _ = writeln!(io::stderr(), "{line}");
            return EXIT_USAGE;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => report_error(&e),
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(a) => generate(a),
        Command::Apply(a) => apply(a),
        Command::Stats { dataset } => {
            let records = dataset::read_dataset(&dataset)?;
            print_json(&dataset::stats(&records))
        }
        Command::Score { hyp, reference, max_n, beta } => score(&hyp, &reference, max_n, beta),
        Command::Invert { input } => invert(&input),
    }
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    out.write_all(b"\n")?;
    Ok(())
}

fn config_from(common: &CommonArgs) -> Result<Config> {
    let mut c = match &common.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(s) = common.seed {
        c.seed = s;
    }
    for spec in &common.rate_override {
        c.set_rate_override(spec)?;
    }
    if let Some(b) = common.translit_backend {
        c.translit.backend = b;
    }
    if let Some(p) = &common.symbol_pool {
        c.symbol_pool = SymbolPool::parse_list(p)?;
    }
    if let Some(d) = &common.dict_dir {
        c.dict_dir = Some(d.clone());
    }
    Ok(c)
}

fn generate(a: GenerateArgs) -> Result<()> {
    let mut cfg = config_from(&a.common)?;
    if let Some(l) = a.levels {
        cfg.levels = l;
    }
    if let Some(j) = a.jobs {
        cfg.jobs = j;
    }
    cfg.with_provenance |= a.with_provenance;
    cfg.validate()?;
    let ob = cfg.obfuscator()?;
    let (pairs, source) = dataset::load_source(&a.input)?;
    let opts = GenerateOptions {
        seed: cfg.seed,
        levels: cfg.levels.clone(),
        jobs: cfg.jobs,
        with_provenance: cfg.with_provenance,
    };
    let mut generated = dataset::build_dataset(&pairs, &ob, &opts)?;
    dataset::assign_splits(&mut generated.records, cfg.seed);
    let report = Report {
        seed: cfg.seed,
        config_digest: cfg.digest(),
        source,
        incomplete: generated.incomplete,
        stats: dataset::stats(&generated.records),
    };
    fs::create_dir_all(&a.out_dir)?;
    dataset::write_dataset(&a.out_dir, &generated.records, &report)?;
    print_json(&report)
}

fn read_input(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) => Ok(fs::read_to_string(p)?),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn apply(a: ApplyArgs) -> Result<()> {
    let cfg = config_from(&a.common)?;
    let ob = cfg.obfuscator()?;
    let mut rule = ob.rule(a.rule)?;
    if let Some(r) = a.rate {
        rule = rule.with_tau(Rate::new(r)?);
    }
    let variant = Variant { direction: a.direction, angle: a.angle, level: a.level };
    let text = read_input(&a.input)?;
    let mut out = io::stdout().lock();
    for (i, line) in text.lines().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(i as u64);
        let rewrite = ob.apply(&segment(&compose_conjoining(line)), rule, variant, &mut rng)?;
        if a.json {
            let v = json!({
                "input": line,
                "output": rewrite.render(),
                "rule": rule.id,
                "eligible": rewrite.eligible,
                "sites": rewrite.sites,
                "edits": rewrite.edits,
            });
            writeln!(out, "{v}")?;
        } else {
            writeln!(out, "{}", rewrite.render())?;
        }
    }
    Ok(())
}

fn read_lines(p: &Path) -> Result<Vec<String>> {
    Ok(io::BufReader::new(fs::File::open(p)?).lines().collect::<io::Result<_>>()?)
}

fn score(hyp: &Path, reference: &Path, max_n: usize, beta: f64) -> Result<()> {
    if max_n == 0 || beta.is_nan() || beta <= 0.0 {
        return Err(Error::InvalidArgument("max-n and beta must be positive".into()));
    }
    let h = read_lines(hyp)?;
    let r = read_lines(reference)?;
    let s = metrics::corpus_chrf(&h, &r, max_n, beta)?;
    print_json(&json!({
        "max_n": max_n,
        "beta": beta,
        "corpus": {
            "chrf": s.chrf,
            "mean_sentence_chrf": s.mean_sentence_chrf,
            "bertscore": s.bertscore,
            "perspective": s.perspective,
        },
        "lines": s.sentences,
    }))
}

/// Either a generated record with provenance, or a bare text with steps.
#[derive(Deserialize)]
#[serde(untagged)]
enum InvertLine {
    Record(PairRecord),
    Text { text: String, steps: Vec<Provenance> },
}

fn invert(input: &Path) -> Result<()> {
    let mut out = io::stdout().lock();
    for (i, line) in read_lines(input)?.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: InvertLine = serde_json::from_str(line).map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        let v = match parsed {
            InvertLine::Record(r) => {
                let steps = r.provenance.ok_or_else(|| Error::Parse {
                    line: i + 1,
                    message: "record has no provenance".into(),
                })?;
                json!({
                    "pair_id": r.pair_id,
                    "level": r.level,
                    "neutral": metrics::invert(&r.neutral_obf, &Provenance::neutral(&steps))?,
                    "toxic": metrics::invert(&r.toxic_obf, &Provenance::toxic(&steps))?,
                })
            }
            InvertLine::Text { text, steps } => json!({ "text": metrics::invert(&text, &steps)? }),
        };
        writeln!(out, "{v}")?;
    }
    Ok(())
}
