//! Source loading, three-level generation, split assignment and statistics.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{pair_rng, Level, Obfuscator, Step};
use crate::error::{Error, Result};
use crate::hangul::compose_conjoining;
use crate::rules::RULE_COUNT;

/// Sides with this many whitespace tokens or fewer are dropped.
pub const MIN_TOKENS_EXCLUSIVE: usize = 2;

/// Average span of the published corpus, reported next to ours.
pub const REFERENCE_AVG_SPAN: f64 = 8.09;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourcePair {
    pub neutral: String,
    pub toxic: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadReport {
    pub rows: usize,
    pub retained: usize,
    pub filtered_short: usize,
}

fn tokens(s: &str) -> usize {
    s.split_whitespace().count()
}

/// Reads a JSON Lines (`{"neutral": .., "toxic": ..}`) or tab-separated
/// corpus. The format follows the extension, or the first line when the
/// extension is neither `.jsonl` nor `.tsv`. A TSV header `neutral\ttoxic`
/// is skipped.
pub fn load_source(path: &Path) -> Result<(Vec<SourcePair>, LoadReport)> {
    let reader = BufReader::new(fs::File::open(path)?);
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let mut json: Option<bool> = match ext {
        "jsonl" | "json" => Some(true),
        "tsv" => Some(false),
        _ => None,
    };
    let mut report = LoadReport::default();
    let mut pairs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let is_json = *json.get_or_insert_with(|| line.trim_start().starts_with('{'));
        let pair = if is_json {
            serde_json::from_str::<SourcePair>(&line).map_err(|e| Error::Parse {
                line: lineno,
                message: e.to_string(),
            })?
        } else {
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 2 {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected 2 tab-separated columns, found {}", cols.len()),
                });
            }
            if report.rows == 0 && cols[0].trim() == "neutral" && cols[1].trim() == "toxic" {
                continue;
            }
            SourcePair { neutral: cols[0].to_string(), toxic: cols[1].to_string() }
        };
        report.rows += 1;
        let pair = SourcePair {
            neutral: compose_conjoining(pair.neutral.trim()),
            toxic: compose_conjoining(pair.toxic.trim()),
        };
        if tokens(&pair.neutral) <= MIN_TOKENS_EXCLUSIVE || tokens(&pair.toxic) <= MIN_TOKENS_EXCLUSIVE {
            report.filtered_short += 1;
            continue;
        }
        pairs.push(pair);
    }
    if report.rows == 0 {
        return Err(Error::EmptyCorpus);
    }
    report.retained = pairs.len();
    Ok((pairs, report))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Valid,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Valid, Split::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Valid => "valid",
            Split::Test => "test",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub pair_id: u64,
    pub neutral: String,
    pub toxic: String,
    pub neutral_obf: String,
    pub toxic_obf: String,
    pub rules: Vec<u8>,
    pub level: Level,
    pub split: Split,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Vec<Step>>,
}

#[derive(Debug, Clone)]
pub struct GenerateOptions {
    pub seed: u64,
    pub levels: Vec<Level>,
    pub jobs: usize,
    pub with_provenance: bool,
}

#[derive(Debug, Clone, Default)]
pub struct Generated {
    /// Ordered by level, then pair id. Splits are not yet assigned.
    pub records: Vec<PairRecord>,
    pub incomplete: BTreeMap<Level, usize>,
}

/// One record per (pair, level). Pairs whose candidate rules run out are
/// counted and left out; other errors stop generation.
pub fn build_dataset(pairs: &[SourcePair], ob: &Obfuscator, opts: &GenerateOptions) -> Result<Generated> {
    if pairs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let jobs: Vec<(Level, usize)> = opts
        .levels
        .iter()
        .flat_map(|&l| (0..pairs.len()).map(move |i| (l, i)))
        .collect();
    let run = |&(level, i): &(Level, usize)| -> Result<Option<PairRecord>> {
        let p = &pairs[i];
        let mut rng = pair_rng(opts.seed, i as u64, level);
        match ob.obfuscate_pair(&p.neutral, &p.toxic, level, opts.seed, &mut rng) {
            Ok(r) => Ok(Some(PairRecord {
                pair_id: i as u64,
                neutral: p.neutral.clone(),
                toxic: p.toxic.clone(),
                neutral_obf: r.neutral_obf,
                toxic_obf: r.toxic_obf,
                rules: r.applied,
                level,
                split: Split::Train,
                provenance: opts.with_provenance.then_some(r.steps),
            })),
            Err(Error::Incomplete { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let results: Vec<Result<Option<PairRecord>>> = pool.install(|| jobs.par_iter().map(run).collect());
    let mut out = Generated::default();
    for l in &opts.levels {
        out.incomplete.insert(*l, 0);
    }
    for ((level, _), r) in jobs.iter().zip(results) {
        match r? {
            Some(rec) => out.records.push(rec),
            None => *out.incomplete.entry(*level).or_default() += 1,
        }
    }
    Ok(out)
}

/// Train/valid/test sizes for `n` items in an 8:1:1 ratio; the remainder
/// goes to test first, then valid.
pub fn split_counts(n: usize) -> (usize, usize, usize) {
    let (mut train, mut valid, mut test) = (n * 8 / 10, n / 10, n / 10);
    let mut rest = n - train - valid - test;
    for slot in [&mut test, &mut valid, &mut train] {
        if rest == 0 {
            break;
        }
        *slot += 1;
        rest -= 1;
    }
    debug_assert_eq!(rest, 0);
    (train, valid, test)
}

/// Assigns splits by source pair, so all levels of a pair share a split.
pub fn assign_splits(records: &mut [PairRecord], seed: u64) {
    let ids: BTreeSet<u64> = records.iter().map(|r| r.pair_id).collect();
    let mut ids: Vec<u64> = ids.into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    ids.shuffle(&mut rng);
    let (train, valid, _) = split_counts(ids.len());
    let split_of: BTreeMap<u64, Split> = ids
        .iter()
        .enumerate()
        .map(|(i, &id)| {
            let s = if i < train {
                Split::Train
            } else if i < train + valid {
                Split::Valid
            } else {
                Split::Test
            };
            (id, s)
        })
        .collect();
    for r in records {
        r.split = split_of[&r.pair_id];
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub records: usize,
    pub per_level: BTreeMap<Level, BTreeMap<Split, usize>>,
    /// Applications per rule id, 1 through 17.
    pub rule_histogram: BTreeMap<u8, usize>,
    pub distinct_rule_combinations: usize,
    /// Mean whitespace token count of the obfuscated sides.
    pub avg_span: f64,
    pub reference_avg_span: f64,
}

pub fn stats(records: &[PairRecord]) -> Stats {
    let mut histogram: BTreeMap<u8, usize> = (1..=RULE_COUNT).map(|id| (id, 0)).collect();
    let mut combos = BTreeSet::new();
    let mut per_level: BTreeMap<Level, BTreeMap<Split, usize>> = BTreeMap::new();
    let mut span = 0.0;
    for r in records {
        for id in &r.rules {
            *histogram.entry(*id).or_default() += 1;
        }
        let mut set = r.rules.clone();
        set.sort_unstable();
        combos.insert(set);
        let level = per_level
            .entry(r.level)
            .or_insert_with(|| Split::ALL.iter().map(|s| (*s, 0)).collect());
        *level.entry(r.split).or_default() += 1;
        span += (tokens(&r.neutral_obf) + tokens(&r.toxic_obf)) as f64 / 2.0;
    }
    Stats {
        records: records.len(),
        per_level,
        rule_histogram: histogram,
        distinct_rule_combinations: combos.len(),
        avg_span: if records.is_empty() { 0.0 } else { span / records.len() as f64 },
        reference_avg_span: REFERENCE_AVG_SPAN,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub seed: u64,
    pub config_digest: String,
    pub source: LoadReport,
    pub incomplete: BTreeMap<Level, usize>,
    pub stats: Stats,
}

/// Writes `<out>/<level>/<split>.jsonl` (sorted by pair id) and `<out>/report.json`.
pub fn write_dataset(out_dir: &Path, records: &[PairRecord], report: &Report) -> Result<()> {
    let mut sorted: Vec<&PairRecord> = records.iter().collect();
    sorted.sort_by_key(|r| (r.level, r.split, r.pair_id));
    let levels: BTreeSet<Level> = records.iter().map(|r| r.level).chain(report.incomplete.keys().copied()).collect();
    for level in levels {
        let dir = out_dir.join(level.as_str());
        fs::create_dir_all(&dir)?;
        for split in Split::ALL {
            let mut f = std::io::BufWriter::new(fs::File::create(dir.join(format!("{}.jsonl", split.as_str())))?);
            for r in sorted.iter().filter(|r| r.level == level && r.split == split) {
                serde_json::to_writer(&mut f, r)?;
                f.write_all(b"\n")?;
            }
            f.flush()?;
        }
    }
    let mut f = fs::File::create(out_dir.join("report.json"))?;
    serde_json::to_writer_pretty(&mut f, report)?;
    f.write_all(b"\n")?;
    Ok(())
}

/// Reads every `*.jsonl` file under `dir` (one level deep) as records.
pub fn read_dataset(dir: &Path) -> Result<Vec<PairRecord>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir)? {
        let p = entry?.path();
        if p.is_dir() {
            for e in fs::read_dir(&p)? {
                let q = e?.path();
                if q.extension().is_some_and(|x| x == "jsonl") {
                    files.push(q);
                }
            }
        }
    }
    files.sort();
    let mut out = Vec::new();
    for f in files {
        for (i, line) in BufReader::new(fs::File::open(&f)?).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            out.push(serde_json::from_str(&line).map_err(|e| Error::Parse {
                line: i + 1,
                message: format!("{}: {e}", f.display()),
            })?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_sizes() {
        assert_eq!(split_counts(2294), (1835, 229, 230));
        assert_eq!(split_counts(10), (8, 1, 1));
        assert_eq!(split_counts(19), (15, 2, 2));
        assert_eq!(split_counts(1), (0, 0, 1));
        assert_eq!(split_counts(0), (0, 0, 0));
        for n in 0..500 {
            let (a, b, c) = split_counts(n);
            assert_eq!(a + b + c, n);
        }
    }

    #[test]
    fn loads_tsv_and_jsonl() {
        let dir = tempfile::tempdir().unwrap();
        let tsv = dir.path().join("a.tsv");
        fs::write(&tsv, "neutral\ttoxic\n너 정말 좋다\t너 정말 싫다\n짧은 문장\t이것도 짧다 정말\n").unwrap();
        let (pairs, rep) = load_source(&tsv).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(rep, LoadReport { rows: 2, retained: 1, filtered_short: 1 });

        let jl = dir.path().join("a.jsonl");
        fs::write(&jl, "{\"neutral\": \"가 나 다\", \"toxic\": \"라 마 바\"}\n").unwrap();
        assert_eq!(load_source(&jl).unwrap().0.len(), 1);
        fs::write(&jl, "{\"neutral\": \"가 나 다\"}\n").unwrap();
        assert!(matches!(load_source(&jl), Err(Error::Parse { line: 1, .. })));
        fs::write(&jl, "").unwrap();
        assert!(matches!(load_source(&jl), Err(Error::EmptyCorpus)));
    }
}
