//! Acceptance checks shared by the `acceptance` harness and the regular tests.
//! Each returns a one-line summary on success and the first problem otherwise.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use hangul_obfus::dataset::{self, GenerateOptions, PairRecord, SourcePair, Split};
use hangul_obfus::engine::{pair_rng, Obfuscator, Variant};
use hangul_obfus::hangul::Slot;
use hangul_obfus::metrics::{self, Provenance};
use hangul_obfus::patch::revert;
use hangul_obfus::rules::pragmatic::strip_symbols;
use hangul_obfus::rules::{Category, RuleSpec, RULE_COUNT};
use hangul_obfus::{compose, decompose, segment, Error, JamoTriple, Level};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn source(pairs: &[(String, String)]) -> Vec<SourcePair> {
    pairs
        .iter()
        .map(|(n, t)| SourcePair { neutral: n.clone(), toxic: t.clone() })
        .collect()
}

fn jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

// ---------------------------------------------------------------- jamo

pub fn jamo_round_trip() -> Outcome {
    let start = Instant::now();
    for code in 0xAC00u32..=0xD7A3 {
        let c = char::from_u32(code).unwrap();
        let t = decompose(c).map_err(|e| format!("{c}: {e}"))?;
        // Independent arithmetic on the indices.
        let expect = 0xAC00 + (t.initial() as u32 * 21 + t.medial() as u32) * 28 + t.coda() as u32;
        ensure(expect == code, || format!("{c}: indices do not add up"))?;
        ensure(compose(t) == c, || format!("{c}: round trip failed"))?;
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(1), || format!("took {took:?}"))?;
    Ok(format!("11172 syllables in {took:?}"))
}

// ---------------------------------------------------------------- goldens

/// The examples singled out as must-reproduce.
pub const REQUIRED_EXAMPLES: &[(&str, &str)] = &[
    ("들어봐", "드러봐"),
    ("할아버지", "하라버지"),
    ("바보", "밥오"),
    ("호스트", "홋스트"),
    ("할 짓이가", "할찌시가"),
    ("눈물", "룸곡"),
    ("비버", "뜨또"),
    ("귀엽다", "커엽다"),
    ("쭈꾸미", "卒꾸미"),
    ("수상해", "水상해"),
    ("남한테", "男한테"),
];

pub fn golden_examples() -> Outcome {
    let ob = Obfuscator::default();
    let goldens = super::goldens::all();
    for (input, expected) in REQUIRED_EXAMPLES {
        ensure(goldens.iter().any(|g| g.input == *input && g.expected == *expected), || {
            format!("no golden for {input} -> {expected}")
        })?;
    }
    let mut failures = Vec::new();
    for g in &goldens {
        match g.run(&ob) {
            Ok(out) if out == g.expected => {}
            other => failures.push(format!("rule {} {} -> {:?}", g.rule, g.input, other)),
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok(format!("{} examples reproduced", goldens.len()))
}

// ---------------------------------------------------------------- obfuscation loop

/// Texts after each pass, rebuilt backwards from the output by undoing edits.
fn replay(out: &str, steps: &[Vec<hangul_obfus::Edit>]) -> Result<Vec<String>, String> {
    let mut texts = vec![out.to_string()];
    for edits in steps.iter().rev() {
        let prev = revert(texts.last().unwrap(), edits).map_err(|e| e.to_string())?;
        texts.push(prev);
    }
    texts.reverse();
    Ok(texts)
}

fn check_record(r: &PairRecord, k: usize) -> Result<(), String> {
    let id = r.pair_id;
    ensure(r.rules.len() == k, || format!("pair {id}: {} rules at k={k}", r.rules.len()))?;
    let distinct: BTreeSet<u8> = r.rules.iter().copied().collect();
    ensure(distinct.len() == k, || format!("pair {id}: repeated rule in {:?}", r.rules))?;
    ensure(r.rules.iter().all(|id| (1..=RULE_COUNT).contains(id)), || format!("pair {id}: bad id"))?;
    let steps = r.provenance.as_ref().ok_or("missing provenance")?;
    ensure(steps.iter().map(|s| s.rule).eq(r.rules.iter().copied()), || format!("pair {id}: steps differ"))?;
    let neutral = replay(&r.neutral_obf, &steps.iter().map(|s| s.neutral.clone()).collect::<Vec<_>>())?;
    let toxic = replay(&r.toxic_obf, &steps.iter().map(|s| s.toxic.clone()).collect::<Vec<_>>())?;
    ensure(neutral[0] == r.neutral && toxic[0] == r.toxic, || format!("pair {id}: replay does not reach the source"))?;
    for w in 0..k {
        ensure(neutral[w] != neutral[w + 1] && toxic[w] != toxic[w + 1], || {
            format!("pair {id}: pass {} (rule {}) left a side unchanged", w + 1, r.rules[w])
        })?;
    }
    Ok(())
}

pub fn algorithm_contract(n: usize) -> Outcome {
    let start = Instant::now();
    let pairs = source(&super::pairs(n, 7));
    let ob = Obfuscator::default();
    let opts = |jobs| GenerateOptions { seed: 11, levels: Level::ALL.to_vec(), jobs, with_provenance: true };
    let first = dataset::build_dataset(&pairs, &ob, &opts(jobs())).map_err(|e| e.to_string())?;
    let mut per_level = BTreeMap::new();
    for r in &first.records {
        check_record(r, r.level.rule_count())?;
        *per_level.entry(r.level).or_insert(0) += 1;
    }
    let took = start.elapsed();
    let second = dataset::build_dataset(&pairs, &ob, &opts(1.max(jobs() / 2))).map_err(|e| e.to_string())?;
    ensure(first.records == second.records, || "two runs with one seed differ".into())?;
    // A single pair, outside the dataset driver, is reproducible as well.
    let p = &pairs[0];
    let one = |_| ob.obfuscate_pair(&p.neutral, &p.toxic, Level::Hard, 11, &mut pair_rng(11, 0, Level::Hard)).ok();
    ensure(one(0) == one(1), || "obfuscate_pair is not deterministic".into())?;
    ensure(took < Duration::from_secs(30), || format!("{n} pairs x 3 levels took {took:?}"))?;
    Ok(format!(
        "{} results checked ({:?} by level, {:?} incomplete) in {took:?}",
        first.records.len(),
        per_level.values().collect::<Vec<_>>(),
        first.incomplete.values().collect::<Vec<_>>()
    ))
}

// ---------------------------------------------------------------- rates

/// Random test text: random syllables, corpus words, and some ASCII.
pub fn random_text(rng: &mut ChaCha8Rng) -> String {
    let words = rng.gen_range(1..10);
    (0..words)
        .map(|_| match rng.gen_range(0..10) {
            0..=5 => (0..rng.gen_range(1..6))
                .map(|_| char::from_u32(0xAC00 + rng.gen_range(0..11_172)).unwrap())
                .collect::<String>(),
            6..=8 => super::text(rng.gen()).split(' ').next().unwrap().to_string(),
            _ => (0..rng.gen_range(1..5))
                .map(|_| b"abcxyz019!?."[rng.gen_range(0..12)] as char)
                .collect(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn syllables(text: &str) -> impl Iterator<Item = JamoTriple> + '_ {
    text.chars().filter_map(|c| decompose(c).ok())
}

/// Eligible-target counts worked out from the tables and the text alone.
pub fn eligible_oracle(ob: &Obfuscator, rule: u8, text: &str) -> Option<usize> {
    let phon = &ob.dicts.phon;
    let count = |f: &dyn Fn(JamoTriple) -> bool| syllables(text).filter(|t| f(*t)).count();
    Some(match rule {
        1 => count(&|t| {
            !phon.tense.get(Slot::Initial, t.initial()).is_empty()
                || !phon.aspirated.get(Slot::Initial, t.initial()).is_empty()
        }),
        2 => count(&|t| {
            !phon.vowel_similar.get(Slot::Medial, t.medial()).is_empty() || "ㅐㅔㅚㅟㅢ".contains(t.medial_letter())
        }),
        3 => count(&|t| {
            t.has_coda()
                && [&phon.tense, &phon.aspirated, &phon.coda_variants]
                    .iter()
                    .any(|m| !m.get(Slot::Final, t.coda()).is_empty())
        }),
        9 => count(&|t| ob.dicts.glyph.hangul.contains_key(&t.to_char())),
        13 => count(&|t| ob.dicts.translit.cjk.contains_key(&t.to_char())),
        15 => {
            // Consecutive syllables with nothing or only spaces between them.
            let mut n = 0;
            let mut prev_syllable = false;
            for c in text.chars() {
                if decompose(c).is_ok() {
                    n += prev_syllable as usize;
                    prev_syllable = true;
                } else if c != ' ' {
                    prev_syllable = false;
                }
            }
            n
        }
        17 => text.chars().count(),
        _ => return None,
    })
}

fn changed_positions(a: &str, b: &str) -> Option<usize> {
    let (a, b): (Vec<char>, Vec<char>) = (a.chars().collect(), b.chars().collect());
    (a.len() == b.len()).then(|| a.iter().zip(&b).filter(|(x, y)| x != y).count())
}

/// One application of `rule` at its default rate stays within
/// `ceil(rate * eligible)` rewritten targets.
pub fn check_rate_bound(rule: u8, text: &str, seed: u64) -> Result<(), String> {
    let ob = Obfuscator::default();
    let spec = ob.rule(rule).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let out = match ob.apply(&segment(text), spec, Variant::default(), &mut rng) {
        Ok(r) => r,
        Err(Error::NoEligibleTarget) => {
            let n = eligible_oracle(&ob, rule, text).unwrap_or(0);
            return ensure(n == 0, || format!("rule {rule} refused {text:?} with {n} targets"));
        }
        Err(e) => return Err(format!("rule {rule} on {text:?}: {e}")),
    };
    if let Some(n) = eligible_oracle(&ob, rule, text) {
        ensure(out.eligible == n, || format!("rule {rule} on {text:?}: eligible {} vs {n}", out.eligible))?;
    }
    let budget = spec.tau.budget(out.eligible);
    ensure(out.sites <= budget, || format!("rule {rule} on {text:?}: {} sites > {budget}", out.sites))?;
    let rendered = out.render();
    let modified = match rule {
        // One syllable for one character: count the positions that differ.
        1 | 3 | 9 | 13 => changed_positions(text, &rendered).ok_or("length changed")?,
        // A bracket pair is one insertion but two edits.
        17 => {
            ensure(strip_symbols(&rendered, &ob.pool) == text, || format!("symbols do not strip from {rendered:?}"))?;
            out.edits.len().div_ceil(2)
        }
        _ => out.edits.len(),
    };
    ensure(modified <= budget, || format!("rule {rule} on {text:?}: {modified} modified > {budget}"))
}

pub fn rate_bounds(cases: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for rule in 1..=RULE_COUNT {
        for _ in 0..cases {
            let text = random_text(&mut rng);
            check_rate_bound(rule, &text, rng.gen())?;
        }
    }
    Ok(format!("{cases} cases for each of {RULE_COUNT} rules"))
}

// ---------------------------------------------------------------- dataset

pub fn dataset_shape() -> Outcome {
    let n = 2294;
    let pairs = source(&super::pairs(n, 3));
    let ob = Obfuscator::default();
    let opts = GenerateOptions { seed: 5, levels: Level::ALL.to_vec(), jobs: jobs(), with_provenance: false };
    let mut g = dataset::build_dataset(&pairs, &ob, &opts).map_err(|e| e.to_string())?;
    dataset::assign_splits(&mut g.records, 5);
    let stats = dataset::stats(&g.records);
    for level in Level::ALL {
        let row = stats.per_level.get(&level).ok_or("missing level")?;
        let got = (row[&Split::Train], row[&Split::Valid], row[&Split::Test]);
        ensure(got == (1835, 229, 230), || format!("{level:?}: {got:?}"))?;
    }
    // Other sizes: N records per level and an 8:1:1 split with the
    // remainder going to test, then valid.
    for n in [3usize, 10, 11, 19, 57, 101, 999] {
        let (tr, va, te) = dataset::split_counts(n);
        let base = (n * 8 / 10, n / 10, n / 10);
        let rest = n - base.0 - base.1 - base.2;
        let expect = (base.0 + (rest >= 3) as usize, base.1 + (rest >= 2) as usize, base.2 + (rest >= 1) as usize);
        ensure((tr, va, te) == expect, || format!("split_counts({n}) = {:?}", (tr, va, te)))?;
        let pairs = source(&super::pairs(n, n as u64));
        let mut g = dataset::build_dataset(&pairs, &ob, &opts).map_err(|e| e.to_string())?;
        dataset::assign_splits(&mut g.records, 1);
        for level in Level::ALL {
            let got = g.records.iter().filter(|r| r.level == level).count();
            let lost = g.incomplete[&level];
            ensure(got + lost == n, || format!("N={n} {level:?}: {got} records + {lost} incomplete"))?;
            ensure(lost == 0, || format!("N={n} {level:?}: {lost} incomplete"))?;
        }
    }
    Ok(format!("{n} pairs -> 1835/229/230 at every level"))
}

// ---------------------------------------------------------------- rule frequency

pub fn rule_frequency(n: usize) -> Outcome {
    let pairs = source(&super::pairs(n, 99));
    let ob = Obfuscator::default();
    let opts = GenerateOptions { seed: 8, levels: Level::ALL.to_vec(), jobs: jobs(), with_provenance: false };
    let g = dataset::build_dataset(&pairs, &ob, &opts).map_err(|e| e.to_string())?;
    let stats = dataset::stats(&g.records);
    let hist = &stats.rule_histogram;
    for id in 1..=8u8 {
        ensure(hist[&id] > 0, || format!("rule {id} never applied"))?;
    }
    let mut by_category: BTreeMap<String, usize> = BTreeMap::new();
    for (id, count) in hist {
        let cat = RuleSpec::by_id(*id).unwrap().category;
        *by_category.entry(cat.to_string()).or_default() += count;
    }
    let phon = by_category[&Category::Phonological.to_string()];
    for (cat, count) in &by_category {
        if cat != &Category::Phonological.to_string() {
            ensure(phon > *count, || format!("phonological {phon} <= {cat} {count}"))?;
        }
    }
    Ok(format!("{n} pairs: {by_category:?}"))
}

// ---------------------------------------------------------------- chrF

/// A second chrF, written from the definition: character n-grams without
/// whitespace, clipped matches, F-beta per order, mean over orders that
/// occur on both sides.
pub fn chrf_oracle(hyp: &str, reference: &str, max_n: usize, beta: f64) -> f64 {
    let grams = |s: &str, n: usize| {
        let c: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut m: BTreeMap<String, f64> = BTreeMap::new();
        for i in 0..(c.len() + 1).saturating_sub(n) {
            *m.entry(c[i..i + n].iter().collect()).or_default() += 1.0;
        }
        m
    };
    let mut scores = Vec::new();
    for n in 1..=max_n {
        let (h, r) = (grams(hyp, n), grams(reference, n));
        let (th, tr): (f64, f64) = (h.values().sum(), r.values().sum());
        if th == 0.0 || tr == 0.0 {
            continue;
        }
        let m: f64 = h.iter().map(|(g, c)| c.min(*r.get(g).unwrap_or(&0.0))).sum();
        let (p, rc) = (m / th, m / tr);
        let b2 = beta * beta;
        scores.push(if p + rc == 0.0 { 0.0 } else { (1.0 + b2) * p * rc / (b2 * p + rc) });
    }
    if scores.is_empty() {
        0.0
    } else {
        100.0 * scores.iter().sum::<f64>() / scores.len() as f64
    }
}

/// (hypothesis, reference, max n, beta, value worked out by hand if any).
pub const CHRF_CASES: &[(&str, &str, usize, f64, Option<f64>)] = &[
    ("abcd", "abce", 2, 2.0, Some(70.833_333_333_333_33)),
    ("ab", "abc", 1, 2.0, Some(1000.0 / 14.0)),
    ("abc", "ab", 1, 2.0, Some(1000.0 / 11.0)),
    ("aa", "a", 1, 1.0, Some(200.0 / 3.0)),
    ("ab", "ba", 2, 2.0, Some(50.0)),
    ("가나다", "가나라", 3, 2.0, Some(350.0 / 9.0)),
    ("a", "abcd", 4, 2.0, Some(500.0 / 17.0)),
    ("a b c", "abc", 3, 2.0, Some(100.0)),
    ("xyz", "abc", 3, 2.0, Some(0.0)),
    ("abab", "abab", 6, 3.0, Some(100.0)),
    ("화장실 더럽고", "화장 실더럽 고", 6, 2.0, Some(100.0)),
    ("드러봐", "들어봐", 6, 2.0, None),
    ("할찌시가", "할 짓이가", 6, 2.0, None),
    ("水상해", "수상해", 6, 2.0, None),
    ("mang했다고", "망했다고", 6, 2.0, None),
    ("《호‥갱》", "호갱", 6, 2.0, None),
    ("the cat sat", "the cat sat on the mat", 6, 2.0, None),
    ("aaaa", "aa", 3, 2.0, None),
    ("오만랜에 외여국행을", "오랜만에 외국여행을", 4, 1.0, None),
    ("궁물", "국물이", 2, 0.5, None),
];

pub fn chrf_correctness() -> Outcome {
    let close = |a: f64, b: f64| (a - b).abs() < 1e-6;
    for x in ["가나다", "abc def", "할찌시가", "a"] {
        let s = metrics::chrf(x, x, 6, 2.0).map_err(|e| e.to_string())?;
        ensure(close(s, 100.0), || format!("chrf({x}, {x}) = {s}"))?;
    }
    for (h, r) in [("abc", "xyz"), ("가나", "다라"), ("水", "수")] {
        let s = metrics::chrf(h, r, 6, 2.0).map_err(|e| e.to_string())?;
        ensure(s == 0.0, || format!("chrf({h}, {r}) = {s}"))?;
    }
    for &(h, r, n, beta, hand) in CHRF_CASES {
        let got = metrics::chrf(h, r, n, beta).map_err(|e| e.to_string())?;
        let oracle = chrf_oracle(h, r, n, beta);
        ensure(close(got, oracle), || format!("chrf({h:?}, {r:?}) = {got}, oracle {oracle}"))?;
        if let Some(v) = hand {
            ensure(close(got, v), || format!("chrf({h:?}, {r:?}) = {got}, by hand {v}"))?;
        }
    }
    Ok(format!("{} fixed cases agree within 1e-6", CHRF_CASES.len()))
}

// ---------------------------------------------------------------- inversion

pub const INVERTIBLE: [u8; 6] = [9, 10, 11, 13, 15, 17];

pub fn inverse_oracle(corpora: usize) -> Outcome {
    let mut ob = Obfuscator::default();
    ob.rules.retain(|r| INVERTIBLE.contains(&r.id));
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (mut inverted, mut incomplete) = (0, 0);
    for c in 0..corpora {
        let pairs = super::pairs(rng.gen_range(1..5), rng.gen());
        let level = Level::ALL[rng.gen_range(0..3)];
        for (i, (n, t)) in pairs.iter().enumerate() {
            let mut prng = pair_rng(c as u64, i as u64, level);
            let r = match ob.obfuscate_pair(n, t, level, c as u64, &mut prng) {
                Ok(r) => r,
                Err(Error::Incomplete { .. }) => {
                    incomplete += 1;
                    continue;
                }
                Err(e) => return Err(e.to_string()),
            };
            let back_n = metrics::invert(&r.neutral_obf, &Provenance::neutral(&r.steps)).map_err(|e| e.to_string())?;
            let back_t = metrics::invert(&r.toxic_obf, &Provenance::toxic(&r.steps)).map_err(|e| e.to_string())?;
            ensure(&back_n == n && &back_t == t, || {
                format!("corpus {c} pair {i} rules {:?}: {:?} -> {:?}", r.applied, r.toxic_obf, back_t)
            })?;
            inverted += 1;
        }
    }
    ensure(inverted > incomplete, || format!("only {inverted} pairs inverted"))?;
    Ok(format!("{corpora} corpora, {inverted} pairs restored exactly ({incomplete} incomplete)"))
}

// ---------------------------------------------------------------- end to end

fn files(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).map_err(|e| e.to_string())? {
            let p = e.map_err(|e| e.to_string())?.path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.insert(rel, std::fs::read(&p).map_err(|e| e.to_string())?);
            }
        }
    }
    Ok(out)
}

pub fn end_to_end_determinism(bin: &str) -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = tmp.path().join("pairs.tsv");
    super::write_tsv(&input, &super::pairs(300, 17));
    let config = tmp.path().join("config.toml");
    std::fs::write(&config, "seed = 123\nwith_provenance = true\n[rates]\n17 = 0.3\n").map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for (run, jobs) in [(0, "1"), (1, "4")] {
        let out_dir = tmp.path().join(format!("run{run}"));
        let status = Command::new(bin)
            .args(["generate", "--input"])
            .arg(&input)
            .arg("--out-dir")
            .arg(&out_dir)
            .arg("--config")
            .arg(&config)
            .args(["--jobs", jobs])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || String::from_utf8_lossy(&status.stderr).into_owned())?;
        outputs.push((files(&out_dir)?, status.stdout));
    }
    let (a, b) = (&outputs[0], &outputs[1]);
    ensure(a.0.len() == 10, || format!("expected 9 split files and a report, got {:?}", a.0.keys()))?;
    let differing: HashSet<&String> = a.0.keys().filter(|k| a.0.get(*k) != b.0.get(*k)).collect();
    ensure(differing.is_empty() && a.0.len() == b.0.len(), || format!("files differ: {differing:?}"))?;
    ensure(a.1 == b.1, || "printed reports differ".into())?;
    Ok(format!("{} files byte-identical across two runs", a.0.len()))
}
