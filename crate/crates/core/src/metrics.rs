//! chrF scoring and replaying provenance backwards.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::engine::Step;
use crate::error::{Error, Result};
use crate::patch::{revert, Edit};
use crate::rules::RuleSpec;

pub const DEFAULT_MAX_N: usize = 6;
pub const DEFAULT_BETA: f64 = 2.0;

/// Per-order n-gram counts: (matched, in hypothesis, in reference).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ChrfStats(pub Vec<(usize, usize, usize)>);

fn ngrams(chars: &[char], n: usize) -> HashMap<&[char], usize> {
    let mut m = HashMap::new();
    if chars.len() >= n {
        for w in chars.windows(n) {
            *m.entry(w).or_insert(0) += 1;
        }
    }
    m
}

/// Counts character n-grams with whitespace removed.
pub fn chrf_stats(hypothesis: &str, reference: &str, max_n: usize) -> ChrfStats {
    let h: Vec<char> = hypothesis.chars().filter(|c| !c.is_whitespace()).collect();
    let r: Vec<char> = reference.chars().filter(|c| !c.is_whitespace()).collect();
    ChrfStats(
        (1..=max_n)
            .map(|n| {
                let hg = ngrams(&h, n);
                let rg = ngrams(&r, n);
                let matched = hg.iter().map(|(g, c)| (*c).min(*rg.get(g).unwrap_or(&0))).sum();
                (matched, hg.values().sum(), rg.values().sum())
            })
            .collect(),
    )
}

impl ChrfStats {
    fn add(&mut self, other: &ChrfStats) {
        if self.0.is_empty() {
            self.0 = vec![(0, 0, 0); other.0.len()];
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            a.0 += b.0;
            a.1 += b.1;
            a.2 += b.2;
        }
    }

    /// F-beta per order, averaged over the orders present on both sides,
    /// scaled to 0..100.
    pub fn score(&self, beta: f64) -> f64 {
        let b2 = beta * beta;
        let mut total = 0.0;
        let mut orders = 0;
        for &(m, h, r) in &self.0 {
            if h == 0 || r == 0 {
                continue;
            }
            orders += 1;
            let p = m as f64 / h as f64;
            let rec = m as f64 / r as f64;
            let denom = b2 * p + rec;
            if denom > 0.0 {
                total += (1.0 + b2) * p * rec / denom;
            }
        }
        if orders == 0 {
            0.0
        } else {
            100.0 * total / orders as f64
        }
    }
}

fn check_reference(reference: &str) -> Result<()> {
    if reference.chars().all(char::is_whitespace) {
        return Err(Error::EmptyReference);
    }
    Ok(())
}

pub fn chrf(hypothesis: &str, reference: &str, max_n: usize, beta: f64) -> Result<f64> {
    check_reference(reference)?;
    Ok(chrf_stats(hypothesis, reference, max_n).score(beta))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusScore {
    /// chrF from n-gram counts pooled over all lines.
    pub chrf: f64,
    pub mean_sentence_chrf: f64,
    pub sentences: Vec<f64>,
    /// Left for externally computed scores.
    pub bertscore: Option<f64>,
    pub perspective: Option<f64>,
}

pub fn corpus_chrf(hypotheses: &[String], references: &[String], max_n: usize, beta: f64) -> Result<CorpusScore> {
    if hypotheses.len() != references.len() {
        return Err(Error::InvalidArgument(format!(
            "{} hypotheses but {} references",
            hypotheses.len(),
            references.len()
        )));
    }
    if references.is_empty() {
        return Err(Error::EmptyReference);
    }
    let mut pooled = ChrfStats::default();
    let mut sentences = Vec::with_capacity(references.len());
    for (h, r) in hypotheses.iter().zip(references) {
        check_reference(r)?;
        let s = chrf_stats(h, r, max_n);
        sentences.push(s.score(beta));
        pooled.add(&s);
    }
    Ok(CorpusScore {
        chrf: pooled.score(beta),
        mean_sentence_chrf: sentences.iter().sum::<f64>() / sentences.len() as f64,
        sentences,
        bertscore: None,
        perspective: None,
    })
}

/// One rule's edits on one text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub rule: u8,
    pub edits: Vec<Edit>,
}

impl Provenance {
    pub fn neutral(steps: &[Step]) -> Vec<Provenance> {
        steps.iter().map(|s| Provenance { rule: s.rule, edits: s.neutral.clone() }).collect()
    }

    pub fn toxic(steps: &[Step]) -> Vec<Provenance> {
        steps.iter().map(|s| Provenance { rule: s.rule, edits: s.toxic.clone() }).collect()
    }
}

/// Undoes recorded passes, last first. Only rules whose rewrites are
/// one-to-one substitutions, spacing or insertions may be undone.
pub fn invert(text: &str, provenance: &[Provenance]) -> Result<String> {
    if let Some(p) = provenance
        .iter()
        .find(|p| !RuleSpec::by_id(p.rule).is_some_and(|r| r.invertible()))
    {
        return Err(Error::NonInvertibleRule(p.rule));
    }
    let mut out = text.to_string();
    for p in provenance.iter().rev() {
        out = revert(&out, &p.edits)?;
    }
    Ok(out)
}
