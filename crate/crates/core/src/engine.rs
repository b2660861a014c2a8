//! Paired obfuscation: the same rules applied to both sides of a
//! neutral/toxic pair, one pass per rule, with a sanity check per pass.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::choose::{Chooser, Rate};
use crate::dict::Dictionaries;
use crate::error::{Error, Result};
use crate::hangul::{segment, SegmentedText, Slot};
use crate::patch::{Edit, Rewrite};
use crate::rules::iconological::{self, Angle, GlyphLevel};
use crate::rules::phonological::{self, LiaisonDirection};
use crate::rules::pragmatic::{self, SymbolPool};
use crate::rules::resyllabify::resyllabify;
use crate::rules::syntactic;
use crate::rules::transliteration::{self, Backend};
use crate::rules::{default_rules, RuleSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Easy,
    Normal,
    Hard,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Easy, Level::Normal, Level::Hard];

    /// Number of rules applied at this level.
    pub fn rule_count(self) -> usize {
        match self {
            Level::Easy => 2,
            Level::Normal => 3,
            Level::Hard => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Level::Easy => "easy",
            Level::Normal => "normal",
            Level::Hard => "hard",
        }
    }

    pub fn from_rule_count(k: usize) -> Option<Level> {
        Level::ALL.into_iter().find(|l| l.rule_count() == k)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "easy" | "2" => Ok(Level::Easy),
            "normal" | "3" => Ok(Level::Normal),
            "hard" | "4" => Ok(Level::Hard),
            other => Err(Error::InvalidArgument(format!("unknown level `{other}`"))),
        }
    }
}

/// Random stream for one (pair, level): the same pair always sees the same
/// choices, whatever order pairs are processed in.
pub fn pair_rng(seed: u64, pair_index: u64, level: Level) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((pair_index << 2) | level.rule_count() as u64);
    rng
}

/// Pinned variants for rules that have them. Unset variants are chosen at
/// random, falling back to the other variant when the first has no target.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Variant {
    pub direction: Option<LiaisonDirection>,
    pub angle: Option<Angle>,
    pub level: Option<GlyphLevel>,
}

fn with_fallback<T: Copy>(
    pinned: Option<T>,
    options: [T; 2],
    chooser: &mut dyn Chooser,
    mut run: impl FnMut(T, &mut dyn Chooser) -> Result<Rewrite>,
) -> Result<Rewrite> {
    if let Some(v) = pinned {
        return run(v, chooser);
    }
    let first = chooser.pick(2);
    match run(options[first], chooser) {
        Err(Error::NoEligibleTarget) => run(options[1 - first], chooser),
        other => other,
    }
}

/// One committed pass, kept so the pass can be undone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub rule: u8,
    pub neutral: Vec<Edit>,
    pub toxic: Vec<Edit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObfuscationResult {
    pub neutral_obf: String,
    pub toxic_obf: String,
    pub applied: Vec<u8>,
    pub level: Level,
    pub seed: u64,
    pub steps: Vec<Step>,
}

pub const DEFAULT_MAX_LENGTH_RATIO: f64 = 3.0;

#[derive(Debug, Clone)]
pub struct Obfuscator {
    pub dicts: Dictionaries,
    pub backend: Backend,
    pub pool: SymbolPool,
    pub rules: Vec<RuleSpec>,
    pub max_length_ratio: f64,
}

impl Default for Obfuscator {
    fn default() -> Self {
        Self {
            dicts: Dictionaries::embedded(),
            backend: Backend::Offline,
            pool: SymbolPool::default(),
            rules: default_rules(),
            max_length_ratio: DEFAULT_MAX_LENGTH_RATIO,
        }
    }
}

/// Whether a candidate pass may be committed.
pub fn sanity_check(
    before: (&str, &str),
    after: (&str, &str),
    applied: &[u8],
    rule: u8,
    max_length_ratio: f64,
) -> bool {
    let fine = |x: &str, y: &str| {
        x != y
            && !y.trim().is_empty()
            && y.chars().any(char::is_alphabetic)
            && y.chars().count() as f64 <= max_length_ratio * x.chars().count() as f64
    };
    !applied.contains(&rule) && fine(before.0, after.0) && fine(before.1, after.1)
}

impl Obfuscator {
    pub fn rule(&self, id: u8) -> Result<RuleSpec> {
        self.rules
            .iter()
            .copied()
            .find(|r| r.id == id)
            .or_else(|| RuleSpec::by_id(id))
            .ok_or(Error::UnknownRule(id))
    }

    /// Applies one rule to one text.
    pub fn apply(
        &self,
        text: &SegmentedText,
        rule: RuleSpec,
        variant: Variant,
        chooser: &mut dyn Chooser,
    ) -> Result<Rewrite> {
        let tau: Rate = rule.tau;
        let phon = &self.dicts.phon;
        let glyph = &self.dicts.glyph;
        let translit = &self.dicts.translit;
        match rule.id {
            1 => phonological::replace_jamo(text, Slot::Initial, tau, phon, chooser),
            2 => phonological::replace_jamo(text, Slot::Medial, tau, phon, chooser),
            3 => phonological::replace_jamo(text, Slot::Final, tau, phon, chooser),
            4 => resyllabify(text, tau, chooser),
            5 => phonological::insert_jamo(text, Slot::Initial, tau, phon, chooser),
            6 => phonological::insert_jamo(text, Slot::Medial, tau, phon, chooser),
            7 => phonological::insert_jamo(text, Slot::Final, tau, phon, chooser),
            8 => with_fallback(
                variant.direction,
                [LiaisonDirection::Forward, LiaisonDirection::Reverse],
                chooser,
                |d, c| phonological::liaison(text, d, tau, c),
            ),
            9 => iconological::lookalike_hangul(text, tau, glyph, chooser),
            10 => with_fallback(
                variant.level,
                [GlyphLevel::Character, GlyphLevel::Subsyllabic],
                chooser,
                |l, c| iconological::cross_script(text, l, tau, glyph, c),
            ),
            11 => with_fallback(
                variant.angle,
                [Angle::Quarter, Angle::Half],
                chooser,
                |a, c| iconological::rotate(text, a, tau, glyph, c),
            ),
            12 => transliteration::latin(text, tau, &self.backend, chooser),
            13 => transliteration::cjk(text, tau, translit, chooser),
            14 => transliteration::semantic(text, tau, translit, &self.backend, chooser),
            15 => syntactic::perturb_spacing(text, tau, chooser),
            16 => syntactic::syllable_anagram(text, tau, chooser),
            17 => pragmatic::insert_symbols(text, tau, &self.pool, chooser),
            other => Err(Error::UnknownRule(other)),
        }
    }

    pub fn apply_rule(&self, text: &str, rule: u8, chooser: &mut dyn Chooser) -> Result<Rewrite> {
        self.apply(&segment(text), self.rule(rule)?, Variant::default(), chooser)
    }

    /// Runs `level.rule_count()` passes over the pair. Each pass samples
    /// rules uniformly from those not yet applied, dropping any that fail on
    /// either side, until one passes the sanity check.
    pub fn obfuscate_pair(
        &self,
        neutral: &str,
        toxic: &str,
        level: Level,
        seed: u64,
        chooser: &mut dyn Chooser,
    ) -> Result<ObfuscationResult> {
        let mut x_n = segment(neutral);
        let mut x_t = segment(toxic);
        let mut applied: Vec<u8> = Vec::new();
        let mut steps = Vec::new();
        for _ in 0..level.rule_count() {
            let mut candidates: Vec<RuleSpec> = self
                .rules
                .iter()
                .copied()
                .filter(|r| !applied.contains(&r.id))
                .collect();
            loop {
                if candidates.is_empty() {
                    return Err(Error::Incomplete { applied });
                }
                let rule = candidates.remove(chooser.pick(candidates.len()));
                let Some(y_n) = soft(self.apply(&x_n, rule, Variant::default(), chooser))? else {
                    continue;
                };
                let Some(y_t) = soft(self.apply(&x_t, rule, Variant::default(), chooser))? else {
                    continue;
                };
                let (xn, xt) = (x_n.render(), x_t.render());
                let (yn, yt) = (y_n.render(), y_t.render());
                if sanity_check((&xn, &xt), (&yn, &yt), &applied, rule.id, self.max_length_ratio) {
                    applied.push(rule.id);
                    steps.push(Step { rule: rule.id, neutral: y_n.edits, toxic: y_t.edits });
                    x_n = y_n.text;
                    x_t = y_t.text;
                    break;
                }
            }
        }
        Ok(ObfuscationResult {
            neutral_obf: x_n.render(),
            toxic_obf: x_t.render(),
            applied,
            level,
            seed,
            steps,
        })
    }
}

/// Errors that mean "this rule does not fit this text" become `None`; the
/// rest (I/O, unreachable backend) stop the run.
fn soft(r: Result<Rewrite>) -> Result<Option<Rewrite>> {
    match r {
        Ok(w) => Ok(Some(w)),
        Err(Error::NoEligibleTarget | Error::RemoteCapExceeded { .. } | Error::MalformedRemoteResponse(_)) => {
            Ok(None)
        }
        Err(e) => Err(e),
    }
}
