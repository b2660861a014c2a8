//! Phonetic and semantic transliteration (rules 12-14).
//!
//! Latin and semantic substitution run offline from computed romanization
//! and a phrase table, or through a [`RemoteSource`]. Remote answers are
//! accepted only if they leave at most half of the words altered.

use std::sync::Arc;

use crate::choose::{select_sites, Chooser, Rate};
use crate::dict::TranslitDict;
use crate::error::{Error, Result};
use crate::hangul::{JamoTriple, SegmentedText};
use crate::patch::{diff_edits, units_of, Patch, Rewrite};
use crate::remote::{RemoteSource, TranslitMode};

#[derive(Clone, Default)]
pub enum Backend {
    #[default]
    Offline,
    Remote(Arc<dyn RemoteSource>),
}

impl std::fmt::Debug for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Backend::Offline => f.write_str("Offline"),
            Backend::Remote(_) => f.write_str("Remote"),
        }
    }
}

const ROMAN_INITIAL: [&str; 19] = [
    "g", "kk", "n", "d", "tt", "r", "m", "b", "pp", "s", "ss", "", "j", "jj", "ch", "k", "t", "p", "h",
];
const ROMAN_MEDIAL: [&str; 21] = [
    "a", "ae", "ya", "yae", "eo", "e", "yeo", "ye", "o", "wa", "wae", "oe", "yo", "u", "wo", "we",
    "wi", "yu", "eu", "ui", "i",
];
const ROMAN_FINAL: [&str; 28] = [
    "", "k", "k", "k", "n", "n", "n", "t", "l", "k", "m", "l", "l", "l", "p", "l", "m", "p", "p",
    "t", "t", "ng", "t", "t", "k", "t", "p", "t",
];

/// Revised Romanization of one syllable in isolation (`망 -> mang`).
pub fn romanize(t: JamoTriple) -> String {
    format!(
        "{}{}{}",
        ROMAN_INITIAL[t.initial() as usize],
        ROMAN_MEDIAL[t.medial() as usize],
        ROMAN_FINAL[t.coda() as usize]
    )
}

/// Only the onset is borrowed, and only before these vowels (`게 -> gㅔ`).
const BORROWING_VOWELS: &[char] = &['ㅏ', 'ㅑ', 'ㅓ', 'ㅕ', 'ㅣ', 'ㅔ', 'ㅐ'];

pub fn borrow_onset(t: JamoTriple) -> Option<String> {
    if t.initial_letter() == 'ㅇ' || !BORROWING_VOWELS.contains(&t.medial_letter()) {
        return None;
    }
    let mut s = ROMAN_INITIAL[t.initial() as usize].to_string();
    s.push(t.medial_letter());
    s.extend(t.coda_letter());
    Some(s)
}

/// How many words may be rewritten: the rate budget, and never more than
/// half of the sentence's words.
fn word_budget(rate: Rate, eligible: usize, words: usize) -> usize {
    rate.budget(eligible).min(Rate::new(0.5).expect("half").budget(words))
}

pub fn latin(
    text: &SegmentedText,
    rate: Rate,
    backend: &Backend,
    chooser: &mut dyn Chooser,
) -> Result<Rewrite> {
    match backend {
        Backend::Offline => latin_offline(text, rate, chooser),
        Backend::Remote(src) => remote(text, TranslitMode::Latin, src.as_ref()),
    }
}

fn latin_offline(text: &SegmentedText, rate: Rate, chooser: &mut dyn Chooser) -> Result<Rewrite> {
    let units = text.units();
    let words = text.words();
    let eligible: Vec<Vec<usize>> = words
        .iter()
        .map(|w| w.clone().filter(|&i| units[i].syllable().is_some()).collect::<Vec<_>>())
        .filter(|s| !s.is_empty())
        .collect();
    if eligible.is_empty() {
        return Err(Error::NoEligibleTarget);
    }
    let k = word_budget(rate, eligible.len(), words.len());
    let chosen = chooser.subset(eligible.len(), k);
    let mut patch = Patch::new(units);
    for &w in &chosen {
        let syllables = &eligible[w];
        let pos = syllables[chooser.pick(syllables.len())];
        let t = units[pos].syllable().expect("syllable");
        let mut forms = vec![romanize(t)];
        forms.extend(borrow_onset(t));
        let form = &forms[chooser.pick(forms.len())];
        patch.replace(pos, units_of(form));
    }
    let (out, edits) = patch.finish();
    Ok(Rewrite { text: out, eligible: eligible.len(), sites: chosen.len(), edits })
}

/// Syllables replaced by a Hanja with the same reading (`수 -> 水`).
pub fn cjk(
    text: &SegmentedText,
    rate: Rate,
    dict: &TranslitDict,
    chooser: &mut dyn Chooser,
) -> Result<Rewrite> {
    let units = text.units();
    let eligible: Vec<(usize, char)> = units
        .iter()
        .enumerate()
        .filter_map(|(i, u)| dict.cjk.get(&u.syllable()?.to_char()).map(|&h| (i, h)))
        .collect();
    let chosen = select_sites(eligible.len(), rate, chooser)?;
    let mut patch = Patch::new(units);
    for &k in &chosen {
        let (pos, h) = eligible[k];
        patch.replace(pos, units_of(&h.to_string()));
    }
    let (out, edits) = patch.finish();
    Ok(Rewrite { text: out, eligible: eligible.len(), sites: chosen.len(), edits })
}

/// Particles that may follow a matched word and are left in place.
const PARTICLES: &[&str] = &[
    "이", "가", "은", "는", "을", "를", "에", "에서", "에게", "도", "만", "랑", "이랑", "과", "와",
    "의", "로", "으로", "한테", "들", "처럼", "까지", "부터", "요",
];

/// A phrase-table hit: unit range to replace and its substitute.
#[derive(Debug, Clone, PartialEq)]
struct Hit {
    start: usize,
    end: usize,
    next_word: usize,
    with: String,
}

fn word_text(text: &SegmentedText, r: &std::ops::Range<usize>) -> String {
    text.units()[r.clone()].iter().map(|u| u.to_char()).collect()
}

fn match_at(text: &SegmentedText, words: &[std::ops::Range<usize>], w: usize, dict: &TranslitDict) -> Option<Hit> {
    for (key, with) in &dict.semantic {
        let n = key.len();
        if n == 0 || w + n > words.len() {
            continue;
        }
        let inner = (0..n - 1).all(|d| word_text(text, &words[w + d]) == key[d]);
        if !inner {
            continue;
        }
        let last = word_text(text, &words[w + n - 1]);
        let Some(rest) = last.strip_prefix(key[n - 1].as_str()) else {
            continue;
        };
        if rest.is_empty() || PARTICLES.contains(&rest) {
            let end = words[w + n - 1].start + key[n - 1].chars().count();
            return Some(Hit { start: words[w].start, end, next_word: w + n, with: with.clone() });
        }
    }
    None
}

pub fn semantic(
    text: &SegmentedText,
    rate: Rate,
    dict: &TranslitDict,
    backend: &Backend,
    chooser: &mut dyn Chooser,
) -> Result<Rewrite> {
    if let Backend::Remote(src) = backend {
        return remote(text, TranslitMode::Semantic, src.as_ref());
    }
    let words = text.words();
    let mut hits = Vec::new();
    let mut w = 0;
    while w < words.len() {
        match match_at(text, &words, w, dict) {
            Some(h) => {
                w = h.next_word;
                hits.push(h);
            }
            None => w += 1,
        }
    }
    if hits.is_empty() {
        return Err(Error::NoEligibleTarget);
    }
    let k = word_budget(rate, hits.len(), words.len());
    let chosen = chooser.subset(hits.len(), k);
    let mut patch = Patch::new(text.units());
    for &i in &chosen {
        let h = &hits[i];
        patch.replace(h.start, units_of(&h.with));
        for p in h.start + 1..h.end {
            patch.delete(p);
        }
    }
    let (out, edits) = patch.finish();
    Ok(Rewrite { text: out, eligible: hits.len(), sites: chosen.len(), edits })
}

/// Word-level LCS: how many words of `before` are not carried over unchanged.
pub fn altered_words(before: &str, after: &str) -> usize {
    let a: Vec<&str> = before.split_whitespace().collect();
    let b: Vec<&str> = after.split_whitespace().collect();
    let mut lcs = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in (0..a.len()).rev() {
        for j in (0..b.len()).rev() {
            lcs[i][j] = if a[i] == b[j] {
                lcs[i + 1][j + 1] + 1
            } else {
                lcs[i + 1][j].max(lcs[i][j + 1])
            };
        }
    }
    a.len() - lcs[0][0]
}

fn remote(text: &SegmentedText, mode: TranslitMode, src: &dyn RemoteSource) -> Result<Rewrite> {
    let input = text.render();
    let words = input.split_whitespace().count();
    if text.syllable_count() == 0 {
        return Err(Error::NoEligibleTarget);
    }
    let output = src.query(mode, &input)?;
    let altered = altered_words(&input, &output);
    let cap = Rate::new(0.5).expect("half").budget(words);
    if altered > cap {
        return Err(Error::RemoteCapExceeded { altered, cap });
    }
    if output == input {
        return Err(Error::NoEligibleTarget);
    }
    let edits = diff_edits(&input, &output);
    Ok(Rewrite {
        text: crate::hangul::segment(&output),
        eligible: words,
        sites: altered,
        edits,
    })
}
