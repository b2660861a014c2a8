//! Spacing perturbation and syllable anagrams (rules 15-16).

use crate::choose::{select_sites, Chooser, Rate};
use crate::error::Result;
use crate::hangul::{SegmentedText, Unit};
use crate::patch::{Patch, Rewrite};

/// A position between two consecutive syllables: `left` and `right` are
/// their unit indices, with only spaces (or nothing) between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Boundary {
    pub left: usize,
    pub right: usize,
}

impl Boundary {
    pub fn spaced(self) -> bool {
        self.right > self.left + 1
    }
}

pub fn boundaries(units: &[Unit]) -> Vec<Boundary> {
    let mut out = Vec::new();
    let mut last: Option<usize> = None;
    for (i, u) in units.iter().enumerate() {
        if u.syllable().is_some() {
            if let Some(l) = last {
                out.push(Boundary { left: l, right: i });
            }
            last = Some(i);
        } else if !u.is_space() {
            last = None;
        }
    }
    out
}

/// Toggles a share of the syllable boundaries: joined syllables get a space,
/// spaced ones lose their whole run of spaces.
pub fn perturb_spacing(text: &SegmentedText, rate: Rate, chooser: &mut dyn Chooser) -> Result<Rewrite> {
    let units = text.units();
    let eligible = boundaries(units);
    let chosen = select_sites(eligible.len(), rate, chooser)?;
    let mut patch = Patch::new(units);
    for &k in &chosen {
        let b = eligible[k];
        if b.spaced() {
            for p in b.left + 1..b.right {
                patch.delete(p);
            }
        } else {
            patch.insert(b.right, [Unit::Space(' ')]);
        }
    }
    let (out, edits) = patch.finish();
    Ok(Rewrite { text: out, eligible: eligible.len(), sites: chosen.len(), edits })
}

/// Swappable adjacent syllable pairs of a word, never involving its first
/// syllable.
fn swaps(units: &[Unit], word: std::ops::Range<usize>) -> Vec<usize> {
    let syllables = word.clone().filter(|&i| units[i].syllable().is_some()).count();
    if syllables < 3 || units[word.start].syllable().is_none() {
        return Vec::new();
    }
    (word.start + 1..word.end.saturating_sub(1))
        .filter(|&i| {
            units[i].syllable().is_some()
                && units[i + 1].syllable().is_some()
                && units[i] != units[i + 1]
        })
        .collect()
}

/// Transposes one adjacent syllable pair inside each selected word
/// (`오랜만에 -> 오만랜에`).
pub fn syllable_anagram(text: &SegmentedText, rate: Rate, chooser: &mut dyn Chooser) -> Result<Rewrite> {
    let units = text.units();
    let eligible: Vec<Vec<usize>> = text
        .words()
        .into_iter()
        .map(|w| swaps(units, w))
        .filter(|s| !s.is_empty())
        .collect();
    let chosen = select_sites(eligible.len(), rate, chooser)?;
    let mut patch = Patch::new(units);
    for &k in &chosen {
        let options = &eligible[k];
        let i = options[chooser.pick(options.len())];
        patch.set(i, units[i + 1]);
        patch.set(i + 1, units[i]);
    }
    let (out, edits) = patch.finish();
    Ok(Rewrite { text: out, eligible: eligible.len(), sites: chosen.len(), edits })
}
