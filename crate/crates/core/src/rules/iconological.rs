//! Visual substitutions: look-alike Hangeul, other scripts, and rotation
//! (rules 9-11).

use std::str::FromStr;

use crate::choose::{select_sites, Chooser, Rate};
use crate::dict::{GlyphDict, SyllableMap};
use crate::error::{Error, Result};
use crate::hangul::{JamoTriple, SegmentedText};
use crate::patch::{units_of, Patch, Rewrite};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlyphLevel {
    /// Whole syllables swap for a glyph sequence (`야 -> OF`).
    Character,
    /// Each jamo is drawn with a symbol of similar shape.
    Subsyllabic,
}

impl FromStr for GlyphLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "character" | "char" => Ok(Self::Character),
            "subsyllabic" | "jamo" => Ok(Self::Subsyllabic),
            other => Err(Error::InvalidArgument(format!("unknown level `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Angle {
    Quarter,
    Half,
}

impl FromStr for Angle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "90" => Ok(Self::Quarter),
            "180" => Ok(Self::Half),
            other => Err(Error::InvalidArgument(format!("unknown angle `{other}`"))),
        }
    }
}

/// Rewrites a share of the syllables for which `f` yields a replacement.
fn map_syllables(
    text: &SegmentedText,
    rate: Rate,
    chooser: &mut dyn Chooser,
    f: impl Fn(JamoTriple) -> Option<String>,
) -> Result<Rewrite> {
    let units = text.units();
    let eligible: Vec<(usize, String)> = units
        .iter()
        .enumerate()
        .filter_map(|(i, u)| f(u.syllable()?).map(|s| (i, s)))
        .collect();
    let chosen = select_sites(eligible.len(), rate, chooser)?;
    let mut patch = Patch::new(units);
    for &k in &chosen {
        let (pos, ref with) = eligible[k];
        patch.replace(pos, units_of(with));
    }
    let (text, edits) = patch.finish();
    Ok(Rewrite { text, eligible: eligible.len(), sites: chosen.len(), edits })
}

fn lookup(map: &SyllableMap) -> impl Fn(JamoTriple) -> Option<String> + '_ {
    move |t| map.get(&t.to_char()).cloned()
}

/// Swaps syllables for Hangeul syllables of similar shape (`귀 -> 커`).
pub fn lookalike_hangul(
    text: &SegmentedText,
    rate: Rate,
    glyphs: &GlyphDict,
    chooser: &mut dyn Chooser,
) -> Result<Rewrite> {
    map_syllables(text, rate, chooser, lookup(&glyphs.hangul))
}

/// Draws syllables with characters from other scripts.
pub fn cross_script(
    text: &SegmentedText,
    level: GlyphLevel,
    rate: Rate,
    glyphs: &GlyphDict,
    chooser: &mut dyn Chooser,
) -> Result<Rewrite> {
    match level {
        GlyphLevel::Character => map_syllables(text, rate, chooser, lookup(&glyphs.cross)),
        GlyphLevel::Subsyllabic => map_syllables(text, rate, chooser, |t| {
            glyphs.has_jamo_glyph(t).then(|| {
                let mut s = glyphs.jamo_glyph(t.initial_letter());
                s.push_str(&glyphs.jamo_glyph(t.medial_letter()));
                if let Some(c) = t.coda_letter() {
                    s.push_str(&glyphs.jamo_glyph(c));
                }
                s
            })
        }),
    }
}

/// Rotates syllables. A quarter turn maps each syllable on its own; a half
/// turn also reverses the order of each run of rotatable syllables within
/// a word (`눈물 -> 룸곡`).
pub fn rotate(
    text: &SegmentedText,
    angle: Angle,
    rate: Rate,
    glyphs: &GlyphDict,
    chooser: &mut dyn Chooser,
) -> Result<Rewrite> {
    match angle {
        Angle::Quarter => map_syllables(text, rate, chooser, lookup(&glyphs.rotate90)),
        Angle::Half => rotate_half(text, rate, &glyphs.rotate180, chooser),
    }
}

fn rotate_half(
    text: &SegmentedText,
    rate: Rate,
    map: &SyllableMap,
    chooser: &mut dyn Chooser,
) -> Result<Rewrite> {
    let units = text.units();
    let rotatable = |i: usize| {
        units[i]
            .syllable()
            .is_some_and(|t| map.contains_key(&t.to_char()))
    };
    let mut runs = Vec::new();
    let mut i = 0;
    while i < units.len() {
        if !rotatable(i) {
            i += 1;
            continue;
        }
        let start = i;
        while i < units.len() && rotatable(i) {
            i += 1;
        }
        runs.push(start..i);
    }
    let chosen = select_sites(runs.len(), rate, chooser)?;
    let mut patch = Patch::new(units);
    for &k in &chosen {
        let run = runs[k].clone();
        let rotated: String = run
            .clone()
            .rev()
            .map(|p| map[&units[p].to_char()].as_str())
            .collect();
        let rotated = units_of(&rotated);
        // The whole run becomes one replacement anchored at its first unit.
        patch.replace(run.start, rotated);
        for p in run.skip(1) {
            patch.delete(p);
        }
    }
    let (text, edits) = patch.finish();
    Ok(Rewrite { text, eligible: runs.len(), sites: chosen.len(), edits })
}
