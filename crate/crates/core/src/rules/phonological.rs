//! Sub-syllabic replacement, insertion and liaison (rules 1-3 and 5-8).

use crate::choose::{select_sites, Chooser, Rate};
use crate::dict::PhonDict;
use crate::error::Result;
use crate::hangul::{self, JamoTriple, SegmentedText, Slot, Unit};
use crate::patch::{Patch, Rewrite};

const SILENT: u8 = 11; // ㅇ
const BREATHY: u8 = 18; // ㅎ

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiaisonDirection {
    /// `들어 -> 드러`: the final consonant moves into the next onset.
    Forward,
    /// `바보 -> 밥오`: the next onset moves back into an empty final.
    Reverse,
}

impl std::str::FromStr for LiaisonDirection {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forward" => Ok(Self::Forward),
            "reverse" => Ok(Self::Reverse),
            other => Err(crate::Error::InvalidArgument(format!("unknown direction `{other}`"))),
        }
    }
}

fn syllable_at(units: &[Unit], i: usize) -> Option<JamoTriple> {
    units.get(i).and_then(|u| u.syllable())
}

fn finish(input: &SegmentedText, working: &[Unit], eligible: usize, sites: usize) -> Rewrite {
    let (text, edits) = Patch::from_aligned(input.units(), working).finish();
    Rewrite { text, eligible, sites, edits }
}

/// Compound vowels that can be pulled apart into a plain vowel plus `이`
/// (`태국 -> 타이국`). The final, if any, moves onto the `이`.
const VOWEL_SPLITS: &[(char, char)] = &[('ㅐ', 'ㅏ'), ('ㅔ', 'ㅓ'), ('ㅚ', 'ㅗ'), ('ㅟ', 'ㅜ'), ('ㅢ', 'ㅡ')];

fn split_vowel(t: JamoTriple) -> Option<Vec<Unit>> {
    let (_, plain) = VOWEL_SPLITS.iter().find(|(c, _)| *c == t.medial_letter())?;
    let head = JamoTriple::from_letters(t.initial_letter(), *plain, None)?;
    let tail = JamoTriple::from_letters('ㅇ', 'ㅣ', t.coda_letter())?;
    Some(vec![Unit::Syllable(head), Unit::Syllable(tail)])
}

/// Swaps the jamo in `slot` for a phonetically close one from the
/// dictionary. Medial vowels may also be split in two (see [`VOWEL_SPLITS`]).
pub fn replace_jamo(
    text: &SegmentedText,
    slot: Slot,
    rate: Rate,
    dict: &PhonDict,
    chooser: &mut dyn Chooser,
) -> Result<Rewrite> {
    let units = text.units();
    let eligible: Vec<(usize, Vec<Vec<Unit>>)> = units
        .iter()
        .enumerate()
        .filter_map(|(i, u)| {
            let t = u.syllable()?;
            let mut opts: Vec<Vec<Unit>> = dict
                .replacements(slot, t.get(slot))
                .into_iter()
                .map(|r| vec![Unit::Syllable(t.with(slot, r))])
                .collect();
            if slot == Slot::Medial {
                opts.extend(split_vowel(t));
            }
            (!opts.is_empty()).then_some((i, opts))
        })
        .collect();
    let chosen = select_sites(eligible.len(), rate, chooser)?;
    let mut patch = Patch::new(units);
    for &k in &chosen {
        let (pos, opts) = &eligible[k];
        patch.replace(*pos, opts[chooser.pick(opts.len())].clone());
    }
    let (text, edits) = patch.finish();
    Ok(Rewrite { text, eligible: eligible.len(), sites: chosen.len(), edits })
}

/// Tense stops cannot close a syllable; copy them back as their lenis form.
fn onset_to_final(initial: u8) -> Option<u8> {
    let lenis = match hangul::INITIALS[initial as usize] {
        'ㄲ' => 'ㄱ',
        'ㄸ' => 'ㄷ',
        'ㅃ' => 'ㅂ',
        'ㅉ' => 'ㅈ',
        'ㅆ' => 'ㅅ',
        c => c,
    };
    hangul::initial_index(lenis).and_then(hangul::onset_as_coda)
}

fn insertion(units: &[Unit], i: usize, slot: Slot, dict: &PhonDict) -> Option<Vec<JamoTriple>> {
    let t = syllable_at(units, i)?;
    match slot {
        Slot::Initial => {
            if t.initial() != SILENT {
                return None;
            }
            let copied = i
                .checked_sub(1)
                .and_then(|p| syllable_at(units, p))
                .and_then(|prev| hangul::coda_as_onset(prev.coda()));
            Some(vec![t.with(Slot::Initial, copied.unwrap_or(BREATHY))])
        }
        Slot::Medial => {
            let opts = dict.glides(t.medial());
            (!opts.is_empty()).then(|| opts.iter().map(|&m| t.with(Slot::Medial, m)).collect())
        }
        Slot::Final => {
            if t.has_coda() {
                return None;
            }
            let next = syllable_at(units, i + 1)?;
            if next.initial() == SILENT {
                return None;
            }
            onset_to_final(next.initial()).map(|c| vec![t.with(Slot::Final, c)])
        }
    }
}

/// Adds a jamo: a copied or breathy onset in place of silent `ㅇ`, a glide in
/// the medial, or a final copied from the following onset.
pub fn insert_jamo(
    text: &SegmentedText,
    slot: Slot,
    rate: Rate,
    dict: &PhonDict,
    chooser: &mut dyn Chooser,
) -> Result<Rewrite> {
    let units = text.units();
    let eligible: Vec<(usize, Vec<JamoTriple>)> = (0..units.len())
        .filter_map(|i| insertion(units, i, slot, dict).map(|o| (i, o)))
        .collect();
    let chosen = select_sites(eligible.len(), rate, chooser)?;
    let mut working = units.to_vec();
    for &k in &chosen {
        let (pos, opts) = &eligible[k];
        working[*pos] = Unit::Syllable(opts[chooser.pick(opts.len())]);
    }
    Ok(finish(text, &working, eligible.len(), chosen.len()))
}

fn liaison_step(
    a: JamoTriple,
    b: JamoTriple,
    direction: LiaisonDirection,
) -> Option<(JamoTriple, JamoTriple)> {
    match direction {
        LiaisonDirection::Forward => {
            if b.initial() != SILENT {
                return None;
            }
            let moved = hangul::coda_as_onset(a.coda())?;
            let (keep, _) = hangul::split_coda(a.coda());
            Some((a.with(Slot::Final, keep), b.with(Slot::Initial, moved)))
        }
        LiaisonDirection::Reverse => {
            if a.has_coda() || b.initial() == SILENT {
                return None;
            }
            let coda = hangul::onset_as_coda(b.initial())?;
            Some((a.with(Slot::Final, coda), b.with(Slot::Initial, SILENT)))
        }
    }
}

/// Moves a consonant across a syllable boundary inside a word.
pub fn liaison(
    text: &SegmentedText,
    direction: LiaisonDirection,
    rate: Rate,
    chooser: &mut dyn Chooser,
) -> Result<Rewrite> {
    let units = text.units();
    let eligible: Vec<usize> = (0..units.len().saturating_sub(1))
        .filter(|&i| match (syllable_at(units, i), syllable_at(units, i + 1)) {
            (Some(a), Some(b)) => liaison_step(a, b, direction).is_some(),
            _ => false,
        })
        .collect();
    let chosen = select_sites(eligible.len(), rate, chooser)?;
    let mut working = units.to_vec();
    let mut sites = 0;
    for &k in &chosen {
        let i = eligible[k];
        // An earlier overlapping site may have consumed this one.
        let (Some(a), Some(b)) = (syllable_at(&working, i), syllable_at(&working, i + 1)) else {
            continue;
        };
        if let Some((a2, b2)) = liaison_step(a, b, direction) {
            working[i] = Unit::Syllable(a2);
            working[i + 1] = Unit::Syllable(b2);
            sites += 1;
        }
    }
    Ok(finish(text, &working, eligible.len(), sites))
}
