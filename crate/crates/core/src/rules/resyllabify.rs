//! Writing words the way they are pronounced (rule 4).
//!
//! A small grapheme-to-phoneme pass over adjacent syllable pairs: aspiration,
//! liaison, nasalization, liquidization and tensification inside a word, plus
//! tensification of a bound noun across a single space after a final `ㄹ`,
//! where the space is dropped (`할 수 -> 할쑤`).

use crate::choose::{select_sites, Chooser, Rate};
use crate::error::Result;
use crate::hangul::{JamoTriple, SegmentedText, Unit};
use crate::patch::{Patch, Rewrite};

const VELAR: &[char] = &['ㄱ', 'ㄲ', 'ㅋ', 'ㄳ', 'ㄺ'];
const CORONAL: &[char] = &['ㄷ', 'ㅅ', 'ㅆ', 'ㅈ', 'ㅊ', 'ㅌ', 'ㅎ'];
const LABIAL: &[char] = &['ㅂ', 'ㅍ', 'ㄼ', 'ㄿ', 'ㅄ'];
const LENIS: &[char] = &['ㄱ', 'ㄷ', 'ㅂ', 'ㅅ', 'ㅈ'];

/// Words that, after a word-final `ㄹ`, are read tense: mostly bound nouns
/// following an adnominal ending (`할 수`, `갈 거야`, `할 짓`).
const TENSED_AFTER_L: &[char] = &[
    '수', '거', '걸', '게', '건', '것', '겁', '데', '줄', '지', '듯', '바', '적', '짓', '곳',
];

fn tense(c: char) -> char {
    match c {
        'ㄱ' => 'ㄲ',
        'ㄷ' => 'ㄸ',
        'ㅂ' => 'ㅃ',
        'ㅅ' => 'ㅆ',
        'ㅈ' => 'ㅉ',
        c => c,
    }
}

fn aspirate(c: char) -> Option<char> {
    Some(match c {
        'ㄱ' => 'ㅋ',
        'ㄷ' => 'ㅌ',
        'ㅂ' => 'ㅍ',
        'ㅈ' => 'ㅊ',
        'ㅅ' => 'ㅌ',
        _ => return None,
    })
}

/// Splits a cluster final into (kept final, consonant heard as onset).
fn cluster_parts(coda: char) -> (Option<char>, char) {
    match coda {
        'ㄳ' => (Some('ㄱ'), 'ㅅ'),
        'ㄵ' => (Some('ㄴ'), 'ㅈ'),
        'ㄺ' => (Some('ㄹ'), 'ㄱ'),
        'ㄻ' => (Some('ㄹ'), 'ㅁ'),
        'ㄼ' => (Some('ㄹ'), 'ㅂ'),
        'ㄽ' => (Some('ㄹ'), 'ㅅ'),
        'ㄾ' => (Some('ㄹ'), 'ㅌ'),
        'ㄿ' => (Some('ㄹ'), 'ㅍ'),
        'ㅄ' => (Some('ㅂ'), 'ㅅ'),
        c => (None, c),
    }
}

fn build(a: JamoTriple, coda: Option<char>, b: JamoTriple, onset: char) -> Option<(JamoTriple, JamoTriple)> {
    let a2 = JamoTriple::from_letters(a.initial_letter(), a.medial_letter(), coda)?;
    let b2 = JamoTriple::from_letters(onset, b.medial_letter(), b.coda_letter())?;
    (a2 != a || b2 != b).then_some((a2, b2))
}

/// The pronounced spelling of syllable `a` followed by `b`, if it differs.
/// `spaced` pairs are separated by one space and only take `ㄹ` tensification
/// of a bound noun.
pub fn sound_change(a: JamoTriple, b: JamoTriple, spaced: bool) -> Option<(JamoTriple, JamoTriple)> {
    let coda = a.coda_letter()?;
    let onset = b.initial_letter();
    if spaced {
        let tensed = coda == 'ㄹ' && TENSED_AFTER_L.contains(&b.to_char());
        return tensed.then(|| build(a, Some(coda), b, tense(onset)))?;
    }
    // Aspiration: ㅎ before a stop, or a stop before ㅎ.
    if matches!(coda, 'ㅎ' | 'ㄶ' | 'ㅀ') && onset != 'ㅇ' {
        let kept = match coda {
            'ㄶ' => Some('ㄴ'),
            'ㅀ' => Some('ㄹ'),
            _ => None,
        };
        match onset {
            'ㄱ' | 'ㄷ' | 'ㅈ' => return build(a, kept, b, aspirate(onset)?),
            'ㅅ' => return build(a, kept, b, 'ㅆ'),
            _ => {}
        }
    }
    if onset == 'ㅎ' {
        let (kept, moved) = cluster_parts(coda);
        if let Some(asp) = aspirate(moved) {
            return build(a, kept, b, asp);
        }
    }
    // Liaison into a silent onset; a final ㅎ is not pronounced.
    if onset == 'ㅇ' {
        return match coda {
            'ㅇ' => None,
            'ㅎ' => build(a, None, b, 'ㅇ'),
            'ㄶ' => build(a, None, b, 'ㄴ'),
            'ㅀ' => build(a, None, b, 'ㄹ'),
            _ => {
                let (kept, moved) = cluster_parts(coda);
                build(a, kept, b, moved)
            }
        };
    }
    let nasal = |c: char| {
        if VELAR.contains(&c) {
            Some('ㅇ')
        } else if CORONAL.contains(&c) {
            Some('ㄴ')
        } else if LABIAL.contains(&c) {
            Some('ㅁ')
        } else {
            None
        }
    };
    if matches!(onset, 'ㄴ' | 'ㅁ') {
        if let Some(n) = nasal(coda) {
            return build(a, Some(n), b, onset);
        }
    }
    if onset == 'ㄹ' {
        if matches!(coda, 'ㅁ' | 'ㅇ') {
            return build(a, Some(coda), b, 'ㄴ');
        }
        if coda == 'ㄴ' {
            return build(a, Some('ㄹ'), b, 'ㄹ');
        }
        if let Some(n) = nasal(coda).filter(|_| !CORONAL.contains(&coda)) {
            return build(a, Some(n), b, 'ㄴ');
        }
    }
    if onset == 'ㄴ' && matches!(coda, 'ㄹ' | 'ㄾ' | 'ㅀ') {
        return build(a, Some('ㄹ'), b, 'ㄹ');
    }
    let obstruent = VELAR.contains(&coda)
        || LABIAL.contains(&coda)
        || (CORONAL.contains(&coda) && coda != 'ㅎ');
    if obstruent && LENIS.contains(&onset) {
        return build(a, Some(coda), b, tense(onset));
    }
    None
}

/// A syllable pair: positions of both syllables, and whether a space sits between.
#[derive(Debug, Clone, Copy)]
struct Pair {
    left: usize,
    right: usize,
}

impl Pair {
    fn spaced(self) -> bool {
        self.right == self.left + 2
    }
}

fn pairs(units: &[Unit]) -> Vec<Pair> {
    let mut out = Vec::new();
    for i in 0..units.len() {
        if units[i].syllable().is_none() {
            continue;
        }
        if units.get(i + 1).and_then(|u| u.syllable()).is_some() {
            out.push(Pair { left: i, right: i + 1 });
        } else if units.get(i + 1).is_some_and(|u| u.is_space())
            && units.get(i + 2).and_then(|u| u.syllable()).is_some()
        {
            out.push(Pair { left: i, right: i + 2 });
        }
    }
    out
}

fn change_at(units: &[Unit], p: Pair) -> Option<(JamoTriple, JamoTriple)> {
    let a = units[p.left].syllable()?;
    let b = units[p.right].syllable()?;
    sound_change(a, b, p.spaced())
}

/// Rewrites a share of the sound-change sites, left to right. Each selected
/// site is re-evaluated against the text as already rewritten.
pub fn resyllabify(text: &SegmentedText, rate: Rate, chooser: &mut dyn Chooser) -> Result<Rewrite> {
    let units = text.units();
    let eligible: Vec<Pair> = pairs(units)
        .into_iter()
        .filter(|&p| change_at(units, p).is_some())
        .collect();
    let chosen = select_sites(eligible.len(), rate, chooser)?;
    let mut working = units.to_vec();
    let mut dropped = vec![false; units.len()];
    let mut sites = 0;
    for &k in &chosen {
        let p = eligible[k];
        if p.spaced() && dropped[p.left + 1] {
            continue;
        }
        if let Some((a, b)) = change_at(&working, p) {
            working[p.left] = Unit::Syllable(a);
            working[p.right] = Unit::Syllable(b);
            if p.spaced() {
                dropped[p.left + 1] = true;
            }
            sites += 1;
        }
    }
    let mut patch = Patch::from_aligned(units, &working);
    for (i, _) in dropped.iter().enumerate().filter(|(_, d)| **d) {
        patch.delete(i);
    }
    let (text, edits) = patch.finish();
    Ok(Rewrite { text, eligible: eligible.len(), sites, edits })
}
