//! Hangul syllable arithmetic and lossless segmentation.
//!
//! A precomposed syllable `s` in `U+AC00..=U+D7A3` encodes
//! `s = 0xAC00 + (initial * 21 + medial) * 28 + coda`, where `coda == 0`
//! means the syllable has no final consonant. Jamo are exposed as
//! compatibility letters (`ㄱ`, `ㅏ`, ...) because that is what appears in
//! running text when a rule leaves a bare letter behind.

use std::fmt;

use crate::error::{Error, Result};

pub const SYLLABLE_BASE: u32 = 0xAC00;
pub const SYLLABLE_LAST: u32 = 0xD7A3;
pub const SYLLABLE_COUNT: u32 = 11_172;

pub const INITIAL_COUNT: u8 = 19;
pub const MEDIAL_COUNT: u8 = 21;
pub const CODA_COUNT: u8 = 28;

const MEDIAL_CODA: u32 = 21 * 28;

// Conjoining jamo blocks, used only when recomposing decomposed input.
const L_BASE: u32 = 0x1100;
const V_BASE: u32 = 0x1161;
const T_BASE: u32 = 0x11A7;

pub const INITIALS: [char; 19] = [
    'ㄱ', 'ㄲ', 'ㄴ', 'ㄷ', 'ㄸ', 'ㄹ', 'ㅁ', 'ㅂ', 'ㅃ', 'ㅅ', 'ㅆ', 'ㅇ', 'ㅈ', 'ㅉ', 'ㅊ', 'ㅋ', 'ㅌ',
    'ㅍ', 'ㅎ',
];

pub const MEDIALS: [char; 21] = [
    'ㅏ', 'ㅐ', 'ㅑ', 'ㅒ', 'ㅓ', 'ㅔ', 'ㅕ', 'ㅖ', 'ㅗ', 'ㅘ', 'ㅙ', 'ㅚ', 'ㅛ', 'ㅜ', 'ㅝ', 'ㅞ', 'ㅟ',
    'ㅠ', 'ㅡ', 'ㅢ', 'ㅣ',
];

/// Final consonants; slot 0 is the empty coda.
pub const CODAS: [Option<char>; 28] = [
    None,
    Some('ㄱ'),
    Some('ㄲ'),
    Some('ㄳ'),
    Some('ㄴ'),
    Some('ㄵ'),
    Some('ㄶ'),
    Some('ㄷ'),
    Some('ㄹ'),
    Some('ㄺ'),
    Some('ㄻ'),
    Some('ㄼ'),
    Some('ㄽ'),
    Some('ㄾ'),
    Some('ㄿ'),
    Some('ㅀ'),
    Some('ㅁ'),
    Some('ㅂ'),
    Some('ㅄ'),
    Some('ㅅ'),
    Some('ㅆ'),
    Some('ㅇ'),
    Some('ㅈ'),
    Some('ㅊ'),
    Some('ㅋ'),
    Some('ㅌ'),
    Some('ㅍ'),
    Some('ㅎ'),
];

/// Which part of a syllable block a jamo occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Initial,
    Medial,
    Final,
}

impl Slot {
    pub fn as_str(self) -> &'static str {
        match self {
            Slot::Initial => "initial",
            Slot::Medial => "medial",
            Slot::Final => "final",
        }
    }
}

impl std::str::FromStr for Slot {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "initial" => Ok(Slot::Initial),
            "medial" => Ok(Slot::Medial),
            "final" => Ok(Slot::Final),
            other => Err(Error::InvalidArgument(format!("unknown jamo slot `{other}`"))),
        }
    }
}

/// A syllable block as `(initial, medial, coda)` indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct JamoTriple {
    initial: u8,
    medial: u8,
    coda: u8,
}

impl JamoTriple {
    pub fn new(initial: u8, medial: u8, coda: u8) -> Result<Self> {
        if initial >= INITIAL_COUNT || medial >= MEDIAL_COUNT || coda >= CODA_COUNT {
            return Err(Error::IndexOutOfRange { initial, medial, coda });
        }
        Ok(Self { initial, medial, coda })
    }

    /// Builds a triple from compatibility letters; `coda` of `None` is an open syllable.
    pub fn from_letters(initial: char, medial: char, coda: Option<char>) -> Option<Self> {
        Some(Self {
            initial: initial_index(initial)?,
            medial: medial_index(medial)?,
            coda: match coda {
                None => 0,
                Some(c) => coda_index(c)?,
            },
        })
    }

    pub fn initial(self) -> u8 {
        self.initial
    }

    pub fn medial(self) -> u8 {
        self.medial
    }

    /// Final-consonant index; 0 when the syllable is open.
    pub fn coda(self) -> u8 {
        self.coda
    }

    pub fn has_coda(self) -> bool {
        self.coda != 0
    }

    pub fn get(self, slot: Slot) -> u8 {
        match slot {
            Slot::Initial => self.initial,
            Slot::Medial => self.medial,
            Slot::Final => self.coda,
        }
    }

    pub fn with(self, slot: Slot, index: u8) -> Self {
        let mut out = self;
        match slot {
            Slot::Initial => {
                debug_assert!(index < INITIAL_COUNT);
                out.initial = index;
            }
            Slot::Medial => {
                debug_assert!(index < MEDIAL_COUNT);
                out.medial = index;
            }
            Slot::Final => {
                debug_assert!(index < CODA_COUNT);
                out.coda = index;
            }
        }
        out
    }

    pub fn initial_letter(self) -> char {
        INITIALS[self.initial as usize]
    }

    pub fn medial_letter(self) -> char {
        MEDIALS[self.medial as usize]
    }

    pub fn coda_letter(self) -> Option<char> {
        CODAS[self.coda as usize]
    }

    pub fn to_char(self) -> char {
        compose(self)
    }
}

impl fmt::Display for JamoTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

pub fn is_syllable(c: char) -> bool {
    (SYLLABLE_BASE..=SYLLABLE_LAST).contains(&(c as u32))
}

/// Splits a precomposed syllable into its jamo indices.
pub fn decompose(c: char) -> Result<JamoTriple> {
    if !is_syllable(c) {
        return Err(Error::NotHangulSyllable(c));
    }
    let offset = c as u32 - SYLLABLE_BASE;
    Ok(JamoTriple {
        initial: (offset / MEDIAL_CODA) as u8,
        medial: ((offset % MEDIAL_CODA) / 28) as u8,
        coda: (offset % 28) as u8,
    })
}

pub fn compose(triple: JamoTriple) -> char {
    let code = SYLLABLE_BASE
        + (triple.initial as u32 * 21 + triple.medial as u32) * 28
        + triple.coda as u32;
    // Every in-range triple lands inside the syllable block.
    char::from_u32(code).expect("syllable arithmetic stays in range")
}

/// Checked composition from raw indices.
pub fn compose_indices(initial: u8, medial: u8, coda: u8) -> Result<char> {
    JamoTriple::new(initial, medial, coda).map(compose)
}

pub fn initial_index(c: char) -> Option<u8> {
    INITIALS.iter().position(|&x| x == c).map(|i| i as u8)
}

pub fn medial_index(c: char) -> Option<u8> {
    MEDIALS.iter().position(|&x| x == c).map(|i| i as u8)
}

pub fn coda_index(c: char) -> Option<u8> {
    CODAS.iter().position(|&x| x == Some(c)).map(|i| i as u8)
}

pub fn letter_index(slot: Slot, c: char) -> Option<u8> {
    match slot {
        Slot::Initial => initial_index(c),
        Slot::Medial => medial_index(c),
        Slot::Final => coda_index(c),
    }
}

pub fn letter(slot: Slot, index: u8) -> Option<char> {
    match slot {
        Slot::Initial => INITIALS.get(index as usize).copied(),
        Slot::Medial => MEDIALS.get(index as usize).copied(),
        Slot::Final => CODAS.get(index as usize).copied().flatten(),
    }
}

/// Compatibility jamo letters (`ㄱ`..`ㅣ`).
pub fn is_compat_jamo(c: char) -> bool {
    ('\u{3131}'..='\u{3163}').contains(&c)
}

/// Splits a final consonant into the part that stays and the part that can
/// move to the next onset: `ㄺ -> (ㄹ, ㄱ)`, `ㄴ -> (none, ㄴ)`.
pub fn split_coda(coda: u8) -> (u8, char) {
    let c = CODAS[coda as usize].expect("split_coda on empty coda");
    let (keep, moved) = match c {
        'ㄳ' => ('ㄱ', 'ㅅ'),
        'ㄵ' => ('ㄴ', 'ㅈ'),
        'ㄶ' => ('ㄴ', 'ㅎ'),
        'ㄺ' => ('ㄹ', 'ㄱ'),
        'ㄻ' => ('ㄹ', 'ㅁ'),
        'ㄼ' => ('ㄹ', 'ㅂ'),
        'ㄽ' => ('ㄹ', 'ㅅ'),
        'ㄾ' => ('ㄹ', 'ㅌ'),
        'ㄿ' => ('ㄹ', 'ㅍ'),
        'ㅀ' => ('ㄹ', 'ㅎ'),
        'ㅄ' => ('ㅂ', 'ㅅ'),
        single => return (0, single),
    };
    (coda_index(keep).expect("cluster head is a coda"), moved)
}

/// The consonant a coda contributes when it is pronounced as an onset.
/// `ㅇ` has no onset value and yields `None`.
pub fn coda_as_onset(coda: u8) -> Option<u8> {
    if coda == 0 {
        return None;
    }
    let (_, moved) = split_coda(coda);
    if moved == 'ㅇ' {
        return None;
    }
    initial_index(moved)
}

/// The coda a consonant becomes when written in the final slot.
/// Tense stops that cannot close a syllable (`ㄸ ㅃ ㅉ`) return `None`.
pub fn onset_as_coda(initial: u8) -> Option<u8> {
    coda_index(INITIALS[initial as usize])
}

/// One scalar of segmented text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unit {
    Syllable(JamoTriple),
    Space(char),
    Other(char),
}

impl Unit {
    pub fn from_char(c: char) -> Self {
        if let Ok(t) = decompose(c) {
            Unit::Syllable(t)
        } else if c.is_whitespace() {
            Unit::Space(c)
        } else {
            Unit::Other(c)
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Unit::Syllable(t) => compose(t),
            Unit::Space(c) | Unit::Other(c) => c,
        }
    }

    pub fn syllable(self) -> Option<JamoTriple> {
        match self {
            Unit::Syllable(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_space(self) -> bool {
        matches!(self, Unit::Space(_))
    }
}

/// Text as a sequence of one-scalar units. Unit index equals char offset in
/// the rendered string.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SegmentedText {
    units: Vec<Unit>,
}

impl SegmentedText {
    pub fn new(units: Vec<Unit>) -> Self {
        Self { units }
    }

    pub fn units(&self) -> &[Unit] {
        &self.units
    }

    pub fn into_units(self) -> Vec<Unit> {
        self.units
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn render(&self) -> String {
        self.units.iter().map(|u| u.to_char()).collect()
    }

    pub fn syllable_count(&self) -> usize {
        self.units.iter().filter(|u| u.syllable().is_some()).count()
    }

    /// Word tokens as unit ranges: maximal runs of non-space units.
    pub fn words(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, u) in self.units.iter().enumerate() {
            match (u.is_space(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    out.push(s..i);
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push(s..self.units.len());
        }
        out
    }
}

impl fmt::Display for SegmentedText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for u in &self.units {
            write!(f, "{}", u.to_char())?;
        }
        Ok(())
    }
}

/// Lossless segmentation: `segment(t).render() == t` for every string.
pub fn segment(text: &str) -> SegmentedText {
    SegmentedText {
        units: text.chars().map(Unit::from_char).collect(),
    }
}

/// Recomposes conjoining-jamo sequences (`U+1100` L, `U+1161` V, optional
/// `U+11A8` T) into precomposed syllables. Sequences that do not form a
/// valid modern block are left untouched.
pub fn compose_conjoining(text: &str) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < chars.len() {
        let l = chars[i] as u32;
        if (L_BASE..L_BASE + INITIAL_COUNT as u32).contains(&l) && i + 1 < chars.len() {
            let v = chars[i + 1] as u32;
            if (V_BASE..V_BASE + MEDIAL_COUNT as u32).contains(&v) {
                let mut coda = 0;
                if let Some(&t) = chars.get(i + 2) {
                    let t = t as u32;
                    if (T_BASE + 1..T_BASE + CODA_COUNT as u32).contains(&t) {
                        coda = (t - T_BASE) as u8;
                    }
                }
                let triple = JamoTriple {
                    initial: (l - L_BASE) as u8,
                    medial: (v - V_BASE) as u8,
                    coda,
                };
                out.push(compose(triple));
                i += if coda == 0 { 2 } else { 3 };
                continue;
            }
        }
        // A precomposed open syllable followed by a trailing conjoining T.
        if let (Ok(t), Some(&next)) = (decompose(chars[i]), chars.get(i + 1)) {
            let n = next as u32;
            if !t.has_coda() && (T_BASE + 1..T_BASE + CODA_COUNT as u32).contains(&n) {
                out.push(compose(t.with(Slot::Final, (n - T_BASE) as u8)));
                i += 2;
                continue;
            }
        }
        out.push(chars[i]);
        i += 1;
    }
    out
}
