//! Substitution dictionaries.
//!
//! Every table is a plain UTF-8 file, one mapping per line:
//!
//! ```text
//! # comment
//! source<TAB>target<TAB>slot
//! ```
//!
//! `slot` is one of `initial`, `medial`, `final` (a jamo in that position),
//! `jamo` (a jamo letter wherever it occurs), `syllable` (one precomposed
//! syllable) or `phrase` (one or more words). A key may appear on several
//! lines; for jamo tables each line adds an option, for syllable tables the
//! last line wins. Defaults are compiled in; [`Dictionaries::load_dir`]
//! replaces any table whose file exists in the given directory.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::hangul::{self, JamoTriple, Slot};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntrySlot {
    Jamo(Slot),
    AnyJamo,
    Syllable,
    Phrase,
}

impl std::str::FromStr for EntrySlot {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "initial" => EntrySlot::Jamo(Slot::Initial),
            "medial" => EntrySlot::Jamo(Slot::Medial),
            "final" => EntrySlot::Jamo(Slot::Final),
            "jamo" => EntrySlot::AnyJamo,
            "syllable" => EntrySlot::Syllable,
            "phrase" => EntrySlot::Phrase,
            other => return Err(format!("unknown slot `{other}`")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub source: String,
    pub target: String,
    pub slot: EntrySlot,
    pub line: usize,
}

pub fn parse_table(text: &str) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim_end_matches('\r');
        if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = trimmed.split('\t').collect();
        if cols.len() != 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected 3 tab-separated columns, found {}", cols.len()),
            });
        }
        if cols[0].is_empty() || cols[1].is_empty() {
            return Err(Error::Parse { line, message: "empty source or target".into() });
        }
        let slot = cols[2]
            .trim()
            .parse()
            .map_err(|message| Error::Parse { line, message })?;
        out.push(Entry {
            source: cols[0].to_string(),
            target: cols[1].to_string(),
            slot,
            line,
        });
    }
    Ok(out)
}

fn single_char(s: &str) -> Option<char> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

fn bad(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Jamo-to-jamo options keyed by slot and source index, in file order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct JamoMap {
    options: BTreeMap<(Slot, u8), Vec<u8>>,
}

impl JamoMap {
    pub fn from_entries(entries: &[Entry]) -> Result<Self> {
        let mut map = JamoMap::default();
        for e in entries {
            let slot = match e.slot {
                EntrySlot::Jamo(s) => s,
                _ => return Err(bad(e.line, "jamo table needs initial/medial/final slot")),
            };
            let parse = |s: &str| {
                single_char(s)
                    .and_then(|c| hangul::letter_index(slot, c))
                    .ok_or_else(|| bad(e.line, format!("`{s}` is not a {} jamo", slot.as_str())))
            };
            let (src, dst) = (parse(&e.source)?, parse(&e.target)?);
            let opts = map.options.entry((slot, src)).or_default();
            if !opts.contains(&dst) {
                opts.push(dst);
            }
        }
        Ok(map)
    }

    pub fn get(&self, slot: Slot, index: u8) -> &[u8] {
        self.options.get(&(slot, index)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn contains(&self, slot: Slot, from: char, to: char) -> bool {
        match (hangul::letter_index(slot, from), hangul::letter_index(slot, to)) {
            (Some(a), Some(b)) => self.get(slot, a).contains(&b),
            _ => false,
        }
    }

    /// True when no two sources share a target within a slot.
    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.options
            .iter()
            .flat_map(|((slot, _), v)| v.iter().map(move |t| (*slot, *t)))
            .all(|k| seen.insert(k))
    }
}

/// Syllable-to-string table.
pub type SyllableMap = HashMap<char, String>;

fn syllable_map(entries: &[Entry], into: &mut SyllableMap) -> Result<()> {
    for e in entries {
        if e.slot != EntrySlot::Syllable {
            return Err(bad(e.line, "expected `syllable` slot"));
        }
        let key = single_char(&e.source)
            .filter(|&c| hangul::is_syllable(c))
            .ok_or_else(|| bad(e.line, format!("`{}` is not one Hangul syllable", e.source)))?;
        into.insert(key, e.target.clone());
    }
    Ok(())
}

/// Phonological replacement and insertion tables.
#[derive(Debug, Clone)]
pub struct PhonDict {
    pub tense: JamoMap,
    pub aspirated: JamoMap,
    pub coda_variants: JamoMap,
    pub vowel_similar: JamoMap,
    pub diphthong: JamoMap,
}

impl PhonDict {
    /// Replacement targets for a jamo, tense before aspirated before variants.
    pub fn replacements(&self, slot: Slot, index: u8) -> Vec<u8> {
        let tables: &[&JamoMap] = match slot {
            Slot::Initial => &[&self.tense, &self.aspirated],
            Slot::Medial => &[&self.vowel_similar],
            Slot::Final => &[&self.tense, &self.aspirated, &self.coda_variants],
        };
        let mut out: Vec<u8> = Vec::new();
        for t in tables {
            for &x in t.get(slot, index) {
                if !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        out
    }

    /// Diphthong extensions of a medial vowel.
    pub fn glides(&self, medial: u8) -> &[u8] {
        self.diphthong.get(Slot::Medial, medial)
    }
}

/// Visual substitution tables.
#[derive(Debug, Clone)]
pub struct GlyphDict {
    pub hangul: SyllableMap,
    pub cross: SyllableMap,
    pub subsyllabic: HashMap<char, String>,
    pub rotate90: SyllableMap,
    pub rotate180: SyllableMap,
}

impl GlyphDict {
    /// Symbol for a jamo letter, or the letter itself.
    pub fn jamo_glyph(&self, letter: char) -> String {
        self.subsyllabic
            .get(&letter)
            .cloned()
            .unwrap_or_else(|| letter.to_string())
    }

    pub fn has_jamo_glyph(&self, t: JamoTriple) -> bool {
        self.subsyllabic.contains_key(&t.initial_letter())
            || self.subsyllabic.contains_key(&t.medial_letter())
            || t.coda_letter().is_some_and(|c| self.subsyllabic.contains_key(&c))
    }
}

/// Transliteration tables. Latin romanization is computed, not tabulated.
#[derive(Debug, Clone)]
pub struct TranslitDict {
    pub cjk: BTreeMap<char, char>,
    /// Word sequences and their re-spelled rendering, longest key first.
    pub semantic: Vec<(Vec<String>, String)>,
}

impl TranslitDict {
    pub fn cjk_inverse(&self) -> BTreeMap<char, char> {
        self.cjk.iter().map(|(k, v)| (*v, *k)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct Dictionaries {
    pub phon: PhonDict,
    pub glyph: GlyphDict,
    pub translit: TranslitDict,
}

const EMBEDDED: &[(&str, &str)] = &[
    ("tense.tsv", include_str!("../data/tense.tsv")),
    ("aspirated.tsv", include_str!("../data/aspirated.tsv")),
    ("coda_variants.tsv", include_str!("../data/coda_variants.tsv")),
    ("vowel_similar.tsv", include_str!("../data/vowel_similar.tsv")),
    ("diphthong.tsv", include_str!("../data/diphthong.tsv")),
    ("lookalike_hangul.tsv", include_str!("../data/lookalike_hangul.tsv")),
    ("lookalike_cross.tsv", include_str!("../data/lookalike_cross.tsv")),
    ("subsyllabic.tsv", include_str!("../data/subsyllabic.tsv")),
    ("rotate90.tsv", include_str!("../data/rotate90.tsv")),
    ("rotate180.tsv", include_str!("../data/rotate180.tsv")),
    ("cjk.tsv", include_str!("../data/cjk.tsv")),
    ("semantic.tsv", include_str!("../data/semantic.tsv")),
];

/// Names of the table files understood by [`Dictionaries::load_dir`].
pub fn table_names() -> impl Iterator<Item = &'static str> {
    EMBEDDED.iter().map(|(n, _)| *n)
}

impl Dictionaries {
    pub fn embedded() -> Self {
        Self::build(|name| {
            Ok(EMBEDDED.iter().find(|(n, _)| *n == name).map(|(_, t)| t.to_string()))
        })
        .expect("embedded dictionaries are valid")
    }

    /// Embedded defaults, with each table replaced by `dir/<name>` when present.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        Self::build(|name| {
            let path = dir.join(name);
            if path.exists() {
                Ok(Some(fs::read_to_string(path)?))
            } else {
                Ok(EMBEDDED.iter().find(|(n, _)| *n == name).map(|(_, t)| t.to_string()))
            }
        })
    }

    fn build(read: impl Fn(&str) -> Result<Option<String>>) -> Result<Self> {
        let table = |name: &str| -> Result<Vec<Entry>> {
            let text = read(name)?.unwrap_or_default();
            parse_table(&text).map_err(|e| match e {
                Error::Parse { line, message } => Error::Parse {
                    line,
                    message: format!("{name}: {message}"),
                },
                other => other,
            })
        };
        let jamo = |name: &str| -> Result<JamoMap> {
            JamoMap::from_entries(&table(name)?).map_err(|e| match e {
                Error::Parse { line, message } => Error::Parse {
                    line,
                    message: format!("{name}: {message}"),
                },
                other => other,
            })
        };

        let phon = PhonDict {
            tense: jamo("tense.tsv")?,
            aspirated: jamo("aspirated.tsv")?,
            coda_variants: jamo("coda_variants.tsv")?,
            vowel_similar: jamo("vowel_similar.tsv")?,
            diphthong: jamo("diphthong.tsv")?,
        };

        let mut hangul_map = SyllableMap::new();
        syllable_map(&table("lookalike_hangul.tsv")?, &mut hangul_map)?;
        let mut cross = SyllableMap::new();
        syllable_map(&table("lookalike_cross.tsv")?, &mut cross)?;
        let mut rotate90 = generated_rotate90();
        syllable_map(&table("rotate90.tsv")?, &mut rotate90)?;
        let mut rotate180 = generated_rotate180();
        syllable_map(&table("rotate180.tsv")?, &mut rotate180)?;

        let mut subsyllabic = HashMap::new();
        let mut targets = std::collections::HashSet::new();
        for e in table("subsyllabic.tsv")? {
            let key = single_char(&e.source)
                .filter(|&c| e.slot == EntrySlot::AnyJamo && hangul::is_compat_jamo(c))
                .ok_or_else(|| bad(e.line, "subsyllabic.tsv: expected a jamo letter with `jamo` slot"))?;
            if !targets.insert(e.target.clone()) {
                return Err(bad(e.line, format!("subsyllabic.tsv: `{}` is used twice", e.target)));
            }
            subsyllabic.insert(key, e.target);
        }

        let mut cjk = BTreeMap::new();
        let mut seen = std::collections::HashSet::new();
        for e in table("cjk.tsv")? {
            let key = single_char(&e.source).filter(|&c| hangul::is_syllable(c));
            let value = single_char(&e.target);
            match (key, value, e.slot) {
                (Some(k), Some(v), EntrySlot::Syllable) => {
                    if !seen.insert(v) {
                        return Err(bad(e.line, format!("cjk.tsv: `{v}` maps from two syllables")));
                    }
                    cjk.insert(k, v);
                }
                _ => return Err(bad(e.line, "cjk.tsv: expected syllable -> one character")),
            }
        }

        let mut semantic = Vec::new();
        for e in table("semantic.tsv")? {
            if e.slot != EntrySlot::Phrase {
                return Err(bad(e.line, "semantic.tsv: expected `phrase` slot"));
            }
            let words: Vec<String> = e.source.split_whitespace().map(str::to_string).collect();
            semantic.push((words, e.target));
        }
        // Longest key first so multi-word phrases win over their first word.
        semantic.sort_by(|a, b| {
            let len = |k: &Vec<String>| k.iter().map(|w| w.chars().count()).sum::<usize>() + k.len();
            len(&b.0).cmp(&len(&a.0))
        });

        Ok(Dictionaries {
            phon,
            glyph: GlyphDict {
                hangul: hangul_map,
                cross,
                subsyllabic,
                rotate90,
                rotate180,
            },
            translit: TranslitDict { cjk, semantic },
        })
    }
}

fn letter(c: char, slot: Slot) -> u8 {
    hangul::letter_index(slot, c).expect("table letter")
}

/// Open syllables with a vertical vowel turned a quarter: the onset moves
/// on top and the vowel becomes horizontal (`비 -> 뜨`, `버 -> 또`).
pub fn generated_rotate90() -> SyllableMap {
    let onsets = [('ㅂ', 'ㄸ'), ('ㅁ', 'ㅁ'), ('ㅇ', 'ㅇ')];
    let vowels = [('ㅏ', 'ㅜ'), ('ㅓ', 'ㅗ'), ('ㅣ', 'ㅡ')];
    let mut map = SyllableMap::new();
    for (from_c, to_c) in onsets {
        for (from_v, to_v) in vowels {
            let src = JamoTriple::new(letter(from_c, Slot::Initial), letter(from_v, Slot::Medial), 0)
                .expect("valid")
                .to_char();
            let dst = JamoTriple::new(letter(to_c, Slot::Initial), letter(to_v, Slot::Medial), 0)
                .expect("valid")
                .to_char();
            map.insert(src, dst.to_string());
        }
    }
    map
}

/// Closed syllables with a horizontal vowel turned upside down: onset and
/// coda trade places, each rotated, and the vowel flips (`눈 -> 곡`).
/// Every generated entry is its own inverse.
pub fn generated_rotate180() -> SyllableMap {
    let consonants = [('ㄱ', 'ㄴ'), ('ㄴ', 'ㄱ'), ('ㄹ', 'ㄹ'), ('ㅁ', 'ㅁ'), ('ㅇ', 'ㅇ'), ('ㅍ', 'ㅍ')];
    let vowels = [('ㅗ', 'ㅜ'), ('ㅜ', 'ㅗ'), ('ㅛ', 'ㅠ'), ('ㅠ', 'ㅛ'), ('ㅡ', 'ㅡ')];
    let mut map = SyllableMap::new();
    for (onset, onset_rot) in consonants {
        for (v, v_rot) in vowels {
            for (coda, coda_rot) in consonants {
                let src = JamoTriple::new(
                    letter(onset, Slot::Initial),
                    letter(v, Slot::Medial),
                    letter(coda, Slot::Final),
                )
                .expect("valid");
                let dst = JamoTriple::new(
                    letter(coda_rot, Slot::Initial),
                    letter(v_rot, Slot::Medial),
                    letter(onset_rot, Slot::Final),
                )
                .expect("valid");
                map.insert(src.to_char(), dst.to_char().to_string());
            }
        }
    }
    map
}
