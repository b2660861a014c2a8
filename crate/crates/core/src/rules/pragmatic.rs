//! Context-irrelevant symbol insertion (rule 17).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::choose::{Chooser, Rate};
use crate::error::{Error, Result};
use crate::hangul::SegmentedText;
use crate::patch::{units_of, Patch, Rewrite};

/// A symbol to insert. Pairs wrap a whole word and are written `"open close"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Symbol {
    Single(String),
    Pair(String, String),
}

impl FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        match parts.as_slice() {
            [one] => Ok(Symbol::Single(one.to_string())),
            [open, close] => Ok(Symbol::Pair(open.to_string(), close.to_string())),
            _ => Err(Error::InvalidArgument(format!("bad symbol `{s}`"))),
        }
    }
}

impl TryFrom<String> for Symbol {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Symbol> for String {
    fn from(s: Symbol) -> String {
        s.to_string()
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Single(s) => f.write_str(s),
            Symbol::Pair(a, b) => write!(f, "{a} {b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SymbolPool(pub Vec<Symbol>);

impl Default for SymbolPool {
    fn default() -> Self {
        let pool = ["°♡", "《 》", "≥ㅅ≤", "♥", "‥", "∥", "〃", "◉", "♡", "【 】", "「 」"];
        SymbolPool(pool.iter().map(|s| s.parse().expect("default symbol")).collect())
    }
}

impl SymbolPool {
    pub fn parse_list(s: &str) -> Result<Self> {
        let symbols = s
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        Ok(SymbolPool(symbols))
    }

    /// Every string this pool can insert, longest first.
    pub fn pieces(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self
            .0
            .iter()
            .flat_map(|s| match s {
                Symbol::Single(a) => vec![a.as_str()],
                Symbol::Pair(a, b) => vec![a.as_str(), b.as_str()],
            })
            .collect();
        v.sort_by_key(|p| std::cmp::Reverse(p.chars().count()));
        v.dedup();
        v
    }
}

/// Removes every pool symbol from `text`.
pub fn strip_symbols(text: &str, pool: &SymbolPool) -> String {
    let pieces = pool.pieces();
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    'outer: while !rest.is_empty() {
        for p in &pieces {
            if let Some(r) = rest.strip_prefix(p) {
                rest = r;
                continue 'outer;
            }
        }
        let c = rest.chars().next().expect("non-empty");
        out.push(c);
        rest = &rest[c.len_utf8()..];
    }
    out
}

/// Inserts up to `ceil(rate * units)` symbols between units. A bracket pair
/// wraps the word at the chosen gap and counts as one insertion.
pub fn insert_symbols(
    text: &SegmentedText,
    rate: Rate,
    pool: &SymbolPool,
    chooser: &mut dyn Chooser,
) -> Result<Rewrite> {
    if pool.0.is_empty() {
        return Err(Error::EmptyPool);
    }
    let units = text.units();
    if units.is_empty() {
        return Err(Error::NoEligibleTarget);
    }
    // Gap g sits after unit g - 1.
    let gaps = units.len();
    let chosen = chooser.subset(gaps, rate.budget(gaps));
    let words = text.words();
    let mut wrapped = vec![false; words.len()];
    let mut patch = Patch::new(units);
    let mut sites = 0;
    for &k in &chosen {
        let gap = k + 1;
        let symbol = &pool.0[chooser.pick(pool.0.len())];
        // The word ending at or running through the gap, else the one starting there.
        let word = words
            .iter()
            .position(|w| w.contains(&(gap - 1)))
            .or_else(|| words.iter().position(|w| w.start == gap))
            .filter(|&w| !wrapped[w]);
        match (symbol, word) {
            (Symbol::Pair(open, close), Some(w)) => {
                wrapped[w] = true;
                patch.insert(words[w].start, units_of(open));
                patch.insert(words[w].end, units_of(close));
            }
            (Symbol::Pair(..), None) => continue,
            (Symbol::Single(s), _) => patch.insert(gap, units_of(s)),
        }
        sites += 1;
    }
    let (out, edits) = patch.finish();
    Ok(Rewrite { text: out, eligible: gaps, sites, edits })
}
