//! Unit-level edits with provenance.
//!
//! Rules describe their output as a [`Patch`] over the input units: each
//! position may be replaced (by zero or more units) and each gap between
//! positions may receive inserted units. Finishing a patch renders the new
//! text and records every changed span as an [`Edit`] in output offsets.

use serde::{Deserialize, Serialize};

use crate::hangul::{SegmentedText, Unit};

/// One changed span. `at` is a char offset into the rewritten text where
/// `after` starts; replacing `after` with `before` there undoes the edit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edit {
    pub at: usize,
    pub before: String,
    pub after: String,
}

/// Result of one rule application.
#[derive(Debug, Clone, PartialEq)]
pub struct Rewrite {
    pub text: SegmentedText,
    /// How many targets were eligible before selection.
    pub eligible: usize,
    /// How many selected targets were actually rewritten.
    pub sites: usize,
    pub edits: Vec<Edit>,
}

impl Rewrite {
    pub fn render(&self) -> String {
        self.text.render()
    }
}

pub struct Patch<'a> {
    input: &'a [Unit],
    replace: Vec<Option<Vec<Unit>>>,
    insert: Vec<Vec<Unit>>,
}

impl<'a> Patch<'a> {
    pub fn new(input: &'a [Unit]) -> Self {
        Self {
            input,
            replace: vec![None; input.len()],
            insert: vec![Vec::new(); input.len() + 1],
        }
    }

    /// Builds a patch from a same-length rewritten copy of the input.
    pub fn from_aligned(input: &'a [Unit], rewritten: &[Unit]) -> Self {
        debug_assert_eq!(input.len(), rewritten.len());
        let mut p = Self::new(input);
        for (i, (a, b)) in input.iter().zip(rewritten).enumerate() {
            if a != b {
                p.replace[i] = Some(vec![*b]);
            }
        }
        p
    }

    pub fn replace(&mut self, pos: usize, units: Vec<Unit>) {
        self.replace[pos] = Some(units);
    }

    pub fn set(&mut self, pos: usize, unit: Unit) {
        self.replace[pos] = Some(vec![unit]);
    }

    pub fn delete(&mut self, pos: usize) {
        self.replace[pos] = Some(Vec::new());
    }

    /// Inserts before input position `gap` (`gap == len` appends).
    pub fn insert(&mut self, gap: usize, units: impl IntoIterator<Item = Unit>) {
        self.insert[gap].extend(units);
    }

    fn changed(&self, pos: usize) -> bool {
        match &self.replace[pos] {
            Some(r) => r.as_slice() != [self.input[pos]],
            None => false,
        }
    }

    pub fn finish(self) -> (SegmentedText, Vec<Edit>) {
        let n = self.input.len();
        let mut out: Vec<Unit> = Vec::with_capacity(n);
        let mut edits = Vec::new();
        let mut i = 0;
        while i <= n {
            if !self.insert[i].is_empty() {
                edits.push(Edit {
                    at: out.len(),
                    before: String::new(),
                    after: render(&self.insert[i]),
                });
                out.extend_from_slice(&self.insert[i]);
            }
            if i == n {
                break;
            }
            if !self.changed(i) {
                out.push(self.input[i]);
                i += 1;
                continue;
            }
            let at = out.len();
            let mut j = i;
            let mut after = Vec::new();
            loop {
                match &self.replace[j] {
                    Some(r) => after.extend_from_slice(r),
                    None => after.push(self.input[j]),
                }
                j += 1;
                if j >= n || !self.changed(j) || !self.insert[j].is_empty() {
                    break;
                }
            }
            edits.push(Edit {
                at,
                before: render(&self.input[i..j]),
                after: render(&after),
            });
            out.extend(after);
            i = j;
        }
        (SegmentedText::new(out), edits)
    }
}

fn render(units: &[Unit]) -> String {
    units.iter().map(|u| u.to_char()).collect()
}

pub fn units_of(s: &str) -> Vec<Unit> {
    s.chars().map(Unit::from_char).collect()
}

/// Edits turning `before` into `after`, from a character-level longest
/// common subsequence. Used when a rewrite comes back as plain text.
pub fn diff_edits(before: &str, after: &str) -> Vec<Edit> {
    let a: Vec<char> = before.chars().collect();
    let b: Vec<char> = after.chars().collect();
    let (n, m) = (a.len(), b.len());
    // lcs[i][j]: LCS length of a[i..] and b[j..].
    let mut lcs = vec![vec![0u32; m + 1]; n + 1];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            lcs[i][j] = if a[i] == b[j] {
                lcs[i + 1][j + 1] + 1
            } else {
                lcs[i + 1][j].max(lcs[i][j + 1])
            };
        }
    }
    let mut edits = Vec::new();
    let mut pending: Option<Edit> = None;
    let (mut i, mut j) = (0, 0);
    while i < n || j < m {
        if i < n && j < m && a[i] == b[j] {
            edits.extend(pending.take());
            i += 1;
            j += 1;
            continue;
        }
        let e = pending.get_or_insert_with(|| Edit { at: j, before: String::new(), after: String::new() });
        if j < m && (i == n || lcs[i][j + 1] >= lcs[i + 1][j]) {
            e.after.push(b[j]);
            j += 1;
        } else {
            e.before.push(a[i]);
            i += 1;
        }
    }
    edits.extend(pending);
    edits
}

/// Undoes `edits` on `text`, right to left. Fails if a recorded span does
/// not match the text.
pub fn revert(text: &str, edits: &[Edit]) -> crate::Result<String> {
    let mut chars: Vec<char> = text.chars().collect();
    let mut order: Vec<&Edit> = edits.iter().collect();
    order.sort_by_key(|e| e.at);
    for e in order.into_iter().rev() {
        let after: Vec<char> = e.after.chars().collect();
        let end = e.at + after.len();
        if end > chars.len() || chars[e.at..end] != after[..] {
            return Err(crate::Error::ProvenanceMismatch {
                at: e.at,
                expected: e.after.clone(),
            });
        }
        chars.splice(e.at..end, e.before.chars());
    }
    Ok(chars.into_iter().collect())
}
