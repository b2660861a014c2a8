//! The seventeen obfuscation rules.
//!
//! | id | rule | category | rate |
//! |----|------|----------|------|
//! | 1 | initial consonant replacement | phonological | 0.5 |
//! | 2 | medial vowel replacement | phonological | 0.3 |
//! | 3 | final consonant replacement | phonological | 0.5 |
//! | 4 | orthographic resyllabification | phonological | 0.5 |
//! | 5 | initial consonant insertion | phonological | 0.3 |
//! | 6 | medial vowel insertion | phonological | 0.5 |
//! | 7 | final consonant insertion | phonological | 0.5 |
//! | 8 | liaison (forward, reverse) | phonological | 0.3 |
//! | 9 | Hangeul look-alike | iconological | 0.3 |
//! | 10 | cross-script substitution | iconological | 0.5 |
//! | 11 | rotation-based variation | iconological | 0.3 |
//! | 12 | phonetic substitution (Latin) | transliteration | 0.5 |
//! | 13 | phonetic substitution (CJK) | transliteration | 0.3 |
//! | 14 | semantic substitution | transliteration | 0.5 |
//! | 15 | spacing perturbation | syntactic | 0.5 |
//! | 16 | syllable anagram | syntactic | 0.3 |
//! | 17 | symbol/emoji insertion | pragmatic | 0.5 |

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::choose::Rate;

pub mod iconological;
pub mod phonological;
pub mod pragmatic;
pub mod resyllabify;
pub mod syntactic;
pub mod transliteration;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Phonological,
    Iconological,
    Transliteration,
    Syntactic,
    Pragmatic,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Category::Phonological => "phonological",
            Category::Iconological => "iconological",
            Category::Transliteration => "transliteration",
            Category::Syntactic => "syntactic",
            Category::Pragmatic => "pragmatic",
        };
        f.write_str(s)
    }
}

pub const RULE_COUNT: u8 = 17;

/// A registered rule and its rewrite rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuleSpec {
    pub id: u8,
    pub name: &'static str,
    pub category: Category,
    pub tau: Rate,
}

const CATALOG: [(&str, Category, f64); 17] = [
    ("initial consonant replacement", Category::Phonological, 0.5),
    ("medial vowel replacement", Category::Phonological, 0.3),
    ("final consonant replacement", Category::Phonological, 0.5),
    ("orthographic resyllabification", Category::Phonological, 0.5),
    ("initial consonant insertion", Category::Phonological, 0.3),
    ("medial vowel insertion", Category::Phonological, 0.5),
    ("final consonant insertion", Category::Phonological, 0.5),
    ("liaison", Category::Phonological, 0.3),
    ("hangeul look-alike", Category::Iconological, 0.3),
    ("cross-script substitution", Category::Iconological, 0.5),
    ("rotation-based variation", Category::Iconological, 0.3),
    ("phonetic substitution (latin)", Category::Transliteration, 0.5),
    ("phonetic substitution (cjk)", Category::Transliteration, 0.3),
    ("semantic substitution", Category::Transliteration, 0.5),
    ("spacing perturbation", Category::Syntactic, 0.5),
    ("syllable anagram", Category::Syntactic, 0.3),
    ("symbol/emoji insertion", Category::Pragmatic, 0.5),
];

impl RuleSpec {
    pub fn by_id(id: u8) -> Option<RuleSpec> {
        let (name, category, tau) = *CATALOG.get((id as usize).checked_sub(1)?)?;
        Some(RuleSpec {
            id,
            name,
            category,
            tau: Rate::new(tau).expect("catalog rate"),
        })
    }

    pub fn with_tau(mut self, tau: Rate) -> Self {
        self.tau = tau;
        self
    }

    /// Whether provenance for this rule can be replayed backwards.
    pub fn invertible(self) -> bool {
        matches!(self.id, 9 | 10 | 11 | 13 | 15 | 17)
    }
}

/// All seventeen rules in index order with their default rates.
pub fn default_rules() -> Vec<RuleSpec> {
    (1..=RULE_COUNT).map(|id| RuleSpec::by_id(id).expect("catalog id")).collect()
}
