//! Rule-based obfuscation of Korean text.
//!
//! Text is handled as a sequence of [`hangul::Unit`]s, one per scalar value,
//! so that every rule can report exactly what it changed. The seventeen
//! rules live in [`rules`]; [`engine`] combines them into paired rewrites and
//! [`dataset`] runs that over a corpus.

pub mod choose;
pub mod cli;
pub mod config;
pub mod dataset;
pub mod dict;
pub mod engine;
pub mod error;
pub mod hangul;
pub mod metrics;
pub mod patch;
pub mod remote;
pub mod rules;

pub use choose::{Chooser, FirstChoice, Rate, Scripted};
pub use engine::{Level, ObfuscationResult, Obfuscator};
pub use error::{Error, Result};
pub use hangul::{compose, decompose, segment, JamoTriple, SegmentedText, Slot, Unit};
pub use patch::{Edit, Rewrite};
