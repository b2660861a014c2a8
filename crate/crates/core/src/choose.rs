//! Sources of choice for the rule operations.
//!
//! Every rule asks a [`Chooser`] which eligible sites to rewrite and which
//! dictionary target to use. Any `rand` generator is a chooser; the
//! deterministic choosers here pin those decisions in tests and goldens.

use std::collections::VecDeque;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub trait Chooser {
    /// An index in `0..n`. `n` is always positive.
    fn pick(&mut self, n: usize) -> usize;

    /// `k` distinct indices from `0..n`, ascending. `k <= n`.
    fn subset(&mut self, n: usize, k: usize) -> Vec<usize>;
}

impl<R: RngCore + ?Sized> Chooser for R {
    fn pick(&mut self, n: usize) -> usize {
        use rand::Rng;
        self.gen_range(0..n)
    }

    fn subset(&mut self, n: usize, k: usize) -> Vec<usize> {
        let mut v = rand::seq::index::sample(self, n, k).into_vec();
        v.sort_unstable();
        v
    }
}

/// Always takes the first option and the first `k` sites.
#[derive(Debug, Default, Clone, Copy)]
pub struct FirstChoice;

impl Chooser for FirstChoice {
    fn pick(&mut self, _n: usize) -> usize {
        0
    }

    fn subset(&mut self, _n: usize, k: usize) -> Vec<usize> {
        (0..k).collect()
    }
}

/// Replays queued answers, falling back to [`FirstChoice`] once a queue runs dry.
/// Picks are reduced modulo `n`; subsets are truncated to `k` and filtered to `< n`.
#[derive(Debug, Default, Clone)]
pub struct Scripted {
    picks: VecDeque<usize>,
    subsets: VecDeque<Vec<usize>>,
}

impl Scripted {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn picks(mut self, picks: impl IntoIterator<Item = usize>) -> Self {
        self.picks.extend(picks);
        self
    }

    pub fn subset_of(mut self, sites: impl IntoIterator<Item = usize>) -> Self {
        self.subsets.push_back(sites.into_iter().collect());
        self
    }
}

impl Chooser for Scripted {
    fn pick(&mut self, n: usize) -> usize {
        self.picks.pop_front().map(|p| p % n).unwrap_or(0)
    }

    fn subset(&mut self, n: usize, k: usize) -> Vec<usize> {
        match self.subsets.pop_front() {
            Some(mut s) => {
                s.retain(|&i| i < n);
                s.sort_unstable();
                s.dedup();
                s.truncate(k);
                s
            }
            None => (0..k).collect(),
        }
    }
}

/// Fraction of eligible targets a rule rewrites.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Rate(f64);

impl Rate {
    pub const ZERO: Rate = Rate(0.0);
    pub const ONE: Rate = Rate(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidArgument(format!(
                "rate {value} outside [0, 1]"
            )));
        }
        Ok(Rate(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `ceil(rate * eligible)`, capped at `eligible`. The epsilon keeps
    /// `0.3 * 10` from rounding up to 4.
    pub fn budget(self, eligible: usize) -> usize {
        let raw = (self.0 * eligible as f64 - 1e-9).ceil();
        (raw.max(0.0) as usize).min(eligible)
    }
}

impl TryFrom<f64> for Rate {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        Rate::new(v)
    }
}

impl From<Rate> for f64 {
    fn from(r: Rate) -> f64 {
        r.0
    }
}

/// Chooses which of `eligible` sites to rewrite under `rate`.
pub fn select_sites(
    eligible: usize,
    rate: Rate,
    chooser: &mut dyn Chooser,
) -> Result<Vec<usize>> {
    if eligible == 0 {
        return Err(Error::NoEligibleTarget);
    }
    let k = rate.budget(eligible);
    Ok(chooser.subset(eligible, k))
}
