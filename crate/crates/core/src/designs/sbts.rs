//! Weighted triple systems whose pair sums are consecutive.

use std::collections::BTreeMap;
use std::fmt;

use crate::cube::consecutive_report;
use crate::error::{Error, Result};
use crate::VerificationReport;

/// Nonnegative weights on the 3-subsets of `{1..v}`; absent triples weigh 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SbtsWeights {
    v: usize,
    weights: BTreeMap<[usize; 3], u64>,
}

impl SbtsWeights {
    pub fn new(v: usize) -> Self {
        SbtsWeights {
            v,
            weights: BTreeMap::new(),
        }
    }

    pub fn v(&self) -> usize {
        self.v
    }

    /// Sets the weight of `{a, b, c}` (1-based, any order).
    pub fn set(&mut self, triple: [usize; 3], weight: u64) -> Result<()> {
        let key = self.normalise(triple)?;
        if weight == 0 {
            self.weights.remove(&key);
        } else {
            self.weights.insert(key, weight);
        }
        Ok(())
    }

    pub fn get(&self, triple: [usize; 3]) -> u64 {
        self.normalise(triple)
            .ok()
            .and_then(|k| self.weights.get(&k).copied())
            .unwrap_or(0)
    }

    /// Triples with positive weight, sorted.
    pub fn support(&self) -> impl Iterator<Item = ([usize; 3], u64)> + '_ {
        self.weights.iter().map(|(k, &w)| (*k, w))
    }

    pub fn from_triples(v: usize, triples: &[([usize; 3], u64)]) -> Result<Self> {
        let mut out = SbtsWeights::new(v);
        for &(t, w) in triples {
            out.set(t, w)?;
        }
        Ok(out)
    }

    fn normalise(&self, mut t: [usize; 3]) -> Result<[usize; 3]> {
        t.sort_unstable();
        if t[0] == 0 || t[2] > self.v || t[0] == t[1] || t[1] == t[2] {
            return Err(Error::Argument(format!(
                "{{{},{},{}}} is not a 3-subset of 1..{}",
                t[0], t[1], t[2], self.v
            )));
        }
        Ok(t)
    }
}

impl fmt::Display for SbtsWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "v={}", self.v)?;
        for (t, w) in &self.weights {
            writeln!(f, "{{{},{},{}}} {}", t[0], t[1], t[2], w)?;
        }
        Ok(())
    }
}

/// Pair sums `f̃({i,j}) = Σₖ f({i,j,k})` and their consecutiveness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SbtsReport {
    pub pair_sums: BTreeMap<(usize, usize), u64>,
    pub report: VerificationReport,
}

impl SbtsReport {
    pub fn accepted(&self) -> bool {
        self.report.accepted
    }

    /// Sum on the pair `{i, j}` (1-based, any order).
    pub fn sum(&self, i: usize, j: usize) -> Option<u64> {
        self.pair_sums.get(&(i.min(j), i.max(j))).copied()
    }
}

impl fmt::Display for SbtsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.report.fmt(f)
    }
}

pub fn sbts_pair_sums(w: &SbtsWeights) -> Result<SbtsReport> {
    if w.v < 3 {
        return Err(Error::Precondition(format!(
            "a triple system needs 3 points, got {}",
            w.v
        )));
    }
    let mut pair_sums = BTreeMap::new();
    for i in 1..=w.v {
        for j in i + 1..=w.v {
            pair_sums.insert((i, j), 0u64);
        }
    }
    for (&[a, b, c], &weight) in &w.weights {
        for pair in [(a, b), (a, c), (b, c)] {
            *pair_sums.get_mut(&pair).expect("triple lies in range") += weight;
        }
    }
    let observed = pair_sums.values().copied().collect();
    Ok(SbtsReport {
        report: consecutive_report(&0u64, observed)?,
        pair_sums,
    })
}
