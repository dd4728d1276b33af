//! Exhaustive backtracking over small cubes and weighted triple systems.
//!
//! Both problems share one shape: nonnegative variables, each lying on
//! some lines, and the line sums must be exactly a run of consecutive
//! targets. The search repeatedly picks the line with the fewest
//! unassigned variables. A line with one free variable branches over the
//! unused targets; otherwise its first free variable branches over every
//! value that keeps all its lines at or below the largest target. Two
//! prunes apply, both sound: no partial sum may exceed the largest target,
//! and the partial sums of unfinished lines must be matchable to distinct
//! unused targets no smaller than them.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cube::{Cube, Mask};
use crate::designs::SbtsWeights;
use crate::error::{Error, Result};

/// Result of a search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<W> {
    Found(W),
    /// The whole space was explored: no solution exists.
    ExhaustedNone,
    BudgetExceeded,
}

impl<W> Outcome<W> {
    pub fn is_found(&self) -> bool {
        matches!(self, Outcome::Found(_))
    }

    fn map<V>(self, f: impl FnOnce(W) -> V) -> Outcome<V> {
        match self {
            Outcome::Found(w) => Outcome::Found(f(w)),
            Outcome::ExhaustedNone => Outcome::ExhaustedNone,
            Outcome::BudgetExceeded => Outcome::BudgetExceeded,
        }
    }
}

/// Which optional prunes run; the constraints themselves are always
/// enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prunes {
    pub upper_bound: bool,
    pub matching: bool,
}

impl Default for Prunes {
    fn default() -> Self {
        Prunes {
            upper_bound: true,
            matching: true,
        }
    }
}

/// A cube search: find entries on `mask` whose nonempty line sums are
/// `start, start + 1, …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchProblem {
    pub mask: Mask,
    pub start: u64,
    /// Maximum number of assignments tried.
    pub budget: u64,
    /// `0` tries values in ascending order; any other seed shuffles them.
    pub seed: u64,
    pub prunes: Prunes,
}

impl SearchProblem {
    pub fn new(mask: Mask, start: u64, budget: u64, seed: u64) -> Result<Self> {
        if budget == 0 {
            return Err(Error::Argument("search budget must be positive".into()));
        }
        if mask.cell_count() == 0 {
            return Err(Error::Argument("mask has no cells".into()));
        }
        Ok(SearchProblem {
            mask,
            start,
            budget,
            seed,
            prunes: Prunes::default(),
        })
    }

    pub fn with_prunes(mut self, prunes: Prunes) -> Self {
        self.prunes = prunes;
        self
    }
}

struct Incidence {
    lines_of: Vec<Vec<usize>>,
    cells_of: Vec<Vec<usize>>,
}

struct Engine<'a> {
    inc: &'a Incidence,
    lo: u64,
    hi: u64,
    values: Vec<Option<u64>>,
    partial: Vec<u64>,
    free: Vec<usize>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
    rng: Option<ChaCha8Rng>,
    prunes: Prunes,
}

enum Step {
    Found,
    Dead,
    OutOfBudget,
}

impl<'a> Engine<'a> {
    fn new(inc: &'a Incidence, start: u64, budget: u64, seed: u64, prunes: Prunes) -> Self {
        let lines = inc.cells_of.len();
        Engine {
            inc,
            lo: start,
            hi: start + lines as u64 - 1,
            values: vec![None; inc.lines_of.len()],
            partial: vec![0; lines],
            free: inc.cells_of.iter().map(Vec::len).collect(),
            used: vec![false; lines],
            nodes: 0,
            budget,
            rng: (seed != 0).then(|| ChaCha8Rng::seed_from_u64(seed)),
            prunes,
        }
    }

    /// Applies `cell = value`; returns the targets it claimed, or `None`
    /// (with everything reverted) if a constraint or prune fails.
    fn assign(&mut self, cell: usize, value: u64) -> Option<Vec<usize>> {
        self.values[cell] = Some(value);
        let mut claimed = Vec::new();
        let mut ok = true;
        for &line in &self.inc.lines_of[cell] {
            self.partial[line] += value;
            self.free[line] -= 1;
            if !ok {
                continue;
            }
            let sum = self.partial[line];
            if self.free[line] == 0 {
                if sum < self.lo || sum > self.hi || self.used[(sum - self.lo) as usize] {
                    ok = false;
                } else {
                    let t = (sum - self.lo) as usize;
                    self.used[t] = true;
                    claimed.push(t);
                }
            } else if self.prunes.upper_bound && sum > self.hi {
                ok = false;
            }
        }
        if ok && self.prunes.matching && !self.matchable() {
            ok = false;
        }
        if ok {
            Some(claimed)
        } else {
            self.unassign(cell, &claimed);
            None
        }
    }

    fn unassign(&mut self, cell: usize, claimed: &[usize]) {
        let value = self.values[cell].take().expect("cell was assigned");
        for &line in &self.inc.lines_of[cell] {
            self.partial[line] -= value;
            self.free[line] += 1;
        }
        for &t in claimed {
            self.used[t] = false;
        }
    }

    /// Largest unfinished partial sums against largest unused targets.
    fn matchable(&self) -> bool {
        let mut partials: Vec<u64> = (0..self.free.len())
            .filter(|&l| self.free[l] > 0)
            .map(|l| self.partial[l])
            .collect();
        partials.sort_unstable_by(|a, b| b.cmp(a));
        let unused = (0..self.used.len())
            .rev()
            .filter(|&t| !self.used[t])
            .map(|t| self.lo + t as u64);
        partials.iter().zip(unused).all(|(p, t)| *p <= t)
    }

    fn cap(&self, cell: usize) -> u64 {
        let mut cap = self.hi;
        if self.prunes.upper_bound {
            for &line in &self.inc.lines_of[cell] {
                cap = cap.min(self.hi.saturating_sub(self.partial[line]));
            }
        }
        cap
    }

    fn run(&mut self) -> Step {
        let Some(line) = (0..self.free.len())
            .filter(|&l| self.free[l] > 0)
            .min_by_key(|&l| self.free[l])
        else {
            return Step::Found;
        };
        let cell = *self.inc.cells_of[line]
            .iter()
            .find(|&&c| self.values[c].is_none())
            .expect("line has a free cell");
        let cap = self.cap(cell);
        let mut candidates: Vec<u64> = if self.free[line] == 1 {
            let base = self.partial[line];
            (0..self.used.len())
                .filter(|&t| !self.used[t])
                .map(|t| self.lo + t as u64)
                .filter(|&t| t >= base && t - base <= cap)
                .map(|t| t - base)
                .collect()
        } else {
            (0..=cap).collect()
        };
        if let Some(rng) = self.rng.as_mut() {
            candidates.shuffle(rng);
        }
        for value in candidates {
            if self.nodes >= self.budget {
                return Step::OutOfBudget;
            }
            self.nodes += 1;
            if let Some(claimed) = self.assign(cell, value) {
                match self.run() {
                    Step::Dead => self.unassign(cell, &claimed),
                    done => return done,
                }
            }
        }
        Step::Dead
    }

    fn solve(mut self) -> (Outcome<Vec<u64>>, u64) {
        let outcome = match self.run() {
            Step::Found => Outcome::Found(self.values.iter().map(|v| v.unwrap_or(0)).collect()),
            Step::Dead => Outcome::ExhaustedNone,
            Step::OutOfBudget => Outcome::BudgetExceeded,
        };
        (outcome, self.nodes)
    }
}

fn cube_incidence(mask: &Mask) -> (Incidence, Vec<(usize, usize, usize)>) {
    let n = mask.n();
    let cells: Vec<_> = mask.cells().collect();
    let lines = mask.nonempty_lines();
    let mut line_id = vec![usize::MAX; 3 * n * n];
    for (id, line) in lines.iter().enumerate() {
        line_id[line.index(n)] = id;
    }
    let mut cells_of = vec![Vec::new(); lines.len()];
    let lines_of = cells
        .iter()
        .enumerate()
        .map(|(c, &(i, j, k))| {
            crate::cube::Line::through(i, j, k)
                .iter()
                .map(|l| {
                    let id = line_id[l.index(n)];
                    cells_of[id].push(c);
                    id
                })
                .collect()
        })
        .collect();
    (Incidence { lines_of, cells_of }, cells)
}

/// Searches for a cube on `p.mask` with consecutive sums from `p.start`.
/// Deterministic in `p`.
pub fn search_cube(p: &SearchProblem) -> Outcome<Cube<u64>> {
    search_cube_counted(p).0
}

/// As [`search_cube`], also returning the number of assignments tried.
pub fn search_cube_counted(p: &SearchProblem) -> (Outcome<Cube<u64>>, u64) {
    let (inc, cells) = cube_incidence(&p.mask);
    let (outcome, nodes) = Engine::new(&inc, p.start, p.budget, p.seed, p.prunes).solve();
    let outcome = outcome.map(|values| {
        let mut cube = Cube::zeros_masked(p.mask.clone()).with_start(p.start);
        for (&(i, j, k), v) in cells.iter().zip(values) {
            cube.set(i, j, k, v).expect("cell lies on the mask");
        }
        cube
    });
    (outcome, nodes)
}

/// Searches for weights on the 3-subsets of `{1..v}` whose pair sums are
/// `0, …, C(v,2) − 1`.
pub fn search_sbts(v: usize, budget: u64, seed: u64) -> Result<Outcome<SbtsWeights>> {
    search_sbts_with(v, budget, seed, Prunes::default())
}

pub fn search_sbts_with(v: usize, budget: u64, seed: u64, prunes: Prunes) -> Result<Outcome<SbtsWeights>> {
    if v < 3 {
        return Err(Error::Precondition(format!("a triple system needs 3 points, got {v}")));
    }
    if budget == 0 {
        return Err(Error::Argument("search budget must be positive".into()));
    }
    let pair = |a: usize, b: usize| a * v + b;
    let mut pair_id = vec![usize::MAX; v * v];
    let mut pairs = 0;
    for a in 0..v {
        for b in a + 1..v {
            pair_id[pair(a, b)] = pairs;
            pairs += 1;
        }
    }
    let mut triples = Vec::new();
    let mut cells_of = vec![Vec::new(); pairs];
    let mut lines_of = Vec::new();
    for a in 0..v {
        for b in a + 1..v {
            for c in b + 1..v {
                let id = triples.len();
                let lines = vec![pair_id[pair(a, b)], pair_id[pair(a, c)], pair_id[pair(b, c)]];
                for &l in &lines {
                    cells_of[l].push(id);
                }
                lines_of.push(lines);
                triples.push([a + 1, b + 1, c + 1]);
            }
        }
    }
    let inc = Incidence { lines_of, cells_of };
    let (outcome, _) = Engine::new(&inc, 0, budget, seed, prunes).solve();
    let mut weights = SbtsWeights::new(v);
    if let Outcome::Found(values) = &outcome {
        for (t, &w) in triples.iter().zip(values) {
            weights.set(*t, w)?;
        }
    }
    Ok(outcome.map(|_| weights))
}

/// Existence check that splits the top-level choices across `threads`
/// workers. The verdict matches [`search_cube`] whenever neither run runs
/// out of budget; each worker gets the full budget.
pub fn cube_exists(p: &SearchProblem, threads: usize) -> Outcome<()> {
    let threads = threads.max(1);
    if threads == 1 {
        return search_cube(p).map(|_| ());
    }
    let (inc, _) = cube_incidence(&p.mask);
    // the first branching cell and its candidate values, as in `run`
    let probe = Engine::new(&inc, p.start, p.budget, 0, p.prunes);
    let line = (0..probe.free.len())
        .min_by_key(|&l| probe.free[l])
        .expect("mask is nonempty");
    let cell = inc.cells_of[line][0];
    let candidates: Vec<u64> = if probe.free[line] == 1 {
        (0..probe.used.len() as u64).map(|t| t + probe.lo).collect()
    } else {
        (0..=probe.cap(cell)).collect()
    };
    let chunks: Vec<Vec<u64>> = (0..threads)
        .map(|w| candidates.iter().copied().skip(w).step_by(threads).collect())
        .collect();
    let verdicts: Vec<Outcome<()>> = std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|values| {
                let inc = &inc;
                scope.spawn(move || {
                    let mut out = Outcome::ExhaustedNone;
                    for value in values {
                        let mut engine = Engine::new(inc, p.start, p.budget, 0, p.prunes);
                        if engine.assign(cell, value).is_none() {
                            continue;
                        }
                        match engine.run() {
                            Step::Found => return Outcome::Found(()),
                            Step::OutOfBudget => out = Outcome::BudgetExceeded,
                            Step::Dead => {}
                        }
                    }
                    out
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    if verdicts.iter().any(Outcome::is_found) {
        Outcome::Found(())
    } else if verdicts.contains(&Outcome::BudgetExceeded) {
        Outcome::BudgetExceeded
    } else {
        Outcome::ExhaustedNone
    }
}
