//! Masked cubes, their axis-parallel line sums, and the consecutive-sum test.
//!
//! Coordinates are 0-based `(i, j, k)` = (row, column, layer). The bundled
//! tables and the text codec list one `n × n` grid per layer, rows top to
//! bottom, so cell `(i, j, k)` sits in grid `k`, row `i`, column `j`.
//!
//! A cube may carry a mask: cells outside the mask are holes and must hold
//! zero. A line is *nonempty* when at least one of its cells is inside the
//! mask; empty lines are ignored by verification entirely.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{self, Entry};

/// Direction a line runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    /// Varies the row `i`; fixed `(j, k)`.
    X,
    /// Varies the column `j`; fixed `(i, k)`.
    Y,
    /// Varies the layer `k`; fixed `(i, j)`.
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// One axis-parallel line, named by its direction and the two fixed
/// coordinates in `(i, j, k)` order with the varying one removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    pub axis: Axis,
    pub a: usize,
    pub b: usize,
}

impl Line {
    pub fn new(axis: Axis, a: usize, b: usize) -> Self {
        Line { axis, a, b }
    }

    /// The cell at position `t` along this line.
    pub fn cell(&self, t: usize) -> (usize, usize, usize) {
        match self.axis {
            Axis::X => (t, self.a, self.b),
            Axis::Y => (self.a, t, self.b),
            Axis::Z => (self.a, self.b, t),
        }
    }

    /// Lines through `(i, j, k)`, one per axis.
    pub fn through(i: usize, j: usize, k: usize) -> [Line; 3] {
        [
            Line::new(Axis::X, j, k),
            Line::new(Axis::Y, i, k),
            Line::new(Axis::Z, i, j),
        ]
    }

    /// Dense index in `0..3n²`.
    pub fn index(&self, n: usize) -> usize {
        self.axis.index() * n * n + self.a * n + self.b
    }

    pub fn from_index(index: usize, n: usize) -> Line {
        let axis = Axis::ALL[index / (n * n)];
        let rest = index % (n * n);
        Line::new(axis, rest / n, rest % n)
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 1-based, matching the bundled tables
        let (a, b) = (self.a + 1, self.b + 1);
        match self.axis {
            Axis::X => write!(f, "(*,{a},{b})"),
            Axis::Y => write!(f, "({a},*,{b})"),
            Axis::Z => write!(f, "({a},{b},*)"),
        }
    }
}

/// Which cells of an `n × n × n` cube may carry entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mask {
    n: usize,
    cells: Vec<bool>,
}

impl Mask {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize) -> bool) -> Self {
        let mut cells = vec![false; n * n * n];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    cells[(k * n + i) * n + j] = f(i, j, k);
                }
            }
        }
        Mask { n, cells }
    }

    /// Every cell present.
    pub fn full(n: usize) -> Self {
        Mask {
            n,
            cells: vec![true; n * n * n],
        }
    }

    /// Cells with pairwise distinct coordinates: the shape of an
    /// SBHC(n, 1ⁿ), i.e. the triangles of `K₃ × Kₙ`.
    pub fn holey(n: usize) -> Self {
        Mask::from_fn(n, |i, j, k| i != j && j != k && i != k)
    }

    /// The holey mask plus every cell with at least two coordinates equal
    /// to the distinguished index `x`: the triangles of `Jₙ`.
    pub fn jay(n: usize, x: usize) -> Self {
        Mask::from_fn(n, |i, j, k| {
            let hits = [i, j, k].iter().filter(|&&c| c == x).count();
            (i != j && j != k && i != k) || hits >= 2
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> bool {
        self.cells[(k * self.n + i) * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: bool) {
        let n = self.n;
        self.cells[(k * n + i) * n + j] = value;
    }

    pub fn is_full(&self) -> bool {
        self.cells.iter().all(|&c| c)
    }

    pub fn cell_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn line_nonempty(&self, line: Line) -> bool {
        (0..self.n).any(|t| {
            let (i, j, k) = line.cell(t);
            self.get(i, j, k)
        })
    }

    /// Nonempty lines in index order.
    pub fn nonempty_lines(&self) -> Vec<Line> {
        let n = self.n;
        (0..3 * n * n)
            .map(|idx| Line::from_index(idx, n))
            .filter(|&line| self.line_nonempty(line))
            .collect()
    }

    pub fn nonempty_line_count(&self) -> usize {
        self.nonempty_lines().len()
    }

    /// Masked cells in layer-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let n = self.n;
        (0..n * n * n)
            .filter(move |&idx| self.cells[idx])
            .map(move |idx| ((idx / n) % n, idx % n, idx / (n * n)))
    }

    /// Relabels coordinates: output cell `c` reads input cell `c'` with
    /// `c'[perm[d]] = c[d]`.
    pub fn permute_axes(&self, perm: [usize; 3]) -> Mask {
        Mask::from_fn(self.n, |i, j, k| {
            let (a, b, c) = apply_perm(perm, (i, j, k));
            self.get(a, b, c)
        })
    }
}

fn apply_perm(perm: [usize; 3], (i, j, k): (usize, usize, usize)) -> (usize, usize, usize) {
    let src = [i, j, k];
    let mut out = [0usize; 3];
    for d in 0..3 {
        out[perm[d]] = src[d];
    }
    (out[0], out[1], out[2])
}

/// An `n × n × n` array of nonnegative integers with a cell mask and a
/// claimed least line sum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cube<T = u64> {
    n: usize,
    start: T,
    mask: Mask,
    entries: Vec<T>,
}

impl<T: Entry> Cube<T> {
    /// All-zero cube with every cell present.
    pub fn zeros(n: usize) -> Self {
        Cube::zeros_masked(Mask::full(n))
    }

    pub fn zeros_masked(mask: Mask) -> Self {
        let n = mask.n();
        Cube {
            n,
            start: T::zero(),
            mask,
            entries: vec![T::zero(); n * n * n],
        }
    }

    /// Builds a cube from layer-major nested rows `layers[k][i][j]`.
    pub fn from_layers(start: T, mask: Mask, layers: Vec<Vec<Vec<T>>>) -> Result<Self> {
        let n = mask.n();
        if layers.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "expected {n} layers, found {}",
                layers.len()
            )));
        }
        let mut entries = Vec::with_capacity(n * n * n);
        for (k, layer) in layers.into_iter().enumerate() {
            if layer.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "layer {k} has {} rows, expected {n}",
                    layer.len()
                )));
            }
            for (i, row) in layer.into_iter().enumerate() {
                if row.len() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "layer {k} row {i} has {} entries, expected {n}",
                        row.len()
                    )));
                }
                entries.extend(row);
            }
        }
        let cube = Cube {
            n,
            start,
            mask,
            entries,
        };
        cube.check()?;
        Ok(cube)
    }

    /// Assembles a cube without validating it; see [`Cube::check`].
    pub fn from_raw_parts(start: T, mask: Mask, entries: Vec<T>) -> Self {
        let n = mask.n();
        assert_eq!(entries.len(), n * n * n, "entry buffer has wrong length");
        Cube {
            n,
            start,
            mask,
            entries,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn start(&self) -> &T {
        &self.start
    }

    pub fn with_start(mut self, start: T) -> Self {
        self.start = start;
        self
    }

    pub fn mask(&self) -> &Mask {
        &self.mask
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &T {
        &self.entries[self.offset(i, j, k)]
    }

    /// Writes a cell; holes only accept zero.
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: T) -> Result<()> {
        if !self.mask.get(i, j, k) && !value.is_zero() {
            return Err(Error::Structural(format!(
                "entry {value} on masked-out cell ({},{},{})",
                i + 1,
                j + 1,
                k + 1
            )));
        }
        let idx = self.offset(i, j, k);
        self.entries[idx] = value;
        Ok(())
    }

    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.n + i) * self.n + j
    }

    /// Nested `layers[k][i][j]` copy of the entries.
    pub fn layers(&self) -> Vec<Vec<Vec<T>>> {
        let n = self.n;
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|i| (0..n).map(|j| self.get(i, j, k).clone()).collect())
                    .collect()
            })
            .collect()
    }

    /// Rejects nonzero entries on holes.
    pub fn check(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Structural("side length must be at least 1".into()));
        }
        for k in 0..self.n {
            for i in 0..self.n {
                for j in 0..self.n {
                    let value = self.get(i, j, k);
                    if !self.mask.get(i, j, k) && !value.is_zero() {
                        return Err(Error::Structural(format!(
                            "entry {value} on masked-out cell ({},{},{})",
                            i + 1,
                            j + 1,
                            k + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn total(&self) -> Result<T> {
        self.entries.iter().try_fold(T::zero(), |acc, e| scalar::add(&acc, e))
    }

    /// Sum along one line, counting every cell (holes are zero anyway).
    pub fn line_sum(&self, line: Line) -> Result<T> {
        (0..self.n).try_fold(T::zero(), |acc, t| {
            let (i, j, k) = line.cell(t);
            scalar::add(&acc, self.get(i, j, k))
        })
    }

    /// Relabels coordinates; `perm[d]` is the output axis receiving input
    /// axis `d`. Line sums are permuted between axes, never changed.
    pub fn permute_axes(&self, perm: [usize; 3]) -> Cube<T> {
        let mut sorted = perm;
        sorted.sort_unstable();
        assert_eq!(sorted, [0, 1, 2], "not a permutation of the three axes");
        let n = self.n;
        let mut entries = vec![T::zero(); n * n * n];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let (a, b, c) = apply_perm(perm, (i, j, k));
                    entries[(c * n + a) * n + b] = self.get(i, j, k).clone();
                }
            }
        }
        let mut inverse = [0usize; 3];
        for d in 0..3 {
            inverse[perm[d]] = d;
        }
        Cube {
            n,
            start: self.start.clone(),
            mask: self.mask.permute_axes(inverse),
            entries,
        }
    }

    /// Converts entries into another scalar type.
    pub fn convert<U: Entry>(&self) -> Result<Cube<U>> {
        let cast = |v: &T| -> Result<U> {
            let text = v.to_string();
            text.parse::<U>().map_err(|_| Error::Overflow)
        };
        Ok(Cube {
            n: self.n,
            start: cast(&self.start)?,
            mask: self.mask.clone(),
            entries: self.entries.iter().map(cast).collect::<Result<_>>()?,
        })
    }
}

/// All `3n²` line sums of a cube, with a nonempty flag per line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineProfile<T = u64> {
    n: usize,
    sums: [Vec<T>; 3],
    nonempty: [Vec<bool>; 3],
}

impl<T: Entry> LineProfile<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `xsums[j][k] = Σ_i`, flattened as `j * n + k`.
    pub fn xsums(&self) -> &[T] {
        &self.sums[0]
    }

    /// `ysums[i][k] = Σ_j`, flattened as `i * n + k`.
    pub fn ysums(&self) -> &[T] {
        &self.sums[1]
    }

    /// `zsums[i][j] = Σ_k`, flattened as `i * n + j`.
    pub fn zsums(&self) -> &[T] {
        &self.sums[2]
    }

    pub fn sum(&self, line: Line) -> &T {
        &self.sums[line.axis.index()][line.a * self.n + line.b]
    }

    pub fn is_nonempty(&self, line: Line) -> bool {
        self.nonempty[line.axis.index()][line.a * self.n + line.b]
    }

    /// Every nonempty line with its sum, axis by axis.
    pub fn nonempty_lines(&self) -> impl Iterator<Item = (Line, &T)> + '_ {
        let n = self.n;
        (0..3 * n * n)
            .map(move |idx| Line::from_index(idx, n))
            .filter(|&line| self.is_nonempty(line))
            .map(|line| (line, self.sum(line)))
    }

    pub fn nonempty_sums(&self) -> Vec<T> {
        self.nonempty_lines().map(|(_, s)| s.clone()).collect()
    }

    pub fn nonempty_count(&self) -> usize {
        self.nonempty.iter().flatten().filter(|&&b| b).count()
    }

    /// Sum of every line sum along one axis; equal for all three axes.
    pub fn axis_total(&self, axis: Axis) -> Result<T> {
        self.sums[axis.index()]
            .iter()
            .try_fold(T::zero(), |acc, s| scalar::add(&acc, s))
    }
}

/// Computes every line sum of `cube`.
pub fn line_profile<T: Entry>(cube: &Cube<T>) -> Result<LineProfile<T>> {
    cube.check()?;
    let n = cube.n;
    let mut sums: [Vec<T>; 3] = std::array::from_fn(|_| vec![T::zero(); n * n]);
    let mut nonempty: [Vec<bool>; 3] = std::array::from_fn(|_| vec![false; n * n]);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let present = cube.mask.get(i, j, k);
                let value = cube.get(i, j, k);
                for (axis, slot) in [(0, j * n + k), (1, i * n + k), (2, i * n + j)] {
                    if present {
                        nonempty[axis][slot] = true;
                    }
                    if !value.is_zero() {
                        sums[axis][slot] = scalar::add(&sums[axis][slot], value)?;
                    }
                }
            }
        }
    }
    Ok(LineProfile { n, sums, nonempty })
}

/// Why a set of line sums is not a run of consecutive integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Defect<T = u64> {
    /// Smallest value of the expected run that no line attains.
    pub missing: Option<T>,
    /// Smallest value attained more than once, with its multiplicity.
    pub repeated: Option<(T, usize)>,
    /// Smallest value attained outside the expected run.
    pub out_of_range: Option<T>,
}

impl<T: Entry> fmt::Display for Defect<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(v) = &self.missing {
            parts.push(format!("value {v} missing"));
        }
        if let Some((v, count)) = &self.repeated {
            parts.push(format!("value {v} multiplicity {count}"));
        }
        if let Some(v) = &self.out_of_range {
            parts.push(format!("value {v} out of range"));
        }
        f.write_str(&parts.join(", "))
    }
}

/// Outcome of the consecutive-sum test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport<T = u64> {
    pub accepted: bool,
    /// Inclusive `[start, start + L - 1]`, `L` the nonempty line count.
    pub expected_range: (T, T),
    /// Sorted nonempty line sums.
    pub observed: Vec<T>,
    pub first_defect: Option<Defect<T>>,
}

impl<T: Entry> VerificationReport<T> {
    pub fn line_count(&self) -> usize {
        self.observed.len()
    }
}

impl<T: Entry> fmt::Display for VerificationReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = &self.expected_range;
        if self.accepted {
            write!(f, "accepted, range [{lo},{hi}]")
        } else {
            write!(f, "rejected, expected range [{lo},{hi}]")?;
            if let Some(defect) = &self.first_defect {
                write!(f, ": {defect}")?;
            }
            Ok(())
        }
    }
}

/// Checks that the sorted values are exactly `start, start + 1, …`.
pub fn consecutive_report<T: Entry>(start: &T, mut observed: Vec<T>) -> Result<VerificationReport<T>> {
    if observed.is_empty() {
        return Err(Error::Structural("no nonempty lines".into()));
    }
    observed.sort();
    let count = scalar::from_usize::<T>(observed.len())?;
    let end = scalar::add(start, &count)?;
    let last = end.clone() - T::one();

    let mut missing = None;
    let mut repeated = None;
    let mut out_of_range = None;

    // first expected value not present
    let mut expected = start.clone();
    let mut idx = 0;
    while expected < end && missing.is_none() {
        while idx < observed.len() && observed[idx] < expected {
            idx += 1;
        }
        if idx >= observed.len() || observed[idx] != expected {
            missing = Some(expected.clone());
        }
        expected = expected + T::one();
    }

    let mut idx = 0;
    while idx < observed.len() {
        let value = &observed[idx];
        let run = observed[idx..].iter().take_while(|v| *v == value).count();
        if (value < start || value > &last) && out_of_range.is_none() {
            out_of_range = Some(value.clone());
        }
        if run > 1 && repeated.is_none() {
            repeated = Some((value.clone(), run));
        }
        idx += run;
    }

    let accepted = missing.is_none() && repeated.is_none() && out_of_range.is_none();
    Ok(VerificationReport {
        accepted,
        expected_range: (start.clone(), last),
        observed,
        first_defect: (!accepted).then_some(Defect {
            missing,
            repeated,
            out_of_range,
        }),
    })
}

/// Accepts iff the nonempty line sums are exactly `start, …, start + L - 1`.
pub fn verify_consecutive<T: Entry>(cube: &Cube<T>) -> Result<VerificationReport<T>> {
    let profile = line_profile(cube)?;
    consecutive_report(cube.start(), profile.nonempty_sums())
}

/// Returns `cube + a · unit`, with the claimed start raised by `a`.
///
/// `unit` must vanish outside `cube`'s mask and sum to exactly one along
/// every line that is nonempty in `cube`, so each such line grows by `a`.
pub fn add_unit_multiple<T: Entry>(cube: &Cube<T>, unit: &Cube<T>, a: &T) -> Result<Cube<T>> {
    if cube.n != unit.n {
        return Err(Error::DimensionMismatch(format!(
            "cube has side {}, unit has side {}",
            cube.n, unit.n
        )));
    }
    cube.check()?;
    let n = cube.n;
    for (i, j, k) in (0..n * n * n).map(|idx| (idx / n % n, idx % n, idx / (n * n))) {
        if !cube.mask.get(i, j, k) && !unit.get(i, j, k).is_zero() {
            return Err(Error::UnitInvalid(format!(
                "unit is nonzero on hole ({},{},{})",
                i + 1,
                j + 1,
                k + 1
            )));
        }
    }
    for line in cube.mask.nonempty_lines() {
        let sum = unit.line_sum(line)?;
        if !sum.is_one() {
            return Err(Error::UnitInvalid(format!("line {line} of the unit sums to {sum}")));
        }
    }
    let entries = cube
        .entries
        .iter()
        .zip(&unit.entries)
        .map(|(c, u)| scalar::add(c, &scalar::mul(u, a)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Cube {
        n,
        start: scalar::add(&cube.start, a)?,
        mask: cube.mask.clone(),
        entries,
    })
}

/// Index maps from a piece's coordinates into a host's, one per axis
/// (rows, columns, layers).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisMaps(pub [Vec<usize>; 3]);

impl AxisMaps {
    /// The same map on all three axes.
    pub fn uniform(map: Vec<usize>) -> Self {
        AxisMaps([map.clone(), map.clone(), map])
    }

    pub fn map_cell(&self, (i, j, k): (usize, usize, usize)) -> (usize, usize, usize) {
        (self.0[0][i], self.0[1][j], self.0[2][k])
    }

    /// Image of a piece line in the host.
    pub fn map_line(&self, line: Line) -> Line {
        let (fa, fb) = match line.axis {
            Axis::X => (&self.0[1], &self.0[2]),
            Axis::Y => (&self.0[0], &self.0[2]),
            Axis::Z => (&self.0[0], &self.0[1]),
        };
        Line::new(line.axis, fa[line.a], fb[line.b])
    }

    /// Checks length, range, and injectivity against the two sides.
    pub fn validate(&self, piece_n: usize, host_n: usize) -> Result<()> {
        for (axis, map) in self.0.iter().enumerate() {
            if map.len() != piece_n {
                return Err(Error::DimensionMismatch(format!(
                    "axis {axis} map has {} entries, piece side is {piece_n}",
                    map.len()
                )));
            }
            let mut seen = vec![false; host_n];
            for &target in map {
                if target >= host_n {
                    return Err(Error::Argument(format!(
                        "axis {axis} maps to index {target}, host side is {host_n}"
                    )));
                }
                if std::mem::replace(&mut seen[target], true) {
                    return Err(Error::Argument(format!(
                        "axis {axis} map is not injective (index {target} repeated)"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Adds `piece` into `host` at the mapped coordinates.
pub fn embed_accumulate<T: Entry>(host: &Cube<T>, piece: &Cube<T>, maps: &AxisMaps) -> Result<Cube<T>> {
    let mut out = host.clone();
    embed_in_place(&mut out, piece, maps)?;
    Ok(out)
}

pub(crate) fn embed_in_place<T: Entry>(host: &mut Cube<T>, piece: &Cube<T>, maps: &AxisMaps) -> Result<()> {
    if host.n < piece.n {
        return Err(Error::DimensionMismatch(format!(
            "piece side {} exceeds host side {}",
            piece.n, host.n
        )));
    }
    maps.validate(piece.n, host.n)?;
    piece.check()?;
    for (i, j, k) in piece.mask.cells() {
        let value = piece.get(i, j, k);
        if value.is_zero() {
            continue;
        }
        let (a, b, c) = maps.map_cell((i, j, k));
        if !host.mask.get(a, b, c) {
            return Err(Error::Structural(format!(
                "piece cell ({},{},{}) lands on host hole ({},{},{})",
                i + 1,
                j + 1,
                k + 1,
                a + 1,
                b + 1,
                c + 1
            )));
        }
        let idx = host.offset(a, b, c);
        host.entries[idx] = scalar::add(&host.entries[idx], value)?;
    }
    Ok(())
}
