//! Latin squares and the cubes built from them: indicator cubes, the
//! all-ones "unit" cubes used to shift line sums, and inflation of an
//! SBC(n) into an SBC(mn).

use serde::{Deserialize, Serialize};

use crate::cube::{embed_in_place, AxisMaps, Cube, Mask};
use crate::error::{Error, Result};
use crate::scalar::{self, Entry};

/// An `n × n` array over `0..n` with every symbol once per row and column.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LatinSquareDoc", into = "LatinSquareDoc")]
pub struct LatinSquare {
    n: usize,
    cells: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct LatinSquareDoc {
    n: usize,
    cells: Vec<Vec<usize>>,
}

impl TryFrom<LatinSquareDoc> for LatinSquare {
    type Error = Error;

    fn try_from(doc: LatinSquareDoc) -> Result<Self> {
        if doc.cells.len() != doc.n {
            return Err(Error::Argument(format!("expected {} rows", doc.n)));
        }
        LatinSquare::from_rows(doc.cells)
    }
}

impl From<LatinSquare> for LatinSquareDoc {
    fn from(square: LatinSquare) -> Self {
        LatinSquareDoc {
            n: square.n,
            cells: square.rows(),
        }
    }
}

impl LatinSquare {
    /// Validates and wraps row-major cells.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Argument("order must be at least 1".into()));
        }
        if rows.iter().any(|row| row.len() != n) {
            return Err(Error::Argument("rows must all have length n".into()));
        }
        let square = LatinSquare {
            n,
            cells: rows.into_iter().flatten().collect(),
        };
        if !square.is_latin() {
            return Err(Error::Argument("not a Latin square".into()));
        }
        Ok(square)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.cells[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.cells.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    pub fn is_latin(&self) -> bool {
        let n = self.n;
        if self.cells.iter().any(|&s| s >= n) {
            return false;
        }
        (0..n).all(|a| {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            (0..n).all(|b| {
                !std::mem::replace(&mut row[self.get(a, b)], true) && !std::mem::replace(&mut col[self.get(b, a)], true)
            })
        })
    }

    pub fn is_idempotent(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i) == i)
    }

    /// Superimposing the two squares yields every ordered pair once.
    pub fn is_orthogonal_to(&self, other: &LatinSquare) -> bool {
        if self.n != other.n {
            return false;
        }
        let n = self.n;
        let mut seen = vec![false; n * n];
        (0..n * n).all(|idx| {
            let pair = self.cells[idx] * n + other.cells[idx];
            !std::mem::replace(&mut seen[pair], true)
        })
    }
}

/// `cells[i][j] = (i + j) mod n`.
pub fn circulant_square(n: usize) -> Result<LatinSquare> {
    if n == 0 {
        return Err(Error::Argument("order must be at least 1".into()));
    }
    Ok(LatinSquare {
        n,
        cells: (0..n * n).map(|idx| (idx / n + idx % n) % n).collect(),
    })
}

/// A Latin square with `cells[i][i] = i`; exists for every `n ≠ 2`.
///
/// Odd orders use `(i + j) · 2⁻¹ mod n`. Even orders are filled by a
/// deterministic most-constrained-cell backtracking search.
pub fn idempotent_square(n: usize) -> Result<LatinSquare> {
    match n {
        0 => Err(Error::Argument("order must be at least 1".into())),
        2 => Err(Error::NoSuchObject("no idempotent Latin square of order 2".into())),
        n if n % 2 == 1 => {
            let half = n.div_ceil(2);
            Ok(LatinSquare {
                n,
                cells: (0..n * n).map(|idx| (idx / n + idx % n) * half % n).collect(),
            })
        }
        n => complete_idempotent(n)
            .ok_or_else(|| Error::NoSuchObject(format!("idempotent square search of order {n} exhausted its budget"))),
    }
}

fn complete_idempotent(n: usize) -> Option<LatinSquare> {
    const BUDGET: usize = 5_000_000;
    let mut cells = vec![usize::MAX; n * n];
    // bitsets of symbols used per row / column
    let mut row_used = vec![0u128; n];
    let mut col_used = vec![0u128; n];
    if n > 128 {
        return None;
    }
    for i in 0..n {
        cells[i * n + i] = i;
        row_used[i] |= 1 << i;
        col_used[i] |= 1 << i;
    }
    let full: u128 = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let mut nodes = 0usize;

    fn solve(
        n: usize,
        full: u128,
        cells: &mut [usize],
        row_used: &mut [u128],
        col_used: &mut [u128],
        nodes: &mut usize,
    ) -> Option<bool> {
        *nodes += 1;
        if *nodes > BUDGET {
            return None;
        }
        let mut best: Option<(usize, u128)> = None;
        for idx in 0..n * n {
            if cells[idx] != usize::MAX {
                continue;
            }
            let free = full & !(row_used[idx / n] | col_used[idx % n]);
            let count = free.count_ones();
            if count == 0 {
                return Some(false);
            }
            if best.is_none_or(|(_, b)| count < b.count_ones()) {
                best = Some((idx, free));
                if count == 1 {
                    break;
                }
            }
        }
        let Some((idx, mut free)) = best else {
            return Some(true);
        };
        let (i, j) = (idx / n, idx % n);
        while free != 0 {
            let s = free.trailing_zeros() as usize;
            free &= free - 1;
            cells[idx] = s;
            row_used[i] |= 1 << s;
            col_used[j] |= 1 << s;
            match solve(n, full, cells, row_used, col_used, nodes) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            row_used[i] &= !(1 << s);
            col_used[j] &= !(1 << s);
            cells[idx] = usize::MAX;
        }
        Some(false)
    }

    match solve(n, full, &mut cells, &mut row_used, &mut col_used, &mut nodes) {
        Some(true) => Some(LatinSquare { n, cells }),
        _ => None,
    }
}

/// 0/1 cube with a one at `(i, j, L[i][j])`; every line sums to one.
pub fn indicator_cube<T: Entry>(square: &LatinSquare) -> Result<Cube<T>> {
    if !square.is_latin() {
        return Err(Error::Argument("not a Latin square".into()));
    }
    let n = square.n;
    let mut cube = Cube::zeros(n);
    for i in 0..n {
        for j in 0..n {
            cube.set(i, j, square.get(i, j), T::one())?;
        }
    }
    Ok(cube)
}

/// The three graph shapes a block of a design is replaced by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphKind {
    /// `K_{m,m,m}`: every cell of an `m`-cube.
    Kmmm(usize),
    /// `K₃ × K_m`: cells with pairwise distinct coordinates.
    K3xK(usize),
    /// `J_m`: `K₃ × K_m` plus the triangles through two copies of the
    /// distinguished index `x` (0-based).
    J { m: usize, x: usize },
}

impl GraphKind {
    pub fn order(&self) -> usize {
        match *self {
            GraphKind::Kmmm(m) | GraphKind::K3xK(m) | GraphKind::J { m, .. } => m,
        }
    }

    pub fn mask(&self) -> Mask {
        match *self {
            GraphKind::Kmmm(m) => Mask::full(m),
            GraphKind::K3xK(m) => Mask::holey(m),
            GraphKind::J { m, x } => Mask::jay(m, x),
        }
    }

    /// Edge count of the graph, i.e. nonempty lines of its mask.
    pub fn edge_count(&self) -> usize {
        match *self {
            GraphKind::Kmmm(m) => 3 * m * m,
            GraphKind::K3xK(m) => 3 * m * (m - 1),
            GraphKind::J { m, .. } => 3 * m * (m - 1) + 3,
        }
    }
}

impl std::fmt::Display for GraphKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphKind::Kmmm(m) => write!(f, "K{m},{m},{m}"),
            GraphKind::K3xK(m) => write!(f, "K3xK{m}"),
            GraphKind::J { m, x } => write!(f, "J{m}@{}", x + 1),
        }
    }
}

/// A 0/1 cube on the kind's mask whose nonempty lines all sum to one.
pub fn unit_cube<T: Entry>(kind: GraphKind) -> Result<Cube<T>> {
    match kind {
        GraphKind::Kmmm(m) => indicator_cube(&circulant_square(m)?),
        GraphKind::K3xK(m) | GraphKind::J { m, .. } => {
            if m < 3 {
                return Err(Error::NoSuchObject(format!(
                    "{kind} needs an idempotent Latin square of order {m}"
                )));
            }
            if let GraphKind::J { x, .. } = kind {
                if x >= m {
                    return Err(Error::Argument(format!(
                        "distinguished index {} outside 1..={m}",
                        x + 1
                    )));
                }
            }
            let square = idempotent_square(m)?;
            let mut cube = Cube::zeros_masked(kind.mask());
            for i in 0..m {
                for j in 0..m {
                    if i != j {
                        cube.set(i, j, square.get(i, j), T::one())?;
                    }
                }
            }
            if let GraphKind::J { x, .. } = kind {
                cube.set(x, x, x, T::one())?;
            }
            Ok(cube)
        }
    }
}

/// Builds an SBC(mn) from an SBC(n): the copy shifted by `3tn²` goes to
/// block `(i, j, k)` with `t = k·m + i` wherever the order-`m` circulant
/// square has `L[i][j] = k`.
pub fn inflate<T: Entry>(base: &Cube<T>, m: usize) -> Result<Cube<T>> {
    if m == 0 {
        return Err(Error::Argument("inflation factor must be at least 1".into()));
    }
    if !base.mask().is_full() || !base.start().is_zero() {
        return Err(Error::Precondition(
            "inflation needs an unmasked cube with start 0".into(),
        ));
    }
    let report = crate::cube::verify_consecutive(base)?;
    if !report.accepted {
        return Err(Error::Precondition(format!("base cube is not an SBC: {report}")));
    }
    let n = base.n();
    let unit = unit_cube::<T>(GraphKind::Kmmm(n))?;
    let square = circulant_square(m)?;
    let step = scalar::from_usize::<T>(3 * n * n)?;
    let mut host = Cube::zeros(m * n);
    for i in 0..m {
        for j in 0..m {
            let k = square.get(i, j);
            let t = scalar::from_usize::<T>(k * m + i)?;
            let shifted = crate::cube::add_unit_multiple(base, &unit, &scalar::mul(&t, &step)?)?;
            let block = |b: usize| (b * n..(b + 1) * n).collect::<Vec<_>>();
            embed_in_place(&mut host, &shifted, &AxisMaps([block(i), block(j), block(k)]))?;
        }
    }
    Ok(host)
}

/// The `n × n` array (`n` even) of 2×2 diagonal blocks `[t t; t+1 t+2]`,
/// `t = 0, 2, …, n − 2`, whose row and column sums are `0, …, 2n − 1`.
pub fn two_dim_square(n: usize) -> Result<Vec<Vec<u64>>> {
    if n < 2 {
        return Err(Error::Argument("order must be at least 2".into()));
    }
    if n % 2 == 1 {
        return Err(Error::Parity(format!(
            "the line sums 0..{} total n(2n-1) = {}, which is odd, but row and column totals must agree",
            2 * n - 1,
            n * (2 * n - 1)
        )));
    }
    let mut grid = vec![vec![0u64; n]; n];
    for t in (0..n).step_by(2) {
        let v = t as u64;
        grid[t][t] = v;
        grid[t][t + 1] = v;
        grid[t + 1][t] = v + 1;
        grid[t + 1][t + 1] = v + 2;
    }
    Ok(grid)
}
