//! Offset-and-sum composition of pieces into a full cube, and the plans
//! that produce an SBC(n) for every `n ≥ 2`.
//!
//! A plan assigns to each block of a design a graph shape on the block's
//! points. Piece `i` contributes its base cube shifted by
//! `aᵢ = m₁ + … + mᵢ₋₁`, where `mⱼ` is the number of nonempty lines of piece
//! `j`; when the pieces' lines partition the host's lines, the host sums
//! run through `0, …, 3n² − 1`.

use std::fmt;
use std::str::FromStr;

use crate::cube::{add_unit_multiple, embed_in_place, verify_consecutive, AxisMaps, Cube, Line};
use crate::designs::{delete_point, pbd456, sts7};
use crate::error::{Error, Result};
use crate::latin::{inflate, unit_cube, GraphKind};
use crate::library::{block_cube, BlockKind};
use crate::scalar::{self, Entry};

/// A start-0 witness for `kind`: a bundled table, or `inflate(SBC2, 2)` for
/// `K₄,₄,₄`.
pub fn base_cube<T: Entry>(kind: GraphKind) -> Result<Cube<T>> {
    if let Some(block) = BlockKind::for_graph(kind) {
        return block_cube(block);
    }
    match kind {
        GraphKind::Kmmm(4) => inflate(&block_cube(BlockKind::Sbc2)?, 2),
        GraphKind::K3xK(3) => Err(Error::NoSuchObject(
            "K3xK3 has no start-0 witness: each of its 18 lines holds a single cell, \
             and every cell lies on three of them"
                .into(),
        )),
        _ => Err(Error::NoSuchObject(format!("no bundled witness for {kind}"))),
    }
}

/// One block of a plan: a graph shape placed on host points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece<T = u64> {
    kind: GraphKind,
    block: Vec<usize>,
    base: Cube<T>,
    unit: Cube<T>,
}

impl<T: Entry> Piece<T> {
    /// `block[t]` is the host index that piece coordinate `t` maps to on all
    /// three axes; for `J` shapes the distinguished point comes first.
    pub fn new(kind: GraphKind, block: Vec<usize>) -> Result<Self> {
        let base = base_cube(kind)?;
        let unit = unit_cube(kind)?;
        Piece::with_cubes(kind, block, base, unit)
    }

    pub fn with_cubes(kind: GraphKind, block: Vec<usize>, base: Cube<T>, unit: Cube<T>) -> Result<Self> {
        let m = kind.order();
        if block.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "{kind} needs {m} points, block has {}",
                block.len()
            )));
        }
        if let GraphKind::J { x, .. } = kind {
            if x != 0 {
                return Err(Error::Argument(
                    "the distinguished point of a J piece must come first".into(),
                ));
            }
        }
        if *base.mask() != kind.mask() || *unit.mask() != kind.mask() {
            return Err(Error::DimensionMismatch(format!(
                "cubes for {kind} have the wrong mask"
            )));
        }
        Ok(Piece {
            kind,
            block,
            base,
            unit,
        })
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn block(&self) -> &[usize] {
        &self.block
    }

    pub fn base(&self) -> &Cube<T> {
        &self.base
    }

    /// Nonempty line count `mᵢ`.
    pub fn line_count(&self) -> usize {
        self.kind.edge_count()
    }

    fn maps(&self) -> AxisMaps {
        AxisMaps::uniform(self.block.clone())
    }
}

/// Pieces in order on a host of side `n`; offsets follow from the order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan<T = u64> {
    n: usize,
    pieces: Vec<Piece<T>>,
    label: String,
}

impl<T: Entry> Plan<T> {
    pub fn new(n: usize, pieces: Vec<Piece<T>>, label: impl Into<String>) -> Self {
        Plan {
            n,
            pieces,
            label: label.into(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pieces(&self) -> &[Piece<T>] {
        &self.pieces
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `aᵢ = Σ_{j<i} mⱼ`.
    pub fn offsets(&self) -> Vec<usize> {
        self.pieces
            .iter()
            .scan(0, |acc, p| {
                let a = *acc;
                *acc += p.line_count();
                Some(a)
            })
            .collect()
    }

    pub fn total_lines(&self) -> usize {
        self.pieces.iter().map(Piece::line_count).sum()
    }

    /// The same pieces in a different order.
    pub fn reordered(&self, order: &[usize]) -> Result<Plan<T>> {
        let mut seen = vec![false; self.pieces.len()];
        if order.len() != self.pieces.len()
            || order
                .iter()
                .any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true))
        {
            return Err(Error::Argument("order is not a permutation of the pieces".into()));
        }
        Ok(Plan {
            n: self.n,
            pieces: order.iter().map(|&i| self.pieces[i].clone()).collect(),
            label: self.label.clone(),
        })
    }

    /// Checks that every host line is the image of exactly one nonempty
    /// piece line.
    pub fn check_partition(&self) -> Result<()> {
        let n = self.n;
        let mut claims = vec![0u32; 3 * n * n];
        for piece in &self.pieces {
            piece.maps().validate(piece.kind.order(), n)?;
            for line in piece.kind.mask().nonempty_lines() {
                claims[piece.maps().map_line(line).index(n)] += 1;
            }
        }
        for (index, &count) in claims.iter().enumerate() {
            if count != 1 {
                let line = Line::from_index(index, n);
                let what = if count == 0 {
                    "not covered"
                } else {
                    "covered more than once"
                };
                return Err(Error::PlanInvalid(format!("host line {line} is {what}")));
            }
        }
        Ok(())
    }
}

impl<T> fmt::Display for Plan<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} pieces on {} points)", self.label, self.pieces.len(), self.n)
    }
}

/// `Σᵢ embed(baseᵢ + aᵢ · unitᵢ)`, verified.
pub fn construction_cons<T: Entry>(plan: &Plan<T>) -> Result<Cube<T>> {
    plan.check_partition()?;
    let mut host = Cube::zeros(plan.n);
    for (piece, offset) in plan.pieces.iter().zip(plan.offsets()) {
        let report = verify_consecutive(&piece.base)?;
        if !report.accepted || !piece.base.start().is_zero() {
            return Err(Error::Precondition(format!(
                "{} base is not a start-0 witness: {report}",
                piece.kind
            )));
        }
        let shifted = add_unit_multiple(&piece.base, &piece.unit, &scalar::from_usize(offset)?)?;
        embed_in_place(&mut host, &shifted, &piece.maps())?;
    }
    let report = verify_consecutive(&host)?;
    if !report.accepted {
        return Err(Error::PlanInvalid(format!(
            "composed cube fails verification: {report}"
        )));
    }
    Ok(host)
}

/// Plan from a block list in which underlined points are prefixed by `_`.
/// A block with every point underlined becomes `K_{m,m,m}`, one with a
/// single underline becomes `J_m` with that point distinguished, and one
/// with none becomes `K₃ × K_m`.
fn underlined_plan<T: Entry>(names: &[&str], blocks: &[&str], label: &str) -> Result<Plan<T>> {
    let index = |name: &str| {
        names
            .iter()
            .position(|&p| p == name)
            .ok_or_else(|| Error::Argument(format!("unknown point {name}")))
    };
    let mut pieces = Vec::with_capacity(blocks.len());
    for block in blocks {
        let mut marked = Vec::new();
        let mut plain = Vec::new();
        for token in block.split_whitespace() {
            match token.strip_prefix('_') {
                Some(name) => marked.push(index(name)?),
                None => plain.push(index(token)?),
            }
        }
        let m = marked.len() + plain.len();
        let kind = match marked.len() {
            0 => GraphKind::K3xK(m),
            1 => GraphKind::J { m, x: 0 },
            k if k == m => GraphKind::Kmmm(m),
            _ => return Err(Error::PlanInvalid(format!("block {{{block}}} has a partial underline"))),
        };
        marked.extend(plain);
        pieces.push(Piece::new(kind, marked)?);
    }
    Ok(Plan::new(names.len(), pieces, label))
}

const PLAN_11_POINTS: [&str; 11] = ["1", "2", "3", "4", "5", "6", "7", "8", "9", "oo1", "oo2"];

/// Extended affine plane of order 3 with an underline in every triple.
const PLAN_11: [&str; 13] = [
    "_1 5 9",
    "1 _6 8",
    "_2 6 7",
    "2 _4 9",
    "3 4 _8",
    "_3 5 7",
    "4 _5 6 oo1",
    "1 4 _7 oo2",
    "7 8 _9 oo1",
    "1 2 3 oo1",
    "2 5 8 oo2",
    "3 6 9 oo2",
    "_oo1 _oo2",
];

const PLAN_17_POINTS: [&str; 17] = [
    "1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11", "12", "13", "14", "15", "16", "oo",
];

/// Affine plane of order 4 with one parallel class extended by `oo`.
const PLAN_17: [&str; 20] = [
    "_1 _2 _3 _4 _oo",
    "1 _5 9 16",
    "2 5 11 _15",
    "3 5 7 _12",
    "4 5 8 14",
    "5 6 10 13 oo",
    "1 _6 7 8",
    "2 6 12 _14",
    "3 6 _9 15",
    "4 6 11 16",
    "7 9 11 14 oo",
    "1 _10 14 15",
    "2 _7 10 16",
    "3 8 10 _11",
    "4 9 10 12",
    "8 12 15 16 oo",
    "1 11 12 _13",
    "2 _8 9 13",
    "3 13 14 _16",
    "4 7 13 15",
];

/// Hand-built plans for the primes the general route cannot reach.
pub fn plan_special<T: Entry>(n: usize) -> Result<Plan<T>> {
    match n {
        7 => {
            // block x of the cyclic triple system is {x, x+1, x+3}, x first
            let pieces = sts7()
                .blocks()
                .iter()
                .map(|b| Piece::new(GraphKind::J { m: 3, x: 0 }, b.clone()))
                .collect::<Result<Vec<_>>>()?;
            Ok(Plan::new(7, pieces, "seven J3 pieces on the 7-point triple system"))
        }
        11 => underlined_plan(&PLAN_11_POINTS, &PLAN_11, "extended affine plane of order 3"),
        13 => {
            let pieces = (0..13)
                .map(|x| {
                    Piece::new(
                        GraphKind::J { m: 4, x: 0 },
                        [0, 1, 3, 9].iter().map(|d| (x + d) % 13).collect(),
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Plan::new(
                13,
                pieces,
                "thirteen J4 pieces on the cyclic plane of order 3",
            ))
        }
        17 => underlined_plan(
            &PLAN_17_POINTS,
            &PLAN_17,
            "affine plane of order 4 with one class extended",
        ),
        _ => Err(Error::Argument(format!("no special plan for n = {n}"))),
    }
}

/// Deletes a point from a PBD(n+1, {4,5,6}); the shrunk blocks become
/// `K_{m,m,m}` pieces and the rest `K₃ × K_m` pieces.
pub fn plan_general<T: Entry>(n: usize) -> Result<Plan<T>> {
    let design = delete_point(&pbd456(n + 1)?, n)?;
    let class = &design.classes()[0];
    let pieces = design
        .blocks()
        .iter()
        .enumerate()
        .map(|(b, block)| {
            let kind = if class.contains(&b) {
                GraphKind::Kmmm(block.len())
            } else {
                GraphKind::K3xK(block.len())
            };
            Piece::new(kind, block.clone())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Plan::new(n, pieces, design.provenance()))
}

/// How [`generate_sbc_with`] builds its cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Library, then special plans, then inflation, then the general route.
    #[default]
    Auto,
    Library,
    Inflate,
    Special,
    Pbd,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Strategy::Auto),
            "library" => Ok(Strategy::Library),
            "inflate" => Ok(Strategy::Inflate),
            "special" => Ok(Strategy::Special),
            "pbd" => Ok(Strategy::Pbd),
            _ => Err(Error::Argument(format!(
                "unknown strategy '{s}' (expected auto, library, inflate, special or pbd)"
            ))),
        }
    }
}

fn smallest_prime_factor(n: usize) -> usize {
    (2..)
        .take_while(|d| d * d <= n)
        .find(|d| n.is_multiple_of(*d))
        .unwrap_or(n)
}

/// A verified SBC(n).
pub fn generate_sbc<T: Entry>(n: usize) -> Result<Cube<T>> {
    generate_sbc_with(n, Strategy::Auto)
}

pub fn generate_sbc_with<T: Entry>(n: usize, strategy: Strategy) -> Result<Cube<T>> {
    if n < 2 {
        return Err(Error::Argument(format!("an SBC needs n ≥ 2, got {n}")));
    }
    let cube = match strategy {
        Strategy::Library => match n {
            2 => block_cube(BlockKind::Sbc2)?,
            3 => block_cube(BlockKind::Sbc3)?,
            5 => block_cube(BlockKind::Sbc5)?,
            _ => return Err(Error::Unavailable(format!("no bundled SBC({n})"))),
        },
        Strategy::Special => {
            if ![7, 11, 13, 17].contains(&n) {
                return Err(Error::Unavailable(format!("no special plan for n = {n}")));
            }
            construction_cons(&plan_special(n)?)?
        }
        Strategy::Inflate => {
            let p = smallest_prime_factor(n);
            if p == n {
                return Err(Error::Unavailable(format!("{n} is prime and cannot be inflated")));
            }
            inflate(&generate_sbc::<T>(p)?, n / p)?
        }
        Strategy::Pbd => match plan_general(n) {
            Ok(plan) => construction_cons(&plan)?,
            Err(Error::NoDesign(v)) => return Err(Error::Unavailable(format!("no PBD(v, {{4,5,6}}) for v = {v}"))),
            Err(e) => return Err(e),
        },
        Strategy::Auto => {
            let chosen = match n {
                2 | 3 | 5 => Strategy::Library,
                7 | 11 | 13 | 17 => Strategy::Special,
                _ if smallest_prime_factor(n) < n => Strategy::Inflate,
                _ => Strategy::Pbd,
            };
            return generate_sbc_with(n, chosen);
        }
    };
    let report = verify_consecutive(&cube)?;
    if !report.accepted {
        return Err(Error::PlanInvalid(format!("SBC({n}) fails verification: {report}")));
    }
    Ok(cube)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn range(cube: &Cube<u64>) -> (u64, u64) {
        verify_consecutive(cube).unwrap().expected_range
    }

    #[test]
    fn special_plans_line_totals() {
        for (n, pieces) in [(7, 7), (11, 13), (13, 13), (17, 20)] {
            let plan = plan_special::<u64>(n).unwrap();
            assert_eq!(plan.pieces().len(), pieces);
            assert_eq!(plan.total_lines(), 3 * n * n);
            plan.check_partition().unwrap();
        }
        let seven = plan_special::<u64>(7).unwrap();
        assert_eq!(seven.offsets(), vec![0, 21, 42, 63, 84, 105, 126]);
        assert!(matches!(plan_special::<u64>(19), Err(Error::Argument(_))));
    }

    #[test]
    fn special_plans_compose() {
        for n in [7, 11, 13, 17] {
            let cube = construction_cons(&plan_special::<u64>(n).unwrap()).unwrap();
            assert_eq!(range(&cube), (0, 3 * (n * n) as u64 - 1));
        }
    }

    #[test]
    fn eleven_piece_kinds() {
        let plan = plan_special::<u64>(11).unwrap();
        let count = |f: fn(&GraphKind) -> bool| plan.pieces().iter().filter(|p| f(&p.kind())).count();
        assert_eq!(count(|k| matches!(k, GraphKind::J { m: 3, .. })), 6);
        assert_eq!(count(|k| matches!(k, GraphKind::J { m: 4, .. })), 3);
        assert_eq!(count(|k| *k == GraphKind::K3xK(4)), 3);
        assert_eq!(count(|k| *k == GraphKind::Kmmm(2)), 1);
    }

    #[test]
    fn single_piece_plan_returns_its_base() {
        let plan = Plan::new(
            3,
            vec![Piece::<u64>::new(GraphKind::Kmmm(3), vec![0, 1, 2]).unwrap()],
            "one",
        );
        assert_eq!(construction_cons(&plan).unwrap(), block_cube(BlockKind::Sbc3).unwrap());
    }

    #[test]
    fn literal_eleven_triples_cannot_be_pieces() {
        assert!(matches!(
            Piece::<u64>::new(GraphKind::K3xK(3), vec![0, 1, 2]),
            Err(Error::NoSuchObject(_))
        ));
    }

    #[test]
    fn partition_errors_name_the_line() {
        let mut pieces = plan_special::<u64>(7).unwrap().pieces().to_vec();
        pieces.pop();
        let err = Plan::new(7, pieces.clone(), "short").check_partition().unwrap_err();
        assert!(
            matches!(err, Error::PlanInvalid(ref m) if m.contains("not covered")),
            "{err}"
        );
        pieces.push(pieces[0].clone());
        let err = construction_cons(&Plan::new(7, pieces, "doubled")).unwrap_err();
        assert!(
            matches!(err, Error::PlanInvalid(ref m) if m.contains("more than once")),
            "{err}"
        );
    }

    #[test]
    fn general_route() {
        for n in [12, 19, 23] {
            let plan = plan_general::<u64>(n).unwrap();
            assert_eq!(plan.total_lines(), 3 * n * n);
            let cube = construction_cons(&plan).unwrap();
            assert_eq!(range(&cube), (0, 3 * (n * n) as u64 - 1));
        }
        assert!(plan_general::<u64>(10).is_err());
    }

    #[test]
    fn strategies() {
        assert_eq!(generate_sbc::<u64>(2).unwrap(), block_cube(BlockKind::Sbc2).unwrap());
        let fourteen = generate_sbc::<u64>(14).unwrap();
        assert_eq!(fourteen, inflate(&block_cube(BlockKind::Sbc2).unwrap(), 7).unwrap());
        assert!(matches!(
            generate_sbc_with::<u64>(7, Strategy::Library),
            Err(Error::Unavailable(_))
        ));
        assert!(matches!(
            generate_sbc_with::<u64>(7, Strategy::Inflate),
            Err(Error::Unavailable(_))
        ));
        assert!(matches!(
            generate_sbc_with::<u64>(8, Strategy::Special),
            Err(Error::Unavailable(_))
        ));
        assert!(matches!(
            generate_sbc_with::<u64>(9, Strategy::Pbd),
            Err(Error::Unavailable(_))
        ));
        assert!(matches!(generate_sbc::<u64>(1), Err(Error::Argument(_))));
        assert_eq!("pbd".parse::<Strategy>().unwrap(), Strategy::Pbd);
        assert!("fast".parse::<Strategy>().is_err());
    }

    #[test]
    fn smallest_prime_factors() {
        let got: Vec<usize> = [2, 4, 9, 15, 17, 49, 91]
            .iter()
            .map(|&n| smallest_prime_factor(n))
            .collect();
        assert_eq!(got, vec![2, 2, 3, 3, 17, 7, 7]);
    }
}
