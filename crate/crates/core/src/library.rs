//! The explicit cubes every construction is assembled from.
//!
//! Each table ships in the text format under `data/` and is re-verified
//! whenever it is loaded.

use std::fmt;
use std::str::FromStr;

use crate::codec::decode_text;
use crate::cube::{verify_consecutive, Cube, Mask};
use crate::error::{Error, Result};
use crate::latin::GraphKind;
use crate::scalar::Entry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockKind {
    Sbc2,
    Sbc3,
    Sbc5,
    Sbhc4_14,
    Sbhc5_15,
    Sbhc6_16,
    /// `J₃` witness, distinguished index 1.
    Sbhc3_12,
    /// `J₄` witness, distinguished index 1.
    Sbhc4_13,
}

impl BlockKind {
    pub const ALL: [BlockKind; 8] = [
        BlockKind::Sbc2,
        BlockKind::Sbc3,
        BlockKind::Sbc5,
        BlockKind::Sbhc4_14,
        BlockKind::Sbhc5_15,
        BlockKind::Sbhc6_16,
        BlockKind::Sbhc3_12,
        BlockKind::Sbhc4_13,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BlockKind::Sbc2 => "SBC2",
            BlockKind::Sbc3 => "SBC3",
            BlockKind::Sbc5 => "SBC5",
            BlockKind::Sbhc4_14 => "SBHC4_14",
            BlockKind::Sbhc5_15 => "SBHC5_15",
            BlockKind::Sbhc6_16 => "SBHC6_16",
            BlockKind::Sbhc3_12 => "SBHC3_12",
            BlockKind::Sbhc4_13 => "SBHC4_13",
        }
    }

    pub fn graph(self) -> GraphKind {
        match self {
            BlockKind::Sbc2 => GraphKind::Kmmm(2),
            BlockKind::Sbc3 => GraphKind::Kmmm(3),
            BlockKind::Sbc5 => GraphKind::Kmmm(5),
            BlockKind::Sbhc4_14 => GraphKind::K3xK(4),
            BlockKind::Sbhc5_15 => GraphKind::K3xK(5),
            BlockKind::Sbhc6_16 => GraphKind::K3xK(6),
            BlockKind::Sbhc3_12 => GraphKind::J { m: 3, x: 0 },
            BlockKind::Sbhc4_13 => GraphKind::J { m: 4, x: 0 },
        }
    }

    pub fn order(self) -> usize {
        self.graph().order()
    }

    pub fn mask(self) -> Mask {
        self.graph().mask()
    }

    /// Number of nonempty lines, so the sums run over `0..line_count()`.
    pub fn line_count(self) -> usize {
        self.graph().edge_count()
    }

    /// The bundled witness for a graph shape, if there is one.
    pub fn for_graph(graph: GraphKind) -> Option<BlockKind> {
        BlockKind::ALL.into_iter().find(|k| k.graph() == graph)
    }

    fn source(self) -> &'static str {
        match self {
            BlockKind::Sbc2 => include_str!("../data/sbc2.txt"),
            BlockKind::Sbc3 => include_str!("../data/sbc3.txt"),
            BlockKind::Sbc5 => include_str!("../data/sbc5.txt"),
            BlockKind::Sbhc4_14 => include_str!("../data/sbhc4_14.txt"),
            BlockKind::Sbhc5_15 => include_str!("../data/sbhc5_15.txt"),
            BlockKind::Sbhc6_16 => include_str!("../data/sbhc6_16.txt"),
            BlockKind::Sbhc3_12 => include_str!("../data/sbhc3_12.txt"),
            BlockKind::Sbhc4_13 => include_str!("../data/sbhc4_13.txt"),
        }
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BlockKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BlockKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<&str> = BlockKind::ALL.iter().map(|k| k.name()).collect();
                Error::Argument(format!(
                    "unknown block kind '{s}' (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// A fresh copy of the bundled cube, decoded and checked against the kind's
/// mask and consecutive range.
pub fn block_cube<T: Entry>(kind: BlockKind) -> Result<Cube<T>> {
    let cube: Cube<T> = decode_text(kind.source())?;
    if cube.n() != kind.order() || *cube.mask() != kind.mask() {
        return Err(Error::Structural(format!("{kind} table has the wrong shape")));
    }
    if !cube.start().is_zero() {
        return Err(Error::Structural(format!("{kind} table does not start at 0")));
    }
    let report = verify_consecutive(&cube)?;
    if !report.accepted || report.line_count() != kind.line_count() {
        return Err(Error::Structural(format!("{kind} table fails verification: {report}")));
    }
    Ok(cube)
}
