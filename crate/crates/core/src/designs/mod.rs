//! Block designs: finite planes, triple systems, transversal designs,
//! PBD(v, {4,5,6}) synthesis, and Sarvate–Beam triple systems.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod cache;
pub mod field;
mod pbd;
mod planes;
mod sbts;

pub use cache::{cache_dir, CACHE_ENV};
pub use pbd::{pbd456, pbd456_available, pbd456_route, search_plane_deletion, Route, SearchOutcome};
pub use planes::{affine_plane, mols, mols_available, projective_plane, sts7, transversal_design, Plane};
pub use sbts::{sbts_pair_sums, SbtsReport, SbtsWeights};

/// A point set with a list of blocks.
///
/// Points are the indices `0..v`; each carries a display name (`"1"`,
/// `"∞1"`, …) that the file format uses. Block order and the order of
/// points inside a block are preserved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDesign {
    names: Vec<String>,
    blocks: Vec<Vec<usize>>,
    classes: Vec<Vec<usize>>,
    provenance: String,
}

impl BlockDesign {
    /// Points named `0..v`.
    pub fn new(v: usize, blocks: Vec<Vec<usize>>) -> Self {
        BlockDesign {
            names: (0..v).map(|p| p.to_string()).collect(),
            blocks,
            classes: Vec::new(),
            provenance: String::new(),
        }
    }

    /// Builds a design from blocks written with point names.
    pub fn from_named(names: Vec<String>, blocks: &[Vec<&str>]) -> Result<Self> {
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if index.len() != names.len() {
            return Err(Error::Argument("duplicate point names".into()));
        }
        let blocks = blocks
            .iter()
            .map(|block| {
                block
                    .iter()
                    .map(|name| {
                        index
                            .get(name)
                            .copied()
                            .ok_or_else(|| Error::Argument(format!("unknown point '{name}'")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BlockDesign {
            names,
            blocks,
            classes: Vec::new(),
            provenance: String::new(),
        })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.names.len());
        self.names = names;
        self
    }

    pub fn with_classes(mut self, classes: Vec<Vec<usize>>) -> Self {
        self.classes = classes;
        self
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn v(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, point: usize) -> &str {
        &self.names[point]
    }

    pub fn point(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|s| s == name)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Parallel classes as lists of block indices.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// How the design was obtained, e.g. `"affine plane of order 4"`.
    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.blocks.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        sizes.dedup();
        sizes
    }

    /// Blocks through `point`, by index.
    pub fn blocks_through(&self, point: usize) -> Vec<usize> {
        (0..self.blocks.len())
            .filter(|&b| self.blocks[b].contains(&point))
            .collect()
    }

    /// Whether the listed blocks partition the point set.
    pub fn is_parallel_class(&self, class: &[usize]) -> bool {
        let mut seen = vec![false; self.v()];
        for &b in class {
            let Some(block) = self.blocks.get(b) else {
                return false;
            };
            for &p in block {
                if std::mem::replace(&mut seen[p], true) {
                    return false;
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn to_doc(&self) -> DesignDoc {
        DesignDoc {
            v: self.v(),
            points: self.names.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|b| b.iter().map(|&p| self.names[p].clone()).collect())
                .collect(),
            classes: (!self.classes.is_empty()).then(|| self.classes.clone()),
            provenance: (!self.provenance.is_empty()).then(|| self.provenance.clone()),
        }
    }

    pub fn from_doc(doc: DesignDoc) -> Result<Self> {
        if doc.points.len() != doc.v {
            return Err(Error::parse(
                "points",
                format!("{} names for v = {}", doc.points.len(), doc.v),
            ));
        }
        let blocks: Vec<Vec<&str>> = doc
            .blocks
            .iter()
            .map(|b| b.iter().map(String::as_str).collect())
            .collect();
        let design =
            BlockDesign::from_named(doc.points.clone(), &blocks).map_err(|e| Error::parse("blocks", e.to_string()))?;
        if let Some(classes) = &doc.classes {
            if classes.iter().flatten().any(|&b| b >= design.blocks.len()) {
                return Err(Error::parse("classes", "block index out of range"));
            }
        }
        Ok(design
            .with_classes(doc.classes.unwrap_or_default())
            .with_provenance(doc.provenance.unwrap_or_default()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("design documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: DesignDoc = serde_json::from_str(text)
            .map_err(|err| Error::parse(format!("line {} column {}", err.line(), err.column()), err.to_string()))?;
        BlockDesign::from_doc(doc)
    }
}

/// File form of a design: `{"v", "points", "blocks", "classes"?}`; blocks
/// list point names.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignDoc {
    pub v: usize,
    pub points: Vec<String>,
    pub blocks: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

/// First problem found by [`verify_pbd`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DesignDefect {
    PointOutOfRange { block: usize, point: usize },
    RepeatedPoint { block: usize, point: usize },
    BlockSize { block: usize, size: usize },
    PairCovered { a: String, b: String, times: usize },
}

impl fmt::Display for DesignDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DesignDefect::PointOutOfRange { block, point } => {
                write!(f, "block {block} names point {point}, which does not exist")
            }
            DesignDefect::RepeatedPoint { block, point } => {
                write!(f, "block {block} lists point {point} twice")
            }
            DesignDefect::BlockSize { block, size } => {
                write!(f, "block {block} has size {size}, not in the allowed set")
            }
            DesignDefect::PairCovered { a, b, times } => {
                write!(f, "pair ({a},{b}) covered {times} times")
            }
        }
    }
}

/// Outcome of [`verify_pbd`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignReport {
    pub accepted: bool,
    pub first_defect: Option<DesignDefect>,
}

impl fmt::Display for DesignReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.first_defect {
            None => f.write_str("accepted"),
            Some(defect) => write!(f, "rejected: {defect}"),
        }
    }
}

/// Accepts iff every block size lies in `sizes` and every pair of distinct
/// points lies in exactly one block.
pub fn verify_pbd(design: &BlockDesign, sizes: &[usize]) -> DesignReport {
    let reject = |defect| DesignReport {
        accepted: false,
        first_defect: Some(defect),
    };
    let v = design.v();
    let mut cover = vec![0usize; v * v];
    for (b, block) in design.blocks.iter().enumerate() {
        if !sizes.contains(&block.len()) {
            return reject(DesignDefect::BlockSize {
                block: b,
                size: block.len(),
            });
        }
        for (x, &p) in block.iter().enumerate() {
            if p >= v {
                return reject(DesignDefect::PointOutOfRange { block: b, point: p });
            }
            if block[..x].contains(&p) {
                return reject(DesignDefect::RepeatedPoint { block: b, point: p });
            }
            for &q in &block[..x] {
                let (lo, hi) = (p.min(q), p.max(q));
                cover[lo * v + hi] += 1;
            }
        }
    }
    for lo in 0..v {
        for hi in lo + 1..v {
            let times = cover[lo * v + hi];
            if times != 1 {
                return reject(DesignDefect::PairCovered {
                    a: design.names[lo].clone(),
                    b: design.names[hi].clone(),
                    times,
                });
            }
        }
    }
    DesignReport {
        accepted: true,
        first_defect: None,
    }
}

/// Removes `point`. Blocks through it shrink and become the single recorded
/// parallel class; other classes are dropped. Shrunk blocks of size below 2
/// would leave a piece with no admissible cube, so they are rejected.
pub fn delete_point(design: &BlockDesign, point: usize) -> Result<BlockDesign> {
    if point >= design.v() {
        return Err(Error::Argument(format!("point {point} is not in the design")));
    }
    let report = verify_pbd(design, &(1..=design.v()).collect::<Vec<_>>());
    if !report.accepted {
        return Err(Error::Precondition(format!("input is not a PBD: {report}")));
    }
    let relabel = |p: usize| if p > point { p - 1 } else { p };
    let mut names = design.names.clone();
    names.remove(point);

    let mut blocks = Vec::with_capacity(design.blocks.len());
    let mut class = Vec::new();
    for block in &design.blocks {
        let shrunk: Vec<usize> = block.iter().filter(|&&p| p != point).map(|&p| relabel(p)).collect();
        if shrunk.len() < block.len() {
            if shrunk.len() < 2 {
                return Err(Error::Degenerate(format!(
                    "deleting point {} leaves a block of size {}",
                    design.names[point],
                    shrunk.len()
                )));
            }
            class.push(blocks.len());
        }
        blocks.push(shrunk);
    }
    let result = BlockDesign {
        names,
        blocks,
        classes: vec![class],
        provenance: format!("{} minus point {}", design.provenance, design.names[point]),
    };
    let all_sizes: Vec<usize> = (2..=result.v().max(2)).collect();
    let report = verify_pbd(&result, &all_sizes);
    if !report.accepted || !result.is_parallel_class(&result.classes[0]) {
        return Err(Error::Degenerate(format!("point deletion broke the design: {report}")));
    }
    Ok(result)
}
