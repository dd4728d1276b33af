//! Finite planes, the 7-point triple system, MOLS, and transversal designs.

use super::field::{prime_power, prime_power_factors, GaloisField};
use super::{verify_pbd, BlockDesign};
use crate::error::{Error, Result};
use crate::latin::LatinSquare;

/// A finite plane of prime-power order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Plane {
    Affine(usize),
    Projective(usize),
}

impl Plane {
    pub fn order(&self) -> usize {
        match *self {
            Plane::Affine(q) | Plane::Projective(q) => q,
        }
    }

    pub fn point_count(&self) -> usize {
        match *self {
            Plane::Affine(q) => q * q,
            Plane::Projective(q) => q * q + q + 1,
        }
    }

    pub fn line_size(&self) -> usize {
        match *self {
            Plane::Affine(q) => q,
            Plane::Projective(q) => q + 1,
        }
    }

    pub fn build(&self) -> Result<BlockDesign> {
        match *self {
            Plane::Affine(q) => affine_plane(q),
            Plane::Projective(q) => projective_plane(q),
        }
    }

    pub fn tag(&self) -> String {
        match *self {
            Plane::Affine(q) => format!("AG{q}"),
            Plane::Projective(q) => format!("PG{q}"),
        }
    }

    pub fn from_tag(tag: &str) -> Option<Plane> {
        let (kind, q) = tag.split_at(2);
        let q: usize = q.parse().ok()?;
        prime_power(q)?;
        match kind {
            "AG" => Some(Plane::Affine(q)),
            "PG" => Some(Plane::Projective(q)),
            _ => None,
        }
    }
}

fn affine_lines(q: usize) -> Result<Vec<Vec<Vec<usize>>>> {
    let field = GaloisField::new(q)?;
    // point (x, y) is x * q + y; one class per slope, then the verticals
    let mut classes = Vec::with_capacity(q + 1);
    for slope in 0..q {
        classes.push(
            (0..q)
                .map(|c| (0..q).map(|x| x * q + field.add(field.mul(slope, x), c)).collect())
                .collect(),
        );
    }
    classes.push((0..q).map(|c| (0..q).map(|y| c * q + y).collect()).collect());
    Ok(classes)
}

/// AG(2, q): the `q²` points of GF(q)² and their `q² + q` lines, grouped
/// into `q + 1` parallel classes.
pub fn affine_plane(q: usize) -> Result<BlockDesign> {
    let classes = affine_lines(q)?;
    let mut blocks = Vec::with_capacity(q * q + q);
    let mut class_index = Vec::with_capacity(q + 1);
    for class in classes {
        let start = blocks.len();
        blocks.extend(class);
        class_index.push((start..blocks.len()).collect());
    }
    let design = BlockDesign::new(q * q, blocks)
        .with_classes(class_index)
        .with_provenance(format!("affine plane of order {q}"));
    debug_assert!(verify_pbd(&design, &[q]).accepted);
    Ok(design)
}

/// PG(2, q): the affine plane with one point at infinity per parallel class
/// and the line at infinity through them.
pub fn projective_plane(q: usize) -> Result<BlockDesign> {
    let classes = affine_lines(q)?;
    let mut blocks = Vec::with_capacity(q * q + q + 1);
    for (c, class) in classes.into_iter().enumerate() {
        for mut line in class {
            line.push(q * q + c);
            blocks.push(line);
        }
    }
    blocks.push((q * q..q * q + q + 1).collect());
    let design = BlockDesign::new(q * q + q + 1, blocks).with_provenance(format!("projective plane of order {q}"));
    debug_assert!(verify_pbd(&design, &[q + 1]).accepted);
    Ok(design)
}

/// The Steiner triple system on Z/7 developed from the base block `{0,1,3}`;
/// block `x` is `{x, x+1, x+3}`.
pub fn sts7() -> BlockDesign {
    let blocks = (0..7).map(|x| vec![x, (x + 1) % 7, (x + 3) % 7]).collect();
    BlockDesign::new(7, blocks).with_provenance("cyclic triple system developed from {0,1,3} mod 7")
}

/// Number of MOLS of order `m` this crate can build: `min(pᵉ − 1)` over the
/// prime-power factors of `m`.
pub fn mols_available(m: usize) -> usize {
    if m < 2 {
        return 0;
    }
    prime_power_factors(m).into_iter().map(|q| q - 1).min().unwrap_or(0)
}

/// `count` mutually orthogonal Latin squares of order `m`, from
/// `L_a(x, y) = a·x + y` over each prime-power factor, combined by direct
/// product.
pub fn mols(m: usize, count: usize) -> Result<Vec<LatinSquare>> {
    let available = mols_available(m);
    if count > available {
        return Err(Error::Availability(format!(
            "order {m} supports {available} squares, {count} requested"
        )));
    }
    let factors = prime_power_factors(m);
    let fields = factors
        .iter()
        .map(|&q| GaloisField::new(q))
        .collect::<Result<Vec<_>>>()?;
    let mut squares = Vec::with_capacity(count);
    for a in 1..=count {
        let mut rows = vec![vec![0usize; m]; m];
        for (x, row) in rows.iter_mut().enumerate() {
            for (y, cell) in row.iter_mut().enumerate() {
                // mixed-radix digits of x and y, one per factor
                let (mut xr, mut yr, mut value, mut scale) = (x, y, 0, 1);
                for (field, &q) in fields.iter().zip(&factors) {
                    let (xd, yd) = (xr % q, yr % q);
                    xr /= q;
                    yr /= q;
                    value += field.add(field.mul(a, xd), yd) * scale;
                    scale *= q;
                }
                *cell = value;
            }
        }
        squares.push(LatinSquare::from_rows(rows)?);
    }
    Ok(squares)
}

/// TD(k, m) from `k − 2` MOLS: group `g` holds points `g·m .. (g+1)·m`, and
/// each cell `(r, c)` gives the block `{(0,r), (1,c), (2,L₁[r][c]), …}`.
/// Returns the design and its groups.
pub fn transversal_design(k: usize, m: usize) -> Result<(BlockDesign, Vec<Vec<usize>>)> {
    if k < 2 {
        return Err(Error::Argument("a transversal design needs at least two groups".into()));
    }
    let squares = mols(m, k - 2)?;
    let mut blocks = Vec::with_capacity(m * m);
    for r in 0..m {
        for c in 0..m {
            let mut block = vec![r, m + c];
            for (s, square) in squares.iter().enumerate() {
                block.push((s + 2) * m + square.get(r, c));
            }
            blocks.push(block);
        }
    }
    let groups = (0..k).map(|g| (g * m..(g + 1) * m).collect()).collect();
    let design = BlockDesign::new(k * m, blocks).with_provenance(format!("TD({k},{m})"));
    Ok((design, groups))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_planes() {
        for (q, classes) in [(2, 3), (3, 4), (4, 5), (5, 6), (7, 8), (8, 9), (9, 10)] {
            let plane = affine_plane(q).unwrap();
            assert_eq!(plane.v(), q * q);
            assert_eq!(plane.blocks().len(), q * q + q);
            assert_eq!(plane.classes().len(), classes);
            assert!(plane
                .classes()
                .iter()
                .all(|c| c.len() == q && plane.is_parallel_class(c)));
            assert!(verify_pbd(&plane, &[q]).accepted);
            assert!((0..plane.v()).all(|p| plane.blocks_through(p).len() == q + 1));
        }
        assert!(matches!(affine_plane(6), Err(Error::Argument(_))));
    }

    #[test]
    fn projective_planes() {
        for q in [2, 3, 4, 5, 7] {
            let plane = projective_plane(q).unwrap();
            assert_eq!(plane.v(), q * q + q + 1);
            assert_eq!(plane.blocks().len(), q * q + q + 1);
            assert!(verify_pbd(&plane, &[q + 1]).accepted);
            assert!((0..plane.v()).all(|p| plane.blocks_through(p).len() == q + 1));
        }
        assert!(projective_plane(10).is_err());
    }

    #[test]
    fn fano_plane_is_an_sts7() {
        let fano = projective_plane(2).unwrap();
        assert_eq!(fano.v(), 7);
        assert!(verify_pbd(&fano, &[3]).accepted);
        let sts = sts7();
        assert!(verify_pbd(&sts, &[3]).accepted);
        assert_eq!(sts.blocks()[0], vec![0, 1, 3]);
        assert_eq!(sts.blocks()[6], vec![6, 0, 2]);
        let with_pair: Vec<_> = sts
            .blocks()
            .iter()
            .filter(|b| b.contains(&0) && b.contains(&5))
            .collect();
        assert_eq!(with_pair, vec![&vec![4, 5, 0]]);
    }

    #[test]
    fn mols_counts_and_orthogonality() {
        assert_eq!(mols_available(2), 1);
        assert_eq!(mols_available(3), 2);
        assert_eq!(mols_available(4), 3);
        assert_eq!(mols_available(6), 1);
        assert_eq!(mols_available(12), 2);
        assert_eq!(mols_available(35), 4);
        for m in [3, 4, 5, 8, 9, 12, 15, 20] {
            let squares = mols(m, mols_available(m)).unwrap();
            for (a, x) in squares.iter().enumerate() {
                assert!(x.is_latin());
                for y in &squares[a + 1..] {
                    assert!(x.is_orthogonal_to(y), "order {m}");
                }
            }
        }
        assert_eq!(mols(2, 1).unwrap().len(), 1);
        assert!(matches!(mols(2, 2), Err(Error::Availability(_))));
        assert!(matches!(mols(6, 2), Err(Error::Availability(_))));
    }

    #[test]
    fn transversal_designs_cover_cross_group_pairs() {
        let (td, groups) = transversal_design(6, 5).unwrap();
        let mut blocks = td.blocks().to_vec();
        blocks.extend(groups);
        let pbd = BlockDesign::new(30, blocks);
        assert!(verify_pbd(&pbd, &[5, 6]).accepted);
    }
}
