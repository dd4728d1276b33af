//! Construction of PBD(v, {4,5,6}).
//!
//! Routes, tried in order:
//! 1. a single block (`v ≤ 6`), a plane whose lines have 4–6 points, or an
//!    affine plane with `t` parallel classes extended by new points;
//! 2. a transversal design TD(k, m), `k ∈ {4,5,6}`, with up to `k − 4`
//!    groups truncated and optionally one adjoined point, every group
//!    (plus the adjoined point) filled by a smaller PBD(·, {4,5,6});
//! 3. a bundled table of point sets whose deletion from a finite plane
//!    leaves every line with 0, 1, 4, 5 or 6 points, and of cyclic
//!    difference families;
//! 4. a seeded local search for such a point set, cached on disk.
//!
//! Every design is checked by [`verify_pbd`] before it is returned.

use std::collections::HashMap;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cache;
use super::planes::{affine_plane, mols_available, transversal_design, Plane};
use super::{verify_pbd, BlockDesign};
use crate::error::{Error, Result};

const SIZES: [usize; 3] = [4, 5, 6];

/// Orders below 24 for which a design exists.
pub const SMALL_ORDERS: [usize; 9] = [4, 5, 6, 13, 16, 17, 20, 21, 22];

/// How a particular PBD(v, {4,5,6}) is assembled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Route {
    /// One block holding every point, `v ∈ {4,5,6}`.
    Single(usize),
    Plane(Plane),
    /// AG(2, q) with a new point added to each line of the first `extended`
    /// parallel classes, plus a block on the new points when there are two
    /// or more.
    ExtendedAffine {
        q: usize,
        extended: usize,
    },
    /// TD(k, m) with the last groups cut down to `truncated` points each and
    /// an optional extra point joined to every group.
    TruncatedTd {
        k: usize,
        m: usize,
        truncated: Vec<usize>,
        adjoin: bool,
    },
    /// A plane with the listed points removed; lines left with at most one
    /// point are dropped.
    Deletion {
        plane: Plane,
        deleted: Vec<usize>,
    },
    /// Every translate mod `modulus` of each base block.
    Cyclic {
        modulus: usize,
        base: Vec<Vec<usize>>,
    },
}

impl Route {
    pub fn describe(&self) -> String {
        match self {
            Route::Single(v) => format!("single block of size {v}"),
            Route::Plane(Plane::Affine(q)) => format!("affine plane of order {q}"),
            Route::Plane(Plane::Projective(q)) => format!("projective plane of order {q}"),
            Route::ExtendedAffine { q, extended } => {
                format!("affine plane of order {q} with {extended} parallel classes extended")
            }
            Route::TruncatedTd {
                k,
                m,
                truncated,
                adjoin,
            } => {
                let mut text = format!("TD({k},{m})");
                if !truncated.is_empty() {
                    let sizes: Vec<String> = truncated.iter().map(usize::to_string).collect();
                    text.push_str(&format!(" truncated to {}", sizes.join(",")));
                }
                if *adjoin {
                    text.push_str(" plus one point");
                }
                text
            }
            Route::Deletion { plane, deleted } => {
                format!("{} minus {} points", plane.tag(), deleted.len())
            }
            Route::Cyclic { modulus, base } => {
                format!("{} base blocks developed mod {modulus}", base.len())
            }
        }
    }

    /// One-line form used by the bundled table and the disk cache:
    /// `<plane tag> <deleted points…>` or `Z<v> <base block>…` with
    /// comma-separated blocks.
    fn table_line(&self) -> Option<String> {
        match self {
            Route::Deletion { plane, deleted } => {
                let mut line = plane.tag();
                for p in deleted {
                    line.push(' ');
                    line.push_str(&p.to_string());
                }
                Some(line)
            }
            Route::Cyclic { modulus, base } => {
                let mut line = format!("Z{modulus}");
                for block in base {
                    let points: Vec<String> = block.iter().map(usize::to_string).collect();
                    line.push(' ');
                    line.push_str(&points.join(","));
                }
                Some(line)
            }
            _ => None,
        }
    }
}

fn parse_route(text: &str) -> Option<Route> {
    let mut tokens = text.split_whitespace();
    let head = tokens.next()?;
    if let Some(modulus) = head.strip_prefix('Z') {
        let base = tokens
            .map(|block| {
                block
                    .split(',')
                    .map(str::parse)
                    .collect::<std::result::Result<Vec<usize>, _>>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .ok()?;
        return Some(Route::Cyclic {
            modulus: modulus.parse().ok()?,
            base,
        });
    }
    let mut tokens = text.split_whitespace();
    let plane = Plane::from_tag(tokens.next()?)?;
    let deleted = tokens
        .map(str::parse)
        .collect::<std::result::Result<Vec<usize>, _>>()
        .ok()?;
    Some(Route::Deletion { plane, deleted })
}

/// `v → route` for the bundled table.
fn bundled() -> &'static HashMap<usize, Route> {
    static TABLE: OnceLock<HashMap<usize, Route>> = OnceLock::new();
    TABLE.get_or_init(|| {
        include_str!("../../data/pbd456_table.txt")
            .lines()
            .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
            .map(|line| {
                let (v, rest) = line.split_once(' ').expect("table line has a size");
                let route = parse_route(rest).expect("table line parses");
                (v.parse().expect("table size is a number"), route)
            })
            .collect()
    })
}

/// Route finder with memoisation over smaller orders.
struct Planner {
    memo: HashMap<usize, Option<Route>>,
}

impl Planner {
    fn new() -> Self {
        Planner { memo: HashMap::new() }
    }

    /// Whether a group of `size` points can be filled: nothing to do for 0
    /// or 1 points, otherwise a PBD of that order is required.
    fn fillable(&mut self, size: usize) -> bool {
        size <= 1 || self.route(size).is_some()
    }

    fn route(&mut self, v: usize) -> Option<Route> {
        if let Some(known) = self.memo.get(&v) {
            return known.clone();
        }
        let found = self.find(v);
        self.memo.insert(v, found.clone());
        found
    }

    fn find(&mut self, v: usize) -> Option<Route> {
        if v < 4 {
            return None;
        }
        if v <= 6 {
            return Some(Route::Single(v));
        }
        for q in [3, 4, 5] {
            if v == q * q + q + 1 {
                return Some(Route::Plane(Plane::Projective(q)));
            }
        }
        for q in [4, 5] {
            if v == q * q {
                return Some(Route::Plane(Plane::Affine(q)));
            }
            if v > q * q && v <= q * q + q + 1 {
                let extended = v - q * q;
                if extended == 1 || (4..=6).contains(&extended) {
                    return Some(Route::ExtendedAffine { q, extended });
                }
            }
        }
        if let Some(route) = self.truncated_td(v) {
            return Some(route);
        }
        bundled().get(&v).cloned()
    }

    fn truncated_td(&mut self, v: usize) -> Option<Route> {
        for k in [6, 5, 4] {
            for m in 2..v {
                if (k - 4 + 1) * m > v {
                    break;
                }
                if mols_available(m) < k - 2 {
                    continue;
                }
                for truncations in 0..=k - 4 {
                    for adjoin in [false, true] {
                        let y = usize::from(adjoin);
                        let full = (k - truncations) * m + y;
                        if full > v || !self.fillable(m + y) {
                            continue;
                        }
                        let rest = v - full;
                        if let Some(truncated) = self.split_truncation(rest, truncations, m, y) {
                            return Some(Route::TruncatedTd {
                                k,
                                m,
                                truncated,
                                adjoin,
                            });
                        }
                    }
                }
            }
        }
        None
    }

    /// Writes `rest` as `parts` group sizes below `m`, largest first, each
    /// fillable once the adjoined points are added.
    fn split_truncation(&mut self, rest: usize, parts: usize, m: usize, y: usize) -> Option<Vec<usize>> {
        match parts {
            0 => (rest == 0).then(Vec::new),
            1 => (rest < m && self.fillable(rest + y)).then(|| vec![rest]),
            _ => {
                for first in (0..m.min(rest + 1)).rev() {
                    if !self.fillable(first + y) {
                        continue;
                    }
                    if let Some(mut tail) = self.split_truncation(rest - first, parts - 1, m, y) {
                        if tail[0] <= first {
                            tail.insert(0, first);
                            return Some(tail);
                        }
                    }
                }
                None
            }
        }
    }
}

/// The recursive route for `v`, without falling back to search.
pub fn pbd456_route(v: usize) -> Option<Route> {
    if v < 24 && !SMALL_ORDERS.contains(&v) {
        return None;
    }
    Planner::new().route(v)
}

/// Whether [`pbd456`] can answer without searching.
pub fn pbd456_available(v: usize) -> bool {
    pbd456_route(v).is_some()
}

/// A verified PBD(v, {4,5,6}) for `v ∈ {4,5,6,13,16,17,20,21,22}` or
/// `v ≥ 24`.
pub fn pbd456(v: usize) -> Result<BlockDesign> {
    if v < 24 && !SMALL_ORDERS.contains(&v) {
        return Err(Error::NoDesign(v));
    }
    let route = match pbd456_route(v) {
        Some(route) => route,
        None => searched_route(v)?,
    };
    let design = build(&route)?;
    gate(design, v)
}

fn gate(design: BlockDesign, v: usize) -> Result<BlockDesign> {
    let report = verify_pbd(&design, &SIZES);
    if design.v() != v || !report.accepted {
        return Err(Error::Precondition(format!(
            "construction for v = {v} produced an invalid design: {report}"
        )));
    }
    Ok(design)
}

/// Cached result of an earlier search, or a fresh search that is then
/// cached.
fn searched_route(v: usize) -> Result<Route> {
    let key = format!("pbd456-{v}.txt");
    if let Some(text) = cache::load(&key) {
        if let Some(route) = parse_route(&text) {
            if build(&route).and_then(|d| gate(d, v)).is_ok() {
                return Ok(route);
            }
        }
    }
    match search_plane_deletion(v, 0, 20_000_000) {
        SearchOutcome::Found(route) => {
            if let Some(line) = route.table_line() {
                // a failed cache write only costs a repeat search later
                let _ = cache::store(&key, &line);
            }
            Ok(route)
        }
        SearchOutcome::BudgetExceeded => Err(Error::NoDesign(v)),
    }
}

/// Materialises a route.
pub fn build(route: &Route) -> Result<BlockDesign> {
    let mut planner = Planner::new();
    build_with(route, &mut planner)
}

fn build_with(route: &Route, planner: &mut Planner) -> Result<BlockDesign> {
    let design = match route {
        Route::Single(v) => BlockDesign::new(*v, vec![(0..*v).collect()]),
        Route::Plane(plane) => plane.build()?,
        Route::ExtendedAffine { q, extended } => {
            let (q, t) = (*q, *extended);
            let plane = affine_plane(q)?;
            let mut blocks = plane.blocks().to_vec();
            for (c, class) in plane.classes().iter().enumerate().take(t) {
                for &b in class {
                    blocks[b].push(q * q + c);
                }
            }
            if t >= 2 {
                blocks.push((q * q..q * q + t).collect());
            }
            BlockDesign::new(q * q + t, blocks)
        }
        Route::TruncatedTd {
            k,
            m,
            truncated,
            adjoin,
        } => truncated_td(*k, *m, truncated, *adjoin, planner)?,
        Route::Deletion { plane, deleted } => {
            let full = plane.build()?;
            let mut gone = vec![false; full.v()];
            for &p in deleted {
                if p >= full.v() {
                    return Err(Error::Argument(format!("point {p} is not in {}", plane.tag())));
                }
                gone[p] = true;
            }
            let mut relabel = vec![usize::MAX; full.v()];
            let mut next = 0;
            for p in 0..full.v() {
                if !gone[p] {
                    relabel[p] = next;
                    next += 1;
                }
            }
            let blocks = full
                .blocks()
                .iter()
                .map(|b| b.iter().filter(|&&p| !gone[p]).map(|&p| relabel[p]).collect::<Vec<_>>())
                .filter(|b| b.len() >= 2)
                .collect();
            BlockDesign::new(next, blocks)
        }
        Route::Cyclic { modulus, base } => {
            let v = *modulus;
            if base.iter().flatten().any(|&p| p >= v) {
                return Err(Error::Argument(format!("base block point outside Z/{v}")));
            }
            let blocks = base
                .iter()
                .flat_map(|block| (0..v).map(move |x| block.iter().map(|&p| (p + x) % v).collect()))
                .collect();
            BlockDesign::new(v, blocks)
        }
    };
    Ok(design.with_provenance(route.describe()))
}

fn truncated_td(k: usize, m: usize, truncated: &[usize], adjoin: bool, planner: &mut Planner) -> Result<BlockDesign> {
    let (td, groups) = transversal_design(k, m)?;
    let first_cut = k - truncated.len();
    let mut keep = vec![true; k * m];
    for (g, &size) in truncated.iter().enumerate() {
        for &p in &groups[first_cut + g][size..] {
            keep[p] = false;
        }
    }
    let mut relabel = vec![usize::MAX; k * m];
    let mut next = 0;
    for p in 0..k * m {
        if keep[p] {
            relabel[p] = next;
            next += 1;
        }
    }
    let infinity = next;
    let v = next + usize::from(adjoin);

    let mut blocks: Vec<Vec<usize>> = td
        .blocks()
        .iter()
        .map(|b| b.iter().filter(|&&p| keep[p]).map(|&p| relabel[p]).collect())
        .collect();
    for group in &groups {
        let mut members: Vec<usize> = group.iter().filter(|&&p| keep[p]).map(|&p| relabel[p]).collect();
        if adjoin {
            members.push(infinity);
        }
        if members.len() < 2 {
            continue;
        }
        let route = planner.route(members.len()).ok_or(Error::NoDesign(members.len()))?;
        let filler = build_with(&route, planner)?;
        blocks.extend(
            filler
                .blocks()
                .iter()
                .map(|b| b.iter().map(|&p| members[p]).collect::<Vec<_>>()),
        );
    }
    Ok(BlockDesign::new(v, blocks))
}

/// Result of the deletion search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Route),
    BudgetExceeded,
}

/// Planes whose point count and line size make a deletion to `v` points
/// arithmetically possible: the average number of deleted points per line
/// must lie within the admissible range.
fn candidate_planes(v: usize) -> Vec<Plane> {
    let mut out = Vec::new();
    for q in [7, 8, 9, 11, 13, 16] {
        for plane in [Plane::Affine(q), Plane::Projective(q)] {
            let points = plane.point_count();
            if points < v {
                continue;
            }
            let line = plane.line_size();
            let lines = match plane {
                Plane::Affine(q) => q * q + q,
                Plane::Projective(q) => q * q + q + 1,
            };
            let deleted = points - v;
            let average = (q + 1) as f64 * deleted as f64 / lines as f64;
            let lo = line.saturating_sub(6) as f64;
            let hi = line.saturating_sub(4) as f64;
            if average >= lo && average <= hi {
                out.push(plane);
            }
        }
    }
    out
}

/// Seeded simulated annealing for a point set whose removal leaves every
/// line of a plane with 0, 1, 4, 5 or 6 points. Deterministic per
/// `(v, seed, budget)`; `budget` bounds the total number of moves.
pub fn search_plane_deletion(v: usize, seed: u64, budget: u64) -> SearchOutcome {
    let planes = candidate_planes(v);
    if planes.is_empty() {
        return SearchOutcome::BudgetExceeded;
    }
    let mut spent = 0u64;
    let mut round = 0u64;
    while spent < budget {
        for plane in &planes {
            let slice = (budget - spent).min(2_000_000);
            if slice == 0 {
                break;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (round << 32) ^ (v as u64) << 8 ^ plane.order() as u64);
            let (found, used) = anneal(*plane, v, slice, &mut rng);
            spent += used;
            if let Some(deleted) = found {
                let route = Route::Deletion { plane: *plane, deleted };
                if build(&route).and_then(|d| gate(d, v)).is_ok() {
                    return SearchOutcome::Found(route);
                }
            }
        }
        round += 1;
    }
    SearchOutcome::BudgetExceeded
}

fn anneal(plane: Plane, v: usize, budget: u64, rng: &mut ChaCha8Rng) -> (Option<Vec<usize>>, u64) {
    let Ok(design) = plane.build() else {
        return (None, 0);
    };
    let points = design.v();
    let line_size = plane.line_size();
    let lines = design.blocks();
    let mut through = vec![Vec::new(); points];
    for (l, line) in lines.iter().enumerate() {
        for &p in line {
            through[p].push(l);
        }
    }
    let good = |deleted: usize| matches!(line_size - deleted, 0 | 1 | 4 | 5 | 6);

    let mut order: Vec<usize> = (0..points).collect();
    for i in (1..points).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let target = points - v;
    let mut inside: Vec<usize> = order[..target].to_vec();
    let mut outside: Vec<usize> = order[target..].to_vec();
    let mut hits = vec![0usize; lines.len()];
    for &p in &inside {
        for &l in &through[p] {
            hits[l] += 1;
        }
    }
    let mut cost: i64 = hits.iter().filter(|&&h| !good(h)).count() as i64;
    let mut temperature = 1.0f64;
    let mut used = 0;
    while used < budget {
        if cost == 0 {
            let mut deleted = inside;
            deleted.sort_unstable();
            return (Some(deleted), used);
        }
        used += 1;
        let a = rng.gen_range(0..inside.len());
        let b = rng.gen_range(0..outside.len());
        let (x, y) = (inside[a], outside[b]);
        let mut delta = 0i64;
        for &l in &through[x] {
            let before = good(hits[l]);
            hits[l] -= 1;
            delta += i64::from(before) - i64::from(good(hits[l]));
        }
        for &l in &through[y] {
            let before = good(hits[l]);
            hits[l] += 1;
            delta += i64::from(before) - i64::from(good(hits[l]));
        }
        let accept = delta <= 0 || rng.gen::<f64>() < (-(delta as f64) / temperature).exp();
        if accept {
            inside[a] = y;
            outside[b] = x;
            cost += delta;
        } else {
            for &l in &through[y] {
                hits[l] -= 1;
            }
            for &l in &through[x] {
                hits[l] += 1;
            }
        }
        temperature = (temperature * 0.99999).max(0.08);
    }
    (None, used)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_members_use_direct_routes() {
        assert_eq!(pbd456_route(16), Some(Route::Plane(Plane::Affine(4))));
        assert_eq!(pbd456_route(13), Some(Route::Plane(Plane::Projective(3))));
        assert_eq!(pbd456_route(21), Some(Route::Plane(Plane::Projective(4))));
        assert_eq!(pbd456_route(17), Some(Route::ExtendedAffine { q: 4, extended: 1 }));
        assert_eq!(pbd456_route(20), Some(Route::ExtendedAffine { q: 4, extended: 4 }));
        assert!(matches!(pbd456_route(22), Some(Route::TruncatedTd { .. })));
    }

    #[test]
    fn exceptions_are_refused() {
        for v in [0, 1, 2, 3, 7, 8, 9, 10, 11, 12, 14, 15, 18, 19, 23] {
            assert_eq!(pbd456(v), Err(Error::NoDesign(v)), "v = {v}");
            assert!(!pbd456_available(v));
        }
    }

    #[test]
    fn planes_match_direct_constructions() {
        assert_eq!(pbd456(16).unwrap().blocks(), affine_plane(4).unwrap().blocks());
        assert_eq!(
            pbd456(13).unwrap().blocks(),
            super::super::projective_plane(3).unwrap().blocks()
        );
    }

    #[test]
    fn extended_affine_seventeen_has_one_large_class() {
        let d = pbd456(17).unwrap();
        assert_eq!(d.block_sizes(), vec![4, 5]);
        assert_eq!(d.blocks().iter().filter(|b| b.len() == 5).count(), 4);
    }

    #[test]
    fn deletion_lines_round_trip() {
        let route = Route::Deletion {
            plane: Plane::Affine(7),
            deleted: vec![1, 2, 3],
        };
        let line = route.table_line().unwrap();
        assert_eq!(line, "AG7 1 2 3");
        assert_eq!(parse_route(&line), Some(route));
    }

    #[test]
    fn cyclic_lines_round_trip() {
        let route = parse_route("Z13 0,1,3,9").unwrap();
        assert_eq!(route.table_line().unwrap(), "Z13 0,1,3,9");
        let design = build(&route).unwrap();
        assert!(verify_pbd(&design, &[4]).accepted);
        assert_eq!(design.blocks().len(), 13);
    }

    #[test]
    fn bundled_table_entries_verify() {
        for (&v, route) in bundled() {
            let design = build(route).unwrap();
            assert_eq!(design.v(), v);
            assert!(verify_pbd(&design, &SIZES).accepted, "v = {v}");
        }
    }

    #[test]
    fn search_finds_small_deletion() {
        match search_plane_deletion(33, 7, 2_000_000) {
            SearchOutcome::Found(route) => {
                let d = build(&route).unwrap();
                assert!(verify_pbd(&d, &SIZES).accepted);
                assert_eq!(d.v(), 33);
            }
            SearchOutcome::BudgetExceeded => panic!("no deletion found for 33"),
        }
        assert_eq!(search_plane_deletion(400, 0, 1000), SearchOutcome::BudgetExceeded);
    }
}
