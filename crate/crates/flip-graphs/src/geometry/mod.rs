//! Exact geometric model: point configurations, arcs, crossings, triangulations
//! and the flip operation.
//!
//! A configuration is a convex polygon given by its boundary vertices in
//! counterclockwise order (corners and flat vertices) followed by interior
//! punctures. All coordinates are integers and every geometric question is
//! answered by exact sign computations, so flat vertices (exact collinearity)
//! are handled without tolerance knobs.

pub mod arcset;
pub mod io;
pub mod predicates;
pub mod shapes;

pub use arcset::ArcSet;

use crate::error::{Error, Result};
use predicates::{orient, segments_cross, strictly_between, strictly_inside_triangle, Coord};

pub type PointId = usize;
pub type ArcId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    Corner,
    Flat,
    Puncture,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Point {
    pub x: i64,
    pub y: i64,
    pub kind: PointKind,
}

impl Point {
    pub fn new(x: i64, y: i64, kind: PointKind) -> Self {
        Point { x, y, kind }
    }

    #[inline]
    pub fn coord(&self) -> Coord {
        (self.x, self.y)
    }
}

/// A straight segment between two configuration points, stored with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub a: PointId,
    pub b: PointId,
}

impl Arc {
    pub fn new(u: PointId, v: PointId) -> Self {
        if u < v {
            Arc { a: u, b: v }
        } else {
            Arc { a: v, b: u }
        }
    }

    pub fn other(&self, v: PointId) -> PointId {
        if v == self.a {
            self.b
        } else {
            self.a
        }
    }

    pub fn has_endpoint(&self, v: PointId) -> bool {
        self.a == v || self.b == v
    }

    pub fn shares_endpoint(&self, other: &Arc) -> bool {
        self.has_endpoint(other.a) || self.has_endpoint(other.b)
    }
}

impl std::fmt::Display for Arc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// A triangle face, vertices in counterclockwise order, smallest id first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triangle {
    pub v: [PointId; 3],
}

impl Triangle {
    /// Canonicalize: rotate so the smallest vertex comes first, preserving
    /// the cyclic (ccw) order supplied by the caller.
    pub fn new_ccw(a: PointId, b: PointId, c: PointId) -> Self {
        let v = if a < b && a < c {
            [a, b, c]
        } else if b < a && b < c {
            [b, c, a]
        } else {
            [c, a, b]
        };
        Triangle { v }
    }

    pub fn arcs(&self) -> [Arc; 3] {
        [
            Arc::new(self.v[0], self.v[1]),
            Arc::new(self.v[1], self.v[2]),
            Arc::new(self.v[2], self.v[0]),
        ]
    }

    pub fn has_vertex(&self, p: PointId) -> bool {
        self.v.contains(&p)
    }
}

impl std::fmt::Display for Triangle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.v[0], self.v[1], self.v[2])
    }
}

/// A triangulation as a bitset over the configuration's valid arcs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangulation {
    pub arcs: ArcSet,
}

impl Triangulation {
    pub fn from_set(arcs: ArcSet) -> Self {
        Triangulation { arcs }
    }

    pub fn contains(&self, id: ArcId) -> bool {
        self.arcs.contains(id)
    }

    pub fn arc_ids(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.arcs.iter()
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }
}

impl std::fmt::Debug for Triangulation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Triangulation{:?}", self.arcs)
    }
}

/// Dense symmetric crossing table, only materialized for small arc counts.
struct CrossTable {
    dim: usize,
    bits: Vec<u64>,
}

impl CrossTable {
    fn new(dim: usize) -> Self {
        CrossTable { dim, bits: vec![0; (dim * dim).div_ceil(64)] }
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize) {
        let k = i * self.dim + j;
        self.bits[k / 64] |= 1 << (k % 64);
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> bool {
        let k = i * self.dim + j;
        (self.bits[k / 64] >> (k % 64)) & 1 == 1
    }
}

/// Above this many valid arcs the crossing table is computed on demand from
/// the exact predicate instead of being materialized (the table would be
/// quadratic in the arc count).
const CROSS_TABLE_LIMIT: usize = 8192;

pub struct PointConfig {
    points: Vec<Point>,
    boundary_len: usize,
    valid_arcs: Vec<Arc>,
    pair_index: Vec<u32>,
    arcs_at: Vec<Vec<ArcId>>,
    boundary_edges: ArcSet,
    cross_table: Option<CrossTable>,
}

impl PointConfig {
    /// Validate a raw point list and derive the arc tables.
    ///
    /// Boundary points come first, in counterclockwise order; punctures after.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let boundary_len = points.iter().take_while(|p| p.kind != PointKind::Puncture).count();
        if points[boundary_len..].iter().any(|p| p.kind != PointKind::Puncture) {
            return Err(Error::InvalidConfig(
                "boundary points must precede all punctures".into(),
            ));
        }
        if boundary_len < 3 {
            return Err(Error::InvalidConfig("need at least 3 boundary points".into()));
        }
        let n = points.len();
        for i in 0..n {
            for j in i + 1..n {
                if points[i].coord() == points[j].coord() {
                    return Err(Error::InvalidConfig(format!("duplicate point {i}/{j}")));
                }
            }
        }

        // Convex position: every point weakly left of every directed boundary
        // edge; corners strictly convex; flats exactly collinear and between
        // their two neighbors.
        let b = boundary_len;
        let mut corners = 0usize;
        for i in 0..b {
            let prev = points[(i + b - 1) % b].coord();
            let cur = points[i].coord();
            let next = points[(i + 1) % b].coord();
            let o = orient(prev, cur, next);
            match points[i].kind {
                PointKind::Corner => {
                    if o <= 0 {
                        return Err(Error::InvalidConfig(format!(
                            "boundary point {i} is a corner but does not turn left"
                        )));
                    }
                    corners += 1;
                }
                PointKind::Flat => {
                    if o != 0 || !strictly_between(prev, cur, next) {
                        return Err(Error::InvalidConfig(format!(
                            "flat point {i} is not strictly inside the segment of its neighbors"
                        )));
                    }
                }
                PointKind::Puncture => unreachable!(),
            }
        }
        if corners < 3 {
            return Err(Error::InvalidConfig("need at least 3 corner points".into()));
        }
        for i in 0..b {
            let e0 = points[i].coord();
            let e1 = points[(i + 1) % b].coord();
            for (j, p) in points.iter().enumerate() {
                if j == i || j == (i + 1) % b {
                    continue;
                }
                let o = orient(e0, e1, p.coord());
                if o < 0 {
                    return Err(Error::InvalidConfig(format!(
                        "point {j} lies right of boundary edge {i}"
                    )));
                }
                if o == 0 && p.kind == PointKind::Puncture {
                    return Err(Error::InvalidConfig(format!(
                        "puncture {j} lies on the boundary line of edge {i}"
                    )));
                }
            }
        }
        // Punctures may sit on segments between other points; such segments
        // simply fail to be valid arcs below.

        // Valid arcs: open segment contains no other configuration point.
        let mut valid_arcs = Vec::new();
        let mut pair_index = vec![u32::MAX; n * (n - 1) / 2];
        let tri_idx = |a: usize, bb: usize| -> usize {
            // a < bb
            bb * (bb - 1) / 2 + a
        };
        for a in 0..n {
            for bb in a + 1..n {
                let pa = points[a].coord();
                let pb = points[bb].coord();
                let blocked = points.iter().enumerate().any(|(k, p)| {
                    k != a && k != bb && strictly_between(pa, p.coord(), pb)
                });
                if blocked {
                    continue;
                }
                pair_index[tri_idx(a, bb)] = valid_arcs.len() as u32;
                valid_arcs.push(Arc { a, b: bb });
            }
        }

        let mut arcs_at = vec![Vec::new(); n];
        for (id, arc) in valid_arcs.iter().enumerate() {
            arcs_at[arc.a].push(id);
            arcs_at[arc.b].push(id);
        }

        let mut boundary_edges = ArcSet::empty(valid_arcs.len());
        for i in 0..b {
            let j = (i + 1) % b;
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            let id = pair_index[tri_idx(lo, hi)];
            if id == u32::MAX {
                return Err(Error::InvalidConfig(format!(
                    "boundary edge {lo}-{hi} is blocked by another point"
                )));
            }
            boundary_edges.insert(id as usize);
        }

        let cross_table = if valid_arcs.len() <= CROSS_TABLE_LIMIT {
            let mut t = CrossTable::new(valid_arcs.len());
            for i in 0..valid_arcs.len() {
                for j in i + 1..valid_arcs.len() {
                    let (e, f) = (valid_arcs[i], valid_arcs[j]);
                    if e.shares_endpoint(&f) {
                        continue;
                    }
                    if segments_cross(
                        points[e.a].coord(),
                        points[e.b].coord(),
                        points[f.a].coord(),
                        points[f.b].coord(),
                    ) {
                        t.set(i, j);
                        t.set(j, i);
                    }
                }
            }
            Some(t)
        } else {
            None
        };

        Ok(PointConfig {
            points,
            boundary_len,
            valid_arcs,
            pair_index,
            arcs_at,
            boundary_edges,
            cross_table,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn boundary_len(&self) -> usize {
        self.boundary_len
    }

    pub fn puncture_count(&self) -> usize {
        self.points.len() - self.boundary_len
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, p: PointId) -> Point {
        self.points[p]
    }

    #[inline]
    pub fn coord(&self, p: PointId) -> Coord {
        self.points[p].coord()
    }

    pub fn flats(&self) -> impl Iterator<Item = PointId> + '_ {
        (0..self.boundary_len).filter(|&i| self.points[i].kind == PointKind::Flat)
    }

    pub fn punctures(&self) -> impl Iterator<Item = PointId> + '_ {
        self.boundary_len..self.points.len()
    }

    pub fn arc_count(&self) -> usize {
        self.valid_arcs.len()
    }

    pub fn arc(&self, id: ArcId) -> Arc {
        self.valid_arcs[id]
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.valid_arcs
    }

    pub fn arc_id(&self, u: PointId, v: PointId) -> Option<ArcId> {
        if u == v {
            return None;
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        let idx = self.pair_index[b * (b - 1) / 2 + a];
        if idx == u32::MAX {
            None
        } else {
            Some(idx as usize)
        }
    }

    pub fn require_arc(&self, u: PointId, v: PointId) -> Result<ArcId> {
        self.arc_id(u, v).ok_or(Error::InvalidArc(u.min(v), u.max(v)))
    }

    pub fn is_boundary_arc(&self, id: ArcId) -> bool {
        self.boundary_edges.contains(id)
    }

    pub fn boundary_edges(&self) -> &ArcSet {
        &self.boundary_edges
    }

    pub fn arcs_at(&self, p: PointId) -> &[ArcId] {
        &self.arcs_at[p]
    }

    /// Arc count of every triangulation: 3N - 3 - B.
    pub fn triangulation_size(&self) -> usize {
        3 * self.points.len() - 3 - self.boundary_len
    }

    /// Triangle count of every triangulation: 2N - 2 - B.
    pub fn triangle_count(&self) -> usize {
        2 * self.points.len() - 2 - self.boundary_len
    }

    pub fn interior_arc_count_per_triangulation(&self) -> usize {
        self.triangulation_size() - self.boundary_len
    }

    /// Exact crossing predicate on two valid arcs.
    pub fn arcs_cross(&self, e: ArcId, f: ArcId) -> bool {
        if e == f {
            return false;
        }
        let (ea, fa) = (self.valid_arcs[e], self.valid_arcs[f]);
        if ea.shares_endpoint(&fa) {
            return false;
        }
        if let Some(t) = &self.cross_table {
            return t.get(e, f);
        }
        segments_cross(
            self.coord(ea.a),
            self.coord(ea.b),
            self.coord(fa.a),
            self.coord(fa.b),
        )
    }

    /// Brute-force crossing oracle straight from the predicate; bypasses the
    /// table so tests can compare the two routes.
    pub fn arcs_cross_oracle(&self, e: ArcId, f: ArcId) -> bool {
        if e == f {
            return false;
        }
        let (ea, fa) = (self.valid_arcs[e], self.valid_arcs[f]);
        if ea.shares_endpoint(&fa) {
            return false;
        }
        segments_cross(
            self.coord(ea.a),
            self.coord(ea.b),
            self.coord(fa.a),
            self.coord(fa.b),
        )
    }

    /// The open triangle (a, b, c) contains no configuration point.
    /// Only punctures can sit strictly inside a triangle of valid arcs.
    pub fn triangle_empty(&self, a: PointId, b: PointId, c: PointId) -> bool {
        let (pa, pb, pc) = (self.coord(a), self.coord(b), self.coord(c));
        self.punctures().all(|q| {
            q == a || q == b || q == c || !strictly_inside_triangle(pa, pb, pc, self.coord(q))
        })
    }

    /// Triangulation predicate: valid arcs, pairwise non-crossing, boundary
    /// included and the exact Euler count (which forces maximality).
    pub fn is_triangulation(&self, arcs: &ArcSet) -> bool {
        self.check_triangulation(arcs).is_ok()
    }

    pub fn check_triangulation(&self, arcs: &ArcSet) -> Result<()> {
        if !self.boundary_edges.is_subset_of(arcs) {
            return Err(Error::NotATriangulation("missing a boundary edge".into()));
        }
        let size = arcs.len();
        if size != self.triangulation_size() {
            return Err(Error::NotATriangulation(format!(
                "{} arcs, expected {}",
                size,
                self.triangulation_size()
            )));
        }
        let ids: Vec<ArcId> = arcs.iter().collect();
        for (k, &e) in ids.iter().enumerate() {
            for &f in &ids[k + 1..] {
                if self.arcs_cross(e, f) {
                    return Err(Error::NotATriangulation(format!(
                        "arcs {} and {} cross",
                        self.arc(e),
                        self.arc(f)
                    )));
                }
            }
        }
        Ok(())
    }

    /// The apexes of `arc` in `t`: the third vertices of its adjacent faces,
    /// (left, right) of the directed segment a -> b.
    pub fn apexes(&self, t: &Triangulation, arc: ArcId) -> (Option<PointId>, Option<PointId>) {
        let Arc { a, b } = self.valid_arcs[arc];
        let (pa, pb) = (self.coord(a), self.coord(b));
        let mut left = None;
        let mut right = None;
        for &ia in &self.arcs_at[a] {
            if !t.contains(ia) {
                continue;
            }
            let c = self.valid_arcs[ia].other(a);
            if c == b {
                continue;
            }
            let Some(cb) = self.arc_id(c, b) else { continue };
            if !t.contains(cb) {
                continue;
            }
            if !self.triangle_empty(a, b, c) {
                continue;
            }
            match orient(pa, pb, self.coord(c)) {
                1 => left = Some(c),
                -1 => right = Some(c),
                _ => {}
            }
        }
        (left, right)
    }

    /// All faces of a triangulation, derived from arc apexes.
    pub fn triangles_of(&self, t: &Triangulation) -> Vec<Triangle> {
        let mut out = Vec::with_capacity(self.triangle_count());
        let mut seen = std::collections::HashSet::with_capacity(2 * self.triangle_count());
        for arc in t.arc_ids() {
            let Arc { a, b } = self.valid_arcs[arc];
            let (l, r) = self.apexes(t, arc);
            if let Some(c) = l {
                let tri = Triangle::new_ccw(a, b, c);
                if seen.insert(tri) {
                    out.push(tri);
                }
            }
            if let Some(c) = r {
                let tri = Triangle::new_ccw(b, a, c);
                if seen.insert(tri) {
                    out.push(tri);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Flip `arc` inside `t`. `Ok(None)` when the arc is not flippable (the
    /// replacement diagonal would contain a flat vertex or fail to cross);
    /// errors on misuse (arc absent or on the boundary).
    pub fn flip(&self, t: &Triangulation, arc: ArcId) -> Result<Option<(ArcId, Triangulation)>> {
        let Arc { a, b } = self.valid_arcs[arc];
        if !t.contains(arc) {
            return Err(Error::BadFlip(a, b, "arc not in the triangulation".into()));
        }
        if self.is_boundary_arc(arc) {
            return Err(Error::BadFlip(a, b, "boundary edges cannot be flipped".into()));
        }
        let (l, r) = self.apexes(t, arc);
        let (Some(c), Some(d)) = (l, r) else {
            return Err(Error::BadFlip(a, b, "interior arc with a missing face".into()));
        };
        let Some(new_arc) = self.arc_id(c, d) else {
            return Ok(None);
        };
        if !self.arcs_cross(arc, new_arc) {
            return Ok(None);
        }
        let mut arcs = t.arcs.clone();
        arcs.remove(arc);
        arcs.insert(new_arc);
        Ok(Some((new_arc, Triangulation::from_set(arcs))))
    }

    /// Visit every legal flip of `t` in ascending order of the removed arc.
    pub fn for_each_flip<F: FnMut(ArcId, ArcId, Triangulation)>(
        &self,
        t: &Triangulation,
        mut f: F,
    ) {
        for arc in t.arc_ids() {
            if self.is_boundary_arc(arc) {
                continue;
            }
            if let Ok(Some((new_arc, next))) = self.flip(t, arc) {
                f(arc, new_arc, next);
            }
        }
    }

    /// Canonical triangulation from explicit point-index pairs.
    pub fn triangulation_from_pairs(&self, pairs: &[(PointId, PointId)]) -> Result<Triangulation> {
        let mut set = self.boundary_edges.clone();
        for &(u, v) in pairs {
            set.insert(self.require_arc(u, v)?);
        }
        self.check_triangulation(&set)?;
        Ok(Triangulation::from_set(set))
    }

    /// Crossings between one arc and a whole arc set.
    pub fn crossings_with_set(&self, e: ArcId, set: &ArcSet) -> usize {
        set.iter().filter(|&f| self.arcs_cross(e, f)).count()
    }
}

impl std::fmt::Debug for PointConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "PointConfig(N={}, B={}, arcs={})",
            self.len(),
            self.boundary_len,
            self.arc_count()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::shapes::convex_polygon;
    use super::*;

    fn corners(pts: &[(i64, i64)]) -> PointConfig {
        PointConfig::new(
            pts.iter()
                .map(|&(x, y)| Point::new(x, y, PointKind::Corner))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn square_arc_count() {
        let cfg = corners(&[(0, 0), (2, 0), (2, 2), (0, 2)]);
        assert_eq!(cfg.arc_count(), 6); // 4 boundary edges + 2 diagonals
        assert_eq!(cfg.boundary_edges().len(), 4);
    }

    #[test]
    fn flat_vertex_blocks_spanning_arc() {
        // Pentagon corners with a flat vertex in the middle of one edge.
        let cfg = shapes::with_flats(&[(0, 0), (4, 0), (6, 3), (2, 6), (-2, 3)], &[0], &[]).unwrap();
        assert_eq!(cfg.len(), 6);
        assert_eq!(cfg.flats().count(), 1);
        let flat = cfg.flats().next().unwrap();
        assert_eq!(flat, 1);
        // The arc between the flat's corner neighbors is invalid.
        assert!(cfg.arc_id(0, 2).is_none());
        assert!(cfg.arc_id(0, 3).is_some());
    }

    #[test]
    fn center_puncture_blocks_diagonals() {
        let cfg = PointConfig::new(vec![
            Point::new(0, 0, PointKind::Corner),
            Point::new(2, 0, PointKind::Corner),
            Point::new(2, 2, PointKind::Corner),
            Point::new(0, 2, PointKind::Corner),
            Point::new(1, 1, PointKind::Puncture),
        ])
        .unwrap();
        assert!(cfg.arc_id(0, 2).is_none());
        assert!(cfg.arc_id(1, 3).is_none());
        assert!(cfg.arc_id(0, 4).is_some());
    }

    #[test]
    fn invalid_configs_rejected() {
        // Non-convex boundary.
        assert!(PointConfig::new(vec![
            Point::new(0, 0, PointKind::Corner),
            Point::new(4, 0, PointKind::Corner),
            Point::new(1, 1, PointKind::Corner),
            Point::new(0, 4, PointKind::Corner),
        ])
        .is_err());
        // Flat vertex that is not collinear.
        assert!(PointConfig::new(vec![
            Point::new(0, 0, PointKind::Corner),
            Point::new(4, 0, PointKind::Corner),
            Point::new(5, 2, PointKind::Flat),
            Point::new(0, 4, PointKind::Corner),
        ])
        .is_err());
        // Puncture outside the hull.
        assert!(PointConfig::new(vec![
            Point::new(0, 0, PointKind::Corner),
            Point::new(4, 0, PointKind::Corner),
            Point::new(0, 4, PointKind::Corner),
            Point::new(4, 4, PointKind::Puncture),
        ])
        .is_err());
        // Duplicate points.
        assert!(PointConfig::new(vec![
            Point::new(0, 0, PointKind::Corner),
            Point::new(4, 0, PointKind::Corner),
            Point::new(4, 0, PointKind::Corner),
            Point::new(0, 4, PointKind::Corner),
        ])
        .is_err());
    }

    #[test]
    fn pentagon_crossing_trio() {
        let cfg = convex_polygon(5);
        let e02 = cfg.arc_id(0, 2).unwrap();
        let e13 = cfg.arc_id(1, 3).unwrap();
        let e24 = cfg.arc_id(2, 4).unwrap();
        let e34 = cfg.arc_id(3, 4).unwrap();
        assert!(cfg.arcs_cross(e02, e13));
        assert!(!cfg.arcs_cross(e02, e24)); // shared endpoint
        assert!(!cfg.arcs_cross(e02, e34)); // boundary edge crosses nothing
    }

    #[test]
    fn crossing_table_matches_oracle() {
        for cfg in [convex_polygon(7), {
            shapes::with_flats(&[(0, 0), (4, 0), (6, 3), (2, 6), (-2, 3)], &[1], &[(2, 2)]).unwrap()
        }] {
            for e in 0..cfg.arc_count() {
                for f in 0..cfg.arc_count() {
                    assert_eq!(cfg.arcs_cross(e, f), cfg.arcs_cross_oracle(e, f));
                }
            }
        }
    }

    #[test]
    fn hexagon_triangulation_predicate() {
        let cfg = convex_polygon(6);
        let comb = cfg
            .triangulation_from_pairs(&[(0, 2), (0, 3), (0, 4)])
            .unwrap();
        assert_eq!(comb.len(), cfg.triangulation_size());
        let tris = cfg.triangles_of(&comb);
        assert_eq!(tris.len(), 4);

        // Not maximal.
        let mut set = cfg.boundary_edges().clone();
        set.insert(cfg.arc_id(0, 2).unwrap());
        set.insert(cfg.arc_id(0, 3).unwrap());
        assert!(!cfg.is_triangulation(&set));

        // Crossing pair.
        let mut set = cfg.boundary_edges().clone();
        set.insert(cfg.arc_id(0, 2).unwrap());
        set.insert(cfg.arc_id(1, 3).unwrap());
        set.insert(cfg.arc_id(0, 4).unwrap());
        assert!(!cfg.is_triangulation(&set));
    }

    #[test]
    fn square_flip_and_involution() {
        let cfg = corners(&[(0, 0), (2, 0), (2, 2), (0, 2)]);
        let t = cfg.triangulation_from_pairs(&[(0, 2)]).unwrap();
        let d02 = cfg.arc_id(0, 2).unwrap();
        let (d13, t2) = cfg.flip(&t, d02).unwrap().unwrap();
        assert_eq!(cfg.arc(d13), Arc::new(1, 3));
        let (back, t3) = cfg.flip(&t2, d13).unwrap().unwrap();
        assert_eq!(back, d02);
        assert_eq!(t3, t);
        // Misuse errors.
        assert!(cfg.flip(&t, d13).is_err()); // not in t
        let boundary = cfg.arc_id(0, 1).unwrap();
        assert!(cfg.flip(&t, boundary).is_err());
    }

    #[test]
    fn flat_vertex_makes_arc_unflippable() {
        // Hexagon: pentagon corners plus a flat vertex v=1 inside edge (0, 2).
        // Any triangulation whose arc opposite v would flip onto the segment
        // through v reports the flip as impossible.
        let cfg = shapes::with_flats(&[(0, 0), (4, 0), (6, 3), (2, 6), (-2, 3)], &[0], &[]).unwrap();
        let mut found_none = false;
        let t = shapes::any_triangulation(&cfg);
        let mut stack = vec![t];
        let mut seen = std::collections::HashSet::new();
        while let Some(t) = stack.pop() {
            if !seen.insert(t.clone()) {
                continue;
            }
            for arc in t.arc_ids() {
                if cfg.is_boundary_arc(arc) {
                    continue;
                }
                match cfg.flip(&t, arc).unwrap() {
                    Some((_, next)) => stack.push(next),
                    None => {
                        // The blocked replacement is the diagonal through the
                        // flat vertex: its quad apexes are the flat's corner
                        // neighbors.
                        let (l, r) = cfg.apexes(&t, arc);
                        let (l, r) = (l.unwrap(), r.unwrap());
                        assert!(cfg.arc_id(l, r).is_none());
                        found_none = true;
                    }
                }
            }
        }
        assert!(found_none, "some flip must be blocked by the flat vertex");
    }

    #[test]
    fn euler_count_holds_across_flips() {
        let cfg = convex_polygon(8);
        let mut t = shapes::any_triangulation(&cfg);
        for step in 0..50 {
            assert_eq!(t.len(), cfg.triangulation_size());
            assert_eq!(cfg.triangles_of(&t).len(), cfg.triangle_count());
            let interior: Vec<ArcId> = t
                .arc_ids()
                .filter(|&a| !cfg.is_boundary_arc(a))
                .collect();
            let arc = interior[step % interior.len()];
            let (_, next) = cfg.flip(&t, arc).unwrap().unwrap();
            t = next;
        }
    }

    #[test]
    fn convex_polygon_every_interior_arc_flippable() {
        // No flats, no punctures: every triangulation has n-3 interior arcs,
        // all flippable.
        let cfg = convex_polygon(9);
        let t = shapes::any_triangulation(&cfg);
        let interior: Vec<ArcId> = t.arc_ids().filter(|&a| !cfg.is_boundary_arc(a)).collect();
        assert_eq!(interior.len(), 9 - 3);
        for arc in interior {
            assert!(cfg.flip(&t, arc).unwrap().is_some());
        }
    }
}
