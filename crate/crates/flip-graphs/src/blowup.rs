//! The time-indexed 3-complex of a flip path: arc and triangle occurrences
//! with maximal presence intervals, one tetrahedron per flip, and the
//! above/below order between faces whose planar projections overlap.
//!
//! The complex is purely combinatorial: a face is an arc or triangle plus a
//! time interval, a tetrahedron is a flip plus its quad, and "below" is
//! projected overlap plus temporal separation.

use crate::engine::{distance, FlipPath, SearchLimits};
use crate::error::{Error, Result};
use crate::geometry::predicates::{
    segment_meets_quad, segment_meets_triangle, segments_cross, triangles_overlap, Coord,
};
use crate::geometry::{Arc, ArcId, PointConfig, PointId, Triangle};
use std::collections::HashMap;

/// A maximal presence interval of one geometric arc along the path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcOccurrence {
    pub arc: ArcId,
    pub birth: usize,
    pub death: usize,
}

/// A maximal presence interval of one triangle face.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TriangleOccurrence {
    pub triangle: Triangle,
    pub birth: usize,
    pub death: usize,
}

/// The 3-cell of the i-th flip: its quad and the exchanged diagonals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Tetra {
    /// 1-based flip time: the flip turns snapshot time-1 into snapshot time.
    pub time: usize,
    pub quad: [PointId; 4],
    pub removed: ArcId,
    pub inserted: ArcId,
}

/// Handle to a face of the complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Occ {
    Arc(usize),
    Tri(usize),
    Tet(usize),
}

pub struct BlowUpComplex<'a> {
    pub config: &'a PointConfig,
    pub path: FlipPath,
    pub arcs: Vec<ArcOccurrence>,
    pub triangles: Vec<TriangleOccurrence>,
    pub tetras: Vec<Tetra>,
    occ_by_arc: HashMap<ArcId, Vec<usize>>,
    path_len: usize,
}

/// Build the complex of a path. Occurrence intervals are exactly the maximal
/// presence runs; the tetra count equals the path length.
pub fn build<'a>(config: &'a PointConfig, path: &FlipPath) -> Result<BlowUpComplex<'a>> {
    path.validate(config)?;
    let snapshots = path.snapshots();
    let k = path.len();

    let mut arcs: Vec<ArcOccurrence> = Vec::new();
    let mut open_arc: HashMap<ArcId, usize> = HashMap::new();
    for id in snapshots[0].arc_ids() {
        open_arc.insert(id, 0);
    }
    let mut triangles: Vec<TriangleOccurrence> = Vec::new();
    let mut open_tri: HashMap<Triangle, usize> = HashMap::new();
    for tri in config.triangles_of(&snapshots[0]) {
        open_tri.insert(tri, 0);
    }
    let mut tetras = Vec::with_capacity(k);

    for (i, &(removed, inserted)) in path.steps.iter().enumerate() {
        let time = i + 1;
        let before = &snapshots[i];
        let (l, r) = config.apexes(before, removed);
        let (c, d) = (
            l.expect("validated path has full quads"),
            r.expect("validated path has full quads"),
        );
        let Arc { a, b } = config.arc(removed);
        tetras.push(Tetra { time, quad: [a, c, b, d], removed, inserted });

        let birth = open_arc.remove(&removed).expect("removed arc was present");
        arcs.push(ArcOccurrence { arc: removed, birth, death: time - 1 });
        open_arc.insert(inserted, time);

        for tri in [Triangle::new_ccw(a, b, c), Triangle::new_ccw(b, a, d)] {
            let birth = open_tri.remove(&tri).expect("destroyed face was present");
            triangles.push(TriangleOccurrence { triangle: tri, birth, death: time - 1 });
        }
        let Arc { a: na, b: nb } = config.arc(inserted);
        // The two new faces split the quad along the inserted diagonal; their
        // third vertices are the old diagonal's endpoints.
        let (nl, nr) = config.apexes(&snapshots[time], inserted);
        for (apex, ccw) in [(nl, true), (nr, false)] {
            let apex = apex.expect("inserted arc has full quads");
            let tri = if ccw {
                Triangle::new_ccw(na, nb, apex)
            } else {
                Triangle::new_ccw(nb, na, apex)
            };
            open_tri.insert(tri, time);
        }
    }
    for (arc, birth) in open_arc {
        arcs.push(ArcOccurrence { arc, birth, death: k });
    }
    for (tri, birth) in open_tri {
        triangles.push(TriangleOccurrence { triangle: tri, birth, death: k });
    }
    arcs.sort_unstable_by_key(|o| (o.arc, o.birth));
    triangles.sort_unstable_by_key(|o| (o.triangle, o.birth));

    let mut occ_by_arc: HashMap<ArcId, Vec<usize>> = HashMap::new();
    for (i, occ) in arcs.iter().enumerate() {
        occ_by_arc.entry(occ.arc).or_default().push(i);
    }
    Ok(BlowUpComplex { config, path: path.clone(), arcs, triangles, tetras, occ_by_arc, path_len: k })
}

enum Shape {
    Seg(Coord, Coord),
    Tri([Coord; 3]),
    Quad([Coord; 4]),
}

impl BlowUpComplex<'_> {
    pub fn path_len(&self) -> usize {
        self.path_len
    }

    /// Occurrences of one geometric arc, in birth order.
    pub fn occurrences_of(&self, arc: ArcId) -> &[usize] {
        self.occ_by_arc.get(&arc).map_or(&[], |v| v.as_slice())
    }

    /// Whether the arc is present at snapshot time `i`.
    pub fn arc_present_at(&self, arc: ArcId, i: usize) -> bool {
        self.occurrences_of(arc)
            .iter()
            .any(|&o| self.arcs[o].birth <= i && i <= self.arcs[o].death)
    }

    fn shape(&self, f: Occ) -> Shape {
        match f {
            Occ::Arc(i) => {
                let Arc { a, b } = self.config.arc(self.arcs[i].arc);
                Shape::Seg(self.config.coord(a), self.config.coord(b))
            }
            Occ::Tri(i) => {
                let t = self.triangles[i].triangle;
                Shape::Tri([
                    self.config.coord(t.v[0]),
                    self.config.coord(t.v[1]),
                    self.config.coord(t.v[2]),
                ])
            }
            Occ::Tet(i) => {
                let q = self.tetras[i].quad;
                Shape::Quad([
                    self.config.coord(q[0]),
                    self.config.coord(q[1]),
                    self.config.coord(q[2]),
                    self.config.coord(q[3]),
                ])
            }
        }
    }

    /// Tick interval: occurrences live on even ticks [2 birth, 2 death];
    /// the i-th tetra sits strictly between layers i-1 and i at tick 2i-1.
    fn ticks(&self, f: Occ) -> (i64, i64) {
        match f {
            Occ::Arc(i) => (2 * self.arcs[i].birth as i64, 2 * self.arcs[i].death as i64),
            Occ::Tri(i) => (
                2 * self.triangles[i].birth as i64,
                2 * self.triangles[i].death as i64,
            ),
            Occ::Tet(i) => {
                let t = 2 * self.tetras[i].time as i64 - 1;
                (t, t)
            }
        }
    }

    /// Open interiors of the planar projections intersect.
    pub fn projections_overlap(&self, f: Occ, g: Occ) -> bool {
        let (sf, sg) = (self.shape(f), self.shape(g));
        match (&sf, &sg) {
            (Shape::Seg(a, b), Shape::Seg(c, d)) => {
                if (a, b) == (c, d) {
                    return true;
                }
                segments_cross(*a, *b, *c, *d)
            }
            (Shape::Seg(a, b), Shape::Tri(t)) | (Shape::Tri(t), Shape::Seg(a, b)) => {
                segment_meets_triangle(*a, *b, *t)
            }
            (Shape::Seg(a, b), Shape::Quad(q)) | (Shape::Quad(q), Shape::Seg(a, b)) => {
                segment_meets_quad(*a, *b, *q)
            }
            (Shape::Tri(t1), Shape::Tri(t2)) => triangles_overlap(*t1, *t2),
            (Shape::Tri(t), Shape::Quad(q)) | (Shape::Quad(q), Shape::Tri(t)) => {
                quad_halves(q).iter().any(|h| triangles_overlap(*t, *h))
                    || segment_meets_triangle(q[0], q[2], *t)
            }
            (Shape::Quad(q1), Shape::Quad(q2)) => {
                quad_halves(q1).iter().any(|h1| {
                    quad_halves(q2).iter().any(|h2| triangles_overlap(*h1, *h2))
                }) || segment_meets_quad(q1[0], q1[2], *q2)
                    || segment_meets_quad(q2[0], q2[2], *q1)
            }
        }
    }

    /// `f` is below `g`: their projections overlap and `f`'s life ends before
    /// `g`'s begins.
    pub fn below(&self, f: Occ, g: Occ) -> bool {
        if f == g {
            return false;
        }
        let (_, f_hi) = self.ticks(f);
        let (g_lo, _) = self.ticks(g);
        f_hi < g_lo && self.projections_overlap(f, g)
    }

    /// All triples of arc occurrences whose arcs bound a geometric triangle
    /// of the configuration (a topological circle of the complex).
    pub fn circles3(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        let mut arcs_seen: Vec<ArcId> = self.occ_by_arc.keys().copied().collect();
        arcs_seen.sort_unstable();
        // Group by vertex to find triangles among present arcs.
        for (i, &e1) in arcs_seen.iter().enumerate() {
            let a1 = self.config.arc(e1);
            for &e2 in &arcs_seen[i + 1..] {
                let a2 = self.config.arc(e2);
                if !a1.shares_endpoint(&a2) || a1 == a2 {
                    continue;
                }
                for &e3 in &arcs_seen[i + 1..] {
                    if e3 <= e2 {
                        continue;
                    }
                    let a3 = self.config.arc(e3);
                    // The three arcs must pairwise share endpoints and span
                    // exactly three vertices.
                    let mut vs = [a1.a, a1.b, a2.a, a2.b, a3.a, a3.b];
                    vs.sort_unstable();
                    let distinct = {
                        let mut v = vs.to_vec();
                        v.dedup();
                        v
                    };
                    if distinct.len() != 3 {
                        continue;
                    }
                    let (p, q, r) = (distinct[0], distinct[1], distinct[2]);
                    let want = [Arc::new(p, q), Arc::new(p, r), Arc::new(q, r)];
                    let mut have = [a1, a2, a3];
                    have.sort_unstable();
                    if have != want {
                        continue;
                    }
                    if !self.config.triangle_empty(p, q, r) {
                        continue;
                    }
                    for &o1 in &self.occ_by_arc[&e1] {
                        for &o2 in &self.occ_by_arc[&e2] {
                            for &o3 in &self.occ_by_arc[&e3] {
                                out.push([o1, o2, o3]);
                            }
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The triangle occurrence bounded by exactly these three arc
    /// occurrences, if any: its edge occurrences (the presence intervals
    /// containing its own) must be the given triple.
    pub fn bounds_triangle(&self, triple: &[usize; 3]) -> Option<usize> {
        let arcs: Vec<ArcId> = triple.iter().map(|&o| self.arcs[o].arc).collect();
        let mut verts: Vec<PointId> = arcs
            .iter()
            .flat_map(|&id| {
                let a = self.config.arc(id);
                [a.a, a.b]
            })
            .collect();
        verts.sort_unstable();
        verts.dedup();
        'occ: for (i, tocc) in self.triangles.iter().enumerate() {
            let mut tv = tocc.triangle.v;
            tv.sort_unstable();
            if tv != verts[..] {
                continue;
            }
            // Each edge of the face must live on exactly the given occurrence.
            for &o in triple {
                let occ = self.arcs[o];
                if !(occ.birth <= tocc.birth && tocc.death <= occ.death) {
                    continue 'occ;
                }
            }
            return Some(i);
        }
        None
    }

    /// An arc occurrence above one arc of the triple and below another.
    pub fn penetration_witness(&self, triple: &[usize; 3]) -> Option<usize> {
        for i in 0..self.arcs.len() {
            if triple.contains(&i) {
                continue;
            }
            let above_some = triple.iter().any(|&o| self.below(Occ::Arc(o), Occ::Arc(i)));
            let below_some = triple.iter().any(|&o| self.below(Occ::Arc(i), Occ::Arc(o)));
            if above_some && below_some {
                return Some(i);
            }
        }
        None
    }

    /// Flag property: every 3-circle of arc occurrences bounds a triangle of
    /// the complex. Returns the first failing triple otherwise.
    pub fn flag_check(&self) -> Option<[usize; 3]> {
        self.circles3()
            .into_iter()
            .find(|triple| self.bounds_triangle(triple).is_none())
    }

    /// Human-readable dump of occurrences and tetrahedra.
    pub fn to_text_report(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("blow-up complex, path length {}\n", self.path_len));
        s.push_str("arc occurrences:\n");
        for occ in &self.arcs {
            s.push_str(&format!(
                "  {} [{}, {}]\n",
                self.config.arc(occ.arc),
                occ.birth,
                occ.death
            ));
        }
        s.push_str("triangle occurrences:\n");
        for occ in &self.triangles {
            s.push_str(&format!("  {} [{}, {}]\n", occ.triangle, occ.birth, occ.death));
        }
        s.push_str("tetrahedra:\n");
        for t in &self.tetras {
            s.push_str(&format!(
                "  t={} quad ({},{},{},{}) {} -> {}\n",
                t.time,
                t.quad[0],
                t.quad[1],
                t.quad[2],
                t.quad[3],
                self.config.arc(t.removed),
                self.config.arc(t.inserted)
            ));
        }
        s
    }
}

fn quad_halves(q: &[Coord; 4]) -> [[Coord; 3]; 2] {
    [[q[0], q[1], q[2]], [q[0], q[2], q[3]]]
}

/// Outcome of a structural check over a path.
#[derive(Debug)]
pub enum CheckOutcome {
    Pass,
    /// A triangle whose three edges appear along the path while no snapshot
    /// contains all three.
    MissingTriangle(Triangle),
}

/// Every triangle of the configuration whose three sides each appear in some
/// (possibly distinct) snapshot of a geodesic must be fully present in some
/// snapshot. Errors when the path is not a geodesic.
pub fn theorem1_check(
    config: &PointConfig,
    path: &FlipPath,
    limits: SearchLimits,
) -> Result<CheckOutcome> {
    let dist = distance(config, &path.start, &path.end(), None, limits)?;
    if dist != path.len() {
        return Err(Error::NotGeodesic { len: path.len(), dist });
    }
    let complex = build(config, path)?;
    let k = path.len();
    // presence[id] = sorted intervals of the arc.
    let present_somewhere = |arc: ArcId| !complex.occurrences_of(arc).is_empty();
    let arcs_seen: Vec<ArcId> = complex.occ_by_arc.keys().copied().collect();
    let mut verts: Vec<PointId> = Vec::new();
    for &id in &arcs_seen {
        let a = config.arc(id);
        verts.push(a.a);
        verts.push(a.b);
    }
    verts.sort_unstable();
    verts.dedup();
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            for l in j + 1..verts.len() {
                let (p, q, r) = (verts[i], verts[j], verts[l]);
                let (Some(e1), Some(e2), Some(e3)) =
                    (config.arc_id(p, q), config.arc_id(q, r), config.arc_id(p, r))
                else {
                    continue;
                };
                if !config.triangle_empty(p, q, r) {
                    continue;
                }
                if !(present_somewhere(e1) && present_somewhere(e2) && present_somewhere(e3)) {
                    continue;
                }
                let joint = (0..=k).any(|time| {
                    complex.arc_present_at(e1, time)
                        && complex.arc_present_at(e2, time)
                        && complex.arc_present_at(e3, time)
                });
                if !joint {
                    return Ok(CheckOutcome::MissingTriangle(Triangle::new_ccw(p, q, r)));
                }
            }
        }
    }
    Ok(CheckOutcome::Pass)
}
