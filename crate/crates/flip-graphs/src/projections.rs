//! Projections onto the subgraph of triangulations containing a given arc,
//! and the region variant that additionally pins a fixed triangulation of the
//! polygon piece cut off by the arc. Applying a projection snapshot-wise and
//! dropping consecutive duplicates sends paths to paths without lengthening
//! them.

use crate::engine::FlipPath;
use crate::error::{Error, Result};
use crate::geometry::predicates::orient;
use crate::geometry::{Arc, ArcId, ArcSet, PointConfig, PointId, Triangle, Triangulation};

/// The triangles of `t` whose interior meets the open segment of `eps`,
/// i.e. the channel crossed by the arc. Assumes `eps` is not in `t`.
fn crossed_region(
    config: &PointConfig,
    t: &Triangulation,
    eps: ArcId,
) -> (Vec<ArcId>, Vec<Triangle>) {
    let crossing: Vec<ArcId> = t
        .arc_ids()
        .filter(|&f| config.arcs_cross(eps, f))
        .collect();
    let mut faces = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for &f in &crossing {
        let Arc { a, b } = config.arc(f);
        let (l, r) = config.apexes(t, f);
        for (c, ccw) in [(l, true), (r, false)] {
            if let Some(c) = c {
                let tri = if ccw {
                    Triangle::new_ccw(a, b, c)
                } else {
                    Triangle::new_ccw(b, a, c)
                };
                if seen.insert(tri) {
                    faces.push(tri);
                }
            }
        }
    }
    (crossing, faces)
}

fn region_vertices(faces: &[Triangle]) -> Vec<PointId> {
    let mut vs: Vec<PointId> = faces.iter().flat_map(|t| t.v).collect();
    vs.sort_unstable();
    vs.dedup();
    vs
}

fn replace_region(
    config: &PointConfig,
    t: &Triangulation,
    crossing: &[ArcId],
    added: &[ArcId],
) -> Result<Triangulation> {
    let mut arcs = t.arcs.clone();
    for &f in crossing {
        arcs.remove(f);
    }
    for &id in added {
        arcs.insert(id);
    }
    config
        .check_triangulation(&arcs)
        .map_err(|e| Error::InvalidProjection(e.to_string()))?;
    Ok(Triangulation::from_set(arcs))
}

/// Project `t` onto the triangulations containing `eps` by re-fanning the
/// crossed channel from the endpoint `x` of `eps`. Identity when `eps` is
/// already present.
pub fn project_arc(
    config: &PointConfig,
    t: &Triangulation,
    eps: ArcId,
    x: PointId,
) -> Result<Triangulation> {
    let arc = config.arc(eps);
    if !arc.has_endpoint(x) {
        return Err(Error::BadParameters(format!("{x} is not an endpoint of {arc}")));
    }
    if t.contains(eps) {
        return Ok(t.clone());
    }
    let (crossing, faces) = crossed_region(config, t, eps);
    debug_assert!(!crossing.is_empty());
    let mut added = Vec::new();
    for v in region_vertices(&faces) {
        if v == x {
            continue;
        }
        match config.arc_id(x, v) {
            Some(id) => added.push(id),
            None => {
                return Err(flat_obstruction(config, x, v));
            }
        }
    }
    replace_region(config, t, &crossing, &added)
}

fn flat_obstruction(config: &PointConfig, apex: PointId, v: PointId) -> Error {
    let blocker = config
        .flats()
        .find(|&w| {
            w != apex
                && w != v
                && crate::geometry::predicates::strictly_between(
                    config.coord(apex),
                    config.coord(w),
                    config.coord(v),
                )
        })
        .unwrap_or(v);
    Error::FlatObstruction { apex, flat: blocker }
}

/// Two-sided variant: the channel is re-fanned toward both endpoints of
/// `eps`, each side of the arc fanned from the opposite endpoint when that
/// choice avoids flat vertices. Errors in the unresolvable two-flat regime.
pub fn project_arc_two_sided(
    config: &PointConfig,
    t: &Triangulation,
    eps: ArcId,
) -> Result<Triangulation> {
    if t.contains(eps) {
        return Ok(t.clone());
    }
    let Arc { a, b } = config.arc(eps);
    let (pa, pb) = (config.coord(a), config.coord(b));
    let (crossing, faces) = crossed_region(config, t, eps);
    let verts = region_vertices(&faces);
    let left: Vec<PointId> = verts
        .iter()
        .copied()
        .filter(|&v| orient(pa, pb, config.coord(v)) > 0)
        .collect();
    let right: Vec<PointId> = verts
        .iter()
        .copied()
        .filter(|&v| orient(pa, pb, config.coord(v)) < 0)
        .collect();

    let attempt = |left_apex: PointId, right_apex: PointId| -> Result<Triangulation> {
        let mut added = vec![eps];
        for &v in &left {
            match config.arc_id(left_apex, v) {
                Some(id) => added.push(id),
                None => return Err(flat_obstruction(config, left_apex, v)),
            }
        }
        for &v in &right {
            match config.arc_id(right_apex, v) {
                Some(id) => added.push(id),
                None => return Err(flat_obstruction(config, right_apex, v)),
            }
        }
        replace_region(config, t, &crossing, &added)
    };
    attempt(a, b).or_else(|_| attempt(b, a))
}

/// The closed half of the polygon cut off by an arc, together with a fixed
/// triangulation of it to install during projection.
pub struct RegionSpec {
    pub eps: ArcId,
    /// The kept side: points p with `side * orient(eps.a, eps.b, p) >= 0`.
    pub side: i8,
    /// Arcs triangulating the region (its bounding boundary edges and `eps`
    /// may be included or omitted; they are implied).
    pub fixed_inner: ArcSet,
}

impl RegionSpec {
    /// Side sign of a point relative to the spec's cut arc.
    fn side_of(&self, config: &PointConfig, p: PointId) -> i32 {
        let Arc { a, b } = config.arc(self.eps);
        self.side as i32 * orient(config.coord(a), config.coord(b), config.coord(p))
    }

    /// All configuration points in the closed region.
    pub fn region_points(&self, config: &PointConfig) -> Vec<PointId> {
        (0..config.len())
            .filter(|&p| self.side_of(config, p) >= 0)
            .collect()
    }

    /// Build a spec whose fixed triangulation is `snapshot` restricted to the
    /// region: the region content of one time slice of a path.
    pub fn from_snapshot(
        config: &PointConfig,
        snapshot: &Triangulation,
        eps: ArcId,
        side: i8,
    ) -> Result<RegionSpec> {
        if !snapshot.contains(eps) {
            return Err(Error::BadParameters(
                "snapshot must contain the cut arc of the region".into(),
            ));
        }
        let mut spec = RegionSpec { eps, side, fixed_inner: ArcSet::empty(config.arc_count()) };
        let inside: Vec<bool> = (0..config.len())
            .map(|p| spec.side_of(config, p) >= 0)
            .collect();
        for id in snapshot.arc_ids() {
            let Arc { a, b } = config.arc(id);
            if inside[a] && inside[b] {
                spec.fixed_inner.insert(id);
            }
        }
        spec.validate(config)?;
        Ok(spec)
    }

    /// Check that `fixed_inner` triangulates the region exactly.
    pub fn validate(&self, config: &PointConfig) -> Result<()> {
        let pts = self.region_points(config);
        let inside = |p: PointId| self.side_of(config, p) >= 0;
        let mut set = self.fixed_inner.clone();
        set.insert(self.eps);
        for id in config.boundary_edges().iter() {
            let Arc { a, b } = config.arc(id);
            if inside(a) && inside(b) {
                set.insert(id);
            }
        }
        // Count boundary cycle length of the region: boundary points inside
        // plus the cut arc closing it.
        let boundary_inside = (0..config.boundary_len()).filter(|&p| inside(p)).count();
        let v = pts.len();
        if v < 3 {
            // Degenerate region (the cut arc is on the hull line); only the
            // empty inner set is acceptable.
            return if self.fixed_inner.is_empty()
                || (self.fixed_inner.len() == 1 && self.fixed_inner.contains(self.eps))
            {
                Ok(())
            } else {
                Err(Error::NotATriangulation("degenerate region with inner arcs".into()))
            };
        }
        let b = boundary_inside; // region boundary cycle = boundary points + eps edge
        let expected = 3 * v - 3 - b;
        if set.len() != expected {
            return Err(Error::NotATriangulation(format!(
                "region arc count {} != expected {}",
                set.len(),
                expected
            )));
        }
        let ids: Vec<ArcId> = set.iter().collect();
        for (i, &e) in ids.iter().enumerate() {
            let Arc { a, b } = config.arc(e);
            if !inside(a) || !inside(b) {
                return Err(Error::NotATriangulation("region arc leaves the region".into()));
            }
            for &f in &ids[i + 1..] {
                if config.arcs_cross(e, f) {
                    return Err(Error::NotATriangulation("region arcs cross".into()));
                }
            }
        }
        Ok(())
    }
}

/// Project `t` so that the result contains the region's fixed triangulation:
/// the part of `t` overlapping the region is replaced by `fixed_inner`, and
/// whatever the crossed triangles of `t` covered beyond the region is
/// re-fanned from `x` (an endpoint of the cut arc).
pub fn project_region(
    config: &PointConfig,
    t: &Triangulation,
    region: &RegionSpec,
    x: PointId,
) -> Result<Triangulation> {
    let arc = config.arc(region.eps);
    if !arc.has_endpoint(x) {
        return Err(Error::BadParameters(format!("{x} is not an endpoint of {arc}")));
    }
    region.validate(config)?;

    // Faces of t whose open interior meets the closed region: those with a
    // vertex strictly on the region side.
    let faces: Vec<Triangle> = config
        .triangles_of(t)
        .into_iter()
        .filter(|tri| tri.v.iter().any(|&p| region.side_of(config, p) > 0))
        .collect();
    if faces.is_empty() {
        // The region degenerated to the cut segment; fall back to the plain
        // arc projection which makes eps present.
        let mut result = project_arc(config, t, region.eps, x)?;
        let mut arcs = result.arcs.clone();
        arcs.union_with(&region.fixed_inner);
        config
            .check_triangulation(&arcs)
            .map_err(|e| Error::InvalidProjection(e.to_string()))?;
        result = Triangulation::from_set(arcs);
        return Ok(result);
    }
    // Interior arcs of the covered union: arcs adjacent to two such faces.
    let mut count: std::collections::HashMap<ArcId, u32> = std::collections::HashMap::new();
    for tri in &faces {
        for a in tri.arcs() {
            let id = config.arc_id(a.a, a.b).expect("face edge is a valid arc");
            *count.entry(id).or_insert(0) += 1;
        }
    }
    let removed: Vec<ArcId> = count
        .iter()
        .filter(|&(_, &c)| c == 2)
        .map(|(&id, _)| id)
        .collect();

    // Vertices of the covered union strictly beyond the region, fanned from x.
    let mut added: Vec<ArcId> = region.fixed_inner.iter().collect();
    added.push(region.eps);
    let verts = region_vertices(&faces);
    for v in verts {
        if v == x || region.side_of(config, v) >= 0 {
            continue;
        }
        match config.arc_id(x, v) {
            Some(id) => added.push(id),
            None => return Err(flat_obstruction(config, x, v)),
        }
    }
    replace_region(config, t, &removed, &added)
}

/// Apply a projector to every snapshot of a path and drop consecutive
/// duplicates. The result is a valid path between the projected endpoints,
/// never longer than the input.
pub fn project_path(
    config: &PointConfig,
    path: &FlipPath,
    projector: impl Fn(&Triangulation) -> Result<Triangulation>,
) -> Result<FlipPath> {
    let mut projected = Vec::with_capacity(path.len() + 1);
    for snap in path.snapshots() {
        projected.push(projector(&snap)?);
    }
    let out = FlipPath::from_snapshots(&projected)?;
    out.validate(config)
        .map_err(|e| Error::InvalidProjection(format!("projected path invalid: {e}")))?;
    Ok(out)
}

/// Equality predicate of the arc projection: flips exchanging two arcs that
/// both cross `eps`, or one crossing `eps` and one incident to `x`, project
/// to the same triangulation.
pub fn arc_projection_merges(
    config: &PointConfig,
    eps: ArcId,
    x: PointId,
    removed: ArcId,
    inserted: ArcId,
) -> bool {
    let crosses = |id: ArcId| config.arcs_cross(id, eps);
    let incident = |id: ArcId| config.arc(id).has_endpoint(x);
    (crosses(removed) && crosses(inserted))
        || (crosses(removed) && incident(inserted))
        || (incident(removed) && crosses(inserted))
}

/// Equality predicate of the region projection: both exchanged arcs meet the
/// closed region minus the far endpoint of its cut arc.
pub fn region_projection_merges(
    config: &PointConfig,
    region: &RegionSpec,
    x: PointId,
    removed: ArcId,
    inserted: ArcId,
) -> bool {
    let y = config.arc(region.eps).other(x);
    let touches = |id: ArcId| {
        let Arc { a, b } = config.arc(id);
        [a, b].into_iter().any(|p| {
            let s = region.side_of(config, p);
            s > 0 || (s == 0 && p != y)
        })
    };
    touches(removed) && touches(inserted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{comb_upper_bound_path, reachable_set, SearchLimits};
    use crate::geometry::shapes::{any_triangulation, convex_polygon};

    fn comb_at(cfg: &PointConfig, x: usize) -> Triangulation {
        let pairs: Vec<(usize, usize)> = (0..cfg.len())
            .filter(|&v| v != x && cfg.arc_id(x, v).is_some())
            .map(|v| (x, v))
            .collect();
        cfg.triangulation_from_pairs(&pairs).unwrap()
    }

    #[test]
    fn identity_and_idempotence() {
        let cfg = convex_polygon(6);
        let t = comb_at(&cfg, 0);
        let eps = cfg.arc_id(0, 3).unwrap();
        // eps already present: identity.
        assert_eq!(project_arc(&cfg, &t, eps, 0).unwrap(), t);
        let eps = cfg.arc_id(1, 4).unwrap();
        let p = project_arc(&cfg, &t, eps, 1).unwrap();
        assert!(p.contains(eps));
        assert_eq!(project_arc(&cfg, &p, eps, 1).unwrap(), p);
        // Result differs from t only inside the crossed region: arcs of t not
        // crossing eps survive.
        for id in t.arc_ids() {
            if !cfg.arcs_cross(id, eps) {
                assert!(p.contains(id));
            }
        }
    }

    #[test]
    fn two_sided_projection_on_hexagon() {
        let cfg = convex_polygon(6);
        let t = comb_at(&cfg, 0);
        let eps = cfg.arc_id(2, 5).unwrap();
        let p = project_arc_two_sided(&cfg, &t, eps).unwrap();
        assert!(p.contains(eps));
        assert!(cfg.is_triangulation(&p.arcs));
        assert_eq!(project_arc_two_sided(&cfg, &p, eps).unwrap(), p);
    }

    #[test]
    fn arc_projection_flip_law_exhaustive() {
        // Flip-related pairs project to equal or flip-related images, with
        // equality exactly on the stated arc pattern.
        for n in 5..=6 {
            let cfg = convex_polygon(n);
            let start = any_triangulation(&cfg);
            let reach = reachable_set(&cfg, &start, None, SearchLimits::default()).unwrap();
            for t in &reach.states {
                let mut flips = Vec::new();
                cfg.for_each_flip(t, |rm, ins, next| flips.push((rm, ins, next)));
                for (rm, ins, u) in flips {
                    for eps in 0..cfg.arc_count() {
                        if cfg.is_boundary_arc(eps) {
                            continue;
                        }
                        let arc = cfg.arc(eps);
                        for x in [arc.a, arc.b] {
                            let pt = project_arc(&cfg, t, eps, x).unwrap();
                            let pu = project_arc(&cfg, &u, eps, x).unwrap();
                            let diff = pt.arcs.diff_count(&pu.arcs);
                            assert!(diff <= 1, "projections differ by at most one flip");
                            let merged = arc_projection_merges(&cfg, eps, x, rm, ins);
                            assert_eq!(
                                diff == 0,
                                merged,
                                "equality law: n={n} eps={} x={x} flip {}->{}",
                                cfg.arc(eps),
                                cfg.arc(rm),
                                cfg.arc(ins),
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn region_projection_small() {
        let cfg = convex_polygon(6);
        let eps = cfg.arc_id(1, 4).unwrap();
        // Fixed region content: the side of (1,4) containing 2,3, fanned
        // from 1 inside a snapshot that has eps.
        let snapshot = comb_at(&cfg, 1);
        let side = {
            let o = crate::geometry::predicates::orient(
                cfg.coord(1),
                cfg.coord(4),
                cfg.coord(2),
            );
            o.signum() as i8
        };
        let spec = RegionSpec::from_snapshot(&cfg, &snapshot, eps, side).unwrap();
        // Project a triangulation without eps.
        let t = comb_at(&cfg, 0);
        let p = project_region(&cfg, &t, &spec, 1).unwrap();
        assert!(p.contains(eps));
        assert!(spec.fixed_inner.is_subset_of(&p.arcs));
        // Fixed point.
        assert_eq!(project_region(&cfg, &p, &spec, 1).unwrap(), p);
    }

    #[test]
    fn region_projection_flip_law_exhaustive() {
        for n in 5..=6 {
            let cfg = convex_polygon(n);
            let start = any_triangulation(&cfg);
            let reach = reachable_set(&cfg, &start, None, SearchLimits::default()).unwrap();
            for eps in 0..cfg.arc_count() {
                if cfg.is_boundary_arc(eps) {
                    continue;
                }
                let arc = cfg.arc(eps);
                for side in [1i8, -1] {
                    // A snapshot containing eps supplies the region content.
                    let snapshot = comb_at(&cfg, arc.a);
                    let spec = RegionSpec::from_snapshot(&cfg, &snapshot, eps, side).unwrap();
                    for x in [arc.a, arc.b] {
                        for t in &reach.states {
                            let pt = project_region(&cfg, t, &spec, x).unwrap();
                            let mut flips = Vec::new();
                            cfg.for_each_flip(t, |rm, ins, next| flips.push((rm, ins, next)));
                            for (rm, ins, u) in flips {
                                let pu = project_region(&cfg, &u, &spec, x).unwrap();
                                let diff = pt.arcs.diff_count(&pu.arcs);
                                assert!(diff <= 1);
                                assert_eq!(
                                    diff == 0,
                                    region_projection_merges(&cfg, &spec, x, rm, ins),
                                    "n={n} eps={} side={side} x={x}",
                                    cfg.arc(eps),
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn path_projection_contracts() {
        let cfg = convex_polygon(6);
        let a = comb_at(&cfg, 0);
        let b = comb_at(&cfg, 3);
        let eps = cfg.arc_id(1, 4).unwrap();
        let path = comb_upper_bound_path(&cfg, &a, &b, 2).unwrap();
        let proj = project_path(&cfg, &path, |t| project_arc(&cfg, t, eps, 1)).unwrap();
        assert!(proj.len() <= path.len());
        assert_eq!(proj.start, project_arc(&cfg, &a, eps, 1).unwrap());
        assert_eq!(proj.end(), project_arc(&cfg, &b, eps, 1).unwrap());
        for snap in proj.snapshots() {
            assert!(snap.contains(eps));
        }
        // A path already inside the subfamily is fixed.
        let fixed = project_path(&cfg, &proj, |t| project_arc(&cfg, t, eps, 1)).unwrap();
        assert_eq!(fixed.steps, proj.steps);
    }

    #[test]
    fn geodesics_between_members_stay_inside() {
        // Strong convexity witness: projecting a geodesic between two
        // eps-containing triangulations preserves its length.
        let cfg = convex_polygon(7);
        let eps = cfg.arc_id(0, 3).unwrap();
        let a = comb_at(&cfg, 0);
        let b = comb_at(&cfg, 3);
        assert!(a.contains(eps) && b.contains(eps));
        let dag = crate::engine::geodesic_dag(&cfg, &a, &b, None, SearchLimits::default()).unwrap();
        for path in dag.enumerate(500) {
            let proj = project_path(&cfg, &path, |t| project_arc(&cfg, t, eps, 0)).unwrap();
            assert_eq!(proj.len(), path.len());
        }
    }

    #[test]
    fn two_sided_fails_with_two_flats_on_one_side() {
        // Both endpoints of eps adjacent to a flat vertex, both flats on the
        // same side: the projection has no valid apex assignment for a deep
        // triangulation.
        let inst = crate::constructions::build_family6(1, 1).unwrap();
        let cfg = &inst.config;
        let l = &inst.labels;
        let comb_o = comb_at(cfg, l.o);
        let err = project_arc_two_sided(cfg, &comb_o, inst.eta);
        assert!(err.is_err(), "expected the two-flat obstruction");
    }
}
