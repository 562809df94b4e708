//! Polygon generators and the basic constructions: comb and zigzag
//! triangulations of convex sub-regions, and boundary edge contraction.

use super::predicates::orient;
use super::{Arc, ArcId, ArcSet, Error, Point, PointConfig, PointId, PointKind, Result, Triangulation};

/// Integer points close to a circle, strictly convex by construction (the
/// radius is grown until validation passes).
pub fn convex_polygon(n: usize) -> PointConfig {
    assert!(n >= 3, "polygon needs at least 3 vertices");
    let mut radius = (n as f64) * (n as f64).max(16.0);
    loop {
        let pts: Vec<Point> = (0..n)
            .map(|i| {
                let th = 2.0 * std::f64::consts::PI * (i as f64 + 0.25) / n as f64;
                Point::new(
                    (radius * th.cos()).round() as i64,
                    (radius * th.sin()).round() as i64,
                    PointKind::Corner,
                )
            })
            .collect();
        let distinct = {
            let mut c: Vec<_> = pts.iter().map(|p| (p.x, p.y)).collect();
            c.sort_unstable();
            c.dedup();
            c.len() == n
        };
        if distinct {
            let strictly_convex = (0..n).all(|i| {
                orient(
                    pts[(i + n - 1) % n].coord(),
                    pts[i].coord(),
                    pts[(i + 1) % n].coord(),
                ) > 0
            });
            if strictly_convex {
                if let Ok(cfg) = PointConfig::new(pts) {
                    return cfg;
                }
            }
        }
        radius *= 2.0;
    }
}

/// Build a configuration from corner coordinates in ccw order, inserting flat
/// vertices at the midpoints of the edges listed in `flat_after` (by corner
/// index: a flat goes between corner i and corner i+1). Coordinates are
/// doubled so midpoints stay integral. Punctures are appended unchanged
/// (also doubled).
pub fn with_flats(
    corners: &[(i64, i64)],
    flat_after: &[usize],
    punctures: &[(i64, i64)],
) -> Result<PointConfig> {
    let n = corners.len();
    let mut pts = Vec::new();
    for (i, &(x, y)) in corners.iter().enumerate() {
        pts.push(Point::new(2 * x, 2 * y, PointKind::Corner));
        if flat_after.contains(&i) {
            let (nx, ny) = corners[(i + 1) % n];
            pts.push(Point::new(x + nx, y + ny, PointKind::Flat));
        }
    }
    for &(x, y) in punctures {
        pts.push(Point::new(2 * x, 2 * y, PointKind::Puncture));
    }
    PointConfig::new(pts)
}

fn check_region(config: &PointConfig, region: &[PointId]) -> Result<()> {
    if region.len() < 3 {
        return Err(Error::BadParameters("region needs at least 3 vertices".into()));
    }
    let k = region.len();
    for i in 0..k {
        let o = orient(
            config.coord(region[(i + k - 1) % k]),
            config.coord(region[i]),
            config.coord(region[(i + 1) % k]),
        );
        if o < 0 {
            return Err(Error::BadParameters(format!(
                "region is not convex ccw at vertex {}",
                region[i]
            )));
        }
    }
    Ok(())
}

/// The fan of arcs from `apex` to every other vertex of a convex sub-region
/// (region boundary arcs at the apex included). Errors when a fan arc would
/// contain a flat vertex.
pub fn comb(config: &PointConfig, region: &[PointId], apex: PointId) -> Result<Vec<ArcId>> {
    check_region(config, region)?;
    if !region.contains(&apex) {
        return Err(Error::BadParameters(format!("apex {apex} is not a region vertex")));
    }
    let mut out = Vec::with_capacity(region.len() - 1);
    for &v in region {
        if v == apex {
            continue;
        }
        match config.arc_id(apex, v) {
            Some(id) => out.push(id),
            None => {
                // Diagnose what blocks the segment for the error payload.
                let blocker = config
                    .flats()
                    .chain(config.punctures())
                    .find(|&w| {
                        w != apex
                            && w != v
                            && super::predicates::strictly_between(
                                config.coord(apex),
                                config.coord(w),
                                config.coord(v),
                            )
                    })
                    .unwrap_or(v);
                return Err(Error::FlatObstruction { apex, flat: blocker });
            }
        }
    }
    Ok(out)
}

/// The unique zigzag triangulation of a convex sub-region whose diagonal path
/// starts at `start` and never visits `avoid`.
///
/// The path is the alternating "fold" of the region cycle: after the start it
/// takes vertices from the two ends of the remaining chain in turn. Regions
/// with fewer than 4 vertices have no diagonals.
pub fn zigzag(
    config: &PointConfig,
    region: &[PointId],
    start: PointId,
    avoid: PointId,
) -> Result<Vec<ArcId>> {
    check_region(config, region)?;
    let k = region.len();
    let s = region
        .iter()
        .position(|&v| v == start)
        .ok_or_else(|| Error::BadParameters(format!("start {start} not in region")))?;
    if !region.contains(&avoid) {
        return Err(Error::BadParameters(format!("avoid {avoid} not in region")));
    }
    if k < 4 {
        return Ok(Vec::new());
    }
    let cyc: Vec<PointId> = (0..k).map(|i| region[(s + i) % k]).collect();

    let fold = |skip_first_ccw: bool| -> Vec<PointId> {
        // Path vertices: c0, then alternate ends of the remaining chain,
        // starting on the side away from the skipped neighbor.
        let mut path = Vec::with_capacity(k - 2);
        path.push(cyc[0]);
        let (mut lo, mut hi, mut lo_turn);
        if skip_first_ccw {
            path.push(cyc[2]);
            lo = 3;
            hi = k - 1;
            lo_turn = false;
        } else {
            path.push(cyc[k - 2]);
            lo = 1;
            hi = k - 3;
            lo_turn = true;
        }
        while path.len() < k - 2 {
            if lo_turn {
                path.push(cyc[lo]);
                lo += 1;
            } else {
                path.push(cyc[hi]);
                hi -= 1;
            }
            lo_turn = !lo_turn;
        }
        path
    };

    let variant_a = fold(true); // misses cyc[1]
    let variant_b = fold(false); // misses cyc[k-1]
    let path = if avoid == cyc[1] {
        variant_a
    } else if avoid == cyc[k - 1] {
        variant_b
    } else if !variant_a.contains(&avoid) {
        variant_a
    } else if !variant_b.contains(&avoid) {
        variant_b
    } else {
        return Err(Error::BadParameters(format!(
            "no zigzag from {start} avoids vertex {avoid}"
        )));
    };

    let mut out = Vec::with_capacity(k - 3);
    for w in path.windows(2) {
        match config.arc_id(w[0], w[1]) {
            Some(id) => out.push(id),
            None => {
                return Err(Error::FlatObstruction { apex: w[0], flat: w[1] });
            }
        }
    }
    debug_assert_eq!(out.len(), k - 3);
    Ok(out)
}

/// Greedy maximal non-crossing arc set; a triangulation of any configuration.
pub fn any_triangulation(config: &PointConfig) -> Triangulation {
    let mut chosen: Vec<ArcId> = Vec::with_capacity(config.triangulation_size());
    let mut set = ArcSet::empty(config.arc_count());
    for id in 0..config.arc_count() {
        if chosen.iter().all(|&c| !config.arcs_cross(id, c)) {
            chosen.push(id);
            set.insert(id);
        }
    }
    debug_assert_eq!(set.len(), config.triangulation_size());
    Triangulation::from_set(set)
}

/// Result of contracting a boundary edge: the shrunken configuration, the
/// transported triangulation and the old-to-new point index map.
#[derive(Debug)]
pub struct Contraction {
    pub config: PointConfig,
    pub triangulation: Triangulation,
    /// `point_map[old] = Some(new)`; the removed endpoint maps to `None`.
    pub point_map: Vec<Option<PointId>>,
}

/// Contract the boundary edge `eps` toward its endpoint `x`: the other
/// endpoint disappears and its arcs are pulled to `x`. Errors when a pulled
/// arc would contain a flat vertex of the shrunken polygon.
pub fn contract_edge(
    config: &PointConfig,
    t: &Triangulation,
    eps: ArcId,
    x: PointId,
) -> Result<Contraction> {
    let arc = config.arc(eps);
    if !config.is_boundary_arc(eps) {
        return Err(Error::BadFlip(arc.a, arc.b, "only boundary edges can be contracted".into()));
    }
    if !arc.has_endpoint(x) {
        return Err(Error::BadParameters(format!("{x} is not an endpoint of {arc}")));
    }
    if !t.contains(eps) {
        return Err(Error::InvalidPath("triangulation is missing the contracted edge".into()));
    }
    let y = arc.other(x);
    if y >= config.boundary_len() {
        return Err(Error::BadParameters("contracted endpoint must be on the boundary".into()));
    }

    // Rebuild the point list without y; boundary kinds are recomputed from
    // the new neighbor geometry (a flat next to y may become a corner).
    let mut point_map = vec![None; config.len()];
    let mut new_points = Vec::with_capacity(config.len() - 1);
    for (i, p) in config.points().iter().enumerate() {
        if i == y {
            continue;
        }
        point_map[i] = Some(new_points.len());
        new_points.push(*p);
    }
    let new_b = config.boundary_len() - 1;
    for i in 0..new_b {
        let prev = new_points[(i + new_b - 1) % new_b].coord();
        let cur = new_points[i].coord();
        let next = new_points[(i + 1) % new_b].coord();
        if new_points[i].kind != PointKind::Puncture {
            new_points[i].kind = if orient(prev, cur, next) == 0 {
                PointKind::Flat
            } else {
                PointKind::Corner
            };
        }
    }
    let new_config = PointConfig::new(new_points)?;

    let mut set = ArcSet::empty(new_config.arc_count());
    for id in t.arc_ids() {
        let Arc { a, b } = config.arc(id);
        let (u, v) = (
            if a == y { x } else { a },
            if b == y { x } else { b },
        );
        if u == v {
            continue;
        }
        let (nu, nv) = (point_map[u].unwrap(), point_map[v].unwrap());
        match new_config.arc_id(nu, nv) {
            Some(nid) => set.insert(nid),
            None => {
                return Err(Error::FlatObstruction {
                    apex: point_map[x].unwrap(),
                    flat: nv,
                })
            }
        }
    }
    new_config.check_triangulation(&set)?;
    Ok(Contraction {
        config: new_config,
        triangulation: Triangulation::from_set(set),
        point_map,
    })
}
