//! Generators for the two benchmark families: a mirror-symmetric polygon pair
//! whose crossing counts are known in closed form (used by the heuristic-gap
//! sweep), and a two-flat-vertex polygon pair sharing an arc, together with an
//! explicit constructive path between them.
//!
//! The layouts are pinned by quantitative oracles asserted at build time:
//! if a generated instance violates one of its closed-form counts, the
//! generator panics rather than returning a wrong layout.

use crate::engine::FlipPath;
use crate::error::{Error, Result};
use crate::geometry::shapes::{comb, convex_polygon, with_flats, zigzag};
use crate::geometry::{
    Arc, ArcId, ArcSet, Point, PointConfig, PointId, PointKind, Triangulation,
};

/// Vertex labels of the mirror-symmetric family. The cyclic order is
/// o, d, d_1..d_n, e, e_1..e_m, f, f_1..f_{m+1}, g, g_1..g_m, h, h_1..h_n, p.
#[derive(Clone, Debug)]
pub struct Labels8 {
    pub o: PointId,
    pub d: PointId,
    pub d_chain: Vec<PointId>,
    pub e: PointId,
    pub e_chain: Vec<PointId>,
    pub f: PointId,
    pub f_chain: Vec<PointId>,
    pub g: PointId,
    pub g_chain: Vec<PointId>,
    pub h: PointId,
    pub h_chain: Vec<PointId>,
    pub p: PointId,
}

pub struct Family8Instance {
    pub config: PointConfig,
    pub t_minus: Triangulation,
    pub t_plus: Triangulation,
    pub labels: Labels8,
    pub n: usize,
    pub m: usize,
    /// Whether both inner regions carry their standard comb triangulations.
    pub standard: bool,
}

impl Family8Instance {
    /// The degree-based distance bound through the fan apex: 2n + 6m + 8.
    pub fn distance_bound(&self) -> usize {
        2 * self.n + 6 * self.m + 8
    }
}

/// Triangulation choice for the two free regions.
#[derive(Clone, Debug, Default)]
pub enum InnerChoice {
    /// Comb at the region's designated apex (the standard instance).
    #[default]
    Comb,
    /// Zigzag starting at the designated apex.
    Zigzag,
    /// Explicit diagonals as pairs of indices into the region cycle.
    Custom(Vec<(usize, usize)>),
}

fn mirror(n: usize, k: PointId) -> PointId {
    (n - k) % n
}

fn mirror_set(config: &PointConfig, t: &ArcSet) -> Result<ArcSet> {
    let n = config.len();
    let mut out = ArcSet::empty(config.arc_count());
    for id in t.iter() {
        let Arc { a, b } = config.arc(id);
        out.insert(config.require_arc(mirror(n, a), mirror(n, b))?);
    }
    Ok(out)
}

fn fill_region(
    config: &PointConfig,
    region: &[PointId],
    apex: PointId,
    choice: &InnerChoice,
) -> Result<Vec<ArcId>> {
    match choice {
        InnerChoice::Comb => comb(config, region, apex),
        InnerChoice::Zigzag => {
            let pos = region.iter().position(|&v| v == apex).unwrap();
            let avoid = region[(pos + 1) % region.len()];
            zigzag(config, region, apex, avoid)
        }
        InnerChoice::Custom(pairs) => {
            let mut out = Vec::new();
            for &(i, j) in pairs {
                if i >= region.len() || j >= region.len() {
                    return Err(Error::BadParameters("custom diagonal index out of range".into()));
                }
                out.push(config.require_arc(region[i], region[j])?);
            }
            Ok(out)
        }
    }
}

/// Build the mirror-symmetric family instance on 2n + 3m + 8 vertices.
pub fn build_family8(
    n: usize,
    m: usize,
    inner_e: InnerChoice,
    inner_h: InnerChoice,
) -> Result<Family8Instance> {
    if n < 1 || m < 1 {
        return Err(Error::BadParameters("family requires n >= 1 and m >= 1".into()));
    }
    let total = 2 * n + 3 * m + 8;
    let config = convex_polygon(total);

    // Cyclic label map.
    let mut pos = 0usize;
    let mut next = |count: usize| -> Vec<PointId> {
        let v: Vec<PointId> = (pos..pos + count).collect();
        pos += count;
        v
    };
    let o = next(1)[0];
    let d = next(1)[0];
    let d_chain = next(n);
    let e = next(1)[0];
    let e_chain = next(m);
    let f = next(1)[0];
    let f_chain = next(m + 1);
    let g = next(1)[0];
    let g_chain = next(m);
    let h = next(1)[0];
    let h_chain = next(n);
    let p = next(1)[0];
    debug_assert_eq!(pos, total);
    let labels = Labels8 {
        o,
        d,
        d_chain: d_chain.clone(),
        e,
        e_chain: e_chain.clone(),
        f,
        f_chain: f_chain.clone(),
        g,
        g_chain: g_chain.clone(),
        h,
        h_chain: h_chain.clone(),
        p,
    };

    let mut arcs = config.boundary_edges().clone();
    let add = |ids: Vec<ArcId>, arcs: &mut ArcSet| {
        for id in ids {
            arcs.insert(id);
        }
    };

    // Fan region at o and the glue triangle (o, e, p).
    let mut region_d = vec![o, d];
    region_d.extend(&d_chain);
    region_d.push(e);
    add(comb(&config, &region_d, o)?, &mut arcs);
    arcs.insert(config.require_arc(e, p)?);

    // Free region between p, e and f, combed at p in the standard instance.
    let mut region_e = vec![e];
    region_e.extend(&e_chain);
    region_e.extend([f, p]);
    arcs.insert(config.require_arc(p, e)?);
    arcs.insert(config.require_arc(f, p)?);
    add(fill_region(&config, &region_e, p, &inner_e)?, &mut arcs);

    // Free region between f, h and p, combed at f in the standard instance.
    let mut region_h = vec![f, h];
    region_h.extend(&h_chain);
    region_h.push(p);
    arcs.insert(config.require_arc(f, h)?);
    add(fill_region(&config, &region_h, f, &inner_h)?, &mut arcs);

    // Zigzag region between f and h.
    let mut region_f = vec![f];
    region_f.extend(&f_chain);
    region_f.push(g);
    region_f.extend(&g_chain);
    region_f.push(h);
    let zz_start = f_chain[m]; // f_{m+1}
    add(zigzag(&config, &region_f, zz_start, g)?, &mut arcs);

    config.check_triangulation(&arcs)?;
    let t_minus = Triangulation::from_set(arcs);
    let t_plus = Triangulation::from_set(mirror_set(&config, &t_minus.arcs)?);
    config.check_triangulation(&t_plus.arcs)?;

    let standard = matches!(inner_e, InnerChoice::Comb) && matches!(inner_h, InnerChoice::Comb);
    let inst = Family8Instance { config, t_minus, t_plus, labels, n, m, standard };
    if standard {
        assert_standard_counts(&inst);
    }
    Ok(inst)
}

/// Closed-form crossing counts of the standard instance; these pin the layout.
fn assert_standard_counts(inst: &Family8Instance) {
    let (n, m) = (inst.n, inst.m);
    let cfg = &inst.config;
    let l = &inst.labels;
    let plus = &inst.t_plus.arcs;
    let cross = |u: PointId, v: PointId| -> usize {
        cfg.crossings_with_set(cfg.arc_id(u, v).unwrap(), plus)
    };
    for (i, &di) in l.d_chain.iter().enumerate() {
        assert_eq!(cross(l.o, di), m + (i + 1) + 1, "fan arc crossing count");
    }
    assert_eq!(cross(l.o, l.e), n + m + 2, "(o,e) crossing count");
    assert_eq!(cross(l.f, l.p), 2 * n + 3 * m + 5, "(f,p) crossing count");
    assert_eq!(cross(l.f, l.h), n + 3 * m + 3, "(f,h) crossing count");
    assert_eq!(cross(l.e, l.p), 2 * n + m + 3, "(e,p) crossing count");
    let (a_f, a_p) = a_sets(inst, &inst.t_minus);
    assert_eq!(a_f.len(), n, "standard A_f size");
    assert_eq!(a_p.len(), m, "standard A_p size");
    let (a_f_plus, a_p_plus) = a_sets(inst, &inst.t_plus);
    assert!(a_f_plus.is_empty() && a_p_plus.is_empty(), "mirror A-sets empty");
}

/// The two distinguished arc families of a triangulation of the instance:
/// fan arcs from f into the h-chain and from p into the e-chain.
pub fn a_sets(inst: &Family8Instance, t: &Triangulation) -> (Vec<ArcId>, Vec<ArcId>) {
    let l = &inst.labels;
    let cfg = &inst.config;
    let a_f = l
        .h_chain
        .iter()
        .filter_map(|&hi| cfg.arc_id(l.f, hi))
        .filter(|&id| t.contains(id))
        .collect();
    let a_p = l
        .e_chain
        .iter()
        .filter_map(|&ei| cfg.arc_id(l.p, ei))
        .filter(|&id| t.contains(id))
        .collect();
    (a_f, a_p)
}

/// Vertex labels of the two-flat family. Cyclic order: o, a, b, c, d,
/// d_1..d_n, e, e_1..e_m, f, f_1..f_m, g, g_1..g_m, h, h_1..h_n, q, c2, r, s;
/// b and r are the flat vertices (inside segments a-c and c2-s).
#[derive(Clone, Debug)]
pub struct Labels6 {
    pub o: PointId,
    pub a: PointId,
    pub b: PointId,
    pub c: PointId,
    pub d: PointId,
    pub d_chain: Vec<PointId>,
    pub e: PointId,
    pub e_chain: Vec<PointId>,
    pub f: PointId,
    pub f_chain: Vec<PointId>,
    pub g: PointId,
    pub g_chain: Vec<PointId>,
    pub h: PointId,
    pub h_chain: Vec<PointId>,
    pub q: PointId,
    pub c2: PointId,
    pub r: PointId,
    pub s: PointId,
}

pub struct Family6Instance {
    pub config: PointConfig,
    pub t_minus: Triangulation,
    pub t_plus: Triangulation,
    /// The arc shared by both triangulations, with the flat vertices sitting
    /// on the same side of it, adjacent to its two endpoints.
    pub eta: ArcId,
    pub labels: Labels6,
    pub n: usize,
    pub m: usize,
    /// Constructive halves: t_minus -> midpoint and midpoint -> t_plus, each
    /// of length n + 3m + 12.
    pub half1: FlipPath,
    pub half2: FlipPath,
}

impl Family6Instance {
    pub fn distance_bound(&self) -> usize {
        2 * self.n + 6 * self.m + 24
    }

    pub fn full_path(&self) -> FlipPath {
        self.half1.concat(&self.half2).expect("halves meet at the midpoint")
    }
}

/// Build the two-flat-vertex family instance on 2n + 3m + 13 vertices.
pub fn build_family6(n: usize, m: usize) -> Result<Family6Instance> {
    if n < 1 || m < 1 {
        return Err(Error::BadParameters("family requires n >= 1 and m >= 1".into()));
    }
    let total = 2 * n + 3 * m + 13;
    let corner_total = total - 2;

    // Corner skeleton on a circle; the flats b and r are inserted afterwards
    // at exact midpoints (after corner positions 1 = a and corner_total - 3 = c2).
    let skeleton = convex_polygon(corner_total);
    let corners: Vec<(i64, i64)> = skeleton.points().iter().map(|p| (p.x, p.y)).collect();
    let a_corner = 1usize;
    let c2_corner = corner_total - 2;
    let config = with_flats(&corners, &[a_corner, c2_corner], &[])?;
    debug_assert_eq!(config.len(), total);

    let mut pos = 0usize;
    let mut next = |count: usize| -> Vec<PointId> {
        let v: Vec<PointId> = (pos..pos + count).collect();
        pos += count;
        v
    };
    let o = next(1)[0];
    let a = next(1)[0];
    let b = next(1)[0];
    let c = next(1)[0];
    let d = next(1)[0];
    let d_chain = next(n);
    let e = next(1)[0];
    let e_chain = next(m);
    let f = next(1)[0];
    let f_chain = next(m);
    let g = next(1)[0];
    let g_chain = next(m);
    let h = next(1)[0];
    let h_chain = next(n);
    let q = next(1)[0];
    let c2 = next(1)[0];
    let r = next(1)[0];
    let s = next(1)[0];
    debug_assert_eq!(pos, total);
    assert_eq!(config.point(b).kind, PointKind::Flat);
    assert_eq!(config.point(r).kind, PointKind::Flat);
    let labels = Labels6 {
        o,
        a,
        b,
        c,
        d,
        d_chain: d_chain.clone(),
        e,
        e_chain: e_chain.clone(),
        f,
        f_chain: f_chain.clone(),
        g,
        g_chain: g_chain.clone(),
        h,
        h_chain: h_chain.clone(),
        q,
        c2,
        r,
        s,
    };

    let mut arcs = config.boundary_edges().clone();
    let insert_pairs = |pairs: &[(PointId, PointId)], arcs: &mut ArcSet| -> Result<()> {
        for &(u, v) in pairs {
            arcs.insert(config.require_arc(u, v)?);
        }
        Ok(())
    };
    let eta = config.require_arc(a, s)?;
    arcs.insert(eta);
    insert_pairs(&[(b, d), (e, q), (a, q)], &mut arcs)?;

    let mut region_d = vec![a, d];
    region_d.extend(&d_chain);
    region_d.push(e);
    for id in comb(&config, &region_d, a)? {
        arcs.insert(id);
    }
    let mut region_e = vec![e];
    region_e.extend(&e_chain);
    region_e.extend([f, q]);
    for id in comb(&config, &region_e, q)? {
        arcs.insert(id);
    }
    let mut region_h = vec![f, h];
    region_h.extend(&h_chain);
    region_h.push(q);
    for id in comb(&config, &region_h, f)? {
        arcs.insert(id);
    }
    let mut region_f = vec![f];
    region_f.extend(&f_chain);
    region_f.push(g);
    region_f.extend(&g_chain);
    region_f.push(h);
    for id in zigzag(&config, &region_f, f_chain[m - 1], g)? {
        arcs.insert(id);
    }
    // Fan of the pocket (a, q, c2, r, s) at a.
    insert_pairs(&[(a, c2), (a, r)], &mut arcs)?;

    config.check_triangulation(&arcs)?;
    let t_minus = Triangulation::from_set(arcs);
    let t_plus = Triangulation::from_set(mirror_set(&config, &t_minus.arcs)?);
    config.check_triangulation(&t_plus.arcs)?;
    assert!(t_plus.contains(eta), "mirror fixes the shared arc");

    let (half1, half2) = constructive_halves(&config, &labels, &t_minus, &t_plus, n, m)?;
    assert_eq!(half1.len(), n + 3 * m + 12, "first half length");
    assert_eq!(half2.len(), n + 3 * m + 12, "second half length");

    Ok(Family6Instance {
        config,
        t_minus,
        t_plus,
        eta,
        labels,
        n,
        m,
        half1,
        half2,
    })
}

/// The explicit constructive path: a first half peels the fan structure into
/// a mirror-invariant middle triangulation (fans at the axis vertex o plus
/// the two end fans); the second half is its mirror image reversed.
fn constructive_halves(
    config: &PointConfig,
    l: &Labels6,
    t_minus: &Triangulation,
    t_plus: &Triangulation,
    n: usize,
    m: usize,
) -> Result<(FlipPath, FlipPath)> {
    // Phase A: m + 5 flips, each introducing an arc at o.
    let mut schedule: Vec<((PointId, PointId), (PointId, PointId))> = vec![
        ((l.a, l.s), (l.o, l.r)),
        ((l.a, l.r), (l.o, l.c2)),
        ((l.a, l.c2), (l.o, l.q)),
        ((l.a, l.q), (l.o, l.e)),
        ((l.e, l.q), (l.o, l.e_chain[0])),
    ];
    for i in 0..m - 1 {
        schedule.push(((l.q, l.e_chain[i]), (l.o, l.e_chain[i + 1])));
    }
    schedule.push(((l.q, l.e_chain[m - 1]), (l.o, l.f)));
    // Phase B: hand the pocket to q and s.
    schedule.push(((l.q, l.f), (l.o, l.h_chain[n - 1])));
    schedule.push(((l.o, l.c2), (l.q, l.r)));
    schedule.push(((l.o, l.r), (l.q, l.s)));
    schedule.push(((l.o, l.q), (l.s, l.h_chain[n - 1])));
    schedule.push(((l.o, l.h_chain[n - 1]), (l.f, l.s)));
    // Phase C: peel the h-fan from f to s.
    for i in (1..n).rev() {
        schedule.push(((l.f, l.h_chain[i]), (l.s, l.h_chain[i - 1])));
    }
    schedule.push(((l.f, l.h_chain[0]), (l.s, l.h)));
    // Phase D: release f toward o.
    schedule.push(((l.f, l.s), (l.o, l.h)));
    schedule.push(((l.f, l.h), (l.o, l.g_chain[m - 1])));
    // Phase E: peel the zigzag into the o-fan, f-end first.
    let zz_path = zigzag_path_vertices(l, m);
    let mut inserts = Vec::new();
    for j in 0..m {
        inserts.push((l.o, l.f_chain[j]));
        if j + 1 < m {
            inserts.push((l.o, l.g_chain[m - 2 - j]));
        } else {
            inserts.push((l.o, l.g));
        }
    }
    for (w, ins) in zz_path.windows(2).rev().zip(inserts) {
        schedule.push(((w[0], w[1]), ins));
    }

    let mut steps = Vec::with_capacity(schedule.len());
    let mut cur = t_minus.clone();
    for (k, &((ru, rv), (iu, iv))) in schedule.iter().enumerate() {
        let rm = config.require_arc(ru, rv)?;
        let expect = config.require_arc(iu, iv)?;
        match config.flip(&cur, rm)? {
            Some((ins, next)) if ins == expect => {
                steps.push((rm, ins));
                cur = next;
            }
            Some((ins, _)) => {
                panic!(
                    "constructive schedule step {k}: flipping {} produced {}, expected {}",
                    config.arc(rm),
                    config.arc(ins),
                    config.arc(expect)
                );
            }
            None => panic!(
                "constructive schedule step {k}: arc {} is not flippable",
                config.arc(rm)
            ),
        }
    }
    let half1 = FlipPath { start: t_minus.clone(), steps };
    let mid = half1.end();
    let mirrored_mid = Triangulation::from_set(mirror_set(config, &mid.arcs)?);
    assert_eq!(mid, mirrored_mid, "midpoint triangulation is mirror-invariant");

    // Mirror of half1 runs t_plus -> mid; reverse it for mid -> t_plus.
    let mirrored_steps: Vec<(ArcId, ArcId)> = half1
        .steps
        .iter()
        .map(|&(rm, ins)| {
            let ra = config.arc(rm);
            let ia = config.arc(ins);
            let nr = config
                .require_arc(mirror(config.len(), ra.a), mirror(config.len(), ra.b))
                .unwrap();
            let ni = config
                .require_arc(mirror(config.len(), ia.a), mirror(config.len(), ia.b))
                .unwrap();
            (nr, ni)
        })
        .collect();
    let mirrored_half = FlipPath { start: t_plus.clone(), steps: mirrored_steps };
    mirrored_half.validate(config)?;
    debug_assert_eq!(mirrored_half.end(), mid);
    let half2 = mirrored_half.reversed();
    half2.validate(config)?;
    Ok((half1, half2))
}

/// Path vertices of the zigzag of the middle region, f-chain end last:
/// f_m, g_1, f_{m-1}, g_2, ..., g_m?, ..., ending at f.
fn zigzag_path_vertices(l: &Labels6, m: usize) -> Vec<PointId> {
    let mut path = vec![l.f_chain[m - 1]];
    let mut lo = 0usize; // next g_chain index
    let mut hi = m as isize - 2; // next f_chain index; negative means f itself
    let mut lo_turn = true;
    while path.len() < 2 * m + 1 {
        if lo_turn {
            path.push(l.g_chain[lo]);
            lo += 1;
        } else {
            if hi >= 0 {
                path.push(l.f_chain[hi as usize]);
            } else {
                path.push(l.f);
            }
            hi -= 1;
        }
        lo_turn = !lo_turn;
    }
    path
}

/// A family instance with some flats moved into the interior; the flip graph
/// is unchanged up to the forced presence of the new hull edges.
pub struct PerturbedFamily6 {
    pub config: PointConfig,
    pub t_minus: Triangulation,
    pub t_plus: Triangulation,
    pub eta: ArcId,
    /// old point id -> new point id.
    pub point_map: Vec<PointId>,
    /// New hull edges created by the perturbation (in every triangulation).
    pub sealed_edges: Vec<ArcId>,
}

/// Move 2 - i of the flat vertices slightly into the interior, keeping every
/// orientation sign of the original configuration. `i` flats remain.
pub fn perturb_flats_to_punctures(inst: &Family6Instance, i: usize) -> Result<PerturbedFamily6> {
    if i > 2 {
        return Err(Error::BadParameters("at most two flats exist".into()));
    }
    let l = &inst.labels;
    let moved: Vec<PointId> = match i {
        2 => Vec::new(),
        1 => vec![l.r],
        _ => vec![l.b, l.r],
    };
    let cfg = &inst.config;

    let mut scale: i64 = 16;
    for _ in 0..6 {
        match try_perturb(inst, &moved, scale) {
            Ok(out) => return Ok(out),
            Err(_) => scale *= 16,
        }
        let max = cfg.points().iter().map(|p| p.x.abs().max(p.y.abs())).max().unwrap();
        if max.saturating_mul(scale) > i64::MAX / 8 {
            break;
        }
    }
    Err(Error::PerturbationFailed)
}

fn try_perturb(inst: &Family6Instance, moved: &[PointId], scale: i64) -> Result<PerturbedFamily6> {
    let cfg = &inst.config;
    let n_old = cfg.len();
    let b_old = cfg.boundary_len();

    // Inward unit-ish offset for a flat between boundary neighbors u, v.
    let offset = |flat: PointId| -> (i64, i64) {
        let u = cfg.coord((flat + b_old - 1) % b_old);
        let v = cfg.coord((flat + 1) % b_old);
        let dir = (v.0 - u.0, v.1 - u.1);
        let normal = (-dir.1, dir.0); // interior is left of the ccw boundary
        let mut best = (0i64, 0i64);
        let mut best_dot = i128::MIN;
        for wx in -1..=1i64 {
            for wy in -1..=1i64 {
                if wx == 0 && wy == 0 {
                    continue;
                }
                let dot = wx as i128 * normal.0 as i128 + wy as i128 * normal.1 as i128;
                if dot > best_dot {
                    best_dot = dot;
                    best = (wx, wy);
                }
            }
        }
        best
    };

    let mut new_points = Vec::with_capacity(n_old);
    let mut point_map = vec![0usize; n_old];
    for (idx, p) in cfg.points().iter().enumerate() {
        if moved.contains(&idx) {
            continue;
        }
        point_map[idx] = new_points.len();
        new_points.push(Point::new(p.x * scale, p.y * scale, p.kind));
    }
    for &flat in moved {
        let p = cfg.point(flat);
        let (wx, wy) = offset(flat);
        point_map[flat] = new_points.len();
        new_points.push(Point::new(p.x * scale + wx, p.y * scale + wy, PointKind::Puncture));
    }
    let new_cfg = PointConfig::new(new_points)?;

    // Correspondence of valid arcs and crossings; the perturbed hull edges
    // are the only additions.
    let mut sealed = Vec::new();
    for &flat in moved {
        let u = point_map[(flat + b_old - 1) % b_old];
        let v = point_map[(flat + 1) % b_old];
        let id = new_cfg
            .arc_id(u, v)
            .ok_or_else(|| Error::InvalidConfig("perturbed hull edge not valid".into()))?;
        sealed.push(id);
    }
    let mut old_ids = Vec::with_capacity(cfg.arc_count());
    for id in 0..cfg.arc_count() {
        let Arc { a, b } = cfg.arc(id);
        let nid = new_cfg
            .arc_id(point_map[a], point_map[b])
            .ok_or(Error::PerturbationFailed)?;
        old_ids.push(nid);
    }
    if new_cfg.arc_count() != cfg.arc_count() + sealed.len() {
        return Err(Error::PerturbationFailed);
    }
    for e in 0..cfg.arc_count() {
        for f in e + 1..cfg.arc_count() {
            if cfg.arcs_cross(e, f) != new_cfg.arcs_cross(old_ids[e], old_ids[f]) {
                return Err(Error::PerturbationFailed);
            }
        }
    }

    let transport = |t: &Triangulation| -> Result<Triangulation> {
        let mut set = ArcSet::empty(new_cfg.arc_count());
        for id in t.arc_ids() {
            set.insert(old_ids[id]);
        }
        for &id in &sealed {
            set.insert(id);
        }
        new_cfg.check_triangulation(&set)?;
        Ok(Triangulation::from_set(set))
    };
    let t_minus = transport(&inst.t_minus)?;
    let t_plus = transport(&inst.t_plus)?;
    let eta = old_ids[inst.eta];
    Ok(PerturbedFamily6 {
        config: new_cfg,
        t_minus,
        t_plus,
        eta,
        point_map,
        sealed_edges: sealed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::SearchLimits;
    use crate::geometry::predicates::orient;

    #[test]
    fn family8_crossing_formulas_grid() {
        // The closed-form counts are asserted inside the builder; this also
        // re-checks them explicitly on the grid.
        for n in 1..=4 {
            for m in 1..=4 {
                let inst = build_family8(n, m, InnerChoice::Comb, InnerChoice::Comb).unwrap();
                assert_eq!(inst.config.len(), 2 * n + 3 * m + 8);
                let cfg = &inst.config;
                let l = &inst.labels;
                let plus = &inst.t_plus.arcs;
                let cross =
                    |u: usize, v: usize| cfg.crossings_with_set(cfg.arc_id(u, v).unwrap(), plus);
                for (i0, &di) in l.d_chain.iter().enumerate() {
                    assert_eq!(cross(l.o, di), m + i0 + 2);
                }
                assert_eq!(cross(l.o, l.e), n + m + 2);
                assert_eq!(cross(l.f, l.p), 2 * n + 3 * m + 5);
                assert_eq!(cross(l.f, l.h), n + 3 * m + 3);
                assert_eq!(cross(l.e, l.p), 2 * n + m + 3);
                // (f, p) crosses every interior arc of the mirror image.
                assert_eq!(
                    cfg.interior_arc_count_per_triangulation(),
                    2 * n + 3 * m + 5
                );
            }
        }
    }

    #[test]
    fn family8_a_set_lower_bounds() {
        // Fan arcs cross at least n+3m+5 (f-side) and 2n+m+5 (p-side).
        for n in 1..=3 {
            for m in 1..=3 {
                let inst = build_family8(n, m, InnerChoice::Comb, InnerChoice::Comb).unwrap();
                let cfg = &inst.config;
                let (a_f, a_p) = a_sets(&inst, &inst.t_minus);
                for id in a_f {
                    assert!(cfg.crossings_with_set(id, &inst.t_plus.arcs) >= n + 3 * m + 5);
                }
                for id in a_p {
                    assert!(cfg.crossings_with_set(id, &inst.t_plus.arcs) >= 2 * n + m + 5);
                }
            }
        }
    }

    #[test]
    fn family8_a_sets_shrink_under_flips() {
        let inst = build_family8(3, 2, InnerChoice::Comb, InnerChoice::Comb).unwrap();
        let (a_f, _) = a_sets(&inst, &inst.t_minus);
        let (_, next) = inst.config.flip(&inst.t_minus, a_f[0]).unwrap().unwrap();
        let (a_f2, a_p2) = a_sets(&inst, &next);
        assert_eq!(a_f2.len(), a_f.len() - 1);
        assert_eq!(a_p2.len(), inst.m);
    }

    #[test]
    fn family8_inner_choices() {
        let zz = build_family8(2, 2, InnerChoice::Zigzag, InnerChoice::Zigzag).unwrap();
        assert!(!zz.standard);
        let (a_f, a_p) = a_sets(&zz, &zz.t_minus);
        assert!(a_f.len() < zz.n || a_p.len() < zz.m);
        // A custom diagonal set: region_e cycle is (e, e_1, e_2, f, p);
        // fan from e_1 instead.
        let custom = build_family8(
            2,
            2,
            InnerChoice::Custom(vec![(1, 3), (1, 4)]),
            InnerChoice::Comb,
        )
        .unwrap();
        assert!(!custom.standard);
        // A crossing custom choice errors.
        assert!(build_family8(
            2,
            2,
            InnerChoice::Custom(vec![(0, 2), (1, 3)]),
            InnerChoice::Comb,
        )
        .is_err());
    }

    #[test]
    fn family6_invariants() {
        for (n, m) in [(1, 1), (2, 1), (1, 2), (4, 2)] {
            let inst = build_family6(n, m).unwrap();
            let cfg = &inst.config;
            let l = &inst.labels;
            assert_eq!(cfg.len(), 2 * n + 3 * m + 13);
            // Exactly two flats: b and r.
            let flats: Vec<usize> = cfg.flats().collect();
            assert_eq!(flats, vec![l.b, l.r]);
            // eta is shared and joins a to s.
            assert!(inst.t_minus.contains(inst.eta));
            assert!(inst.t_plus.contains(inst.eta));
            assert_eq!(cfg.arc(inst.eta), crate::geometry::Arc::new(l.a, l.s));
            // The flats are adjacent to eta's endpoints (boundary neighbors)
            // and lie on the same side of eta.
            let b_boundary = cfg.boundary_len();
            assert_eq!((l.b + b_boundary - 1) % b_boundary, l.a);
            assert_eq!((l.r + 1) % b_boundary, l.s);
            let side_b = orient(cfg.coord(l.a), cfg.coord(l.s), cfg.coord(l.b));
            let side_r = orient(cfg.coord(l.a), cfg.coord(l.s), cfg.coord(l.r));
            assert!(side_b == side_r && side_b != 0);
            // The axis vertex o sits alone on the other side.
            let side_o = orient(cfg.coord(l.a), cfg.coord(l.s), cfg.coord(l.o));
            assert_eq!(side_o, -side_b);
            // Halves validate, meet, and end at the mirror triangulation.
            assert_eq!(inst.half1.len(), n + 3 * m + 12);
            assert_eq!(inst.half2.len(), n + 3 * m + 12);
            inst.half1.validate(cfg).unwrap();
            inst.half2.validate(cfg).unwrap();
            assert_eq!(inst.half1.start, inst.t_minus);
            assert_eq!(inst.half1.end(), inst.half2.start);
            assert_eq!(inst.half2.end(), inst.t_plus);
            assert!(inst.full_path().len() <= inst.distance_bound());
        }
    }

    #[test]
    fn family6_parameter_errors() {
        assert!(build_family6(0, 1).is_err());
        assert!(build_family6(1, 0).is_err());
        assert!(build_family8(0, 1, InnerChoice::Comb, InnerChoice::Comb).is_err());
    }

    #[test]
    fn perturbation_identity() {
        let inst = build_family6(1, 1).unwrap();
        let out = perturb_flats_to_punctures(&inst, 2).unwrap();
        assert_eq!(out.config.len(), inst.config.len());
        assert_eq!(out.config.flats().count(), 2);
        assert_eq!(out.sealed_edges.len(), 0);
        assert_eq!(out.config.arc_count(), inst.config.arc_count());
    }

    #[test]
    fn perturbation_to_punctures() {
        let inst = build_family6(1, 1).unwrap();
        for i in [1usize, 0] {
            let out = perturb_flats_to_punctures(&inst, i).unwrap();
            assert_eq!(out.config.flats().count(), i);
            assert_eq!(out.config.puncture_count(), 2 - i);
            assert_eq!(out.sealed_edges.len(), 2 - i);
            // One new valid arc per moved flat, crossing tables agree
            // (verified inside the builder; spot-check the counts here).
            assert_eq!(
                out.config.arc_count(),
                inst.config.arc_count() + (2 - i)
            );
            out.config.check_triangulation(&out.t_minus.arcs).unwrap();
            out.config.check_triangulation(&out.t_plus.arcs).unwrap();
            assert!(out.t_minus.contains(out.eta));
            // Transported endpoints keep their flip distance lower bound.
            assert_eq!(
                out.t_minus.arcs.diff_count(&out.t_plus.arcs),
                inst.t_minus.arcs.diff_count(&inst.t_plus.arcs)
            );
        }
    }

    #[test]
    fn family8_small_distance_cross_check() {
        // (n, m) = (1, 1): 13 points; exact distance within the degree bound
        // and below the greedy estimate.
        let inst = build_family8(1, 1, InnerChoice::Comb, InnerChoice::Comb).unwrap();
        let d = crate::engine::distance(
            &inst.config,
            &inst.t_minus,
            &inst.t_plus,
            None,
            SearchLimits::default(),
        )
        .unwrap();
        assert!(d <= inst.distance_bound());
        let h = crate::heuristics::greedy_path(
            &inst.config,
            &inst.t_minus,
            &inst.t_plus,
            crate::heuristics::TieRule::LexRemovedArc,
        )
        .unwrap()
        .len();
        assert!(h >= d);
    }
}
