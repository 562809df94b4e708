//! Exact integer predicates. Every geometric question in the crate reduces to
//! orientation signs and point-on-segment tests over i64 coordinates, evaluated
//! in i128 so no input in range can overflow.

pub type Coord = (i64, i64);

/// Sign of the cross product (q - p) x (r - p): +1 left turn, -1 right turn, 0 collinear.
#[inline]
pub fn orient(p: Coord, q: Coord, r: Coord) -> i32 {
    let v = (q.0 as i128 - p.0 as i128) * (r.1 as i128 - p.1 as i128)
        - (q.1 as i128 - p.1 as i128) * (r.0 as i128 - p.0 as i128);
    match v.cmp(&0) {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    }
}

/// True when q lies strictly inside the open segment (p, r).
#[inline]
pub fn strictly_between(p: Coord, q: Coord, r: Coord) -> bool {
    if orient(p, q, r) != 0 {
        return false;
    }
    let dot = (p.0 as i128 - q.0 as i128) * (r.0 as i128 - q.0 as i128)
        + (p.1 as i128 - q.1 as i128) * (r.1 as i128 - q.1 as i128);
    dot < 0
}

/// Proper crossing of the open segments (a, b) and (c, d).
///
/// For arcs of a valid configuration this is the complete crossing test:
/// a config point can never sit in the open interior of a valid arc, so
/// touching configurations do not occur between valid arcs.
#[inline]
pub fn segments_cross(a: Coord, b: Coord, c: Coord, d: Coord) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    o1 * o2 < 0 && o3 * o4 < 0
}

/// True when p lies strictly inside the triangle (a, b, c) (any orientation).
#[inline]
pub fn strictly_inside_triangle(a: Coord, b: Coord, c: Coord, p: Coord) -> bool {
    let o = orient(a, b, c);
    if o == 0 {
        return false;
    }
    let s1 = orient(a, b, p);
    let s2 = orient(b, c, p);
    let s3 = orient(c, a, p);
    s1 == o && s2 == o && s3 == o
}

/// Open segment (u, v) meets the open interior of triangle (a, b, c).
///
/// Assumes both come from one configuration with valid arcs: segments never
/// pass through a vertex of the triangle other than at their own endpoints.
pub fn segment_meets_triangle(u: Coord, v: Coord, tri: [Coord; 3]) -> bool {
    if strictly_inside_triangle(tri[0], tri[1], tri[2], u)
        || strictly_inside_triangle(tri[0], tri[1], tri[2], v)
    {
        return true;
    }
    for i in 0..3 {
        let (c, d) = (tri[i], tri[(i + 1) % 3]);
        if segments_cross(u, v, c, d) {
            return true;
        }
    }
    false
}

/// Open segment (u, v) meets the open interior of the convex quad given in
/// cyclic order. A diagonal of the quad counts as meeting it.
pub fn segment_meets_quad(u: Coord, v: Coord, quad: [Coord; 4]) -> bool {
    // Diagonal case: both endpoints are opposite quad vertices.
    let is_vertex = |p: Coord| quad.iter().position(|&q| q == p);
    if let (Some(i), Some(j)) = (is_vertex(u), is_vertex(v)) {
        let d = (4 + i as i32 - j as i32) % 4;
        if d == 2 {
            return true;
        }
    }
    if inside_strict(u, quad) || inside_strict(v, quad) {
        return true;
    }
    for i in 0..4 {
        if segments_cross(u, v, quad[i], quad[(i + 1) % 4]) {
            return true;
        }
    }
    false
}

fn inside_strict(p: Coord, quad: [Coord; 4]) -> bool {
    let o = orient(quad[0], quad[1], quad[2]).signum();
    (0..4).all(|i| orient(quad[i], quad[(i + 1) % 4], p) == o)
}

/// Open interiors of two triangles intersect. Identical triangles count.
pub fn triangles_overlap(t1: [Coord; 3], t2: [Coord; 3]) -> bool {
    let same = {
        let mut a = t1;
        let mut b = t2;
        a.sort_unstable();
        b.sort_unstable();
        a == b
    };
    if same {
        return true;
    }
    for &p in &t1 {
        if strictly_inside_triangle(t2[0], t2[1], t2[2], p) {
            return true;
        }
    }
    for &p in &t2 {
        if strictly_inside_triangle(t1[0], t1[1], t1[2], p) {
            return true;
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            if segments_cross(t1[i], t1[(i + 1) % 3], t2[j], t2[(j + 1) % 3]) {
                return true;
            }
        }
    }
    false
}
