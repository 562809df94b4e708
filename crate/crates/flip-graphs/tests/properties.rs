//! Property tests over randomly generated configurations, triangulations and
//! paths.

use flip_graphs::blowup;
use flip_graphs::engine::FlipPath;
use flip_graphs::geometry::shapes::{any_triangulation, convex_polygon, with_flats};
use flip_graphs::heuristics::crossing_number;
use flip_graphs::{PointConfig, Triangulation};
use proptest::prelude::*;

/// A deterministic pseudo-random walk from the greedy triangulation.
fn walk(cfg: &PointConfig, seed: u64, len: usize) -> FlipPath {
    let start = any_triangulation(cfg);
    let mut s = seed.wrapping_mul(0x9e3779b97f4a7c15) | 1;
    let mut cur = start.clone();
    let mut steps = Vec::new();
    for _ in 0..len {
        let mut flips = Vec::new();
        cfg.for_each_flip(&cur, |rm, ins, next| flips.push((rm, ins, next)));
        if flips.is_empty() {
            break;
        }
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let (rm, ins, next) = flips[(s >> 33) as usize % flips.len()].clone();
        steps.push((rm, ins));
        cur = next;
    }
    FlipPath { start, steps }
}

fn snapshots_of(path: &FlipPath) -> Vec<Triangulation> {
    path.snapshots()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn flip_is_an_involution(n in 4usize..10, seed in 0u64..1_000_000) {
        let cfg = convex_polygon(n);
        let path = walk(&cfg, seed, 6);
        let t = path.end();
        for arc in t.arc_ids() {
            if cfg.is_boundary_arc(arc) {
                continue;
            }
            if let Some((ins, next)) = cfg.flip(&t, arc).unwrap() {
                let (back, orig) = cfg.flip(&next, ins).unwrap().unwrap();
                prop_assert_eq!(back, arc);
                prop_assert_eq!(orig, t.clone());
            }
        }
    }

    #[test]
    fn euler_count_is_invariant(n in 4usize..10, seed in 0u64..1_000_000) {
        let cfg = convex_polygon(n);
        let path = walk(&cfg, seed, 10);
        for snap in snapshots_of(&path) {
            prop_assert_eq!(snap.len(), cfg.triangulation_size());
            prop_assert!(cfg.is_triangulation(&snap.arcs));
            prop_assert_eq!(cfg.triangles_of(&snap).len(), cfg.triangle_count());
        }
    }

    #[test]
    fn crossing_number_symmetric(n in 5usize..9, s1 in 0u64..100_000, s2 in 0u64..100_000) {
        let cfg = convex_polygon(n);
        let a = walk(&cfg, s1, 8).end();
        let b = walk(&cfg, s2, 8).end();
        let x = crossing_number(&cfg, &a, &b);
        prop_assert_eq!(x, crossing_number(&cfg, &b, &a));
        prop_assert_eq!(x == 0, a == b);
        prop_assert!(a.arcs.diff_count(&b.arcs) <= x || a == b);
    }

    #[test]
    fn below_is_a_strict_order_on_occurrences(seed in 0u64..1_000_000) {
        let cfg = convex_polygon(7);
        let path = walk(&cfg, seed, 7);
        let k = blowup::build(&cfg, &path).unwrap();
        let n_arcs = k.arcs.len();
        for i in 0..n_arcs {
            for j in 0..n_arcs {
                let (f, g) = (blowup::Occ::Arc(i), blowup::Occ::Arc(j));
                if i == j {
                    prop_assert!(!k.below(f, g));
                } else {
                    prop_assert!(!(k.below(f, g) && k.below(g, f)));
                    if cfg.arcs_cross(k.arcs[i].arc, k.arcs[j].arc) {
                        prop_assert!(k.below(f, g) || k.below(g, f));
                    }
                }
            }
        }
    }

    #[test]
    fn interval_exactness(seed in 0u64..1_000_000) {
        // Also exercised on a flat-vertex configuration.
        let cfg = with_flats(&[(0, 0), (8, 0), (12, 6), (4, 12), (-4, 6)], &[2], &[]).unwrap();
        let path = walk(&cfg, seed, 8);
        let k = blowup::build(&cfg, &path).unwrap();
        let snaps = snapshots_of(&path);
        for arc in 0..cfg.arc_count() {
            for (i, snap) in snaps.iter().enumerate() {
                prop_assert_eq!(snap.contains(arc), k.arc_present_at(arc, i));
            }
        }
    }

    #[test]
    fn arc_crossings_agree_with_oracle_under_flats(seed in 0u64..1000) {
        let punct = ((seed % 5) as i64 + 2, (seed % 3) as i64 + 2);
        let Ok(cfg) = with_flats(&[(0, 0), (8, 0), (12, 6), (4, 12), (-4, 6)], &[0], &[punct])
        else {
            return Ok(());
        };
        for e in 0..cfg.arc_count() {
            for f in 0..cfg.arc_count() {
                prop_assert_eq!(cfg.arcs_cross(e, f), cfg.arcs_cross_oracle(e, f));
            }
        }
    }
}
