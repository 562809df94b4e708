//! Audit helpers shared by the test suite and the command line front end:
//! exhaustive strong-convexity checks on enumerable configurations and a
//! budgeted probe for single pairs on larger ones.

use crate::engine::{distance, reachable_set, ExecMode, SearchLimits};
use crate::error::{Error, Result};
use crate::geometry::{ArcId, ArcSet, PointConfig, Triangulation};

/// One constrained-vs-unconstrained distance mismatch.
#[derive(Debug, Clone)]
pub struct ConvexityViolation {
    pub eps: ArcId,
    pub t1: Triangulation,
    pub t2: Triangulation,
    pub unconstrained: usize,
    pub constrained: usize,
}

/// All-pairs distances over an explicit state list.
fn all_pairs(
    states: &[Triangulation],
    adjacency: &[Vec<u32>],
    mode: ExecMode,
) -> Vec<Vec<u16>> {
    let n = states.len();
    let bfs = |src: usize| -> Vec<u16> {
        let mut dist = vec![u16::MAX; n];
        let mut queue = Vec::with_capacity(n);
        dist[src] = 0;
        queue.push(src as u32);
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head] as usize;
            head += 1;
            let d = dist[u] + 1;
            for &v in &adjacency[u] {
                if dist[v as usize] == u16::MAX {
                    dist[v as usize] = d;
                    queue.push(v);
                }
            }
        }
        dist
    };
    run_map(n, mode, bfs)
}

#[cfg(feature = "parallel")]
fn run_map(n: usize, mode: ExecMode, f: impl Fn(usize) -> Vec<u16> + Sync + Send) -> Vec<Vec<u16>> {
    use rayon::prelude::*;
    match mode {
        ExecMode::Parallel => (0..n).into_par_iter().map(f).collect(),
        ExecMode::Sequential => (0..n).map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_map(n: usize, _mode: ExecMode, f: impl Fn(usize) -> Vec<u16> + Sync + Send) -> Vec<Vec<u16>> {
    (0..n).map(f).collect()
}

/// For every requested interior arc and every pair of triangulations that
/// contain it, compare the distance inside the arc-constrained subgraph with
/// the unconstrained distance. Returns every violation found.
pub fn strong_convexity_exhaustive(
    config: &PointConfig,
    eps_filter: Option<&[ArcId]>,
    limits: SearchLimits,
    mode: ExecMode,
) -> Result<Vec<ConvexityViolation>> {
    let start = crate::geometry::shapes::any_triangulation(config);
    let reach = reachable_set(config, &start, None, limits)?;
    let states = &reach.states;
    let mut adjacency = vec![Vec::new(); states.len()];
    for (i, t) in states.iter().enumerate() {
        config.for_each_flip(t, |_, _, next| {
            adjacency[i].push(reach.index[&next.arcs]);
        });
    }
    let full = all_pairs(states, &adjacency, mode);

    let interior: Vec<ArcId> = (0..config.arc_count())
        .filter(|&id| !config.is_boundary_arc(id))
        .filter(|id| eps_filter.is_none_or(|f| f.contains(id)))
        .collect();

    let mut violations = Vec::new();
    for eps in interior {
        // Subgraph of the triangulations containing eps.
        let members: Vec<u32> = (0..states.len() as u32)
            .filter(|&i| states[i as usize].contains(eps))
            .collect();
        if members.is_empty() {
            continue;
        }
        let local: std::collections::HashMap<u32, u32> = members
            .iter()
            .enumerate()
            .map(|(loc, &glob)| (glob, loc as u32))
            .collect();
        let sub_states: Vec<Triangulation> =
            members.iter().map(|&i| states[i as usize].clone()).collect();
        let mut sub_adj = vec![Vec::new(); members.len()];
        for (loc, &glob) in members.iter().enumerate() {
            for &nb in &adjacency[glob as usize] {
                if let Some(&nb_loc) = local.get(&nb) {
                    sub_adj[loc].push(nb_loc);
                }
            }
        }
        let constrained = all_pairs(&sub_states, &sub_adj, mode);
        for (i, &gi) in members.iter().enumerate() {
            for (j, &gj) in members.iter().enumerate().skip(i + 1) {
                let unc = full[gi as usize][gj as usize];
                let con = constrained[i][j];
                if con != unc {
                    violations.push(ConvexityViolation {
                        eps,
                        t1: sub_states[i].clone(),
                        t2: sub_states[j].clone(),
                        unconstrained: unc as usize,
                        constrained: con as usize,
                    });
                }
            }
        }
    }
    Ok(violations)
}

/// Findings of a budgeted pair probe: exact values when the search fits the
/// node budget, explicit bounds otherwise. Never fails on budget exhaustion.
#[derive(Debug, Clone)]
pub struct ConvexityProbe {
    pub lower_bound: usize,
    pub distance: Option<usize>,
    pub constrained_distance: Option<usize>,
    pub truncated: bool,
}

pub fn convexity_probe(
    config: &PointConfig,
    t1: &Triangulation,
    t2: &Triangulation,
    eps: Option<ArcId>,
    limits: SearchLimits,
) -> Result<ConvexityProbe> {
    let lower_bound = t1.arcs.diff_count(&t2.arcs);
    let mut truncated = false;
    let mut run = |constraint: Option<&ArcSet>| -> Result<Option<usize>> {
        match distance(config, t1, t2, constraint, limits) {
            Ok(d) => Ok(Some(d)),
            Err(Error::ResourceExceeded { .. }) => {
                truncated = true;
                Ok(None)
            }
            Err(e) => Err(e),
        }
    };
    let dist = run(None)?;
    let constrained_distance = match eps {
        Some(id) => {
            let set = ArcSet::from_ids(config.arc_count(), [id]);
            run(Some(&set))?
        }
        None => None,
    };
    Ok(ConvexityProbe { lower_bound, distance: dist, constrained_distance, truncated })
}
