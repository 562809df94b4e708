//! Implicit-graph search over the flip-graph: enumeration, exact distances,
//! constrained subgraphs, geodesic enumeration and the diameter.
//!
//! Triangulations are hashed by their canonical arc bitset. Searches carry an
//! explicit node budget and fail loudly when it is exceeded; nothing here
//! silently truncates.

use crate::error::{Error, Result};
use crate::geometry::{ArcId, ArcSet, PointConfig, PointId, Triangulation};
use std::collections::hash_map::Entry;
use std::collections::HashMap;

/// Execution strategy for the operations with a data-parallel outer loop.
/// `Parallel` falls back to sequential when the `parallel` feature is off.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecMode {
    Parallel,
    Sequential,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

/// Node budget for searches over the implicit graph.
#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    pub max_states: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_states: 20_000_000 }
    }
}

impl SearchLimits {
    pub fn states(max_states: usize) -> Self {
        SearchLimits { max_states }
    }
}

/// A walk in the flip-graph: the start triangulation plus one
/// (removed, inserted) arc pair per step.
#[derive(Clone, PartialEq, Eq)]
pub struct FlipPath {
    pub start: Triangulation,
    pub steps: Vec<(ArcId, ArcId)>,
}

impl FlipPath {
    pub fn trivial(start: Triangulation) -> Self {
        FlipPath { start, steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> Triangulation {
        let mut arcs = self.start.arcs.clone();
        for &(rm, ins) in &self.steps {
            arcs.remove(rm);
            arcs.insert(ins);
        }
        Triangulation::from_set(arcs)
    }

    /// All k+1 triangulations along the path.
    pub fn snapshots(&self) -> Vec<Triangulation> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut cur = self.start.clone();
        out.push(cur.clone());
        for &(rm, ins) in &self.steps {
            let mut arcs = cur.arcs.clone();
            arcs.remove(rm);
            arcs.insert(ins);
            cur = Triangulation::from_set(arcs);
            out.push(cur.clone());
        }
        out
    }

    /// Check that every step is a legal flip of the configuration.
    pub fn validate(&self, config: &PointConfig) -> Result<()> {
        config.check_triangulation(&self.start.arcs)?;
        let mut cur = self.start.clone();
        for (i, &(rm, ins)) in self.steps.iter().enumerate() {
            match config.flip(&cur, rm) {
                Ok(Some((got, next))) if got == ins => cur = next,
                Ok(Some((got, _))) => {
                    return Err(Error::InvalidPath(format!(
                        "step {i}: flipping {} yields {}, path claims {}",
                        config.arc(rm),
                        config.arc(got),
                        config.arc(ins)
                    )))
                }
                Ok(None) => {
                    return Err(Error::InvalidPath(format!(
                        "step {i}: arc {} is not flippable",
                        config.arc(rm)
                    )))
                }
                Err(e) => return Err(Error::InvalidPath(format!("step {i}: {e}"))),
            }
        }
        Ok(())
    }

    pub fn reversed(&self) -> FlipPath {
        let end = self.end();
        let steps = self.steps.iter().rev().map(|&(rm, ins)| (ins, rm)).collect();
        FlipPath { start: end, steps }
    }

    /// Append `other`, which must start where `self` ends.
    pub fn concat(&self, other: &FlipPath) -> Result<FlipPath> {
        if self.end() != other.start {
            return Err(Error::InvalidPath("concatenated paths do not meet".into()));
        }
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Ok(FlipPath { start: self.start.clone(), steps })
    }

    /// Remove immediate flip/unflip pairs until none remain. Never lengthens.
    pub fn reduce(&self) -> FlipPath {
        let mut steps = self.steps.clone();
        loop {
            let mut cancelled = None;
            for i in 0..steps.len().saturating_sub(1) {
                let (rm1, in1) = steps[i];
                let (rm2, in2) = steps[i + 1];
                if rm2 == in1 && in2 == rm1 {
                    cancelled = Some(i);
                    break;
                }
            }
            match cancelled {
                Some(i) => {
                    steps.remove(i + 1);
                    steps.remove(i);
                }
                None => break,
            }
        }
        FlipPath { start: self.start.clone(), steps }
    }

    /// Rebuild a path from a snapshot sequence, dropping consecutive
    /// duplicates. Consecutive distinct snapshots must differ by one arc.
    pub fn from_snapshots(snapshots: &[Triangulation]) -> Result<FlipPath> {
        let first = snapshots
            .first()
            .ok_or_else(|| Error::InvalidPath("empty snapshot sequence".into()))?;
        let mut steps = Vec::new();
        let mut prev = first;
        for cur in &snapshots[1..] {
            if cur == prev {
                continue;
            }
            let rm = prev.arcs.single_difference(&cur.arcs);
            let ins = cur.arcs.single_difference(&prev.arcs);
            match (rm, ins) {
                (Some(rm), Some(ins)) => steps.push((rm, ins)),
                _ => {
                    return Err(Error::InvalidPath(
                        "consecutive snapshots differ by more than one arc".into(),
                    ))
                }
            }
            prev = cur;
        }
        Ok(FlipPath { start: first.clone(), steps })
    }
}

impl std::fmt::Debug for FlipPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FlipPath(len={})", self.len())
    }
}

/// Neighbor enumeration honoring an optional set of frozen arcs.
fn neighbors(
    config: &PointConfig,
    t: &Triangulation,
    constraint: Option<&ArcSet>,
    mut f: impl FnMut(Triangulation),
) {
    config.for_each_flip(t, |rm, _ins, next| {
        if let Some(s) = constraint {
            if s.contains(rm) {
                return;
            }
        }
        f(next);
    });
}

/// Everything reachable from `start` by flips, in BFS order.
#[derive(Debug)]
pub struct Reachable {
    pub states: Vec<Triangulation>,
    pub index: HashMap<ArcSet, u32>,
}

impl Reachable {
    pub fn count(&self) -> usize {
        self.states.len()
    }
}

pub fn reachable_set(
    config: &PointConfig,
    start: &Triangulation,
    constraint: Option<&ArcSet>,
    limits: SearchLimits,
) -> Result<Reachable> {
    config.check_triangulation(&start.arcs)?;
    if let Some(s) = constraint {
        if !s.is_subset_of(&start.arcs) {
            return Err(Error::InvalidPath("start violates the arc constraint".into()));
        }
    }
    let mut states = vec![start.clone()];
    let mut index = HashMap::new();
    index.insert(start.arcs.clone(), 0u32);
    let mut head = 0usize;
    while head < states.len() {
        let cur = states[head].clone();
        head += 1;
        let mut overflow = false;
        neighbors(config, &cur, constraint, |next| {
            if overflow {
                return;
            }
            if let Entry::Vacant(e) = index.entry(next.arcs.clone()) {
                if states.len() >= limits.max_states {
                    overflow = true;
                    return;
                }
                e.insert(states.len() as u32);
                states.push(next);
            }
        });
        if overflow {
            return Err(Error::ResourceExceeded { what: "reachable states", limit: limits.max_states });
        }
    }
    Ok(Reachable { states, index })
}

/// Exact flip distance via bidirectional breadth-first search. With a
/// constraint set, shortest path among triangulations containing those arcs.
pub fn distance(
    config: &PointConfig,
    t1: &Triangulation,
    t2: &Triangulation,
    constraint: Option<&ArcSet>,
    limits: SearchLimits,
) -> Result<usize> {
    config.check_triangulation(&t1.arcs)?;
    config.check_triangulation(&t2.arcs)?;
    if let Some(s) = constraint {
        if !s.is_subset_of(&t1.arcs) || !s.is_subset_of(&t2.arcs) {
            return Err(Error::InvalidPath(
                "constraint arcs must be present in both endpoints".into(),
            ));
        }
    }
    if t1 == t2 {
        return Ok(0);
    }
    let mut fwd: HashMap<ArcSet, u32> = HashMap::new();
    let mut bwd: HashMap<ArcSet, u32> = HashMap::new();
    fwd.insert(t1.arcs.clone(), 0);
    bwd.insert(t2.arcs.clone(), 0);
    let mut f_frontier = vec![t1.clone()];
    let mut b_frontier = vec![t2.clone()];
    let mut f_depth = 0u32;
    let mut b_depth = 0u32;
    let mut visited = 2usize;

    loop {
        if f_frontier.is_empty() || b_frontier.is_empty() {
            return Err(Error::InvalidPath("endpoints are not connected".into()));
        }
        // Expand the smaller frontier.
        let expand_fwd = f_frontier.len() <= b_frontier.len();
        let (frontier, own, other, own_depth, other_depth) = if expand_fwd {
            (&mut f_frontier, &mut fwd, &bwd, &mut f_depth, b_depth)
        } else {
            (&mut b_frontier, &mut bwd, &fwd, &mut b_depth, f_depth)
        };
        let depth = *own_depth + 1;
        let mut next_frontier = Vec::new();
        let mut best: Option<u32> = None;
        for t in frontier.iter() {
            let mut overflow = false;
            neighbors(config, t, constraint, |next| {
                if overflow {
                    return;
                }
                if let Some(&d2) = other.get(&next.arcs) {
                    let total = depth + d2;
                    best = Some(best.map_or(total, |b| b.min(total)));
                }
                if let Entry::Vacant(e) = own.entry(next.arcs.clone()) {
                    if visited + 1 > limits.max_states {
                        overflow = true;
                        return;
                    }
                    visited += 1;
                    e.insert(depth);
                    next_frontier.push(next);
                }
            });
            if overflow {
                return Err(Error::ResourceExceeded { what: "distance search states", limit: limits.max_states });
            }
        }
        if let Some(total) = best {
            // Any meeting at this expansion is optimal: both frontiers were
            // complete levels, so total = own_depth+1 + other_depth is the
            // first time the levels touch.
            debug_assert_eq!(total, depth + other_depth);
            return Ok(total as usize);
        }
        *own_depth = depth;
        *frontier = next_frontier;
    }
}

/// Layered DAG carrying exactly the triangulations that lie on a geodesic
/// between the two endpoints (optionally inside the constrained subgraph).
pub struct GeodesicDag {
    /// layers[i] holds the triangulations at distance i from the source,
    /// sorted canonically; edges[i][j] lists indices into layers[i+1].
    pub layers: Vec<Vec<Triangulation>>,
    pub edges: Vec<Vec<Vec<u32>>>,
}

impl GeodesicDag {
    pub fn length(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn geodesic_count_capped(&self, cap: usize) -> usize {
        // Count paths through the DAG, saturating at cap.
        let mut counts: Vec<usize> = vec![1; self.layers.last().map_or(0, |l| l.len())];
        for i in (0..self.edges.len()).rev() {
            let mut next = vec![0usize; self.layers[i].len()];
            for (j, outs) in self.edges[i].iter().enumerate() {
                let mut c = 0usize;
                for &k in outs {
                    c = c.saturating_add(counts[k as usize]);
                }
                next[j] = c.min(cap);
            }
            counts = next;
        }
        counts.first().copied().unwrap_or(0)
    }
}

pub fn geodesic_dag(
    config: &PointConfig,
    t1: &Triangulation,
    t2: &Triangulation,
    constraint: Option<&ArcSet>,
    limits: SearchLimits,
) -> Result<GeodesicDag> {
    let k = distance(config, t1, t2, constraint, limits)?;
    // Forward BFS levels up to depth k, then backward distances from t2;
    // a node is on a geodesic iff d1 + d2 == k.
    let mut d1: HashMap<ArcSet, u32> = HashMap::new();
    d1.insert(t1.arcs.clone(), 0);
    let mut level = vec![t1.clone()];
    let mut levels = vec![level.clone()];
    for depth in 1..=k {
        let mut next = Vec::new();
        for t in &level {
            neighbors(config, t, constraint, |nb| {
                if let Entry::Vacant(e) = d1.entry(nb.arcs.clone()) {
                    e.insert(depth as u32);
                    next.push(nb);
                }
            });
        }
        if d1.len() > limits.max_states {
            return Err(Error::ResourceExceeded { what: "geodesic dag states", limit: limits.max_states });
        }
        level = next;
        levels.push(level.clone());
    }
    let mut d2: HashMap<ArcSet, u32> = HashMap::new();
    d2.insert(t2.arcs.clone(), 0);
    let mut blevel = vec![t2.clone()];
    for depth in 1..=k {
        let mut next = Vec::new();
        for t in &blevel {
            neighbors(config, t, constraint, |nb| {
                if let Entry::Vacant(e) = d2.entry(nb.arcs.clone()) {
                    e.insert(depth as u32);
                    next.push(nb);
                }
            });
        }
        blevel = next;
    }

    let mut layers: Vec<Vec<Triangulation>> = Vec::with_capacity(k + 1);
    for (i, lvl) in levels.into_iter().enumerate() {
        let mut keep: Vec<Triangulation> = lvl
            .into_iter()
            .filter(|t| d2.get(&t.arcs).is_some_and(|&d| d as usize == k - i))
            .collect();
        keep.sort_unstable_by(|a, b| a.arcs.cmp(&b.arcs));
        layers.push(keep);
    }
    let mut edges = Vec::with_capacity(k);
    for i in 0..k {
        let next_index: HashMap<&ArcSet, u32> = layers[i + 1]
            .iter()
            .enumerate()
            .map(|(j, t)| (&t.arcs, j as u32))
            .collect();
        let mut layer_edges = Vec::with_capacity(layers[i].len());
        for t in &layers[i] {
            let mut outs = Vec::new();
            neighbors(config, t, constraint, |nb| {
                if let Some(&j) = next_index.get(&nb.arcs) {
                    outs.push(j);
                }
            });
            outs.sort_unstable();
            layer_edges.push(outs);
        }
        edges.push(layer_edges);
    }
    Ok(GeodesicDag { layers, edges })
}

/// Lazy enumeration of the geodesics of a DAG, each exactly once, in the
/// canonical order fixed by the arc-set encoding. Stops at `cap` and flags it.
pub struct GeodesicIter<'a> {
    dag: &'a GeodesicDag,
    stack: Vec<(usize, usize)>, // (node index in layer, next edge position)
    cap: usize,
    yielded: usize,
    truncated: bool,
    done: bool,
}

impl GeodesicDag {
    pub fn enumerate(&self, cap: usize) -> GeodesicIter<'_> {
        GeodesicIter {
            dag: self,
            stack: Vec::new(),
            cap,
            yielded: 0,
            truncated: false,
            done: self.layers[0].is_empty(),
        }
    }
}

impl GeodesicIter<'_> {
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    fn current_path(&self) -> FlipPath {
        let start = self.dag.layers[0][0].clone();
        let mut steps = Vec::with_capacity(self.stack.len());
        let mut prev = &self.dag.layers[0][self.stack[0].0];
        for (i, &(node, _)) in self.stack.iter().enumerate().skip(1) {
            let cur = &self.dag.layers[i][node];
            let rm = prev.arcs.single_difference(&cur.arcs).unwrap();
            let ins = cur.arcs.single_difference(&prev.arcs).unwrap();
            steps.push((rm, ins));
            prev = cur;
        }
        FlipPath { start, steps }
    }

    /// Advance the stack to the next complete geodesic.
    fn advance(&mut self) -> bool {
        let k = self.dag.length();
        if self.stack.is_empty() {
            self.stack.push((0, 0));
        } else {
            // Backtrack from a complete path.
            self.stack.pop();
            loop {
                if self.stack.is_empty() {
                    return false;
                }
                let depth = self.stack.len() - 1;
                let top = self.stack.last_mut().unwrap();
                top.1 += 1;
                if top.1 < self.dag.edges[depth][top.0].len() {
                    break;
                }
                self.stack.pop();
            }
            let (node, pos) = *self.stack.last().unwrap();
            let depth = self.stack.len() - 1;
            let next = self.dag.edges[depth][node][pos] as usize;
            self.stack.push((next, 0));
        }
        // Extend greedily down first edges.
        while self.stack.len() < k + 1 {
            let depth = self.stack.len() - 1;
            let (node, _) = *self.stack.last().unwrap();
            if self.dag.edges[depth][node].is_empty() {
                // Cannot happen in a well-formed geodesic DAG.
                return false;
            }
            let next = self.dag.edges[depth][node][0] as usize;
            self.stack.push((next, 0));
        }
        true
    }
}

impl Iterator for GeodesicIter<'_> {
    type Item = FlipPath;

    fn next(&mut self) -> Option<FlipPath> {
        if self.done {
            return None;
        }
        if self.yielded >= self.cap {
            self.truncated = true;
            self.done = true;
            return None;
        }
        if !self.advance() {
            self.done = true;
            return None;
        }
        self.yielded += 1;
        Some(self.current_path())
    }
}

/// Exact diameter by all-source BFS over the fully enumerated graph.
pub fn diameter(config: &PointConfig, limits: SearchLimits, mode: ExecMode) -> Result<usize> {
    let start = crate::geometry::shapes::any_triangulation(config);
    let reach = reachable_set(config, &start, None, limits)?;
    let n = reach.states.len();
    // CSR adjacency.
    let mut adj = Vec::new();
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0u32);
    for t in &reach.states {
        config.for_each_flip(t, |_, _, next| {
            adj.push(reach.index[&next.arcs]);
        });
        offsets.push(adj.len() as u32);
    }
    let eccentricity = |src: usize| -> usize {
        let mut dist = vec![u32::MAX; n];
        let mut queue = Vec::with_capacity(n);
        dist[src] = 0;
        queue.push(src as u32);
        let mut head = 0;
        let mut ecc = 0;
        while head < queue.len() {
            let u = queue[head] as usize;
            head += 1;
            let d = dist[u] + 1;
            for i in offsets[u]..offsets[u + 1] {
                let v = adj[i as usize] as usize;
                if dist[v] == u32::MAX {
                    dist[v] = d;
                    ecc = ecc.max(d as usize);
                    queue.push(v as u32);
                }
            }
        }
        ecc
    };
    let max = run_max(n, mode, eccentricity);
    Ok(max)
}

#[cfg(feature = "parallel")]
fn run_max(n: usize, mode: ExecMode, f: impl Fn(usize) -> usize + Sync + Send) -> usize {
    use rayon::prelude::*;
    match mode {
        ExecMode::Parallel => (0..n).into_par_iter().map(f).max().unwrap_or(0),
        ExecMode::Sequential => (0..n).map(f).max().unwrap_or(0),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_max(n: usize, _mode: ExecMode, f: impl Fn(usize) -> usize + Sync + Send) -> usize {
    (0..n).map(f).max().unwrap_or(0)
}

/// A path from `t1` to `t2` through the comb at `x`, built by flips that each
/// raise the degree of `x`. After cancellation its length never exceeds
/// 2(N-1) - deg_t1(x) - deg_t2(x).
pub fn comb_upper_bound_path(
    config: &PointConfig,
    t1: &Triangulation,
    t2: &Triangulation,
    x: PointId,
) -> Result<FlipPath> {
    let up = comb_half_path(config, t1, x)?;
    let down = comb_half_path(config, t2, x)?;
    let path = up.concat(&down.reversed())?.reduce();
    path.validate(config)?;
    Ok(path)
}

/// Flip `t` into the comb at `x`, one degree-raising flip at a time.
fn comb_half_path(config: &PointConfig, t: &Triangulation, x: PointId) -> Result<FlipPath> {
    let mut steps = Vec::new();
    let mut cur = t.clone();
    let full_degree = config.len() - 1;
    loop {
        let deg = degree_of(config, &cur, x);
        if deg == full_degree {
            break;
        }
        // Any flip whose replacement arc is incident to x raises the degree.
        let mut found = None;
        for arc in cur.arc_ids() {
            if config.is_boundary_arc(arc) || config.arc(arc).has_endpoint(x) {
                continue;
            }
            if let Ok(Some((ins, next))) = config.flip(&cur, arc) {
                if config.arc(ins).has_endpoint(x) {
                    found = Some((arc, ins, next));
                    break;
                }
            }
        }
        match found {
            Some((rm, ins, next)) => {
                steps.push((rm, ins));
                cur = next;
            }
            None => {
                return Err(Error::BadParameters(format!(
                    "no degree-raising flip toward the comb at {x}"
                )));
            }
        }
    }
    Ok(FlipPath { start: t.clone(), steps })
}

pub fn degree_of(config: &PointConfig, t: &Triangulation, x: PointId) -> usize {
    config.arcs_at(x).iter().filter(|&&id| t.contains(id)).count()
}

/// The quoted degree-based upper bound realized by `comb_upper_bound_path`.
pub fn comb_bound_value(config: &PointConfig, t1: &Triangulation, t2: &Triangulation, x: PointId) -> usize {
    2 * (config.len() - 1) - degree_of(config, t1, x) - degree_of(config, t2, x)
}
