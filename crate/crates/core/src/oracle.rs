//! Radius assignments that keep the network connected while minimising the
//! detectable coverage area.
//!
//! Three solvers produce ground-truth labels:
//!
//! * [`brute_force_mast`]: exact search over per-node candidate radii, limited
//!   to small node counts.
//! * [`mst`] + [`radii_from_tree`]: the minimum spanning tree approximation.
//! * [`local_search_mast`]: spanning-tree edge swaps that only accept strict
//!   area improvements, for instances beyond the exact budget.
//!
//! [`repair_radii`] projects arbitrary (for example predicted) radii back onto
//! the connected set.
//!
//! Solvers compare candidate areas on a shared point grid with integer hit
//! counts, so argmin decisions are exact, deterministic, and independent of
//! evaluation order.

use alloc::collections::BTreeSet;
use alloc::{format, vec, vec::Vec};
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{
    self, AreaMethod, Disk, DistanceMatrix, Point2, Topology, MIN_AREA_SAMPLES,
};
use crate::seeds;

/// Where a radius assignment came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadiusSource {
    BruteForce,
    Mst,
    LocalSearch,
    ModelPrediction,
    Repaired,
}

impl RadiusSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            RadiusSource::BruteForce => "brute_force",
            RadiusSource::Mst => "mst",
            RadiusSource::LocalSearch => "local_search",
            RadiusSource::ModelPrediction => "model_prediction",
            RadiusSource::Repaired => "repaired",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "brute_force" => Ok(RadiusSource::BruteForce),
            "mst" => Ok(RadiusSource::Mst),
            "local_search" => Ok(RadiusSource::LocalSearch),
            "model_prediction" => Ok(RadiusSource::ModelPrediction),
            "repaired" => Ok(RadiusSource::Repaired),
            other => Err(Error::invalid(format!("unknown radius source {other:?}"))),
        }
    }
}

/// Per-node radii with their provenance.
///
/// For every source except `ModelPrediction` the radii are nonnegative and the
/// induced link graph is connected; predictions are only required to be finite
/// (a regressor may emit negative values, which [`repair_radii`] clamps).
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusAssignment {
    radii: Vec<f64>,
    source: RadiusSource,
}

impl RadiusAssignment {
    pub fn new(source: RadiusSource, radii: Vec<f64>, topology: &Topology) -> Result<Self> {
        if radii.len() != topology.len() {
            return Err(Error::invalid(format!(
                "{} radii for {} nodes",
                radii.len(),
                topology.len()
            )));
        }
        if source == RadiusSource::ModelPrediction {
            return Self::prediction(radii);
        }
        for &r in &radii {
            if !r.is_finite() || r < 0.0 {
                return Err(Error::invalid(format!("radius must be finite and >= 0, got {r}")));
            }
        }
        let adj = geometry::induced_adjacency(topology, &radii)?;
        if !geometry::is_connected(&adj) {
            return Err(Error::invalid(format!(
                "{} assignment does not induce a connected graph",
                source.as_str()
            )));
        }
        Ok(RadiusAssignment { radii, source })
    }

    /// Raw model output; finite but otherwise unconstrained.
    pub fn prediction(radii: Vec<f64>) -> Result<Self> {
        if radii.iter().any(|r| !r.is_finite()) {
            return Err(Error::invalid("prediction radii must be finite"));
        }
        Ok(RadiusAssignment { radii, source: RadiusSource::ModelPrediction })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn source(&self) -> RadiusSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn into_radii(self) -> Vec<f64> {
        self.radii
    }

    /// Coverage disks of this assignment over `topology`.
    pub fn disks(&self, topology: &Topology) -> Result<Vec<Disk>> {
        if self.radii.len() != topology.len() {
            return Err(Error::invalid("assignment and topology length differ"));
        }
        self.radii
            .iter()
            .zip(topology.positions())
            .map(|(&r, &c)| Disk::new(c, r.max(0.0)))
            .collect()
    }
}

/// A spanning tree over `n` nodes, stored as normalised `(i, j)` edges
/// with `i < j`, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SpanningTree {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("spanning tree needs at least 2 nodes"));
        }
        if edges.len() != n - 1 {
            return Err(Error::invalid(format!(
                "spanning tree over {n} nodes needs {} edges, got {}",
                n - 1,
                edges.len()
            )));
        }
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        let mut dsu = DisjointSet::new(n);
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::invalid(format!("edge ({a}, {b}) out of range for {n} nodes")));
            }
            if a == b {
                return Err(Error::invalid(format!("self-loop edge ({a}, {a})")));
            }
            if !dsu.union(a, b) {
                return Err(Error::invalid(format!("edge ({a}, {b}) closes a cycle")));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        Ok(SpanningTree { n, edges: norm })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// Union-find with path compression and union by size.
struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet { parent: (0..n).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; false if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }
}

/// Minimum spanning tree of the complete Euclidean graph (Kruskal).
/// Equal-length edges are taken in lexicographic `(i, j)` order.
pub fn mst(topology: &Topology) -> Result<SpanningTree> {
    let n = topology.len();
    if n < 2 {
        return Err(Error::invalid("minimum spanning tree needs at least 2 nodes"));
    }
    let dist = geometry::pairwise_distances(topology);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((i, j));
        }
    }
    edges.sort_by(|&(a, b), &(c, d)| {
        dist.get(a, b)
            .partial_cmp(&dist.get(c, d))
            .expect("finite distances")
            .then((a, b).cmp(&(c, d)))
    });
    let mut dsu = DisjointSet::new(n);
    let mut tree = Vec::with_capacity(n - 1);
    for (i, j) in edges {
        if dsu.union(i, j) {
            tree.push((i, j));
            if tree.len() == n - 1 {
                break;
            }
        }
    }
    SpanningTree::new(n, tree)
}

/// Smallest per-node radii that realise every edge of `tree`:
/// each node reaches its farthest tree neighbour.
pub fn radii_from_tree(topology: &Topology, tree: &SpanningTree) -> Result<RadiusAssignment> {
    if tree.n() != topology.len() {
        return Err(Error::invalid(format!(
            "tree over {} nodes does not match topology of {}",
            tree.n(),
            topology.len()
        )));
    }
    let dist = geometry::pairwise_distances(topology);
    let radii = tree_radii(&dist, tree.edges());
    RadiusAssignment::new(RadiusSource::Mst, radii, topology)
}

fn tree_radii(dist: &DistanceMatrix, edges: &[(usize, usize)]) -> Vec<f64> {
    let mut radii = vec![0.0_f64; dist.n()];
    for &(i, j) in edges {
        let d = dist.get(i, j);
        radii[i] = radii[i].max(d);
        radii[j] = radii[j].max(d);
    }
    radii
}

/// Node count above which [`brute_force_mast`] refuses to run.
pub const MAX_BRUTE_FORCE_NODES: usize = 7;

/// Exact minimiser of total coverage area subject to connectivity.
///
/// Each node's radius is restricted to the distances to the other nodes (an
/// optimal radius strictly between two such distances could shrink to the
/// lower one without losing links), so the search space is finite. Every
/// connected candidate is scored; ties go to the smaller sum of squared
/// radii, then to lexicographically smaller radii.
pub fn brute_force_mast(
    topology: &Topology,
    area_method: AreaMethod,
    samples: u64,
    seed: u64,
) -> Result<RadiusAssignment> {
    let n = topology.len();
    if n < 2 {
        return Err(Error::invalid("exact solver needs at least 2 nodes"));
    }
    if n > MAX_BRUTE_FORCE_NODES {
        return Err(Error::SearchBudget(format!(
            "exact search over {n} nodes exceeds the {MAX_BRUTE_FORCE_NODES}-node budget \
             ((N-1)^N candidates); use local_search_mast"
        )));
    }
    warn_degenerate(topology);
    let dist = geometry::pairwise_distances(topology);
    if n == 2 {
        let d = dist.get(0, 1);
        return RadiusAssignment::new(RadiusSource::BruteForce, vec![d, d], topology);
    }

    // Distinct candidate radii per node, ascending.
    let candidates: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut c: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| dist.get(i, j)).collect();
            c.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
            c.dedup();
            c
        })
        .collect();

    let points = SharedPoints::new(topology, &dist, area_method, samples, seed)?;
    // Coverage bitset per (node, candidate radius).
    let masks: Vec<Vec<Vec<u64>>> = (0..n)
        .map(|i| candidates[i].iter().map(|&r| points.disk_mask(i, r)).collect())
        .collect();

    let mut idx = vec![0_usize; n];
    let mut radii = vec![0.0; n];
    let mut union = vec![0_u64; points.words()];
    let mut best: Option<(u64, f64, Vec<f64>)> = None;
    loop {
        for i in 0..n {
            radii[i] = candidates[i][idx[i]];
        }
        if connected_under(&dist, &radii) {
            union.iter_mut().for_each(|w| *w = 0);
            for i in 0..n {
                for (w, m) in union.iter_mut().zip(&masks[i][idx[i]]) {
                    *w |= m;
                }
            }
            let hits = union.iter().map(|w| w.count_ones() as u64).sum();
            let sum_sq = radii.iter().map(|r| r * r).sum::<f64>();
            if best
                .as_ref()
                .map(|b| candidate_less(hits, sum_sq, &radii, b.0, b.1, &b.2))
                .unwrap_or(true)
            {
                best = Some((hits, sum_sq, radii.clone()));
            }
        }
        // Odometer step over the candidate index vector.
        let mut pos = n;
        while pos > 0 {
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < candidates[pos].len() {
                break;
            }
            idx[pos] = 0;
            if pos == 0 {
                let (_, _, radii) = best.expect("complete graph candidate is always connected");
                return RadiusAssignment::new(RadiusSource::BruteForce, radii, topology);
            }
        }
    }
}

/// Spanning-tree local search: start from the MST radii, then repeatedly try
/// replacing one tree edge with another edge that reconnects the two halves,
/// keeping a swap only if the coverage area strictly shrinks.
///
/// `max_iters` bounds the number of accepted swaps. The result never covers
/// more area than the MST-derived assignment.
pub fn local_search_mast(
    topology: &Topology,
    max_iters: u64,
    area_method: AreaMethod,
    samples: u64,
    seed: u64,
) -> Result<RadiusAssignment> {
    let n = topology.len();
    if n < 2 {
        return Err(Error::invalid("local search needs at least 2 nodes"));
    }
    warn_degenerate(topology);
    let dist = geometry::pairwise_distances(topology);
    if n == 2 {
        let d = dist.get(0, 1);
        return RadiusAssignment::new(RadiusSource::LocalSearch, vec![d, d], topology);
    }

    let points = SharedPoints::new(topology, &dist, area_method, samples, seed)?;
    let mut tree: Vec<(usize, usize)> = mst(topology)?.edges().to_vec();
    let mut radii = tree_radii(&dist, &tree);
    let mut hits = points.hits(&radii);

    for _ in 0..max_iters {
        let mut best: Option<(u64, f64, Vec<f64>, Vec<(usize, usize)>)> = None;
        for drop_idx in 0..tree.len() {
            let dropped = tree[drop_idx];
            let side = split_sides(n, &tree, drop_idx);
            for u in 0..n {
                for v in (u + 1)..n {
                    if (u, v) == dropped || side[u] == side[v] {
                        continue;
                    }
                    let mut next_tree = tree.clone();
                    next_tree[drop_idx] = (u, v);
                    next_tree.sort_unstable();
                    let next_radii = tree_radii(&dist, &next_tree);
                    let next_hits = points.hits(&next_radii);
                    let sum_sq = next_radii.iter().map(|r| r * r).sum::<f64>();
                    if best
                        .as_ref()
                        .map(|b| candidate_less(next_hits, sum_sq, &next_radii, b.0, b.1, &b.2))
                        .unwrap_or(true)
                    {
                        best = Some((next_hits, sum_sq, next_radii, next_tree));
                    }
                }
            }
        }
        match best {
            Some((best_hits, _, best_radii, best_tree)) if best_hits < hits => {
                tree = best_tree;
                radii = best_radii;
                hits = best_hits;
            }
            _ => break,
        }
    }
    RadiusAssignment::new(RadiusSource::LocalSearch, radii, topology)
}

/// Component id (false/true) per node after deleting edge `drop_idx`
/// from `tree`.
fn split_sides(n: usize, tree: &[(usize, usize)], drop_idx: usize) -> Vec<bool> {
    let mut dsu = DisjointSet::new(n);
    for (k, &(a, b)) in tree.iter().enumerate() {
        if k != drop_idx {
            dsu.union(a, b);
        }
    }
    let root = dsu.find(tree[drop_idx].0);
    (0..n).map(|v| dsu.find(v) == root).collect()
}

/// Projects radii onto the connected set: clamps negatives to zero, then
/// raises the radii of the closest pair of nodes in different components
/// until one component remains. Radii are never lowered; inputs that are
/// already feasible come back unchanged.
pub fn repair_radii(topology: &Topology, assignment: &RadiusAssignment) -> Result<RadiusAssignment> {
    let n = topology.len();
    if assignment.len() != n {
        return Err(Error::invalid(format!(
            "{} radii for {} nodes",
            assignment.len(),
            n
        )));
    }
    let dist = geometry::pairwise_distances(topology);
    let mut radii: Vec<f64> = assignment.radii().iter().map(|&r| r.max(0.0)).collect();
    let mut changed = radii
        .iter()
        .zip(assignment.radii())
        .any(|(&a, &b)| a.to_bits() != b.to_bits());
    while !connected_under(&dist, &radii) {
        let mut comp = DisjointSet::new(n);
        for i in 0..n {
            for j in (i + 1)..n {
                if geometry::link_exists(dist.get(i, j), radii[i], radii[j]) {
                    comp.union(i, j);
                }
            }
        }
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..n {
            for j in (i + 1)..n {
                if comp.find(i) == comp.find(j) {
                    continue;
                }
                let d = dist.get(i, j);
                if best.map(|(bd, _, _)| d < bd).unwrap_or(true) {
                    best = Some((d, i, j));
                }
            }
        }
        let (d, i, j) = best.expect("disconnected graph has a cross-component pair");
        radii[i] = radii[i].max(d);
        radii[j] = radii[j].max(d);
        changed = true;
    }
    if !changed {
        return Ok(assignment.clone());
    }
    RadiusAssignment::new(RadiusSource::Repaired, radii, topology)
}

/// True iff `radii` induce a connected link graph (cheap check against a
/// precomputed distance matrix).
fn connected_under(dist: &DistanceMatrix, radii: &[f64]) -> bool {
    let n = dist.n();
    if n <= 1 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0_usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j] && geometry::link_exists(dist.get(i, j), radii[i], radii[j]) {
                seen[j] = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    count == n
}

/// `(hits, sum of squared radii, radii)` ordering used for every solver
/// argmin: fewer covered points first, then smaller energy, then
/// lexicographically smaller radii.
fn candidate_less(
    hits: u64,
    sum_sq: f64,
    radii: &[f64],
    best_hits: u64,
    best_sum_sq: f64,
    best_radii: &[f64],
) -> bool {
    match hits.cmp(&best_hits) {
        core::cmp::Ordering::Less => true,
        core::cmp::Ordering::Greater => false,
        core::cmp::Ordering::Equal => match sum_sq.partial_cmp(&best_sum_sq).expect("finite sums") {
            core::cmp::Ordering::Less => true,
            core::cmp::Ordering::Greater => false,
            core::cmp::Ordering::Equal => radii < best_radii,
        },
    }
}

fn warn_degenerate(topology: &Topology) {
    if topology.min_pairwise_distance() == Some(0.0) {
        log::warn!("topology contains duplicate node positions");
    }
}

/// Shared evaluation points for one solver run. Every candidate assignment is
/// scored as the number of points inside its disk union, over a bounding box
/// that covers the largest possible assignment (each node at its farthest
/// peer distance). Integer counts make area comparisons exact.
struct SharedPoints {
    /// Squared distance from each point to each node, node-major.
    dist_sq: Vec<f64>,
    point_count: usize,
    n: usize,
}

impl SharedPoints {
    fn new(
        topology: &Topology,
        dist: &DistanceMatrix,
        method: AreaMethod,
        samples: u64,
        seed: u64,
    ) -> Result<Self> {
        if method == AreaMethod::Exact {
            return Err(Error::unsupported(format!(
                "exact areas cover at most 2 disks; solver instances have {} nodes",
                topology.len()
            )));
        }
        if samples < MIN_AREA_SAMPLES {
            return Err(Error::invalid(format!(
                "solver area evaluation needs >= {MIN_AREA_SAMPLES} samples, got {samples}"
            )));
        }
        let n = topology.len();
        let envelope: Vec<Disk> = (0..n)
            .map(|i| Disk::new(topology.position(i), dist.row_max(i)))
            .collect::<Result<_>>()?;
        let (xmin, ymin, xmax, ymax) = geometry::bounding_box(&envelope);
        let width = xmax - xmin;
        let height = ymax - ymin;
        let mut points: Vec<Point2> = Vec::new();
        match method {
            AreaMethod::Grid => {
                let (gx, gy) = geometry::grid_dims(width, height, samples);
                points.reserve((gx * gy) as usize);
                for iy in 0..gy {
                    let y = ymin + (iy as f64 + 0.5) * height / gy as f64;
                    for ix in 0..gx {
                        let x = xmin + (ix as f64 + 0.5) * width / gx as f64;
                        points.push(Point2 { x, y });
                    }
                }
            }
            AreaMethod::MonteCarlo => {
                let mut rng = seeds::rng_from_seed(seed);
                points.reserve(samples as usize);
                for _ in 0..samples {
                    let x = xmin + rng.gen_range(0.0..1.0) * width;
                    let y = ymin + rng.gen_range(0.0..1.0) * height;
                    points.push(Point2 { x, y });
                }
            }
            AreaMethod::Exact => unreachable!(),
        }
        let point_count = points.len();
        let mut dist_sq = Vec::with_capacity(n * point_count);
        for i in 0..n {
            let c = topology.position(i);
            dist_sq.extend(points.iter().map(|p| p.distance_sq(&c)));
        }
        Ok(SharedPoints { dist_sq, point_count, n })
    }

    fn words(&self) -> usize {
        self.point_count.div_ceil(64)
    }

    /// Bitset of points covered by a disk of radius `r` at node `i`.
    fn disk_mask(&self, i: usize, r: f64) -> Vec<u64> {
        let rr = r * r;
        let row = &self.dist_sq[i * self.point_count..(i + 1) * self.point_count];
        let mut mask = vec![0_u64; self.words()];
        for (p, &dsq) in row.iter().enumerate() {
            if dsq <= rr {
                mask[p / 64] |= 1 << (p % 64);
            }
        }
        mask
    }

    /// Points covered by the union of per-node disks with the given radii.
    fn hits(&self, radii: &[f64]) -> u64 {
        debug_assert_eq!(radii.len(), self.n);
        let rr: Vec<f64> = radii.iter().map(|r| r * r).collect();
        let mut hits = 0;
        for p in 0..self.point_count {
            for i in 0..self.n {
                if self.dist_sq[i * self.point_count + p] <= rr[i] {
                    hits += 1;
                    break;
                }
            }
        }
        hits
    }
}

/// Distinct spanning trees reachable from `tree` by one edge swap, used by
/// tests to cross-check the local search move set.
#[allow(dead_code)]
fn neighbour_trees(n: usize, tree: &[(usize, usize)]) -> BTreeSet<Vec<(usize, usize)>> {
    let mut out = BTreeSet::new();
    for drop_idx in 0..tree.len() {
        let side = split_sides(n, tree, drop_idx);
        for u in 0..n {
            for v in (u + 1)..n {
                if (u, v) == tree[drop_idx] || side[u] == side[v] {
                    continue;
                }
                let mut next = tree.to_vec();
                next[drop_idx] = (u, v);
                next.sort_unstable();
                out.insert(next);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use geometry::union_area;

    fn topo(coords: &[(f64, f64)]) -> Topology {
        Topology::from_coords(coords).unwrap()
    }

    fn grid_area(topology: &Topology, assignment: &RadiusAssignment) -> geometry::AreaEstimate {
        let disks = assignment.disks(topology).unwrap();
        union_area(&disks, AreaMethod::Grid, 0, 250_000).unwrap()
    }

    #[test]
    fn mst_collinear_unique() {
        let t = topo(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        assert_eq!(mst(&t).unwrap().edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn mst_tie_break_lexicographic() {
        // Right isosceles: sides 0-1 and 0-2 both length exactly 1, the tie
        // resolves to the lexicographically first edges.
        let t = topo(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        assert_eq!(mst(&t).unwrap().edges(), &[(0, 1), (0, 2)]);
    }

    #[test]
    fn mst_square_avoids_diagonals() {
        let t = topo(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]);
        let tree = mst(&t).unwrap();
        for &(i, j) in tree.edges() {
            assert_relative_eq!(t.position(i).distance(&t.position(j)), 1.0);
        }
        assert_eq!(tree.edges(), &[(0, 1), (0, 2), (1, 3)]);
    }

    #[test]
    fn mst_needs_two_nodes() {
        assert!(mst(&topo(&[(0.0, 0.0)])).is_err());
    }

    #[test]
    fn spanning_tree_validation() {
        assert!(SpanningTree::new(3, vec![(0, 1), (1, 2)]).is_ok());
        assert!(SpanningTree::new(3, vec![(0, 1)]).is_err());
        assert!(SpanningTree::new(3, vec![(0, 1), (0, 1)]).is_err());
        assert!(SpanningTree::new(3, vec![(0, 1), (1, 3)]).is_err());
        assert!(SpanningTree::new(3, vec![(0, 1), (2, 2)]).is_err());
    }

    #[test]
    fn tree_radii_two_nodes() {
        let t = topo(&[(0.0, 0.0), (3.0, 4.0)]);
        let tree = SpanningTree::new(2, vec![(0, 1)]).unwrap();
        let a = radii_from_tree(&t, &tree).unwrap();
        assert_eq!(a.radii(), &[5.0, 5.0]);
        assert_eq!(a.source(), RadiusSource::Mst);
    }

    #[test]
    fn tree_radii_path_farthest_neighbour() {
        let t = topo(&[(0.0, 0.0), (1.0, 0.0), (3.0, 0.0)]);
        let tree = SpanningTree::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(radii_from_tree(&t, &tree).unwrap().radii(), &[1.0, 2.0, 2.0]);
    }

    #[test]
    fn tree_radii_star() {
        let t = topo(&[(0.0, 0.0), (1.0, 0.0), (0.0, 2.0), (-3.0, 0.0)]);
        let tree = SpanningTree::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(radii_from_tree(&t, &tree).unwrap().radii(), &[3.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn tree_radii_rejects_mismatched_tree() {
        let t = topo(&[(0.0, 0.0), (1.0, 0.0)]);
        let tree = SpanningTree::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert!(radii_from_tree(&t, &tree).is_err());
    }

    #[test]
    fn two_node_solvers_agree() {
        let t = topo(&[(0.0, 0.0), (3.0, 0.0)]);
        let bf = brute_force_mast(&t, AreaMethod::Grid, 10_000, 0).unwrap();
        let ls = local_search_mast(&t, 10, AreaMethod::Grid, 10_000, 0).unwrap();
        let tr = radii_from_tree(&t, &mst(&t).unwrap()).unwrap();
        assert_eq!(bf.radii(), &[3.0, 3.0]);
        assert_eq!(ls.radii(), &[3.0, 3.0]);
        assert_eq!(tr.radii(), &[3.0, 3.0]);
        assert_eq!(bf.source(), RadiusSource::BruteForce);
        assert_eq!(ls.source(), RadiusSource::LocalSearch);
    }

    #[test]
    fn brute_force_collinear() {
        let t = topo(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        let bf = brute_force_mast(&t, AreaMethod::Grid, 40_000, 0).unwrap();
        assert_eq!(bf.radii(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn local_search_collinear_is_optimal() {
        let t = topo(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        let ls = local_search_mast(&t, 50, AreaMethod::Grid, 40_000, 0).unwrap();
        assert_eq!(ls.radii(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn brute_force_right_isosceles() {
        // Sides 1, 1, sqrt(2): the min-area connected assignment is the star
        // around the right-angle corner.
        let t = topo(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let bf = brute_force_mast(&t, AreaMethod::Grid, 40_000, 0).unwrap();
        assert_eq!(bf.radii(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn brute_force_budget_and_size_errors() {
        let coords: Vec<(f64, f64)> = (0..8).map(|i| (i as f64, 0.0)).collect();
        assert!(matches!(
            brute_force_mast(&topo(&coords), AreaMethod::Grid, 10_000, 0),
            Err(Error::SearchBudget(_))
        ));
        assert!(brute_force_mast(&topo(&[(0.0, 0.0)]), AreaMethod::Grid, 10_000, 0).is_err());
    }

    #[test]
    fn exact_method_rejected_beyond_two_nodes() {
        let t = topo(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        assert!(matches!(
            brute_force_mast(&t, AreaMethod::Exact, 0, 0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn solver_dominance_chain() {
        let mut rng = seeds::stream_rng(42, 0);
        let coords: Vec<(f64, f64)> =
            (0..5).map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0))).collect();
        let t = topo(&coords);
        let bf = brute_force_mast(&t, AreaMethod::Grid, 100_000, 0).unwrap();
        let ls = local_search_mast(&t, 100, AreaMethod::Grid, 100_000, 0).unwrap();
        let tr = radii_from_tree(&t, &mst(&t).unwrap()).unwrap();
        let (a_bf, a_ls, a_tr) = (grid_area(&t, &bf), grid_area(&t, &ls), grid_area(&t, &tr));
        let slack = |a: &geometry::AreaEstimate, b: &geometry::AreaEstimate| {
            3.0 * (a.std_error + b.std_error)
        };
        assert!(a_bf.value <= a_ls.value + slack(&a_bf, &a_ls));
        assert!(a_ls.value <= a_tr.value + slack(&a_ls, &a_tr));
    }

    #[test]
    fn monte_carlo_solver_matches_grid_solver() {
        let mut rng = seeds::stream_rng(9, 0);
        let coords: Vec<(f64, f64)> =
            (0..4).map(|_| (rng.gen_range(0.0..50.0), rng.gen_range(0.0..50.0))).collect();
        let t = topo(&coords);
        let g = brute_force_mast(&t, AreaMethod::Grid, 100_000, 0).unwrap();
        let m = brute_force_mast(&t, AreaMethod::MonteCarlo, 100_000, 3).unwrap();
        assert_eq!(g.radii(), m.radii());
    }

    #[test]
    fn scale_invariance_power_of_two() {
        let mut rng = seeds::stream_rng(7, 0);
        let coords: Vec<(f64, f64)> =
            (0..5).map(|_| (rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0))).collect();
        let scaled: Vec<(f64, f64)> = coords.iter().map(|&(x, y)| (4.0 * x, 4.0 * y)).collect();
        let a = brute_force_mast(&topo(&coords), AreaMethod::Grid, 40_000, 0).unwrap();
        let b = brute_force_mast(&topo(&scaled), AreaMethod::Grid, 40_000, 0).unwrap();
        for (ra, rb) in a.radii().iter().zip(b.radii()) {
            assert_eq!(4.0 * ra, *rb);
        }
    }

    #[test]
    fn repair_identity_on_connected() {
        let t = topo(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        let a = RadiusAssignment::prediction(vec![1.0, 1.0, 1.0]).unwrap();
        let r = repair_radii(&t, &a).unwrap();
        assert_eq!(r, a);
    }

    #[test]
    fn repair_two_nodes_forced() {
        let t = topo(&[(0.0, 0.0), (1.0, 0.0)]);
        let a = RadiusAssignment::prediction(vec![0.0, 0.0]).unwrap();
        let r = repair_radii(&t, &a).unwrap();
        assert_eq!(r.radii(), &[1.0, 1.0]);
        assert_eq!(r.source(), RadiusSource::Repaired);
    }

    #[test]
    fn repair_joins_nearest_component() {
        let t = topo(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        let a = RadiusAssignment::prediction(vec![1.0, 1.0, 0.0]).unwrap();
        let r = repair_radii(&t, &a).unwrap();
        assert_eq!(r.radii(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn repair_clamps_negative_predictions() {
        let t = topo(&[(0.0, 0.0), (1.0, 0.0)]);
        let a = RadiusAssignment::prediction(vec![-0.5, 2.0]).unwrap();
        let r = repair_radii(&t, &a).unwrap();
        assert_eq!(r.radii(), &[1.0, 2.0]);
    }

    #[test]
    fn repair_is_idempotent() {
        let mut rng = seeds::stream_rng(3, 0);
        let coords: Vec<(f64, f64)> =
            (0..6).map(|_| (rng.gen_range(0.0..40.0), rng.gen_range(0.0..40.0))).collect();
        let t = topo(&coords);
        let preds: Vec<f64> = (0..6).map(|_| rng.gen_range(-5.0..10.0)).collect();
        let once = repair_radii(&t, &RadiusAssignment::prediction(preds).unwrap()).unwrap();
        let twice = repair_radii(&t, &once).unwrap();
        assert_eq!(once, twice);
        let adj = geometry::induced_adjacency(&t, once.radii()).unwrap();
        assert!(geometry::is_connected(&adj));
    }

    #[test]
    fn assignment_validation() {
        let t = topo(&[(0.0, 0.0), (2.0, 0.0)]);
        assert!(RadiusAssignment::new(RadiusSource::Mst, vec![2.0, 2.0], &t).is_ok());
        assert!(RadiusAssignment::new(RadiusSource::Mst, vec![0.5, 0.5], &t).is_err());
        assert!(RadiusAssignment::new(RadiusSource::Mst, vec![-1.0, 2.0], &t).is_err());
        assert!(RadiusAssignment::prediction(vec![-1.0, 0.3]).is_ok());
        assert!(RadiusAssignment::prediction(vec![f64::NAN]).is_err());
    }

    #[test]
    fn radius_source_round_trip() {
        for s in [
            RadiusSource::BruteForce,
            RadiusSource::Mst,
            RadiusSource::LocalSearch,
            RadiusSource::ModelPrediction,
            RadiusSource::Repaired,
        ] {
            assert_eq!(RadiusSource::parse(s.as_str()).unwrap(), s);
        }
        assert!(RadiusSource::parse("median").is_err());
    }

    #[test]
    fn neighbour_trees_cover_all_for_triangle() {
        // A triangle has exactly 3 spanning trees; from any one, the swap
        // neighbourhood is the other 2.
        let tree = vec![(0, 1), (1, 2)];
        let nbrs = neighbour_trees(3, &tree);
        assert_eq!(nbrs.len(), 2);
        assert!(nbrs.contains(&vec![(0, 1), (0, 2)]));
        assert!(nbrs.contains(&vec![(0, 2), (1, 2)]));
    }
}
