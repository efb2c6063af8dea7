//! Euclidean primitives of the system model: distances, coverage disks,
//! union-of-disks areas, link predicates, and transmission power.
//!
//! All lengths are abstract meters in the plane; areas are square meters.
//! Stochastic estimators take an explicit seed and report a standard error so
//! callers can compare estimates across methods.

use alloc::{format, vec, vec::Vec};
use rand::Rng;

use crate::error::{Error, Result};
use crate::math;
use crate::seeds;

/// A point in the 2-D operation area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::invalid(format!("non-finite coordinate ({x}, {y})")));
        }
        Ok(Point2 { x, y })
    }

    pub fn distance(&self, other: &Point2) -> f64 {
        math::hypot(self.x - other.x, self.y - other.y)
    }

    pub fn distance_sq(&self, other: &Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// A circular coverage region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub center: Point2,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Point2, radius: f64) -> Result<Self> {
        if !radius.is_finite() || radius < 0.0 {
            return Err(Error::invalid(format!("disk radius must be finite and >= 0, got {radius}")));
        }
        Ok(Disk { center, radius })
    }

    pub fn area(&self) -> f64 {
        core::f64::consts::PI * self.radius * self.radius
    }

    /// Boundary-inclusive membership test.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let dx = x - self.center.x;
        let dy = y - self.center.y;
        dx * dx + dy * dy <= self.radius * self.radius
    }
}

/// Node locations of one network snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    positions: Vec<Point2>,
}

impl Topology {
    pub fn new(positions: Vec<Point2>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::invalid("topology needs at least one node"));
        }
        Ok(Topology { positions })
    }

    pub fn from_coords(coords: &[(f64, f64)]) -> Result<Self> {
        let positions = coords
            .iter()
            .map(|&(x, y)| Point2::new(x, y))
            .collect::<Result<Vec<_>>>()?;
        Topology::new(positions)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Point2] {
        &self.positions
    }

    pub fn position(&self, i: usize) -> Point2 {
        self.positions[i]
    }

    /// Smallest inter-node distance, or `None` for a single node. Zero means
    /// duplicate points; those stay representable but generation rejects them.
    pub fn min_pairwise_distance(&self) -> Option<f64> {
        let n = self.positions.len();
        if n < 2 {
            return None;
        }
        let mut best = f64::INFINITY;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = self.positions[i].distance(&self.positions[j]);
                if d < best {
                    best = d;
                }
            }
        }
        Some(best)
    }
}

/// Radio-channel constants of the transmission-power law.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelParams {
    pub snr_target: f64,
    pub noise_density: f64,
    pub path_loss_exponent: f64,
}

impl ChannelParams {
    pub fn new(snr_target: f64, noise_density: f64, path_loss_exponent: f64) -> Result<Self> {
        for (name, v) in [
            ("snr_target", snr_target),
            ("noise_density", noise_density),
            ("path_loss_exponent", path_loss_exponent),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::invalid(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        if !(2.0..=6.0).contains(&path_loss_exponent) {
            log::warn!("path-loss exponent {path_loss_exponent} is outside the typical [2, 6] range");
        }
        Ok(ChannelParams { snr_target, noise_density, path_loss_exponent })
    }
}

/// Symmetric matrix of pairwise node distances with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Largest entry in row `i` (the farthest node from `i`).
    pub fn row_max(&self, i: usize) -> f64 {
        let row = &self.data[i * self.n..(i + 1) * self.n];
        row.iter().fold(0.0_f64, |acc, &d| acc.max(d))
    }
}

/// Boolean adjacency with explicit diagonal, stored dense.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    n: usize,
    data: Vec<bool>,
}

impl AdjacencyMatrix {
    pub fn empty(n: usize) -> Self {
        AdjacencyMatrix { n, data: vec![false; n * n] }
    }

    pub fn complete_with_self_loops(n: usize) -> Self {
        AdjacencyMatrix { n, data: vec![true; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.n + j]
    }

    /// Sets `(i, j)` and `(j, i)`.
    pub fn set_sym(&mut self, i: usize, j: usize, value: bool) {
        self.data[i * self.n + j] = value;
        self.data[j * self.n + i] = value;
    }

    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn diagonal_all_true(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i))
    }

    /// Copy with every self-loop set.
    pub fn with_self_loops(&self) -> Self {
        let mut out = self.clone();
        for i in 0..out.n {
            out.data[i * out.n + i] = true;
        }
        out
    }

    /// Row degree counting the diagonal entry if set.
    pub fn degree(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| self.get(i, j)).count()
    }
}

/// How a union-of-disks area is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AreaMethod {
    /// Closed form; supported for one or two disks only.
    Exact,
    /// Cell-center rasterisation of the bounding box.
    Grid,
    /// Uniform rejection sampling over the bounding box.
    MonteCarlo,
}

/// An area value with its uncertainty.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaEstimate {
    pub value: f64,
    /// Zero for exact answers. For the grid method this is the binomial bound
    /// of an equally sized random sample, which overstates the actual
    /// discretisation error.
    pub std_error: f64,
    pub method: AreaMethod,
    pub sample_count: u64,
}

/// Minimum number of samples accepted by the stochastic area methods.
pub const MIN_AREA_SAMPLES: u64 = 10_000;

/// All pairwise distances of a topology.
///
/// The result is symmetric with a zero diagonal; single-node topologies give
/// a 1x1 zero matrix.
pub fn pairwise_distances(topology: &Topology) -> DistanceMatrix {
    let n = topology.len();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = topology.position(i).distance(&topology.position(j));
            data[i * n + j] = d;
            data[j * n + i] = d;
        }
    }
    DistanceMatrix { n, data }
}

/// Power needed to close a link of length `distance`:
/// `snr_target * noise_density * distance^eta`.
pub fn tx_power(channel: &ChannelParams, distance: f64) -> Result<f64> {
    if !distance.is_finite() || distance <= 0.0 {
        return Err(Error::domain(format!("tx distance must be > 0, got {distance}")));
    }
    Ok(channel.snr_target * channel.noise_density * math::powf(distance, channel.path_loss_exponent))
}

/// A link exists iff the distance is within both endpoint radii
/// (boundary inclusive).
pub fn link_exists(d_ij: f64, r_i: f64, r_j: f64) -> bool {
    d_ij <= r_i.min(r_j)
}

/// Link graph induced by per-node radii: edge `(i, j)` iff
/// `link_exists(d_ij, r_i, r_j)`; no self-loops.
pub fn induced_adjacency(topology: &Topology, radii: &[f64]) -> Result<AdjacencyMatrix> {
    let n = topology.len();
    if radii.len() != n {
        return Err(Error::invalid(format!(
            "radii length {} does not match node count {n}",
            radii.len()
        )));
    }
    let mut adj = AdjacencyMatrix::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let d = topology.position(i).distance(&topology.position(j));
            adj.set_sym(i, j, link_exists(d, radii[i], radii[j]));
        }
    }
    Ok(adj)
}

/// True iff the undirected graph is one connected component. Diagonal entries
/// are ignored. Trivially true for zero or one node.
pub fn is_connected(adjacency: &AdjacencyMatrix) -> bool {
    let n = adjacency.n();
    if n <= 1 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0_usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if j != i && adjacency.get(i, j) && !seen[j] {
                seen[j] = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    count == n
}

/// Area of the union of `disks`.
///
/// `Exact` handles one disk (`pi r^2`) and two disks (lens subtraction);
/// `Grid` rasterises the tight bounding box at a resolution derived from
/// `samples`; `MonteCarlo` samples the box uniformly, seeded by `rng_seed`.
pub fn union_area(
    disks: &[Disk],
    method: AreaMethod,
    rng_seed: u64,
    samples: u64,
) -> Result<AreaEstimate> {
    if disks.is_empty() {
        return Err(Error::invalid("union area of zero disks"));
    }
    match method {
        AreaMethod::Exact => exact_union(disks),
        AreaMethod::Grid => {
            check_samples(samples)?;
            Ok(grid_union(disks, samples))
        }
        AreaMethod::MonteCarlo => {
            check_samples(samples)?;
            Ok(monte_carlo_union(disks, rng_seed, samples))
        }
    }
}

fn check_samples(samples: u64) -> Result<()> {
    if samples < MIN_AREA_SAMPLES {
        return Err(Error::invalid(format!(
            "stochastic area methods need >= {MIN_AREA_SAMPLES} samples, got {samples}"
        )));
    }
    Ok(())
}

fn exact_union(disks: &[Disk]) -> Result<AreaEstimate> {
    let value = match disks {
        [a] => a.area(),
        [a, b] => a.area() + b.area() - lens_area(a, b),
        _ => {
            return Err(Error::unsupported(format!(
                "exact union area supports at most 2 disks, got {}",
                disks.len()
            )))
        }
    };
    Ok(AreaEstimate { value, std_error: 0.0, method: AreaMethod::Exact, sample_count: 0 })
}

/// Intersection area of two disks (circular lens).
fn lens_area(a: &Disk, b: &Disk) -> f64 {
    let d = a.center.distance(&b.center);
    let (r1, r2) = (a.radius, b.radius);
    if d >= r1 + r2 {
        return 0.0;
    }
    if d <= math::abs(r1 - r2) {
        let r = r1.min(r2);
        return core::f64::consts::PI * r * r;
    }
    let clamp = |x: f64| x.clamp(-1.0, 1.0);
    let t1 = r1 * r1 * math::acos(clamp((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)));
    let t2 = r2 * r2 * math::acos(clamp((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)));
    let s = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
    t1 + t2 - 0.5 * math::sqrt(s.max(0.0))
}

/// Tight axis-aligned bounding box of all disks: (xmin, ymin, xmax, ymax).
pub(crate) fn bounding_box(disks: &[Disk]) -> (f64, f64, f64, f64) {
    let mut xmin = f64::INFINITY;
    let mut ymin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for d in disks {
        xmin = xmin.min(d.center.x - d.radius);
        ymin = ymin.min(d.center.y - d.radius);
        xmax = xmax.max(d.center.x + d.radius);
        ymax = ymax.max(d.center.y + d.radius);
    }
    (xmin, ymin, xmax, ymax)
}

fn covered(disks: &[Disk], x: f64, y: f64) -> bool {
    disks.iter().any(|d| d.contains(x, y))
}

/// Grid dimensions whose cell count approximates `samples` while keeping
/// cells close to square for the given box aspect ratio.
pub(crate) fn grid_dims(width: f64, height: f64, samples: u64) -> (u64, u64) {
    let s = samples as f64;
    let gx = if height > 0.0 { math::sqrt(s * width / height) } else { s };
    let gx = (math::round(gx) as u64).max(1);
    let gy = (math::round(s / gx as f64) as u64).max(1);
    (gx, gy)
}

fn grid_union(disks: &[Disk], samples: u64) -> AreaEstimate {
    let (xmin, ymin, xmax, ymax) = bounding_box(disks);
    let width = xmax - xmin;
    let height = ymax - ymin;
    if width <= 0.0 || height <= 0.0 {
        return AreaEstimate { value: 0.0, std_error: 0.0, method: AreaMethod::Grid, sample_count: 0 };
    }
    let (gx, gy) = grid_dims(width, height, samples);
    let mut hits: u64 = 0;
    for iy in 0..gy {
        let y = ymin + (iy as f64 + 0.5) * height / gy as f64;
        for ix in 0..gx {
            let x = xmin + (ix as f64 + 0.5) * width / gx as f64;
            if covered(disks, x, y) {
                hits += 1;
            }
        }
    }
    let total = gx * gy;
    let box_area = width * height;
    let p = hits as f64 / total as f64;
    AreaEstimate {
        value: p * box_area,
        std_error: box_area * math::sqrt(p * (1.0 - p) / total as f64),
        method: AreaMethod::Grid,
        sample_count: total,
    }
}

fn monte_carlo_union(disks: &[Disk], rng_seed: u64, samples: u64) -> AreaEstimate {
    let (xmin, ymin, xmax, ymax) = bounding_box(disks);
    let width = xmax - xmin;
    let height = ymax - ymin;
    if width <= 0.0 || height <= 0.0 {
        return AreaEstimate {
            value: 0.0,
            std_error: 0.0,
            method: AreaMethod::MonteCarlo,
            sample_count: 0,
        };
    }
    let mut rng = seeds::rng_from_seed(rng_seed);
    let mut hits: u64 = 0;
    for _ in 0..samples {
        let x = xmin + rng.gen_range(0.0..1.0) * width;
        let y = ymin + rng.gen_range(0.0..1.0) * height;
        if covered(disks, x, y) {
            hits += 1;
        }
    }
    let box_area = width * height;
    let p = hits as f64 / samples as f64;
    AreaEstimate {
        value: p * box_area,
        std_error: box_area * math::sqrt(p * (1.0 - p) / samples as f64),
        method: AreaMethod::MonteCarlo,
        sample_count: samples,
    }
}
