//! Synthetic graph datasets: seeded generation, oracle labelling,
//! train/test splitting, and federated partitioning.

use alloc::{format, vec::Vec};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{AdjacencyMatrix, AreaMethod, Point2, Topology};
use crate::oracle::{self, RadiusAssignment};
use crate::seeds;

/// Which solver produces the labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    BruteForce,
    Mst,
    LocalSearch,
}

impl OracleKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OracleKind::BruteForce => "brute_force",
            OracleKind::Mst => "mst",
            OracleKind::LocalSearch => "local_search",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "brute_force" => Ok(OracleKind::BruteForce),
            "mst" => Ok(OracleKind::Mst),
            "local_search" => Ok(OracleKind::LocalSearch),
            other => Err(Error::invalid(format!("unknown oracle {other:?}"))),
        }
    }
}

/// Message-passing graph handed to the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdjacencyPolicy {
    /// Complete graph plus self-loops (default; imposes no structure).
    CompleteWithSelfLoops,
    /// Euclidean MST edges plus self-loops (stronger locality bias).
    MstWithSelfLoops,
}

impl AdjacencyPolicy {
    pub fn as_str(&self) -> &'static str {
        match self {
            AdjacencyPolicy::CompleteWithSelfLoops => "complete",
            AdjacencyPolicy::MstWithSelfLoops => "mst",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "complete" => Ok(AdjacencyPolicy::CompleteWithSelfLoops),
            "mst" => Ok(AdjacencyPolicy::MstWithSelfLoops),
            other => Err(Error::invalid(format!("unknown adjacency policy {other:?}"))),
        }
    }
}

/// Full description of how a dataset was (or will be) labelled.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub oracle: OracleKind,
    pub area_method: AreaMethod,
    pub area_samples: u64,
    pub seed: u64,
    /// Accepted-move bound for the local-search oracle; ignored otherwise.
    pub max_iters: u64,
    pub adjacency_policy: AdjacencyPolicy,
}

impl OracleConfig {
    /// Exact labels on a deterministic grid, complete message-passing graph.
    pub fn exact_default(seed: u64) -> Self {
        OracleConfig {
            oracle: OracleKind::BruteForce,
            area_method: AreaMethod::Grid,
            area_samples: 65_536,
            seed,
            max_iters: 100,
            adjacency_policy: AdjacencyPolicy::CompleteWithSelfLoops,
        }
    }
}

/// One topology with model inputs and (after labelling) oracle radii.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSample {
    pub id: u64,
    pub topology: Topology,
    pub mp_adjacency: AdjacencyMatrix,
    /// Row per node: coordinates divided by the area bounds.
    pub features: Vec<[f64; 2]>,
    pub labels: Option<RadiusAssignment>,
}

impl GraphSample {
    /// Builds an unlabelled sample with normalised features and the default
    /// complete message-passing graph.
    pub fn unlabeled(id: u64, topology: Topology, area_bounds: (f64, f64)) -> Result<Self> {
        check_bounds(area_bounds)?;
        let features = normalised_features(&topology, area_bounds);
        let mp_adjacency = AdjacencyMatrix::complete_with_self_loops(topology.len());
        GraphSample::new(id, topology, mp_adjacency, features, None)
    }

    pub fn new(
        id: u64,
        topology: Topology,
        mp_adjacency: AdjacencyMatrix,
        features: Vec<[f64; 2]>,
        labels: Option<RadiusAssignment>,
    ) -> Result<Self> {
        let n = topology.len();
        if mp_adjacency.n() != n {
            return Err(Error::invalid(format!(
                "adjacency is {}x{0} for {n} nodes",
                mp_adjacency.n()
            )));
        }
        if !mp_adjacency.is_symmetric() || !mp_adjacency.diagonal_all_true() {
            return Err(Error::invalid(
                "message-passing adjacency must be symmetric with self-loops",
            ));
        }
        if features.len() != n {
            return Err(Error::invalid(format!("{} feature rows for {n} nodes", features.len())));
        }
        if features.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite feature"));
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::invalid(format!("{} labels for {n} nodes", l.len())));
            }
        }
        Ok(GraphSample { id, topology, mp_adjacency, features, labels })
    }

    pub fn n(&self) -> usize {
        self.topology.len()
    }

    /// Oracle radii, or an error when the sample is unlabelled.
    pub fn labels(&self) -> Result<&RadiusAssignment> {
        self.labels
            .as_ref()
            .ok_or_else(|| Error::invalid(format!("sample {} is unlabelled", self.id)))
    }
}

/// Coordinates mapped affinely to the unit square via `area_bounds`.
pub fn normalised_features(topology: &Topology, area_bounds: (f64, f64)) -> Vec<[f64; 2]> {
    topology
        .positions()
        .iter()
        .map(|p| [p.x / area_bounds.0, p.y / area_bounds.1])
        .collect()
}

/// A collection of samples drawn from one operation area.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    samples: Vec<GraphSample>,
    pub area_bounds: (f64, f64),
    pub seed: u64,
    /// Present once the dataset has been labelled.
    pub oracle_config: Option<OracleConfig>,
}

impl Dataset {
    /// Validates that sample ids are exactly `0..len`.
    pub fn new(
        samples: Vec<GraphSample>,
        area_bounds: (f64, f64),
        seed: u64,
        oracle_config: Option<OracleConfig>,
    ) -> Result<Self> {
        check_bounds(area_bounds)?;
        for (k, s) in samples.iter().enumerate() {
            if s.id != k as u64 {
                return Err(Error::invalid(format!(
                    "sample ids must be dense from 0; position {k} holds id {}",
                    s.id
                )));
            }
        }
        Ok(Dataset { samples, area_bounds, seed, oracle_config })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[GraphSample] {
        &self.samples
    }

    pub fn sample(&self, id: u64) -> Result<&GraphSample> {
        self.samples
            .get(id as usize)
            .ok_or_else(|| Error::invalid(format!("no sample with id {id}")))
    }

    /// Samples for the given ids, in the ids' order.
    pub fn subset(&self, ids: &[u64]) -> Result<Vec<&GraphSample>> {
        ids.iter().map(|&id| self.sample(id)).collect()
    }

    pub fn is_labeled(&self) -> bool {
        !self.samples.is_empty() && self.samples.iter().all(|s| s.labels.is_some())
    }
}

/// Pairwise distances closer than `MIN_SEPARATION_FACTOR * max(bounds)` make
/// a drawn configuration degenerate; generation redraws it.
pub const MIN_SEPARATION_FACTOR: f64 = 1e-6;

const MAX_REDRAWS: u32 = 1_000;

fn check_bounds(area_bounds: (f64, f64)) -> Result<()> {
    let (w, h) = area_bounds;
    if !w.is_finite() || !h.is_finite() || w <= 0.0 || h <= 0.0 {
        return Err(Error::invalid(format!("area bounds must be positive, got ({w}, {h})")));
    }
    Ok(())
}

/// Draws `num_graphs` topologies of `nodes_per_graph` uniform points over the
/// bounded rectangle. Sample `k` uses substream `k` of `seed`, so regenerating
/// any prefix (or a single sample) reproduces identical bits.
pub fn generate(
    num_graphs: usize,
    nodes_per_graph: usize,
    area_bounds: (f64, f64),
    seed: u64,
) -> Result<Dataset> {
    if num_graphs < 1 {
        return Err(Error::invalid("need at least one graph"));
    }
    if nodes_per_graph < 2 {
        return Err(Error::invalid("need at least two nodes per graph"));
    }
    check_bounds(area_bounds)?;
    let min_sep = MIN_SEPARATION_FACTOR * area_bounds.0.max(area_bounds.1);
    let mut samples = Vec::with_capacity(num_graphs);
    for k in 0..num_graphs {
        let mut rng = seeds::stream_rng(seed, k as u64);
        let mut topology = None;
        for _ in 0..MAX_REDRAWS {
            let pts = (0..nodes_per_graph)
                .map(|_| {
                    Point2::new(
                        rng.gen_range(0.0..1.0) * area_bounds.0,
                        rng.gen_range(0.0..1.0) * area_bounds.1,
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            let t = Topology::new(pts)?;
            if t.min_pairwise_distance().map(|d| d >= min_sep).unwrap_or(true) {
                topology = Some(t);
                break;
            }
        }
        let topology = topology.ok_or_else(|| {
            Error::invalid(format!(
                "sample {k}: no configuration with pairwise separation >= {min_sep} \
                 after {MAX_REDRAWS} draws"
            ))
        })?;
        samples.push(GraphSample::unlabeled(k as u64, topology, area_bounds)?);
    }
    Dataset::new(samples, area_bounds, seed, None)
}

/// Labels every sample with the configured oracle and rewrites each
/// message-passing adjacency per the configured policy.
pub fn label(dataset: Dataset, config: OracleConfig) -> Result<Dataset> {
    if config.oracle == OracleKind::BruteForce {
        if let Some(s) = dataset
            .samples
            .iter()
            .find(|s| s.n() > oracle::MAX_BRUTE_FORCE_NODES)
        {
            return Err(Error::config(format!(
                "sample {} has {} nodes, beyond the exact oracle's \
                 {}-node budget; configure the local_search oracle",
                s.id,
                s.n(),
                oracle::MAX_BRUTE_FORCE_NODES
            )));
        }
    }
    if let Some(prev) = &dataset.oracle_config {
        if *prev != config {
            log::warn!("relabelling dataset previously labelled with the {} oracle", prev.oracle.as_str());
        }
    }
    let samples = dataset
        .samples
        .iter()
        .map(|s| label_sample(s, &config))
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(samples, dataset.area_bounds, dataset.seed, Some(config))
}

/// Labels one sample. The oracle's stochastic seed is derived from
/// `(config.seed, sample.id)`, so labelling is order-independent and safe to
/// parallelise across samples.
pub fn label_sample(sample: &GraphSample, config: &OracleConfig) -> Result<GraphSample> {
    let sample_seed = seeds::derive_seed(config.seed, sample.id);
    let labels = match config.oracle {
        OracleKind::BruteForce => oracle::brute_force_mast(
            &sample.topology,
            config.area_method,
            config.area_samples,
            sample_seed,
        )?,
        OracleKind::Mst => oracle::radii_from_tree(&sample.topology, &oracle::mst(&sample.topology)?)?,
        OracleKind::LocalSearch => oracle::local_search_mast(
            &sample.topology,
            config.max_iters,
            config.area_method,
            config.area_samples,
            sample_seed,
        )?,
    };
    let mp_adjacency = match config.adjacency_policy {
        AdjacencyPolicy::CompleteWithSelfLoops => {
            AdjacencyMatrix::complete_with_self_loops(sample.n())
        }
        AdjacencyPolicy::MstWithSelfLoops => {
            let tree = oracle::mst(&sample.topology)?;
            let mut adj = AdjacencyMatrix::empty(sample.n());
            for &(i, j) in tree.edges() {
                adj.set_sym(i, j, true);
            }
            adj.with_self_loops()
        }
    };
    GraphSample::new(
        sample.id,
        sample.topology.clone(),
        mp_adjacency,
        sample.features.clone(),
        Some(labels),
    )
}

/// Disjoint train/test id lists covering a dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSpec {
    pub train_ids: Vec<u64>,
    pub test_ids: Vec<u64>,
}

impl SplitSpec {
    pub fn new(train_ids: Vec<u64>, test_ids: Vec<u64>) -> Result<Self> {
        for id in &train_ids {
            if test_ids.contains(id) {
                return Err(Error::invalid(format!("id {id} appears in both train and test")));
            }
        }
        Ok(SplitSpec { train_ids, test_ids })
    }

    /// Checks that the two sides exactly cover `dataset`.
    pub fn validate_covers(&self, dataset: &Dataset) -> Result<()> {
        let mut seen = alloc::vec![false; dataset.len()];
        for &id in self.train_ids.iter().chain(&self.test_ids) {
            let idx = id as usize;
            if idx >= seen.len() {
                return Err(Error::invalid(format!("split id {id} outside dataset")));
            }
            if seen[idx] {
                return Err(Error::invalid(format!("split repeats id {id}")));
            }
            seen[idx] = true;
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err(Error::invalid("split does not cover the dataset"))
        }
    }
}

/// Seeded shuffle of all ids, then a prefix of `round(train_fraction * total)`
/// becomes the training side.
pub fn split(dataset: &Dataset, train_fraction: f64, seed: u64) -> Result<SplitSpec> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::invalid(format!(
            "train fraction must lie strictly between 0 and 1, got {train_fraction}"
        )));
    }
    let total = dataset.len();
    let mut ids: Vec<u64> = (0..total as u64).collect();
    ids.shuffle(&mut seeds::rng_from_seed(seed));
    let train_len = crate::math::round(train_fraction * total as f64) as usize;
    if train_len == 0 || train_len == total {
        return Err(Error::invalid(format!(
            "train fraction {train_fraction} of {total} samples leaves one side empty"
        )));
    }
    let test_ids = ids.split_off(train_len);
    SplitSpec::new(ids, test_ids)
}

/// Per-worker id shards of equal size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSpec {
    pub worker_shards: Vec<Vec<u64>>,
    pub shard_size: usize,
}

impl PartitionSpec {
    pub fn new(worker_shards: Vec<Vec<u64>>, shard_size: usize) -> Result<Self> {
        let mut seen: Vec<u64> = Vec::new();
        for (w, shard) in worker_shards.iter().enumerate() {
            if shard.len() != shard_size {
                return Err(Error::invalid(format!(
                    "worker {w} shard has {} ids, expected {shard_size}",
                    shard.len()
                )));
            }
            for &id in shard {
                if seen.contains(&id) {
                    return Err(Error::invalid(format!("id {id} assigned to two workers")));
                }
                seen.push(id);
            }
        }
        Ok(PartitionSpec { worker_shards, shard_size })
    }

    pub fn workers(&self) -> usize {
        self.worker_shards.len()
    }
}

/// Seeded shuffle of the training ids, then consecutive disjoint shards of
/// `shard_size` per worker. Leftover ids go unused.
pub fn partition(
    split: &SplitSpec,
    workers: usize,
    shard_size: usize,
    seed: u64,
) -> Result<PartitionSpec> {
    if workers < 1 || shard_size < 1 {
        return Err(Error::invalid("need at least one worker and a positive shard size"));
    }
    let needed = workers * shard_size;
    if needed > split.train_ids.len() {
        return Err(Error::invalid(format!(
            "{workers} workers x {shard_size} samples needs {needed} training ids, \
             only {} available",
            split.train_ids.len()
        )));
    }
    let mut ids = split.train_ids.clone();
    ids.shuffle(&mut seeds::rng_from_seed(seed));
    let shards = ids.chunks(shard_size).take(workers).map(|c| c.to_vec()).collect();
    PartitionSpec::new(shards, shard_size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{self, union_area};

    #[test]
    fn generate_shapes_and_bounds() {
        let ds = generate(200, 5, (100.0, 100.0), 7).unwrap();
        assert_eq!(ds.len(), 200);
        for s in ds.samples() {
            assert_eq!(s.n(), 5);
            for p in s.topology.positions() {
                assert!(p.x >= 0.0 && p.x < 100.0);
                assert!(p.y >= 0.0 && p.y < 100.0);
            }
            for f in &s.features {
                assert!(f[0] >= 0.0 && f[0] < 1.0 && f[1] >= 0.0 && f[1] < 1.0);
            }
            assert!(s.topology.min_pairwise_distance().unwrap() >= 1e-4);
            assert!(s.mp_adjacency.diagonal_all_true());
            assert!(s.labels.is_none());
        }
    }

    #[test]
    fn generate_single_two_node_sample() {
        let ds = generate(1, 2, (1.0, 1.0), 0).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.samples()[0].n(), 2);
    }

    #[test]
    fn generate_is_deterministic() {
        let a = generate(10, 5, (100.0, 100.0), 3).unwrap();
        let b = generate(10, 5, (100.0, 100.0), 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn generate_prefix_is_stable() {
        let small = generate(2, 5, (50.0, 50.0), 11).unwrap();
        let big = generate(6, 5, (50.0, 50.0), 11).unwrap();
        assert_eq!(small.samples(), &big.samples()[..2]);
    }

    #[test]
    fn generate_rejects_bad_arguments() {
        assert!(generate(0, 5, (10.0, 10.0), 0).is_err());
        assert!(generate(1, 1, (10.0, 10.0), 0).is_err());
        assert!(generate(1, 2, (0.0, 10.0), 0).is_err());
        assert!(generate(1, 2, (10.0, -1.0), 0).is_err());
    }

    #[test]
    fn label_two_node_sample_forced() {
        let t = Topology::from_coords(&[(0.0, 0.0), (3.0, 0.0)]).unwrap();
        let s = GraphSample::unlabeled(0, t, (10.0, 10.0)).unwrap();
        let ds = Dataset::new(alloc::vec![s], (10.0, 10.0), 0, None).unwrap();
        let labeled = label(ds, OracleConfig::exact_default(0)).unwrap();
        assert_eq!(labeled.samples()[0].labels().unwrap().radii(), &[3.0, 3.0]);
        assert!(labeled.is_labeled());
        assert!(labeled.oracle_config.is_some());
    }

    #[test]
    fn label_collinear_sample() {
        let t = Topology::from_coords(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]).unwrap();
        let s = GraphSample::unlabeled(0, t, (10.0, 10.0)).unwrap();
        let ds = Dataset::new(alloc::vec![s], (10.0, 10.0), 0, None).unwrap();
        let labeled = label(ds, OracleConfig::exact_default(0)).unwrap();
        assert_eq!(labeled.samples()[0].labels().unwrap().radii(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn labels_always_connected() {
        let ds = generate(6, 5, (100.0, 100.0), 21).unwrap();
        for kind in [OracleKind::BruteForce, OracleKind::Mst, OracleKind::LocalSearch] {
            let mut cfg = OracleConfig::exact_default(5);
            cfg.oracle = kind;
            cfg.area_samples = 20_000;
            let labeled = label(ds.clone(), cfg).unwrap();
            for s in labeled.samples() {
                let radii = s.labels().unwrap().radii();
                let adj = geometry::induced_adjacency(&s.topology, radii).unwrap();
                assert!(geometry::is_connected(&adj));
            }
        }
    }

    #[test]
    fn mst_labels_never_beat_exact_labels() {
        let ds = generate(5, 5, (100.0, 100.0), 33).unwrap();
        let mut mst_cfg = OracleConfig::exact_default(2);
        mst_cfg.oracle = OracleKind::Mst;
        let exact = label(ds.clone(), OracleConfig::exact_default(2)).unwrap();
        let approx = label(ds, mst_cfg).unwrap();
        for (e, m) in exact.samples().iter().zip(approx.samples()) {
            let area = |s: &GraphSample| {
                let disks = s.labels().unwrap().disks(&s.topology).unwrap();
                union_area(&disks, AreaMethod::Grid, 0, 200_000).unwrap()
            };
            let (ae, am) = (area(e), area(m));
            assert!(ae.value <= am.value + 3.0 * (ae.std_error + am.std_error));
        }
    }

    #[test]
    fn label_budget_error_mentions_fallback() {
        let coords: Vec<(f64, f64)> = (0..9).map(|i| (i as f64, 0.0)).collect();
        let t = Topology::from_coords(&coords).unwrap();
        let s = GraphSample::unlabeled(0, t, (10.0, 10.0)).unwrap();
        let ds = Dataset::new(alloc::vec![s], (10.0, 10.0), 0, None).unwrap();
        match label(ds, OracleConfig::exact_default(0)) {
            Err(Error::Config(msg)) => assert!(msg.contains("local_search")),
            other => panic!("expected configuration error, got {other:?}"),
        }
    }

    #[test]
    fn mst_adjacency_policy_shapes_graph() {
        let ds = generate(3, 5, (100.0, 100.0), 8).unwrap();
        let mut cfg = OracleConfig::exact_default(1);
        cfg.area_samples = 20_000;
        cfg.adjacency_policy = AdjacencyPolicy::MstWithSelfLoops;
        let labeled = label(ds, cfg).unwrap();
        for s in labeled.samples() {
            assert!(s.mp_adjacency.is_symmetric());
            assert!(s.mp_adjacency.diagonal_all_true());
            // MST + self-loops: 2(N-1) off-diagonal entries plus N diagonal.
            let edges: usize = (0..s.n()).map(|i| s.mp_adjacency.degree(i)).sum();
            assert_eq!(edges, 2 * (s.n() - 1) + s.n());
        }
    }

    #[test]
    fn split_80_20() {
        let ds = generate(200, 2, (10.0, 10.0), 1).unwrap();
        let sp = split(&ds, 0.8, 5).unwrap();
        assert_eq!(sp.train_ids.len(), 160);
        assert_eq!(sp.test_ids.len(), 40);
        sp.validate_covers(&ds).unwrap();
    }

    #[test]
    fn split_half() {
        let ds = generate(10, 2, (10.0, 10.0), 1).unwrap();
        let sp = split(&ds, 0.5, 5).unwrap();
        assert_eq!(sp.train_ids.len(), 5);
        assert_eq!(sp.test_ids.len(), 5);
    }

    #[test]
    fn split_is_deterministic_and_seed_sensitive() {
        let ds = generate(50, 2, (10.0, 10.0), 1).unwrap();
        assert_eq!(split(&ds, 0.8, 9).unwrap(), split(&ds, 0.8, 9).unwrap());
        assert_ne!(split(&ds, 0.8, 9).unwrap(), split(&ds, 0.8, 10).unwrap());
    }

    #[test]
    fn split_rejects_degenerate_fractions() {
        let ds = generate(10, 2, (10.0, 10.0), 1).unwrap();
        assert!(split(&ds, 0.0, 0).is_err());
        assert!(split(&ds, 1.0, 0).is_err());
        assert!(split(&ds, 0.01, 0).is_err());
    }

    #[test]
    fn partition_paper_shape() {
        let ds = generate(200, 2, (10.0, 10.0), 1).unwrap();
        let sp = split(&ds, 0.8, 5).unwrap();
        let part = partition(&sp, 6, 25, 3).unwrap();
        assert_eq!(part.workers(), 6);
        let assigned: usize = part.worker_shards.iter().map(|s| s.len()).sum();
        assert_eq!(assigned, 150);
        for shard in &part.worker_shards {
            for id in shard {
                assert!(sp.train_ids.contains(id));
            }
        }
    }

    #[test]
    fn partition_exact_cover_and_standalone() {
        let sp = SplitSpec::new(alloc::vec![0, 1, 2, 3], alloc::vec![4]).unwrap();
        let part = partition(&sp, 2, 2, 0).unwrap();
        let assigned: usize = part.worker_shards.iter().map(|s| s.len()).sum();
        assert_eq!(assigned, 4);

        let solo = partition(&sp, 1, 4, 0).unwrap();
        let mut ids = solo.worker_shards[0].clone();
        ids.sort_unstable();
        assert_eq!(ids, alloc::vec![0, 1, 2, 3]);
    }

    #[test]
    fn partition_rejects_overcommit() {
        let sp = SplitSpec::new(alloc::vec![0, 1, 2], alloc::vec![3]).unwrap();
        assert!(partition(&sp, 2, 2, 0).is_err());
    }

    #[test]
    fn dataset_requires_dense_ids() {
        let t = Topology::from_coords(&[(0.0, 0.0), (1.0, 0.0)]).unwrap();
        let s = GraphSample::unlabeled(1, t, (10.0, 10.0)).unwrap();
        assert!(Dataset::new(alloc::vec![s], (10.0, 10.0), 0, None).is_err());
    }

    #[test]
    fn subset_preserves_order() {
        let ds = generate(5, 2, (10.0, 10.0), 1).unwrap();
        let sub = ds.subset(&[3, 0, 4]).unwrap();
        assert_eq!(sub.iter().map(|s| s.id).collect::<Vec<_>>(), alloc::vec![3, 0, 4]);
        assert!(ds.subset(&[9]).is_err());
    }
}
