//! Federated training simulation: workers train locally on disjoint shards,
//! a coordinator averages their weights each round (FedAvg with equal-sized
//! shards), and the averaged model is evaluated on the shared test split.
//!
//! Everything runs sequentially and deterministically; worker ids fix the
//! aggregation order, so results never depend on scheduling.

use alloc::format;
use alloc::vec::Vec;

use crate::dataset::{AdjacencyPolicy, Dataset, GraphSample, PartitionSpec, SplitSpec};
use crate::error::{Error, Result};
use crate::gnn::{self, ModelSpec};
use crate::tensor::{OptimizerConfig, OptimizerKind, OptimizerState, ParamSet};

/// What happens to a worker's optimiser moments between rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptStatePolicy {
    /// Fresh optimiser state every round (default; matches a stateless
    /// weight-exchange protocol).
    Reset,
    /// Moments survive across rounds on each worker.
    Persist,
}

impl OptStatePolicy {
    pub fn as_str(&self) -> &'static str {
        match self {
            OptStatePolicy::Reset => "reset",
            OptStatePolicy::Persist => "persist",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "reset" => Ok(OptStatePolicy::Reset),
            "persist" => Ok(OptStatePolicy::Persist),
            other => Err(Error::invalid(format!("unknown optimiser state policy {other:?}"))),
        }
    }
}

/// Federated run description. The model initialisation seed matches
/// standalone training, so a single worker with matched epoch totals
/// reproduces [`gnn::train_standalone`] exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct FedConfig {
    pub model: ModelSpec,
    pub workers: usize,
    pub rounds: usize,
    pub local_epochs_per_round: usize,
    pub learning_rate: f64,
    pub seed: u64,
    pub optimizer: OptimizerKind,
    pub adjacency_policy: AdjacencyPolicy,
    pub opt_state_policy: OptStatePolicy,
}

impl FedConfig {
    pub fn new(model: ModelSpec, workers: usize, rounds: usize, learning_rate: f64, seed: u64) -> Self {
        FedConfig {
            model,
            workers,
            rounds,
            local_epochs_per_round: 5,
            learning_rate,
            seed,
            optimizer: OptimizerKind::Adam,
            adjacency_policy: AdjacencyPolicy::CompleteWithSelfLoops,
            opt_state_policy: OptStatePolicy::Reset,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.workers < 1 {
            return Err(Error::config("need at least one worker"));
        }
        if self.rounds < 1 {
            return Err(Error::config("need at least one round"));
        }
        if !self.learning_rate.is_finite() || self.learning_rate < 0.0 {
            return Err(Error::config(format!(
                "learning rate must be finite and >= 0, got {}",
                self.learning_rate
            )));
        }
        Ok(())
    }

    pub fn optimizer_config(&self) -> OptimizerConfig {
        match self.optimizer {
            OptimizerKind::Adam => OptimizerConfig::adam(self.learning_rate),
            OptimizerKind::Sgd => OptimizerConfig::sgd(self.learning_rate),
        }
    }
}

/// One worker's model replica and optimiser moments.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkerState {
    pub id: usize,
    pub params: ParamSet,
    pub opt_state: OptimizerState,
}

/// History entry for one aggregation round.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub round: usize,
    pub global_params_digest: u64,
    /// Mean local training loss of each worker over this round's epochs, in
    /// ascending worker-id order.
    pub per_worker_train_loss: Vec<f64>,
    pub global_test_mae: f64,
    pub global_test_medae: f64,
}

/// Runs one worker's local epochs starting from the given global weights.
/// Returns the mean local training loss (the current shard loss when
/// `local_epochs_per_round` is zero, in which case nothing changes).
pub fn local_train(
    config: &FedConfig,
    global_params: &ParamSet,
    worker: &mut WorkerState,
    shard: &[&GraphSample],
) -> Result<f64> {
    config.validate()?;
    worker.params = global_params.clone();
    if config.opt_state_policy == OptStatePolicy::Reset {
        worker.opt_state = OptimizerState::new(&worker.params);
    }
    if config.local_epochs_per_round == 0 {
        return gnn::batch_mae(&config.model, &worker.params, shard);
    }
    let losses = gnn::train_epochs(
        &config.model,
        &mut worker.params,
        &mut worker.opt_state,
        shard,
        &config.optimizer_config(),
        config.local_epochs_per_round,
    )?;
    Ok(losses.iter().sum::<f64>() / losses.len() as f64)
}

/// Uniform average of congruent parameter sets, taken in slice order.
pub fn aggregate(worker_params: &[&ParamSet]) -> Result<ParamSet> {
    let first = *worker_params
        .first()
        .ok_or_else(|| Error::invalid("aggregation needs at least one parameter set"))?;
    for (w, p) in worker_params.iter().enumerate().skip(1) {
        if !first.congruent(p) {
            return Err(Error::invalid(format!(
                "worker {w} parameters do not match worker 0 in names or shapes"
            )));
        }
    }
    let mut mean = first.clone();
    for p in worker_params.iter().skip(1) {
        for ((_, acc), (_, t)) in mean.iter_mut().zip(p.iter()) {
            for (a, v) in acc.data_mut().iter_mut().zip(t.data()) {
                *a += v;
            }
        }
    }
    let scale = 1.0 / worker_params.len() as f64;
    for (_, t) in mean.iter_mut() {
        for v in t.data_mut() {
            *v *= scale;
        }
    }
    Ok(mean)
}

/// 64-bit FNV-1a over parameter names, shapes, and exact value bits; a cheap
/// fingerprint for round histories and reproducibility checks.
pub fn params_digest(params: &ParamSet) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    let mut eat = |byte: u8| {
        h ^= byte as u64;
        h = h.wrapping_mul(PRIME);
    };
    for (name, t) in params.iter() {
        for b in name.as_bytes() {
            eat(*b);
        }
        eat(0);
        for b in (t.rows() as u64).to_le_bytes().iter().chain((t.cols() as u64).to_le_bytes().iter())
        {
            eat(*b);
        }
        for v in t.data() {
            for b in v.to_bits().to_le_bytes() {
                eat(b);
            }
        }
    }
    h
}

/// Runs the full federated simulation: `rounds` iterations of local training
/// on every shard followed by weight averaging and evaluation on the split's
/// test side. Returns the final global parameters and the per-round history.
pub fn run_federated(
    config: &FedConfig,
    dataset: &Dataset,
    split: &SplitSpec,
    partition: &PartitionSpec,
) -> Result<(ParamSet, Vec<RoundRecord>)> {
    config.validate()?;
    if !dataset.is_labeled() {
        return Err(Error::invalid("federated training needs a labelled dataset"));
    }
    if partition.worker_shards.len() != config.workers {
        return Err(Error::config(format!(
            "config expects {} workers, partition provides {} shards",
            config.workers,
            partition.worker_shards.len()
        )));
    }
    if split.test_ids.is_empty() {
        return Err(Error::invalid("federated training needs a nonempty test split"));
    }
    if let Some(oc) = &dataset.oracle_config {
        if oc.adjacency_policy != config.adjacency_policy {
            log::warn!(
                "federated config expects the {} adjacency policy but the dataset \
                 was labelled with {}; using the dataset's graphs",
                config.adjacency_policy.as_str(),
                oc.adjacency_policy.as_str()
            );
        }
    }
    let shards: Vec<Vec<&GraphSample>> = partition
        .worker_shards
        .iter()
        .map(|ids| dataset.subset(ids))
        .collect::<Result<_>>()?;
    if shards.iter().any(|s| s.is_empty()) {
        return Err(Error::config("every worker needs a nonempty shard"));
    }
    let mut global = gnn::init_params(&config.model, config.seed);
    let mut workers: Vec<WorkerState> = (0..config.workers)
        .map(|id| WorkerState {
            id,
            params: global.clone(),
            opt_state: OptimizerState::new(&global),
        })
        .collect();
    let mut history = Vec::with_capacity(config.rounds);
    for round in 1..=config.rounds {
        let mut per_worker_train_loss = Vec::with_capacity(config.workers);
        for worker in workers.iter_mut() {
            let loss = local_train(config, &global, worker, &shards[worker.id])?;
            per_worker_train_loss.push(loss);
        }
        let sets: Vec<&ParamSet> = workers.iter().map(|w| &w.params).collect();
        global = aggregate(&sets)?;
        let (global_test_mae, global_test_medae) =
            gnn::eval_pooled(&config.model, &global, dataset, &split.test_ids)?;
        history.push(RoundRecord {
            round,
            global_params_digest: params_digest(&global),
            per_worker_train_loss,
            global_test_mae,
            global_test_medae,
        });
    }
    Ok((global, history))
}
