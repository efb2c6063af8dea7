//! Magnitude pruning of trained models: zero the fraction of
//! smallest-magnitude weights, gate the result on a loss-degradation
//! threshold, and sweep sparsity levels for the stability curve.
//!
//! Only weight matrices are prunable; biases are never touched. Pruning is
//! one-shot (no fine-tuning) and value-level: a pruned model is an ordinary
//! dense model whose masked entries happen to be exactly zero.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::gnn::{self, ModelSpec};
use crate::math;
use crate::tensor::ParamSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneScope {
    /// One ranking across every weight matrix.
    GlobalRank,
    /// Independent rankings inside each weight matrix.
    PerLayer,
}

impl PruneScope {
    pub fn as_str(&self) -> &'static str {
        match self {
            PruneScope::GlobalRank => "global_rank",
            PruneScope::PerLayer => "per_layer",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "global_rank" => Ok(PruneScope::GlobalRank),
            "per_layer" => Ok(PruneScope::PerLayer),
            other => Err(Error::invalid(format!("unknown prune scope {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PruneConfig {
    /// Fraction of prunable weights to zero, in [0, 1].
    pub sparsity: f64,
    pub scope: PruneScope,
    /// Largest acceptable MAE increase for [`validate_prune`]; may be
    /// infinite (always accept).
    pub loss_threshold: f64,
}

impl PruneConfig {
    pub fn new(sparsity: f64) -> Self {
        PruneConfig { sparsity, scope: PruneScope::GlobalRank, loss_threshold: f64::INFINITY }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.sparsity) {
            return Err(Error::invalid(format!(
                "sparsity must lie in [0, 1], got {}",
                self.sparsity
            )));
        }
        if self.loss_threshold.is_nan() || self.loss_threshold < 0.0 {
            return Err(Error::invalid(format!(
                "loss threshold must be >= 0, got {}",
                self.loss_threshold
            )));
        }
        Ok(())
    }
}

/// Which entries were zeroed, tensor by tensor (true = pruned). Bias tensors
/// are present with all-false rows so the mask stays congruent with the
/// parameter set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruneMask {
    entries: Vec<(String, Vec<bool>)>,
}

impl PruneMask {
    fn all_false(params: &ParamSet) -> Self {
        PruneMask {
            entries: params
                .iter()
                .map(|(name, t)| (name.clone(), vec![false; t.len()]))
                .collect(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&[bool]> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, m)| m.as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[bool])> {
        self.entries.iter().map(|(n, m)| (n.as_str(), m.as_slice()))
    }

    pub fn pruned_count(&self) -> usize {
        self.entries.iter().map(|(_, m)| m.iter().filter(|&&b| b).count()).sum()
    }

    /// True when every entry pruned here is also pruned in `other`.
    pub fn nested_in(&self, other: &PruneMask) -> bool {
        self.entries.len() == other.entries.len()
            && self.entries.iter().zip(&other.entries).all(|((an, am), (bn, bm))| {
                an == bn && am.len() == bm.len() && am.iter().zip(bm).all(|(a, b)| !a || *b)
            })
    }
}

/// A sparsified parameter set with its mask and the realised sparsity over
/// prunable weights.
#[derive(Debug, Clone, PartialEq)]
pub struct PrunedModel {
    pub params: ParamSet,
    pub mask: PruneMask,
    pub achieved_sparsity: f64,
}

fn is_prunable(name: &str) -> bool {
    name.ends_with(".weight")
}

/// Zeros the `config.sparsity` fraction of smallest-magnitude weights.
/// Ties at the cutoff magnitude are broken by parameter name, then flat
/// index, which makes masks at increasing sparsity properly nested.
pub fn prune_by_magnitude(params: &ParamSet, config: &PruneConfig) -> Result<PrunedModel> {
    config.validate()?;
    let groups: Vec<Vec<&str>> = match config.scope {
        PruneScope::GlobalRank => {
            vec![params.iter().map(|(n, _)| n.as_str()).filter(|n| is_prunable(n)).collect()]
        }
        PruneScope::PerLayer => params
            .iter()
            .map(|(n, _)| n.as_str())
            .filter(|n| is_prunable(n))
            .map(|n| vec![n])
            .collect(),
    };
    let total_prunable: usize = params
        .iter()
        .filter(|(n, _)| is_prunable(n))
        .map(|(_, t)| t.len())
        .sum();
    if total_prunable == 0 {
        return Err(Error::invalid("parameter set has no prunable weights"));
    }
    let mut pruned = params.clone();
    let mut mask = PruneMask::all_false(params);
    let mut zeroed_total = 0_usize;
    for group in &groups {
        let mut ranked: Vec<(f64, &str, usize)> = Vec::new();
        for name in group {
            let t = params.get(name).expect("listed from params");
            for (idx, v) in t.data().iter().enumerate() {
                ranked.push((math::abs(*v), name, idx));
            }
        }
        let quota = math::round(config.sparsity * ranked.len() as f64) as usize;
        ranked.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .expect("finite magnitudes")
                .then_with(|| a.1.cmp(b.1))
                .then_with(|| a.2.cmp(&b.2))
        });
        for (_, name, idx) in ranked.into_iter().take(quota) {
            pruned.get_mut(name).expect("listed from params").data_mut()[idx] = 0.0;
            let row = mask
                .entries
                .iter_mut()
                .find(|(n, _)| n == name)
                .expect("mask congruent");
            row.1[idx] = true;
            zeroed_total += 1;
        }
    }
    Ok(PrunedModel {
        params: pruned,
        mask,
        achieved_sparsity: zeroed_total as f64 / total_prunable as f64,
    })
}

/// Outcome of the loss-degradation gate.
#[derive(Debug, Clone, PartialEq)]
pub struct PruneReport {
    pub original_mae: f64,
    pub pruned_mae: f64,
    pub delta: f64,
    pub threshold: f64,
    pub accepted: bool,
}

/// Accepts the pruned model iff its pooled MAE on the given samples exceeds
/// the original's by at most `threshold`.
pub fn validate_prune(
    spec: &ModelSpec,
    original: &ParamSet,
    pruned: &PrunedModel,
    dataset: &Dataset,
    eval_ids: &[u64],
    threshold: f64,
) -> Result<PruneReport> {
    if eval_ids.is_empty() {
        return Err(Error::invalid("pruning validation needs a nonempty evaluation split"));
    }
    if threshold.is_nan() || threshold < 0.0 {
        return Err(Error::invalid(format!("loss threshold must be >= 0, got {threshold}")));
    }
    let (original_mae, _) = gnn::eval_pooled(spec, original, dataset, eval_ids)?;
    let (pruned_mae, _) = gnn::eval_pooled(spec, &pruned.params, dataset, eval_ids)?;
    let delta = pruned_mae - original_mae;
    Ok(PruneReport { original_mae, pruned_mae, delta, threshold, accepted: delta <= threshold })
}

/// One sparsity level of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub rho: f64,
    pub test_mae: f64,
    pub test_medae: f64,
    pub achieved_sparsity: f64,
}

/// Prunes the same original parameters independently at each level and
/// evaluates every result on the given samples.
pub fn sparsity_sweep(
    spec: &ModelSpec,
    params: &ParamSet,
    dataset: &Dataset,
    eval_ids: &[u64],
    levels: &[f64],
    scope: PruneScope,
) -> Result<Vec<SweepRow>> {
    if eval_ids.is_empty() {
        return Err(Error::invalid("sparsity sweep needs a nonempty evaluation split"));
    }
    let mut rows = Vec::with_capacity(levels.len());
    for &rho in levels {
        let config = PruneConfig { sparsity: rho, scope, loss_threshold: f64::INFINITY };
        let model = prune_by_magnitude(params, &config)?;
        let (test_mae, test_medae) = gnn::eval_pooled(spec, &model.params, dataset, eval_ids)?;
        rows.push(SweepRow { rho, test_mae, test_medae, achieved_sparsity: model.achieved_sparsity });
    }
    Ok(rows)
}
