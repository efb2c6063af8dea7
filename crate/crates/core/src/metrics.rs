//! Error metrics and area-based evaluation reports.
//!
//! Prediction error (MAE, MedAE) is measured on the raw model output, pooled
//! per node across samples. Coverage cost is measured after feasibility
//! repair: the repaired prediction's union area divided by the oracle's, so a
//! ratio of 1 means the model matched the labelled optimum.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::dataset::{Dataset, GraphSample};
use crate::error::{Error, Result};
use crate::geometry::{induced_adjacency, is_connected, union_area, AreaMethod};
use crate::gnn::{model_forward, ModelSpec};
use crate::oracle::{repair_radii, RadiusAssignment};
use crate::seeds;
use crate::tensor::ParamSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitKind {
    Train,
    Test,
}

impl SplitKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SplitKind::Train => "train",
            SplitKind::Test => "test",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(SplitKind::Train),
            "test" => Ok(SplitKind::Test),
            other => Err(Error::invalid(format!("unknown split {other:?}"))),
        }
    }
}

fn check_paired(preds: &[f64], labels: &[f64]) -> Result<()> {
    if preds.is_empty() {
        return Err(Error::invalid("metrics need at least one value"));
    }
    if preds.len() != labels.len() {
        return Err(Error::invalid(format!(
            "{} predictions against {} labels",
            preds.len(),
            labels.len()
        )));
    }
    if preds.iter().chain(labels).any(|v| !v.is_finite()) {
        return Err(Error::invalid("metrics need finite values"));
    }
    Ok(())
}

/// Mean absolute error.
pub fn mae(preds: &[f64], labels: &[f64]) -> Result<f64> {
    check_paired(preds, labels)?;
    let sum: f64 = preds.iter().zip(labels).map(|(p, t)| crate::math::abs(p - t)).sum();
    Ok(sum / preds.len() as f64)
}

/// Median absolute error; the midpoint of the two central values when the
/// count is even.
pub fn medae(preds: &[f64], labels: &[f64]) -> Result<f64> {
    check_paired(preds, labels)?;
    let mut errs: Vec<f64> =
        preds.iter().zip(labels).map(|(p, t)| crate::math::abs(p - t)).collect();
    errs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let n = errs.len();
    Ok(if n % 2 == 1 { errs[n / 2] } else { 0.5 * (errs[n / 2 - 1] + errs[n / 2]) })
}

/// How coverage areas are estimated during evaluation. Each sample gets its
/// own substream derived from `seed`, so reports do not depend on evaluation
/// order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaConfig {
    pub method: AreaMethod,
    pub samples: u64,
    pub seed: u64,
}

impl Default for AreaConfig {
    fn default() -> Self {
        AreaConfig { method: AreaMethod::Grid, samples: 65_536, seed: 0 }
    }
}

/// Aggregated quality of one model on one split.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub model_name: String,
    pub split: SplitKind,
    pub mae: f64,
    pub medae: f64,
    /// Mean over samples of repaired-prediction area / oracle area.
    pub mean_area_ratio: f64,
    /// Fraction of samples whose raw prediction already induces a connected
    /// graph, before any repair.
    pub feasibility_rate: f64,
    pub n_samples: usize,
}

/// Scores per-sample predictions against the samples' oracle labels.
pub fn evaluate_predictions(
    model_name: &str,
    split: SplitKind,
    predictions: &[RadiusAssignment],
    samples: &[&GraphSample],
    area: &AreaConfig,
) -> Result<MetricsReport> {
    if samples.is_empty() {
        return Err(Error::invalid("evaluation needs at least one sample"));
    }
    if predictions.len() != samples.len() {
        return Err(Error::invalid(format!(
            "{} predictions for {} samples",
            predictions.len(),
            samples.len()
        )));
    }
    let mut pooled_preds = Vec::new();
    let mut pooled_labels = Vec::new();
    let mut ratio_sum = 0.0;
    let mut feasible = 0_usize;
    for (pred, sample) in predictions.iter().zip(samples) {
        if pred.len() != sample.n() {
            return Err(Error::invalid(format!(
                "prediction has {} radii, sample {} has {} nodes",
                pred.len(),
                sample.id,
                sample.n()
            )));
        }
        let labels = sample.labels()?;
        pooled_preds.extend_from_slice(pred.radii());
        pooled_labels.extend_from_slice(labels.radii());
        if is_connected(&induced_adjacency(&sample.topology, pred.radii())?) {
            feasible += 1;
        }
        let repaired = repair_radii(&sample.topology, pred)?;
        let area_seed = seeds::derive_seed(area.seed, sample.id);
        let pred_area =
            union_area(&repaired.disks(&sample.topology)?, area.method, area_seed, area.samples)?;
        let label_area =
            union_area(&labels.disks(&sample.topology)?, area.method, area_seed, area.samples)?;
        if label_area.value <= 0.0 {
            return Err(Error::domain(format!("sample {} has zero oracle area", sample.id)));
        }
        ratio_sum += pred_area.value / label_area.value;
    }
    Ok(MetricsReport {
        model_name: model_name.to_string(),
        split,
        mae: mae(&pooled_preds, &pooled_labels)?,
        medae: medae(&pooled_preds, &pooled_labels)?,
        mean_area_ratio: ratio_sum / samples.len() as f64,
        feasibility_rate: feasible as f64 / samples.len() as f64,
        n_samples: samples.len(),
    })
}

/// Runs the model over the given sample ids and scores the results.
pub fn evaluate(
    spec: &ModelSpec,
    params: &ParamSet,
    dataset: &Dataset,
    ids: &[u64],
    split: SplitKind,
    area: &AreaConfig,
) -> Result<MetricsReport> {
    let samples = dataset.subset(ids)?;
    let mut predictions = Vec::with_capacity(samples.len());
    for sample in &samples {
        predictions.push(model_forward(spec, params, sample)?);
    }
    evaluate_predictions(&spec.name, split, &predictions, &samples, area)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareEntry {
    pub model_name: String,
    pub mae: f64,
    pub medae: f64,
    /// Relative MAE reduction against the worst model in the comparison,
    /// in percent; the worst model itself scores 0.
    pub reduction_vs_worst_pct: f64,
}

/// Models ranked by MAE, best first.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub split: SplitKind,
    pub entries: Vec<CompareEntry>,
}

/// Ranks reports from the same split by MAE ascending.
pub fn compare(reports: &[MetricsReport]) -> Result<CompareReport> {
    if reports.len() < 2 {
        return Err(Error::invalid("comparison needs at least two reports"));
    }
    let split = reports[0].split;
    if reports.iter().any(|r| r.split != split) {
        return Err(Error::invalid("cannot compare reports from different splits"));
    }
    let worst = reports.iter().map(|r| r.mae).fold(f64::NEG_INFINITY, f64::max);
    let mut entries: Vec<CompareEntry> = reports
        .iter()
        .map(|r| CompareEntry {
            model_name: r.model_name.clone(),
            mae: r.mae,
            medae: r.medae,
            reduction_vs_worst_pct: if worst > 0.0 { 100.0 * (worst - r.mae) / worst } else { 0.0 },
        })
        .collect();
    entries.sort_by(|a, b| {
        a.mae
            .partial_cmp(&b.mae)
            .expect("finite")
            .then_with(|| a.model_name.cmp(&b.model_name))
    });
    Ok(CompareReport { split, entries })
}
