//! Dense 2-D tensors, the elementary neural ops, reverse-mode
//! differentiation ([`autograd`]), optimisers ([`optim`]) and a
//! finite-difference gradient checker ([`gradcheck`]).
//!
//! Everything is 64-bit and deterministic; there is no broadcasting beyond
//! what the models need (matrices, row biases, scalars).

pub mod autograd;
pub mod gradcheck;
pub mod optim;

pub use autograd::{NodeId, Tape};
pub use gradcheck::{grad_check, GradCheckReport};
pub use optim::{optimizer_step, OptimizerConfig, OptimizerKind, OptimizerState};

use alloc::string::{String, ToString};
use alloc::{format, vec, vec::Vec};
use rand::Rng;

use crate::error::{Error, Result};
use crate::math;

/// Row-major matrix of `f64`. Scalars are `1x1`, row vectors `1xK`,
/// per-node columns `Nx1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Tensor { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn scalar(v: f64) -> Self {
        Tensor { rows: 1, cols: 1, data: vec![v] }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "{} values cannot fill a {rows}x{cols} tensor",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("tensor holds a non-finite value"));
        }
        Ok(Tensor { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid("tensor needs at least one row"));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::invalid("ragged rows"));
        }
        Tensor::from_vec(rows.len(), cols, rows.concat())
    }

    /// Column vector from per-node values.
    pub fn column(values: &[f64]) -> Result<Self> {
        Tensor::from_vec(values.len(), 1, values.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn is_scalar(&self) -> bool {
        self.rows == 1 && self.cols == 1
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn transpose(&self) -> Tensor {
        let mut out = Tensor::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Boolean matrix gating attention (true = visible).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    rows: usize,
    cols: usize,
    data: Vec<bool>,
}

impl Mask {
    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid("mask needs at least one row"));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::invalid("ragged mask rows"));
        }
        Ok(Mask { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn all_true(rows: usize, cols: usize) -> Self {
        Mask { rows, cols, data: vec![true; rows * cols] }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.cols + j]
    }
}

pub fn matmul(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    if a.cols != b.rows {
        return Err(Error::invalid(format!(
            "matmul {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = Tensor::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.data[i * a.cols + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..b.cols {
                out.data[i * b.cols + j] += aik * b.data[k * b.cols + j];
            }
        }
    }
    Ok(out)
}

pub fn relu(x: &Tensor) -> Tensor {
    let mut out = x.clone();
    for v in &mut out.data {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    out
}

/// Adds a `1xF` bias row to every row of an `NxF` tensor.
pub fn add_row_bias(x: &Tensor, bias: &Tensor) -> Result<Tensor> {
    if bias.rows != 1 || bias.cols != x.cols {
        return Err(Error::invalid(format!(
            "bias {}x{} does not fit rows of {}x{}",
            bias.rows, bias.cols, x.rows, x.cols
        )));
    }
    let mut out = x.clone();
    for i in 0..x.rows {
        for j in 0..x.cols {
            out.data[i * x.cols + j] += bias.data[j];
        }
    }
    Ok(out)
}

/// Row-wise softmax over unmasked entries; masked entries get weight exactly
/// zero. Uses max-subtraction so large scores cannot overflow.
pub fn masked_softmax(scores: &Tensor, mask: &Mask) -> Result<Tensor> {
    if mask.shape() != scores.shape() {
        return Err(Error::invalid(format!(
            "mask {:?} does not match scores {:?}",
            mask.shape(),
            scores.shape()
        )));
    }
    let mut out = Tensor::zeros(scores.rows, scores.cols);
    for i in 0..scores.rows {
        let mut row_max = f64::NEG_INFINITY;
        for j in 0..scores.cols {
            if mask.get(i, j) {
                row_max = row_max.max(scores.get(i, j));
            }
        }
        if row_max == f64::NEG_INFINITY {
            return Err(Error::invalid(format!("softmax row {i} is fully masked")));
        }
        let mut denom = 0.0;
        for j in 0..scores.cols {
            if mask.get(i, j) {
                let e = math::exp(scores.get(i, j) - row_max);
                out.set(i, j, e);
                denom += e;
            }
        }
        for j in 0..scores.cols {
            if mask.get(i, j) {
                out.set(i, j, out.get(i, j) / denom);
            }
        }
    }
    Ok(out)
}

/// Mean absolute error between two equal-shape tensors.
pub fn mae_loss(pred: &Tensor, target: &Tensor) -> Result<f64> {
    if pred.shape() != target.shape() {
        return Err(Error::invalid(format!(
            "prediction {:?} and target {:?} differ in shape",
            pred.shape(),
            target.shape()
        )));
    }
    if pred.is_empty() {
        return Err(Error::invalid("mean absolute error of an empty tensor"));
    }
    let sum: f64 = pred
        .data
        .iter()
        .zip(&target.data)
        .map(|(&p, &t)| math::abs(p - t))
        .sum();
    Ok(sum / pred.len() as f64)
}

/// Weight matrix drawn uniformly from
/// `±sqrt(6 / (fan_in + fan_out))`, the variance-preserving default.
pub fn glorot_uniform(fan_in: usize, fan_out: usize, rng: &mut impl Rng) -> Tensor {
    let bound = math::sqrt(6.0 / (fan_in + fan_out) as f64);
    let mut t = Tensor::zeros(fan_in, fan_out);
    for v in &mut t.data {
        *v = rng.gen_range(-1.0..1.0) * bound;
    }
    t
}

/// Insertion-ordered parameter map. Iteration order is the registration
/// order, which fixes flattening, averaging, and digest order everywhere.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParamSet {
    entries: Vec<(String, Tensor)>,
}

impl ParamSet {
    pub fn new() -> Self {
        ParamSet { entries: Vec::new() }
    }

    pub fn insert(&mut self, name: &str, tensor: Tensor) -> Result<()> {
        if self.get(name).is_some() {
            return Err(Error::invalid(format!("duplicate parameter {name:?}")));
        }
        self.entries.push((name.to_string(), tensor));
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Tensor> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut Tensor> {
        self.entries.iter_mut().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Tensor)> {
        self.entries.iter().map(|(n, t)| (n.as_str(), t))
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = (&str, &mut Tensor)> {
        self.entries.iter_mut().map(|(n, t)| (n.as_str(), t))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total scalar count across all tensors.
    pub fn flat_len(&self) -> usize {
        self.entries.iter().map(|(_, t)| t.len()).sum()
    }

    /// True when both sets share names, order, and shapes.
    pub fn congruent(&self, other: &ParamSet) -> bool {
        self.len() == other.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|((an, at), (bn, bt))| an == bn && at.shape() == bt.shape())
    }
}

/// Gradients (or any per-parameter companion values, such as optimiser
/// moments) keyed like a [`ParamSet`].
#[derive(Debug, Clone, PartialEq)]
pub struct GradSet {
    entries: Vec<(String, Tensor)>,
}

impl GradSet {
    pub fn zeros_like(params: &ParamSet) -> Self {
        GradSet {
            entries: params
                .iter()
                .map(|(n, t)| (n.to_string(), Tensor::zeros(t.rows(), t.cols())))
                .collect(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&Tensor> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut Tensor> {
        self.entries.iter_mut().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Tensor)> {
        self.entries.iter().map(|(n, t)| (n.as_str(), t))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Checks name/order/shape congruence against `params`.
    pub fn check_congruent(&self, params: &ParamSet) -> Result<()> {
        if self.len() != params.len() {
            return Err(Error::invalid(format!(
                "{} gradient entries for {} parameters",
                self.len(),
                params.len()
            )));
        }
        for ((gn, gt), (pn, pt)) in self.entries.iter().zip(params.iter().map(|(n, t)| (n, t))) {
            if gn != pn {
                return Err(Error::invalid(format!("gradient {gn:?} out of order with {pn:?}")));
            }
            if gt.shape() != pt.shape() {
                return Err(Error::invalid(format!(
                    "gradient {gn:?} shape {:?} vs parameter shape {:?}",
                    gt.shape(),
                    pt.shape()
                )));
            }
        }
        Ok(())
    }
}
