//! Record-by-run reverse-mode differentiation.
//!
//! A [`Tape`] evaluates each operation eagerly as it is recorded, then
//! [`Tape::backward`] walks the record in reverse, accumulating gradients
//! for every named parameter leaf. The op set is exactly what the models
//! need; there is no graph optimisation.

use alloc::string::{String, ToString};
use alloc::{format, vec, vec::Vec};

use crate::error::{Error, Result};
use crate::math;
use crate::tensor::{self, GradSet, Mask, ParamSet, Tensor};

/// Handle to a recorded value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeId(usize);

enum Op {
    Leaf { param: Option<String> },
    MatMul { a: NodeId, b: NodeId },
    Transpose { a: NodeId },
    Relu { a: NodeId },
    AddRowBias { a: NodeId, bias: NodeId },
    MaskedSoftmax { a: NodeId, mask: Mask },
    MaeLoss { pred: NodeId, target: Tensor },
    Add { a: NodeId, b: NodeId },
    Scale { a: NodeId, c: f64 },
}

struct Node {
    op: Op,
    value: Tensor,
}

/// One forward evaluation's operation record.
#[derive(Default)]
pub struct Tape {
    nodes: Vec<Node>,
}

impl Tape {
    pub fn new() -> Self {
        Tape { nodes: Vec::new() }
    }

    fn push(&mut self, op: Op, value: Tensor) -> NodeId {
        self.nodes.push(Node { op, value });
        NodeId(self.nodes.len() - 1)
    }

    /// Constant input; receives no gradient.
    pub fn constant(&mut self, value: Tensor) -> NodeId {
        self.push(Op::Leaf { param: None }, value)
    }

    /// Named parameter leaf; its gradient lands in the backward result.
    pub fn param(&mut self, name: &str, value: Tensor) -> NodeId {
        self.push(Op::Leaf { param: Some(name.to_string()) }, value)
    }

    pub fn value(&self, id: NodeId) -> &Tensor {
        &self.nodes[id.0].value
    }

    /// Value of a `1x1` node.
    pub fn scalar_value(&self, id: NodeId) -> Result<f64> {
        let v = self.value(id);
        if !v.is_scalar() {
            return Err(Error::invalid(format!("node holds a {:?} tensor, not a scalar", v.shape())));
        }
        Ok(v.get(0, 0))
    }

    pub fn matmul(&mut self, a: NodeId, b: NodeId) -> Result<NodeId> {
        let value = tensor::matmul(self.value(a), self.value(b))?;
        Ok(self.push(Op::MatMul { a, b }, value))
    }

    pub fn transpose(&mut self, a: NodeId) -> NodeId {
        let value = self.value(a).transpose();
        self.push(Op::Transpose { a }, value)
    }

    pub fn relu(&mut self, a: NodeId) -> NodeId {
        let value = tensor::relu(self.value(a));
        self.push(Op::Relu { a }, value)
    }

    pub fn add_row_bias(&mut self, a: NodeId, bias: NodeId) -> Result<NodeId> {
        let value = tensor::add_row_bias(self.value(a), self.value(bias))?;
        Ok(self.push(Op::AddRowBias { a, bias }, value))
    }

    pub fn masked_softmax(&mut self, a: NodeId, mask: &Mask) -> Result<NodeId> {
        let value = tensor::masked_softmax(self.value(a), mask)?;
        Ok(self.push(Op::MaskedSoftmax { a, mask: mask.clone() }, value))
    }

    pub fn mae_loss(&mut self, pred: NodeId, target: &Tensor) -> Result<NodeId> {
        let value = Tensor::scalar(tensor::mae_loss(self.value(pred), target)?);
        Ok(self.push(Op::MaeLoss { pred, target: target.clone() }, value))
    }

    pub fn add(&mut self, a: NodeId, b: NodeId) -> Result<NodeId> {
        let (va, vb) = (self.value(a), self.value(b));
        if va.shape() != vb.shape() {
            return Err(Error::invalid(format!(
                "adding {:?} to {:?}",
                va.shape(),
                vb.shape()
            )));
        }
        let mut value = va.clone();
        for (o, &x) in value.data_mut().iter_mut().zip(vb.data()) {
            *o += x;
        }
        Ok(self.push(Op::Add { a, b }, value))
    }

    pub fn scale(&mut self, a: NodeId, c: f64) -> Result<NodeId> {
        if !c.is_finite() {
            return Err(Error::invalid(format!("non-finite scale factor {c}")));
        }
        let mut value = self.value(a).clone();
        for v in value.data_mut() {
            *v *= c;
        }
        Ok(self.push(Op::Scale { a, c }, value))
    }

    /// Reverse-mode gradients of the scalar at `loss` with respect to every
    /// parameter in `params`. Parameters never touched by the recorded
    /// computation keep zero gradients.
    pub fn backward(&self, loss: NodeId, params: &ParamSet) -> Result<GradSet> {
        if !self.value(loss).is_scalar() {
            return Err(Error::invalid(format!(
                "backward root must be a scalar, got {:?}",
                self.value(loss).shape()
            )));
        }
        let mut grads: Vec<Option<Tensor>> = vec![None; self.nodes.len()];
        grads[loss.0] = Some(Tensor::scalar(1.0));

        for i in (0..self.nodes.len()).rev() {
            let node = &self.nodes[i];
            if matches!(node.op, Op::Leaf { .. }) {
                continue;
            }
            let Some(g) = grads[i].take() else { continue };
            match &node.op {
                Op::Leaf { .. } => unreachable!(),
                Op::MatMul { a, b } => {
                    let da = tensor::matmul(&g, &self.nodes[b.0].value.transpose())?;
                    let db = tensor::matmul(&self.nodes[a.0].value.transpose(), &g)?;
                    accumulate(&mut grads, *a, da);
                    accumulate(&mut grads, *b, db);
                }
                Op::Transpose { a } => {
                    accumulate(&mut grads, *a, g.transpose());
                }
                Op::Relu { a } => {
                    let input = &self.nodes[a.0].value;
                    let mut da = g;
                    for (dv, &x) in da.data_mut().iter_mut().zip(input.data()) {
                        if x <= 0.0 {
                            *dv = 0.0;
                        }
                    }
                    accumulate(&mut grads, *a, da);
                }
                Op::AddRowBias { a, bias } => {
                    let mut db = Tensor::zeros(1, g.cols());
                    for i in 0..g.rows() {
                        for j in 0..g.cols() {
                            let v = db.get(0, j) + g.get(i, j);
                            db.set(0, j, v);
                        }
                    }
                    accumulate(&mut grads, *bias, db);
                    accumulate(&mut grads, *a, g);
                }
                Op::MaskedSoftmax { a, mask } => {
                    let alpha = &node.value;
                    let mut da = Tensor::zeros(alpha.rows(), alpha.cols());
                    for r in 0..alpha.rows() {
                        let mut dot = 0.0;
                        for c in 0..alpha.cols() {
                            if mask.get(r, c) {
                                dot += alpha.get(r, c) * g.get(r, c);
                            }
                        }
                        for c in 0..alpha.cols() {
                            if mask.get(r, c) {
                                da.set(r, c, alpha.get(r, c) * (g.get(r, c) - dot));
                            }
                        }
                    }
                    accumulate(&mut grads, *a, da);
                }
                Op::MaeLoss { pred, target } => {
                    let gs = g.get(0, 0);
                    let p = &self.nodes[pred.0].value;
                    let scale = gs / p.len() as f64;
                    let mut dp = Tensor::zeros(p.rows(), p.cols());
                    for (o, (&pv, &tv)) in
                        dp.data_mut().iter_mut().zip(p.data().iter().zip(target.data()))
                    {
                        *o = scale * math::sign0(pv - tv);
                    }
                    accumulate(&mut grads, *pred, dp);
                }
                Op::Add { a, b } => {
                    accumulate(&mut grads, *a, g.clone());
                    accumulate(&mut grads, *b, g);
                }
                Op::Scale { a, c } => {
                    let mut da = g;
                    for v in da.data_mut() {
                        *v *= c;
                    }
                    accumulate(&mut grads, *a, da);
                }
            }
        }

        let mut out = GradSet::zeros_like(params);
        for (i, node) in self.nodes.iter().enumerate() {
            if let Op::Leaf { param: Some(name) } = &node.op {
                let Some(g) = &grads[i] else { continue };
                let slot = out.get_mut(name).ok_or_else(|| {
                    Error::invalid(format!("tape parameter {name:?} missing from parameter set"))
                })?;
                if slot.shape() != g.shape() {
                    return Err(Error::invalid(format!(
                        "parameter {name:?} is {:?} on the tape but {:?} in the set",
                        g.shape(),
                        slot.shape()
                    )));
                }
                for (o, &x) in slot.data_mut().iter_mut().zip(g.data()) {
                    *o += x;
                }
            }
        }
        Ok(out)
    }
}

fn accumulate(grads: &mut [Option<Tensor>], id: NodeId, delta: Tensor) {
    match &mut grads[id.0] {
        Some(g) => {
            for (o, &x) in g.data_mut().iter_mut().zip(delta.data()) {
                *o += x;
            }
        }
        slot @ None => *slot = Some(delta),
    }
}
