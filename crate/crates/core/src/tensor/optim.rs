//! First-order optimisers over a [`ParamSet`].

use alloc::format;

use crate::error::{Error, Result};
use crate::math;
use crate::tensor::{GradSet, ParamSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimizerKind {
    /// Plain gradient descent.
    Sgd,
    /// Adaptive moment estimation.
    Adam,
}

impl OptimizerKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OptimizerKind::Sgd => "sgd",
            OptimizerKind::Adam => "adam",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sgd" => Ok(OptimizerKind::Sgd),
            "adam" => Ok(OptimizerKind::Adam),
            other => Err(Error::invalid(format!("unknown optimizer {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub kind: OptimizerKind,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl OptimizerConfig {
    /// Adaptive moments with the conventional decay constants.
    pub fn adam(learning_rate: f64) -> Self {
        OptimizerConfig {
            kind: OptimizerKind::Adam,
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }

    pub fn sgd(learning_rate: f64) -> Self {
        OptimizerConfig { kind: OptimizerKind::Sgd, ..OptimizerConfig::adam(learning_rate) }
    }

    /// A zero learning rate is allowed (freezes parameters; useful as a
    /// control), negative or non-finite rates are not.
    pub fn validate(&self) -> Result<()> {
        if !self.learning_rate.is_finite() || self.learning_rate < 0.0 {
            return Err(Error::config(format!(
                "learning rate must be finite and >= 0, got {}",
                self.learning_rate
            )));
        }
        for (name, b) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(0.0..1.0).contains(&b) {
                return Err(Error::config(format!("{name} must lie in [0, 1), got {b}")));
            }
        }
        if !self.epsilon.is_finite() || self.epsilon <= 0.0 {
            return Err(Error::config(format!("epsilon must be > 0, got {}", self.epsilon)));
        }
        Ok(())
    }
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig::adam(1e-3)
    }
}

/// Step counter plus per-parameter first/second moments (Adam only reads the
/// moments; plain descent keeps them at zero).
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerState {
    pub step: u64,
    pub first_moment: GradSet,
    pub second_moment: GradSet,
}

impl OptimizerState {
    pub fn new(params: &ParamSet) -> Self {
        OptimizerState {
            step: 0,
            first_moment: GradSet::zeros_like(params),
            second_moment: GradSet::zeros_like(params),
        }
    }
}

/// One in-place update of `params` from `grads`.
pub fn optimizer_step(
    params: &mut ParamSet,
    grads: &GradSet,
    state: &mut OptimizerState,
    config: &OptimizerConfig,
) -> Result<()> {
    config.validate()?;
    grads.check_congruent(params)?;
    state.first_moment.check_congruent(params)?;
    state.second_moment.check_congruent(params)?;

    state.step += 1;
    match config.kind {
        OptimizerKind::Sgd => {
            for (name, p) in params.iter_mut() {
                let g = grads.get(name).expect("congruence checked");
                for (pv, &gv) in p.data_mut().iter_mut().zip(g.data()) {
                    *pv -= config.learning_rate * gv;
                }
            }
        }
        OptimizerKind::Adam => {
            let t = state.step as f64;
            let bias1 = 1.0 - math::powf(config.beta1, t);
            let bias2 = 1.0 - math::powf(config.beta2, t);
            for (name, p) in params.iter_mut() {
                let g = grads.get(name).expect("congruence checked");
                let m = state.first_moment.get_mut(name).expect("congruence checked");
                let v = state.second_moment.get_mut(name).expect("congruence checked");
                for k in 0..p.len() {
                    let gv = g.data()[k];
                    let mv = config.beta1 * m.data()[k] + (1.0 - config.beta1) * gv;
                    let vv = config.beta2 * v.data()[k] + (1.0 - config.beta2) * gv * gv;
                    m.data_mut()[k] = mv;
                    v.data_mut()[k] = vv;
                    let m_hat = mv / bias1;
                    let v_hat = vv / bias2;
                    p.data_mut()[k] -=
                        config.learning_rate * m_hat / (math::sqrt(v_hat) + config.epsilon);
                }
            }
        }
    }
    Ok(())
}
