//! Central-finite-difference verification of analytic gradients.

use alloc::string::{String, ToString};
use alloc::{format, vec::Vec};

use crate::error::{Error, Result};
use crate::tensor::{GradSet, ParamSet};

/// Smallest and largest accepted probe step.
pub const STEP_RANGE: (f64, f64) = (1e-7, 1e-3);

/// Relative errors are measured against `max(|analytic|, |numeric|, FLOOR)`,
/// so near-zero gradients are judged absolutely.
pub const REL_ERROR_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct GradCheckReport {
    /// Worst relative error per parameter, in parameter order.
    pub per_param: Vec<(String, f64)>,
    pub max_rel_error: f64,
    pub step: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Compares `analytic` gradients against central differences of `loss_fn`
/// around `params`, perturbing every scalar in turn.
///
/// `loss_fn` must be a pure function of the parameter values.
pub fn grad_check<F>(
    params: &ParamSet,
    analytic: &GradSet,
    mut loss_fn: F,
    step: f64,
    tolerance: f64,
) -> Result<GradCheckReport>
where
    F: FnMut(&ParamSet) -> Result<f64>,
{
    if !(step >= STEP_RANGE.0 && step <= STEP_RANGE.1) {
        return Err(Error::invalid(format!(
            "finite-difference step must lie in [{}, {}], got {step}",
            STEP_RANGE.0, STEP_RANGE.1
        )));
    }
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::invalid(format!("tolerance must be > 0, got {tolerance}")));
    }
    analytic.check_congruent(params)?;

    let mut work = params.clone();
    let mut per_param = Vec::new();
    let mut max_rel_error = 0.0_f64;
    let names: Vec<String> = params.names().map(|n| n.to_string()).collect();
    for name in &names {
        let len = params.get(name).expect("own name").len();
        let mut worst = 0.0_f64;
        for k in 0..len {
            let original = work.get(name).expect("own name").data()[k];
            work.get_mut(name).expect("own name").data_mut()[k] = original + step;
            let plus = loss_fn(&work)?;
            work.get_mut(name).expect("own name").data_mut()[k] = original - step;
            let minus = loss_fn(&work)?;
            work.get_mut(name).expect("own name").data_mut()[k] = original;

            let numeric = (plus - minus) / (2.0 * step);
            let a = analytic.get(name).expect("congruent").data()[k];
            let denom = a.abs().max(numeric.abs()).max(REL_ERROR_FLOOR);
            worst = worst.max((a - numeric).abs() / denom);
        }
        per_param.push((name.clone(), worst));
        max_rel_error = max_rel_error.max(worst);
    }
    Ok(GradCheckReport {
        per_param,
        max_rel_error,
        step,
        tolerance,
        pass: max_rel_error <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{Tape, Tensor};

    #[test]
    fn linear_model_is_exact() {
        // loss = w * 3 + b (all scalars): gradients 3 and 1.
        let mut params = ParamSet::new();
        params.insert("w", Tensor::scalar(1.2)).unwrap();
        params.insert("b", Tensor::scalar(-0.4)).unwrap();
        let eval = |p: &ParamSet| -> Result<(f64, GradSet)> {
            let mut tape = Tape::new();
            let w = tape.param("w", p.get("w").unwrap().clone());
            let b = tape.param("b", p.get("b").unwrap().clone());
            let x = tape.constant(Tensor::scalar(3.0));
            let wx = tape.matmul(w, x)?;
            let loss = tape.add(wx, b)?;
            Ok((tape.scalar_value(loss)?, tape.backward(loss, p)?))
        };
        let (_, analytic) = eval(&params).unwrap();
        let report =
            grad_check(&params, &analytic, |p| eval(p).map(|(l, _)| l), 1e-5, 1e-4).unwrap();
        assert!(report.pass);
        assert!(report.max_rel_error <= 1e-8, "linear model error {}", report.max_rel_error);
    }

    #[test]
    fn detects_wrong_gradient() {
        let mut params = ParamSet::new();
        params.insert("w", Tensor::scalar(2.0)).unwrap();
        let mut wrong = GradSet::zeros_like(&params);
        wrong.get_mut("w").unwrap().set(0, 0, 100.0);
        // True loss w^2 has gradient 4 at w=2, not 100.
        let report = grad_check(
            &params,
            &wrong,
            |p| {
                let w = p.get("w").unwrap().get(0, 0);
                Ok(w * w)
            },
            1e-5,
            1e-4,
        )
        .unwrap();
        assert!(!report.pass);
    }

    #[test]
    fn step_outside_range_rejected() {
        let mut params = ParamSet::new();
        params.insert("w", Tensor::scalar(0.0)).unwrap();
        let g = GradSet::zeros_like(&params);
        assert!(grad_check(&params, &g, |_| Ok(0.0), 1e-8, 1e-4).is_err());
        assert!(grad_check(&params, &g, |_| Ok(0.0), 1e-2, 1e-4).is_err());
    }
}
