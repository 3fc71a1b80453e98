//! Univariate logistic regression `logit P(defective) = alpha + beta * x`,
//! fitted by Newton/IRLS, with a two-sided Wald p-value for `beta`.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

const TOLERANCE: f64 = 1e-8;
const MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitStatus {
    Converged,
    /// Perfect (or quasi-perfect) separation: the MLE does not exist.
    Separated,
    /// The feature takes a single value; `beta` is not identifiable.
    ConstantFeature,
    NotConverged,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticFit {
    pub alpha: f64,
    pub beta: f64,
    /// Standard error of `beta` from the observed information matrix.
    pub beta_std_error: f64,
    pub p_value: f64,
    pub converged: bool,
    pub status: FitStatus,
    pub iterations: usize,
}

impl LogisticFit {
    pub fn is_separated(&self) -> bool {
        self.status == FitStatus::Separated
    }
}

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

fn log_likelihood(z: &[f64], y: &[bool], a: f64, b: f64) -> f64 {
    z.iter()
        .zip(y)
        .map(|(&zi, &yi)| {
            let eta = a + b * zi;
            // log(1 + e^eta) computed stably
            let softplus = if eta > 0.0 { eta + (-eta).exp().ln_1p() } else { eta.exp().ln_1p() };
            if yi { eta - softplus } else { -softplus }
        })
        .sum()
}

/// Two-sided standard-normal tail probability `2 * (1 - Phi(|z|))`.
pub(crate) fn two_sided_normal_p(z: f64) -> f64 {
    erfc(z.abs() / std::f64::consts::SQRT_2).clamp(0.0, 1.0)
}

/// Fits the model on raw feature values and boolean labels.
///
/// Separated data are detected up front: the fit then runs the capped
/// iterations, is flagged [`FitStatus::Separated`] and reports `p_value = 0`.
pub fn fit_univariate_logistic(values: &[f64], labels: &[bool]) -> Result<LogisticFit> {
    if values.len() != labels.len() {
        return Err(Error::contract("values and labels differ in length"));
    }
    if values.len() < 4 {
        return Err(Error::Statistics(
            "logistic regression needs at least 4 observations".into(),
        ));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::contract("non-finite feature value"));
    }
    let n = values.len() as f64;
    let n_pos = labels.iter().filter(|&&l| l).count();
    if n_pos == 0 || n_pos == labels.len() {
        return Err(Error::Statistics(
            "logistic regression needs both labels present".into(),
        ));
    }

    let mean = values.iter().sum::<f64>() / n;
    let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    let base_rate = n_pos as f64 / n;
    if sd == 0.0 || !sd.is_finite() {
        return Ok(LogisticFit {
            alpha: (base_rate / (1.0 - base_rate)).ln(),
            beta: 0.0,
            beta_std_error: f64::INFINITY,
            p_value: 1.0,
            converged: false,
            status: FitStatus::ConstantFeature,
            iterations: 0,
        });
    }

    let separated = {
        let max_of = |want: bool| {
            values.iter().zip(labels).filter(|p| *p.1 == want).map(|p| *p.0).fold(f64::NEG_INFINITY, f64::max)
        };
        let min_of = |want: bool| {
            values.iter().zip(labels).filter(|p| *p.1 == want).map(|p| *p.0).fold(f64::INFINITY, f64::min)
        };
        max_of(false) <= min_of(true) || max_of(true) <= min_of(false)
    };

    // Work on the standardized feature for conditioning.
    let z: Vec<f64> = values.iter().map(|v| (v - mean) / sd).collect();
    let mut a = (base_rate / (1.0 - base_rate)).ln();
    let mut b = 0.0;
    let mut ll = log_likelihood(&z, labels, a, b);
    let mut converged = false;
    let mut iterations = 0;
    let mut info = [[0.0f64; 2]; 2];

    for it in 1..=MAX_ITER {
        iterations = it;
        let (mut g0, mut g1, mut h00, mut h01, mut h11) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (&zi, &yi) in z.iter().zip(labels) {
            let p = sigmoid(a + b * zi);
            let r = f64::from(u8::from(yi)) - p;
            let w = p * (1.0 - p);
            g0 += r;
            g1 += r * zi;
            h00 += w;
            h01 += w * zi;
            h11 += w * zi * zi;
        }
        info = [[h00, h01], [h01, h11]];
        let det = h00 * h11 - h01 * h01;
        if !(det > 1e-300) {
            break;
        }
        let da = (h11 * g0 - h01 * g1) / det;
        let db = (h00 * g1 - h01 * g0) / det;

        // Step halving keeps the likelihood non-decreasing.
        let mut step = 1.0;
        let (mut na, mut nb, mut nll);
        loop {
            na = a + step * da;
            nb = b + step * db;
            nll = log_likelihood(&z, labels, na, nb);
            if nll >= ll - 1e-12 || step < 1e-10 {
                break;
            }
            step *= 0.5;
        }
        let change = (na - a).abs().max((nb - b).abs());
        a = na;
        b = nb;
        ll = nll;
        if change < TOLERANCE {
            converged = true;
            break;
        }
    }

    // Recompute the information at the final estimate.
    let (mut h00, mut h01, mut h11) = (0.0, 0.0, 0.0);
    for &zi in &z {
        let p = sigmoid(a + b * zi);
        let w = p * (1.0 - p);
        h00 += w;
        h01 += w * zi;
        h11 += w * zi * zi;
    }
    if h00 > 0.0 {
        info = [[h00, h01], [h01, h11]];
    }
    let det = info[0][0] * info[1][1] - info[0][1] * info[0][1];
    let var_b = if det > 0.0 { info[0][0] / det } else { f64::INFINITY };
    let se_z = var_b.sqrt();

    let beta = b / sd;
    let alpha = a - b * mean / sd;
    let beta_std_error = se_z / sd;

    let (status, p_value, converged) = if separated {
        (FitStatus::Separated, 0.0, false)
    } else if converged {
        let p = if se_z.is_finite() && se_z > 0.0 {
            two_sided_normal_p(b / se_z)
        } else {
            1.0
        };
        (FitStatus::Converged, p, true)
    } else {
        let p = if se_z.is_finite() && se_z > 0.0 {
            two_sided_normal_p(b / se_z)
        } else {
            1.0
        };
        (FitStatus::NotConverged, p, false)
    };

    Ok(LogisticFit {
        alpha,
        beta,
        beta_std_error,
        p_value,
        converged,
        status,
        iterations,
    })
}
