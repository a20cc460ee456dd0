use serde::{Deserialize, Serialize};

use crate::error::{Result, SamError};

/// Least-squares fit of `log(metric) = exponent * log(T) + intercept`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `(T, metric)` pairs used in the fit.
    pub points: Vec<(f64, f64)>,
    /// Pairs dropped because the metric was not positive.
    pub excluded: Vec<(f64, f64)>,
}

impl RateFit {
    pub fn predict(&self, t: f64) -> f64 {
        (self.intercept + self.exponent * t.ln()).exp()
    }
}

pub fn fit_power_law(points: &[(f64, f64)]) -> Result<RateFit> {
    let mut used = Vec::new();
    let mut excluded = Vec::new();
    for &(t, m) in points {
        if !(t > 0.0) {
            return Err(SamError::invalid("T", format!("must be > 0, got {t}")));
        }
        if m > 0.0 && m.is_finite() {
            used.push((t, m));
        } else {
            log::warn!("excluding (T = {t}, metric = {m}) from the rate fit");
            excluded.push((t, m));
        }
    }
    if used.len() < 3 {
        return Err(SamError::Precondition(format!(
            "rate fit needs at least 3 positive points, got {}",
            used.len()
        )));
    }
    let n = used.len() as f64;
    let lx: Vec<f64> = used.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = used.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(SamError::Precondition(
            "rate fit needs distinct T values".into(),
        ));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my) * (y - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let r = y - (intercept + exponent * x);
            r * r
        })
        .sum();
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(RateFit {
        exponent,
        intercept,
        r_squared,
        points: used,
        excluded,
    })
}
