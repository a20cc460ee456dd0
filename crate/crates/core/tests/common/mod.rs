//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls the crate's optimizers or virtual-loss code; each
//! helper is written from the defining formulas.

#![allow(dead_code)]

use std::f64::consts::PI;

use samlab::catalog::{self, FunctionParams, ObjectiveFunction, Problem};

/// One deterministic SAM step computed from a raw gradient closure.
pub fn oracle_sam_step(
    grad: impl Fn(&[f64]) -> Vec<f64>,
    x: &[f64],
    rho: f64,
    eta: f64,
) -> Vec<f64> {
    let g = grad(x);
    let n = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    let y: Vec<f64> = if n <= 1e-12 {
        x.to_vec()
    } else {
        x.iter().zip(&g).map(|(xi, gi)| xi + rho * gi / n).collect()
    };
    let gy = grad(&y);
    x.iter().zip(&gy).map(|(xi, gi)| xi - eta * gi).collect()
}

/// Central difference gradient.
pub fn finite_difference(f: &ObjectiveFunction, x: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let h = 1e-6 * (1.0 + x[i].abs());
            let mut a = x.to_vec();
            let mut b = x.to_vec();
            a[i] += h;
            b[i] -= h;
            (f.value(&a) - f.value(&b)) / (2.0 * h)
        })
        .collect()
}

/// Piecewise closed form of the sine example's virtual loss.
pub fn sine_virtual_loss(x: f64, beta: f64, rho: f64) -> f64 {
    let amp = 9.0 * beta * rho * rho / (25.0 * PI * PI);
    let k = 5.0 * PI / (3.0 * rho);
    // position within the period 1.2 rho, measured from -0.3 rho
    let u = (x / rho + 0.3).rem_euclid(1.2);
    if u <= 0.6 {
        amp * (k * x + 5.0 * PI / 3.0).sin()
    } else {
        amp * (k * x - 5.0 * PI / 3.0).sin()
    }
}

/// `(3 / (5 pi)) |cos(7 pi / 6)|`: the sine gradient at its limit point `0.7`.
pub fn sine_floor_grad() -> f64 {
    3.0 / (5.0 * PI) * (7.0 * PI / 6.0).cos().abs()
}

/// Right side of the one-step deterministic descent inequality.
pub fn det_descent_rhs(f_x: f64, g: f64, eta: f64, beta: f64, mu: f64, rho: f64) -> f64 {
    f_x - eta / 2.0 * g * g - eta * mu * rho / 2.0 * g + eta * eta * beta.powi(3) * rho * rho / 2.0
}

/// Right side of the one-step stochastic descent inequality.
pub fn sto_descent_rhs(
    f_x: f64,
    g: f64,
    eta: f64,
    beta: f64,
    mu: f64,
    rho: f64,
    sigma: f64,
) -> f64 {
    f_x - eta / 2.0 * g * g - eta * mu * rho / 2.0 * g + 2.0 * eta * beta * beta * rho * rho
        - eta * eta * beta * (beta * beta * rho * rho - sigma * sigma)
}

/// Counterexample constants from their defining formulas.
pub fn sc_counter_a(beta: f64, rho: f64, sigma: f64) -> f64 {
    (beta / 5.0).min(sigma / (5.0 * rho))
}

pub fn cvx_counter_a(beta: f64, rho: f64, sigma: f64, p: f64) -> f64 {
    (beta * rho * (1.0 - p) / (8.0 * p)).min(sigma * (1.0 - p).sqrt() / (3.0 * p.sqrt()))
}

pub fn mean_and_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (m, 0.0);
    }
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

/// Every catalog entry built with default parameters, plus its sampling box.
pub fn catalog_entries() -> Vec<(&'static str, Problem, (f64, f64))> {
    let p = FunctionParams::default();
    catalog::CATALOG_IDS
        .iter()
        .map(|&id| {
            let params = match id {
                "sc-counter" => FunctionParams {
                    beta: 5.0,
                    sigma: 10.0,
                    ..p.clone()
                },
                _ => p.clone(),
            };
            (
                id,
                catalog::build(id, &params).unwrap(),
                catalog::sampling_box(id, &params),
            )
        })
        .collect()
}
