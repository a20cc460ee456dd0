//! Analytic test functions with exact gradients.
//!
//! Every function used by the experiments lives here: the quadratic
//! lower-bound constructions, the sine landscape with spurious SAM fixed
//! points, the two-dimensional nonsmooth max function, the hyperbola valley
//! `(xy - 1)^2`, and the two stochastic two-component mixtures on which
//! m-SAM gets trapped. Functions are immutable once built and can be shared
//! across threads.

mod deterministic;
mod stochastic;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SamError};

pub use deterministic::{
    make_hyperbola, make_nonsmooth_max, make_quadratic_lb, make_sine_example, quadratic, Hyperbola,
    NonsmoothMax, NonsmoothRegion, Quadratic1D, SineExample,
};
pub use stochastic::{
    make_cvx_counterexample, make_sc_counterexample, CounterexampleKind, CounterexampleParams,
    StochasticObjective,
};

/// Class constants of a function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionMeta {
    /// Smoothness constant (Lipschitz constant of the gradient).
    pub beta: f64,
    /// Strong-convexity constant; zero for merely convex or nonconvex.
    pub mu: f64,
    pub lipschitz: Option<f64>,
    /// Infimum of the function; `-inf` when unbounded below.
    pub f_star: f64,
    pub x_star: Option<Vec<f64>>,
    pub smooth: bool,
    pub convex: bool,
}

impl FunctionMeta {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta >= 0.0) {
            return Err(SamError::invalid("beta", "must be >= 0"));
        }
        if !(self.mu >= 0.0) {
            return Err(SamError::invalid("mu", "must be >= 0"));
        }
        if self.mu > 0.0 && !self.convex {
            return Err(SamError::invalid(
                "mu",
                "strongly convex functions must be flagged convex",
            ));
        }
        Ok(())
    }
}

/// Value and gradient oracle on `R^d`.
///
/// At nonsmooth points `gradient` returns one fixed element of the
/// subdifferential.
pub trait Objective: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
    fn meta(&self) -> &FunctionMeta;
    /// Short human-readable label.
    fn name(&self) -> &str;
}

pub type ObjectiveFunction = Arc<dyn Objective>;

/// Either a plain function or a stochastic mixture.
#[derive(Clone, Debug)]
pub enum Problem {
    Deterministic(ObjectiveFunction),
    Stochastic(StochasticObjective),
}

impl Problem {
    /// The function whose values and gradient norms are reported.
    pub fn mean(&self) -> &ObjectiveFunction {
        match self {
            Problem::Deterministic(f) => f,
            Problem::Stochastic(s) => s.mean(),
        }
    }

    pub fn dim(&self) -> usize {
        self.mean().dim()
    }

    pub fn meta(&self) -> &FunctionMeta {
        self.mean().meta()
    }

    /// Gradient-variance bound; zero for deterministic problems.
    pub fn sigma(&self) -> f64 {
        match self {
            Problem::Deterministic(_) => 0.0,
            Problem::Stochastic(s) => s.sigma(),
        }
    }

    pub fn as_stochastic(&self) -> Option<&StochasticObjective> {
        match self {
            Problem::Stochastic(s) => Some(s),
            Problem::Deterministic(_) => None,
        }
    }
}

impl From<ObjectiveFunction> for Problem {
    fn from(f: ObjectiveFunction) -> Self {
        Problem::Deterministic(f)
    }
}

impl From<StochasticObjective> for Problem {
    fn from(s: StochasticObjective) -> Self {
        Problem::Stochastic(s)
    }
}

/// Ids accepted by [`build`].
pub const CATALOG_IDS: [&str; 8] = [
    "quad-lb-1",
    "quad-lb-2",
    "quad-lb-3",
    "sine",
    "nonsmooth-max",
    "sc-counter",
    "cvx-counter",
    "hyperbola",
];

pub fn describe(id: &str) -> Option<&'static str> {
    Some(match id {
        "quad-lb-1" => "mu/2 x^2 - mu rho x (lower bound, tiny step sizes)",
        "quad-lb-2" => "beta/4 x^2 (lower bound, SAM oscillates)",
        "quad-lb-3" => "beta/2 x^2 (lower bound, step >= 2/beta blows up)",
        "sine" => "9 beta rho^2/(25 pi^2) sin(5 pi x/(3 rho)) (spurious fixed points)",
        "nonsmooth-max" => "max{|x1|, |2 x1 + x2|} (2-D, convex, nonsmooth)",
        "sc-counter" => "strongly convex two-component mixture trapping m-SAM",
        "cvx-counter" => "convex two-component mixture with unbounded m-SAM gap",
        "hyperbola" => "(xy - 1)^2 (2-D valley of minima)",
        _ => return None,
    })
}

/// Construction parameters shared by all catalog entries; each entry reads
/// the subset it needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FunctionParams {
    pub beta: f64,
    pub mu: f64,
    pub rho: f64,
    pub sigma: f64,
    /// Component probability (cvx-counter only).
    pub p: Option<f64>,
    /// Basin center (cvx-counter only).
    pub c: Option<f64>,
}

impl Default for FunctionParams {
    fn default() -> Self {
        FunctionParams {
            beta: 1.0,
            mu: 0.5,
            rho: 1.0,
            sigma: 1.0,
            p: None,
            c: None,
        }
    }
}

impl FunctionParams {
    pub const DEFAULT_CVX_P: f64 = 0.75;
    pub const DEFAULT_CVX_C_OVER_RHO: f64 = 2.0;

    pub fn counterexample_params(&self, id: &str) -> Result<CounterexampleParams> {
        match id {
            "sc-counter" => {
                if self.p.is_some() || self.c.is_some() {
                    return Err(SamError::invalid(
                        "p/c",
                        "fixed by the sc-counter construction (p = 2/3, c = 7 rho/6)",
                    ));
                }
                CounterexampleParams::strongly_convex(self.rho, self.beta, self.sigma)
            }
            "cvx-counter" => CounterexampleParams::convex(
                self.rho,
                self.beta,
                self.sigma,
                self.p.unwrap_or(Self::DEFAULT_CVX_P),
                self.c.unwrap_or(Self::DEFAULT_CVX_C_OVER_RHO * self.rho),
            ),
            other => Err(SamError::UnknownId {
                kind: "counterexample",
                id: other.to_string(),
            }),
        }
    }
}

/// Builds a catalog entry by id.
pub fn build(id: &str, params: &FunctionParams) -> Result<Problem> {
    let p = params;
    Ok(match id {
        "quad-lb-1" => make_quadratic_lb(1, p.beta, p.mu, p.rho)?.into(),
        "quad-lb-2" => make_quadratic_lb(2, p.beta, p.mu, p.rho)?.into(),
        "quad-lb-3" => make_quadratic_lb(3, p.beta, p.mu, p.rho)?.into(),
        "sine" => make_sine_example(p.beta, p.rho)?.into(),
        "nonsmooth-max" => make_nonsmooth_max().into(),
        "hyperbola" => make_hyperbola().into(),
        "sc-counter" => make_sc_counterexample(&p.counterexample_params(id)?)?.into(),
        "cvx-counter" => make_cvx_counterexample(&p.counterexample_params(id)?)?.into(),
        other => {
            return Err(SamError::UnknownId {
                kind: "function",
                id: other.to_string(),
            })
        }
    })
}

/// Starting point used when none is given.
pub fn default_x0(id: &str, params: &FunctionParams) -> Result<Vec<f64>> {
    let rho = params.rho;
    Ok(match id {
        "quad-lb-1" | "quad-lb-3" => vec![rho],
        "quad-lb-2" => vec![1.0],
        "sine" => vec![0.4 * rho],
        "nonsmooth-max" => vec![-5.0 * rho, 0.0],
        "hyperbola" => vec![0.5, 1.5],
        "sc-counter" | "cvx-counter" => vec![params.counterexample_params(id)?.c],
        other => {
            return Err(SamError::UnknownId {
                kind: "function",
                id: other.to_string(),
            })
        }
    })
}

/// Sampling box `[lo, hi]^d` used for grid-based checks of an entry.
pub fn sampling_box(id: &str, params: &FunctionParams) -> (f64, f64) {
    let rho = params.rho;
    match id {
        "nonsmooth-max" | "hyperbola" => (-3.0, 3.0),
        "sc-counter" | "cvx-counter" => {
            let c = params
                .counterexample_params(id)
                .map(|cp| cp.c)
                .unwrap_or(rho);
            stochastic::mixture_box(rho, c)
        }
        _ => (-3.0 * rho, 3.0 * rho),
    }
}
