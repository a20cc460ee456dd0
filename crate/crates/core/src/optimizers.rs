//! Update rules: GD, unnormalized SAM (USAM), deterministic SAM, and the
//! two stochastic SAM variants.
//!
//! All step functions are pure. Stochastic steps draw from a caller-owned
//! [`SamRng`], so independent trials can run in parallel and any trajectory
//! can be replayed from `(seed, trial)`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{Objective, Problem, StochasticObjective};
use crate::error::{Result, SamError};
use crate::vecops::{add_scaled, all_finite, norm};

pub const DEFAULT_ZERO_GRAD_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Gd,
    Usam,
    DetSam,
    NSam,
    MSam,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::Gd,
        Variant::Usam,
        Variant::DetSam,
        Variant::NSam,
        Variant::MSam,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Gd => "gd",
            Variant::Usam => "usam",
            Variant::DetSam => "det-sam",
            Variant::NSam => "n-sam",
            Variant::MSam => "m-sam",
        }
    }

    pub fn is_stochastic(self) -> bool {
        matches!(self, Variant::NSam | Variant::MSam)
    }

    pub fn uses_rho(self) -> bool {
        !matches!(self, Variant::Gd)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = SamError;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| SamError::UnknownId {
                kind: "optimizer",
                id: s.to_string(),
            })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerConfig {
    pub variant: Variant,
    pub rho: f64,
    pub eta: f64,
    #[serde(default = "default_eps")]
    pub zero_grad_eps: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_eps() -> f64 {
    DEFAULT_ZERO_GRAD_EPS
}

impl OptimizerConfig {
    pub fn new(variant: Variant, rho: f64, eta: f64) -> Self {
        OptimizerConfig {
            variant,
            rho,
            eta,
            zero_grad_eps: DEFAULT_ZERO_GRAD_EPS,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    /// `eta = 0` is accepted and freezes the iterate.
    pub fn validate(&self) -> Result<()> {
        if !(self.eta >= 0.0) || !self.eta.is_finite() {
            return Err(SamError::invalid(
                "eta",
                format!("must be finite and >= 0, got {}", self.eta),
            ));
        }
        if self.variant.uses_rho() && !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(SamError::invalid(
                "rho",
                format!("must be > 0 for {}, got {}", self.variant, self.rho),
            ));
        }
        if !(self.zero_grad_eps > 0.0) {
            return Err(SamError::invalid("zero_grad_eps", "must be > 0"));
        }
        Ok(())
    }
}

/// Per-step detail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub x: Vec<f64>,
    /// Perturbed point; `None` for GD.
    pub y: Option<Vec<f64>>,
    /// `(ascent, descent)` component indices for stochastic steps.
    pub sampled_component: Option<(usize, usize)>,
    /// `||grad f(x)||` of the mean function.
    pub grad_norm_at_x: f64,
}

/// Seeded ChaCha8 stream. Trial `k` of an experiment uses stream `k` of the
/// experiment seed.
#[derive(Clone, Debug)]
pub struct SamRng(ChaCha8Rng);

impl SamRng {
    pub fn new(seed: u64) -> Self {
        SamRng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn for_trial(seed: u64, trial: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        SamRng(rng)
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.0.random::<f64>()
    }
}

fn expect(cfg: &OptimizerConfig, allowed: &[Variant], label: &'static str) -> Result<()> {
    cfg.validate()?;
    if allowed.contains(&cfg.variant) {
        Ok(())
    } else {
        Err(SamError::WrongVariant {
            expected: label,
            got: cfg.variant.to_string(),
        })
    }
}

fn finite(v: &[f64], what: &str) -> Result<()> {
    if all_finite(v) {
        Ok(())
    } else {
        Err(SamError::NonFinite {
            context: format!("{what} = {v:?}"),
        })
    }
}

/// `x + rho g / ||g||`, or `x` itself when `||g|| <= eps`.
pub fn perturb(x: &[f64], g: &[f64], rho: f64, eps: f64) -> Vec<f64> {
    let n = norm(g);
    if n <= eps {
        x.to_vec()
    } else {
        add_scaled(x, rho / n, g)
    }
}

pub fn gd_step(
    f: &dyn Objective,
    x: &[f64],
    cfg: &OptimizerConfig,
) -> Result<(Vec<f64>, StepRecord)> {
    expect(cfg, &[Variant::Gd], "gd")?;
    finite(x, "x")?;
    let g = f.gradient(x);
    finite(&g, "grad f(x)")?;
    let next = add_scaled(x, -cfg.eta, &g);
    finite(&next, "next iterate")?;
    Ok((
        next,
        StepRecord {
            x: x.to_vec(),
            y: None,
            sampled_component: None,
            grad_norm_at_x: norm(&g),
        },
    ))
}

pub fn usam_step(
    f: &dyn Objective,
    x: &[f64],
    cfg: &OptimizerConfig,
) -> Result<(Vec<f64>, StepRecord)> {
    expect(cfg, &[Variant::Usam], "usam")?;
    finite(x, "x")?;
    let g = f.gradient(x);
    finite(&g, "grad f(x)")?;
    let y = add_scaled(x, cfg.rho, &g);
    let gy = f.gradient(&y);
    finite(&gy, "grad f(y)")?;
    let next = add_scaled(x, -cfg.eta, &gy);
    finite(&next, "next iterate")?;
    Ok((
        next,
        StepRecord {
            x: x.to_vec(),
            y: Some(y),
            sampled_component: None,
            grad_norm_at_x: norm(&g),
        },
    ))
}

pub fn det_sam_step(
    f: &dyn Objective,
    x: &[f64],
    cfg: &OptimizerConfig,
) -> Result<(Vec<f64>, StepRecord)> {
    expect(cfg, &[Variant::DetSam], "det-sam")?;
    finite(x, "x")?;
    let g = f.gradient(x);
    finite(&g, "grad f(x)")?;
    let y = perturb(x, &g, cfg.rho, cfg.zero_grad_eps);
    let gy = f.gradient(&y);
    finite(&gy, "grad f(y)")?;
    let next = add_scaled(x, -cfg.eta, &gy);
    finite(&next, "next iterate")?;
    Ok((
        next,
        StepRecord {
            x: x.to_vec(),
            y: Some(y),
            sampled_component: None,
            grad_norm_at_x: norm(&g),
        },
    ))
}

/// One n-SAM or m-SAM step. n-SAM draws two independent indices, m-SAM
/// draws one and reuses it.
pub fn stochastic_sam_step(
    objective: &StochasticObjective,
    x: &[f64],
    cfg: &OptimizerConfig,
    rng: &mut SamRng,
) -> Result<(Vec<f64>, StepRecord)> {
    expect(cfg, &[Variant::NSam, Variant::MSam], "n-sam or m-sam")?;
    let i = objective.sample_index(rng.uniform());
    let j = match cfg.variant {
        Variant::NSam => objective.sample_index(rng.uniform()),
        _ => i,
    };
    stochastic_sam_step_with(objective, x, cfg, i, j)
}

/// Stochastic step with the ascent and descent components fixed.
pub fn stochastic_sam_step_with(
    objective: &StochasticObjective,
    x: &[f64],
    cfg: &OptimizerConfig,
    ascent: usize,
    descent: usize,
) -> Result<(Vec<f64>, StepRecord)> {
    expect(cfg, &[Variant::NSam, Variant::MSam], "n-sam or m-sam")?;
    let n = objective.components().len();
    if ascent >= n || descent >= n {
        return Err(SamError::invalid(
            "component",
            format!("index out of range for {n} components"),
        ));
    }
    finite(x, "x")?;
    let g = objective.component(ascent).gradient(x);
    finite(&g, "sampled grad at x")?;
    let y = perturb(x, &g, cfg.rho, cfg.zero_grad_eps);
    let gy = objective.component(descent).gradient(&y);
    finite(&gy, "sampled grad at y")?;
    let next = add_scaled(x, -cfg.eta, &gy);
    finite(&next, "next iterate")?;
    Ok((
        next,
        StepRecord {
            x: x.to_vec(),
            y: Some(y),
            sampled_component: Some((ascent, descent)),
            grad_norm_at_x: norm(&objective.mean().gradient(x)),
        },
    ))
}

/// Dispatches on the configured variant.
///
/// Deterministic variants on a mixture use its mean. Stochastic variants
/// on a plain function see a one-point distribution.
pub fn step(
    problem: &Problem,
    x: &[f64],
    cfg: &OptimizerConfig,
    rng: &mut SamRng,
) -> Result<(Vec<f64>, StepRecord)> {
    let f = problem.mean().as_ref();
    match cfg.variant {
        Variant::Gd => gd_step(f, x, cfg),
        Variant::Usam => usam_step(f, x, cfg),
        Variant::DetSam => det_sam_step(f, x, cfg),
        Variant::NSam | Variant::MSam => match problem {
            Problem::Stochastic(s) => stochastic_sam_step(s, x, cfg, rng),
            Problem::Deterministic(_) => {
                let det = OptimizerConfig {
                    variant: Variant::DetSam,
                    ..cfg.clone()
                };
                let (next, mut rec) = det_sam_step(f, x, &det)?;
                rec.sampled_component = Some((0, 0));
                Ok((next, rec))
            }
        },
    }
}
