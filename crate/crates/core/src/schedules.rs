//! Step sizes prescribed by the convergence theorems, and the explicit
//! right-hand sides of the corresponding bounds.
//!
//! Logarithms are natural. `[s]_+` denotes `max{s, 0}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SamError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleInputs {
    pub beta: f64,
    pub mu: f64,
    pub sigma: f64,
    pub rho: f64,
    /// `f(x0) - f*`.
    pub delta: f64,
    pub t: usize,
    pub lipschitz: Option<f64>,
}

impl ScheduleInputs {
    /// `[sigma^2 - beta^2 rho^2]_+`
    pub fn excess_variance(&self) -> f64 {
        (self.sigma * self.sigma - self.beta * self.beta * self.rho * self.rho).max(0.0)
    }

    fn tf(&self) -> f64 {
        self.t as f64
    }

    fn check(&self, id: TheoremId) -> Result<()> {
        fn pos(name: &'static str, v: f64) -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(SamError::invalid(
                    name,
                    format!("must be finite and > 0, got {v}"),
                ))
            }
        }
        fn nonneg(name: &'static str, v: f64) -> Result<()> {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(SamError::invalid(
                    name,
                    format!("must be finite and >= 0, got {v}"),
                ))
            }
        }
        pos("beta", self.beta)?;
        pos("rho", self.rho)?;
        nonneg("delta", self.delta)?;
        nonneg("sigma", self.sigma)?;
        nonneg("mu", self.mu)?;
        if self.t == 0 {
            return Err(SamError::invalid("t", "must be >= 1"));
        }
        if self.mu > self.beta {
            return Err(SamError::invalid("mu", "must not exceed beta"));
        }
        match id {
            TheoremId::Thm31 | TheoremId::Thm41 => pos("mu", self.mu)?,
            TheoremId::Thm46 => pos("sigma", self.sigma)?,
            _ => {}
        }
        if id == TheoremId::Thm47 {
            let l = self
                .lipschitz
                .ok_or_else(|| SamError::invalid("lipschitz", "required for thm47"))?;
            nonneg("lipschitz", l)?;
            pos("sigma^2 + L^2", self.sigma * self.sigma + l * l)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremId {
    Thm31,
    Thm33,
    Thm34,
    Thm41,
    Thm44,
    Thm46,
    Thm47,
}

impl TheoremId {
    pub const ALL: [TheoremId; 7] = [
        TheoremId::Thm31,
        TheoremId::Thm33,
        TheoremId::Thm34,
        TheoremId::Thm41,
        TheoremId::Thm44,
        TheoremId::Thm46,
        TheoremId::Thm47,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Thm31 => "thm31",
            TheoremId::Thm33 => "thm33",
            TheoremId::Thm34 => "thm34",
            TheoremId::Thm41 => "thm41",
            TheoremId::Thm44 => "thm44",
            TheoremId::Thm46 => "thm46",
            TheoremId::Thm47 => "thm47",
        }
    }

    pub fn is_stochastic(self) -> bool {
        matches!(
            self,
            TheoremId::Thm41 | TheoremId::Thm44 | TheoremId::Thm46 | TheoremId::Thm47
        )
    }

    /// Largest step size at which `bound_rhs` is valid.
    pub fn eta_cap(self, beta: f64) -> f64 {
        match self {
            TheoremId::Thm34 | TheoremId::Thm47 => 1.0 / beta,
            _ => 1.0 / (2.0 * beta),
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = SamError;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| SamError::UnknownId {
                kind: "theorem",
                id: s.to_string(),
            })
    }
}

/// `min{(1/(mu T)) max{1, ln(mu^5 Delta T^2 / (beta^6 rho^2))}, 1/(2 beta)}`
pub fn eta_thm31(inp: &ScheduleInputs) -> Result<f64> {
    inp.check(TheoremId::Thm31)?;
    let (b, m, r, t) = (inp.beta, inp.mu, inp.rho, inp.tf());
    let arg = m.powi(5) * inp.delta * t * t / (b.powi(6) * r * r);
    let lg = if arg > 0.0 { arg.ln().max(1.0) } else { 1.0 };
    Ok((lg / (m * t)).min(0.5 / b))
}

/// `min{sqrt(2 Delta) / sqrt(beta^3 rho^2 T), 1/(2 beta)}`
pub fn eta_thm33(inp: &ScheduleInputs) -> Result<f64> {
    inp.check(TheoremId::Thm33)?;
    let (b, r, t) = (inp.beta, inp.rho, inp.tf());
    Ok(((2.0 * inp.delta).sqrt() / (b.powi(3) * r * r * t).sqrt()).min(0.5 / b))
}

/// `1/beta`
pub fn eta_thm34(inp: &ScheduleInputs) -> Result<f64> {
    inp.check(TheoremId::Thm34)?;
    Ok(1.0 / inp.beta)
}

/// `min{(1/(mu T)) max{1, ln(mu^2 Delta T / (beta [sigma^2 - beta^2 rho^2]_+))}, 1/(2 beta)}`,
/// and `1/(2 beta)` when the clamp is zero.
pub fn eta_thm41(inp: &ScheduleInputs) -> Result<f64> {
    inp.check(TheoremId::Thm41)?;
    let (b, m, t) = (inp.beta, inp.mu, inp.tf());
    let s = inp.excess_variance();
    if s == 0.0 {
        return Ok(0.5 / b);
    }
    let arg = m * m * inp.delta * t / (b * s);
    let lg = if arg > 0.0 { arg.ln().max(1.0) } else { 1.0 };
    Ok((lg / (m * t)).min(0.5 / b))
}

/// `min{sqrt(Delta) / sqrt(beta [sigma^2 - beta^2 rho^2]_+ T), 1/(2 beta)}`
pub fn eta_thm44(inp: &ScheduleInputs) -> Result<f64> {
    inp.check(TheoremId::Thm44)?;
    let b = inp.beta;
    let s = inp.excess_variance();
    if s == 0.0 {
        return Ok(0.5 / b);
    }
    Ok((inp.delta.sqrt() / (b * s * inp.tf()).sqrt()).min(0.5 / b))
}

/// `min{1/(2 beta), sqrt(Delta) / sqrt(beta sigma^2 T)}`
pub fn eta_thm46(inp: &ScheduleInputs) -> Result<f64> {
    inp.check(TheoremId::Thm46)?;
    let b = inp.beta;
    let s2 = inp.sigma * inp.sigma;
    Ok((0.5 / b).min(inp.delta.sqrt() / (b * s2 * inp.tf()).sqrt()))
}

/// `sqrt(Delta) / sqrt(beta (sigma^2 + L^2) T)`
pub fn eta_thm47(inp: &ScheduleInputs) -> Result<f64> {
    inp.check(TheoremId::Thm47)?;
    let l = inp.lipschitz.unwrap_or_default();
    let s = inp.sigma * inp.sigma + l * l;
    Ok(inp.delta.sqrt() / (inp.beta * s * inp.tf()).sqrt())
}

pub fn step_size(id: TheoremId, inp: &ScheduleInputs) -> Result<f64> {
    match id {
        TheoremId::Thm31 => eta_thm31(inp),
        TheoremId::Thm33 => eta_thm33(inp),
        TheoremId::Thm34 => eta_thm34(inp),
        TheoremId::Thm41 => eta_thm41(inp),
        TheoremId::Thm44 => eta_thm44(inp),
        TheoremId::Thm46 => eta_thm46(inp),
        TheoremId::Thm47 => eta_thm47(inp),
    }
}

/// Explicit bound at step size `eta`, before any asymptotic simplification.
///
/// `eta = 0` makes the `1/(eta T)` bounds infinite.
pub fn bound_rhs(id: TheoremId, inp: &ScheduleInputs, eta: f64) -> Result<f64> {
    inp.check(id)?;
    if !(eta >= 0.0) || !eta.is_finite() {
        return Err(SamError::invalid("eta", "must be finite and >= 0"));
    }
    let (b, m, r, d, t) = (inp.beta, inp.mu, inp.rho, inp.delta, inp.tf());
    let s2 = inp.sigma * inp.sigma;
    let br2 = b * b * r * r;
    let inv = |c: f64| {
        if eta == 0.0 {
            f64::INFINITY
        } else {
            c * d / (eta * t)
        }
    };
    Ok(match id {
        TheoremId::Thm31 => {
            (1.0 - eta * m).powf(t) * d + eta * eta * b.powi(6) * r * r / (2.0 * m.powi(3))
        }
        TheoremId::Thm33 => inv(2.0) + eta * b.powi(3) * r * r,
        TheoremId::Thm34 => inv(2.0) + br2,
        TheoremId::Thm41 => (1.0 - eta * m).powf(t) * d + 2.0 * br2 / m + eta * b * (s2 - br2) / m,
        TheoremId::Thm44 => inv(2.0) + 4.0 * br2 + 2.0 * eta * b * (s2 - br2),
        TheoremId::Thm46 => inv(2.0) + br2 + 2.0 * b * s2 * eta,
        TheoremId::Thm47 => {
            let l = inp.lipschitz.unwrap_or_default();
            inv(2.0) + 5.0 * br2 + 2.0 * b * eta * (s2 + l * l)
        }
    })
}
