use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::deterministic::Quadratic1D;
use super::{FunctionMeta, Objective, ObjectiveFunction};
use crate::error::{Result, SamError};
use crate::vecops::{distance, dot};

const PROB_TOL: f64 = 1e-12;
const MIXTURE_TOL: f64 = 1e-10;
const CHECK_POINTS_1D: usize = 2001;
const CHECK_POINTS_2D: usize = 41;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CounterexampleKind {
    StronglyConvex,
    Convex,
}

/// Parameters of the two stochastic counterexamples. `a` and `c_prime`
/// are derived; use the constructors rather than filling fields by hand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleParams {
    pub kind: CounterexampleKind,
    pub rho: f64,
    pub beta: f64,
    pub sigma: f64,
    pub p: f64,
    pub c: f64,
    pub a: f64,
    pub c_prime: f64,
}

impl CounterexampleParams {
    /// `p = 2/3`, `c = 7 rho / 6`, `a = min{beta/5, sigma/(5 rho)}`.
    pub fn strongly_convex(rho: f64, beta: f64, sigma: f64) -> Result<Self> {
        positive("rho", rho)?;
        positive("beta", beta)?;
        positive("sigma", sigma)?;
        let p = 2.0 / 3.0;
        let c = (1.0 + p / 4.0) * rho;
        let a = (beta / 5.0).min(sigma / (5.0 * rho));
        Ok(CounterexampleParams {
            kind: CounterexampleKind::StronglyConvex,
            rho,
            beta,
            sigma,
            p,
            c,
            a,
            c_prime: p * c / (1.0 + p),
        })
    }

    /// Requires `1/2 < p < 1` and `c > 5 rho / 4`.
    pub fn convex(rho: f64, beta: f64, sigma: f64, p: f64, c: f64) -> Result<Self> {
        positive("rho", rho)?;
        positive("beta", beta)?;
        positive("sigma", sigma)?;
        if !(p > 0.5 && p < 1.0) {
            return Err(SamError::invalid("p", format!("need 1/2 < p < 1, got {p}")));
        }
        if !(c > 1.25 * rho) {
            return Err(SamError::invalid(
                "c",
                format!("need c > 5 rho / 4 = {}, got {c}", 1.25 * rho),
            ));
        }
        let a =
            (beta * rho * (1.0 - p) / (8.0 * p)).min(sigma * (1.0 - p).sqrt() / (3.0 * p.sqrt()));
        Ok(CounterexampleParams {
            kind: CounterexampleKind::Convex,
            rho,
            beta,
            sigma,
            p,
            c,
            a,
            c_prime: c - rho / (8.0 * p),
        })
    }

    /// Re-derives the dependent fields and reports the first violated
    /// constraint.
    pub fn validate(&self) -> Result<()> {
        let fresh = match self.kind {
            CounterexampleKind::StronglyConvex => {
                Self::strongly_convex(self.rho, self.beta, self.sigma)?
            }
            CounterexampleKind::Convex => {
                Self::convex(self.rho, self.beta, self.sigma, self.p, self.c)?
            }
        };
        for (name, got, want) in [
            ("p", self.p, fresh.p),
            ("c", self.c, fresh.c),
            ("a", self.a, fresh.a),
            ("c_prime", self.c_prime, fresh.c_prime),
        ] {
            if (got - want).abs() > 1e-12 * (1.0 + want.abs()) {
                return Err(SamError::InvalidParameter {
                    name: static_name(name),
                    reason: format!("expected {want}, got {got}"),
                });
            }
        }
        Ok(())
    }

    /// The m-SAM trapping interval `[c - rho, c + rho]`.
    pub fn trap(&self) -> (f64, f64) {
        (self.c - self.rho, self.c + self.rho)
    }

    /// Largest step size for which the trap is guaranteed.
    pub fn eta_cap(&self) -> f64 {
        match self.kind {
            CounterexampleKind::StronglyConvex => 3.0 / (10.0 * self.beta),
            CounterexampleKind::Convex => 1.0 / self.beta,
        }
    }

    /// Lower bound on the mean suboptimality of any point in the trap.
    pub fn suboptimality_floor(&self) -> f64 {
        match self.kind {
            // a x^2 / 2 at x = c - rho = rho / 6
            CounterexampleKind::StronglyConvex => {
                let x = self.c - self.rho;
                0.5 * self.a * x * x
            }
            CounterexampleKind::Convex => {
                self.a * (self.c - self.rho) + self.a * self.a / (2.0 * self.beta)
            }
        }
    }
}

fn static_name(name: &str) -> &'static str {
    match name {
        "p" => "p",
        "c" => "c",
        "a" => "a",
        _ => "c_prime",
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(SamError::invalid(
            name,
            format!("must be finite and > 0, got {v}"),
        ))
    }
}

/// Grid box for the mixture checks; extended to the right so that the
/// whole trap and its breakpoints are covered for any `c`.
pub(crate) fn mixture_box(rho: f64, c: f64) -> (f64, f64) {
    (-3.0 * rho, (3.0 * rho).max(c + 3.0 * rho))
}

/// Finite mixture `f(x) = sum_i p_i l_i(x)`.
#[derive(Clone, Debug)]
pub struct StochasticObjective {
    components: Vec<ObjectiveFunction>,
    probabilities: Vec<f64>,
    cumulative: Vec<f64>,
    mean: ObjectiveFunction,
    sigma: f64,
    achieved_variance: f64,
    params: Option<CounterexampleParams>,
}

impl StochasticObjective {
    /// Builds a mixture and verifies it on a grid over `[lo, hi]^d`:
    /// the weighted component values must reproduce `mean`, and the
    /// gradient variance must stay below `sigma^2`.
    pub fn new(
        components: Vec<ObjectiveFunction>,
        probabilities: Vec<f64>,
        mean: ObjectiveFunction,
        sigma: f64,
        check_box: (f64, f64),
    ) -> Result<Self> {
        if components.is_empty() || components.len() != probabilities.len() {
            return Err(SamError::invalid(
                "components",
                "need one probability per component and at least one component",
            ));
        }
        if probabilities.iter().any(|&p| !(p > 0.0)) {
            return Err(SamError::invalid("probabilities", "must all be > 0"));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(SamError::invalid(
                "probabilities",
                format!("must sum to 1, got {total}"),
            ));
        }
        if !(sigma >= 0.0) {
            return Err(SamError::invalid("sigma", "must be >= 0"));
        }
        let d = mean.dim();
        for c in &components {
            if c.dim() != d {
                return Err(SamError::Dimension {
                    expected: d,
                    got: c.dim(),
                });
            }
        }
        let mut cumulative = Vec::with_capacity(probabilities.len());
        let mut acc = 0.0;
        for p in &probabilities {
            acc += p;
            cumulative.push(acc);
        }
        *cumulative.last_mut().unwrap() = 1.0;

        let mut out = StochasticObjective {
            components,
            probabilities,
            cumulative,
            mean,
            sigma,
            achieved_variance: 0.0,
            params: None,
        };
        let mut worst = 0.0f64;
        for x in grid_points(d, check_box) {
            let fx = out.mean.value(&x);
            let mix: f64 = out
                .components
                .iter()
                .zip(&out.probabilities)
                .map(|(c, p)| p * c.value(&x))
                .sum();
            if (mix - fx).abs() > MIXTURE_TOL * (1.0 + fx.abs()) {
                return Err(SamError::Precondition(format!(
                    "mixture identity fails at {x:?}: weighted sum {mix} vs mean {fx}"
                )));
            }
            worst = worst.max(out.gradient_variance_at(&x));
        }
        if worst > sigma * sigma * (1.0 + 1e-12) {
            return Err(SamError::Precondition(format!(
                "gradient variance {worst} exceeds sigma^2 = {}",
                sigma * sigma
            )));
        }
        out.achieved_variance = worst;
        Ok(out)
    }

    /// Degenerate one-component distribution.
    pub fn single(f: ObjectiveFunction) -> Self {
        StochasticObjective {
            components: vec![f.clone()],
            probabilities: vec![1.0],
            cumulative: vec![1.0],
            mean: f,
            sigma: 0.0,
            achieved_variance: 0.0,
            params: None,
        }
    }

    /// `base(x) +- s * sum_j x_j` with probability 1/2 each. The gradient
    /// noise is `+- s * (1, .., 1)`, so the variance is `d s^2`.
    pub fn with_linear_noise(base: ObjectiveFunction, s: f64) -> Result<Self> {
        positive("s", s)?;
        let d = base.dim();
        let up: ObjectiveFunction = Arc::new(LinearTilt::new(base.clone(), vec![s; d]));
        let down: ObjectiveFunction = Arc::new(LinearTilt::new(base.clone(), vec![-s; d]));
        Self::new(
            vec![up, down],
            vec![0.5, 0.5],
            base,
            s * (d as f64).sqrt(),
            (-3.0, 3.0),
        )
    }

    fn with_params(mut self, params: CounterexampleParams) -> Self {
        self.params = Some(params);
        self
    }

    pub fn mean(&self) -> &ObjectiveFunction {
        &self.mean
    }

    pub fn components(&self) -> &[ObjectiveFunction] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &ObjectiveFunction {
        &self.components[i]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// User-supplied variance bound.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Largest gradient variance observed on the construction grid.
    pub fn achieved_variance(&self) -> f64 {
        self.achieved_variance
    }

    pub fn params(&self) -> Option<&CounterexampleParams> {
        self.params.as_ref()
    }

    /// Inverse-CDF draw from a uniform `u` in `[0, 1)`.
    pub fn sample_index(&self, u: f64) -> usize {
        self.cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.cumulative.len() - 1)
    }

    /// `E ||grad f(x) - grad l(x; xi)||^2`, computed exactly.
    pub fn gradient_variance_at(&self, x: &[f64]) -> f64 {
        let g = self.mean.gradient(x);
        self.components
            .iter()
            .zip(&self.probabilities)
            .map(|(c, p)| {
                let gi = c.gradient(x);
                let dd = distance(&gi, &g);
                p * dd * dd
            })
            .sum()
    }
}

fn grid_points(d: usize, (lo, hi): (f64, f64)) -> Vec<Vec<f64>> {
    let n = if d == 1 {
        CHECK_POINTS_1D
    } else {
        CHECK_POINTS_2D
    };
    let axis: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    match d {
        1 => axis.iter().map(|&x| vec![x]).collect(),
        2 => axis
            .iter()
            .flat_map(|&a| axis.iter().map(move |&b| vec![a, b]))
            .collect(),
        _ => Vec::new(),
    }
}

#[derive(Debug)]
struct LinearTilt {
    base: ObjectiveFunction,
    slope: Vec<f64>,
    meta: FunctionMeta,
    name: String,
}

impl LinearTilt {
    fn new(base: ObjectiveFunction, slope: Vec<f64>) -> Self {
        let mut meta = base.meta().clone();
        meta.f_star = f64::NEG_INFINITY;
        meta.x_star = None;
        meta.lipschitz = None;
        let name = format!("{} + tilt {:?}", base.name(), slope);
        LinearTilt {
            base,
            slope,
            meta,
            name,
        }
    }
}

impl Objective for LinearTilt {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.base.value(x) + dot(&self.slope, x)
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = self.base.gradient(x);
        for (gi, s) in g.iter_mut().zip(&self.slope) {
            *gi += s;
        }
        g
    }
    fn meta(&self) -> &FunctionMeta {
        &self.meta
    }
    fn name(&self) -> &str {
        &self.name
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Which {
    First,
    Second,
}

/// Components of the strongly convex counterexample.
#[derive(Debug)]
struct ScComponent {
    which: Which,
    a: f64,
    c: f64,
    rho: f64,
    p: f64,
    meta: FunctionMeta,
}

impl ScComponent {
    fn new(which: Which, cp: &CounterexampleParams) -> Self {
        let (a, c, rho, p) = (cp.a, cp.c, cp.rho, cp.p);
        let mut out = ScComponent {
            which,
            a,
            c,
            rho,
            p,
            meta: FunctionMeta {
                beta: 0.0,
                mu: 0.0,
                lipschitz: None,
                f_star: 0.0,
                x_star: None,
                smooth: true,
                convex: false,
            },
        };
        out.meta = match which {
            Which::First => FunctionMeta {
                beta: a,
                f_star: -a * rho * rho,
                x_star: Some(vec![c - 2.0 * rho]),
                ..out.meta.clone()
            },
            Which::Second => FunctionMeta {
                beta: (1.0 + p) * a / (1.0 - p),
                mu: a,
                f_star: out.eval(cp.c_prime).0,
                x_star: Some(vec![cp.c_prime]),
                convex: true,
                ..out.meta.clone()
            },
        };
        out
    }

    /// `(f1, f1')` piece by piece.
    fn first(&self, x: f64) -> (f64, f64) {
        let (a, c, r) = (self.a, self.c, self.rho);
        if x <= c - r {
            let u = x - c + 2.0 * r;
            (0.5 * a * u * u - a * r * r, a * u)
        } else if x >= c + r {
            let u = x - c - 2.0 * r;
            (0.5 * a * u * u - a * r * r, a * u)
        } else {
            let u = x - c;
            (-0.5 * a * u * u, -a * u)
        }
    }

    fn eval(&self, x: f64) -> (f64, f64) {
        let (v1, g1) = self.first(x);
        match self.which {
            Which::First => (v1, g1),
            Which::Second => {
                // (a x^2 / 2 - p f1) / (1 - p)
                let q = 1.0 - self.p;
                (
                    (0.5 * self.a * x * x - self.p * v1) / q,
                    (self.a * x - self.p * g1) / q,
                )
            }
        }
    }
}

impl Objective for ScComponent {
    fn dim(&self) -> usize {
        1
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.eval(x[0]).0
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        vec![self.eval(x[0]).1]
    }
    fn meta(&self) -> &FunctionMeta {
        &self.meta
    }
    fn name(&self) -> &str {
        match self.which {
            Which::First => "sc-counter f1",
            Which::Second => "sc-counter f2",
        }
    }
}

/// Strongly convex mixture with mean `a x^2 / 2`.
pub fn make_sc_counterexample(params: &CounterexampleParams) -> Result<StochasticObjective> {
    if params.kind != CounterexampleKind::StronglyConvex {
        return Err(SamError::invalid(
            "kind",
            "expected strongly-convex parameters",
        ));
    }
    params.validate()?;
    let f1: ObjectiveFunction = Arc::new(ScComponent::new(Which::First, params));
    let f2: ObjectiveFunction = Arc::new(ScComponent::new(Which::Second, params));
    let mean: ObjectiveFunction = Arc::new(
        Quadratic1D::new(params.a, 0.0, 0.0)?
            .with_class(params.beta, params.a)?
            .with_name("sc-counter"),
    );
    let p = params.p;
    Ok(StochasticObjective::new(
        vec![f1, f2],
        vec![p, 1.0 - p],
        mean,
        params.sigma,
        mixture_box(params.rho, params.c),
    )?
    .with_params(params.clone()))
}

/// Mean of the convex counterexample: `a x + beta x^2 / 2` for `x <= 0`,
/// `a x` for `x >= 0`.
#[derive(Debug)]
struct CvxMean {
    a: f64,
    beta: f64,
    meta: FunctionMeta,
}

impl CvxMean {
    fn eval(&self, x: f64) -> (f64, f64) {
        if x <= 0.0 {
            (self.a * x + 0.5 * self.beta * x * x, self.a + self.beta * x)
        } else {
            (self.a * x, self.a)
        }
    }
}

impl Objective for CvxMean {
    fn dim(&self) -> usize {
        1
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.eval(x[0]).0
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        vec![self.eval(x[0]).1]
    }
    fn meta(&self) -> &FunctionMeta {
        &self.meta
    }
    fn name(&self) -> &str {
        "cvx-counter"
    }
}

#[derive(Debug)]
struct CvxComponent {
    which: Which,
    a: f64,
    c: f64,
    rho: f64,
    p: f64,
    beta: f64,
    meta: FunctionMeta,
}

impl CvxComponent {
    fn new(which: Which, cp: &CounterexampleParams) -> Self {
        let (a, c, rho, p, beta) = (cp.a, cp.c, cp.rho, cp.p, cp.beta);
        let mut out = CvxComponent {
            which,
            a,
            c,
            rho,
            p,
            beta,
            meta: FunctionMeta {
                beta: 0.0,
                mu: 0.0,
                lipschitz: None,
                f_star: f64::NEG_INFINITY,
                x_star: None,
                smooth: true,
                convex: false,
            },
        };
        out.meta = match which {
            Which::First => FunctionMeta {
                beta: (8.0 * a / rho).max(beta),
                ..out.meta.clone()
            },
            Which::Second => FunctionMeta {
                beta: (8.0 * a * p / (rho * (1.0 - p))).max(beta),
                f_star: out.eval(cp.c_prime).0,
                x_star: Some(vec![cp.c_prime]),
                convex: true,
                ..out.meta.clone()
            },
        };
        out
    }

    /// Piecewise-linear/concave part of `f1`, without the `beta x^2 / 2`
    /// term on `x <= 0`.
    fn first_core(&self, x: f64) -> (f64, f64) {
        let (a, c, r) = (self.a, self.c, self.rho);
        if x <= c - 0.25 * r {
            (2.0 * a * (x - c + r / 8.0), 2.0 * a)
        } else if x >= c + 0.25 * r {
            (-2.0 * a * (x - c - r / 8.0), -2.0 * a)
        } else {
            let u = x - c;
            (-(4.0 * a / r) * u * u, -(8.0 * a / r) * u)
        }
    }

    fn eval(&self, x: f64) -> (f64, f64) {
        let (v1, g1) = self.first_core(x);
        let (qv, qg) = if x <= 0.0 {
            (0.5 * self.beta * x * x, self.beta * x)
        } else {
            (0.0, 0.0)
        };
        match self.which {
            Which::First => (v1 + qv, g1 + qg),
            Which::Second => {
                let q = 1.0 - self.p;
                (
                    (self.a * x - self.p * v1) / q + qv,
                    (self.a - self.p * g1) / q + qg,
                )
            }
        }
    }
}

impl Objective for CvxComponent {
    fn dim(&self) -> usize {
        1
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.eval(x[0]).0
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        vec![self.eval(x[0]).1]
    }
    fn meta(&self) -> &FunctionMeta {
        &self.meta
    }
    fn name(&self) -> &str {
        match self.which {
            Which::First => "cvx-counter f1",
            Which::Second => "cvx-counter f2",
        }
    }
}

/// Convex mixture whose m-SAM suboptimality floor grows with `c`.
pub fn make_cvx_counterexample(params: &CounterexampleParams) -> Result<StochasticObjective> {
    if params.kind != CounterexampleKind::Convex {
        return Err(SamError::invalid("kind", "expected convex parameters"));
    }
    params.validate()?;
    let (a, beta) = (params.a, params.beta);
    let mean: ObjectiveFunction = Arc::new(CvxMean {
        a,
        beta,
        meta: FunctionMeta {
            beta,
            mu: 0.0,
            lipschitz: None,
            f_star: -a * a / (2.0 * beta),
            x_star: Some(vec![-a / beta]),
            smooth: true,
            convex: true,
        },
    });
    let f1: ObjectiveFunction = Arc::new(CvxComponent::new(Which::First, params));
    let f2: ObjectiveFunction = Arc::new(CvxComponent::new(Which::Second, params));
    let p = params.p;
    Ok(StochasticObjective::new(
        vec![f1, f2],
        vec![p, 1.0 - p],
        mean,
        params.sigma,
        mixture_box(params.rho, params.c),
    )?
    .with_params(params.clone()))
}
