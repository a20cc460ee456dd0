use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{FunctionMeta, Objective, ObjectiveFunction};
use crate::error::{Result, SamError};

/// `(k/2)(x - center)^2 + offset` in one dimension.
#[derive(Clone, Debug)]
pub struct Quadratic1D {
    pub curvature: f64,
    pub center: f64,
    pub offset: f64,
    meta: FunctionMeta,
    name: String,
}

impl Quadratic1D {
    /// Meta defaults to `beta = mu = curvature`.
    pub fn new(curvature: f64, center: f64, offset: f64) -> Result<Self> {
        if !(curvature >= 0.0) || !center.is_finite() || !offset.is_finite() {
            return Err(SamError::invalid(
                "curvature",
                "quadratic needs finite center/offset and curvature >= 0",
            ));
        }
        let meta = FunctionMeta {
            beta: curvature,
            mu: curvature,
            lipschitz: (curvature == 0.0).then_some(0.0),
            f_star: offset,
            x_star: Some(vec![center]),
            smooth: true,
            convex: true,
        };
        Ok(Quadratic1D {
            curvature,
            center,
            offset,
            meta,
            name: format!("{curvature}/2 (x - {center})^2 + {offset}"),
        })
    }

    /// Overrides the class constants, e.g. to report a looser `beta`.
    pub fn with_class(mut self, beta: f64, mu: f64) -> Result<Self> {
        if beta < self.curvature || mu > self.curvature || mu < 0.0 {
            return Err(SamError::invalid(
                "beta/mu",
                format!(
                    "need mu <= {} <= beta, got mu = {mu}, beta = {beta}",
                    self.curvature
                ),
            ));
        }
        self.meta.beta = beta;
        self.meta.mu = mu;
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl Objective for Quadratic1D {
    fn dim(&self) -> usize {
        1
    }
    fn value(&self, x: &[f64]) -> f64 {
        let d = x[0] - self.center;
        0.5 * self.curvature * d * d + self.offset
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        vec![self.curvature * (x[0] - self.center)]
    }
    fn meta(&self) -> &FunctionMeta {
        &self.meta
    }
    fn name(&self) -> &str {
        &self.name
    }
}

/// Shorthand for an `Arc`-wrapped [`Quadratic1D`].
pub fn quadratic(curvature: f64, center: f64, offset: f64) -> Result<ObjectiveFunction> {
    Ok(Arc::new(Quadratic1D::new(curvature, center, offset)?))
}

/// One of the three lower-bound quadratics.
///
/// * case 1: `mu/2 x^2 - mu rho x`
/// * case 2: `beta/4 x^2`
/// * case 3: `beta/2 x^2`
///
/// Each is reported as a member of the `(beta, mu)` class.
pub fn make_quadratic_lb(case: u8, beta: f64, mu: f64, rho: f64) -> Result<ObjectiveFunction> {
    if !(rho > 0.0) {
        return Err(SamError::invalid("rho", "must be > 0"));
    }
    if !(mu > 0.0) {
        return Err(SamError::invalid("mu", "must be > 0"));
    }
    if !(beta >= 2.0 * mu) {
        return Err(SamError::invalid(
            "beta",
            format!("need beta >= 2 mu, got beta = {beta}, mu = {mu}"),
        ));
    }
    let q = match case {
        1 => Quadratic1D::new(mu, rho, -0.5 * mu * rho * rho)?,
        2 => Quadratic1D::new(0.5 * beta, 0.0, 0.0)?,
        3 => Quadratic1D::new(beta, 0.0, 0.0)?,
        _ => {
            return Err(SamError::invalid(
                "case",
                format!("expected 1, 2 or 3, got {case}"),
            ))
        }
    };
    Ok(Arc::new(
        q.with_class(beta, mu)?.with_name(format!("quad-lb-{case}")),
    ))
}

/// `A sin(k x)` with `A = 9 beta rho^2 / (25 pi^2)` and `k = 5 pi / (3 rho)`.
#[derive(Clone, Debug)]
pub struct SineExample {
    pub beta: f64,
    pub rho: f64,
    amplitude: f64,
    freq: f64,
    meta: FunctionMeta,
}

impl SineExample {
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn frequency(&self) -> f64 {
        self.freq
    }

    /// True stationary points `(0.3 + 0.6 k) rho` inside `[lo, hi]`.
    pub fn true_stationary_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        lattice(0.3 * self.rho, 0.6 * self.rho, lo, hi)
    }

    /// Spurious SAM fixed points `(0.7 + 1.2 k) rho` and `(-0.1 + 1.2 k) rho`.
    pub fn spurious_stationary_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut v = lattice(0.7 * self.rho, 1.2 * self.rho, lo, hi);
        v.extend(lattice(-0.1 * self.rho, 1.2 * self.rho, lo, hi));
        v.sort_by(f64::total_cmp);
        v
    }
}

fn lattice(base: f64, spacing: f64, lo: f64, hi: f64) -> Vec<f64> {
    let k0 = ((lo - base) / spacing).ceil() as i64;
    let k1 = ((hi - base) / spacing).floor() as i64;
    (k0..=k1).map(|k| base + k as f64 * spacing).collect()
}

impl Objective for SineExample {
    fn dim(&self) -> usize {
        1
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.amplitude * (self.freq * x[0]).sin()
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        vec![self.amplitude * self.freq * (self.freq * x[0]).cos()]
    }
    fn meta(&self) -> &FunctionMeta {
        &self.meta
    }
    fn name(&self) -> &str {
        "sine"
    }
}

pub fn make_sine_example(beta: f64, rho: f64) -> Result<ObjectiveFunction> {
    Ok(Arc::new(sine_example(beta, rho)?))
}

pub(crate) fn sine_example(beta: f64, rho: f64) -> Result<SineExample> {
    if !(beta > 0.0) {
        return Err(SamError::invalid("beta", "must be > 0"));
    }
    if !(rho > 0.0) {
        return Err(SamError::invalid("rho", "must be > 0"));
    }
    let amplitude = 9.0 * beta * rho * rho / (25.0 * PI * PI);
    let freq = 5.0 * PI / (3.0 * rho);
    Ok(SineExample {
        beta,
        rho,
        amplitude,
        freq,
        meta: FunctionMeta {
            beta,
            mu: 0.0,
            lipschitz: Some(3.0 * beta * rho / (5.0 * PI)),
            f_star: -amplitude,
            x_star: Some(vec![-0.3 * rho]),
            smooth: true,
            convex: false,
        },
    })
}

/// Region of the plane relative to the nonsmooth-max dynamics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NonsmoothRegion {
    /// `b1 >= 0`
    Outside,
    A,
    B,
    C,
    D,
}

/// `max{|x1|, |2 x1 + x2|}`.
#[derive(Clone, Debug)]
pub struct NonsmoothMax {
    meta: FunctionMeta,
}

impl NonsmoothMax {
    /// Coordinates in the basis `v1 = e1`, `v2 = (2, 1)/sqrt(5)`.
    pub fn basis_coords(x: &[f64]) -> (f64, f64) {
        (x[0] - 2.0 * x[1], 5f64.sqrt() * x[1])
    }

    pub fn from_basis(b1: f64, b2: f64) -> [f64; 2] {
        let x2 = b2 / 5f64.sqrt();
        [b1 + 2.0 * x2, x2]
    }

    pub fn region(x: &[f64], rho: f64) -> NonsmoothRegion {
        let (b1, b2) = Self::basis_coords(x);
        let s5 = 5f64.sqrt();
        if b1 >= 0.0 {
            NonsmoothRegion::Outside
        } else if b1 > -3.5 * rho {
            NonsmoothRegion::A
        } else if b1 + s5 * b2 > 0.0 {
            NonsmoothRegion::B
        } else if b1 + s5 * b2 < 0.0 && -b1 + s5 * b2 > 0.0 && -2.0 * b1 + s5 * b2 > 1.5 * rho {
            NonsmoothRegion::C
        } else {
            NonsmoothRegion::D
        }
    }
}

impl Objective for NonsmoothMax {
    fn dim(&self) -> usize {
        2
    }
    fn value(&self, x: &[f64]) -> f64 {
        x[0].abs().max((2.0 * x[0] + x[1]).abs())
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let u = 2.0 * x[0] + x[1];
        if x[0].abs() >= u.abs() {
            vec![sgn(x[0]), 0.0]
        } else {
            let s = sgn(u);
            vec![2.0 * s, s]
        }
    }
    fn meta(&self) -> &FunctionMeta {
        &self.meta
    }
    fn name(&self) -> &str {
        "nonsmooth-max"
    }
}

/// Sign with `sgn(0) = +1`.
fn sgn(v: f64) -> f64 {
    if v >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

pub fn make_nonsmooth_max() -> ObjectiveFunction {
    Arc::new(NonsmoothMax {
        meta: FunctionMeta {
            beta: 0.0,
            mu: 0.0,
            lipschitz: Some(5f64.sqrt()),
            f_star: 0.0,
            x_star: Some(vec![0.0, 0.0]),
            smooth: false,
            convex: true,
        },
    })
}

/// `(x y - 1)^2`.
#[derive(Clone, Debug)]
pub struct Hyperbola {
    meta: FunctionMeta,
}

impl Objective for Hyperbola {
    fn dim(&self) -> usize {
        2
    }
    fn value(&self, x: &[f64]) -> f64 {
        let r = x[0] * x[1] - 1.0;
        r * r
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let r = x[0] * x[1] - 1.0;
        vec![2.0 * x[1] * r, 2.0 * x[0] * r]
    }
    fn meta(&self) -> &FunctionMeta {
        &self.meta
    }
    fn name(&self) -> &str {
        "hyperbola"
    }
}

/// The hyperbola valley. `beta = 56` bounds the Hessian norm on `[-3, 3]^2`.
pub fn make_hyperbola() -> ObjectiveFunction {
    Arc::new(Hyperbola {
        meta: FunctionMeta {
            beta: 56.0,
            mu: 0.0,
            lipschitz: None,
            f_star: 0.0,
            x_star: Some(vec![1.0, 1.0]),
            smooth: true,
            convex: false,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn quad_lb_case2_values() {
        let f = make_quadratic_lb(2, 1.0, 0.5, 1.0).unwrap();
        assert_abs_diff_eq!(f.value(&[1.0 / 3.0]), 1.0 / 36.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.gradient(&[1.0 / 3.0])[0], 1.0 / 6.0, epsilon = 1e-15);
        assert_eq!(f.meta().beta, 1.0);
        assert_eq!(f.meta().mu, 0.5);
    }

    #[test]
    fn quad_lb_case1_minimizer() {
        let f = make_quadratic_lb(1, 2.0, 1.0, 1.0).unwrap();
        assert_eq!(f.meta().f_star, -0.5);
        assert_eq!(f.meta().x_star.as_deref(), Some(&[1.0][..]));
        assert_eq!(f.gradient(&[1.0])[0], 0.0);
        assert_abs_diff_eq!(f.value(&[1.0]), -0.5, epsilon = 1e-15);
        // mu/2 x^2 - mu rho x at x = 3
        assert_abs_diff_eq!(f.value(&[3.0]), 4.5 - 3.0, epsilon = 1e-15);
    }

    #[test]
    fn quad_lb_case3_gradient() {
        let f = make_quadratic_lb(3, 2.0, 1.0, 1.0).unwrap();
        for x in [-2.0, 0.0, 0.7, 5.0] {
            assert_eq!(f.gradient(&[x])[0], 2.0 * x);
        }
        assert_eq!(f.meta().f_star, 0.0);
    }

    #[test]
    fn quad_lb_rejects_bad_params() {
        assert!(make_quadratic_lb(2, 0.9, 0.5, 1.0).is_err());
        assert!(make_quadratic_lb(2, 1.0, 0.5, 0.0).is_err());
        assert!(make_quadratic_lb(4, 1.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn sine_points() {
        let f = make_sine_example(1.0, 1.0).unwrap();
        assert_abs_diff_eq!(f.gradient(&[0.3])[0], 0.0, epsilon = 1e-15);
        assert_eq!(f.value(&[0.0]), 0.0);
        let expected = 3.0 / (5.0 * PI) * (7.0 * PI / 6.0).cos();
        assert_abs_diff_eq!(f.gradient(&[0.7])[0], expected, epsilon = 1e-14);
        assert_abs_diff_eq!(f.gradient(&[0.7])[0], -0.16539, epsilon = 1e-5);
        assert_abs_diff_eq!(
            f.meta().lipschitz.unwrap(),
            3.0 / (5.0 * PI),
            epsilon = 1e-15
        );
    }

    #[test]
    fn sine_fstar_attained_at_xstar() {
        let f = make_sine_example(2.0, 0.5).unwrap();
        let xs = f.meta().x_star.clone().unwrap();
        assert_abs_diff_eq!(f.value(&xs), f.meta().f_star, epsilon = 1e-15);
    }

    #[test]
    fn sine_lattices() {
        let s = sine_example(1.0, 1.0).unwrap();
        let x = s.true_stationary_in(-1.0, 1.0);
        assert_eq!(x.len(), 4);
        assert_abs_diff_eq!(x[0], -0.9, epsilon = 1e-12);
        let y = s.spurious_stationary_in(-1.5, 1.5);
        let want = [-1.3, -0.5, -0.1, 0.7, 1.1];
        assert_eq!(y.len(), want.len());
        for (a, b) in y.iter().zip(want) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn sine_rejects_nonpositive() {
        assert!(make_sine_example(0.0, 1.0).is_err());
        assert!(make_sine_example(1.0, -1.0).is_err());
    }

    #[test]
    fn nonsmooth_branches() {
        let f = make_nonsmooth_max();
        assert_eq!(f.value(&[1.0, 0.0]), 2.0);
        assert_eq!(f.gradient(&[1.0, 0.0]), vec![2.0, 1.0]);
        assert_eq!(f.value(&[0.0, 0.0]), 0.0);
        assert_eq!(f.value(&[-1.0, 3.0]), 1.0);
        assert_eq!(f.gradient(&[-1.0, 3.0]), vec![-1.0, 0.0]);
        assert_eq!(f.gradient(&[0.0, 0.0]), vec![1.0, 0.0]);
    }

    #[test]
    fn nonsmooth_regions() {
        let x = NonsmoothMax::from_basis(-1.0, 0.3);
        assert_eq!(NonsmoothMax::region(&x, 1.0), NonsmoothRegion::A);
        assert_eq!(
            NonsmoothMax::region(&[1.0, 0.0], 1.0),
            NonsmoothRegion::Outside
        );
        let (b1, b2) = NonsmoothMax::basis_coords(&x);
        assert_abs_diff_eq!(b1, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b2, 0.3, epsilon = 1e-15);
        // b1 = -5, b2 = 0: b1 + sqrt5 b2 < 0, -b1 > 0, -2 b1 = 10 > 1.5
        assert_eq!(NonsmoothMax::region(&[-5.0, 0.0], 1.0), NonsmoothRegion::C);
        let b = NonsmoothMax::from_basis(-5.0, 3.0);
        assert_eq!(NonsmoothMax::region(&b, 1.0), NonsmoothRegion::B);
        let d = NonsmoothMax::from_basis(-5.0, -3.0);
        assert_eq!(NonsmoothMax::region(&d, 1.0), NonsmoothRegion::D);
    }

    #[test]
    fn hyperbola_points() {
        let f = make_hyperbola();
        assert_eq!(f.value(&[1.0, 1.0]), 0.0);
        assert_eq!(f.gradient(&[1.0, 1.0]), vec![0.0, 0.0]);
        assert_eq!(f.value(&[2.0, 0.5]), 0.0);
        assert_eq!(f.value(&[1.0, 2.0]), 1.0);
        assert_eq!(f.gradient(&[1.0, 2.0]), vec![4.0, 2.0]);
    }
}
