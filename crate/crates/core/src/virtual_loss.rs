//! Virtual gradient map `G_f(x) = grad f(x + rho grad f(x)/||grad f(x)||)`.
//!
//! One deterministic SAM step is a plain gradient step on `G_f`. In one
//! dimension `G_f` integrates to a virtual loss `J_f`, whose zeros split
//! into true stationary points of `f` and spurious fixed points of SAM.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::catalog::ObjectiveFunction;
use crate::error::{Result, SamError};
use crate::optimizers::{perturb, DEFAULT_ZERO_GRAD_EPS};
use crate::vecops::all_finite;

/// Bisection stops once the bracket is this narrow.
pub const ROOT_TOL: f64 = 1e-10;
/// Largest grid the CSV dump will write.
pub const MAX_DUMP_ROWS: usize = 4_000_000;

#[derive(Clone, Debug)]
pub struct VirtualGradientMap {
    pub base: ObjectiveFunction,
    pub rho: f64,
    pub zero_grad_eps: f64,
}

impl VirtualGradientMap {
    pub fn new(base: ObjectiveFunction, rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(SamError::invalid("rho", "must be finite and > 0"));
        }
        Ok(VirtualGradientMap {
            base,
            rho,
            zero_grad_eps: DEFAULT_ZERO_GRAD_EPS,
        })
    }

    pub fn with_zero_grad_eps(mut self, eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(SamError::invalid("zero_grad_eps", "must be > 0"));
        }
        self.zero_grad_eps = eps;
        Ok(self)
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.base.dim() {
            return Err(SamError::Dimension {
                expected: self.base.dim(),
                got: x.len(),
            });
        }
        let g = self.base.gradient(x);
        let y = perturb(x, &g, self.rho, self.zero_grad_eps);
        let out = self.base.gradient(&y);
        if !all_finite(&out) {
            return Err(SamError::NonFinite {
                context: format!("G_f({x:?})"),
            });
        }
        Ok(out)
    }

    fn eval1(&self, x: f64) -> Result<f64> {
        Ok(self.eval(&[x])?[0])
    }

    fn grad1(&self, x: f64) -> f64 {
        self.base.gradient(&[x])[0]
    }

    fn require_1d(&self) -> Result<()> {
        if self.base.dim() == 1 {
            Ok(())
        } else {
            Err(SamError::Dimension {
                expected: 1,
                got: self.base.dim(),
            })
        }
    }
}

/// Free-function form of [`VirtualGradientMap::eval`].
pub fn eval_virtual_gradient(map: &VirtualGradientMap, x: &[f64]) -> Result<Vec<f64>> {
    map.eval(x)
}

/// Uniform grid on `[x_min, x_max]`; the step is shrunk so that the grid
/// lands on `x_max` exactly.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub h: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, h: f64) -> Result<Self> {
        if !(x_min < x_max) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(SamError::invalid(
                "x_min/x_max",
                "need finite x_min < x_max",
            ));
        }
        if !(h > 0.0) {
            return Err(SamError::invalid("h", "must be > 0"));
        }
        let intervals = ((x_max - x_min) / h).ceil().max(1.0);
        if intervals > 1e9 {
            return Err(SamError::invalid("h", "grid too fine"));
        }
        let intervals = intervals as usize;
        Ok(Grid1D {
            x_min,
            x_max,
            h: (x_max - x_min) / intervals as f64,
            n: intervals + 1,
        })
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.x_max
        } else {
            self.x_min + i as f64 * self.h
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.point(i))
    }
}

/// Cumulative trapezoid integral of `G_f`, anchored at `J(x_min) = 0`.
#[derive(Clone, Debug, Serialize)]
pub struct VirtualLoss1D {
    pub grid: Grid1D,
    pub xs: Vec<f64>,
    /// `G_f` at the grid points.
    pub gradients: Vec<f64>,
    /// `J_f` at the grid points.
    pub values: Vec<f64>,
}

impl VirtualLoss1D {
    /// Linear interpolation of `J_f`; clamps outside the grid.
    pub fn value_at(&self, x: f64) -> f64 {
        if x <= self.grid.x_min {
            return self.values[0];
        }
        if x >= self.grid.x_max {
            return *self.values.last().unwrap();
        }
        let s = (x - self.grid.x_min) / self.grid.h;
        let i = (s.floor() as usize).min(self.grid.n - 2);
        let t = s - i as f64;
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }
}

pub fn integrate_virtual_loss(
    map: &VirtualGradientMap,
    x_min: f64,
    x_max: f64,
    h: f64,
) -> Result<VirtualLoss1D> {
    map.require_1d()?;
    let grid = Grid1D::new(x_min, x_max, h)?;
    let xs: Vec<f64> = grid.points().collect();
    let gradients = xs
        .iter()
        .map(|&x| map.eval1(x))
        .collect::<Result<Vec<_>>>()?;
    let mut values = Vec::with_capacity(xs.len());
    let mut acc = 0.0;
    values.push(acc);
    for i in 1..xs.len() {
        acc += 0.5 * (xs[i] - xs[i - 1]) * (gradients[i - 1] + gradients[i]);
        values.push(acc);
    }
    Ok(VirtualLoss1D {
        grid,
        xs,
        gradients,
        values,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct StationarySets {
    /// Points with `grad f = 0`.
    pub true_stationary: Vec<f64>,
    /// Points with `G_f = 0` but `grad f != 0`.
    pub spurious_stationary: Vec<f64>,
    pub warnings: Vec<String>,
}

impl StationarySets {
    pub fn nearest_true(&self, x: f64) -> Option<f64> {
        nearest(&self.true_stationary, x)
    }

    pub fn nearest_spurious(&self, x: f64) -> Option<f64> {
        nearest(&self.spurious_stationary, x)
    }
}

fn nearest(v: &[f64], x: f64) -> Option<f64> {
    v.iter()
        .copied()
        .min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs()))
}

/// Locates zeros of `grad f` and of `G_f` on a grid.
///
/// Sign changes are refined by bisection. A `G_f` bracket whose end values
/// do not shrink under bisection straddles a jump of `G_f` rather than a
/// zero, and is dropped.
pub fn find_stationary_sets(
    map: &VirtualGradientMap,
    x_min: f64,
    x_max: f64,
    h: f64,
) -> Result<StationarySets> {
    map.require_1d()?;
    let grid = Grid1D::new(x_min, x_max, h)?;
    let xs: Vec<f64> = grid.points().collect();
    let eps = map.zero_grad_eps;
    let grads: Vec<f64> = xs.iter().map(|&x| map.grad1(x)).collect();
    let virt: Vec<f64> = xs
        .iter()
        .map(|&x| map.eval1(x))
        .collect::<Result<Vec<_>>>()?;

    let mut out = StationarySets::default();
    let mut flat_grad = 0usize;
    let mut flat_virt = 0usize;

    let grad_roots = scan_roots(&xs, &grads, eps, &mut flat_grad, |x| Ok(map.grad1(x)))?;
    let virt_roots = scan_roots(&xs, &virt, eps, &mut flat_virt, |x| map.eval1(x))?;

    out.true_stationary = grad_roots;
    for z in virt_roots {
        if map.grad1(z).abs() > 10.0 * eps {
            out.spurious_stationary.push(z);
        } else {
            out.true_stationary.push(z);
        }
    }
    dedup_sorted(&mut out.true_stationary);
    dedup_sorted(&mut out.spurious_stationary);
    if flat_grad > 0 {
        out.warnings.push(format!(
            "grad f vanished at {flat_grad} adjacent grid pairs; zeros there are not isolated"
        ));
    }
    if flat_virt > 0 {
        out.warnings.push(format!(
            "G_f vanished at {flat_virt} adjacent grid pairs; zeros there are not isolated"
        ));
    }
    for w in &out.warnings {
        log::warn!("{w}");
    }
    Ok(out)
}

fn is_zero(v: f64, eps: f64) -> bool {
    v.abs() <= eps
}

fn scan_roots(
    xs: &[f64],
    vals: &[f64],
    eps: f64,
    flat: &mut usize,
    f: impl Fn(f64) -> Result<f64>,
) -> Result<Vec<f64>> {
    let mut roots = Vec::new();
    for i in 0..xs.len() {
        if is_zero(vals[i], eps) {
            roots.push(xs[i]);
            if i + 1 < xs.len() && is_zero(vals[i + 1], eps) {
                *flat += 1;
            }
            continue;
        }
        if i + 1 < xs.len()
            && !is_zero(vals[i + 1], eps)
            && vals[i].signum() != vals[i + 1].signum()
        {
            if let Some(r) = bisect(&f, xs[i], xs[i + 1], vals[i], vals[i + 1], eps)? {
                roots.push(r);
            }
        }
    }
    Ok(roots)
}

/// Returns `None` when the bracket closes on a jump instead of a zero.
fn bisect(
    f: &impl Fn(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    eps: f64,
) -> Result<Option<f64>> {
    let scale = fa.abs().max(fb.abs());
    while b - a > ROOT_TOL {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m)?;
        if is_zero(fm, eps) {
            return Ok(Some(m));
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    let end = fa.abs().min(fb.abs());
    if end > 1e-3 * scale {
        return Ok(None);
    }
    Ok(Some(if fa.abs() <= fb.abs() { a } else { b }))
}

fn dedup_sorted(v: &mut Vec<f64>) {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-8);
}

/// Writes a grid dump.
///
/// One-dimensional bases give columns `x,f,grad_f,G_f` plus `J_f` when
/// `integrate` is set. Two-dimensional bases give
/// `x0,x1,f,grad_f0,grad_f1,G_f0,G_f1` on the square `[x_min, x_max]^2`
/// and reject `integrate`.
pub fn write_grid_csv(
    map: &VirtualGradientMap,
    x_min: f64,
    x_max: f64,
    h: f64,
    integrate: bool,
    path: &Path,
) -> Result<usize> {
    let grid = Grid1D::new(x_min, x_max, h)?;
    let d = map.base.dim();
    let rows = match d {
        1 => grid.n,
        2 => grid.n.saturating_mul(grid.n),
        _ => {
            return Err(SamError::Dimension {
                expected: 2,
                got: d,
            })
        }
    };
    if rows > MAX_DUMP_ROWS {
        return Err(SamError::invalid(
            "grid",
            format!("{rows} rows exceeds the dump limit of {MAX_DUMP_ROWS}; use a coarser step"),
        ));
    }
    if d == 2 && integrate {
        return Err(SamError::invalid(
            "integrate",
            "J_f is only defined for one-dimensional functions; pass --no-integrate",
        ));
    }
    let file = File::create(path).map_err(|e| SamError::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    let csv_err = |e: csv::Error| SamError::io(path, std::io::Error::other(e));
    let f = &map.base;
    if d == 1 {
        let j = if integrate {
            Some(integrate_virtual_loss(map, x_min, x_max, h)?)
        } else {
            None
        };
        let mut header = vec!["x", "f", "grad_f", "G_f"];
        if integrate {
            header.push("J_f");
        }
        w.write_record(&header).map_err(csv_err)?;
        for (i, x) in grid.points().enumerate() {
            let mut rec = vec![
                fmt(x),
                fmt(f.value(&[x])),
                fmt(f.gradient(&[x])[0]),
                fmt(map.eval1(x)?),
            ];
            if let Some(j) = &j {
                rec.push(fmt(j.values[i]));
            }
            w.write_record(&rec).map_err(csv_err)?;
        }
    } else {
        w.write_record(["x0", "x1", "f", "grad_f0", "grad_f1", "G_f0", "G_f1"])
            .map_err(csv_err)?;
        for a in grid.points() {
            for b in grid.points() {
                let x = [a, b];
                let g = f.gradient(&x);
                let v = map.eval(&x)?;
                w.write_record([
                    fmt(a),
                    fmt(b),
                    fmt(f.value(&x)),
                    fmt(g[0]),
                    fmt(g[1]),
                    fmt(v[0]),
                    fmt(v[1]),
                ])
                .map_err(csv_err)?;
            }
        }
    }
    let mut inner = w
        .into_inner()
        .map_err(|e| SamError::io(path, std::io::Error::other(e.to_string())))?;
    inner.flush().map_err(|e| SamError::io(path, e))?;
    Ok(rows)
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}
