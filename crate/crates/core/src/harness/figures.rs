//! Data files behind the comparison and simulation figures.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::catalog::{self, FunctionParams};
use crate::error::{Result, SamError};
use crate::optimizers::{OptimizerConfig, Variant};
use crate::vecops::distance;

use super::persist::{num, persist_trajectory};
use super::run::{run_trajectory, Trajectory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig1,
    Fig4a,
    Fig4b,
    Fig4c,
}

impl FigureId {
    pub const ALL: [FigureId; 4] = [
        FigureId::Fig1,
        FigureId::Fig4a,
        FigureId::Fig4b,
        FigureId::Fig4c,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig4a => "fig4a",
            FigureId::Fig4b => "fig4b",
            FigureId::Fig4c => "fig4c",
        }
    }
}

impl FromStr for FigureId {
    type Err = SamError;
    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| SamError::UnknownId {
                kind: "figure",
                id: s.to_string(),
            })
    }
}

impl std::fmt::Display for FigureId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One optimizer run that contributes to a figure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigureRun {
    pub label: String,
    pub optimizer: OptimizerConfig,
}

/// Everything that determines a figure's data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigureConfig {
    pub figure: FigureId,
    pub function_id: String,
    pub params: FunctionParams,
    pub x0: Vec<f64>,
    pub steps: usize,
    pub runs: Vec<FigureRun>,
}

impl FigureConfig {
    pub fn default_for(fig: FigureId) -> Self {
        let det = |v: Variant, rho: f64, eta: f64| OptimizerConfig::new(v, rho, eta);
        match fig {
            FigureId::Fig1 => FigureConfig {
                figure: fig,
                function_id: "hyperbola".into(),
                params: FunctionParams::default(),
                x0: vec![0.5, 1.5],
                steps: 10_000,
                runs: vec![
                    FigureRun {
                        label: "sam".into(),
                        optimizer: det(Variant::DetSam, FIG1_RHO, FIG1_ETA),
                    },
                    FigureRun {
                        label: "usam".into(),
                        optimizer: det(Variant::Usam, FIG1_RHO, FIG1_ETA),
                    },
                    FigureRun {
                        label: "gd".into(),
                        optimizer: det(Variant::Gd, 0.0, FIG1_ETA),
                    },
                ],
            },
            FigureId::Fig4a => FigureConfig {
                figure: fig,
                function_id: "sine".into(),
                params: FunctionParams::default(),
                x0: vec![0.4],
                steps: 10_000,
                runs: vec![FigureRun {
                    label: "det-sam".into(),
                    optimizer: det(Variant::DetSam, 1.0, 0.5),
                }],
            },
            FigureId::Fig4b => FigureConfig {
                figure: fig,
                function_id: "sc-counter".into(),
                params: FunctionParams {
                    beta: 5.0,
                    rho: 1.0,
                    sigma: 10.0,
                    ..Default::default()
                },
                x0: vec![4.0],
                steps: 10_000,
                runs: vec![FigureRun {
                    label: "m-sam".into(),
                    optimizer: det(Variant::MSam, 1.0, 0.06),
                }],
            },
            FigureId::Fig4c => FigureConfig {
                figure: fig,
                function_id: "cvx-counter".into(),
                params: FunctionParams {
                    beta: 1.0,
                    rho: 1.0,
                    sigma: 1.0,
                    p: Some(0.75),
                    c: Some(2.0),
                    ..Default::default()
                },
                x0: vec![9.0],
                steps: 10_000,
                runs: vec![FigureRun {
                    label: "m-sam".into(),
                    optimizer: det(Variant::MSam, 1.0, 1.0),
                }],
            },
        }
    }
}

pub const FIG1_ETA: f64 = 0.05;
pub const FIG1_RHO: f64 = 2e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FigureOutput {
    pub config: FigureConfig,
    pub files: Vec<PathBuf>,
    pub summary: BTreeMap<String, f64>,
    #[serde(skip)]
    pub trajectories: Vec<(String, Trajectory)>,
}

fn write_x_vs_epoch(path: &Path, runs: &[(String, Trajectory)]) -> Result<()> {
    let file = File::create(path).map_err(|e| SamError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let d = runs[0].1.dim();
    let mut header = vec!["epoch".to_string()];
    for (label, _) in runs {
        if d == 1 {
            header.push(label.clone());
        } else {
            header.extend((0..d).map(|i| format!("{label}_x{i}")));
        }
    }
    let io = |e| SamError::io(path, e);
    writeln!(w, "{}", header.join(",")).map_err(io)?;
    let n = runs
        .iter()
        .map(|(_, t)| t.iterates.len())
        .max()
        .unwrap_or(0);
    for t in 0..n {
        let mut row = vec![t.to_string()];
        for (_, tr) in runs {
            match tr.iterates.get(t) {
                Some(x) => row.extend(x.iter().map(|&v| num(v))),
                None => row.extend(std::iter::repeat_n(String::new(), d)),
            }
        }
        writeln!(w, "{}", row.join(",")).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Runs the figure's configuration and writes its CSV and JSON files into
/// `out_dir`.
pub fn reproduce_figure(fig: FigureId, out_dir: &Path) -> Result<FigureOutput> {
    reproduce_with(&FigureConfig::default_for(fig), out_dir)
}

pub fn reproduce_with(cfg: &FigureConfig, out_dir: &Path) -> Result<FigureOutput> {
    if cfg.runs.is_empty() {
        return Err(SamError::invalid("runs", "must not be empty"));
    }
    std::fs::create_dir_all(out_dir).map_err(|e| SamError::io(out_dir, e))?;
    let problem = catalog::build(&cfg.function_id, &cfg.params)?;
    let tag = cfg.figure.as_str();
    let mut files = Vec::new();
    let mut trajs = Vec::new();
    for run in &cfg.runs {
        let tr = run_trajectory(&problem, &cfg.x0, &run.optimizer, cfg.steps)?
            .with_function_id(&cfg.function_id);
        let p = out_dir.join(format!("{tag}_{}.csv", run.label));
        persist_trajectory(&tr, &p)?;
        files.push(p);
        trajs.push((run.label.clone(), tr));
    }
    let p = out_dir.join(format!("{tag}_x_vs_epoch.csv"));
    write_x_vs_epoch(&p, &trajs)?;
    files.push(p);
    let p = out_dir.join(format!("{tag}_config.json"));
    std::fs::write(&p, serde_json::to_string_pretty(cfg)? + "\n")
        .map_err(|e| SamError::io(&p, e))?;
    files.push(p);

    let mut summary = BTreeMap::new();
    for (label, tr) in &trajs {
        let x = tr.final_iterate();
        for (i, v) in x.iter().enumerate() {
            summary.insert(format!("{label}_final_x{i}"), *v);
        }
        summary.insert(
            format!("{label}_final_grad_norm"),
            *tr.grad_norms.last().unwrap(),
        );
        if let Some(xs) = &problem.meta().x_star {
            summary.insert(format!("{label}_final_dist_to_x_star"), distance(x, xs));
        }
        if cfg.function_id == "hyperbola" {
            summary.insert(format!("{label}_final_residual"), (x[0] * x[1] - 1.0).abs());
        }
    }
    Ok(FigureOutput {
        config: cfg.clone(),
        files,
        summary,
        trajectories: trajs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_parse() {
        for f in FigureId::ALL {
            assert_eq!(f.as_str().parse::<FigureId>().unwrap(), f);
        }
        assert!("fig2".parse::<FigureId>().is_err());
    }

    #[test]
    fn fig4a_files_and_limit() {
        let dir = tempfile::tempdir().unwrap();
        let out = reproduce_figure(FigureId::Fig4a, dir.path()).unwrap();
        assert_eq!(out.files.len(), 3);
        for f in &out.files {
            assert!(f.exists());
        }
        assert!((out.summary["det-sam_final_x0"] - 0.7).abs() < 1e-6);
        let text = std::fs::read_to_string(dir.path().join("fig4a_x_vs_epoch.csv")).unwrap();
        assert!(text.starts_with("epoch,det-sam\n0,4.0"));
    }
}
