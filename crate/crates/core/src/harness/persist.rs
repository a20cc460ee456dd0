//! Trajectory CSV files: header `t,x0,..,x{d-1},f,grad_norm`, one row per
//! iterate, numbers written with 17 significant digits.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Result, SamError};

use super::run::Trajectory;

pub fn trajectory_header(dim: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    h.extend((0..dim).map(|i| format!("x{i}")));
    h.push("f".into());
    h.push("grad_norm".into());
    h
}

pub(crate) fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn persist_trajectory(traj: &Trajectory, path: &Path) -> Result<()> {
    traj.validate()?;
    let file = File::create(path).map_err(|e| SamError::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    let err = |e: csv::Error| SamError::io(path, std::io::Error::other(e));
    w.write_record(trajectory_header(traj.dim())).map_err(err)?;
    for (t, x) in traj.iterates.iter().enumerate() {
        let mut row = Vec::with_capacity(x.len() + 3);
        row.push(t.to_string());
        row.extend(x.iter().map(|&v| num(v)));
        row.push(num(traj.f_values[t]));
        row.push(num(traj.grad_norms[t]));
        w.write_record(&row).map_err(err)?;
    }
    let mut inner = w
        .into_inner()
        .map_err(|e| SamError::io(path, std::io::Error::other(e.to_string())))?;
    inner.flush().map_err(|e| SamError::io(path, e))
}

pub fn load_trajectory(path: &Path) -> Result<Trajectory> {
    let file = File::open(path).map_err(|e| SamError::io(path, e))?;
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(file);
    let parse_err = |line: usize, message: String| SamError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let header = r
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    let cols: Vec<&str> = header.iter().collect();
    if cols.len() < 4 {
        return Err(parse_err(
            1,
            format!("expected at least 4 columns, got {}", cols.len()),
        ));
    }
    let dim = cols.len() - 3;
    let want = trajectory_header(dim);
    if cols != want.iter().map(String::as_str).collect::<Vec<_>>() {
        return Err(parse_err(1, format!("header must be `{}`", want.join(","))));
    }
    let mut traj = Trajectory {
        iterates: Vec::new(),
        f_values: Vec::new(),
        grad_norms: Vec::new(),
        step_records: None,
        config: None,
        function_id: None,
    };
    for (k, rec) in r.records().enumerate() {
        let line = k + 2;
        let rec = rec.map_err(|e| {
            let l = e.position().map_or(line, |p| p.line() as usize);
            parse_err(l, e.to_string())
        })?;
        if rec.len() != cols.len() {
            return Err(parse_err(
                line,
                format!("expected {} fields, got {}", cols.len(), rec.len()),
            ));
        }
        let t: usize = rec[0]
            .trim()
            .parse()
            .map_err(|e| parse_err(line, format!("bad step index `{}`: {e}", &rec[0])))?;
        if t != k {
            return Err(parse_err(line, format!("expected t = {k}, got {t}")));
        }
        let vals = rec
            .iter()
            .skip(1)
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| parse_err(line, format!("bad number `{s}`: {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        traj.iterates.push(vals[..dim].to_vec());
        traj.f_values.push(vals[dim]);
        traj.grad_norms.push(vals[dim + 1]);
    }
    if traj.iterates.is_empty() {
        return Err(parse_err(2, "no rows".into()));
    }
    traj.validate()?;
    Ok(traj)
}
