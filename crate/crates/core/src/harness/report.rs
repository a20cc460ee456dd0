use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SamError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">=")]
    AtLeast,
}

/// One asserted inequality `observed <relation> threshold`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub label: String,
    pub observed: f64,
    pub relation: Relation,
    pub threshold: f64,
    /// Slack in the direction of the inequality; negative on violation.
    pub margin: f64,
    pub pass: bool,
}

impl Margin {
    pub fn new(
        label: impl Into<String>,
        observed: f64,
        relation: Relation,
        threshold: f64,
    ) -> Self {
        let (margin, pass) = match relation {
            Relation::AtMost => (threshold - observed, observed <= threshold),
            Relation::Below => (threshold - observed, observed < threshold),
            Relation::AtLeast => (observed - threshold, observed >= threshold),
        };
        Margin {
            label: label.into(),
            observed,
            relation,
            threshold,
            margin,
            pass,
        }
    }
}

/// Outcome of a check, written as JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub experiment: String,
    pub pass: bool,
    pub margins: Vec<Margin>,
    pub artifacts: Vec<String>,
    /// Reported values that are not asserted.
    #[serde(default)]
    pub stats: BTreeMap<String, f64>,
    #[serde(default)]
    pub failures: Vec<String>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(experiment: impl Into<String>) -> Self {
        Report {
            experiment: experiment.into(),
            pass: true,
            margins: Vec::new(),
            artifacts: Vec::new(),
            stats: BTreeMap::new(),
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, m: Margin) {
        if !m.pass {
            self.pass = false;
            self.failures.push(format!(
                "{}: observed {:e}, required {} {:e}",
                m.label,
                m.observed,
                match m.relation {
                    Relation::AtMost => "<=",
                    Relation::Below => "<",
                    Relation::AtLeast => ">=",
                },
                m.threshold
            ));
        }
        self.margins.push(m);
    }

    pub fn stat(&mut self, key: impl Into<String>, v: f64) {
        self.stats.insert(key.into(), v);
    }

    pub fn fail(&mut self, why: impl Into<String>) {
        self.pass = false;
        self.failures.push(why.into());
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    /// Smallest slack over all margins.
    pub fn worst_margin(&self) -> Option<&Margin> {
        self.margins
            .iter()
            .min_by(|a, b| a.margin.total_cmp(&b.margin))
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").map_err(|e| SamError::io(path, e))
    }
}

impl fmt::Display for Report {
    /// One line per margin, then any failures.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.margins {
            writeln!(
                f,
                "{:<28} observed {:>14.6e}  threshold {:>14.6e}  margin {:>12.4e}  {}",
                m.label,
                m.observed,
                m.threshold,
                m.margin,
                if m.pass { "ok" } else { "VIOLATED" }
            )?;
        }
        for why in &self.failures {
            writeln!(f, "failure: {why}")?;
        }
        Ok(())
    }
}
