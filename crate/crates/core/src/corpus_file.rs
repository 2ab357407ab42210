//! The shipped example corpus: entries with expected fields and a runner
//! comparing them against fresh classification reports.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::{classify_input, ClassificationReport, InputDescriptor, Settings};
use crate::classify::{ConstructionTag, ImmersionOptions, Verdict};
use crate::corpus::ParamMap;
use crate::error::{Error, Result};
use crate::patch::Grid;

pub const SHIPPED_CORPUS: &str = include_str!("../corpus/corpus.toml");

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusFile {
    pub version: u32,
    #[serde(rename = "entry")]
    pub entries: Vec<CorpusEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub name: String,
    pub generator: String,
    /// Where the expected values come from.
    pub provenance: String,
    #[serde(default)]
    pub params: ParamMap,
    pub grid: Option<String>,
    pub expected: Expected,
}

/// Fields compared against the report; absent fields are not checked.
#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub g: Option<usize>,
    pub multiplicities: Option<Vec<usize>>,
    pub dupin: Option<bool>,
    pub lie_curvature: Option<f64>,
    pub lie_curvature_tol: Option<f64>,
    pub reducible: Option<Verdict>,
    /// Tag of the family reported by the reducibility verdict.
    pub construction: Option<ConstructionTag>,
    /// Tag of the family a construction added.
    pub new_family_construction: Option<ConstructionTag>,
    pub isoparametric: Option<Verdict>,
    pub immersion: Option<Verdict>,
}

impl CorpusFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: CorpusFile = toml::from_str(text).map_err(|e| Error::Corpus(e.to_string()))?;
        let mut seen = std::collections::BTreeSet::new();
        for e in &file.entries {
            if !seen.insert(e.name.as_str()) {
                return Err(Error::Corpus(format!("duplicate entry `{}`", e.name)));
            }
            if e.provenance.trim().is_empty() {
                return Err(Error::Corpus(format!("entry `{}` has no provenance", e.name)));
            }
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

impl CorpusEntry {
    pub fn settings(&self, seed: u64) -> Result<Settings> {
        let grid = self.grid.as_deref().map(Grid::parse).transpose()?;
        let immersion = self.expected.immersion.map(|_| ImmersionOptions::default());
        Ok(Settings { grid, seed, immersion, ..Settings::default() })
    }

    pub fn run(&self, seed: u64) -> Result<ClassificationReport> {
        let input = InputDescriptor::named(&self.generator, self.params.clone());
        classify_input(input, &self.settings(seed)?)
    }
}

/// Differences between an entry's expectations and a report.
pub fn mismatches(expected: &Expected, report: &ClassificationReport) -> Vec<String> {
    let mut out = Vec::new();
    fn check(out: &mut Vec<String>, field: &str, want: String, got: String) {
        if want != got {
            out.push(format!("{field}: expected {want}, got {got}"));
        }
    }
    let curvature = report.curvature.as_ref();
    if let Some(g) = expected.g {
        check(&mut out, "g", g.to_string(), curvature.map_or("none".into(), |c| c.g.to_string()));
    }
    if let Some(m) = &expected.multiplicities {
        check(&mut out, "multiplicities", format!("{m:?}"), format!("{:?}", curvature.and_then(|c| c.multiplicities.clone()).unwrap_or_default()));
    }
    if let Some(d) = expected.dupin {
        let got = curvature.and_then(|c| c.dupin.as_ref()).map(|d| d.is_dupin);
        check(&mut out, "dupin", d.to_string(), got.map_or("undetermined".into(), |b| b.to_string()));
    }
    if let Some(r) = expected.lie_curvature {
        let tol = expected.lie_curvature_tol.unwrap_or(report.tolerances.lie_curvature);
        match curvature.and_then(|c| c.lie_curvature.as_ref()) {
            Some(lc) if (lc.r_min - r).abs() <= tol && (lc.r_max - r).abs() <= tol => {}
            Some(lc) => out.push(format!("lie_curvature: expected {r} ± {tol}, got [{}, {}]", lc.r_min, lc.r_max)),
            None => out.push(format!("lie_curvature: expected {r}, got none")),
        }
    }
    if let Some(v) = expected.reducible {
        check(&mut out, "reducible", format!("{v:?}"), report.reducibility.as_ref().map_or("none".into(), |r| format!("{:?}", r.reducible)));
    }
    if let Some(t) = expected.construction {
        check(&mut out, "construction", format!("{t:?}"), report.reducibility.as_ref().map_or("none".into(), |r| format!("{:?}", r.construction)));
    }
    if let Some(t) = expected.new_family_construction {
        check(&mut out, "new_family_construction", format!("{t:?}"), report.new_family_span.as_ref().map_or("none".into(), |s| format!("{:?}", s.construction)));
    }
    if let Some(v) = expected.isoparametric {
        check(&mut out, "isoparametric", format!("{v:?}"), format!("{:?}", report.isoparametric));
    }
    if let Some(v) = expected.immersion {
        check(&mut out, "immersion", format!("{v:?}"), report.immersion.as_ref().map_or("none".into(), |i| format!("{:?}", i.verdict)));
    }
    out
}

#[derive(Debug)]
pub struct CorpusOutcome {
    /// One `PASS`/`FAIL` line per entry.
    pub lines: Vec<String>,
    pub failures: usize,
    pub reports: Vec<ClassificationReport>,
}

/// Runs the selected entries (all when `names` is `None`).
pub fn run_corpus(corpus: &CorpusFile, names: Option<&[String]>, seed: u64) -> Result<CorpusOutcome> {
    if let Some(names) = names {
        if let Some(missing) = names.iter().find(|n| !corpus.entries.iter().any(|e| &e.name == *n)) {
            return Err(Error::Corpus(format!("no corpus entry named `{missing}`")));
        }
    }
    let mut outcome = CorpusOutcome { lines: Vec::new(), failures: 0, reports: Vec::new() };
    for entry in &corpus.entries {
        if names.is_some_and(|n| !n.contains(&entry.name)) {
            continue;
        }
        let problems = match entry.run(seed) {
            Ok(report) => {
                let p = mismatches(&entry.expected, &report);
                outcome.reports.push(report);
                p
            }
            Err(e) => vec![format!("error: {e}")],
        };
        if problems.is_empty() {
            outcome.lines.push(format!("PASS {} [{}]", entry.name, entry.provenance));
        } else {
            outcome.failures += 1;
            outcome.lines.push(format!("FAIL {} [{}]: {}", entry.name, entry.provenance, problems.join("; ")));
        }
    }
    Ok(outcome)
}
