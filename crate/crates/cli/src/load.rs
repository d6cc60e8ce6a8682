use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use interline::iata::{FactorFile, SegmentsFile};
use interline::model::{validate, ProblemFile, WeightRecord};
use interline::rules::PassengerWeights;
use interline::{PassengerId, Problem, Weights};
use serde::de::DeserializeOwned;
use serde::Deserialize;

/// Weight file: `{"weights":[...], "passenger_weights":[{"id":1,"weights":[...]}]}`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsFile {
    #[serde(default)]
    pub weights: Option<Vec<WeightRecord>>,
    #[serde(default)]
    pub passenger_weights: Vec<PassengerWeightRecord>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PassengerWeightRecord {
    pub id: u64,
    pub weights: Vec<WeightRecord>,
}

impl WeightsFile {
    pub fn system(&self) -> Option<Weights> {
        self.weights.as_deref().map(WeightRecord::into_system)
    }

    pub fn per_passenger(&self) -> PassengerWeights<f64> {
        self.passenger_weights
            .iter()
            .map(|p| (PassengerId(p.id), WeightRecord::into_system(&p.weights)))
            .collect()
    }
}

fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {what} file {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("malformed {what} file {}", path.display()))
}

pub fn problem_file(path: &Path) -> Result<ProblemFile> {
    read_json(path, "problem")
}

pub fn weights_file(path: Option<&Path>) -> Result<WeightsFile> {
    path.map_or_else(|| Ok(WeightsFile::default()), |p| read_json(p, "weights"))
}

/// The problem with `--weights` applied, rejected unless it validates.
pub fn valid_problem(path: &Path, weights: &WeightsFile) -> Result<Problem> {
    let mut problem = problem_file(path)?.into_problem();
    if let Some(w) = weights.system() {
        problem.weights = Some(w);
    }
    let report = validate(&problem);
    if !report.ok {
        let lines: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
        bail!("invalid problem {}:\n  {}", path.display(), lines.join("\n  "));
    }
    Ok(problem)
}

pub fn segments(path: &Path) -> Result<SegmentsFile> {
    read_json(path, "segments")
}

pub fn factors(path: &Path) -> Result<FactorFile> {
    read_json(path, "factor")
}
