//! Scenario and hidden-variable model files (JSON).
//!
//! Complex numbers are `[re, im]` pairs. A projector is either
//! `{"matrix": [[z, ...], ...]}` (row-major) or `{"span": [[z, ...], ...]}`
//! (a list of spanning vectors, orthonormalised on load). See
//! `fixtures/README.md` for complete examples.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::abl::PpsScenario;
use crate::error::Error;
use crate::hvt::{
    Distribution, HvtMeasurement, HvtScenario, IndicatorFunction, OnticSpace, OutcomeKernel,
    TransitionMatrix,
};
use crate::qcore::{CMatrix, Projector, Pvm};

pub type Amplitude = [f64; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ProjectorSpec {
    Matrix(Vec<Vec<Amplitude>>),
    Span(Vec<Vec<Amplitude>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeSpec {
    pub label: String,
    pub projector: ProjectorSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PvmSpec {
    pub name: String,
    pub outcomes: Vec<OutcomeSpec>,
}

/// Per-file defaults; command-line flags take precedence.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_ontic: Option<usize>,
}

impl FileOptions {
    fn is_empty(&self) -> bool {
        *self == FileOptions::default()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub dimension: usize,
    pub pre: ProjectorSpec,
    pub post: ProjectorSpec,
    pub pvms: Vec<PvmSpec>,
    #[serde(default, skip_serializing_if = "FileOptions::is_empty")]
    pub options: FileOptions,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    pub label: String,
    /// `χ` per ontic state, each 0 or 1.
    pub indicator: Vec<f64>,
    /// `D[target][source]`; the identity when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transition: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<ProjectorSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HvtMeasurementSpec {
    pub name: String,
    pub outcomes: Vec<KernelSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HvtModelFile {
    pub states: Vec<String>,
    pub mu_pre: Vec<f64>,
    pub chi_post: Vec<f64>,
    pub measurements: Vec<HvtMeasurementSpec>,
}

/// A file that failed to parse or validate, with the position of the
/// problem: `line:column` for syntax errors, a field path otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct FileError {
    pub position: String,
    pub message: String,
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.position, self.message)
    }
}

impl std::error::Error for FileError {}

fn at(position: impl Into<String>) -> impl FnOnce(Error) -> FileError {
    let position = position.into();
    move |e| FileError {
        position,
        message: e.to_string(),
    }
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, FileError> {
    serde_json::from_str(text).map_err(|e| FileError {
        position: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })
}

fn amplitude(z: &Amplitude) -> Complex64 {
    Complex64::new(z[0], z[1])
}

fn amplitudes(row: &[Amplitude]) -> Vec<Complex64> {
    row.iter().map(amplitude).collect()
}

fn to_amplitude(z: Complex64) -> Amplitude {
    [z.re, z.im]
}

impl ProjectorSpec {
    pub fn from_projector(p: &Projector) -> Self {
        ProjectorSpec::Matrix(
            p.matrix()
                .rows()
                .into_iter()
                .map(|row| row.into_iter().map(to_amplitude).collect())
                .collect(),
        )
    }

    /// `dim` is checked when given, and otherwise taken from the data.
    pub fn build(&self, dim: Option<usize>, position: &str) -> Result<Projector, FileError> {
        let p = match self {
            ProjectorSpec::Matrix(rows) => {
                let rows: Vec<Vec<Complex64>> = rows.iter().map(|r| amplitudes(r)).collect();
                CMatrix::from_rows(&rows).and_then(Projector::new)
            }
            ProjectorSpec::Span(vectors) => {
                let d = dim.or_else(|| vectors.first().map(Vec::len)).unwrap_or(0);
                let vectors: Vec<Vec<Complex64>> = vectors.iter().map(|v| amplitudes(v)).collect();
                Projector::from_span(d, &vectors)
            }
        }
        .map_err(at(position))?;
        if let Some(d) = dim {
            if p.dim() != d {
                return Err(at(position)(Error::DimensionMismatch {
                    expected: d,
                    found: p.dim(),
                }));
            }
        }
        Ok(p)
    }
}

/// A validated scenario file.
#[derive(Clone, Debug)]
pub struct LoadedScenario {
    pub scenario: PpsScenario,
    pub pvms: Vec<Pvm>,
    pub options: FileOptions,
}

impl LoadedScenario {
    pub fn pvm(&self, name: &str) -> crate::Result<&Pvm> {
        self.pvms
            .iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, FileError> {
        from_json(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn load(&self) -> Result<LoadedScenario, FileError> {
        let d = Some(self.dimension);
        let pre = self.pre.build(d, "pre")?;
        let post = self.post.build(d, "post")?;
        let scenario = PpsScenario::new(pre, post).map_err(at("pre/post"))?;
        let mut pvms: Vec<Pvm> = Vec::new();
        for (i, spec) in self.pvms.iter().enumerate() {
            let outcomes = spec
                .outcomes
                .iter()
                .enumerate()
                .map(|(j, o)| Ok((o.label.clone(), o.projector.build(d, &format!("pvms[{i}].outcomes[{j}]"))?)))
                .collect::<Result<Vec<_>, FileError>>()?;
            let pvm = Pvm::new(spec.name.clone(), outcomes).map_err(at(format!("pvms[{i}]")))?;
            if pvms.iter().any(|p| p.name() == pvm.name()) {
                return Err(at(format!("pvms[{i}]"))(Error::DuplicateLabel(spec.name.clone())));
            }
            pvms.push(pvm);
        }
        Ok(LoadedScenario {
            scenario,
            pvms,
            options: self.options.clone(),
        })
    }
}

impl HvtModelFile {
    pub fn parse(text: &str) -> Result<Self, FileError> {
        from_json(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_scenario(model: &HvtScenario) -> Self {
        let bits = |chi: &IndicatorFunction| chi.values().iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        HvtModelFile {
            states: model.space().labels().to_vec(),
            mu_pre: model.mu_pre().weights().to_vec(),
            chi_post: bits(model.chi_post()),
            measurements: model
                .measurements()
                .iter()
                .map(|m| HvtMeasurementSpec {
                    name: m.name().to_string(),
                    outcomes: m
                        .outcomes()
                        .iter()
                        .map(|k| KernelSpec {
                            label: k.label().to_string(),
                            indicator: bits(k.indicator()),
                            transition: Some(k.disturbance().rows()),
                            tag: k.tag().map(ProjectorSpec::from_projector),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn load(&self) -> Result<HvtScenario, FileError> {
        let space = OnticSpace::new(self.states.iter().cloned()).map_err(at("states"))?;
        let mu = Distribution::new(&space, self.mu_pre.clone()).map_err(at("mu_pre"))?;
        let chi_post = IndicatorFunction::from_values(&space, &self.chi_post).map_err(at("chi_post"))?;
        let measurements = self
            .measurements
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let kernels = m
                    .outcomes
                    .iter()
                    .enumerate()
                    .map(|(j, k)| {
                        let pos = format!("measurements[{i}].outcomes[{j}]");
                        let chi = IndicatorFunction::from_values(&space, &k.indicator).map_err(at(format!("{pos}.indicator")))?;
                        let d = match &k.transition {
                            Some(rows) => TransitionMatrix::new(&space, rows).map_err(at(format!("{pos}.transition")))?,
                            None => TransitionMatrix::identity(&space),
                        };
                        let tag = k.tag.as_ref().map(|t| t.build(None, &format!("{pos}.tag"))).transpose()?;
                        OutcomeKernel::new(k.label.clone(), chi, d, tag).map_err(at(pos))
                    })
                    .collect::<Result<Vec<_>, FileError>>()?;
                HvtMeasurement::new(m.name.clone(), kernels).map_err(at(format!("measurements[{i}]")))
            })
            .collect::<Result<Vec<_>, FileError>>()?;
        HvtScenario::new(mu, chi_post, measurements).map_err(at("model"))
    }
}
