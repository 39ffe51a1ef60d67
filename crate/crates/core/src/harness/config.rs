//! TOML experiment configuration.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::conditions::Condition;
use crate::error::{Error, Result};
use crate::mesh::{load_mesh, structured_rect_mesh, Mesh};
use crate::qtensor::ModelParams;
use crate::solver::SolverConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Run,
    ConvergeSpace,
    ConvergeTime,
    Cfl,
    Tactoid,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Run => "run",
            ExperimentKind::ConvergeSpace => "converge-space",
            ExperimentKind::ConvergeTime => "converge-time",
            ExperimentKind::Cfl => "cfl",
            ExperimentKind::Tactoid => "tactoid",
        }
    }
}

/// Either a structured `width x height` mesh of width `h` or a mesh file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSection {
    pub h: Option<f64>,
    #[serde(default = "two")]
    pub width: f64,
    #[serde(default = "two")]
    pub height: f64,
    pub file: Option<PathBuf>,
}

fn two() -> f64 {
    2.0
}

impl Default for MeshSection {
    fn default() -> Self {
        Self { h: None, width: 2.0, height: 2.0, file: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub kind: Option<ExperimentKind>,
    #[serde(default = "default_condition")]
    pub condition: Condition,
    /// `run`: number of steps, or `final_time / dt` when absent.
    pub steps: Option<usize>,
    pub final_time: Option<f64>,
    /// `converge-space` and `cfl`: mesh widths.
    #[serde(default)]
    pub h_values: Vec<f64>,
    /// `converge-space`: reference mesh width and time step.
    pub h_ref: Option<f64>,
    pub ref_dt: Option<f64>,
    /// `converge-time`: time steps and reference step count.
    #[serde(default)]
    pub dt_values: Vec<f64>,
    pub ref_steps: Option<usize>,
    /// `cfl`: one bracket for every `h`, or one per `h`.
    pub dt_bracket: Option<[f64; 2]>,
    #[serde(default)]
    pub dt_brackets: Vec<[f64; 2]>,
    #[serde(default = "default_probe_steps")]
    pub probe_steps: usize,
    #[serde(default = "default_rel_width")]
    pub rel_width: f64,
    /// `tactoid` and `run`: times at which field snapshots are written.
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
}

fn default_condition() -> Condition {
    Condition::Convtest
}

fn default_probe_steps() -> usize {
    100
}

fn default_rel_width() -> f64 {
    1e-3
}

impl Default for ExperimentSection {
    fn default() -> Self {
        Self {
            kind: None,
            condition: default_condition(),
            steps: None,
            final_time: None,
            h_values: Vec::new(),
            h_ref: None,
            ref_dt: None,
            dt_values: Vec::new(),
            ref_steps: None,
            dt_bracket: None,
            dt_brackets: Vec::new(),
            probe_steps: default_probe_steps(),
            rel_width: default_rel_width(),
            snapshot_times: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_out")]
    pub dir: PathBuf,
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: default_out() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "ModelParams::standard")]
    pub model: ModelParams,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub mesh: MeshSection,
    #[serde(default)]
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub output: OutputSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model: ModelParams::standard(),
            solver: SolverConfig::default(),
            mesh: MeshSection::default(),
            experiment: ExperimentSection::default(),
            output: OutputSection::default(),
        }
    }
}

impl ExperimentConfig {
    /// Parses TOML text; relative paths are resolved against `base_dir`.
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if let Some(f) = &cfg.mesh.file {
            if f.is_relative() {
                cfg.mesh.file = Some(base_dir.join(f));
            }
        }
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml(&text, base).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always serializable")
    }

    /// Checks the configuration for `kind`, which overrides
    /// `experiment.kind` if that is absent and must match it otherwise.
    pub fn resolve(mut self, kind: ExperimentKind) -> Result<Self> {
        match self.experiment.kind {
            Some(k) if k != kind => {
                return Err(Error::Config(format!(
                    "configuration is for `{}`, not `{}`",
                    k.name(),
                    kind.name()
                )))
            }
            _ => self.experiment.kind = Some(kind),
        }
        self.solver.validate()?;
        let ex = &self.experiment;
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        match kind {
            ExperimentKind::Run | ExperimentKind::Tactoid => {
                self.mesh_source()?;
                if ex.steps.is_none() && ex.final_time.is_none() && ex.snapshot_times.is_empty() {
                    return Err(Error::Config("set experiment.steps or experiment.final_time".into()));
                }
                if let Some(t) = ex.final_time {
                    positive("final_time", t)?;
                }
                let end = self.final_time();
                if let Some(&t) = ex.snapshot_times.iter().find(|&&t| t > end + 1e-12 || t < 0.0) {
                    return Err(Error::Config(format!("snapshot time {t} lies outside [0, {end}]")));
                }
                if kind == ExperimentKind::Tactoid && ex.condition.tactoid_kind().is_none() {
                    return Err(Error::Config("tactoid experiments need a tactoid-* condition".into()));
                }
            }
            ExperimentKind::ConvergeSpace => {
                if ex.h_values.is_empty() {
                    return Err(Error::Config("converge-space needs experiment.h_values".into()));
                }
                for &h in &ex.h_values {
                    positive("h", h)?;
                }
                positive(
                    "h_ref",
                    ex.h_ref.ok_or_else(|| Error::Config("converge-space needs h_ref".into()))?,
                )?;
                positive("final_time", self.study_final_time()?)?;
            }
            ExperimentKind::ConvergeTime => {
                if ex.dt_values.is_empty() {
                    return Err(Error::Config("converge-time needs experiment.dt_values".into()));
                }
                for &dt in &ex.dt_values {
                    positive("dt", dt)?;
                }
                if ex.ref_steps.unwrap_or(0) == 0 {
                    return Err(Error::Config("converge-time needs ref_steps >= 1".into()));
                }
                self.mesh_source()?;
                positive("final_time", self.study_final_time()?)?;
            }
            ExperimentKind::Cfl => {
                if ex.h_values.is_empty() {
                    return Err(Error::Config("cfl needs experiment.h_values".into()));
                }
                if !ex.dt_brackets.is_empty() && ex.dt_brackets.len() != ex.h_values.len() {
                    return Err(Error::Config("dt_brackets needs one entry per h".into()));
                }
                if ex.dt_bracket.is_none() && ex.dt_brackets.is_empty() {
                    return Err(Error::Config("cfl needs dt_bracket or dt_brackets".into()));
                }
                for b in ex.dt_bracket.iter().chain(&ex.dt_brackets) {
                    positive("dt bracket", b[0])?;
                    if b[1] < b[0] {
                        return Err(Error::Config(format!("dt bracket {b:?} is reversed")));
                    }
                }
                if ex.probe_steps == 0 {
                    return Err(Error::Config("probe_steps must be at least 1".into()));
                }
                positive("rel_width", ex.rel_width)?;
            }
        }
        Ok(self)
    }

    /// The larger configurations behind `--paper-scale`.
    pub fn paper_scale(mut self, kind: ExperimentKind) -> Self {
        let ex = &mut self.experiment;
        match kind {
            ExperimentKind::ConvergeSpace => {
                ex.h_values = vec![0.2, 0.1, 0.05, 0.025];
                ex.h_ref = Some(0.005);
                ex.final_time = Some(0.8);
                self.solver.dt = 0.8 / 1600.0;
                ex.ref_dt = Some(0.8 / 25000.0);
            }
            ExperimentKind::ConvergeTime => {
                ex.dt_values = vec![4e-3, 2e-3, 1e-3, 5e-4, 2.5e-4];
                ex.ref_steps = Some(80_000);
                ex.final_time = Some(0.8);
                self.mesh = MeshSection { h: Some(2.0 / 30.0), ..MeshSection::default() };
            }
            ExperimentKind::Cfl => {
                ex.h_values = vec![0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625];
                ex.dt_brackets.clear();
                ex.dt_bracket = Some([1e-5, 0.5]);
            }
            ExperimentKind::Run | ExperimentKind::Tactoid => {}
        }
        self
    }

    pub fn mesh_source(&self) -> Result<MeshSource> {
        match (&self.mesh.h, &self.mesh.file) {
            (Some(h), None) => {
                Ok(MeshSource::Structured { width: self.mesh.width, height: self.mesh.height, h: *h })
            }
            (None, Some(f)) => {
                if !f.exists() {
                    return Err(Error::Config(format!("mesh file {} does not exist", f.display())));
                }
                Ok(MeshSource::File(f.clone()))
            }
            (Some(_), Some(_)) => Err(Error::Config("set only one of mesh.h and mesh.file".into())),
            (None, None) => Err(Error::Config("set mesh.h or mesh.file".into())),
        }
    }

    /// End time of `run` and `tactoid` experiments.
    pub fn final_time(&self) -> f64 {
        let ex = &self.experiment;
        if let Some(n) = ex.steps {
            return n as f64 * self.solver.dt;
        }
        ex.final_time.unwrap_or_else(|| ex.snapshot_times.iter().copied().fold(0.0, f64::max))
    }

    /// Number of steps of `run` and `tactoid` experiments.
    pub fn steps(&self) -> usize {
        self.experiment.steps.unwrap_or_else(|| steps_for(self.final_time(), self.solver.dt))
    }

    fn study_final_time(&self) -> Result<f64> {
        self.experiment.final_time.ok_or_else(|| Error::Config("set experiment.final_time".into()))
    }
}

/// `round(t / dt)`.
pub fn steps_for(t: f64, dt: f64) -> usize {
    (t / dt).round() as usize
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeshSource {
    Structured { width: f64, height: f64, h: f64 },
    File(PathBuf),
}

impl MeshSource {
    pub fn build(&self) -> Result<Arc<Mesh>> {
        Ok(Arc::new(match self {
            MeshSource::Structured { width, height, h } => structured_rect_mesh(*width, *height, *h)?,
            MeshSource::File(p) => load_mesh(p)?,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const RUN: &str = r#"
[model]
L1 = 0.1
L2 = 0.001
L3 = 0.001
L4 = 0.001
L5 = 0.001
a = -0.3
b = -4.0
c = 4.0
M = 1.0

[solver]
dt = 5e-4
fp_tol = 1e-10

[mesh]
h = 0.2

[experiment]
condition = "convtest"
steps = 100

[output]
dir = "results"
"#;

    #[test]
    fn parses_all_sections() {
        let cfg =
            ExperimentConfig::from_toml(RUN, Path::new(".")).unwrap().resolve(ExperimentKind::Run).unwrap();
        assert_eq!(cfg.model, ModelParams::standard());
        assert_eq!(cfg.solver.fp_max_iters, 1000);
        assert_eq!(cfg.steps(), 100);
        assert!((cfg.final_time() - 0.05).abs() < 1e-15);
        assert_eq!(cfg.output.dir, PathBuf::from("results"));
        assert_eq!(cfg.mesh_source().unwrap(), MeshSource::Structured { width: 2.0, height: 2.0, h: 0.2 });
    }

    #[test]
    fn round_trips_through_toml() {
        let cfg = ExperimentConfig::from_toml(RUN, Path::new(".")).unwrap();
        let back = ExperimentConfig::from_toml(&cfg.to_toml(), Path::new(".")).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_bad_input() {
        let unknown = RUN.replace("fp_tol", "fp_tolerance");
        assert!(ExperimentConfig::from_toml(&unknown, Path::new(".")).is_err());
        let bad_cond = RUN.replace("\"convtest\"", "\"spiral\"");
        assert!(ExperimentConfig::from_toml(&bad_cond, Path::new(".")).is_err());
        let negative_l = RUN.replace("L3 = 0.001", "L3 = -1.0");
        assert!(ExperimentConfig::from_toml(&negative_l, Path::new(".")).is_err());
        let cfg = ExperimentConfig::from_toml(RUN, Path::new(".")).unwrap();
        assert!(cfg.clone().resolve(ExperimentKind::Tactoid).is_err());
        let mut wrong_kind = cfg.clone();
        wrong_kind.experiment.kind = Some(ExperimentKind::Cfl);
        assert!(wrong_kind.resolve(ExperimentKind::Run).is_err());
        let mut late = cfg.clone();
        late.experiment.snapshot_times = vec![1.0];
        assert!(late.resolve(ExperimentKind::Run).is_err());
        let mut missing = cfg;
        missing.mesh = MeshSection { file: Some("no/such.mesh".into()), ..MeshSection::default() };
        assert!(missing.resolve(ExperimentKind::Run).is_err());
    }

    #[test]
    fn paper_scale_overrides() {
        let cfg = ExperimentConfig::default().paper_scale(ExperimentKind::ConvergeSpace);
        assert_eq!(cfg.experiment.h_ref, Some(0.005));
        assert_eq!(steps_for(0.8, cfg.experiment.ref_dt.unwrap()), 25000);
        let t = ExperimentConfig::default().paper_scale(ExperimentKind::ConvergeTime);
        assert_eq!(t.experiment.ref_steps, Some(80_000));
        assert!(t.resolve(ExperimentKind::ConvergeTime).is_ok());
    }
}
