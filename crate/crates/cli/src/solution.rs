use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use psiflow_core::{preset, preset_info, preset_names, GroupElement, GroupKind, PresetInfo, PresetParams, StreamSolution, TimeFn};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    General,
    Power,
    Cosine,
    Log,
    Tanh,
    Exp,
    Quadratic,
    Exponential,
    Oseen,
    Uniform,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    #[default]
    X,
    Y,
}

/// Which solution to evaluate: a named preset, or a family plus overrides,
/// followed by any number of group elements.
#[derive(Args, Clone, Debug, Default)]
pub struct SolutionArgs {
    /// Named preset (see `psiflow list`).
    #[arg(long, conflicts_with = "family")]
    pub preset: Option<String>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    /// Propagation axis for the cosine and exp families.
    #[arg(long, value_enum, default_value_t = Axis::X)]
    pub orientation: Axis,
    #[arg(long)]
    pub k1: Option<f64>,
    #[arg(long)]
    pub k2: Option<f64>,
    #[arg(long)]
    pub d0: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub re: Option<f64>,
    #[arg(long)]
    pub c1: Option<f64>,
    #[arg(long)]
    pub c2: Option<f64>,
    #[arg(long)]
    pub c3: Option<f64>,
    #[arg(long)]
    pub c4: Option<f64>,
    /// Amplitude of the harmonic families.
    #[arg(long = "A", alias = "amplitude")]
    pub a: Option<f64>,
    /// Exponent of the power family.
    #[arg(long)]
    pub n: Option<f64>,
    /// ε of the rotation-stretch presets.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// `KIND:EPS[:FN]`, e.g. `G3:0.1` or `galpha:0.5:sine(1,2)`. Applied in
    /// the order given.
    #[arg(long = "group", value_name = "KIND:EPS[:FN]")]
    pub groups: Vec<String>,
}

/// The resolved solution plus what went into it.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub solution: StreamSolution,
    pub info: &'static PresetInfo,
    pub spec: SolutionSpec,
}

/// Serializable record of a solution choice, echoed into every output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionSpec {
    pub preset: String,
    pub params: PresetParams,
    pub groups: Vec<String>,
}

impl SolutionArgs {
    pub fn is_empty(&self) -> bool {
        self.preset.is_none() && self.family.is_none()
    }

    fn params(&self) -> PresetParams {
        PresetParams {
            k1: self.k1,
            k2: self.k2,
            d0: self.d0,
            omega: self.omega,
            re: self.re,
            c1: self.c1,
            c2: self.c2,
            c3: self.c3,
            c4: self.c4,
            a: self.a,
            n: self.n,
            epsilon: self.epsilon,
        }
    }

    fn preset_name(&self) -> Result<String, CliError> {
        if let Some(p) = &self.preset {
            if self.orientation != Axis::X {
                return Err(CliError::Config("--orientation only applies with --family".into()));
            }
            return Ok(p.clone());
        }
        let Some(family) = self.family else {
            return Err(CliError::Config("one of --preset or --family is required".into()));
        };
        let name = match (family, self.orientation) {
            (FamilyArg::General, Axis::X) => "eq10",
            (FamilyArg::Power, Axis::X) => "eq13",
            (FamilyArg::Cosine, Axis::X) => "eq30",
            (FamilyArg::Cosine, Axis::Y) => "eq33",
            (FamilyArg::Log, Axis::X) => "eq35",
            (FamilyArg::Tanh, Axis::X) => "eq37",
            (FamilyArg::Exp, Axis::X) => "eq39a",
            (FamilyArg::Exp, Axis::Y) => "eq39b",
            (FamilyArg::Quadratic, Axis::X) => "eq40a",
            (FamilyArg::Exponential, Axis::X) => "eq40b",
            (FamilyArg::Oseen, Axis::X) => "eq28",
            (FamilyArg::Uniform, Axis::X) => "uniform",
            (f, Axis::Y) => {
                return Err(CliError::Config(format!(
                    "family {f:?} has no y orientation"
                )))
            }
        };
        Ok(name.to_string())
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let name = self.preset_name()?;
        let info = preset_info(&name).ok_or_else(|| CliError::UnknownPreset(name.clone()))?;
        let params = self.params();
        let mut solution = preset(&name, &params)?;
        for g in &self.groups {
            solution = solution.transformed(parse_group(g)?);
        }
        Ok(Resolved {
            solution,
            info,
            spec: SolutionSpec {
                preset: name,
                params,
                groups: self.groups.clone(),
            },
        })
    }
}

pub fn known_presets() -> String {
    preset_names().collect::<Vec<_>>().join(", ")
}

/// Parses `KIND:EPS[:FN]`.
pub fn parse_group(spec: &str) -> Result<GroupElement, CliError> {
    let mut parts = spec.splitn(3, ':');
    let kind: GroupKind = parts.next().unwrap_or_default().parse()?;
    let eps: f64 = parts
        .next()
        .ok_or_else(|| CliError::Config(format!("group `{spec}`: missing epsilon")))?
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("group `{spec}`: bad epsilon")))?;
    let func = parts.next().map(str::parse::<TimeFn>).transpose()?;
    match (kind.needs_time_fn(), &func) {
        (true, None) => Err(CliError::Config(format!(
            "group `{spec}`: {} needs a time function such as linear(1)",
            kind.label()
        ))),
        (false, Some(_)) => Err(CliError::Config(format!(
            "group `{spec}`: {} takes no time function",
            kind.label()
        ))),
        _ => Ok(GroupElement::new(kind, eps, func)?),
    }
}
