//! Scenario documents, named presets, CSV output and trajectory comparison.

mod compare;
mod config;
mod csv;
mod presets;
mod run;

pub use compare::{compare, CompareEntry, CompareReport};
pub use config::{parse_scenario, render_scenario};
pub use csv::{parse_csv, read_csv, render_csv, write_csv};
pub use presets::{preset, run_preset, Headline, HeadlineKind, HeadlineResult, Preset, PresetResult, PRESET_NAMES};
pub use run::{build_model, resolve_state, run_scenario, steady_scenario, BuiltModel, SteadyReport};

use crate::scheme1::Scheme1Params;
use crate::scheme2::Scheme2Params;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    Scheme1Full,
    Scheme1Effective,
    Scheme1Collective,
    Scheme2Full,
    Scheme2Effective,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 5] = [
        SchemeKind::Scheme1Full,
        SchemeKind::Scheme1Effective,
        SchemeKind::Scheme1Collective,
        SchemeKind::Scheme2Full,
        SchemeKind::Scheme2Effective,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Scheme1Full => "scheme1_full",
            SchemeKind::Scheme1Effective => "scheme1_effective",
            SchemeKind::Scheme1Collective => "scheme1_collective",
            SchemeKind::Scheme2Full => "scheme2_full",
            SchemeKind::Scheme2Effective => "scheme2_effective",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn is_scheme1(self) -> bool {
        matches!(
            self,
            SchemeKind::Scheme1Full | SchemeKind::Scheme1Effective | SchemeKind::Scheme1Collective
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelParams {
    Scheme1(Scheme1Params),
    Scheme2(Scheme2Params),
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// The scheme's default uniform mixture.
    Mixed,
    /// Projector on a named state (collective name or product label like `grg`).
    Pure(String),
    /// Explicit diagonal weights in the product basis.
    Diagonal(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObservableSpec {
    Population(String),
    Fidelity(String),
}

impl ObservableSpec {
    pub fn label(&self) -> String {
        match self {
            ObservableSpec::Population(s) => format!("P({s})"),
            ObservableSpec::Fidelity(s) => format!("F({s})"),
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        let inner = |prefix: &str| {
            text.strip_prefix(prefix)
                .and_then(|r| r.strip_suffix(')'))
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
        };
        inner("P(")
            .map(ObservableSpec::Population)
            .or_else(|| inner("F(").map(ObservableSpec::Fidelity))
    }
}

/// Time-axis units of the output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    /// Inverse reference rate (`1/Ω₂` or `1/Ω_b`).
    Reference,
    /// Microseconds, taking the reference rate as `2π × 1 MHz` (scheme 1) or
    /// `2π × 3 MHz` (scheme 2).
    MHz2Pi,
}

impl Units {
    pub fn name(self) -> &'static str {
        match self {
            Units::Reference => "reference",
            Units::MHz2Pi => "MHz_2pi",
        }
    }

    /// Multiplier from reference time to output time.
    pub fn time_factor(self, scheme: SchemeKind) -> f64 {
        match self {
            Units::Reference => 1.0,
            Units::MHz2Pi => {
                let mhz = if scheme.is_scheme1() { 1.0 } else { 3.0 };
                1.0 / (2.0 * std::f64::consts::PI * mhz)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub scheme: SchemeKind,
    pub params: ModelParams,
    pub override_constraints: bool,
    pub initial_state: InitialState,
    pub t_end: f64,
    pub dt: Option<f64>,
    pub observables: Vec<ObservableSpec>,
    /// Steps between samples; `None` picks roughly 1000 samples.
    pub sample_stride: Option<usize>,
    pub output: Option<String>,
    pub units: Units,
}

impl Scenario {
    pub fn scheme1_params(&self) -> Option<&Scheme1Params> {
        match &self.params {
            ModelParams::Scheme1(p) => Some(p),
            ModelParams::Scheme2(_) => None,
        }
    }

    pub fn scheme2_params(&self) -> Option<&Scheme2Params> {
        match &self.params {
            ModelParams::Scheme2(p) => Some(p),
            ModelParams::Scheme1(_) => None,
        }
    }
}
