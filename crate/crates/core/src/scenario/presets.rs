use crate::error::{Error, Result};
use crate::lindblad::{Diagnostics, TimeSeries};
use crate::scheme1::{GaussianPulse, Scheme1Params};
use crate::scheme2::Scheme2Params;

use super::{run_scenario, InitialState, ModelParams, ObservableSpec, Scenario, SchemeKind, Units};

pub const PRESET_NAMES: [&str; 7] = [
    "fig2",
    "fig2_gamma",
    "fig3b",
    "fig6",
    "fig7",
    "fig7_full_truncated",
    "fig8",
];

/// Step used for the full scheme-1 model: resolves `Δ₃ = 598` at
/// `dt·f_max ≈ 0.09`.
const SCHEME1_FULL_DT: f64 = 1.5e-4;
/// Step for the truncated full scheme-2 run, `dt·f_max = 0.09`.
const SCHEME2_FULL_DT: f64 = 3e-4;

#[derive(Debug, Clone, PartialEq)]
pub enum HeadlineKind {
    /// Final value of a column.
    Final(String),
    /// Sum of final values.
    Sum(Vec<String>),
    /// `|a − b|` of final values.
    AbsDifference(String, String),
    /// Largest `|a − b|` over all samples.
    MaxDeviation(String, String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Headline {
    pub description: String,
    pub kind: HeadlineKind,
    pub reference: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeadlineResult {
    pub headline: Headline,
    pub value: f64,
}

impl HeadlineResult {
    pub fn within_tolerance(&self) -> bool {
        (self.value - self.headline.reference).abs() <= self.headline.tolerance
    }
}

/// One or more scenarios sharing a time grid. With several runs, each column
/// label gets an `@<tag>` suffix.
#[derive(Debug, Clone)]
pub struct Preset {
    pub name: String,
    pub description: String,
    pub runs: Vec<(String, Scenario)>,
    pub headlines: Vec<Headline>,
}

#[derive(Debug, Clone)]
pub struct PresetResult {
    pub name: String,
    pub series: TimeSeries,
    pub headlines: Vec<HeadlineResult>,
    pub diagnostics: Vec<Diagnostics>,
}

fn scheme1_scenario(kind: SchemeKind, p: Scheme1Params, t_end: f64, dt: Option<f64>, stride: usize) -> Scenario {
    Scenario {
        scheme: kind,
        params: ModelParams::Scheme1(p),
        override_constraints: false,
        initial_state: InitialState::Mixed,
        t_end,
        dt,
        observables: vec![
            ObservableSpec::Population("GHZ-".into()),
            ObservableSpec::Population("GHZ+".into()),
        ],
        sample_stride: Some(stride),
        output: None,
        units: Units::Reference,
    }
}

fn scheme2_scenario(
    kind: SchemeKind,
    p: Scheme2Params,
    t_end: f64,
    dt: Option<f64>,
    stride: Option<usize>,
) -> Scenario {
    Scenario {
        scheme: kind,
        params: ModelParams::Scheme2(p),
        override_constraints: false,
        initial_state: InitialState::Mixed,
        t_end,
        dt,
        observables: vec![
            ObservableSpec::Population("000".into()),
            ObservableSpec::Population("111".into()),
            ObservableSpec::Fidelity("GHZ-".into()),
        ],
        sample_stride: stride,
        output: None,
        units: Units::Reference,
    }
}

fn headline(description: &str, kind: HeadlineKind, reference: f64, tolerance: f64) -> Headline {
    Headline {
        description: description.into(),
        kind,
        reference,
        tolerance,
    }
}

fn fin(label: &str) -> HeadlineKind {
    HeadlineKind::Final(label.into())
}

fn fig3b_params(pulsed: bool) -> Scheme1Params {
    let mut p = Scheme1Params::constrained(3, 0.77, 0.1, 1.0, 0.1, 300.0, 6.0).unwrap();
    if pulsed {
        p.pulse = Some(GaussianPulse {
            amplitude: 0.1,
            center: 110.0,
            width: 90.0,
        });
    }
    p
}

/// The configuration behind a named preset.
pub fn preset(name: &str) -> Result<Preset> {
    // ~667 samples over Ω₂t ∈ [0, 200] on the full-model grid
    let full_stride = 2000;
    let p = match name {
        "fig2" => Preset {
            name: name.into(),
            description:
                "full 3-atom polychromatic scheme from the 8-state mixture, with the effective model alongside".into(),
            runs: vec![
                (
                    "full".into(),
                    scheme1_scenario(
                        SchemeKind::Scheme1Full,
                        Scheme1Params::fig2(),
                        200.0,
                        Some(SCHEME1_FULL_DT),
                        full_stride,
                    ),
                ),
                (
                    "effective".into(),
                    scheme1_scenario(
                        SchemeKind::Scheme1Effective,
                        Scheme1Params::fig2(),
                        200.0,
                        Some(SCHEME1_FULL_DT),
                        full_stride,
                    ),
                ),
            ],
            headlines: vec![
                headline("P(GHZ-) at t = 200", fin("P(GHZ-)@full"), 0.9954, 0.005),
                headline("P(GHZ+) at t = 200", fin("P(GHZ+)@full"), 0.0030, 0.003),
                headline(
                    "max |P_full − P_eff| of GHZ- over [0, 200]",
                    HeadlineKind::MaxDeviation("P(GHZ-)@full".into(), "P(GHZ-)@effective".into()),
                    0.0,
                    0.02,
                ),
            ],
        },
        "fig2_gamma" => {
            let mut p = Scheme1Params::fig2();
            p.gamma_r = 0.01;
            Preset {
                name: name.into(),
                description: "fig2 with Rydberg decay γ = 0.01".into(),
                runs: vec![(
                    "full".into(),
                    scheme1_scenario(SchemeKind::Scheme1Full, p, 200.0, Some(SCHEME1_FULL_DT), full_stride),
                )],
                headlines: vec![headline("P(GHZ-) at t = 200", fin("P(GHZ-)"), 0.7579, 0.01)],
            }
        }
        "fig3b" => Preset {
            name: name.into(),
            description: "Gaussian-modulated Ω1, Ω3 versus constant drive, effective model".into(),
            runs: vec![
                (
                    "pulsed".into(),
                    scheme1_scenario(SchemeKind::Scheme1Effective, fig3b_params(true), 250.0, None, 100),
                ),
                (
                    "constant".into(),
                    scheme1_scenario(SchemeKind::Scheme1Effective, fig3b_params(false), 250.0, None, 100),
                ),
            ],
            headlines: vec![
                headline("pulsed P(GHZ-) at t = 250", fin("P(GHZ-)@pulsed"), 0.9981, 0.005),
                headline("constant P(GHZ-) at t = 250", fin("P(GHZ-)@constant"), 0.9946, 0.005),
            ],
        },
        "fig6" => Preset {
            name: name.into(),
            description: "switched URP alone (Ωp = 0), effective model, N = 10".into(),
            runs: vec![(
                "effective".into(),
                scheme2_scenario(
                    SchemeKind::Scheme2Effective,
                    Scheme2Params::fig6(),
                    50_000.0,
                    None,
                    None,
                ),
            )],
            headlines: vec![
                headline(
                    "P(000) + P(111) at t = 50000",
                    HeadlineKind::Sum(vec!["P(000)".into(), "P(111)".into()]),
                    0.9958,
                    0.01,
                ),
                headline(
                    "|P(000) − P(111)| at t = 50000",
                    HeadlineKind::AbsDifference("P(000)".into(), "P(111)".into()),
                    0.0,
                    0.01,
                ),
            ],
        },
        "fig7" => Preset {
            name: name.into(),
            description: "switched URP with antiblockade, effective model, N = 64".into(),
            runs: vec![(
                "effective".into(),
                scheme2_scenario(
                    SchemeKind::Scheme2Effective,
                    Scheme2Params::fig7(),
                    50_000.0,
                    None,
                    None,
                ),
            )],
            headlines: vec![headline("F(GHZ-) at t = 50000", fin("F(GHZ-)"), 0.9757, 0.01)],
        },
        "fig7_full_truncated" => {
            let stride = Some(1000);
            Preset {
                name: name.into(),
                description: "fig7 full versus effective model over t ∈ [0, 500]".into(),
                runs: vec![
                    (
                        "full".into(),
                        scheme2_scenario(
                            SchemeKind::Scheme2Full,
                            // the effective model omits these shifts
                            Scheme2Params {
                                stark_compensation: true,
                                ..Scheme2Params::fig7()
                            },
                            500.0,
                            Some(SCHEME2_FULL_DT),
                            stride,
                        ),
                    ),
                    (
                        "effective".into(),
                        scheme2_scenario(
                            SchemeKind::Scheme2Effective,
                            Scheme2Params::fig7(),
                            500.0,
                            Some(SCHEME2_FULL_DT),
                            stride,
                        ),
                    ),
                ],
                headlines: vec![headline(
                    "max |F_full − F_eff| over [0, 500]",
                    HeadlineKind::MaxDeviation("F(GHZ-)@full".into(), "F(GHZ-)@effective".into()),
                    0.0,
                    0.02,
                )],
            }
        }
        "fig8" => Preset {
            name: name.into(),
            description: "five-atom ring, effective model, Γ_eff = 0.4".into(),
            runs: vec![(
                "effective".into(),
                scheme1_scenario(SchemeKind::Scheme1Effective, Scheme1Params::fig8(), 600.0, None, 10),
            )],
            headlines: vec![
                headline("P(GHZ-) at t = 600", fin("P(GHZ-)"), 0.9927, 0.01),
                headline("P(GHZ+) at t = 600", fin("P(GHZ+)"), 0.0053, 0.005),
            ],
        },
        other => {
            return Err(Error::arg(format!(
                "unknown preset `{other}`; expected one of {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(p)
}

fn final_value(series: &TimeSeries, label: &str) -> Result<f64> {
    series
        .last(label)
        .ok_or_else(|| Error::arg(format!("preset output has no column `{label}`")))
}

fn evaluate(series: &TimeSeries, kind: &HeadlineKind) -> Result<f64> {
    Ok(match kind {
        HeadlineKind::Final(l) => final_value(series, l)?,
        HeadlineKind::Sum(ls) => ls.iter().map(|l| final_value(series, l)).sum::<Result<f64>>()?,
        HeadlineKind::AbsDifference(a, b) => (final_value(series, a)? - final_value(series, b)?).abs(),
        HeadlineKind::MaxDeviation(a, b) => {
            let missing = || Error::arg("preset output lacks a compared column");
            let ca = series.column(a).ok_or_else(missing)?;
            let cb = series.column(b).ok_or_else(missing)?;
            ca.iter().zip(cb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
        }
    })
}

/// Runs every scenario of a preset, merges the columns and evaluates the
/// headline figures.
pub fn run_preset(name: &str) -> Result<PresetResult> {
    let p = preset(name)?;
    let tagged = p.runs.len() > 1;
    let mut merged: Option<TimeSeries> = None;
    let mut diagnostics = Vec::new();
    for (tag, scenario) in &p.runs {
        let traj = run_scenario(scenario)?;
        diagnostics.push(traj.diagnostics);
        let series = traj.series;
        merged = Some(match merged {
            None => {
                let mut s = series;
                if tagged {
                    s.labels = s.labels.iter().map(|l| format!("{l}@{tag}")).collect();
                }
                s
            }
            Some(mut acc) => {
                if acc.times != series.times {
                    return Err(Error::arg(format!("preset {name}: runs do not share a time grid")));
                }
                for (l, col) in series.labels.iter().zip(series.values) {
                    acc.labels.push(format!("{l}@{tag}"));
                    acc.values.push(col);
                }
                acc
            }
        });
    }
    let series = merged.expect("presets have at least one run");
    let headlines = p
        .headlines
        .into_iter()
        .map(|h| {
            let value = evaluate(&series, &h.kind)?;
            Ok(HeadlineResult { headline: h, value })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PresetResult {
        name: p.name,
        series,
        headlines,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_resolves() {
        for name in PRESET_NAMES {
            let p = preset(name).unwrap();
            assert!(!p.runs.is_empty() && !p.headlines.is_empty());
        }
        assert!(preset("fig5").is_err());
    }

    #[test]
    fn captioned_parameters() {
        let fig2 = preset("fig2").unwrap();
        let p = fig2.runs[0].1.scheme1_params().unwrap().clone();
        assert_eq!(
            (p.omega0, p.omega1, p.omega3, p.gamma, p.u),
            (0.77, 0.05, 0.05, 6.0, 300.0)
        );
        let fig6 = preset("fig6").unwrap();
        let q = fig6.runs[0].1.scheme2_params().unwrap();
        assert_eq!(
            (q.omega_a, q.omega_p, q.delta1, q.gamma, q.n_switch),
            (0.02, 0.0, 300.0, 0.01, 10)
        );
        let fig7 = preset("fig7").unwrap();
        let q = fig7.runs[0].1.scheme2_params().unwrap();
        assert_eq!((q.omega_p, q.delta2, q.n_switch), (1.0, 80.0, 64));
        assert!(!q.stark_compensation);
        let truncated = preset("fig7_full_truncated").unwrap();
        let flags: Vec<bool> = truncated
            .runs
            .iter()
            .map(|(_, s)| s.scheme2_params().unwrap().stark_compensation)
            .collect();
        assert_eq!(flags, [true, false]);
        let fig8 = preset("fig8").unwrap();
        let p = fig8.runs[0].1.scheme1_params().unwrap();
        assert_eq!((p.n_atoms, p.omega1, p.gamma_eff), (5, 0.02, Some(0.4)));
    }

    #[test]
    fn headline_evaluation() {
        let mut s = TimeSeries::new(vec!["a".into(), "b".into()]);
        s.push(0.0, &[0.0, 0.5]);
        s.push(1.0, &[0.4, 0.45]);
        assert_eq!(evaluate(&s, &fin("a")).unwrap(), 0.4);
        assert!((evaluate(&s, &HeadlineKind::Sum(vec!["a".into(), "b".into()])).unwrap() - 0.85).abs() < 1e-15);
        assert!((evaluate(&s, &HeadlineKind::AbsDifference("a".into(), "b".into())).unwrap() - 0.05).abs() < 1e-15);
        assert_eq!(
            evaluate(&s, &HeadlineKind::MaxDeviation("a".into(), "b".into())).unwrap(),
            0.5
        );
        assert!(evaluate(&s, &fin("c")).is_err());
    }
}
