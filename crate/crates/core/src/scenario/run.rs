use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::lindblad::{
    integrate, steady_state_report, Evolution, IntegrateOptions, MasterEq, Observable, Schedule, Trajectory,
};
use crate::matrix::CMatrix;
use crate::ops::LevelScheme;
use crate::scheme1::{self, ghz_state};
use crate::scheme2::{self, ModelKind};

use super::{InitialState, ModelParams, ObservableSpec, Scenario, SchemeKind};

/// Approximate number of samples when no stride is configured.
const DEFAULT_SAMPLES: usize = 1000;

pub enum BuiltModel {
    Single(MasterEq),
    Switched(Schedule),
}

impl BuiltModel {
    pub fn evolution(&self) -> Evolution<'_> {
        match self {
            BuiltModel::Single(me) => me.into(),
            BuiltModel::Switched(s) => s.into(),
        }
    }
}

fn mismatch(s: &Scenario) -> Error {
    Error::arg(format!("parameters do not match scheme {}", s.scheme.name()))
}

pub fn build_model(s: &Scenario) -> Result<BuiltModel> {
    match (s.scheme, &s.params) {
        (SchemeKind::Scheme1Full, ModelParams::Scheme1(p)) => Ok(BuiltModel::Single(scheme1::build_full_3atom(p)?)),
        (SchemeKind::Scheme1Effective, ModelParams::Scheme1(p)) => Ok(BuiltModel::Single(scheme1::build_effective(p)?)),
        (SchemeKind::Scheme1Collective, ModelParams::Scheme1(p)) => {
            Ok(BuiltModel::Single(scheme1::build_collective_model(p)?))
        }
        (SchemeKind::Scheme2Full, ModelParams::Scheme2(p)) => Ok(BuiltModel::Switched(
            scheme2::build_switching_schedule(p, ModelKind::Full)?,
        )),
        (SchemeKind::Scheme2Effective, ModelParams::Scheme2(p)) => Ok(BuiltModel::Switched(
            scheme2::build_switching_schedule(p, ModelKind::Effective)?,
        )),
        _ => Err(mismatch(s)),
    }
}

fn level_scheme(s: &Scenario) -> LevelScheme {
    match s.scheme {
        SchemeKind::Scheme1Full => LevelScheme::ger(),
        SchemeKind::Scheme1Effective | SchemeKind::Scheme1Collective => LevelScheme::gr(),
        SchemeKind::Scheme2Full | SchemeKind::Scheme2Effective => LevelScheme::two_ground_two_rydberg(),
    }
}

fn n_atoms(s: &Scenario) -> usize {
    s.scheme1_params().map_or(3, |p| p.n_atoms)
}

/// State vector for a name: a product label such as `grg`/`01r`, or a
/// collective name (`GHZ+`, `GHZ-`, `E1+`, `D1`, `S1`, …) of the scheme.
pub fn resolve_state(s: &Scenario, name: &str) -> Result<Vec<C64>> {
    let scheme = level_scheme(s);
    let n = n_atoms(s);
    if name.chars().count() == n {
        if let Ok(v) = scheme.ket(name) {
            return Ok(v);
        }
    }
    match s.scheme {
        SchemeKind::Scheme1Full => match name {
            "GHZ+" => ghz_state(&scheme, 3, 1.0),
            "GHZ-" => ghz_state(&scheme, 3, -1.0),
            _ => {
                // collective states live in the g/r subspace; embed them
                let small = scheme1::collective_states(3)?;
                let v = small.get(name)?;
                let gr = LevelScheme::gr();
                let mut out = vec![C64::new(0.0, 0.0); scheme.dim().pow(3)];
                for (idx, amp) in v.iter().enumerate() {
                    let levels: Vec<usize> = gr
                        .decode(idx, 3)
                        .into_iter()
                        .map(|l| {
                            if l == 0 {
                                scheme.ground()
                            } else {
                                scheme.rydberg().unwrap()
                            }
                        })
                        .collect();
                    out[scheme.basis_index(&levels)?] = *amp;
                }
                Ok(out)
            }
        },
        SchemeKind::Scheme1Effective | SchemeKind::Scheme1Collective => {
            Ok(scheme1::collective_states(n)?.get(name)?.to_vec())
        }
        SchemeKind::Scheme2Full | SchemeKind::Scheme2Effective => {
            Ok(scheme2::collective_basis_s2().get(name)?.to_vec())
        }
    }
}

fn initial_state(s: &Scenario, dim: usize) -> Result<CMatrix> {
    match &s.initial_state {
        InitialState::Mixed => match s.scheme {
            SchemeKind::Scheme2Full | SchemeKind::Scheme2Effective => Ok(scheme2::mixed_initial_state_6()),
            _ => scheme1::mixed_initial_state(n_atoms(s), &level_scheme(s)),
        },
        InitialState::Pure(name) => Ok(CMatrix::projector(&resolve_state(s, name)?)),
        InitialState::Diagonal(w) => {
            if w.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: w.len(),
                });
            }
            Ok(CMatrix::from_real_diagonal(w))
        }
    }
}

fn observables(s: &Scenario) -> Result<Vec<Observable>> {
    s.observables
        .iter()
        .map(|o| {
            Ok(match o {
                ObservableSpec::Population(n) => Observable::population(o.label(), resolve_state(s, n)?),
                ObservableSpec::Fidelity(n) => Observable::fidelity(o.label(), resolve_state(s, n)?),
            })
        })
        .collect()
}

/// Integrates a scenario. Sample times are expressed in the scenario's units.
pub fn run_scenario(s: &Scenario) -> Result<Trajectory> {
    let model = build_model(s)?;
    let evolution = model.evolution();
    let rho0 = initial_state(s, evolution.dim())?;
    let obs = observables(s)?;
    let dt = s.dt.unwrap_or_else(|| evolution.default_dt());
    let steps = (s.t_end / dt).ceil() as usize;
    let stride = s.sample_stride.unwrap_or((steps / DEFAULT_SAMPLES).max(1));
    let opts = IntegrateOptions::new(s.t_end).dt(dt).stride(stride);
    let mut traj = integrate(evolution, &rho0, &opts, &obs)?;
    let factor = s.units.time_factor(s.scheme);
    if factor != 1.0 {
        for t in traj.series.times.iter_mut() {
            *t *= factor;
        }
    }
    Ok(traj)
}

#[derive(Debug, Clone)]
pub struct SteadyReport {
    pub rho: CMatrix,
    pub smallest: C64,
    pub second: C64,
    pub values: Vec<(String, f64)>,
}

/// Steady state of a time-independent scenario model, with its observables.
pub fn steady_scenario(s: &Scenario) -> Result<SteadyReport> {
    let me = match build_model(s)? {
        BuiltModel::Single(me) => me,
        BuiltModel::Switched(_) => {
            return Err(Error::arg(format!(
                "{} is a switched model; steady states need a single time-independent generator",
                s.scheme.name()
            )))
        }
    };
    let ss = steady_state_report(&me)?;
    let values = observables(s)?
        .iter()
        .map(|o| Ok((o.label().to_string(), o.evaluate(&ss.rho)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SteadyReport {
        rho: ss.rho,
        smallest: ss.smallest,
        second: ss.second,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;

    #[test]
    fn resolves_names_per_scheme() {
        let full = parse_scenario("scheme = scheme1_full\n").unwrap();
        assert_eq!(resolve_state(&full, "grg").unwrap().len(), 27);
        let e1 = resolve_state(&full, "E1+").unwrap();
        let idx = LevelScheme::ger().basis_index(&[0, 2, 2]).unwrap();
        assert!((e1[idx].re - 1.0 / 6f64.sqrt()).abs() < 1e-15);
        let eff = parse_scenario("scheme = scheme1_effective\n").unwrap();
        assert_eq!(resolve_state(&eff, "GHZ-").unwrap().len(), 8);
        let s2 = parse_scenario("scheme = scheme2_effective\n").unwrap();
        assert_eq!(resolve_state(&s2, "01r").unwrap().len(), 64);
        assert!(resolve_state(&s2, "nope").is_err());
    }

    #[test]
    fn short_collective_run() {
        let s = parse_scenario(
            "scheme = scheme1_collective\nt_end = 5\ndt = 0.01\nsample_stride = 100\ninitial_state = pure:GHZ-\n",
        )
        .unwrap();
        let traj = run_scenario(&s).unwrap();
        assert_eq!(traj.series.times, vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        assert!((traj.series.last("P(GHZ-)").unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn units_rescale_time_axis() {
        let s = parse_scenario("scheme = scheme1_collective\nt_end = 1\ndt = 0.01\nunits = MHz_2pi\n").unwrap();
        let traj = run_scenario(&s).unwrap();
        let last = *traj.series.times.last().unwrap();
        assert!((last - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
    }

    #[test]
    fn steady_needs_static_model() {
        let s = parse_scenario("scheme = scheme1_collective\n").unwrap();
        let rep = steady_scenario(&s).unwrap();
        assert!(rep.values[0].1 >= 0.999);
        let sw = parse_scenario("scheme = scheme2_effective\n").unwrap();
        assert!(matches!(steady_scenario(&sw), Err(Error::Argument(_))));
    }

    #[test]
    fn diagonal_initial_state_checked() {
        let s = parse_scenario("scheme = scheme1_collective\nt_end = 1\ninitial_state = diagonal:0.5,0.5\n").unwrap();
        assert!(matches!(run_scenario(&s), Err(Error::DimensionMismatch { .. })));
    }
}
