use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::scheme1::{default_delta1, GaussianPulse, Scheme1Params};
use crate::scheme2::Scheme2Params;

use super::{InitialState, ModelParams, ObservableSpec, Scenario, SchemeKind, Units};

const TOP_KEYS: &[&str] = &[
    "scheme",
    "t_end",
    "dt",
    "sample_stride",
    "observables",
    "initial_state",
    "output",
    "units",
    "override_constraints",
];

const SCHEME1_KEYS: &[&str] = &[
    "scheme1.n_atoms",
    "scheme1.omega0",
    "scheme1.omega1",
    "scheme1.omega2",
    "scheme1.omega3",
    "scheme1.delta1",
    "scheme1.delta2",
    "scheme1.delta3",
    "scheme1.u",
    "scheme1.gamma",
    "scheme1.gamma_r",
    "scheme1.gamma_eff",
    "scheme1.mixed_neighbor_factor",
    "scheme1.stark_compensation",
    "scheme1.pulse.amplitude",
    "scheme1.pulse.center",
    "scheme1.pulse.width",
];

const SCHEME2_KEYS: &[&str] = &[
    "scheme2.omega_a",
    "scheme2.omega_b",
    "scheme2.omega_p",
    "scheme2.delta1",
    "scheme2.delta2",
    "scheme2.u_rr",
    "scheme2.u_pp",
    "scheme2.gamma",
    "scheme2.n_switch",
    "scheme2.t_total",
    "scheme2.stark_compensation",
];

struct Entry {
    value: String,
    line: usize,
}

struct Doc {
    entries: HashMap<String, Entry>,
}

fn config_err(line: usize, key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        key: key.to_string(),
        message: message.into(),
    }
}

impl Doc {
    fn lex(text: &str) -> Result<Self> {
        let mut entries: HashMap<String, Entry> = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| config_err(line, content, "expected `key = value`"))?;
            let key = key.trim();
            let valid = !key.is_empty()
                && key
                    .split('.')
                    .all(|part| !part.is_empty() && part.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'));
            if !valid {
                return Err(config_err(line, key, "malformed key"));
            }
            if let Some(prev) = entries.get(key) {
                return Err(config_err(
                    line,
                    key,
                    format!("duplicate key (first set on line {})", prev.line),
                ));
            }
            entries.insert(
                key.to_string(),
                Entry {
                    value: value.trim().to_string(),
                    line,
                },
            );
        }
        Ok(Self { entries })
    }

    fn line(&self, key: &str) -> usize {
        self.entries.get(key).map_or(0, |e| e.line)
    }

    fn raw(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.raw(key)
            .map(|e| {
                e.value
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| config_err(e.line, key, format!("expected a number, got `{}`", e.value)))
            })
            .transpose()
    }

    fn rate(&self, key: &str) -> Result<Option<f64>> {
        match self.f64(key)? {
            Some(v) if v < 0.0 => Err(config_err(
                self.line(key),
                key,
                format!("must be non-negative, got {v}"),
            )),
            other => Ok(other),
        }
    }

    fn usize(&self, key: &str) -> Result<Option<usize>> {
        self.raw(key)
            .map(|e| {
                e.value.parse::<usize>().map_err(|_| {
                    config_err(
                        e.line,
                        key,
                        format!("expected a non-negative integer, got `{}`", e.value),
                    )
                })
            })
            .transpose()
    }

    fn bool(&self, key: &str) -> Result<Option<bool>> {
        self.raw(key)
            .map(|e| match e.value.as_str() {
                "true" => Ok(true),
                "false" => Ok(false),
                other => Err(config_err(
                    e.line,
                    key,
                    format!("expected true or false, got `{other}`"),
                )),
            })
            .transpose()
    }
}

/// Parses a flat `key = value` scenario document.
///
/// Unset parameters take the defaults of the corresponding protocol's
/// reference configuration; dependent detunings are filled from the
/// constraint relations.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let doc = Doc::lex(text)?;
    let scheme_entry = doc
        .raw("scheme")
        .ok_or_else(|| config_err(0, "scheme", "missing required key"))?;
    let scheme = SchemeKind::from_name(&scheme_entry.value).ok_or_else(|| {
        let names: Vec<_> = SchemeKind::ALL.iter().map(|k| k.name()).collect();
        config_err(
            scheme_entry.line,
            "scheme",
            format!(
                "unknown scheme `{}`; expected one of {}",
                scheme_entry.value,
                names.join(", ")
            ),
        )
    })?;
    let allowed = if scheme.is_scheme1() {
        SCHEME1_KEYS
    } else {
        SCHEME2_KEYS
    };
    let mut keys: Vec<(&String, &Entry)> = doc.entries.iter().collect();
    keys.sort_by_key(|(_, e)| e.line);
    for (key, e) in keys {
        if !TOP_KEYS.contains(&key.as_str()) && !allowed.contains(&key.as_str()) {
            let hint = if SCHEME1_KEYS.contains(&key.as_str()) || SCHEME2_KEYS.contains(&key.as_str()) {
                format!("not valid for scheme {}", scheme.name())
            } else {
                "unknown key".to_string()
            };
            return Err(config_err(e.line, key, hint));
        }
    }

    let override_constraints = doc.bool("override_constraints")?.unwrap_or(false);
    let params = if scheme.is_scheme1() {
        ModelParams::Scheme1(scheme1_params(&doc, scheme, override_constraints)?)
    } else {
        ModelParams::Scheme2(scheme2_params(&doc, override_constraints)?)
    };

    let t_end = match doc.f64("t_end")? {
        Some(t) if t <= 0.0 => return Err(config_err(doc.line("t_end"), "t_end", "must be positive")),
        Some(t) => t,
        None => match &params {
            ModelParams::Scheme1(_) => 200.0,
            ModelParams::Scheme2(p) => p.t_total,
        },
    };
    if let ModelParams::Scheme2(p) = &params {
        if t_end > p.t_total * (1.0 + 1e-12) {
            return Err(config_err(
                doc.line("t_end"),
                "t_end",
                format!("exceeds scheme2.t_total = {}", p.t_total),
            ));
        }
    }
    let dt = match doc.f64("dt")? {
        Some(d) if d <= 0.0 => return Err(config_err(doc.line("dt"), "dt", "must be positive")),
        other => other,
    };
    let sample_stride = match doc.usize("sample_stride")? {
        Some(0) => {
            return Err(config_err(
                doc.line("sample_stride"),
                "sample_stride",
                "must be at least 1",
            ))
        }
        other => other,
    };
    let observables = match doc.raw("observables") {
        Some(e) => e
            .value
            .split(',')
            .map(|item| {
                ObservableSpec::parse(item).ok_or_else(|| {
                    config_err(
                        e.line,
                        "observables",
                        format!("expected P(name) or F(name), got `{}`", item.trim()),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?,
        None if scheme.is_scheme1() => vec![
            ObservableSpec::Population("GHZ-".into()),
            ObservableSpec::Population("GHZ+".into()),
        ],
        None => vec![ObservableSpec::Fidelity("GHZ-".into())],
    };
    if observables.is_empty() {
        return Err(config_err(doc.line("observables"), "observables", "empty list"));
    }
    let initial_state = match doc.raw("initial_state") {
        None => InitialState::Mixed,
        Some(e) => parse_initial_state(&e.value).map_err(|m| config_err(e.line, "initial_state", m))?,
    };
    let units = match doc.raw("units") {
        None => Units::Reference,
        Some(e) => match e.value.as_str() {
            "reference" => Units::Reference,
            "MHz_2pi" => Units::MHz2Pi,
            other => {
                return Err(config_err(
                    e.line,
                    "units",
                    format!("expected `reference` or `MHz_2pi`, got `{other}`"),
                ))
            }
        },
    };
    let output = doc.raw("output").map(|e| e.value.clone()).filter(|s| !s.is_empty());

    Ok(Scenario {
        scheme,
        params,
        override_constraints,
        initial_state,
        t_end,
        dt,
        observables,
        sample_stride,
        output,
        units,
    })
}

fn parse_initial_state(value: &str) -> std::result::Result<InitialState, String> {
    if value == "mixed" {
        return Ok(InitialState::Mixed);
    }
    if let Some(name) = value.strip_prefix("pure:") {
        let name = name.trim();
        if name.is_empty() {
            return Err("empty state name".into());
        }
        return Ok(InitialState::Pure(name.to_string()));
    }
    if let Some(list) = value.strip_prefix("diagonal:") {
        let weights = list
            .split(',')
            .map(|w| {
                w.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("bad weight `{}`", w.trim()))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err("weights must be non-negative".into());
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(format!("weights sum to {total}, expected 1"));
        }
        return Ok(InitialState::Diagonal(weights));
    }
    Err(format!(
        "expected `mixed`, `pure:<name>` or `diagonal:<w0,w1,...>`, got `{value}`"
    ))
}

fn scheme1_params(doc: &Doc, scheme: SchemeKind, override_constraints: bool) -> Result<Scheme1Params> {
    let defaults = Scheme1Params::fig2();
    let n_atoms = doc.usize("scheme1.n_atoms")?.unwrap_or(3);
    let n_ok = match scheme {
        SchemeKind::Scheme1Effective => n_atoms == 3 || n_atoms == 5,
        _ => n_atoms == 3,
    };
    if !n_ok {
        return Err(config_err(
            doc.line("scheme1.n_atoms"),
            "scheme1.n_atoms",
            format!("{n_atoms} atoms not supported by {}", scheme.name()),
        ));
    }
    let r = |key: &str, default: f64| -> Result<f64> { Ok(doc.rate(key)?.unwrap_or(default)) };
    let omega2 = r("scheme1.omega2", defaults.omega2)?;
    let u = r("scheme1.u", defaults.u)?;
    let d1_default = default_delta1(n_atoms, omega2)?;
    let delta1 = doc.f64("scheme1.delta1")?.unwrap_or(d1_default);
    let delta2 = doc.f64("scheme1.delta2")?.unwrap_or(u);
    let delta3 = doc.f64("scheme1.delta3")?.unwrap_or(2.0 * u - delta1);

    if !override_constraints {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()));
        let hint = "; set override_constraints = true to allow";
        if !close(delta1, d1_default) {
            return Err(config_err(
                doc.line("scheme1.delta1"),
                "scheme1.delta1",
                format!("Δ1 = {delta1} violates Δ1 = {d1_default} for {n_atoms} atoms{hint}"),
            ));
        }
        if !close(delta2, u) {
            return Err(config_err(
                doc.line("scheme1.delta2"),
                "scheme1.delta2",
                format!("Δ2 = {delta2} violates Δ2 = U = {u}{hint}"),
            ));
        }
        if !close(delta3, 2.0 * u - delta1) {
            return Err(config_err(
                doc.line("scheme1.delta3"),
                "scheme1.delta3",
                format!("Δ3 = {delta3} violates Δ3 = 2U − Δ1 = {}{hint}", 2.0 * u - delta1),
            ));
        }
    }

    let pulse_keys = ["scheme1.pulse.amplitude", "scheme1.pulse.center", "scheme1.pulse.width"];
    let pulse_vals = [
        doc.f64(pulse_keys[0])?,
        doc.f64(pulse_keys[1])?,
        doc.f64(pulse_keys[2])?,
    ];
    let pulse = match pulse_vals {
        [None, None, None] => None,
        [Some(amplitude), Some(center), Some(width)] => {
            if !(width > 0.0) {
                return Err(config_err(doc.line(pulse_keys[2]), pulse_keys[2], "must be positive"));
            }
            Some(GaussianPulse {
                amplitude,
                center,
                width,
            })
        }
        _ => {
            let missing = pulse_keys
                .iter()
                .zip(pulse_vals)
                .find(|(_, v)| v.is_none())
                .map(|(k, _)| *k)
                .unwrap_or(pulse_keys[0]);
            let line = pulse_keys.iter().map(|k| doc.line(k)).max().unwrap_or(0);
            return Err(config_err(line, missing, "pulse needs amplitude, center and width"));
        }
    };

    let p = Scheme1Params {
        omega0: r("scheme1.omega0", defaults.omega0)?,
        omega1: r("scheme1.omega1", defaults.omega1)?,
        omega2,
        omega3: r("scheme1.omega3", defaults.omega3)?,
        delta1,
        delta2,
        delta3,
        u,
        gamma: r("scheme1.gamma", defaults.gamma)?,
        gamma_r: r("scheme1.gamma_r", 0.0)?,
        n_atoms,
        pulse,
        gamma_eff: doc.rate("scheme1.gamma_eff")?,
        mixed_neighbor_factor: r("scheme1.mixed_neighbor_factor", 1.0)?,
        stark_compensation: doc.bool("scheme1.stark_compensation")?.unwrap_or(false),
    };
    p.validate(true)
        .map_err(|e| config_err(doc.line("scheme"), "scheme1", e.to_string()))?;
    if scheme == SchemeKind::Scheme1Collective && p.omega1 != p.omega3 {
        return Err(config_err(
            doc.line("scheme1.omega3").max(doc.line("scheme1.omega1")),
            "scheme1.omega3",
            "collective model needs Ω1 = Ω3",
        ));
    }
    Ok(p)
}

fn scheme2_params(doc: &Doc, override_constraints: bool) -> Result<Scheme2Params> {
    let d = Scheme2Params::fig7();
    let r = |key: &str, default: f64| -> Result<f64> { Ok(doc.rate(key)?.unwrap_or(default)) };
    let delta1 = r("scheme2.delta1", d.delta1)?;
    let delta2 = r("scheme2.delta2", d.delta2)?;
    let u_rr = r("scheme2.u_rr", delta1)?;
    let u_pp = r("scheme2.u_pp", delta2)?;
    if !override_constraints {
        let hint = "; set override_constraints = true to allow";
        if u_rr != delta1 {
            return Err(config_err(
                doc.line("scheme2.u_rr"),
                "scheme2.u_rr",
                format!("U_rr = {u_rr} violates U_rr = Δ1 = {delta1}{hint}"),
            ));
        }
        if u_pp != delta2 {
            return Err(config_err(
                doc.line("scheme2.u_pp"),
                "scheme2.u_pp",
                format!("U_pp = {u_pp} violates U_pp = Δ2 = {delta2}{hint}"),
            ));
        }
    }
    let n_switch = doc.usize("scheme2.n_switch")?.unwrap_or(d.n_switch);
    if n_switch == 0 {
        return Err(config_err(
            doc.line("scheme2.n_switch"),
            "scheme2.n_switch",
            "must be at least 1",
        ));
    }
    let t_total = r("scheme2.t_total", d.t_total)?;
    if t_total == 0.0 {
        return Err(config_err(
            doc.line("scheme2.t_total"),
            "scheme2.t_total",
            "must be positive",
        ));
    }
    let p = Scheme2Params {
        omega_a: r("scheme2.omega_a", d.omega_a)?,
        omega_b: r("scheme2.omega_b", d.omega_b)?,
        omega_p: r("scheme2.omega_p", d.omega_p)?,
        delta1,
        delta2,
        u_rr,
        u_pp,
        gamma: r("scheme2.gamma", d.gamma)?,
        n_switch,
        t_total,
        stark_compensation: doc.bool("scheme2.stark_compensation")?.unwrap_or(false),
    };
    if p.omega_p > 0.0 && delta2 == 0.0 {
        return Err(config_err(
            doc.line("scheme2.delta2"),
            "scheme2.delta2",
            "must be positive when Ωp > 0",
        ));
    }
    Ok(p)
}

/// Renders a scenario with every field explicit; [`parse_scenario`] inverts it.
pub fn render_scenario(s: &Scenario) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    kv("scheme", s.scheme.name().to_string());
    kv("override_constraints", s.override_constraints.to_string());
    kv("t_end", s.t_end.to_string());
    if let Some(dt) = s.dt {
        kv("dt", dt.to_string());
    }
    if let Some(stride) = s.sample_stride {
        kv("sample_stride", stride.to_string());
    }
    kv(
        "observables",
        s.observables.iter().map(|o| o.label()).collect::<Vec<_>>().join(", "),
    );
    kv(
        "initial_state",
        match &s.initial_state {
            InitialState::Mixed => "mixed".to_string(),
            InitialState::Pure(n) => format!("pure:{n}"),
            InitialState::Diagonal(w) => format!(
                "diagonal:{}",
                w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            ),
        },
    );
    if let Some(o) = &s.output {
        kv("output", o.clone());
    }
    kv("units", s.units.name().to_string());
    match &s.params {
        ModelParams::Scheme1(p) => {
            kv("scheme1.n_atoms", p.n_atoms.to_string());
            kv("scheme1.omega0", p.omega0.to_string());
            kv("scheme1.omega1", p.omega1.to_string());
            kv("scheme1.omega2", p.omega2.to_string());
            kv("scheme1.omega3", p.omega3.to_string());
            kv("scheme1.delta1", p.delta1.to_string());
            kv("scheme1.delta2", p.delta2.to_string());
            kv("scheme1.delta3", p.delta3.to_string());
            kv("scheme1.u", p.u.to_string());
            kv("scheme1.gamma", p.gamma.to_string());
            kv("scheme1.gamma_r", p.gamma_r.to_string());
            if let Some(g) = p.gamma_eff {
                kv("scheme1.gamma_eff", g.to_string());
            }
            kv("scheme1.mixed_neighbor_factor", p.mixed_neighbor_factor.to_string());
            kv("scheme1.stark_compensation", p.stark_compensation.to_string());
            if let Some(pulse) = p.pulse {
                kv("scheme1.pulse.amplitude", pulse.amplitude.to_string());
                kv("scheme1.pulse.center", pulse.center.to_string());
                kv("scheme1.pulse.width", pulse.width.to_string());
            }
        }
        ModelParams::Scheme2(p) => {
            kv("scheme2.omega_a", p.omega_a.to_string());
            kv("scheme2.omega_b", p.omega_b.to_string());
            kv("scheme2.omega_p", p.omega_p.to_string());
            kv("scheme2.delta1", p.delta1.to_string());
            kv("scheme2.delta2", p.delta2.to_string());
            kv("scheme2.u_rr", p.u_rr.to_string());
            kv("scheme2.u_pp", p.u_pp.to_string());
            kv("scheme2.gamma", p.gamma.to_string());
            kv("scheme2.n_switch", p.n_switch.to_string());
            kv("scheme2.t_total", p.t_total.to_string());
            kv("scheme2.stark_compensation", p.stark_compensation.to_string());
        }
    }
    out
}
