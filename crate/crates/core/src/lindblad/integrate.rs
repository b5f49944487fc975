//! Fixed-step RK4 propagation of single master equations and switching
//! schedules.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, ZERO};

use super::{check_state, fidelity, population, Generator, MasterEq, Workspace};

/// Largest allowed `dt · f_max`.
pub const MAX_PHASE_PER_STEP: f64 = 0.1;
/// Trace drift beyond this aborts the integration.
pub const TRACE_DRIFT_LIMIT: f64 = 1e-6;
const INITIAL_STATE_TOL: f64 = 1e-8;

/// One timed activation of a master equation inside a [`Schedule`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub duration: f64,
    /// Index into [`Schedule::models`].
    pub model: usize,
}

/// Piecewise-constant choice of generator over time.
#[derive(Debug, Clone)]
pub struct Schedule {
    models: Vec<MasterEq>,
    segments: Vec<Segment>,
    repeats: usize,
}

impl Schedule {
    pub fn new(models: Vec<MasterEq>, segments: Vec<Segment>, repeats: usize) -> Result<Self> {
        if models.is_empty() || segments.is_empty() {
            return Err(Error::arg("schedule needs at least one model and one segment"));
        }
        if repeats == 0 {
            return Err(Error::arg("schedule repeats must be at least 1"));
        }
        let dim = models[0].dim();
        if let Some(m) = models.iter().find(|m| m.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: m.dim(),
            });
        }
        for s in &segments {
            if !(s.duration > 0.0) {
                return Err(Error::arg(format!("segment duration {} not positive", s.duration)));
            }
            if s.model >= models.len() {
                return Err(Error::arg(format!("segment refers to missing model {}", s.model)));
            }
        }
        Ok(Self {
            models,
            segments,
            repeats,
        })
    }

    pub fn models(&self) -> &[MasterEq] {
        &self.models
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn repeats(&self) -> usize {
        self.repeats
    }

    pub fn dim(&self) -> usize {
        self.models[0].dim()
    }

    pub fn total_time(&self) -> f64 {
        self.repeats as f64 * self.segments.iter().map(|s| s.duration).sum::<f64>()
    }

    /// Model index for every executed segment, in order.
    pub fn expanded(&self) -> impl Iterator<Item = Segment> + '_ {
        (0..self.repeats).flat_map(move |_| self.segments.iter().copied())
    }

    pub fn f_max(&self) -> f64 {
        self.models.iter().map(MasterEq::f_max).fold(0.0, f64::max)
    }
}

/// What to propagate.
#[derive(Debug, Clone, Copy)]
pub enum Evolution<'a> {
    Single(&'a MasterEq),
    Scheduled(&'a Schedule),
}

impl<'a> From<&'a MasterEq> for Evolution<'a> {
    fn from(me: &'a MasterEq) -> Self {
        Evolution::Single(me)
    }
}

impl<'a> From<&'a Schedule> for Evolution<'a> {
    fn from(s: &'a Schedule) -> Self {
        Evolution::Scheduled(s)
    }
}

impl Evolution<'_> {
    pub fn dim(&self) -> usize {
        match self {
            Evolution::Single(me) => me.dim(),
            Evolution::Scheduled(s) => s.dim(),
        }
    }

    /// Reporting frame of the (first) model.
    pub fn frame(&self) -> Option<&[f64]> {
        match self {
            Evolution::Single(me) => me.frame(),
            Evolution::Scheduled(s) => s.models[0].frame(),
        }
    }

    pub fn f_max(&self) -> f64 {
        match self {
            Evolution::Single(me) => me.f_max(),
            Evolution::Scheduled(s) => s.f_max(),
        }
    }

    pub fn default_dt(&self) -> f64 {
        0.05 / self.f_max()
    }
}

/// A sampled quantity.
#[derive(Debug, Clone)]
pub enum Observable {
    /// `⟨ψ|ρ|ψ⟩`
    Population { label: String, state: Vec<C64> },
    /// `√⟨ψ|ρ|ψ⟩`
    Fidelity { label: String, state: Vec<C64> },
    /// `Re Tr(Aρ)`
    Expectation { label: String, op: CMatrix },
}

impl Observable {
    pub fn population(label: impl Into<String>, state: Vec<C64>) -> Self {
        Observable::Population {
            label: label.into(),
            state,
        }
    }

    pub fn fidelity(label: impl Into<String>, state: Vec<C64>) -> Self {
        Observable::Fidelity {
            label: label.into(),
            state,
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Observable::Population { label, .. }
            | Observable::Fidelity { label, .. }
            | Observable::Expectation { label, .. } => label,
        }
    }

    pub fn evaluate(&self, rho: &CMatrix) -> Result<f64> {
        match self {
            Observable::Population { state, .. } => population(rho, state),
            Observable::Fidelity { state, .. } => fidelity(rho, state),
            Observable::Expectation { op, .. } => Ok(op.matmul(rho)?.trace().re),
        }
    }
}

/// Sampled observable values. Every column has one entry per sample time.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub labels: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl TimeSeries {
    pub fn new(labels: Vec<String>) -> Self {
        let values = labels.iter().map(|_| Vec::new()).collect();
        Self {
            times: Vec::new(),
            labels,
            values,
        }
    }

    pub fn push(&mut self, t: f64, row: &[f64]) {
        assert_eq!(row.len(), self.labels.len());
        self.times.push(t);
        for (col, &v) in self.values.iter_mut().zip(row) {
            col.push(v);
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn column(&self, label: &str) -> Option<&[f64]> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|k| self.values[k].as_slice())
    }

    /// Last sampled value of a column.
    pub fn last(&self, label: &str) -> Option<f64> {
        self.column(label).and_then(|c| c.last().copied())
    }

    /// Value of a column at `t` by linear interpolation between samples.
    pub fn interpolate(&self, label: &str, t: f64) -> Option<f64> {
        let col = self.column(label)?;
        interpolate(&self.times, col, t)
    }
}

pub(crate) fn interpolate(times: &[f64], values: &[f64], t: f64) -> Option<f64> {
    let n = times.len();
    if n == 0 || t < times[0] || t > times[n - 1] {
        return None;
    }
    let k = times.partition_point(|&x| x < t);
    if k < n && times[k] == t {
        return Some(values[k]);
    }
    let (t0, t1) = (times[k - 1], times[k]);
    let w = (t - t0) / (t1 - t0);
    Some(values[k - 1] * (1.0 - w) + values[k] * w)
}

/// Worst-case physicality figures over every sampled state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub steps: usize,
    pub max_trace_drift: f64,
    pub max_hermiticity: f64,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone)]
pub struct IntegrateOptions {
    pub t_end: f64,
    /// Step size; `None` uses `0.05 / f_max`.
    pub dt: Option<f64>,
    pub sample_stride: usize,
    /// Compute the smallest eigenvalue at every sample (costs one Hermitian
    /// eigensolve per sample).
    pub track_positivity: bool,
}

impl IntegrateOptions {
    pub fn new(t_end: f64) -> Self {
        Self {
            t_end,
            dt: None,
            sample_stride: 1,
            track_positivity: true,
        }
    }

    pub fn dt(mut self, dt: f64) -> Self {
        self.dt = Some(dt);
        self
    }

    pub fn stride(mut self, stride: usize) -> Self {
        self.sample_stride = stride;
        self
    }

    pub fn positivity(mut self, on: bool) -> Self {
        self.track_positivity = on;
        self
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub series: TimeSeries,
    pub final_state: CMatrix,
    pub diagnostics: Diagnostics,
}

struct Stepper {
    k: [Vec<C64>; 4],
    tmp: Vec<C64>,
    ws: Workspace,
    /// Element frequencies `E_a − E_b` of the exactly propagated diagonal.
    omega: Option<Vec<f64>>,
    /// `e^{−iω h/2}` and `e^{−iω h}` for the cached `h`.
    phases: (f64, Vec<C64>, Vec<C64>),
}

impl Stepper {
    fn new(gen: &Generator, frame: Option<&[f64]>) -> Self {
        let n = gen.dim() * gen.dim();
        let omega = frame.map(|e| {
            e.iter()
                .flat_map(|&ea| e.iter().map(move |&eb| ea - eb))
                .collect::<Vec<_>>()
        });
        Self {
            k: [vec![ZERO; n], vec![ZERO; n], vec![ZERO; n], vec![ZERO; n]],
            tmp: vec![ZERO; n],
            ws: gen.workspace(),
            omega,
            phases: (f64::NAN, Vec::new(), Vec::new()),
        }
    }

    fn step(&mut self, gen: &Generator, t: f64, h: f64, rho: &mut [C64]) {
        if self.omega.is_some() {
            self.step_lawson(gen, t, h, rho);
        } else {
            self.step_plain(gen, t, h, rho);
        }
    }

    fn step_plain(&mut self, gen: &Generator, t: f64, h: f64, rho: &mut [C64]) {
        let Stepper { k, tmp, ws, .. } = self;
        let [k1, k2, k3, k4] = k;
        gen.apply(t, rho, k1, ws);
        for ((x, &r), &d) in tmp.iter_mut().zip(rho.iter()).zip(k1.iter()) {
            *x = r + d * (0.5 * h);
        }
        gen.apply(t + 0.5 * h, tmp, k2, ws);
        for ((x, &r), &d) in tmp.iter_mut().zip(rho.iter()).zip(k2.iter()) {
            *x = r + d * (0.5 * h);
        }
        gen.apply(t + 0.5 * h, tmp, k3, ws);
        for ((x, &r), &d) in tmp.iter_mut().zip(rho.iter()).zip(k3.iter()) {
            *x = r + d * h;
        }
        gen.apply(t + h, tmp, k4, ws);
        let w = h / 6.0;
        for (i, r) in rho.iter_mut().enumerate() {
            *r += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * w;
        }
    }

    /// RK4 in the interaction picture of the diagonal: `gen` lacks that part,
    /// which is applied exactly as elementwise phases.
    fn step_lawson(&mut self, gen: &Generator, t: f64, h: f64, rho: &mut [C64]) {
        let Stepper {
            k,
            tmp,
            ws,
            omega,
            phases,
        } = self;
        if phases.0 != h {
            let omega = omega.as_ref().expect("lawson step needs frequencies");
            phases.1 = omega.iter().map(|&w| C64::from_polar(1.0, -0.5 * w * h)).collect();
            phases.2 = omega.iter().map(|&w| C64::from_polar(1.0, -w * h)).collect();
            phases.0 = h;
        }
        let (half, full) = (&phases.1, &phases.2);
        let [k1, k2, k3, k4] = k;
        gen.apply(t, rho, k1, ws);
        for i in 0..tmp.len() {
            tmp[i] = half[i] * (rho[i] + k1[i] * (0.5 * h));
        }
        gen.apply(t + 0.5 * h, tmp, k2, ws);
        for i in 0..tmp.len() {
            tmp[i] = half[i] * rho[i] + k2[i] * (0.5 * h);
        }
        gen.apply(t + 0.5 * h, tmp, k3, ws);
        for i in 0..tmp.len() {
            tmp[i] = full[i] * rho[i] + half[i] * k3[i] * h;
        }
        gen.apply(t + h, tmp, k4, ws);
        let w = h / 6.0;
        for i in 0..rho.len() {
            rho[i] = full[i] * (rho[i] + k1[i] * w) + half[i] * (k2[i] + k3[i]) * (2.0 * w) + k4[i] * w;
        }
    }
}

/// `e^{iEt} ρ e^{−iEt}` for diagonal `E`.
fn rotate_into_frame(rho: &CMatrix, energies: &[f64], t: f64) -> CMatrix {
    CMatrix::from_fn(rho.rows(), rho.cols(), |a, b| {
        rho[(a, b)] * C64::from_polar(1.0, (energies[a] - energies[b]) * t)
    })
}

fn trace_of(rho: &[C64], d: usize) -> C64 {
    (0..d).map(|k| rho[k * d + k]).sum()
}

/// Propagates `rho0` to `opts.t_end` with classical RK4. When the model
/// carries a frame `E`, the step is taken in the interaction picture of
/// `diag(E)` (Lawson RK4), so coherences rotating at `E_a − E_b` pick up no
/// phase error.
///
/// Steps never straddle a schedule boundary: the last step of each segment is
/// shortened to land on it. Observables are recorded at t = 0, after every
/// `sample_stride` steps and at `t_end`.
pub fn integrate<'a>(
    evolution: impl Into<Evolution<'a>>,
    rho0: &CMatrix,
    opts: &IntegrateOptions,
    observables: &[Observable],
) -> Result<Trajectory> {
    let evolution = evolution.into();
    let dim = evolution.dim();
    if rho0.rows() != dim || rho0.cols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: rho0.rows(),
        });
    }
    let init = check_state(rho0, INITIAL_STATE_TOL);
    if !init.ok() {
        return Err(Error::arg(format!(
            "initial state is not a density matrix: trace error {:e}, hermiticity {:e}, min eigenvalue {:e}",
            init.trace_error, init.hermiticity, init.min_eigenvalue
        )));
    }
    if !(opts.t_end > 0.0) || !opts.t_end.is_finite() {
        return Err(Error::arg(format!("t_end must be positive, got {}", opts.t_end)));
    }
    if opts.sample_stride == 0 {
        return Err(Error::arg("sample_stride must be at least 1"));
    }
    let f_max = evolution.f_max();
    let dt = opts.dt.unwrap_or_else(|| evolution.default_dt());
    if !(dt > 0.0) {
        return Err(Error::arg(format!("step size must be positive, got {dt}")));
    }
    if dt * f_max > MAX_PHASE_PER_STEP * (1.0 + 1e-12) {
        return Err(Error::arg(format!(
            "dt·f_max = {:.4} exceeds {MAX_PHASE_PER_STEP} (dt = {dt}, f_max = {f_max})",
            dt * f_max
        )));
    }

    let plan: Vec<(f64, usize)> = match evolution {
        Evolution::Single(_) => vec![(opts.t_end, 0)],
        Evolution::Scheduled(s) => {
            let total = s.total_time();
            if opts.t_end > total * (1.0 + 1e-12) {
                return Err(Error::arg(format!(
                    "t_end {} exceeds schedule length {total}",
                    opts.t_end
                )));
            }
            let mut acc = 0.0;
            let mut out = Vec::new();
            for seg in s.expanded() {
                if acc >= opts.t_end {
                    break;
                }
                acc += seg.duration;
                out.push((acc.min(opts.t_end), seg.model));
            }
            out
        }
    };
    let frame = evolution.frame();
    let build = |me: &MasterEq| match frame {
        Some(e) => Generator::without_diagonal(me, e),
        None => Ok(Generator::new(me)),
    };
    let generators: Vec<Generator> = match evolution {
        Evolution::Single(me) => vec![build(me)?],
        Evolution::Scheduled(s) => s.models().iter().map(build).collect::<Result<_>>()?,
    };

    let mut series = TimeSeries::new(observables.iter().map(|o| o.label().to_owned()).collect());
    let mut diag = Diagnostics {
        steps: 0,
        max_trace_drift: 0.0,
        max_hermiticity: 0.0,
        min_eigenvalue: f64::INFINITY,
    };
    let mut rho = rho0.as_slice().to_vec();
    let mut stepper = Stepper::new(&generators[0], frame);

    let mut sample = |t: f64, rho: &[C64], diag: &mut Diagnostics, step: usize| -> Result<()> {
        let m = CMatrix::from_vec(dim, dim, rho.to_vec())?;
        let viewed = match frame {
            Some(e) => rotate_into_frame(&m, e, t),
            None => m.clone(),
        };
        let row = observables
            .iter()
            .map(|o| {
                o.evaluate(&viewed).map_err(|e| match e {
                    Error::Numerical { reason, .. } => Error::Numerical { step, reason },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        series.push(t, &row);
        diag.max_hermiticity = diag.max_hermiticity.max(m.hermiticity_violation());
        if opts.track_positivity {
            let min_ev = check_state(&m, f64::INFINITY).min_eigenvalue;
            diag.min_eigenvalue = diag.min_eigenvalue.min(min_ev);
        }
        Ok(())
    };

    sample(0.0, &rho, &mut diag, 0)?;
    let mut t = 0.0;
    let mut step = 0usize;
    let mut last_sampled = 0usize;
    for (seg_end, model) in plan {
        let gen = &generators[model];
        let seg_start = t;
        let n_steps = (((seg_end - seg_start) / dt) - 1e-9).ceil().max(1.0) as usize;
        for k in 0..n_steps {
            let t0 = seg_start + k as f64 * dt;
            let t1 = if k + 1 == n_steps {
                seg_end
            } else {
                seg_start + (k + 1) as f64 * dt
            };
            stepper.step(gen, t0, t1 - t0, &mut rho);
            step += 1;
            t = t1;

            let drift = (trace_of(&rho, dim) - C64::new(1.0, 0.0)).norm();
            if !drift.is_finite() || drift > TRACE_DRIFT_LIMIT {
                return Err(Error::Numerical {
                    step,
                    reason: format!("trace drift {drift:e} at t = {t}"),
                });
            }
            diag.max_trace_drift = diag.max_trace_drift.max(drift);
            if step.is_multiple_of(opts.sample_stride) {
                sample(t, &rho, &mut diag, step)?;
                last_sampled = step;
            }
        }
        t = seg_end;
    }
    if last_sampled != step {
        sample(t, &rho, &mut diag, step)?;
    }
    diag.steps = step;
    if !opts.track_positivity {
        diag.min_eigenvalue = f64::NAN;
    }
    Ok(Trajectory {
        series,
        final_state: CMatrix::from_vec(dim, dim, rho)?,
        diagnostics: diag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::{Dissipator, Envelope, HTerm};
    use crate::matrix::ONE;

    fn decay(gamma: f64) -> MasterEq {
        let mut me = MasterEq::new(2, "decay");
        let lower = CMatrix::from_vec(2, 2, vec![ZERO, ONE, ZERO, ZERO]).unwrap();
        me.add_dissipator(Dissipator::new(gamma, lower).unwrap()).unwrap();
        me
    }

    fn rabi(omega: f64, gamma: f64) -> MasterEq {
        let mut me = decay(gamma);
        let up = CMatrix::from_vec(2, 2, vec![ZERO, ZERO, ONE, ZERO]).unwrap();
        me.add_term(HTerm::with_conjugate(
            up.scale_real(omega),
            Envelope::Oscillating { freq: 0.3 },
        ))
        .unwrap();
        me
    }

    /// Two-level drive plus a large static splitting `E`.
    fn split_rabi(e: f64) -> MasterEq {
        let mut me = rabi(0.4, 0.2);
        me.add_term(HTerm::hermitian(CMatrix::from_real_diagonal(&[0.0, e])))
            .unwrap();
        me
    }

    #[test]
    fn frame_stepping_matches_plain_rk4() {
        let plain = split_rabi(30.0);
        let mut framed = plain.clone();
        framed.set_frame(vec![0.0, 30.0]).unwrap();
        let rho0 = CMatrix::from_real_diagonal(&[1.0, 0.0]);
        let obs = [Observable::population("e", vec![ZERO, ONE])];
        let opts = IntegrateOptions::new(3.0).dt(1e-4).stride(30000);
        let a = integrate(&plain, &rho0, &opts, &obs).unwrap();
        let b = integrate(&framed, &rho0, &opts, &obs).unwrap();
        assert!(a.final_state.max_abs_diff(&b.final_state) < 1e-10);
    }

    #[test]
    fn frame_stepping_is_exact_for_free_rotation() {
        let mut me = MasterEq::new(2, "free");
        me.add_term(HTerm::hermitian(CMatrix::from_real_diagonal(&[0.0, 50.0])))
            .unwrap();
        me.set_frame(vec![0.0, 50.0]).unwrap();
        let rho0 = CMatrix::from_vec(2, 2, vec![ONE * 0.5, ONE * 0.5, ONE * 0.5, ONE * 0.5]).unwrap();
        let tr = integrate(&me, &rho0, &IntegrateOptions::new(10.0).dt(1e-3), &[]).unwrap();
        let expect = C64::from_polar(0.5, 50.0 * 10.0);
        assert!((tr.final_state[(0, 1)] - expect).norm() < 1e-12);
    }

    #[test]
    fn exponential_decay() {
        let gamma = 1.0;
        let me = decay(gamma);
        let rho0 = CMatrix::from_real_diagonal(&[0.0, 1.0]);
        let obs = [Observable::population("e", vec![ZERO, ONE])];
        let tr = integrate(&me, &rho0, &IntegrateOptions::new(1.0).dt(1e-3), &obs).unwrap();
        let pe = tr.series.last("e").unwrap();
        assert!((pe - (-1.0f64).exp()).abs() < 1e-6, "{pe}");
        assert_eq!(*tr.series.times.last().unwrap(), 1.0);
    }

    #[test]
    fn sampling_stride_and_endpoint() {
        let me = decay(1.0);
        let rho0 = CMatrix::from_real_diagonal(&[0.0, 1.0]);
        let obs = [Observable::population("e", vec![ZERO, ONE])];
        let tr = integrate(&me, &rho0, &IntegrateOptions::new(1.05).dt(0.1).stride(5), &obs).unwrap();
        // 11 steps (last one shortened): samples at 0, step 5, step 10, end
        assert_eq!(tr.diagnostics.steps, 11);
        assert_eq!(tr.series.len(), 4);
        assert!((tr.series.times[1] - 0.5).abs() < 1e-12);
        assert_eq!(tr.series.times[3], 1.05);
    }

    #[test]
    fn rejects_invalid_initial_state_and_step() {
        let me = decay(1.0);
        let bad = CMatrix::from_real_diagonal(&[0.5, 0.6]);
        assert!(matches!(
            integrate(&me, &bad, &IntegrateOptions::new(1.0).dt(1e-2), &[]),
            Err(Error::Argument(_))
        ));
        let good = CMatrix::from_real_diagonal(&[0.5, 0.5]);
        // f_max = 1 so dt = 0.5 breaks the 0.1 phase budget
        assert!(integrate(&me, &good, &IntegrateOptions::new(1.0).dt(0.5), &[]).is_err());
    }

    #[test]
    fn trace_drift_is_a_numerical_error() {
        // Under-reported f_max lets RK4 run far outside its stability region.
        let mut me = decay(1e4);
        me.set_f_max(1.0);
        let rho0 = CMatrix::from_real_diagonal(&[0.0, 1.0]);
        let err = integrate(&me, &rho0, &IntegrateOptions::new(50.0).dt(0.1), &[]).unwrap_err();
        assert!(matches!(err, Error::Numerical { .. }), "{err:?}");
    }

    #[test]
    fn schedule_gluing_matches_sequential_runs() {
        let a = rabi(0.8, 0.4);
        let b = rabi(-0.5, 0.9);
        let rho0 = CMatrix::from_real_diagonal(&[0.3, 0.7]);
        let sched = Schedule::new(
            vec![a.clone(), b.clone()],
            vec![
                Segment {
                    duration: 1.0,
                    model: 0,
                },
                Segment {
                    duration: 0.75,
                    model: 1,
                },
            ],
            1,
        )
        .unwrap();
        let dt = 0.01;
        let whole = integrate(&sched, &rho0, &IntegrateOptions::new(1.75).dt(dt), &[]).unwrap();

        let first = integrate(&a, &rho0, &IntegrateOptions::new(1.0).dt(dt), &[]).unwrap();
        // the second segment sees global time, so it continues from t = 1
        let second = continue_from(&first.final_state, 1.0, 0.75, dt, &b);
        assert!(whole.final_state.max_abs_diff(&second) <= 1e-12);
    }

    fn continue_from(rho: &CMatrix, t0: f64, duration: f64, dt: f64, me: &MasterEq) -> CMatrix {
        let gen = Generator::new(me);
        let mut stepper = Stepper::new(&gen, None);
        let mut state = rho.as_slice().to_vec();
        let n = ((duration / dt) - 1e-9).ceil() as usize;
        for k in 0..n {
            let a = t0 + k as f64 * dt;
            let b = if k + 1 == n {
                t0 + duration
            } else {
                t0 + (k + 1) as f64 * dt
            };
            stepper.step(&gen, a, b - a, &mut state);
        }
        CMatrix::from_vec(2, 2, state).unwrap()
    }

    #[test]
    fn schedule_validation() {
        let me = decay(1.0);
        assert!(Schedule::new(
            vec![me.clone()],
            vec![Segment {
                duration: 0.0,
                model: 0
            }],
            1
        )
        .is_err());
        assert!(Schedule::new(
            vec![me.clone()],
            vec![Segment {
                duration: 1.0,
                model: 1
            }],
            1
        )
        .is_err());
        let s = Schedule::new(
            vec![me],
            vec![Segment {
                duration: 2.0,
                model: 0,
            }],
            3,
        )
        .unwrap();
        assert_eq!(s.total_time(), 6.0);
        let rho0 = CMatrix::from_real_diagonal(&[0.5, 0.5]);
        assert!(integrate(&s, &rho0, &IntegrateOptions::new(7.0).dt(0.01), &[]).is_err());
    }

    #[test]
    fn interpolation_between_samples() {
        let mut ts = TimeSeries::new(vec!["x".into()]);
        ts.push(0.0, &[0.0]);
        ts.push(2.0, &[4.0]);
        assert_eq!(ts.interpolate("x", 0.5), Some(1.0));
        assert_eq!(ts.interpolate("x", 2.0), Some(4.0));
        assert_eq!(ts.interpolate("x", 2.5), None);
        assert_eq!(ts.interpolate("y", 1.0), None);
    }
}
