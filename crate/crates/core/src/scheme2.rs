//! Switched unconventional Rydberg pumping (URP) with a continuous
//! antiblockade channel, for three four-level atoms `(0, 1, r, p)`.
//!
//! Step 1 pumps configurations with a single `|0⟩` among `|1⟩`s out of the
//! ground manifold, step 2 those with a single `|1⟩`; alternating them funnels
//! population into `{|000⟩, |111⟩}`. The `p` channel drives `|+++⟩`
//! collectively to `|ppp⟩` and so destabilizes GHZ₊, leaving GHZ₋.
//!
//! Rates are in units of `Ω_b`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::lindblad::{far_detuned_shifts, Dissipator, Envelope, HTerm, MasterEq, Schedule, Segment};
use crate::matrix::{normalized, CMatrix, ZERO};
use crate::ops::{embed_unit, LevelScheme, NamedStates};

const D: usize = 4;
const N_ATOMS: usize = 3;
const DIM: usize = 64;
const L0: usize = 0;
const L1: usize = 1;
const LR: usize = 2;
const LP: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct Scheme2Params {
    pub omega_a: f64,
    pub omega_b: f64,
    pub omega_p: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub u_rr: f64,
    pub u_pp: f64,
    /// Decay rate of both Rydberg levels, split equally into the two ground states.
    pub gamma: f64,
    /// Number of switching segments.
    pub n_switch: usize,
    pub t_total: f64,
    /// Adds to the full model a static term cancelling the second-order light
    /// shifts of couplings detuned by more than half the smaller of `Δ₁`, `Δ₂`.
    pub stark_compensation: bool,
}

impl Scheme2Params {
    /// Parameters with `U_rr = Δ₁` and `U_pp = Δ₂`.
    #[allow(clippy::too_many_arguments)]
    pub fn constrained(
        omega_a: f64,
        omega_b: f64,
        omega_p: f64,
        delta1: f64,
        delta2: f64,
        gamma: f64,
        n_switch: usize,
        t_total: f64,
    ) -> Result<Self> {
        let p = Self {
            omega_a,
            omega_b,
            omega_p,
            delta1,
            delta2,
            u_rr: delta1,
            u_pp: delta2,
            gamma,
            n_switch,
            t_total,
            stark_compensation: false,
        };
        p.validate(false)?;
        Ok(p)
    }

    /// Ωa = 0.02, Δ₁ = 300, γ = 0.01, N = 10, no antiblockade drive.
    pub fn fig6() -> Self {
        Self::constrained(0.02, 1.0, 0.0, 300.0, 80.0, 0.01, 10, 50_000.0).unwrap()
    }

    /// Ωa = 0.02, Ωp = 1, Δ₁ = 300, Δ₂ = 80, γ = 0.01, N = 64.
    pub fn fig7() -> Self {
        Self::constrained(0.02, 1.0, 1.0, 300.0, 80.0, 0.01, 64, 50_000.0).unwrap()
    }

    pub fn apply_constraints(&mut self) {
        self.u_rr = self.delta1;
        self.u_pp = self.delta2;
    }

    pub fn validate(&self, override_constraints: bool) -> Result<()> {
        let rates = [
            ("Ωa", self.omega_a),
            ("Ωb", self.omega_b),
            ("Ωp", self.omega_p),
            ("Δ1", self.delta1),
            ("Δ2", self.delta2),
            ("U_rr", self.u_rr),
            ("U_pp", self.u_pp),
            ("γ", self.gamma),
        ];
        for (name, v) in rates {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::arg(format!("{name} must be non-negative, got {v}")));
            }
        }
        if self.n_switch == 0 {
            return Err(Error::arg("N must be at least 1"));
        }
        if !(self.t_total > 0.0) {
            return Err(Error::arg(format!("T_total must be positive, got {}", self.t_total)));
        }
        if !override_constraints {
            if self.u_rr != self.delta1 {
                return Err(Error::arg(format!(
                    "U_rr = {} violates U_rr = Δ1 = {}",
                    self.u_rr, self.delta1
                )));
            }
            if self.u_pp != self.delta2 {
                return Err(Error::arg(format!(
                    "U_pp = {} violates U_pp = Δ2 = {}",
                    self.u_pp, self.delta2
                )));
            }
        }
        Ok(())
    }
}

/// Which half of the switching cycle is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// Pump from `|0⟩` (operator `σ^{r0}`).
    One,
    /// Pump from `|1⟩` (operator `σ^{r1}`).
    Two,
}

impl Step {
    pub fn from_index(step: usize) -> Result<Self> {
        match step {
            1 => Ok(Step::One),
            2 => Ok(Step::Two),
            s => Err(Error::arg(format!("invalid step {s}; expected 1 or 2"))),
        }
    }

    fn pumped_level(self) -> usize {
        match self {
            Step::One => L0,
            Step::Two => L1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Full,
    Effective,
}

fn scheme() -> LevelScheme {
    LevelScheme::two_ground_two_rydberg()
}

fn ket(label: &str) -> Vec<C64> {
    scheme().ket(label).expect("valid ket label")
}

fn plus() -> [C64; D] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [C64::new(s, 0.0), C64::new(s, 0.0), ZERO, ZERO]
}

fn minus() -> [C64; D] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [C64::new(s, 0.0), C64::new(-s, 0.0), ZERO, ZERO]
}

fn product(locals: &[[C64; D]]) -> Vec<C64> {
    let mut v = vec![C64::new(1.0, 0.0)];
    for local in locals {
        v = v.iter().flat_map(|a| local.iter().map(move |b| a * b)).collect();
    }
    v
}

fn level(l: usize) -> [C64; D] {
    let mut v = [ZERO; D];
    v[l] = C64::new(1.0, 0.0);
    v
}

fn pair_interaction(l: usize, strength: f64) -> Result<CMatrix> {
    let mut h = CMatrix::zeros(DIM, DIM);
    for j in 0..N_ATOMS {
        for k in (j + 1)..N_ATOMS {
            let pair = &embed_unit(D, l, l, j, N_ATOMS)? * &embed_unit(D, l, l, k, N_ATOMS)?;
            h += &pair.scale_real(strength);
        }
    }
    Ok(h)
}

/// `|p⟩_j⟨+|` embedded at site `j`.
pub fn p_plus(site: usize) -> Result<CMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Ok(&embed_unit(D, LP, L0, site, N_ATOMS)?.scale_real(s) + &embed_unit(D, LP, L1, site, N_ATOMS)?.scale_real(s))
}

fn add_decay(me: &mut MasterEq, gamma: f64) -> Result<()> {
    if gamma == 0.0 {
        return Ok(());
    }
    for j in 0..N_ATOMS {
        for upper in [LR, LP] {
            for lower in [L0, L1] {
                me.add_dissipator(Dissipator::new(gamma / 2.0, embed_unit(D, lower, upper, j, N_ATOMS)?)?)?;
            }
        }
    }
    Ok(())
}

/// Full three-atom model of one switching step, dimension 64.
pub fn build_step_full(p: &Scheme2Params, step: usize) -> Result<MasterEq> {
    let step = Step::from_index(step)?;
    let src = step.pumped_level();
    let mut me = MasterEq::new(
        DIM,
        format!("scheme2 full step {}", if step == Step::One { 1 } else { 2 }),
    );
    for j in 0..N_ATOMS {
        let sigma = embed_unit(D, LR, src, j, N_ATOMS)?;
        if p.omega_a != 0.0 {
            me.add_term(HTerm::with_conjugate(sigma.scale_real(p.omega_a), Envelope::Constant))?;
        }
        if p.omega_b != 0.0 {
            me.add_term(HTerm::with_conjugate(
                sigma.scale_real(p.omega_b),
                Envelope::Oscillating { freq: p.delta1 },
            ))?;
        }
        if p.omega_p != 0.0 {
            me.add_term(HTerm::with_conjugate(
                p_plus(j)?.scale_real(2f64.sqrt() * p.omega_p),
                Envelope::Oscillating { freq: p.delta2 },
            ))?;
        }
    }
    let interaction = &pair_interaction(LR, p.u_rr)? + &pair_interaction(LP, p.u_pp)?;
    let energies: Vec<f64> = (0..DIM).map(|k| interaction[(k, k)].re).collect();
    me.add_term(HTerm::hermitian(interaction))?;
    if p.stark_compensation {
        let shifts = far_detuned_shifts(&me, &energies, 0.5 * p.delta1.min(p.delta2));
        me.add_term(HTerm::hermitian(shifts.scale_real(-1.0)))?;
    }
    add_decay(&mut me, p.gamma)?;
    me.set_f_max([p.delta1, p.delta2, p.u_rr, p.u_pp].into_iter().fold(0.0, f64::max));
    me.set_frame(energies)?;
    Ok(me)
}

/// Static URP Hamiltonian of a step: an atom in the pumped ground level is
/// excited to `r` only when both others sit in the opposite ground level.
pub fn urp_hamiltonian(omega_a: f64, step: Step) -> Result<CMatrix> {
    let src = step.pumped_level();
    let other = if src == L0 { L1 } else { L0 };
    let sc = scheme();
    let mut h = CMatrix::zeros(DIM, DIM);
    for j in 0..N_ATOMS {
        let mut ground = vec![other; N_ATOMS];
        ground[j] = src;
        let mut excited = ground.clone();
        excited[j] = LR;
        let (a, b) = (sc.basis_index(&excited)?, sc.basis_index(&ground)?);
        h[(a, b)] += C64::new(omega_a, 0.0);
        h[(b, a)] += C64::new(omega_a, 0.0);
    }
    Ok(h)
}

/// Collective antiblockade coupling `κ(|+++⟩⟨ppp| + h.c.)` with κ from
/// [`antiblockade_rate`].
pub fn antiblockade_hamiltonian(omega_p: f64, delta2: f64) -> Result<CMatrix> {
    let kappa = antiblockade_rate(omega_p, delta2)?;
    let coupling = CMatrix::outer(&product(&[plus(), plus(), plus()]), &ket("ppp")).scale_real(kappa);
    Ok(&coupling + &coupling.adjoint())
}

/// Time-independent effective model of one step: URP + antiblockade + the
/// full Rydberg decay set.
pub fn build_step_effective(p: &Scheme2Params, step: usize) -> Result<MasterEq> {
    let step = Step::from_index(step)?;
    let mut me = MasterEq::new(
        DIM,
        format!("scheme2 effective step {}", if step == Step::One { 1 } else { 2 }),
    );
    me.add_term(HTerm::hermitian(urp_hamiltonian(p.omega_a, step)?))?;
    if p.omega_p != 0.0 {
        me.add_term(HTerm::hermitian(antiblockade_hamiltonian(p.omega_p, p.delta2)?))?;
    }
    add_decay(&mut me, p.gamma)?;
    Ok(me)
}

/// `N` equal segments of `T/N`, alternating step 1, step 2, … .
pub fn build_switching_schedule(p: &Scheme2Params, kind: ModelKind) -> Result<Schedule> {
    p.validate(true)?;
    let build = |s| match kind {
        ModelKind::Full => build_step_full(p, s),
        ModelKind::Effective => build_step_effective(p, s),
    };
    let models = vec![build(1)?, build(2)?];
    let duration = p.t_total / p.n_switch as f64;
    let segments = (0..p.n_switch).map(|k| Segment { duration, model: k % 2 }).collect();
    Schedule::new(models, segments, 1)
}

/// `12√2 Ωp³/Δ₂²`
pub fn antiblockade_rate(omega_p: f64, delta2: f64) -> Result<f64> {
    if !(delta2 > 0.0) {
        return Err(Error::arg(format!("Δ2 must be positive, got {delta2}")));
    }
    Ok(12.0 * 2f64.sqrt() * omega_p.powi(3) / (delta2 * delta2))
}

/// Collective states in the 64-dimensional basis.
pub fn collective_basis_s2() -> NamedStates {
    let sym = |labels: &[&str]| -> Vec<C64> {
        let mut v = vec![ZERO; DIM];
        for l in labels {
            for (a, b) in v.iter_mut().zip(ket(l)) {
                *a += b;
            }
        }
        normalized(&v)
    };
    let combine = |a: &[C64], b: &[C64], sign: f64| -> Vec<C64> {
        normalized(&a.iter().zip(b).map(|(x, y)| x + y * sign).collect::<Vec<_>>())
    };
    let mut out = NamedStates::default();
    let d1 = sym(&["00r", "0r0", "r00"]);
    let d2 = sym(&["0rr", "r0r", "rr0"]);
    out.push("D+", combine(&d1, &d2, 1.0));
    out.push("D-", combine(&d1, &d2, -1.0));
    out.push("D1", d1);
    out.push("D2", d2);
    let ts = [
        (sym(&["10r", "1r0"]), ket("1rr")),
        (sym(&["01r", "r10"]), ket("r1r")),
        (sym(&["0r1", "r01"]), ket("rr1")),
    ];
    for (k, (t, doubly)) in ts.into_iter().enumerate() {
        out.push(format!("T{}+", k + 1), combine(&t, &doubly, 1.0));
        out.push(format!("T{}-", k + 1), combine(&t, &doubly, -1.0));
        out.push(format!("T{}", k + 1), t);
    }
    let (pl, pp) = (plus(), level(LP));
    out.push(
        "S1",
        normalized(&sum(&[
            product(&[pl, pl, pp]),
            product(&[pl, pp, pl]),
            product(&[pp, pl, pl]),
        ])),
    );
    out.push(
        "S2",
        normalized(&sum(&[
            product(&[pl, pp, pp]),
            product(&[pp, pl, pp]),
            product(&[pp, pp, pl]),
        ])),
    );
    out.push("+++", product(&[pl, pl, pl]));
    out.push("ppp", ket("ppp"));
    out.push("rrr", ket("rrr"));
    out.push("GHZ+", ghz(1.0));
    out.push("GHZ-", ghz(-1.0));
    out
}

fn sum(vs: &[Vec<C64>]) -> Vec<C64> {
    let mut out = vec![ZERO; vs[0].len()];
    for v in vs {
        for (a, b) in out.iter_mut().zip(v) {
            *a += b;
        }
    }
    out
}

/// `(|000⟩ ± |111⟩)/√2`
pub fn ghz(sign: f64) -> Vec<C64> {
    normalized(
        &ket("000")
            .iter()
            .zip(ket("111"))
            .map(|(a, b)| a + b * sign)
            .collect::<Vec<_>>(),
    )
}

/// `(|+++⟩ + |+−−⟩ + |−+−⟩ + |−−+⟩)/2`
pub fn ghz_plus_in_pm_basis() -> Vec<C64> {
    let (p, m) = (plus(), minus());
    sum(&[
        product(&[p, p, p]),
        product(&[p, m, m]),
        product(&[m, p, m]),
        product(&[m, m, p]),
    ])
    .into_iter()
    .map(|a| a * 0.5)
    .collect()
}

/// One checked matrix element.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementCheck {
    pub name: String,
    pub expected: f64,
    pub actual: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport {
    pub checks: Vec<ElementCheck>,
    pub max_deviation: f64,
}

/// Static part of the step-1 drive in the frame rotating with the `r–r`
/// interaction: `Ωa` elements that conserve interaction energy and `Ωb`
/// elements whose interaction-energy change equals `Δ₁`.
pub fn hs1_static(p: &Scheme2Params) -> Result<CMatrix> {
    let sc = scheme();
    let energy = |idx: usize| {
        let lv = sc.decode(idx, N_ATOMS);
        let n = lv.iter().filter(|&&l| l == LR).count();
        p.u_rr * (n * n.saturating_sub(1) / 2) as f64
    };
    let tol = 1e-9 * (1.0 + p.u_rr.abs());
    let mut h = CMatrix::zeros(DIM, DIM);
    for j in 0..N_ATOMS {
        let sigma = embed_unit(D, LR, L0, j, N_ATOMS)?;
        for a in 0..DIM {
            for b in 0..DIM {
                if sigma[(a, b)] == ZERO {
                    continue;
                }
                let gap = energy(a) - energy(b);
                let mut v = ZERO;
                if gap.abs() <= tol {
                    v += p.omega_a;
                }
                if (gap - p.delta1).abs() <= tol {
                    v += p.omega_b;
                }
                h[(a, b)] += v;
                h[(b, a)] += v.conj();
            }
        }
    }
    Ok(h)
}

/// Compares selected elements of [`hs1_static`] (and of its `Ωb` part alone)
/// with the collective-basis decomposition.
pub fn verify_hs1_decomposition(p: &Scheme2Params) -> Result<DecompositionReport> {
    let s = collective_basis_s2();
    let h = hs1_static(p)?;
    let hb = hs1_static(&Scheme2Params {
        omega_a: 0.0,
        ..p.clone()
    })?;
    let (oa, ob) = (p.omega_a, p.omega_b);
    let r2 = 2f64.sqrt();
    let mut checks = Vec::new();
    let mut check = |name: &str, m: &CMatrix, a: &[C64], b: &[C64], expected: f64| -> Result<()> {
        checks.push(ElementCheck {
            name: name.to_string(),
            expected,
            actual: m.matrix_element(a, b)?,
        });
        Ok(())
    };
    check("<000|H|D1>", &h, &ket("000"), s.get("D1")?, 3f64.sqrt() * oa)?;
    check("<D1|H|D2>", &h, s.get("D1")?, s.get("D2")?, 2.0 * ob)?;
    check("<110|H|11r>", &h, &ket("110"), &ket("11r"), oa)?;
    check("<111|H|111>", &h, &ket("111"), &ket("111"), 0.0)?;
    for (k, single, doubly) in [(1, "100", "1rr"), (2, "010", "r1r"), (3, "001", "rr1")] {
        let t = s.get(&format!("T{k}"))?;
        check(&format!("<{single}|H|T{k}>"), &h, &ket(single), t, r2 * oa)?;
        check(&format!("<{doubly}|H|T{k}>"), &h, &ket(doubly), t, r2 * ob)?;
        for (sign, suffix) in [(1.0, "+"), (-1.0, "-")] {
            let v = s.get(&format!("T{k}{suffix}"))?;
            check(&format!("<T{k}{suffix}|Hb|T{k}{suffix}>"), &hb, v, v, sign * r2 * ob)?;
        }
    }
    check("<D+|Hb|D+>", &hb, s.get("D+")?, s.get("D+")?, 2.0 * ob)?;
    check("<D-|Hb|D->", &hb, s.get("D-")?, s.get("D-")?, -2.0 * ob)?;
    check("<D+|Hb|D->", &hb, s.get("D+")?, s.get("D-")?, 0.0)?;
    let max_deviation = checks
        .iter()
        .map(|c| (c.actual - c.expected).norm())
        .fold(0.0, f64::max);
    Ok(DecompositionReport { checks, max_deviation })
}

/// Uniform mixture of the six ground configurations other than `|000⟩`, `|111⟩`.
pub fn mixed_initial_state_6() -> CMatrix {
    let sc = scheme();
    let mut diag = vec![0.0; DIM];
    for label in ["100", "010", "001", "011", "101", "110"] {
        let idx = sc
            .basis_index(&label.bytes().map(|b| (b - b'0') as usize).collect::<Vec<_>>())
            .unwrap();
        diag[idx] = 1.0 / 6.0;
    }
    CMatrix::from_real_diagonal(&diag)
}
