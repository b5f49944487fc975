//! Polychromatic-drive protocol: three (or five) atoms on a ring with levels
//! g, e, r. Drives `Ω₁,₂,₃` couple g↔r at detunings tuned to the Rydberg
//! interaction so that excitation depends on how many neighbours are already
//! excited, and a resonant `Ω₀` on r↔e followed by fast e→g decay pumps
//! isolated Rydberg excitations back to the ground state. The odd-N GHZ₋
//! state is the unique dark state.
//!
//! All rates are in units of `Ω₂`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::lindblad::{
    far_detuned_shifts, integrate, Dissipator, Envelope, HTerm, IntegrateOptions, MasterEq, Observable,
};
use crate::matrix::{normalized, CMatrix, ZERO};
use crate::ops::{embed_unit, projected_transition, LevelScheme, NamedStates};

/// Gaussian modulation `Ω′·exp[−(t−μ)²/(2σ²)]` replacing constant `Ω₁`, `Ω₃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPulse {
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
}

impl GaussianPulse {
    fn envelope(&self) -> Envelope {
        Envelope::Gaussian {
            amplitude: self.amplitude,
            center: self.center,
            width: self.width,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scheme1Params {
    pub omega0: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    /// Rydberg interaction `U` (all pairs for 3 atoms, nearest neighbours for 5).
    pub u: f64,
    /// Decay rate `Γ` of the short-lived level e.
    pub gamma: f64,
    /// Rydberg decay rate `γ`; 0 disables the r→g channel.
    pub gamma_r: f64,
    pub n_atoms: usize,
    pub pulse: Option<GaussianPulse>,
    /// Engineered decay rate used by the effective model instead of `4Ω₀²/Γ`.
    pub gamma_eff: Option<f64>,
    /// Coefficient multiplying `Ω₂` on the one-excited-neighbour channels of
    /// the effective model. 1 matches the full model.
    pub mixed_neighbor_factor: f64,
    /// Adds to the full model a static term cancelling the second-order level
    /// shifts of couplings detuned by more than `U/2`.
    pub stark_compensation: bool,
}

/// The detuning `Δ₁` that makes GHZ₊ resonant with the first collective
/// excitation: `2Ω₂` for 3 atoms, `(1+√5)Ω₂` for 5.
pub fn default_delta1(n_atoms: usize, omega2: f64) -> Result<f64> {
    match n_atoms {
        3 => Ok(2.0 * omega2),
        5 => Ok((1.0 + 5f64.sqrt()) * omega2),
        n => Err(Error::arg(format!("unsupported atom number {n}; expected 3 or 5"))),
    }
}

impl Scheme1Params {
    /// Parameters with the detuning constraints applied
    /// (`Δ₂ = U`, `Δ₃ = 2U − Δ₁`, `Δ₁` from [`default_delta1`]).
    pub fn constrained(
        n_atoms: usize,
        omega0: f64,
        omega1: f64,
        omega2: f64,
        omega3: f64,
        u: f64,
        gamma: f64,
    ) -> Result<Self> {
        let delta1 = default_delta1(n_atoms, omega2)?;
        let p = Self {
            omega0,
            omega1,
            omega2,
            omega3,
            delta1,
            delta2: u,
            delta3: 2.0 * u - delta1,
            u,
            gamma,
            gamma_r: 0.0,
            n_atoms,
            pulse: None,
            gamma_eff: None,
            mixed_neighbor_factor: 1.0,
            stark_compensation: false,
        };
        p.validate(false)?;
        Ok(p)
    }

    /// Ω₀ = 0.77, Ω₁ = Ω₃ = 0.05, Γ = 6, U = 300 (units of Ω₂).
    pub fn fig2() -> Self {
        Self::constrained(3, 0.77, 0.05, 1.0, 0.05, 300.0, 6.0).unwrap()
    }

    /// Five atoms, Ω₁ = Ω₃ = 0.02, engineered decay 0.4 (units of Ω₂).
    pub fn fig8() -> Self {
        let mut p = Self::constrained(5, 0.77, 0.02, 1.0, 0.02, 300.0, 6.0).unwrap();
        p.gamma_eff = Some(0.4);
        p
    }

    /// Recomputes the dependent detunings from `Ω₂` and `U`.
    pub fn apply_constraints(&mut self) -> Result<()> {
        self.delta1 = default_delta1(self.n_atoms, self.omega2)?;
        self.delta2 = self.u;
        self.delta3 = 2.0 * self.u - self.delta1;
        Ok(())
    }

    /// Checks rates and, unless `override_constraints`, the detuning relations.
    /// Errors name the offending parameter.
    pub fn validate(&self, override_constraints: bool) -> Result<()> {
        let rates = [
            ("Ω0", self.omega0),
            ("Ω1", self.omega1),
            ("Ω2", self.omega2),
            ("Ω3", self.omega3),
            ("U", self.u),
            ("Γ", self.gamma),
            ("γ", self.gamma_r),
        ];
        for (name, v) in rates {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::arg(format!("{name} must be a non-negative rate, got {v}")));
            }
        }
        if let Some(g) = self.gamma_eff {
            if !(g >= 0.0) {
                return Err(Error::arg(format!("Γ_eff must be non-negative, got {g}")));
            }
        }
        if self.omega0 > 0.0 && !(self.gamma > 0.0) && self.gamma_eff.is_none() {
            return Err(Error::arg("Γ must be positive when Ω0 > 0"));
        }
        let d1 = default_delta1(self.n_atoms, self.omega2)?;
        if override_constraints {
            return Ok(());
        }
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()));
        if !close(self.delta1, d1) {
            return Err(Error::arg(format!("Δ1 = {} violates Δ1 = {d1}", self.delta1)));
        }
        if !close(self.delta2, self.u) {
            return Err(Error::arg(format!("Δ2 = {} violates Δ2 = U = {}", self.delta2, self.u)));
        }
        if !close(self.delta3, 2.0 * self.u - self.delta1) {
            return Err(Error::arg(format!(
                "Δ3 = {} violates Δ3 = 2U − Δ1 = {}",
                self.delta3,
                2.0 * self.u - self.delta1
            )));
        }
        Ok(())
    }

    /// `Γ_eff`: explicit override or `4Ω₀²/Γ`.
    pub fn gamma_eff(&self) -> f64 {
        self.gamma_eff.unwrap_or_else(|| {
            if self.gamma > 0.0 {
                4.0 * self.omega0 * self.omega0 / self.gamma
            } else {
                0.0
            }
        })
    }

    fn omega(&self, alpha: usize) -> f64 {
        match alpha {
            1 => self.omega1,
            2 => self.omega2,
            _ => self.omega3,
        }
    }

    fn delta(&self, alpha: usize) -> f64 {
        match alpha {
            1 => self.delta1,
            2 => self.delta2,
            _ => self.delta3,
        }
    }

    /// Coefficient and envelope of drive α, with the Gaussian pulse folded in
    /// for α ∈ {1, 3}.
    fn drive(&self, alpha: usize, carrier: Envelope) -> (f64, Envelope) {
        match (self.pulse, alpha) {
            (Some(p), 1 | 3) => (1.0, Envelope::Product(vec![p.envelope(), carrier])),
            _ => (self.omega(alpha), carrier),
        }
    }
}

/// Full three-atom model on levels (g, e, r), dimension 27.
pub fn build_full_3atom(p: &Scheme1Params) -> Result<MasterEq> {
    if p.n_atoms != 3 {
        return Err(Error::arg(format!(
            "full model is built for 3 atoms only, got {}",
            p.n_atoms
        )));
    }
    let scheme = LevelScheme::ger();
    let (g, e, r) = (0, 1, 2);
    let n = 3;
    let d = scheme.dim();
    let mut me = MasterEq::new(27, "scheme1 full");

    for j in 0..n {
        let rg = embed_unit(d, r, g, j, n)?;
        for alpha in 1..=3 {
            let (coef, env) = p.drive(alpha, Envelope::Oscillating { freq: p.delta(alpha) });
            if coef != 0.0 {
                me.add_term(HTerm::with_conjugate(rg.scale_real(coef), env))?;
            }
        }
        if p.omega0 != 0.0 {
            let re = embed_unit(d, r, e, j, n)?;
            me.add_term(HTerm::with_conjugate(re.scale_real(p.omega0), Envelope::Constant))?;
        }
    }
    let mut interaction = CMatrix::zeros(27, 27);
    for j in 0..n {
        for k in (j + 1)..n {
            let pair = &embed_unit(d, r, r, j, n)? * &embed_unit(d, r, r, k, n)?;
            interaction += &pair.scale_real(p.u);
        }
    }
    let energies: Vec<f64> = (0..27).map(|k| interaction[(k, k)].re).collect();
    me.add_term(HTerm::hermitian(interaction))?;
    if p.stark_compensation {
        let shifts = far_detuned_shifts(&me, &energies, 0.5 * p.u);
        me.add_term(HTerm::hermitian(shifts.scale_real(-1.0)))?;
    }

    for j in 0..n {
        me.add_dissipator(Dissipator::new(p.gamma, embed_unit(d, g, e, j, n)?)?)?;
        if p.gamma_r > 0.0 {
            me.add_dissipator(Dissipator::new(p.gamma_r, embed_unit(d, g, r, j, n)?)?)?;
        }
    }
    me.set_f_max(
        [p.u, p.delta1, p.delta2, p.delta3, p.gamma]
            .into_iter()
            .fold(0.0, f64::max),
    );
    me.set_frame(energies)?;
    Ok(me)
}

/// Effective model on levels (g, r) after eliminating e and moving to the
/// interaction frame of `U`; dimension `2^n`.
///
/// Each site is driven by `Ω_{m+n+1}` conditioned on its two ring neighbours
/// holding `m + n` Rydberg excitations, with phase `e^{i(m+n−1)Δ₁t}`. Decay is
/// the engineered `√Γ_eff P⁰ σ^{gr} P⁰` (plus `√γ σ^{gr}` if `γ > 0`).
pub fn build_effective(p: &Scheme1Params) -> Result<MasterEq> {
    let n = p.n_atoms;
    if n != 3 && n != 5 {
        return Err(Error::arg(format!("unsupported atom number {n}; expected 3 or 5")));
    }
    let scheme = LevelScheme::gr();
    let (g, r) = (0, 1);
    let dim = 1usize << n;
    let mut me = MasterEq::new(dim, format!("scheme1 effective n={n}"));

    for j in 0..n {
        for m in 0..2u8 {
            for nn in 0..2u8 {
                let alpha = (m + nn + 1) as usize;
                let weight = if m != nn { p.mixed_neighbor_factor } else { 1.0 };
                // e^{i(m+n−1)Δ₁t} is Oscillating with freq −(m+n−1)Δ₁
                let carrier = Envelope::Oscillating {
                    freq: -((m + nn) as f64 - 1.0) * p.delta1,
                };
                let (coef, env) = p.drive(alpha, carrier);
                let coef = coef * weight;
                if coef == 0.0 {
                    continue;
                }
                let op = projected_transition(j, (r, g), m, nn, &scheme, n)?;
                me.add_term(HTerm::with_conjugate(op.scale_real(coef), env))?;
            }
        }
    }
    let geff = p.gamma_eff();
    for j in 0..n {
        if geff > 0.0 {
            let l = projected_transition(j, (g, r), 0, 0, &scheme, n)?;
            me.add_dissipator(Dissipator::new(geff, l)?)?;
        }
        if p.gamma_r > 0.0 {
            me.add_dissipator(Dissipator::new(p.gamma_r, embed_unit(2, g, r, j, n)?)?)?;
        }
    }
    Ok(me)
}

/// Time-independent three-atom model in the collective basis:
/// `H = √3Ω(|GHZ₊⟩⟨E₁₊| + h.c.) + Ω₂(|E₂₊⟩⟨E₂₊| − |E₂₋⟩⟨E₂₋| + |E₃₊⟩⟨E₃₊| − |E₃₋⟩⟨E₃₋|)`
/// with the engineered decay of [`build_effective`].
pub fn build_collective_model(p: &Scheme1Params) -> Result<MasterEq> {
    if p.n_atoms != 3 {
        return Err(Error::arg("collective model is defined for 3 atoms"));
    }
    if p.omega1 != p.omega3 {
        return Err(Error::arg(format!(
            "collective model needs Ω1 = Ω3, got {} and {}",
            p.omega1, p.omega3
        )));
    }
    let s = collective_states(3)?;
    let omega = p.omega1;
    let mut me = MasterEq::new(8, "scheme1 collective");
    let coupling = CMatrix::outer(s.get("GHZ+")?, s.get("E1+")?).scale_real(3f64.sqrt() * omega);
    me.add_term(HTerm::with_conjugate(coupling, Envelope::Constant))?;
    let mut diag = CMatrix::zeros(8, 8);
    for (name, sign) in [("E2+", 1.0), ("E2-", -1.0), ("E3+", 1.0), ("E3-", -1.0)] {
        diag += &CMatrix::projector(s.get(name)?).scale_real(sign * p.omega2);
    }
    me.add_term(HTerm::hermitian(diag))?;
    let scheme = LevelScheme::gr();
    for j in 0..3 {
        let l = projected_transition(j, (0, 1), 0, 0, &scheme, 3)?;
        me.add_dissipator(Dissipator::new(p.gamma_eff(), l)?)?;
    }
    Ok(me)
}

/// `(|g…g⟩ ± |r…r⟩)/√2` embedded in `scheme`'s product basis.
pub fn ghz_state(scheme: &LevelScheme, n_atoms: usize, sign: f64) -> Result<Vec<C64>> {
    let g = scheme.ground();
    let r = scheme.rydberg()?;
    let dim = scheme.dim().pow(n_atoms as u32);
    let mut v = vec![ZERO; dim];
    v[scheme.basis_index(&vec![g; n_atoms])?] = C64::new(1.0, 0.0);
    v[scheme.basis_index(&vec![r; n_atoms])?] = C64::new(sign, 0.0);
    Ok(normalized(&v))
}

/// Collective states in the `2^n` g/r basis. For 3 atoms: GHZ±, E1±, E2±,
/// E3±; for 5 atoms only GHZ±.
pub fn collective_states(n_atoms: usize) -> Result<NamedStates> {
    let scheme = LevelScheme::gr();
    let mut out = NamedStates::default();
    match n_atoms {
        3 => {}
        5 => {
            out.push("GHZ+", ghz_state(&scheme, 5, 1.0)?);
            out.push("GHZ-", ghz_state(&scheme, 5, -1.0)?);
            return Ok(out);
        }
        n => return Err(Error::arg(format!("unsupported atom number {n}; expected 3 or 5"))),
    }
    let combo = |terms: &[(f64, &str)], norm: f64| -> Result<Vec<C64>> {
        let mut v = vec![ZERO; 8];
        for &(w, label) in terms {
            let k = scheme.ket(label)?;
            for (a, b) in v.iter_mut().zip(k) {
                *a += b * w;
            }
        }
        Ok(v.into_iter().map(|a| a / norm).collect())
    };
    let s2 = 2f64.sqrt();
    let s6 = 6f64.sqrt();
    let e3n = 2.0 * 3f64.sqrt();
    out.push("GHZ+", combo(&[(1.0, "ggg"), (1.0, "rrr")], s2)?);
    out.push("GHZ-", combo(&[(1.0, "ggg"), (-1.0, "rrr")], s2)?);
    for (name, s) in [("E1+", 1.0), ("E1-", -1.0)] {
        out.push(
            name,
            combo(
                &[
                    (1.0, "grr"),
                    (1.0, "rgr"),
                    (1.0, "rrg"),
                    (s, "ggr"),
                    (s, "grg"),
                    (s, "rgg"),
                ],
                s6,
            )?,
        );
    }
    for (name, s) in [("E2+", 1.0), ("E2-", -1.0)] {
        out.push(
            name,
            combo(&[(1.0, "rrg"), (-1.0, "grr"), (s, "rgg"), (-s, "ggr")], 2.0)?,
        );
    }
    for (name, s) in [("E3+", 1.0), ("E3-", -1.0)] {
        out.push(
            name,
            combo(
                &[
                    (2.0, "rgr"),
                    (-1.0, "grr"),
                    (-1.0, "rrg"),
                    (-2.0 * s, "grg"),
                    (s, "ggr"),
                    (s, "rgg"),
                ],
                e3n,
            )?,
        );
    }
    Ok(out)
}

/// Static part of the effective drive: the resonant channels with exactly one
/// excited neighbour, `Ω₂ Σ_j (P⁰σ^{rg}P¹ + P¹σ^{rg}P⁰) + h.c.`
pub fn resonant_hamiltonian(n_atoms: usize, omega2: f64) -> Result<CMatrix> {
    if n_atoms != 3 && n_atoms != 5 {
        return Err(Error::arg(format!("unsupported atom number {n_atoms}")));
    }
    let scheme = LevelScheme::gr();
    let dim = 1usize << n_atoms;
    let mut h = CMatrix::zeros(dim, dim);
    for j in 0..n_atoms {
        for (m, n) in [(0u8, 1u8), (1, 0)] {
            let op = projected_transition(j, (1, 0), m, n, &scheme, n_atoms)?.scale_real(omega2);
            h += &op;
            h += &op.adjoint();
        }
    }
    Ok(h)
}

/// Ascending eigenvalues of [`resonant_hamiltonian`].
pub fn resonant_spectrum(n_atoms: usize, omega2: f64) -> Result<Vec<f64>> {
    resonant_hamiltonian(n_atoms, omega2)?.hermitian_eigenvalues()
}

/// Uniform mixture of all `2^n` product states built from the ground and
/// Rydberg levels of `scheme`; other levels carry no population.
pub fn mixed_initial_state(n_atoms: usize, scheme: &LevelScheme) -> Result<CMatrix> {
    if n_atoms != 3 && n_atoms != 5 {
        return Err(Error::arg(format!("unsupported atom number {n_atoms}")));
    }
    let g = scheme.ground();
    let r = scheme.rydberg()?;
    let dim = scheme.dim().pow(n_atoms as u32);
    let count = 1usize << n_atoms;
    let mut diag = vec![0.0; dim];
    for bits in 0..count {
        let levels: Vec<usize> = (0..n_atoms)
            .map(|k| if bits >> (n_atoms - 1 - k) & 1 == 1 { r } else { g })
            .collect();
        diag[scheme.basis_index(&levels)?] = 1.0 / count as f64;
    }
    Ok(CMatrix::from_real_diagonal(&diag))
}

/// Result of [`gamma_eff_oracle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaEffFit {
    /// Decay rate of `P_r(t)` fitted from the exact three-level dynamics.
    pub fitted: f64,
    /// `4Ω₀²/Γ`
    pub closed_form: f64,
}

/// Integrates the single-atom g/e/r problem (`Ω₀` on r↔e, decay e→g at `Γ`)
/// from `|r⟩` and fits the exponential decay of `P_r` over the window where
/// `0.2 ≤ P_r ≤ 0.8`.
pub fn gamma_eff_oracle(omega0: f64, gamma: f64, t_end: f64, allow_outside_regime: bool) -> Result<GammaEffFit> {
    if !(omega0 >= 0.0) || !(gamma > 0.0) {
        return Err(Error::arg("need Ω0 ≥ 0 and Γ > 0"));
    }
    if !allow_outside_regime && gamma < 5.0 * omega0 {
        return Err(Error::arg(format!(
            "Γ = {gamma} is below 5·Ω0 = {}; adiabatic elimination not valid",
            5.0 * omega0
        )));
    }
    let closed_form = 4.0 * omega0 * omega0 / gamma;
    let (g, e, r) = (0, 1, 2);
    let mut me = MasterEq::new(3, "three-level elimination check");
    if omega0 > 0.0 {
        me.add_term(HTerm::with_conjugate(
            embed_unit(3, e, r, 0, 1)?.scale_real(omega0),
            Envelope::Constant,
        ))?;
    }
    me.add_dissipator(Dissipator::new(gamma, embed_unit(3, g, e, 0, 1)?)?)?;
    let rho0 = CMatrix::from_real_diagonal(&[0.0, 0.0, 1.0]);
    let ket_r = vec![ZERO, ZERO, C64::new(1.0, 0.0)];
    let dt = me.default_dt().min(t_end / 2000.0);
    let opts = IntegrateOptions::new(t_end).dt(dt).positivity(false);
    let traj = integrate(&me, &rho0, &opts, &[Observable::population("r", ket_r)])?;
    let times = &traj.series.times;
    let pr = traj.series.column("r").expect("r column");

    let (mut sx, mut sy, mut sxx, mut sxy, mut count) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&t, &p) in times.iter().zip(pr) {
        if (0.2..=0.8).contains(&p) {
            let y = p.ln();
            sx += t;
            sy += y;
            sxx += t * t;
            sxy += t * y;
            count += 1.0;
        }
    }
    if count < 2.0 {
        let spread =
            pr.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)) - pr.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        if spread < 1e-12 {
            return Ok(GammaEffFit {
                fitted: 0.0,
                closed_form,
            });
        }
        return Err(Error::arg(format!(
            "fit window 0.2 ≤ P_r ≤ 0.8 is empty by t_end = {t_end}; integrate longer"
        )));
    }
    let slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    Ok(GammaEffFit {
        fitted: -slope,
        closed_form,
    })
}
