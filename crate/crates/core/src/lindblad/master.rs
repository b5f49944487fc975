use crate::error::{Error, Result};
use crate::matrix::CMatrix;

use super::Envelope;

/// One drive term `envelope(t) · matrix`, optionally paired with its
/// Hermitian conjugate `conj(envelope(t)) · matrix†`.
#[derive(Debug, Clone)]
pub struct HTerm {
    pub matrix: CMatrix,
    pub envelope: Envelope,
    pub add_conjugate: bool,
}

impl HTerm {
    /// A term together with its Hermitian conjugate.
    pub fn with_conjugate(matrix: CMatrix, envelope: Envelope) -> Self {
        Self {
            matrix,
            envelope,
            add_conjugate: true,
        }
    }

    /// A self-adjoint term; `matrix` must be Hermitian.
    pub fn hermitian(matrix: CMatrix) -> Self {
        Self {
            matrix,
            envelope: Envelope::Constant,
            add_conjugate: false,
        }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        if self.matrix.rows() != dim || self.matrix.cols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: self.matrix.rows(),
            });
        }
        if !self.add_conjugate && !(self.matrix.is_hermitian() && self.envelope.is_real()) {
            return Err(Error::arg(
                "term without conjugate must be Hermitian with a real envelope",
            ));
        }
        Ok(())
    }
}

/// A jump operator with its rate absorbed: `L = √rate · op`.
#[derive(Debug, Clone)]
pub struct Dissipator {
    pub op: CMatrix,
}

impl Dissipator {
    pub fn new(rate: f64, op: CMatrix) -> Result<Self> {
        if !(rate >= 0.0) {
            return Err(Error::arg(format!("negative dissipation rate {rate}")));
        }
        Ok(Self {
            op: op.scale_real(rate.sqrt()),
        })
    }

    /// `L ρ L† − ½{L†L, ρ}` evaluated densely.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        let l = &self.op;
        let ld = l.adjoint();
        let ldl = ld.matmul(l)?;
        let jump = l.matmul(rho)?.matmul(&ld)?;
        let anti = &ldl.matmul(rho)? + &rho.matmul(&ldl)?;
        Ok(&jump - &anti.scale_real(0.5))
    }
}

/// `ρ̇ = −i[H(t), ρ] + Σ_k (L_k ρ L_k† − ½{L_k†L_k, ρ})` over a fixed dimension.
#[derive(Debug, Clone)]
pub struct MasterEq {
    dim: usize,
    hterms: Vec<HTerm>,
    dissipators: Vec<Dissipator>,
    label: String,
    f_max: Option<f64>,
    frame: Option<Vec<f64>>,
}

impl MasterEq {
    pub fn new(dim: usize, label: impl Into<String>) -> Self {
        Self {
            dim,
            hterms: Vec::new(),
            dissipators: Vec::new(),
            label: label.into(),
            f_max: None,
            frame: None,
        }
    }

    pub fn add_term(&mut self, term: HTerm) -> Result<&mut Self> {
        term.validate(self.dim)?;
        self.hterms.push(term);
        Ok(self)
    }

    pub fn add_dissipator(&mut self, d: Dissipator) -> Result<&mut Self> {
        if d.op.rows() != self.dim || d.op.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: d.op.rows(),
            });
        }
        self.dissipators.push(d);
        Ok(self)
    }

    /// Overrides the estimated fastest angular frequency.
    pub fn set_f_max(&mut self, f_max: f64) {
        self.f_max = Some(f_max);
    }

    /// Reports observables in the frame rotating with the diagonal
    /// `energies`, i.e. on `e^{iEt} ρ e^{−iEt}`.
    pub fn set_frame(&mut self, energies: Vec<f64>) -> Result<()> {
        if energies.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: energies.len(),
            });
        }
        self.frame = Some(energies);
        Ok(())
    }

    pub fn frame(&self) -> Option<&[f64]> {
        self.frame.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hterms(&self) -> &[HTerm] {
        &self.hterms
    }

    pub fn dissipators(&self) -> &[Dissipator] {
        &self.dissipators
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_time_independent(&self) -> bool {
        self.hterms.iter().all(|t| t.envelope.is_constant())
    }

    /// Fastest angular frequency of the generator: builder-reported if set,
    /// otherwise the larger of the envelope carrier frequencies, a row-sum
    /// bound on ‖H‖ and a row-sum bound on ‖Σ L†L‖.
    pub fn f_max(&self) -> f64 {
        if let Some(f) = self.f_max {
            return f;
        }
        let carrier = self.hterms.iter().map(|t| t.envelope.frequency()).fold(0.0, f64::max);
        let mut row_sums = vec![0.0f64; self.dim];
        for t in &self.hterms {
            let w = t.envelope.max_magnitude();
            for r in 0..self.dim {
                for c in 0..self.dim {
                    let v = t.matrix[(r, c)].norm() * w;
                    row_sums[r] += v;
                    if t.add_conjugate {
                        row_sums[c] += v;
                    }
                }
            }
        }
        let h_bound = row_sums.into_iter().fold(0.0, f64::max);
        let mut loss = CMatrix::zeros(self.dim, self.dim);
        for d in &self.dissipators {
            if let Ok(ldl) = d.op.adjoint().matmul(&d.op) {
                loss += &ldl;
            }
        }
        let decay = (0..self.dim)
            .map(|r| (0..self.dim).map(|c| loss[(r, c)].norm()).sum::<f64>())
            .fold(0.0, f64::max);
        carrier.max(h_bound).max(decay)
    }

    /// Default step: 0.05 / f_max.
    pub fn default_dt(&self) -> f64 {
        0.05 / self.f_max()
    }

    /// Dense `H(t)` including conjugate partners.
    pub fn hamiltonian_at(&self, t: f64) -> CMatrix {
        let mut h = CMatrix::zeros(self.dim, self.dim);
        for term in &self.hterms {
            let c = term.envelope.eval(t);
            h += &term.matrix.scale(c);
            if term.add_conjugate {
                h += &term.matrix.adjoint().scale(c.conj());
            }
        }
        h
    }

    /// Dense reference evaluation of the right-hand side. The integrator uses
    /// the sparse [`super::Generator`] instead.
    pub fn rhs_dense(&self, rho: &CMatrix, t: f64) -> Result<CMatrix> {
        if rho.rows() != self.dim || rho.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rho.rows(),
            });
        }
        let h = self.hamiltonian_at(t);
        let comm = h.commutator(rho)?;
        let mut out = comm.scale(crate::matrix::I * -1.0);
        for d in &self.dissipators {
            out += &d.apply(rho)?;
        }
        Ok(out)
    }
}
