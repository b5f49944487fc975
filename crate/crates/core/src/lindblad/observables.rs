use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::matrix::{vec_norm, CMatrix};

const NORM_TOL: f64 = 1e-10;
const IMAG_TOL: f64 = 1e-10;
const NEGATIVE_TOL: f64 = 1e-10;

/// `P_i = ⟨i|ρ|i⟩` for a unit-norm state.
pub fn population(rho: &CMatrix, state: &[C64]) -> Result<f64> {
    if state.len() != rho.rows() {
        return Err(Error::DimensionMismatch {
            expected: rho.rows(),
            got: state.len(),
        });
    }
    let norm = vec_norm(state);
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::arg(format!("state has norm {norm}, expected 1")));
    }
    let p = rho.matrix_element(state, state)?;
    if p.im.abs() > IMAG_TOL {
        return Err(Error::Numerical {
            step: 0,
            reason: format!("population has imaginary part {:e}", p.im),
        });
    }
    Ok(p.re)
}

/// Uhlmann fidelity against a pure target, `√⟨ψ|ρ|ψ⟩`.
pub fn fidelity(rho: &CMatrix, target: &[C64]) -> Result<f64> {
    let p = population(rho, target)?;
    if p < -NEGATIVE_TOL {
        return Err(Error::Numerical {
            step: 0,
            reason: format!("negative population {p:e} in fidelity"),
        });
    }
    Ok(p.max(0.0).sqrt())
}

/// Physicality report for a density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDiagnostics {
    pub trace_error: f64,
    pub hermiticity: f64,
    pub min_eigenvalue: f64,
    pub tolerance: f64,
}

impl StateDiagnostics {
    pub fn trace_violated(&self) -> bool {
        self.trace_error > self.tolerance
    }

    pub fn hermiticity_violated(&self) -> bool {
        self.hermiticity > self.tolerance
    }

    pub fn negative_eigenvalue(&self) -> bool {
        self.min_eigenvalue < -self.tolerance
    }

    pub fn ok(&self) -> bool {
        !(self.trace_violated() || self.hermiticity_violated() || self.negative_eigenvalue())
    }
}

pub fn check_state(rho: &CMatrix, tol: f64) -> StateDiagnostics {
    let hermiticity = rho.hermiticity_violation();
    let n = rho.rows();
    let herm_part = CMatrix::from_fn(n, n, |r, c| (rho[(r, c)] + rho[(c, r)].conj()) * 0.5);
    let min_eigenvalue = herm_part
        .hermitian_eigenvalues()
        .ok()
        .and_then(|v| v.first().copied())
        .unwrap_or(f64::NAN);
    StateDiagnostics {
        trace_error: (rho.trace() - C64::new(1.0, 0.0)).norm(),
        hermiticity,
        min_eigenvalue,
        tolerance: tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{normalized, ONE, ZERO};

    fn ghz(sign: f64) -> Vec<C64> {
        let mut v = vec![ZERO; 8];
        v[0] = ONE;
        v[7] = C64::new(sign, 0.0);
        normalized(&v)
    }

    #[test]
    fn population_of_own_projector_is_one() {
        let psi = normalized(&[C64::new(1.0, 1.0), C64::new(0.5, -2.0), ONE]);
        let rho = CMatrix::projector(&psi);
        assert!((population(&rho, &psi).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn mixed_state_overlap_with_ghz() {
        let rho = CMatrix::from_real_diagonal(&[0.125; 8]);
        // (1/8)(|⟨ggg|GHZ⟩|² + |⟨rrr|GHZ⟩|²) = (1/8)(1/2 + 1/2)
        assert!((population(&rho, &ghz(-1.0)).unwrap() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_ghz_states() {
        let rho = CMatrix::projector(&ghz(1.0));
        assert!(population(&rho, &ghz(-1.0)).unwrap().abs() < 1e-15);
    }

    #[test]
    fn population_rejects_bad_inputs() {
        let rho = CMatrix::identity(2);
        assert!(matches!(population(&rho, &[ONE]), Err(Error::DimensionMismatch { .. })));
        assert!(population(&rho, &[ONE, ONE]).is_err());
    }

    #[test]
    fn fidelity_examples() {
        let psi = ghz(-1.0);
        assert!((fidelity(&CMatrix::projector(&psi), &psi).unwrap() - 1.0).abs() < 1e-14);
        let quarter = CMatrix::from_real_diagonal(&[0.25, 0.75]);
        assert!((fidelity(&quarter, &[ONE, ZERO]).unwrap() - 0.5).abs() < 1e-15);
        let negative = CMatrix::from_real_diagonal(&[-0.1, 1.1]);
        assert!(matches!(
            fidelity(&negative, &[ONE, ZERO]),
            Err(Error::Numerical { .. })
        ));
    }

    #[test]
    fn check_state_flags() {
        let good = CMatrix::from_real_diagonal(&[0.3, 0.7]);
        let d = check_state(&good, 1e-8);
        assert!(d.ok());
        assert!(d.trace_error < 1e-8 && d.hermiticity < 1e-8 && d.min_eigenvalue > -1e-8);

        let scaled = good.scale_real(1.01);
        let d = check_state(&scaled, 1e-8);
        assert!(d.trace_violated());
        assert!((d.trace_error - 0.01).abs() < 1e-12);

        let neg = CMatrix::from_real_diagonal(&[1.1, -0.1]);
        let d = check_state(&neg, 1e-8);
        assert!(d.negative_eigenvalue() && !d.trace_violated());
    }
}
