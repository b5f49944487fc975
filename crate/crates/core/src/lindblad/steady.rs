//! Steady states from the null space of the vectorized Liouvillian.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, ONE, ZERO};

use super::MasterEq;

/// Largest Hilbert dimension accepted by the dense superoperator solver.
pub const MAX_STEADY_DIM: usize = 32;
/// Eigenvalues with magnitude at or below this count as zero.
pub const NULL_TOL: f64 = 1e-8;

/// Row-major vectorized Liouvillian, `vec(ρ̇) = 𝓛 vec(ρ)` with
/// `vec(AρB) = (A ⊗ Bᵀ) vec(ρ)`.
pub fn liouvillian(me: &MasterEq) -> Result<CMatrix> {
    if !me.is_time_independent() {
        return Err(Error::arg("Liouvillian requires a time-independent master equation"));
    }
    let n = me.dim();
    let id = CMatrix::identity(n);
    let h = me.hamiltonian_at(0.0);
    let minus_i = C64::new(0.0, -1.0);
    let mut l = &h.kron(&id).scale(minus_i) - &id.kron(&transpose(&h)).scale(minus_i);
    for d in me.dissipators() {
        let op = &d.op;
        let ldl = op.adjoint().matmul(op)?;
        l += &op.kron(&conj(op));
        l += &ldl.kron(&id).scale_real(-0.5);
        l += &id.kron(&transpose(&ldl)).scale_real(-0.5);
    }
    Ok(l)
}

fn transpose(m: &CMatrix) -> CMatrix {
    CMatrix::from_fn(m.cols(), m.rows(), |r, c| m[(c, r)])
}

fn conj(m: &CMatrix) -> CMatrix {
    CMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)].conj())
}

/// Steady state together with the two Liouvillian eigenvalues closest to 0.
#[derive(Debug, Clone)]
pub struct SteadyState {
    pub rho: CMatrix,
    pub smallest: C64,
    pub second: C64,
}

/// The unique steady state of a time-independent master equation.
pub fn steady_state(me: &MasterEq) -> Result<CMatrix> {
    steady_state_report(me).map(|s| s.rho)
}

pub fn steady_state_report(me: &MasterEq) -> Result<SteadyState> {
    let n = me.dim();
    if n > MAX_STEADY_DIM {
        return Err(Error::arg(format!(
            "steady state solver limited to dim ≤ {MAX_STEADY_DIM}, got {n}; integrate to long times instead"
        )));
    }
    let l = liouvillian(me)?;
    let lm: DMatrix<C64> = l.to_nalgebra();

    let eig = lm.clone().schur().eigenvalues().ok_or_else(|| Error::Numerical {
        step: 0,
        reason: "Schur decomposition did not yield eigenvalues".into(),
    })?;
    let mut by_mag: Vec<C64> = eig.iter().copied().collect();
    by_mag.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let smallest = by_mag[0];
    let second = by_mag.get(1).copied().unwrap_or(C64::new(f64::INFINITY, 0.0));
    if smallest.norm() > NULL_TOL {
        return Err(Error::Numerical {
            step: 0,
            reason: format!("no zero eigenvalue; smallest magnitude {:e}", smallest.norm()),
        });
    }
    if second.norm() <= NULL_TOL {
        return Err(Error::NonUniqueSteadyState {
            first: smallest.norm(),
            second: second.norm(),
        });
    }

    // Replace the first row by the trace functional: 𝓛' x = e₀ pins Tr ρ = 1
    // and is nonsingular when the null space is one-dimensional.
    let nn = n * n;
    let mut a = lm;
    for c in 0..nn {
        a[(0, c)] = ZERO;
    }
    for k in 0..n {
        a[(0, k * n + k)] = ONE;
    }
    let mut b = DVector::from_element(nn, ZERO);
    b[0] = ONE;
    let x = a.lu().solve(&b).ok_or_else(|| Error::Numerical {
        step: 0,
        reason: "trace-constrained Liouvillian is singular".into(),
    })?;

    let raw = CMatrix::from_vec(n, n, x.iter().copied().collect())?;
    let herm = CMatrix::from_fn(n, n, |r, c| (raw[(r, c)] + raw[(c, r)].conj()) * 0.5);
    let tr = herm.trace().re;
    Ok(SteadyState {
        rho: herm.scale_real(1.0 / tr),
        smallest,
        second,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::{rhs, Dissipator, HTerm};

    fn decay() -> MasterEq {
        let mut me = MasterEq::new(2, "decay");
        let lower = CMatrix::from_vec(2, 2, vec![ZERO, ONE, ZERO, ZERO]).unwrap();
        me.add_dissipator(Dissipator::new(1.5, lower).unwrap()).unwrap();
        me
    }

    #[test]
    fn liouvillian_matches_rhs() {
        let mut me = decay();
        let x = CMatrix::from_vec(2, 2, vec![ZERO, C64::new(0.3, 0.1), C64::new(0.3, -0.1), ZERO]).unwrap();
        me.add_term(HTerm::hermitian(x)).unwrap();
        let rho = CMatrix::from_vec(
            2,
            2,
            vec![
                C64::new(0.4, 0.0),
                C64::new(0.1, 0.2),
                C64::new(0.1, -0.2),
                C64::new(0.6, 0.0),
            ],
        )
        .unwrap();
        let l = liouvillian(&me).unwrap();
        let v = l.apply(rho.as_slice()).unwrap();
        let d = rhs(&me, &rho, 0.0).unwrap();
        let dv = CMatrix::from_vec(2, 2, v).unwrap();
        assert!(dv.max_abs_diff(&d) < 1e-14);
    }

    #[test]
    fn pure_decay_relaxes_to_ground() {
        let ss = steady_state(&decay()).unwrap();
        assert!(ss.max_abs_diff(&CMatrix::from_real_diagonal(&[1.0, 0.0])) < 1e-12);
        let r = rhs(&decay(), &ss, 0.0).unwrap();
        assert!(r.max_abs() <= 1e-8);
    }

    #[test]
    fn empty_generator_is_degenerate() {
        let me = MasterEq::new(2, "idle");
        assert!(matches!(steady_state(&me), Err(Error::NonUniqueSteadyState { .. })));
    }

    #[test]
    fn refuses_large_or_driven_models() {
        let me = MasterEq::new(33, "big");
        assert!(matches!(steady_state(&me), Err(Error::Argument(_))));
        let mut driven = decay();
        let up = CMatrix::from_vec(2, 2, vec![ZERO, ZERO, ONE, ZERO]).unwrap();
        driven
            .add_term(HTerm::with_conjugate(
                up,
                crate::lindblad::Envelope::Oscillating { freq: 1.0 },
            ))
            .unwrap();
        assert!(matches!(steady_state(&driven), Err(Error::Argument(_))));
    }
}
