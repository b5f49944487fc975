use super::MasterEq;
use crate::matrix::{CMatrix, ZERO};

const DEGENERATE: f64 = 1e-9;

/// Second-order light-shift operator of the couplings whose detuning
/// `δ = E_b − E_a − ω` exceeds `threshold` in magnitude.
///
/// Each drive `M e^{−iωt} + h.c.` contributes
/// `(1/δ)(Σ M_ba M*_b'a |b⟩⟨b'| − Σ M*_ba M_ba' |a⟩⟨a'|)`, restricted to pairs
/// of equal frame energy so that the result is static. The diagonal holds the
/// familiar `±|Ω|²/δ` shifts. The off-diagonal part appears when one drive
/// maps several states onto the same far-detuned level, e.g. `|p⟩⟨+|`.
pub fn far_detuned_shifts(me: &MasterEq, energies: &[f64], threshold: f64) -> CMatrix {
    let dim = me.dim();
    let mut h = CMatrix::zeros(dim, dim);
    for term in me.hterms().iter().filter(|t| t.add_conjugate) {
        let omega = term.envelope.net_freq();
        let w2 = term.envelope.max_magnitude().powi(2);
        let m = &term.matrix;
        let detuning = |b: usize, a: usize| energies[b] - energies[a] - omega;
        let far = |b: usize, a: usize| m[(b, a)] != ZERO && detuning(b, a).abs() > threshold;
        for b in 0..dim {
            for a in 0..dim {
                if !far(b, a) {
                    continue;
                }
                let scale = w2 / detuning(b, a);
                for a2 in 0..dim {
                    if far(b, a2) && (energies[a2] - energies[a]).abs() < DEGENERATE {
                        h[(a, a2)] -= m[(b, a)].conj() * m[(b, a2)] * scale;
                    }
                }
                for b2 in 0..dim {
                    if far(b2, a) && (energies[b2] - energies[b]).abs() < DEGENERATE {
                        h[(b, b2)] += m[(b, a)] * m[(b2, a)].conj() * scale;
                    }
                }
            }
        }
    }
    h
}
