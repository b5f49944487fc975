//! Sparse evaluation of the Lindblad right-hand side.
//!
//! With `G(t) = −i H(t) − ½ Σ L†L` the derivative is
//! `ρ̇ = Gρ + ρG† + Σ LρL†`. For Hermitian ρ the first two terms are
//! `A + A†` with `A = Gρ`, so only one sparse-dense product is needed. Half of
//! the jump contribution is folded into `A` before symmetrizing, which keeps
//! the output exactly Hermitian.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, I, ZERO};

use super::{Envelope, MasterEq};

/// `((row, col), value)`
type Entry = ((usize, usize), C64);

#[derive(Debug, Clone)]
struct DynamicTerm {
    envelope: Envelope,
    /// (slot, −i × matrix entry)
    slots: Vec<(usize, C64)>,
}

/// Precompiled, immutable form of a [`MasterEq`].
#[derive(Debug, Clone)]
pub struct Generator {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    static_values: Vec<C64>,
    dynamic: Vec<DynamicTerm>,
    /// (destination, source, weight): `A[dst] += weight · ρ[src]`
    jump_pairs: Vec<(usize, usize, C64)>,
}

/// Per-caller scratch memory for [`Generator::apply`].
#[derive(Debug, Clone)]
pub struct Workspace {
    values: Vec<C64>,
    a: Vec<C64>,
}

impl Generator {
    pub fn new(me: &MasterEq) -> Self {
        Self::build(me, None)
    }

    /// The generator with `−i[diag(E), ·]` removed, for integrators that
    /// treat that part exactly.
    pub fn without_diagonal(me: &MasterEq, energies: &[f64]) -> Result<Self> {
        if energies.len() != me.dim() {
            return Err(Error::DimensionMismatch {
                expected: me.dim(),
                got: energies.len(),
            });
        }
        Ok(Self::build(me, Some(energies)))
    }

    fn build(me: &MasterEq, removed: Option<&[f64]>) -> Self {
        let dim = me.dim();
        let mut slot_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut static_acc: BTreeMap<(usize, usize), C64> = BTreeMap::new();
        let mut pending: Vec<(Envelope, Vec<Entry>)> = Vec::new();

        let mut record = |env: &Envelope, entries: Vec<Entry>| {
            if env.is_constant() {
                let c = env.eval(0.0);
                for (rc, v) in entries {
                    *static_acc.entry(rc).or_insert(ZERO) += c * v;
                }
            } else {
                pending.push((env.clone(), entries));
            }
        };

        for term in me.hterms() {
            let sp = term.matrix.to_sparse();
            let fwd: Vec<_> = sp.entries.iter().map(|&(r, c, v)| ((r, c), -I * v)).collect();
            record(&term.envelope, fwd);
            if term.add_conjugate {
                let back: Vec<_> = sp.entries.iter().map(|&(r, c, v)| ((c, r), -I * v.conj())).collect();
                record(&term.envelope.conj(), back);
            }
        }

        let mut jump_pairs = Vec::new();
        for d in me.dissipators() {
            let l = d.op.to_sparse();
            // −½ L†L enters G directly.
            let ldl = d.op.adjoint().matmul(&d.op).expect("square jump operator");
            for (r, c, v) in ldl.to_sparse().entries {
                *static_acc.entry((r, c)).or_insert(ZERO) += v * -0.5;
            }
            for &(r1, c1, v1) in &l.entries {
                for &(r2, c2, v2) in &l.entries {
                    jump_pairs.push((r1 * dim + r2, c1 * dim + c2, v1 * v2.conj() * 0.5));
                }
            }
        }
        jump_pairs.sort_by_key(|&(dst, src, _)| (dst, src));
        if let Some(e) = removed {
            for (a, &ea) in e.iter().enumerate().filter(|(_, &ea)| ea != 0.0) {
                *static_acc.entry((a, a)).or_insert(ZERO) += I * ea;
            }
        }

        for &rc in static_acc.keys() {
            let n = slot_of.len();
            slot_of.entry(rc).or_insert(n);
        }
        for (_, entries) in &pending {
            for (rc, _) in entries {
                let n = slot_of.len();
                slot_of.entry(*rc).or_insert(n);
            }
        }
        // Renumber slots in CSR order.
        let ordered: Vec<(usize, usize)> = slot_of.keys().copied().collect();
        let csr_slot: BTreeMap<(usize, usize), usize> = ordered.iter().enumerate().map(|(k, rc)| (*rc, k)).collect();
        let mut row_ptr = vec![0usize; dim + 1];
        for &(r, _) in &ordered {
            row_ptr[r + 1] += 1;
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        let col_idx = ordered.iter().map(|&(_, c)| c).collect();
        let mut static_values = vec![ZERO; ordered.len()];
        for (rc, v) in static_acc {
            static_values[csr_slot[&rc]] += v;
        }
        let dynamic = pending
            .into_iter()
            .map(|(envelope, entries)| DynamicTerm {
                envelope,
                slots: entries.into_iter().map(|(rc, v)| (csr_slot[&rc], v)).collect(),
            })
            .collect();

        Self {
            dim,
            row_ptr,
            col_idx,
            static_values,
            dynamic,
            jump_pairs,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Stored nonzeros of `G(t)`.
    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    pub fn workspace(&self) -> Workspace {
        Workspace {
            values: vec![ZERO; self.static_values.len()],
            a: vec![ZERO; self.dim * self.dim],
        }
    }

    /// Writes `ρ̇(t)` into `out`. `rho` must be Hermitian; both slices are
    /// row-major `dim × dim`.
    pub fn apply(&self, t: f64, rho: &[C64], out: &mut [C64], ws: &mut Workspace) {
        let d = self.dim;
        debug_assert_eq!(rho.len(), d * d);
        debug_assert_eq!(out.len(), d * d);

        ws.values.copy_from_slice(&self.static_values);
        for term in &self.dynamic {
            let c = term.envelope.eval(t);
            for &(slot, v) in &term.slots {
                ws.values[slot] += c * v;
            }
        }

        let a = &mut ws.a;
        a.fill(ZERO);
        for r in 0..d {
            let a_row = &mut a[r * d..(r + 1) * d];
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let g = ws.values[k];
                let c = self.col_idx[k];
                let rho_row = &rho[c * d..(c + 1) * d];
                for (x, &y) in a_row.iter_mut().zip(rho_row) {
                    *x += g * y;
                }
            }
        }
        for &(dst, src, w) in &self.jump_pairs {
            a[dst] += w * rho[src];
        }

        for r in 0..d {
            for c in r..d {
                let v = a[r * d + c] + a[c * d + r].conj();
                out[r * d + c] = v;
                out[c * d + r] = v.conj();
            }
        }
    }

    /// Convenience wrapper allocating its own workspace.
    pub fn rhs(&self, rho: &CMatrix, t: f64) -> Result<CMatrix> {
        if rho.rows() != self.dim || rho.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rho.rows(),
            });
        }
        let mut ws = self.workspace();
        // Non-Hermitian input: split into Hermitian and anti-Hermitian parts,
        // both of which the A + A† trick handles (the latter via iρ').
        let herm = CMatrix::from_fn(self.dim, self.dim, |r, c| (rho[(r, c)] + rho[(c, r)].conj()) * 0.5);
        let anti = CMatrix::from_fn(self.dim, self.dim, |r, c| (rho[(r, c)] - rho[(c, r)].conj()) * 0.5);
        let mut out_h = vec![ZERO; self.dim * self.dim];
        self.apply(t, herm.as_slice(), &mut out_h, &mut ws);
        if anti.max_abs() == 0.0 {
            return CMatrix::from_vec(self.dim, self.dim, out_h);
        }
        // anti = i·K with K Hermitian; the map is linear so f(anti) = i·f(K).
        let k = anti.scale(-I);
        let mut out_k = vec![ZERO; self.dim * self.dim];
        self.apply(t, k.as_slice(), &mut out_k, &mut ws);
        let data = out_h.iter().zip(&out_k).map(|(h, k)| h + I * k).collect();
        CMatrix::from_vec(self.dim, self.dim, data)
    }
}

/// The Lindblad derivative of `rho` at time `t`.
pub fn rhs(me: &MasterEq, rho: &CMatrix, t: f64) -> Result<CMatrix> {
    Generator::new(me).rhs(rho, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::{Dissipator, HTerm};
    use crate::matrix::ONE;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut impl Rng, n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    fn random_density(rng: &mut impl Rng, n: usize) -> CMatrix {
        let a = random_matrix(rng, n);
        let p = a.matmul(&a.adjoint()).unwrap();
        let tr = p.trace().re;
        p.scale_real(1.0 / tr)
    }

    fn random_me(rng: &mut impl Rng, n: usize) -> MasterEq {
        let mut me = MasterEq::new(n, "random");
        let h = random_matrix(rng, n);
        let herm = &h + &h.adjoint();
        me.add_term(HTerm::hermitian(herm)).unwrap();
        me.add_term(HTerm::with_conjugate(
            random_matrix(rng, n),
            Envelope::Oscillating { freq: 1.7 },
        ))
        .unwrap();
        me.add_term(HTerm::with_conjugate(
            random_matrix(rng, n),
            Envelope::Product(vec![
                Envelope::Gaussian {
                    amplitude: 0.5,
                    center: 0.2,
                    width: 1.0,
                },
                Envelope::Oscillating { freq: -3.0 },
            ]),
        ))
        .unwrap();
        for _ in 0..2 {
            me.add_dissipator(Dissipator::new(0.3, random_matrix(rng, n)).unwrap())
                .unwrap();
        }
        me
    }

    #[test]
    fn pure_decay_rhs() {
        let gamma = 2.5;
        let mut me = MasterEq::new(2, "decay");
        let lower = CMatrix::from_vec(2, 2, vec![ZERO, ONE, ZERO, ZERO]).unwrap();
        me.add_dissipator(Dissipator::new(gamma, lower).unwrap()).unwrap();
        let excited = CMatrix::from_real_diagonal(&[0.0, 1.0]);
        let d = rhs(&me, &excited, 0.0).unwrap();
        let expect = CMatrix::from_real_diagonal(&[gamma, -gamma]);
        assert!(d.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn sparse_matches_dense_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let me = random_me(&mut rng, 5);
        let gen = Generator::new(&me);
        for &t in &[0.0, 0.37, 2.1] {
            let rho = random_density(&mut rng, 5);
            let fast = gen.rhs(&rho, t).unwrap();
            let slow = me.rhs_dense(&rho, t).unwrap();
            assert!(fast.max_abs_diff(&slow) < 1e-12, "t={t}");
            // non-Hermitian input goes through the linear split
            let x = random_matrix(&mut rng, 5);
            let fast = gen.rhs(&x, t).unwrap();
            let slow = me.rhs_dense(&x, t).unwrap();
            assert!(fast.max_abs_diff(&slow) < 1e-12);
        }
    }

    #[test]
    fn rhs_is_traceless_and_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 4, 7] {
            let me = random_me(&mut rng, n);
            let rho = random_density(&mut rng, n);
            let d = rhs(&me, &rho, 0.9).unwrap();
            assert!(d.trace().norm() < 1e-12);
            assert_eq!(d.hermiticity_violation(), 0.0);
        }
    }

    #[test]
    fn dissipator_contribution_is_traceless() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = Dissipator::new(1.3, random_matrix(&mut rng, 4)).unwrap();
        let rho = random_density(&mut rng, 4);
        assert!(d.apply(&rho).unwrap().trace().norm() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let me = MasterEq::new(3, "empty");
        assert!(matches!(
            rhs(&me, &CMatrix::identity(2), 0.0),
            Err(Error::DimensionMismatch { expected: 3, got: 2 })
        ));
    }
}
