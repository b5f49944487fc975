//! Operator algebra for registers of identical multi-level atoms.
//!
//! Basis ordering is lexicographic over per-site level indices with site 0
//! most significant, so the all-ground product state is index 0 and a basis
//! index decodes to per-site levels by base-`d` digit expansion.

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, ONE};

/// Ordered local levels of one atom. Level index = list position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelScheme {
    labels: Vec<String>,
}

impl LevelScheme {
    pub fn new<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_owned()).collect();
        if labels.is_empty() {
            return Err(Error::arg("level scheme needs at least one level"));
        }
        for (k, l) in labels.iter().enumerate() {
            if labels[..k].contains(l) {
                return Err(Error::arg(format!("duplicate level label {l:?}")));
            }
        }
        Ok(Self { labels })
    }

    /// Ground, short-lived intermediate, Rydberg.
    pub fn ger() -> Self {
        Self::new(&["g", "e", "r"]).unwrap()
    }

    /// Ground and Rydberg only.
    pub fn gr() -> Self {
        Self::new(&["g", "r"]).unwrap()
    }

    /// Two qubit ground states and two Rydberg states.
    pub fn two_ground_two_rydberg() -> Self {
        Self::new(&["0", "1", "r", "p"]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::arg(format!("unknown level {label:?}")))
    }

    /// Level that `P^0` projects on: the first ground level.
    pub fn ground(&self) -> usize {
        0
    }

    /// Level that `P^1` projects on.
    pub fn rydberg(&self) -> Result<usize> {
        self.index("r")
    }

    /// Index of a product state given per-site levels.
    pub fn basis_index(&self, levels: &[usize]) -> Result<usize> {
        let d = self.dim();
        levels.iter().try_fold(0usize, |acc, &l| {
            if l >= d {
                Err(Error::arg(format!("level {l} out of range for d={d}")))
            } else {
                Ok(acc * d + l)
            }
        })
    }

    /// Per-site levels of a basis index.
    pub fn decode(&self, mut index: usize, n_sites: usize) -> Vec<usize> {
        let d = self.dim();
        let mut out = vec![0; n_sites];
        for slot in out.iter_mut().rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    /// Product basis vector from a label string such as `"grr"` or `"01r"`.
    /// Only single-character labels are supported here.
    pub fn ket(&self, spec: &str) -> Result<Vec<num_complex::Complex64>> {
        let levels = spec
            .chars()
            .map(|ch| self.index(&ch.to_string()))
            .collect::<Result<Vec<_>>>()?;
        let dim = self.dim().pow(levels.len() as u32);
        let mut v = vec![crate::matrix::ZERO; dim];
        v[self.basis_index(&levels)?] = ONE;
        Ok(v)
    }
}

/// A local `d × d` operator acting on one site of an `n_sites` register.
#[derive(Debug, Clone)]
pub struct SiteOperator {
    pub local: CMatrix,
    pub site: usize,
    pub n_sites: usize,
}

/// `|x⟩⟨y|` on a `d`-level system.
pub fn matrix_unit(d: usize, x: usize, y: usize) -> Result<CMatrix> {
    if x >= d || y >= d {
        return Err(Error::arg(format!("matrix unit ({x},{y}) out of range for d={d}")));
    }
    let mut m = CMatrix::zeros(d, d);
    m[(x, y)] = ONE;
    Ok(m)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kron(b)
}

/// `I^{⊗site} ⊗ local ⊗ I^{⊗(n_sites − site − 1)}`.
pub fn embed_site(op: &SiteOperator) -> Result<CMatrix> {
    if !op.local.is_square() {
        return Err(Error::arg("site operator must be square"));
    }
    if op.site >= op.n_sites {
        return Err(Error::arg(format!(
            "site {} out of range for {} sites",
            op.site, op.n_sites
        )));
    }
    let d = op.local.rows();
    let left = CMatrix::identity(d.pow(op.site as u32));
    let right = CMatrix::identity(d.pow((op.n_sites - op.site - 1) as u32));
    Ok(left.kron(&op.local).kron(&right))
}

/// Shorthand for embedding `|x⟩⟨y|` at `site`.
pub fn embed_unit(d: usize, x: usize, y: usize, site: usize, n_sites: usize) -> Result<CMatrix> {
    embed_site(&SiteOperator {
        local: matrix_unit(d, x, y)?,
        site,
        n_sites,
    })
}

/// `P_{j−1}^m σ_j^{xy} P_{j+1}^n` on a ring, where `P^0` projects the left
/// neighbour (resp. right) on the ground level and `P^1` on the Rydberg level.
pub fn projected_transition(
    j: usize,
    (x, y): (usize, usize),
    m: u8,
    n: u8,
    scheme: &LevelScheme,
    n_sites: usize,
) -> Result<CMatrix> {
    if n_sites < 3 {
        return Err(Error::arg("projected transitions need a ring of at least 3 sites"));
    }
    if j >= n_sites {
        return Err(Error::arg(format!("site {j} out of range for {n_sites} sites")));
    }
    let d = scheme.dim();
    let level_for = |occ: u8| -> Result<usize> {
        match occ {
            0 => Ok(scheme.ground()),
            1 => scheme.rydberg(),
            _ => Err(Error::arg(format!("neighbour occupancy must be 0 or 1, got {occ}"))),
        }
    };
    let left = (j + n_sites - 1) % n_sites;
    let right = (j + 1) % n_sites;
    let pl = level_for(m)?;
    let pr = level_for(n)?;
    let p_left = embed_unit(d, pl, pl, left, n_sites)?;
    let sigma = embed_unit(d, x, y, j, n_sites)?;
    let p_right = embed_unit(d, pr, pr, right, n_sites)?;
    Ok(&(&p_left * &sigma) * &p_right)
}

/// Ordered collection of labelled state vectors.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NamedStates {
    entries: Vec<(String, Vec<num_complex::Complex64>)>,
}

impl NamedStates {
    pub fn push(&mut self, name: impl Into<String>, state: Vec<num_complex::Complex64>) {
        self.entries.push((name.into(), state));
    }

    pub fn get(&self, name: &str) -> Result<&[num_complex::Complex64]> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
            .ok_or_else(|| Error::arg(format!("unknown state '{name}'")))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[num_complex::Complex64])> {
        self.entries.iter().map(|(n, v)| (n.as_str(), v.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
