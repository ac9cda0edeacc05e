//! Spectral decomposition of 4×4 complex generators.
//!
//! Eigenvalues come from a complex Schur factorization; eigenvectors are the
//! null vectors of `L − λI` taken from its SVD, one cluster of (numerically)
//! equal eigenvalues at a time. A decomposition whose reconstruction error
//! exceeds `1e-10·‖L‖` or whose eigenvector basis is badly conditioned is
//! reported as [`Error::Defective`].

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix4 = Matrix4<Complex64>;
pub type CVector4 = Vector4<Complex64>;

const RECONSTRUCTION_TOL: f64 = 1e-10;
const CLUSTER_TOL: f64 = 1e-7;
const MAX_CONDITION: f64 = 1e6;

/// `L = Σᵢ λᵢ rᵢ lᵢᵀ` with `left · right = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub eigenvalues: CVector4,
    /// Right eigenvectors as columns.
    pub right_vectors: CMatrix4,
    /// Left eigenvectors as rows.
    pub left_vectors: CMatrix4,
}

impl EigenSystem {
    pub fn reconstruct(&self) -> CMatrix4 {
        self.right_vectors * CMatrix4::from_diagonal(&self.eigenvalues) * self.left_vectors
    }

    /// Index of the eigenvalue of smallest modulus.
    pub fn kernel_index(&self) -> usize {
        (0..4)
            .min_by(|&a, &b| self.eigenvalues[a].norm().total_cmp(&self.eigenvalues[b].norm()))
            .unwrap_or(0)
    }

    /// Projection of `x` onto each eigenmode: `cᵢ = lᵢ·x`.
    pub fn mode_amplitudes(&self, x: &CVector4) -> CVector4 {
        self.left_vectors * x
    }

    /// `e^{Lt} x` evaluated in the eigenbasis.
    pub fn propagate(&self, t: f64, x: &CVector4) -> CVector4 {
        let amps = self.mode_amplitudes(x);
        let scaled = CVector4::from_fn(|i, _| amps[i] * (self.eigenvalues[i] * t).exp());
        self.right_vectors * scaled
    }
}

/// Diagonalize `l`. Returns [`Error::Defective`] when the generator is not
/// diagonalizable to working accuracy, in which case callers switch to dense
/// matrix exponentials.
pub fn eig_decompose(l: &CMatrix4) -> Result<EigenSystem> {
    let scale = l.norm();
    if scale == 0.0 {
        return Ok(EigenSystem {
            eigenvalues: CVector4::zeros(),
            right_vectors: CMatrix4::identity(),
            left_vectors: CMatrix4::identity(),
        });
    }
    if !scale.is_finite() {
        return Err(Error::Domain("generator has non-finite entries".into()));
    }

    let schur = l.clone_owned().schur();
    let eigenvalues = schur.eigenvalues().ok_or(Error::Defective {
        reconstruction: f64::INFINITY,
    })?;

    // Group numerically coincident eigenvalues.
    let mut assigned = [false; 4];
    let mut right = CMatrix4::zeros();
    for i in 0..4 {
        if assigned[i] {
            continue;
        }
        let members: Vec<usize> = (i..4)
            .filter(|&j| !assigned[j] && (eigenvalues[j] - eigenvalues[i]).norm() <= CLUSTER_TOL * scale)
            .collect();
        let centre = members.iter().map(|&j| eigenvalues[j]).sum::<Complex64>() / members.len() as f64;
        let shifted = l - CMatrix4::identity() * centre;
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t.expect("requested V");
        // Singular values are sorted descending; the null space sits at the end.
        for (k, &j) in members.iter().enumerate() {
            let row = 3 - k;
            let col = CVector4::from_fn(|r, _| v_t[(row, r)].conj());
            right.set_column(j, &col);
            assigned[j] = true;
        }
    }

    let left = right.try_inverse().ok_or(Error::Defective {
        reconstruction: f64::INFINITY,
    })?;
    let system = EigenSystem {
        eigenvalues,
        right_vectors: right,
        left_vectors: left,
    };
    let reconstruction = (system.reconstruct() - l).norm() / scale;
    let condition = right.norm() * left.norm();
    if reconstruction > RECONSTRUCTION_TOL || condition > MAX_CONDITION || !reconstruction.is_finite() {
        return Err(Error::Defective { reconstruction });
    }
    Ok(system)
}
