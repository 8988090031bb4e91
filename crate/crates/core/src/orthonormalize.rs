//! Gram–Schmidt coefficients `β` with `ψ̄_i = Σ_{k<=i} β_ik ψ_k` orthonormal.
//!
//! The unique lower-triangular `β` with positive diagonal satisfying
//! `β G βᵀ = I` is the inverse of the Cholesky factor of `G`, which is how it
//! is computed here.

use crate::error::{Error, Result};
use crate::operator::GramMatrix;

/// Largest tolerated `|G_ij - G_ji| / (1 + |G_ij|)` before factorization.
pub const SYMMETRY_TOLERANCE: f64 = 1e-8;

/// Pivots below this multiple of the original diagonal count as zero.
const PIVOT_RELATIVE_FLOOR: f64 = 64.0 * f64::EPSILON;

#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    n: usize,
    /// Row-major `n × n`, zero above the diagonal.
    beta: Vec<f64>,
    gram: GramMatrix,
}

impl OrthonormalBasis {
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn beta(&self, i: usize, k: usize) -> f64 {
        self.beta[i * self.n + k]
    }

    /// Row `i` of `β` up to and including the diagonal.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.beta[i * self.n..i * self.n + i + 1]
    }

    /// The symmetrized Gram matrix that was factorized.
    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    /// `Σ_{k<=i} β_ik v_k`.
    pub fn apply_row(&self, i: usize, v: &[f64]) -> f64 {
        self.row(i).iter().zip(v).map(|(b, x)| b * x).sum()
    }

    /// `βᵀ b`, the coefficients of `Σ_i b_i ψ̄_i` over the raw basis `ψ_k`.
    pub fn transpose_apply(&self, b: &[f64]) -> Vec<f64> {
        let mut c = vec![0.0; self.n];
        for (i, &bi) in b.iter().enumerate().take(self.n) {
            if bi != 0.0 {
                for (ck, &beta) in c.iter_mut().zip(self.row(i)) {
                    *ck += bi * beta;
                }
            }
        }
        c
    }

    /// `max |β G βᵀ - I|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.n;
        // W = β G, then (W βᵀ)_ij = Σ_k W_ik β_jk
        let mut w = vec![0.0; n * n];
        for i in 0..n {
            for (k, &b) in self.row(i).iter().enumerate() {
                if b != 0.0 {
                    let g = self.gram.row(k);
                    for j in 0..n {
                        w[i * n + j] += b * g[j];
                    }
                }
            }
        }
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let v: f64 = self.row(j).iter().enumerate().map(|(k, &b)| w[i * n + k] * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v - target).abs());
            }
        }
        worst
    }
}

/// `β = L⁻¹` where `L Lᵀ = (G + Gᵀ)/2`.
pub fn compute_beta(gram: &GramMatrix) -> Result<OrthonormalBasis> {
    let (gap, i, j) = gram.max_asymmetry();
    if gap > SYMMETRY_TOLERANCE {
        return Err(Error::Asymmetric { i, j, gap });
    }
    let g = gram.symmetrized();
    let n = g.dim();

    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = g.get(j, j);
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if !(d > PIVOT_RELATIVE_FLOOR * g.get(j, j).abs()) || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { pivot: j });
        }
        let ljj = d.sqrt();
        l[j * n + j] = ljj;
        for i in (j + 1)..n {
            let mut s = g.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / ljj;
        }
    }

    let mut beta = vec![0.0; n * n];
    for i in 0..n {
        let lii = l[i * n + i];
        beta[i * n + i] = 1.0 / lii;
        for k in 0..i {
            let mut s = 0.0;
            for m in k..i {
                s += l[i * n + m] * beta[m * n + k];
            }
            beta[i * n + k] = -s / lii;
        }
    }

    Ok(OrthonormalBasis { n, beta, gram: g })
}
