//! Positive-definiteness test for candidate characteristic functions.
//!
//! The Gram matrix `G_{jk} = γ(ξ_j − ξ_k)` is symmetrized to its Hermitian
//! part `(G + G^*)/2`, embedded as the real symmetric `2N × 2N` matrix
//! `[[A, −B], [B, A]]` and diagonalized by cyclic Jacobi rotations. Each
//! eigenvalue of the Hermitian matrix appears twice in the embedding.

use num_complex::Complex64;

use crate::error::{ensure, Error, Result};

pub const MIN_NODES: usize = 2;
pub const MAX_NODES: usize = 64;
const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct GramReport {
    pub nodes: Vec<f64>,
    pub min_eigenvalue: f64,
    pub matrix_dim: usize,
    /// Residual `‖Hv − λv‖ / ‖v‖` of the returned eigenpair.
    pub residual: f64,
    /// `max |G_{jk} − conj(G_{kj})|` before symmetrization.
    pub hermitian_defect: f64,
}

/// Eigenvalues (ascending) and column eigenvectors of a real symmetric
/// matrix stored row-major.
pub fn jacobi_eigen(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n);
    let mut a = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let frob: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-17 * frob.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let vals = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vecs = vec![0.0; n * n];
    for (col, &i) in order.iter().enumerate() {
        for k in 0..n {
            vecs[k * n + col] = v[k * n + i];
        }
    }
    (vals, vecs)
}

/// Hermitian part of the Gram matrix of `gamma` on `nodes`, row-major.
pub fn gram_matrix(gamma: impl Fn(f64) -> Complex64, nodes: &[f64]) -> (Vec<Complex64>, f64) {
    let n = nodes.len();
    let g: Vec<Complex64> = (0..n * n).map(|idx| gamma(nodes[idx / n] - nodes[idx % n])).collect();
    let mut defect = 0.0_f64;
    let mut h = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        for k in 0..n {
            let a = g[j * n + k];
            let b = g[k * n + j].conj();
            defect = defect.max((a - b).norm());
            h[j * n + k] = (a + b) * 0.5;
        }
    }
    (h, defect)
}

pub fn bochner_gram_min_eig(gamma: impl Fn(f64) -> Complex64, nodes: &[f64]) -> Result<GramReport> {
    let n = nodes.len();
    ensure((MIN_NODES..=MAX_NODES).contains(&n), || {
        format!("node count {n} outside {MIN_NODES}..={MAX_NODES}")
    })?;
    ensure(nodes.iter().all(|x| x.is_finite()), || "nodes must be finite".into())?;
    let g0 = gamma(0.0);
    ensure(g0.im.abs() <= 1e-14 * g0.re.abs().max(1.0), || {
        format!("gamma(0) = {g0} is not real")
    })?;
    let (h, defect) = gram_matrix(&gamma, nodes);
    let dim = 2 * n;
    let mut emb = vec![0.0; dim * dim];
    for j in 0..n {
        for k in 0..n {
            let z = h[j * n + k];
            emb[j * dim + k] = z.re;
            emb[(j + n) * dim + k + n] = z.re;
            emb[j * dim + k + n] = -z.im;
            emb[(j + n) * dim + k] = z.im;
        }
    }
    let (vals, vecs) = jacobi_eigen(&emb, dim);
    let lambda = vals[0];
    let c: Vec<Complex64> = (0..n).map(|j| Complex64::new(vecs[j * dim], vecs[(j + n) * dim])).collect();
    let norm: f64 = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let residual = (0..n)
        .map(|j| {
            let hv: Complex64 = (0..n).map(|k| h[j * n + k] * c[k]).sum();
            (hv - c[j] * lambda).norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
        / norm;
    if !(residual <= RESIDUAL_TOL) {
        return Err(Error::Numeric(format!("eigenpair residual {residual:e} exceeds {RESIDUAL_TOL:e}")));
    }
    Ok(GramReport {
        nodes: nodes.to_vec(),
        min_eigenvalue: lambda,
        matrix_dim: n,
        residual,
        hermitian_defect: defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_is_positive_definite() {
        let r = bochner_gram_min_eig(|x| Complex64::new((-x * x / 2.0).exp(), 0.0), &[0.0, 1.0, 2.0]).unwrap();
        assert!(r.min_eigenvalue > 0.0);
        assert_eq!(r.matrix_dim, 3);
        assert_eq!(r.hermitian_defect, 0.0);
    }

    #[test]
    fn constant_is_rank_one() {
        let r = bochner_gram_min_eig(|_| Complex64::new(1.0, 0.0), &[0.0, 0.3, 1.7, 2.0]).unwrap();
        assert!(r.min_eigenvalue.abs() < 1e-14);
    }

    #[test]
    fn input_checks() {
        assert!(bochner_gram_min_eig(|_| Complex64::new(1.0, 0.0), &[0.0]).is_err());
        assert!(bochner_gram_min_eig(|_| Complex64::new(1.0, 0.0), &vec![0.0; 65]).is_err());
        assert!(bochner_gram_min_eig(|_| Complex64::new(1.0, 0.5), &[0.0, 1.0]).is_err());
    }

    #[test]
    fn jacobi_diagonalizes_known_matrix() {
        let (vals, _) = jacobi_eigen(&[2.0, 1.0, 1.0, 2.0], 2);
        assert!((vals[0] - 1.0).abs() < 1e-15 && (vals[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn complex_hermitian_character() {
        // γ(ξ) = e^{iξ} is the characteristic function of a point mass: rank one
        let r = bochner_gram_min_eig(|x| Complex64::from_polar(1.0, x), &[0.0, 0.4, 1.1]).unwrap();
        assert!(r.min_eigenvalue.abs() < 1e-14);
        assert!(r.hermitian_defect < 1e-15);
    }
}
