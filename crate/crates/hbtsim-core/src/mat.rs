//! Minimal dense square-matrix support for the quadrature-space side:
//! products, symmetry checks, a cyclic Jacobi eigensolver for symmetric
//! matrices, and symplectic eigenvalues built from it.
//!
//! Covariance matrices here are at most 2M×2M with M ≤ 7 modes, so a naive
//! O(n³) implementation is more than enough.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Mat {
    n: usize,
    a: Vec<f64>, // row-major
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Mat { n, a: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn scaled_identity(n: usize, s: f64) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m.set(i, i, s);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] += v;
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        debug_assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] += aik * rhs.a[k * n + j];
                }
            }
        }
        out
    }

    /// self · rhsᵀ
    pub fn mul_transpose(&self, rhs: &Mat) -> Mat {
        debug_assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += self.get(i, k) * rhs.get(j, k);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(self.n, v.len());
        let n = self.n;
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += self.get(i, j) * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max(math::fabs(self.get(i, j) - self.get(j, i)));
            }
        }
        worst
    }

    pub fn symmetrize(&mut self) {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let s = 0.5 * (self.get(i, j) + self.get(j, i));
                self.set(i, j, s);
                self.set(j, i, s);
            }
        }
    }

    /// Eigenvalues and eigenvectors (as columns) of a symmetric matrix by
    /// cyclic Jacobi rotations. Panics if the off-diagonal norm fails to
    /// converge, which for symmetric input it cannot.
    pub fn jacobi_symmetric(&self) -> (Vec<f64>, Mat) {
        let n = self.n;
        let mut a = self.clone();
        let mut v = Mat::identity(n);
        for _sweep in 0..200 {
            let mut off = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    off += a.get(i, j) * a.get(i, j);
                }
            }
            if off < 1e-28 * (1.0 + a.frobenius_sq()) {
                let eigs = (0..n).map(|i| a.get(i, i)).collect();
                return (eigs, v);
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    if math::fabs(apq) < 1e-300 {
                        continue;
                    }
                    let app = a.get(p, p);
                    let aqq = a.get(q, q);
                    let theta = 0.5 * (aqq - app) / apq;
                    let t = if theta >= 0.0 {
                        1.0 / (theta + math::sqrt(1.0 + theta * theta))
                    } else {
                        -1.0 / (-theta + math::sqrt(1.0 + theta * theta))
                    };
                    let c = 1.0 / math::sqrt(1.0 + t * t);
                    let s = t * c;
                    for k in 0..n {
                        let akp = a.get(k, p);
                        let akq = a.get(k, q);
                        a.set(k, p, c * akp - s * akq);
                        a.set(k, q, s * akp + c * akq);
                    }
                    for k in 0..n {
                        let apk = a.get(p, k);
                        let aqk = a.get(q, k);
                        a.set(p, k, c * apk - s * aqk);
                        a.set(q, k, s * apk + c * aqk);
                    }
                    for k in 0..n {
                        let vkp = v.get(k, p);
                        let vkq = v.get(k, q);
                        v.set(k, p, c * vkp - s * vkq);
                        v.set(k, q, s * vkp + c * vkq);
                    }
                }
            }
        }
        panic!("jacobi eigensolver failed to converge on symmetric input");
    }

    fn frobenius_sq(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum()
    }

    /// Symmetric positive-semidefinite square root. Eigenvalues slightly
    /// below zero (numerical noise) are clamped.
    pub fn sqrt_psd(&self) -> Mat {
        let (eigs, vecs) = self.jacobi_symmetric();
        let n = self.n;
        let mut out = Mat::zeros(n);
        for k in 0..n {
            let lam = eigs[k].max(0.0);
            let s = math::sqrt(lam);
            for i in 0..n {
                for j in 0..n {
                    out.add_to(i, j, s * vecs.get(i, k) * vecs.get(j, k));
                }
            }
        }
        out
    }
}

/// Standard symplectic form Ω for M modes in interleaved (x₁,p₁,…) ordering:
/// block diagonal with [[0, 1], [-1, 0]] per mode.
pub(crate) fn symplectic_form(modes: usize) -> Mat {
    let mut w = Mat::zeros(2 * modes);
    for m in 0..modes {
        w.set(2 * m, 2 * m + 1, 1.0);
        w.set(2 * m + 1, 2 * m, -1.0);
    }
    w
}

/// Symplectic eigenvalues of a symmetric covariance matrix: the positive
/// doubled spectrum of i·Ω·Σ, computed as sqrt of the eigenvalues of
/// K·Kᵀ with K = Σ^{1/2}·Ω·Σ^{1/2} (K real antisymmetric).
pub(crate) fn symplectic_eigenvalues(sigma: &Mat) -> Vec<f64> {
    let n = sigma.dim();
    debug_assert!(n % 2 == 0);
    let root = sigma.sqrt_psd();
    let omega = symplectic_form(n / 2);
    let k = root.mul(&omega).mul(&root);
    let m = k.mul_transpose(&k); // K Kᵀ, symmetric PSD with eigenvalues ν² (doubled)
    let (mut eigs, _) = m.jacobi_symmetric();
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Pairs (ν², ν²); take one representative per pair.
    (0..n / 2).map(|i| math::sqrt(eigs[2 * i + 1].max(0.0))).collect()
}
