//! Weighted SVD bases.
//!
//! Given a cubature rule `(X, W)` and a kernel with matrix `A`, the scaled
//! matrix `A_W = √W·A·√W` is symmetric positive (semi)definite and is
//! diagonalised as `A_W = Q·Σ²·Qᵀ`. The basis is then described by its
//! node values `V_U = √W⁻¹·Q·Σ` and its coefficients in the translate basis
//! `C_U = √W·Q·Σ⁻¹`, so that `u_j(x) = Σᵢ Φ(x, xᵢ)·C_U[i][j]`.
//!
//! Eigenvalues below `CLAMP_RELATIVE · σ₁²` are numerically zero: their
//! columns of `C_U` are not formed and the corresponding directions are not
//! part of the *active* basis. Negative roundoff eigenvalues are stored as 0.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::cubature::CubatureRule;
use crate::error::{Result, WsvdError};
use crate::geometry::Point;
use crate::kernels::{self, Kernel};

/// Eigenvalues of `A_W` below this multiple of the largest one are clamped.
pub const CLAMP_RELATIVE: f64 = 1e-16;

/// The symmetric matrix `√W·A·√W`.
#[derive(Debug, Clone)]
pub struct ScaledMatrix {
    a_w: DMatrix<f64>,
}

impl ScaledMatrix {
    pub fn new(kernel_matrix: &DMatrix<f64>, weights: &[f64]) -> Result<Self> {
        let n = weights.len();
        if kernel_matrix.nrows() != n || kernel_matrix.ncols() != n {
            return Err(WsvdError::LengthMismatch {
                expected: n,
                got: kernel_matrix.nrows(),
            });
        }
        let sqrt_w: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
        let mut a_w = kernel_matrix.clone();
        for j in 0..n {
            for i in 0..n {
                a_w[(i, j)] *= sqrt_w[i] * sqrt_w[j];
            }
        }
        Ok(ScaledMatrix { a_w })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a_w
    }
}

#[derive(Debug, Clone)]
pub struct WsvdBasis {
    rule: CubatureRule,
    kernel: Kernel,
    kernel_matrix: DMatrix<f64>,
    scaled: ScaledMatrix,
    q: DMatrix<f64>,
    sigma2: Vec<f64>,
    /// Raw eigenvalues before clamping negatives to zero.
    raw_eigenvalues: Vec<f64>,
    v: DMatrix<f64>,
    c: DMatrix<f64>,
    n_active: usize,
}

/// Read-only view of the Nyström discretisation carried by a basis.
#[derive(Debug, Clone, Copy)]
pub struct NystromSpectrum<'a> {
    /// Discrete eigenvalues `σⱼ²`, descending.
    pub eigenvalues: &'a [f64],
    /// Column `j` holds `u_j` at the nodes (`V_U`).
    pub eigenfunctions: &'a DMatrix<f64>,
    /// Cubature weights defining the discrete inner product.
    pub weights: &'a [f64],
}

impl WsvdBasis {
    /// Builds the basis for `kernel` on the nodes of `rule`.
    pub fn build(kernel: Kernel, rule: CubatureRule) -> Result<Self> {
        if let Some(j) = rule.weights().iter().position(|&w| w <= 0.0) {
            return Err(WsvdError::DegenerateRule(format!("weight {j} is not positive")));
        }
        let kernel_matrix = kernels::kernel_matrix(&kernel, rule.nodes())?.into_entries();
        let scaled = ScaledMatrix::new(&kernel_matrix, rule.weights())?;
        let n = rule.len();

        let eig = SymmetricEigen::try_new(scaled.matrix().clone(), f64::EPSILON, 1000 * n.max(10))
            .ok_or(WsvdError::EigenFailure)?;
        if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
            return Err(WsvdError::EigenFailure);
        }

        let mut pairs: Vec<(f64, Vec<f64>)> = (0..n)
            .map(|j| {
                let mut col: Vec<f64> = eig.eigenvectors.column(j).iter().copied().collect();
                fix_sign(&mut col);
                (eig.eigenvalues[j], col)
            })
            .collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| lexicographic(&a.1, &b.1)));

        let raw_eigenvalues: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let sigma2: Vec<f64> = raw_eigenvalues.iter().map(|&v| v.max(0.0)).collect();
        let q = DMatrix::from_fn(n, n, |i, j| pairs[j].1[i]);

        let threshold = (CLAMP_RELATIVE * sigma2[0]).max(0.0);
        let n_active = sigma2.iter().take_while(|&&s| s > threshold).count();

        let sqrt_w: Vec<f64> = rule.weights().iter().map(|w| w.sqrt()).collect();
        let sigma: Vec<f64> = sigma2.iter().map(|s| s.sqrt()).collect();
        let v = DMatrix::from_fn(n, n, |i, j| q[(i, j)] * sigma[j] / sqrt_w[i]);
        let c = DMatrix::from_fn(n, n_active, |i, j| sqrt_w[i] * q[(i, j)] / sigma[j]);

        Ok(WsvdBasis {
            rule,
            kernel,
            kernel_matrix,
            scaled,
            q,
            sigma2,
            raw_eigenvalues,
            v,
            c,
            n_active,
        })
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn rule(&self) -> &CubatureRule {
        &self.rule
    }

    pub fn nodes(&self) -> &[Point] {
        self.rule.nodes()
    }

    pub fn weights(&self) -> &[f64] {
        self.rule.weights()
    }

    /// Number of nodes `N`.
    pub fn len(&self) -> usize {
        self.rule.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rule.is_empty()
    }

    /// Number of non-clamped basis functions.
    pub fn n_active(&self) -> usize {
        self.n_active
    }

    pub fn kernel_matrix(&self) -> &DMatrix<f64> {
        &self.kernel_matrix
    }

    pub fn scaled_matrix(&self) -> &ScaledMatrix {
        &self.scaled
    }

    pub fn q_factor(&self) -> &DMatrix<f64> {
        &self.q
    }

    /// `σⱼ²`, descending, negatives clamped to zero.
    pub fn sigma2(&self) -> &[f64] {
        &self.sigma2
    }

    pub fn raw_eigenvalues(&self) -> &[f64] {
        &self.raw_eigenvalues
    }

    /// `V_U`, `N × N`.
    pub fn v_matrix(&self) -> &DMatrix<f64> {
        &self.v
    }

    /// `C_U`, `N × n_active`.
    pub fn c_matrix(&self) -> &DMatrix<f64> {
        &self.c
    }

    pub fn nystrom_spectrum(&self) -> NystromSpectrum<'_> {
        NystromSpectrum {
            eigenvalues: &self.sigma2,
            eigenfunctions: &self.v,
            weights: self.rule.weights(),
        }
    }

    /// `[u_1(x), …, u_M(x)]` for the active basis functions.
    pub fn eval_basis(&self, x: &Point) -> DVector<f64> {
        let t = kernels::kernel_column(&self.kernel, self.rule.nodes(), x);
        self.c.tr_mul(&t)
    }

    /// Like [`eval_basis`](Self::eval_basis), also reporting whether `x` lies
    /// outside the domain.
    pub fn eval_basis_flagged(&self, x: &Point) -> (DVector<f64>, bool) {
        (self.eval_basis(x), !self.rule.domain().contains(x))
    }

    /// Active basis values at many points, one row per point.
    pub fn eval_matrix(&self, points: &[Point]) -> DMatrix<f64> {
        let nodes = self.rule.nodes();
        let rows: Vec<f64> = points
            .par_iter()
            .flat_map_iter(|x| nodes.iter().map(move |c| self.kernel.eval(x, c)))
            .collect();
        let t = DMatrix::from_row_slice(points.len(), nodes.len(), &rows);
        t * &self.c
    }

    /// `√max(0, φ(0) − Σ_{j≤M} u_j(x)²)`; `M = N` gives the Power Function.
    /// `M` is capped at the number of active basis functions.
    pub fn power_function(&self, x: &Point, m: usize) -> f64 {
        power_from_values(self.kernel.phi0(), self.eval_basis(x).as_slice(), m)
    }

    /// `|Σσⱼ² − φ(0)|Ω|| / (φ(0)|Ω|)`.
    pub fn trace_residual(&self) -> f64 {
        let expected = self.kernel.phi0() * self.rule.domain().measure();
        let total: f64 = self.sigma2.iter().sum();
        ((total - expected) / expected).abs()
    }

    /// `‖C_Uᵀ·A·C_U − I‖_max` over the active columns.
    pub fn gram_residual(&self) -> f64 {
        let ac = &self.kernel_matrix * &self.c;
        let g = self.c.tr_mul(&ac);
        max_abs_diff(&g, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    /// `‖V_Uᵀ·W·V_U − diag(σ²)‖_max` over the active columns.
    pub fn l2w_gram_residual(&self) -> f64 {
        let m = self.n_active;
        let v = self.v.columns(0, m);
        let wv = DMatrix::from_fn(self.len(), m, |i, j| self.rule.weights()[i] * v[(i, j)]);
        let g = v.tr_mul(&wv);
        max_abs_diff(&g, |i, j| if i == j { self.sigma2[i] } else { 0.0 })
    }

    /// `‖A_W − Q·diag(σ²)·Qᵀ‖_max`, with the raw (unclamped) eigenvalues.
    pub fn factorization_residual(&self) -> f64 {
        let n = self.len();
        let scaled_q = DMatrix::from_fn(n, n, |i, j| self.q[(i, j)] * self.raw_eigenvalues[j]);
        let recon = scaled_q * self.q.transpose();
        max_abs_diff(&recon, |i, j| self.scaled.matrix()[(i, j)])
    }

    /// `‖QᵀQ − I‖_max`.
    pub fn orthogonality_residual(&self) -> f64 {
        let g = self.q.tr_mul(&self.q);
        max_abs_diff(&g, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    /// `σ₁² / σ_N²` (infinite when the smallest eigenvalue is clamped to 0).
    pub fn condition_number(&self) -> f64 {
        let last = *self.sigma2.last().expect("basis is never empty");
        if last > 0.0 {
            self.sigma2[0] / last
        } else {
            f64::INFINITY
        }
    }
}

pub(crate) fn power_from_values(phi0: f64, values: &[f64], m: usize) -> f64 {
    let m = m.min(values.len());
    let sum: f64 = values[..m].iter().map(|u| u * u).sum();
    (phi0 - sum).max(0.0).sqrt()
}

fn max_abs_diff<F: Fn(usize, usize) -> f64>(g: &DMatrix<f64>, expected: F) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..g.ncols() {
        for i in 0..g.nrows() {
            worst = worst.max((g[(i, j)] - expected(i, j)).abs());
        }
    }
    worst
}

/// Makes the largest-magnitude entry (first one on ties) positive.
fn fix_sign(col: &mut [f64]) {
    let mut best = 0;
    for (i, v) in col.iter().enumerate() {
        if v.abs() > col[best].abs() {
            best = i;
        }
    }
    if col[best] < 0.0 {
        col.iter_mut().for_each(|v| *v = -*v);
    }
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}
