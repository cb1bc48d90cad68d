//! Interpolants and truncated weighted least-squares approximants in a
//! weighted SVD basis, the translate-basis interpolant, and leave-one-out
//! selection of the shape parameter.

use std::sync::Arc;

use nalgebra::{Cholesky, DMatrix, DVector, LU};
use rayon::prelude::*;

use crate::basis::WsvdBasis;
use crate::error::{Result, WsvdError};
use crate::geometry::Point;
use crate::kernels::{self, Kernel, KernelFamily};

/// How many leading basis functions an approximant keeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    /// Keep exactly `M` terms (capped at the active basis size).
    Order(usize),
    /// Keep every term whose singular value `σⱼ = √σⱼ²` is at least `τ`.
    SigmaTol(f64),
}

/// `Λ_M[f] = Σ_{j≤M} (f, u_j)_Φ · u_j`; with `M` equal to the active basis
/// size this is the interpolant `P_X[f]`.
#[derive(Debug, Clone)]
pub struct Approximant {
    basis: Arc<WsvdBasis>,
    coeffs: DVector<f64>,
    m_active: usize,
    truncation_tol: Option<f64>,
}

impl Approximant {
    /// Projects samples `f(X)` onto the active basis:
    /// `(f, u_j)_Φ = (1/σⱼ²) Σᵢ wᵢ u_j(xᵢ) f(xᵢ)`.
    pub fn project(basis: Arc<WsvdBasis>, samples: &[f64]) -> Result<Self> {
        let n = basis.len();
        if samples.len() != n {
            return Err(WsvdError::LengthMismatch {
                expected: n,
                got: samples.len(),
            });
        }
        let m = basis.n_active();
        let v = basis.v_matrix();
        let w = basis.weights();
        let sigma2 = basis.sigma2();
        let coeffs = DVector::from_fn(m, |j, _| {
            let l2w: f64 = (0..n).map(|i| w[i] * v[(i, j)] * samples[i]).sum();
            l2w / sigma2[j]
        });
        Ok(Approximant {
            basis,
            coeffs,
            m_active: m,
            truncation_tol: None,
        })
    }

    /// Samples `f` at the basis nodes and projects.
    pub fn interpolate<F: Fn(&Point) -> f64>(basis: Arc<WsvdBasis>, f: F) -> Result<Self> {
        let samples: Vec<f64> = basis.nodes().iter().map(f).collect();
        Approximant::project(basis, &samples)
    }

    /// Same coefficients, different number of active terms.
    pub fn truncate(&self, policy: Truncation) -> Result<Self> {
        let available = self.coeffs.len();
        let (m, tol) = match policy {
            Truncation::Order(m) => (m.min(available), None),
            Truncation::SigmaTol(tau) => {
                if tau.is_nan() || tau <= 0.0 {
                    return Err(WsvdError::InvalidArgument(format!(
                        "truncation tolerance must be positive, got {tau}"
                    )));
                }
                let m = self.basis.sigma2()[..available]
                    .iter()
                    .take_while(|s| s.sqrt() >= tau)
                    .count();
                (m, Some(tau))
            }
        };
        Ok(Approximant {
            basis: Arc::clone(&self.basis),
            coeffs: self.coeffs.clone(),
            m_active: m,
            truncation_tol: tol,
        })
    }

    pub fn basis(&self) -> &Arc<WsvdBasis> {
        &self.basis
    }

    /// All projected coefficients, including those beyond `m_active`.
    pub fn coeffs(&self) -> &DVector<f64> {
        &self.coeffs
    }

    pub fn m_active(&self) -> usize {
        self.m_active
    }

    pub fn truncation_tol(&self) -> Option<f64> {
        self.truncation_tol
    }

    /// `Σ_{j≤M} coeffs[j] · u_j(x)`.
    pub fn eval(&self, x: &Point) -> f64 {
        let u = self.basis.eval_basis(x);
        self.eval_from_basis_values(u.as_slice())
    }

    /// Evaluation from precomputed basis values `[u_1(x), …]`.
    pub fn eval_from_basis_values(&self, u: &[f64]) -> f64 {
        self.coeffs.iter().zip(u).take(self.m_active).map(|(c, u)| c * u).sum()
    }

    pub fn eval_many(&self, points: &[Point]) -> Vec<f64> {
        let u = self.basis.eval_matrix(points);
        (0..points.len())
            .map(|i| (0..self.m_active).map(|j| self.coeffs[j] * u[(i, j)]).sum())
            .collect()
    }

    /// `‖Λ_M f‖_Φ² = Σ_{j≤M} coeffs[j]²`.
    pub fn native_norm_squared(&self) -> f64 {
        self.coeffs.iter().take(self.m_active).map(|c| c * c).sum()
    }

    /// `‖f − Λ_M f‖_ℓ₂ʷ` over the nodes for the given samples `f(X)`.
    pub fn l2w_residual(&self, samples: &[f64]) -> Result<f64> {
        let n = self.basis.len();
        if samples.len() != n {
            return Err(WsvdError::LengthMismatch {
                expected: n,
                got: samples.len(),
            });
        }
        let v = self.basis.v_matrix();
        let w = self.basis.weights();
        let sum: f64 = (0..n)
            .map(|i| {
                let approx: f64 = (0..self.m_active).map(|j| self.coeffs[j] * v[(i, j)]).sum();
                let r = samples[i] - approx;
                w[i] * r * r
            })
            .sum();
        Ok(sum.sqrt())
    }
}

/// `√(Σ_{j>M} σⱼ²)`, the factor in `‖f − Λ_M f‖_ℓ₂ʷ ≤ (Σ_{j>M} σⱼ²)^½ ‖f‖_Φ`.
pub fn l2w_error_bound(basis: &WsvdBasis, m: usize) -> f64 {
    let m = m.min(basis.len());
    basis.sigma2()[m..].iter().sum::<f64>().sqrt()
}

/// `P_X[f] = Σ αⱼ Φ(·, xⱼ)` with `A·α = f(X)`.
#[derive(Debug, Clone)]
pub struct StandardInterpolant {
    kernel: Kernel,
    centers: Vec<Point>,
    alpha: DVector<f64>,
}

impl StandardInterpolant {
    pub fn new(kernel: Kernel, centers: &[Point], samples: &[f64]) -> Result<Self> {
        if samples.len() != centers.len() {
            return Err(WsvdError::LengthMismatch {
                expected: centers.len(),
                got: samples.len(),
            });
        }
        let a = kernels::kernel_matrix(&kernel, centers)?.into_entries();
        let alpha = solve_spd(a, DVector::from_column_slice(samples))?;
        Ok(StandardInterpolant {
            kernel,
            centers: centers.to_vec(),
            alpha,
        })
    }

    pub fn alpha(&self) -> &DVector<f64> {
        &self.alpha
    }

    pub fn centers(&self) -> &[Point] {
        &self.centers
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    /// `T(x)·α`.
    pub fn eval(&self, x: &Point) -> f64 {
        self.centers
            .iter()
            .zip(self.alpha.iter())
            .map(|(c, a)| a * self.kernel.eval(x, c))
            .sum()
    }

    pub fn eval_many(&self, points: &[Point]) -> Vec<f64> {
        points.par_iter().map(|x| self.eval(x)).collect()
    }
}

/// Cholesky solve with a partially pivoted LU fallback.
fn solve_spd(a: DMatrix<f64>, b: DVector<f64>) -> Result<DVector<f64>> {
    if let Some(chol) = Cholesky::new(a.clone()) {
        let x = chol.solve(&b);
        if x.iter().all(|v| v.is_finite()) {
            return Ok(x);
        }
    }
    let lu = LU::new(a);
    let u = lu.u();
    let diag: Vec<f64> = u.diagonal().iter().map(|v| v.abs()).collect();
    let max = diag.iter().copied().fold(0.0, f64::max);
    let min = diag.iter().copied().fold(f64::INFINITY, f64::min);
    let condition_estimate = if min > 0.0 { max / min } else { f64::INFINITY };
    match lu.solve(&b) {
        Some(x) if x.iter().all(|v| v.is_finite()) => Ok(x),
        _ => Err(WsvdError::SingularMatrix { condition_estimate }),
    }
}

/// Leave-one-out scores per candidate shape parameter, sorted by `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct LooResult {
    pub best_epsilon: f64,
    /// `(ε, max_i |P_X[f](xᵢ) − P[f]ᵢ(xᵢ)|)`; failed candidates score `+∞`.
    pub scores: Vec<(f64, f64)>,
}

/// Picks `ε` minimising the worst leave-one-out discrepancy of the
/// translate-basis interpolant (smallest `ε` on ties).
pub fn loo_optimize(family: KernelFamily, candidates: &[f64], centers: &[Point], samples: &[f64]) -> Result<LooResult> {
    if centers.len() < 2 {
        return Err(WsvdError::TooFewPoints {
            required: 2,
            got: centers.len(),
        });
    }
    if candidates.is_empty() {
        return Err(WsvdError::InvalidArgument("empty shape parameter list".into()));
    }
    if samples.len() != centers.len() {
        return Err(WsvdError::LengthMismatch {
            expected: centers.len(),
            got: samples.len(),
        });
    }
    kernels::check_distinct(centers)?;
    let mut eps: Vec<f64> = candidates.to_vec();
    for &e in &eps {
        Kernel::new(family, e)?;
    }
    eps.sort_by(f64::total_cmp);

    let scores: Vec<(f64, f64)> = eps
        .par_iter()
        .map(|&e| {
            let kernel = Kernel::new(family, e).expect("validated above");
            let score = loo_score(&kernel, centers, samples).unwrap_or(f64::INFINITY);
            (e, score)
        })
        .collect();

    let mut best = scores[0];
    for &(e, s) in &scores[1..] {
        if s < best.1 {
            best = (e, s);
        }
    }
    Ok(LooResult {
        best_epsilon: best.0,
        scores,
    })
}

/// `max_i |P_X[f](xᵢ) − P[f]ᵢ(xᵢ)|`, with one factorisation per left-out node.
pub fn loo_score(kernel: &Kernel, centers: &[Point], samples: &[f64]) -> Result<f64> {
    let n = centers.len();
    let a = kernels::assemble(kernel, centers);
    let b = DVector::from_column_slice(samples);
    let alpha = solve_spd(a.clone(), b.clone())?;
    let full = &a * &alpha;
    let mut worst = 0.0f64;
    for i in 0..n {
        let keep: Vec<usize> = (0..n).filter(|&k| k != i).collect();
        let sub = a.select_rows(&keep).select_columns(&keep);
        let rhs = b.select_rows(&keep);
        let alpha_i = solve_spd(sub, rhs)?;
        let reduced: f64 = keep.iter().zip(alpha_i.iter()).map(|(&k, c)| a[(i, k)] * c).sum();
        let diff = (full[i] - reduced).abs();
        if !diff.is_finite() {
            return Err(WsvdError::SingularMatrix {
                condition_estimate: f64::INFINITY,
            });
        }
        worst = worst.max(diff);
    }
    Ok(worst)
}
