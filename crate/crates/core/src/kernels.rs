//! Radial positive definite kernels `Φ(x, y) = φ(ε‖x − y‖₂)` and kernel
//! matrix assembly.
//!
//! Profiles are implemented exactly as tabulated, without normalising
//! `φ(0)` to one: the Matérn profiles start at 1, 3 and 15, the Laguerre
//! Gaussians at 2 and 3 and the Wendland `W21` profile at `1/20`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Result, WsvdError};

/// Two points closer than this are treated as duplicates.
pub const DUPLICATE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelFamily {
    Gaussian,
    Imq,
    GeneralizedImq,
    Iq,
    Matern1,
    Matern2,
    Matern3,
    LaguerreGauss1,
    LaguerreGauss2,
    LinGenImq,
    Wendland20,
    Wendland21,
}

/// Space dimensions for which a profile is known to be positive definite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidDim {
    AnyDim,
    Dim2,
}

impl ValidDim {
    pub fn admits(self, dim: usize) -> bool {
        match self {
            ValidDim::AnyDim => dim >= 1,
            ValidDim::Dim2 => dim == 2,
        }
    }
}

impl KernelFamily {
    pub const ALL: [KernelFamily; 12] = [
        KernelFamily::Gaussian,
        KernelFamily::Imq,
        KernelFamily::GeneralizedImq,
        KernelFamily::Iq,
        KernelFamily::Matern1,
        KernelFamily::Matern2,
        KernelFamily::Matern3,
        KernelFamily::LaguerreGauss1,
        KernelFamily::LaguerreGauss2,
        KernelFamily::LinGenImq,
        KernelFamily::Wendland20,
        KernelFamily::Wendland21,
    ];

    /// Short name used in configuration files and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            KernelFamily::Gaussian => "gauss",
            KernelFamily::Imq => "imq",
            KernelFamily::GeneralizedImq => "gimq",
            KernelFamily::Iq => "iq",
            KernelFamily::Matern1 => "mat1",
            KernelFamily::Matern2 => "mat2",
            KernelFamily::Matern3 => "mat3",
            KernelFamily::LaguerreGauss1 => "lg1",
            KernelFamily::LaguerreGauss2 => "lg2",
            KernelFamily::LinGenImq => "lgimq",
            KernelFamily::Wendland20 => "w20",
            KernelFamily::Wendland21 => "w21",
        }
    }

    pub fn valid_dim(self) -> ValidDim {
        match self {
            KernelFamily::LaguerreGauss1
            | KernelFamily::LaguerreGauss2
            | KernelFamily::LinGenImq
            | KernelFamily::Wendland20
            | KernelFamily::Wendland21 => ValidDim::Dim2,
            _ => ValidDim::AnyDim,
        }
    }

    pub fn is_compactly_supported(self) -> bool {
        matches!(self, KernelFamily::Wendland20 | KernelFamily::Wendland21)
    }

    /// The unscaled profile evaluated at `t = εr ≥ 0`.
    pub fn profile(self, t: f64) -> f64 {
        let s = t * t;
        match self {
            KernelFamily::Gaussian => (-s).exp(),
            KernelFamily::Imq => 1.0 / (1.0 + s).sqrt(),
            KernelFamily::GeneralizedImq => {
                let d = 1.0 + s;
                1.0 / (d * d)
            }
            // Tabulated as 1/(1 + εr), not the usual 1/(1 + (εr)²).
            KernelFamily::Iq => 1.0 / (1.0 + t),
            KernelFamily::Matern1 => (-t).exp() * (1.0 + t),
            KernelFamily::Matern2 => (-t).exp() * (3.0 + 3.0 * t + s),
            KernelFamily::Matern3 => (-t).exp() * (15.0 + 15.0 * t + 6.0 * s + s * t),
            KernelFamily::LaguerreGauss1 => (-s).exp() * (2.0 - s),
            KernelFamily::LaguerreGauss2 => (-s).exp() * (3.0 - 3.0 * s + 0.5 * s * s),
            KernelFamily::LinGenImq => {
                let d = 1.0 + s;
                let d2 = d * d;
                (2.0 - s) / (d2 * d2)
            }
            KernelFamily::Wendland20 => {
                if t >= 1.0 {
                    0.0
                } else {
                    let u = 1.0 - t;
                    u * u
                }
            }
            KernelFamily::Wendland21 => {
                if t >= 1.0 {
                    0.0
                } else {
                    let u = 1.0 - t;
                    let u2 = u * u;
                    u2 * u2 * (3.0 * t + 1.0) / 20.0
                }
            }
        }
    }
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelFamily {
    type Err = WsvdError;

    fn from_str(s: &str) -> Result<Self> {
        KernelFamily::ALL
            .iter()
            .copied()
            .find(|family| family.name() == s)
            .ok_or_else(|| WsvdError::InvalidArgument(format!("unknown kernel `{s}`")))
    }
}

/// A radial kernel: a profile family together with its shape parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    family: KernelFamily,
    epsilon: f64,
}

impl Kernel {
    pub fn new(family: KernelFamily, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(WsvdError::InvalidArgument(format!(
                "shape parameter must be positive and finite, got {epsilon}"
            )));
        }
        Ok(Kernel { family, epsilon })
    }

    pub fn from_name(name: &str, epsilon: f64) -> Result<Self> {
        Kernel::new(name.parse()?, epsilon)
    }

    /// Rejects families that are not positive definite in `dim` dimensions.
    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.family.valid_dim().admits(dim) {
            Ok(())
        } else {
            Err(WsvdError::InvalidConfig(format!(
                "kernel `{}` is only positive definite in two dimensions, requested {dim}",
                self.family
            )))
        }
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn valid_dim(&self) -> ValidDim {
        self.family.valid_dim()
    }

    /// `φ(εr)`.
    #[inline]
    pub fn phi(&self, r: f64) -> f64 {
        debug_assert!(r >= 0.0);
        self.family.profile(self.epsilon * r)
    }

    /// `φ(0)`, the constant diagonal of every kernel matrix.
    pub fn phi0(&self) -> f64 {
        self.family.profile(0.0)
    }

    /// `Φ(x, y)`.
    #[inline]
    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        self.phi(distance(x, y))
    }
}

#[inline]
pub fn distance(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Returns the first pair of points closer than [`DUPLICATE_TOLERANCE`].
pub fn check_distinct<P: AsRef<[f64]>>(points: &[P]) -> Result<()> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = distance(points[i].as_ref(), points[j].as_ref());
            if d < DUPLICATE_TOLERANCE {
                return Err(WsvdError::DuplicatePoints {
                    first: i,
                    second: j,
                    distance: d,
                });
            }
        }
    }
    Ok(())
}

/// Symmetric matrix of pairwise kernel values on a set of centers.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    entries: DMatrix<f64>,
    centers: Vec<Vec<f64>>,
}

impl KernelMatrix {
    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }
}

/// Assembles `A[i][j] = Φ(xᵢ, xⱼ)`, rejecting near-duplicate centers.
pub fn kernel_matrix<P: AsRef<[f64]>>(kernel: &Kernel, centers: &[P]) -> Result<KernelMatrix> {
    check_distinct(centers)?;
    Ok(KernelMatrix {
        entries: assemble(kernel, centers),
        centers: centers.iter().map(|p| p.as_ref().to_vec()).collect(),
    })
}

/// Kernel matrix assembly without the duplicate check. Each off-diagonal
/// value is computed once and mirrored, so the result is exactly symmetric.
pub(crate) fn assemble<P: AsRef<[f64]>>(kernel: &Kernel, centers: &[P]) -> DMatrix<f64> {
    let n = centers.len();
    let phi0 = kernel.phi0();
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = phi0;
        for j in i + 1..n {
            let v = kernel.eval(centers[i].as_ref(), centers[j].as_ref());
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    a
}

/// The evaluation vector `T(x) = [Φ(x, x₁), …, Φ(x, x_N)]`.
pub fn kernel_column<P: AsRef<[f64]>>(kernel: &Kernel, centers: &[P], x: &[f64]) -> DVector<f64> {
    DVector::from_iterator(centers.len(), centers.iter().map(|c| kernel.eval(x, c.as_ref())))
}

/// Kernel values between evaluation points (rows) and centers (columns).
pub fn kernel_block<P: AsRef<[f64]>, Q: AsRef<[f64]>>(kernel: &Kernel, points: &[P], centers: &[Q]) -> DMatrix<f64> {
    DMatrix::from_fn(points.len(), centers.len(), |i, j| {
        kernel.eval(points[i].as_ref(), centers[j].as_ref())
    })
}
