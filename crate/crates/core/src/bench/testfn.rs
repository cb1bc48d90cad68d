use std::fmt;
use std::str::FromStr;

use crate::error::{Result, WsvdError};
use crate::geometry::Point;
use crate::kernels::distance;

/// Bivariate test functions used in the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunction {
    /// Franke's four-term exponential function.
    Franke,
    /// `cos(20(x + y))`.
    Oscillatory,
    /// `e^{|x − y|} − 1`, with a derivative jump along the diagonal.
    SingularExp,
    /// `−2Φ₄(·, (½, ½)) + Φ₄(·, (0, 0)) + 3Φ₄(·, (0.7, 0.7))` with `Φ₄` the
    /// Gaussian at shape parameter 4, an element of its native space.
    NativeGauss,
}

/// Centers and coefficients of [`TestFunction::NativeGauss`].
pub const NATIVE_GAUSS_TERMS: [(f64, Point); 3] = [(-2.0, [0.5, 0.5]), (1.0, [0.0, 0.0]), (3.0, [0.7, 0.7])];

pub const NATIVE_GAUSS_EPSILON: f64 = 4.0;

impl TestFunction {
    pub const ALL: [TestFunction; 4] = [
        TestFunction::Franke,
        TestFunction::Oscillatory,
        TestFunction::SingularExp,
        TestFunction::NativeGauss,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TestFunction::Franke => "franke",
            TestFunction::Oscillatory => "oscillatory",
            TestFunction::SingularExp => "singular",
            TestFunction::NativeGauss => "native",
        }
    }

    pub fn eval(self, p: &Point) -> f64 {
        let [x, y] = *p;
        match self {
            TestFunction::Franke => {
                let (u, v) = (9.0 * x, 9.0 * y);
                0.75 * (-((u - 2.0).powi(2) + (v - 2.0).powi(2)) / 4.0).exp()
                    + 0.75 * (-(u + 1.0).powi(2) / 49.0 - (v + 1.0) / 10.0).exp()
                    + 0.5 * (-((u - 7.0).powi(2) + (v - 3.0).powi(2)) / 4.0).exp()
                    - 0.2 * (-(u - 4.0).powi(2) - (v - 7.0).powi(2)).exp()
            }
            TestFunction::Oscillatory => (20.0 * (x + y)).cos(),
            TestFunction::SingularExp => (x - y).abs().exp() - 1.0,
            TestFunction::NativeGauss => NATIVE_GAUSS_TERMS
                .iter()
                .map(|(c, center)| {
                    let r = NATIVE_GAUSS_EPSILON * distance(p, center);
                    c * (-r * r).exp()
                })
                .sum(),
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestFunction {
    type Err = WsvdError;

    fn from_str(s: &str) -> Result<Self> {
        TestFunction::ALL
            .iter()
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| WsvdError::InvalidArgument(format!("unknown test function `{s}`")))
    }
}
