//! Experiment configuration: flat `key = value` files whose keys match the
//! command-line flags.

use std::path::PathBuf;
use std::str::FromStr;

use crate::cubature::RuleKind;
use crate::error::{Result, WsvdError};
use crate::geometry::Domain;
use crate::kernels::{Kernel, KernelFamily};

use super::testfn::TestFunction;

pub const KEYS: [&str; 14] = [
    "kernel",
    "eps",
    "eps-grid",
    "domain",
    "basis",
    "rule",
    "points",
    "n",
    "m",
    "truncate-tol",
    "testfn",
    "grid",
    "out",
    "timing",
];

/// Which basis the rows are computed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// Weighted SVD basis on cubature nodes.
    Wsvd,
    /// Translates of the kernel on a uniform grid or Halton points.
    Standard,
}

impl FromStr for BasisKind {
    type Err = WsvdError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wsvd" => Ok(BasisKind::Wsvd),
            "standard" => Ok(BasisKind::Standard),
            other => Err(WsvdError::InvalidConfig(format!("unknown basis `{other}`"))),
        }
    }
}

/// Point sets for the translate basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    Grid,
    Halton,
}

impl FromStr for PointKind {
    type Err = WsvdError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(PointKind::Grid),
            "halton" => Ok(PointKind::Halton),
            other => Err(WsvdError::InvalidConfig(format!("unknown point set `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TruncationPlan {
    /// The full interpolant.
    Full,
    /// One row per order `M`.
    Orders(Vec<usize>),
    /// Keep singular values `σⱼ ≥ τ`.
    SigmaTol(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kernel: KernelFamily,
    pub eps: Vec<f64>,
    pub eps_grid: Option<Vec<f64>>,
    pub domain: Domain,
    pub basis: BasisKind,
    pub rule: RuleKind,
    pub points: PointKind,
    pub n: Vec<usize>,
    pub truncation: TruncationPlan,
    pub testfn: TestFunction,
    pub grid: usize,
    pub out: Option<PathBuf>,
    /// Measure wall-clock time per row; when off `runtime_ms` is written as 0
    /// so that repeated runs produce identical files.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            kernel: KernelFamily::Gaussian,
            eps: vec![4.0],
            eps_grid: None,
            domain: Domain::UnitSquare,
            basis: BasisKind::Wsvd,
            rule: RuleKind::GaussLegendre,
            points: PointKind::Grid,
            n: vec![400],
            truncation: TruncationPlan::Full,
            testfn: TestFunction::Franke,
            grid: 64,
            out: None,
            timing: false,
        }
    }
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| WsvdError::InvalidConfig(format!("line {}: expected `key = value`", lineno + 1)))?;
        pairs.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

/// A comma-separated list or an inclusive `start:step:stop` range.
pub fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    let bad = || WsvdError::InvalidConfig(format!("cannot parse number list `{s}`"));
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    match parts.as_slice() {
        [start, step, stop] => {
            let start: f64 = start.parse().map_err(|_| bad())?;
            let step: f64 = step.parse().map_err(|_| bad())?;
            let stop: f64 = stop.parse().map_err(|_| bad())?;
            if step.is_nan() || step <= 0.0 || stop < start {
                return Err(bad());
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|k| start + step * k as f64).collect())
        }
        [single] => single
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| bad()))
            .collect(),
        _ => Err(bad()),
    }
}

pub fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    let bad = || WsvdError::InvalidConfig(format!("cannot parse count list `{s}`"));
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    match parts.as_slice() {
        [start, step, stop] => {
            let start: usize = start.parse().map_err(|_| bad())?;
            let step: usize = step.parse().map_err(|_| bad())?;
            let stop: usize = stop.parse().map_err(|_| bad())?;
            if step == 0 || stop < start {
                return Err(bad());
            }
            Ok((start..=stop).step_by(step).collect())
        }
        [single] => single
            .split(',')
            .map(|v| v.trim().parse::<usize>().map_err(|_| bad()))
            .collect(),
        _ => Err(bad()),
    }
}

fn parse_bool(s: &str) -> Result<bool> {
    match s {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        other => Err(WsvdError::InvalidConfig(format!("expected a boolean, got `{other}`"))),
    }
}

impl ExperimentConfig {
    /// Builds a config from defaults overridden by `pairs` in order (later
    /// keys win).
    pub fn from_pairs<K: AsRef<str>, V: AsRef<str>>(pairs: &[(K, V)]) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let mut rule: Option<RuleKind> = None;
        let mut orders: Option<Vec<usize>> = None;
        let mut tol: Option<f64> = None;
        for (key, value) in pairs {
            let (key, value) = (key.as_ref(), value.as_ref());
            let invalid = |e: WsvdError| match e {
                WsvdError::InvalidConfig(msg) => WsvdError::InvalidConfig(msg),
                other => WsvdError::InvalidConfig(format!("{key}: {other}")),
            };
            match key {
                "kernel" => cfg.kernel = value.parse().map_err(invalid)?,
                "eps" => cfg.eps = parse_f64_list(value)?,
                "eps-grid" => cfg.eps_grid = Some(parse_f64_list(value)?),
                "domain" => cfg.domain = value.parse().map_err(invalid)?,
                "basis" => cfg.basis = value.parse()?,
                "rule" => rule = Some(value.parse().map_err(invalid)?),
                "points" => cfg.points = value.parse()?,
                "n" => cfg.n = parse_usize_list(value)?,
                "m" => orders = Some(parse_usize_list(value)?),
                "truncate-tol" => {
                    tol = Some(
                        value
                            .parse()
                            .map_err(|_| WsvdError::InvalidConfig(format!("truncate-tol: cannot parse `{value}`")))?,
                    )
                }
                "testfn" => cfg.testfn = value.parse().map_err(invalid)?,
                "grid" => {
                    cfg.grid = value
                        .parse()
                        .map_err(|_| WsvdError::InvalidConfig(format!("grid: cannot parse `{value}`")))?
                }
                "out" => cfg.out = Some(PathBuf::from(value)),
                "timing" => cfg.timing = parse_bool(value)?,
                other => return Err(WsvdError::InvalidConfig(format!("unknown key `{other}`"))),
            }
        }
        cfg.rule = rule.unwrap_or_else(|| RuleKind::for_domain(&cfg.domain));
        cfg.truncation = match (orders, tol) {
            (Some(_), Some(_)) => {
                return Err(WsvdError::InvalidConfig(
                    "`m` and `truncate-tol` are mutually exclusive".into(),
                ))
            }
            (Some(m), None) => TruncationPlan::Orders(m),
            (None, Some(t)) => TruncationPlan::SigmaTol(t),
            (None, None) => TruncationPlan::Full,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        ExperimentConfig::from_pairs(&parse_pairs(text)?)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(WsvdError::InvalidConfig(msg));
        if self.eps.is_empty() {
            return invalid("at least one shape parameter is required".into());
        }
        for &e in self.eps.iter().chain(self.eps_grid.iter().flatten()) {
            Kernel::new(self.kernel, e).map_err(|e| WsvdError::InvalidConfig(e.to_string()))?;
        }
        Kernel::new(self.kernel, self.eps[0])?.check_dim(2)?;
        if self.n.is_empty() || self.n.contains(&0) {
            return invalid("node budgets must be >= 1".into());
        }
        if self.grid == 0 {
            return invalid("grid resolution must be >= 1".into());
        }
        if self.basis == BasisKind::Wsvd {
            match (self.rule, self.domain) {
                (RuleKind::GaussLegendre, Domain::UnitSquare) => {}
                (RuleKind::GaussLegendre, d) => return invalid(format!("rule `gl` needs the square, got `{d}`")),
                (RuleKind::Polar, Domain::UnitSquare) => {
                    return invalid("rule `polar` does not support the square".into())
                }
                (RuleKind::Polar, _) => {}
            }
        }
        if let TruncationPlan::SigmaTol(t) = self.truncation {
            if t.is_nan() || t <= 0.0 {
                return invalid(format!("truncate-tol must be positive, got {t}"));
            }
        }
        Ok(())
    }
}
