//! Positive-weight cubature rules exact for constants.
//!
//! The square uses a tensor Gauss–Legendre rule. The disk and the cut disk
//! use the product of Gauss–Legendre in `s = r²` (so the radial weights carry
//! the area element) with an equal-weight midpoint rule in the angle. The lens is split along `x = 0` into two circular segments, each
//! parametrised in polar coordinates about the center of the circle it
//! belongs to: Gauss–Legendre in the angle and in `s` between the chord and
//! the arc.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Result, WsvdError};
use crate::geometry::{Domain, Point, LENS_OFFSET};

/// Relative tolerance on `Σ wⱼ = |Ω|`.
pub const MEASURE_TOLERANCE: f64 = 1e-12;

/// Weights below this fraction of `|Ω|` are rejected.
pub const MIN_RELATIVE_WEIGHT: f64 = 1e-15;

/// The `n`-point Gauss–Legendre rule on `[a, b]`, nodes ascending.
pub fn gauss_legendre_1d(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "gauss_legendre_1d needs at least one node");
    assert!(a < b, "gauss_legendre_1d needs a < b");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let half_len = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Newton on P_n from the Tricomi initial guess; root i counts down from 1.
        let mut t = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, t);
            dp = d;
            let step = p / d;
            t -= step;
            if step.abs() <= 1e-16 * t.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, t);
        dp = if d != 0.0 { d } else { dp };
        let weight = 2.0 / ((1.0 - t * t) * dp * dp);
        // Roots come in ± pairs; the middle one of an odd rule is exactly 0.
        let t = if 2 * i + 1 == n { 0.0 } else { t };
        x[i] = mid - half_len * t;
        x[n - 1 - i] = mid + half_len * t;
        w[i] = half_len * weight;
        w[n - 1 - i] = half_len * weight;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, t: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = t;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let derivative = n as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, derivative)
}

/// Nodes in the domain paired with positive weights summing to `|Ω|`.
#[derive(Debug, Clone, PartialEq)]
pub struct CubatureRule {
    nodes: Vec<Point>,
    weights: Vec<f64>,
    domain: Domain,
}

impl CubatureRule {
    /// Validates positivity, membership and exactness on constants.
    pub fn new(nodes: Vec<Point>, weights: Vec<f64>, domain: Domain) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(WsvdError::LengthMismatch {
                expected: nodes.len(),
                got: weights.len(),
            });
        }
        if nodes.is_empty() {
            return Err(WsvdError::DegenerateRule("rule has no nodes".into()));
        }
        if let Some(j) = weights.iter().position(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(WsvdError::DegenerateRule(format!(
                "weight {j} is not positive ({})",
                weights[j]
            )));
        }
        if let Some(j) = nodes.iter().position(|p| !domain.contains(p)) {
            return Err(WsvdError::DegenerateRule(format!(
                "node {j} = {:?} lies outside the {domain}",
                nodes[j]
            )));
        }
        let total: f64 = weights.iter().sum();
        let measure = domain.measure();
        if ((total - measure) / measure).abs() > MEASURE_TOLERANCE {
            return Err(WsvdError::DegenerateRule(format!(
                "weights sum to {total}, domain measure is {measure}"
            )));
        }
        Ok(CubatureRule { nodes, weights, domain })
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σⱼ wⱼ f(xⱼ)`.
    pub fn integrate<F: Fn(&Point) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }

    /// Applies a permutation to the node order (`order[k]` is the old index
    /// of the new `k`-th node).
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.len() {
            return Err(WsvdError::LengthMismatch {
                expected: self.len(),
                got: order.len(),
            });
        }
        CubatureRule::new(
            order.iter().map(|&i| self.nodes[i]).collect(),
            order.iter().map(|&i| self.weights[i]).collect(),
            self.domain,
        )
    }
}

/// Tensor Gauss–Legendre rule on `[0, 1]²` with `m²` nodes.
pub fn square_rule(m: usize) -> Result<CubatureRule> {
    if m == 0 {
        return Err(WsvdError::InvalidArgument("square_rule needs m >= 1".into()));
    }
    let (x, w) = gauss_legendre_1d(m, 0.0, 1.0);
    let mut nodes = Vec::with_capacity(m * m);
    let mut weights = Vec::with_capacity(m * m);
    for (yj, wj) in x.iter().zip(&w) {
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push([*xi, *yj]);
            weights.push(wi * wj);
        }
    }
    CubatureRule::new(nodes, weights, Domain::UnitSquare)
}

/// Polar rule of level `m` on the disk, the cut disk or the lens.
pub fn polar_rule(domain: &Domain, m: usize) -> Result<CubatureRule> {
    if m == 0 {
        return Err(WsvdError::InvalidArgument("polar_rule needs m >= 1".into()));
    }
    let (nodes, weights) = match *domain {
        Domain::UnitSquare => return Err(WsvdError::UnsupportedDomain(domain.name().into())),
        Domain::Disk { center, radius } => sector_nodes(center, radius, 0.0, 2.0 * PI, m),
        Domain::CutDisk => sector_nodes([0.0, 0.0], 1.0, -0.5 * PI, 1.5 * PI, m),
        Domain::Lens => lens_nodes(m),
    };
    CubatureRule::new(nodes, weights, *domain)
}

/// `m` rings at Gauss–Legendre nodes in `r²` times `≈ m·extent/π` midpoint
/// angles (at least 4).
fn sector_nodes(center: Point, radius: f64, start: f64, extent: f64, m: usize) -> (Vec<Point>, Vec<f64>) {
    let (s, ws) = gauss_legendre_1d(m, 0.0, radius * radius);
    let count = ((extent / PI * m as f64).round() as usize).max(4);
    let step = extent / count as f64;
    let angles: Vec<(f64, f64)> = (0..count)
        .map(|j| (start + (j as f64 + 0.5) * step).sin_cos())
        .collect();
    let mut nodes = Vec::with_capacity(m * count);
    let mut weights = Vec::with_capacity(m * count);
    for (sk, wk) in s.iter().zip(&ws) {
        let r = sk.sqrt();
        let w = 0.5 * wk * step;
        for (sin, cos) in &angles {
            nodes.push([center[0] + r * cos, center[1] + r * sin]);
            weights.push(w);
        }
    }
    (nodes, weights)
}

fn lens_nodes(m: usize) -> (Vec<Point>, Vec<f64>) {
    let depth = 1.0 - LENS_OFFSET;
    let n_theta = ((4.5 * m as f64).round() as usize).max(16);
    let (theta, w_theta) = gauss_legendre_1d(n_theta, -FRAC_PI_4, FRAC_PI_4);
    // Right half: circle centered at (-offset, 0), between the chord x = 0 and the arc.
    let mut right = Vec::new();
    let mut weights = Vec::new();
    for (t, wt) in theta.iter().zip(&w_theta) {
        let chord = LENS_OFFSET / t.cos();
        let count = ((m as f64 * (1.0 - chord) / depth).round() as usize).max(1);
        let (s, ws) = gauss_legendre_1d(count, chord * chord, 1.0);
        for (sk, wk) in s.iter().zip(&ws) {
            let r = sk.sqrt();
            right.push([-LENS_OFFSET + r * t.cos(), r * t.sin()]);
            weights.push(0.5 * wt * wk);
        }
    }
    let mut nodes = right.clone();
    nodes.extend(right.iter().map(|p| [-p[0], p[1]]));
    let mirrored = weights.clone();
    weights.extend(mirrored);
    (nodes, weights)
}

/// Which family of rules to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    GaussLegendre,
    Polar,
}

impl RuleKind {
    pub fn name(self) -> &'static str {
        match self {
            RuleKind::GaussLegendre => "gl",
            RuleKind::Polar => "polar",
        }
    }

    /// The default rule for a domain.
    pub fn for_domain(domain: &Domain) -> RuleKind {
        match domain {
            Domain::UnitSquare => RuleKind::GaussLegendre,
            _ => RuleKind::Polar,
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleKind {
    type Err = WsvdError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gl" => Ok(RuleKind::GaussLegendre),
            "polar" => Ok(RuleKind::Polar),
            other => Err(WsvdError::InvalidArgument(format!("unknown rule `{other}`"))),
        }
    }
}

/// Builds the rule of the given kind at level `m`, moving to the next level
/// while any weight is below `MIN_RELATIVE_WEIGHT · |Ω|`.
pub fn rule_at_level(domain: &Domain, kind: RuleKind, m: usize) -> Result<CubatureRule> {
    let threshold = MIN_RELATIVE_WEIGHT * domain.measure();
    let mut level = m;
    loop {
        let rule = match kind {
            RuleKind::GaussLegendre => match domain {
                Domain::UnitSquare => square_rule(level)?,
                other => return Err(WsvdError::UnsupportedDomain(other.name().into())),
            },
            RuleKind::Polar => polar_rule(domain, level)?,
        };
        if rule.weights().iter().all(|&w| w >= threshold) {
            return Ok(rule);
        }
        if level > m + 8 {
            return Err(WsvdError::DegenerateRule(format!(
                "weights below {threshold:e} at levels {m}..={level}"
            )));
        }
        level += 1;
    }
}

/// The rule whose node count is closest to `budget` (smallest level on ties).
pub fn rule_with_budget(domain: &Domain, kind: RuleKind, budget: usize) -> Result<CubatureRule> {
    if budget == 0 {
        return Err(WsvdError::InvalidArgument("node budget must be >= 1".into()));
    }
    if kind == RuleKind::GaussLegendre {
        let m = ((budget as f64).sqrt().round() as usize).max(1);
        return rule_at_level(domain, kind, m);
    }
    let mut best: Option<CubatureRule> = None;
    for m in 1.. {
        let rule = rule_at_level(domain, kind, m)?;
        let n = rule.len();
        let better = best
            .as_ref()
            .is_none_or(|b| n.abs_diff(budget) < b.len().abs_diff(budget));
        if better {
            best = Some(rule);
        }
        if n >= budget {
            break;
        }
    }
    Ok(best.expect("at least one level is generated"))
}
