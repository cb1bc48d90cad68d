//! Acceptance suite. Every criterion runs at its pinned tolerance and prints
//! one `PASS`/`FAIL` line; the process exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wsvd::bench::{self, ExperimentConfig, TestFunction};
use wsvd::cubature::{polar_rule, rule_with_budget, square_rule, RuleKind};
use wsvd::geometry::uniform_grid;
use wsvd::{
    l2w_error_bound, Approximant, Domain, Kernel, KernelFamily, Point, StandardInterpolant, Truncation, WsvdBasis,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn basis(family: &str, eps: f64, domain: Domain, budget: usize) -> Arc<WsvdBasis> {
    let kind = RuleKind::for_domain(&domain);
    let rule = rule_with_budget(&domain, kind, budget).expect("rule");
    Arc::new(WsvdBasis::build(Kernel::from_name(family, eps).expect("kernel"), rule).expect("basis"))
}

/// `f = Σ αᵢ Φ(·, xᵢ)` over the basis nodes, evaluated by direct kernel sums.
struct NativeFunction<'a> {
    kernel: Kernel,
    centers: &'a [Point],
    alpha: Vec<f64>,
}

impl NativeFunction<'_> {
    fn eval(&self, x: &Point) -> f64 {
        self.centers
            .iter()
            .zip(&self.alpha)
            .map(|(c, a)| a * self.kernel.eval(x, c))
            .sum()
    }

    /// `‖f‖_Φ = √(αᵀAα)`.
    fn native_norm(&self, basis: &WsvdBasis) -> f64 {
        let alpha = DVector::from_column_slice(&self.alpha);
        (alpha.dot(&(basis.kernel_matrix() * &alpha))).sqrt()
    }
}

fn random_native<'a>(basis: &'a WsvdBasis, rng: &mut ChaCha8Rng) -> NativeFunction<'a> {
    NativeFunction {
        kernel: *basis.kernel(),
        centers: basis.nodes(),
        alpha: (0..basis.len()).map(|_| rng.gen_range(-1.0..1.0)).collect(),
    }
}

const SWEEP_KERNELS: [&str; 3] = ["gauss", "imq", "mat3"];
const SWEEP_EPS: [f64; 3] = [1.0, 4.0, 9.0];

fn sweep_bases() -> Vec<(String, Arc<WsvdBasis>)> {
    let mut out = Vec::new();
    for family in SWEEP_KERNELS {
        for eps in SWEEP_EPS {
            let square = WsvdBasis::build(Kernel::from_name(family, eps).unwrap(), square_rule(20).unwrap()).unwrap();
            out.push((
                format!("{family} eps={eps} square N={}", square.len()),
                Arc::new(square),
            ));
            let disk = basis(family, eps, Domain::disk(), 400);
            out.push((format!("{family} eps={eps} disk N={}", disk.len()), disk));
        }
    }
    out
}

fn trace_identity() -> Outcome {
    let start = Instant::now();
    let bases = sweep_bases();
    let elapsed = start.elapsed();
    let worst = bases.iter().map(|(_, b)| b.trace_residual()).fold(0.0, f64::max);
    let detail = format!(
        "max relative trace residual {worst:.2e} over {} bases in {elapsed:.2?}",
        bases.len()
    );
    if worst < 1e-10 && elapsed < Duration::from_secs(10) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn gramian_identities() -> Outcome {
    let mut failures = Vec::new();
    let mut worst_phi = 0.0f64;
    let mut worst_l2w = 0.0f64;
    let bases = sweep_bases();
    for (label, b) in &bases {
        let phi = b.gram_residual();
        let l2w = b.l2w_gram_residual() / b.sigma2()[0];
        worst_phi = worst_phi.max(phi);
        worst_l2w = worst_l2w.max(l2w);
        if !(phi < 1e-8 && l2w < 1e-8) {
            failures.push(format!("{label}: |C'AC-I|={phi:.1e} |V'WV-S2|/s1^2={l2w:.1e}"));
        }
    }
    let detail = format!(
        "max |C'AC-I| {worst_phi:.2e}, max |V'WV-diag|/sigma1^2 {worst_l2w:.2e}; {} of {} bases fail",
        failures.len(),
        bases.len()
    );
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}\n      {}", failures.join("\n      ")))
    }
}

fn interpolation_exactness() -> Outcome {
    let b = basis("mat3", 4.0, Domain::disk(), 300);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = random_native(&b, &mut rng);
    let interp = Approximant::interpolate(b.clone(), |p| f.eval(p)).map_err(|e| e.to_string())?;
    let grid = bench::eval_grid(&Domain::disk(), 64).unwrap();
    let values = interp.eval_many(&grid);
    let err = grid
        .iter()
        .zip(&values)
        .map(|(p, v)| (f.eval(p) - v).abs())
        .fold(0.0, f64::max);
    let alpha_l1: f64 = f.alpha.iter().map(|a| a.abs()).sum();
    let tol = 1e-8 * alpha_l1 * b.kernel().phi0();
    let detail = format!(
        "N={} M={} max grid error {err:.2e} (tolerance {tol:.2e})",
        b.len(),
        interp.m_active()
    );
    if err < tol {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn pointwise_error_bound() -> Outcome {
    let b = basis("gauss", 4.0, Domain::UnitSquare, 225);
    let probe = uniform_grid(50, &Domain::UnitSquare).unwrap();
    let u = b.eval_matrix(&probe);
    let phi0 = b.kernel().phi0();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_slack = f64::NEG_INFINITY;
    for _ in 0..20 {
        let f = random_native(&b, &mut rng);
        let norm = f.native_norm(&b);
        let interp = Approximant::interpolate(b.clone(), |p| f.eval(p)).map_err(|e| e.to_string())?;
        for (i, p) in probe.iter().enumerate() {
            let row: Vec<f64> = u.row(i).iter().copied().collect();
            let value = interp.eval_from_basis_values(&row);
            let power = (phi0 - row.iter().map(|v| v * v).sum::<f64>()).max(0.0).sqrt();
            let lhs = (f.eval(p) - value).abs();
            let rhs = power * norm + 1e-10;
            worst_slack = worst_slack.max(lhs - rhs);
        }
    }
    let detail = format!(
        "N={} active={}, worst (error - bound) {worst_slack:.2e} over 20 functions x {} probes",
        b.len(),
        b.n_active(),
        probe.len()
    );
    if worst_slack <= 0.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn l2w_truncation_bound() -> Outcome {
    let b = basis("imq", 4.0, Domain::disk(), 300);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_ratio = 0.0f64;
    let mut violated = false;
    for _ in 0..20 {
        let f = random_native(&b, &mut rng);
        let norm = f.native_norm(&b);
        let samples: Vec<f64> = b.nodes().iter().map(|p| f.eval(p)).collect();
        let full = Approximant::project(b.clone(), &samples).map_err(|e| e.to_string())?;
        for m in [50, 100, 200] {
            let lhs = full
                .truncate(Truncation::Order(m))
                .and_then(|a| a.l2w_residual(&samples))
                .map_err(|e| e.to_string())?;
            let rhs = l2w_error_bound(&b, m) * norm;
            worst_ratio = worst_ratio.max(lhs / rhs);
            if lhs > rhs + 1e-12 {
                violated = true;
            }
        }
    }
    let detail = format!(
        "N={}, worst residual/bound ratio {worst_ratio:.3} for M in {{50,100,200}}",
        b.len()
    );
    if violated {
        Err(detail)
    } else {
        Ok(detail)
    }
}

fn truncation_stabilizes() -> Outcome {
    let start = Instant::now();
    let cfg = ExperimentConfig::from_text(
        "kernel = gauss\neps = 4\ndomain = disk\nrule = polar\nn = 600\nm = 20:20:600\ntestfn = oscillatory\ngrid = 64\n",
    )
    .unwrap();
    let rows = bench::run_experiment(&cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if let Some(bad) = rows.iter().find(|r| r.is_error()) {
        return Err(bad.error.clone());
    }
    let n = rows[0].n;
    let oscillatory = |p: &Point| TestFunction::Oscillatory.eval(p);
    let full_rule = rule_with_budget(&Domain::disk(), RuleKind::Polar, 600).unwrap();
    let kernel = Kernel::new(KernelFamily::Gaussian, 4.0).unwrap();
    let full_basis = Arc::new(WsvdBasis::build(kernel, full_rule).unwrap());
    let grid = bench::eval_grid(&Domain::disk(), 64).unwrap();
    // the interpolant on the same nodes, as the full expansion and by a direct kernel solve
    let interp = Approximant::interpolate(full_basis.clone(), oscillatory).unwrap();
    let expansion_rmse = bench::rmse(|p| interp.eval(p), oscillatory, &grid).unwrap();
    let samples: Vec<f64> = full_basis.nodes().iter().map(oscillatory).collect();
    let direct_rmse = match StandardInterpolant::new(kernel, full_basis.nodes(), &samples) {
        Ok(direct) => {
            let values = direct.eval_many(&grid);
            let exact: Vec<f64> = grid.iter().map(oscillatory).collect();
            bench::error_stats(&values, &exact).unwrap().0
        }
        Err(_) => f64::INFINITY,
    };
    let (best_m, best_rmse) =
        rows.iter()
            .map(|r| (r.m, r.rmse.unwrap()))
            .fold(
                (usize::MAX, f64::INFINITY),
                |acc, (m, e)| if e < acc.1 { (m, e) } else { acc },
            );
    let detail = format!(
        "N={n} active={}: best M={best_m} rmse {best_rmse:.6e}; interpolant rmse {expansion_rmse:.6e} \
         (expansion), {direct_rmse:.6e} (direct solve); sweep {elapsed:.2?}",
        interp.m_active()
    );
    if best_rmse <= expansion_rmse && best_rmse <= direct_rmse && best_m < n && elapsed < Duration::from_secs(60) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn native_convergence() -> Outcome {
    let start = Instant::now();
    let cfg = ExperimentConfig::from_text(
        "kernel = gauss\neps = 4\ndomain = square\nrule = gl\nn = 196,324,529\ntruncate-tol = 1e-17\ntestfn = native\n",
    )
    .unwrap();
    let rows = bench::run_experiment(&cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if let Some(bad) = rows.iter().find(|r| r.is_error()) {
        return Err(bad.error.clone());
    }
    let errors: Vec<(usize, f64)> = rows.iter().map(|r| (r.n, r.rmse.unwrap())).collect();
    let last = errors.last().unwrap();
    let monotone = errors.windows(2).all(|w| w[1].1 <= 10.0 * w[0].1);
    let detail = format!(
        "rmse by N: {} in {elapsed:.2?}",
        errors
            .iter()
            .map(|(n, e)| format!("{n}:{e:.2e}"))
            .collect::<Vec<_>>()
            .join(" ")
    );
    if last.0 == 529 && last.1 < 1e-10 && monotone && elapsed < Duration::from_secs(120) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn loo_sanity() -> Outcome {
    let start = Instant::now();
    let centers = uniform_grid(14, &Domain::UnitSquare).unwrap();
    let samples: Vec<f64> = centers.iter().map(|p| TestFunction::NativeGauss.eval(p)).collect();
    let grid = bench::config::parse_f64_list("1:0.25:10").unwrap();
    let result = wsvd::loo_optimize(KernelFamily::Gaussian, &grid, &centers, &samples).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let detail = format!(
        "N={} candidates={} eps*={} in {elapsed:.2?}",
        centers.len(),
        result.scores.len(),
        result.best_epsilon
    );
    if (3.0..=5.0).contains(&result.best_epsilon) && elapsed < Duration::from_secs(300) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn eigen_decay_ordering() -> Outcome {
    let count = |family: &str, eps: f64| {
        let b = basis(family, eps, Domain::disk(), 400);
        let s = b.nystrom_spectrum().eigenvalues;
        (b.len(), s.iter().filter(|&&v| v > 1e-16 * s[0]).count())
    };
    let (n, g1) = count("gauss", 1.0);
    let (_, g9) = count("gauss", 9.0);
    let (_, g4) = count("gauss", 4.0);
    let (_, i4) = count("imq", 4.0);
    let (_, m4) = count("mat3", 4.0);
    let detail = format!("N={n}: gauss1={g1} gauss9={g9}; at eps=4 gauss={g4} imq={i4} mat3={m4}");
    if g1 < g9 && g4 < i4 && i4 < m4 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn cubature_validity() -> Outcome {
    let mut checked = 0;
    let mut worst_sum = 0.0f64;
    let mut worst_moment = 0.0f64;
    for m in 1..=30 {
        let mut rules = vec![square_rule(m).unwrap()];
        for domain in [Domain::disk(), Domain::CutDisk, Domain::Lens] {
            rules.push(polar_rule(&domain, m).unwrap());
        }
        for rule in &rules {
            let measure = rule.domain().measure();
            let total: f64 = rule.weights().iter().sum();
            worst_sum = worst_sum.max(((total - measure) / measure).abs());
            if rule.weights().iter().any(|&w| w <= 0.0) {
                return Err(format!("non-positive weight at m={m} on {}", rule.domain()));
            }
            checked += 1;
        }
        if m >= 2 {
            let moment = rules[0].integrate(|p| p[0] * p[0] * p[1] * p[1]);
            worst_moment = worst_moment.max((moment - 1.0 / 9.0).abs());
        }
    }
    let detail = format!(
        "{checked} rules: max relative |sum w - |Omega|| {worst_sum:.2e}, max |int x^2y^2 - 1/9| {worst_moment:.2e}"
    );
    if worst_sum < 1e-12 && worst_moment < 1e-12 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn determinism() -> Outcome {
    let cfg = ExperimentConfig::from_text(
        "kernel = imq\neps = 4,9\ndomain = lens\nn = 150,300\nm = 0:50:300\ntestfn = franke\ngrid = 40\n",
    )
    .unwrap();
    let render = || {
        let rows = bench::run_experiment(&cfg).unwrap();
        let mut buf = Vec::new();
        bench::write_rows(&rows, &mut buf).unwrap();
        buf
    };
    let first = render();
    let second = render();
    let detail = format!(
        "{} bytes, {} lines",
        first.len(),
        first.iter().filter(|&&b| b == b'\n').count()
    );
    if first == second {
        Ok(detail)
    } else {
        Err(format!("outputs differ ({detail})"))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("trace identity", trace_identity),
        ("gramian identities", gramian_identities),
        ("interpolation exactness on the subspace", interpolation_exactness),
        ("pointwise power-function bound", pointwise_error_bound),
        ("weighted l2 truncation bound", l2w_truncation_bound),
        ("truncation stabilizes the interpolant", truncation_stabilizes),
        ("native-function convergence", native_convergence),
        ("leave-one-out shape parameter", loo_sanity),
        ("eigenvalue decay ordering", eigen_decay_ordering),
        ("cubature validity", cubature_validity),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
