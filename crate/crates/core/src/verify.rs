//! Invariant suite behind `transonic verify`.
//!
//! Every check reports a measured quantity and the threshold it was held to.
//! Checks that only make sense when an interior shock exists come back as
//! [`CheckStatus::NotApplicable`] for the other classifications.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::numerics::uniform_grid;
use crate::radial::{
    assemble_solution, existence_report, supersonic_potential, BranchKind, Existence,
    ExistenceReport, ModelConfig, ShockSolution,
};
use crate::variational::{
    j_prime, j_prime_by_quadrature, reduced_j, saddle_report, second_variation, SaddleReport,
    FD_STEP,
};

/// Seed for the random radii and perturbation profiles.
pub const SUITE_SEED: u64 = 0x7a5e_5eed;

pub const FLUX_SAMPLES: usize = 1000;
pub const FLUX_REL_TOL: f64 = 1e-10;
pub const BERNOULLI_TOL: f64 = 1e-12;
pub const H_SLOPE_REL_TOL: f64 = 1e-6;
pub const RH_TOL: f64 = 1e-9;
pub const CLOSED_FORM_TOL: f64 = 1e-10;
pub const DERIVATIVE_TOL: f64 = 1e-6;
pub const SHOCK_WIDTH_TOL: f64 = 1e-9;
pub const SHOCK_GAP_TOL: f64 = 1e-11;
pub const CROSS_CHECK_TOL: f64 = 1e-5;
pub const OBSTACLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::NotApplicable => "N/A",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub status: CheckStatus,
    /// Worst value seen; `NaN` when not applicable.
    pub measured: f64,
    pub threshold: f64,
    pub detail: String,
}

impl CheckOutcome {
    fn bound(name: &'static str, measured: f64, threshold: f64, detail: impl Into<String>) -> Self {
        let status = if measured <= threshold {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        CheckOutcome {
            name,
            status,
            measured,
            threshold,
            detail: detail.into(),
        }
    }

    fn flag(name: &'static str, ok: bool, measured: f64, detail: impl Into<String>) -> Self {
        let status = if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        CheckOutcome {
            name,
            status,
            measured,
            threshold: f64::NAN,
            detail: detail.into(),
        }
    }

    fn not_applicable(name: &'static str, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name,
            status: CheckStatus::NotApplicable,
            measured: f64::NAN,
            threshold: f64::NAN,
            detail: detail.into(),
        }
    }

    fn failed(name: &'static str, err: impl fmt::Display) -> Self {
        CheckOutcome {
            name,
            status: CheckStatus::Fail,
            measured: f64::NAN,
            threshold: f64::NAN,
            detail: format!("error: {err}"),
        }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:>4}] {:<24}", self.status, self.name)?;
        if !self.measured.is_nan() {
            write!(f, " measured {:.3e}", self.measured)?;
        }
        if !self.threshold.is_nan() {
            write!(f, " (limit {:.1e})", self.threshold)?;
        }
        if !self.detail.is_empty() {
            write!(f, "  {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub classification: Existence,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn run<F>(name: &'static str, f: F) -> CheckOutcome
where
    F: FnOnce() -> Result<CheckOutcome>,
{
    f().unwrap_or_else(|e| CheckOutcome::failed(name, e))
}

fn random_radii(config: &ModelConfig, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n)
        .map(|_| rng.gen_range(config.a()..=config.r_outer()))
        .collect()
}

/// `ρVr = M₀` with `ρ` taken from the Bernoulli law rather than the flux.
pub fn check_flux(config: &ModelConfig, radii: &[f64]) -> Result<CheckOutcome> {
    let params = config.params();
    let mut worst: f64 = 0.0;
    for &r in radii {
        for branch in [BranchKind::Sup, BranchKind::Sub] {
            let v = config.branch_speed(branch, r)?;
            let rho = params.density_from_speed(v, config.entropy_of(branch))?;
            worst = worst.max((rho * v * r / params.m0() - 1.0).abs());
        }
    }
    Ok(CheckOutcome::bound(
        "flux",
        worst,
        FLUX_REL_TOL,
        format!("{} radii, both branches", radii.len()),
    ))
}

/// Bernoulli residual of the flux-built state, relative to `½q̂₀²`.
pub fn check_bernoulli(config: &ModelConfig, radii: &[f64]) -> Result<CheckOutcome> {
    let scale = 0.5 * config.params().q_hat0_sq();
    let mut worst: f64 = 0.0;
    for &r in radii {
        for branch in [BranchKind::Sup, BranchKind::Sub] {
            let s = config.branch_state(branch, r)?;
            worst = worst.max(s.bernoulli_residual.abs() / scale);
        }
    }
    Ok(CheckOutcome::bound("bernoulli", worst, BERNOULLI_TOL, ""))
}

/// The entropy curve `k(V)` peaks at `c*` with value `k_max(r)`.
pub fn check_entropy_argmax(config: &ModelConfig) -> Result<CheckOutcome> {
    let params = config.params();
    let n = 20001;
    let hi = params.q_hat0();
    let step = hi / (n as f64 - 1.0);
    let mut worst: f64 = 0.0;
    let mut peak_ok = true;
    for r in [
        config.a(),
        0.5 * (config.a() + config.r_outer()),
        config.r_outer(),
    ] {
        let mut best = (0.0, f64::NEG_INFINITY);
        for v in uniform_grid(0.0, hi, n)?.into_iter().skip(1).take(n - 2) {
            let k = params.entropy_from_state(v, r)?;
            if k > best.1 {
                best = (v, k);
            }
        }
        worst = worst.max((best.0 - params.c_star()).abs());
        peak_ok &= best.1 <= params.k_max_at_radius(r)? * (1.0 + 1e-14);
    }
    let mut out = CheckOutcome::bound("entropy-argmax", worst, step, "grid argmax vs c*");
    if !peak_ok {
        out.status = CheckStatus::Fail;
        out.detail = "sampled k(V) exceeds k_max(r)".into();
    }
    Ok(out)
}

/// `p` from `kρ^γ` agrees with the speed-only pressure formula.
pub fn check_pressure_routes(config: &ModelConfig, radii: &[f64]) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for &r in radii {
        for branch in [BranchKind::Sup, BranchKind::Sub] {
            let s = config.branch_state(branch, r)?;
            let p = config.params().pressure_from_speed(s.speed, r)?;
            worst = worst.max((s.p - p).abs() / p);
        }
    }
    Ok(CheckOutcome::bound(
        "pressure-routes",
        worst,
        FLUX_REL_TOL,
        "",
    ))
}

fn h_slope(config: &ModelConfig, branch: BranchKind, r: f64) -> Result<f64> {
    let h = 1e-4 * (config.r_outer() - config.a());
    let (lo, hi) = ((r - h).max(config.a()), (r + h).min(config.r_outer()));
    Ok((config.momentum_flux_h(branch, hi)? - config.momentum_flux_h(branch, lo)?) / (hi - lo))
}

fn interior_radii(config: &ModelConfig, n: usize) -> Result<Vec<f64>> {
    let grid = uniform_grid(config.a(), config.r_outer(), n + 2)?;
    Ok(grid[1..=n].to_vec())
}

/// `dH/dr = p` on both branches, by central differences.
pub fn check_h_slope(config: &ModelConfig) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for r in interior_radii(config, 50)? {
        for branch in [BranchKind::Sup, BranchKind::Sub] {
            let slope = h_slope(config, branch, r)?;
            let p = config.branch_pressure(branch, r)?;
            worst = worst.max((slope - p).abs() / p);
        }
    }
    Ok(CheckOutcome::bound(
        "h-slope",
        worst,
        H_SLOPE_REL_TOL,
        "dH/dr vs p",
    ))
}

/// `dH^sub/dr > dH^sup/dr` everywhere sampled.
pub fn check_dominance(config: &ModelConfig) -> Result<CheckOutcome> {
    let mut min_margin = f64::INFINITY;
    for r in uniform_grid(config.a(), config.r_outer(), 101)? {
        let margin = h_slope(config, BranchKind::Sub, r)? - h_slope(config, BranchKind::Sup, r)?;
        min_margin = min_margin.min(margin);
    }
    Ok(CheckOutcome::flag(
        "h-slope-dominance",
        min_margin > 0.0,
        min_margin,
        "smallest dH^sub/dr - dH^sup/dr",
    ))
}

/// `V^sup` increases and `V^sub` decreases with `r`.
pub fn check_branch_monotonicity(config: &ModelConfig) -> Result<CheckOutcome> {
    let grid = uniform_grid(config.a(), config.r_outer(), 201)?;
    let mut ok = true;
    let mut prev: Option<(f64, f64)> = None;
    for &r in &grid {
        let sup = config.branch_speed(BranchKind::Sup, r)?;
        let sub = config.branch_speed(BranchKind::Sub, r)?;
        if let Some((ps, pb)) = prev {
            ok &= sup > ps && sub < pb;
        }
        prev = Some((sup, sub));
    }
    Ok(CheckOutcome::flag("branch-monotonicity", ok, f64::NAN, ""))
}

/// γ = 3 only: `V² = (q̂₀² ± sqrt(q̂₀⁴ − 12k(M₀/r)²))/2`.
pub fn check_closed_form(config: &ModelConfig, radii: &[f64]) -> Result<CheckOutcome> {
    let params = config.params();
    if params.gamma() != 3.0 {
        return Ok(CheckOutcome::not_applicable(
            "gamma3-closed-form",
            "gamma != 3",
        ));
    }
    let q2 = params.q_hat0_sq();
    let mut worst: f64 = 0.0;
    for &r in radii {
        for (branch, sign) in [(BranchKind::Sup, 1.0), (BranchKind::Sub, -1.0)] {
            let k = config.entropy_of(branch);
            let disc = (q2 * q2 - 12.0 * k * (params.m0() / r).powi(2)).sqrt();
            let exact = ((q2 + sign * disc) / 2.0).sqrt();
            worst = worst.max((config.branch_speed(branch, r)? - exact).abs());
        }
    }
    Ok(CheckOutcome::bound(
        "gamma3-closed-form",
        worst,
        CLOSED_FORM_TOL,
        "",
    ))
}

/// Quadrature-only finite differences of `J` against the closed-form
/// derivative at 20 interior shock positions.
pub fn check_derivative_consistency(config: &ModelConfig) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for eta in interior_radii(config, 20)? {
        let fd = j_prime_by_quadrature(eta, FD_STEP, config)?;
        worst = worst.max((fd - j_prime(eta, config)?).abs());
    }
    Ok(CheckOutcome::bound(
        "derivative-consistency",
        worst,
        DERIVATIVE_TOL,
        "20 interior points",
    ))
}

/// `J'(a) > 0` and `J'(R) < 0` exactly when the configuration is transonic.
pub fn check_existence_equivalence(
    config: &ModelConfig,
    report: &ExistenceReport,
) -> Result<CheckOutcome> {
    let (at_a, at_r) = (
        j_prime(config.a(), config)?,
        j_prime(config.r_outer(), config)?,
    );
    let by_slope = at_a > 0.0 && at_r < 0.0;
    let transonic = report.classification == Existence::Transonic;
    Ok(CheckOutcome::flag(
        "existence-equivalence",
        by_slope == transonic,
        f64::NAN,
        format!("J'(a)/2pi = {at_a:.10}, J'(R)/2pi = {at_r:.10}"),
    ))
}

/// Transonic only: `J' > 0` left of the shock and `< 0` right of it.
pub fn check_sign_pattern(config: &ModelConfig, shock: &ShockSolution) -> Result<CheckOutcome> {
    let mut ok = true;
    for eta in interior_radii(config, 99)? {
        let d = j_prime(eta, config)?;
        // Too close to call at the shock itself.
        if (eta - shock.r_s).abs() < 1e-9 {
            continue;
        }
        ok &= if eta < shock.r_s { d > 0.0 } else { d < 0.0 };
    }
    Ok(CheckOutcome::flag("j-prime-sign-pattern", ok, f64::NAN, ""))
}

/// The shock search resolved `r_s` tightly: small final bracket and a
/// vanishing H gap.
pub fn check_shock_precision(shock: &ShockSolution) -> CheckOutcome {
    let mut out = CheckOutcome::bound(
        "r_s-precision",
        shock.r_s_uncertainty,
        SHOCK_WIDTH_TOL,
        format!(
            "r_s = {:.12}, |H gap| = {:.2e}",
            shock.r_s,
            shock.h_gap.abs()
        ),
    );
    if shock.h_gap.abs() > SHOCK_GAP_TOL {
        out.status = CheckStatus::Fail;
    }
    out
}

pub fn check_compression(config: &ModelConfig, shock: &ShockSolution) -> CheckOutcome {
    let g = config.params().gamma();
    let ratio = shock.compression_ratio();
    let (lo, hi) = ((g - 1.0) / (g + 1.0), (g + 1.0) / (g - 1.0));
    CheckOutcome::flag(
        "compression-bound",
        lo < ratio && ratio < hi && ratio > 1.0,
        ratio,
        format!("rho2/rho1 in ({lo:.4}, {hi:.4})"),
    )
}

/// `φ ≥ φ^sup` on `[a, r_s]` with equality at `r_s`, and `φ = φ^sup` beyond.
pub fn check_obstacle(config: &ModelConfig, n_samples: usize) -> Result<CheckOutcome> {
    let solution = assemble_solution(config, n_samples)?;
    let r_s = solution.r_s;
    let mut ok = true;
    let mut worst_eq: f64 = 0.0;
    for s in &solution.profile {
        let obstacle = supersonic_potential(s.r, config)?;
        let diff = s.phi - obstacle;
        if s.r == r_s || s.branch == BranchKind::Sup {
            worst_eq = worst_eq.max(diff.abs());
        } else {
            ok &= diff > 0.0;
        }
    }
    let mut out = CheckOutcome::bound(
        "obstacle-ordering",
        worst_eq,
        OBSTACLE_TOL,
        "phi - phi_sup on the contact set",
    );
    if !ok {
        out.status = CheckStatus::Fail;
        out.detail = "phi < phi_sup in the subsonic region".into();
    }
    Ok(out)
}

/// Smooth bounded slope profiles `w_r(r) = c₀ + c₁ sin(ω(r−a) + θ)`.
pub fn random_slope_profiles(n: usize, rng: &mut ChaCha8Rng) -> Vec<[f64; 4]> {
    (0..n)
        .map(|_| {
            [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(0.1..1.0),
                rng.gen_range(0.5..8.0),
                rng.gen_range(0.0..std::f64::consts::TAU),
            ]
        })
        .collect()
}

pub fn check_second_variation(
    config: &ModelConfig,
    eta: f64,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome> {
    let a = config.a();
    let mut smallest = f64::INFINITY;
    for [c0, c1, omega, theta] in random_slope_profiles(10, rng) {
        let value = second_variation(|r| c0 + c1 * (omega * (r - a) + theta).sin(), eta, config)?;
        smallest = smallest.min(value);
    }
    Ok(CheckOutcome::flag(
        "second-variation",
        smallest > 0.0,
        smallest,
        "smallest over 10 random profiles",
    ))
}

/// Where `J` peaks must agree with the classification.
pub fn check_j_maximiser(config: &ModelConfig, saddle: &SaddleReport) -> CheckOutcome {
    match (saddle.classification, saddle.r_s_exact) {
        (Existence::Transonic, Some(r_s)) => {
            let gap = (saddle.eta_star - r_s).abs();
            CheckOutcome::bound(
                "j-maximiser",
                gap,
                CROSS_CHECK_TOL,
                format!("eta* = {:.10} vs r_s = {:.10}", saddle.eta_star, r_s),
            )
        }
        (Existence::SupersonicOnly, _) => CheckOutcome::flag(
            "j-maximiser",
            saddle.eta_star == config.a(),
            saddle.eta_star,
            "expected at r = a",
        ),
        (Existence::SubsonicOnly, _) => CheckOutcome::flag(
            "j-maximiser",
            saddle.eta_star == config.r_outer(),
            saddle.eta_star,
            "expected at r = R",
        ),
        (Existence::Transonic, None) => CheckOutcome::failed("j-maximiser", "missing shock radius"),
    }
}

/// `I(r_s, x) ≥ I(r_s, 0)` over the scan and `J(η) ≤ J(r_s)` over the sweep.
pub fn check_saddle(config: &ModelConfig, saddle: &SaddleReport, r_s: f64) -> Result<CheckOutcome> {
    let j_peak = reduced_j(r_s, config)?;
    let j_excess = saddle
        .j_curve
        .samples
        .iter()
        .map(|s| s.value - j_peak)
        .fold(f64::NEG_INFINITY, f64::max);
    let i_ok = saddle.i_min_at_zero() == Some(true);
    // Quadrature noise allowance on J near its flat maximum.
    let slack = 1e-9 * j_peak.abs().max(1.0);
    Ok(CheckOutcome::flag(
        "saddle",
        i_ok && j_excess <= slack,
        j_excess,
        format!("I(x) min at x = 0: {i_ok}; max J(eta) - J(r_s) shown"),
    ))
}

/// Runs the whole suite. `sweep_n` sets the `J` sweep resolution.
pub fn run_suite(config: &ModelConfig, sweep_n: usize) -> Result<SuiteReport> {
    let existence = existence_report(config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    let radii = random_radii(config, FLUX_SAMPLES, &mut rng);

    let mut checks = vec![
        run("flux", || check_flux(config, &radii)),
        run("bernoulli", || check_bernoulli(config, &radii)),
        run("entropy-argmax", || check_entropy_argmax(config)),
        run("pressure-routes", || check_pressure_routes(config, &radii)),
        run("h-slope", || check_h_slope(config)),
        run("h-slope-dominance", || check_dominance(config)),
        run("branch-monotonicity", || check_branch_monotonicity(config)),
        run("gamma3-closed-form", || check_closed_form(config, &radii)),
        run("derivative-consistency", || {
            check_derivative_consistency(config)
        }),
        run("existence-equivalence", || {
            check_existence_equivalence(config, &existence)
        }),
    ];

    let saddle = saddle_report(config, sweep_n);
    match &saddle {
        Ok(s) => checks.push(check_j_maximiser(config, s)),
        Err(e) => checks.push(CheckOutcome::failed("j-maximiser", e)),
    }

    const SHOCK_CHECKS: [&str; 9] = [
        "rankine-hugoniot",
        "prandtl",
        "jump-condition",
        "compression-bound",
        "r_s-precision",
        "j-prime-sign-pattern",
        "obstacle-ordering",
        "second-variation",
        "saddle",
    ];
    if existence.classification != Existence::Transonic {
        let why = format!("no interior shock ({:?})", existence.classification);
        checks.extend(
            SHOCK_CHECKS
                .iter()
                .map(|n| CheckOutcome::not_applicable(n, why.clone())),
        );
        return Ok(SuiteReport {
            classification: existence.classification,
            checks,
        });
    }

    let shock = match crate::radial::locate_shock(config) {
        Ok(s) => s,
        Err(e) => {
            checks.extend(SHOCK_CHECKS.iter().map(|n| CheckOutcome::failed(n, &e)));
            return Ok(SuiteReport {
                classification: existence.classification,
                checks,
            });
        }
    };
    let res = shock.residuals;
    let rh = res.mass.abs().max(res.momentum.abs()).max(res.energy.abs());
    checks.push(CheckOutcome::bound(
        "rankine-hugoniot",
        rh,
        RH_TOL,
        format!(
            "mass {:.2e}, momentum {:.2e}, energy {:.2e}",
            res.mass, res.momentum, res.energy
        ),
    ));
    checks.push(CheckOutcome::bound(
        "prandtl",
        res.prandtl.abs(),
        RH_TOL,
        "V1 V2 - c*^2",
    ));
    checks.push(run("jump-condition", || {
        let r = crate::radial::variational_jump_residual(shock.r_s, config)?;
        Ok(CheckOutcome::bound("jump-condition", r.abs(), RH_TOL, ""))
    }));
    checks.push(check_compression(config, &shock));
    checks.push(check_shock_precision(&shock));
    checks.push(run("j-prime-sign-pattern", || {
        check_sign_pattern(config, &shock)
    }));
    checks.push(run("obstacle-ordering", || check_obstacle(config, 201)));
    checks.push(run("second-variation", || {
        check_second_variation(config, shock.r_s, &mut rng)
    }));
    checks.push(match &saddle {
        Ok(s) => run("saddle", || check_saddle(config, s, shock.r_s)),
        Err(e) => CheckOutcome::failed("saddle", e),
    });
    Ok(SuiteReport {
        classification: existence.classification,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{make_config, Tolerances};

    fn config(v_a_sq: f64) -> ModelConfig {
        make_config(3.0, 1.0, 1.0, 5.0, 6.0, v_a_sq.sqrt(), 1.8f64.sqrt()).unwrap()
    }

    #[test]
    fn standard_suite_passes() {
        let report = run_suite(&config(0.7), 401).unwrap();
        for c in &report.checks {
            assert_eq!(c.status, CheckStatus::Pass, "{c}");
        }
    }

    #[test]
    fn counterexample_skips_shock_checks() {
        let report = run_suite(&config(0.4), 401).unwrap();
        assert_eq!(report.classification, Existence::SupersonicOnly);
        assert!(report.all_pass());
        for name in ["rankine-hugoniot", "prandtl", "saddle"] {
            assert_eq!(report.get(name).unwrap().status, CheckStatus::NotApplicable);
        }
        assert_eq!(report.get("flux").unwrap().status, CheckStatus::Pass);
    }

    #[test]
    fn loose_root_tolerance_fails_precision_only_where_expected() {
        let loose = Tolerances {
            root_tol: 1e-2,
            ..Tolerances::default()
        };
        let c = config(0.7).with_tolerances(loose).unwrap();
        let report = run_suite(&c, 401).unwrap();
        assert_eq!(
            report.get("derivative-consistency").unwrap().status,
            CheckStatus::Pass
        );
        assert_eq!(
            report.get("r_s-precision").unwrap().status,
            CheckStatus::Fail
        );
        assert!(!report.all_pass());
    }

    #[test]
    fn random_profiles_are_deterministic() {
        let mut a = ChaCha8Rng::seed_from_u64(SUITE_SEED);
        let mut b = ChaCha8Rng::seed_from_u64(SUITE_SEED);
        assert_eq!(
            random_slope_profiles(10, &mut a),
            random_slope_profiles(10, &mut b)
        );
    }
}
