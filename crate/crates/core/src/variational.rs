//! Radial form of the variational functional, its reduction to the shock
//! position, and the saddle-point check.
//!
//! With `K = γ^(γ/(γ−1)) k_a^(1/(γ−1))` and the subsonic speed perturbed by
//! `ΔV = x (r − a)`, the functional per unit angle is
//!
//! ```text
//! I/2π = ∫_a^η [ −(c²(V^sub + ΔV))^(γ/(γ−1)) r − K M₀ (V^sub + ΔV) ] dr
//!      + ∫_η^R [ −K p^sup r − K M₀ V^sup ] dr
//! ```
//!
//! The boundary term on the inner wall has been rewritten as a volume
//! integral of `φ_r` using `φ(R) = 0` and `M₀ = m a`. `J(η)` is the `x = 0`
//! slice. Its derivative is `K (H^sup(k0, η) − H^sub(k_a, η))`, so the
//! maximiser over `η` is the shock radius, while at fixed `η` the functional
//! is convex in the subsonic profile.

use crate::error::{Error, Result};
use crate::numerics::{
    try_central_diff, try_find_root, try_integrate, uniform_grid, Bracket, QuadratureSpec, Sample,
    SweepResult, DEFAULT_MAX_ITER,
};
use crate::radial::{
    existence_report, locate_shock, momentum_flux_of_speed, BranchKind, Existence, ModelConfig,
};

/// Safety margin applied to the admissible perturbation amplitude.
pub const PERTURBATION_MARGIN: f64 = 0.99;

/// Default step for finite differences of `J`.
pub const FD_STEP: f64 = 1e-4;

/// Default number of samples for the `I(x)` scan.
pub const DEFAULT_I_SCAN_POINTS: usize = 249;

/// Assigned shock radius `eta` and amplitude `x` of the subsonic speed
/// perturbation `ΔV = x (r − a)`. `x = 0` is the branch solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialProfile {
    eta: f64,
    x: f64,
}

impl TrialProfile {
    /// Checks `a ≤ eta ≤ R` and `|x| ≤ perturbation_bound(eta)`.
    pub fn new(eta: f64, x: f64, config: &ModelConfig) -> Result<Self> {
        check_eta(eta, config)?;
        if !x.is_finite() {
            return Err(Error::domain(format!(
                "perturbation amplitude must be finite, got {x}"
            )));
        }
        if x != 0.0 {
            let bound = perturbation_bound(eta, config)?;
            if x.abs() > bound {
                return Err(Error::domain(format!(
                    "perturbation x = {x} leaves the subsonic range at eta = {eta} (|x| must be <= {bound})"
                )));
            }
        }
        Ok(TrialProfile { eta, x })
    }

    /// Unperturbed profile with the shock at `eta`.
    pub fn unperturbed(eta: f64, config: &ModelConfig) -> Result<Self> {
        Self::new(eta, 0.0, config)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn x(&self) -> f64 {
        self.x
    }
}

fn check_eta(eta: f64, config: &ModelConfig) -> Result<()> {
    if eta.is_finite() && eta >= config.a() && eta <= config.r_outer() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "assigned shock radius {eta} lies outside [{}, {}]",
            config.a(),
            config.r_outer()
        )))
    }
}

/// `γ^(γ/(γ−1)) k_a^(1/(γ−1))`.
pub fn functional_scale(config: &ModelConfig) -> f64 {
    let g = config.params().gamma();
    g.powf(g / (g - 1.0)) * config.k_a().powf(1.0 / (g - 1.0))
}

/// Largest `|x|` for which `V^sub + x (r − a)` provably stays inside
/// `(0, c*)` on `[a, eta]`, bounding the perturbed speed by
/// `max V^sub + |x| (eta − a)` from above and `min V^sub − |x| (eta − a)`
/// from below, then shrunk by [`PERTURBATION_MARGIN`]. Infinite when the
/// subsonic region is empty.
pub fn perturbation_bound(eta: f64, config: &ModelConfig) -> Result<f64> {
    check_eta(eta, config)?;
    let span = eta - config.a();
    if span <= 0.0 {
        return Ok(f64::INFINITY);
    }
    // V^sub is decreasing in r, so its extremes sit at the two ends.
    let v_max = config.branch_speed(BranchKind::Sub, config.a())?;
    let v_min = config.branch_speed(BranchKind::Sub, eta)?;
    let headroom = (config.params().c_star() - v_max).min(v_min);
    Ok(PERTURBATION_MARGIN * headroom / span)
}

/// Integrand of `I/2π` on the subsonic side at speed `v`.
fn subsonic_density(config: &ModelConfig, scale: f64, r: f64, v: f64) -> Result<f64> {
    let g = config.params().gamma();
    let c_sq = config.params().sound_speed_sq(v)?;
    Ok(-c_sq.powf(g / (g - 1.0)) * r - scale * config.params().m0() * v)
}

/// Integrand of `I/2π` on the supersonic side.
fn supersonic_density(config: &ModelConfig, scale: f64, r: f64) -> Result<f64> {
    let v = config.branch_speed(BranchKind::Sup, r)?;
    let p = config.params().pressure_from_speed(v, r)?;
    Ok(-scale * p * r - scale * config.params().m0() * v)
}

/// `I/2π` for the given trial profile.
pub fn functional_i(trial: &TrialProfile, config: &ModelConfig) -> Result<f64> {
    functional_i_with(trial, config, &config.tolerances().quad)
}

fn functional_i_with(
    trial: &TrialProfile,
    config: &ModelConfig,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let scale = functional_scale(config);
    let (a, x) = (config.a(), trial.x);
    let inner = try_integrate(
        |r| {
            let v = config.branch_speed(BranchKind::Sub, r)? + x * (r - a);
            if !(v > 0.0 && v < config.params().c_star()) {
                return Err(Error::domain(format!(
                    "perturbed speed {v} at r = {r} is not subsonic"
                )));
            }
            subsonic_density(config, scale, r, v)
        },
        a,
        trial.eta,
        quad,
    )?;
    let outer = try_integrate(
        |r| supersonic_density(config, scale, r),
        trial.eta,
        config.r_outer(),
        quad,
    )?;
    Ok(inner + outer)
}

/// `J(eta)/2π`: the functional with the unperturbed subsonic branch.
pub fn reduced_j(eta: f64, config: &ModelConfig) -> Result<f64> {
    functional_i(&TrialProfile::unperturbed(eta, config)?, config)
}

/// Closed-form `J'(eta)/2π = K (H^sup(k0, eta) − H^sub(k_a, eta))`.
/// Defined up to and including both walls.
pub fn j_prime(eta: f64, config: &ModelConfig) -> Result<f64> {
    check_eta(eta, config)?;
    let params = config.params();
    let h_sup = momentum_flux_of_speed(params, config.branch_speed(BranchKind::Sup, eta)?);
    let h_sub = momentum_flux_of_speed(params, config.branch_speed(BranchKind::Sub, eta)?);
    Ok(functional_scale(config) * (h_sup - h_sub))
}

/// `(J(hi) − J(lo))/2π`, evaluated as one integral of the difference of the
/// two integrands so no cancellation between full-range integrals occurs.
fn j_increment(
    lo: f64,
    hi: f64,
    config: &ModelConfig,
    scale: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    try_integrate(
        |r| {
            let v = config.branch_speed(BranchKind::Sub, r)?;
            Ok(subsonic_density(config, scale, r, v)? - supersonic_density(config, scale, r)?)
        },
        lo,
        hi,
        quad,
    )
}

/// Finite-difference `J'(eta)/2π` built only from quadratures of the
/// functional. Central differences in the interior; second-order one-sided
/// differences within `h` of a wall.
pub fn j_prime_by_quadrature(eta: f64, h: f64, config: &ModelConfig) -> Result<f64> {
    check_eta(eta, config)?;
    if !(h > 0.0 && 2.0 * h < config.r_outer() - config.a()) {
        return Err(Error::domain(format!(
            "finite-difference step {h} does not fit the annulus"
        )));
    }
    let scale = functional_scale(config);
    let quad = config.tolerances().quad;
    let (a, r_outer) = (config.a(), config.r_outer());
    if eta - h >= a && eta + h <= r_outer {
        Ok(j_increment(eta - h, eta + h, config, scale, &quad)? / (2.0 * h))
    } else if eta + h > r_outer {
        // (3 J(η) − 4 J(η−h) + J(η−2h)) / 2h
        let d1 = j_increment(eta - h, eta, config, scale, &quad)?;
        let d2 = j_increment(eta - 2.0 * h, eta - h, config, scale, &quad)?;
        Ok((3.0 * d1 - d2) / (2.0 * h))
    } else {
        // (−3 J(η) + 4 J(η+h) − J(η+2h)) / 2h
        let d1 = j_increment(eta, eta + h, config, scale, &quad)?;
        let d2 = j_increment(eta + h, eta + 2.0 * h, config, scale, &quad)?;
        Ok((3.0 * d1 - d2) / (2.0 * h))
    }
}

/// Central difference of [`reduced_j`] itself, each `J` a full quadrature.
pub fn j_prime_central(eta: f64, h: f64, config: &ModelConfig) -> Result<f64> {
    try_central_diff(|e| reduced_j(e, config), eta, h)
}

/// `J/2π` on `n` uniform shock positions spanning `[a, R]`.
///
/// Accumulates the integrals over consecutive grid cells rather than
/// integrating from scratch at every node.
pub fn j_curve(config: &ModelConfig, n: usize) -> Result<SweepResult> {
    let grid = uniform_grid(config.a(), config.r_outer(), n)?;
    let scale = functional_scale(config);
    let quad = config.tolerances().quad;

    let mut sub_cells = Vec::with_capacity(n - 1);
    let mut sup_cells = Vec::with_capacity(n - 1);
    for w in grid.windows(2) {
        sub_cells.push(try_integrate(
            |r| subsonic_density(config, scale, r, config.branch_speed(BranchKind::Sub, r)?),
            w[0],
            w[1],
            &quad,
        )?);
        sup_cells.push(try_integrate(
            |r| supersonic_density(config, scale, r),
            w[0],
            w[1],
            &quad,
        )?);
    }

    let mut sup_tail: Vec<f64> = vec![0.0; n];
    for i in (0..n - 1).rev() {
        sup_tail[i] = sup_tail[i + 1] + sup_cells[i];
    }
    let mut sub_head = 0.0;
    let mut samples = Vec::with_capacity(n);
    for (i, &eta) in grid.iter().enumerate() {
        if i > 0 {
            sub_head += sub_cells[i - 1];
        }
        samples.push(Sample {
            x: eta,
            value: sub_head + sup_tail[i],
        });
    }
    Ok(SweepResult { samples })
}

/// `I/2π` at fixed `eta` for `n` amplitudes spread uniformly over
/// `[−x_max, x_max]`.
pub fn i_curve(eta: f64, x_max: f64, n: usize, config: &ModelConfig) -> Result<SweepResult> {
    let xs = uniform_grid(-x_max, x_max, n)?;
    let samples = xs
        .into_iter()
        .map(|x| {
            // The middle node of an odd grid is exactly zero up to rounding.
            let x = if x.abs() < 1e-15 * x_max { 0.0 } else { x };
            let trial = TrialProfile::new(eta, x, config)?;
            Ok(Sample {
                x,
                value: functional_i(&trial, config)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { samples })
}

/// Second variation of `I/2π` in direction `w` at the subsonic branch, with
/// the subsonic region `[a, eta]` fixed:
/// `(γ(γ+1)/2) ∫_a^eta (c²)^((2−γ)/(γ−1)) w_r² (c*² − V²) r dr`.
pub fn second_variation<W>(w_r: W, eta: f64, config: &ModelConfig) -> Result<f64>
where
    W: Fn(f64) -> f64,
{
    check_eta(eta, config)?;
    let params = config.params();
    let g = params.gamma();
    let integral = try_integrate(
        |r| {
            let v = config.branch_speed(BranchKind::Sub, r)?;
            let c_sq = params.sound_speed_sq(v)?;
            let w = w_r(r);
            Ok::<_, Error>(
                c_sq.powf((2.0 - g) / (g - 1.0)) * w * w * (params.c_star_sq() - v * v) * r,
            )
        },
        config.a(),
        eta,
        &config.tolerances().quad,
    )?;
    Ok(0.5 * g * (g + 1.0) * integral)
}

/// Outcome of the `I(x)` scan at fixed shock position.
#[derive(Debug, Clone, PartialEq)]
pub struct IScan {
    pub eta: f64,
    pub x_max: f64,
    pub curve: SweepResult,
    /// Amplitude at which the scan is smallest.
    pub argmin_x: f64,
    /// `I(x) ≥ I(0)` at every scanned `x` and the minimum sits at `x = 0`.
    pub min_at_zero: bool,
}

/// Scan range for the `I(x)` check: the admissible bound truncated to two
/// decimals, as a plotting range would be.
pub fn i_scan_range(eta: f64, config: &ModelConfig) -> Result<f64> {
    let bound = perturbation_bound(eta, config)?;
    Ok((bound * 100.0).floor() / 100.0)
}

pub fn i_scan(eta: f64, n: usize, config: &ModelConfig) -> Result<IScan> {
    let x_max = i_scan_range(eta, config)?;
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(Error::domain(format!(
            "no admissible perturbation range at eta = {eta}"
        )));
    }
    let curve = i_curve(eta, x_max, n, config)?;
    let idx = curve.argmin().expect("non-empty scan");
    let argmin_x = curve.samples[idx].x;
    let at_zero = curve.samples.iter().find(|s| s.x == 0.0).map(|s| s.value);
    let min_at_zero = match at_zero {
        Some(i0) => argmin_x == 0.0 && curve.samples.iter().all(|s| s.value >= i0),
        None => false,
    };
    Ok(IScan {
        eta,
        x_max,
        curve,
        argmin_x,
        min_at_zero,
    })
}

/// Saddle-point summary: maximiser of `J`, endpoint slopes, and the `I(x)`
/// check at the maximiser.
#[derive(Debug, Clone, PartialEq)]
pub struct SaddleReport {
    pub classification: Existence,
    /// Maximiser of `J` over `[a, R]`.
    pub eta_star: f64,
    /// Shock radius from the H-curve crossing, when one exists.
    pub r_s_exact: Option<f64>,
    /// Closed-form `J'/2π` at `η = a`.
    pub j_prime_at_a: f64,
    /// Closed-form `J'/2π` at `η = R`.
    pub j_prime_at_r: f64,
    pub j_curve: SweepResult,
    /// `None` when the subsonic region at `eta_star` is empty.
    pub i_scan: Option<IScan>,
}

impl SaddleReport {
    pub fn i_min_at_zero(&self) -> Option<bool> {
        self.i_scan.as_ref().map(|s| s.min_at_zero)
    }

    /// `|eta_star − r_s|` when both exist.
    pub fn cross_check_gap(&self) -> Option<f64> {
        self.r_s_exact.map(|r| (self.eta_star - r).abs())
    }
}

/// Maximiser of `J` from a sweep, refined in the interior by root-finding
/// the quadrature-only derivative [`j_prime_by_quadrature`]. Independent of
/// the H-curve construction.
pub fn maximise_j(config: &ModelConfig, sweep: &SweepResult) -> Result<f64> {
    let idx = sweep
        .argmax()
        .ok_or_else(|| Error::domain("empty J sweep"))?;
    let last = sweep.len() - 1;
    if idx == 0 || idx == last {
        return Ok(sweep.samples[idx].x);
    }
    let lo = sweep.samples[idx - 1].x;
    let hi = sweep.samples[idx + 1].x;
    let h = FD_STEP.min(0.25 * (hi - lo));
    let fd = |eta: f64| j_prime_by_quadrature(eta, h, config);
    let (f_lo, f_hi) = (fd(lo)?, fd(hi)?);
    if !(f_lo > 0.0 && f_hi < 0.0) {
        // Flat or noisy neighbourhood; the grid maximiser is the best estimate.
        return Ok(sweep.samples[idx].x);
    }
    let bracket = Bracket::with_tolerance(lo, hi, config.tolerances().root_tol, DEFAULT_MAX_ITER)?;
    Ok(try_find_root(fd, &bracket)?.x)
}

pub fn saddle_report(config: &ModelConfig, sweep_n: usize) -> Result<SaddleReport> {
    let existence = existence_report(config)?;
    let j_curve = j_curve(config, sweep_n)?;
    let eta_star = maximise_j(config, &j_curve)?;
    let r_s_exact = match existence.classification {
        Existence::Transonic => Some(locate_shock(config)?.r_s),
        _ => None,
    };
    let i_scan = if eta_star > config.a() {
        Some(i_scan(eta_star, DEFAULT_I_SCAN_POINTS, config)?)
    } else {
        None
    };
    Ok(SaddleReport {
        classification: existence.classification,
        eta_star,
        r_s_exact,
        j_prime_at_a: j_prime(config.a(), config)?,
        j_prime_at_r: j_prime(config.r_outer(), config)?,
        j_curve,
        i_scan,
    })
}
