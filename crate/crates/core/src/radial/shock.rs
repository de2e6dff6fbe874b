use crate::error::{Error, Result};
use crate::gas::RadialState;
use crate::numerics::{try_find_root, Bracket, DEFAULT_MAX_ITER};

use super::branch::BranchKind;
use super::config::ModelConfig;
use super::profile::ProfileSample;

/// Jump residuals across a candidate shock radius, supersonic side minus
/// subsonic side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhResiduals {
    /// `ρ₁V₁ − ρ₂V₂`
    pub mass: f64,
    /// `(ρ₁V₁² + p₁) − (ρ₂V₂² + p₂)`
    pub momentum: f64,
    /// `(½V₁² + ι₁) − (½V₂² + ι₂)`
    pub energy: f64,
    /// `V₁V₂ − c*²`
    pub prandtl: f64,
}

impl RhResiduals {
    pub fn max_abs(&self) -> f64 {
        self.mass
            .abs()
            .max(self.momentum.abs())
            .max(self.energy.abs())
            .max(self.prandtl.abs())
    }
}

/// Shock radius with the limiting states on either side.
#[derive(Debug, Clone, PartialEq)]
pub struct ShockSolution {
    pub r_s: f64,
    /// Width of the final sign-changing bracket of the shock search.
    pub r_s_uncertainty: f64,
    /// `H^sup(k0, r_s) − H^sub(k_a, r_s)`.
    pub h_gap: f64,
    /// Supersonic side (upstream, `r → r_s⁺`).
    pub state1: RadialState,
    /// Subsonic side (downstream, `r → r_s⁻`).
    pub state2: RadialState,
    pub residuals: RhResiduals,
    /// Sampled piecewise profile on `[a, R]`; empty unless produced by
    /// [`assemble_solution`](super::assemble_solution).
    pub profile: Vec<ProfileSample>,
}

impl ShockSolution {
    /// `ρ₂/ρ₁`, which equals `V₁/V₂` by mass conservation.
    pub fn compression_ratio(&self) -> f64 {
        self.state2.rho / self.state1.rho
    }
}

fn h_gap(config: &ModelConfig, r: f64) -> Result<f64> {
    Ok(config.momentum_flux_h(BranchKind::Sup, r)? - config.momentum_flux_h(BranchKind::Sub, r)?)
}

/// Finds the unique crossing of `H^sup(k0, ·)` and `H^sub(k_a, ·)` on `[a, R]`.
pub fn locate_shock(config: &ModelConfig) -> Result<ShockSolution> {
    let (a, r_outer) = (config.a(), config.r_outer());
    let g_a = h_gap(config, a)?;
    let g_r = h_gap(config, r_outer)?;
    if g_a.signum() == g_r.signum() || g_a == 0.0 || g_r == 0.0 {
        // A crossing exactly on the boundary is not an interior shock.
        return Err(Error::NoCrossing { g_a, g_r });
    }

    let bracket =
        Bracket::with_tolerance(a, r_outer, config.tolerances().root_tol, DEFAULT_MAX_ITER)?;
    let root = try_find_root(|r| h_gap(config, r), &bracket)?;
    let r_s = root.x;

    let state1 = config.branch_state(BranchKind::Sup, r_s)?;
    let state2 = config.branch_state(BranchKind::Sub, r_s)?;
    Ok(ShockSolution {
        r_s,
        r_s_uncertainty: root.width,
        h_gap: root.f_x,
        residuals: residuals_of(config, &state1, &state2),
        state1,
        state2,
        profile: Vec::new(),
    })
}

fn residuals_of(config: &ModelConfig, s1: &RadialState, s2: &RadialState) -> RhResiduals {
    RhResiduals {
        mass: s1.mass_flux() - s2.mass_flux(),
        momentum: s1.momentum_flux() - s2.momentum_flux(),
        energy: s1.total_enthalpy() - s2.total_enthalpy(),
        prandtl: s1.speed * s2.speed - config.params().c_star_sq(),
    }
}

/// Jump residuals evaluated at an arbitrary radius. Mass and energy vanish
/// at every radius; momentum and the Prandtl product only at the shock.
pub fn rh_residuals(r: f64, config: &ModelConfig) -> Result<RhResiduals> {
    let s1 = config.branch_state(BranchKind::Sup, r)?;
    let s2 = config.branch_state(BranchKind::Sub, r)?;
    Ok(residuals_of(config, &s1, &s2))
}

/// Natural boundary condition of the variational functional on the free
/// boundary, `p + ρφ_r² − (p^sup + ρφ_rφ^sup_r)`, with `ρ, p, φ_r` taken on
/// the subsonic side.
pub fn variational_jump_residual(r: f64, config: &ModelConfig) -> Result<f64> {
    let s1 = config.branch_state(BranchKind::Sup, r)?;
    let s2 = config.branch_state(BranchKind::Sub, r)?;
    Ok(s2.p + s2.rho * s2.speed * s2.speed - (s1.p + s2.rho * s2.speed * s1.speed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Existence {
    /// The H-curves cross inside the annulus.
    Transonic,
    /// `H_C ≥ H_D`: no crossing; the reduced functional is maximal at `R`.
    SubsonicOnly,
    /// `H_A ≥ H_B`: no crossing; the reduced functional is maximal at `a`.
    SupersonicOnly,
}

/// Classification together with the quantities it was decided from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExistenceReport {
    pub classification: Existence,
    pub k0: f64,
    pub k_a: f64,
    pub k_max_a: f64,
    pub nu: f64,
    /// `H^sub(k_a, a)`
    pub h_a: f64,
    /// `H^sup(k0, a)`
    pub h_b: f64,
    /// `H^sup(k0, R)`
    pub h_c: f64,
    /// `H^sub(k_a, R)`
    pub h_d: f64,
    /// `V^sub(k_a, R) V^sup(k0, R)`; a crossing needs this below `c*²`.
    pub outer_speed_product: f64,
    /// `V^sup(k0, a) V^sub(k_a, a)`; a crossing needs this above `c*²`.
    pub inner_speed_product: f64,
    /// `k0 < k_a`
    pub entropy_increases: bool,
    /// `k_a < k_max(a)`
    pub k_a_below_max: bool,
    /// `v_a > ν`
    pub v_a_above_nu: bool,
}

impl ExistenceReport {
    /// Necessary conditions; they do not imply a crossing.
    pub fn necessary_conditions_hold(&self) -> bool {
        self.entropy_increases && self.k_a_below_max && self.v_a_above_nu
    }
}

pub fn existence_report(config: &ModelConfig) -> Result<ExistenceReport> {
    let (a, r_outer) = (config.a(), config.r_outer());
    let params = config.params();
    let sup_a = config.branch_speed(BranchKind::Sup, a)?;
    let sub_a = config.branch_speed(BranchKind::Sub, a)?;
    let sup_r = config.branch_speed(BranchKind::Sup, r_outer)?;
    let sub_r = config.branch_speed(BranchKind::Sub, r_outer)?;
    let h = |v| super::branch::momentum_flux_of_speed(params, v);
    let (h_a, h_b, h_c, h_d) = (h(sub_a), h(sup_a), h(sup_r), h(sub_r));

    let crosses_inner = h_b > h_a;
    let crosses_outer = h_d > h_c;
    let classification = match (crosses_inner, crosses_outer) {
        (true, true) => Existence::Transonic,
        (true, false) => Existence::SubsonicOnly,
        (false, true) => Existence::SupersonicOnly,
        (false, false) => {
            // H^sub is strictly steeper than H^sup, so this ordering is impossible.
            return Err(Error::Internal(format!(
                "H_A = {h_a} >= H_B = {h_b} and H_C = {h_c} >= H_D = {h_d} at once"
            )));
        }
    };

    let k_max_a = params.k_max_at_radius(a)?;
    Ok(ExistenceReport {
        classification,
        k0: config.k0(),
        k_a: config.k_a(),
        k_max_a,
        nu: config.nu(),
        h_a,
        h_b,
        h_c,
        h_d,
        outer_speed_product: sub_r * sup_r,
        inner_speed_product: sup_a * sub_a,
        entropy_increases: config.k0() < config.k_a(),
        k_a_below_max: config.k_a() < k_max_a,
        v_a_above_nu: config.v_a() > config.nu(),
    })
}
