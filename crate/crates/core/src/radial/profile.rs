use crate::error::Result;
use crate::numerics::{try_integrate, uniform_grid};

use super::branch::BranchKind;
use super::config::ModelConfig;
use super::shock::{locate_shock, ShockSolution};

/// One row of the assembled piecewise solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub r: f64,
    pub branch: BranchKind,
    pub speed: f64,
    pub rho: f64,
    pub p: f64,
    pub k: f64,
    /// Velocity potential, normalised by `φ(R) = 0` and `φ_r = V`.
    pub phi: f64,
}

/// The obstacle `φ^sup(r) = −∫_r^R V^sup(k0, s) ds`.
pub fn supersonic_potential(r: f64, config: &ModelConfig) -> Result<f64> {
    let quad = config.tolerances().quad;
    let tail = try_integrate(
        |s| config.branch_speed(BranchKind::Sup, s),
        r,
        config.r_outer(),
        &quad,
    )?;
    Ok(-tail)
}

/// Locates the shock and samples the full solution on `n_samples` uniform
/// radii, with the shock radius inserted twice (subsonic limit first).
///
/// The potential is accumulated segment by segment from `φ(R) = 0` inward,
/// switching from the supersonic to the subsonic speed at the shock, so it is
/// continuous there by construction.
pub fn assemble_solution(config: &ModelConfig, n_samples: usize) -> Result<ShockSolution> {
    let mut solution = locate_shock(config)?;
    let r_s = solution.r_s;

    let mut nodes: Vec<(f64, BranchKind)> = Vec::with_capacity(n_samples + 2);
    let grid = uniform_grid(config.a(), config.r_outer(), n_samples)?;
    let mut inserted = false;
    for r in grid {
        if !inserted && r >= r_s {
            nodes.push((r_s, BranchKind::Sub));
            nodes.push((r_s, BranchKind::Sup));
            inserted = true;
            if r == r_s {
                continue;
            }
        }
        let branch = if r < r_s {
            BranchKind::Sub
        } else {
            BranchKind::Sup
        };
        nodes.push((r, branch));
    }

    let quad = config.tolerances().quad;
    let mut phis = vec![0.0; nodes.len()];
    for i in (0..nodes.len().saturating_sub(1)).rev() {
        let (lo, _) = nodes[i];
        // Left of the shock every segment ends on a subsonic node; the
        // zero-length segment between the two shock rows contributes nothing.
        let (hi, branch) = nodes[i + 1];
        let seg = try_integrate(|s| config.branch_speed(branch, s), lo, hi, &quad)?;
        phis[i] = phis[i + 1] - seg;
    }

    solution.profile = nodes
        .iter()
        .zip(phis)
        .map(|(&(r, branch), phi)| {
            let state = config.branch_state(branch, r)?;
            Ok(ProfileSample {
                r,
                branch,
                speed: state.speed,
                rho: state.rho,
                p: state.p,
                k: state.k,
                phi,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(solution)
}
