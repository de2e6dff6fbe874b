//! Exact solution of the radial model problem in the annulus `a < r < R`.
//!
//! Supersonic gas enters at `r = R` with speed `v_0` and entropy constant
//! `k0`; the subsonic state behind the shock is pinned by the speed `v_a` at
//! `r = a`, which fixes the downstream entropy constant `k_a`. The shock sits
//! where the momentum-flux curves `H^sup(k0, r)` and `H^sub(k_a, r)` cross.

mod branch;
mod config;
mod profile;
mod shock;

pub use branch::{branch_speed_for, momentum_flux_of_speed, BranchKind};
pub use config::{make_config, FlowMode, ModelConfig, Tolerances};
pub use profile::{assemble_solution, supersonic_potential, ProfileSample};
pub use shock::{
    existence_report, locate_shock, rh_residuals, variational_jump_residual, Existence,
    ExistenceReport, RhResiduals, ShockSolution,
};
