use crate::error::{Error, Result};
use crate::gas::{GasParameters, Regime};
use crate::numerics::{QuadratureSpec, DEFAULT_ROOT_TOL};

use super::branch::{branch_speed_for, BranchKind};

/// Numerical tolerances used by the model-level solvers.
///
/// `root_tol` governs the outer searches (shock radius, maximiser of the
/// reduced functional). Branch speeds are always resolved to machine
/// precision because every other quantity is built on them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub root_tol: f64,
    pub quad: QuadratureSpec,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            root_tol: DEFAULT_ROOT_TOL,
            quad: QuadratureSpec::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlowMode {
    /// Boundary data at both `r = a` and `r = R`.
    Transonic,
    /// Data at `r = R` ignored and the upstream entropy constant set equal to
    /// `k_a`.
    SubsonicOnly,
}

/// One experiment: gas constants, annulus and boundary speeds, with the
/// derived entropy constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelConfig {
    params: GasParameters,
    a: f64,
    r_outer: f64,
    v_a: f64,
    v_0: f64,
    k0: f64,
    k_a: f64,
    mode: FlowMode,
    tolerances: Tolerances,
}

/// Builds and validates a transonic-mode configuration from raw inputs.
pub fn make_config(
    gamma: f64,
    c_star_sq: f64,
    m0: f64,
    a: f64,
    r_outer: f64,
    v_a: f64,
    v_0: f64,
) -> Result<ModelConfig> {
    ModelConfig::new(
        GasParameters::new(gamma, c_star_sq, m0)?,
        a,
        r_outer,
        v_a,
        v_0,
    )
}

fn check_geometry(a: f64, r_outer: f64, v_a: f64) -> Result<()> {
    if !(a.is_finite() && r_outer.is_finite() && a > 0.0 && a < r_outer) {
        return Err(Error::domain(format!(
            "radii must satisfy 0 < a < R, got a = {a}, R = {r_outer}"
        )));
    }
    if !(v_a.is_finite() && v_a > 0.0) {
        return Err(Error::domain(format!("v_a must be positive, got {v_a}")));
    }
    Ok(())
}

impl ModelConfig {
    pub fn new(params: GasParameters, a: f64, r_outer: f64, v_a: f64, v_0: f64) -> Result<Self> {
        check_geometry(a, r_outer, v_a)?;
        if !(v_0.is_finite() && v_0 > 0.0) {
            return Err(Error::domain(format!("v_0 must be positive, got {v_0}")));
        }
        if params.classify_regime(v_a) != Regime::Subsonic {
            return Err(Error::Regime(format!(
                "v_a = {v_a} must be subsonic (c* = {})",
                params.c_star()
            )));
        }
        if params.classify_regime(v_0) != Regime::Supersonic {
            return Err(Error::Regime(format!(
                "v_0 = {v_0} must be supersonic (c* = {})",
                params.c_star()
            )));
        }
        if v_0 * v_0 >= params.q_hat0_sq() {
            return Err(Error::Regime(format!(
                "v_0 = {v_0} must stay below the vacuum speed {}",
                params.q_hat0()
            )));
        }
        let k0 = params.entropy_from_state(v_0, r_outer)?;
        let k_a = params.entropy_from_state(v_a, a)?;
        let k_max_a = params.k_max_at_radius(a)?;
        if !(k0 < k_max_a) {
            return Err(Error::Persistence { k0, k_max_a });
        }
        Ok(ModelConfig {
            params,
            a,
            r_outer,
            v_a,
            v_0,
            k0,
            k_a,
            mode: FlowMode::Transonic,
            tolerances: Tolerances::default(),
        })
    }

    /// Subsonic-everywhere demonstration: `k0 = k_a` and the outer boundary
    /// speed is whatever the supersonic branch gives at `R` with that entropy.
    pub fn subsonic_only(params: GasParameters, a: f64, r_outer: f64, v_a: f64) -> Result<Self> {
        check_geometry(a, r_outer, v_a)?;
        if params.classify_regime(v_a) != Regime::Subsonic {
            return Err(Error::Regime(format!(
                "v_a = {v_a} must be subsonic (c* = {})",
                params.c_star()
            )));
        }
        let k_a = params.entropy_from_state(v_a, a)?;
        let v_0 = branch_speed_for(&params, BranchKind::Sup, k_a, r_outer)?;
        Ok(ModelConfig {
            params,
            a,
            r_outer,
            v_a,
            v_0,
            k0: k_a,
            k_a,
            mode: FlowMode::SubsonicOnly,
            tolerances: Tolerances::default(),
        })
    }

    pub fn with_tolerances(mut self, tolerances: Tolerances) -> Result<Self> {
        if !(tolerances.root_tol > 0.0) {
            return Err(Error::domain(format!(
                "root tolerance must be positive, got {}",
                tolerances.root_tol
            )));
        }
        tolerances.quad.validate()?;
        self.tolerances = tolerances;
        Ok(self)
    }

    pub fn params(&self) -> &GasParameters {
        &self.params
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Outer radius `R`.
    pub fn r_outer(&self) -> f64 {
        self.r_outer
    }

    pub fn v_a(&self) -> f64 {
        self.v_a
    }

    pub fn v_0(&self) -> f64 {
        self.v_0
    }

    /// Upstream (supersonic) entropy constant.
    pub fn k0(&self) -> f64 {
        self.k0
    }

    /// Downstream (subsonic) entropy constant.
    pub fn k_a(&self) -> f64 {
        self.k_a
    }

    pub fn mode(&self) -> FlowMode {
        self.mode
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tolerances
    }

    /// Upstream density `ρ₀ = M₀/(R v_0)`.
    pub fn rho0(&self) -> f64 {
        self.params.m0() / (self.r_outer * self.v_0)
    }

    /// Density at the inner wall, `ρ_a = M₀/(a v_a)`.
    pub fn rho_a(&self) -> f64 {
        self.params.m0() / (self.a * self.v_a)
    }

    /// Lower bound `ν = c* sqrt((γ−1)/(γ+1))` that `v_a` must exceed for a
    /// shock to be possible.
    pub fn nu(&self) -> f64 {
        let g = self.params.gamma();
        self.params.c_star() * ((g - 1.0) / (g + 1.0)).sqrt()
    }

    pub fn entropy_of(&self, branch: BranchKind) -> f64 {
        match branch {
            BranchKind::Sup => self.k0,
            BranchKind::Sub => self.k_a,
        }
    }

    fn check_radius(&self, r: f64) -> Result<()> {
        let slack = 4.0 * f64::EPSILON * self.r_outer;
        if r.is_finite() && r >= self.a - slack && r <= self.r_outer + slack {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "radius {r} lies outside the annulus [{}, {}]",
                self.a, self.r_outer
            )))
        }
    }

    /// Speed on the given branch at radius `r ∈ [a, R]`, using the branch's
    /// own entropy constant.
    pub fn branch_speed(&self, branch: BranchKind, r: f64) -> Result<f64> {
        self.check_radius(r)?;
        branch_speed_for(&self.params, branch, self.entropy_of(branch), r)
    }

    /// `H = M₀(γ+1)/(2γ)(c*²/V + V)` on the given branch, equal to `r(ρv² + p)`.
    pub fn momentum_flux_h(&self, branch: BranchKind, r: f64) -> Result<f64> {
        let v = self.branch_speed(branch, r)?;
        Ok(super::branch::momentum_flux_of_speed(&self.params, v))
    }

    /// Full flow state on a branch.
    pub fn branch_state(&self, branch: BranchKind, r: f64) -> Result<crate::gas::RadialState> {
        let v = self.branch_speed(branch, r)?;
        self.params.state_from_flux(v, self.entropy_of(branch), r)
    }

    /// Pressure on a branch, from the speed-only formula.
    pub fn branch_pressure(&self, branch: BranchKind, r: f64) -> Result<f64> {
        let v = self.branch_speed(branch, r)?;
        self.params.pressure_from_speed(v, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn standard_entropy_constants() {
        let c = make_config(3.0, 1.0, 1.0, 5.0, 6.0, 0.7f64.sqrt(), 1.8f64.sqrt()).unwrap();
        assert!(rel(c.k0(), 4.32) < 1e-12);
        assert!(rel(c.k_a(), 91.0 / 12.0) < 1e-12);
        assert!(rel(c.rho0(), 1.0 / (6.0 * 1.8f64.sqrt())) < 1e-15);
        assert!((c.rho_a() - 0.239046).abs() < 1e-6);
        assert!(rel(c.nu(), 0.5f64.sqrt()) < 1e-15);
        assert_eq!(c.mode(), FlowMode::Transonic);
    }

    #[test]
    fn larger_va_entropy() {
        let c = make_config(3.0, 1.0, 1.0, 5.0, 6.0, 0.95f64.sqrt(), 1.8f64.sqrt()).unwrap();
        assert!(rel(c.k_a(), 8.3125) < 1e-12);
        assert!(rel(c.k0(), 4.32) < 1e-12);
    }

    #[test]
    fn regime_errors() {
        let err = make_config(3.0, 1.0, 1.0, 5.0, 6.0, 1.5f64.sqrt(), 1.8f64.sqrt()).unwrap_err();
        assert!(matches!(err, Error::Regime(_)), "{err}");
        let err = make_config(3.0, 1.0, 1.0, 5.0, 6.0, 0.7f64.sqrt(), 0.9f64.sqrt()).unwrap_err();
        assert!(matches!(err, Error::Regime(_)), "{err}");
        let err = make_config(3.0, 1.0, 1.0, 5.0, 6.0, 0.7f64.sqrt(), 1.5).unwrap_err();
        assert!(matches!(err, Error::Regime(_)), "{err}");
        let err = make_config(3.0, 1.0, 1.0, 5.0, 6.0, 1.0, 1.8f64.sqrt()).unwrap_err();
        assert!(matches!(err, Error::Regime(_)), "{err}");
    }

    #[test]
    fn geometry_errors() {
        assert!(matches!(
            make_config(3.0, 1.0, 1.0, 6.0, 5.0, 0.7f64.sqrt(), 1.8f64.sqrt()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            make_config(3.0, 1.0, 1.0, 5.0, 6.0, 0.0, 1.8f64.sqrt()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn persistence_error() {
        // Barely supersonic inflow chokes long before reaching a small inner radius.
        let err = make_config(3.0, 1.0, 1.0, 2.0, 6.0, 0.7f64.sqrt(), 1.1f64.sqrt()).unwrap_err();
        assert!(matches!(err, Error::Persistence { .. }), "{err}");
    }

    #[test]
    fn subsonic_only_sets_equal_entropies() {
        let p = GasParameters::new(3.0, 1.0, 1.0).unwrap();
        let c = ModelConfig::subsonic_only(p, 5.0, 6.0, 0.7f64.sqrt()).unwrap();
        assert_eq!(c.k0(), c.k_a());
        assert!(rel(c.k_a(), 91.0 / 12.0) < 1e-12);
        assert_eq!(c.mode(), FlowMode::SubsonicOnly);
        assert!(c.v_0() > 1.0);
    }

    #[test]
    fn branch_speed_rejects_outside_annulus() {
        let c = make_config(3.0, 1.0, 1.0, 5.0, 6.0, 0.7f64.sqrt(), 1.8f64.sqrt()).unwrap();
        assert!(matches!(
            c.branch_speed(BranchKind::Sub, 4.9),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            c.branch_speed(BranchKind::Sup, 6.1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn tolerance_overrides_are_validated() {
        let c = make_config(3.0, 1.0, 1.0, 5.0, 6.0, 0.7f64.sqrt(), 1.8f64.sqrt()).unwrap();
        let bad = Tolerances {
            root_tol: 0.0,
            ..Tolerances::default()
        };
        assert!(c.with_tolerances(bad).is_err());
        let ok = Tolerances {
            root_tol: 1e-3,
            ..Tolerances::default()
        };
        assert_eq!(c.with_tolerances(ok).unwrap().tolerances().root_tol, 1e-3);
    }
}
