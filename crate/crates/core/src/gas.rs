//! Dimensionless state relations for a polytropic gas `p = k ρ^γ` under the
//! Bernoulli law `½V² + c²/(γ−1) = ½q̂₀²`.
//!
//! Speeds are stored as magnitudes `V = |v|`; radial velocities point inward,
//! so the signed velocity is `v = −V`.

use crate::error::{Error, Result};

/// Relative band around `c*²` inside which a speed counts as sonic.
pub const SONIC_REL_TOL: f64 = 1e-12;

// Slack allowed when `V²` overshoots `q̂₀²` by rounding, e.g. `sqrt(2)^2`.
const VACUUM_SLACK: f64 = 8.0 * f64::EPSILON;

/// Gas constants shared by every other module.
///
/// Built from `c*²`; the Bernoulli constant is derived as
/// `q̂₀² = c*² (γ+1)/(γ−1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasParameters {
    gamma: f64,
    q_hat0_sq: f64,
    c_star_sq: f64,
    m0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Subsonic,
    Sonic,
    Supersonic,
}

/// One point of a radial flow.
///
/// States off a branch solution are representable; `bernoulli_residual`
/// records how far the state is from satisfying the Bernoulli law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialState {
    pub r: f64,
    pub speed: f64,
    pub velocity: f64,
    pub rho: f64,
    pub p: f64,
    pub c_sq: f64,
    pub k: f64,
    /// `c²/(γ−1)`, the enthalpy per unit mass.
    pub enthalpy: f64,
    /// `½V² + c²/(γ−1) − ½q̂₀²`.
    pub bernoulli_residual: f64,
}

impl RadialState {
    /// `ρV`, the mass flux through a unit length of circle.
    pub fn mass_flux(&self) -> f64 {
        self.rho * self.speed
    }

    /// `ρV² + p`.
    pub fn momentum_flux(&self) -> f64 {
        self.rho * self.speed * self.speed + self.p
    }

    /// `½V² + ι`.
    pub fn total_enthalpy(&self) -> f64 {
        0.5 * self.speed * self.speed + self.enthalpy
    }
}

impl GasParameters {
    pub fn new(gamma: f64, c_star_sq: f64, m0: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(Error::domain(format!("gamma must exceed 1, got {gamma}")));
        }
        if !(c_star_sq.is_finite() && c_star_sq > 0.0) {
            return Err(Error::domain(format!(
                "c*^2 must be positive, got {c_star_sq}"
            )));
        }
        if !(m0.is_finite() && m0 > 0.0) {
            return Err(Error::domain(format!(
                "flux constant M0 must be positive, got {m0}"
            )));
        }
        Ok(GasParameters {
            gamma,
            q_hat0_sq: c_star_sq * (gamma + 1.0) / (gamma - 1.0),
            c_star_sq,
            m0,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn q_hat0_sq(&self) -> f64 {
        self.q_hat0_sq
    }

    /// Vacuum speed `q̂₀`.
    pub fn q_hat0(&self) -> f64 {
        self.q_hat0_sq.sqrt()
    }

    pub fn c_star_sq(&self) -> f64 {
        self.c_star_sq
    }

    pub fn c_star(&self) -> f64 {
        self.c_star_sq.sqrt()
    }

    pub fn m0(&self) -> f64 {
        self.m0
    }

    /// `(γ−1)/(2γ)`, the factor that turns `q̂₀² − V²` into `k ρ^(γ−1)`.
    fn bernoulli_factor(&self) -> f64 {
        (self.gamma - 1.0) / (2.0 * self.gamma)
    }

    /// `q̂₀² − V²`, clamped to zero within rounding of the vacuum speed.
    fn speed_deficit(&self, speed: f64) -> Result<f64> {
        let deficit = self.q_hat0_sq - speed * speed;
        if deficit >= 0.0 {
            Ok(deficit)
        } else if deficit >= -VACUUM_SLACK * self.q_hat0_sq {
            Ok(0.0)
        } else {
            Err(Error::domain(format!(
                "speed {speed} exceeds the vacuum speed {}",
                self.q_hat0()
            )))
        }
    }

    /// Sound speed squared from the Bernoulli law, `((γ−1)/2)(q̂₀² − V²)`.
    pub fn sound_speed_sq(&self, speed: f64) -> Result<f64> {
        Ok(0.5 * (self.gamma - 1.0) * self.speed_deficit(speed)?)
    }

    /// `ρ = ((1/k)((γ−1)/(2γ))(q̂₀² − V²))^(1/(γ−1))`.
    pub fn density_from_speed(&self, speed: f64, k: f64) -> Result<f64> {
        if !(speed >= 0.0) {
            return Err(Error::domain(format!(
                "speed must be non-negative, got {speed}"
            )));
        }
        if !(k > 0.0) {
            return Err(Error::domain(format!(
                "entropy constant must be positive, got {k}"
            )));
        }
        let deficit = self.speed_deficit(speed)?;
        Ok((self.bernoulli_factor() * deficit / k).powf(1.0 / (self.gamma - 1.0)))
    }

    /// Full state from the flux relation `ρ = M₀/(rV)` and `p = kρ^γ`.
    pub fn state_from_flux(&self, speed: f64, k: f64, r: f64) -> Result<RadialState> {
        if !(speed > 0.0) {
            return Err(Error::domain(format!(
                "speed must be positive, got {speed}"
            )));
        }
        if !(r > 0.0) {
            return Err(Error::domain(format!("radius must be positive, got {r}")));
        }
        if !(k > 0.0) {
            return Err(Error::domain(format!(
                "entropy constant must be positive, got {k}"
            )));
        }
        let g = self.gamma;
        let rho = self.m0 / (r * speed);
        let c_sq = g * k * rho.powf(g - 1.0);
        let enthalpy = c_sq / (g - 1.0);
        Ok(RadialState {
            r,
            speed,
            velocity: -speed,
            rho,
            p: k * rho.powf(g),
            c_sq,
            k,
            enthalpy,
            bernoulli_residual: 0.5 * speed * speed + enthalpy - 0.5 * self.q_hat0_sq,
        })
    }

    /// Entropy constant of the flux-consistent state with speed `V` at radius
    /// `r`: `k = ((γ−1)/(2γ)) (rV/M₀)^(γ−1) (q̂₀² − V²)`.
    pub fn entropy_from_state(&self, speed: f64, r: f64) -> Result<f64> {
        if !(speed > 0.0) {
            return Err(Error::domain(format!(
                "speed must be positive, got {speed}"
            )));
        }
        if !(r > 0.0) {
            return Err(Error::domain(format!("radius must be positive, got {r}")));
        }
        if speed * speed >= self.q_hat0_sq {
            return Err(Error::domain(format!(
                "speed {speed} must stay below the vacuum speed {}",
                self.q_hat0()
            )));
        }
        Ok(self.bernoulli_factor()
            * (r * speed / self.m0).powf(self.gamma - 1.0)
            * (self.q_hat0_sq - speed * speed))
    }

    /// Peak of [`entropy_from_state`](Self::entropy_from_state) over speed at
    /// fixed `r`, reached at `V = c*`: `(1/γ)(r/M₀)^(γ−1) c*^(γ+1)`.
    pub fn k_max_at_radius(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::domain(format!("radius must be positive, got {r}")));
        }
        let g = self.gamma;
        Ok((r / self.m0).powf(g - 1.0) * self.c_star().powf(g + 1.0) / g)
    }

    pub fn classify_regime(&self, speed: f64) -> Regime {
        let diff = speed * speed - self.c_star_sq;
        if diff.abs() <= SONIC_REL_TOL * self.c_star_sq {
            Regime::Sonic
        } else if diff < 0.0 {
            Regime::Subsonic
        } else {
            Regime::Supersonic
        }
    }

    /// Pressure of the flux-consistent state with speed `V` at radius `r`:
    /// `p = ((γ−1)/(2γ))(M₀/r)(q̂₀² − V²)/V`. Decreasing in `V`.
    pub fn pressure_from_speed(&self, speed: f64, r: f64) -> Result<f64> {
        if !(speed > 0.0) {
            return Err(Error::domain(format!(
                "speed must be positive, got {speed}"
            )));
        }
        if !(r > 0.0) {
            return Err(Error::domain(format!("radius must be positive, got {r}")));
        }
        let deficit = self.speed_deficit(speed)?;
        Ok(self.bernoulli_factor() * (self.m0 / r) * deficit / speed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma3() -> GasParameters {
        GasParameters::new(3.0, 1.0, 1.0).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn make_parameters_examples() {
        assert_eq!(gamma3().q_hat0_sq(), 2.0);
        assert!((GasParameters::new(1.4, 1.0, 1.0).unwrap().q_hat0_sq() - 6.0).abs() < 1e-14);
        assert!(GasParameters::new(3.0, 0.0, 1.0).is_err());
        assert!(GasParameters::new(1.0, 1.0, 1.0).is_err());
        assert!(GasParameters::new(3.0, 1.0, -1.0).is_err());
        assert!(GasParameters::new(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn c_star_relation_holds_exactly() {
        for &g in &[1.1, 1.4, 5.0 / 3.0, 2.0, 3.0] {
            let p = GasParameters::new(g, 0.7, 2.0).unwrap();
            assert!(rel(p.c_star_sq(), (g - 1.0) / (g + 1.0) * p.q_hat0_sq()) < 1e-15);
        }
    }

    #[test]
    fn density_examples() {
        let p = gamma3();
        assert_eq!(p.density_from_speed(p.q_hat0(), 3.0).unwrap(), 0.0);
        // Boundary state at r = R: flux and Bernoulli solved together.
        let v0 = 1.8f64.sqrt();
        let rho = p.density_from_speed(v0, 4.32).unwrap();
        assert!(rel(rho, 1.0 / (6.0 * v0)) < 1e-12);
        assert!((rho * v0 * 6.0 - 1.0).abs() < 1e-12);
        // Stagnation density.
        let k = 2.5;
        let stag = p.density_from_speed(0.0, k).unwrap();
        assert!(rel(stag, (2.0 * 2.0 / (2.0 * 3.0 * k)).powf(0.5)) < 1e-15);
        assert!(p.density_from_speed(1.5, 1.0).is_err());
        assert!(p.density_from_speed(0.5, 0.0).is_err());
    }

    #[test]
    fn state_from_flux_examples() {
        let p = gamma3();
        let v0 = 1.8f64.sqrt();
        let s = p.state_from_flux(v0, 4.32, 6.0).unwrap();
        assert!(rel(s.rho, 1.0 / (6.0 * v0)) < 1e-14);
        assert!(s.bernoulli_residual.abs() < 1e-12);
        assert_eq!(s.velocity, -v0);

        let va = 0.7f64.sqrt();
        let s = p.state_from_flux(va, 91.0 / 12.0, 5.0).unwrap();
        assert!(rel(s.rho, 1.0 / (5.0 * va)) < 1e-14);
        assert!((s.rho - 0.239046).abs() < 1e-6);
        assert!(s.bernoulli_residual.abs() < 1e-12);

        let s = p.state_from_flux(1.0, 1.0, 1.0).unwrap();
        assert_eq!((s.rho, s.p, s.c_sq), (1.0, 1.0, 3.0));
        assert_eq!(s.bernoulli_residual, 1.0);

        assert!(p.state_from_flux(0.0, 1.0, 1.0).is_err());
        assert!(p.state_from_flux(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn entropy_examples() {
        let p = gamma3();
        assert!(rel(p.entropy_from_state(1.8f64.sqrt(), 6.0).unwrap(), 4.32) < 1e-12);
        assert!(
            rel(
                p.entropy_from_state(0.7f64.sqrt(), 5.0).unwrap(),
                91.0 / 12.0
            ) < 1e-12
        );
        assert!(
            rel(
                p.entropy_from_state(0.4f64.sqrt(), 5.0).unwrap(),
                16.0 / 3.0
            ) < 1e-12
        );
        assert!(p.entropy_from_state(0.0, 5.0).is_err());
        assert!(p.entropy_from_state(p.q_hat0(), 5.0).is_err());
    }

    #[test]
    fn k_max_examples() {
        let p = gamma3();
        assert!(rel(p.k_max_at_radius(5.0).unwrap(), 25.0 / 3.0) < 1e-14);
        assert!(rel(p.k_max_at_radius(6.0).unwrap(), 12.0) < 1e-14);
        for &r in &[0.5, 5.0, 5.5, 17.0] {
            let at_sonic = p.entropy_from_state(p.c_star(), r).unwrap();
            assert!(rel(at_sonic, p.k_max_at_radius(r).unwrap()) < 1e-14);
        }
    }

    #[test]
    fn regime_examples() {
        let p = gamma3();
        assert_eq!(p.classify_regime(0.7f64.sqrt()), Regime::Subsonic);
        assert_eq!(p.classify_regime(1.8f64.sqrt()), Regime::Supersonic);
        assert_eq!(p.classify_regime(1.0), Regime::Sonic);
        assert_eq!(p.classify_regime(1.0 + 1e-14), Regime::Sonic);
        assert_eq!(p.classify_regime(1.0 + 1e-9), Regime::Supersonic);
    }

    #[test]
    fn pressure_examples() {
        let p = gamma3();
        assert_eq!(p.pressure_from_speed(p.q_hat0(), 6.0).unwrap(), 0.0);
        let v0 = 1.8f64.sqrt();
        let direct = p.pressure_from_speed(v0, 6.0).unwrap();
        assert!(rel(direct, (1.0 / 3.0) * (1.0 / 6.0) * 0.2 / v0) < 1e-12);
        assert!((direct - 0.0082817).abs() < 1e-7);
        let via_state = p.state_from_flux(v0, 4.32, 6.0).unwrap().p;
        assert!(rel(direct, via_state) < 1e-12);
        assert!(
            p.pressure_from_speed(0.5, 5.0).unwrap() > p.pressure_from_speed(0.9, 5.0).unwrap()
        );
        assert!(p.pressure_from_speed(0.0, 5.0).is_err());
    }

    #[test]
    fn bernoulli_identity() {
        let p = GasParameters::new(1.4, 1.3, 0.8).unwrap();
        for i in 0..50 {
            let v = p.q_hat0() * i as f64 / 50.0;
            let c_sq = p.sound_speed_sq(v).unwrap();
            let lhs = 0.5 * v * v + c_sq / (p.gamma() - 1.0);
            assert!((lhs - 0.5 * p.q_hat0_sq()).abs() < 1e-14);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn params() -> impl Strategy<Value = GasParameters> {
            (1.05f64..3.5, 0.2f64..3.0, 0.2f64..4.0)
                .prop_map(|(g, c, m)| GasParameters::new(g, c, m).unwrap())
        }

        proptest! {
            #[test]
            fn pressure_routes_agree(p in params(), t in 0.02f64..0.98, r in 0.5f64..10.0) {
                let v = t * p.q_hat0();
                let k = p.entropy_from_state(v, r).unwrap();
                let flux_route = k * (p.m0() / (r * v)).powf(p.gamma());
                let direct = p.pressure_from_speed(v, r).unwrap();
                prop_assert!(rel(direct, flux_route) < 1e-12);
            }

            #[test]
            fn density_matches_flux_on_branch(p in params(), t in 0.02f64..0.98, r in 0.5f64..10.0) {
                let v = t * p.q_hat0();
                let k = p.entropy_from_state(v, r).unwrap();
                let rho = p.density_from_speed(v, k).unwrap();
                prop_assert!(rel(rho, p.m0() / (r * v)) < 1e-10);
                let s = p.state_from_flux(v, k, r).unwrap();
                prop_assert!(s.bernoulli_residual.abs() < 1e-12 * p.q_hat0_sq());
                prop_assert!(rel(s.c_sq, p.sound_speed_sq(v).unwrap()) < 1e-10);
            }

            #[test]
            fn pressure_decreases_with_speed(p in params(), r in 0.5f64..10.0) {
                let n = 200;
                let mut prev = f64::INFINITY;
                for i in 1..=n {
                    let v = p.q_hat0() * i as f64 / n as f64;
                    let cur = p.pressure_from_speed(v, r).unwrap();
                    prop_assert!(cur < prev);
                    prev = cur;
                }
            }
        }
    }
}
