use std::fmt;

use crate::error::{Error, Result};
use crate::gas::GasParameters;
use crate::numerics::{find_root, Bracket, NumericsError};

/// Which root of the entropy curve `k(V)` at fixed radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchKind {
    /// Supersonic root, `V > c*`.
    Sup,
    /// Subsonic root, `V < c*`.
    Sub,
}

impl fmt::Display for BranchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BranchKind::Sup => "supersonic",
            BranchKind::Sub => "subsonic",
        })
    }
}

// Offset of the initial brackets from c* and from the vacuum speed.
const BRACKET_EPS: f64 = 1e-9;
const MAX_EXPANSIONS: usize = 64;

/// Solves `entropy_from_state(V, r) = k` for the root on `branch`.
///
/// The entropy curve is single-peaked at `V = c*` with peak
/// `k_max_at_radius(r)`, so each side holds exactly one root when `k` is
/// below the peak and none otherwise (the flow chokes).
pub fn branch_speed_for(params: &GasParameters, branch: BranchKind, k: f64, r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain(format!("radius must be positive, got {r}")));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::domain(format!(
            "entropy constant must be positive, got {k}"
        )));
    }
    let k_max = params.k_max_at_radius(r)?;
    let no_root = || Error::NoRoot {
        branch,
        r,
        k,
        k_max,
    };
    if k >= k_max {
        return Err(no_root());
    }

    // Scaled residual; positive between the two roots.
    let residual = |v: f64| match params.entropy_from_state(v, r) {
        Ok(kv) => kv / k - 1.0,
        Err(_) => -1.0,
    };

    let c_star = params.c_star();
    let q_hat0 = params.q_hat0();
    let (mut lo, mut hi) = match branch {
        BranchKind::Sub => (BRACKET_EPS * c_star, c_star * (1.0 - BRACKET_EPS)),
        BranchKind::Sup => (c_star * (1.0 + BRACKET_EPS), q_hat0 * (1.0 - BRACKET_EPS)),
    };

    match branch {
        BranchKind::Sub => {
            if residual(hi) <= 0.0 {
                return Err(no_root());
            }
            let mut expansions = 0;
            while residual(lo) >= 0.0 {
                expansions += 1;
                if expansions > MAX_EXPANSIONS {
                    return Err(no_root());
                }
                lo /= 16.0;
            }
        }
        BranchKind::Sup => {
            if residual(lo) <= 0.0 {
                return Err(no_root());
            }
            let mut expansions = 0;
            while residual(hi) >= 0.0 {
                expansions += 1;
                if expansions > MAX_EXPANSIONS {
                    return Err(no_root());
                }
                hi = q_hat0 - (q_hat0 - hi) / 16.0;
            }
        }
    }

    // The subsonic root can sit far below c* for tiny k; lo bounds it from below.
    let tol_x = f64::EPSILON * lo.min(c_star);
    let bracket = Bracket::with_tolerance(lo, hi, tol_x, 400)?;
    let root = find_root(residual, &bracket).map_err(|e| match e {
        NumericsError::NoSignChange { .. } => no_root(),
        other => other.into(),
    })?;
    Ok(root.x)
}

/// `M₀(γ+1)/(2γ) (c*²/V + V)`; minimal at `V = c*`.
pub fn momentum_flux_of_speed(params: &GasParameters, speed: f64) -> f64 {
    let g = params.gamma();
    params.m0() * (g + 1.0) / (2.0 * g) * (params.c_star_sq() / speed + speed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::make_config;

    fn standard() -> crate::radial::ModelConfig {
        make_config(3.0, 1.0, 1.0, 5.0, 6.0, 0.7f64.sqrt(), 1.8f64.sqrt()).unwrap()
    }

    // Closed form for γ = 3: V⁴ − q̂₀²V² + 3k(M₀/r)² = 0.
    fn gamma3_closed_form(q2: f64, k: f64, m0: f64, r: f64, plus: bool) -> f64 {
        let disc = (q2 * q2 - 12.0 * k * (m0 / r).powi(2)).sqrt();
        let v_sq = if plus {
            (q2 + disc) / 2.0
        } else {
            (q2 - disc) / 2.0
        };
        v_sq.sqrt()
    }

    #[test]
    fn boundary_speeds_are_recovered() {
        let c = standard();
        let sup_r = c.branch_speed(BranchKind::Sup, 6.0).unwrap();
        assert!((sup_r - 1.8f64.sqrt()).abs() < 1e-13, "{sup_r}");
        let sub_a = c.branch_speed(BranchKind::Sub, 5.0).unwrap();
        assert!((sub_a - 0.7f64.sqrt()).abs() < 1e-13, "{sub_a}");
    }

    #[test]
    fn subsonic_speed_at_outer_radius() {
        let c = standard();
        let v = c.branch_speed(BranchKind::Sub, 6.0).unwrap();
        let oracle = gamma3_closed_form(2.0, 91.0 / 12.0, 1.0, 6.0, false);
        assert!((v - oracle).abs() < 1e-12);
        assert!((v - 0.627155).abs() < 1e-6);
    }

    #[test]
    fn closed_form_agrees_across_annulus() {
        let c = standard();
        for i in 0..=100 {
            let r = 5.0 + i as f64 / 100.0;
            let sup = c.branch_speed(BranchKind::Sup, r).unwrap();
            let sub = c.branch_speed(BranchKind::Sub, r).unwrap();
            assert!((sup - gamma3_closed_form(2.0, c.k0(), 1.0, r, true)).abs() < 1e-10);
            assert!((sub - gamma3_closed_form(2.0, c.k_a(), 1.0, r, false)).abs() < 1e-10);
        }
    }

    #[test]
    fn choking_gives_no_root() {
        let p = GasParameters::new(3.0, 1.0, 1.0).unwrap();
        let k_max = p.k_max_at_radius(5.0).unwrap();
        for branch in [BranchKind::Sup, BranchKind::Sub] {
            let err = branch_speed_for(&p, branch, k_max * 1.01, 5.0).unwrap_err();
            assert!(matches!(err, Error::NoRoot { .. }), "{err}");
            let err = branch_speed_for(&p, branch, k_max, 5.0).unwrap_err();
            assert!(matches!(err, Error::NoRoot { .. }), "{err}");
        }
    }

    #[test]
    fn tiny_entropy_still_brackets() {
        let p = GasParameters::new(1.4, 1.0, 1.0).unwrap();
        let sub = branch_speed_for(&p, BranchKind::Sub, 1e-12, 5.0).unwrap();
        let sup = branch_speed_for(&p, BranchKind::Sup, 1e-12, 5.0).unwrap();
        assert!(sub > 0.0 && sub < p.c_star());
        assert!(sup > p.c_star() && sup < p.q_hat0());
        assert!((p.entropy_from_state(sub, 5.0).unwrap() / 1e-12 - 1.0).abs() < 1e-9);
        // Here q̂₀ − V ≈ 5e-13, so one ulp of V moves k by about 1e-3.
        assert!((p.entropy_from_state(sup, 5.0).unwrap() / 1e-12 - 1.0).abs() < 1e-2);
    }

    #[test]
    fn momentum_flux_examples() {
        let c = standard();
        let h_c = c.momentum_flux_h(BranchKind::Sup, 6.0).unwrap();
        let state = c.branch_state(BranchKind::Sup, 6.0).unwrap();
        assert!((h_c - 6.0 * state.momentum_flux()).abs() < 1e-12);
        assert!((h_c - 1.391331).abs() < 1e-6);
        let h_a = c.momentum_flux_h(BranchKind::Sub, 5.0).unwrap();
        let state = c.branch_state(BranchKind::Sub, 5.0).unwrap();
        assert!((h_a - 5.0 * state.momentum_flux()).abs() < 1e-12);
        assert!((h_a - 1.354593).abs() < 1e-6);
    }

    #[test]
    fn momentum_flux_minimised_at_sonic_speed() {
        let p = GasParameters::new(3.0, 1.0, 1.0).unwrap();
        let floor = p.m0() * (p.gamma() + 1.0) * p.c_star() / p.gamma();
        assert!((momentum_flux_of_speed(&p, p.c_star()) - floor).abs() < 1e-15);
        for i in 1..200 {
            let v = p.q_hat0() * i as f64 / 200.0;
            if (v - p.c_star()).abs() > 1e-9 {
                assert!(momentum_flux_of_speed(&p, v) > floor);
            }
        }
    }
}
