//! Acceptance criteria, one line each.
//!
//! Runs as a plain binary so every line is printed even when an earlier
//! criterion fails. Exits non-zero if any criterion fails, except those in
//! `KNOWN_UNATTAINABLE`, whose FAIL line is still printed. A known one that
//! starts passing also fails the run so the list gets revisited.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use transonic::cli::jprime_table;
use transonic::radial::{existence_report, locate_shock, make_config, Existence, ModelConfig};
use transonic::variational::{j_curve, saddle_report};
use transonic::verify::{run_suite, CheckStatus};
use transonic::{Error, GasParameters};

/// Subsonic-only mode uses one entropy constant on both branches. Then
/// `V^sup V^sub < c*²` at every radius, so `H^sub > H^sup` everywhere, `J`
/// decreases on `[a, R]` and its maximum sits at `a`, never at `R`.
const KNOWN_UNATTAINABLE: &[u32] = &[6];

type Criterion = (u32, &'static str, fn() -> Verdict);

const TIME_LIMIT: Duration = Duration::from_secs(5);

fn standard(v_a_sq: f64) -> ModelConfig {
    make_config(3.0, 1.0, 1.0, 5.0, 6.0, v_a_sq.sqrt(), 1.8f64.sqrt()).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: String) -> Verdict {
    Verdict { ok, detail }
}

fn c1() -> Verdict {
    let c = standard(0.7);
    let (e0, ea) = (rel(c.k0(), 4.32), rel(c.k_a(), 91.0 / 12.0));
    verdict(
        e0 < 1e-12 && ea < 1e-12,
        format!(
            "k0 = {:.15} (rel {e0:.1e}), k_a = {:.15} (rel {ea:.1e})",
            c.k0(),
            c.k_a()
        ),
    )
}

fn c2() -> Verdict {
    let c = standard(0.7);
    let r_s = locate_shock(&c).unwrap().r_s;
    let eta = saddle_report(&c, 2001).unwrap().eta_star;
    let (d_h, d_j, d_x) = (
        (r_s - 5.260220746).abs(),
        (eta - 5.260220746).abs(),
        (r_s - eta).abs(),
    );
    verdict(
        d_h < 1e-6 && d_j < 1e-5 && d_x < 1e-5,
        format!("H-crossing {r_s:.10} (err {d_h:.1e}), argmax J {eta:.10} (err {d_j:.1e}), gap {d_x:.1e}"),
    )
}

fn c3() -> Verdict {
    let c = standard(0.7);
    let got = jprime_table(&c).unwrap();
    let reference = [-1.28456894, -1.284568972, 0.362180988, 0.3621809759];
    let vs_ref = got
        .iter()
        .zip(reference)
        .map(|(g, p)| (g - p).abs())
        .fold(0.0, f64::max);
    let pair = (got[0] - got[1]).abs().max((got[2] - got[3]).abs());
    verdict(
        vs_ref < 1e-6 && pair < 1e-6,
        format!(
            "R: ({:.10}, {:.10}), a: ({:.10}, {:.10}); max |fd - closed| {pair:.1e}, max |value - reference| {vs_ref:.1e}",
            got[0], got[1], got[2], got[3]
        ),
    )
}

fn c4() -> Verdict {
    let c = standard(0.95);
    let r_s = locate_shock(&c).unwrap().r_s;
    let ek = rel(c.k_a(), 8.3125);
    verdict(
        ek < 1e-12 && (r_s - 5.5363).abs() < 1e-3,
        format!("k_a = {:.15} (rel {ek:.1e}), r_s = {r_s:.6}", c.k_a()),
    )
}

fn c5() -> Verdict {
    let c = standard(0.4);
    let ek = rel(c.k_a(), 16.0 / 3.0);
    let class = existence_report(&c).unwrap().classification;
    let no_cross = matches!(locate_shock(&c), Err(Error::NoCrossing { .. }));
    let sweep = j_curve(&c, 2001).unwrap();
    let at_a = sweep.argmax() == Some(0);
    let eta = saddle_report(&c, 2001).unwrap().eta_star;
    verdict(
        ek < 1e-12 && class == Existence::SupersonicOnly && no_cross && at_a && eta == c.a(),
        format!("k_a rel {ek:.1e}, {class:?}, no crossing: {no_cross}, argmax J at a: {at_a} (eta* = {eta})"),
    )
}

fn c6() -> Verdict {
    let p = GasParameters::new(3.0, 1.0, 1.0).unwrap();
    let c = ModelConfig::subsonic_only(p, 5.0, 6.0, 0.7f64.sqrt()).unwrap();
    let sweep = j_curve(&c, 2001).unwrap();
    let idx = sweep.argmax().unwrap();
    let at = sweep.samples[idx].x;
    verdict(
        idx == sweep.len() - 1,
        format!(
            "argmax of J at eta = {at} (row {idx} of {}), expected eta = R",
            sweep.len()
        ),
    )
}

fn c7() -> Verdict {
    let res = locate_shock(&standard(0.7)).unwrap().residuals;
    verdict(
        res.max_abs() < 1e-9,
        format!(
            "mass {:.1e}, momentum {:.1e}, energy {:.1e}, Prandtl {:.1e}",
            res.mass, res.momentum, res.energy, res.prandtl
        ),
    )
}

fn suite_verdict(c: &ModelConfig) -> (bool, String) {
    let report = run_suite(c, 2001).unwrap();
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|k| k.status == CheckStatus::Fail)
        .map(|k| k.name)
        .collect();
    let passed = report
        .checks
        .iter()
        .filter(|k| k.status == CheckStatus::Pass)
        .count();
    (
        failed.is_empty(),
        format!("{passed} checks passed, failed: {failed:?}"),
    )
}

fn c8() -> Verdict {
    let (ok, detail) = suite_verdict(&standard(0.7));
    verdict(ok, detail)
}

// Independent γ = 1.4 shock radius: bisection on the H gap, with branch
// speeds found by bisection on k(V) written out here from scratch.
fn gamma14_oracle(v_a: f64, v_0: f64, a: f64, r_outer: f64) -> f64 {
    let g = 1.4;
    let q2 = (g + 1.0) / (g - 1.0);
    let k = |v: f64, r: f64| (g - 1.0) / (2.0 * g) * (r * v).powf(g - 1.0) * (q2 - v * v);
    let h = |v: f64| (g + 1.0) / (2.0 * g) * (1.0 / v + v);
    let bisect = |f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64| {
        let up = f(hi) > f(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (f(mid) > 0.0) == up {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let (k0, ka) = (k(v_0, r_outer), k(v_a, a));
    let sub = |r: f64| bisect(&|v| k(v, r) - ka, 1e-12, 1.0);
    let sup = |r: f64| bisect(&|v| k(v, r) - k0, 1.0, q2.sqrt() * (1.0 - 1e-15));
    bisect(&|r| h(sup(r)) - h(sub(r)), a, r_outer)
}

fn c9() -> Verdict {
    let (v_a, v_0) = (0.7, 1.7);
    let c = make_config(1.4, 1.0, 1.0, 5.0, 6.0, v_a, v_0).unwrap();
    let class = existence_report(&c).unwrap().classification;
    let (suite_ok, detail) = suite_verdict(&c);
    let mut ok = suite_ok && class == Existence::Transonic;
    let mut extra = String::new();
    if class == Existence::Transonic {
        let shock = locate_shock(&c).unwrap();
        let oracle = gamma14_oracle(v_a, v_0, 5.0, 6.0);
        let rh = shock.residuals.max_abs();
        ok &= rh < 1e-9 && (shock.r_s - oracle).abs() < 1e-9;
        extra = format!(
            ", r_s = {:.10} (oracle {oracle:.10}), RH max {rh:.1e}",
            shock.r_s
        );
    }
    verdict(ok, format!("gamma = 1.4, {class:?}, {detail}{extra}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "entropy constants", c1),
        (2, "shock location", c2),
        (3, "derivative table", c3),
        (4, "larger inner speed", c4),
        (5, "counterexample", c5),
        (6, "subsonic-only mode", c6),
        (7, "Rankine-Hugoniot", c7),
        (8, "property suite", c8),
        (9, "cross-gamma smoke test", c9),
    ];
    let mut bad = 0;
    for (id, name, f) in criteria {
        let start = Instant::now();
        let mut v = f();
        let elapsed = start.elapsed();
        if elapsed > TIME_LIMIT {
            v.ok = false;
            v.detail.push_str(&format!(" [took {elapsed:?}]"));
        }
        let known = KNOWN_UNATTAINABLE.contains(&id);
        let tag = if v.ok { "PASS" } else { "FAIL" };
        let note = match (v.ok, known) {
            (false, true) => " (known unattainable)",
            (true, true) => " (listed as unattainable but passed)",
            _ => "",
        };
        println!(
            "{tag} criterion {id} {name}{note}: {} [{:.2?}]",
            v.detail, elapsed
        );
        if v.ok == known {
            bad += 1;
        }
    }
    if bad == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{bad} criterion result(s) differ from expectation");
        ExitCode::FAILURE
    }
}
