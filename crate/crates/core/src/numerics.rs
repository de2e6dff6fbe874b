//! Deterministic scalar kernels: bracketed root finding, adaptive quadrature,
//! uniform sweeps and central differences.
//!
//! Every routine comes in two flavours. The plain one takes an infallible
//! closure; the `try_` one takes a closure returning `Result<f64, E>` so that
//! model errors raised inside the integrand (or the root function) propagate
//! unchanged instead of being smuggled out as `NaN`.

use thiserror::Error;

/// Default absolute abscissa tolerance for [`find_root`].
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
/// Default iteration cap for [`find_root`].
pub const DEFAULT_MAX_ITER: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("root finder hit the iteration cap ({max_iter}) with bracket width {width}")]
    MaxIterations { max_iter: usize, width: f64 },
    #[error("adaptive quadrature reached depth {max_depth} on [{lo}, {hi}] without converging")]
    MaxDepth { max_depth: u32, lo: f64, hi: f64 },
    #[error("function value at {x} is not finite ({value})")]
    NotFinite { x: f64, value: f64 },
    #[error("invalid numerical input: {0}")]
    InvalidInput(String),
}

/// A sign-changing interval together with the stopping rule for [`find_root`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    lo: f64,
    hi: f64,
    tol_x: f64,
    max_iter: usize,
}

impl Bracket {
    /// Bracket with the default tolerance and iteration cap.
    pub fn new(lo: f64, hi: f64) -> Result<Self, NumericsError> {
        Self::with_tolerance(lo, hi, DEFAULT_ROOT_TOL, DEFAULT_MAX_ITER)
    }

    pub fn with_tolerance(
        lo: f64,
        hi: f64,
        tol_x: f64,
        max_iter: usize,
    ) -> Result<Self, NumericsError> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(NumericsError::InvalidInput(format!(
                "bracket requires finite lo < hi, got [{lo}, {hi}]"
            )));
        }
        if !(tol_x > 0.0) {
            return Err(NumericsError::InvalidInput(format!(
                "root tolerance must be positive, got {tol_x}"
            )));
        }
        if max_iter == 0 {
            return Err(NumericsError::InvalidInput(
                "max_iter must be at least 1".into(),
            ));
        }
        Ok(Bracket {
            lo,
            hi,
            tol_x,
            max_iter,
        })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn tol_x(&self) -> f64 {
        self.tol_x
    }

    pub fn max_iter(&self) -> usize {
        self.max_iter
    }
}

/// Result of a successful root search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    /// Best abscissa found.
    pub x: f64,
    /// Function value at `x`.
    pub f_x: f64,
    /// Width of the final sign-changing bracket around `x` (zero when `f(x)`
    /// is exactly zero).
    pub width: f64,
    pub iterations: usize,
}

/// Brent's method: inverse quadratic and secant steps, falling back to
/// bisection whenever an interpolated step leaves the bracket or converges
/// too slowly. The iterate never leaves `[lo, hi]`.
pub fn find_root<F>(mut f: F, bracket: &Bracket) -> Result<Root, NumericsError>
where
    F: FnMut(f64) -> f64,
{
    try_find_root::<_, NumericsError>(|x| Ok(f(x)), bracket)
}

/// Like [`find_root`], for closures that can fail.
pub fn try_find_root<F, E>(mut f: F, bracket: &Bracket) -> Result<Root, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<NumericsError>,
{
    let mut eval = |x: f64| -> Result<f64, E> {
        let value = f(x)?;
        if value.is_finite() {
            Ok(value)
        } else {
            Err(NumericsError::NotFinite { x, value }.into())
        }
    };

    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (eval(a)?, eval(b)?);
    if fa == 0.0 {
        return Ok(Root {
            x: a,
            f_x: fa,
            width: 0.0,
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(Root {
            x: b,
            f_x: fb,
            width: 0.0,
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() {
        return Err(NumericsError::NoSignChange {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        }
        .into());
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for iter in 1..=bracket.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * bracket.tol_x;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            let width = if fb == 0.0 { 0.0 } else { (c - b).abs() };
            return Ok(Root {
                x: b,
                f_x: fb,
                width,
                iterations: iter,
            });
        }

        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = eval(b)?;
    }

    Err(NumericsError::MaxIterations {
        max_iter: bracket.max_iter,
        width: (c - b).abs(),
    }
    .into())
}

/// Tolerance contract for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-11,
            rel_tol: 1e-10,
            max_depth: 40,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), NumericsError> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(NumericsError::InvalidInput(format!(
                "quadrature tolerances must be positive, got abs {} rel {}",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_depth == 0 {
            return Err(NumericsError::InvalidInput(
                "max_depth must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

// Panels used before adaptive refinement starts; keeps a single coarse
// Simpson estimate from accidentally agreeing with its halves.
const INITIAL_PANELS: usize = 4;

/// Adaptive Simpson quadrature with Richardson correction.
///
/// `integrate(f, a, a, _)` is exactly zero and swapping the limits flips the
/// sign of the result.
pub fn integrate<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64, NumericsError>
where
    F: FnMut(f64) -> f64,
{
    try_integrate::<_, NumericsError>(|x| Ok(f(x)), a, b, spec)
}

/// Like [`integrate`], for integrands that can fail.
pub fn try_integrate<F, E>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<NumericsError>,
{
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(NumericsError::InvalidInput(format!("non-finite limits [{a}, {b}]")).into());
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return try_integrate(f, b, a, spec).map(|v: f64| -v);
    }

    let mut eval = |x: f64| -> Result<f64, E> {
        let value = f(x)?;
        if value.is_finite() {
            Ok(value)
        } else {
            Err(NumericsError::NotFinite { x, value }.into())
        }
    };

    let n = INITIAL_PANELS;
    let h = (b - a) / n as f64;
    let nodes: Vec<f64> = (0..=2 * n)
        .map(|i| {
            if i == 2 * n {
                b
            } else {
                a + 0.5 * h * i as f64
            }
        })
        .collect();
    let values = nodes
        .iter()
        .map(|&x| eval(x))
        .collect::<Result<Vec<_>, E>>()?;

    let mut panels = Vec::with_capacity(n);
    let mut coarse = 0.0;
    for i in 0..n {
        let (lo, hi) = (nodes[2 * i], nodes[2 * i + 2]);
        let (flo, fmid, fhi) = (values[2 * i], values[2 * i + 1], values[2 * i + 2]);
        let whole = simpson(lo, hi, flo, fmid, fhi);
        coarse += whole;
        panels.push((lo, hi, flo, fmid, fhi, whole));
    }

    let tol = spec.abs_tol.max(spec.rel_tol * coarse.abs());
    let mut total = 0.0;
    for (lo, hi, flo, fmid, fhi, whole) in panels {
        total += adapt(
            &mut eval,
            Segment {
                lo,
                hi,
                flo,
                fmid,
                fhi,
                whole,
            },
            tol / n as f64,
            0,
            spec.max_depth,
        )?;
    }
    Ok(total)
}

struct Segment {
    lo: f64,
    hi: f64,
    flo: f64,
    fmid: f64,
    fhi: f64,
    whole: f64,
}

fn simpson(lo: f64, hi: f64, flo: f64, fmid: f64, fhi: f64) -> f64 {
    (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)
}

fn adapt<F, E>(eval: &mut F, seg: Segment, tol: f64, depth: u32, max_depth: u32) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<NumericsError>,
{
    let mid = 0.5 * (seg.lo + seg.hi);
    let left_mid = 0.5 * (seg.lo + mid);
    let right_mid = 0.5 * (mid + seg.hi);
    let f_lm = eval(left_mid)?;
    let f_rm = eval(right_mid)?;
    let left = simpson(seg.lo, mid, seg.flo, f_lm, seg.fmid);
    let right = simpson(mid, seg.hi, seg.fmid, f_rm, seg.fhi);
    let delta = left + right - seg.whole;

    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= max_depth || mid <= seg.lo || mid >= seg.hi {
        return Err(NumericsError::MaxDepth {
            max_depth,
            lo: seg.lo,
            hi: seg.hi,
        }
        .into());
    }
    let l = adapt(
        eval,
        Segment {
            lo: seg.lo,
            hi: mid,
            flo: seg.flo,
            fmid: f_lm,
            fhi: seg.fmid,
            whole: left,
        },
        0.5 * tol,
        depth + 1,
        max_depth,
    )?;
    let r = adapt(
        eval,
        Segment {
            lo: mid,
            hi: seg.hi,
            flo: seg.fmid,
            fmid: f_rm,
            fhi: seg.fhi,
            whole: right,
        },
        0.5 * tol,
        depth + 1,
        max_depth,
    )?;
    Ok(l + r)
}

/// One `(abscissa, value)` pair of a [`SweepResult`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub x: f64,
    pub value: f64,
}

/// Tabulated samples of a scalar function on a uniform grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub samples: Vec<Sample>,
}

impl SweepResult {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Index of the largest value; the first one wins on ties.
    pub fn argmax(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, s) in self.samples.iter().enumerate() {
            match best {
                Some(j) if self.samples[j].value >= s.value => {}
                _ => best = Some(i),
            }
        }
        best
    }

    /// Index of the smallest value; the first one wins on ties.
    pub fn argmin(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, s) in self.samples.iter().enumerate() {
            match best {
                Some(j) if self.samples[j].value <= s.value => {}
                _ => best = Some(i),
            }
        }
        best
    }
}

/// `n` uniformly spaced abscissae on `[a, b]`, endpoints included exactly.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Result<Vec<f64>, NumericsError> {
    if n < 2 {
        return Err(NumericsError::InvalidInput(format!(
            "a sweep needs at least 2 points, got {n}"
        )));
    }
    let last = n - 1;
    Ok((0..n)
        .map(|i| {
            if i == last {
                b
            } else {
                a + (b - a) * (i as f64 / last as f64)
            }
        })
        .collect())
}

pub fn sweep<F>(mut f: F, a: f64, b: f64, n: usize) -> Result<SweepResult, NumericsError>
where
    F: FnMut(f64) -> f64,
{
    try_sweep::<_, NumericsError>(|x| Ok(f(x)), a, b, n)
}

pub fn try_sweep<F, E>(mut f: F, a: f64, b: f64, n: usize) -> Result<SweepResult, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<NumericsError>,
{
    let grid = uniform_grid(a, b, n)?;
    let samples = grid
        .into_iter()
        .map(|x| f(x).map(|value| Sample { x, value }))
        .collect::<Result<Vec<_>, E>>()?;
    Ok(SweepResult { samples })
}

/// `(f(x + h) - f(x - h)) / (2h)`.
///
/// # Panics
///
/// Panics if `h` is not strictly positive.
pub fn central_diff<F>(mut f: F, x: f64, h: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    assert!(h > 0.0, "central_diff needs a positive step, got {h}");
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Fallible variant of [`central_diff`].
pub fn try_central_diff<F, E>(mut f: F, x: f64, h: f64) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    assert!(h > 0.0, "central_diff needs a positive step, got {h}");
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}
