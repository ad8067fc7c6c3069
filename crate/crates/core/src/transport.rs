//! Ballistic peak tracking and barrier estimation from walk speed.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use crate::error::{Error, Result};
use crate::momentum::omega;
use crate::walk::{BarrierParams, InitialState, ShiftKind, SpinorField};

/// Probabilities within this distance of the maximum count as tied.
const TIE_TOLERANCE: f64 = 1e-12;

/// Fewest points accepted by the regression.
pub const MIN_FIT_POINTS: usize = 10;

/// Default start of the regression window.
pub const DEFAULT_T_MIN: usize = 50;

/// How far above `1/√2` a measured speed may sit before the model is rejected.
pub const SLOPE_TOLERANCE: f64 = 0.02;

/// Stationary-phase function `φ(k) = ω_k + kν` with `ν = n/t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseFunction {
    pub alpha: f64,
    pub nu: f64,
}

impl PhaseFunction {
    pub fn new(alpha: f64, nu: f64) -> Self {
        Self { alpha, nu }
    }

    pub fn value(&self, k: f64) -> f64 {
        omega(k, self.alpha).omega + k * self.nu
    }

    pub fn derivatives(&self, k: f64) -> (f64, f64) {
        phase_derivatives(k, self.alpha, self.nu)
    }
}

/// Closed-form `(∂φ/∂k, ∂²φ/∂k²)`:
///
/// ```text
/// ∂φ/∂k   = α sin k / √(2 - α² cos² k) + ν
/// ∂²φ/∂k² = α cos k (2 - α²) / (2 - α² cos² k)^{3/2}
/// ```
pub fn phase_derivatives(k: f64, alpha: f64, nu: f64) -> (f64, f64) {
    let ac = alpha * k.cos();
    let g = 2.0 - ac * ac;
    let first = alpha * k.sin() / g.sqrt() + nu;
    let second = ac * (2.0 - alpha * alpha) / g.powf(1.5);
    (first, second)
}

/// Position of the right-hand ballistic peak, `α t / √2`. The left peak is its
/// negation.
pub fn predicted_peak(alpha: f64, t: usize) -> f64 {
    alpha * t as f64 * FRAC_1_SQRT_2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `n ≥ 0`
    Right,
    /// `n ≤ 0`
    Left,
    Either,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakEntry {
    pub t: usize,
    pub n_peak: i64,
    pub p_peak: f64,
}

/// Location of maximum probability at each time step.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PeakTrace {
    pub entries: Vec<PeakEntry>,
}

/// Ordinary least-squares line `n_peak ≈ slope·t + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub t_min: usize,
    pub t_max: usize,
    pub points: usize,
    pub residual_rms: f64,
}

impl PeakTrace {
    /// Fits the entries with `t ≥ t_min`.
    pub fn fit(&self, t_min: usize) -> Result<LinearFit> {
        let pts: Vec<(f64, f64)> = self
            .entries
            .iter()
            .filter(|e| e.t >= t_min)
            .map(|e| (e.t as f64, e.n_peak as f64))
            .collect();
        if pts.len() < MIN_FIT_POINTS {
            return Err(Error::InsufficientData {
                needed: MIN_FIT_POINTS,
                got: pts.len(),
            });
        }
        let m = pts.len() as f64;
        let mean_t = pts.iter().map(|p| p.0).sum::<f64>() / m;
        let mean_n = pts.iter().map(|p| p.1).sum::<f64>() / m;
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for &(t, n) in &pts {
            sxy += (t - mean_t) * (n - mean_n);
            sxx += (t - mean_t) * (t - mean_t);
        }
        let slope = sxy / sxx;
        let intercept = mean_n - slope * mean_t;
        let ss: f64 = pts
            .iter()
            .map(|&(t, n)| (n - slope * t - intercept).powi(2))
            .sum();
        let ts = self.entries.iter().filter(|e| e.t >= t_min).map(|e| e.t);
        Ok(LinearFit {
            slope,
            intercept,
            t_min: ts.clone().min().unwrap_or(t_min),
            t_max: ts.max().unwrap_or(t_min),
            points: pts.len(),
            residual_rms: (ss / m).sqrt(),
        })
    }
}

/// Argmax of `P(n)` on the requested side, with ties resolved towards the
/// leading edge.
fn peak_of(field: &SpinorField, side: Side) -> (i64, f64) {
    let t = field.time() as i64;
    let (lo, hi) = match side {
        Side::Right => (0, t),
        Side::Left => (-t, 0),
        Side::Either => (-t, t),
    };
    let mut best = (0i64, f64::NEG_INFINITY);
    for n in lo..=hi {
        let p = field.amplitude(n).norm_sqr();
        if p > best.1 + TIE_TOLERANCE {
            best = (n, p);
        } else if (p - best.1).abs() <= TIE_TOLERANCE && prefer(n, best.0, side) {
            best = (n, p.max(best.1));
        }
    }
    best
}

fn prefer(candidate: i64, incumbent: i64, side: Side) -> bool {
    match side {
        Side::Right => candidate > incumbent,
        Side::Left => candidate < incumbent,
        Side::Either => {
            let (c, i) = (candidate.abs(), incumbent.abs());
            c > i || (c == i && candidate > incumbent)
        }
    }
}

/// Evolves from `|0⟩ ⊗ |←⟩` for `t_max` steps and records the peak after each.
pub fn track_peaks(
    kind: ShiftKind,
    barriers: BarrierParams,
    t_max: usize,
    side: Side,
) -> Result<PeakTrace> {
    let mut field = SpinorField::new(t_max, InitialState::LeftLocalized);
    let mut entries = Vec::with_capacity(t_max);
    for _ in 0..t_max {
        field.step(kind, barriers)?;
        let (n_peak, p_peak) = peak_of(&field, side);
        entries.push(PeakEntry {
            t: field.time(),
            n_peak,
            p_peak,
        });
    }
    Ok(PeakTrace { entries })
}

pub fn fit_slope(trace: &PeakTrace, t_min: usize) -> Result<f64> {
    trace.fit(t_min).map(|f| f.slope)
}

/// Inverts the peak speed `α/√2` into barrier parameters.
///
/// Slopes slightly outside `[0, 1/√2]` (within [`SLOPE_TOLERANCE`]) are clamped.
pub fn estimate_alpha(slope: f64) -> Result<BarrierParams> {
    if !slope.is_finite() || !(-SLOPE_TOLERANCE..=FRAC_1_SQRT_2 + SLOPE_TOLERANCE).contains(&slope)
    {
        return Err(Error::SlopeOutOfRange { slope });
    }
    BarrierParams::from_alpha((SQRT_2 * slope).clamp(0.0, 1.0))
}
