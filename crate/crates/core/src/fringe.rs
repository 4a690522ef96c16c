//! Least-squares fitting of periodic transmission fringes with a known period.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Parameters of the periodic transmission model
/// `T(x) = a + b*cos(2*pi*x/period + phi)`.
#[derive(Debug, Clone)]
pub struct FringeFit {
    /// Mean transmission.
    pub a: f64,
    /// Fringe amplitude, normalized non-negative.
    pub b: f64,
    /// Fringe phase in (-pi, pi].
    pub phi: f64,
    /// Period used by the fit, m.
    pub period: f64,
    /// Root-mean-square residual of the fit.
    pub residual_rms: f64,
}

impl FringeFit {
    /// Model value at `x`.
    pub fn value(&self, x: f64) -> f64 {
        self.a + self.b * (TAU * x / self.period + self.phi).cos()
    }

    /// Fringe contrast b/a.
    pub fn contrast(&self) -> Result<f64> {
        if self.a.is_nan() || self.a <= 0.0 {
            return Err(Error::InvalidFit { a: self.a });
        }
        Ok(self.b / self.a)
    }
}

/// Linear least squares on the basis {1, cos(2*pi*x/period), sin(2*pi*x/period)}.
///
/// The period is fixed, so the model is linear and the fit is a 3x3 solve; the
/// cosine/sine pair is then folded into amplitude and phase with `b >= 0`.
/// Fails when the design matrix is singular (fewer than 3 samples or all
/// samples at the same phase).
pub fn fit_fringe(samples: &[(f64, f64)], period: f64) -> Result<FringeFit> {
    if samples.len() < 3 {
        return Err(Error::TooFewSamples {
            min: 3,
            got: samples.len(),
        });
    }
    if period.is_nan() || period <= 0.0 {
        return Err(Error::NonPositive {
            name: "period",
            value: period,
        });
    }

    // Normal equations for [a, p, q] with T ~ a + p*cos + q*sin.
    let mut m = [[0.0f64; 3]; 3];
    let mut rhs = [0.0f64; 3];
    for &(x, t) in samples {
        let theta = TAU * x / period;
        let basis = [1.0, theta.cos(), theta.sin()];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += basis[i] * basis[j];
            }
            rhs[i] += basis[i] * t;
        }
    }
    let solution = solve3(m, rhs).ok_or(Error::DegenerateFit)?;
    let (a, p, q) = (solution[0], solution[1], solution[2]);

    // a + p*cos(theta) + q*sin(theta) = a + b*cos(theta + phi)
    let b = p.hypot(q);
    let mut phi = if b > 0.0 { (-q).atan2(p) } else { 0.0 };
    if phi <= -PI {
        phi = PI;
    }

    let mut sq = 0.0;
    for &(x, t) in samples {
        let theta = TAU * x / period;
        let model = a + p * theta.cos() + q * theta.sin();
        sq += (t - model) * (t - model);
    }
    let residual_rms = (sq / samples.len() as f64).sqrt();

    Ok(FringeFit {
        a,
        b,
        phi,
        period,
        residual_rms,
    })
}

/// Diagnostic fit with a free period: scans periods around `period_hint`
/// (+/- 2 %), picking the one minimizing the linear-fit residual, then refines
/// by golden-section search. Deterministic.
pub fn fit_fringe_free_period(samples: &[(f64, f64)], period_hint: f64) -> Result<FringeFit> {
    let residual = |p: f64| -> Result<f64> { Ok(fit_fringe(samples, p)?.residual_rms) };
    let mut best = (period_hint, residual(period_hint)?);
    let steps = 81;
    for i in 0..steps {
        let p = period_hint * (0.98 + 0.04 * i as f64 / (steps - 1) as f64);
        let r = residual(p)?;
        if r < best.1 {
            best = (p, r);
        }
    }
    let step = period_hint * 0.04 / (steps - 1) as f64;
    let (mut lo, mut hi) = (best.0 - step, best.0 + step);
    let ratio = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut p1 = hi - ratio * (hi - lo);
    let mut p2 = lo + ratio * (hi - lo);
    let mut r1 = residual(p1)?;
    let mut r2 = residual(p2)?;
    for _ in 0..60 {
        if r1 < r2 {
            hi = p2;
            p2 = p1;
            r2 = r1;
            p1 = hi - ratio * (hi - lo);
            r1 = residual(p1)?;
        } else {
            lo = p1;
            p1 = p2;
            r1 = r2;
            p2 = lo + ratio * (hi - lo);
            r2 = residual(p2)?;
        }
        if (hi - lo) < 1e-9 * period_hint {
            break;
        }
    }
    fit_fringe(samples, 0.5 * (lo + hi))
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve3(mut m: [[f64; 3]; 3], mut rhs: [f64; 3]) -> Option<[f64; 3]> {
    let scale = m
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    for col in 0..3 {
        let pivot =
            (col..3).max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())?;
        if m[pivot][col].abs() <= 1e-12 * scale {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let lead = m[col];
        for row in col + 1..3 {
            let f = m[row][col] / lead[col];
            for (k, value) in m[row].iter_mut().enumerate().skip(col) {
                *value -= f * lead[k];
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let mut acc = rhs[i];
        for j in i + 1..3 {
            acc -= m[i][j] * x[j];
        }
        x[i] = acc / m[i][i];
    }
    Some(x)
}
