//! Sampling grids, sampled fields, and the position/momentum transform pair.
//!
//! A [`SpatialGrid`] and a [`SpectralGrid`] form a reciprocal pair when
//! `dkx * dx * count = 2*pi`; on such a pair [`to_spectrum`] and
//! [`to_position`] are exact mutual inverses (one FFT each). Grid origins are
//! arbitrary, which lets a momentum-shifted spectrum keep its samples bit-for-bit
//! while only the grid origin moves.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;
use std::f64::consts::TAU;
use std::sync::Arc;

use crate::config::PhysicalConfig;
use crate::error::{Error, Result};

const SQRT_TAU: f64 = 2.506_628_274_631_000_5;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_forward(buf: &mut [Complex64]) {
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    fft.process(buf);
}

fn fft_inverse(buf: &mut [Complex64]) {
    let fft: Arc<dyn rustfft::Fft<f64>> =
        PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    fft.process(buf);
}

/// Uniform grid of transverse positions `x_m = x0 + m*dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialGrid {
    pub x0: f64,
    pub dx: f64,
    pub count: usize,
}

impl SpatialGrid {
    pub fn new(x0: f64, dx: f64, count: usize) -> Result<Self> {
        if dx.is_nan() || dx <= 0.0 {
            return Err(Error::NonPositive {
                name: "dx",
                value: dx,
            });
        }
        if !count.is_power_of_two() {
            return Err(Error::CountNotPowerOfTwo { count });
        }
        Ok(Self { x0, dx, count })
    }

    /// Centered grid spanning `count * dx` around zero.
    pub fn centered(dx: f64, count: usize) -> Result<Self> {
        Self::new(-(count as f64 / 2.0) * dx, dx, count)
    }

    pub fn x(&self, m: usize) -> f64 {
        self.x0 + m as f64 * self.dx
    }

    pub fn span(&self) -> f64 {
        self.count as f64 * self.dx
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|m| self.x(m))
    }

    /// Index of the sample closest to `x`, clamped to the grid.
    pub fn nearest_index(&self, x: f64) -> usize {
        let m = ((x - self.x0) / self.dx).round();
        (m.max(0.0) as usize).min(self.count - 1)
    }

    /// Reciprocal spectral grid centered on zero.
    pub fn reciprocal(&self) -> SpectralGrid {
        let dkx = TAU / (self.count as f64 * self.dx);
        SpectralGrid {
            kx0: -(self.count as f64 / 2.0) * dkx,
            dkx,
            count: self.count,
        }
    }
}

/// Uniform grid of transverse wave numbers `kx_j = kx0 + j*dkx`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    pub kx0: f64,
    pub dkx: f64,
    pub count: usize,
}

impl SpectralGrid {
    pub fn kx(&self, j: usize) -> f64 {
        self.kx0 + j as f64 * self.dkx
    }

    pub fn span(&self) -> f64 {
        self.count as f64 * self.dkx
    }

    pub fn wave_numbers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|j| self.kx(j))
    }

    /// Same spacing and count with the origin moved by `shift`.
    pub fn shifted(&self, shift: f64) -> Self {
        Self {
            kx0: self.kx0 + shift,
            dkx: self.dkx,
            count: self.count,
        }
    }
}

fn check_reciprocal(spatial: &SpatialGrid, spectral: &SpectralGrid) -> Result<()> {
    if spatial.count != spectral.count {
        return Err(Error::CountMismatch {
            left: spatial.count,
            right: spectral.count,
        });
    }
    let ratio = spectral.dkx * spatial.dx * spatial.count as f64 / TAU;
    if (ratio - 1.0).abs() > 1e-9 {
        return Err(Error::GridsNotReciprocal { ratio });
    }
    Ok(())
}

/// Complex transverse wave function sampled at a fixed longitudinal position.
///
/// The longitudinal plane-wave factor is carried symbolically, never sampled;
/// `values` hold only the transverse profile (dimension 1/sqrt(m)).
#[derive(Debug, Clone)]
pub struct Wavefield {
    pub grid: SpatialGrid,
    /// Longitudinal position of this transverse slice, m.
    pub y: f64,
    pub values: Vec<Complex64>,
}

impl Wavefield {
    pub fn new(grid: SpatialGrid, y: f64, values: Vec<Complex64>) -> Result<Self> {
        if grid.count != values.len() {
            return Err(Error::CountMismatch {
                left: grid.count,
                right: values.len(),
            });
        }
        if !values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFiniteField);
        }
        Ok(Self { grid, y, values })
    }

    /// |psi|^2 per sample.
    pub fn intensity(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// Integrated |psi|^2 dx.
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.dx
    }
}

/// Complex transverse-momentum amplitude sampled on a [`SpectralGrid`]
/// (dimension sqrt(m)). `t_ref` records the evolution time the samples refer
/// to (0 for the stationary amplitude set by a grating).
#[derive(Debug, Clone)]
pub struct SpectralAmplitude {
    pub grid: SpectralGrid,
    /// Reference time of the samples, s.
    pub t_ref: f64,
    pub values: Vec<Complex64>,
}

impl SpectralAmplitude {
    pub fn new(grid: SpectralGrid, t_ref: f64, values: Vec<Complex64>) -> Result<Self> {
        if grid.count != values.len() {
            return Err(Error::CountMismatch {
                left: grid.count,
                right: values.len(),
            });
        }
        if !values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFiniteField);
        }
        Ok(Self {
            grid,
            t_ref,
            values,
        })
    }

    /// Integrated |c|^2 dkx.
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.dkx
    }

    /// Largest |kx| whose amplitude exceeds `fraction` of the peak amplitude.
    pub fn support_bound(&self, fraction: f64) -> f64 {
        let peak = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let threshold = peak * fraction;
        let mut bound: f64 = 0.0;
        for (j, v) in self.values.iter().enumerate() {
            if v.norm() > threshold {
                bound = bound.max(self.grid.kx(j).abs());
            }
        }
        bound
    }
}

/// Momentum content of a sampled field:
/// `c(kx_j) = dx/sqrt(2*pi) * sum_m psi_m exp(-i kx_j x_m)`.
///
/// Exact inverse of [`to_position`] on a reciprocal grid pair: both directions
/// split the kernel phase `kx_j * x_m` into the same three products
/// `kx0*x0 + kx0*(m*dx) + (j*dkx)*x0 (+ 2*pi*j*m/count)`, so the rounding of
/// each factor cancels on the round trip.
pub fn to_spectrum(field: &Wavefield, target: &SpectralGrid) -> Result<SpectralAmplitude> {
    check_reciprocal(&field.grid, target)?;
    let n = field.grid.count;
    let mut buf: Vec<Complex64> = (0..n)
        .map(|m| {
            let phase = -target.kx0 * (m as f64 * field.grid.dx);
            field.values[m] * Complex64::from_polar(1.0, phase)
        })
        .collect();
    fft_forward(&mut buf);
    let scale = field.grid.dx / SQRT_TAU;
    let global = Complex64::from_polar(scale, -target.kx0 * field.grid.x0);
    let values = (0..n)
        .map(|j| {
            let phase = -(j as f64 * target.dkx) * field.grid.x0;
            buf[j] * Complex64::from_polar(1.0, phase) * global
        })
        .collect();
    // A bare field carries no evolution time; callers adjust t_ref when needed.
    SpectralAmplitude::new(target.clone(), 0.0, values)
}

/// Position-space field of a momentum amplitude:
/// `psi(x_m) = dkx/sqrt(2*pi) * sum_j c_j exp(+i kx_j x_m)`, tagged with
/// longitudinal position `y`.
pub fn to_position(c: &SpectralAmplitude, target: &SpatialGrid, y: f64) -> Result<Wavefield> {
    check_reciprocal(target, &c.grid)?;
    let n = target.count;
    let mut buf: Vec<Complex64> = (0..n)
        .map(|j| {
            let phase = (j as f64 * c.grid.dkx) * target.x0;
            c.values[j] * Complex64::from_polar(1.0, phase)
        })
        .collect();
    fft_inverse(&mut buf);
    let scale = c.grid.dkx / SQRT_TAU;
    let global = Complex64::from_polar(scale, c.grid.kx0 * target.x0);
    let values = (0..n)
        .map(|m| {
            let phase = c.grid.kx0 * (m as f64 * target.dx);
            buf[m] * Complex64::from_polar(1.0, phase) * global
        })
        .collect();
    Wavefield::new(target.clone(), y, values)
}

/// Reciprocal grid pair sized for a configuration.
///
/// Sizing rules, all enforced by construction:
/// - `dx <= d/16` (resolves the grating period),
/// - spatial span >= 4 * order separation at `y12 + y23` (covers the full
///   two-beam geometry),
/// - `dkx <= 2*pi/(16 * n_slits * d)` (resolves the slit-array peaks),
/// - spectral Nyquist >= 3 * (2*pi/delta) + 2*k_i (three envelope lobes plus
///   recoil headroom).
///
/// Within those constraints `dx` is set to `sqrt(lambda_db * min(y12, y23) / count)`
/// so the single-transform quadratic-kernel propagator maps the grid onto
/// itself for the shorter arm, and `oversample` doubles the resolution (and
/// span) per step for convergence studies.
#[derive(Debug, Clone)]
pub struct GridPair {
    pub spatial: SpatialGrid,
    pub spectral: SpectralGrid,
}

impl GridPair {
    pub fn for_config(config: &PhysicalConfig, oversample: u32) -> Result<Self> {
        if oversample < 1 {
            return Err(Error::NonPositive {
                name: "oversample",
                value: oversample as f64,
            });
        }
        let y_ref = config.y12.min(config.y23);
        let span_min = 4.0 * config.order_separation(config.y12 + config.y23);
        let dx_max = config.d / 16.0;
        let span_spectral_min = 16.0 * config.n_slits as f64 * config.d;
        let nyquist_min = 3.0 * (TAU / config.delta) + 2.0 * config.k_i;

        const MAX_LOG2: u32 = 26;
        let mut chosen = None;
        for p in 8..=MAX_LOG2 {
            let count = 1usize << p;
            let dx = (config.lambda_db * y_ref / count as f64).sqrt();
            let span = count as f64 * dx;
            if dx <= dx_max
                && span >= span_min
                && span >= span_spectral_min
                && std::f64::consts::PI / dx >= nyquist_min
            {
                chosen = Some(count);
                break;
            }
        }
        let mut count = chosen.ok_or(Error::GridSizeOverflow { max_log2: MAX_LOG2 })?;
        for _ in 1..oversample {
            count = count
                .checked_mul(4)
                .filter(|&c| c <= 1usize << MAX_LOG2)
                .ok_or(Error::GridSizeOverflow { max_log2: MAX_LOG2 })?;
        }
        let dx = (config.lambda_db * y_ref / count as f64).sqrt();
        let spatial = SpatialGrid::centered(dx, count)?;
        let spectral = spatial.reciprocal();
        Ok(Self { spatial, spectral })
    }
}

/// Relative L2 distance ||a - b|| / ||b|| between complex sample sets.
pub fn relative_l2(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut diff = 0.0;
    let mut norm = 0.0;
    for (x, y) in a.iter().zip(b) {
        diff += (x - y).norm_sqr();
        norm += y.norm_sqr();
    }
    (diff / norm).sqrt()
}

/// Relative L2 distance between real sample sets (intensities, moduli).
pub fn relative_l2_real(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut diff = 0.0;
    let mut norm = 0.0;
    for (x, y) in a.iter().zip(b) {
        diff += (x - y) * (x - y);
        norm += y * y;
    }
    (diff / norm).sqrt()
}
