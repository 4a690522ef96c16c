//! The full three-grating pipeline: boundary condition at the first grating,
//! optional photon kick, propagation to the second grating, masking, free
//! flight to the third grating, transmission scans against the third-grating
//! shift, fringe fits, kick averaging, and the closed-form contrast factor.

use std::f64::consts::{PI, TAU};

use crate::config::PhysicalConfig;
use crate::error::{Error, Result};
use crate::fringe::{fit_fringe, FringeFit};
use crate::grating::{analytic_spectrum_on, slit_mask, GratingSpec};
use crate::grid::{GridPair, SpatialGrid, SpectralAmplitude, Wavefield};
use crate::propagate::{angular_spectrum_propagate, fresnel_propagate};
use crate::scattering::{kicked_field, p1_quadrature, ScatteringEvent};

/// The first-order interference lobe used as the transmission window sits on
/// the positive-x side; with the sign conventions used here the kick advances
/// the fringe phase there by +d_p*dk_x.
const LOBE_SIGN: f64 = 1.0;

/// Contrast figures extracted from a laser-off / laser-on fit pair.
#[derive(Debug, Clone)]
pub struct ContrastResult {
    /// Laser-off contrast b/a.
    pub c0: f64,
    /// Laser-on contrast b/a.
    pub c: f64,
    /// Relative contrast C/C0 from the simulation.
    pub b_numeric: f64,
    /// Closed-form contrast factor at the same path-separation ratio (signed).
    pub b_analytic: f64,
    /// Path separation over photon wavelength.
    pub dp_over_lambda_i: f64,
}

/// One row of a relative-contrast curve.
#[derive(Debug, Clone)]
pub struct ContrastPoint {
    pub r: f64,
    pub b_numeric_abs: f64,
    pub b_analytic_abs: f64,
    /// Fitted laser-on phase minus laser-off phase, wrapped to (-pi, pi].
    pub phase_shift: f64,
}

/// Final-plane intensity with its integration window; transmission against
/// the third-grating shift is a cheap exact overlap sum on top of it.
#[derive(Debug, Clone)]
pub struct TransmissionProfile {
    pub grid: SpatialGrid,
    pub intensity: Vec<f64>,
    /// Integration window (lo, hi), m.
    pub window: (f64, f64),
    g3_period: f64,
    g3_slit_width: f64,
}

impl TransmissionProfile {
    /// Integrated intensity over the open third-grating slits inside the
    /// window, with the grating displaced laterally by `dx3`. The overlap of
    /// every grid cell with the shifted open set is computed exactly, so the
    /// scan is smooth in `dx3` with no interpolation.
    ///
    /// `dx3` counts displacement against the recoil direction: a positive
    /// momentum kick advances the fringe phase of `T(dx3)` by `+d_p*dk_x`.
    pub fn transmitted(&self, dx3: f64) -> f64 {
        let (lo, hi) = self.window;
        let g3 = GratingSpec::covering(
            self.g3_period,
            self.g3_slit_width,
            lo - dx3.abs() - self.g3_period,
            hi + dx3.abs() + self.g3_period,
        )
        .expect("validated grating parameters")
        .with_shift(-dx3);
        let grid = &self.grid;
        let half = grid.dx / 2.0;
        let m_lo = (((lo - half - grid.x0) / grid.dx).ceil().max(0.0)) as usize;
        let m_hi = ((((hi + half - grid.x0) / grid.dx).floor()).max(0.0) as usize)
            .min(grid.count.saturating_sub(1));
        let mut total = 0.0;
        for m in m_lo..=m_hi {
            let x = grid.x(m);
            let a = (x - half).max(lo);
            let b = (x + half).min(hi);
            if b > a {
                total += self.intensity[m] * g3.open_length(a, b);
            }
        }
        total
    }

    /// Same profile with a rescaled window width (diagnostic).
    pub fn with_window_width_scale(mut self, scale: f64) -> Self {
        let center = 0.5 * (self.window.0 + self.window.1);
        let half = 0.5 * (self.window.1 - self.window.0) * scale;
        self.window = (center - half, center + half);
        self
    }
}

/// Shared state for repeated pipeline runs on one configuration: grids, the
/// stationary first-grating amplitude, and the laser-off integration window.
#[derive(Debug)]
pub struct Interferometer {
    config: PhysicalConfig,
    pair: GridPair,
    c0: SpectralAmplitude,
    /// Laser-off window on the first-order lobe at the final plane.
    reference_window: (f64, f64),
}

impl Interferometer {
    pub fn new(config: &PhysicalConfig, oversample: u32) -> Result<Self> {
        let pair = GridPair::for_config(config, oversample)?;
        let g1 = GratingSpec::new(config.d, config.delta, config.n_slits)?;
        let mut c0 = analytic_spectrum_on(&g1, &pair.spectral);
        for v in &mut c0.values {
            *v *= config.amplitude;
        }
        let mut this = Self {
            config: config.clone(),
            pair,
            c0,
            reference_window: (0.0, 0.0),
        };
        let off = this.field_at_third_grating(None)?;
        this.reference_window = this.locate_window(&off);
        Ok(this)
    }

    pub fn config(&self) -> &PhysicalConfig {
        &self.config
    }

    pub fn grids(&self) -> &GridPair {
        &self.pair
    }

    /// Stationary momentum amplitude set by the first grating.
    pub fn source_spectrum(&self) -> &SpectralAmplitude {
        &self.c0
    }

    /// Transverse field arriving at the second grating, kicked or free.
    pub fn field_at_second_grating(&self, event: Option<&ScatteringEvent>) -> Result<Wavefield> {
        match event {
            None => angular_spectrum_propagate(
                &self.c0,
                self.config.y12,
                &self.config,
                &self.pair.spatial,
            ),
            Some(event) => kicked_field(
                &self.c0,
                event,
                self.config.y12,
                &self.config,
                &self.pair.spatial,
            ),
        }
    }

    /// Transverse field arriving at the third grating: the second grating is
    /// applied as an exact cell-averaged mask over the whole grid, followed by
    /// the quadratic-kernel hop over `y23`.
    pub fn field_at_third_grating(&self, event: Option<&ScatteringEvent>) -> Result<Wavefield> {
        let mut field = self.field_at_second_grating(event)?;
        let span = field.grid.span();
        let g2 = GratingSpec::covering(
            self.config.d,
            self.config.delta,
            field.grid.x0 - span * 0.01,
            field.grid.x(field.grid.count - 1) + span * 0.01,
        )?;
        for (value, weight) in field.values.iter_mut().zip(slit_mask(&g2, &field.grid)) {
            *value *= weight;
        }
        fresnel_propagate(&field, self.config.y23, &self.config)
    }

    /// Rigid displacement of the whole diffraction pattern at the final plane
    /// caused by a kick: `dk_x * (y12 + y23 - y'12) / k`.
    pub fn kick_displacement(&self, event: &ScatteringEvent) -> f64 {
        event.dk_x * (self.config.y12 + self.config.y23 - event.y12_prime) / self.config.k
    }

    /// Window of width `n_slits * d` centered on the first-order lobe of the
    /// laser-off pattern; the boxcar average over one period locates the lobe
    /// envelope peak.
    fn locate_window(&self, field: &Wavefield) -> (f64, f64) {
        let grid = &field.grid;
        let intensity = field.intensity();
        let w = ((self.config.d / grid.dx).round() as usize).max(1);
        let mut prefix = vec![0.0; intensity.len() + 1];
        for (m, i) in intensity.iter().enumerate() {
            prefix[m + 1] = prefix[m] + i;
        }
        let boxcar = |m: usize| -> f64 {
            let lo = m.saturating_sub(w / 2);
            let hi = (m + w / 2 + 1).min(intensity.len());
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        };
        let sep = self.config.order_separation(self.config.y23);
        let guess = LOBE_SIGN * sep;
        let m_lo = grid.nearest_index(guess - 0.5 * sep);
        let m_hi = grid.nearest_index(guess + 0.5 * sep);
        let mut best = (boxcar(m_lo), m_lo);
        for m in m_lo..=m_hi {
            let v = boxcar(m);
            if v > best.0 {
                best = (v, m);
            }
        }
        let center = grid.x(best.1);
        let half = 0.5 * self.config.n_slits as f64 * self.config.d;
        (center - half, center + half)
    }

    /// Final-plane intensity plus integration window. For a kicked run the
    /// laser-off window is translated by the exact pattern displacement so the
    /// window always tracks the same stretch of the lobe envelope.
    pub fn transmission_profile(
        &self,
        event: Option<&ScatteringEvent>,
    ) -> Result<TransmissionProfile> {
        let field = self.field_at_third_grating(event)?;
        // Track the displaced lobe in whole grating periods: the window stays
        // aligned with the fringe lattice (no per-kick sampling wobble) while
        // the envelope miscentering is at most d/2, far below the lobe width.
        let shift = event.map_or(0.0, |ev| {
            (self.kick_displacement(ev) / self.config.d).round() * self.config.d
        });
        Ok(TransmissionProfile {
            intensity: field.intensity(),
            grid: field.grid,
            window: (
                self.reference_window.0 + shift,
                self.reference_window.1 + shift,
            ),
            g3_period: self.config.d,
            g3_slit_width: self.config.delta,
        })
    }

    /// Third-grating shifts for a standard scan: 16 samples per period over
    /// two periods.
    pub fn default_scan_offsets(&self) -> Vec<f64> {
        (0..32).map(|j| j as f64 * self.config.d / 16.0).collect()
    }

    /// Transmission versus third-grating shift, deterministic and
    /// order-preserving in `dx3_samples`.
    pub fn scan(
        &self,
        event: Option<&ScatteringEvent>,
        dx3_samples: &[f64],
    ) -> Result<Vec<(f64, f64)>> {
        let profile = self.transmission_profile(event)?;
        Ok(dx3_samples
            .iter()
            .map(|&dx3| (dx3, profile.transmitted(dx3)))
            .collect())
    }

    /// Kick-averaged transmission scan: transmissions for each quadrature node
    /// of the transferred-momentum distribution, combined with their weights
    /// in fixed node order.
    pub fn averaged_scan(
        &self,
        y12_prime: f64,
        dx3_samples: &[f64],
        node_count: usize,
    ) -> Result<Vec<(f64, f64)>> {
        let (nodes, weights) = p1_quadrature(self.config.k_i, node_count)?;
        let mut totals = vec![0.0; dx3_samples.len()];
        for (node, weight) in nodes.iter().zip(&weights) {
            let event = ScatteringEvent::new(&self.config, y12_prime, *node)?;
            let profile = self.transmission_profile(Some(&event))?;
            for (total, &dx3) in totals.iter_mut().zip(dx3_samples) {
                *total += weight * profile.transmitted(dx3);
            }
        }
        Ok(dx3_samples.iter().cloned().zip(totals).collect())
    }
}

/// One-shot transmission at a single third-grating shift. Builds the full
/// pipeline per call; use [`Interferometer`] directly for scans.
pub fn transmitted_intensity(
    config: &PhysicalConfig,
    event: Option<&ScatteringEvent>,
    dx3: f64,
) -> Result<f64> {
    let interferometer = Interferometer::new(config, 1)?;
    let profile = interferometer.transmission_profile(event)?;
    Ok(profile.transmitted(dx3))
}

/// Transmission scan over the given third-grating shifts.
pub fn scan_third_grating(
    config: &PhysicalConfig,
    event: Option<&ScatteringEvent>,
    dx3_samples: &[f64],
) -> Result<Vec<(f64, f64)>> {
    Interferometer::new(config, 1)?.scan(event, dx3_samples)
}

/// Kick-averaged transmission at a single shift (see [`Interferometer::averaged_scan`]).
pub fn average_transmission(
    config: &PhysicalConfig,
    y12_prime: f64,
    dx3: f64,
    node_count: usize,
) -> Result<f64> {
    let scan = Interferometer::new(config, 1)?.averaged_scan(y12_prime, &[dx3], node_count)?;
    Ok(scan[0].1)
}

/// Closed-form contrast factor as a function of the path-separation ratio
/// `r = d_p / lambda_i`:
///
/// `B = 3/(2x) * ((1 - 1/x^2) sin x + cos x / x)` with `x = 2*pi*r`,
///
/// evaluated by its series `1 - x^2/5` below r = 1e-3 where the closed form
/// cancels catastrophically. Signed; the measurable relative contrast is |B|.
pub fn analytic_b(r: f64) -> f64 {
    debug_assert!(r >= 0.0, "path-separation ratio must be non-negative");
    let x = TAU * r;
    if r < 1e-3 {
        1.0 - x * x / 5.0
    } else {
        1.5 / x * ((1.0 - 1.0 / (x * x)) * x.sin() + x.cos() / x)
    }
}

/// First zero of the contrast factor, as the ratio r = d_p/lambda_i, by
/// bisection on the bracket x in [2, 3.5].
pub fn first_contrast_zero() -> f64 {
    let f = |x: f64| (1.0 - 1.0 / (x * x)) * x.sin() + x.cos() / x;
    let (mut lo, mut hi) = (2.0f64, 3.5f64);
    debug_assert!(f(lo) > 0.0 && f(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    0.5 * (lo + hi) / TAU
}

/// Contrast figures from a laser-off / laser-on fit pair at ratio `r`.
pub fn contrast(fit_off: &FringeFit, fit_on: &FringeFit, r: f64) -> Result<ContrastResult> {
    let c0 = fit_off.contrast()?;
    let c = fit_on.contrast()?;
    Ok(ContrastResult {
        c0,
        c,
        b_numeric: c / c0,
        b_analytic: analytic_b(r),
        dp_over_lambda_i: r,
    })
}

pub fn wrap_phase(x: f64) -> f64 {
    let mut w = (x + PI).rem_euclid(TAU) - PI;
    if w <= -PI {
        w += TAU;
    }
    w
}

/// Relative-contrast curve over path-separation ratios: one laser-off scan,
/// then a kick-averaged scan and fit per ratio, preserving input order.
pub fn contrast_curve(
    config: &PhysicalConfig,
    r_values: &[f64],
    node_count: usize,
    oversample: u32,
) -> Result<Vec<ContrastPoint>> {
    let interferometer = Interferometer::new(config, oversample)?;
    let offsets = interferometer.default_scan_offsets();
    let off = interferometer.scan(None, &offsets)?;
    let fit_off = fit_fringe(&off, config.d)?;
    let mut points = Vec::with_capacity(r_values.len());
    for &r in r_values {
        let y12_prime = r * config.lambda_i * config.k * config.d / TAU;
        if y12_prime.is_nan() || y12_prime <= 0.0 || y12_prime >= config.y12 {
            return Err(Error::EventOutsideGeometry {
                y12_prime,
                y12: config.y12,
            });
        }
        let averaged = interferometer.averaged_scan(y12_prime, &offsets, node_count)?;
        let fit_on = fit_fringe(&averaged, config.d)?;
        let result = contrast(&fit_off, &fit_on, r)?;
        points.push(ContrastPoint {
            r,
            b_numeric_abs: result.b_numeric.abs(),
            b_analytic_abs: result.b_analytic.abs(),
            phase_shift: wrap_phase(fit_on.phi - fit_off.phi),
        });
    }
    Ok(points)
}
