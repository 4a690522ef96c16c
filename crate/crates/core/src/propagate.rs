//! Free-space propagation of the transverse wave: quadratic spectral
//! dispersion, the position-space quadratic-kernel convolution, and the
//! far-field proportionality, plus its kicked variant.
//!
//! The longitudinal plane-wave factor is a unimodular constant on any fixed
//! plane and is never sampled; everything here acts on transverse profiles.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, PI};

use crate::config::PhysicalConfig;
use crate::error::{Error, Result};
use crate::grid::{to_position, to_spectrum, SpatialGrid, SpectralAmplitude, Wavefield};
use crate::scattering::ScatteringEvent;

/// Fraction of k the spectral support may reach before the quadratic
/// dispersion is rejected as non-paraxial.
const PARAXIAL_SUPPORT_FRACTION: f64 = 0.1;

/// Amplitude fraction defining the spectral support edge.
const SUPPORT_FRACTION: f64 = 1e-6;

/// Far-field gate as a fraction of the aperture Rayleigh distance
/// (n*d)^2 / lambda. The proportional form is accurate to a few percent from
/// about a quarter of that distance on; closer in, it is rejected.
const FAR_FIELD_FRACTION: f64 = 0.25;

/// Free evolution of a momentum amplitude over `y` metres:
/// each sample picks up `exp(-i*kx^2*y/(2k))` and the reference time advances
/// by `y/v`.
pub fn free_evolve(c: &SpectralAmplitude, y: f64, config: &PhysicalConfig) -> SpectralAmplitude {
    let values = c
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let kx = c.grid.kx(j);
            v * Complex64::from_polar(1.0, -kx * kx * y / (2.0 * config.k))
        })
        .collect();
    SpectralAmplitude::new(c.grid.clone(), c.t_ref + y / config.v, values)
        .expect("phases preserve finiteness")
}

fn check_paraxial(c: &SpectralAmplitude, config: &PhysicalConfig) -> Result<()> {
    let support = c.support_bound(SUPPORT_FRACTION);
    let bound = PARAXIAL_SUPPORT_FRACTION * config.k;
    if support > bound {
        return Err(Error::SpectrumNotParaxial { support, bound });
    }
    Ok(())
}

/// Plane-wave decomposition propagator:
/// `psi(x, y) = 1/sqrt(2*pi) * integral c(kx) exp(i*kx*x - i*kx^2*y/(2k)) dkx`.
///
/// Unitary: the integrated intensity is independent of `y`.
pub fn angular_spectrum_propagate(
    c: &SpectralAmplitude,
    y: f64,
    config: &PhysicalConfig,
    target: &SpatialGrid,
) -> Result<Wavefield> {
    if y < 0.0 {
        return Err(Error::NonPositiveDistance { y });
    }
    check_paraxial(c, config)?;
    let evolved = free_evolve(c, y, config);
    to_position(&evolved, target, y)
}

/// Quadratic-kernel (paraxial convolution) propagator:
/// `psi(x, y0 + y_rel) = sqrt(k/(2*pi*y_rel)) e^{-i*pi/4}
///     * integral psi(x', y0) exp(i*k*(x - x')^2 / (2*y_rel)) dx'`.
///
/// The kernel is split as `e^{ikx^2/2y} e^{-ikxx'/y} e^{ikx'^2/2y}`, reducing
/// the convolution to one transform of the chirped field. The output samples
/// therefore live on the conjugate grid `x_j = kx_j * y_rel / k`, which
/// coincides with the input grid when `count * dx^2 = lambda_db * y_rel`.
/// Fails when the chirp is undersampled
/// (`k * dx^2 * count / (2*y_rel) > pi`).
pub fn fresnel_propagate(
    field: &Wavefield,
    y_rel: f64,
    config: &PhysicalConfig,
) -> Result<Wavefield> {
    if y_rel.is_nan() || y_rel <= 0.0 {
        return Err(Error::NonPositiveDistance { y: y_rel });
    }
    let grid = &field.grid;
    let factor = config.k * grid.dx * grid.dx * grid.count as f64 / (2.0 * y_rel);
    if factor > PI * (1.0 + 1e-9) {
        return Err(Error::ChirpUndersampled { factor });
    }

    let chirp_rate = config.k / (2.0 * y_rel);
    let chirped: Vec<Complex64> = field
        .values
        .iter()
        .enumerate()
        .map(|(m, v)| {
            let x = grid.x(m);
            v * Complex64::from_polar(1.0, chirp_rate * x * x)
        })
        .collect();
    let chirped_field = Wavefield::new(grid.clone(), field.y, chirped)?;
    let spectral = grid.reciprocal();
    let c = to_spectrum(&chirped_field, &spectral)?;

    let out_grid = SpatialGrid::new(
        spectral.kx0 * y_rel / config.k,
        spectral.dkx * y_rel / config.k,
        grid.count,
    )?;
    let amplitude = (config.k / y_rel).sqrt();
    let values = c
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let x = out_grid.x(j);
            v * Complex64::from_polar(amplitude, chirp_rate * x * x - FRAC_PI_4)
        })
        .collect();
    Wavefield::new(out_grid, field.y + y_rel, values)
}

fn check_far_field(y: f64, config: &PhysicalConfig) -> Result<()> {
    let aperture = config.n_slits as f64 * config.d;
    let min = FAR_FIELD_FRACTION * aperture * aperture / config.lambda_db;
    if y < min {
        return Err(Error::NotFarField { y, min });
    }
    Ok(())
}

/// Far-field proportionality:
/// `psi(x, y) = sqrt(k/y) e^{-i*pi/4} e^{i*k*x^2/(2y)} c(k*x/y)`.
///
/// Sampled without interpolation on the mapped grid `x_j = kx_j * y / k`, so
/// `|psi|^2 = (k/y) |c|^2` holds exactly sample by sample.
pub fn far_field(c: &SpectralAmplitude, y: f64, config: &PhysicalConfig) -> Result<Wavefield> {
    check_far_field(y, config)?;
    let out_grid = SpatialGrid::new(
        c.grid.kx0 * y / config.k,
        c.grid.dkx * y / config.k,
        c.grid.count,
    )?;
    let amplitude = (config.k / y).sqrt();
    let rate = config.k / (2.0 * y);
    let values = c
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let x = out_grid.x(j);
            v * Complex64::from_polar(amplitude, rate * x * x - FRAC_PI_4)
        })
        .collect();
    Wavefield::new(out_grid, y, values)
}

/// Far-field form for a kicked atom:
/// `psi(x, y) = sqrt(k/y) e^{-i*pi/4} e^{-i*dk^2*y/(2k)}
///     e^{i*k*(x + dx0)^2/(2y)} c(k*(x + dx0)/y - dk)`.
///
/// Sampling `x_j = (kx_j + dk) * y / k - dx0` again avoids interpolation: the
/// modulus is the un-kicked far-field modulus translated by
/// `y*dk/k - dx0 = dk*(y - y'12)/k`.
pub fn far_field_kicked(
    c: &SpectralAmplitude,
    event: &ScatteringEvent,
    y: f64,
    config: &PhysicalConfig,
) -> Result<Wavefield> {
    check_far_field(y, config)?;
    if y < event.y12_prime {
        return Err(Error::PlaneBeforeKick {
            y,
            y12_prime: event.y12_prime,
        });
    }
    let out_grid = SpatialGrid::new(
        (c.grid.kx0 + event.dk_x) * y / config.k - event.dx0,
        c.grid.dkx * y / config.k,
        c.grid.count,
    )?;
    let amplitude = (config.k / y).sqrt();
    let rate = config.k / (2.0 * y);
    let global = -event.dk_x * event.dk_x * y / (2.0 * config.k);
    let values = c
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let xs = out_grid.x(j) + event.dx0;
            v * Complex64::from_polar(amplitude, rate * xs * xs - FRAC_PI_4 + global)
        })
        .collect();
    Wavefield::new(out_grid, y, values)
}
