//! Physical constants and the validated beam/grating configuration.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Reduced Planck constant, J*s (CODATA, exact under the 2019 SI).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Minimum k*d/(2*pi) accepted as paraxial. Below this the quadratic
/// dispersion used everywhere is a poor approximation of the Helmholtz
/// propagator.
pub const MIN_PERIODS_PER_WAVELENGTH: f64 = 100.0;

/// Raw, unvalidated inputs for [`PhysicalConfig::new`].
#[derive(Debug, Clone)]
pub struct ConfigParams {
    /// Atomic mass, kg.
    pub mass_kg: f64,
    /// Longitudinal beam speed, m/s.
    pub v_mps: f64,
    /// Photon wave number, 1/m.
    pub k_i_per_m: f64,
    /// Grating period, m.
    pub d_m: f64,
    /// Slit width, m.
    pub delta_m: f64,
    /// Number of illuminated slits on the first grating.
    pub n_slits: u32,
    /// First-to-second grating separation, m.
    pub y12_m: f64,
    /// Second-to-third grating separation, m.
    pub y23_m: f64,
    /// Incident plane-wave amplitude (dimensionless).
    pub amplitude: Complex64,
}

impl ConfigParams {
    /// Reference sodium-beam parameters: v = 1400 m/s, 589 nm photons,
    /// 200 nm gratings with 100 nm slits, 24 illuminated slits, 0.65 m arms.
    ///
    /// The mass is chosen so that m*v/hbar reproduces the reference
    /// longitudinal wave number k = 5.09067e11 1/m; see the crate README.
    pub fn sodium_beam() -> Self {
        Self {
            mass_kg: 3.834_626_508e-26,
            v_mps: 1400.0,
            k_i_per_m: 1.066_75e7,
            d_m: 2e-7,
            delta_m: 1e-7,
            n_slits: 24,
            y12_m: 0.65,
            y23_m: 0.65,
            amplitude: Complex64::new(1.0, 0.0),
        }
    }
}

/// Validated configuration with derived quantities.
///
/// Immutable after construction; all derived fields satisfy
/// `k * lambda_db == 2*pi` and `k_i * lambda_i == 2*pi` to rounding.
/// The global time factor of the stationary wave is dropped everywhere
/// (it is a pure global phase), so no frequency is stored.
#[derive(Debug, Clone)]
pub struct PhysicalConfig {
    /// Atomic mass, kg.
    pub mass: f64,
    /// Longitudinal speed, m/s.
    pub v: f64,
    /// Longitudinal wave number m*v/hbar, 1/m.
    pub k: f64,
    /// de Broglie wavelength 2*pi/k, m.
    pub lambda_db: f64,
    /// Photon wave number, 1/m.
    pub k_i: f64,
    /// Photon wavelength 2*pi/k_i, m.
    pub lambda_i: f64,
    /// Grating period, m.
    pub d: f64,
    /// Slit width, m.
    pub delta: f64,
    /// Illuminated slit count on the first grating.
    pub n_slits: u32,
    /// Grating separations, m.
    pub y12: f64,
    pub y23: f64,
    /// Incident plane-wave amplitude.
    pub amplitude: Complex64,
}

impl PhysicalConfig {
    pub fn new(params: ConfigParams) -> Result<Self> {
        let positive = [
            ("mass_kg", params.mass_kg),
            ("v_mps", params.v_mps),
            ("k_i_per_m", params.k_i_per_m),
            ("d_m", params.d_m),
            ("delta_m", params.delta_m),
            ("y12_m", params.y12_m),
            ("y23_m", params.y23_m),
        ];
        for (name, value) in positive {
            if value <= 0.0 || !value.is_finite() {
                return Err(Error::NonPositive { name, value });
            }
        }
        if params.n_slits < 1 {
            return Err(Error::NoSlits);
        }
        if params.delta_m > params.d_m {
            return Err(Error::SlitExceedsPeriod {
                slit_width: params.delta_m,
                period: params.d_m,
            });
        }

        let k = params.mass_kg * params.v_mps / HBAR;
        let ratio = k * params.d_m / TAU;
        if ratio < MIN_PERIODS_PER_WAVELENGTH {
            return Err(Error::NotParaxial {
                ratio,
                min: MIN_PERIODS_PER_WAVELENGTH,
            });
        }

        Ok(Self {
            mass: params.mass_kg,
            v: params.v_mps,
            k,
            lambda_db: TAU / k,
            k_i: params.k_i_per_m,
            lambda_i: TAU / params.k_i_per_m,
            d: params.d_m,
            delta: params.delta_m,
            n_slits: params.n_slits,
            y12: params.y12_m,
            y23: params.y23_m,
            amplitude: params.amplitude,
        })
    }

    /// Reference sodium-beam configuration (see [`ConfigParams::sodium_beam`]).
    pub fn sodium_beam() -> Self {
        Self::new(ConfigParams::sodium_beam()).expect("reference parameters are valid")
    }

    /// Diffraction angle of the first grating order, rad.
    pub fn first_order_angle(&self) -> f64 {
        TAU / (self.k * self.d)
    }

    /// Transverse separation of adjacent diffraction orders after a flight of `y` metres.
    pub fn order_separation(&self, y: f64) -> f64 {
        self.first_order_angle() * y
    }
}
