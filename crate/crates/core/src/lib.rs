//! Numerical simulation of an atom's transverse wave function traversing a
//! three-grating Mach-Zehnder interferometer, including the recoil from a
//! single photon scattered between the first and second gratings.
//!
//! The propagation is strictly one transverse dimension: the longitudinal
//! motion stays a plane wave and the transverse profile evolves like a free
//! 1-D wave packet. The crate provides
//!
//! - grids and the exact position/momentum transform pair ([`grid`]),
//! - binary grating masks and slit-array spectra ([`grating`]),
//! - spectral, convolution and far-field propagators ([`propagate`]),
//! - the photon-kick transform and recoil statistics ([`scattering`]),
//! - periodic fringe fitting ([`fringe`]),
//! - the full pipeline with transmission scans, kick averaging and the
//!   closed-form relative-contrast factor ([`interferometer`]).
//!
//! Everything is deterministic: no randomness, no threading, fixed summation
//! orders. Repeated runs produce bit-identical results.

pub mod config;
pub mod error;
pub mod fringe;
pub mod grating;
pub mod grid;
pub mod interferometer;
pub mod propagate;
pub mod quadrature;
pub mod scattering;

pub use config::{ConfigParams, PhysicalConfig, HBAR};
pub use error::{Error, Result};
pub use fringe::{fit_fringe, fit_fringe_free_period, FringeFit};
pub use grating::{analytic_spectrum, numeric_spectrum, slit_mask, GratingSpec};
pub use grid::{GridPair, SpatialGrid, SpectralAmplitude, SpectralGrid, Wavefield};
pub use interferometer::{
    analytic_b, contrast, contrast_curve, first_contrast_zero, transmitted_intensity,
    ContrastPoint, ContrastResult, Interferometer, TransmissionProfile,
};
pub use propagate::{
    angular_spectrum_propagate, far_field, far_field_kicked, free_evolve, fresnel_propagate,
};
pub use scattering::{kick_spectrum, kicked_field, p1_pdf, p1_quadrature, ScatteringEvent};
