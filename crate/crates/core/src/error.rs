//! Error type shared by all simulation modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("parameter `{name}` must be positive (got {value:e})")]
    NonPositive { name: &'static str, value: f64 },

    #[error("slit width {slit_width:e} m exceeds grating period {period:e} m")]
    SlitExceedsPeriod { slit_width: f64, period: f64 },

    #[error("slit count must be at least 1")]
    NoSlits,

    #[error("k*d/(2*pi) = {ratio:.1} is too small for the paraxial regime (need >= {min})")]
    NotParaxial { ratio: f64, min: f64 },

    #[error("no power-of-two grid up to 2^{max_log2} satisfies the resolution rules")]
    GridSizeOverflow { max_log2: u32 },

    #[error("grid count {count} is not a power of two")]
    CountNotPowerOfTwo { count: usize },

    #[error("grids are not a reciprocal transform pair (dkx*dx*count/(2*pi) = {ratio})")]
    GridsNotReciprocal { ratio: f64 },

    #[error("sample count mismatch: {left} vs {right}")]
    CountMismatch { left: usize, right: usize },

    #[error("spectral step {dkx:e} 1/m undersamples the slit-array peaks (need <= {max:e})")]
    SpectralUndersampled { dkx: f64, max: f64 },

    #[error("spectral support |kx| = {support:e} 1/m exceeds the paraxial bound {bound:e} 1/m")]
    SpectrumNotParaxial { support: f64, bound: f64 },

    #[error("quadratic kernel undersampled: k*dx^2*count/(2*y) = {factor:.3} exceeds pi")]
    ChirpUndersampled { factor: f64 },

    #[error("propagation distance must be positive (got {y:e} m)")]
    NonPositiveDistance { y: f64 },

    #[error("y = {y:e} m is too close to the aperture for the far-field form (need >= {min:e} m)")]
    NotFarField { y: f64, min: f64 },

    #[error("scattering locus y'12 = {y12_prime:e} m lies outside (0, {y12:e}) m")]
    EventOutsideGeometry { y12_prime: f64, y12: f64 },

    #[error("momentum transfer {dk_x:e} 1/m outside [0, {max:e}] 1/m")]
    KickOutOfRange { dk_x: f64, max: f64 },

    #[error("spectrum reference time {t_ref:e} s does not match the kick time {t_kick:e} s")]
    KickTimeMismatch { t_ref: f64, t_kick: f64 },

    #[error("plane y = {y:e} m lies before the kick locus y'12 = {y12_prime:e} m")]
    PlaneBeforeKick { y: f64, y12_prime: f64 },

    #[error("fringe fit design matrix is singular (samples cover a single phase?)")]
    DegenerateFit,

    #[error("fringe fit has non-positive offset a = {a:e}")]
    InvalidFit { a: f64 },

    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error("quadrature needs at least {min} nodes (got {got})")]
    TooFewNodes { min: usize, got: usize },

    #[error("field contains non-finite values")]
    NonFiniteField,
}
