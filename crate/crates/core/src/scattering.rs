//! Single-photon recoil: the momentum-space kick transform, the kicked
//! wavefield, and the transferred-momentum distribution with its quadrature.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::config::PhysicalConfig;
use crate::error::{Error, Result};
use crate::grid::{to_position, SpatialGrid, SpectralAmplitude, Wavefield};
use crate::quadrature::gauss_legendre;

/// A photon-atom scattering event between the first and second grating.
///
/// Derived fields are exact: `t12_prime = y12_prime / v`,
/// `dx0 = dk_x * y12_prime / k`, and the path separation at the kick locus
/// `d_p = (2*pi/(k*d)) * y12_prime`.
#[derive(Debug, Clone)]
pub struct ScatteringEvent {
    /// Distance of the scattering locus behind the first grating, m.
    pub y12_prime: f64,
    /// Transverse momentum transfer, 1/m.
    pub dk_x: f64,
    /// Time of the kick along the flight, s.
    pub t12_prime: f64,
    /// Position-space shift entering the kicked propagator, m.
    pub dx0: f64,
    /// Transverse distance between the interfering paths at the kick locus, m.
    pub d_p: f64,
}

impl ScatteringEvent {
    pub fn new(config: &PhysicalConfig, y12_prime: f64, dk_x: f64) -> Result<Self> {
        if y12_prime.is_nan() || y12_prime <= 0.0 || y12_prime >= config.y12 {
            return Err(Error::EventOutsideGeometry {
                y12_prime,
                y12: config.y12,
            });
        }
        let max = 2.0 * config.k_i;
        if !(0.0..=max).contains(&dk_x) {
            return Err(Error::KickOutOfRange { dk_x, max });
        }
        Ok(Self {
            y12_prime,
            dk_x,
            t12_prime: y12_prime / config.v,
            dx0: dk_x * y12_prime / config.k,
            d_p: TAU / (config.k * config.d) * y12_prime,
        })
    }

    /// Kick locus expressed as the path-separation ratio r = d_p / lambda_i.
    pub fn from_separation_ratio(config: &PhysicalConfig, r: f64, dk_x: f64) -> Result<Self> {
        let y12_prime = r * config.lambda_i * config.k * config.d / TAU;
        Self::new(config, y12_prime, dk_x)
    }
}

/// Momentum-space kick: the amplitude evolved to the kick time is displaced by
/// `dk_x` with no extra phase, `c'(kx) = c(kx - dk_x)`.
///
/// The displacement is represented exactly by translating the grid origin, so
/// the samples are reused bit-for-bit and no support is lost to interpolation.
/// Fails if the spectrum's reference time is not the kick time.
pub fn kick_spectrum(c: &SpectralAmplitude, event: &ScatteringEvent) -> Result<SpectralAmplitude> {
    let scale = event.t12_prime.abs().max(1e-300);
    if (c.t_ref - event.t12_prime).abs() > 1e-9 * scale {
        return Err(Error::KickTimeMismatch {
            t_ref: c.t_ref,
            t_kick: event.t12_prime,
        });
    }
    SpectralAmplitude::new(c.grid.shifted(event.dk_x), c.t_ref, c.values.clone())
}

/// Wavefield at `y > y12_prime` for an atom kicked at the event locus, built
/// from the stationary grating amplitude `c0` in one transform.
///
/// The kick-time phases are composed analytically: the inner integral is the
/// un-kicked transverse field evaluated at `x + dx0 - y*dk_x/k`, realized as a
/// linear spectral phase, then multiplied by the global factor
/// `exp(i*dk_x*(x + dx0) - i*dk_x^2*y/k)`. With `dk_x = 0` this reduces to
/// plain quadratic-dispersion propagation.
pub fn kicked_field(
    c0: &SpectralAmplitude,
    event: &ScatteringEvent,
    y: f64,
    config: &PhysicalConfig,
    target: &SpatialGrid,
) -> Result<Wavefield> {
    if y < event.y12_prime {
        return Err(Error::PlaneBeforeKick {
            y,
            y12_prime: event.y12_prime,
        });
    }
    let shift = event.dx0 - y * event.dk_x / config.k;
    let phased: Vec<Complex64> = c0
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let kx = c0.grid.kx(j);
            v * Complex64::from_polar(1.0, -kx * kx * y / (2.0 * config.k) + kx * shift)
        })
        .collect();
    let inner = SpectralAmplitude::new(c0.grid.clone(), c0.t_ref, phased)?;
    let mut field = to_position(&inner, target, y)?;
    let global = -event.dk_x * event.dk_x * y / config.k + event.dk_x * event.dx0;
    for (m, value) in field.values.iter_mut().enumerate() {
        let x = target.x(m);
        *value *= Complex64::from_polar(1.0, event.dk_x * x + global);
    }
    Ok(field)
}

/// Probability density of the transverse momentum transferred by one resonant
/// photon scattering: `P1(dk_x) = 3/(8*k_i) * (1 + (1 - dk_x/k_i)^2)` on
/// `[0, 2*k_i]`.
pub fn p1_pdf(dk_x: f64, k_i: f64) -> Result<f64> {
    let max = 2.0 * k_i;
    if !(0.0..=max).contains(&dk_x) {
        return Err(Error::KickOutOfRange { dk_x, max });
    }
    let u = 1.0 - dk_x / k_i;
    Ok(3.0 / (8.0 * k_i) * (1.0 + u * u))
}

/// Gauss-Legendre discretization of averages over the transferred momentum:
/// nodes on `[0, 2*k_i]` with weights absorbing `P1`, so that
/// `sum_q w_q f(node_q) ~ integral P1(u) f(u) du` and the weights sum to 1.
pub fn p1_quadrature(k_i: f64, node_count: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if k_i.is_nan() || k_i <= 0.0 {
        return Err(Error::NonPositive {
            name: "k_i",
            value: k_i,
        });
    }
    let (t, glw) = gauss_legendre(node_count)?;
    let mut nodes = Vec::with_capacity(node_count);
    let mut weights = Vec::with_capacity(node_count);
    for (t, glw) in t.iter().zip(&glw) {
        let u = k_i * (1.0 + t);
        nodes.push(u);
        weights.push(glw * k_i * p1_pdf(u, k_i)?);
    }
    Ok((nodes, weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::PhysicalConfig;
    use crate::grating::{analytic_spectrum_on, GratingSpec};
    use crate::grid::{relative_l2_real, GridPair};
    use crate::propagate::free_evolve;

    fn setup() -> (PhysicalConfig, GridPair, SpectralAmplitude) {
        let config = PhysicalConfig::sodium_beam();
        let pair = GridPair::for_config(&config, 1).unwrap();
        let g = GratingSpec::new(config.d, config.delta, config.n_slits).unwrap();
        let c0 = analytic_spectrum_on(&g, &pair.spectral);
        (config, pair, c0)
    }

    #[test]
    fn event_derivations_are_exact() {
        let config = PhysicalConfig::sodium_beam();
        // Kick at 5/8 of k*d/k_i with dk_x = k_i shifts the envelope by 5d/8.
        let y12_prime = 5.0 * config.k * config.d / (8.0 * config.k_i);
        let event = ScatteringEvent::new(&config, y12_prime, config.k_i).unwrap();
        assert!((event.dx0 - 5.0 * config.d / 8.0).abs() < 1e-22);
        assert!((event.dx0 - event.dk_x * event.y12_prime / config.k).abs() < 1e-22);
        assert!((event.d_p - TAU / (config.k * config.d) * y12_prime).abs() < 1e-22);
        assert!((event.d_p / config.lambda_i - 0.625).abs() < 1e-12);
        assert!((event.t12_prime - y12_prime / config.v).abs() < 1e-16);
    }

    #[test]
    fn event_domain_is_validated() {
        let config = PhysicalConfig::sodium_beam();
        assert!(matches!(
            ScatteringEvent::new(&config, -0.1, 0.0),
            Err(Error::EventOutsideGeometry { .. })
        ));
        assert!(matches!(
            ScatteringEvent::new(&config, 2.0, 0.0),
            Err(Error::EventOutsideGeometry { .. })
        ));
        assert!(matches!(
            ScatteringEvent::new(&config, 0.01, 3.0 * config.k_i),
            Err(Error::KickOutOfRange { .. })
        ));
    }

    #[test]
    fn zero_kick_is_identity() {
        let (config, _, c0) = setup();
        let event = ScatteringEvent::new(&config, 0.01, 0.0).unwrap();
        let evolved = free_evolve(&c0, event.y12_prime, &config);
        let kicked = kick_spectrum(&evolved, &event).unwrap();
        assert_eq!(kicked.grid.kx0, evolved.grid.kx0);
        assert_eq!(kicked.values, evolved.values);
    }

    #[test]
    fn kick_preserves_sample_moduli() {
        let (config, _, c0) = setup();
        let event = ScatteringEvent::new(&config, 4e-3, 1.3 * config.k_i).unwrap();
        let evolved = free_evolve(&c0, event.y12_prime, &config);
        let kicked = kick_spectrum(&evolved, &event).unwrap();
        for (a, b) in kicked.values.iter().zip(&evolved.values) {
            assert_eq!(a.norm(), b.norm());
        }
        assert!((kicked.grid.kx0 - (evolved.grid.kx0 + event.dk_x)).abs() < 1e-9);
    }

    #[test]
    fn kick_requires_the_kick_time() {
        let (config, _, c0) = setup();
        let event = ScatteringEvent::new(&config, 4e-3, config.k_i).unwrap();
        assert!(matches!(
            kick_spectrum(&c0, &event),
            Err(Error::KickTimeMismatch { .. })
        ));
    }

    #[test]
    fn kick_preserves_position_space_modulus() {
        let (config, pair, c0) = setup();
        let event = ScatteringEvent::new(&config, 3.7e-3, 0.8 * config.k_i).unwrap();
        let evolved = free_evolve(&c0, event.y12_prime, &config);
        let kicked = kick_spectrum(&evolved, &event).unwrap();
        let psi = to_position(&evolved, &pair.spatial, event.y12_prime).unwrap();
        let psi_kicked = to_position(&kicked, &pair.spatial, event.y12_prime).unwrap();
        let err = relative_l2_real(&psi_kicked.intensity(), &psi.intensity());
        assert!(err < 1e-10, "err = {err:e}");
    }

    #[test]
    fn kicked_intensity_is_translated_laser_off_intensity() {
        let (config, pair, c0) = setup();
        let event = ScatteringEvent::new(&config, 5e-3, 1.6 * config.k_i).unwrap();
        let y = config.y12;
        let kicked = kicked_field(&c0, &event, y, &config, &pair.spatial).unwrap();
        // Band-limited translation of the un-kicked intensity by dk*(y-y')/k.
        let shift = event.dk_x * (y - event.y12_prime) / config.k;
        let translated: Vec<Complex64> = c0
            .values
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let kx = c0.grid.kx(j);
                v * Complex64::from_polar(1.0, -kx * kx * y / (2.0 * config.k) - kx * shift)
            })
            .collect();
        let reference = SpectralAmplitude::new(c0.grid.clone(), 0.0, translated).unwrap();
        let psi_ref = to_position(&reference, &pair.spatial, y).unwrap();
        let err = relative_l2_real(&kicked.intensity(), &psi_ref.intensity());
        assert!(err < 1e-10, "err = {err:e}");
    }

    #[test]
    fn kicked_field_rejects_planes_before_the_kick() {
        let (config, pair, c0) = setup();
        let event = ScatteringEvent::new(&config, 5e-3, config.k_i).unwrap();
        assert!(matches!(
            kicked_field(&c0, &event, 1e-3, &config, &pair.spatial),
            Err(Error::PlaneBeforeKick { .. })
        ));
    }

    #[test]
    fn p1_endpoint_values() {
        let k_i = 1.06675e7;
        assert!((p1_pdf(0.0, k_i).unwrap() - 3.0 / (4.0 * k_i)).abs() < 1e-22);
        assert!((p1_pdf(k_i, k_i).unwrap() - 3.0 / (8.0 * k_i)).abs() < 1e-22);
        assert!(p1_pdf(-1.0, k_i).is_err());
        assert!(p1_pdf(2.1 * k_i, k_i).is_err());
    }

    #[test]
    fn p1_is_symmetric_about_k_i() {
        let k_i = 1.06675e7;
        for i in 0..50 {
            let u = k_i * i as f64 / 50.0;
            let lo = p1_pdf(k_i - u, k_i).unwrap();
            let hi = p1_pdf(k_i + u, k_i).unwrap();
            assert!((lo - hi).abs() < 1e-12 * lo);
        }
    }

    #[test]
    fn quadrature_weights_are_normalized_with_mean_k_i() {
        let k_i = 1.06675e7;
        for nodes in [2, 8, 64, 128] {
            let (u, w) = p1_quadrature(k_i, nodes).unwrap();
            let total: f64 = w.iter().sum();
            assert!((total - 1.0).abs() < 1e-12, "nodes = {nodes}");
            let mean: f64 = u.iter().zip(&w).map(|(u, w)| u * w).sum();
            assert!(((mean - k_i) / k_i).abs() < 1e-9, "nodes = {nodes}");
        }
    }

    #[test]
    fn quadrature_reproduces_oscillatory_averages() {
        // integral of P1(u) cos(d_p u) du for d_p/lambda_i up to 3, against
        // 64-node quadrature; reference by fine Simpson integration.
        let k_i = 1.06675e7;
        let lambda_i = TAU / k_i;
        let (u, w) = p1_quadrature(k_i, 64).unwrap();
        for r in [0.1, 0.5, 1.0, 1.7, 2.4, 3.0] {
            let d_p = r * lambda_i;
            let value: f64 = u.iter().zip(&w).map(|(u, w)| w * (d_p * u).cos()).sum();
            let reference = simpson(0.0, 2.0 * k_i, 4000, |x| {
                p1_pdf(x, k_i).unwrap() * (d_p * x).cos()
            });
            assert!((value - reference).abs() < 1e-9, "r = {r}");
        }
    }

    fn simpson(a: f64, b: f64, steps: usize, f: impl Fn(f64) -> f64) -> f64 {
        let h = (b - a) / steps as f64;
        let mut sum = f(a) + f(b);
        for i in 1..steps {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * f(a + i as f64 * h);
        }
        sum * h / 3.0
    }
}
