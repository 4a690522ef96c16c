//! Command implementations on top of the core pipeline.

use anyhow::{bail, Result};
use num_complex::Complex64;
use std::f64::consts::TAU;
use std::path::Path;

use mzsim_core::fringe::fit_fringe;
use mzsim_core::grating::analytic_spectrum_on;
use mzsim_core::grid::{relative_l2, relative_l2_real, to_position};
use mzsim_core::*;

use crate::config_file::RunConfig;
use crate::output::{format_float, metadata, Csv};

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Plane {
    /// Arrival plane of the second grating.
    G2,
    /// Arrival plane of the third grating.
    G3,
}

fn kick_event(run: &RunConfig) -> Result<Option<ScatteringEvent>> {
    match (run.kick_y12prime_m, run.kick_dkx_per_m) {
        (Some(y12_prime), Some(dk_x)) => {
            Ok(Some(ScatteringEvent::new(&run.config, y12_prime, dk_x)?))
        }
        (None, None) => Ok(None),
        (Some(_), None) => bail!(
            "kick_y12prime_m without kick_dkx_per_m selects kick averaging, \
             which this command does not support"
        ),
        (None, Some(_)) => bail!("kick_dkx_per_m given without kick_y12prime_m"),
    }
}

pub fn field_profile(run: &RunConfig, plane: Plane, oversample: u32, out: &Path) -> Result<()> {
    let event = kick_event(run)?;
    let interferometer = Interferometer::new(&run.config, oversample)?;
    let field = match plane {
        Plane::G2 => interferometer.field_at_second_grating(event.as_ref())?,
        Plane::G3 => interferometer.field_at_third_grating(event.as_ref())?,
    };
    let rows: Vec<Vec<f64>> = field
        .grid
        .positions()
        .zip(field.intensity())
        .map(|(x, i)| vec![x, i])
        .collect();
    let extra = [
        ("plane".to_string(), plane_name(plane).to_string()),
        ("y_m".to_string(), format_float(field.y)),
        ("oversample".to_string(), oversample.to_string()),
        ("derived_k_per_m".to_string(), format_float(run.config.k)),
    ];
    let csv = Csv {
        meta: metadata("field-profile", &run.resolved, &extra),
        columns: vec!["x_m", "intensity"],
        rows,
        footer: vec![],
    };
    csv.write(out)
}

fn plane_name(plane: Plane) -> &'static str {
    match plane {
        Plane::G2 => "g2",
        Plane::G3 => "g3",
    }
}

pub fn fringe_scan(run: &RunConfig, nodes: usize, oversample: u32, out: &Path) -> Result<()> {
    let config = &run.config;
    let interferometer = Interferometer::new(config, oversample)?;
    let offsets = interferometer.default_scan_offsets();
    let (mode, scan) = match (run.kick_y12prime_m, run.kick_dkx_per_m) {
        (None, None) => (
            "laser-off".to_string(),
            interferometer.scan(None, &offsets)?,
        ),
        (Some(y12_prime), Some(dk_x)) => {
            let event = ScatteringEvent::new(config, y12_prime, dk_x)?;
            (
                "single-kick".to_string(),
                interferometer.scan(Some(&event), &offsets)?,
            )
        }
        (Some(y12_prime), None) => (
            format!("kick-averaged ({nodes} nodes)"),
            interferometer.averaged_scan(y12_prime, &offsets, nodes)?,
        ),
        (None, Some(_)) => bail!("kick_dkx_per_m given without kick_y12prime_m"),
    };
    let fit = fit_fringe(&scan, config.d)?;
    let rows: Vec<Vec<f64>> = scan
        .iter()
        .map(|&(dx3, t)| vec![dx3, t, fit.value(dx3)])
        .collect();
    let extra = [
        ("mode".to_string(), mode),
        ("oversample".to_string(), oversample.to_string()),
        ("derived_k_per_m".to_string(), format_float(run.config.k)),
    ];
    let csv = Csv {
        meta: metadata("fringe-scan", &run.resolved, &extra),
        columns: vec!["dx3_m", "T", "T_fit"],
        rows,
        footer: vec![
            format!("fit_a = {}", format_float(fit.a)),
            format!("fit_b = {}", format_float(fit.b)),
            format!("fit_phi_rad = {}", format_float(fit.phi)),
            format!("fit_period_m = {}", format_float(fit.period)),
            format!("fit_residual_rms = {}", format_float(fit.residual_rms)),
        ],
    };
    csv.write(out)
}

pub fn contrast_curve_cmd(
    run: &RunConfig,
    r_min: f64,
    r_max: f64,
    r_step: f64,
    nodes: usize,
    oversample: u32,
    out: &Path,
) -> Result<()> {
    if !(r_min > 0.0 && r_step > 0.0 && r_max >= r_min) {
        bail!("need 0 < r-min <= r-max and r-step > 0");
    }
    let mut r_values = Vec::new();
    let mut r = r_min;
    while r <= r_max * (1.0 + 1e-12) {
        r_values.push(r);
        r = r_min + r_step * (r_values.len() as f64);
    }
    let points = contrast_curve(&run.config, &r_values, nodes, oversample)?;
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|p| vec![p.r, p.b_numeric_abs, p.b_analytic_abs, p.phase_shift])
        .collect();
    let extra = [
        ("nodes".to_string(), nodes.to_string()),
        ("oversample".to_string(), oversample.to_string()),
    ];
    let csv = Csv {
        meta: metadata("contrast-curve", &run.resolved, &extra),
        columns: vec![
            "dp_over_lambda_i",
            "B_numeric_abs",
            "B_analytic_abs",
            "phase_shift_rad",
        ],
        rows,
        footer: vec![],
    };
    csv.write(out)
}

/// Numerical invariant suite; returns true when every check passes.
pub fn validate(run: &RunConfig, oversample: u32) -> Result<bool> {
    let config = &run.config;
    let mut all_ok = true;
    let mut report = |name: &str, measured: f64, limit: f64| {
        let ok = measured <= limit;
        all_ok &= ok;
        println!(
            "{}: {name}: measured {measured:.3e}, limit {limit:.1e}",
            if ok { "PASS" } else { "FAIL" }
        );
    };

    // Transferred-momentum distribution: normalization and mean recoil.
    let (nodes, weights) = p1_quadrature(config.k_i, 64)?;
    let total: f64 = weights.iter().sum();
    let mean: f64 = nodes.iter().zip(&weights).map(|(u, w)| u * w).sum();
    report(
        "transfer distribution normalization",
        (total - 1.0).abs(),
        1e-12,
    );
    report(
        "transfer distribution mean recoil",
        ((mean - config.k_i) / config.k_i).abs(),
        1e-9,
    );

    // Kick-average quadrature against the closed-form contrast factor.
    let mut worst = 0.0f64;
    for i in 0..30 {
        let r = 0.1 + i as f64 * 0.1;
        let d_p = r * config.lambda_i;
        let avg: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(u, w)| w * (d_p * u - TAU * r).cos())
            .sum();
        worst = worst.max((avg - analytic_b(r)).abs());
    }
    report("kick-average quadrature vs closed form", worst, 1e-9);

    // Kick transform: position-space modulus preservation and the
    // translation of the downstream intensity.
    let pair = GridPair::for_config(config, oversample)?;
    let g = GratingSpec::new(config.d, config.delta, config.n_slits)?;
    let c0 = analytic_spectrum_on(&g, &pair.spectral);
    let mut worst_modulus = 0.0f64;
    let mut worst_translation = 0.0f64;
    for (y12_prime, frac) in [(2e-3, 0.3), (6e-3, 1.0), (1.2e-2, 1.9)] {
        let event = ScatteringEvent::new(config, y12_prime, frac * config.k_i)?;
        let evolved = free_evolve(&c0, y12_prime, config);
        let kicked = kick_spectrum(&evolved, &event)?;
        let before = to_position(&evolved, &pair.spatial, y12_prime)?;
        let after = to_position(&kicked, &pair.spatial, y12_prime)?;
        worst_modulus =
            worst_modulus.max(relative_l2_real(&after.intensity(), &before.intensity()));

        let y = config.y12;
        let field = kicked_field(&c0, &event, y, config, &pair.spatial)?;
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
        let reference = SpectralAmplitude::new(c0.grid.clone(), 0.0, translated)?;
        let reference = to_position(&reference, &pair.spatial, y)?;
        worst_translation =
            worst_translation.max(relative_l2_real(&field.intensity(), &reference.intensity()));
    }
    report("kick modulus preservation", worst_modulus, 1e-10);
    report("kicked intensity translation", worst_translation, 1e-4);

    // Representation equivalence of the two propagators on the masked field.
    let amp = 1.0 / (config.delta * (config.n_slits as f64).sqrt());
    let plane = Wavefield::new(
        pair.spatial.clone(),
        0.0,
        vec![Complex64::new(amp, 0.0); pair.spatial.count],
    )?;
    let c = numeric_spectrum(&plane, &g, &pair.spectral)?;
    let boundary = to_position(&c, &pair.spatial, 0.0)?;
    let spectral_route = angular_spectrum_propagate(&c, config.y12, config, &pair.spatial)?;
    let convolution_route = fresnel_propagate(&boundary, config.y12, config)?;
    report(
        "propagator representation equivalence",
        relative_l2(&convolution_route.values, &spectral_route.values),
        1e-3,
    );

    Ok(all_ok)
}
