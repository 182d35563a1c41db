//! Convergence sweeps: evolve each resolution to the end time, compare
//! against the spectral reference, fit the log-log error slope.

use super::config::{EpsilonPolicy, InitialKind, RunConfig};
use crate::error::{Error, Result};
use crate::evolve::{evolve, rho_values, rho_values_1d, EvolutionVariant};
use crate::field::{Dims, Initializer, SpinorField};
use crate::oracle::{exact_evolve, DiracForm};
use crate::params::LatticeParams;
use crate::C64;
use std::time::Instant;

/// One (resolution, error) sample of an order-of-accuracy study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRecord {
    pub l: u64,
    pub delta_x: f64,
    pub steps: u64,
    pub l2_error: f64,
    pub op_count: u64,
}

/// Sweep results plus the fitted slope.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub variant: EvolutionVariant,
    pub dimensionality: u8,
    pub records: Vec<ConvergenceRecord>,
    pub slope: f64,
    /// Set when the error failed to decrease across every consecutive
    /// resolution pair.
    pub convergence_failure: bool,
    /// Per-step collision / stream-lane counts used for the op_count
    /// column (1D reductions use the reduced values).
    pub rho: (u64, u64),
    /// Wall-clock per sweep point; reported in the metadata file, never in
    /// the CSV.
    pub wall_ms: Vec<f64>,
}

/// Least-squares slope of ln(err) against ln(delta_x).
pub fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// The continuum form whose density the lattice rule reproduces for the
/// polarizations used here (the two are related by a diagonal unimodular
/// change of basis, which leaves every per-site density unchanged).
pub fn oracle_form(variant: EvolutionVariant) -> DiracForm {
    match variant {
        EvolutionVariant::Basic => DiracForm::Standard,
        _ => DiracForm::Alternate,
    }
}

/// Builds the initial field for one resolution from the domain-fraction
/// spec.
pub fn build_initial(cfg: &RunConfig, dims: Dims) -> Result<SpinorField> {
    let spec = &cfg.initial;
    let mut pol = [C64::new(0.0, 0.0); 4];
    if spec.component >= 4 {
        return Err(Error::Usage(format!(
            "component {} out of range",
            spec.component
        )));
    }
    pol[spec.component] = C64::new(1.0, 0.0);
    let center = [
        spec.center * dims[0] as f64,
        spec.center * dims[1] as f64,
        spec.center * dims[2] as f64,
    ];
    let k = |axis: usize| -> f64 {
        if dims[axis] <= 1 {
            0.0
        } else {
            2.0 * std::f64::consts::PI * spec.momentum_mode / dims[axis] as f64
        }
    };
    let init = match spec.kind {
        InitialKind::Zero => Initializer::Zero,
        InitialKind::UnitComponent => Initializer::UnitComponent {
            site: spec.site,
            component: spec.component,
        },
        InitialKind::PlaneWave => Initializer::PlaneWave {
            k: [k(0), k(1), k(2)],
            polarization: pol,
        },
        InitialKind::Gaussian => {
            let min_extent = dims.iter().copied().filter(|&d| d > 1).min().unwrap_or(1);
            Initializer::GaussianPacket {
                center,
                width: spec.width * min_extent as f64,
                k: [k(0), k(1), k(2)],
                polarization: pol,
            }
        }
    };
    SpinorField::new(dims, &init)
}

/// Lattice parameters for one resolution under the config's policies
/// (domain length 1, natural units).
pub fn build_params(cfg: &RunConfig, l: usize) -> Result<LatticeParams> {
    let dims: Dims = if cfg.dimensionality == 1 {
        [1, 1, l]
    } else {
        [l, l, l]
    };
    let delta_r = 1.0 / l as f64;
    match cfg.epsilon_policy {
        EpsilonPolicy::Proportional => {
            LatticeParams::new(dims, delta_r, cfg.mass, cfg.ordering())
        }
        EpsilonPolicy::Fixed(eps) => {
            LatticeParams::with_fixed_epsilon(dims, delta_r, eps, cfg.ordering())
        }
    }
}

/// Number of steps landing on the step boundary nearest the end time.
pub fn steps_for(cfg: &RunConfig, variant: EvolutionVariant, params: &LatticeParams) -> u64 {
    let per_step = variant.step_time(params);
    (cfg.end_time / per_step).round().max(1.0) as u64
}

/// Runs the full sweep sequentially over the configured resolutions.
pub fn run_convergence(cfg: &RunConfig) -> Result<ConvergenceReport> {
    if cfg.l_values.len() < 3 {
        return Err(Error::Usage(format!(
            "convergence sweep needs at least 3 resolutions, got {}",
            cfg.l_values.len()
        )));
    }
    let variant = cfg.variant_with_phase();
    let mut records = Vec::new();
    let mut wall_ms = Vec::new();
    for &l in &cfg.l_values {
        let params = build_params(cfg, l)?;
        let dims = params.dims();
        let initial = build_initial(cfg, dims)?;
        let steps = steps_for(cfg, variant, &params);
        let start = Instant::now();
        let mut field = initial.clone();
        let report = evolve(&mut field, &params, variant, steps, 0, |_, _| {})?;
        let reference = exact_evolve(
            &initial,
            steps as f64 * variant.step_time(&params),
            params.mass(),
            params.delta_r(),
            oracle_form(variant),
        )?;
        let l2_error = field.l2_density_error(&reference)?;
        wall_ms.push(start.elapsed().as_secs_f64() * 1e3);
        // Per-step complexity from the instrumented counters: collisions
        // weight 2 L^d, stream lanes weight (L-1)^d.
        debug_assert_eq!(report.counters.collisions % steps, 0);
        let rho_c_run = report.counters.collisions / steps;
        let rho_s_run = report.counters.stream_lanes / steps;
        let op_count = rho_c_run * 2 * site_scale(cfg.dimensionality, l as u64)
            + rho_s_run * site_scale(cfg.dimensionality, l as u64 - 1);
        records.push(ConvergenceRecord {
            l: l as u64,
            delta_x: params.delta_r(),
            steps,
            l2_error,
            op_count,
        });
    }
    let slope = fit_slope(
        &records
            .iter()
            .map(|r| (r.delta_x, r.l2_error))
            .collect::<Vec<_>>(),
    );
    let convergence_failure = records
        .windows(2)
        .all(|w| w[1].l2_error >= w[0].l2_error);
    let rho = if cfg.dimensionality == 1 {
        rho_values_1d(variant)
    } else {
        rho_values(variant)
    };
    Ok(ConvergenceReport {
        variant,
        dimensionality: cfg.dimensionality,
        records,
        slope,
        convergence_failure,
        rho,
        wall_ms,
    })
}

fn site_scale(dimensionality: u8, l: u64) -> u64 {
    if dimensionality == 1 {
        l
    } else {
        l.pow(3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_fit_recovers_exact_power_law() {
        let pts: Vec<(f64, f64)> = [64usize, 128, 256, 512]
            .iter()
            .map(|&l| {
                let dx = 1.0 / l as f64;
                (dx, dx.powf(2.5))
            })
            .collect();
        let s = fit_slope(&pts);
        assert!((s - 2.5).abs() <= 1e-12, "slope {s}");
    }

    #[test]
    fn sweep_requires_three_points() {
        let mut cfg = RunConfig::default();
        cfg.l_values = vec![64, 128];
        assert!(matches!(run_convergence(&cfg), Err(Error::Usage(_))));
    }
}
