//! CSV/metadata emission, the complexity table, and the equivalence suite.

use super::config::{OutputFormat, RunConfig};
use super::convergence::ConvergenceReport;
use crate::error::{Error, Result};
use crate::evolve::{
    op_count, qubit_complexity, rho_values, step_sequence, EvolutionVariant, PhasePolicy,
};
use crate::field::{Initializer, SpinorField};
use crate::fock::{
    choose, embed_one_particle, extract_one_particle, FockState, GateStats, SqEngine,
};
use crate::ops::{OpApplier, OpCounters};
use crate::params::{LatticeParams, StepOrdering};
use crate::C64;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

/// CSV text for a convergence report: one header row naming the record
/// fields, one row per resolution. Wall-clock times are deliberately kept
/// out so reruns are byte-identical.
pub fn convergence_csv(report: &ConvergenceReport) -> String {
    let mut out = String::from("l,delta_x,steps,l2_error,op_count\n");
    for r in &report.records {
        writeln!(
            out,
            "{},{:e},{},{:e},{}",
            r.l, r.delta_x, r.steps, r.l2_error, r.op_count
        )
        .unwrap();
    }
    out
}

/// Human-readable sidecar with everything nondeterministic or derived:
/// slope, convergence flag, rho values, wall times.
pub fn convergence_metadata(report: &ConvergenceReport, threads: usize) -> String {
    let mut out = String::new();
    writeln!(out, "variant: {}", report.variant.name()).unwrap();
    writeln!(out, "dimensionality: {}", report.dimensionality).unwrap();
    writeln!(out, "rho_c: {} (per step)", report.rho.0).unwrap();
    writeln!(out, "rho_s: {} (per step)", report.rho.1).unwrap();
    writeln!(out, "fitted_slope: {:.6}", report.slope).unwrap();
    writeln!(out, "convergence_failure: {}", report.convergence_failure).unwrap();
    writeln!(out, "threads: {threads}").unwrap();
    for (r, ms) in report.records.iter().zip(&report.wall_ms) {
        writeln!(out, "wall_ms[L={}]: {:.3}", r.l, ms).unwrap();
    }
    out
}

/// Writes CSV (and SVG when requested) plus the metadata sidecar; returns
/// the CSV path.
pub fn write_convergence_outputs(
    cfg: &RunConfig,
    report: &ConvergenceReport,
    out_dir: &Path,
) -> Result<PathBuf> {
    fs::create_dir_all(out_dir)?;
    let stem = format!("convergence_{}", report.variant.name());
    let csv_path = out_dir.join(format!("{stem}.csv"));
    fs::write(&csv_path, convergence_csv(report))?;
    fs::write(
        out_dir.join(format!("{stem}_meta.txt")),
        convergence_metadata(report, cfg.threads),
    )?;
    if matches!(cfg.format, OutputFormat::Svg | OutputFormat::Both) {
        let series = vec![(
            report.variant.name().to_string(),
            report
                .records
                .iter()
                .map(|r| (r.delta_x, r.l2_error))
                .collect::<Vec<_>>(),
        )];
        let svg = super::svg::log_log_plot(
            "density error vs grid resolution",
            "delta x",
            "L2 density error",
            &series,
            &[(0.5, "slope 0.5"), (2.5, "slope 2.5")],
        );
        fs::write(out_dir.join(format!("{stem}.svg")), svg)?;
    }
    Ok(csv_path)
}

/// Complexity table rows: L, Q = 4 L^3, rho_c, rho_s, C, C/Q.
pub fn complexity_csv(variant: EvolutionVariant, l_list: &[u64]) -> Result<String> {
    let mut out = String::from("l,qubits,rho_c,rho_s,op_count,per_qubit\n");
    for &l in l_list {
        let c = op_count(variant, l)?;
        let q = qubit_complexity(variant, l)?;
        writeln!(
            out,
            "{},{},{},{},{},{:e}",
            l,
            q.qubits,
            c.rho_c,
            c.rho_s,
            c.total,
            c.total as f64 / q.qubits as f64
        )
        .unwrap();
    }
    Ok(out)
}

/// Pretty-printed complexity report for the terminal.
pub fn complexity_table(variant: EvolutionVariant, l_list: &[u64]) -> Result<String> {
    let (rho_c, rho_s) = rho_values(variant);
    let mut out = format!(
        "variant {}: C = {rho_c} * 2 L^3 + {rho_s} * (L-1)^3, Q = 4 L^3, C/Q -> {}\n",
        variant.name(),
        rho_c as f64 / 2.0 + rho_s as f64 / 4.0,
    );
    writeln!(
        out,
        "{:>8} {:>14} {:>6} {:>6} {:>16} {:>10}",
        "L", "Q", "rho_c", "rho_s", "C", "C/Q"
    )
    .unwrap();
    for &l in l_list {
        let c = op_count(variant, l)?;
        let q = qubit_complexity(variant, l)?;
        writeln!(
            out,
            "{:>8} {:>14} {:>6} {:>6} {:>16} {:>10.4}",
            l,
            q.qubits,
            c.rho_c,
            c.rho_s,
            c.total,
            c.total as f64 / q.qubits as f64
        )
        .unwrap();
    }
    Ok(out)
}

/// One check of the equivalence suite.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivCheck {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivReport {
    pub checks: Vec<EquivCheck>,
}

impl EquivReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            writeln!(
                out,
                "{} {:<44} residual {:>12.3e}  tol {:>8.1e}",
                if c.pass { "pass" } else { "FAIL" },
                c.name,
                c.residual,
                c.tolerance
            )
            .unwrap();
        }
        out
    }
}

fn suite_packet(l: usize) -> Result<SpinorField> {
    SpinorField::new(
        [1, 1, l],
        &Initializer::GaussianPacket {
            center: [0.0, 0.0, l as f64 / 2.0],
            width: l as f64 / 8.0,
            k: [0.0, 0.0, 2.0 * std::f64::consts::PI / l as f64],
            polarization: [
                C64::new(0.7, 0.1),
                C64::new(-0.3, 0.2),
                C64::new(0.1, 0.5),
                C64::new(0.2, -0.2),
            ],
        },
    )
}

/// Runs the second-quantized equivalence suite: one-particle agreement
/// with the spinor engine for every update rule at L = 8 (Q = 32), and the
/// n = 2 conservation checks at L = 4. The `corrupt_gate_sign` hook exists
/// so a deliberately wrong gate is seen to fail.
pub fn run_equivalence(cfg: &RunConfig) -> Result<EquivReport> {
    let mut checks = Vec::new();
    let engine = SqEngine {
        corrupt_collision_sign: cfg.corrupt_gate_sign,
    };

    // One-particle equivalence at L = 8.
    let l = 8usize;
    let dims = [1, 1, l];
    let dr = 1.0 / l as f64;
    let rel = LatticeParams::new(dims, dr, cfg.mass, StepOrdering::Relativistic)?;
    let dif = LatticeParams::new(dims, dr, cfg.mass, StepOrdering::Diffusive)?;
    for (variant, params) in [
        (EvolutionVariant::Basic, &rel),
        (EvolutionVariant::Interleaved, &dif),
        (EvolutionVariant::Symmetrized(PhasePolicy::Phase), &dif),
    ] {
        let seq = step_sequence(variant, params)?;
        let packet = suite_packet(l)?;
        let mut spinor = packet.clone();
        let mut applier = OpApplier::new();
        let mut counters = OpCounters::default();
        applier.apply_sequence(&mut spinor, &seq, &mut counters)?;
        let mut state = embed_one_particle(&packet)?;
        let mut stats = GateStats::default();
        engine.apply_sequence(&mut state, &seq, &mut stats)?;
        let back = extract_one_particle(&state, dims)?;
        let residual = back.max_amp_diff(&spinor)?;
        checks.push(EquivCheck {
            name: format!("one-particle step equivalence ({})", variant.name()),
            residual,
            tolerance: 1e-10,
            pass: residual <= 1e-10,
        });
        let norm_residual = (state.norm() - 1.0).abs();
        checks.push(EquivCheck {
            name: format!("one-particle norm ({})", variant.name()),
            residual: norm_residual,
            tolerance: 1e-12,
            pass: norm_residual <= 1e-12,
        });
    }

    // Sector dimensions.
    let dim_ok = choose(32, 1) == 32 && choose(32, 2) == 496 && choose(16, 2) == 120;
    checks.push(EquivCheck {
        name: "sector dimensions choose(Q, n)".into(),
        residual: if dim_ok { 0.0 } else { 1.0 },
        tolerance: 0.0,
        pass: dim_ok,
    });

    // Two-particle conservation at L = 4 over 100 interleaved steps.
    let l2 = 4usize;
    let dif2 = LatticeParams::new([1, 1, l2], 0.25, cfg.mass, StepOrdering::Diffusive)?;
    let seq = step_sequence(EvolutionVariant::Interleaved, &dif2)?;
    let mask = (1u64 << 1) | (1u64 << (4 * 3 + 2));
    let mut state = FockState::basis(16, mask)?;
    let mut stats = GateStats::default();
    for _ in 0..100 {
        engine.apply_sequence(&mut state, &seq, &mut stats)?;
    }
    let norm_drift = (state.norm() - 1.0).abs();
    checks.push(EquivCheck {
        name: "n=2 norm drift (100 steps, L=4)".into(),
        residual: norm_drift,
        tolerance: 1e-12,
        pass: norm_drift <= 1e-12,
    });
    let popcount_ok = state
        .configs()
        .iter()
        .zip(state.amplitudes())
        .all(|(cfg_bits, amp)| amp.norm_sqr() == 0.0 || cfg_bits.count_ones() == 2);
    checks.push(EquivCheck {
        name: "n=2 number conservation".into(),
        residual: if popcount_ok { 0.0 } else { 1.0 },
        tolerance: 0.0,
        pass: popcount_ok,
    });
    let total_p: f64 = (0..l2).map(|s| state.occupation_probability(s)).sum();
    let p_residual = (total_p - 2.0).abs();
    checks.push(EquivCheck {
        name: "n=2 occupation probabilities sum to 2".into(),
        residual: p_residual,
        tolerance: 1e-12,
        pass: p_residual <= 1e-12,
    });

    Ok(EquivReport { checks })
}

/// Norm-observer CSV for a single evolution run: deterministic columns
/// only.
pub fn norm_observer_csv(rows: &[(u64, f64, f64)]) -> String {
    let mut out = String::from("step,norm,relative_drift\n");
    for (step, norm, drift) in rows {
        writeln!(out, "{step},{norm:e},{drift:e}").unwrap();
    }
    out
}

/// Runs a single evolution with snapshots and a norm observer; returns the
/// observer CSV path.
pub fn run_single(cfg: &RunConfig, out_dir: &Path) -> Result<PathBuf> {
    let l = *cfg.l_values.first().ok_or_else(|| {
        Error::Usage("evolve needs a lattice size".into())
    })?;
    let variant = cfg.variant_with_phase();
    let params = super::convergence::build_params(cfg, l)?;
    let initial = super::convergence::build_initial(cfg, params.dims())?;
    let steps = super::convergence::steps_for(cfg, variant, &params);
    fs::create_dir_all(out_dir)?;
    let n0 = initial.total_norm();
    let mut rows: Vec<(u64, f64, f64)> = Vec::new();
    let cadence = if cfg.observer_cadence == 0 {
        steps.max(1)
    } else {
        cfg.observer_cadence
    };
    let mut field = initial;
    let mut snapshot_err: Option<Error> = None;
    crate::evolve::evolve(&mut field, &params, variant, steps, cadence, |i, f| {
        let norm = f.total_norm();
        rows.push((i, norm, (norm - n0).abs() / n0));
        if snapshot_err.is_none() {
            let path = out_dir.join(format!("state_{i:08}.qlga"));
            let result = fs::File::create(&path)
                .map_err(Error::Io)
                .and_then(|mut sink| crate::snapshot::write_snapshot(f, &mut sink));
            if let Err(e) = result {
                snapshot_err = Some(e);
            }
        }
    })?;
    if let Some(e) = snapshot_err {
        return Err(e);
    }
    let csv_path = out_dir.join("norms.csv");
    fs::write(&csv_path, norm_observer_csv(&rows))?;
    Ok(csv_path)
}
