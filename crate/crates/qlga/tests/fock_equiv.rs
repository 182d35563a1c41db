//! Equivalence of the 2-qubit-gate simulator with the spinor engine in the
//! one-particle sector, plus multi-particle conservation checks.

use qlga::evolve::{step_sequence, EvolutionVariant, PhasePolicy};
use qlga::field::{Initializer, SpinorField};
use qlga::fock::{embed_one_particle, extract_one_particle, FockState, GateStats, SqEngine};
use qlga::ops::{apply_collision, composite_stream, Axis, CollisionKind, OpApplier, OpCounters};
use qlga::params::{LatticeParams, StepOrdering};
use qlga::C64;

fn packet(l: usize) -> SpinorField {
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
    .unwrap()
}

/// Gate collisions reproduce the spinor collision exactly in the
/// one-particle sector, for every kind.
#[test]
fn collision_equivalence_one_particle() {
    let l = 8;
    let f = packet(l);
    let engine = SqEngine::default();
    for kind in [CollisionKind::X1, CollisionKind::X2, CollisionKind::Y2] {
        let theta = 0.37;
        let spinor = apply_collision(&f, kind, theta).unwrap();
        let mut state = embed_one_particle(&f).unwrap();
        let mut stats = GateStats::default();
        engine
            .collision_step(&mut state, kind, theta, &mut stats)
            .unwrap();
        assert_eq!(stats.collision_gates, 2 * l as u64);
        let back = extract_one_particle(&state, [1, 1, l]).unwrap();
        let d = back.max_amp_diff(&spinor).unwrap();
        assert!(d <= 1e-12, "{kind:?}: max diff {d:e}");
    }
}

/// The interchange sweep reproduces the spinor streaming permutation
/// bit-exactly in the one-particle sector.
#[test]
fn stream_equivalence_one_particle() {
    let l = 8;
    let f = packet(l);
    let spinor = composite_stream(&f, Axis::Z).unwrap();
    let mut state = embed_one_particle(&f).unwrap();
    let engine = SqEngine::default();
    let mut stats = GateStats::default();
    // Composite stream: components {0,3} pull +z, {1,2} pull -z.
    for c in [0usize, 3] {
        engine.stream_lane(&mut state, l, 1, c, &mut stats).unwrap();
    }
    for c in [1usize, 2] {
        engine.stream_lane(&mut state, l, -1, c, &mut stats).unwrap();
    }
    assert_eq!(stats.interchange_gates, 4 * (l as u64 - 1));
    let back = extract_one_particle(&state, [1, 1, l]).unwrap();
    assert_eq!(back, spinor);
}

/// Full steps agree after embedding for both the basic and interleaved
/// rules at L = 8 (Q = 32).
#[test]
fn full_step_equivalence_one_particle() {
    let l = 8;
    let dims = [1, 1, l];
    let dr = 1.0 / l as f64;
    let rel = LatticeParams::new(dims, dr, 1.0, StepOrdering::Relativistic).unwrap();
    let dif = LatticeParams::new(dims, dr, 1.0, StepOrdering::Diffusive).unwrap();
    for (variant, params) in [
        (EvolutionVariant::Basic, &rel),
        (EvolutionVariant::Interleaved, &dif),
        (EvolutionVariant::Symmetrized(PhasePolicy::Phase), &dif),
    ] {
        let seq = step_sequence(variant, params).unwrap();
        let f = packet(l);
        // Spinor path.
        let mut spinor = f.clone();
        let mut applier = OpApplier::new();
        let mut counters = OpCounters::default();
        applier.apply_sequence(&mut spinor, &seq, &mut counters).unwrap();
        // Gate path.
        let mut state = embed_one_particle(&f).unwrap();
        let engine = SqEngine::default();
        let mut stats = GateStats::default();
        engine.apply_sequence(&mut state, &seq, &mut stats).unwrap();
        let back = extract_one_particle(&state, dims).unwrap();
        let d = back.max_amp_diff(&spinor).unwrap();
        assert!(d <= 1e-10, "{variant:?}: max amplitude diff {d:e}");
        assert!((state.norm() - 1.0).abs() <= 1e-12);
    }
}

/// Corrupting the collision gate sign must break one-particle equivalence
/// (negative control for the equivalence suite).
#[test]
fn corrupted_gate_sign_breaks_equivalence() {
    let l = 8;
    let dims = [1, 1, l];
    let dr = 1.0 / l as f64;
    let rel = LatticeParams::new(dims, dr, 1.0, StepOrdering::Relativistic).unwrap();
    let seq = step_sequence(EvolutionVariant::Basic, &rel).unwrap();
    let f = packet(l);
    let mut spinor = f.clone();
    let mut applier = OpApplier::new();
    let mut counters = OpCounters::default();
    applier.apply_sequence(&mut spinor, &seq, &mut counters).unwrap();
    let engine = SqEngine {
        corrupt_collision_sign: true,
    };
    let mut state = embed_one_particle(&f).unwrap();
    let mut stats = GateStats::default();
    engine.apply_sequence(&mut state, &seq, &mut stats).unwrap();
    let back = extract_one_particle(&state, dims).unwrap();
    assert!(back.max_amp_diff(&spinor).unwrap() > 1e-6);
}

/// Two-particle sector at L = 4 (Q = 16, dimension 120): number
/// conservation is structural, the norm drifts at rounding level over 100
/// steps, and occupation probabilities sum to 2.
#[test]
fn two_particle_sector_conservation() {
    let l = 4;
    let dims = [1, 1, l];
    let dr = 1.0 / l as f64;
    let dif = LatticeParams::new(dims, dr, 1.0, StepOrdering::Diffusive).unwrap();
    let seq = step_sequence(EvolutionVariant::Interleaved, &dif).unwrap();

    // Two particles: one in component 0 at site 1, one in component 2 at
    // site 3.
    let mask = (1u64 << 1) | (1u64 << (4 * 3 + 2));
    let mut state = FockState::basis(16, mask).unwrap();
    assert_eq!(state.dim(), 120);
    let engine = SqEngine::default();
    let mut stats = GateStats::default();
    for _ in 0..100 {
        engine.apply_sequence(&mut state, &seq, &mut stats).unwrap();
    }
    let drift = (state.norm() - 1.0).abs();
    assert!(drift <= 1e-12, "norm drift {drift:e}");
    for (cfg, amp) in state.configs().iter().zip(state.amplitudes()) {
        if amp.norm_sqr() > 0.0 {
            assert_eq!(cfg.count_ones(), 2);
        }
    }
    let total: f64 = (0..l).map(|s| state.occupation_probability(s)).sum();
    assert!((total - 2.0).abs() <= 1e-12, "sum P = {total}");
}

/// The basic rule in the n = 2 sector also conserves everything over a
/// 100-step run.
#[test]
fn two_particle_basic_rule_conservation() {
    let l = 4;
    let dims = [1, 1, l];
    let rel = LatticeParams::new(dims, 0.25, 1.0, StepOrdering::Relativistic).unwrap();
    let seq = step_sequence(EvolutionVariant::Basic, &rel).unwrap();
    let mask = (1u64 << 0) | (1u64 << 5);
    let mut state = FockState::basis(16, mask).unwrap();
    let engine = SqEngine::default();
    let mut stats = GateStats::default();
    for _ in 0..100 {
        engine.apply_sequence(&mut state, &seq, &mut stats).unwrap();
    }
    assert!((state.norm() - 1.0).abs() <= 1e-12);
    let total: f64 = (0..l).map(|s| state.occupation_probability(s)).sum();
    assert!((total - 2.0).abs() <= 1e-12);
}
