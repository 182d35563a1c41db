//! Property tests for the structural invariants: streaming reversibility,
//! snapshot round trips, norm preservation, and sector conservation.

use proptest::prelude::*;
use qlga::field::{SpinorField, COMPONENTS};
use qlga::fock::{FockState, GateKind, TwoQubitGate};
use qlga::ops::{apply_collision, stream, Axis, CollisionKind, ComponentSet, StreamSpec};
use qlga::snapshot::{read_snapshot, write_snapshot};
use qlga::C64;

fn arb_dims() -> impl Strategy<Value = [usize; 3]> {
    (1usize..=4, 1usize..=4, 1usize..=6).prop_map(|(x, y, z)| [x, y, z])
}

fn arb_field() -> impl Strategy<Value = SpinorField> {
    arb_dims().prop_flat_map(|dims| {
        let n = dims[0] * dims[1] * dims[2] * COMPONENTS;
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n).prop_map(move |vals| {
            let data: Vec<C64> = vals.iter().map(|&(re, im)| C64::new(re, im)).collect();
            SpinorField::from_amplitudes(dims, data).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Stream then reverse-stream is the bitwise identity on any field.
    #[test]
    fn stream_reversal_bit_exact(
        field in arb_field(),
        axis_idx in 0usize..3,
        dir in prop_oneof![Just(1i8), Just(-1i8)],
        mask in 0u8..16,
    ) {
        let axis = [Axis::X, Axis::Y, Axis::Z][axis_idx];
        let subset = ComponentSet::of(
            &(0..COMPONENTS).filter(|&c| mask & (1 << c) != 0).collect::<Vec<_>>(),
        );
        let spec = StreamSpec::new(axis, dir, subset);
        if field.dims()[axis.index()] <= 1 && !subset.is_empty() {
            prop_assert!(stream(&field, &spec).is_err());
        } else {
            let there = stream(&field, &spec).unwrap();
            let back = stream(&there, &spec.reversed()).unwrap();
            prop_assert_eq!(field, back);
        }
    }

    /// Snapshots round-trip bit-exactly for any dims and data.
    #[test]
    fn snapshot_roundtrip_bit_exact(field in arb_field()) {
        let mut buf = Vec::new();
        write_snapshot(&field, &mut buf).unwrap();
        let restored = read_snapshot(&mut buf.as_slice()).unwrap();
        prop_assert_eq!(field, restored);
    }

    /// Any collision preserves the total norm to rounding.
    #[test]
    fn collision_preserves_norm(
        field in arb_field(),
        kind_idx in 0usize..3,
        theta in -3.0f64..3.0,
    ) {
        let kind = [CollisionKind::X1, CollisionKind::X2, CollisionKind::Y2][kind_idx];
        let before = field.total_norm();
        let after = apply_collision(&field, kind, theta).unwrap().total_norm();
        prop_assert!((after - before).abs() <= 1e-12 * before.max(1e-300));
    }

    /// Any sequence of number-conserving gates keeps the sector norm and
    /// the particle number.
    #[test]
    fn gates_conserve_sector(
        gates in proptest::collection::vec(
            (0usize..3, -2.0f64..2.0, 0usize..8, 0usize..8),
            1..12,
        ),
        seed_mask in 1u64..255,
    ) {
        let qubits = 8;
        let mut state = FockState::basis(qubits, seed_mask & 0xff).unwrap();
        let n = state.particles();
        for (kind_idx, theta, a, b) in gates {
            if a == b {
                continue;
            }
            let kind = match kind_idx {
                0 => GateKind::XHat(theta),
                1 => GateKind::YHat(theta),
                _ => GateKind::Interchange,
            };
            state.apply_gate(&TwoQubitGate { kind, targets: (a, b) }).unwrap();
        }
        prop_assert!((state.norm() - 1.0).abs() <= 1e-12);
        for (cfg, amp) in state.configs().iter().zip(state.amplitudes()) {
            if amp.norm_sqr() > 0.0 {
                prop_assert_eq!(cfg.count_ones() as usize, n);
            }
        }
    }
}
