//! Second-quantized simulator over fixed-particle-number sectors.
//!
//! A register of Q = 4 L qubits (one per site and spinor component of a
//! pure-z lattice, qubit index 4 * site + component) evolves under
//! number-conserving 2-qubit gates: X/Y collision gates and the
//! interchange (swap) gate that realizes streaming. States are stored as
//! dense amplitude vectors over the choose(Q, n) occupation configurations
//! with exactly n set bits, so multi-particle sectors stay tractable
//! without a full 2^Q vector. Qubits are distinguishable modes (hardcore
//! bosons); no fermionic sign strings are applied.

use crate::error::{Error, Result};
use crate::field::{Dims, SpinorField, COMPONENTS};
use crate::ops::{CollisionKind, OpCounters, OpSequence, PrimitiveOp};
use crate::C64;
use std::io::{Read, Write};

/// Binomial coefficient, exact in u64 for the sector sizes used here.
pub fn choose(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    let mut m = n as u128;
    for d in 1..=k as u128 {
        r = r * m / d;
        m -= 1;
    }
    r as u64
}

/// Number-conserving 2-qubit gate family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    XHat(f64),
    YHat(f64),
    Interchange,
}

/// A gate with its ordered target pair (a, b).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitGate {
    pub kind: GateKind,
    pub targets: (usize, usize),
}

/// 4x4 gate matrix in the occupation basis {|00>, |01>, |10>, |11>} of the
/// ordered pair (a, b), index 2 n_a + n_b.
///
/// XHat(theta) fixes |00>, rotates the one-particle block by
/// [[cos, -i sin], [-i sin, cos]] and multiplies |11> by -1. YHat is the
/// same structure with real off-diagonals [[cos, -sin], [sin, cos]] (rows
/// |01>, |10>). Interchange swaps |01> and |10> and fixes |00>, |11>.
pub fn gate_matrix(kind: GateKind) -> [[C64; 4]; 4] {
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let mut m = [[zero; 4]; 4];
    m[0][0] = one;
    match kind {
        GateKind::XHat(theta) => {
            let c = C64::new(theta.cos(), 0.0);
            let is = C64::new(0.0, -theta.sin());
            m[1][1] = c;
            m[1][2] = is;
            m[2][1] = is;
            m[2][2] = c;
            m[3][3] = -one;
        }
        GateKind::YHat(theta) => {
            let c = C64::new(theta.cos(), 0.0);
            let s = C64::new(theta.sin(), 0.0);
            m[1][1] = c;
            m[1][2] = -s;
            m[2][1] = s;
            m[2][2] = c;
            m[3][3] = -one;
        }
        GateKind::Interchange => {
            m[1][2] = one;
            m[2][1] = one;
            m[3][3] = one;
        }
    }
    m
}

/// Amplitudes over the fixed-n occupation configurations of Q qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    qubits: usize,
    particles: usize,
    /// All bitmasks with exactly `particles` set bits, ascending.
    configs: Vec<u64>,
    amplitudes: Vec<C64>,
}

impl FockState {
    /// The zero state of a sector (all amplitudes zero).
    pub fn empty_sector(qubits: usize, particles: usize) -> Result<FockState> {
        if qubits == 0 || qubits > 64 || particles > qubits {
            return Err(Error::BadSector {
                n: particles,
                qubits,
            });
        }
        let configs = enumerate_configs(qubits, particles);
        let dim = configs.len();
        Ok(FockState {
            qubits,
            particles,
            configs,
            amplitudes: vec![C64::new(0.0, 0.0); dim],
        })
    }

    /// A basis state with the given occupation mask.
    pub fn basis(qubits: usize, mask: u64) -> Result<FockState> {
        let particles = mask.count_ones() as usize;
        let mut s = Self::empty_sector(qubits, particles)?;
        let idx = s.index_of(mask).expect("mask enumerated by construction");
        s.amplitudes[idx] = C64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    /// Sector dimension choose(Q, n).
    pub fn dim(&self) -> usize {
        self.configs.len()
    }

    pub fn configs(&self) -> &[u64] {
        &self.configs
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    /// Index of a configuration in the sector basis.
    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.configs.binary_search(&mask).ok()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Sum over the four qubits of `site` of the occupation expectation.
    pub fn occupation_probability(&self, site: usize) -> f64 {
        let mut p = 0.0;
        for c in 0..COMPONENTS {
            let bit = 1u64 << (COMPONENTS * site + c);
            for (cfg, amp) in self.configs.iter().zip(&self.amplitudes) {
                if cfg & bit != 0 {
                    p += amp.norm_sqr();
                }
            }
        }
        p
    }

    /// Applies a number-conserving 2-qubit gate.
    pub fn apply_gate(&mut self, gate: &TwoQubitGate) -> Result<()> {
        let (a, b) = gate.targets;
        if a == b {
            return Err(Error::DuplicateQubit(a));
        }
        for q in [a, b] {
            if q >= self.qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    qubits: self.qubits,
                });
            }
        }
        let m = gate_matrix(gate.kind);
        let bit_a = 1u64 << a;
        let bit_b = 1u64 << b;
        for i in 0..self.configs.len() {
            let cfg = self.configs[i];
            match (cfg & bit_a != 0, cfg & bit_b != 0) {
                (false, false) => {
                    let f = m[0][0];
                    if f != C64::new(1.0, 0.0) {
                        self.amplitudes[i] *= f;
                    }
                }
                (true, true) => {
                    self.amplitudes[i] *= m[3][3];
                }
                (false, true) => {
                    // Handle each one-particle orbit once, from its |01>
                    // member; the partner has a above b.
                    let partner = cfg ^ bit_a ^ bit_b;
                    let j = self
                        .index_of(partner)
                        .expect("partner has the same popcount");
                    let v01 = self.amplitudes[i];
                    let v10 = self.amplitudes[j];
                    self.amplitudes[i] = m[1][1] * v01 + m[1][2] * v10;
                    self.amplitudes[j] = m[2][1] * v01 + m[2][2] * v10;
                }
                (true, false) => {}
            }
        }
        Ok(())
    }
}

fn enumerate_configs(qubits: usize, particles: usize) -> Vec<u64> {
    let dim = choose(qubits as u64, particles as u64) as usize;
    let mut out = Vec::with_capacity(dim);
    if particles == 0 {
        out.push(0);
        return out;
    }
    // Gosper's hack: next integer with the same popcount.
    let mut v: u64 = (1u64 << particles) - 1;
    let limit = if qubits == 64 { u64::MAX } else { (1u64 << qubits) - 1 };
    loop {
        out.push(v);
        if v == 0 {
            break;
        }
        let c = v & v.wrapping_neg();
        let r = v + c;
        if r > limit || c == 0 {
            break;
        }
        v = r | (((v ^ r) / c) >> 2);
        if v > limit {
            break;
        }
    }
    debug_assert_eq!(out.len(), dim);
    out
}

/// Copies a spinor field into the one-particle sector: the amplitude of
/// component c at `site` becomes the amplitude of the configuration with
/// only qubit 4 * site + c occupied.
pub fn embed_one_particle(field: &SpinorField) -> Result<FockState> {
    let q = field.site_count() * COMPONENTS;
    let mut s = FockState::empty_sector(q, 1)?;
    // For n = 1 the ascending configs are exactly 1 << q, so the sector
    // index equals the qubit index.
    s.amplitudes.copy_from_slice(field.amplitudes());
    Ok(s)
}

/// Inverse of [`embed_one_particle`] on the n = 1 sector.
pub fn extract_one_particle(state: &FockState, dims: Dims) -> Result<SpinorField> {
    if state.particles != 1 {
        return Err(Error::BadSector {
            n: state.particles,
            qubits: state.qubits,
        });
    }
    if state.qubits != crate::field::site_count(dims) * COMPONENTS {
        return Err(Error::BadSector {
            n: 1,
            qubits: state.qubits,
        });
    }
    SpinorField::from_amplitudes(dims, state.amplitudes.clone())
}

/// Executes spinor-level primitive sequences as 2-qubit gate circuits on a
/// pure-z lattice of `sites` sites.
///
/// `corrupt_collision_sign` is a fault-injection hook for the equivalence
/// suite's negative control: it flips the sign convention of the X-type
/// collision gates, which must break one-particle equivalence.
#[derive(Debug, Clone, Default)]
pub struct SqEngine {
    pub corrupt_collision_sign: bool,
}

/// Gate counts from executing a sequence.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GateStats {
    /// Collision gates applied (2 per site per collision operator).
    pub collision_gates: u64,
    /// Interchange gates applied (L - 1 per streamed component lane; the
    /// open-chain sweep already realizes the periodic shift).
    pub interchange_gates: u64,
}

impl SqEngine {
    /// Collision operator as gates on every site: X1 -> XHat on pairs
    /// (0,2)/(1,3); X2 -> XHat on (0,1)/(2,3); Y2 -> YHat on (0,1)/(2,3).
    /// X gates take -theta and Y gates +theta so that the one-particle
    /// sector reproduces the spinor collision exactly.
    pub fn collision_step(
        &self,
        state: &mut FockState,
        kind: CollisionKind,
        theta: f64,
        stats: &mut GateStats,
    ) -> Result<()> {
        let sites = state.qubits / COMPONENTS;
        let sign = if self.corrupt_collision_sign { 1.0 } else { -1.0 };
        let gate_kind = match kind {
            CollisionKind::X1 | CollisionKind::X2 => GateKind::XHat(sign * theta),
            CollisionKind::Y2 => GateKind::YHat(theta),
        };
        for site in 0..sites {
            let base = COMPONENTS * site;
            for (a, b) in kind.pairs() {
                state.apply_gate(&TwoQubitGate {
                    kind: gate_kind,
                    targets: (base + a, base + b),
                })?;
                stats.collision_gates += 1;
            }
        }
        Ok(())
    }

    /// Streams one component lane along z by a nearest-neighbor interchange
    /// sweep. Pull direction +1 shifts occupation toward lower z; the L - 1
    /// adjacent swaps compose to the full cyclic shift.
    pub fn stream_lane(
        &self,
        state: &mut FockState,
        sites: usize,
        direction: i8,
        component: usize,
        stats: &mut GateStats,
    ) -> Result<()> {
        let qubit = |site: usize| COMPONENTS * site + component;
        if direction == 1 {
            for j in 0..sites - 1 {
                state.apply_gate(&TwoQubitGate {
                    kind: GateKind::Interchange,
                    targets: (qubit(j), qubit(j + 1)),
                })?;
                stats.interchange_gates += 1;
            }
        } else {
            for j in (0..sites - 1).rev() {
                state.apply_gate(&TwoQubitGate {
                    kind: GateKind::Interchange,
                    targets: (qubit(j), qubit(j + 1)),
                })?;
                stats.interchange_gates += 1;
            }
        }
        Ok(())
    }

    /// Runs a full primitive sequence (as produced by
    /// [`crate::evolve::step_sequence`] on a pure-z lattice).
    pub fn apply_sequence(
        &self,
        state: &mut FockState,
        seq: &OpSequence,
        stats: &mut GateStats,
    ) -> Result<()> {
        let sites = state.qubits / COMPONENTS;
        let mut counters = OpCounters::default();
        for op in seq {
            counters.record(op);
            match op {
                PrimitiveOp::Collision { kind, theta } => {
                    self.collision_step(state, *kind, *theta, stats)?;
                }
                PrimitiveOp::Stream(spec) => {
                    if spec.axis != crate::ops::Axis::Z && !spec.subset.is_empty() {
                        return Err(Error::DegenerateAxis { axis: spec.axis });
                    }
                    for c in spec.subset.iter() {
                        self.stream_lane(state, sites, spec.direction, c, stats)?;
                    }
                }
                PrimitiveOp::Phase(p) => {
                    for z in state.amplitudes_mut() {
                        *z *= p;
                    }
                }
            }
        }
        Ok(())
    }
}

const SECTOR_MAGIC: [u8; 4] = *b"QLGS";

/// Writes a sector snapshot: magic `QLGS`, u32 version, u32 qubit count,
/// u32 particle number, u8 precision tag, then little-endian (re, im)
/// pairs in ascending configuration order.
pub fn write_sector_snapshot<W: Write>(state: &FockState, sink: &mut W) -> Result<()> {
    sink.write_all(&SECTOR_MAGIC)?;
    sink.write_all(&crate::snapshot::FORMAT_VERSION.to_le_bytes())?;
    sink.write_all(&(state.qubits as u32).to_le_bytes())?;
    sink.write_all(&(state.particles as u32).to_le_bytes())?;
    sink.write_all(&[8u8])?;
    for z in &state.amplitudes {
        sink.write_all(&z.re.to_le_bytes())?;
        sink.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

/// Reads a sector snapshot written by [`write_sector_snapshot`].
pub fn read_sector_snapshot<R: Read>(source: &mut R) -> Result<FockState> {
    let mut head = [0u8; 4];
    source
        .read_exact(&mut head)
        .map_err(|e| Error::Snapshot(format!("truncated sector magic: {e}")))?;
    if head != SECTOR_MAGIC {
        return Err(Error::Snapshot(format!("bad sector magic {head:?}")));
    }
    let mut word = [0u8; 4];
    let mut next_u32 = |what: &str| -> Result<u32> {
        source
            .read_exact(&mut word)
            .map_err(|e| Error::Snapshot(format!("truncated {what}: {e}")))?;
        Ok(u32::from_le_bytes(word))
    };
    let version = next_u32("version")?;
    if version != crate::snapshot::FORMAT_VERSION {
        return Err(Error::Snapshot(format!("unsupported sector version {version}")));
    }
    let qubits = next_u32("qubit count")? as usize;
    let particles = next_u32("particle number")? as usize;
    let mut tag = [0u8; 1];
    source
        .read_exact(&mut tag)
        .map_err(|e| Error::Snapshot(format!("truncated precision tag: {e}")))?;
    if tag[0] != 8 {
        return Err(Error::Snapshot(format!("unknown precision tag {}", tag[0])));
    }
    let mut state = FockState::empty_sector(qubits, particles)?;
    let mut buf = [0u8; 16];
    for i in 0..state.dim() {
        source
            .read_exact(&mut buf)
            .map_err(|e| Error::Snapshot(format!("truncated sector payload: {e}")))?;
        state.amplitudes[i] = C64::new(
            f64::from_le_bytes(buf[0..8].try_into().unwrap()),
            f64::from_le_bytes(buf[8..16].try_into().unwrap()),
        );
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Initializer;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn choose_values() {
        assert_eq!(choose(32, 1), 32);
        assert_eq!(choose(32, 2), 496);
        assert_eq!(choose(16, 2), 120);
        assert_eq!(choose(4, 5), 0);
    }

    #[test]
    fn sector_dims_match() {
        let s = FockState::empty_sector(32, 2).unwrap();
        assert_eq!(s.dim(), 496);
        let s = FockState::empty_sector(32, 1).unwrap();
        assert_eq!(s.dim(), 32);
    }

    #[test]
    fn xhat_pi_half_moves_occupation_with_minus_i() {
        // n=1, Q=4: XHat(pi/2) on (0, 2) sends |q0=1> to -i |q2=1>.
        let mut s = FockState::basis(4, 0b0001).unwrap();
        s.apply_gate(&TwoQubitGate {
            kind: GateKind::XHat(FRAC_PI_2),
            targets: (0, 2),
        })
        .unwrap();
        let idx = s.index_of(0b0100).unwrap();
        assert!((s.amplitudes()[idx] - C64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn double_occupation_phase() {
        let mut s = FockState::basis(4, 0b0101).unwrap();
        s.apply_gate(&TwoQubitGate {
            kind: GateKind::XHat(0.0),
            targets: (0, 2),
        })
        .unwrap();
        let idx = s.index_of(0b0101).unwrap();
        // 1 + 2(cos 0 - 1) - 2 cos 0 = -1 even at theta = 0.
        assert!((s.amplitudes()[idx] - C64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn interchange_swaps_single_occupation() {
        let mut s = FockState::basis(4, 0b0010).unwrap();
        s.apply_gate(&TwoQubitGate {
            kind: GateKind::Interchange,
            targets: (1, 3),
        })
        .unwrap();
        assert!((s.amplitudes()[s.index_of(0b1000).unwrap()] - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn gate_is_unitary_and_number_conserving() {
        for kind in [GateKind::XHat(0.37), GateKind::YHat(-1.2), GateKind::Interchange] {
            let m = gate_matrix(kind);
            // Check M M^H = I by rows.
            for r in 0..4 {
                for c in 0..4 {
                    let mut dot = C64::new(0.0, 0.0);
                    for k in 0..4 {
                        dot += m[r][k] * m[c][k].conj();
                    }
                    let want = if r == c { 1.0 } else { 0.0 };
                    assert!((dot - C64::new(want, 0.0)).norm() < 1e-14);
                }
            }
            // Number conservation: only the middle block mixes.
            assert_eq!(m[0][1], C64::new(0.0, 0.0));
            assert_eq!(m[0][3], C64::new(0.0, 0.0));
            assert_eq!(m[3][1], C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn out_of_range_targets_rejected() {
        let mut s = FockState::basis(4, 0b0001).unwrap();
        let g = TwoQubitGate {
            kind: GateKind::Interchange,
            targets: (0, 7),
        };
        assert!(matches!(
            s.apply_gate(&g),
            Err(Error::QubitOutOfRange { .. })
        ));
        let g = TwoQubitGate {
            kind: GateKind::Interchange,
            targets: (2, 2),
        };
        assert!(matches!(s.apply_gate(&g), Err(Error::DuplicateQubit(2))));
    }

    #[test]
    fn embed_extract_roundtrip() {
        let f = SpinorField::new(
            [1, 1, 8],
            &Initializer::GaussianPacket {
                center: [0.0, 0.0, 4.0],
                width: 1.2,
                k: [0.0, 0.0, 0.9],
                polarization: [
                    C64::new(0.4, 0.1),
                    C64::new(-0.2, 0.3),
                    C64::new(0.6, 0.0),
                    C64::new(0.0, -0.1),
                ],
            },
        )
        .unwrap();
        let s = embed_one_particle(&f).unwrap();
        assert_eq!(s.qubits(), 32);
        assert!((s.norm() - 1.0).abs() < 1e-12);
        let g = extract_one_particle(&s, [1, 1, 8]).unwrap();
        assert_eq!(f, g);
        // Occupation probability equals the spinor site density.
        for site in 0..8 {
            assert!((s.occupation_probability(site) - f.probability_density(site)).abs() < 1e-14);
        }
    }

    #[test]
    fn vacuum_untouched_by_collisions() {
        let mut s = FockState::basis(8, 0).unwrap();
        let engine = SqEngine::default();
        let mut stats = GateStats::default();
        engine
            .collision_step(&mut s, CollisionKind::Y2, 0.7, &mut stats)
            .unwrap();
        assert!((s.amplitudes()[0] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(stats.collision_gates, 4);
    }

    #[test]
    fn stream_lane_is_cyclic_shift() {
        // Single particle in component 0 at site 2 of L=4; pull +1 moves
        // the occupation to site 1.
        let mut s = FockState::basis(16, 1 << 8).unwrap();
        let engine = SqEngine::default();
        let mut stats = GateStats::default();
        engine.stream_lane(&mut s, 4, 1, 0, &mut stats).unwrap();
        assert_eq!(stats.interchange_gates, 3);
        assert!((s.amplitudes()[s.index_of(1 << 4).unwrap()] - C64::new(1.0, 0.0)).norm() < 1e-15);
        // Wrap: occupation at site 0 moves to site 3.
        let mut s = FockState::basis(16, 1 << 0).unwrap();
        engine.stream_lane(&mut s, 4, 1, 0, &mut stats).unwrap();
        assert!((s.amplitudes()[s.index_of(1 << 12).unwrap()] - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn two_particles_same_lane_both_shift() {
        // Occupations at sites 0 and 1 in component 0 shift to {3, 0}.
        let mask = (1u64 << 0) | (1u64 << 4);
        let mut s = FockState::basis(16, mask).unwrap();
        let engine = SqEngine::default();
        let mut stats = GateStats::default();
        engine.stream_lane(&mut s, 4, 1, 0, &mut stats).unwrap();
        let want = (1u64 << 12) | (1u64 << 0);
        let idx = s.index_of(want).unwrap();
        assert!((s.amplitudes()[idx].norm() - 1.0).abs() < 1e-14);
        // Every nonzero configuration keeps popcount 2.
        for (cfg, amp) in s.configs().iter().zip(s.amplitudes()) {
            if amp.norm() > 0.0 {
                assert_eq!(cfg.count_ones(), 2);
            }
        }
    }

    #[test]
    fn occupation_probabilities_sum_to_n() {
        let mask = (1u64 << 0) | (1u64 << 4);
        let s = FockState::basis(16, mask).unwrap();
        assert_eq!(s.occupation_probability(0), 1.0);
        assert_eq!(s.occupation_probability(1), 1.0);
        let total: f64 = (0..4).map(|site| s.occupation_probability(site)).sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn sector_snapshot_roundtrip() {
        let mut s = FockState::basis(8, 0b10000001).unwrap();
        let engine = SqEngine::default();
        let mut stats = GateStats::default();
        engine
            .collision_step(&mut s, CollisionKind::X1, 0.41, &mut stats)
            .unwrap();
        let mut buf = Vec::new();
        write_sector_snapshot(&s, &mut buf).unwrap();
        let t = read_sector_snapshot(&mut buf.as_slice()).unwrap();
        assert_eq!(s, t);
    }
}
