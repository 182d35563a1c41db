//! Unitary building blocks: on-site collision rotations, component-subset
//! streaming permutations, and the interleaved displacement composites.
//!
//! Collisions mix the four spinor components site-locally with a 4x4
//! unitary; streaming shifts selected components one cell along a lattice
//! axis with periodic wraparound and no arithmetic. Composite update rules
//! are expressed as [`OpSequence`] values (primitive operations listed in
//! application order) so the spinor engine, the dense-matrix builder and
//! the second-quantized gate simulator all execute the same sequence.

use crate::error::{Error, Result};
use crate::field::{site_count, site_index, Dims, SpinorField, COMPONENTS};
use crate::C64;
use rayon::prelude::*;

/// Sites below this count are processed serially; above it, collisions are
/// data-parallel over sites. Output is bitwise identical either way.
const PAR_MIN_SITES: usize = 8192;

/// Lattice axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// On-site collision family.
///
/// * `X1` = exp(i theta sigma_x) (x) 1, coupling components (0,2) and (1,3);
/// * `X2` = 1 (x) exp(i theta sigma_x), coupling (0,1) and (2,3);
/// * `Y2` = 1 (x) exp(i theta sigma_y), coupling (0,1) and (2,3).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollisionKind {
    X1,
    X2,
    Y2,
}

impl CollisionKind {
    /// The two component pairs the collision couples.
    pub fn pairs(self) -> [(usize, usize); 2] {
        match self {
            CollisionKind::X1 => [(0, 2), (1, 3)],
            CollisionKind::X2 | CollisionKind::Y2 => [(0, 1), (2, 3)],
        }
    }

    /// 2x2 block acting on each coupled pair (a, b), rows/cols in (a, b)
    /// order: X-type is [[cos, i sin], [i sin, cos]], Y-type is
    /// [[cos, sin], [-sin, cos]].
    pub fn block(self, theta: f64) -> [[C64; 2]; 2] {
        let (co, si) = unit_cos_sin(theta);
        let c = C64::new(co, 0.0);
        match self {
            CollisionKind::X1 | CollisionKind::X2 => {
                let is = C64::new(0.0, si);
                [[c, is], [is, c]]
            }
            CollisionKind::Y2 => {
                let s = C64::new(si, 0.0);
                [[c, s], [-s, c]]
            }
        }
    }

    /// Full 4x4 matrix, row-major.
    pub fn matrix(self, theta: f64) -> [[C64; 4]; 4] {
        let mut m = [[C64::new(0.0, 0.0); 4]; 4];
        for d in 0..4 {
            m[d][d] = C64::new(1.0, 0.0);
        }
        let b = self.block(theta);
        for (a, bb) in self.pairs() {
            m[a][a] = b[0][0];
            m[a][bb] = b[0][1];
            m[bb][a] = b[1][0];
            m[bb][bb] = b[1][1];
        }
        m
    }
}

/// Subset of the four spinor components, as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentSet(u8);

impl ComponentSet {
    pub const EMPTY: ComponentSet = ComponentSet(0);

    pub fn of(components: &[usize]) -> ComponentSet {
        let mut mask = 0u8;
        for &c in components {
            assert!(c < COMPONENTS, "component index {c} out of range");
            mask |= 1 << c;
        }
        ComponentSet(mask)
    }

    #[inline]
    pub fn contains(self, c: usize) -> bool {
        self.0 & (1 << c) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..COMPONENTS).filter(move |&c| self.contains(c))
    }
}

/// One streaming move: shift `subset` components one cell along `axis`.
///
/// Pull semantics: the new amplitude at x is the old amplitude at
/// x + direction * (unit step along axis), with periodic wraparound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamSpec {
    pub axis: Axis,
    pub direction: i8,
    pub subset: ComponentSet,
}

impl StreamSpec {
    pub fn new(axis: Axis, direction: i8, subset: ComponentSet) -> StreamSpec {
        assert!(direction == 1 || direction == -1, "direction must be +1 or -1");
        StreamSpec {
            axis,
            direction,
            subset,
        }
    }

    /// The direction-reversed twin; applying both in either order is the
    /// identity, bit-exactly.
    pub fn reversed(self) -> StreamSpec {
        StreamSpec {
            direction: -self.direction,
            ..self
        }
    }
}

/// A primitive update: a collision, a streaming move, or a global phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrimitiveOp {
    Collision { kind: CollisionKind, theta: f64 },
    Stream(StreamSpec),
    Phase(C64),
}

impl PrimitiveOp {
    pub fn collision(kind: CollisionKind, theta: f64) -> PrimitiveOp {
        PrimitiveOp::Collision { kind, theta }
    }

    pub fn stream(axis: Axis, direction: i8, components: &[usize]) -> PrimitiveOp {
        PrimitiveOp::Stream(StreamSpec::new(axis, direction, ComponentSet::of(components)))
    }

    /// Adjoint: collisions negate their angle, streams reverse direction,
    /// phases conjugate.
    pub fn adjoint(self) -> PrimitiveOp {
        match self {
            PrimitiveOp::Collision { kind, theta } => PrimitiveOp::Collision { kind, theta: -theta },
            PrimitiveOp::Stream(s) => PrimitiveOp::Stream(s.reversed()),
            PrimitiveOp::Phase(p) => PrimitiveOp::Phase(p.conj()),
        }
    }
}

/// A composite operator as primitives in application order (index 0 acts
/// first).
pub type OpSequence = Vec<PrimitiveOp>;

/// Adjoint of a whole sequence: reversed order, each primitive adjointed.
pub fn adjoint_sequence(seq: &[PrimitiveOp]) -> OpSequence {
    seq.iter().rev().map(|op| op.adjoint()).collect()
}

/// The same sequence with every streaming direction reversed (collisions
/// untouched).
pub fn reverse_streams(seq: &[PrimitiveOp]) -> OpSequence {
    seq.iter()
        .map(|op| match *op {
            PrimitiveOp::Stream(s) => PrimitiveOp::Stream(s.reversed()),
            other => other,
        })
        .collect()
}

/// Counts of applied primitives. Collisions count once per operator;
/// streams count once per shifted component lane.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounters {
    pub collisions: u64,
    pub stream_lanes: u64,
}

impl OpCounters {
    pub fn record(&mut self, op: &PrimitiveOp) {
        match op {
            PrimitiveOp::Collision { .. } => self.collisions += 1,
            PrimitiveOp::Stream(s) => self.stream_lanes += s.subset.len() as u64,
            PrimitiveOp::Phase(_) => {}
        }
    }
}

/// Applies primitives to spinor fields, reusing one scratch buffer for
/// streaming (read old buffer, write new; never in place along the
/// streamed axis).
#[derive(Debug)]
pub struct OpApplier {
    scratch: Vec<C64>,
}

impl OpApplier {
    pub fn new() -> OpApplier {
        OpApplier { scratch: Vec::new() }
    }

    /// Applies one primitive in place.
    pub fn apply(&mut self, field: &mut SpinorField, op: &PrimitiveOp) -> Result<()> {
        match op {
            PrimitiveOp::Collision { kind, theta } => collide_in_place(field, *kind, *theta),
            PrimitiveOp::Stream(spec) => {
                let dims = field.dims();
                validate_stream(dims, spec)?;
                self.scratch.resize(field.amplitudes().len(), C64::new(0.0, 0.0));
                stream_into(dims, field.amplitudes(), &mut self.scratch, spec);
                // Both buffers stay allocated for reuse across steps.
                field.swap_buffer(&mut self.scratch);
                Ok(())
            }
            PrimitiveOp::Phase(p) => {
                // Same incremental treatment as the rotations.
                let cm1 = p.re - 1.0;
                let s = p.im;
                for z in field.amplitudes_mut() {
                    *z = C64::new(
                        z.re + (cm1 * z.re - s * z.im),
                        z.im + (cm1 * z.im + s * z.re),
                    );
                }
                Ok(())
            }
        }
    }

    /// Applies a sequence in order, recording counts.
    pub fn apply_sequence(
        &mut self,
        field: &mut SpinorField,
        seq: &[PrimitiveOp],
        counters: &mut OpCounters,
    ) -> Result<()> {
        for op in seq {
            self.apply(field, op)?;
            counters.record(op);
        }
        Ok(())
    }
}

impl Default for OpApplier {
    fn default() -> Self {
        Self::new()
    }
}

fn validate_stream(dims: Dims, spec: &StreamSpec) -> Result<()> {
    if spec.subset.is_empty() {
        return Ok(());
    }
    if dims[spec.axis.index()] <= 1 {
        return Err(Error::DegenerateAxis { axis: spec.axis });
    }
    Ok(())
}

/// Exact double-length product a * b = (p, e) with p + e exact
/// (Dekker/Veltkamp splitting; no FMA requirement).
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let split = |x: f64| -> (f64, f64) {
        let t = 134217729.0 * x; // 2^27 + 1
        let hi = t - (t - x);
        (hi, x - hi)
    };
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

/// c^2 + s^2 - 1 evaluated exactly to double-double precision.
fn unit_defect(c: f64, s: f64) -> f64 {
    let (p1, e1) = two_prod(c, c);
    let (p2, e2) = two_prod(s, s);
    ((p1 - 1.0) + p2) + (e1 + e2)
}

/// (cos theta, sin theta) nudged by at most one ulp each so that
/// cos^2 + sin^2 is as close to 1 as f64 rotation pairs allow. The
/// returned pair drives every collision, which keeps the systematic part
/// of the norm drift near zero over long runs.
pub fn unit_cos_sin(theta: f64) -> (f64, f64) {
    let c0 = theta.cos();
    let s0 = theta.sin();
    let mut best = (c0, s0);
    let mut best_defect = unit_defect(c0, s0).abs();
    for c in [c0, next_after(c0, 1), next_after(c0, -1)] {
        for s in [s0, next_after(s0, 1), next_after(s0, -1)] {
            let d = unit_defect(c, s).abs();
            if d < best_defect {
                best_defect = d;
                best = (c, s);
            }
        }
    }
    best
}

fn next_after(x: f64, dir: i64) -> f64 {
    if x == 0.0 {
        return f64::from_bits(1) * dir as f64;
    }
    let bits = x.to_bits() as i64;
    let stepped = if (x > 0.0) == (dir > 0) { bits + 1 } else { bits - 1 };
    f64::from_bits(stepped as u64)
}

fn collide_in_place(field: &mut SpinorField, kind: CollisionKind, theta: f64) -> Result<()> {
    if !theta.is_finite() {
        return Err(Error::NonFinite {
            name: "theta",
            value: theta,
        });
    }
    if theta == 0.0 {
        // Identity; skipping keeps zero-angle evolution bit-exact.
        return Ok(());
    }
    // Both collision families reduce to the real plane rotation
    // [[cos, sin], [-sin, cos]]: Y2 acts directly on (a, b) component
    // pairs, X-type on (a, i*c), which is an exact register relabeling.
    // The rotation itself is applied as three shears,
    //   x += a y; y += b x; x += a y  (a = tan(theta/2), b = -sin theta),
    // whose composition has determinant exactly 1 in floating point, so
    // the norm has no systematic contraction over long runs. A plain
    // matrix kernel would multiply the norm by cos^2 + sin^2 - 1 = O(ulp)
    // coherently every pass.
    let shear_a = (theta / 2.0).tan();
    let shear_b = -theta.sin();
    if shear_a.abs() > 4.0 {
        // Angles near pi: shears lose accuracy; use the matrix form.
        return collide_matrix(field, kind, theta);
    }
    let pairs = kind.pairs();
    let data = field.amplitudes_mut();
    let rot2 = move |x: &mut f64, y: &mut f64| {
        *x += shear_a * *y;
        *y += shear_b * *x;
        *x += shear_a * *y;
    };
    let rotate = move |site: &mut [C64]| {
        for (a, c) in pairs {
            match kind {
                CollisionKind::X1 | CollisionKind::X2 => {
                    // (x, y) = (v_a, i v_c): y.re = -v_c.im, y.im = v_c.re.
                    let (mut xr, mut yr) = (site[a].re, -site[c].im);
                    let (mut xi, mut yi) = (site[a].im, site[c].re);
                    rot2(&mut xr, &mut yr);
                    rot2(&mut xi, &mut yi);
                    site[a] = C64::new(xr, xi);
                    site[c] = C64::new(yi, -yr);
                }
                CollisionKind::Y2 => {
                    let (mut xr, mut yr) = (site[a].re, site[c].re);
                    let (mut xi, mut yi) = (site[a].im, site[c].im);
                    rot2(&mut xr, &mut yr);
                    rot2(&mut xi, &mut yi);
                    site[a] = C64::new(xr, xi);
                    site[c] = C64::new(yr, yi);
                }
            }
        }
    };
    if data.len() / COMPONENTS >= PAR_MIN_SITES {
        data.par_chunks_mut(COMPONENTS).for_each(rotate);
    } else {
        data.chunks_mut(COMPONENTS).for_each(rotate);
    }
    Ok(())
}

fn collide_matrix(field: &mut SpinorField, kind: CollisionKind, theta: f64) -> Result<()> {
    let (co, si) = unit_cos_sin(theta);
    let cm1 = co - 1.0;
    let pairs = kind.pairs();
    for site in field.amplitudes_mut().chunks_mut(COMPONENTS) {
        for (a, c) in pairs {
            let va = site[a];
            let vc = site[c];
            match kind {
                CollisionKind::X1 | CollisionKind::X2 => {
                    site[a] = C64::new(
                        va.re + (cm1 * va.re - si * vc.im),
                        va.im + (cm1 * va.im + si * vc.re),
                    );
                    site[c] = C64::new(
                        vc.re + (cm1 * vc.re - si * va.im),
                        vc.im + (cm1 * vc.im + si * va.re),
                    );
                }
                CollisionKind::Y2 => {
                    site[a] = C64::new(
                        va.re + (cm1 * va.re + si * vc.re),
                        va.im + (cm1 * va.im + si * vc.im),
                    );
                    site[c] = C64::new(
                        vc.re + (cm1 * vc.re - si * va.re),
                        vc.im + (cm1 * vc.im - si * va.im),
                    );
                }
            }
        }
    }
    Ok(())
}

fn stream_into(dims: Dims, src: &[C64], dst: &mut [C64], spec: &StreamSpec) {
    let [lx, ly, lz] = dims;
    let dir = spec.direction as isize;
    let subset = spec.subset;
    if lx == 1 && ly == 1 {
        // Pure-z line: contiguous sites.
        for z in 0..lz {
            let zs = (z as isize + dir).rem_euclid(lz as isize) as usize;
            for c in 0..COMPONENTS {
                let from = if subset.contains(c) { zs } else { z };
                dst[z * COMPONENTS + c] = src[from * COMPONENTS + c];
            }
        }
        return;
    }
    let ax = spec.axis.index();
    let extents = [lx, ly, lz];
    for x in 0..lx {
        for y in 0..ly {
            for z in 0..lz {
                let here = [x, y, z];
                let mut there = here;
                there[ax] =
                    (here[ax] as isize + dir).rem_euclid(extents[ax] as isize) as usize;
                let si = site_index(dims, x, y, z) * COMPONENTS;
                let sj = site_index(dims, there[0], there[1], there[2]) * COMPONENTS;
                for c in 0..COMPONENTS {
                    let from = if subset.contains(c) { sj } else { si };
                    dst[si + c] = src[from + c];
                }
            }
        }
    }
}

/// Multiplies every site's 4-vector by the collision matrix; sites are
/// independent.
pub fn apply_collision(field: &SpinorField, kind: CollisionKind, theta: f64) -> Result<SpinorField> {
    let mut out = field.clone();
    collide_in_place(&mut out, kind, theta)?;
    Ok(out)
}

/// Shifts the subset components one cell along the spec's axis (pull
/// convention), returning the streamed field.
pub fn stream(field: &SpinorField, spec: &StreamSpec) -> Result<SpinorField> {
    let mut out = field.clone();
    let mut applier = OpApplier::new();
    applier.apply(&mut out, &PrimitiveOp::Stream(*spec))?;
    Ok(out)
}

/// The sign pattern of diag(+,-,-,+): components {0,3} pull from +axis,
/// {1,2} pull from -axis.
pub fn composite_stream_sequence(axis: Axis) -> OpSequence {
    vec![
        PrimitiveOp::stream(axis, 1, &[0, 3]),
        PrimitiveOp::stream(axis, -1, &[1, 2]),
    ]
}

/// Applies the full streaming move along one axis.
pub fn composite_stream(field: &SpinorField, axis: Axis) -> Result<SpinorField> {
    let mut out = field.clone();
    let mut applier = OpApplier::new();
    let mut counters = OpCounters::default();
    applier.apply_sequence(&mut out, &composite_stream_sequence(axis), &mut counters)?;
    Ok(out)
}

/// Interleaved displacement operator along one axis, as an 8-factor
/// sequence of small-angle collisions and single-component-pair streams.
///
/// The stream subsets split the collision-coupled pairs so that the two
/// interleaved groups transport opposite-sign components, which couples the
/// even/odd sublattices and gives a first-order generator proportional to
/// the corresponding Dirac transport matrix:
///
/// * x: Y2 collisions, subsets {0,3} / {1,2} -> generator sigma_z (x) sigma_x;
/// * y: X2 collisions, subsets {0,3} / {1,2} -> generator sigma_z (x) sigma_y;
/// * z: X1 collisions, subsets {0,1} / {2,3} -> generator -sigma_y (x) 1.
pub fn displacement_sequence(axis: Axis, epsilon: f64) -> Result<OpSequence> {
    if !epsilon.is_finite() || epsilon <= 0.0 || epsilon >= 1.0 {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    let half = epsilon / 2.0;
    let seq = match axis {
        Axis::X => {
            let a: &[usize] = &[0, 3];
            let b: &[usize] = &[1, 2];
            vec![
                PrimitiveOp::collision(CollisionKind::Y2, -half),
                PrimitiveOp::stream(axis, -1, a),
                PrimitiveOp::collision(CollisionKind::Y2, half),
                PrimitiveOp::stream(axis, 1, a),
                PrimitiveOp::collision(CollisionKind::Y2, -half),
                PrimitiveOp::stream(axis, 1, b),
                PrimitiveOp::collision(CollisionKind::Y2, half),
                PrimitiveOp::stream(axis, -1, b),
            ]
        }
        Axis::Y => {
            let a: &[usize] = &[0, 3];
            let b: &[usize] = &[1, 2];
            vec![
                PrimitiveOp::collision(CollisionKind::X2, half),
                PrimitiveOp::stream(axis, -1, a),
                PrimitiveOp::collision(CollisionKind::X2, -half),
                PrimitiveOp::stream(axis, 1, a),
                PrimitiveOp::collision(CollisionKind::X2, half),
                PrimitiveOp::stream(axis, 1, b),
                PrimitiveOp::collision(CollisionKind::X2, -half),
                PrimitiveOp::stream(axis, -1, b),
            ]
        }
        Axis::Z => {
            let a: &[usize] = &[0, 1];
            let b: &[usize] = &[2, 3];
            vec![
                PrimitiveOp::collision(CollisionKind::X1, -half),
                PrimitiveOp::stream(axis, -1, a),
                PrimitiveOp::collision(CollisionKind::X1, half),
                PrimitiveOp::stream(axis, 1, a),
                PrimitiveOp::collision(CollisionKind::X1, -half),
                PrimitiveOp::stream(axis, 1, b),
                PrimitiveOp::collision(CollisionKind::X1, half),
                PrimitiveOp::stream(axis, -1, b),
            ]
        }
    };
    Ok(seq)
}

/// Dual displacement operator: the adjoint of the direction-reversed
/// displacement. It transports in the same direction with the opposite sign
/// of the second-order error terms, which is what the symmetrized rule
/// cancels.
pub fn dual_displacement_sequence(axis: Axis, epsilon: f64) -> Result<OpSequence> {
    Ok(adjoint_sequence(&reverse_streams(&displacement_sequence(
        axis, epsilon,
    )?)))
}

/// Applies the interleaved displacement along `axis`.
pub fn apply_displacement(field: &SpinorField, axis: Axis, epsilon: f64) -> Result<SpinorField> {
    let seq = displacement_sequence(axis, epsilon)?;
    let mut out = field.clone();
    let mut applier = OpApplier::new();
    let mut counters = OpCounters::default();
    applier.apply_sequence(&mut out, &seq, &mut counters)?;
    Ok(out)
}

/// Dense-operator size cap (sites), to keep matrices at or below
/// (4*512)^2 entries.
pub const DENSE_SITE_CAP: usize = 512;

/// Exact dense matrix (4 N_sites square) of a primitive sequence, built by
/// running the sequence on every basis vector through the same code path
/// the field engine uses.
pub fn dense_operator(seq: &[PrimitiveOp], dims: Dims) -> Result<nalgebra::DMatrix<C64>> {
    let n = site_count(dims);
    if n > DENSE_SITE_CAP {
        return Err(Error::DenseSizeCap {
            sites: n,
            cap: DENSE_SITE_CAP,
        });
    }
    let dim = n * COMPONENTS;
    let mut m = nalgebra::DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
    let mut applier = OpApplier::new();
    for j in 0..dim {
        let mut basis = vec![C64::new(0.0, 0.0); dim];
        basis[j] = C64::new(1.0, 0.0);
        let mut field = SpinorField::from_amplitudes(dims, basis)?;
        let mut counters = OpCounters::default();
        applier.apply_sequence(&mut field, seq, &mut counters)?;
        for (i, z) in field.amplitudes().iter().enumerate() {
            m[(i, j)] = *z;
        }
    }
    Ok(m)
}
