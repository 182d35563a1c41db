//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice dims mismatch: {0:?} vs {1:?}")]
    DimsMismatch([usize; 3], [usize; 3]),

    #[error("lattice dims must be positive, got {0:?}")]
    InvalidDims([usize; 3]),

    #[error("streaming along degenerate axis {axis:?} (extent 1) with nonempty component subset")]
    DegenerateAxis { axis: crate::ops::Axis },

    #[error("epsilon {0} outside the small-parameter regime [0, 1)")]
    EpsilonOutOfRange(f64),

    #[error("parameter {name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("initializer produces a zero-norm field")]
    ZeroNormInitializer,

    #[error("site index {0} out of range (lattice has {1} sites)")]
    SiteOutOfRange(usize, usize),

    #[error("{variant:?} step requires {required:?} ordering, got {got:?}")]
    WrongOrdering {
        variant: crate::evolve::EvolutionVariant,
        required: crate::params::StepOrdering,
        got: crate::params::StepOrdering,
    },

    #[error("dense operator size cap exceeded: {sites} sites > {cap}")]
    DenseSizeCap { sites: usize, cap: usize },

    #[error("lattice extent {0} too small (need L >= 2)")]
    LatticeTooSmall(usize),

    #[error("qubit index {index} out of range for {qubits} qubits")]
    QubitOutOfRange { index: usize, qubits: usize },

    #[error("gate targets must differ, got qubit {0} twice")]
    DuplicateQubit(usize),

    #[error("particle number {n} unsupported for {qubits} qubits")]
    BadSector { n: usize, qubits: usize },

    #[error("snapshot: {0}")]
    Snapshot(String),

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
