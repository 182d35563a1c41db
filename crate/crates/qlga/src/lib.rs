//! Quantum lattice-gas simulation of the free Dirac equation in one and
//! three dimensions.
//!
//! The crate is organized around six pieces:
//!
//! * [`field`] / [`params`] / [`snapshot`] — the discretized 4-spinor, the
//!   lattice discretization parameters, and a portable binary snapshot
//!   format;
//! * [`ops`] — unitary collision rotations, streaming permutations, and the
//!   interleaved displacement composites;
//! * [`evolve`] — the basic, interleaved and symmetrized time-step rules
//!   plus operation-count accounting;
//! * [`oracle`] — exact spectral reference solutions of the continuum
//!   equation and an independent Crank-Nicolson cross-check;
//! * [`fock`] — a second-quantized simulator over fixed-particle-number
//!   sectors driven by number-conserving 2-qubit gates;
//! * [`bench`] — the convergence / equivalence / complexity drivers behind
//!   the `qlga` command-line tool.

pub mod bench;
pub mod dense;
pub mod error;
pub mod evolve;
pub mod field;
pub mod fock;
pub mod ops;
pub mod oracle;
pub mod params;
pub mod snapshot;

pub type C64 = num_complex::Complex<f64>;

pub use error::{Error, Result};
pub use field::{Dims, Initializer, SpinorField};
pub use params::{LatticeParams, StepOrdering};
