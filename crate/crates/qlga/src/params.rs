//! Lattice discretization parameters.
//!
//! All quantities are kept in natural units (c = hbar = 1); physical units
//! are a uniform rescaling of `delta_r`, `delta_t` and `mass` and never
//! enter the update rules themselves.

use crate::error::{Error, Result};
use crate::field::{check_dims, Dims};

/// Relation between the time step and the lattice spacing.
///
/// * `Relativistic`: dt = dr (one cell of transport per step).
/// * `Diffusive`: dt = eps * dr, i.e. dt proportional to dr^2 when the
///   dimensionless mass parameter eps = m * dr shrinks with the spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOrdering {
    Relativistic,
    Diffusive,
}

/// Grid geometry plus the small parameters of one evolution step.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeParams {
    dims: Dims,
    delta_r: f64,
    mass: f64,
    epsilon: f64,
    delta_t: f64,
    ordering: StepOrdering,
    mass_angle: f64,
}

impl LatticeParams {
    /// Builds parameters from the lattice spacing and the particle mass
    /// (natural units). The dimensionless mass parameter is
    /// eps = m * dr and must satisfy 0 <= eps < 1; the mass rotation per
    /// step is m * dt under either ordering.
    pub fn new(dims: Dims, delta_r: f64, mass: f64, ordering: StepOrdering) -> Result<Self> {
        check_dims(dims)?;
        if !delta_r.is_finite() || delta_r <= 0.0 {
            return Err(Error::NonFinite {
                name: "delta_r",
                value: delta_r,
            });
        }
        if !mass.is_finite() || mass < 0.0 {
            return Err(Error::NonFinite {
                name: "mass",
                value: mass,
            });
        }
        let epsilon = mass * delta_r;
        if epsilon >= 1.0 {
            return Err(Error::EpsilonOutOfRange(epsilon));
        }
        let delta_t = match ordering {
            StepOrdering::Relativistic => delta_r,
            StepOrdering::Diffusive => epsilon * delta_r,
        };
        let mass_angle = mass * delta_t;
        Ok(LatticeParams {
            dims,
            delta_r,
            mass,
            epsilon,
            delta_t,
            ordering,
            mass_angle,
        })
    }

    /// Same parameters with a fixed eps independent of the mass; the
    /// implied mass is eps / dr.
    pub fn with_fixed_epsilon(
        dims: Dims,
        delta_r: f64,
        epsilon: f64,
        ordering: StepOrdering,
    ) -> Result<Self> {
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(Error::NonFinite {
                name: "epsilon",
                value: epsilon,
            });
        }
        Self::new(dims, delta_r, epsilon / delta_r, ordering)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    /// Lattice spacing (paper's Delta r).
    pub fn delta_r(&self) -> f64 {
        self.delta_r
    }

    /// Particle mass in natural units.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Dimensionless mass parameter eps = m * dr.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Physical time advanced by one application of the non-symmetrized
    /// rules. The symmetrized rule advances two of these.
    pub fn delta_t(&self) -> f64 {
        self.delta_t
    }

    pub fn ordering(&self) -> StepOrdering {
        self.ordering
    }

    /// Rotation angle m * dt of the mass collision per step:
    /// eps under relativistic ordering, eps^2 under diffusive ordering.
    pub fn mass_angle(&self) -> f64 {
        self.mass_angle
    }
}
