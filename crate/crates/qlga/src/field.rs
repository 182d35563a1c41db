//! Discretized 4-spinor field on a periodic rectangular lattice.
//!
//! A [`SpinorField`] stores four complex amplitudes per lattice site. The
//! component index c ∈ {0, 1, 2, 3} maps to the spinor components
//! (alpha, beta, mu, nu) in that order. Sites are laid out row-major over
//! (x, y, z) with z fastest, so `site = (x * Ly + y) * Lz + z`; amplitudes
//! are stored site-major with the component index fastest. Degenerate axes
//! have extent 1, and the 1D mode is a pure-z lattice (Lx = Ly = 1).

use crate::error::{Error, Result};
use crate::C64;

/// Number of spinor components per site.
pub const COMPONENTS: usize = 4;

/// Lattice extents `[Lx, Ly, Lz]`.
pub type Dims = [usize; 3];

/// Validates lattice extents.
pub fn check_dims(dims: Dims) -> Result<()> {
    if dims.iter().any(|&d| d == 0) {
        return Err(Error::InvalidDims(dims));
    }
    Ok(())
}

/// Number of sites of a lattice.
pub fn site_count(dims: Dims) -> usize {
    dims[0] * dims[1] * dims[2]
}

/// Site index of integer coordinates (periodicity is the caller's concern).
#[inline]
pub fn site_index(dims: Dims, x: usize, y: usize, z: usize) -> usize {
    (x * dims[1] + y) * dims[2] + z
}

/// Inverse of [`site_index`].
#[inline]
pub fn site_coords(dims: Dims, site: usize) -> (usize, usize, usize) {
    let z = site % dims[2];
    let y = (site / dims[2]) % dims[1];
    let x = site / (dims[1] * dims[2]);
    (x, y, z)
}

/// Initial conditions for [`SpinorField::new`].
///
/// Wave vectors are in radians per lattice cell; positions and widths in
/// lattice cells. Physical units enter only through
/// [`LatticeParams`](crate::params::LatticeParams).
#[derive(Debug, Clone)]
pub enum Initializer {
    /// All amplitudes zero.
    Zero,
    /// A single unit amplitude at (site, component).
    UnitComponent { site: usize, component: usize },
    /// Plane wave with per-axis wave numbers and a fixed 4-component
    /// polarization, normalized to total norm 1.
    PlaneWave { k: [f64; 3], polarization: [C64; 4] },
    /// Gaussian envelope times a plane-wave carrier, normalized to total
    /// norm 1. `width` is the density standard deviation in cells; the
    /// envelope uses the minimal-image distance to `center`.
    GaussianPacket {
        center: [f64; 3],
        width: f64,
        k: [f64; 3],
        polarization: [C64; 4],
    },
}

/// Complex 4-component amplitude field; the discretized spinor.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    dims: Dims,
    data: Vec<C64>,
}

impl SpinorField {
    /// Builds a field from an initializer. Every initializer except `Zero`
    /// yields total norm 1.
    pub fn new(dims: Dims, init: &Initializer) -> Result<Self> {
        check_dims(dims)?;
        let n = site_count(dims);
        let mut data = vec![C64::new(0.0, 0.0); n * COMPONENTS];
        match init {
            Initializer::Zero => {}
            Initializer::UnitComponent { site, component } => {
                if *site >= n {
                    return Err(Error::SiteOutOfRange(*site, n));
                }
                if *component >= COMPONENTS {
                    return Err(Error::SiteOutOfRange(*component, COMPONENTS));
                }
                data[site * COMPONENTS + component] = C64::new(1.0, 0.0);
            }
            Initializer::PlaneWave { k, polarization } => {
                fill_wave(dims, &mut data, None, *k, polarization)?;
            }
            Initializer::GaussianPacket {
                center,
                width,
                k,
                polarization,
            } => {
                if !(*width > 0.0) {
                    return Err(Error::NonFinite {
                        name: "width",
                        value: *width,
                    });
                }
                fill_wave(dims, &mut data, Some((*center, *width)), *k, polarization)?;
            }
        }
        let field = SpinorField { dims, data };
        field.validate()?;
        Ok(field)
    }

    /// Zero field.
    pub fn zero(dims: Dims) -> Result<Self> {
        Self::new(dims, &Initializer::Zero)
    }

    /// Builds a field directly from amplitudes laid out `[site][component]`.
    pub fn from_amplitudes(dims: Dims, data: Vec<C64>) -> Result<Self> {
        check_dims(dims)?;
        if data.len() != site_count(dims) * COMPONENTS {
            return Err(Error::Snapshot(format!(
                "amplitude buffer length {} does not match dims {:?}",
                data.len(),
                dims
            )));
        }
        let field = SpinorField { dims, data };
        field.validate()?;
        Ok(field)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn site_count(&self) -> usize {
        site_count(self.dims)
    }

    /// True when the lattice is a pure-z line (Lx = Ly = 1).
    pub fn is_1d(&self) -> bool {
        self.dims[0] == 1 && self.dims[1] == 1
    }

    /// Amplitude at (site, component).
    #[inline]
    pub fn amp(&self, site: usize, component: usize) -> C64 {
        self.data[site * COMPONENTS + component]
    }

    #[inline]
    pub fn amp_mut(&mut self, site: usize, component: usize) -> &mut C64 {
        &mut self.data[site * COMPONENTS + component]
    }

    /// Raw amplitudes, site-major with component fastest.
    pub fn amplitudes(&self) -> &[C64] {
        &self.data
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    /// Swap-in a buffer of the same length (double-buffered streaming).
    pub(crate) fn swap_buffer(&mut self, other: &mut Vec<C64>) {
        debug_assert_eq!(self.data.len(), other.len());
        std::mem::swap(&mut self.data, other);
    }

    /// Σ_sites Σ_c |ψ_c|².
    pub fn total_norm(&self) -> f64 {
        // Serial sum in fixed order: results must not depend on threading.
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Σ_c |ψ_c(site)|².
    pub fn probability_density(&self, site: usize) -> f64 {
        let base = site * COMPONENTS;
        self.data[base..base + COMPONENTS]
            .iter()
            .map(|z| z.norm_sqr())
            .sum()
    }

    /// Per-site densities for the whole lattice.
    pub fn density_profile(&self) -> Vec<f64> {
        (0..self.site_count())
            .map(|s| self.probability_density(s))
            .collect()
    }

    /// Root mean square per-site density difference:
    /// sqrt((1/N) Σ_sites [ρ(s) − ρ_ref(s)]²).
    pub fn l2_density_error(&self, reference: &SpinorField) -> Result<f64> {
        if self.dims != reference.dims {
            return Err(Error::DimsMismatch(self.dims, reference.dims));
        }
        let n = self.site_count();
        let sum: f64 = (0..n)
            .map(|s| {
                let d = self.probability_density(s) - reference.probability_density(s);
                d * d
            })
            .sum();
        Ok((sum / n as f64).sqrt())
    }

    /// Rejects non-finite amplitudes.
    pub fn validate(&self) -> Result<()> {
        for z in &self.data {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite {
                    name: "amplitude",
                    value: if z.re.is_finite() { z.im } else { z.re },
                });
            }
        }
        Ok(())
    }

    /// Rescales so that the total norm is 1.
    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.total_norm();
        if norm <= 0.0 {
            return Err(Error::ZeroNormInitializer);
        }
        let scale = 1.0 / norm.sqrt();
        for z in &mut self.data {
            *z *= scale;
        }
        Ok(())
    }

    /// Maximum |ψ_self − ψ_other| over all amplitudes.
    pub fn max_amp_diff(&self, other: &SpinorField) -> Result<f64> {
        if self.dims != other.dims {
            return Err(Error::DimsMismatch(self.dims, other.dims));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Density second moment about `center` (cells), using minimal-image
    /// distances. Meaningful for localized packets.
    pub fn density_second_moment(&self, center: [f64; 3]) -> f64 {
        let dims = self.dims;
        let mut m2 = 0.0;
        for site in 0..self.site_count() {
            let (x, y, z) = site_coords(dims, site);
            let coords = [x as f64, y as f64, z as f64];
            let mut r2 = 0.0;
            for a in 0..3 {
                if dims[a] > 1 {
                    let d = wrap_distance(coords[a] - center[a], dims[a] as f64);
                    r2 += d * d;
                }
            }
            m2 += self.probability_density(site) * r2;
        }
        m2
    }
}

fn wrap_distance(d: f64, extent: f64) -> f64 {
    let mut d = d % extent;
    if d > extent / 2.0 {
        d -= extent;
    } else if d < -extent / 2.0 {
        d += extent;
    }
    d
}

fn fill_wave(
    dims: Dims,
    data: &mut [C64],
    envelope: Option<([f64; 3], f64)>,
    k: [f64; 3],
    polarization: &[C64; 4],
) -> Result<()> {
    if polarization.iter().all(|p| p.norm_sqr() == 0.0) {
        return Err(Error::ZeroNormInitializer);
    }
    for v in k {
        if !v.is_finite() {
            return Err(Error::NonFinite { name: "k", value: v });
        }
    }
    let n = site_count(dims);
    let mut norm = 0.0;
    for site in 0..n {
        let (x, y, z) = site_coords(dims, site);
        let coords = [x as f64, y as f64, z as f64];
        let phase = k[0] * coords[0] + k[1] * coords[1] + k[2] * coords[2];
        let mut a = C64::from_polar(1.0, phase);
        if let Some((center, width)) = envelope {
            let mut r2 = 0.0;
            for axis in 0..3 {
                if dims[axis] > 1 {
                    let d = wrap_distance(coords[axis] - center[axis], dims[axis] as f64);
                    r2 += d * d;
                }
            }
            a *= (-r2 / (4.0 * width * width)).exp();
        }
        for c in 0..COMPONENTS {
            let v = a * polarization[c];
            data[site * COMPONENTS + c] = v;
            norm += v.norm_sqr();
        }
    }
    if norm <= 0.0 {
        return Err(Error::ZeroNormInitializer);
    }
    let scale = 1.0 / norm.sqrt();
    for v in data.iter_mut() {
        *v *= scale;
    }
    Ok(())
}
