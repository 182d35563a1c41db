//! Exact reference solutions of the continuum free Dirac equation.
//!
//! [`exact_evolve`] diagonalizes the evolution per Fourier mode: the field
//! is transformed over the periodic lattice, each mode's 4x4 Hermitian
//! generator is exponentiated through its eigendecomposition, and the
//! result is transformed back. Natural units (c = hbar = 1) throughout.
//!
//! [`crank_nicolson_evolve`] is an independent real-space finite-difference
//! integrator used only to cross-check the spectral path; it shares no
//! code with it beyond the field container.

use crate::dense::{id2, kron, pauli, signed_mode};
use crate::error::{Error, Result};
use crate::field::{site_count, Dims, SpinorField, COMPONENTS};
use crate::C64;
use nalgebra::{Matrix4, SMatrix, SVector, Vector4};
use rustfft::FftPlanner;

/// Which set of Dirac matrices the continuum equation uses.
///
/// Both share alpha_x = sigma_z (x) sigma_x, alpha_y = sigma_z (x) sigma_y
/// and beta = sigma_x (x) 1; they differ in the z matrix:
/// sigma_z (x) sigma_z (`Standard`) versus sigma_y (x) 1 (`Alternate`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiracForm {
    Standard,
    Alternate,
}

impl DiracForm {
    /// The three transport matrices (alpha_x, alpha_y, alpha_z).
    pub fn alphas(self) -> [Matrix4<C64>; 3] {
        let [sx, sy, sz] = pauli();
        match self {
            DiracForm::Standard => [kron(&sz, &sx), kron(&sz, &sy), kron(&sz, &sz)],
            DiracForm::Alternate => [kron(&sz, &sx), kron(&sz, &sy), kron(&sy, &id2())],
        }
    }

    /// The mass matrix beta.
    pub fn beta(self) -> Matrix4<C64> {
        let [sx, _, _] = pauli();
        kron(&sx, &id2())
    }
}

/// Maximum violation of the Clifford constraints
/// alpha_i^2 = beta^2 = 1, {alpha_i, alpha_j} = 0 (i != j),
/// {beta, alpha_i} = 0, for an arbitrary matrix tuple.
pub fn anticommutator_report(alphas: &[Matrix4<C64>; 3], beta: &Matrix4<C64>) -> f64 {
    let eye = Matrix4::<C64>::identity();
    let mut worst: f64 = 0.0;
    let mut track = |m: Matrix4<C64>| {
        worst = worst.max(m.iter().map(|z| z.norm()).fold(0.0, f64::max));
    };
    for a in alphas {
        track(a * a - eye);
        track(beta * a + a * beta);
    }
    track(beta * beta - eye);
    for i in 0..3 {
        for j in (i + 1)..3 {
            track(alphas[i] * alphas[j] + alphas[j] * alphas[i]);
        }
    }
    worst
}

/// Constraint violations of a built-in form; at most ~1e-16 for both.
pub fn anticommutator_check(form: DiracForm) -> f64 {
    anticommutator_report(&form.alphas(), &form.beta())
}

/// Relativistic dispersion omega = sqrt(|k|^2 + m^2) (natural units).
pub fn dispersion(k: [f64; 3], mass: f64) -> f64 {
    (k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + mass * mass).sqrt()
}

/// Per-mode Hermitian generator M(k) = sum_i alpha_i k_i + m beta; the
/// evolution of the mode is exp(i t M). Its eigenvalues are +/- omega(k),
/// each twice.
pub fn mode_hamiltonian(form: DiracForm, k: [f64; 3], mass: f64) -> Matrix4<C64> {
    let alphas = form.alphas();
    let mut m = form.beta() * C64::new(mass, 0.0);
    for (a, ki) in alphas.iter().zip(k) {
        m += a * C64::new(ki, 0.0);
    }
    m
}

/// exp(i t M) for the Hermitian 4x4 M, by eigendecomposition.
fn mode_propagator(m: &Matrix4<C64>, t: f64) -> Matrix4<C64> {
    let eig = m.symmetric_eigen();
    let mut u = Matrix4::zeros();
    for j in 0..4 {
        let phase = C64::from_polar(1.0, eig.eigenvalues[j] * t);
        let v = eig.eigenvectors.column(j);
        for r in 0..4 {
            for c in 0..4 {
                u[(r, c)] += phase * v[r] * v[c].conj();
            }
        }
    }
    u
}

/// Evolves a lattice-sampled, band-limited initial condition for physical
/// time `t` (negative t runs backwards). `delta_r` converts mode indices to
/// physical wave numbers. Norm is preserved to 1e-12.
pub fn exact_evolve(
    initial: &SpinorField,
    t: f64,
    mass: f64,
    delta_r: f64,
    form: DiracForm,
) -> Result<SpinorField> {
    if !mass.is_finite() {
        return Err(Error::NonFinite {
            name: "mass",
            value: mass,
        });
    }
    if !t.is_finite() {
        return Err(Error::NonFinite { name: "t", value: t });
    }
    if !delta_r.is_finite() || delta_r <= 0.0 {
        return Err(Error::NonFinite {
            name: "delta_r",
            value: delta_r,
        });
    }
    let dims = initial.dims();
    let n = site_count(dims);

    // Component-major staging for the transforms.
    let mut comps: [Vec<C64>; COMPONENTS] = Default::default();
    for (c, buf) in comps.iter_mut().enumerate() {
        *buf = (0..n).map(|s| initial.amp(s, c)).collect();
        fft3(buf, dims, false);
    }

    // Apply the per-mode propagator.
    for mode in 0..n {
        let (mx, my, mz) = crate::field::site_coords(dims, mode);
        let k = [
            signed_mode(mx, dims[0]) / delta_r,
            signed_mode(my, dims[1]) / delta_r,
            signed_mode(mz, dims[2]) / delta_r,
        ];
        let u = mode_propagator(&mode_hamiltonian(form, k, mass), t);
        let v = Vector4::new(comps[0][mode], comps[1][mode], comps[2][mode], comps[3][mode]);
        let w = u * v;
        for c in 0..COMPONENTS {
            comps[c][mode] = w[c];
        }
    }

    let scale = 1.0 / n as f64;
    let mut data = vec![C64::new(0.0, 0.0); n * COMPONENTS];
    for (c, buf) in comps.iter_mut().enumerate() {
        fft3(buf, dims, true);
        for (s, z) in buf.iter().enumerate() {
            data[s * COMPONENTS + c] = z * scale;
        }
    }
    SpinorField::from_amplitudes(dims, data)
}

/// Physical-unit wrapper around [`exact_evolve`]: with light speed `c` and
/// reduced Planck constant `hbar`, the evolution for time `t` equals the
/// natural-unit evolution for time c * t with mass m c / hbar.
pub fn exact_evolve_physical(
    initial: &SpinorField,
    t: f64,
    mass: f64,
    delta_r: f64,
    c: f64,
    hbar: f64,
    form: DiracForm,
) -> Result<SpinorField> {
    if !(c > 0.0) || !(hbar > 0.0) {
        return Err(Error::NonFinite {
            name: "unit constant",
            value: if c > 0.0 { hbar } else { c },
        });
    }
    exact_evolve(initial, c * t, mass * c / hbar, delta_r, form)
}

/// In-place 3D FFT over the site layout `(x * Ly + y) * Lz + z`.
fn fft3(buf: &mut [C64], dims: Dims, inverse: bool) {
    let [lx, ly, lz] = dims;
    let mut planner = FftPlanner::<f64>::new();
    let plan = |len: usize, planner: &mut FftPlanner<f64>| {
        if inverse {
            planner.plan_fft_inverse(len)
        } else {
            planner.plan_fft_forward(len)
        }
    };
    if lz > 1 {
        let fft = plan(lz, &mut planner);
        for line in buf.chunks_mut(lz) {
            fft.process(line);
        }
    }
    if ly > 1 {
        let fft = plan(ly, &mut planner);
        let mut scratch = vec![C64::new(0.0, 0.0); ly];
        for x in 0..lx {
            for z in 0..lz {
                for y in 0..ly {
                    scratch[y] = buf[(x * ly + y) * lz + z];
                }
                fft.process(&mut scratch);
                for y in 0..ly {
                    buf[(x * ly + y) * lz + z] = scratch[y];
                }
            }
        }
    }
    if lx > 1 {
        let fft = plan(lx, &mut planner);
        let mut scratch = vec![C64::new(0.0, 0.0); lx];
        for y in 0..ly {
            for z in 0..lz {
                for x in 0..lx {
                    scratch[x] = buf[(x * ly + y) * lz + z];
                }
                fft.process(&mut scratch);
                for x in 0..lx {
                    buf[(x * ly + y) * lz + z] = scratch[x];
                }
            }
        }
    }
}

/// Unitary change of basis V with V M_std(k) V^H = M_alt(k) for every k,
/// computed numerically as the nullspace of the stacked intertwining
/// constraints. Returned with the first nonzero entry made real positive.
pub fn connecting_unitary() -> Matrix4<C64> {
    let std_gens = {
        let f = DiracForm::Standard;
        let [ax, ay, az] = f.alphas();
        [ax, ay, az, f.beta()]
    };
    let alt_gens = {
        let f = DiracForm::Alternate;
        let [ax, ay, az] = f.alphas();
        [ax, ay, az, f.beta()]
    };
    // Constraints G_alt V - V G_std = 0, linear in vec(V) (column-major):
    // (I (x) G_alt - G_std^T (x) I) vec(V) = 0.
    let mut normal = SMatrix::<C64, 16, 16>::zeros();
    for (ga, gs) in alt_gens.iter().zip(&std_gens) {
        let mut row = SMatrix::<C64, 16, 16>::zeros();
        for i in 0..4 {
            for j in 0..4 {
                for r in 0..4 {
                    for c in 0..4 {
                        // Row index for entry (i, j) of the residual,
                        // column index for entry (r, c) of V.
                        let ri = j * 4 + i;
                        let ci = c * 4 + r;
                        let mut v = C64::new(0.0, 0.0);
                        if j == c {
                            v += ga[(i, r)];
                        }
                        if i == r {
                            v -= gs[(c, j)];
                        }
                        row[(ri, ci)] += v;
                    }
                }
            }
        }
        normal += row.adjoint() * row;
    }
    let eig = normal.symmetric_eigen();
    let mut best = 0;
    for j in 1..16 {
        if eig.eigenvalues[j] < eig.eigenvalues[best] {
            best = j;
        }
    }
    let v: SVector<C64, 16> = eig.eigenvectors.column(best).into_owned();
    let mut m = Matrix4::zeros();
    for c in 0..4 {
        for r in 0..4 {
            m[(r, c)] = v[c * 4 + r];
        }
    }
    // By Schur's lemma V^H V is a positive multiple of the identity; scale
    // it away and fix the global phase.
    let scale = ((m.adjoint() * m).trace().re / 4.0).sqrt();
    m /= C64::new(scale, 0.0);
    let pivot = m.iter().find(|z| z.norm() > 1e-8).copied().unwrap();
    m * (pivot.conj() / pivot.norm())
}

/// Independent Crank-Nicolson integrator on a pure-z lattice with central
/// differences and periodic boundaries. The cyclic block-tridiagonal system
/// is prefactored once (block Thomas plus a rank-8 corner correction) and
/// reused across steps.
pub fn crank_nicolson_evolve(
    initial: &SpinorField,
    t: f64,
    mass: f64,
    delta_r: f64,
    n_steps: usize,
    form: DiracForm,
) -> Result<SpinorField> {
    if !initial.is_1d() {
        return Err(Error::InvalidDims(initial.dims()));
    }
    if n_steps == 0 {
        return Ok(initial.clone());
    }
    let l = initial.dims()[2];
    if l < 3 {
        return Err(Error::LatticeTooSmall(l));
    }
    let h = t / n_steps as f64;
    let a_z = form.alphas()[2];
    let beta = form.beta();
    let i = C64::new(0.0, 1.0);
    // G psi_j = (1/(2 dr)) A (psi_{j+1} - psi_{j-1}) + i m B psi_j
    let w_coef = C64::new(h / (4.0 * delta_r), 0.0);
    let upper = -a_z * w_coef; // couples psi_{j+1} in (I - h/2 G)
    let lower = a_z * w_coef;
    let diag_minus = Matrix4::identity() - beta * (i * C64::new(h * mass / 2.0, 0.0));
    let diag_plus = Matrix4::identity() + beta * (i * C64::new(h * mass / 2.0, 0.0));

    // Block-Thomas prefactorization of the open-chain tridiagonal part.
    let mut inv_diag: Vec<Matrix4<C64>> = Vec::with_capacity(l);
    for j in 0..l {
        let d = if j == 0 {
            diag_minus
        } else {
            diag_minus - lower * inv_diag[j - 1] * upper
        };
        inv_diag.push(d.try_inverse().ok_or_else(|| {
            Error::Snapshot("singular Crank-Nicolson pivot".into())
        })?);
    }
    let solve_t = |b: &[Vector4<C64>], inv_diag: &[Matrix4<C64>]| -> Vec<Vector4<C64>> {
        let mut y: Vec<Vector4<C64>> = Vec::with_capacity(l);
        y.push(b[0]);
        for j in 1..l {
            let t = b[j] - lower * (inv_diag[j - 1] * y[j - 1]);
            y.push(t);
        }
        let mut x = vec![Vector4::zeros(); l];
        x[l - 1] = inv_diag[l - 1] * y[l - 1];
        for j in (0..l - 1).rev() {
            x[j] = inv_diag[j] * (y[j] - upper * x[j + 1]);
        }
        x
    };

    // Rank-8 corner correction (Woodbury): M = T + U V^H with
    // U = [e_0 (x) lower, e_{l-1} (x) upper], V = [e_{l-1}, e_0].
    let mut t_inv_u: Vec<Vec<Vector4<C64>>> = Vec::with_capacity(8);
    for col in 0..8 {
        let mut b = vec![Vector4::zeros(); l];
        if col < 4 {
            b[0] = lower.column(col).into_owned();
        } else {
            b[l - 1] = upper.column(col - 4).into_owned();
        }
        t_inv_u.push(solve_t(&b, &inv_diag));
    }
    let mut cap = SMatrix::<C64, 8, 8>::identity();
    for (col, x) in t_inv_u.iter().enumerate() {
        for r in 0..4 {
            cap[(r, col)] += x[l - 1][r];
            cap[(r + 4, col)] += x[0][r];
        }
    }
    let cap_inv = cap
        .try_inverse()
        .ok_or_else(|| Error::Snapshot("singular Crank-Nicolson capacitance".into()))?;

    let mut psi: Vec<Vector4<C64>> = (0..l)
        .map(|s| Vector4::new(initial.amp(s, 0), initial.amp(s, 1), initial.amp(s, 2), initial.amp(s, 3)))
        .collect();
    let mut rhs = vec![Vector4::zeros(); l];
    for _ in 0..n_steps {
        for j in 0..l {
            let up = psi[(j + 1) % l];
            let dn = psi[(j + l - 1) % l];
            rhs[j] = diag_plus * psi[j] + a_z * ((up - dn) * w_coef);
        }
        let mut x = solve_t(&rhs, &inv_diag);
        let mut vh = SVector::<C64, 8>::zeros();
        for r in 0..4 {
            vh[r] = x[l - 1][r];
            vh[r + 4] = x[0][r];
        }
        let corr = cap_inv * vh;
        for j in 0..l {
            for (col, tu) in t_inv_u.iter().enumerate() {
                x[j] -= tu[j] * corr[col];
            }
        }
        std::mem::swap(&mut psi, &mut x);
    }
    let mut data = vec![C64::new(0.0, 0.0); l * COMPONENTS];
    for (j, v) in psi.iter().enumerate() {
        for c in 0..COMPONENTS {
            data[j * COMPONENTS + c] = v[c];
        }
    }
    SpinorField::from_amplitudes(initial.dims(), data)
}
