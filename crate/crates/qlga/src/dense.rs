//! Dense-matrix helpers used to verify operator identities.
//!
//! Everything here is verification machinery: exact dense forms of
//! composite operators, Fourier-mode reference operators, and a unitary
//! matrix exponential via Hermitian eigendecomposition.

use crate::field::{site_coords, site_count, Dims, COMPONENTS};
use crate::C64;
use nalgebra::{DMatrix, Matrix2, Matrix4};
use std::f64::consts::TAU;

pub use crate::ops::dense_operator;

/// 2x2 Pauli matrices.
pub fn pauli() -> [Matrix2<C64>; 3] {
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        Matrix2::new(o, one, one, o),
        Matrix2::new(o, -i, i, o),
        Matrix2::new(one, o, o, -one),
    ]
}

/// 2x2 identity.
pub fn id2() -> Matrix2<C64> {
    Matrix2::identity()
}

/// Kronecker product of two 2x2 matrices in the component ordering used by
/// the spinor field (first factor selects pairs (0,1)/(2,3)).
pub fn kron(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Matrix4<C64> {
    let mut m = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    m
}

/// Maximum absolute entry of a dense matrix difference.
pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Maximum absolute entry.
pub fn max_abs(a: &DMatrix<C64>) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Max-norm of U^H U - I; zero for unitary U.
pub fn unitarity_defect(u: &DMatrix<C64>) -> f64 {
    let n = u.nrows();
    let prod = u.adjoint() * u;
    let eye = DMatrix::<C64>::identity(n, n);
    max_abs_diff(&prod, &eye)
}

/// exp(i t H) for Hermitian H, via eigendecomposition. Panics if H is not
/// Hermitian to 1e-10 (these are verification paths; a silent wrong answer
/// would defeat their purpose).
pub fn expi_hermitian(h: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    let defect = max_abs_diff(&h.adjoint(), h);
    assert!(defect < 1e-10, "expi_hermitian: input not Hermitian ({defect:e})");
    let eig = h.clone().symmetric_eigen();
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|w| C64::from_polar(1.0, w * t)));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

/// exp(A) for anti-Hermitian A (writes A = i H and exponentiates H).
pub fn exp_antihermitian(a: &DMatrix<C64>) -> DMatrix<C64> {
    let h = a.map(|z| z * C64::new(0.0, -1.0));
    expi_hermitian(&h, 1.0)
}

/// Dense operator that is diagonal in the lattice Fourier basis: for each
/// mode with per-axis phases khat (radians per cell), the 4x4 block
/// `f(khat)` acts on the spinor components. Entries are
/// (1/N) sum_k e^{i k.(x - x')} f(khat)_{c c'}.
pub fn mode_diagonal_operator<F>(dims: Dims, f: F) -> DMatrix<C64>
where
    F: Fn([f64; 3]) -> Matrix4<C64>,
{
    let n = site_count(dims);
    let dim = n * COMPONENTS;
    let mut m = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
    for mode in 0..n {
        let (mx, my, mz) = site_coords(dims, mode);
        let khat = [
            signed_mode(mx, dims[0]),
            signed_mode(my, dims[1]),
            signed_mode(mz, dims[2]),
        ];
        let block = f(khat);
        for site_i in 0..n {
            let (xi, yi, zi) = site_coords(dims, site_i);
            for site_j in 0..n {
                let (xj, yj, zj) = site_coords(dims, site_j);
                let phase = khat[0] * (xi as f64 - xj as f64)
                    + khat[1] * (yi as f64 - yj as f64)
                    + khat[2] * (zi as f64 - zj as f64);
                let w = C64::from_polar(1.0 / n as f64, phase);
                for c in 0..COMPONENTS {
                    for d in 0..COMPONENTS {
                        m[(site_i * COMPONENTS + c, site_j * COMPONENTS + d)] +=
                            w * block[(c, d)];
                    }
                }
            }
        }
    }
    m
}

/// Signed mode phase in radians per cell for mode index m of an axis of
/// extent l (Nyquist maps to -pi).
pub fn signed_mode(m: usize, l: usize) -> f64 {
    if l == 1 {
        return 0.0;
    }
    let m = m as isize;
    let l = l as isize;
    let signed = if m <= (l - 1) / 2 { m } else { m - l };
    TAU * signed as f64 / l as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{composite_stream_sequence, Axis};

    #[test]
    fn pauli_algebra() {
        let [sx, sy, sz] = pauli();
        let i = C64::new(0.0, 1.0);
        assert!((sx * sy - sz * i).norm() < 1e-15);
        assert!((sx * sx - id2()).norm() < 1e-15);
        assert!((sy * sy - id2()).norm() < 1e-15);
    }

    #[test]
    fn composite_stream_is_unitary_and_mode_diagonal() {
        let dims = [1, 1, 8];
        let seq = composite_stream_sequence(Axis::Z);
        let u = dense_operator(&seq, dims).unwrap();
        assert!(unitarity_defect(&u) < 1e-12);
        // S_z acts per mode as exp(i khat diag(+,-,-,+)).
        let [_, _, sz] = pauli();
        let szz = kron(&sz, &sz);
        let expect = mode_diagonal_operator(dims, |khat| {
            let mut m = Matrix4::zeros();
            for c in 0..4 {
                m[(c, c)] = C64::from_polar(1.0, khat[2] * szz[(c, c)].re);
            }
            m
        });
        assert!(max_abs_diff(&u, &expect) < 1e-12);
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let z = DMatrix::from_element(4, 4, C64::new(0.0, 0.0));
        let e = exp_antihermitian(&z);
        assert!(max_abs_diff(&e, &DMatrix::identity(4, 4)) < 1e-14);
    }
}
