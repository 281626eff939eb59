// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Small dense linear-algebra helpers shared by the solution modules.
//!
//! Everything here operates on 2x2 .. 8x8 real matrices or on moderate
//! complex Hermitian matrices (truncated number bases), so direct dense
//! methods are exact enough and fastest. Matrix exponentials go through
//! nalgebra's Pade scaling-and-squaring.

use nalgebra::{DMatrix, SMatrix, SVector};

use crate::{Error, Result, C64};

fn to_dyn<const N: usize>(m: &SMatrix<f64, N, N>) -> DMatrix<f64> {
    DMatrix::from_fn(N, N, |i, j| m[(i, j)])
}

/// Dense matrix exponential `e^{m t}` for a statically sized matrix.
pub fn expm<const N: usize>(m: &SMatrix<f64, N, N>, t: f64) -> SMatrix<f64, N, N> {
    let e = (to_dyn(m) * t).exp();
    SMatrix::from_fn(|i, j| e[(i, j)])
}

/// Solution of the affine flow `x' = m x + b` at time `t`:
/// `x(t) = e^{mt} x0 + \int_0^t e^{m(t-s)} b ds`.
///
/// Implemented with one exponential of the augmented matrix `[[m, b], [0, 0]]`,
/// which stays exact when `m` is singular or defective (critical damping,
/// zero friction).
pub fn affine_flow<const N: usize>(
    m: &SMatrix<f64, N, N>,
    b: &SVector<f64, N>,
    x0: &SVector<f64, N>,
    t: f64,
) -> SVector<f64, N> {
    let mut aug = DMatrix::<f64>::zeros(N + 1, N + 1);
    for i in 0..N {
        for j in 0..N {
            aug[(i, j)] = m[(i, j)];
        }
        aug[(i, N)] = b[i];
    }
    let phi = (aug * t).exp();
    SVector::from_fn(|i, _| {
        let mut v = phi[(i, N)];
        for j in 0..N {
            v += phi[(i, j)] * x0[j];
        }
        v
    })
}

/// Solves the continuous Lyapunov equation `Y X + X Y^T = C` by direct
/// vectorization: `(I (x) Y + Y (x) I) vec(X) = vec(C)`.
pub fn solve_lyapunov<const N: usize>(
    y: &SMatrix<f64, N, N>,
    c: &SMatrix<f64, N, N>,
) -> Result<SMatrix<f64, N, N>> {
    let n = N;
    let mut a = DMatrix::<f64>::zeros(n * n, n * n);
    // vec is column-major: vec(YX) = (I (x) Y) vec X, vec(XY^T) = (Y (x) I) vec X.
    for col in 0..n {
        for row in 0..n {
            let eq = col * n + row;
            for k in 0..n {
                a[(eq, col * n + k)] += y[(row, k)];
                a[(eq, k * n + row)] += y[(col, k)];
            }
        }
    }
    let rhs = DMatrix::from_fn(n * n, 1, |i, _| c[(i % n, i / n)]);
    let lu = a.lu();
    let sol = lu
        .solve(&rhs)
        .ok_or_else(|| Error::Degenerate("Lyapunov operator is singular".into()))?;
    Ok(SMatrix::from_fn(|r, cidx| sol[(cidx * n + r, 0)]))
}

/// Van Loan block integral: `Z(t) = \int_0^t e^{Y s} D e^{Y^T s} ds`.
///
/// Uses the top-right block of `exp([[Y, D], [0, -Y^T]] t)` multiplied by
/// `e^{Y^T t}`; valid for any `Y`, Hurwitz or not.
pub fn gramian_integral<const N: usize>(
    y: &SMatrix<f64, N, N>,
    d: &SMatrix<f64, N, N>,
    t: f64,
) -> SMatrix<f64, N, N> {
    let mut blk = DMatrix::<f64>::zeros(2 * N, 2 * N);
    for i in 0..N {
        for j in 0..N {
            blk[(i, j)] = y[(i, j)];
            blk[(i, j + N)] = d[(i, j)];
            blk[(i + N, j + N)] = -y[(j, i)];
        }
    }
    let phi = (blk * t).exp();
    let g = SMatrix::<f64, N, N>::from_fn(|i, j| phi[(i, j + N)]);
    let m_t = expm(y, t);
    let z = g * m_t.transpose();
    // Z is symmetric up to roundoff whenever D is; re-symmetrize.
    (z + z.transpose()) * 0.5
}

/// Eigenvalues of a complex Hermitian matrix, ascending.
///
/// The matrix `H = A + iB` embeds into the real symmetric `[[A, -B], [B, A]]`
/// whose spectrum is that of `H` doubled; we take every second eigenvalue.
pub fn hermitian_eigenvalues(h: &DMatrix<C64>) -> Vec<f64> {
    let n = h.nrows();
    let mut real = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            real[(i, j)] = z.re;
            real[(i + n, j + n)] = z.re;
            real[(i, j + n)] = -z.im;
            real[(i + n, j)] = z.im;
        }
    }
    let sym = (real.clone() + real.transpose()) * 0.5;
    let mut ev: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev.into_iter().step_by(2).collect()
}

/// Frobenius norm of a statically sized matrix.
pub fn frob<const N: usize>(m: &SMatrix<f64, N, N>) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::{Matrix2, Matrix4, Vector2};

    #[test]
    fn affine_flow_matches_scalar_solution() {
        // x' = -a x + b has solution b/a + (x0 - b/a) e^{-a t}.
        let m = Matrix2::new(-0.7, 0.0, 0.0, -1.3);
        let b = Vector2::new(0.2, -0.4);
        let x0 = Vector2::new(1.0, 2.0);
        let t = 1.7;
        let x = affine_flow(&m, &b, &x0, t);
        for i in 0..2 {
            let a = -m[(i, i)];
            let expect = b[i] / a + (x0[i] - b[i] / a) * (-a * t).exp();
            assert_relative_eq!(x[i], expect, epsilon = 1e-13);
        }
    }

    #[test]
    fn affine_flow_handles_singular_drift() {
        // x' = b with m = 0 integrates to x0 + b t.
        let m = Matrix2::zeros();
        let b = Vector2::new(0.5, -1.0);
        let x0 = Vector2::new(1.0, 1.0);
        let x = affine_flow(&m, &b, &x0, 2.0);
        assert_relative_eq!(x[0], 2.0, epsilon = 1e-14);
        assert_relative_eq!(x[1], -1.0, epsilon = 1e-14);
    }

    #[test]
    fn lyapunov_residual_is_tiny() {
        let y = Matrix4::new(
            -1.0, 0.3, 0.0, 0.2, -0.1, -0.8, 0.4, 0.0, 0.0, -0.2, -1.2, 0.1, 0.3, 0.0, -0.3, -0.9,
        );
        let d = Matrix4::new(
            1.0, 0.1, 0.0, 0.0, 0.1, 0.8, 0.2, 0.0, 0.0, 0.2, 1.1, 0.1, 0.0, 0.0, 0.1, 0.7,
        );
        let x = solve_lyapunov(&y, &(-2.0 * d)).unwrap();
        let res = y * x + x * y.transpose() + 2.0 * d;
        assert!(frob(&res) < 1e-12);
    }

    #[test]
    fn gramian_matches_lyapunov_limit() {
        let y = Matrix2::new(-1.0, 0.4, -0.3, -0.7);
        let d = Matrix2::new(0.5, 0.1, 0.1, 0.9);
        let z = gramian_integral(&y, &d, 60.0);
        // For Hurwitz Y, 2 Z(inf) solves Y s + s Y^T = -2 D.
        let s = solve_lyapunov(&y, &(-2.0 * d)).unwrap();
        assert!(frob(&(2.0 * z - s)) < 1e-10);
    }

    #[test]
    fn hermitian_eigenvalues_of_pauli_like_matrix() {
        let mut h = DMatrix::<C64>::zeros(2, 2);
        h[(0, 1)] = C64::new(0.0, -1.0);
        h[(1, 0)] = C64::new(0.0, 1.0);
        let ev = hermitian_eigenvalues(&h);
        assert_relative_eq!(ev[0], -1.0, epsilon = 1e-12);
        assert_relative_eq!(ev[1], 1.0, epsilon = 1e-12);
    }
}
