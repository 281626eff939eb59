// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Two coupled damped oscillators: drift matrix, 4x4 diffusion matrix with
//! its positivity ledger, mean and covariance propagation, Lyapunov steady
//! state and the Gaussian Wigner propagation kernel.
//!
//! Conventions: phase-space ordering `(q1, q2, p1, p2)` for both the state
//! vector and all 4x4 matrices.

use nalgebra::{DMatrix, Matrix2, Matrix4, Vector4};

use crate::linalg::{expm, frob, gramian_integral, solve_lyapunov};
use crate::{Error, Result, C64};

/// Phenomenological constants of the coupled pair.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoOscModel {
    pub m1: f64,
    pub m2: f64,
    pub omega1: f64,
    pub omega2: f64,
    /// Momentum-momentum coupling in the Hamiltonian.
    pub k12: f64,
    /// Symmetrized `p q` coupling constants `mu_{k l}`.
    pub mu_matrix: Matrix2<f64>,
    /// Coordinate-coordinate coupling in the Hamiltonian.
    pub nu12: f64,
    pub alpha12: f64,
    pub beta12: f64,
    /// Friction constants `lambda_{k l}`.
    pub lambda_matrix: Matrix2<f64>,
    /// Symmetric diffusion matrix in `(q1, q2, p1, p2)` ordering.
    pub dmat: Matrix4<f64>,
    pub hbar: f64,
}

/// Report of the principal minors of the openness constraint matrix.
#[derive(Debug, Clone)]
pub struct PositivityLedger {
    /// Index set of each principal submatrix together with its determinant.
    pub minors: Vec<(Vec<usize>, f64)>,
    pub ok: bool,
}

/// Means and covariance at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoOscState {
    pub mvec: Vector4<f64>,
    pub sigma: Matrix4<f64>,
    pub t: f64,
}

fn dot(x: &[C64; 4], y: &[C64; 4]) -> C64 {
    x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum()
}

impl TwoOscModel {
    /// Builds a model from explicit constants, checking the positivity
    /// ledger of the openness matrix.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        m1: f64,
        m2: f64,
        omega1: f64,
        omega2: f64,
        k12: f64,
        mu_matrix: Matrix2<f64>,
        nu12: f64,
        alpha12: f64,
        beta12: f64,
        lambda_matrix: Matrix2<f64>,
        dmat: Matrix4<f64>,
        hbar: f64,
    ) -> Result<Self> {
        let model = Self {
            m1,
            m2,
            omega1,
            omega2,
            k12,
            mu_matrix,
            nu12,
            alpha12,
            beta12,
            lambda_matrix,
            dmat,
            hbar,
        };
        model.check_invariants()?;
        Ok(model)
    }

    fn check_invariants(&self) -> Result<()> {
        for (name, v) in [
            ("m1", self.m1),
            ("m2", self.m2),
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("hbar", self.hbar),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidModel(format!("{name} must be > 0, got {v}")));
            }
        }
        if frob(&(self.dmat - self.dmat.transpose())) > 1e-12 * frob(&self.dmat).max(1.0) {
            return Err(Error::InvalidModel("diffusion matrix must be symmetric".into()));
        }
        let ledger = self.positivity_ledger();
        if !ledger.ok {
            let worst = ledger
                .minors
                .iter()
                .map(|(_, d)| *d)
                .fold(f64::INFINITY, f64::min);
            return Err(Error::InvalidModel(format!(
                "openness matrix has a negative principal minor ({worst:.3e})"
            )));
        }
        Ok(())
    }

    /// Builds a model from the microscopic coefficient vectors of the four
    /// openness operators; the constraint matrix is then a Gram matrix and
    /// the positivity ledger holds by construction.
    #[allow(clippy::too_many_arguments)]
    pub fn from_lindblad_vectors(
        m1: f64,
        m2: f64,
        omega1: f64,
        omega2: f64,
        k12: f64,
        mu_matrix: Matrix2<f64>,
        nu12: f64,
        a1: [C64; 4],
        a2: [C64; 4],
        b1: [C64; 4],
        b2: [C64; 4],
        hbar: f64,
    ) -> Result<Self> {
        let h2 = 0.5 * hbar;
        let d_q = |x: &[C64; 4], y: &[C64; 4]| h2 * dot(x, y).re;
        let mut dmat = Matrix4::zeros();
        dmat[(0, 0)] = d_q(&a1, &a1);
        dmat[(1, 1)] = d_q(&a2, &a2);
        dmat[(0, 1)] = d_q(&a1, &a2);
        dmat[(1, 0)] = dmat[(0, 1)];
        dmat[(2, 2)] = d_q(&b1, &b1);
        dmat[(3, 3)] = d_q(&b2, &b2);
        dmat[(2, 3)] = d_q(&b1, &b2);
        dmat[(3, 2)] = dmat[(2, 3)];
        // D_{q_k p_l} = -(hbar/2) Re(a_k* . b_l)
        for (k, ak) in [&a1, &a2].into_iter().enumerate() {
            for (l, bl) in [&b1, &b2].into_iter().enumerate() {
                let v = -h2 * dot(ak, bl).re;
                dmat[(k, 2 + l)] = v;
                dmat[(2 + l, k)] = v;
            }
        }
        let alpha12 = -dot(&a1, &a2).im;
        let beta12 = -dot(&b1, &b2).im;
        let lambda_matrix = Matrix2::new(
            -dot(&a1, &b1).im,
            -dot(&a1, &b2).im,
            -dot(&a2, &b1).im,
            -dot(&a2, &b2).im,
        );
        Self::new(
            m1,
            m2,
            omega1,
            omega2,
            k12,
            mu_matrix,
            nu12,
            alpha12,
            beta12,
            lambda_matrix,
            dmat,
            hbar,
        )
    }

    /// Charge/neutron asymmetry mapping: coordinate coupling only
    /// (`k12 = 0`, `mu = 0`, `nu12 = -k_zn`), masses `B_zz`, `B_nn` and
    /// stiffnesses `k_z`, `k_n`.
    #[allow(clippy::too_many_arguments)]
    pub fn charge_neutron(
        b_zz: f64,
        b_nn: f64,
        k_z: f64,
        k_n: f64,
        k_zn: f64,
        lambda_matrix: Matrix2<f64>,
        dmat: Matrix4<f64>,
        hbar: f64,
    ) -> Result<Self> {
        Self::new(
            b_zz,
            b_nn,
            (k_z / b_zz).sqrt(),
            (k_n / b_nn).sqrt(),
            0.0,
            Matrix2::zeros(),
            -k_zn,
            0.0,
            0.0,
            lambda_matrix,
            dmat,
            hbar,
        )
    }

    /// The drift matrix of means and covariances.
    pub fn drift_matrix(&self) -> Matrix4<f64> {
        let l = &self.lambda_matrix;
        let mu = &self.mu_matrix;
        Matrix4::new(
            -l[(0, 0)] + mu[(0, 0)],
            -l[(0, 1)] + mu[(0, 1)],
            1.0 / self.m1,
            -self.alpha12 + self.k12,
            -l[(1, 0)] + mu[(1, 0)],
            -l[(1, 1)] + mu[(1, 1)],
            self.alpha12 + self.k12,
            1.0 / self.m2,
            -self.m1 * self.omega1 * self.omega1,
            self.beta12 - self.nu12,
            -l[(0, 0)] - mu[(0, 0)],
            -l[(1, 0)] - mu[(1, 0)],
            -self.beta12 - self.nu12,
            -self.m2 * self.omega2 * self.omega2,
            -l[(0, 1)] - mu[(0, 1)],
            -l[(1, 1)] - mu[(1, 1)],
        )
    }

    /// Variant drift with the naive (untransposed) friction placement in the
    /// momentum sector. The difference to [`Self::drift_matrix`] vanishes
    /// for symmetric friction (`lambda_12 = lambda_21`); reported as a
    /// diagnostic for the printed asymmetric placement, which the operator
    /// algebra confirms.
    pub fn drift_matrix_naive_placement(&self) -> Matrix4<f64> {
        let mut y = self.drift_matrix();
        let l = &self.lambda_matrix;
        y[(2, 3)] = -l[(0, 1)] - self.mu_matrix[(1, 0)];
        y[(3, 2)] = -l[(1, 0)] - self.mu_matrix[(0, 1)];
        y
    }

    /// Max absolute drift difference between the two friction placements.
    pub fn placement_difference(&self) -> f64 {
        frob(&(self.drift_matrix() - self.drift_matrix_naive_placement()))
    }

    /// The Hermitian openness constraint matrix (rows/cols `a1 a2 b1 b2`).
    pub fn constraint_matrix(&self) -> DMatrix<C64> {
        let d = &self.dmat;
        let h = self.hbar;
        let l = &self.lambda_matrix;
        let i = C64::i();
        let mut c = DMatrix::<C64>::zeros(4, 4);
        c[(0, 0)] = C64::new(d[(0, 0)], 0.0);
        c[(1, 1)] = C64::new(d[(1, 1)], 0.0);
        c[(2, 2)] = C64::new(d[(2, 2)], 0.0);
        c[(3, 3)] = C64::new(d[(3, 3)], 0.0);
        c[(0, 1)] = d[(0, 1)] - i * h * self.alpha12 / 2.0;
        c[(1, 0)] = c[(0, 1)].conj();
        c[(2, 3)] = d[(2, 3)] - i * h * self.beta12 / 2.0;
        c[(3, 2)] = c[(2, 3)].conj();
        for k in 0..2 {
            for lidx in 0..2 {
                let z = -d[(k, 2 + lidx)] - i * h * l[(k, lidx)] / 2.0;
                c[(k, 2 + lidx)] = z;
                c[(2 + lidx, k)] = z.conj();
            }
        }
        c
    }

    /// Determinants of all principal submatrices of the constraint matrix.
    pub fn positivity_ledger(&self) -> PositivityLedger {
        let c = self.constraint_matrix();
        let scale = c
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max)
            .max(f64::MIN_POSITIVE);
        let mut minors = Vec::new();
        let mut ok = true;
        for mask in 1u32..16 {
            let idx: Vec<usize> = (0..4).filter(|i| mask & (1 << i) != 0).collect();
            let n = idx.len();
            let sub = DMatrix::<C64>::from_fn(n, n, |r, cc| c[(idx[r], idx[cc])]);
            let det = det_complex(&sub);
            // Hermitian principal minors are real.
            let val = det.re;
            if val < -1e-10 * scale.powi(n as i32) {
                ok = false;
            }
            minors.push((idx, val));
        }
        PositivityLedger { minors, ok }
    }

    /// True when all drift eigenvalues have negative real parts.
    pub fn is_hurwitz(&self) -> bool {
        self.drift_matrix()
            .complex_eigenvalues()
            .iter()
            .all(|z| z.re < 0.0)
    }
}

fn det_complex(m: &DMatrix<C64>) -> C64 {
    // LU with partial pivoting on a tiny complex matrix.
    let n = m.nrows();
    let mut a = m.clone();
    let mut det = C64::new(1.0, 0.0);
    for k in 0..n {
        let mut piv = k;
        for r in (k + 1)..n {
            if a[(r, k)].norm() > a[(piv, k)].norm() {
                piv = r;
            }
        }
        if a[(piv, k)].norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if piv != k {
            a.swap_rows(piv, k);
            det = -det;
        }
        det *= a[(k, k)];
        for r in (k + 1)..n {
            let f = a[(r, k)] / a[(k, k)];
            for cc in k..n {
                let v = a[(k, cc)];
                a[(r, cc)] -= f * v;
            }
        }
    }
    det
}

/// Propagates means and covariance to time `t`.
///
/// With a Hurwitz drift the covariance uses
/// `sigma(t) = M (sigma(0) - sigma(inf)) M^T + sigma(inf)`; otherwise the
/// equivalent kernel form `sigma(t) = M sigma(0) M^T + 2 Z(t)`, which needs
/// no steady state.
pub fn propagate(model: &TwoOscModel, state0: &TwoOscState, t: f64) -> Result<TwoOscState> {
    if t < 0.0 {
        return Err(Error::Config(format!("t must be >= 0, got {t}")));
    }
    let y = model.drift_matrix();
    let m_t = expm(&y, t);
    let mvec = m_t * state0.mvec;
    let sigma = if model.is_hurwitz() {
        let s_inf = steady_state(model)?;
        m_t * (state0.sigma - s_inf) * m_t.transpose() + s_inf
    } else {
        let z = gramian_integral(&y, &model.dmat, t);
        m_t * state0.sigma * m_t.transpose() + 2.0 * z
    };
    Ok(TwoOscState {
        mvec,
        sigma: 0.5 * (sigma + sigma.transpose()),
        t: state0.t + t,
    })
}

/// Stationary covariance from the Lyapunov equation
/// `Y sigma + sigma Y^T = -2 D`.
pub fn steady_state(model: &TwoOscModel) -> Result<Matrix4<f64>> {
    let y = model.drift_matrix();
    if !model.is_hurwitz() {
        return Err(Error::NoSteadyState(
            "drift matrix has a nonnegative eigenvalue real part".into(),
        ));
    }
    let sigma = solve_lyapunov(&y, &(-2.0 * model.dmat))?;
    let sym = 0.5 * (sigma + sigma.transpose());
    let res = y * sym + sym * y.transpose() + 2.0 * model.dmat;
    let scale = frob(&model.dmat).max(frob(&sym) * frob(&y)).max(1e-300);
    if frob(&res) > 1e-10 * scale {
        return Err(Error::Inconsistent(format!(
            "Lyapunov residual {:.3e} exceeds tolerance",
            frob(&res)
        )));
    }
    Ok(sym)
}

/// Gaussian Wigner propagation kernel `(M(t), Z(t))` with
/// `Z(t) = int_0^t M D M^T`; satisfies `sigma(t) = M sigma(0) M^T + 2 Z(t)`.
pub fn wigner_kernel(model: &TwoOscModel, t: f64) -> Result<(Matrix4<f64>, Matrix4<f64>)> {
    if t < 0.0 {
        return Err(Error::Config(format!("t must be >= 0, got {t}")));
    }
    let y = model.drift_matrix();
    Ok((expm(&y, t), gramian_integral(&y, &model.dmat, t)))
}

/// The printed closed-form `M(t)` of the uncoupled special case.
pub fn uncoupled_propagator(model: &TwoOscModel, t: f64) -> Matrix4<f64> {
    let (l1, l2) = (model.lambda_matrix[(0, 0)], model.lambda_matrix[(1, 1)]);
    let (w1, w2) = (model.omega1, model.omega2);
    let (e1, e2) = ((-l1 * t).exp(), (-l2 * t).exp());
    let (c1, s1) = ((w1 * t).cos(), (w1 * t).sin());
    let (c2, s2) = ((w2 * t).cos(), (w2 * t).sin());
    Matrix4::new(
        e1 * c1,
        0.0,
        e1 * s1 / (model.m1 * w1),
        0.0,
        0.0,
        e2 * c2,
        0.0,
        e2 * s2 / (model.m2 * w2),
        -model.m1 * w1 * e1 * s1,
        0.0,
        e1 * c1,
        0.0,
        0.0,
        -model.m2 * w2 * e2 * s2,
        0.0,
        e2 * c2,
    )
}

/// The printed closed-form `sigma_{q1 q2}(inf)` of the uncoupled case.
pub fn uncoupled_sigma_q1q2_inf(model: &TwoOscModel) -> f64 {
    let l = model.lambda_matrix[(0, 0)] + model.lambda_matrix[(1, 1)];
    let (w1, w2) = (model.omega1, model.omega2);
    let d = &model.dmat;
    let denom = (l * l + (w1 + w2) * (w1 + w2)) * (l * l + (w1 - w2) * (w1 - w2));
    2.0 / denom
        * (l * (l * l + w1 * w1 + w2 * w2) * d[(0, 1)]
            + (l * l + w1 * w1 - w2 * w2) * d[(1, 2)] / model.m1
            + (l * l + w2 * w2 - w1 * w1) * d[(0, 3)] / model.m2
            + 2.0 * l * d[(2, 3)] / (model.m1 * model.m2))
}
