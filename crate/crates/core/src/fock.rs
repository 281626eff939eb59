// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Density-matrix evolution in the number basis, by two independent routes:
//!
//! * the analytic generating-function method, whose time-dependent
//!   coefficients obey small closed-form linear systems, and
//! * a truncated-basis fixed-step integrator of the master equation, used
//!   as the repository-wide numerical oracle.
//!
//! The integrator offers two right-hand sides: the eleven-term index
//! recurrence of the number representation, and an independent expansion of
//! the master equation built from ladder-operator matrices. They agree to
//! machine precision away from the truncation boundary; the operator form
//! is the default, the recurrence form doubles as a diagnostic for the
//! printed recurrence itself.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::charfun;
use crate::linalg::hermitian_eigenvalues;
use crate::model::{derive, OscillatorModel, Regime};
use crate::moments::MomentState;
use crate::{Error, Result, C64};

/// Coefficients of the density-matrix generating function at one time.
///
/// Gauge: `F^2/4 - B D = -H` with normalization `A^2 = -H/4`; `D = conj(B)`
/// and `E = conj(C)` hold whenever `F` is real, which this representation
/// enforces.
#[derive(Debug, Clone, Copy)]
pub struct GenFunState {
    pub a: f64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
    pub e: C64,
    pub f: f64,
    pub h: f64,
    pub t: f64,
}

/// Initial data for the generating-function evolution.
#[derive(Debug, Clone, Copy)]
pub struct GenFunInit {
    /// `C(0)`; equals `conj(alpha0)` for an initial coherent state.
    pub c0: C64,
    /// `B(0)`; `D(0) = conj(B(0))`.
    pub b0: C64,
    /// `F(0)`, real.
    pub f0: f64,
}

impl GenFunInit {
    /// Glauber packet for amplitude `alpha0`: `B = D = 0`, `F = H = -4`.
    pub fn glauber(alpha0: C64) -> Self {
        GenFunInit {
            c0: alpha0.conj(),
            b0: C64::new(0.0, 0.0),
            f0: -4.0,
        }
    }
}

/// Asymptotic values `(R_inf, I_inf, F_inf)` of the coefficient system.
pub fn genfun_asymptotes(model: &OscillatorModel) -> Result<(f64, f64, f64)> {
    let dc = derive(model)?;
    let (l, mu, w) = (model.lambda, model.mu, model.omega);
    let g2 = mu * mu - w * w;
    let l2g2 = l * l - g2;
    if l <= 0.0 || l2g2.abs() < 1e-12 * (l * l).max(g2.abs()) {
        return Err(Error::NoSteadyState(
            "generating-function asymptotes need lambda > 0 and lambda^2 != gamma^2".into(),
        ));
    }
    let re_d1 = dc.d1.re;
    let im_d1 = dc.d1.im;
    let d2l = dc.d2 + l;
    let r_inf = (l * (re_d1 - mu) + w * im_d1 + mu * d2l) / l2g2;
    let i_inf = (w * l * (re_d1 - mu) + (mu * mu - l * l) * im_d1 + w * mu * d2l) / (l * l2g2);
    let f_inf = -2.0 * (mu * (l * (re_d1 - mu) + w * im_d1) + (l * l + w * w) * d2l) / (l * l2g2);
    Ok((r_inf, i_inf, f_inf))
}

/// Evolves the generating-function coefficients to time `t`.
pub fn genfun_evolve(model: &OscillatorModel, init: &GenFunInit, t: f64) -> Result<GenFunState> {
    if t < 0.0 {
        return Err(Error::Config(format!("t must be >= 0, got {t}")));
    }
    let dc = derive(model)?;
    if dc.regime == Regime::Critical {
        return Err(Error::Degenerate(
            "generating-function closed forms need mu != omega".into(),
        ));
    }
    let (l, mu, w) = (model.lambda, model.mu, model.omega);
    let g2 = mu * mu - w * w;
    let (r_inf, i_inf, f_inf) = genfun_asymptotes(model)?;

    // D = conj(B) = R + i I.
    let r0 = init.b0.re;
    let i0 = -init.b0.im;
    let f0 = init.f0;
    let h0 = r0 * r0 + i0 * i0 - 0.25 * f0 * f0;
    if h0 >= -1e-14 * (1.0 + f0 * f0) {
        return Err(Error::Degenerate(
            "gauge requires B D - F^2/4 < 0 for a normalizable state".into(),
        ));
    }

    let rt = r0 - r_inf;
    let it = i0 - i_inf;
    let ft = f0 - f_inf;

    // Even functions of gamma: e^{-2 l t} cosh(2 gamma t) and
    // e^{-2 l t} sinh(2 gamma t)/gamma, realized per regime.
    let e2l = (-2.0 * l * t).exp();
    let (ch2, sh2) = if g2 > 0.0 {
        let nu = g2.sqrt();
        (e2l * (2.0 * nu * t).cosh(), e2l * (2.0 * nu * t).sinh() / nu)
    } else {
        let om = (-g2).sqrt();
        (e2l * (2.0 * om * t).cos(), e2l * (2.0 * om * t).sin() / om)
    };

    let w1 = w * it + 0.5 * mu * ft;
    let r = ch2 * rt - sh2 * w1 + r_inf;
    let i = e2l * mu / g2 * (mu * it + 0.5 * w * ft) - w / g2 * ch2 * w1 + w * sh2 * rt + i_inf;
    let f = -e2l * w / g2 * (2.0 * mu * it + w * ft) + 2.0 * mu / g2 * ch2 * w1
        - 2.0 * mu * sh2 * rt
        + f_inf;

    let (u, v) = charfun::u_v(model, t)?;
    let c = u * init.c0 - v * init.c0.conj();

    let h = r * r + i * i - 0.25 * f * f;
    if h >= 0.0 {
        return Err(Error::Inconsistent(format!(
            "gauge invariant H became nonnegative ({h:.3e})"
        )));
    }
    let a = (-h).sqrt() / 2.0;
    let d = C64::new(r, i);
    Ok(GenFunState {
        a,
        b: d.conj(),
        c,
        d,
        e: c.conj(),
        f,
        h,
        t,
    })
}

fn lnfact(k: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut v = vec![0.0f64; 1025];
        for i in 1..v.len() {
            v[i] = v[i - 1] + (i as f64).ln();
        }
        v
    });
    table[k]
}

/// Magnitude-log and phase of `z^k`, safe for `z = 0`.
fn pow_log(z: C64, k: usize) -> Option<(f64, f64)> {
    if k == 0 {
        return Some((0.0, 0.0));
    }
    let r = z.norm();
    if r == 0.0 {
        return None; // the whole term vanishes
    }
    Some((k as f64 * r.ln(), k as f64 * z.arg()))
}

/// Density-matrix element `rho_mn` from a generating-function state.
///
/// The triple sum is accumulated in log space; factorials never appear as
/// bare floats.
pub fn density_from_genfun(state: &GenFunState, m: usize, n: usize) -> Result<C64> {
    if m > 1000 || n > 1000 {
        return Err(Error::Overflow { m, n });
    }
    let h = C64::new(state.h, 0.0);
    let z_xy = C64::new(1.0, 0.0) - state.f / h;
    let zb = -state.b / h;
    let zd = -state.d / h;
    let x = (2.0 * state.b * state.c + state.f * state.e) / h;
    let y = (2.0 * state.d * state.e + state.f * state.c) / h;
    let pre_exp = -(state.b * state.c * state.c
        + state.d * state.e * state.e
        + state.f * state.c * state.e)
        / h;
    if pre_exp.re > 600.0 {
        return Err(Error::Overflow { m, n });
    }
    let prefactor = pre_exp.exp() / state.a;

    let base_log = 0.5 * (lnfact(m) + lnfact(n));
    let mut sum = C64::new(0.0, 0.0);
    for n1 in 0..=(m / 2) {
        for n3 in 0..=(m - 2 * n1) {
            let a_pow = m - 2 * n1 - n3;
            if n3 > n {
                continue;
            }
            for n2 in 0..=((n - n3) / 2) {
                let b_pow = n - 2 * n2 - n3;
                let mut log_mag = base_log
                    - lnfact(n1)
                    - lnfact(n2)
                    - lnfact(n3)
                    - lnfact(a_pow)
                    - lnfact(b_pow);
                let mut phase = 0.0;
                let mut vanished = false;
                for (z, k) in [(z_xy, n3), (zb, n1), (zd, n2), (x, a_pow), (y, b_pow)] {
                    match pow_log(z, k) {
                        Some((lm, ph)) => {
                            log_mag += lm;
                            phase += ph;
                        }
                        None => {
                            vanished = true;
                            break;
                        }
                    }
                }
                if vanished {
                    continue;
                }
                if log_mag > 700.0 {
                    return Err(Error::Overflow { m, n });
                }
                sum += C64::from_polar(log_mag.exp(), phase);
            }
        }
    }
    Ok(prefactor * sum)
}

/// Fills a truncated density matrix from a generating-function state.
pub fn genfun_density_matrix(state: &GenFunState, dim: usize) -> Result<FockDensityMatrix> {
    let mut rho = DMatrix::<C64>::zeros(dim, dim);
    for m in 0..dim {
        for n in 0..dim {
            rho[(m, n)] = density_from_genfun(state, m, n)?;
        }
    }
    Ok(FockDensityMatrix {
        dim,
        entries: rho,
        t: state.t,
    })
}

/// Truncated density matrix in the number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    pub dim: usize,
    pub entries: DMatrix<C64>,
    pub t: f64,
}

/// Flat snapshot used for serialization: row-major real and imaginary parts.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FockDensitySnapshot {
    pub t: f64,
    pub dim: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl FockDensityMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: DMatrix::zeros(dim, dim),
            t: 0.0,
        }
    }

    /// `|n><n|`.
    pub fn number_state(n: usize, dim: usize) -> Self {
        let mut rho = Self::zeros(dim);
        rho.entries[(n, n)] = C64::new(1.0, 0.0);
        rho
    }

    pub fn vacuum(dim: usize) -> Self {
        Self::number_state(0, dim)
    }

    /// Pure coherent state `|alpha><alpha|`.
    pub fn coherent(alpha: C64, dim: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        let norm = (-0.5 * alpha.norm_sqr()).exp();
        let mut cur = C64::new(norm, 0.0);
        amps[0] = cur;
        for k in 1..dim {
            cur *= alpha / (k as f64).sqrt();
            amps[k] = cur;
        }
        let mut rho = Self::zeros(dim);
        for m in 0..dim {
            for n in 0..dim {
                rho.entries[(m, n)] = amps[m] * amps[n].conj();
            }
        }
        rho
    }

    /// Bose-Einstein diagonal for `x = hbar w / k T` (untruncated weights, so
    /// the trace is `1 - O(e^{-x dim})`).
    pub fn bose_einstein(x: f64, dim: usize) -> Self {
        let mut rho = Self::zeros(dim);
        let w = 1.0 - (-x).exp();
        for k in 0..dim {
            rho.entries[(k, k)] = C64::new(w * (-(k as f64) * x).exp(), 0.0);
        }
        rho
    }

    pub fn trace(&self) -> C64 {
        let mut tr = C64::new(0.0, 0.0);
        for k in 0..self.dim {
            tr += self.entries[(k, k)];
        }
        tr
    }

    /// `max |rho - rho^dagger|` over entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst / 2.0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let ev = hermitian_eigenvalues(&self.entries);
        ev.first().copied().unwrap_or(0.0)
    }

    /// Occupancy of the last retained level.
    pub fn boundary_occupancy(&self) -> f64 {
        self.entries[(self.dim - 1, self.dim - 1)].norm()
    }

    /// Re-embeds into a larger basis, padding with zeros.
    pub fn expanded(&self, dim: usize) -> Self {
        assert!(dim >= self.dim);
        let mut rho = Self::zeros(dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                rho.entries[(i, j)] = self.entries[(i, j)];
            }
        }
        rho.t = self.t;
        rho
    }

    pub fn snapshot(&self) -> FockDensitySnapshot {
        let mut re = Vec::with_capacity(self.dim * self.dim);
        let mut im = Vec::with_capacity(self.dim * self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                re.push(self.entries[(i, j)].re);
                im.push(self.entries[(i, j)].im);
            }
        }
        FockDensitySnapshot {
            t: self.t,
            dim: self.dim,
            re,
            im,
        }
    }

    pub fn from_snapshot(s: &FockDensitySnapshot) -> Result<Self> {
        if s.re.len() != s.dim * s.dim || s.im.len() != s.dim * s.dim {
            return Err(Error::Config(format!(
                "snapshot length mismatch: dim {} needs {} entries",
                s.dim,
                s.dim * s.dim
            )));
        }
        let mut rho = Self::zeros(s.dim);
        for i in 0..s.dim {
            for j in 0..s.dim {
                let k = i * s.dim + j;
                rho.entries[(i, j)] = C64::new(s.re[k], s.im[k]);
            }
        }
        rho.t = s.t;
        Ok(rho)
    }
}

/// Right-hand-side form of the truncated-basis integrator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleForm {
    /// Master equation expanded from ladder-operator matrices (default).
    OperatorLindblad,
    /// The printed eleven-term index recurrence (diagnostic form).
    Recurrence,
}

/// Options of the fixed-step oracle.
#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    pub form: OracleForm,
    /// Step size; `None` selects `min(0.002/omega, 0.002/lambda)`.
    pub dt: Option<f64>,
    /// Double the basis when boundary occupancy exceeds the threshold.
    pub auto_expand: bool,
    pub max_dim: usize,
    pub boundary_threshold: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            form: OracleForm::OperatorLindblad,
            dt: None,
            auto_expand: true,
            max_dim: 320,
            boundary_threshold: 1e-10,
        }
    }
}

/// Outcome of an oracle run with its bookkeeping.
#[derive(Debug, Clone)]
pub struct OracleRun {
    pub rho: FockDensityMatrix,
    /// Largest `|Tr rho - 1|` observed over the run.
    pub trace_drift: f64,
    pub max_boundary_occupancy: f64,
    pub steps: usize,
    pub expansions: usize,
}

/// Default fixed step: `min(0.002/omega, 0.002/lambda)`.
pub fn default_dt(model: &OscillatorModel) -> f64 {
    let by_omega = 0.002 / model.omega;
    if model.lambda > 0.0 {
        by_omega.min(0.002 / model.lambda)
    } else {
        by_omega
    }
}

/// Annihilation-operator matrix in a truncated basis.
pub fn ladder(dim: usize) -> DMatrix<C64> {
    let mut a = DMatrix::<C64>::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Position and momentum matrices for the model's scales.
pub fn q_p_matrices(model: &OscillatorModel, dim: usize) -> (DMatrix<C64>, DMatrix<C64>) {
    let a = ladder(dim);
    let ad = a.adjoint();
    let mw = model.m * model.omega;
    let q = (&ad + &a) * C64::new((0.5 * model.hbar / mw).sqrt(), 0.0);
    let p = (&ad - &a) * C64::new(0.0, (0.5 * model.hbar * mw).sqrt());
    (q, p)
}

struct OperatorGen {
    h0: DMatrix<C64>,
    q: DMatrix<C64>,
    p: DMatrix<C64>,
    qq: DMatrix<C64>,
    pp: DMatrix<C64>,
    sym: DMatrix<C64>,
}

impl OperatorGen {
    fn new(model: &OscillatorModel, dim: usize) -> Self {
        let (q, p) = q_p_matrices(model, dim);
        let qq = &q * &q;
        let pp = &p * &p;
        let sym = &q * &p + &p * &q;
        let h0 = &pp * C64::new(0.5 / model.m, 0.0)
            + &qq * C64::new(0.5 * model.m * model.omega * model.omega, 0.0);
        Self {
            h0,
            q,
            p,
            qq,
            pp,
            sym,
        }
    }

    /// Master-equation right-hand side expanded with operator products.
    fn rhs(&self, model: &OscillatorModel, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let hbar = model.hbar;
        let i = C64::i();
        let qr = &self.q * rho;
        let pr = &self.p * rho;
        let rq = rho * &self.q;
        let rp = rho * &self.p;

        let mut out = (&self.h0 * rho - rho * &self.h0) * (-i / hbar);
        // -(i/2hbar)(l + mu) [q, rho p + p rho]
        let t1 = &rp + &pr;
        out += (&self.q * &t1 - &t1 * &self.q) * (-i * (model.lambda + model.mu) / (2.0 * hbar));
        // +(i/2hbar)(l - mu) [p, rho q + q rho]
        let t2 = &rq + &qr;
        out += (&self.p * &t2 - &t2 * &self.p) * (i * (model.lambda - model.mu) / (2.0 * hbar));
        // -(D_pp/hbar^2) [q, [q, rho]]
        let h2 = hbar * hbar;
        out += (&self.qq * rho - (&qr * &self.q) * C64::new(2.0, 0.0) + rho * &self.qq)
            * C64::new(-model.d_pp / h2, 0.0);
        // -(D_qq/hbar^2) [p, [p, rho]]
        out += (&self.pp * rho - (&pr * &self.p) * C64::new(2.0, 0.0) + rho * &self.pp)
            * C64::new(-model.d_qq / h2, 0.0);
        // +(D_pq/hbar^2) ([q, [p, rho]] + [p, [q, rho]])
        out += (&self.sym * rho + rho * &self.sym - (&qr * &self.p) * C64::new(2.0, 0.0) - (&pr * &self.q) * C64::new(2.0, 0.0))
            * C64::new(model.d_pq / h2, 0.0);
        out
    }
}

/// The printed eleven-term recurrence of the number representation.
fn recurrence_rhs(model: &OscillatorModel, rho: &DMatrix<C64>) -> DMatrix<C64> {
    let dc = derive(model).expect("valid model");
    let dim = rho.nrows();
    let (l, mu, w) = (model.lambda, model.mu, model.omega);
    let d1 = dc.d1;
    let d2 = dc.d2;
    let get = |m: i64, n: i64| -> C64 {
        if m < 0 || n < 0 || m >= dim as i64 || n >= dim as i64 {
            C64::new(0.0, 0.0)
        } else {
            rho[(m as usize, n as usize)]
        }
    };
    let mut out = DMatrix::<C64>::zeros(dim, dim);
    for m in 0..dim as i64 {
        for n in 0..dim as i64 {
            let mf = m as f64;
            let nf = n as f64;
            let mut v = (C64::new(l - (mf + nf + 1.0) * d2, -w * (mf - nf))) * get(m, n);
            v -= ((mf + 1.0) * nf).sqrt() * d1.conj() * get(m + 1, n - 1);
            v -= (mf * (nf + 1.0)).sqrt() * d1 * get(m - 1, n + 1);
            v += 0.5 * ((nf + 1.0) * (nf + 2.0)).sqrt() * (d1 - mu) * get(m, n + 2);
            v += 0.5 * ((mf + 1.0) * (mf + 2.0)).sqrt() * (d1.conj() - mu) * get(m + 2, n);
            v += 0.5 * (mf * (mf - 1.0)).max(0.0).sqrt() * (d1 + mu) * get(m - 2, n);
            v += 0.5 * (nf * (nf - 1.0)).max(0.0).sqrt() * (d1.conj() + mu) * get(m, n - 2);
            v += ((mf + 1.0) * (nf + 1.0)).sqrt() * (d2 + l) * get(m + 1, n + 1);
            v += (mf * nf).sqrt() * (d2 - l) * get(m - 1, n - 1);
            out[(m as usize, n as usize)] = v;
        }
    }
    out
}

fn hermitize(rho: &mut DMatrix<C64>) {
    let dim = rho.nrows();
    for i in 0..dim {
        for j in (i + 1)..dim {
            let avg = 0.5 * (rho[(i, j)] + rho[(j, i)].conj());
            rho[(i, j)] = avg;
            rho[(j, i)] = avg.conj();
        }
        let d = rho[(i, i)];
        rho[(i, i)] = C64::new(d.re, 0.0);
    }
}

/// Fixed-step 4th-order integration of the master equation in a truncated
/// number basis, with Hermiticity re-symmetrization each step, trace-drift
/// bookkeeping and boundary-occupancy supervision.
pub fn oracle_evolve(
    model: &OscillatorModel,
    rho0: &FockDensityMatrix,
    t: f64,
    opts: &OracleOptions,
) -> Result<OracleRun> {
    if t < 0.0 {
        return Err(Error::Config(format!("t must be >= 0, got {t}")));
    }
    derive(model)?;
    let dt_req = opts.dt.unwrap_or_else(|| default_dt(model));
    if !(dt_req > 0.0) {
        return Err(Error::Config(format!("dt must be > 0, got {dt_req}")));
    }
    let steps = ((t / dt_req).ceil() as usize).max(1);
    let dt = if t == 0.0 { 0.0 } else { t / steps as f64 };

    let mut dim = rho0.dim;
    let mut rho = rho0.entries.clone();
    let mut gen = match opts.form {
        OracleForm::OperatorLindblad => Some(OperatorGen::new(model, dim)),
        OracleForm::Recurrence => None,
    };
    let mut trace_drift: f64 = (rho0.trace() - C64::new(1.0, 0.0)).norm();
    let mut max_boundary: f64 = rho0.boundary_occupancy();
    let mut expansions = 0usize;

    let mut steps_done = 0usize;
    while steps_done < steps && dt > 0.0 {
        let rhs = |r: &DMatrix<C64>| -> DMatrix<C64> {
            match opts.form {
                OracleForm::OperatorLindblad => gen.as_ref().unwrap().rhs(model, r),
                OracleForm::Recurrence => recurrence_rhs(model, r),
            }
        };
        let k1 = rhs(&rho);
        let k2 = rhs(&(&rho + &k1 * C64::new(0.5 * dt, 0.0)));
        let k3 = rhs(&(&rho + &k2 * C64::new(0.5 * dt, 0.0)));
        let k4 = rhs(&(&rho + &k3 * C64::new(dt, 0.0)));
        rho += (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4)
            * C64::new(dt / 6.0, 0.0);
        hermitize(&mut rho);
        steps_done += 1;

        let boundary = rho[(dim - 1, dim - 1)].norm();
        max_boundary = max_boundary.max(boundary);
        if boundary > opts.boundary_threshold {
            if opts.auto_expand && 2 * dim <= opts.max_dim {
                let new_dim = 2 * dim;
                let mut bigger = DMatrix::<C64>::zeros(new_dim, new_dim);
                for i in 0..dim {
                    for j in 0..dim {
                        bigger[(i, j)] = rho[(i, j)];
                    }
                }
                rho = bigger;
                dim = new_dim;
                if matches!(opts.form, OracleForm::OperatorLindblad) {
                    gen = Some(OperatorGen::new(model, dim));
                }
                expansions += 1;
            } else {
                return Err(Error::TruncationLeakage {
                    occupancy: boundary,
                    dim,
                    suggested: 2 * dim,
                });
            }
        }
        let mut tr = C64::new(0.0, 0.0);
        for k in 0..dim {
            tr += rho[(k, k)];
        }
        trace_drift = trace_drift.max((tr - C64::new(1.0, 0.0)).norm());
    }

    Ok(OracleRun {
        rho: FockDensityMatrix {
            dim,
            entries: rho,
            t: rho0.t + t,
        },
        trace_drift,
        max_boundary_occupancy: max_boundary,
        steps: steps_done,
        expansions,
    })
}

/// Expectation value `Tr(rho O)`.
pub fn expectation(rho: &FockDensityMatrix, op: &DMatrix<C64>) -> C64 {
    let mut tr = C64::new(0.0, 0.0);
    for i in 0..rho.dim {
        for j in 0..rho.dim {
            tr += rho.entries[(i, j)] * op[(j, i)];
        }
    }
    tr
}

/// First and second moments of a truncated density matrix.
pub fn moments_from_rho(rho: &FockDensityMatrix, model: &OscillatorModel) -> Result<MomentState> {
    derive(model)?;
    let (q, p) = q_p_matrices(model, rho.dim);
    let qq = &q * &q;
    let pp = &p * &p;
    let sym = (&q * &p + &p * &q) * C64::new(0.5, 0.0);
    let sq = expectation(rho, &q).re;
    let sp = expectation(rho, &p).re;
    Ok(MomentState {
        sigma_q: sq,
        sigma_p: sp,
        sigma_qq: expectation(rho, &qq).re - sq * sq,
        sigma_pp: expectation(rho, &pp).re - sp * sp,
        sigma_pq: expectation(rho, &sym).re - sq * sp,
        t: rho.t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{genfun_rhs, rk45};
    use approx::assert_relative_eq;

    fn underdamped() -> OscillatorModel {
        OscillatorModel::new(1.3, 1.1, 0.25, 0.4, 0.31, 0.52, 0.05, 1.0).unwrap()
    }

    fn overdamped() -> OscillatorModel {
        OscillatorModel::new(0.8, 1.0, 1.0, 1.3, 0.45, 0.85, -0.04, 1.0).unwrap()
    }

    /// Zero-temperature bath whose exact solution is a decaying Glauber
    /// packet.
    fn glauber_model() -> OscillatorModel {
        let (m, w, l) = (1.0, 1.0, 0.35);
        OscillatorModel::new(m, w, l, 0.0, 0.5 * l / (m * w), 0.5 * l * m * w, 0.0, 1.0).unwrap()
    }

    #[test]
    fn genfun_initial_conditions_recovered() {
        for m in [underdamped(), overdamped()] {
            let init = GenFunInit {
                c0: C64::new(0.4, -0.3),
                b0: C64::new(0.05, 0.02),
                f0: -3.0,
            };
            let s = genfun_evolve(&m, &init, 0.0).unwrap();
            assert_relative_eq!(s.b.re, init.b0.re, epsilon = 1e-12);
            assert_relative_eq!(s.b.im, init.b0.im, epsilon = 1e-12);
            assert_relative_eq!(s.f, init.f0, epsilon = 1e-12);
            assert_relative_eq!(s.c.re, init.c0.re, epsilon = 1e-12);
        }
    }

    #[test]
    fn genfun_matches_ode_oracle() {
        for m in [underdamped(), overdamped()] {
            let init = GenFunInit {
                c0: C64::new(0.0, 0.0),
                b0: C64::new(0.04, -0.03),
                f0: -3.4,
            };
            for &t in &[0.5, 2.1] {
                let s = genfun_evolve(&m, &init, t).unwrap();
                let d0 = init.b0.conj();
                let y0 = [init.b0.re, init.b0.im, d0.re, d0.im, init.f0, 0.0];
                let y = rk45(genfun_rhs(&m), 0.0, t, &y0, 1e-12, 1e-14);
                assert_relative_eq!(s.b.re, y[0], max_relative = 1e-9, epsilon = 1e-12);
                assert_relative_eq!(s.b.im, y[1], max_relative = 1e-9, epsilon = 1e-12);
                assert_relative_eq!(s.d.re, y[2], max_relative = 1e-9, epsilon = 1e-12);
                assert_relative_eq!(s.d.im, y[3], max_relative = 1e-9, epsilon = 1e-12);
                assert_relative_eq!(s.f, y[4], max_relative = 1e-9, epsilon = 1e-12);
                assert!(y[5].abs() < 1e-10, "F picked up imaginary part");
            }
        }
    }

    #[test]
    fn genfun_asymptotes_solve_steady_state() {
        for m in [underdamped(), overdamped()] {
            let dc = derive(&m).unwrap();
            let (l, mu, w) = (m.lambda, m.mu, m.omega);
            let (r, i, f) = genfun_asymptotes(&m).unwrap();
            // Steady state of the (R, I, F) system.
            let dr = -2.0 * l * r - 2.0 * w * i - mu * f + 2.0 * (dc.d1.re - mu);
            let di = -2.0 * l * i + 2.0 * w * r - 2.0 * dc.d1.im;
            let df = -4.0 * mu * r - 2.0 * l * f - 4.0 * (dc.d2 + l);
            assert!(dr.abs() < 1e-12, "dR = {dr:e}");
            assert!(di.abs() < 1e-12, "dI = {di:e}");
            assert!(df.abs() < 1e-12, "dF = {df:e}");
        }
    }

    #[test]
    fn stationary_input_is_constant() {
        for m in [underdamped(), overdamped()] {
            let (r, i, f) = genfun_asymptotes(&m).unwrap();
            let init = GenFunInit {
                c0: C64::new(0.0, 0.0),
                b0: C64::new(r, -i),
                f0: f,
            };
            for &t in &[0.7, 3.0] {
                let s = genfun_evolve(&m, &init, t).unwrap();
                assert_relative_eq!(s.d.re, r, max_relative = 1e-12, epsilon = 1e-14);
                assert_relative_eq!(s.d.im, i, max_relative = 1e-12, epsilon = 1e-14);
                assert_relative_eq!(s.f, f, max_relative = 1e-12);
                assert!(s.c.norm() < 1e-15);
            }
        }
    }

    #[test]
    fn thermal_stationary_state_is_bose_einstein() {
        // mu = 0 thermal bath: D2 = lambda coth(x) with x = hbar w / k T.
        let x = 0.9f64;
        let coth = 1.0 / (0.5 * x).tanh();
        let m = OscillatorModel::thermal(1.0, 1.0, 0.3, 0.0, coth, 1.0).unwrap();
        let (r, i, f) = genfun_asymptotes(&m).unwrap();
        let s = genfun_evolve(
            &m,
            &GenFunInit {
                c0: C64::new(0.0, 0.0),
                b0: C64::new(r, -i),
                f0: f,
            },
            1.0,
        )
        .unwrap();
        assert!(s.b.norm() < 1e-12);
        let q = (-x).exp();
        // Stationary generating function weight: 1/A = 1 - q and 1 - F/H = q.
        assert_relative_eq!(1.0 / s.a, 1.0 - q, max_relative = 1e-10);
        assert_relative_eq!(1.0 - s.f / s.h, q, max_relative = 1e-10);
        for n in 0..12 {
            let diag = density_from_genfun(&s, n, n).unwrap();
            assert_relative_eq!(diag.re, (1.0 - q) * q.powi(n as i32), max_relative = 1e-9);
            assert!(diag.im.abs() < 1e-12);
        }
        for (mm, nn) in [(0, 1), (2, 5), (1, 3)] {
            assert!(density_from_genfun(&s, mm, nn).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn centered_states_have_no_odd_elements() {
        let m = underdamped();
        let s = genfun_evolve(
            &m,
            &GenFunInit {
                c0: C64::new(0.0, 0.0),
                b0: C64::new(0.06, 0.01),
                f0: -3.1,
            },
            0.8,
        )
        .unwrap();
        for mm in 0..8usize {
            for nn in 0..8usize {
                if (mm + nn) % 2 == 1 {
                    let v = density_from_genfun(&s, mm, nn).unwrap();
                    assert!(v.norm() < 1e-12, "rho[{mm},{nn}] = {v}");
                }
            }
        }
        // Printed lowest elements.
        let rho00 = density_from_genfun(&s, 0, 0).unwrap();
        assert_relative_eq!(rho00.re, 1.0 / s.a, max_relative = 1e-12);
        let rho11 = density_from_genfun(&s, 1, 1).unwrap();
        assert_relative_eq!(rho11.re, (1.0 - s.f / s.h) / s.a, max_relative = 1e-12);
        let rho20 = density_from_genfun(&s, 2, 0).unwrap();
        let expect = -(2.0f64).sqrt() * s.b / (s.a * s.h);
        assert_relative_eq!(rho20.re, expect.re, max_relative = 1e-12, epsilon = 1e-15);
        assert_relative_eq!(rho20.im, expect.im, max_relative = 1e-12, epsilon = 1e-15);
    }

    /// Coefficient-extraction oracle: contour integral of the generating
    /// function, independent of the triple-sum formula.
    fn rho_by_contour(s: &GenFunState, m: usize, n: usize) -> C64 {
        let big_n = 64usize;
        let r = 0.7f64;
        let g = |x: C64, y: C64| -> C64 {
            let quad = s.b * (x - s.c) * (x - s.c)
                + s.d * (y - s.e) * (y - s.e)
                + s.f * (x - s.c) * (y - s.e);
            (x * y - quad / s.h).exp() / s.a
        };
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..big_n {
            for k in 0..big_n {
                let tj = 2.0 * std::f64::consts::PI * j as f64 / big_n as f64;
                let tk = 2.0 * std::f64::consts::PI * k as f64 / big_n as f64;
                let x = C64::from_polar(r, tj);
                let y = C64::from_polar(r, tk);
                let phase = C64::from_polar(
                    1.0,
                    -(m as f64 * tj + n as f64 * tk),
                );
                acc += g(x, y) * phase;
            }
        }
        acc /= C64::new((big_n * big_n) as f64 * r.powi((m + n) as i32), 0.0);
        // rho_mn = sqrt(m! n!) g_mn.
        acc * (0.5 * (lnfact(m) + lnfact(n))).exp()
    }

    #[test]
    fn density_formula_matches_contour_extraction() {
        let m = underdamped();
        let s = genfun_evolve(
            &m,
            &GenFunInit {
                c0: C64::new(0.3, -0.2),
                b0: C64::new(0.04, 0.02),
                f0: -3.3,
            },
            0.6,
        )
        .unwrap();
        for mm in 0..5usize {
            for nn in 0..5usize {
                let direct = density_from_genfun(&s, mm, nn).unwrap();
                let contour = rho_by_contour(&s, mm, nn);
                assert!(
                    (direct - contour).norm() < 1e-9 * direct.norm().max(1e-6),
                    "rho[{mm},{nn}]: {direct} vs {contour}"
                );
            }
        }
    }

    #[test]
    fn glauber_packet_stays_glauber() {
        let m = glauber_model();
        let alpha0 = C64::new(0.9, 0.4);
        let init = GenFunInit::glauber(alpha0);
        let t = 1.3;
        let s = genfun_evolve(&m, &init, t).unwrap();
        // B and F stay pinned for this bath.
        assert!(s.b.norm() < 1e-12);
        assert_relative_eq!(s.f, -4.0, max_relative = 1e-12);
        // rho_mn = C*(t)^m C(t)^n exp(-|C|^2)/sqrt(m! n!)
        let c = s.c;
        for mm in 0..6usize {
            for nn in 0..6usize {
                let direct = density_from_genfun(&s, mm, nn).unwrap();
                let expect = c.conj().powi(mm as i32) * c.powi(nn as i32)
                    * (-c.norm_sqr()).exp()
                    / (0.5 * (lnfact(mm) + lnfact(nn))).exp();
                assert!(
                    (direct - expect).norm() < 1e-12,
                    "rho[{mm},{nn}]: {direct} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn rhs_forms_agree_and_preserve_trace() {
        let dim = 16;
        for m in [underdamped(), overdamped(), glauber_model()] {
            // Random-ish Hermitian trial state supported away from the edge.
            let mut rho = DMatrix::<C64>::zeros(dim, dim);
            for i in 0..10 {
                for j in 0..10 {
                    rho[(i, j)] = C64::new(
                        ((3 * i + 5 * j + 1) as f64 * 0.713).sin() * 0.05,
                        ((2 * i + 7 * j) as f64 * 0.413).cos() * 0.03,
                    );
                }
            }
            let rho = (&rho + &rho.adjoint()) * C64::new(0.5, 0.0);
            let gen = OperatorGen::new(&m, dim);
            let op_rhs = gen.rhs(&m, &rho);
            let rec_rhs = recurrence_rhs(&m, &rho);
            let mut worst: f64 = 0.0;
            // Compare away from the truncation boundary where the forms
            // differ only by cutoff conventions.
            for i in 0..dim - 2 {
                for j in 0..dim - 2 {
                    worst = worst.max((op_rhs[(i, j)] - rec_rhs[(i, j)]).norm());
                }
            }
            assert!(worst < 1e-12, "forms disagree by {worst:e}");
            let tr: C64 = (0..dim).map(|k| rec_rhs[(k, k)]).sum();
            assert!(tr.norm() < 1e-13, "recurrence trace derivative {tr}");
            let tr_op: C64 = (0..dim).map(|k| op_rhs[(k, k)]).sum();
            assert!(tr_op.norm() < 1e-13, "operator trace derivative {tr_op}");
        }
    }

    #[test]
    fn closed_system_number_state_is_stationary_in_population() {
        let m = OscillatorModel::new(1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0).unwrap();
        let rho0 = FockDensityMatrix::number_state(1, 12);
        let run = oracle_evolve(&m, &rho0, 0.5, &OracleOptions::default()).unwrap();
        assert_relative_eq!(run.rho.entries[(1, 1)].re, 1.0, max_relative = 1e-10);
        assert!(run.trace_drift < 1e-12);
    }

    #[test]
    fn oracle_matches_glauber_closed_form() {
        let m = glauber_model();
        let alpha0 = C64::new(0.8, -0.5);
        let rho0 = FockDensityMatrix::coherent(alpha0, 24);
        let t = 1.0;
        let run = oracle_evolve(&m, &rho0, t, &OracleOptions::default()).unwrap();
        let s = genfun_evolve(&m, &GenFunInit::glauber(alpha0), t).unwrap();
        let analytic = genfun_density_matrix(&s, 14).unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..13 {
            for j in 0..13 {
                worst = worst.max((run.rho.entries[(i, j)] - analytic.entries[(i, j)]).norm());
            }
        }
        assert!(worst < 1e-7, "max element deviation {worst:e}");
        assert!(run.trace_drift < 1e-8);
    }

    #[test]
    fn oracle_step_halving_shows_fourth_order() {
        let m = underdamped();
        let rho0 = FockDensityMatrix::coherent(C64::new(0.6, 0.3), 20);
        let t = 0.4;
        let run = |dt: f64| {
            let opts = OracleOptions {
                dt: Some(dt),
                ..Default::default()
            };
            oracle_evolve(&m, &rho0, t, &opts).unwrap().rho
        };
        let fine = run(0.0005);
        let err = |r: &FockDensityMatrix| -> f64 {
            let mut worst: f64 = 0.0;
            for i in 0..r.dim {
                for j in 0..r.dim {
                    worst = worst.max((r.entries[(i, j)] - fine.entries[(i, j)]).norm());
                }
            }
            worst
        };
        let e1 = err(&run(0.02));
        let e2 = err(&run(0.01));
        let ratio = e1 / e2;
        assert!(
            (10.0..26.0).contains(&ratio),
            "step halving gave ratio {ratio}, expected ~16"
        );
    }

    #[test]
    fn truncation_leakage_is_detected_and_recoverable() {
        let m = glauber_model();
        let rho0 = FockDensityMatrix::coherent(C64::new(2.2, 0.0), 10);
        let no_expand = OracleOptions {
            auto_expand: false,
            ..Default::default()
        };
        assert!(matches!(
            oracle_evolve(&m, &rho0, 0.5, &no_expand),
            Err(Error::TruncationLeakage { .. })
        ));
        let run = oracle_evolve(&m, &rho0, 0.5, &OracleOptions::default()).unwrap();
        assert!(run.expansions >= 1);
        assert!(run.rho.dim >= 20);
    }

    #[test]
    fn vacuum_moments() {
        let m = underdamped();
        let rho = FockDensityMatrix::vacuum(8);
        let s = moments_from_rho(&rho, &m).unwrap();
        let mw = m.m * m.omega;
        assert_relative_eq!(s.sigma_qq, 0.5 * m.hbar / mw, epsilon = 1e-12);
        assert_relative_eq!(s.sigma_pp, 0.5 * m.hbar * mw, epsilon = 1e-12);
        assert!(s.sigma_pq.abs() < 1e-13);
    }

    #[test]
    fn coherent_moments_match_displacements() {
        let m = overdamped();
        let alpha = C64::new(0.7, -0.2);
        let rho = FockDensityMatrix::coherent(alpha, 28);
        let s = moments_from_rho(&rho, &m).unwrap();
        let mw = m.m * m.omega;
        assert_relative_eq!(s.sigma_q, (2.0 * m.hbar / mw).sqrt() * alpha.re, max_relative = 1e-10);
        assert_relative_eq!(s.sigma_p, (2.0 * m.hbar * mw).sqrt() * alpha.im, max_relative = 1e-10);
        assert_relative_eq!(s.sigma_qq, 0.5 * m.hbar / mw, max_relative = 1e-10);
    }

    #[test]
    fn snapshot_round_trip() {
        let rho = FockDensityMatrix::coherent(C64::new(0.4, 0.2), 6);
        let snap = rho.snapshot();
        let text = serde_json::to_string(&snap).unwrap();
        let back: FockDensitySnapshot = serde_json::from_str(&text).unwrap();
        let rho2 = FockDensityMatrix::from_snapshot(&back).unwrap();
        for i in 0..rho.dim {
            for j in 0..rho.dim {
                let a = rho.entries[(i, j)];
                let b = rho2.entries[(i, j)];
                assert!(a == b, "entry ({i},{j}) changed: {a:?} vs {b:?}");
            }
        }
        assert_eq!(rho.t, rho2.t);
        assert_eq!(rho.dim, rho2.dim);
    }
}
