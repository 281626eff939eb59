use lindblad_lab::fock::{self, FockDensityMatrix, OracleForm, OracleOptions};
use lindblad_lab::model::Regime;
use lindblad_lab::moments::{self, MomentState};
use lindblad_lab::{sweep, C64};

fn main() {
    let mut rng = sweep::rng(555);
    let mut models = Vec::new();
    while models.len() < 10 {
        let regime = if models.len() % 2 == 0 { Regime::Underdamped } else { Regime::Overdamped };
        let m = sweep::random_admissible(&mut rng, regime);
        if m.omega / m.lambda < 4.0 { models.push(m); }
    }
    let m = &models[3];
    println!("model 3: {m:?}");
    let alpha0 = C64::new(0.8, 0.4);
    let s0 = MomentState::coherent(m, alpha0);
    let dt = fock::default_dt(m);
    let t = 3.0 * 1200.0 * dt;
    for (label, dtf, dim) in [("dt, dim40", 1.0, 40usize), ("dt/2, dim40", 0.5, 40), ("dt, dim56", 1.0, 56), ("dt/2, dim56", 0.5, 56)] {
        let opts = OracleOptions { form: OracleForm::Recurrence, dt: Some(dt * dtf), auto_expand: false, boundary_threshold: 1.0, ..Default::default() };
        let rho0 = FockDensityMatrix::coherent(alpha0, dim);
        let run = fock::oracle_evolve(m, &rho0, t, &opts).unwrap();
        let got = fock::moments_from_rho(&run.rho, m).unwrap();
        let want = moments::propagate(m, &s0, t).unwrap();
        println!("{label}: dev_pq={:.3e} trace_drift={:.3e} boundary={:.3e}",
            (got.sigma_pq - want.sigma_pq).abs(), run.trace_drift, run.max_boundary_occupancy);
    }
}
