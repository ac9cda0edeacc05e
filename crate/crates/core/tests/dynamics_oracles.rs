mod common;

use common::{c, default_env, simpson};
use nalgebra::Matrix4;
use num_complex::Complex64;
use polaron::dynamics::{
    build_liouvillian, evolve_density, ops, regression_correlator, steady_state, unvectorize, vectorize,
    DensityOperator, DriveConfig, Liouvillian, Propagator,
};
use polaron::emission::g0_decaying_terms;
use polaron::numerics::{half_line_fourier, CMatrix4, CVector4};
use polaron::phonon::{PhononBath, PhononGrid};

const GAMMA: f64 = 1.0 / 700.0;

fn dressed(bath: &PhononBath, omega: f64) -> Liouvillian {
    let drive = DriveConfig::resonant(omega, GAMMA).unwrap();
    build_liouvillian(&drive, &bath.rates(omega).unwrap()).unwrap()
}

/// `e^{M}` by scaling and squaring of a Taylor series.
fn taylor_expm(m: &CMatrix4) -> CMatrix4 {
    let norm = m.iter().map(|v| v.norm()).sum::<f64>();
    let squarings = (norm / 0.05).log2().ceil().max(0.0) as i32;
    let a = m * c(0.5f64.powi(squarings), 0.0);
    let mut term = Matrix4::<Complex64>::identity();
    let mut sum = term;
    for k in 1..=24 {
        term = term * a * c(1.0 / k as f64, 0.0);
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// `x(t)` for `ẋ = Lx` by classical Runge–Kutta with step `h`.
fn rk4(l: &CMatrix4, x0: &CVector4, h: f64, samples: &[usize]) -> Vec<CVector4> {
    let hc = c(h, 0.0);
    let mut x = *x0;
    let mut out = Vec::with_capacity(samples.len());
    let mut step = 0;
    for &target in samples {
        while step < target {
            let k1 = l * x;
            let k2 = l * (x + k1 * (hc * 0.5));
            let k3 = l * (x + k2 * (hc * 0.5));
            let k4 = l * (x + k3 * hc);
            x += (k1 + (k2 + k3) * c(2.0, 0.0) + k4) * (hc / 6.0);
            step += 1;
        }
        out.push(x);
    }
    out
}

#[test]
fn steady_state_is_long_time_limit() {
    let bath = PhononBath::new(default_env(4.0), PhononGrid::default()).unwrap();
    for omega in [1e-4, 0.005, 0.05] {
        let l = dressed(&bath, omega);
        let ss = steady_state(&l).unwrap();
        let late = evolve_density(&l, &DensityOperator::ground(), &[0.0, 1e5]).unwrap();
        assert!((late[1].matrix() - ss.matrix()).norm() < 1e-8, "Ω = {omega}");
        assert!(l.apply(ss.matrix()).norm() < 1e-12);
    }
}

#[test]
fn spectral_propagator_matches_taylor_exponential() {
    let bath = PhononBath::new(default_env(15.0), PhononGrid::default()).unwrap();
    for omega in [0.001, 0.02, 0.1] {
        let l = dressed(&bath, omega);
        let prop = Propagator::new(&l).unwrap();
        assert!(prop.is_spectral());
        let dense = Propagator::dense(&l);
        let x0 = vectorize(&(ops::sigma_x() * c(0.3, 0.1) + ops::excited()));
        for t in [0.5, 37.0, 900.0, 5000.0] {
            let reference = taylor_expm(&(l.matrix() * c(t, 0.0))) * x0;
            assert!(
                (prop.apply(t, &x0) - reference).norm() < 1e-9 * reference.norm().max(1.0),
                "Ω = {omega}, t = {t}"
            );
            assert!((dense.apply(t, &x0) - reference).norm() < 1e-9 * reference.norm().max(1.0));
        }
    }
}

#[test]
fn regression_matches_time_stepping() {
    let bath = PhononBath::new(default_env(4.0), PhononGrid::default()).unwrap();
    let h = 0.1;
    let samples: Vec<usize> = vec![0, 1, 10, 137, 1000, 5000, 20000, 40000];
    let tau: Vec<f64> = samples.iter().map(|&k| k as f64 * h).collect();
    for omega in [0.002, 0.03] {
        let l = dressed(&bath, omega);
        let ss = steady_state(&l).unwrap();
        let (s, sd, id, n) = (ops::sigma(), ops::sigma_dag(), ops::identity(), ops::excited());
        // (pre, post, observable)
        let cases = [(id, sd, s), (s, sd, n), (id, sd, n), (s, id, sd), (s, id, s)];
        for (pre, post, obs) in cases {
            let got = regression_correlator(&l, &ss, &pre, &post, &obs, &tau).unwrap();
            let x0 = vectorize(&(pre * ss.matrix() * post));
            let stepped = rk4(l.matrix(), &x0, h, &samples);
            for (v, x) in got.values.iter().zip(&stepped) {
                let want = (obs * unvectorize(x)).trace();
                assert!((v - want).norm() < 1e-8, "Ω = {omega}: {v} vs {want}");
            }
        }
    }
}

#[test]
fn closed_form_fourier_matches_quadrature() {
    let bath = PhononBath::new(default_env(4.0), PhononGrid::default()).unwrap();
    let l = dressed(&bath, 0.01);
    let ss = steady_state(&l).unwrap();
    let prop = Propagator::new(&l).unwrap();
    let terms = g0_decaying_terms(&prop, &ss).unwrap();
    let decay = terms.iter().map(|t| -t.exponent.re).fold(f64::INFINITY, f64::min);
    let upper = 40.0 / decay;
    let n = 400_001;
    let h = upper / (n - 1) as f64;
    for dw in [0.0, 0.003, -0.0095, 0.02] {
        let y: Vec<Complex64> = (0..n)
            .map(|i| {
                let t = i as f64 * h;
                terms
                    .iter()
                    .map(|k| k.coefficient * (k.exponent * t).exp())
                    .sum::<Complex64>()
                    * c(0.0, dw * t).exp()
            })
            .collect();
        let numeric = simpson(h, &y);
        let closed = half_line_fourier(&terms, dw).unwrap();
        assert!(
            (numeric - closed).norm() < 1e-6 * closed.norm(),
            "Δω = {dw}: {numeric} vs {closed}"
        );
    }
}

#[test]
fn dressed_steady_states_are_physical() {
    for t in [0.0, 4.0, 15.0] {
        let bath = PhononBath::new(default_env(t), PhononGrid::default()).unwrap();
        for omega in [1e-5, 1e-3, 0.01, 0.05, 0.2] {
            let ss = steady_state(&dressed(&bath, omega)).unwrap();
            let m = ss.matrix();
            assert!((m.trace() - 1.0).norm() < 1e-12);
            assert!((m - m.adjoint()).norm() < 1e-12);
            let [lo, _] = ss.eigenvalues();
            assert!(lo > -1e-12, "T = {t}, Ω = {omega}: {lo}");
            // Long-time factorization of the field correlation.
            let g = regression_correlator(
                &dressed(&bath, omega),
                &ss,
                &ops::identity(),
                &ops::sigma_dag(),
                &ops::sigma(),
                &[0.0, 1e7],
            )
            .unwrap();
            let coh = ss.expect(&ops::sigma());
            assert!((g.last() - coh.norm_sqr()).norm() < 1e-10);
        }
    }
}
