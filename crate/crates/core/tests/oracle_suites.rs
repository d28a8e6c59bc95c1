//! Cross-validation suites for the fractional-gradient machinery: the closed
//! form against the quadratic-fit oracle, and the power rule against the
//! finite-difference oracle.

use fraclms::*;
use rand_core::{RngCore, SeedableRng};

fn uniform(rng: &mut rand_chacha::ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    lo + u * (hi - lo)
}

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-30)
}

#[test]
fn corrected_gradient_vs_quadratic_fit_oracle_thousand_instances() {
    let started = std::time::Instant::now();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xfade);
    let orders: Vec<FractionalOrder> = [0.3, 0.5, 0.7, 0.9]
        .iter()
        .map(|&v| FractionalOrder::new(v).unwrap())
        .collect();
    let mut worst = 0.0f64;
    for trial in 0..1000 {
        let n = 1 + (trial % 8);
        let y: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(uniform(&mut rng, -2.0, 2.0), 0.0))
            .collect();
        let d = Complex64::new(uniform(&mut rng, -2.0, 2.0), 0.0);
        let obj = instantaneous_correlations(&y, d).unwrap();
        let w: Vec<f64> = (0..n).map(|_| uniform(&mut rng, 0.1, 5.0)).collect();
        let ell = (rng.next_u64() as usize) % n;
        let nu = orders[trial % orders.len()];
        let closed = frac_gradient_corrected(&w, &obj, nu, ell).unwrap();
        let fitted = frac_gradient_oracle(&w, &obj, nu, ell).unwrap();
        let err = (closed - fitted).abs() / fitted.abs().max(1e-8);
        worst = worst.max(err);
    }
    assert!(worst < 1e-8, "worst relative error {worst:.3e}");
    assert!(
        started.elapsed().as_secs() < 10,
        "oracle suite exceeded its runtime budget"
    );
}

#[test]
fn power_rule_vs_finite_difference_grid() {
    let mut worst = 0.0f64;
    for &z in &[0.0, 1.0, 2.0] {
        for &nu_value in &[0.3, 0.5, 0.7] {
            for &t in &[0.5, 1.0, 4.0] {
                let nu = FractionalOrder::new(nu_value).unwrap();
                let exact = rl_power_derivative(z, nu, t).unwrap();
                let approx =
                    gl_fractional_derivative_oracle(|s| s.powf(z), nu, t, 100_000).unwrap();
                let err = rel_err(approx, exact);
                assert!(
                    err < 1e-3,
                    "z={z} nu={nu_value} t={t}: exact {exact}, approx {approx}, rel err {err:.2e}"
                );
                worst = worst.max(err);
            }
        }
    }
    assert!(worst < 1e-3);
}

#[test]
fn corrected_gradient_endpoint_consistency() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xed9e);
    let nu = FractionalOrder::new(1.0 - 1e-8).unwrap();
    for _ in 0..300 {
        let n = 1 + (rng.next_u64() % 8) as usize;
        let y: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(uniform(&mut rng, -2.0, 2.0), 0.0))
            .collect();
        let d = Complex64::new(uniform(&mut rng, -2.0, 2.0), 0.0);
        let obj = instantaneous_correlations(&y, d).unwrap();
        let w: Vec<f64> = (0..n).map(|_| uniform(&mut rng, 0.1, 5.0)).collect();
        let ell = (rng.next_u64() as usize) % n;
        let fractional = frac_gradient_corrected(&w, &obj, nu, ell).unwrap();
        let classical = classical_gradient(&w, &obj, ell).unwrap();
        let err = (fractional - classical).abs() / classical.abs().max(1e-6);
        assert!(err < 1e-5, "endpoint error {err:.2e}");
    }
}
