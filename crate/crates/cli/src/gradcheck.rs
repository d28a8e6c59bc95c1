//! Gradient cross-check report: the closed-form fractional gradient against
//! the quadratic-fit oracle, the power rule against the finite-difference
//! oracle, and the classical-gradient endpoint.

use anyhow::bail;
use fraclms::*;

struct Suite {
    name: &'static str,
    max_rel_err: f64,
    tolerance: f64,
}

impl Suite {
    fn pass(&self) -> bool {
        self.max_rel_err < self.tolerance
    }
}

fn uniform(rng: &mut impl FnMut() -> u64, lo: f64, hi: f64) -> f64 {
    let u = (rng() >> 11) as f64 / (1u64 << 53) as f64;
    lo + u * (hi - lo)
}

/// Simple xorshift-based generator for the random instances; the suites are
/// tolerance checks, not statistics, so any well-mixed stream works.
fn make_rng(seed: u64) -> impl FnMut() -> u64 {
    let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
    move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    }
}

fn quadratic_fit_suite(trials: usize, orders: &[FractionalOrder], seed: u64) -> Suite {
    let mut rng = make_rng(seed);
    let mut worst = 0.0f64;
    for trial in 0..trials {
        let n = 1 + (trial % 8);
        let y: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(uniform(&mut rng, -2.0, 2.0), 0.0))
            .collect();
        let d = Complex64::new(uniform(&mut rng, -2.0, 2.0), 0.0);
        let obj = instantaneous_correlations(&y, d).unwrap();
        let w: Vec<f64> = (0..n).map(|_| uniform(&mut rng, 0.1, 5.0)).collect();
        let ell = (rng() as usize) % n;
        let nu = orders[trial % orders.len()];
        let closed = frac_gradient_corrected(&w, &obj, nu, ell).unwrap();
        let fitted = frac_gradient_oracle(&w, &obj, nu, ell).unwrap();
        worst = worst.max((closed - fitted).abs() / fitted.abs().max(1e-8));
    }
    Suite {
        name: "quadratic-fit oracle",
        max_rel_err: worst,
        tolerance: 1e-8,
    }
}

fn power_rule_suite() -> Suite {
    let mut worst = 0.0f64;
    for &z in &[0.0, 1.0, 2.0] {
        for &nu_value in &[0.3, 0.5, 0.7] {
            for &t in &[0.5, 1.0, 4.0] {
                let nu = FractionalOrder::new(nu_value).unwrap();
                let exact = rl_power_derivative(z, nu, t).unwrap();
                let approx = gl_fractional_derivative_oracle(|s| s.powf(z), nu, t, 100_000)
                    .unwrap();
                worst = worst.max((approx - exact).abs() / exact.abs());
            }
        }
    }
    Suite {
        name: "power rule vs finite difference",
        max_rel_err: worst,
        tolerance: 1e-3,
    }
}

fn endpoint_suite(seed: u64) -> Suite {
    let mut rng = make_rng(seed ^ 0xe4d);
    let nu = FractionalOrder::new(1.0 - 1e-8).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = 1 + (rng() % 8) as usize;
        let y: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(uniform(&mut rng, -2.0, 2.0), 0.0))
            .collect();
        let d = Complex64::new(uniform(&mut rng, -2.0, 2.0), 0.0);
        let obj = instantaneous_correlations(&y, d).unwrap();
        let w: Vec<f64> = (0..n).map(|_| uniform(&mut rng, 0.1, 5.0)).collect();
        let ell = (rng() as usize) % n;
        let fractional = frac_gradient_corrected(&w, &obj, nu, ell).unwrap();
        let classical = classical_gradient(&w, &obj, ell).unwrap();
        worst = worst.max((fractional - classical).abs() / classical.abs().max(1e-6));
    }
    Suite {
        name: "classical endpoint (nu -> 1)",
        max_rel_err: worst,
        tolerance: 1e-5,
    }
}

/// Run every suite and report; returns whether all stayed within tolerance.
pub fn gradcheck(trials: usize, nu: Option<f64>, seed: u64) -> anyhow::Result<bool> {
    if trials == 0 {
        bail!("gradcheck needs at least one trial");
    }
    let orders: Vec<FractionalOrder> = match nu {
        Some(value) => vec![FractionalOrder::new(value)?],
        None => [0.3, 0.5, 0.7, 0.9]
            .iter()
            .map(|&v| FractionalOrder::new(v).unwrap())
            .collect(),
    };

    let suites = [
        quadratic_fit_suite(trials, &orders, seed),
        power_rule_suite(),
        endpoint_suite(seed),
    ];

    let mut all_pass = true;
    for suite in &suites {
        let tag = if suite.pass() { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] {}: max relative error {:.3e} (tolerance {:.0e})",
            suite.name, suite.max_rel_err, suite.tolerance
        );
        all_pass &= suite.pass();
    }
    Ok(all_pass)
}
