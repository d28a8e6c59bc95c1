//! The LMS family behind one step interface: LMS, NLMS, CLMS and the
//! fractional-order FCLMS/FNLMS variants.
//!
//! The fractional variants add a term scaled by w^(1−ν)/Γ(2−ν) to the
//! classical update. Complex-valued weight components arising from that term
//! (negative or complex weights raised to a fractional power) are retained
//! and propagated deliberately: that leakage is the failure mechanism the
//! simulation harness measures.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fractional::{gamma, principal_power, FractionalOrder};

/// Algorithm selector for [`FilterConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Lms,
    Nlms,
    Clms,
    Fclms,
    Fnlms,
}

impl Algorithm {
    pub fn is_fractional(self) -> bool {
        matches!(self, Algorithm::Fclms | Algorithm::Fnlms)
    }

    pub fn is_normalized(self) -> bool {
        matches!(self, Algorithm::Nlms | Algorithm::Fnlms)
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Lms => "LMS",
            Algorithm::Nlms => "NLMS",
            Algorithm::Clms => "CLMS",
            Algorithm::Fclms => "FCLMS",
            Algorithm::Fnlms => "FNLMS",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name.to_ascii_uppercase().as_str() {
            "LMS" => Ok(Algorithm::Lms),
            "NLMS" => Ok(Algorithm::Nlms),
            "CLMS" => Ok(Algorithm::Clms),
            "FCLMS" => Ok(Algorithm::Fclms),
            "FNLMS" => Ok(Algorithm::Fnlms),
            other => Err(Error::Config(format!("unknown algorithm '{other}'"))),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Default normalization guard added to ‖y‖² in the normalized updates.
pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Step sizes, fractional order and tap count for one filter instance.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterConfig {
    pub algorithm: Algorithm,
    pub taps: usize,
    /// Step size of the classical (integral) update term.
    pub mu1: f64,
    /// Step size of the fractional update term; zero for the classical
    /// algorithms.
    pub mu_frac: f64,
    pub nu: FractionalOrder,
    /// Normalization guard ε for NLMS/FNLMS.
    pub epsilon: f64,
}

impl FilterConfig {
    pub fn new(
        algorithm: Algorithm,
        taps: usize,
        mu1: f64,
        mu_frac: f64,
        nu: FractionalOrder,
    ) -> Result<Self> {
        let config = Self {
            algorithm,
            taps,
            mu1,
            mu_frac,
            nu,
            epsilon: DEFAULT_EPSILON,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        self.epsilon = epsilon;
        self.validate()?;
        Ok(self)
    }

    pub fn lms(taps: usize, mu: f64) -> Result<Self> {
        Self::new(Algorithm::Lms, taps, mu, 0.0, FractionalOrder::ONE)
    }

    pub fn nlms(taps: usize, mu: f64) -> Result<Self> {
        Self::new(Algorithm::Nlms, taps, mu, 0.0, FractionalOrder::ONE)
    }

    pub fn clms(taps: usize, mu: f64) -> Result<Self> {
        Self::new(Algorithm::Clms, taps, mu, 0.0, FractionalOrder::ONE)
    }

    pub fn fclms(taps: usize, mu: f64, mu_frac: f64, nu: FractionalOrder) -> Result<Self> {
        Self::new(Algorithm::Fclms, taps, mu, mu_frac, nu)
    }

    pub fn fnlms(taps: usize, mu: f64, mu_frac: f64, nu: FractionalOrder) -> Result<Self> {
        Self::new(Algorithm::Fnlms, taps, mu, mu_frac, nu)
    }

    pub fn validate(&self) -> Result<()> {
        if self.taps == 0 {
            return Err(Error::Config("filter needs at least one tap".into()));
        }
        if !self.mu1.is_finite() || self.mu1 <= 0.0 {
            return Err(Error::Config(format!(
                "integral step size must be positive, got {}",
                self.mu1
            )));
        }
        if !self.mu_frac.is_finite() || self.mu_frac < 0.0 {
            return Err(Error::Config(format!(
                "fractional step size must be nonnegative, got {}",
                self.mu_frac
            )));
        }
        if self.algorithm.is_fractional() && self.mu_frac == 0.0 {
            return Err(Error::Config(format!(
                "{} requires a positive fractional step size",
                self.algorithm
            )));
        }
        if !self.algorithm.is_fractional() && self.mu_frac != 0.0 {
            return Err(Error::Config(format!(
                "{} does not use a fractional step size; set it to zero",
                self.algorithm
            )));
        }
        if !self.epsilon.is_finite() || self.epsilon <= 0.0 {
            return Err(Error::Config(format!(
                "normalization guard must be positive, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Current weight estimate and iteration counter of one filter run.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterState {
    w: Vec<Complex64>,
    k: u64,
}

impl FilterState {
    /// Zero-initialized weights, iteration counter at zero.
    pub fn init(config: &FilterConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            w: vec![Complex64::new(0.0, 0.0); config.taps],
            k: 0,
        })
    }

    #[inline]
    pub fn weights(&self) -> &[Complex64] {
        &self.w
    }

    #[inline]
    pub fn iteration(&self) -> u64 {
        self.k
    }

    /// Advance by one sample: compute the a-priori error e = d − wᴴy, apply
    /// the configured update, increment the iteration counter and return e.
    pub fn step(&mut self, config: &FilterConfig, y: &[Complex64], d: Complex64) -> Result<Complex64> {
        if y.len() != self.w.len() {
            return Err(Error::Dimension(format!(
                "regressor has {} entries, filter has {} taps",
                y.len(),
                self.w.len()
            )));
        }
        if !d.is_finite() || y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("regressor or desired sample".into()));
        }

        let output: Complex64 = self.w.iter().zip(y).map(|(&wi, &yi)| wi.conj() * yi).sum();
        let e = d - output;

        match config.algorithm {
            Algorithm::Lms | Algorithm::Clms => {
                let scale = config.mu1 * e.conj();
                for (wi, &yi) in self.w.iter_mut().zip(y) {
                    *wi += scale * yi;
                }
            }
            Algorithm::Nlms => {
                let denom = energy(y) + config.epsilon;
                let scale = config.mu1 * e / denom;
                for (wi, &yi) in self.w.iter_mut().zip(y) {
                    *wi += scale * yi;
                }
            }
            Algorithm::Fclms => {
                let integral = config.mu1 * e.conj();
                let fractional =
                    config.mu_frac * gamma(2.0)? / gamma(2.0 - config.nu.value())? * e.conj();
                let exponent = 1.0 - config.nu.value();
                for (wi, &yi) in self.w.iter_mut().zip(y) {
                    let frac_factor = principal_power(*wi, exponent)?;
                    *wi += integral * yi + fractional * yi * frac_factor;
                }
            }
            Algorithm::Fnlms => {
                let denom = energy(y) + config.epsilon;
                let integral = config.mu1 * e / denom;
                let fractional =
                    config.mu_frac * gamma(2.0)? / gamma(2.0 - config.nu.value())? * e / denom;
                let exponent = 1.0 - config.nu.value();
                for (wi, &yi) in self.w.iter_mut().zip(y) {
                    let frac_factor = principal_power(*wi, exponent)?;
                    *wi += integral * yi + fractional * yi * frac_factor;
                }
            }
        }

        self.k += 1;
        Ok(e)
    }
}

#[inline]
fn energy(y: &[Complex64]) -> f64 {
    y.iter().map(|v| v.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand_core::{RngCore, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn uniform(rng: &mut rand_chacha::ChaCha8Rng, lo: f64, hi: f64) -> f64 {
        let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + u * (hi - lo)
    }

    fn nu(v: f64) -> FractionalOrder {
        FractionalOrder::new(v).unwrap()
    }

    #[test]
    fn init_zeroes_weights() {
        let config = FilterConfig::nlms(3, 1.0).unwrap();
        let state = FilterState::init(&config).unwrap();
        assert_eq!(state.weights(), &[c(0.0, 0.0); 3]);
        assert_eq!(state.iteration(), 0);

        let single = FilterState::init(&FilterConfig::lms(1, 0.1).unwrap()).unwrap();
        assert_eq!(single.weights(), &[c(0.0, 0.0)]);
    }

    #[test]
    fn degenerate_configs_rejected() {
        assert!(FilterConfig::nlms(0, 1.0).is_err());
        assert!(FilterConfig::nlms(3, 0.0).is_err());
        assert!(FilterConfig::nlms(3, -1.0).is_err());
        assert!(FilterConfig::fnlms(3, 0.5, 0.0, nu(0.5)).is_err());
        assert!(FilterConfig::new(Algorithm::Nlms, 3, 1.0, 0.5, FractionalOrder::ONE).is_err());
        assert!(FilterConfig::nlms(3, 1.0).unwrap().with_epsilon(0.0).is_err());
    }

    #[test]
    fn nlms_single_step_hand_example() {
        // Tiny epsilon stands in for the exact-zero guard of the worked
        // example; the difference is below the assertion tolerance.
        let config = FilterConfig::nlms(2, 1.0).unwrap().with_epsilon(1e-30).unwrap();
        let mut state = FilterState::init(&config).unwrap();
        let e = state.step(&config, &[c(1.0, 0.0), c(1.0, 0.0)], c(1.0, 0.0)).unwrap();
        assert_relative_eq!(e.re, 1.0, max_relative = 1e-14);
        assert_relative_eq!(state.weights()[0].re, 0.5, max_relative = 1e-12);
        assert_relative_eq!(state.weights()[1].re, 0.5, max_relative = 1e-12);
        assert_eq!(state.iteration(), 1);
    }

    #[test]
    fn fnlms_negative_weight_goes_complex() {
        let config = FilterConfig::fnlms(1, 0.5, 0.5, nu(0.5))
            .unwrap()
            .with_epsilon(1e-30)
            .unwrap();
        let mut state = FilterState {
            w: vec![c(-4.0, 0.0)],
            k: 0,
        };
        let e = state.step(&config, &[c(1.0, 0.0)], c(0.0, 0.0)).unwrap();
        assert_relative_eq!(e.re, 4.0, max_relative = 1e-14);
        // Integral part moves the weight to -2; the fractional factor
        // (-4)^0.5 = 2i contributes 0.5·4·2i/Γ(1.5).
        assert_relative_eq!(state.weights()[0].re, -2.0, max_relative = 1e-12);
        let expected_im = 0.5 * 4.0 * 2.0 / 0.886226925452758;
        assert_relative_eq!(state.weights()[0].im, expected_im, max_relative = 1e-12);
        assert!(state.weights()[0].im.abs() > 0.0);
    }

    #[test]
    fn fclms_zero_weights_reduce_to_clms_step() {
        let frac = FilterConfig::fclms(3, 0.02, 0.02, nu(0.6)).unwrap();
        let base = FilterConfig::clms(3, 0.02).unwrap();
        let y = [c(0.3, -0.8), c(-1.2, 0.4), c(0.9, 0.1)];
        let d = c(0.7, -0.2);
        let mut a = FilterState::init(&frac).unwrap();
        let mut b = FilterState::init(&base).unwrap();
        a.step(&frac, &y, d).unwrap();
        b.step(&base, &y, d).unwrap();
        for (wa, wb) in a.weights().iter().zip(b.weights()) {
            assert_eq!(wa, wb);
        }
    }

    #[test]
    fn real_data_keeps_classical_trajectories_real() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xc105);
        for config in [
            FilterConfig::lms(4, 0.05).unwrap(),
            FilterConfig::nlms(4, 0.8).unwrap(),
            FilterConfig::clms(4, 0.05).unwrap(),
        ] {
            let mut state = FilterState::init(&config).unwrap();
            for _ in 0..200 {
                let y: Vec<Complex64> =
                    (0..4).map(|_| c(uniform(&mut rng, -1.0, 1.0), 0.0)).collect();
                let d = c(uniform(&mut rng, -1.0, 1.0), 0.0);
                state.step(&config, &y, d).unwrap();
                assert!(state.weights().iter().all(|w| w.im == 0.0));
            }
        }
    }

    #[test]
    fn fnlms_leaks_imaginary_part_from_negative_weight() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x1eaf);
        for nu_value in [0.4, 0.6, 0.9] {
            let config = FilterConfig::fnlms(2, 0.5, 0.5, nu(nu_value)).unwrap();
            let mut state = FilterState {
                w: vec![c(-0.5, 0.0), c(1.0, 0.0)],
                k: 0,
            };
            let y = [
                c(uniform(&mut rng, 0.5, 1.0), 0.0),
                c(uniform(&mut rng, 0.5, 1.0), 0.0),
            ];
            // Any step with nonzero error picks up the complex fractional factor.
            state.step(&config, &y, c(2.0, 0.0)).unwrap();
            assert!(state.weights().iter().any(|w| w.im.abs() > 0.0));
        }
    }

    #[test]
    fn fnlms_at_unit_order_merges_step_sizes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xe901);
        let frac = FilterConfig::fnlms(3, 0.5, 0.5, FractionalOrder::ONE).unwrap();
        let base = FilterConfig::nlms(3, 1.0).unwrap();
        let mut a = FilterState::init(&frac).unwrap();
        let mut b = FilterState::init(&base).unwrap();
        for _ in 0..500 {
            let y: Vec<Complex64> =
                (0..3).map(|_| c(uniform(&mut rng, -1.0, 1.0), 0.0)).collect();
            let d = c(uniform(&mut rng, -2.0, 2.0), 0.0);
            let ea = a.step(&frac, &y, d).unwrap();
            let eb = b.step(&base, &y, d).unwrap();
            assert!((ea - eb).norm() <= 1e-12);
            for (wa, wb) in a.weights().iter().zip(b.weights()) {
                assert!((wa - wb).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn fclms_at_unit_order_merges_step_sizes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xe902);
        let frac = FilterConfig::fclms(3, 0.02, 0.02, FractionalOrder::ONE).unwrap();
        let base = FilterConfig::clms(3, 0.04).unwrap();
        let mut a = FilterState::init(&frac).unwrap();
        let mut b = FilterState::init(&base).unwrap();
        for _ in 0..500 {
            let y: Vec<Complex64> = (0..3)
                .map(|_| c(uniform(&mut rng, -1.0, 1.0), uniform(&mut rng, -1.0, 1.0)))
                .collect();
            let d = c(uniform(&mut rng, -2.0, 2.0), uniform(&mut rng, -2.0, 2.0));
            a.step(&frac, &y, d).unwrap();
            b.step(&base, &y, d).unwrap();
            for (wa, wb) in a.weights().iter().zip(b.weights()) {
                assert!((wa - wb).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn step_rejects_bad_inputs() {
        let config = FilterConfig::nlms(2, 1.0).unwrap();
        let mut state = FilterState::init(&config).unwrap();
        assert!(state.step(&config, &[c(1.0, 0.0)], c(1.0, 0.0)).is_err());
        assert!(state
            .step(&config, &[c(f64::NAN, 0.0), c(0.0, 0.0)], c(1.0, 0.0))
            .is_err());
        assert!(state
            .step(&config, &[c(1.0, 0.0), c(0.0, 0.0)], c(f64::INFINITY, 0.0))
            .is_err());
    }

    /// Independent re-statement of each update rule, written directly from
    /// the componentwise formulas rather than via the vector helpers above.
    fn reference_step(
        config: &FilterConfig,
        w: &[Complex64],
        y: &[Complex64],
        d: Complex64,
    ) -> Vec<Complex64> {
        let n = w.len();
        let mut out = Vec::with_capacity(n);
        let mut wy = c(0.0, 0.0);
        for i in 0..n {
            wy += w[i].conj() * y[i];
        }
        let e = d - wy;
        let norm2: f64 = y.iter().map(|v| v.re * v.re + v.im * v.im).sum();
        let g2 = 1.0; // Γ(2)
        let g2nu = crate::fractional::gamma(2.0 - config.nu.value()).unwrap();
        for i in 0..n {
            let next = match config.algorithm {
                Algorithm::Lms | Algorithm::Clms => w[i] + config.mu1 * e.conj() * y[i],
                Algorithm::Nlms => w[i] + config.mu1 * e * y[i] / (norm2 + config.epsilon),
                Algorithm::Fclms => {
                    let f = principal_power(w[i], 1.0 - config.nu.value()).unwrap();
                    w[i] + config.mu1 * e.conj() * y[i]
                        + config.mu_frac * g2 * e.conj() * y[i] * f / g2nu
                }
                Algorithm::Fnlms => {
                    let f = principal_power(w[i], 1.0 - config.nu.value()).unwrap();
                    w[i] + config.mu1 * e * y[i] / (norm2 + config.epsilon)
                        + config.mu_frac * g2 * e * y[i] * f / (g2nu * (norm2 + config.epsilon))
                }
            };
            out.push(next);
        }
        out
    }

    #[test]
    fn steps_match_reference_updates() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x57e9);
        let configs = [
            FilterConfig::lms(4, 0.05).unwrap(),
            FilterConfig::nlms(4, 0.9).unwrap(),
            FilterConfig::clms(4, 0.05).unwrap(),
            FilterConfig::fclms(4, 0.02, 0.02, nu(0.6)).unwrap(),
            FilterConfig::fnlms(4, 0.5, 0.5, nu(0.7)).unwrap(),
        ];
        for config in &configs {
            for _ in 0..100 {
                let w: Vec<Complex64> = (0..4)
                    .map(|_| c(uniform(&mut rng, -3.0, 3.0), uniform(&mut rng, -3.0, 3.0)))
                    .collect();
                let y: Vec<Complex64> = (0..4)
                    .map(|_| c(uniform(&mut rng, -2.0, 2.0), uniform(&mut rng, -2.0, 2.0)))
                    .collect();
                let d = c(uniform(&mut rng, -2.0, 2.0), uniform(&mut rng, -2.0, 2.0));
                let mut state = FilterState { w: w.clone(), k: 0 };
                state.step(config, &y, d).unwrap();
                let expected = reference_step(config, &w, &y, d);
                for (got, want) in state.weights().iter().zip(&expected) {
                    assert!(
                        (got - want).norm() <= 1e-12 * (1.0 + want.norm()),
                        "{}: got {got}, want {want}",
                        config.algorithm
                    );
                }
            }
        }
    }
}
