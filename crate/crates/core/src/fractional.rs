//! Scalar fractional-calculus kernel: the Gamma function, the power rule for
//! the left Riemann–Liouville derivative, principal complex powers, and a
//! Grünwald–Letnikov finite-difference oracle used to cross-check the power
//! rule numerically.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Order of a fractional derivative, restricted to (0, 1].
///
/// The unit endpoint is admitted so that the fractional filter variants
/// degenerate exactly to their classical counterparts when calibrating for
/// equal performance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu <= 0.0 || nu > 1.0 {
            return Err(Error::Config(format!(
                "fractional order must lie in (0, 1], got {nu}"
            )));
        }
        Ok(Self(nu))
    }

    /// The classical-gradient endpoint `nu = 1`.
    pub const ONE: FractionalOrder = FractionalOrder(1.0);

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_unit(self) -> bool {
        self.0 == 1.0
    }
}

impl std::fmt::Display for FractionalOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.fract() == 0.0 {
            write!(f, "{:.1}", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

// Lanczos approximation, g = 7, 9 terms. Coefficients as used by the GNU
// Scientific Library; relative error is ~1e-15 over the range needed here.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)] // digits kept exactly as published
const LANCZOS_COEFFS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// Gamma function for positive real arguments.
///
/// Arguments at or below zero are rejected; the adaptive-filter formulas only
/// ever evaluate Γ at 1−ν, 2−ν and 3−ν with ν ∈ (0, 1], all of which are
/// positive (the 1−ν = 0 pole is handled by the callers that need the
/// reciprocal limit).
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "gamma requires a positive finite argument, got {x}"
        )));
    }
    Ok(gamma_positive(x))
}

fn gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection keeps the Lanczos series in its accurate range and
        // covers the small arguments produced by nu close to 1.
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma_positive(1.0 - x))
    } else {
        let z = x - 1.0;
        let mut acc = LANCZOS_COEFFS[0];
        for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
            acc += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
    }
}

/// Fractional derivative of the monomial `t^z` of order `nu`, evaluated at
/// `t`: Γ(z+1)/Γ(z−ν+1) · t^(z−ν).
///
/// At the endpoint ν = 1 with z = 0 the denominator Γ(0) has a pole and the
/// derivative of the constant is zero.
pub fn rl_power_derivative(z: f64, nu: FractionalOrder, t: f64) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::Domain(format!(
            "power-rule derivative requires t > 0, got {t}"
        )));
    }
    if !z.is_finite() || z < 0.0 {
        return Err(Error::Domain(format!(
            "power-rule derivative requires z >= 0, got {z}"
        )));
    }
    let denom_arg = z - nu.value() + 1.0;
    if denom_arg == 0.0 {
        // 1/Γ(0) = 0: the classical derivative of a constant.
        return Ok(0.0);
    }
    Ok(gamma_positive(z + 1.0) / gamma_positive(denom_arg) * t.powf(z - nu.value()))
}

/// Principal-branch complex power with Arg ∈ (−π, π].
///
/// Conventions: 0^0 = 1 (so that w^(1−ν) degenerates to all-ones at ν = 1
/// even from zero-initialized weights), 0^a = 0 for a > 0, and negative real
/// bases map to the upper half-plane. Real positive bases produce exactly
/// real results.
pub fn principal_power(base: Complex64, exponent: f64) -> Result<Complex64> {
    if exponent == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if base.re == 0.0 && base.im == 0.0 {
        if exponent < 0.0 {
            return Err(Error::Domain(
                "zero base with negative exponent".to_string(),
            ));
        }
        return Ok(Complex64::new(0.0, 0.0));
    }
    if base.im == 0.0 {
        if base.re > 0.0 {
            return Ok(Complex64::new(base.re.powf(exponent), 0.0));
        }
        // Negative real axis: Arg = +π regardless of the sign of the zero
        // imaginary part.
        let magnitude = (-base.re).powf(exponent);
        let angle = exponent * std::f64::consts::PI;
        return Ok(Complex64::new(
            magnitude * angle.cos(),
            magnitude * angle.sin(),
        ));
    }
    let magnitude = base.norm().powf(exponent);
    let angle = exponent * base.arg();
    Ok(Complex64::new(
        magnitude * angle.cos(),
        magnitude * angle.sin(),
    ))
}

/// Grünwald–Letnikov approximation of the left fractional derivative of `f`
/// of order `nu` at `t`, with step `h = t / steps`.
///
/// For the polynomial integrands used throughout this crate the
/// approximation converges (first order in `h`) to the Riemann–Liouville
/// value, which makes it an implementation-independent check of
/// [`rl_power_derivative`].
pub fn gl_fractional_derivative_oracle<F>(
    f: F,
    nu: FractionalOrder,
    t: f64,
    steps: usize,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::Domain(format!(
            "finite-difference oracle requires t > 0, got {t}"
        )));
    }
    if steps < 100 {
        return Err(Error::Domain(format!(
            "finite-difference oracle requires at least 100 steps, got {steps}"
        )));
    }
    let h = t / steps as f64;
    let order = nu.value();
    // Binomial weights (-1)^k C(nu, k) by recurrence.
    let mut weight = 1.0;
    let mut acc = f(t);
    for k in 1..=steps {
        let kf = k as f64;
        weight *= (kf - 1.0 - order) / kf;
        // Guard the left endpoint against rounding below zero.
        let s = (t - kf * h).max(0.0);
        acc += weight * f(s);
    }
    Ok(acc / h.powf(order))
}
