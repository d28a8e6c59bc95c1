//! Instantaneous correlation estimates, the quadratic error objective in its
//! flawed (complex-valued) and correct (real-valued) forms, and the fractional
//! gradients of that objective.
//!
//! Two fractional gradients live here. [`frac_gradient_componentwise`] is
//! the heuristic expression used inside the FCLMS/FNLMS update terms: it
//! applies the power rule to each weight in isolation and attaches the
//! stochastic factor y·conj(e). [`frac_gradient_corrected`] differentiates
//! the full quadratic objective instead, which is what the Riemann–Liouville
//! derivative actually yields for real positive weights; it is a
//! verification target, not a filter component, and is paired with a
//! quadratic-fit oracle that applies the power rule term by term without
//! knowing the closed-form rearrangement.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fractional::{gamma, principal_power, FractionalOrder};

/// Quadratic objective data: average power, cross-correlation vector and
/// autocorrelation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticObjective {
    /// Average desired-signal power (|d|² for instantaneous estimates).
    pub sigma2: f64,
    /// Cross-correlation vector, length N.
    pub p: Vec<Complex64>,
    /// Autocorrelation matrix, N×N row-major.
    pub r: Vec<Complex64>,
}

impl QuadraticObjective {
    pub fn new(sigma2: f64, p: Vec<Complex64>, r: Vec<Complex64>) -> Result<Self> {
        let n = p.len();
        if n == 0 {
            return Err(Error::Dimension("empty cross-correlation vector".into()));
        }
        if r.len() != n * n {
            return Err(Error::Dimension(format!(
                "autocorrelation matrix has {} entries, expected {}",
                r.len(),
                n * n
            )));
        }
        if !sigma2.is_finite() || sigma2 < 0.0 {
            return Err(Error::Config(format!(
                "average power must be finite and nonnegative, got {sigma2}"
            )));
        }
        Ok(Self { sigma2, p, r })
    }

    /// Filter length N.
    #[inline]
    pub fn len(&self) -> usize {
        self.p.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// Matrix entry R[row][col] (zero-based).
    #[inline]
    pub fn r_at(&self, row: usize, col: usize) -> Complex64 {
        self.r[row * self.len() + col]
    }

    /// True when every stored entry has an exactly zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.p.iter().all(|v| v.im == 0.0) && self.r.iter().all(|v| v.im == 0.0)
    }
}

/// Rank-one instantaneous correlation estimates from one regressor/desired
/// pair: p[n] = y[n]·conj(d), R[n][m] = y[n]·conj(y[m]), sigma2 = |d|².
///
/// For real data the conjugations are no-ops and the entries reduce to
/// p[n] = y[n]·d and R[n][m] = y[n]·y[m]. The conjugated form keeps R
/// Hermitian positive semi-definite and makes the correct objective equal
/// |d − wᴴy|² for complex data as well.
pub fn instantaneous_correlations(y: &[Complex64], d: Complex64) -> Result<QuadraticObjective> {
    let n = y.len();
    if n == 0 {
        return Err(Error::Dimension("empty regressor".into()));
    }
    let p = y.iter().map(|&yi| yi * d.conj()).collect();
    let mut r = Vec::with_capacity(n * n);
    for &yi in y {
        for &yj in y {
            r.push(yi * yj.conj());
        }
    }
    QuadraticObjective::new(d.norm_sqr(), p, r)
}

fn check_dims(w: usize, obj: &QuadraticObjective) -> Result<()> {
    if w != obj.len() {
        return Err(Error::Dimension(format!(
            "weight vector has {} entries, objective expects {}",
            w,
            obj.len()
        )));
    }
    Ok(())
}

/// The simplified objective σ² − 2·wᴴp + wᴴRw, kept as a complex number.
///
/// This form drops the real-part extraction on wᴴp and is therefore
/// complex-valued in general, which is the defect it exists to demonstrate.
pub fn objective_flawed(w: &[Complex64], obj: &QuadraticObjective) -> Result<Complex64> {
    check_dims(w.len(), obj)?;
    let wp: Complex64 = w.iter().zip(&obj.p).map(|(&wi, &pi)| wi.conj() * pi).sum();
    Ok(Complex64::new(obj.sigma2, 0.0) - 2.0 * wp + quadratic_form(w, obj))
}

/// The real-valued objective σ² − 2·Re{wᴴp} + Re{wᴴRw}.
pub fn objective_correct(w: &[Complex64], obj: &QuadraticObjective) -> Result<f64> {
    check_dims(w.len(), obj)?;
    let wp: Complex64 = w.iter().zip(&obj.p).map(|(&wi, &pi)| wi.conj() * pi).sum();
    Ok(obj.sigma2 - 2.0 * wp.re + quadratic_form(w, obj).re)
}

fn quadratic_form(w: &[Complex64], obj: &QuadraticObjective) -> Complex64 {
    let n = w.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, &wi) in w.iter().enumerate() {
        for (j, &wj) in w.iter().enumerate() {
            acc += wi.conj() * obj.r[i * n + j] * wj;
        }
    }
    acc
}

/// Componentwise fractional gradient used by the FCLMS/FNLMS update terms:
/// −Γ(2)·y[n]·conj(e)·w[n]^(1−ν)/Γ(2−ν) per component, sign included.
pub fn frac_gradient_componentwise(
    w: &[Complex64],
    y: &[Complex64],
    e: Complex64,
    nu: FractionalOrder,
) -> Result<Vec<Complex64>> {
    if w.len() != y.len() {
        return Err(Error::Dimension(format!(
            "weight vector has {} entries, regressor has {}",
            w.len(),
            y.len()
        )));
    }
    let scale = gamma(2.0)? / gamma(2.0 - nu.value())?;
    let e_conj = e.conj();
    w.iter()
        .zip(y)
        .map(|(&wi, &yi)| {
            let frac = principal_power(wi, 1.0 - nu.value())?;
            Ok(-scale * yi * e_conj * frac)
        })
        .collect()
}

fn check_real_gradient_args(
    w: &[f64],
    obj: &QuadraticObjective,
    ell: usize,
) -> Result<()> {
    check_dims(w.len(), obj)?;
    if !obj.is_real() {
        return Err(Error::Domain(
            "real fractional gradient requires a real objective".into(),
        ));
    }
    if ell >= w.len() {
        return Err(Error::Dimension(format!(
            "component index {} out of range for {} weights",
            ell,
            w.len()
        )));
    }
    if w[ell] <= 0.0 {
        return Err(Error::Singular(format!(
            "fractional gradient undefined at w[{}] = {} (requires a positive weight)",
            ell, w[ell]
        )));
    }
    Ok(())
}

/// Rigorous Riemann–Liouville fractional gradient of the quadratic objective
/// with respect to the real weight `w[ell]` (zero-based), all entries real
/// and `w[ell] > 0`.
///
/// The objective is split into constant, linear and quadratic parts in
/// `w[ell]` and the power rule is applied to each, which yields the
/// three-term closed form
/// `c·wₗ^(−ν)/Γ(1−ν) + 2·b·wₗ^(1−ν)/Γ(2−ν) + 2·Rₗₗ·wₗ^(2−ν)/Γ(3−ν)`.
pub fn frac_gradient_corrected(
    w: &[f64],
    obj: &QuadraticObjective,
    nu: FractionalOrder,
    ell: usize,
) -> Result<f64> {
    check_real_gradient_args(w, obj, ell)?;
    let n = w.len();
    let order = nu.value();

    // Constant part: sigma2 minus the cross terms that exclude component ell.
    let mut constant = obj.sigma2;
    for i in (0..n).filter(|&i| i != ell) {
        constant -= 2.0 * w[i] * obj.p[i].re;
    }
    for i in (0..n).filter(|&i| i != ell) {
        for j in (0..n).filter(|&j| j != ell) {
            constant += w[i] * w[j] * obj.r_at(i, j).re;
        }
    }

    // Coefficient of the term linear in w[ell] (R symmetric for real data).
    let mut linear = -obj.p[ell].re;
    for i in (0..n).filter(|&i| i != ell) {
        linear += w[i] * obj.r_at(i, ell).re;
    }

    let wl = w[ell];
    let first = if order == 1.0 {
        0.0 // 1/Γ(0) = 0
    } else {
        constant * wl.powf(-order) / gamma(1.0 - order)?
    };
    let second = 2.0 * linear * wl.powf(1.0 - order) / gamma(2.0 - order)?;
    let third = 2.0 * obj.r_at(ell, ell).re * wl.powf(2.0 - order) / gamma(3.0 - order)?;
    Ok(first + second + third)
}

/// Brute-force check of [`frac_gradient_corrected`]: numerically fit the
/// objective as a quadratic in `w[ell]` from three evaluations, then apply
/// the power rule to each fitted coefficient. Shares no algebra with the
/// closed form above.
pub fn frac_gradient_oracle(
    w: &[f64],
    obj: &QuadraticObjective,
    nu: FractionalOrder,
    ell: usize,
) -> Result<f64> {
    check_real_gradient_args(w, obj, ell)?;

    let evaluate = |x: f64| -> Result<f64> {
        let mut probe: Vec<Complex64> = w.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        probe[ell] = Complex64::new(x, 0.0);
        objective_correct(&probe, obj)
    };

    // Exact quadratic interpolation through x0, x0+1, x0+2.
    let x0 = w[ell];
    let j0 = evaluate(x0)?;
    let j1 = evaluate(x0 + 1.0)?;
    let j2 = evaluate(x0 + 2.0)?;
    let c2 = (j2 - 2.0 * j1 + j0) / 2.0;
    let c1 = (j1 - j0) - c2 * (2.0 * x0 + 1.0);
    let c0 = j0 - c1 * x0 - c2 * x0 * x0;

    let order = nu.value();
    let constant_term = if order == 1.0 {
        0.0
    } else {
        c0 * x0.powf(-order) / gamma(1.0 - order)?
    };
    let linear_term = c1 * gamma(2.0)? / gamma(2.0 - order)? * x0.powf(1.0 - order);
    let quadratic_term = c2 * gamma(3.0)? / gamma(3.0 - order)? * x0.powf(2.0 - order);
    Ok(constant_term + linear_term + quadratic_term)
}

/// Classical partial derivative ∂J/∂w[ell] = 2(Σₙ wₙRₙₗ − pₗ) for real data;
/// the ν → 1 limit of the fractional gradient.
pub fn classical_gradient(w: &[f64], obj: &QuadraticObjective, ell: usize) -> Result<f64> {
    check_dims(w.len(), obj)?;
    if ell >= w.len() {
        return Err(Error::Dimension(format!(
            "component index {} out of range for {} weights",
            ell,
            w.len()
        )));
    }
    let mut acc = -obj.p[ell].re;
    for (i, &wi) in w.iter().enumerate() {
        acc += wi * obj.r_at(i, ell).re;
    }
    Ok(2.0 * acc)
}
