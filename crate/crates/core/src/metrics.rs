//! Learning-curve post-processing: steady-state levels in dB, divergence
//! classification and table-shaped reports.
//!
//! Conventions (both configurable at the call sites): the steady-state level
//! is `10·log10` of the mean deviation averaged over the final window
//! (100 iterations by default), and the early reference is a window of
//! ±10 iterations around the checkpoint (iteration 100 by default).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::filter::Algorithm;
use crate::fractional::FractionalOrder;

/// Default steady-state averaging window (iterations).
pub const DEFAULT_WINDOW: usize = 100;
/// Default early-reference checkpoint (iteration index).
pub const DEFAULT_CHECKPOINT: usize = 100;
/// Half-width of the window averaged around the checkpoint.
pub const CHECKPOINT_HALF_WIDTH: usize = 10;

/// Identity of one learning curve: which algorithm at which fractional
/// order. Classical algorithms are labelled at the unit order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveLabel {
    pub algorithm: Algorithm,
    pub nu: FractionalOrder,
}

impl CurveLabel {
    pub fn new(algorithm: Algorithm, nu: FractionalOrder) -> Self {
        Self { algorithm, nu }
    }
}

impl Eq for CurveLabel {}

impl Ord for CurveLabel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.algorithm
            .cmp(&other.algorithm)
            .then(self.nu.value().total_cmp(&other.nu.value()))
    }
}

impl PartialOrd for CurveLabel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for CurveLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}_nu={}", self.algorithm, self.nu)
    }
}

/// Mean deviation per iteration, averaged over Monte Carlo runs, plus the
/// aggregate failure indicators collected from the individual runs.
#[derive(Debug, Clone, PartialEq)]
pub struct LearningCurve {
    pub label: CurveLabel,
    /// Mean MD at each iteration; non-finite entries mark divergence.
    pub values: Vec<f64>,
    /// Number of Monte Carlo runs averaged into `values`.
    pub runs: usize,
    /// How many of those runs were flagged as diverged.
    pub diverged_runs: usize,
    /// Earliest iteration (across runs) at which a real-data run leaked a
    /// non-real weight component; `None` when no run did.
    pub first_nonreal_iteration: Option<usize>,
}

impl LearningCurve {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Steady-state verdict for one curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SteadyState {
    /// `10·log10` of the final-window mean deviation.
    Db(f64),
    Diverged,
}

impl SteadyState {
    pub fn db(self) -> Option<f64> {
        match self {
            SteadyState::Db(v) => Some(v),
            SteadyState::Diverged => None,
        }
    }

    pub fn is_diverged(self) -> bool {
        matches!(self, SteadyState::Diverged)
    }
}

/// Qualitative verdict for one curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Converging,
    Diverging,
    /// A real-data run produced non-real weight components.
    FailedNonreal,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Classification::Converging => "converging",
            Classification::Diverging => "diverging",
            Classification::FailedNonreal => "failed-nonreal",
        };
        f.write_str(name)
    }
}

/// Steady-state entries per (algorithm, ν), ordered by algorithm and then by
/// ascending fractional order.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateReport {
    pub entries: BTreeMap<CurveLabel, SteadyState>,
}

fn window_mean(values: &[f64], start: usize, end: usize) -> f64 {
    let slice = &values[start..end];
    slice.iter().sum::<f64>() / slice.len() as f64
}

/// Strictly-greater comparison with enough relative slack to absorb the
/// summation rounding of two windows over an identical level.
fn exceeds(final_mean: f64, reference: f64) -> bool {
    final_mean > reference * (1.0 + 1e-12)
}

/// Mean over the window of ±[`CHECKPOINT_HALF_WIDTH`] iterations around
/// `checkpoint`, clamped to the curve.
fn checkpoint_mean(values: &[f64], checkpoint: usize) -> f64 {
    let start = checkpoint.saturating_sub(CHECKPOINT_HALF_WIDTH);
    let end = (checkpoint + CHECKPOINT_HALF_WIDTH + 1).min(values.len());
    window_mean(values, start, end)
}

/// Steady-state level of a curve in dB, or [`SteadyState::Diverged`] when the
/// final window contains non-finite values or its mean exceeds the early
/// reference mean around `checkpoint`.
pub fn steady_state_db(
    curve: &LearningCurve,
    window: usize,
    checkpoint: usize,
) -> Result<SteadyState> {
    if curve.is_empty() {
        return Err(Error::Dimension("empty learning curve".into()));
    }
    if window == 0 || window > curve.len() {
        return Err(Error::Config(format!(
            "window {} invalid for a curve of length {}",
            window,
            curve.len()
        )));
    }
    if checkpoint >= curve.len() {
        return Err(Error::Config(format!(
            "checkpoint {} out of range for a curve of length {}",
            checkpoint,
            curve.len()
        )));
    }
    let final_mean = window_mean(&curve.values, curve.len() - window, curve.len());
    if !final_mean.is_finite() {
        return Ok(SteadyState::Diverged);
    }
    if exceeds(final_mean, checkpoint_mean(&curve.values, checkpoint)) {
        return Ok(SteadyState::Diverged);
    }
    Ok(SteadyState::Db(10.0 * final_mean.log10()))
}

/// Divergence classification: diverging when the final-window mean exceeds
/// the checkpoint-window mean, failed-nonreal when a real-data run leaked
/// complex weights, converging otherwise.
pub fn classify_divergence(
    curve: &LearningCurve,
    window: usize,
    checkpoint: usize,
) -> Result<Classification> {
    if curve.is_empty() {
        return Err(Error::Dimension("empty learning curve".into()));
    }
    if window == 0 || window > curve.len() {
        return Err(Error::Config(format!(
            "window {} invalid for a curve of length {}",
            window,
            curve.len()
        )));
    }
    if checkpoint >= curve.len() {
        return Err(Error::Config(format!(
            "checkpoint {} out of range for a curve of length {}",
            checkpoint,
            curve.len()
        )));
    }
    let final_mean = window_mean(&curve.values, curve.len() - window, curve.len());
    let reference = checkpoint_mean(&curve.values, checkpoint);
    if !final_mean.is_finite() || exceeds(final_mean, reference) {
        return Ok(Classification::Diverging);
    }
    if curve.first_nonreal_iteration.is_some() {
        return Ok(Classification::FailedNonreal);
    }
    Ok(Classification::Converging)
}

/// Apply [`steady_state_db`] to every curve and collect the verdicts into a
/// report keyed by (algorithm, ν).
pub fn build_table(
    curves: &[LearningCurve],
    window: usize,
    checkpoint: usize,
) -> Result<SteadyStateReport> {
    if curves.is_empty() {
        return Err(Error::Dimension("no learning curves".into()));
    }
    let mut entries = BTreeMap::new();
    for curve in curves {
        let verdict = steady_state_db(curve, window, checkpoint)?;
        if entries.insert(curve.label, verdict).is_some() {
            return Err(Error::Config(format!(
                "duplicate curve label {}",
                curve.label
            )));
        }
    }
    Ok(SteadyStateReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn curve(label: CurveLabel, values: Vec<f64>) -> LearningCurve {
        LearningCurve {
            label,
            values,
            runs: 1,
            diverged_runs: 0,
            first_nonreal_iteration: None,
        }
    }

    fn label(algorithm: Algorithm, nu: f64) -> CurveLabel {
        CurveLabel::new(algorithm, FractionalOrder::new(nu).unwrap())
    }

    #[test]
    fn constant_curve_levels() {
        let c = curve(label(Algorithm::Nlms, 1.0), vec![0.05; 1000]);
        match steady_state_db(&c, 100, 100).unwrap() {
            SteadyState::Db(v) => assert_relative_eq!(v, -13.010299957, max_relative = 1e-9),
            SteadyState::Diverged => panic!("constant curve must not diverge"),
        }
        let unit = curve(label(Algorithm::Nlms, 1.0), vec![1.0; 1000]);
        assert_eq!(steady_state_db(&unit, 100, 100).unwrap(), SteadyState::Db(0.0));
    }

    #[test]
    fn nonfinite_tail_is_diverged() {
        let mut values = vec![0.5; 1000];
        values[990] = f64::INFINITY;
        let c = curve(label(Algorithm::Fnlms, 0.5), values);
        assert!(steady_state_db(&c, 100, 100).unwrap().is_diverged());
    }

    #[test]
    fn growing_curve_is_diverged() {
        let values: Vec<f64> = (0..1000).map(|k| 0.1 + k as f64 * 1e-3).collect();
        let c = curve(label(Algorithm::Fnlms, 0.5), values);
        assert!(steady_state_db(&c, 100, 100).unwrap().is_diverged());
        assert_eq!(
            classify_divergence(&c, 100, 100).unwrap(),
            Classification::Diverging
        );
    }

    #[test]
    fn decreasing_curve_converges() {
        let values: Vec<f64> = (0..1000).map(|k| 1.0 / (1.0 + k as f64)).collect();
        let c = curve(label(Algorithm::Nlms, 1.0), values);
        assert_eq!(
            classify_divergence(&c, 100, 100).unwrap(),
            Classification::Converging
        );
    }

    #[test]
    fn nonreal_leakage_classifies_failed() {
        let values: Vec<f64> = (0..1000).map(|k| 1.0 / (1.0 + k as f64)).collect();
        let mut c = curve(label(Algorithm::Fnlms, 0.5), values);
        c.first_nonreal_iteration = Some(3);
        assert_eq!(
            classify_divergence(&c, 100, 100).unwrap(),
            Classification::FailedNonreal
        );
    }

    #[test]
    fn db_map_is_monotone_in_final_mean() {
        let lo = curve(label(Algorithm::Nlms, 1.0), vec![0.02; 500]);
        let hi = curve(label(Algorithm::Nlms, 1.0), vec![0.08; 500]);
        let lo_db = steady_state_db(&lo, 50, 100).unwrap().db().unwrap();
        let hi_db = steady_state_db(&hi, 50, 100).unwrap().db().unwrap();
        assert!(lo_db < hi_db);
    }

    #[test]
    fn table_covers_every_curve_once() {
        let curves = vec![
            curve(label(Algorithm::Clms, 1.0), vec![0.05; 1000]),
            curve(label(Algorithm::Fclms, 0.6), vec![0.1; 1000]),
            curve(label(Algorithm::Fclms, 0.8), vec![0.07; 1000]),
        ];
        let report = build_table(&curves, 100, 100).unwrap();
        assert_eq!(report.entries.len(), 3);
        // Ordered by algorithm, then ascending nu.
        let keys: Vec<String> = report.entries.keys().map(|k| k.to_string()).collect();
        assert_eq!(keys, vec!["CLMS_nu=1.0", "FCLMS_nu=0.6", "FCLMS_nu=0.8"]);
    }

    #[test]
    fn table_rejects_duplicates_and_empty_input() {
        let curves = vec![
            curve(label(Algorithm::Clms, 1.0), vec![0.05; 1000]),
            curve(label(Algorithm::Clms, 1.0), vec![0.06; 1000]),
        ];
        assert!(build_table(&curves, 100, 100).is_err());
        assert!(build_table(&[], 100, 100).is_err());
    }

    #[test]
    fn all_diverged_input_marks_every_entry() {
        let mut values = vec![f64::NAN; 300];
        values[0] = 1.0;
        let curves = vec![
            curve(label(Algorithm::Fnlms, 0.4), values.clone()),
            curve(label(Algorithm::Fnlms, 0.5), values),
        ];
        let report = build_table(&curves, 50, 100).unwrap();
        assert!(report.entries.values().all(|v| v.is_diverged()));
    }

    #[test]
    fn window_bounds_are_validated() {
        let c = curve(label(Algorithm::Nlms, 1.0), vec![0.5; 10]);
        assert!(steady_state_db(&c, 11, 5).is_err());
        assert!(steady_state_db(&c, 0, 5).is_err());
        assert!(steady_state_db(&c, 5, 10).is_err());
        assert!(classify_divergence(&c, 5, 10).is_err());
    }
}
