//! System-identification scenarios and the Monte Carlo runner.
//!
//! A scenario feeds unit-power white input through a tapped delay line,
//! forms the desired signal from a known weight vector plus optional
//! measurement noise, and drives one filter configuration over the record
//! while tracking the mean deviation MD(k) = ‖w_true − w(k)‖₁ / N.
//!
//! Monte Carlo runs are embarrassingly parallel. Every run derives its own
//! random substreams from (master seed, run index), and curves are averaged
//! in run order, so results are bit-identical for any thread count.

use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::filter::{FilterConfig, FilterState};
use crate::fractional::FractionalOrder;
use crate::metrics::{CurveLabel, LearningCurve};
use crate::rng::{derive_substream, GaussianStream};

/// MD level beyond which a run is flagged as diverged.
pub const DIVERGENCE_THRESHOLD: f64 = 1e6;

/// Imaginary magnitude beyond which a weight of a real-data run counts as
/// non-real.
pub const NONREAL_THRESHOLD: f64 = 1e-12;

/// Input-signal family of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalKind {
    /// i.i.d. N(0, 1) samples with zero imaginary part.
    RealGaussian,
    /// i.i.d. circularly symmetric complex samples with unit total variance.
    CircularComplexGaussian,
}

impl SignalKind {
    pub fn is_real(self) -> bool {
        matches!(self, SignalKind::RealGaussian)
    }
}

/// One system-identification scenario: the weights to recover, the input
/// family, the measurement SNR and the record length.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub w_true: Vec<Complex64>,
    pub signal_kind: SignalKind,
    /// Measurement SNR in dB, referenced to the unit-power input signal;
    /// `None` runs noiseless.
    pub snr_db: Option<f64>,
    pub samples: usize,
}

impl SystemSpec {
    pub fn new(
        w_true: Vec<Complex64>,
        signal_kind: SignalKind,
        snr_db: Option<f64>,
        samples: usize,
    ) -> Result<Self> {
        if w_true.is_empty() {
            return Err(Error::Config("system needs at least one weight".into()));
        }
        if w_true.iter().any(|w| !w.is_finite()) {
            return Err(Error::NonFinite("system weight".into()));
        }
        if samples < w_true.len() {
            return Err(Error::Config(format!(
                "record of {} samples is shorter than the {}-tap system",
                samples,
                w_true.len()
            )));
        }
        if let Some(snr) = snr_db {
            if !snr.is_finite() {
                return Err(Error::NonFinite("snr_db".into()));
            }
        }
        Ok(Self {
            w_true,
            signal_kind,
            snr_db,
            samples,
        })
    }

    pub fn real(w_true: &[f64], snr_db: Option<f64>, samples: usize) -> Result<Self> {
        Self::new(
            w_true.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            SignalKind::RealGaussian,
            snr_db,
            samples,
        )
    }

    /// Filter length N.
    pub fn taps(&self) -> usize {
        self.w_true.len()
    }

    /// Noise variance implied by `snr_db` (unit input power), zero when
    /// noiseless.
    pub fn noise_variance(&self) -> f64 {
        match self.snr_db {
            Some(snr) => 10f64.powf(-snr / 10.0),
            None => 0.0,
        }
    }
}

/// Outcome of a single run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// MD at the start of every iteration, `samples` entries.
    pub md_curve: Vec<f64>,
    /// Whether any MD value was non-finite or crossed
    /// [`DIVERGENCE_THRESHOLD`].
    pub diverged: bool,
    /// First iteration at which a real-data run held a weight with
    /// |Im| > [`NONREAL_THRESHOLD`]; always `None` for complex-data runs.
    pub first_nonreal_iteration: Option<usize>,
}

/// Unit-power white input record of the requested kind.
pub fn generate_input(kind: SignalKind, length: usize, seed: u64) -> Vec<Complex64> {
    let mut stream = GaussianStream::new(seed);
    (0..length)
        .map(|_| match kind {
            SignalKind::RealGaussian => Complex64::new(stream.next_normal(), 0.0),
            SignalKind::CircularComplexGaussian => stream.next_circular(),
        })
        .collect()
}

fn fill_regressor(input: &[Complex64], k: usize, out: &mut [Complex64]) {
    for (j, slot) in out.iter_mut().enumerate() {
        *slot = if k >= j {
            input[k - j]
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
}

/// Desired record d(k) = w_trueᴴ·y(k) + v(k), with y(k) the zero-prefilled
/// delay-line regressor and v Gaussian noise at the variance implied by the
/// scenario SNR (circular complex noise for complex input).
pub fn synthesize_desired(input: &[Complex64], spec: &SystemSpec, seed: u64) -> Result<Vec<Complex64>> {
    if input.len() != spec.samples {
        return Err(Error::Dimension(format!(
            "input record has {} samples, scenario expects {}",
            input.len(),
            spec.samples
        )));
    }
    let taps = spec.taps();
    let sigma_v = spec.noise_variance().sqrt();
    let mut noise = (sigma_v > 0.0).then(|| GaussianStream::new(seed));
    let mut regressor = vec![Complex64::new(0.0, 0.0); taps];
    let mut desired = Vec::with_capacity(spec.samples);
    for k in 0..spec.samples {
        fill_regressor(input, k, &mut regressor);
        let mut d: Complex64 = spec
            .w_true
            .iter()
            .zip(&regressor)
            .map(|(&wi, &yi)| wi.conj() * yi)
            .sum();
        if let Some(stream) = noise.as_mut() {
            d += match spec.signal_kind {
                SignalKind::RealGaussian => Complex64::new(sigma_v * stream.next_normal(), 0.0),
                SignalKind::CircularComplexGaussian => stream.next_circular() * sigma_v,
            };
        }
        desired.push(d);
    }
    Ok(desired)
}

/// ℓ₁ weight-error deviation per tap.
pub fn mean_deviation(w_true: &[Complex64], w: &[Complex64]) -> f64 {
    let sum: f64 = w_true
        .iter()
        .zip(w)
        .map(|(&wt, &wi)| (wt - wi).norm())
        .sum();
    sum / w_true.len() as f64
}

/// Drive one filter over one synthesized record.
///
/// `md_curve[k]` is the deviation at the start of iteration k (so the first
/// entry reflects the zero-initialized weights). Input and noise substreams
/// are derived from `seed`, so equal seeds reproduce equal records for every
/// filter configuration.
pub fn run_single(spec: &SystemSpec, config: &FilterConfig, seed: u64) -> Result<RunResult> {
    if config.taps != spec.taps() {
        return Err(Error::Dimension(format!(
            "filter has {} taps, system has {}",
            config.taps,
            spec.taps()
        )));
    }
    let input = generate_input(spec.signal_kind, spec.samples, derive_substream(seed, 0));
    let desired = synthesize_desired(&input, spec, derive_substream(seed, 1))?;

    let mut state = FilterState::init(config)?;
    let mut regressor = vec![Complex64::new(0.0, 0.0); config.taps];
    let mut md_curve = Vec::with_capacity(spec.samples);
    let mut diverged = false;
    let mut first_nonreal = None;
    let track_nonreal = spec.signal_kind.is_real();

    for (k, &d) in desired.iter().enumerate() {
        let md = mean_deviation(&spec.w_true, state.weights());
        if !md.is_finite() || md > DIVERGENCE_THRESHOLD {
            diverged = true;
        }
        md_curve.push(md);

        fill_regressor(&input, k, &mut regressor);
        state.step(config, &regressor, d)?;

        if track_nonreal
            && first_nonreal.is_none()
            && state
                .weights()
                .iter()
                .any(|w| w.im.abs() > NONREAL_THRESHOLD)
        {
            first_nonreal = Some(k);
        }
    }

    Ok(RunResult {
        md_curve,
        diverged,
        first_nonreal_iteration: first_nonreal,
    })
}

/// A named bundle of filter configurations over one scenario, repeated for
/// `runs` Monte Carlo rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolSpec {
    pub name: String,
    pub system: SystemSpec,
    pub filters: Vec<FilterConfig>,
    pub runs: usize,
    pub master_seed: u64,
}

fn config_label(config: &FilterConfig) -> CurveLabel {
    let nu = if config.algorithm.is_fractional() {
        config.nu
    } else {
        FractionalOrder::ONE
    };
    CurveLabel::new(config.algorithm, nu)
}

/// Run every configuration of the protocol over the same `runs` records and
/// average the MD curves pointwise.
///
/// Run r of every configuration uses substreams derived from
/// `(master_seed, r)`, which makes the comparison between algorithms paired
/// and the output independent of scheduling.
pub fn run_monte_carlo(protocol: &ProtocolSpec) -> Result<BTreeMap<CurveLabel, LearningCurve>> {
    if protocol.runs == 0 {
        return Err(Error::Config("protocol needs at least one run".into()));
    }
    if protocol.filters.is_empty() {
        return Err(Error::Config("protocol lists no filters".into()));
    }
    let mut curves = BTreeMap::new();
    for config in &protocol.filters {
        let label = config_label(config);
        if curves.contains_key(&label) {
            return Err(Error::Config(format!("duplicate protocol entry {label}")));
        }

        let results: Vec<RunResult> = (0..protocol.runs)
            .into_par_iter()
            .map(|run_index| {
                run_single(
                    &protocol.system,
                    config,
                    derive_substream(protocol.master_seed, run_index as u64),
                )
            })
            .collect::<Result<Vec<_>>>()?;

        // Deterministic reduction: accumulate in run order.
        let mut values = vec![0.0f64; protocol.system.samples];
        let mut diverged_runs = 0usize;
        let mut first_nonreal: Option<usize> = None;
        for result in &results {
            for (acc, &md) in values.iter_mut().zip(&result.md_curve) {
                *acc += md;
            }
            if result.diverged {
                diverged_runs += 1;
            }
            first_nonreal = match (first_nonreal, result.first_nonreal_iteration) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
        }
        let scale = 1.0 / protocol.runs as f64;
        for v in &mut values {
            *v *= scale;
        }

        curves.insert(
            label,
            LearningCurve {
                label,
                values,
                runs: protocol.runs,
                diverged_runs,
                first_nonreal_iteration: first_nonreal,
            },
        );
    }
    Ok(curves)
}

// --------------------------------------------------------------------------
// Replication presets
// --------------------------------------------------------------------------

/// Default Monte Carlo rounds per preset.
pub const DEFAULT_RUNS: usize = 1000;
/// Default record length per run.
pub const DEFAULT_SAMPLES: usize = 1000;
/// Default master seed of the CLI presets.
pub const DEFAULT_MASTER_SEED: u64 = 1;
/// Fractional orders evaluated by the presets.
pub const DEFAULT_NU_LIST: [f64; 7] = [0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

/// Reference steady-state levels (dB) for the complex preset, used as
/// replication targets by the CLI summary: (ν, level).
pub const FCLMS_REFERENCE_DB: [(f64, f64); 5] = [
    (0.6, -10.15),
    (0.7, -11.25),
    (0.8, -11.91),
    (0.9, -12.38),
    (1.0, -12.77),
];

/// Fractional orders at which the complex preset is expected to diverge.
pub const FCLMS_REFERENCE_DIVERGED: [f64; 2] = [0.4, 0.5];

/// Tolerance around [`FCLMS_REFERENCE_DB`] accepted by the CLI summary.
pub const FCLMS_DB_TOLERANCE: f64 = 2.0;

/// The 21-tap ladder of weights from −10 to 10.
pub fn negative_ladder_weights() -> Vec<f64> {
    (-10..=10).map(|v| v as f64).collect()
}

/// The 30-tap all-positive weight vector of the noiseless scenario.
pub fn positive_weights() -> Vec<f64> {
    vec![
        1.0, 2.0, 2.0, 2.0, 1.0, 1.0, 2.0, 2.0, 3.0, 1.0, 1.0, 2.0, 2.0, 2.0, 1.0, 2.0, 1.0,
        2.0, 2.0, 2.0, 1.0, 1.0, 2.0, 2.0, 2.0, 1.0, 1.0, 3.0, 2.0, 2.0,
    ]
}

/// Named replication scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Negative-ladder system, real input, 10 dB SNR; NLMS(1.0) against
    /// FNLMS(0.5, 0.5).
    FnlmsNegative,
    /// All-positive system, real input, noiseless; NLMS(1.0) against
    /// FNLMS(0.5, 0.5).
    FnlmsPositive,
    /// Negative-ladder system, circular complex input, 10 dB SNR;
    /// CLMS(0.04) against FCLMS(0.02, 0.02).
    FclmsNegative,
}

impl Preset {
    pub const ALL: [Preset; 3] = [
        Preset::FnlmsNegative,
        Preset::FnlmsPositive,
        Preset::FclmsNegative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::FnlmsNegative => "fnlms-negative",
            Preset::FnlmsPositive => "fnlms-positive",
            Preset::FclmsNegative => "fclms-negative",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "fnlms-negative" => Ok(Preset::FnlmsNegative),
            "fnlms-positive" => Ok(Preset::FnlmsPositive),
            "fclms-negative" => Ok(Preset::FclmsNegative),
            other => Err(Error::Config(format!("unknown preset '{other}'"))),
        }
    }

    /// Build the protocol with the preset scenario and step sizes.
    pub fn protocol(
        self,
        master_seed: u64,
        runs: usize,
        samples: usize,
        nu_list: &[FractionalOrder],
    ) -> Result<ProtocolSpec> {
        if runs == 0 {
            return Err(Error::Config("protocol needs at least one run".into()));
        }
        for nu in nu_list {
            if !DEFAULT_NU_LIST
                .iter()
                .any(|&allowed| allowed == nu.value())
            {
                return Err(Error::Config(format!(
                    "preset fractional orders are restricted to {DEFAULT_NU_LIST:?}, got {}",
                    nu.value()
                )));
            }
        }

        let (system, filters) = match self {
            Preset::FnlmsNegative | Preset::FnlmsPositive => {
                let weights = if self == Preset::FnlmsNegative {
                    negative_ladder_weights()
                } else {
                    positive_weights()
                };
                let snr = (self == Preset::FnlmsNegative).then_some(10.0);
                let system = SystemSpec::real(&weights, snr, samples)?;
                let taps = system.taps();
                let mut filters = vec![FilterConfig::nlms(taps, 1.0)?];
                for &nu in nu_list {
                    filters.push(FilterConfig::fnlms(taps, 0.5, 0.5, nu)?);
                }
                (system, filters)
            }
            Preset::FclmsNegative => {
                let system = SystemSpec::new(
                    negative_ladder_weights()
                        .into_iter()
                        .map(|v| Complex64::new(v, 0.0))
                        .collect(),
                    SignalKind::CircularComplexGaussian,
                    Some(10.0),
                    samples,
                )?;
                let taps = system.taps();
                let mut filters = vec![FilterConfig::clms(taps, 0.04)?];
                for &nu in nu_list {
                    filters.push(FilterConfig::fclms(taps, 0.02, 0.02, nu)?);
                }
                (system, filters)
            }
        };

        Ok(ProtocolSpec {
            name: self.name().to_string(),
            system,
            filters,
            runs,
            master_seed,
        })
    }
}

/// The default preset fractional orders as validated values.
pub fn default_nu_list() -> Vec<FractionalOrder> {
    DEFAULT_NU_LIST
        .iter()
        .map(|&v| FractionalOrder::new(v).expect("preset orders are valid"))
        .collect()
}
