//! Adaptive filtering with the LMS family and its fractional-order variants,
//! plus a deterministic Monte Carlo system-identification harness.
//!
//! The crate provides four layers:
//!
//! - [`fractional`]: Gamma function, the fractional power rule, principal
//!   complex powers and a finite-difference oracle.
//! - [`objective`]: instantaneous correlation estimates, the quadratic error
//!   objective in flawed (complex) and correct (real) forms, and fractional
//!   gradients of that objective with an independent brute-force oracle.
//! - [`filter`]: LMS, NLMS, CLMS, FCLMS and FNLMS behind one step interface.
//! - [`sim`] / [`metrics`]: scenario synthesis, seeded Monte Carlo execution
//!   and learning-curve analysis (steady-state dB levels, divergence
//!   classification, report tables).
//!
//! All simulation randomness flows through [`rng`], which derives
//! per-run substreams so that results are reproducible bit-for-bit under any
//! degree of parallelism.

pub mod error;
pub mod filter;
pub mod fractional;
pub mod metrics;
pub mod objective;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
pub use filter::{Algorithm, FilterConfig, FilterState, DEFAULT_EPSILON};
pub use fractional::{
    gamma, gl_fractional_derivative_oracle, principal_power, rl_power_derivative,
    FractionalOrder,
};
pub use metrics::{
    build_table, classify_divergence, steady_state_db, Classification, CurveLabel,
    LearningCurve, SteadyState, SteadyStateReport,
};
pub use objective::{
    classical_gradient, frac_gradient_corrected, frac_gradient_oracle, frac_gradient_componentwise,
    instantaneous_correlations, objective_correct, objective_flawed, QuadraticObjective,
};
pub use sim::{
    generate_input, mean_deviation, run_monte_carlo, run_single, synthesize_desired, Preset,
    ProtocolSpec, RunResult, SignalKind, SystemSpec,
};

pub use num_complex::Complex64;
