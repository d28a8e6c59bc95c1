//! Flat key-value scenario files for the `run` subcommand.
//!
//! One `key = value` pair per line, `#` starts a comment. Keys: `w_true`,
//! `signal`, `snr_db`, `samples`, `runs`, `seed`, `algorithm`, `taps`,
//! `mu1`, `mu_frac`, `nu`, `epsilon`. List-valued keys (`w_true`,
//! `algorithm`, `nu`) take comma-separated entries. Every listed algorithm
//! is instantiated with the same step sizes; fractional algorithms expand
//! over the `nu` list.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context};
use fraclms::{
    Algorithm, FilterConfig, FractionalOrder, SignalKind, SystemSpec, DEFAULT_EPSILON,
};

/// A parsed custom scenario.
pub struct CustomScenario {
    pub name: String,
    pub system: SystemSpec,
    pub filters: Vec<FilterConfig>,
    pub runs: usize,
    pub seed: u64,
}

const KNOWN_KEYS: [&str; 12] = [
    "algorithm", "taps", "mu1", "mu_frac", "nu", "epsilon", "w_true", "signal", "snr_db",
    "samples", "runs", "seed",
];

struct RawConfig {
    // key -> (line number, value)
    entries: BTreeMap<String, (usize, String)>,
}

impl RawConfig {
    fn parse(text: &str) -> anyhow::Result<Self> {
        let mut entries = BTreeMap::new();
        for (index, raw_line) in text.lines().enumerate() {
            let line_no = index + 1;
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {line_no}: expected 'key = value', got '{raw_line}'");
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                bail!("line {line_no}: unknown key '{key}'");
            }
            if let Some((previous, _)) = entries.insert(key.clone(), (line_no, value)) {
                bail!("line {line_no}: key '{key}' already set on line {previous}");
            }
        }
        Ok(Self { entries })
    }

    fn take(&self, key: &str) -> Option<&(usize, String)> {
        self.entries.get(key)
    }

    fn required(&self, key: &str) -> anyhow::Result<&(usize, String)> {
        self.take(key)
            .ok_or_else(|| anyhow!("missing required key '{key}'"))
    }

    fn parse_scalar<T: std::str::FromStr>(&self, key: &str, default: T) -> anyhow::Result<T> {
        match self.take(key) {
            None => Ok(default),
            Some((line, value)) => value
                .parse()
                .map_err(|_| anyhow!("line {line}: invalid value '{value}' for '{key}'")),
        }
    }

    fn parse_list<T: std::str::FromStr>(&self, key: &str) -> anyhow::Result<Option<Vec<T>>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, value)) => value
                .split(',')
                .map(|item| {
                    let item = item.trim();
                    item.parse().map_err(|_| {
                        anyhow!("line {line}: invalid entry '{item}' in list '{key}'")
                    })
                })
                .collect::<anyhow::Result<Vec<T>>>()
                .map(Some),
        }
    }
}

/// Parse a scenario file, applying the documented defaults.
pub fn parse_file(path: &Path) -> anyhow::Result<CustomScenario> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let raw = RawConfig::parse(&text)?;

    let w_true: Vec<f64> = raw
        .parse_list("w_true")?
        .ok_or_else(|| anyhow!("missing required key 'w_true'"))?;
    if let Some((line, value)) = raw.take("taps") {
        let taps: usize = value
            .parse()
            .map_err(|_| anyhow!("line {line}: invalid value '{value}' for 'taps'"))?;
        if taps != w_true.len() {
            bail!(
                "line {line}: taps = {taps} does not match the {} entries of w_true",
                w_true.len()
            );
        }
    }

    let signal_kind = match raw.take("signal") {
        None => SignalKind::RealGaussian,
        Some((line, value)) => match value.as_str() {
            "real" => SignalKind::RealGaussian,
            "complex" => SignalKind::CircularComplexGaussian,
            other => bail!("line {line}: signal must be 'real' or 'complex', got '{other}'"),
        },
    };

    let snr_db = match raw.take("snr_db") {
        None => None,
        Some((line, value)) if value == "none" => {
            let _ = line;
            None
        }
        Some((line, value)) => Some(value.parse::<f64>().map_err(|_| {
            anyhow!("line {line}: invalid value '{value}' for 'snr_db'")
        })?),
    };

    let samples: usize = raw.parse_scalar("samples", fraclms::sim::DEFAULT_SAMPLES)?;
    let runs: usize = raw.parse_scalar("runs", 100)?;
    let seed: u64 = raw.parse_scalar("seed", fraclms::sim::DEFAULT_MASTER_SEED)?;

    let system = SystemSpec::new(
        w_true
            .iter()
            .map(|&v| fraclms::Complex64::new(v, 0.0))
            .collect(),
        signal_kind,
        snr_db,
        samples,
    )?;

    let (algo_line, algo_value) = raw.required("algorithm")?;
    let algorithms: Vec<Algorithm> = algo_value
        .split(',')
        .map(|name| {
            Algorithm::parse(name.trim())
                .map_err(|err| anyhow!("line {algo_line}: {err}"))
        })
        .collect::<anyhow::Result<_>>()?;

    let mu1: f64 = {
        let (line, value) = raw.required("mu1")?;
        value
            .parse()
            .map_err(|_| anyhow!("line {line}: invalid value '{value}' for 'mu1'"))?
    };
    let mu_frac: f64 = raw.parse_scalar("mu_frac", 0.0)?;
    let epsilon: f64 = raw.parse_scalar("epsilon", DEFAULT_EPSILON)?;
    let nu_list: Vec<FractionalOrder> = match raw.parse_list::<f64>("nu")? {
        None => vec![FractionalOrder::ONE],
        Some(values) => values
            .into_iter()
            .map(|v| FractionalOrder::new(v).map_err(Into::into))
            .collect::<anyhow::Result<_>>()?,
    };

    let taps = system.taps();
    let mut filters = Vec::new();
    for algorithm in algorithms {
        if algorithm.is_fractional() {
            for &nu in &nu_list {
                filters.push(
                    FilterConfig::new(algorithm, taps, mu1, mu_frac, nu)?
                        .with_epsilon(epsilon)?,
                );
            }
        } else {
            filters.push(
                FilterConfig::new(algorithm, taps, mu1, 0.0, FractionalOrder::ONE)?
                    .with_epsilon(epsilon)?,
            );
        }
    }

    let name = path
        .file_stem()
        .and_then(|stem| stem.to_str())
        .unwrap_or("custom")
        .to_string();

    Ok(CustomScenario {
        name,
        system,
        filters,
        runs,
        seed,
    })
}
