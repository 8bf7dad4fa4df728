use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::PrecisionContext;

/// Environment variable naming a config file.
pub const CONFIG_ENV: &str = "RAMACF_CONFIG";

/// Defaults for the CLI and the suite grids. Grid entries are parameter
/// expressions, so `"exp(-pi)"` is as valid as `"0.1"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub precision_bits: u32,
    pub guard_bits: u32,
    pub algid: AlgidConfig,
    pub grids: Grids,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlgidConfig {
    pub max_degree: usize,
    /// Floor on the working precision of algebraicity cases.
    pub precision_bits: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grids {
    /// Nomes for the catalog fraction / product comparisons.
    pub cf_nomes: Vec<String>,
    /// Nomes for the quintic modular identities.
    pub modular_nomes: Vec<String>,
    /// First arguments `a` of the H functional equation; `b = π²/a`.
    pub functional_a: Vec<String>,
    pub m_c: Vec<String>,
    pub m_q: Vec<String>,
    pub odd_a: Vec<u64>,
    pub odd_q: Vec<String>,
    /// `r` values for the complementary-moduli check.
    pub moduli_r: Vec<String>,
    /// Steps `x` in `q = e^{−x}` for the series/product comparisons.
    pub series_steps: Vec<String>,
}

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

impl Default for Config {
    fn default() -> Self {
        Self {
            precision_bits: 256,
            guard_bits: PrecisionContext::DEFAULT_GUARD_BITS,
            algid: AlgidConfig::default(),
            grids: Grids::default(),
        }
    }
}

impl Default for AlgidConfig {
    fn default() -> Self {
        Self {
            max_degree: crate::algid::DEFAULT_MAX_DEGREE,
            precision_bits: crate::algid::DEFAULT_SUITE_BITS,
        }
    }
}

impl Default for Grids {
    fn default() -> Self {
        Self {
            cf_nomes: strings(&["0.05", "0.1", "0.3", "exp(-pi)"]),
            modular_nomes: strings(&["0.05", "0.1", "exp(-pi)", "exp(-2*pi)"]),
            functional_a: strings(&["pi", "pi/2", "pi/3"]),
            m_c: strings(&["1/2", "1", "2"]),
            m_q: strings(&["0.1", "0.3", "0.5"]),
            odd_a: vec![1, 3, 5],
            odd_q: strings(&["0.2", "0.4"]),
            moduli_r: strings(&["1", "2", "3", "4"]),
            series_steps: strings(&["0.5", "1", "2*pi"]),
        }
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// The file given explicitly, else the one named by [`CONFIG_ENV`], else
    /// the defaults.
    pub fn load(explicit: Option<&Path>) -> Result<Self> {
        if let Some(p) = explicit {
            return Self::from_file(p);
        }
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::from_file(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    pub fn context(&self, precision_bits: Option<u32>) -> Result<PrecisionContext> {
        PrecisionContext::with_guard(precision_bits.unwrap_or(self.precision_bits), self.guard_bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let c = Config::from_json(r#"{"precision_bits": 320, "algid": {"max_degree": 8}}"#).unwrap();
        assert_eq!(c.precision_bits, 320);
        assert_eq!(c.algid.max_degree, 8);
        assert_eq!(c.algid.precision_bits, 512);
        assert_eq!(c.grids, Grids::default());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(Config::from_json(r#"{"precision": 3}"#), Err(Error::Config(_))));
    }

    #[test]
    fn round_trip() {
        let c = Config::default();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(Config::from_json(&text).unwrap(), c);
    }
}
