use serde::{Deserialize, Serialize};

use super::smoother::{default_x_max, max_epsilon};
use super::AvoidanceError;

/// Constants and sampling parameters of the bidisk-avoidance construction.
///
/// `c` and `delta` are fixed by the construction; `epsilon` defaults to
/// `max_epsilon(c, delta)` and `r` is always `epsilon / 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AvoidanceConfig {
    pub c: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub r: f64,
    pub window: f64,
    /// Seeded interior samples per bidisk, on top of the 9 fixed ones.
    pub samples: usize,
    pub seed: u64,
    /// Absolute quadrature tolerance of the smoother.
    pub tolerance: f64,
    /// Quadrature truncation radius; derived from `tolerance` when absent.
    pub x_max: Option<f64>,
    /// Iteration cap for the Hénon basin map.
    pub nmax: usize,
}

impl Default for AvoidanceConfig {
    fn default() -> Self {
        let c = 32f64.ln();
        let delta = 1.0 / 16.0;
        let epsilon = max_epsilon(c, delta);
        AvoidanceConfig {
            c,
            delta,
            epsilon,
            r: epsilon / 2.0,
            window: 10.0,
            samples: 16,
            seed: 0,
            tolerance: 1e-9,
            x_max: None,
            nmax: 200,
        }
    }
}

impl AvoidanceConfig {
    /// Sets `epsilon` and the dependent `r = epsilon / 2`.
    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self.r = epsilon / 2.0;
        self
    }

    pub fn x_max(&self) -> f64 {
        self.x_max.unwrap_or_else(|| default_x_max(self.c, self.epsilon, self.tolerance))
    }

    /// Every constraint of the construction, checked before any work.
    pub fn validate(&self) -> Result<(), AvoidanceError> {
        let fail = |name: &str, detail: String| Err(AvoidanceError::config(name, detail));
        if (self.c - 32f64.ln()).abs() > 1e-12 {
            return fail("C = log 32", format!("C = {}", self.c));
        }
        if self.delta != 1.0 / 16.0 {
            return fail("delta = 1/16", format!("delta = {}", self.delta));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return fail("0 < epsilon < 1", format!("epsilon = {}", self.epsilon));
        }
        if self.epsilon > self.delta / 2.0 {
            return fail("epsilon <= delta/2", format!("epsilon = {} > {}", self.epsilon, self.delta / 2.0));
        }
        let lhs = 2.0 * self.c * self.epsilon / (std::f64::consts::PI * self.delta);
        if lhs > 1.5f64.ln() * (1.0 + 1e-12) {
            return fail("2 C epsilon / (pi delta) <= log(3/2)", format!("{lhs} > {}", 1.5f64.ln()));
        }
        if self.r != self.epsilon / 2.0 {
            return fail("r = epsilon/2", format!("r = {}, epsilon/2 = {}", self.r, self.epsilon / 2.0));
        }
        if !(self.window > 0.0 && self.window.is_finite()) {
            return fail("window > 0", format!("window = {}", self.window));
        }
        if self.samples == 0 {
            return fail("samples >= 1", "samples = 0".into());
        }
        if !(self.tolerance > 0.0) {
            return fail("tolerance > 0", format!("tolerance = {}", self.tolerance));
        }
        let tail = self.c * self.epsilon / (std::f64::consts::PI * self.x_max());
        if tail > self.tolerance {
            return fail("C eps / (pi X_max) <= tolerance", format!("tail bound {tail} > {}", self.tolerance));
        }
        if self.nmax == 0 {
            return fail("nmax >= 1", "nmax = 0".into());
        }
        Ok(())
    }

    /// Parses a flat `key = value` file (TOML syntax) over the defaults. An
    /// `epsilon` given without `r` also sets `r = epsilon / 2`.
    pub fn from_kv(text: &str) -> Result<Self, AvoidanceError> {
        let table: toml::Table = toml::from_str(text).map_err(|e| AvoidanceError::config("config file", e.to_string()))?;
        let derive_r = table.contains_key("epsilon") && !table.contains_key("r");
        let mut cfg: Self =
            table.try_into().map_err(|e: toml::de::Error| AvoidanceError::config("config file", e.to_string()))?;
        if derive_r {
            cfg.r = cfg.epsilon / 2.0;
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        AvoidanceConfig::default().validate().unwrap();
    }

    #[test]
    fn epsilon_alone_derives_r() {
        let cfg = AvoidanceConfig::from_kv("epsilon = 0.01").unwrap();
        assert_eq!(cfg.r, 0.005);
        cfg.validate().unwrap();
        let cfg = AvoidanceConfig::from_kv("epsilon = 0.01\nr = 0.1").unwrap();
        assert_eq!(cfg.r, 0.1);
        assert!(AvoidanceConfig::from_kv("bogus = 1").is_err());
    }

    #[test]
    fn inflated_r_names_constraint() {
        let mut cfg = AvoidanceConfig::default();
        cfg.r = 10.0 * cfg.epsilon;
        match cfg.validate() {
            Err(AvoidanceError::Config { constraint, .. }) => assert_eq!(constraint, "r = epsilon/2"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn kv_file_overrides() {
        let cfg = AvoidanceConfig::from_kv("window = 4\nseed = 7\n").unwrap();
        assert_eq!(cfg.window, 4.0);
        assert_eq!(cfg.seed, 7);
        assert!(AvoidanceConfig::from_kv("bogus = 1").is_err());
    }
}
