//! Run configuration: defaults, a flat `key=value` file, `HARDYLOG_*`
//! environment overrides and command-line flags, applied in that order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::grid::{make_grid, Grid1D, HeightLadder};
use crate::library::{BMOA_FAMILY, H1_FAMILY};

/// Prefix of environment overrides, e.g. `HARDYLOG_GRID_N=2048`.
pub const ENV_PREFIX: &str = "HARDYLOG_";

/// Keys accepted in config files and, upper-cased, in the environment.
pub const KEYS: &[&str] = &[
    "grid_L",
    "grid_n",
    "y_min",
    "y_max",
    "levels",
    "seed",
    "out",
    "trials",
    "mixtures",
    "f_family",
    "g_family",
    "residual_tol",
    "input",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid_l: f64,
    pub grid_n: usize,
    pub y_min: f64,
    pub y_max: f64,
    pub levels: usize,
    pub seed: u64,
    pub out: PathBuf,
    /// Seeded trials of the Hankel study.
    pub trials: usize,
    /// Randomized BMO mixtures in the Poisson-growth sweep.
    pub mixtures: usize,
    /// `H¹` members of the product sweep.
    pub f_family: Vec<String>,
    /// Bounded BMOA members of the product sweep.
    pub g_family: Vec<String>,
    /// Largest accepted factorization residual.
    pub residual_tol: f64,
    /// Input of `norm`, `factorize` and `hankel`: `function:<name>`,
    /// `field:<name>` or a path to a columnar file.
    pub input: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid_l: 64.0,
            grid_n: 4096,
            y_min: 1e-3,
            y_max: 1e3,
            levels: 48,
            seed: 0,
            out: PathBuf::from("out"),
            trials: 50,
            mixtures: 5,
            f_family: H1_FAMILY.iter().map(|s| s.to_string()).collect(),
            g_family: BMOA_FAMILY.iter().map(|s| s.to_string()).collect(),
            residual_tol: 1e-10,
            input: String::new(),
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad value `{value}` for `{key}`")))
}

fn parse_list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

impl RunConfig {
    /// Sets one key. Keys are matched case-insensitively.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.to_ascii_lowercase().as_str() {
            "grid_l" => self.grid_l = parse_num(key, value)?,
            "grid_n" => self.grid_n = parse_num(key, value)?,
            "y_min" => self.y_min = parse_num(key, value)?,
            "y_max" => self.y_max = parse_num(key, value)?,
            "levels" => self.levels = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "out" => self.out = PathBuf::from(value.trim()),
            "trials" => self.trials = parse_num(key, value)?,
            "mixtures" => self.mixtures = parse_num(key, value)?,
            "f_family" => self.f_family = parse_list(value),
            "g_family" => self.g_family = parse_list(value),
            "residual_tol" => self.residual_tol = parse_num(key, value)?,
            "input" => self.input = value.trim().to_string(),
            _ => return Err(Error::Parse(format!("unknown config key `{key}` (known: {})", KEYS.join(", ")))),
        }
        Ok(())
    }

    /// Applies a flat `key=value` file. Blank lines and `#` comments are
    /// skipped.
    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {} is not `key=value`", i + 1)))?;
            self.set(k.trim(), v)?;
        }
        Ok(())
    }

    /// Applies `HARDYLOG_<KEY>` variables from `vars`.
    pub fn apply_env(&mut self, vars: impl IntoIterator<Item = (String, String)>) -> Result<()> {
        let wanted: BTreeMap<String, &str> = KEYS.iter().map(|k| (k.to_ascii_uppercase(), *k)).collect();
        let mut found: Vec<(String, String)> = vars
            .into_iter()
            .filter_map(|(k, v)| {
                let key = k.strip_prefix(ENV_PREFIX)?;
                wanted.get(key).map(|name| (name.to_string(), v))
            })
            .collect();
        found.sort();
        for (k, v) in found {
            self.set(&k, &v)?;
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid1D> {
        make_grid(self.grid_l, self.grid_n)
    }

    pub fn ladder(&self) -> Result<HeightLadder> {
        HeightLadder::log_spaced(self.y_min, self.y_max, self.levels)
    }

    /// Checks the grid, the ladder and the tolerances.
    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        self.ladder()?;
        if !(self.residual_tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "residual_tol must be positive, got {}",
                self.residual_tol
            )));
        }
        Ok(())
    }

    /// Canonical `key=value` text of every setting that affects results.
    /// The output directory is left out.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "grid_L={:?}", self.grid_l);
        let _ = writeln!(s, "grid_n={}", self.grid_n);
        let _ = writeln!(s, "y_min={:?}", self.y_min);
        let _ = writeln!(s, "y_max={:?}", self.y_max);
        let _ = writeln!(s, "levels={}", self.levels);
        let _ = writeln!(s, "seed={}", self.seed);
        let _ = writeln!(s, "trials={}", self.trials);
        let _ = writeln!(s, "mixtures={}", self.mixtures);
        let _ = writeln!(s, "f_family={}", self.f_family.join(","));
        let _ = writeln!(s, "g_family={}", self.g_family.join(","));
        let _ = writeln!(s, "residual_tol={:?}", self.residual_tol);
        let _ = writeln!(s, "input={}", self.input);
        s
    }

    /// SHA-256 of [`RunConfig::canonical`], hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layers_apply_in_order() {
        let mut c = RunConfig::default();
        c.apply_file_text("# rig\ngrid_L = 32\ngrid_n=1024\nseed=3 # trailing\n").unwrap();
        c.apply_env([
            ("HARDYLOG_GRID_N".to_string(), "2048".to_string()),
            ("HOME".to_string(), "/root".to_string()),
        ])
        .unwrap();
        assert_eq!((c.grid_l, c.grid_n, c.seed), (32.0, 2048, 3));
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        let mut c = RunConfig::default();
        assert!(matches!(c.apply_file_text("grid_n"), Err(Error::Parse(_))));
        assert!(matches!(c.set("grid_n", "many"), Err(Error::Parse(_))));
        assert!(matches!(c.set("colour", "red"), Err(Error::Parse(_))));
        c.set("grid_n", "1000").unwrap();
        assert!(c.validate().is_err());
    }

    #[test]
    fn hash_ignores_output_directory() {
        let a = RunConfig::default();
        let mut b = a.clone();
        b.out = PathBuf::from("/elsewhere");
        assert_eq!(a.hash(), b.hash());
        b.seed = 1;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn empty_family_list() {
        let mut c = RunConfig::default();
        c.set("f_family", "").unwrap();
        assert!(c.f_family.is_empty());
        c.set("g_family", "one, expiz").unwrap();
        assert_eq!(c.g_family, vec!["one", "expiz"]);
    }
}
