//! Run configuration: `key = value` files overlaid with command-line flags.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::partial_waves::PhaseKernel;
use crate::potentials::Sign;

use super::CliError;

/// Every key a config file may contain. `tool` and `command` appear in
/// echoed output metadata and are accepted but ignored.
pub const KNOWN_KEYS: &[&str] = &[
    "tool",
    "command",
    "units",
    "hbar",
    "mass",
    "e2",
    "beta",
    "beta_prime",
    "potential",
    "lambda",
    "sign",
    "k",
    "energy",
    "theta_min",
    "theta_max",
    "n_angles",
    "lmax",
    "tail_tol",
    "lambdas",
    "coulomb_mode",
    "kernel",
    "max_iter",
    "sc_tol",
    "inject_phases",
    "format",
    "out",
];

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (number, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| CliError::Config {
            key: format!("line {}", number + 1),
            message: format!("expected `key = value`, got {line:?}"),
        })?;
        let key = key.trim().replace('-', "_");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::Config {
                key,
                message: "unknown configuration key".into(),
            });
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    Reduced,
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialChoice {
    Coulomb,
    Yukawa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoulombMode {
    /// Closed-form deformed Coulomb cross-section.
    ClosedForm,
    /// Screened Yukawa sequence extrapolated to λ = 0.
    Limit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WaveSpec {
    WaveNumber(Vec<f64>),
    Energy(Vec<f64>),
}

macro_rules! keyword_enum {
    ($ty:ty { $($text:literal => $variant:expr),+ $(,)? }) => {
        impl FromStr for $ty {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($text => Ok($variant),)+
                    other => Err(format!(
                        "expected one of {}, got {other:?}",
                        [$($text),+].join(", ")
                    )),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                $(if *self == $variant { return f.write_str($text); })+
                unreachable!()
            }
        }
    };
}

keyword_enum!(Units { "reduced" => Units::Reduced, "explicit" => Units::Explicit });
keyword_enum!(PotentialChoice {
    "coulomb" => PotentialChoice::Coulomb,
    "yukawa" => PotentialChoice::Yukawa,
});
keyword_enum!(CoulombMode {
    "closed-form" => CoulombMode::ClosedForm,
    "limit" => CoulombMode::Limit,
});
keyword_enum!(Format { "csv" => Format::Csv, "json" => Format::Json });

/// A fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub units: Units,
    pub hbar: f64,
    pub mass: f64,
    pub e2: f64,
    pub beta: f64,
    pub beta_prime: f64,
    pub potential: PotentialChoice,
    pub lambda: f64,
    pub sign: Sign,
    pub wave: WaveSpec,
    pub theta_min: f64,
    pub theta_max: f64,
    pub n_angles: usize,
    pub lmax: Option<usize>,
    pub tail_tol: f64,
    pub lambdas: Vec<f64>,
    pub coulomb_mode: CoulombMode,
    pub kernel: PhaseKernel,
    pub max_iter: usize,
    pub sc_tol: f64,
    pub inject_phases: Option<Vec<f64>>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

fn config_error(key: &str, message: impl Into<String>) -> CliError {
    CliError::Config {
        key: key.to_string(),
        message: message.into(),
    }
}

struct Lookup<'a>(&'a BTreeMap<String, String>);

impl Lookup<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn parsed<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: fmt::Display,
    {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|e: T::Err| config_error(key, e.to_string())),
        }
    }

    fn float(&self, key: &str, default: f64) -> Result<f64, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => {
                parse_float(v).ok_or_else(|| config_error(key, format!("not a number: {v:?}")))
            }
        }
    }

    fn floats(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(|item| {
                        parse_float(item.trim())
                            .ok_or_else(|| config_error(key, format!("not a number: {item:?}")))
                    })
                    .collect()
            })
            .transpose()
    }
}

/// Plain floats plus `pi`, `N*pi` and `pi/N`.
fn parse_float(text: &str) -> Option<f64> {
    let t = text.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Some(v);
    }
    if t == "pi" {
        return Some(PI);
    }
    if let Some(div) = t.strip_prefix("pi/") {
        return div.trim().parse::<f64>().ok().map(|d| PI / d);
    }
    if let Some(mul) = t.strip_suffix("*pi") {
        return mul.trim().parse::<f64>().ok().map(|m| m * PI);
    }
    None
}

/// Shortest round-tripping form, e.g. `1e-12` rather than `0.000000000001`.
fn num(v: f64) -> String {
    let s = format!("{v:?}");
    s.strip_suffix(".0").map(str::to_string).unwrap_or(s)
}

fn join(values: &[f64]) -> String {
    values.iter().map(|&v| num(v)).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self, CliError> {
        let get = Lookup(map);
        let units: Units = get.parsed("units", Units::Reduced)?;
        let (hbar, mass) = match units {
            Units::Reduced => {
                for key in ["hbar", "mass"] {
                    if let Some(v) = get.raw(key) {
                        if parse_float(v) != Some(1.0) {
                            return Err(config_error(
                                key,
                                "reduced units fix hbar = mass = 1; set units = explicit",
                            ));
                        }
                    }
                }
                (1.0, 1.0)
            }
            Units::Explicit => (get.float("hbar", 1.0)?, get.float("mass", 1.0)?),
        };

        let wave = match (get.floats("k")?, get.floats("energy")?) {
            (Some(k), None) => WaveSpec::WaveNumber(k),
            (None, Some(e)) => WaveSpec::Energy(e),
            (Some(_), Some(_)) => {
                return Err(config_error("energy", "give exactly one of k or energy"))
            }
            (None, None) => return Err(config_error("k", "give exactly one of k or energy")),
        };

        let lmax = match get.raw("lmax") {
            None => None,
            Some(v) => Some(
                v.parse::<usize>()
                    .map_err(|e| config_error("lmax", e.to_string()))?,
            ),
        };

        let config = Self {
            units,
            hbar,
            mass,
            e2: get.float("e2", 1.0)?,
            beta: get.float("beta", 0.0)?,
            beta_prime: get.float("beta_prime", 0.0)?,
            potential: get.parsed("potential", PotentialChoice::Yukawa)?,
            lambda: get.float("lambda", 1.0)?,
            sign: get.parsed("sign", Sign::Attractive)?,
            wave,
            theta_min: get.float("theta_min", 0.1)?,
            theta_max: get.float("theta_max", PI)?,
            n_angles: get.parsed("n_angles", 32usize)?,
            lmax,
            tail_tol: get.float("tail_tol", 1e-6)?,
            lambdas: get
                .floats("lambdas")?
                .unwrap_or_else(|| vec![0.1, 0.05, 0.025, 0.0125]),
            coulomb_mode: get.parsed("coulomb_mode", CoulombMode::ClosedForm)?,
            kernel: get.parsed("kernel", PhaseKernel::RiccatiBessel)?,
            max_iter: get.parsed("max_iter", 200usize)?,
            sc_tol: get.float("sc_tol", 1e-12)?,
            inject_phases: get.floats("inject_phases")?,
            format: get.parsed("format", Format::Csv)?,
            out: get.raw("out").map(PathBuf::from),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        let positive = |key: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(config_error(key, format!("must be positive, got {v}")))
            }
        };
        let non_negative = |key: &str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(config_error(key, format!("must be non-negative, got {v}")))
            }
        };
        positive("hbar", self.hbar)?;
        positive("mass", self.mass)?;
        non_negative("e2", self.e2)?;
        non_negative("beta", self.beta)?;
        non_negative("beta_prime", self.beta_prime)?;
        positive("lambda", self.lambda)?;
        positive("tail_tol", self.tail_tol)?;
        positive("sc_tol", self.sc_tol)?;
        let (key, values) = match &self.wave {
            WaveSpec::WaveNumber(k) => ("k", k),
            WaveSpec::Energy(e) => ("energy", e),
        };
        if values.is_empty() {
            return Err(config_error(key, "empty list"));
        }
        for &v in values {
            positive(key, v)?;
        }
        for &l in &self.lambdas {
            positive("lambdas", l)?;
        }
        if !(self.theta_min > 0.0 && self.theta_min <= PI) {
            return Err(config_error("theta_min", "angle grid must lie in (0, pi]"));
        }
        if !(self.theta_max > 0.0 && self.theta_max <= PI) {
            return Err(config_error("theta_max", "angle grid must lie in (0, pi]"));
        }
        if self.theta_max < self.theta_min {
            return Err(config_error("theta_max", "theta_max is below theta_min"));
        }
        if self.n_angles == 0 {
            return Err(config_error("n_angles", "need at least one angle"));
        }
        if self.max_iter == 0 {
            return Err(config_error("max_iter", "must be at least 1"));
        }
        Ok(())
    }

    /// Angles in ascending order.
    pub fn angles(&self) -> Vec<f64> {
        if self.n_angles == 1 {
            return vec![self.theta_min];
        }
        let step = (self.theta_max - self.theta_min) / (self.n_angles - 1) as f64;
        (0..self.n_angles)
            .map(|i| {
                if i == self.n_angles - 1 {
                    self.theta_max
                } else {
                    self.theta_min + step * i as f64
                }
            })
            .collect()
    }

    /// The configuration as canonical `key = value` pairs; feeding them back
    /// through [`RunConfig::from_map`] reproduces `self`.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = Vec::new();
        let mut push = |k: &str, v: String| out.push((k.to_string(), v));
        push("units", self.units.to_string());
        if self.units == Units::Explicit {
            push("hbar", num(self.hbar));
            push("mass", num(self.mass));
        }
        push("e2", num(self.e2));
        push("beta", num(self.beta));
        push("beta_prime", num(self.beta_prime));
        push("potential", self.potential.to_string());
        push("lambda", num(self.lambda));
        push("sign", self.sign.to_string());
        match &self.wave {
            WaveSpec::WaveNumber(k) => push("k", join(k)),
            WaveSpec::Energy(e) => push("energy", join(e)),
        }
        push("theta_min", num(self.theta_min));
        push("theta_max", num(self.theta_max));
        push("n_angles", self.n_angles.to_string());
        if let Some(l) = self.lmax {
            push("lmax", l.to_string());
        }
        push("tail_tol", num(self.tail_tol));
        push("lambdas", join(&self.lambdas));
        push("coulomb_mode", self.coulomb_mode.to_string());
        push("kernel", self.kernel.to_string());
        push("max_iter", self.max_iter.to_string());
        push("sc_tol", num(self.sc_tol));
        if let Some(p) = &self.inject_phases {
            push("inject_phases", join(p));
        }
        push("format", self.format.to_string());
        if let Some(path) = &self.out {
            push("out", path.display().to_string());
        }
        out
    }
}
