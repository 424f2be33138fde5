//! Run configuration: a flat `key = value` file with `[section]` headers.
//!
//! ```text
//! [system]
//! mass_ratio = 0.1
//! [orbit]
//! ratio = 3
//! ```
//!
//! Keys are unique across sections, so the section header may be omitted;
//! when present it must be the key's own section.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::hillde::{HillOptions, DEFAULT_ECC_COEFF, DEFAULT_QUAD_NODES};
use crate::kernel::{SystemConfig, DEFAULT_PMAX};
use crate::zones::ZoneParams;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("key `{key}`: {message}")]
    Constraint { key: &'static str, message: String },
}

fn syntax(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Syntax { line, message: message.into() }
}

fn constraint(key: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Constraint { key, message: message.into() }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemBlock {
    pub normalized: bool,
    /// `m/M` in normalized units.
    pub mass_ratio: f64,
    pub gamma: f64,
    pub m_primary: f64,
    pub m_perturber: f64,
    pub r: f64,
}

/// Where the probe sits: by semimajor axis or by frequency ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Placement {
    SemimajorAxis(f64),
    Ratio(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitBlock {
    pub placement: Placement,
    pub e: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericBlock {
    pub pmax: usize,
    pub quad_nodes: usize,
    pub c_e: f64,
    pub alpha: f64,
    pub overlap_center_coeff: f64,
    pub overlap_width_coeff: f64,
    pub floquet_tol: f64,
    pub rtbp_tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanBlock {
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub ratio_step: f64,
    pub n_min: u32,
    pub n_max: u32,
    pub e_min: f64,
    pub e_max: f64,
    pub e_step: f64,
    pub n: u32,
    pub b: f64,
    pub periods: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputBlock {
    pub samples: usize,
    pub jacobi_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemBlock,
    pub orbit: OrbitBlock,
    pub numeric: NumericBlock,
    pub scan: ScanBlock,
    pub output: OutputBlock,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            system: SystemBlock {
                normalized: true,
                mass_ratio: 1e-3,
                gamma: 1.0,
                m_primary: 1.0,
                m_perturber: 1e-3,
                r: 1.0,
            },
            orbit: OrbitBlock { placement: Placement::Ratio(3.0), e: 0.0, phi: 0.0 },
            numeric: NumericBlock {
                pmax: DEFAULT_PMAX,
                quad_nodes: DEFAULT_QUAD_NODES,
                c_e: DEFAULT_ECC_COEFF,
                alpha: 0.0,
                overlap_center_coeff: 0.75,
                overlap_width_coeff: 0.375,
                floquet_tol: 1e-12,
                rtbp_tol: 1e-11,
            },
            scan: ScanBlock {
                ratio_min: 1.4,
                ratio_max: 3.2,
                ratio_step: 0.01,
                n_min: 3,
                n_max: 30,
                e_min: 0.0,
                e_max: 0.5,
                e_step: 0.05,
                n: 13,
                b: 0.1,
                periods: 100.0,
            },
            output: OutputBlock { samples: 1000, jacobi_bound: 1e-6 },
        }
    }
}

const SECTIONS: [(&str, &[&str]); 5] = [
    ("system", &["normalized", "mass_ratio", "gamma", "M", "m", "r"]),
    ("orbit", &["a", "ratio", "e", "phi"]),
    (
        "numeric",
        &[
            "pmax",
            "quad_nodes",
            "c_e",
            "alpha",
            "overlap_center_coeff",
            "overlap_width_coeff",
            "floquet_tol",
            "rtbp_tol",
        ],
    ),
    (
        "scan",
        &[
            "ratio_min", "ratio_max", "ratio_step", "n_min", "n_max", "e_min", "e_max", "e_step", "n", "b",
            "periods",
        ],
    ),
    ("output", &["samples", "jacobi_bound"]),
];

fn section_of(key: &str) -> Option<&'static str> {
    SECTIONS.iter().find(|(_, keys)| keys.contains(&key)).map(|(s, _)| *s)
}

fn parse_f64(line: usize, key: &str, v: &str) -> Result<f64, ConfigError> {
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(syntax(line, format!("`{key}` expects a finite number, got `{v}`"))),
    }
}

fn parse_uint<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse::<T>()
        .map_err(|_| syntax(line, format!("`{key}` expects a non-negative integer, got `{v}`")))
}

fn parse_bool(line: usize, key: &str, v: &str) -> Result<bool, ConfigError> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(syntax(line, format!("`{key}` expects true or false, got `{v}`"))),
    }
}

/// Parse and validate a configuration; missing keys take their defaults.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut section: Option<String> = None;
    let mut seen: Vec<&'static str> = Vec::new();
    let (mut a, mut ratio) = (None, None);
    let mut physical_keys = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| syntax(line, "unterminated section header"))?
                .trim();
            if !SECTIONS.iter().any(|(s, _)| *s == name) {
                return Err(syntax(line, format!("unknown section `[{name}]`")));
            }
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| syntax(line, format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let home = section_of(key).ok_or_else(|| syntax(line, format!("unknown key `{key}`")))?;
        if let Some(s) = &section {
            if s != home {
                return Err(syntax(line, format!("key `{key}` belongs in [{home}], not [{s}]")));
            }
        }
        let key: &'static str = SECTIONS
            .iter()
            .flat_map(|(_, keys)| keys.iter())
            .find(|k| **k == key)
            .unwrap();
        if seen.contains(&key) {
            return Err(syntax(line, format!("duplicate key `{key}`")));
        }
        seen.push(key);
        let f = || parse_f64(line, key, value);
        match key {
            "normalized" => cfg.system.normalized = parse_bool(line, key, value)?,
            "mass_ratio" => cfg.system.mass_ratio = f()?,
            "gamma" | "M" | "m" | "r" => {
                physical_keys.push(key);
                let v = f()?;
                match key {
                    "gamma" => cfg.system.gamma = v,
                    "M" => cfg.system.m_primary = v,
                    "m" => cfg.system.m_perturber = v,
                    _ => cfg.system.r = v,
                }
            }
            "a" => a = Some(f()?),
            "ratio" => ratio = Some(f()?),
            "e" => cfg.orbit.e = f()?,
            "phi" => cfg.orbit.phi = f()?,
            "pmax" => cfg.numeric.pmax = parse_uint(line, key, value)?,
            "quad_nodes" => cfg.numeric.quad_nodes = parse_uint(line, key, value)?,
            "c_e" => cfg.numeric.c_e = f()?,
            "alpha" => cfg.numeric.alpha = f()?,
            "overlap_center_coeff" => cfg.numeric.overlap_center_coeff = f()?,
            "overlap_width_coeff" => cfg.numeric.overlap_width_coeff = f()?,
            "floquet_tol" => cfg.numeric.floquet_tol = f()?,
            "rtbp_tol" => cfg.numeric.rtbp_tol = f()?,
            "ratio_min" => cfg.scan.ratio_min = f()?,
            "ratio_max" => cfg.scan.ratio_max = f()?,
            "ratio_step" => cfg.scan.ratio_step = f()?,
            "n_min" => cfg.scan.n_min = parse_uint(line, key, value)?,
            "n_max" => cfg.scan.n_max = parse_uint(line, key, value)?,
            "e_min" => cfg.scan.e_min = f()?,
            "e_max" => cfg.scan.e_max = f()?,
            "e_step" => cfg.scan.e_step = f()?,
            "n" => cfg.scan.n = parse_uint(line, key, value)?,
            "b" => cfg.scan.b = f()?,
            "periods" => cfg.scan.periods = f()?,
            "samples" => cfg.output.samples = parse_uint(line, key, value)?,
            "jacobi_bound" => cfg.output.jacobi_bound = f()?,
            _ => unreachable!("key table and match arms out of sync"),
        }
    }
    cfg.orbit.placement = match (a, ratio) {
        (Some(_), Some(_)) => return Err(constraint("ratio", "give exactly one of `a` and `ratio`")),
        (Some(a), None) => Placement::SemimajorAxis(a),
        (None, Some(r)) => Placement::Ratio(r),
        (None, None) => cfg.orbit.placement,
    };
    if cfg.system.normalized {
        if let Some(k) = physical_keys.first() {
            return Err(constraint(k, "physical system keys require `normalized = false`"));
        }
    } else if seen.contains(&"mass_ratio") {
        return Err(constraint("mass_ratio", "only used with `normalized = true`; set `m` and `M`"));
    }
    cfg.validate()?;
    Ok(cfg)
}

fn positive(key: &'static str, v: f64) -> Result<(), ConfigError> {
    if v > 0.0 {
        Ok(())
    } else {
        Err(constraint(key, format!("must be > 0, got {v}")))
    }
}

fn unit_interval(key: &'static str, v: f64) -> Result<(), ConfigError> {
    if (0.0..1.0).contains(&v) {
        Ok(())
    } else {
        Err(constraint(key, format!("{key} = {v} is outside the bound [0, 1)")))
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let s = &self.system;
        if s.normalized {
            unit_interval("mass_ratio", s.mass_ratio)?;
        } else {
            positive("gamma", s.gamma)?;
            positive("M", s.m_primary)?;
            positive("r", s.r)?;
            if !(0.0..s.m_primary).contains(&s.m_perturber) {
                return Err(constraint("m", format!("must satisfy 0 <= m < M, got {}", s.m_perturber)));
            }
        }
        match self.orbit.placement {
            Placement::SemimajorAxis(a) => {
                positive("a", a)?;
                if a >= self.r_perturber() {
                    return Err(constraint("a", format!("must lie inside the perturber orbit, got {a}")));
                }
            }
            Placement::Ratio(r) => {
                if !(r > 1.0) {
                    return Err(constraint("ratio", format!("must be > 1, got {r}")));
                }
            }
        }
        unit_interval("e", self.orbit.e)?;
        let n = &self.numeric;
        if n.pmax < 2 {
            return Err(constraint("pmax", format!("must be >= 2, got {}", n.pmax)));
        }
        if n.quad_nodes <= 2 * n.pmax {
            return Err(constraint("quad_nodes", format!("must exceed 2 pmax = {}", 2 * n.pmax)));
        }
        positive("floquet_tol", n.floquet_tol)?;
        positive("rtbp_tol", n.rtbp_tol)?;
        let sc = &self.scan;
        positive("ratio_step", sc.ratio_step)?;
        if !(sc.ratio_min > 1.0 && sc.ratio_max > sc.ratio_min) {
            return Err(constraint("ratio_max", "need 1 < ratio_min < ratio_max"));
        }
        if !(sc.n_min >= 3 && sc.n_max >= sc.n_min) {
            return Err(constraint("n_max", "need 3 <= n_min <= n_max"));
        }
        if sc.n < 3 {
            return Err(constraint("n", format!("must be >= 3, got {}", sc.n)));
        }
        positive("e_step", sc.e_step)?;
        unit_interval("e_min", sc.e_min)?;
        unit_interval("e_max", sc.e_max)?;
        if sc.e_max < sc.e_min {
            return Err(constraint("e_max", "must be >= e_min"));
        }
        if sc.b < 0.0 {
            return Err(constraint("b", format!("must be >= 0, got {}", sc.b)));
        }
        positive("periods", sc.periods)?;
        if self.output.samples == 0 {
            return Err(constraint("samples", "must be >= 1"));
        }
        positive("jacobi_bound", self.output.jacobi_bound)?;
        Ok(())
    }

    fn r_perturber(&self) -> f64 {
        if self.system.normalized {
            1.0
        } else {
            self.system.r
        }
    }

    pub fn system_config(&self) -> crate::error::Result<SystemConfig> {
        let s = &self.system;
        if s.normalized {
            SystemConfig::normalized(s.mass_ratio)
        } else {
            SystemConfig::physical(s.gamma, s.m_primary, s.m_perturber, s.r)
        }
    }

    pub fn hill_options(&self) -> HillOptions {
        HillOptions {
            pmax: self.numeric.pmax,
            quad_nodes: self.numeric.quad_nodes,
            ecc_coeff: self.numeric.c_e,
        }
    }

    pub fn zone_params(&self) -> ZoneParams {
        ZoneParams {
            alpha: self.numeric.alpha,
            center_coeff: self.numeric.overlap_center_coeff,
            width_coeff: self.numeric.overlap_width_coeff,
        }
    }

    /// Canonical text form; [`parse_config`] reads it back to an equal value.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (section, pairs) in self.pairs() {
            let _ = writeln!(out, "[{section}]");
            for (k, v) in pairs {
                let _ = writeln!(out, "{k} = {v}");
            }
        }
        out
    }

    /// The canonical form on one line, for CSV provenance comments.
    pub fn one_line(&self) -> String {
        self.pairs()
            .into_iter()
            .flat_map(|(s, pairs)| pairs.into_iter().map(move |(k, v)| format!("{s}.{k}={v}")))
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn pairs(&self) -> Vec<(&'static str, Vec<(&'static str, Value)>)> {
        let s = &self.system;
        let mut system = vec![("normalized", Value::Bool(s.normalized))];
        if s.normalized {
            system.push(("mass_ratio", Value::F(s.mass_ratio)));
        } else {
            system.extend([
                ("gamma", Value::F(s.gamma)),
                ("M", Value::F(s.m_primary)),
                ("m", Value::F(s.m_perturber)),
                ("r", Value::F(s.r)),
            ]);
        }
        let o = &self.orbit;
        let placement = match o.placement {
            Placement::SemimajorAxis(a) => ("a", Value::F(a)),
            Placement::Ratio(r) => ("ratio", Value::F(r)),
        };
        let n = &self.numeric;
        let sc = &self.scan;
        vec![
            ("system", system),
            ("orbit", vec![placement, ("e", Value::F(o.e)), ("phi", Value::F(o.phi))]),
            (
                "numeric",
                vec![
                    ("pmax", Value::U(n.pmax as u64)),
                    ("quad_nodes", Value::U(n.quad_nodes as u64)),
                    ("c_e", Value::F(n.c_e)),
                    ("alpha", Value::F(n.alpha)),
                    ("overlap_center_coeff", Value::F(n.overlap_center_coeff)),
                    ("overlap_width_coeff", Value::F(n.overlap_width_coeff)),
                    ("floquet_tol", Value::F(n.floquet_tol)),
                    ("rtbp_tol", Value::F(n.rtbp_tol)),
                ],
            ),
            (
                "scan",
                vec![
                    ("ratio_min", Value::F(sc.ratio_min)),
                    ("ratio_max", Value::F(sc.ratio_max)),
                    ("ratio_step", Value::F(sc.ratio_step)),
                    ("n_min", Value::U(sc.n_min as u64)),
                    ("n_max", Value::U(sc.n_max as u64)),
                    ("e_min", Value::F(sc.e_min)),
                    ("e_max", Value::F(sc.e_max)),
                    ("e_step", Value::F(sc.e_step)),
                    ("n", Value::U(sc.n as u64)),
                    ("b", Value::F(sc.b)),
                    ("periods", Value::F(sc.periods)),
                ],
            ),
            (
                "output",
                vec![
                    ("samples", Value::U(self.output.samples as u64)),
                    ("jacobi_bound", Value::F(self.output.jacobi_bound)),
                ],
            ),
        ]
    }
}

enum Value {
    F(f64),
    U(u64),
    Bool(bool),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // Debug keeps exponents for tiny or huge values and round-trips exactly
            Value::F(x) => write!(f, "{x:?}"),
            Value::U(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

/// `lo, lo + step, ...` up to `hi`, inclusive when `hi` lies on the lattice.
/// Points are rounded to 12 decimals so that `0.1 + 0.05` prints as `0.15`.
pub fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=count).map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12).collect()
}
