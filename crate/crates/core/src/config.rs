//! Run configuration and its plain-text `key = value` format.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Time-stepping method.
///
/// Both share the implicit momentum update. `D` pairs it with a centred
/// leapfrog mass update, `E` with a two-step Lax-Wendroff mass update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    D,
    E,
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "D" | "d" => Ok(Scheme::D),
            "E" | "e" => Ok(Scheme::E),
            other => Err(Error::InvalidConfig(format!(
                "scheme must be D or E, got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::D => "D",
            Scheme::E => "E",
        })
    }
}

/// How the n-1 time level is produced before the first leapfrog step.
///
/// Copying the initial condition makes the first step twice too long in
/// `u`, an O(dt) error that caps convergence at first order once the
/// initial profile is smooth enough for the spatial error to be small.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Bootstrap {
    /// The previous level is a copy of the initial condition.
    Copy,
    /// The first step is a forward-Euler step over a single `dt`.
    #[default]
    ForwardEuler,
}

impl FromStr for Bootstrap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "copy" => Ok(Bootstrap::Copy),
            "euler" => Ok(Bootstrap::ForwardEuler),
            other => Err(Error::InvalidConfig(format!(
                "bootstrap must be copy or euler, got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Bootstrap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bootstrap::Copy => "copy",
            Bootstrap::ForwardEuler => "euler",
        })
    }
}

/// Which discretisation of the momentum equation the implicit update uses.
///
/// `Consistent` carries the depth gradient `h_x` in the three terms where the
/// expanded momentum equation has it (`h^2 h_x u_xt`, `h^2 h_x u_x^2`,
/// `h^2 h_x u u_xx`). `Literal` drops that factor, which is not consistent
/// with the Serre equations; it is kept only for comparison runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MomentumForm {
    #[default]
    Consistent,
    Literal,
}

/// All physical and numerical parameters of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Depth on the right (downstream), m.
    pub h0: f64,
    /// Depth on the left (upstream), m.
    pub h1: f64,
    /// Centre of the tanh transition, m.
    pub x0: f64,
    /// Smoothing length, m.
    pub alpha: f64,
    pub domain_a: f64,
    pub domain_b: f64,
    pub dx: f64,
    /// `dt = dt_factor * dx`.
    pub dt_factor: f64,
    pub t_end: f64,
    pub g: f64,
    pub scheme: Scheme,
    pub bootstrap: Bootstrap,
    pub momentum_form: MomentumForm,
    pub out_dir: Option<PathBuf>,
    /// Times (s) at which snapshots are written. The final time is always written.
    pub snapshot_times: Vec<f64>,
}

pub const STANDARD_GRAVITY: f64 = 9.81;

/// Grid spacing of refinement level `k`: `10 / 2^k` metres.
pub fn dx_for_level(k: u32) -> f64 {
    10.0 / f64::from(1u32 << k)
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            h0: 1.0,
            h1: 1.8,
            x0: 500.0,
            alpha: 2.0,
            domain_a: 0.0,
            domain_b: 1000.0,
            dx: dx_for_level(6),
            dt_factor: 0.01,
            t_end: 30.0,
            g: STANDARD_GRAVITY,
            scheme: Scheme::D,
            bootstrap: Bootstrap::ForwardEuler,
            momentum_form: MomentumForm::Consistent,
            out_dir: None,
            snapshot_times: Vec::new(),
        }
    }
}

const KEYS: [&str; 14] = [
    "h0",
    "h1",
    "x0",
    "alpha",
    "domain_a",
    "domain_b",
    "dx",
    "dt_factor",
    "t_end",
    "g",
    "scheme",
    "out_dir",
    "snapshot_times",
    "bootstrap",
];

// Keys that may be left out of a config file.
const OPTIONAL_KEYS: [&str; 3] = ["out_dir", "snapshot_times", "bootstrap"];

impl SimConfig {
    /// The smoothed dam-break family: h0 = 1, h1 = 1.8, x0 = 500 on [0, 1000]
    /// with `dx = 10 / 2^k`.
    pub fn dambreak(alpha: f64, level: u32) -> Self {
        SimConfig {
            alpha,
            dx: dx_for_level(level),
            ..SimConfig::default()
        }
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_t_end(mut self, t_end: f64) -> Self {
        self.t_end = t_end;
        self
    }

    pub fn with_domain(mut self, a: f64, b: f64) -> Self {
        self.domain_a = a;
        self.domain_b = b;
        self
    }

    pub fn dt(&self) -> f64 {
        self.dt_factor * self.dx
    }

    pub fn domain_length(&self) -> f64 {
        self.domain_b - self.domain_a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.domain_a + self.domain_b)
    }

    /// Number of cells tiling the domain. The length must be a whole multiple
    /// of `dx` (to 1e-9 relative).
    pub fn n_cells(&self) -> Result<usize> {
        let ratio = self.domain_length() / self.dx;
        let n = ratio.round();
        if n < 1.0 || ((ratio - n) / n).abs() > 1e-9 {
            return Err(Error::InvalidConfig(format!(
                "domain length {} is not a whole number of cells of width {}",
                self.domain_length(),
                self.dx
            )));
        }
        Ok(n as usize)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("h0", self.h0),
            ("h1", self.h1),
            ("alpha", self.alpha),
            ("dx", self.dx),
            ("dt_factor", self.dt_factor),
            ("g", self.g),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(self.domain_a < self.domain_b) {
            return Err(Error::InvalidConfig(format!(
                "domain_a ({}) must be less than domain_b ({})",
                self.domain_a, self.domain_b
            )));
        }
        if !(self.x0 > self.domain_a && self.x0 < self.domain_b) {
            return Err(Error::InvalidConfig(format!(
                "x0 = {} lies outside ({}, {})",
                self.x0, self.domain_a, self.domain_b
            )));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "t_end must be non-negative, got {}",
                self.t_end
            )));
        }
        if let Some(t) = self.snapshot_times.iter().find(|t| !(**t >= 0.0)) {
            return Err(Error::InvalidConfig(format!(
                "snapshot time {t} is negative"
            )));
        }
        self.n_cells()?;
        Ok(())
    }

    /// Parse the `key = value` format. Blank lines and `#` comments are
    /// ignored; unknown or repeated keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_inner(text, true)
    }

    /// Like [`SimConfig::parse`], but keys that are absent keep their
    /// default values.
    pub fn parse_with_defaults(text: &str) -> Result<Self> {
        Self::parse_inner(text, false)
    }

    fn parse_inner(text: &str, require_all: bool) -> Result<Self> {
        let mut cfg = SimConfig::default();
        let mut seen: Vec<&str> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::BadValue {
                key: line.to_string(),
                value: String::new(),
                line: line_no,
            })?;
            let key = key.trim();
            let value = value.trim();
            let Some(&known) = KEYS.iter().find(|k| **k == key) else {
                return Err(Error::UnknownKey {
                    key: key.to_string(),
                    line: line_no,
                });
            };
            if seen.contains(&known) {
                return Err(Error::InvalidConfig(format!(
                    "key `{key}` repeated on line {line_no}"
                )));
            }
            seen.push(known);

            let bad = || Error::BadValue {
                key: key.to_string(),
                value: value.to_string(),
                line: line_no,
            };
            let num = || value.parse::<f64>().map_err(|_| bad());
            match known {
                "h0" => cfg.h0 = num()?,
                "h1" => cfg.h1 = num()?,
                "x0" => cfg.x0 = num()?,
                "alpha" => cfg.alpha = num()?,
                "domain_a" => cfg.domain_a = num()?,
                "domain_b" => cfg.domain_b = num()?,
                "dx" => cfg.dx = parse_dx(value).ok_or_else(bad)?,
                "dt_factor" => cfg.dt_factor = num()?,
                "t_end" => cfg.t_end = num()?,
                "g" => cfg.g = num()?,
                "scheme" => cfg.scheme = value.parse().map_err(|_| bad())?,
                "out_dir" => cfg.out_dir = Some(PathBuf::from(value)),
                "snapshot_times" => {
                    cfg.snapshot_times = parse_list(value).ok_or_else(bad)?;
                }
                "bootstrap" => cfg.bootstrap = value.parse().map_err(|_| bad())?,
                _ => unreachable!(),
            }
        }

        if let Some(missing) = KEYS
            .iter()
            .find(|k| require_all && !OPTIONAL_KEYS.contains(k) && !seen.contains(k))
        {
            return Err(Error::MissingKey(missing.to_string()));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Render in the file format accepted by [`SimConfig::parse`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        put("h0", fmt_f64(self.h0));
        put("h1", fmt_f64(self.h1));
        put("x0", fmt_f64(self.x0));
        put("alpha", fmt_f64(self.alpha));
        put("domain_a", fmt_f64(self.domain_a));
        put("domain_b", fmt_f64(self.domain_b));
        put("dx", fmt_f64(self.dx));
        put("dt_factor", fmt_f64(self.dt_factor));
        put("t_end", fmt_f64(self.t_end));
        put("g", fmt_f64(self.g));
        put("scheme", self.scheme.to_string());
        put("bootstrap", self.bootstrap.to_string());
        if let Some(dir) = &self.out_dir {
            put("out_dir", dir.display().to_string());
        }
        if !self.snapshot_times.is_empty() {
            let list: Vec<String> = self.snapshot_times.iter().map(|t| fmt_f64(*t)).collect();
            put("snapshot_times", list.join(","));
        }
        s
    }
}

/// Shortest representation that parses back to the same bits.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

/// Accepts a plain number or the `10/2^k` shorthand.
fn parse_dx(value: &str) -> Option<f64> {
    if let Ok(v) = value.parse::<f64>() {
        return Some(v);
    }
    let (num, den) = value.split_once('/')?;
    let num: f64 = num.trim().parse().ok()?;
    let den = den.trim();
    let den = match den.split_once('^') {
        Some((base, exp)) => {
            let base: f64 = base.trim().parse().ok()?;
            let exp: i32 = exp.trim().parse().ok()?;
            base.powi(exp)
        }
        None => den.parse().ok()?,
    };
    Some(num / den)
}

pub(crate) fn parse_list(value: &str) -> Option<Vec<f64>> {
    if value.trim().is_empty() {
        return Some(Vec::new());
    }
    value
        .split(',')
        .map(|t| t.trim().parse::<f64>().ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# alpha = 2 dam break
h0 = 1
h1 = 1.8
x0 = 500
alpha = 2
domain_a = 0
domain_b = 1000
dx = 10/2^6
dt_factor = 0.01
t_end = 30
g = 9.81
scheme = E
snapshot_times = 3, 10
";

    #[test]
    fn parses_sample() {
        let cfg = SimConfig::parse(SAMPLE).unwrap();
        assert_eq!(cfg.dx, 10.0 / 64.0);
        assert_eq!(cfg.scheme, Scheme::E);
        assert_eq!(cfg.snapshot_times, vec![3.0, 10.0]);
        assert_eq!(cfg.n_cells().unwrap(), 6400);
        assert!(cfg.out_dir.is_none());
    }

    #[test]
    fn missing_key_is_named() {
        let text = SAMPLE.replace("g = 9.81\n", "");
        match SimConfig::parse(&text) {
            Err(Error::MissingKey(k)) => assert_eq!(k, "g"),
            other => panic!("expected missing key, got {other:?}"),
        }
    }

    #[test]
    fn unknown_key_rejected() {
        let text = format!("{SAMPLE}gravity = 9.8\n");
        let r = SimConfig::parse(&text);
        assert!(matches!(r, Err(Error::UnknownKey { line: 14, .. })), "{r:?}");
    }

    #[test]
    fn invariants_enforced() {
        let text = SAMPLE.replace("x0 = 500", "x0 = 1000");
        assert!(matches!(
            SimConfig::parse(&text),
            Err(Error::InvalidConfig(_))
        ));
        let text = SAMPLE.replace("alpha = 2", "alpha = 0");
        assert!(SimConfig::parse(&text).is_err());
        let text = SAMPLE.replace("dx = 10/2^6", "dx = 0.3");
        assert!(SimConfig::parse(&text).is_err());
    }

    #[test]
    fn text_round_trip() {
        let mut cfg = SimConfig::parse(SAMPLE).unwrap();
        assert_eq!(cfg.bootstrap, Bootstrap::ForwardEuler);
        cfg.out_dir = Some(PathBuf::from("out/run"));
        cfg.bootstrap = Bootstrap::Copy;
        assert_eq!(SimConfig::parse(&cfg.to_text()).unwrap(), cfg);
    }
}
