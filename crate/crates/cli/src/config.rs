use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use podwave::pod::{PodMethod, PodOptions, SvdRoute};
use podwave::wave::{TimeGrid, WaveParams};
use thiserror::Error;

/// Environment fallback for `output_dir`.
pub const OUTPUT_DIR_ENV: &str = "PODWAVE_OUTPUT_DIR";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: expected `key = value`")]
    Syntax { path: PathBuf, line: usize },
    #[error("unknown config key {0:?}")]
    UnknownKey(String),
    #[error("bad value {value:?} for {key}: {reason}")]
    BadValue {
        key: String,
        value: String,
        reason: String,
    },
    #[error("{0}")]
    Invalid(String),
}

fn bad(key: &str, value: &str, reason: impl fmt::Display) -> ConfigError {
    ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: reason.to_string(),
    }
}

/// Which damping coefficient a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Viscous,
    KelvinVoigt,
}

impl SweepParam {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepParam::Viscous => "D",
            SweepParam::KelvinVoigt => "G",
        }
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "D" | "d" | "viscous" => Ok(SweepParam::Viscous),
            "G" | "g" | "kelvin_voigt" => Ok(SweepParam::KelvinVoigt),
            other => Err(format!("expected D or G, got {other:?}")),
        }
    }
}

/// Every setting a run can take, with file and command-line overrides applied.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n_elements: usize,
    pub dt: f64,
    pub t_final: f64,
    /// End of the snapshot window; `None` means the whole run.
    pub t_train: Option<f64>,
    pub speed: f64,
    pub viscous: f64,
    pub kelvin_voigt: f64,
    pub methods: Vec<PodMethod>,
    pub r_list: Vec<usize>,
    pub seed: u64,
    /// `None` until resolved against the environment.
    pub output_dir: Option<PathBuf>,
    pub svd_route: SvdRoute,
    pub rank_tol: Option<f64>,
    pub sweep: SweepParam,
    pub sweep_values: Vec<f64>,
    /// `None` means `T·{1, 1/2, 1/10, 1/20}`.
    pub t_train_list: Option<Vec<f64>>,
    /// `None` means `{0, T/2, T}`.
    pub profile_times: Option<Vec<f64>>,
    pub conv_n_elements: usize,
    /// Final time of the convergence study; away from integers so that the
    /// phase error of `sin πx` shows up at `t = T`.
    pub conv_t_final: f64,
    pub conv_dt_list: Vec<f64>,
    /// Keep every `stride`-th state in `trajectory.csv`.
    pub stride: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_elements: 400,
            dt: 1.0 / 800.0,
            t_final: 10.0,
            t_train: None,
            speed: 1.0,
            viscous: 0.0,
            kelvin_voigt: 0.0,
            methods: vec![PodMethod::Standard, PodMethod::Ddq],
            r_list: vec![10, 20, 40, 60],
            seed: 0,
            output_dir: None,
            svd_route: SvdRoute::Direct,
            rank_tol: None,
            sweep: SweepParam::Viscous,
            sweep_values: vec![1e-5, 1e-4, 1e-3, 1e-2, 1e-1],
            t_train_list: None,
            profile_times: None,
            conv_n_elements: 2000,
            conv_t_final: 10.5,
            conv_dt_list: vec![1.0 / 100.0, 1.0 / 200.0, 1.0 / 400.0],
            stride: 8,
        }
    }
}

/// Config keys in the order they are echoed into output headers.
pub const KEYS: [&str; 21] = [
    "n_elements",
    "dt",
    "T",
    "T_train",
    "c",
    "D",
    "G",
    "pod_method",
    "r_list",
    "seed",
    "output_dir",
    "svd_route",
    "rank_tol",
    "sweep",
    "sweep_values",
    "T_train_list",
    "times",
    "conv_n_elements",
    "conv_T",
    "conv_dt_list",
    "stride",
];

/// Reals also accept a quotient such as `1/800`.
fn parse_real(key: &str, value: &str) -> Result<f64, ConfigError> {
    let v = value.trim();
    let x = match v.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|e| bad(key, value, e))?;
            let den: f64 = den.trim().parse().map_err(|e| bad(key, value, e))?;
            num / den
        }
        None => v.parse().map_err(|e| bad(key, value, e))?,
    };
    if !x.is_finite() {
        return Err(bad(key, value, "not a finite number"));
    }
    Ok(x)
}

fn parse_list<T>(
    key: &str,
    value: &str,
    item: impl Fn(&str) -> Result<T, ConfigError>,
) -> Result<Vec<T>, ConfigError> {
    let items = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(item)
        .collect::<Result<Vec<_>, _>>()?;
    if items.is_empty() {
        return Err(bad(key, value, "empty list"));
    }
    Ok(items)
}

fn parse_int<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.trim().parse().map_err(|e| bad(key, value, e))
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Defaults, then `path` if given, then `overrides` in order, then the
    /// environment fallback for `output_dir`; finally validated.
    pub fn load(path: Option<&Path>, overrides: &[(String, String)]) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        if let Some(path) = path {
            cfg.apply_file(path)?;
        }
        for (k, v) in overrides {
            cfg.set(k, v)?;
        }
        if cfg.output_dir.is_none() {
            cfg.output_dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        self.apply_str(&text, path)
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn apply_str(&mut self, text: &str, origin: &Path) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                path: origin.to_path_buf(),
                line: i + 1,
            })?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "n_elements" => self.n_elements = parse_int(key, value)?,
            "dt" => self.dt = parse_real(key, value)?,
            "T" => self.t_final = parse_real(key, value)?,
            "T_train" => {
                self.t_train = match value.trim() {
                    "" | "T" => None,
                    v => Some(parse_real(key, v)?),
                }
            }
            "c" => self.speed = parse_real(key, value)?,
            "D" => self.viscous = parse_real(key, value)?,
            "G" => self.kelvin_voigt = parse_real(key, value)?,
            "pod_method" => {
                self.methods = parse_list(key, value, |s| s.parse().map_err(|e| bad(key, s, e)))?
            }
            "r_list" => self.r_list = parse_list(key, value, |s| parse_int(key, s))?,
            "seed" => self.seed = parse_int(key, value)?,
            "output_dir" => self.output_dir = Some(PathBuf::from(value.trim())),
            "svd_route" => self.svd_route = value.parse().map_err(|e| bad(key, value, e))?,
            "rank_tol" => {
                self.rank_tol = match value.trim() {
                    "" | "auto" => None,
                    v => Some(parse_real(key, v)?),
                }
            }
            "sweep" => self.sweep = value.parse().map_err(|e| bad(key, value, e))?,
            "sweep_values" => self.sweep_values = parse_list(key, value, |s| parse_real(key, s))?,
            "T_train_list" => {
                self.t_train_list = match value.trim() {
                    "" | "auto" => None,
                    v => Some(parse_list(key, v, |s| parse_real(key, s))?),
                }
            }
            "times" => {
                self.profile_times = match value.trim() {
                    "" | "auto" => None,
                    v => Some(parse_list(key, v, |s| parse_real(key, s))?),
                }
            }
            "conv_n_elements" => self.conv_n_elements = parse_int(key, value)?,
            "conv_T" => self.conv_t_final = parse_real(key, value)?,
            "conv_dt_list" => self.conv_dt_list = parse_list(key, value, |s| parse_real(key, s))?,
            "stride" => self.stride = parse_int(key, value)?,
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |msg: String| Err(ConfigError::Invalid(msg));
        if self.n_elements < 2 || self.conv_n_elements < 2 {
            return invalid("meshes need at least 2 elements".into());
        }
        if !(self.speed > 0.0) {
            return invalid(format!("c must be positive, got {}", self.speed));
        }
        if self.viscous < 0.0 || self.kelvin_voigt < 0.0 {
            return invalid("damping coefficients D and G must be non-negative".into());
        }
        if self.sweep_values.iter().any(|v| *v < 0.0) {
            return invalid("sweep_values must be non-negative".into());
        }
        if self.r_list.contains(&0) {
            return invalid("r_list entries must be positive".into());
        }
        if self.stride == 0 {
            return invalid("stride must be positive".into());
        }
        if let Some(tol) = self.rank_tol {
            if !(0.0..1.0).contains(&tol) {
                return invalid(format!("rank_tol must lie in [0, 1), got {tol}"));
            }
        }
        self.grid()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let t_train = self.t_train();
        if t_train > self.t_final * (1.0 + 1e-12) {
            return invalid(format!("T_train = {t_train} exceeds T = {}", self.t_final));
        }
        for t in std::iter::once(t_train).chain(self.t_train_list()) {
            if t > self.t_final * (1.0 + 1e-12) {
                return invalid(format!(
                    "training interval {t} exceeds T = {}",
                    self.t_final
                ));
            }
            self.train_states(t)?;
        }
        for t in &self.profile_times() {
            if *t < 0.0 || *t > self.t_final * (1.0 + 1e-12) {
                return invalid(format!("profile time {t} outside [0, {}]", self.t_final));
            }
        }
        for dt in &self.conv_dt_list {
            TimeGrid::from_step(self.conv_t_final, *dt)
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        Ok(())
    }

    pub fn t_train_list(&self) -> Vec<f64> {
        let t = self.t_final;
        self.t_train_list
            .clone()
            .unwrap_or_else(|| vec![t, t / 2.0, t / 10.0, t / 20.0])
    }

    pub fn profile_times(&self) -> Vec<f64> {
        let t = self.t_final;
        self.profile_times
            .clone()
            .unwrap_or_else(|| vec![0.0, t / 2.0, t])
    }

    pub fn t_train(&self) -> f64 {
        self.t_train.unwrap_or(self.t_final)
    }

    /// Number of snapshot states on `[0, t_train]`; `dt` must divide `t_train`.
    pub fn train_states(&self, t_train: f64) -> Result<usize, ConfigError> {
        let steps = (t_train / self.dt).round();
        if !(t_train > 0.0) || (steps * self.dt - t_train).abs() > 1e-9 * t_train {
            return Err(ConfigError::Invalid(format!(
                "dt = {} does not divide T_train = {t_train} into an integer number of steps",
                self.dt
            )));
        }
        if steps < 2.0 {
            return Err(ConfigError::Invalid(format!(
                "T_train = {t_train} holds fewer than 3 time levels"
            )));
        }
        Ok(steps as usize + 1)
    }

    pub fn grid(&self) -> podwave::Result<TimeGrid> {
        TimeGrid::from_step(self.t_final, self.dt)
    }

    pub fn params(&self) -> podwave::Result<WaveParams> {
        WaveParams::new(self.speed, self.viscous, self.kelvin_voigt)
    }

    /// The configured parameters with the swept coefficient replaced.
    pub fn swept_params(&self, value: f64) -> podwave::Result<WaveParams> {
        match self.sweep {
            SweepParam::Viscous => WaveParams::new(self.speed, value, self.kelvin_voigt),
            SweepParam::KelvinVoigt => WaveParams::new(self.speed, self.viscous, value),
        }
    }

    pub fn pod_options(&self) -> PodOptions {
        PodOptions {
            route: self.svd_route,
            rank_tol: self.rank_tol,
        }
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from("output"))
    }

    pub fn value(&self, key: &str) -> Option<String> {
        let real = |x: f64| format!("{x:?}");
        Some(match key {
            "n_elements" => self.n_elements.to_string(),
            "dt" => real(self.dt),
            "T" => real(self.t_final),
            "T_train" => real(self.t_train()),
            "c" => real(self.speed),
            "D" => real(self.viscous),
            "G" => real(self.kelvin_voigt),
            "pod_method" => join(&self.methods, |m| m.as_str().to_string()),
            "r_list" => join(&self.r_list, usize::to_string),
            "seed" => self.seed.to_string(),
            "output_dir" => self.output_dir().display().to_string(),
            "svd_route" => self.svd_route.as_str().to_string(),
            "rank_tol" => self.rank_tol.map_or("auto".into(), real),
            "sweep" => self.sweep.as_str().to_string(),
            "sweep_values" => join(&self.sweep_values, |x| real(*x)),
            "T_train_list" => join(&self.t_train_list(), |x| real(*x)),
            "times" => join(&self.profile_times(), |x| real(*x)),
            "conv_n_elements" => self.conv_n_elements.to_string(),
            "conv_T" => real(self.conv_t_final),
            "conv_dt_list" => join(&self.conv_dt_list, |x| real(*x)),
            "stride" => self.stride.to_string(),
            _ => return None,
        })
    }

    /// `key = value` lines for every setting, in [`KEYS`] order.
    pub fn render(&self) -> Vec<String> {
        KEYS.iter()
            .map(|k| format!("{k} = {}", self.value(k).unwrap_or_default()))
            .collect()
    }
}
