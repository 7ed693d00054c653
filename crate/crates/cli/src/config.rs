//! Run configuration: flat `key = value` text with `#` comments.
//!
//! Precedence, lowest first: built-in defaults, the config file, `ADSPEC_<KEY>`
//! environment variables, command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use adspec_core::gaps::{DEFAULT_GRID_STEP, DEFAULT_ISOLINE_LEVELS, DEFAULT_TOL};
use adspec_core::sat::DEFAULT_MAX_TRIES;
use adspec_core::spectral::{CORE_FRACTION, DEFAULT_BIN_WIDTH, DEFAULT_S_MAX};
use adspec_core::{MAX_DENSE_QUBITS, MAX_ENUM_VARS};

use crate::error::PipelineError;

pub const ENV_PREFIX: &str = "ADSPEC_";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Generate,
    Spectrum,
    Stats,
    Entangle,
    Gaps,
    Flow,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Self::Generate,
        Self::Spectrum,
        Self::Stats,
        Self::Entangle,
        Self::Gaps,
        Self::Flow,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Generate => "generate",
            Self::Spectrum => "spectrum",
            Self::Stats => "stats",
            Self::Entangle => "entangle",
            Self::Gaps => "gaps",
            Self::Flow => "flow",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command {s:?}"))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Times either as `start:stop:points` (inclusive, evenly spaced) or an
/// explicit comma list.
#[derive(Debug, Clone, PartialEq)]
pub enum TGrid {
    Range {
        start: f64,
        stop: f64,
        points: usize,
    },
    List(Vec<f64>),
}

impl TGrid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Self::Range {
                start,
                stop,
                points,
            } => {
                if *points == 1 {
                    return vec![*start];
                }
                let step = (stop - start) / (*points - 1) as f64;
                (0..*points)
                    .map(|i| {
                        if i + 1 == *points {
                            *stop
                        } else {
                            start + i as f64 * step
                        }
                    })
                    .collect()
            }
            Self::List(v) => v.clone(),
        }
    }
}

impl FromStr for TGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        match parts.as_slice() {
            [a, b, c] => {
                let start = a.parse().map_err(|_| format!("bad start {a:?}"))?;
                let stop = b.parse().map_err(|_| format!("bad stop {b:?}"))?;
                let points: usize = c.parse().map_err(|_| format!("bad point count {c:?}"))?;
                if points == 0 || !(start <= stop) {
                    return Err(format!("empty range {s:?}"));
                }
                Ok(Self::Range {
                    start,
                    stop,
                    points,
                })
            }
            [_] => parse_list(s).map(Self::List),
            _ => Err(format!(
                "expected start:stop:points or a comma list, got {s:?}"
            )),
        }
    }
}

impl fmt::Display for TGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Range {
                start,
                stop,
                points,
            } => write!(f, "{start}:{stop}:{points}"),
            Self::List(v) => f.write_str(&join(v)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowSpec {
    Core,
    Low,
    Both,
}

impl FromStr for WindowSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "core" => Ok(Self::Core),
            "low" => Ok(Self::Low),
            "both" => Ok(Self::Both),
            _ => Err(format!("expected core, low or both, got {s:?}")),
        }
    }
}

impl fmt::Display for WindowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Core => "core",
            Self::Low => "low",
            Self::Both => "both",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Variable counts; single-instance commands need exactly one.
    pub n: Vec<usize>,
    /// Clause densities; single-instance commands need exactly one.
    pub alpha: Vec<f64>,
    pub count: usize,
    pub seed: u64,
    pub max_tries: u64,
    /// Read this DIMACS file instead of generating from `(n, alpha, seed)`.
    pub instance: Option<PathBuf>,
    pub t_grid: TGrid,
    /// Single time for `stats`.
    pub t: f64,
    pub window: WindowSpec,
    pub core_fraction: f64,
    pub bin_width: f64,
    pub s_max: f64,
    pub grid_step: f64,
    pub tol: f64,
    pub levels: Vec<f64>,
    pub out: PathBuf,
    pub jobs: usize,
}

impl RunConfig {
    pub fn defaults(command: Command) -> Self {
        Self {
            command,
            n: vec![10],
            alpha: vec![3.0],
            count: 1,
            seed: 1,
            max_tries: DEFAULT_MAX_TRIES,
            instance: None,
            t_grid: TGrid::Range {
                start: 0.02,
                stop: 0.98,
                points: 49,
            },
            t: 0.5,
            window: WindowSpec::Both,
            core_fraction: CORE_FRACTION,
            bin_width: DEFAULT_BIN_WIDTH,
            s_max: DEFAULT_S_MAX,
            grid_step: DEFAULT_GRID_STEP,
            tol: DEFAULT_TOL,
            levels: DEFAULT_ISOLINE_LEVELS.to_vec(),
            out: PathBuf::from("out"),
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), PipelineError> {
        let bad = |msg: String| PipelineError::Config {
            key: key.to_string(),
            msg,
        };
        fn num<T: FromStr>(v: &str) -> Result<T, String> {
            v.trim().parse().map_err(|_| format!("cannot parse {v:?}"))
        }
        let v = value.trim();
        match key {
            "command" => {
                let c: Command = v.parse().map_err(bad)?;
                if c != self.command {
                    return Err(bad(format!(
                        "config is for {c:?} but running {}",
                        self.command
                    )));
                }
            }
            "n" => self.n = parse_list(v).map_err(bad)?,
            "alpha" => self.alpha = parse_list(v).map_err(bad)?,
            "count" => self.count = num(v).map_err(bad)?,
            "seed" => self.seed = num(v).map_err(bad)?,
            "max_tries" => self.max_tries = num(v).map_err(bad)?,
            "instance" => self.instance = (!v.is_empty()).then(|| PathBuf::from(v)),
            "t_grid" => self.t_grid = v.parse().map_err(bad)?,
            "t" => self.t = num(v).map_err(bad)?,
            "window" => self.window = v.parse().map_err(bad)?,
            "core_fraction" => self.core_fraction = num(v).map_err(bad)?,
            "bin_width" => self.bin_width = num(v).map_err(bad)?,
            "s_max" => self.s_max = num(v).map_err(bad)?,
            "grid_step" => self.grid_step = num(v).map_err(bad)?,
            "tol" => self.tol = num(v).map_err(bad)?,
            "levels" => self.levels = parse_list(v).map_err(bad)?,
            "out" => self.out = PathBuf::from(v),
            "jobs" => self.jobs = num(v).map_err(bad)?,
            _ => return Err(bad("unknown key".into())),
        }
        Ok(())
    }

    /// Applies a config file's `key = value` lines.
    pub fn apply_text(&mut self, text: &str) -> Result<(), PipelineError> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| PipelineError::Config {
                key: format!("line {}", idx + 1),
                msg: format!("expected key = value, got {line:?}"),
            })?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    /// Applies `ADSPEC_<KEY>` overrides from `vars`.
    pub fn apply_env<I: IntoIterator<Item = (String, String)>>(
        &mut self,
        vars: I,
    ) -> Result<(), PipelineError> {
        let mut found: BTreeMap<String, String> = BTreeMap::new();
        for (k, v) in vars {
            if let Some(rest) = k.strip_prefix(ENV_PREFIX) {
                found.insert(rest.to_ascii_lowercase(), v);
            }
        }
        for (k, v) in found {
            self.set(&k, &v)?;
        }
        Ok(())
    }

    pub fn parse(command: Command, text: &str) -> Result<Self, PipelineError> {
        let mut c = Self::defaults(command);
        c.apply_text(text)?;
        Ok(c)
    }

    /// Canonical text form. `parse(to_text())` reproduces the config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.entries(true) {
            s.push_str(&format!("{k} = {v}\n"));
        }
        s
    }

    /// `(key, value)` pairs; `with_execution` adds `out` and `jobs`, which
    /// do not influence results.
    pub fn entries(&self, with_execution: bool) -> Vec<(&'static str, String)> {
        let mut e = vec![
            ("command", self.command.to_string()),
            ("n", join(&self.n)),
            ("alpha", join(&self.alpha)),
            ("count", self.count.to_string()),
            ("seed", self.seed.to_string()),
            ("max_tries", self.max_tries.to_string()),
            (
                "instance",
                self.instance
                    .as_ref()
                    .map_or(String::new(), |p| p.display().to_string()),
            ),
            ("t_grid", self.t_grid.to_string()),
            ("t", self.t.to_string()),
            ("window", self.window.to_string()),
            ("core_fraction", self.core_fraction.to_string()),
            ("bin_width", self.bin_width.to_string()),
            ("s_max", self.s_max.to_string()),
            ("grid_step", self.grid_step.to_string()),
            ("tol", self.tol.to_string()),
            ("levels", join(&self.levels)),
        ];
        if with_execution {
            e.push(("out", self.out.display().to_string()));
            e.push(("jobs", self.jobs.to_string()));
        }
        e
    }

    /// Checks every field against the limits of the library.
    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |key: &str, msg: String| {
            Err(PipelineError::Config {
                key: key.into(),
                msg,
            })
        };
        if self.n.is_empty() {
            return bad("n", "at least one value required".into());
        }
        let cap = match self.command {
            Command::Generate | Command::Gaps => MAX_ENUM_VARS,
            _ => MAX_DENSE_QUBITS,
        };
        if let Some(n) = self.n.iter().find(|&&n| !(3..=cap).contains(&n)) {
            return bad("n", format!("{n} outside [3, {cap}] for {}", self.command));
        }
        if self.alpha.is_empty() || self.alpha.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return bad("alpha", "values must be positive".into());
        }
        let single = !matches!(self.command, Command::Gaps);
        if single && (self.n.len() != 1 || self.alpha.len() != 1) {
            return bad("n", format!("{} takes a single n and alpha", self.command));
        }
        if self.count == 0 {
            return bad("count", "must be at least 1".into());
        }
        if self.command == Command::Gaps && self.count < 2 {
            return bad("count", "gap statistics need at least 2 instances".into());
        }
        if self.max_tries == 0 {
            return bad("max_tries", "must be at least 1".into());
        }
        if self.jobs == 0 {
            return bad("jobs", "must be at least 1".into());
        }
        let times = self.t_grid.values();
        // Flow times exclude t = 0, where H(0) is degenerate.
        let open_start = self.command == Command::Flow;
        let in_range = |t: f64| (t > 0.0 || (!open_start && t == 0.0)) && t <= 1.0;
        if times.is_empty() || !times.iter().all(|&t| in_range(t)) {
            return bad("t_grid", format!("times out of range for {}", self.command));
        }
        if !(0.0..=1.0).contains(&self.t) {
            return bad("t", format!("{} outside [0, 1]", self.t));
        }
        if !(self.core_fraction > 0.0 && self.core_fraction <= 1.0) {
            return bad(
                "core_fraction",
                format!("{} outside (0, 1]", self.core_fraction),
            );
        }
        if !(self.bin_width > 0.0) {
            return bad("bin_width", "must be positive".into());
        }
        if !(self.s_max > 0.0) {
            return bad("s_max", "must be positive".into());
        }
        if !(self.grid_step > 0.0 && self.grid_step <= 0.05) {
            return bad("grid_step", format!("{} outside (0, 0.05]", self.grid_step));
        }
        if !(self.tol > 0.0 && self.tol <= 1e-4) {
            return bad("tol", format!("{} outside (0, 1e-4]", self.tol));
        }
        if self.levels.iter().any(|l| !(*l >= 0.0)) {
            return bad("levels", "must be non-negative".into());
        }
        if self.command == Command::Entangle && !self.n[0].is_multiple_of(2) {
            return bad(
                "n",
                "entangle needs an even n for the half-chain cut".into(),
            );
        }
        Ok(())
    }
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse().map_err(|_| format!("cannot parse {p:?}")))
        .collect()
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
