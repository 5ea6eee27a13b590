//! Run configuration: defaults, an optional TOML file and flag overrides.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use spaceform_core::convexbody::BallPerturbation;

use crate::suite::VerifyOptions;
use crate::LabError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Ball eigenvalue ratio and gap curve along a radius grid.
    Ball,
    /// Extrapolated eigenvalues of one body.
    Solve,
    /// Run named verifiers on a body or a corpus.
    Verify,
    /// Perturbed-ball stability sweep.
    Sweep,
    /// Rearrangements of a body's ground state.
    Rearrange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Ellipse,
    OneBump,
}

impl From<Mode> for BallPerturbation {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Ellipse => BallPerturbation::Ellipse,
            Mode::OneBump => BallPerturbation::OneBump,
        }
    }
}

/// Values a config file may set. Every key mirrors a flag.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub delta: Option<i32>,
    pub n: Option<usize>,
    pub body: Option<PathBuf>,
    pub h: Option<String>,
    pub name: Option<String>,
    pub r: Option<String>,
    pub eps: Option<String>,
    pub radius: Option<f64>,
    pub mode: Option<Mode>,
    pub m: Option<usize>,
    pub random: Option<usize>,
    pub big_r: Option<f64>,
    pub levels: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        toml::from_str(&text).map_err(|e| {
            let (line, column) = e.span().map(|s| line_col(&text, s.start)).unwrap_or((0, 0));
            LabError::Parse { origin: path.display().to_string(), line, column, message: e.message().to_string() }
        })
    }

    /// Fills unset fields from `other`.
    pub fn or(self, other: FileConfig) -> FileConfig {
        FileConfig {
            delta: self.delta.or(other.delta),
            n: self.n.or(other.n),
            body: self.body.or(other.body),
            h: self.h.or(other.h),
            name: self.name.or(other.name),
            r: self.r.or(other.r),
            eps: self.eps.or(other.eps),
            radius: self.radius.or(other.radius),
            mode: self.mode.or(other.mode),
            m: self.m.or(other.m),
            random: self.random.or(other.random),
            big_r: self.big_r.or(other.big_r),
            levels: self.levels.or(other.levels),
            seed: self.seed.or(other.seed),
            out: self.out.or(other.out),
            format: self.format.or(other.format),
        }
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

/// A fully resolved run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub delta: Option<i32>,
    pub n: usize,
    pub body: Option<PathBuf>,
    /// Mesh sizes, strictly decreasing, at least three.
    pub h_list: Option<Vec<f64>>,
    pub name: String,
    pub r_grid: Vec<f64>,
    pub eps_grid: Vec<f64>,
    pub radius: f64,
    pub mode: Mode,
    pub m: usize,
    /// Random bodies per geometry for `verify` without a body file.
    pub random: Option<usize>,
    pub verify: VerifyOptions,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn resolve(command: Command, f: FileConfig) -> Result<Self, LabError> {
        let h_list = f.h.as_deref().map(parse_h_list).transpose()?;
        let n = f.n.unwrap_or(2);
        if n < 2 {
            return Err(LabError::Config(format!("--n must be at least 2, got {n}")));
        }
        if let Some(d) = f.delta {
            if !(-1..=1).contains(&d) {
                return Err(LabError::Config(format!("--delta must be -1, 0 or 1, got {d}")));
            }
        }
        let default_format = match command {
            Command::Ball | Command::Sweep => Format::Csv,
            _ => Format::Json,
        };
        let format = f.format.unwrap_or(default_format);
        if format == Format::Csv && matches!(command, Command::Solve | Command::Rearrange) {
            return Err(LabError::Config("solve and rearrange only write json".into()));
        }
        let mut verify = VerifyOptions::default();
        if let Some(r) = f.big_r {
            if !(r > 0.0) {
                return Err(LabError::Config(format!("--big-r must be positive, got {r}")));
            }
            verify.big_r = r;
        }
        if let Some(l) = f.levels {
            verify.levels = l;
        }
        let radius = f.radius.unwrap_or(1.0);
        if !(radius > 0.0) {
            return Err(LabError::Config(format!("--radius must be positive, got {radius}")));
        }
        Ok(Self {
            command,
            delta: f.delta,
            n,
            body: f.body,
            h_list,
            name: f.name.unwrap_or_else(|| "all".into()),
            r_grid: parse_grid(f.r.as_deref().unwrap_or("0.25:3:0.25"))?,
            eps_grid: parse_grid(f.eps.as_deref().unwrap_or("0:0.3:0.05"))?,
            radius,
            mode: f.mode.unwrap_or(Mode::Ellipse),
            m: f.m.unwrap_or(128),
            random: f.random,
            verify,
            seed: f.seed.unwrap_or(0),
            out: f.out,
            format,
        })
    }
}

/// `0.08,0.04,0.02`: strictly decreasing, positive, at least three entries.
pub fn parse_h_list(s: &str) -> Result<Vec<f64>, LabError> {
    let h = parse_list(s, "--h")?;
    if h.len() < 3 {
        return Err(LabError::Config(format!("--h needs at least three mesh sizes, got {}", h.len())));
    }
    if h.iter().any(|x| !(*x > 0.0)) || h.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(LabError::Config(format!("--h must be positive and strictly decreasing, got {s}")));
    }
    Ok(h)
}

fn parse_list(s: &str, flag: &str) -> Result<Vec<f64>, LabError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| LabError::Config(format!("{flag}: cannot read {t:?} as a number")))
        })
        .collect()
}

/// `start:stop:step` (stop included up to rounding) or a comma list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, LabError> {
    if !s.contains(':') {
        return parse_list(s, "grid");
    }
    let p = parse_list(&s.replace(':', ","), "grid")?;
    let [a, b, step] = p[..] else {
        return Err(LabError::Config(format!("grid {s:?} must be start:stop:step")));
    };
    if !(step > 0.0) || b < a {
        return Err(LabError::Config(format!("grid {s:?} needs step > 0 and stop ≥ start")));
    }
    let count = ((b - a) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| a + i as f64 * step).collect())
}
