//! On-disk experiment configuration.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use focusnode::Params;

/// Bumped whenever a field changes meaning.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamsConfig {
    pub b: f64,
    pub c1: f64,
    pub c2: f64,
    pub eps3: f64,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        ParamsConfig {
            b: 0.3,
            c1: 0.0,
            c2: -1.0,
            eps3: 0.002,
        }
    }
}

impl ParamsConfig {
    pub fn to_params(self) -> Result<Params> {
        Ok(Params::new(self.b, self.c1, self.c2, self.eps3)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum WhichRelief {
    Lambda,
    Mu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn side(self) -> focusnode::flow::Side {
        match self {
            Sign::Minus => focusnode::flow::Side::Minus,
            Sign::Plus => focusnode::flow::Side::Plus,
        }
    }
}

/// `[xmin, xmax, ymin, ymax]` plus nodes per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub bbox: [f64; 4],
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Experiment {
    Selftest,
    Airy { points: Vec<[f64; 2]> },
    Relief { which: WhichRelief, grid: Grid },
    Levels { which: WhichRelief, levels: Vec<f64>, grid: Grid },
    Domain { seed: [f64; 2], grid: Grid },
    Trace { sign: Sign, t_far: f64, t_end: f64, stride: usize },
    Explicit { sign: Sign, ts: Vec<f64>, compare: bool },
    Expand { order: usize },
    EntryExit { entries: Vec<f64>, r0: f64, delta: f64 },
    FigureTraj { stride: usize },
    Lemmas { beta: f64 },
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Selftest => "selftest",
            Experiment::Airy { .. } => "airy",
            Experiment::Relief { .. } => "relief",
            Experiment::Levels { .. } => "levels",
            Experiment::Domain { .. } => "domain",
            Experiment::Trace { .. } => "trace",
            Experiment::Explicit { .. } => "explicit",
            Experiment::Expand { .. } => "expand",
            Experiment::EntryExit { .. } => "entryexit",
            Experiment::FigureTraj { .. } => "figure-traj",
            Experiment::Lemmas { .. } => "lemmas",
        }
    }
}

/// Entries of the default input-output sweep.
pub const DEFAULT_SWEEP: [f64; 6] = [-0.8, -0.6, -0.4, -0.25, -0.15, -0.1];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub format_version: u32,
    #[serde(default)]
    pub params: ParamsConfig,
    /// RK4 step.
    pub h: f64,
    pub out_dir: PathBuf,
    /// Name for the main CSV file instead of the experiment's default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file_name: Option<String>,
    pub experiment: Experiment,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment, out_dir: impl Into<PathBuf>) -> Self {
        ExperimentConfig {
            format_version: FORMAT_VERSION,
            params: ParamsConfig::default(),
            h: 1e-4,
            out_dir: out_dir.into(),
            file_name: None,
            experiment,
        }
    }

    pub fn io_sweep(out_dir: impl Into<PathBuf>) -> Self {
        Self::new(
            Experiment::EntryExit {
                entries: DEFAULT_SWEEP.to_vec(),
                r0: 1e-6,
                delta: 0.05,
            },
            out_dir,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            bail!(
                "config format version {} is not supported (expected {FORMAT_VERSION})",
                self.format_version
            );
        }
        self.params.to_params()?;
        if !(self.h > 0.0 && self.h <= 1e-2) {
            bail!("step h must lie in (0, 1e-2], got {}", self.h);
        }
        match &self.experiment {
            Experiment::Relief { grid, .. } | Experiment::Levels { grid, .. } | Experiment::Domain { grid, .. } => {
                let [x0, x1, y0, y1] = grid.bbox;
                if !(x0 < x1 && y0 < y1) || grid.n < 3 {
                    bail!("grid needs xmin < xmax, ymin < ymax and n >= 3");
                }
            }
            Experiment::Trace { stride, .. } | Experiment::FigureTraj { stride } if *stride == 0 => {
                bail!("stride must be positive");
            }
            Experiment::EntryExit { entries, .. } if entries.is_empty() => bail!("empty sweep"),
            _ => {}
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: ExperimentConfig = serde_json::from_str(s).context("parsing experiment config")?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&s)
    }
}

/// `from:to:step`, inclusive of `to` up to rounding.
pub fn parse_range(s: &str) -> Result<Vec<f64>> {
    let v: Vec<f64> = s
        .split(':')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("bad range {s:?}"))?;
    let [from, to, step] = v[..] else {
        bail!("range must be from:to:step, got {s:?}");
    };
    if !(step > 0.0) || to < from {
        bail!("range needs step > 0 and from <= to, got {s:?}");
    }
    let n = ((to - from) / step + 1e-9).floor() as usize;
    // round to the step's decimal grid so printed entries are clean
    Ok((0..=n).map(|k| ((from + k as f64 * step) * 1e12).round() / 1e12).collect())
}

/// Comma-separated reals.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().with_context(|| format!("bad number {x:?}")))
        .collect()
}

pub fn parse_pair(s: &str) -> Result<[f64; 2]> {
    match parse_list(s)?[..] {
        [a, b] => Ok([a, b]),
        _ => bail!("expected two comma-separated numbers, got {s:?}"),
    }
}

/// `xmin,xmax,ymin,ymax,n`.
pub fn parse_grid(s: &str) -> Result<Grid> {
    let v = parse_list(s)?;
    let [x0, x1, y0, y1, n] = v[..] else {
        bail!("grid must be xmin,xmax,ymin,ymax,n, got {s:?}");
    };
    if n.fract() != 0.0 || n < 3.0 {
        bail!("grid size must be an integer >= 3");
    }
    Ok(Grid {
        bbox: [x0, x1, y0, y1],
        n: n as usize,
    })
}
