//! Artifact manifests and their reports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{Experiment, ExperimentConfig};
use crate::run::{execute, Check};

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub name: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub experiment: String,
    pub tool_version: String,
    pub library_version: String,
    pub config: ExperimentConfig,
    pub files: Vec<FileEntry>,
    pub checks: Vec<Check>,
    pub wall_time_s: f64,
    pub threads: usize,
}

impl Manifest {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data).iter().map(|b| format!("{b:02x}")).collect()
}

/// Result of [`run`]: the manifest written to disk and the printable summary.
pub struct RunOutput {
    pub manifest: Manifest,
    pub manifest_path: PathBuf,
    pub summary: String,
}

/// Execute `cfg`, write its CSV files and `manifest.json` into `cfg.out_dir`.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let start = Instant::now();
    let mut out = execute(cfg)?;
    if let (Some(name), Some(first)) = (&cfg.file_name, out.files.first_mut()) {
        first.0 = name.clone();
    }
    let wall = start.elapsed().as_secs_f64();
    std::fs::create_dir_all(&cfg.out_dir).with_context(|| format!("creating {}", cfg.out_dir.display()))?;
    let mut files = Vec::new();
    for (name, body) in &out.files {
        let path = cfg.out_dir.join(name);
        std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        files.push(FileEntry {
            name: name.clone(),
            sha256: sha256_hex(body.as_bytes()),
            bytes: body.len() as u64,
        });
    }
    let manifest = Manifest {
        format_version: crate::config::FORMAT_VERSION,
        experiment: cfg.experiment.name().to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        library_version: focusnode::VERSION.to_string(),
        config: cfg.clone(),
        files,
        checks: out.checks,
        wall_time_s: wall,
        threads: focusnode::par::threads(),
    };
    let manifest_path = cfg.out_dir.join(MANIFEST_NAME);
    let json = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(&manifest_path, json).with_context(|| format!("writing {}", manifest_path.display()))?;
    Ok(RunOutput {
        manifest,
        manifest_path,
        summary: out.summary,
    })
}

pub fn load_manifest(path: &Path) -> Result<Manifest> {
    let s = std::fs::read_to_string(path).with_context(|| format!("reading manifest {}", path.display()))?;
    serde_json::from_str(&s).with_context(|| format!("corrupt manifest {}", path.display()))
}

/// Verify checksums next to the manifest; any mismatch is an error.
pub fn verify(manifest: &Manifest, dir: &Path) -> Result<()> {
    for f in &manifest.files {
        let path = dir.join(&f.name);
        let data = std::fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
        let got = sha256_hex(&data);
        if got != f.sha256 {
            bail!("integrity failure: {} has sha256 {got}, manifest records {}", f.name, f.sha256);
        }
    }
    Ok(())
}

pub struct Report {
    pub text: String,
    pub all_pass: bool,
}

/// Human-readable summary of a manifest; fails on checksum mismatch.
pub fn report(path: &Path) -> Result<Report> {
    let m = load_manifest(path)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    verify(&m, dir)?;
    let mut text = String::new();
    writeln!(
        text,
        "{} (tool {}, library {}), {:.2}s on {} threads",
        m.experiment, m.tool_version, m.library_version, m.wall_time_s, m.threads
    )?;
    writeln!(text, "files verified: {}", m.files.iter().map(|f| f.name.as_str()).collect::<Vec<_>>().join(", "))?;
    for c in &m.checks {
        let tag = c.criterion.map(|n| format!("criterion {n}")).unwrap_or_else(|| "invariant".into());
        writeln!(
            text,
            "[{}] {tag}: {}: observed {}, expected {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.observed,
            c.expected
        )?;
    }
    if let Experiment::EntryExit { .. } = m.config.experiment {
        let io = std::fs::read_to_string(dir.join("io.csv"))?;
        writeln!(text, "{:>8} {:>10} {:>10} {:>10}", "t_e", "predicted", "measured", "delta")?;
        for line in io.lines().skip(1) {
            let f: Vec<&str> = line.split(',').collect();
            let (t_e, pred, meas) = (f[0].parse::<f64>()?, f[1].parse::<f64>()?, f[4]);
            let (ms, ds) = match meas.parse::<f64>() {
                Ok(v) => (format!("{v:.4}"), format!("{:.4}", v - pred)),
                Err(_) => ("none".into(), "-".into()),
            };
            writeln!(text, "{t_e:>8} {pred:>10.4} {ms:>10} {ds:>10}")?;
        }
    }
    let all_pass = m.all_pass();
    writeln!(text, "{}", if all_pass { "all checks pass" } else { "some checks FAIL" })?;
    Ok(Report { text, all_pass })
}
