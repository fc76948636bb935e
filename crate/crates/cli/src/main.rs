use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C;

use focusnode::specfun::{airy, airy_scaled, AiryKind};
use focusnode_cli::config::{
    parse_grid, parse_list, parse_pair, parse_range, Experiment, ExperimentConfig, Grid, ParamsConfig, Sign, WhichRelief,
};
use focusnode_cli::run::{execute, relief_report};
use focusnode_cli::{init_threads, report, run};

#[derive(Parser)]
#[command(name = "focusnode", version, about = "Delayed Hopf / focus-node bifurcation experiments")]
struct Cli {
    /// Worker threads (overrides FOCUSNODE_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct ParamArgs {
    #[arg(long, default_value_t = 0.3)]
    b: f64,
    #[arg(long, default_value_t = 0.002)]
    eps3: f64,
    /// Forcing `c1,c2`.
    #[arg(long, default_value = "0,-1", allow_hyphen_values = true)]
    c: String,
    /// RK4 step.
    #[arg(long, default_value_t = 1e-4)]
    h: f64,
}

impl ParamArgs {
    fn params(&self) -> Result<ParamsConfig> {
        let [c1, c2] = parse_pair(&self.c)?;
        Ok(ParamsConfig {
            b: self.b,
            c1,
            c2,
            eps3: self.eps3,
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    A,
    APrime,
    B,
    BPrime,
}

#[derive(Subcommand)]
enum AiryCmd {
    /// Airy invariants (determinants, connection, origin values, Wronskian).
    Selftest,
    /// Value and log-scaled form at one point.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, value_enum, default_value = "a")]
        kind: Kind,
    },
}

#[derive(Subcommand)]
enum Cmd {
    /// Module invariant suites; nonzero exit on any failure.
    Selftest {
        #[arg(long, default_value = "out/selftest")]
        out_dir: PathBuf,
    },
    Airy {
        #[command(subcommand)]
        cmd: AiryCmd,
    },
    /// Relief grid, or the relief numbers with --report.
    Relief {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long, value_enum, default_value = "lambda")]
        which: WhichRelief,
        /// `xmin,xmax,ymin,ymax,n`.
        #[arg(long, default_value = "-1.5,1.5,-1,1,201", allow_hyphen_values = true)]
        grid: String,
        #[arg(long)]
        report: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Level curves, one polyline per blank-line separated block.
    Levels {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long, value_enum, default_value = "lambda")]
        which: WhichRelief,
        #[arg(long, allow_hyphen_values = true)]
        levels: String,
        #[arg(long, default_value = "-1.5,1.5,-1,1,201", allow_hyphen_values = true)]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Descending domain from a seed.
    Domain {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        seed: String,
        #[arg(long, default_value_t = 400)]
        n: usize,
        /// `xmin,xmax,ymin,ymax`.
        #[arg(long, default_value = "-1.5,4.5,-1.5,1.5", allow_hyphen_values = true)]
        bbox: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// RK4 run of a distinguished trajectory (t, x, y, rho, theta).
    Trace {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long, value_enum, default_value = "minus")]
        which: Sign,
        /// End of the run (default 0.8 for minus, -0.8 for plus).
        #[arg(long, allow_hyphen_values = true)]
        t_end: Option<f64>,
        #[arg(long, default_value_t = 1)]
        stride: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distinguished solution by contour quadrature.
    Explicit {
        #[command(flatten)]
        p: ParamArgs,
        /// Comma-separated times (default: -0.5..0.25 step 0.01).
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        #[arg(long, value_enum, default_value = "minus")]
        sign: Sign,
        /// Compare against an RK4 run.
        #[arg(long)]
        compare: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fitted expansion of X_-(b) against the closed X_+(b) coefficients.
    Expand {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long, default_value_t = 12)]
        order: usize,
        /// Print the comparison table (always computed).
        #[arg(long)]
        compare: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Input-output sweep (t_e, predicted, band_lo, band_hi, measured).
    Entryexit {
        #[command(flatten)]
        p: ParamArgs,
        /// `from:to:step`.
        #[arg(long, default_value = "-0.9:-0.05:0.05", allow_hyphen_values = true)]
        sweep: String,
        #[arg(long, default_value_t = 1e-6)]
        r0: f64,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Both distinguished trajectories with their exit times.
    FigureTraj {
        #[arg(long, default_value = "out/figure-traj")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 10)]
        stride: usize,
    },
    /// The default input-output sweep with its checks.
    IoSweep {
        #[arg(long, default_value = "out/io-sweep")]
        out_dir: PathBuf,
    },
    /// Lemma checks: leading coefficients, majoration, path start.
    Lemmas {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[arg(long, default_value = "out/lemmas")]
        out_dir: PathBuf,
    },
    /// Run a saved configuration.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Write the default configuration of an experiment kind as JSON.
    Config {
        #[arg(value_parser = ["selftest", "figure-traj", "io-sweep", "lemmas", "expand"])]
        kind: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a manifest and summarise its checks.
    Report { manifest: PathBuf },
}

fn config(p: &ParamArgs, experiment: Experiment, out: &Option<PathBuf>) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::new(experiment, ".");
    cfg.params = p.params()?;
    cfg.h = p.h;
    if let Some(path) = out {
        cfg.out_dir = path.parent().filter(|d| !d.as_os_str().is_empty()).map(PathBuf::from).unwrap_or_else(|| ".".into());
        cfg.file_name = path.file_name().map(|n| n.to_string_lossy().into_owned());
    }
    Ok(cfg)
}

/// Run `cfg`; without an output path only print.
fn go(cfg: ExperimentConfig, write: bool) -> Result<bool> {
    if write {
        let r = run(&cfg)?;
        print!("{}", r.summary);
        for c in &r.manifest.checks {
            println!("[{}] {}: {} (expected {})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.observed, c.expected);
        }
        println!("manifest: {}", r.manifest_path.display());
        Ok(r.manifest.all_pass())
    } else {
        let o = execute(&cfg)?;
        print!("{}", o.summary);
        for c in &o.checks {
            println!("[{}] {}: {} (expected {})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.observed, c.expected);
        }
        Ok(o.checks.iter().all(|c| c.pass))
    }
}

fn airy_kind(k: Kind) -> (AiryKind, &'static str) {
    match k {
        Kind::A => (AiryKind::A, "A"),
        Kind::APrime => (AiryKind::APrime, "A'"),
        Kind::B => (AiryKind::B, "B"),
        Kind::BPrime => (AiryKind::BPrime, "B'"),
    }
}

fn main_inner(cli: Cli) -> Result<bool> {
    init_threads(cli.threads)?;
    let default_p = ParamArgs {
        b: 0.3,
        eps3: 0.002,
        c: "0,-1".into(),
        h: 1e-4,
    };
    match cli.cmd {
        Cmd::Selftest { out_dir } => go(ExperimentConfig::new(Experiment::Selftest, out_dir), true),
        Cmd::Airy { cmd: AiryCmd::Selftest } => {
            let o = execute(&ExperimentConfig::new(Experiment::Selftest, "."))?;
            let mut ok = true;
            for c in o.checks.iter().filter(|c| c.criterion == Some(1) || c.name == "Wronskian") {
                println!("{:<32} {:>12}  {:<10} {}", c.name, c.observed, c.expected, if c.pass { "ok" } else { "FAIL" });
                ok &= c.pass;
            }
            Ok(ok)
        }
        Cmd::Airy {
            cmd: AiryCmd::Eval { z, kind },
        } => {
            let [re, im] = parse_pair(&z)?;
            let z = C::new(re, im);
            let (k, label) = airy_kind(kind);
            let s = airy_scaled(z, k);
            match airy(z, k) {
                Ok(v) => println!("{label}({z}) = {:.16e} {:+.16e}i", v.re, v.im),
                Err(e) => println!("{label}({z}): {e}"),
            }
            println!("log form: exp({:.16e} + i {:.16})", s.logmag, s.phase);
            Ok(true)
        }
        Cmd::Relief { p, which, grid, report, out } => {
            if report {
                print!("{}", relief_report(p.b)?);
                return Ok(true);
            }
            let e = Experiment::Relief { which, grid: parse_grid(&grid)? };
            let w = out.is_some();
            go(config(&p, e, &out)?, w)
        }
        Cmd::Levels { p, which, levels, grid, out } => {
            let e = Experiment::Levels {
                which,
                levels: parse_list(&levels)?,
                grid: parse_grid(&grid)?,
            };
            let w = out.is_some();
            go(config(&p, e, &out)?, w)
        }
        Cmd::Domain { p, seed, n, bbox, out } => {
            let v = parse_list(&bbox)?;
            let [x0, x1, y0, y1] = v[..] else {
                bail!("bbox must be xmin,xmax,ymin,ymax");
            };
            let e = Experiment::Domain {
                seed: parse_pair(&seed)?,
                grid: Grid { bbox: [x0, x1, y0, y1], n },
            };
            let w = out.is_some();
            go(config(&p, e, &out)?, w)
        }
        Cmd::Trace { p, which, t_end, stride, out } => {
            let (t_far, t_end) = match which {
                Sign::Minus => (-4.0, t_end.unwrap_or(0.8)),
                Sign::Plus => (4.0, t_end.unwrap_or(-0.8)),
            };
            let e = Experiment::Trace { sign: which, t_far, t_end, stride };
            let w = out.is_some();
            go(config(&p, e, &out)?, w)
        }
        Cmd::Explicit { p, t, sign, compare, out } => {
            let ts = t.map(|s| parse_list(&s)).transpose()?.unwrap_or_default();
            let e = Experiment::Explicit { sign, ts, compare };
            let w = out.is_some();
            go(config(&p, e, &out)?, w)
        }
        Cmd::Expand { p, order, compare: _, out } => {
            let w = out.is_some();
            go(config(&p, Experiment::Expand { order }, &out)?, w)
        }
        Cmd::Entryexit { p, sweep, r0, delta, out } => {
            let e = Experiment::EntryExit {
                entries: parse_range(&sweep)?,
                r0,
                delta,
            };
            let w = out.is_some();
            go(config(&p, e, &out)?, w)
        }
        Cmd::FigureTraj { out_dir, stride } => {
            let mut cfg = config(&default_p, Experiment::FigureTraj { stride }, &None)?;
            cfg.out_dir = out_dir;
            go(cfg, true)
        }
        Cmd::IoSweep { out_dir } => go(ExperimentConfig::io_sweep(out_dir), true),
        Cmd::Lemmas { p, beta, out_dir } => {
            let mut cfg = config(&p, Experiment::Lemmas { beta }, &None)?;
            cfg.out_dir = out_dir;
            go(cfg, true)
        }
        Cmd::Run { config } => go(ExperimentConfig::load(&config)?, true),
        Cmd::Config { kind, out } => {
            let dir = PathBuf::from("out").join(&kind);
            let cfg = match kind.as_str() {
                "selftest" => ExperimentConfig::new(Experiment::Selftest, dir),
                "figure-traj" => ExperimentConfig::new(Experiment::FigureTraj { stride: 10 }, dir),
                "io-sweep" => ExperimentConfig::io_sweep(dir),
                "lemmas" => ExperimentConfig::new(Experiment::Lemmas { beta: 0.5 }, dir),
                _ => ExperimentConfig::new(Experiment::Expand { order: 12 }, dir),
            };
            match out {
                Some(path) => std::fs::write(path, cfg.to_json())?,
                None => println!("{}", cfg.to_json()),
            }
            Ok(true)
        }
        Cmd::Report { manifest } => {
            let r = report(&manifest)?;
            print!("{}", r.text);
            Ok(r.all_pass)
        }
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("some checks failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
