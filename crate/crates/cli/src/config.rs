use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Parser;
use uinf_core::mc_harness::{SamplingMode, MIN_SAMPLES};
use uinf_core::quadrature::MIN_NODES;

use crate::CliError;

pub const MAX_LEVEL: usize = 32;
pub const MAX_DIM: usize = 6;
pub const MAX_DEGREE: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Combinatorics,
    Haar,
    Fock,
    Weyl,
    Schrodinger,
    Mc,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Combinatorics, Suite::Haar, Suite::Fock, Suite::Weyl, Suite::Schrodinger, Suite::Mc];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Combinatorics => "combinatorics",
            Suite::Haar => "haar",
            Suite::Fock => "fock",
            Suite::Weyl => "weyl",
            Suite::Schrodinger => "schrodinger",
            Suite::Mc => "mc",
        }
    }

    pub fn uses_samples(self) -> bool {
        matches!(self, Suite::Haar | Suite::Mc)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?} (expected one of combinatorics, haar, fock, weyl, schrodinger, mc)"))
    }
}

fn parse_mode(s: &str) -> Result<SamplingMode, String> {
    SamplingMode::parse(s).map_err(|e| e.to_string())
}

/// Command-line flags. Every value may also come from a `key = value` config
/// file; flags take precedence.
#[derive(Parser, Debug, Default)]
#[command(name = "uinf", version, about = "Run identity suites and Monte-Carlo experiments")]
pub struct Args {
    /// combinatorics | haar | fock | weyl | schrodinger | mc
    pub suite: Option<String>,
    /// Flat key=value file with defaults for any flag below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Level m of the sampled unitaries.
    #[arg(long, visible_alias = "m")]
    pub level: Option<usize>,
    /// Truncation dimension d.
    #[arg(long, visible_alias = "d")]
    pub dim: Option<usize>,
    /// Fock degree cut N.
    #[arg(long, visible_alias = "N")]
    pub degree: Option<u32>,
    /// Monte-Carlo sample count n.
    #[arg(long, visible_alias = "n")]
    pub samples: Option<usize>,
    /// Gauss–Hermite node count Q.
    #[arg(long, visible_alias = "Q")]
    pub quadrature: Option<usize>,
    /// embed | chain | eigen
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<SamplingMode>,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-sample CSV of φ_𝔢₁ (sample_index, re, im).
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub suite: Suite,
    pub seed: u64,
    pub level: usize,
    pub dim: usize,
    pub degree: u32,
    pub samples: usize,
    pub quadrature: usize,
    pub mode: SamplingMode,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(suite: Suite) -> Self {
        Self {
            suite,
            seed: 42,
            level: 6,
            dim: 3,
            degree: 8,
            samples: 100_000,
            quadrature: 64,
            mode: SamplingMode::Embed,
            out: None,
            csv: None,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        if self.level == 0 || self.level > MAX_LEVEL {
            return usage(format!("level must be in 1..={MAX_LEVEL}, got {}", self.level));
        }
        if self.dim == 0 || self.dim > MAX_DIM {
            return usage(format!("dim must be in 1..={MAX_DIM}, got {}", self.dim));
        }
        if self.dim > self.level {
            return usage(format!("dim {} exceeds level {}", self.dim, self.level));
        }
        if self.degree == 0 || self.degree > MAX_DEGREE {
            return usage(format!("degree must be in 1..={MAX_DEGREE}, got {}", self.degree));
        }
        if self.suite.uses_samples() && self.samples < MIN_SAMPLES {
            return usage(format!("samples must be at least {MIN_SAMPLES}, got {}", self.samples));
        }
        if self.quadrature < MIN_NODES {
            return usage(format!("quadrature must be at least {MIN_NODES}, got {}", self.quadrature));
        }
        Ok(())
    }

    /// Defaults, then the config file, then flags.
    pub fn from_args(args: &Args) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(p) => read_config_file(p)?,
            None => BTreeMap::new(),
        };
        let suite_name = args
            .suite
            .clone()
            .or_else(|| file.get("suite").cloned())
            .ok_or_else(|| CliError::Usage("no suite given".into()))?;
        let mut cfg = RunConfig::new(suite_name.parse().map_err(CliError::Usage)?);
        for (key, value) in &file {
            cfg.apply(key, value)?;
        }
        macro_rules! flag {
            ($f:ident) => {
                if let Some(v) = args.$f.clone() {
                    cfg.$f = v;
                }
            };
        }
        flag!(seed);
        flag!(level);
        flag!(dim);
        flag!(degree);
        flag!(samples);
        flag!(quadrature);
        flag!(mode);
        if args.out.is_some() {
            cfg.out = args.out.clone();
        }
        if args.csv.is_some() {
            cfg.csv = args.csv.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T, CliError> {
            v.parse().map_err(|_| CliError::Usage(format!("invalid value {v:?} for {key}")))
        }
        match key {
            "suite" => {}
            "seed" => self.seed = num(key, value)?,
            "level" | "m" => self.level = num(key, value)?,
            "dim" | "d" => self.dim = num(key, value)?,
            "degree" | "N" => self.degree = num(key, value)?,
            "samples" | "n" => self.samples = num(key, value)?,
            "quadrature" | "Q" => self.quadrature = num(key, value)?,
            "mode" => self.mode = parse_mode(value).map_err(CliError::Usage)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "csv" => self.csv = Some(PathBuf::from(value)),
            _ => return Err(CliError::Usage(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }
}

pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", lineno + 1)))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_config_text(&text)
}
