use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub const CACHE_ENV: &str = "AFFKL_CACHE";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Quadratic,
    Bar,
    Xbar,
    Kl,
    Parabolic,
    Sign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CacheAction {
    Inspect,
    Merge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Kl,
    Pkl,
    Spkl,
    Cells,
    Alcove,
    Label,
    Dim,
    Char,
    Verify { suite: Suite },
    Cache { action: CacheAction, sources: Vec<PathBuf> },
}

/// Everything a run depends on besides the cache contents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobSpec {
    pub command: Command,
    pub datum: String,
    pub parabolic: Vec<usize>,
    pub underline: Option<Vec<usize>>,
    pub h: Option<Vec<i64>>,
    pub nu: Option<Vec<i64>>,
    pub p: Option<i64>,
    pub mu0: Option<Vec<i64>>,
    pub x: Vec<String>,
    pub max_len: usize,
    pub theta_budget: usize,
    pub theta_range: i64,
    pub floor: i64,
    pub window: usize,
    pub threads: usize,
    pub cache: Option<PathBuf>,
    pub format: Format,
}

impl JobSpec {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Parser, Debug)]
#[command(name = "affkl", version, about = "Exact Kazhdan-Lusztig tables for affine Weyl groups and modular character formulas")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Ordinary KL table. TSV columns: x, y, c (C_x = sum_y c H_y).
    Kl(Common),
    /// Parabolic KL table in the antispherical module. TSV columns: x, y, c.
    Pkl(Common),
    /// Semiperiodic KL table. TSV columns: x, y, value, certificate (three theta values).
    Spkl(Common),
    /// Left cell of w_0P inside the length window. TSV columns: x, length, confidence.
    Cells(Common),
    /// Checks that mu0 lies in the antidominant p-alcove. TSV columns: mu0, p, inside, reason.
    Alcove(Common),
    /// Labels mu_x = x^{-1}.mu0. TSV columns: x, mu.
    Label(Common),
    /// Distinguished dimension formula. TSV columns: x, mu, dimension, value, confidence.
    Dim(Common),
    /// General character formula. TSV columns: x, degree, coefficient, certificate.
    Char(Common),
    /// Runs an identity suite. TSV columns: suite, case, result. Exit 1 if any case fails.
    Verify {
        suite: Suite,
        #[command(flatten)]
        common: Common,
    },
    /// Inspects or merges cache files. TSV columns: file, header, entries.
    Cache {
        action: CacheAction,
        /// Cache directories to merge into --cache.
        sources: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    if t.is_empty() || t == "-" {
        return Ok(Vec::new());
    }
    t.split(',').map(|c| c.trim().parse::<T>().map_err(|_| format!("bad list entry `{c}`"))).collect()
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Cartan type label such as A1, A2, B2, G2.
    #[arg(long = "type", default_value = "A1")]
    pub datum: String,
    /// Work in the extended affine Weyl group (the only supported mode).
    #[arg(long)]
    pub affine: bool,
    /// Simple roots of the parabolic P, comma separated.
    #[arg(long, default_value = "")]
    pub parabolic: String,
    /// Simple roots of the underline Levi, comma separated.
    #[arg(long)]
    pub underline: Option<String>,
    /// Pairings of h with the simple roots.
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<String>,
    /// Pairings of nu with the simple roots.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    #[arg(long)]
    pub p: Option<i64>,
    /// Base weight in fundamental-weight coordinates; defaults to -2rho.
    #[arg(long, allow_hyphen_values = true)]
    pub mu0: Option<String>,
    /// Element(s): `e`, a word like `0,1`, or `ω<k>|<word>`.
    #[arg(long)]
    pub x: Vec<String>,
    #[arg(long, default_value_t = 4)]
    pub max_len: usize,
    #[arg(long, default_value_t = affkl::semiperiodic::DEFAULT_THETA_BUDGET)]
    pub theta_budget: usize,
    /// Coordinates of theta range over [-N, N] in `verify xbar`.
    #[arg(long, default_value_t = 2)]
    pub theta_range: i64,
    /// Lowest graded degree reported by `char`.
    #[arg(long, default_value_t = -10, allow_negative_numbers = true)]
    pub floor: i64,
    #[arg(long, default_value_t = affkl::modular::DEFAULT_CELL_WINDOW)]
    pub window: usize,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Cache directory.
    #[arg(long, env = CACHE_ENV)]
    pub cache: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "tsv")]
    pub format: Format,
    /// Print the parsed job as JSON and exit.
    #[arg(long)]
    pub print_spec: bool,
}

impl Cmd {
    pub fn into_spec(self) -> Result<(JobSpec, bool), String> {
        let (command, c) = match self {
            Cmd::Kl(c) => (Command::Kl, c),
            Cmd::Pkl(c) => (Command::Pkl, c),
            Cmd::Spkl(c) => (Command::Spkl, c),
            Cmd::Cells(c) => (Command::Cells, c),
            Cmd::Alcove(c) => (Command::Alcove, c),
            Cmd::Label(c) => (Command::Label, c),
            Cmd::Dim(c) => (Command::Dim, c),
            Cmd::Char(c) => (Command::Char, c),
            Cmd::Verify { suite, common } => (Command::Verify { suite }, common),
            Cmd::Cache { action, sources, common } => (Command::Cache { action, sources }, common),
        };
        let spec = JobSpec {
            command,
            datum: c.datum,
            parabolic: list(&c.parabolic)?,
            underline: c.underline.as_deref().map(list).transpose()?,
            h: c.h.as_deref().map(list).transpose()?,
            nu: c.nu.as_deref().map(list).transpose()?,
            p: c.p,
            mu0: c.mu0.as_deref().map(list).transpose()?,
            x: c.x,
            max_len: c.max_len,
            theta_budget: c.theta_budget,
            theta_range: c.theta_range,
            floor: c.floor,
            window: c.window,
            threads: c.threads.max(1),
            cache: c.cache,
            format: c.format,
        };
        Ok((spec, c.print_spec))
    }
}
