use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qconc",
    version,
    about = "Lower bounds on multipartite concurrence and k-nonseparability witnesses"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pairwise concurrences and every applicable lower bound on C.
    Bound(BoundArgs),
    /// k-nonseparability verdicts from certified lower bounds.
    Witness(WitnessArgs),
    /// Evaluate a noisy family over a parameter grid and solve detection crossings.
    Sweep(SweepArgs),
    /// Re-run the built-in reference examples and compare against known values.
    Reproduce(ReproduceArgs),
    /// k-nonseparability thresholds, or detection crossings for a family.
    Threshold(ThresholdArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    /// W_n mixed with white noise (parameter t).
    WNoise,
    /// Dicke D_n^k mixed with white noise (parameter t).
    DickeNoise,
    /// (|0011>+|0101>+|0110>+|1010>)/2 with white noise (parameter a).
    Ex3,
    /// (|0000>+|0011>+|1100>+|1111>)/2 with white noise (parameter t).
    Ex4,
    /// GHZ_n mixed with white noise (parameter p).
    GhzNoise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceName {
    T1,
    T2,
    T3,
    GhzExact,
    PureExact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// Built-in noisy family.
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    /// Number of qubits for families that take one (default 4).
    #[arg(long)]
    pub n: Option<usize>,
    /// Excitation number for dicke-noise (default n/2).
    #[arg(long)]
    pub excitations: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Density matrix file (JSON or CSV).
    #[arg(long, conflicts_with_all = ["family", "param"])]
    pub state: Option<PathBuf>,
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Family parameter in [0, 1].
    #[arg(long)]
    pub param: Option<f64>,
    /// Clamp small negative eigenvalues of a loaded matrix instead of rejecting it.
    #[arg(long)]
    pub clamp_eigenvalues: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Partition count to test (repeatable; default 2..=N).
    #[arg(long = "k")]
    pub k: Vec<usize>,
    /// Lower-bound source (repeatable; default every applicable one).
    #[arg(long = "source", value_enum)]
    pub sources: Vec<SourceName>,
    /// Exit with status 1 unless every requested k is detected by some source.
    #[arg(long)]
    pub require_detection: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Parameter grid as start:stop:steps.
    #[arg(long, default_value = "0:1:101")]
    pub grid: Grid,
    #[arg(long = "k")]
    pub k: Vec<usize>,
    #[arg(long = "source", value_enum)]
    pub sources: Vec<SourceName>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    /// Example number 1..=6 (default: all).
    #[arg(value_parser = clap::value_parser!(u8).range(1..=6))]
    pub example: Option<u8>,
    /// Seed for the randomized soundness spot checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Haar samples per spot check.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long = "k")]
    pub k: Vec<usize>,
    /// Local dimension of each party (formula only).
    #[arg(long, default_value_t = 2)]
    pub local_dim: usize,
    #[arg(long = "source", value_enum)]
    pub sources: Vec<SourceName>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Uniform grid `start:stop:steps` with both ends included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (i as f64 / last)
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err("expected start:stop:steps".into());
        };
        let start: f64 = a.trim().parse().map_err(|e| format!("start: {e}"))?;
        let stop: f64 = b.trim().parse().map_err(|e| format!("stop: {e}"))?;
        let steps: usize = n.trim().parse().map_err(|e| format!("steps: {e}"))?;
        if !(0.0 <= start && start <= stop && stop <= 1.0) {
            return Err("need 0 <= start <= stop <= 1".into());
        }
        if steps < 2 {
            return Err("need steps >= 2".into());
        }
        Ok(Grid { start, stop, steps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn clap_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn grid_parsing() {
        let g: Grid = "0:1:101".parse().unwrap();
        let p = g.points();
        assert_eq!(p.len(), 101);
        assert_eq!(p[0], 0.0);
        assert_eq!(p[100], 1.0);
        assert!((p[37] - 0.37).abs() < 1e-15);
        for bad in ["0:1", "0.5:0.2:10", "0:1.5:10", "0:1:1", "a:1:3"] {
            assert!(bad.parse::<Grid>().is_err(), "{bad}");
        }
    }

    #[test]
    fn repeatable_flags() {
        let cli = Cli::try_parse_from([
            "qconc", "witness", "--family", "ex4", "--param", "0.95", "--k", "2", "--k", "3",
            "--source", "t1", "--source", "pure-exact",
        ])
        .unwrap();
        let Command::Witness(w) = cli.command else { panic!() };
        assert_eq!(w.k, vec![2, 3]);
        assert_eq!(w.sources, vec![SourceName::T1, SourceName::PureExact]);
    }

    #[test]
    fn state_and_family_conflict() {
        assert!(Cli::try_parse_from(["qconc", "bound", "--state", "x.json", "--family", "ex4"]).is_err());
        assert!(Cli::try_parse_from(["qconc", "reproduce", "7"]).is_err());
    }
}
