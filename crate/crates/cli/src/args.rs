use std::path::PathBuf;

use ballotlab::oracle::ProfileKind;
use ballotlab::TiebreakPolicy;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ballotlab",
    version,
    about = "Ranked-ballot tabulation and majority-rule criterion checks"
)]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Social ranking under one method.
    Tabulate {
        #[arg(long, value_enum)]
        method: Method,
        #[command(flatten)]
        tie: Tiebreak,
        file: PathBuf,
    },
    /// Head-to-head counts over all ballots.
    Pairwise { file: PathBuf },
    /// Check a social ranking against a majority-rule criterion.
    Check {
        #[arg(long, value_enum)]
        criterion: CriterionArg,
        /// Ranking to audit, e.g. `A>B>C`.
        #[arg(long, conflicts_with = "from", required_unless_present = "from")]
        ranking: Option<String>,
        /// Audit the ranking produced by a method.
        #[arg(long, value_enum)]
        from: Option<Source>,
        #[command(flatten)]
        tie: Tiebreak,
        file: PathBuf,
    },
    /// Search for instant-runoff monotonicity failures.
    Monotonicity {
        #[arg(long, value_enum, default_value_t = DirectionArg::Promote)]
        direction: DirectionArg,
        /// Try every combination of per-group moves (small profiles only).
        #[arg(long)]
        exhaustive: bool,
        #[command(flatten)]
        tie: Tiebreak,
        file: PathBuf,
    },
    /// Pairs whose instant-runoff order flips when a candidate is removed.
    Iia {
        #[arg(long)]
        remove: String,
        #[command(flatten)]
        tie: Tiebreak,
        file: PathBuf,
    },
    /// IRV/Condorcet agreement over seeded random profiles.
    Scan {
        #[arg(long, value_enum, default_value_t = KindArg::ImpartialCulture)]
        kind: KindArg,
        #[arg(long, default_value_t = 3)]
        candidates: usize,
        #[arg(long, default_value_t = 25)]
        ballots: u64,
        #[arg(long, default_value_t = 42, conflicts_with = "fresh_seed")]
        seed: u64,
        /// Seed from the clock instead of `--seed`.
        #[arg(long)]
        fresh_seed: bool,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// IRV and Condorcet results side by side.
    Compare {
        #[command(flatten)]
        tie: Tiebreak,
        file: PathBuf,
    },
    /// Share of each candidate's first-preference ballots that rank someone else.
    ContinuationRate {
        #[arg(long)]
        candidate: Option<String>,
        file: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct Tiebreak {
    /// Elimination tie handling.
    #[arg(long, value_enum, default_value_t = TiebreakArg::Error)]
    pub tiebreak: TiebreakArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TiebreakArg {
    Error,
    LowestId,
}

impl From<TiebreakArg> for TiebreakPolicy {
    fn from(t: TiebreakArg) -> Self {
        match t {
            TiebreakArg::Error => TiebreakPolicy::ErrorOnTie,
            TiebreakArg::LowestId => TiebreakPolicy::LowestIdFirstEliminated,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Plurality,
    Irv,
    Condorcet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Core,
    Broad,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Irv,
    Condorcet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Promote,
    Demote,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    ImpartialCulture,
    Truncated,
    Fixture,
}

impl From<KindArg> for ProfileKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::ImpartialCulture => ProfileKind::ImpartialCulture,
            KindArg::Truncated => ProfileKind::Truncated,
            KindArg::Fixture => ProfileKind::Fixture,
        }
    }
}
