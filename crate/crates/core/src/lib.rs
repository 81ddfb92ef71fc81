//! Ranked-ballot tabulation with majority-rule criterion checks.
//!
//! * [`ballots`]: ballot file parsing and weighted profiles.
//! * [`tabulation`]: plurality, instant runoff, pairwise matrices, Condorcet.
//! * [`criteria`]: core-support and broad-support checks over any social
//!   ranking, monotonicity and IIA failure searches.
//! * [`oracle`]: brute-force enumeration and seeded random profiles.

pub mod ballots;
pub mod criteria;
pub mod fixtures;
pub mod oracle;
pub mod tabulation;

pub use ballots::{parse_profile, BallotGroup, BallotProfile, Candidate, CandidateId, Fraction, Ranking};
pub use criteria::{
    check_broad_support, check_core_support, core_support_tally, find_monotonicity_violation,
    find_monotonicity_violations, iia_flip_report, major_set, CriterionReport, MonotonicityWitness, PairTally,
    SearchOptions, Verdict,
};
pub use tabulation::{
    condorcet_outcome, first_preferences, irv_ranking, pairwise_matrix, plurality_ranking, smith_set, CondorcetOutcome,
    PairwiseMatrix, RoundLog, SocialRanking, TiebreakPolicy,
};
