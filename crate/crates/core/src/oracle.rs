//! Brute-force verification: enumerate every social ranking, generate seeded
//! random profiles, and scan them for IRV/Condorcet agreement.
//!
//! # Random profiles
//!
//! Profiles are drawn from a SplitMix64 stream seeded directly with the 64-bit
//! seed (state = seed; each step adds `0x9e3779b97f4a7c15` and mixes). A
//! uniform index below `bound` is `(next_u64() as u128 * bound) >> 64`.
//! Each ballot starts from `[0, 1, .., n-1]` and is shuffled by Fisher-Yates,
//! walking `i` from `n-1` down to `1` and swapping `i` with a uniform index
//! below `i + 1`. The truncated variant then draws a length uniformly from
//! `1..=n` (one more draw) and keeps that prefix. Every ballot has weight 1
//! and the profile is normalized afterwards. Candidates are named `A`, `B`,
//! and so on.

use std::collections::BTreeSet;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ballots::{BallotGroup, BallotProfile, CandidateId, Ranking};
use crate::criteria::{check_broad_support, check_core_support, find_monotonicity_violation, CriteriaError};
use crate::fixtures;
use crate::tabulation::{
    condorcet_outcome, irv_ranking, pairwise_matrix, smith_set, CondorcetOutcome, SocialRanking, TiebreakPolicy,
};

/// Largest roster `all_rankings` will enumerate.
pub const MAX_ENUMERATED_CANDIDATES: usize = 8;

const MAX_GENERATED_CANDIDATES: usize = 26;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{0} candidates is too many to enumerate (limit {MAX_ENUMERATED_CANDIDATES})")]
    TooManyCandidates(usize),
    #[error("generated profiles need 1..={MAX_GENERATED_CANDIDATES} candidates, got {0}")]
    InvalidCandidateCount(usize),
    #[error("scan needs at least one trial")]
    NoTrials,
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
}

/// Every permutation of `0..n`, lexicographic by id.
pub fn all_rankings(n: usize) -> Result<Vec<SocialRanking>, OracleError> {
    if n > MAX_ENUMERATED_CANDIDATES {
        return Err(OracleError::TooManyCandidates(n));
    }
    let mut perm: Vec<CandidateId> = (0..n).map(CandidateId).collect();
    let mut out = Vec::new();
    loop {
        out.push(SocialRanking::new(perm.clone(), n).expect("permutation"));
        if !next_permutation(&mut perm) {
            return Ok(out);
        }
    }
}

fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v.iter().rposition(|x| *x > v[i]).expect("pivot has a successor");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// All rankings whose every pair is confirmed by a strict core-support
/// majority.
pub fn rankings_passing_core_support(profile: &BallotProfile) -> Result<BTreeSet<SocialRanking>, OracleError> {
    let mut passing = BTreeSet::new();
    for r in all_rankings(profile.candidate_count())? {
        if check_core_support(profile, &r)?.passed {
            passing.insert(r);
        }
    }
    Ok(passing)
}

/// All rankings whose every pair is confirmed by a strict full-ballot
/// majority.
pub fn rankings_passing_broad_support(profile: &BallotProfile) -> Result<BTreeSet<SocialRanking>, OracleError> {
    let mut passing = BTreeSet::new();
    for r in all_rankings(profile.candidate_count())? {
        if check_broad_support(profile, &r)?.passed {
            passing.insert(r);
        }
    }
    Ok(passing)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    /// Uniform full rankings.
    ImpartialCulture,
    /// Uniform full rankings cut to a uniform length in `1..=n`.
    Truncated,
    /// The bundled Alaska profile; size and seed are ignored.
    Fixture,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileGenerator {
    pub kind: ProfileKind,
    pub candidates: usize,
    pub ballots: u64,
    pub seed: u64,
}

impl ProfileGenerator {
    pub fn with_seed(self, seed: u64) -> Self {
        ProfileGenerator { seed, ..self }
    }
}

fn uniform_below(rng: &mut SplitMix64, bound: usize) -> usize {
    ((rng.next_u64() as u128 * bound as u128) >> 64) as usize
}

pub fn generate_profile(gen: &ProfileGenerator) -> Result<BallotProfile, OracleError> {
    if gen.kind == ProfileKind::Fixture {
        return Ok(fixtures::alaska());
    }
    let n = gen.candidates;
    if n == 0 || n > MAX_GENERATED_CANDIDATES {
        return Err(OracleError::InvalidCandidateCount(n));
    }
    let names: Vec<String> = (0..n).map(|i| ((b'A' + i as u8) as char).to_string()).collect();
    let mut rng = SplitMix64::seed_from_u64(gen.seed);
    let mut groups = Vec::with_capacity(gen.ballots as usize);
    for _ in 0..gen.ballots {
        let mut ids: Vec<CandidateId> = (0..n).map(CandidateId).collect();
        for i in (1..n).rev() {
            let j = uniform_below(&mut rng, i + 1);
            ids.swap(i, j);
        }
        if gen.kind == ProfileKind::Truncated {
            ids.truncate(1 + uniform_below(&mut rng, n));
        }
        groups.push(BallotGroup {
            ranking: Ranking::new(ids).expect("shuffled ids are distinct"),
            count: 1,
        });
    }
    Ok(BallotProfile::new(&names, groups).expect("generated profile is valid"))
}

/// Three-candidate disagreement pattern: the Condorcet winner is last under
/// IRV and the IRV winner is second in the Condorcet order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisagreementPattern {
    /// Three-candidate profiles with a tie-free IRV count, a transitive
    /// Condorcet order, and different winners.
    pub applicable: u64,
    pub holds: u64,
    /// Seeds of profiles where the pattern fails.
    pub counterexamples: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub generator: ProfileGenerator,
    pub trials: u64,
    /// Profiles whose IRV count hit a tie (error-on-tie policy).
    pub irv_ties: u64,
    /// Profiles with a transitive Condorcet order.
    pub condorcet_rankings: u64,
    /// Profiles without one (cycles or pairwise ties).
    pub condorcet_cycles: u64,
    /// Profiles with both a tie-free IRV winner and a Condorcet winner.
    pub compared: u64,
    pub agree: u64,
    pub disagree: u64,
    /// Tie-free profiles with a single-group promotion witness.
    pub monotonicity_witnesses: u64,
    pub disagreement_pattern: DisagreementPattern,
}

/// Runs `trials` profiles with seeds `gen.seed`, `gen.seed + 1`, ... (wrapping).
pub fn agreement_scan(gen: &ProfileGenerator, trials: u64) -> Result<ScanSummary, OracleError> {
    if trials == 0 {
        return Err(OracleError::NoTrials);
    }
    let mut s = ScanSummary {
        generator: *gen,
        trials,
        irv_ties: 0,
        condorcet_rankings: 0,
        condorcet_cycles: 0,
        compared: 0,
        agree: 0,
        disagree: 0,
        monotonicity_witnesses: 0,
        disagreement_pattern: DisagreementPattern::default(),
    };
    for t in 0..trials {
        let seed = gen.seed.wrapping_add(t);
        let profile = generate_profile(&gen.with_seed(seed))?;
        let matrix = pairwise_matrix(&profile);
        let outcome = condorcet_outcome(&matrix);
        match &outcome {
            CondorcetOutcome::Ranking(_) => s.condorcet_rankings += 1,
            CondorcetOutcome::Cycle(_) => s.condorcet_cycles += 1,
        }
        // A singleton Smith set strictly beats everyone else.
        let smith = smith_set(&matrix);
        let condorcet_winner = (smith.len() == 1).then(|| *smith.iter().next().expect("singleton"));

        let irv = match irv_ranking(&profile, TiebreakPolicy::ErrorOnTie) {
            Ok(irv) => irv,
            Err(_) => {
                s.irv_ties += 1;
                continue;
            }
        };
        if find_monotonicity_violation(&profile, TiebreakPolicy::ErrorOnTie)?.is_some() {
            s.monotonicity_witnesses += 1;
        }
        let Some(cw) = condorcet_winner else {
            continue;
        };
        s.compared += 1;
        if cw == irv.winner() {
            s.agree += 1;
            continue;
        }
        s.disagree += 1;
        if let (3, Some(order)) = (profile.candidate_count(), outcome.ranking()) {
            let p = &mut s.disagreement_pattern;
            p.applicable += 1;
            if irv.ranking.position(cw) == Some(2) && order.position(irv.winner()) == Some(1) {
                p.holds += 1;
            } else {
                p.counterexamples.push(seed);
            }
        }
    }
    Ok(s)
}
