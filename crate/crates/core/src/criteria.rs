//! Majority-rule criteria checked against a proposed social ranking, and
//! searches for monotonicity and independence-of-irrelevant-alternatives
//! failures of instant runoff.
//!
//! Two ways of running a pair election between X (above) and Y (below) are
//! modelled:
//!
//! * **core support**: only ballots whose highest-ranked *major* candidate
//!   relative to Y is X or Y are counted. Major candidates relative to Y are Y
//!   itself plus everyone ranked above Y; the rest are minor and are skipped
//!   when reading a ballot.
//! * **broad support**: every ballot expressing a preference between X and Y
//!   counts (the Condorcet condition).
//!
//! Instant runoff is the unique method whose output always passes the core
//! support check; the oracle module verifies this by enumeration.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ballots::{BallotProfile, CandidateId, Ranking};
use crate::tabulation::{
    first_preferences, irv_ranking, pairwise_matrix, IrvResult, RoundLog, SocialRanking, TabulationError,
    TiebreakPolicy,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CriteriaError {
    #[error("{x} is not ranked strictly above {y}")]
    NotAbove { x: CandidateId, y: CandidateId },
    #[error("ranking has {ranking} candidates but the roster has {roster}")]
    RosterMismatch { ranking: usize, roster: usize },
    #[error("candidate {0} is not on the roster")]
    UnknownCandidate(CandidateId),
    #[error("IIA analysis needs at least 3 candidates, the roster has {0}")]
    RosterTooSmall(usize),
    #[error("exhaustive search would try {0} manipulations, above the limit of {EXHAUSTIVE_LIMIT}")]
    SearchTooLarge(u128),
    #[error(transparent)]
    Tabulation(#[from] TabulationError),
}

/// Candidates that are major relative to `y`: `y` and everyone above it.
pub fn major_set(ranking: &SocialRanking, y: CandidateId) -> BTreeSet<CandidateId> {
    match ranking.position(y) {
        Some(pos) => ranking.order()[..=pos].iter().copied().collect(),
        None => BTreeSet::new(),
    }
}

/// Candidates strictly below `y`.
pub fn minor_set(ranking: &SocialRanking, y: CandidateId) -> BTreeSet<CandidateId> {
    match ranking.position(y) {
        Some(pos) => ranking.order()[pos + 1..].iter().copied().collect(),
        None => BTreeSet::new(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum BallotRestriction {
    CoreSupport { relative_to: CandidateId },
    AllBallots,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairTally {
    pub x: CandidateId,
    pub y: CandidateId,
    pub x_votes: u64,
    pub y_votes: u64,
    /// Ballots counted for neither side, including ones excluded by the
    /// restriction.
    pub abstain: u64,
    pub restriction: BallotRestriction,
}

impl PairTally {
    pub fn verdict(&self) -> Verdict {
        match self.x_votes.cmp(&self.y_votes) {
            std::cmp::Ordering::Greater => Verdict::Pass,
            std::cmp::Ordering::Equal => Verdict::Tie,
            std::cmp::Ordering::Less => Verdict::Fail,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Tie,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Tie => "TIE",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    CoreSupport,
    BroadSupport,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairVerdict {
    pub tally: PairTally,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: Criterion,
    pub ranking: SocialRanking,
    /// One entry per unordered pair, X above Y, in ranking order.
    pub pairs: Vec<PairVerdict>,
    pub passed: bool,
}

fn check_roster(profile: &BallotProfile, ranking: &SocialRanking) -> Result<(), CriteriaError> {
    if ranking.len() != profile.candidate_count() {
        return Err(CriteriaError::RosterMismatch {
            ranking: ranking.len(),
            roster: profile.candidate_count(),
        });
    }
    Ok(())
}

/// Pair election between `x` and `y` counting only their core support
/// relative to `y`.
pub fn core_support_tally(
    profile: &BallotProfile,
    ranking: &SocialRanking,
    x: CandidateId,
    y: CandidateId,
) -> Result<PairTally, CriteriaError> {
    if !ranking.is_above(x, y) {
        return Err(CriteriaError::NotAbove { x, y });
    }
    let major = major_set(ranking, y);
    let prefs = first_preferences(profile, &major);
    let x_votes = prefs.votes(x).unwrap_or(0);
    let y_votes = prefs.votes(y).unwrap_or(0);
    Ok(PairTally {
        x,
        y,
        x_votes,
        y_votes,
        abstain: profile.total_ballots() - x_votes - y_votes,
        restriction: BallotRestriction::CoreSupport { relative_to: y },
    })
}

fn report(criterion: Criterion, ranking: &SocialRanking, pairs: Vec<PairTally>) -> CriterionReport {
    let pairs: Vec<PairVerdict> = pairs
        .into_iter()
        .map(|tally| PairVerdict {
            verdict: tally.verdict(),
            tally,
        })
        .collect();
    CriterionReport {
        criterion,
        ranking: ranking.clone(),
        passed: pairs.iter().all(|p| p.verdict == Verdict::Pass),
        pairs,
    }
}

fn ordered_pairs(ranking: &SocialRanking) -> impl Iterator<Item = (CandidateId, CandidateId)> + '_ {
    let order = ranking.order();
    (0..order.len()).flat_map(move |i| order[i + 1..].iter().map(move |&y| (order[i], y)))
}

pub fn check_core_support(profile: &BallotProfile, ranking: &SocialRanking) -> Result<CriterionReport, CriteriaError> {
    check_roster(profile, ranking)?;
    let pairs = ordered_pairs(ranking)
        .map(|(x, y)| core_support_tally(profile, ranking, x, y))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(report(Criterion::CoreSupport, ranking, pairs))
}

pub fn check_broad_support(profile: &BallotProfile, ranking: &SocialRanking) -> Result<CriterionReport, CriteriaError> {
    check_roster(profile, ranking)?;
    let matrix = pairwise_matrix(profile);
    let pairs = ordered_pairs(ranking)
        .map(|(x, y)| PairTally {
            x,
            y,
            x_votes: matrix.beats(x, y),
            y_votes: matrix.beats(y, x),
            abstain: matrix.abstain(x, y),
            restriction: BallotRestriction::AllBallots,
        })
        .collect();
    Ok(report(Criterion::BroadSupport, ranking, pairs))
}

/// Exhaustive multi-group search refuses to enumerate more than this many
/// manipulation vectors.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// The winner is raised to first place and loses.
    Promote,
    /// A loser is lowered to last listed place and wins.
    Demote,
}

/// `count` ballots of the group with ranking `source` recast as `transformed`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupMove {
    pub source: Ranking,
    pub count: u64,
    pub transformed: Ranking,
}

/// A concrete change of ballots that exposes a monotonicity failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityWitness {
    pub direction: Direction,
    /// Candidate moved on the ballots.
    pub candidate: CandidateId,
    pub moves: Vec<GroupMove>,
    /// Total ballots changed.
    pub moved: u64,
    pub original_winner: CandidateId,
    pub new_winner: CandidateId,
    pub original_rounds: Vec<RoundLog>,
    pub new_rounds: Vec<RoundLog>,
}

impl MonotonicityWitness {
    /// Applies the recorded moves to `profile`.
    pub fn apply(&self, profile: &BallotProfile) -> Option<BallotProfile> {
        let mut moves = Vec::with_capacity(self.moves.len());
        for m in &self.moves {
            let index = profile.groups().iter().position(|g| g.ranking == m.source)?;
            if profile.groups()[index].count < m.count {
                return None;
            }
            moves.push((index, m.count, m.transformed.clone()));
        }
        Some(profile.with_moved_ballots(&moves))
    }

    /// True when re-running instant runoff on the moved profile reproduces the
    /// recorded winners.
    pub fn replays(&self, profile: &BallotProfile, policy: TiebreakPolicy) -> bool {
        let before = match irv_ranking(profile, policy) {
            Ok(r) => r,
            Err(_) => return false,
        };
        let Some(moved) = self.apply(profile) else {
            return false;
        };
        let after = match irv_ranking(&moved, policy) {
            Ok(r) => r,
            Err(_) => return false,
        };
        let failure = match self.direction {
            Direction::Promote => after.winner() != self.candidate,
            Direction::Demote => after.winner() == self.candidate,
        };
        before.winner() == self.original_winner && after.winner() == self.new_winner && failure
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchOptions {
    pub promote: bool,
    pub demote: bool,
    /// Promote direction only: try every combination of per-group counts
    /// instead of one group at a time.
    pub exhaustive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub winner: CandidateId,
    pub promote: Option<MonotonicityWitness>,
    pub demote: Option<MonotonicityWitness>,
}

/// Smallest single-group promotion of the instant-runoff winner that makes
/// them lose. Ties in `k` go to the earliest group.
pub fn find_monotonicity_violation(
    profile: &BallotProfile,
    policy: TiebreakPolicy,
) -> Result<Option<MonotonicityWitness>, CriteriaError> {
    let base = irv_ranking(profile, policy)?;
    Ok(single_group_search(
        profile,
        policy,
        &base,
        Direction::Promote,
        base.winner(),
    ))
}

pub fn find_monotonicity_violations(
    profile: &BallotProfile,
    policy: TiebreakPolicy,
    options: &SearchOptions,
) -> Result<MonotonicityReport, CriteriaError> {
    let base = irv_ranking(profile, policy)?;
    let winner = base.winner();
    let promote = match (options.promote, options.exhaustive) {
        (false, _) => None,
        (true, false) => single_group_search(profile, policy, &base, Direction::Promote, winner),
        (true, true) => exhaustive_promote_search(profile, policy, &base)?,
    };
    let demote = if options.demote {
        // Losers in social-ranking order; the first hit at minimal k wins.
        let mut best: Option<MonotonicityWitness> = None;
        for &loser in &base.ranking.order()[1..] {
            if let Some(w) = single_group_search(profile, policy, &base, Direction::Demote, loser) {
                if best.as_ref().is_none_or(|b| w.moved < b.moved) {
                    best = Some(w);
                }
            }
        }
        best
    } else {
        None
    };
    Ok(MonotonicityReport {
        winner,
        promote,
        demote,
    })
}

fn transform(direction: Direction, ranking: &Ranking, candidate: CandidateId) -> Option<Ranking> {
    let moved = match direction {
        Direction::Promote => ranking.promoted(candidate),
        Direction::Demote => ranking.demoted(candidate),
    };
    (moved != *ranking).then_some(moved)
}

fn is_failure(direction: Direction, candidate: CandidateId, new_winner: CandidateId) -> bool {
    match direction {
        Direction::Promote => new_winner != candidate,
        Direction::Demote => new_winner == candidate,
    }
}

fn single_group_search(
    profile: &BallotProfile,
    policy: TiebreakPolicy,
    base: &IrvResult,
    direction: Direction,
    candidate: CandidateId,
) -> Option<MonotonicityWitness> {
    let eligible: Vec<(usize, Ranking)> = profile
        .groups()
        .iter()
        .enumerate()
        .filter_map(|(i, g)| transform(direction, &g.ranking, candidate).map(|t| (i, t)))
        .collect();
    let max_k = eligible
        .iter()
        .map(|(i, _)| profile.groups()[*i].count)
        .max()
        .unwrap_or(0);
    for k in 1..=max_k {
        for (index, transformed) in &eligible {
            let group = &profile.groups()[*index];
            if group.count < k {
                continue;
            }
            let moved = profile.with_moved_ballots(&[(*index, k, transformed.clone())]);
            // Re-runs that hit a tie do not produce a definite new winner.
            let Ok(after) = irv_ranking(&moved, policy) else {
                continue;
            };
            if is_failure(direction, candidate, after.winner()) {
                return Some(MonotonicityWitness {
                    direction,
                    candidate,
                    moves: vec![GroupMove {
                        source: group.ranking.clone(),
                        count: k,
                        transformed: transformed.clone(),
                    }],
                    moved: k,
                    original_winner: base.winner(),
                    new_winner: after.winner(),
                    original_rounds: base.rounds.clone(),
                    new_rounds: after.rounds,
                });
            }
        }
    }
    None
}

/// Tries every vector of per-group promotion counts; the witness minimizes the
/// total moved, then prefers moving ballots from earlier groups.
fn exhaustive_promote_search(
    profile: &BallotProfile,
    policy: TiebreakPolicy,
    base: &IrvResult,
) -> Result<Option<MonotonicityWitness>, CriteriaError> {
    let winner = base.winner();
    let eligible: Vec<(usize, Ranking)> = profile
        .groups()
        .iter()
        .enumerate()
        .filter_map(|(i, g)| transform(Direction::Promote, &g.ranking, winner).map(|t| (i, t)))
        .collect();
    let size: u128 = eligible
        .iter()
        .map(|(i, _)| profile.groups()[*i].count as u128 + 1)
        .try_fold(1u128, |acc, n| acc.checked_mul(n))
        .unwrap_or(u128::MAX);
    if size > EXHAUSTIVE_LIMIT {
        return Err(CriteriaError::SearchTooLarge(size));
    }

    let limits: Vec<u64> = eligible.iter().map(|(i, _)| profile.groups()[*i].count).collect();
    let mut counts = vec![0u64; eligible.len()];
    let mut best: Option<(u64, Vec<u64>, IrvResult)> = None;
    loop {
        // Odometer increment, last position fastest.
        let mut pos = counts.len();
        loop {
            if pos == 0 {
                return Ok(best.map(|(total, counts, after)| {
                    let moves = eligible
                        .iter()
                        .zip(&counts)
                        .filter(|(_, &k)| k > 0)
                        .map(|((i, t), &k)| GroupMove {
                            source: profile.groups()[*i].ranking.clone(),
                            count: k,
                            transformed: t.clone(),
                        })
                        .collect();
                    MonotonicityWitness {
                        direction: Direction::Promote,
                        candidate: winner,
                        moves,
                        moved: total,
                        original_winner: winner,
                        new_winner: after.winner(),
                        original_rounds: base.rounds.clone(),
                        new_rounds: after.rounds,
                    }
                }));
            }
            pos -= 1;
            if counts[pos] < limits[pos] {
                counts[pos] += 1;
                counts[pos + 1..].iter_mut().for_each(|c| *c = 0);
                break;
            }
        }
        let total: u64 = counts.iter().sum();
        let better = match &best {
            None => true,
            Some((bt, bc, _)) => total < *bt || (total == *bt && counts > *bc),
        };
        if !better {
            continue;
        }
        let moves: Vec<_> = eligible
            .iter()
            .zip(&counts)
            .filter(|(_, &k)| k > 0)
            .map(|((i, t), &k)| (*i, k, t.clone()))
            .collect();
        let moved = profile.with_moved_ballots(&moves);
        if let Ok(after) = irv_ranking(&moved, policy) {
            if after.winner() != winner {
                best = Some((total, counts.clone(), after));
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairFlip {
    /// Above in the full-roster ranking.
    pub before_above: CandidateId,
    pub before_below: CandidateId,
    /// Head-to-head counts once the removed candidate is gone; these decide
    /// the pair whenever it reaches the final round.
    pub above_votes: u64,
    pub below_votes: u64,
    pub abstain: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IiaReport {
    pub removed: CandidateId,
    pub before: SocialRanking,
    /// Ranking of the reduced election, in original candidate ids.
    pub after: Vec<CandidateId>,
    pub flips: Vec<PairFlip>,
}

/// Compares instant-runoff orders with and without `removed`.
pub fn iia_flip_report(
    profile: &BallotProfile,
    removed: CandidateId,
    policy: TiebreakPolicy,
) -> Result<IiaReport, CriteriaError> {
    let n = profile.candidate_count();
    if !profile.contains(removed) {
        return Err(CriteriaError::UnknownCandidate(removed));
    }
    if n < 3 {
        return Err(CriteriaError::RosterTooSmall(n));
    }
    let before = irv_ranking(profile, policy)?.ranking;
    let survivors: Vec<CandidateId> = profile.candidate_ids().filter(|&c| c != removed).collect();
    let reduced = profile
        .without(removed)
        .expect("removed candidate was checked against the roster");
    let after_reduced = irv_ranking(&reduced, policy)?.ranking;
    let after: Vec<CandidateId> = after_reduced.order().iter().map(|c| survivors[c.0]).collect();
    let matrix = pairwise_matrix(&reduced);

    let mut flips = Vec::new();
    for (i, &x) in before.order().iter().enumerate() {
        for &y in &before.order()[i + 1..] {
            if x == removed || y == removed {
                continue;
            }
            let pos = |c| after.iter().position(|&a| a == c);
            if pos(y) < pos(x) {
                let (rx, ry) = (reduced_id(&survivors, x), reduced_id(&survivors, y));
                flips.push(PairFlip {
                    before_above: x,
                    before_below: y,
                    above_votes: matrix.beats(rx, ry),
                    below_votes: matrix.beats(ry, rx),
                    abstain: matrix.abstain(rx, ry),
                });
            }
        }
    }
    Ok(IiaReport {
        removed,
        before,
        after,
        flips,
    })
}

fn reduced_id(survivors: &[CandidateId], original: CandidateId) -> CandidateId {
    CandidateId(survivors.iter().position(|&c| c == original).expect("survivor"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballots::parse_profile;
    use crate::fixtures::alaska;

    fn ranking(p: &BallotProfile, text: &str) -> SocialRanking {
        SocialRanking::parse(p, text).unwrap()
    }

    fn id(p: &BallotProfile, name: &str) -> CandidateId {
        p.id_of(name).unwrap()
    }

    #[test]
    fn major_sets() {
        let p = alaska();
        let r = ranking(&p, "Peltola>Palin>Begich");
        let all: BTreeSet<_> = p.candidate_ids().collect();
        assert_eq!(major_set(&r, id(&p, "Begich")), all);
        assert_eq!(
            major_set(&r, id(&p, "Peltola")),
            [id(&p, "Peltola")].into_iter().collect()
        );
        assert_eq!(minor_set(&r, id(&p, "Peltola")).len(), 2);
        let solo = parse_profile("#candidates: A\n").unwrap();
        let r = SocialRanking::parse(&solo, "A").unwrap();
        assert_eq!(major_set(&r, CandidateId(0)), [CandidateId(0)].into_iter().collect());
    }

    #[test]
    fn core_support_tallies_alaska() {
        let p = alaska();
        let r = ranking(&p, "Peltola>Palin>Begich");
        let (begich, palin, peltola) = (id(&p, "Begich"), id(&p, "Palin"), id(&p, "Peltola"));

        let t = core_support_tally(&p, &r, peltola, begich).unwrap();
        assert_eq!((t.x_votes, t.y_votes), (75_799, 53_810));
        let t = core_support_tally(&p, &r, palin, begich).unwrap();
        assert_eq!((t.x_votes, t.y_votes), (58_973, 53_810));
        let t = core_support_tally(&p, &r, peltola, palin).unwrap();
        assert_eq!((t.x_votes, t.y_votes, t.abstain), (91_266, 86_026, 11_290));

        assert_eq!(
            core_support_tally(&p, &r, begich, palin),
            Err(CriteriaError::NotAbove { x: begich, y: palin })
        );
    }

    #[test]
    fn core_support_passes_for_irv_order() {
        let p = alaska();
        let rep = check_core_support(&p, &ranking(&p, "Peltola>Palin>Begich")).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.pairs.len(), 3);
    }

    #[test]
    fn core_support_fails_for_condorcet_order() {
        let p = alaska();
        let rep = check_core_support(&p, &ranking(&p, "Begich>Peltola>Palin")).unwrap();
        assert!(!rep.passed);
        let (begich, palin) = (id(&p, "Begich"), id(&p, "Palin"));
        let failing: Vec<_> = rep.pairs.iter().filter(|pv| pv.verdict != Verdict::Pass).collect();
        assert_eq!(failing.len(), 1);
        let t = failing[0].tally;
        assert_eq!((t.x, t.y), (begich, palin));
        assert_eq!((t.x_votes, t.y_votes), (53_810, 58_973));
    }

    #[test]
    fn single_candidate_is_vacuous() {
        let p = parse_profile("3,A\n").unwrap();
        let r = SocialRanking::parse(&p, "A").unwrap();
        let rep = check_core_support(&p, &r).unwrap();
        assert!(rep.passed && rep.pairs.is_empty());
    }

    #[test]
    fn broad_support_alaska() {
        let p = alaska();
        assert!(
            check_broad_support(&p, &ranking(&p, "Begich>Peltola>Palin"))
                .unwrap()
                .passed
        );
        let rep = check_broad_support(&p, &ranking(&p, "Peltola>Palin>Begich")).unwrap();
        assert!(!rep.passed);
        let begich = id(&p, "Begich");
        for pv in &rep.pairs {
            let involves_begich = pv.tally.x == begich || pv.tally.y == begich;
            assert_eq!(pv.verdict == Verdict::Fail, involves_begich);
        }
    }

    #[test]
    fn tie_verdict_fails_overall() {
        let p = parse_profile("#candidates: A,B\n2,A\n2,B\n").unwrap();
        let rep = check_broad_support(&p, &SocialRanking::parse(&p, "A>B").unwrap()).unwrap();
        assert_eq!(rep.pairs[0].verdict, Verdict::Tie);
        assert!(!rep.passed);
    }

    #[test]
    fn roster_mismatch() {
        let p = alaska();
        let other = parse_profile("1,A>B\n").unwrap();
        let r = SocialRanking::parse(&other, "A>B").unwrap();
        assert!(matches!(
            check_core_support(&p, &r),
            Err(CriteriaError::RosterMismatch { .. })
        ));
    }

    #[test]
    fn monotonicity_alaska() {
        let p = alaska();
        let w = find_monotonicity_violation(&p, TiebreakPolicy::ErrorOnTie)
            .unwrap()
            .expect("witness");
        assert_eq!(w.moved, 5_164);
        assert_eq!(w.original_winner, id(&p, "Peltola"));
        assert_eq!(w.new_winner, id(&p, "Begich"));
        assert_eq!(p.format_ranking(w.moves[0].source.ids()), "Palin");
        assert_eq!(p.format_ranking(w.moves[0].transformed.ids()), "Peltola>Palin");
        let first = &w.new_rounds[0];
        assert_eq!(first.votes(id(&p, "Palin")), Some(53_809));
        assert_eq!(first.eliminated, id(&p, "Palin"));
        let last = w.new_rounds.last().unwrap();
        assert_eq!(last.votes(id(&p, "Begich")), Some(87_859));
        assert_eq!(last.votes(id(&p, "Peltola")), Some(84_615));
        assert!(w.replays(&p, TiebreakPolicy::ErrorOnTie));
    }

    #[test]
    fn no_witness_for_two_candidates() {
        let p = parse_profile("6,A>B\n3,B>A\n2,B\n").unwrap();
        assert_eq!(
            find_monotonicity_violation(&p, TiebreakPolicy::ErrorOnTie).unwrap(),
            None
        );
    }

    #[test]
    fn no_promote_witness_with_majority_winner() {
        let p = parse_profile("6,A>B>C\n3,B>C>A\n2,C>B\n").unwrap();
        let opts = SearchOptions {
            promote: true,
            demote: false,
            exhaustive: true,
        };
        let rep = find_monotonicity_violations(&p, TiebreakPolicy::ErrorOnTie, &opts).unwrap();
        assert_eq!(rep.promote, None);
    }

    #[test]
    fn both_directions_on_constructed_profile() {
        // First preferences L 41, W 32, X 27: X goes out and W wins 59-41.
        let p = parse_profile("#candidates: L,W,X\n41,L>X>W\n32,W>L>X\n27,X>W>L\n").unwrap();
        let (l, w, x) = (CandidateId(0), CandidateId(1), CandidateId(2));
        let opts = SearchOptions {
            promote: true,
            demote: true,
            exhaustive: false,
        };
        let rep = find_monotonicity_violations(&p, TiebreakPolicy::ErrorOnTie, &opts).unwrap();
        assert_eq!(rep.winner, w);

        // Six L>X>W ballots demoting L: L 35, W 32, X 33, then L beats X 67-33.
        // k = 5 is a 32-32 tie at the bottom.
        let demote = rep.demote.expect("demote witness");
        assert_eq!((demote.candidate, demote.moved, demote.new_winner), (l, 6, l));
        assert_eq!(p.format_ranking(demote.moves[0].transformed.ids()), "X>W>L");
        assert!(demote.replays(&p, TiebreakPolicy::ErrorOnTie));

        // Fifteen L>X>W ballots promoting W: L 26 goes out, X beats W 53-47.
        // k = 14 is a 27-27 tie at the bottom.
        let promote = rep.promote.expect("promote witness");
        assert_eq!((promote.candidate, promote.moved, promote.new_winner), (w, 15, x));
        assert_eq!(p.format_ranking(promote.moves[0].transformed.ids()), "W>L>X");
        assert!(promote.replays(&p, TiebreakPolicy::ErrorOnTie));
    }

    #[test]
    fn exhaustive_search_on_constructed_profile() {
        // Moving a ballots of L>X>W and b of X>W>L: L is out iff a > 14 + b, and
        // X then wins iff a + b < 18, so a = 15, b = 0 is optimal.
        let p = parse_profile("#candidates: L,W,X\n41,L>X>W\n32,W>L>X\n27,X>W>L\n").unwrap();
        let opts = SearchOptions {
            promote: true,
            demote: false,
            exhaustive: true,
        };
        let w = find_monotonicity_violations(&p, TiebreakPolicy::ErrorOnTie, &opts)
            .unwrap()
            .promote
            .expect("witness");
        assert_eq!(w.moved, 15);
        assert_eq!(w.moves.len(), 1);
        assert_eq!(p.format_ranking(w.moves[0].source.ids()), "L>X>W");
        assert!(w.replays(&p, TiebreakPolicy::ErrorOnTie));
    }

    #[test]
    fn exhaustive_search_guard() {
        let mut text = String::from("#candidates: A,B,C\n");
        for i in 0..30 {
            // Distinct rankings keep groups separate.
            let r = ["B>A>C", "B>C>A", "C>A>B", "C>B>A", "B", "C"][i % 6];
            text.push_str(&format!("{},{}\n", 10 + i, r));
        }
        text.push_str("1000,A\n");
        let p = parse_profile(&text).unwrap();
        let opts = SearchOptions {
            promote: true,
            demote: false,
            exhaustive: true,
        };
        // Merged into 6 groups: sizes far beyond the limit.
        let res = find_monotonicity_violations(&p, TiebreakPolicy::ErrorOnTie, &opts);
        assert!(matches!(res, Err(CriteriaError::SearchTooLarge(_))));
    }

    #[test]
    fn iia_remove_palin_flips() {
        let p = alaska();
        let rep = iia_flip_report(&p, id(&p, "Palin"), TiebreakPolicy::ErrorOnTie).unwrap();
        assert_eq!(rep.flips.len(), 1);
        let f = rep.flips[0];
        assert_eq!((f.before_above, f.before_below), (id(&p, "Peltola"), id(&p, "Begich")));
        assert_eq!((f.below_votes, f.above_votes), (87_859, 79_451));
        assert_eq!(rep.after, vec![id(&p, "Begich"), id(&p, "Peltola")]);
    }

    #[test]
    fn iia_remove_begich_no_flip() {
        let p = alaska();
        let rep = iia_flip_report(&p, id(&p, "Begich"), TiebreakPolicy::ErrorOnTie).unwrap();
        assert!(rep.flips.is_empty());
        assert_eq!(rep.after, vec![id(&p, "Peltola"), id(&p, "Palin")]);
    }

    #[test]
    fn iia_bullet_votes_never_flip() {
        let p = parse_profile("5,A\n4,B\n3,C\n").unwrap();
        for c in p.candidate_ids() {
            assert!(iia_flip_report(&p, c, TiebreakPolicy::ErrorOnTie)
                .unwrap()
                .flips
                .is_empty());
        }
    }

    #[test]
    fn iia_errors() {
        let p = parse_profile("2,A>B\n1,B\n").unwrap();
        assert_eq!(
            iia_flip_report(&p, CandidateId(0), TiebreakPolicy::ErrorOnTie),
            Err(CriteriaError::RosterTooSmall(2))
        );
        let p = alaska();
        assert_eq!(
            iia_flip_report(&p, CandidateId(9), TiebreakPolicy::ErrorOnTie),
            Err(CriteriaError::UnknownCandidate(CandidateId(9)))
        );
    }
}
