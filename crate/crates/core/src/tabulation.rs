//! Plurality, instant-runoff and Condorcet tabulation.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ballots::{BallotProfile, CandidateId};

/// A strict total order over the roster, winner first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SocialRanking(Vec<CandidateId>);

impl SocialRanking {
    /// Checks that `order` is a permutation of `0..candidates`.
    pub fn new(order: Vec<CandidateId>, candidates: usize) -> Result<Self, RankingError> {
        if order.len() != candidates {
            return Err(RankingError::WrongLength {
                expected: candidates,
                got: order.len(),
            });
        }
        let mut seen = vec![false; candidates];
        for c in &order {
            match seen.get_mut(c.0) {
                None => return Err(RankingError::UnknownCandidate(*c)),
                Some(true) => return Err(RankingError::Repeated(*c)),
                Some(slot) => *slot = true,
            }
        }
        Ok(SocialRanking(order))
    }

    /// Parses `A>B>C`, which must name every candidate exactly once.
    pub fn parse(profile: &BallotProfile, text: &str) -> Result<Self, RankingError> {
        let ranking = profile
            .parse_ranking(text)
            .map_err(|e| RankingError::Parse(e.to_string()))?;
        SocialRanking::new(ranking.ids().to_vec(), profile.candidate_count())
    }

    pub fn order(&self) -> &[CandidateId] {
        &self.0
    }

    pub fn winner(&self) -> CandidateId {
        self.0[0]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 0 for the winner.
    pub fn position(&self, id: CandidateId) -> Option<usize> {
        self.0.iter().position(|&c| c == id)
    }

    pub fn is_above(&self, x: CandidateId, y: CandidateId) -> bool {
        matches!((self.position(x), self.position(y)), (Some(px), Some(py)) if px < py)
    }

    pub fn display(&self, profile: &BallotProfile) -> String {
        self.0.iter().map(|&c| profile.name(c)).collect::<Vec<_>>().join(" > ")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RankingError {
    #[error("ranking lists {got} candidates but the roster has {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("candidate {0} is not on the roster")]
    UnknownCandidate(CandidateId),
    #[error("candidate {0} appears twice")]
    Repeated(CandidateId),
    #[error("{0}")]
    Parse(String),
}

/// How to choose among candidates tied for elimination.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TiebreakPolicy {
    #[default]
    ErrorOnTie,
    /// Among tied candidates the lowest id is eliminated (ranked lower) first.
    LowestIdFirstEliminated,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TabulationError {
    #[error("tie in round {round} between {tied:?}")]
    Tie { round: usize, tied: Vec<CandidateId> },
    #[error("roster is empty")]
    EmptyRoster,
    #[error("active candidate set is empty")]
    EmptyActiveSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateTally {
    pub candidate: CandidateId,
    pub votes: u64,
}

/// Ballot tallies over an active set: each ballot counts for its highest
/// listed active candidate, or as exhausted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstPreferences {
    /// Active candidates in id order.
    pub tallies: Vec<CandidateTally>,
    pub exhausted: u64,
}

impl FirstPreferences {
    pub fn votes(&self, candidate: CandidateId) -> Option<u64> {
        self.tallies.iter().find(|t| t.candidate == candidate).map(|t| t.votes)
    }

    pub fn counted(&self) -> u64 {
        self.tallies.iter().map(|t| t.votes).sum()
    }
}

pub fn first_preferences(profile: &BallotProfile, active: &BTreeSet<CandidateId>) -> FirstPreferences {
    let mut votes = vec![0u64; profile.candidate_count()];
    let mut exhausted = 0;
    for g in profile.groups() {
        match g.ranking.top_among(|c| active.contains(&c)) {
            Some(c) => votes[c.0] += g.count,
            None => exhausted += g.count,
        }
    }
    FirstPreferences {
        tallies: active
            .iter()
            .filter(|c| profile.contains(**c))
            .map(|&c| CandidateTally {
                candidate: c,
                votes: votes[c.0],
            })
            .collect(),
        exhausted,
    }
}

/// One elimination round of an instant-runoff count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundLog {
    pub round: usize,
    pub tallies: Vec<CandidateTally>,
    pub exhausted: u64,
    pub eliminated: CandidateId,
    /// Set when `eliminated` was picked from a tied minimum by the policy.
    pub tiebreak: bool,
}

impl RoundLog {
    pub fn active(&self) -> impl Iterator<Item = CandidateId> + '_ {
        self.tallies.iter().map(|t| t.candidate)
    }

    pub fn votes(&self, candidate: CandidateId) -> Option<u64> {
        self.tallies.iter().find(|t| t.candidate == candidate).map(|t| t.votes)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrvResult {
    pub ranking: SocialRanking,
    pub rounds: Vec<RoundLog>,
}

impl IrvResult {
    pub fn winner(&self) -> CandidateId {
        self.ranking.winner()
    }
}

/// Instant runoff: repeatedly exclude the candidate with the fewest ballots and
/// place them in the lowest open slot of the social ranking.
///
/// A tie in the final two-candidate round is an error under every policy.
pub fn irv_ranking(profile: &BallotProfile, policy: TiebreakPolicy) -> Result<IrvResult, TabulationError> {
    if profile.candidate_count() == 0 {
        return Err(TabulationError::EmptyRoster);
    }
    let mut active: BTreeSet<CandidateId> = profile.candidate_ids().collect();
    let mut bottom_up = Vec::with_capacity(active.len());
    let mut rounds = Vec::with_capacity(active.len().saturating_sub(1));

    while active.len() > 1 {
        let round = rounds.len() + 1;
        let prefs = first_preferences(profile, &active);
        let min = prefs.tallies.iter().map(|t| t.votes).min().unwrap_or(0);
        let tied: Vec<CandidateId> = prefs
            .tallies
            .iter()
            .filter(|t| t.votes == min)
            .map(|t| t.candidate)
            .collect();
        let tiebreak = tied.len() > 1;
        if tiebreak && (policy == TiebreakPolicy::ErrorOnTie || active.len() == 2) {
            return Err(TabulationError::Tie { round, tied });
        }
        // `tied` is in id order.
        let eliminated = tied[0];
        active.remove(&eliminated);
        bottom_up.push(eliminated);
        rounds.push(RoundLog {
            round,
            tallies: prefs.tallies,
            exhausted: prefs.exhausted,
            eliminated,
            tiebreak,
        });
    }
    bottom_up.extend(active);
    bottom_up.reverse();
    Ok(IrvResult {
        ranking: SocialRanking(bottom_up),
        rounds,
    })
}

/// Plurality: candidates ordered by first-preference count.
pub fn plurality_ranking(
    profile: &BallotProfile,
    policy: TiebreakPolicy,
) -> Result<(SocialRanking, FirstPreferences), TabulationError> {
    if profile.candidate_count() == 0 {
        return Err(TabulationError::EmptyRoster);
    }
    let all: BTreeSet<_> = profile.candidate_ids().collect();
    let prefs = first_preferences(profile, &all);
    let mut tallies = prefs.tallies.clone();
    // Descending by votes; equal votes put the higher id first, so the lowest
    // id lands lowest.
    tallies.sort_by(|a, b| b.votes.cmp(&a.votes).then(b.candidate.cmp(&a.candidate)));
    if policy == TiebreakPolicy::ErrorOnTie {
        for w in tallies.windows(2) {
            if w[0].votes == w[1].votes {
                let mut tied: Vec<_> = tallies
                    .iter()
                    .filter(|t| t.votes == w[0].votes)
                    .map(|t| t.candidate)
                    .collect();
                tied.sort();
                return Err(TabulationError::Tie { round: 1, tied });
            }
        }
    }
    Ok((SocialRanking(tallies.iter().map(|t| t.candidate).collect()), prefs))
}

/// Full-ballot head-to-head counts for every ordered pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairwiseMatrix {
    pub candidates: usize,
    pub total: u64,
    /// `beats[x][y]`: ballots ranking x above y (listed above unlisted).
    pub beats: Vec<Vec<u64>>,
}

impl PairwiseMatrix {
    pub fn beats(&self, x: CandidateId, y: CandidateId) -> u64 {
        self.beats[x.0][y.0]
    }

    /// Ballots listing neither candidate.
    pub fn abstain(&self, x: CandidateId, y: CandidateId) -> u64 {
        if x == y {
            return 0;
        }
        self.total - self.beats(x, y) - self.beats(y, x)
    }

    /// Strict pairwise majority.
    pub fn defeats(&self, x: CandidateId, y: CandidateId) -> bool {
        self.beats(x, y) > self.beats(y, x)
    }

    pub fn ids(&self) -> impl Iterator<Item = CandidateId> {
        (0..self.candidates).map(CandidateId)
    }

    fn wins(&self, x: CandidateId) -> usize {
        self.ids().filter(|&y| y != x && self.defeats(x, y)).count()
    }
}

pub fn pairwise_matrix(profile: &BallotProfile) -> PairwiseMatrix {
    let n = profile.candidate_count();
    let mut beats = vec![vec![0u64; n]; n];
    let mut listed = vec![false; n];
    for g in profile.groups() {
        listed.iter_mut().for_each(|l| *l = false);
        let ids = g.ranking.ids();
        for (i, &x) in ids.iter().enumerate() {
            listed[x.0] = true;
            for &y in &ids[i + 1..] {
                beats[x.0][y.0] += g.count;
            }
        }
        for &x in ids {
            for (y, &is_listed) in listed.iter().enumerate() {
                if !is_listed {
                    beats[x.0][y] += g.count;
                }
            }
        }
    }
    PairwiseMatrix {
        candidates: n,
        total: profile.total_ballots(),
        beats,
    }
}

/// Smith set: the smallest non-empty set whose members all strictly beat
/// every outsider.
pub fn smith_set(matrix: &PairwiseMatrix) -> BTreeSet<CandidateId> {
    // Members of a dominating set of size d have >= n-d wins, outsiders at most
    // n-d-1, so the set is always a prefix of the wins ordering.
    let mut order: Vec<CandidateId> = matrix.ids().collect();
    order.sort_by_key(|&c| std::cmp::Reverse(matrix.wins(c)));
    for size in 1..order.len() {
        let (inside, outside) = order.split_at(size);
        if inside.iter().all(|&x| outside.iter().all(|&y| matrix.defeats(x, y))) {
            return inside.iter().copied().collect();
        }
    }
    order.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleReport {
    pub smith_set: BTreeSet<CandidateId>,
    /// Unordered pairs with equal head-to-head counts, `(lower id, higher id)`.
    pub tied_pairs: Vec<(CandidateId, CandidateId)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CondorcetOutcome {
    Ranking(SocialRanking),
    Cycle(CycleReport),
}

impl CondorcetOutcome {
    pub fn ranking(&self) -> Option<&SocialRanking> {
        match self {
            CondorcetOutcome::Ranking(r) => Some(r),
            CondorcetOutcome::Cycle(_) => None,
        }
    }
}

/// The Condorcet order when strict pairwise majority is a transitive
/// tournament; otherwise the Smith set and tied pairs.
pub fn condorcet_outcome(matrix: &PairwiseMatrix) -> CondorcetOutcome {
    let n = matrix.candidates;
    let mut by_wins: Vec<(usize, CandidateId)> = matrix.ids().map(|c| (matrix.wins(c), c)).collect();
    by_wins.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    // A tournament is transitive iff its win counts are exactly n-1, ..., 0.
    let transitive = by_wins.iter().enumerate().all(|(i, &(wins, _))| wins == n - 1 - i);
    if transitive {
        return CondorcetOutcome::Ranking(SocialRanking(by_wins.into_iter().map(|(_, c)| c).collect()));
    }
    let mut tied_pairs = Vec::new();
    for x in matrix.ids() {
        for y in matrix.ids().filter(|&y| y > x) {
            if matrix.beats(x, y) == matrix.beats(y, x) {
                tied_pairs.push((x, y));
            }
        }
    }
    CondorcetOutcome::Cycle(CycleReport {
        smith_set: smith_set(matrix),
        tied_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballots::parse_profile;
    use crate::fixtures::alaska;

    fn id(p: &BallotProfile, name: &str) -> CandidateId {
        p.id_of(name).unwrap()
    }

    fn names(p: &BallotProfile, r: &SocialRanking) -> Vec<String> {
        r.order().iter().map(|&c| p.name(c).to_string()).collect()
    }

    #[test]
    fn plurality_alaska() {
        let p = alaska();
        let (r, prefs) = plurality_ranking(&p, TiebreakPolicy::ErrorOnTie).unwrap();
        assert_eq!(names(&p, &r), ["Peltola", "Palin", "Begich"]);
        assert_eq!(prefs.votes(id(&p, "Peltola")), Some(75_799));
        assert_eq!(prefs.votes(id(&p, "Palin")), Some(58_973));
        assert_eq!(prefs.votes(id(&p, "Begich")), Some(53_810));
    }

    #[test]
    fn plurality_single_candidate() {
        let p = parse_profile("2,A\n").unwrap();
        let (r, _) = plurality_ranking(&p, TiebreakPolicy::ErrorOnTie).unwrap();
        assert_eq!(r.order(), &[CandidateId(0)]);
    }

    #[test]
    fn plurality_tie() {
        let p = parse_profile("1,A\n1,B\n").unwrap();
        assert_eq!(
            plurality_ranking(&p, TiebreakPolicy::ErrorOnTie),
            Err(TabulationError::Tie {
                round: 1,
                tied: vec![CandidateId(0), CandidateId(1)]
            })
        );
        let (r, _) = plurality_ranking(&p, TiebreakPolicy::LowestIdFirstEliminated).unwrap();
        assert_eq!(r.order(), &[CandidateId(1), CandidateId(0)]);
    }

    #[test]
    fn first_preferences_alaska() {
        let p = alaska();
        let pair: BTreeSet<_> = [id(&p, "Peltola"), id(&p, "Palin")].into_iter().collect();
        let prefs = first_preferences(&p, &pair);
        assert_eq!(prefs.votes(id(&p, "Peltola")), Some(91_266));
        assert_eq!(prefs.votes(id(&p, "Palin")), Some(86_026));
        assert_eq!(prefs.exhausted, 11_290);
    }

    #[test]
    fn first_preferences_single_active() {
        let p = parse_profile("2,A>B\n3,B\n4,\n").unwrap();
        let only_a: BTreeSet<_> = [CandidateId(0)].into_iter().collect();
        let prefs = first_preferences(&p, &only_a);
        assert_eq!(prefs.votes(CandidateId(0)), Some(2));
        assert_eq!(prefs.exhausted, 7);
    }

    #[test]
    fn irv_alaska() {
        let p = alaska();
        let res = irv_ranking(&p, TiebreakPolicy::ErrorOnTie).unwrap();
        assert_eq!(names(&p, &res.ranking), ["Peltola", "Palin", "Begich"]);
        assert_eq!(res.rounds.len(), 2);
        assert_eq!(res.rounds[0].eliminated, id(&p, "Begich"));
        assert_eq!(res.rounds[0].votes(id(&p, "Begich")), Some(53_810));
        assert_eq!(res.rounds[0].exhausted, 0);
        assert_eq!(res.rounds[1].eliminated, id(&p, "Palin"));
        assert_eq!(res.rounds[1].votes(id(&p, "Palin")), Some(86_026));
        assert_eq!(res.rounds[1].votes(id(&p, "Peltola")), Some(91_266));
        assert_eq!(res.rounds[1].exhausted, 11_290);
        assert!(res.rounds.iter().all(|r| !r.tiebreak));
    }

    #[test]
    fn irv_two_candidates_matches_plurality() {
        let p = parse_profile("3,A>B\n5,B\n1,A\n").unwrap();
        let irv = irv_ranking(&p, TiebreakPolicy::ErrorOnTie).unwrap();
        let (plu, _) = plurality_ranking(&p, TiebreakPolicy::ErrorOnTie).unwrap();
        assert_eq!(irv.ranking, plu);
    }

    #[test]
    fn irv_tie_policies() {
        let p = parse_profile("#candidates: A,B,C\n5,C\n2,A\n2,B>A\n").unwrap();
        assert_eq!(
            irv_ranking(&p, TiebreakPolicy::ErrorOnTie),
            Err(TabulationError::Tie {
                round: 1,
                tied: vec![CandidateId(0), CandidateId(1)]
            })
        );
        let res = irv_ranking(&p, TiebreakPolicy::LowestIdFirstEliminated).unwrap();
        assert!(res.rounds[0].tiebreak);
        assert_eq!(res.rounds[0].eliminated, CandidateId(0));
        assert_eq!(res.ranking.order(), &[CandidateId(2), CandidateId(1), CandidateId(0)]);
    }

    #[test]
    fn final_round_tie_errors_under_every_policy() {
        let p = parse_profile("1,A\n1,B\n").unwrap();
        for policy in [TiebreakPolicy::ErrorOnTie, TiebreakPolicy::LowestIdFirstEliminated] {
            assert!(matches!(
                irv_ranking(&p, policy),
                Err(TabulationError::Tie { round: 1, .. })
            ));
        }
    }

    #[test]
    fn irv_single_candidate() {
        let p = parse_profile("#candidates: Solo\n").unwrap();
        let res = irv_ranking(&p, TiebreakPolicy::ErrorOnTie).unwrap();
        assert!(res.rounds.is_empty());
        assert_eq!(res.winner(), CandidateId(0));
    }

    #[test]
    fn pairwise_alaska() {
        let p = alaska();
        let m = pairwise_matrix(&p);
        let (begich, palin, peltola) = (id(&p, "Begich"), id(&p, "Palin"), id(&p, "Peltola"));
        assert_eq!((m.beats(begich, peltola), m.beats(peltola, begich)), (87_859, 79_451));
        assert_eq!(m.abstain(begich, peltola), 21_272);
        assert_eq!((m.beats(begich, palin), m.beats(palin, begich)), (101_217, 63_618));
        assert_eq!(m.abstain(begich, palin), 23_747);
        assert_eq!((m.beats(peltola, palin), m.beats(palin, peltola)), (91_266, 86_026));
        assert_eq!(m.abstain(peltola, palin), 11_290);
    }

    #[test]
    fn pairwise_empty_profile() {
        let p = parse_profile("#candidates: A,B,C\n").unwrap();
        let m = pairwise_matrix(&p);
        assert!(m.beats.iter().flatten().all(|&v| v == 0));
    }

    #[test]
    fn condorcet_alaska() {
        let p = alaska();
        let m = pairwise_matrix(&p);
        let outcome = condorcet_outcome(&m);
        assert_eq!(names(&p, outcome.ranking().unwrap()), ["Begich", "Peltola", "Palin"]);
        assert_eq!(smith_set(&m), [id(&p, "Begich")].into_iter().collect());
    }

    #[test]
    fn condorcet_cycle() {
        let p = parse_profile("1,A>B>C\n1,B>C>A\n1,C>A>B\n").unwrap();
        let m = pairwise_matrix(&p);
        match condorcet_outcome(&m) {
            CondorcetOutcome::Cycle(c) => {
                assert_eq!(c.smith_set.len(), 3);
                assert!(c.tied_pairs.is_empty());
            }
            other => panic!("expected cycle, got {other:?}"),
        }
    }

    #[test]
    fn condorcet_two_candidates() {
        let p = parse_profile("3,A>B\n1,B>A\n").unwrap();
        let outcome = condorcet_outcome(&pairwise_matrix(&p));
        assert_eq!(outcome.ranking().unwrap().order(), &[CandidateId(0), CandidateId(1)]);
    }

    #[test]
    fn pairwise_tie_blocks_ranking() {
        let p = parse_profile("#candidates: A,B,C\n2,A>B>C\n1,C>B>A\n1,B>C>A\n").unwrap();
        // A vs B is 2-2; A vs C 2-2 as well.
        match condorcet_outcome(&pairwise_matrix(&p)) {
            CondorcetOutcome::Cycle(c) => {
                assert!(c.tied_pairs.contains(&(CandidateId(0), CandidateId(1))));
            }
            other => panic!("expected no ranking, got {other:?}"),
        }
    }

    #[test]
    fn smith_set_single_candidate() {
        let p = parse_profile("#candidates: A\n").unwrap();
        assert_eq!(smith_set(&pairwise_matrix(&p)), [CandidateId(0)].into_iter().collect());
    }

    #[test]
    fn smith_set_with_cycle_on_top() {
        // A, B, C cycle; all beat D.
        let p = parse_profile("1,A>B>C>D\n1,B>C>A>D\n1,C>A>B>D\n").unwrap();
        let s = smith_set(&pairwise_matrix(&p));
        assert_eq!(
            s,
            [CandidateId(0), CandidateId(1), CandidateId(2)].into_iter().collect()
        );
    }

    #[test]
    fn social_ranking_validation() {
        let p = alaska();
        assert!(SocialRanking::parse(&p, "Peltola>Palin>Begich").is_ok());
        assert!(matches!(
            SocialRanking::parse(&p, "Peltola>Palin"),
            Err(RankingError::WrongLength { .. })
        ));
        assert!(SocialRanking::parse(&p, "Peltola>Palin>Nobody").is_err());
        assert!(matches!(
            SocialRanking::new(vec![CandidateId(0), CandidateId(0)], 2),
            Err(RankingError::Repeated(_))
        ));
    }
}
