//! Ranked ballots: parsing, normalization and candidate restriction.
//!
//! A [`BallotProfile`] is a candidate roster plus a list of weighted ballot
//! groups. Profiles are immutable once built; every constructor normalizes
//! them so that no two groups share a ranking.
//!
//! The on-disk format is a small line-oriented dialect:
//!
//! ```text
//! #candidates: Begich,Palin,Peltola
//! 27053,Begich>Palin>Peltola
//! 11290,Begich
//! 5,
//! ```
//!
//! The optional `#candidates:` header fixes roster order; without it,
//! candidates are interned in order of first appearance. Other lines starting
//! with `#` are comments. A ranking may be empty (an abstaining ballot).

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const HEADER_PREFIX: &str = "#candidates:";

/// Dense index of a candidate within a roster.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CandidateId(pub usize);

impl CandidateId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for CandidateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub id: CandidateId,
    pub name: String,
}

/// Candidates in order of preference, most preferred first.
///
/// Candidates missing from the list rank below every listed candidate, with no
/// preference expressed among themselves.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ranking(Vec<CandidateId>);

impl Ranking {
    /// Builds a ranking, rejecting repeated candidates.
    pub fn new(ids: Vec<CandidateId>) -> Result<Self, ParseError> {
        let mut seen = BTreeSet::new();
        for id in &ids {
            if !seen.insert(*id) {
                return Err(ParseError::DuplicateInRanking {
                    line: 0,
                    name: id.to_string(),
                });
            }
        }
        Ok(Ranking(ids))
    }

    pub fn empty() -> Self {
        Ranking(Vec::new())
    }

    pub fn ids(&self) -> &[CandidateId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<CandidateId> {
        self.0.first().copied()
    }

    pub fn position(&self, id: CandidateId) -> Option<usize> {
        self.0.iter().position(|&c| c == id)
    }

    pub fn contains(&self, id: CandidateId) -> bool {
        self.0.contains(&id)
    }

    /// Highest-ranked candidate satisfying `pred`.
    pub fn top_among(&self, mut pred: impl FnMut(CandidateId) -> bool) -> Option<CandidateId> {
        self.0.iter().copied().find(|&c| pred(c))
    }

    /// True when this ballot places `x` strictly above `y`.
    pub fn prefers(&self, x: CandidateId, y: CandidateId) -> bool {
        match (self.position(x), self.position(y)) {
            (Some(px), Some(py)) => px < py,
            (Some(_), None) => true,
            _ => false,
        }
    }

    /// Moves `id` to the front, keeping the order of everyone else. An
    /// unlisted candidate is inserted at the front.
    pub fn promoted(&self, id: CandidateId) -> Ranking {
        let mut ids = Vec::with_capacity(self.0.len() + 1);
        ids.push(id);
        ids.extend(self.0.iter().copied().filter(|&c| c != id));
        Ranking(ids)
    }

    /// Moves a listed `id` to the last listed position. Unlisted candidates
    /// stay unlisted.
    pub fn demoted(&self, id: CandidateId) -> Ranking {
        let mut ids: Vec<_> = self.0.iter().copied().filter(|&c| c != id).collect();
        if self.contains(id) {
            ids.push(id);
        }
        Ranking(ids)
    }

    /// Drops every candidate not in `keep`, renumbering survivors with `remap`.
    fn restricted(&self, remap: &HashMap<CandidateId, CandidateId>) -> Ranking {
        Ranking(self.0.iter().filter_map(|c| remap.get(c).copied()).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallotGroup {
    pub ranking: Ranking,
    pub count: u64,
}

/// An exact fraction with its display as a percentage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub numerator: u64,
    pub denominator: u64,
}

impl Fraction {
    /// Percentage rounded half-up to `decimals` places, computed in integers.
    pub fn percent(&self, decimals: u32) -> String {
        let scale = 10u128.pow(decimals);
        let scaled = self.numerator as u128 * 100 * scale;
        let den = self.denominator as u128;
        let rounded = (2 * scaled + den) / (2 * den);
        if decimals == 0 {
            format!("{rounded}%")
        } else {
            format!(
                "{}.{:0width$}%",
                rounded / scale,
                rounded % scale,
                width = decimals as usize
            )
        }
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: candidate `{name}` appears more than once in a ranking")]
    DuplicateInRanking { line: usize, name: String },
    #[error("line {line}: candidate `{name}` is listed twice in the roster header")]
    DuplicateInRoster { line: usize, name: String },
    #[error("line {line}: unknown candidate `{name}`")]
    UnknownCandidate { line: usize, name: String },
    #[error("line {line}: ballot count must be a positive integer, got `{count}`")]
    NonPositiveCount { line: usize, count: String },
    #[error("the roster is empty")]
    EmptyRoster,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProfileError {
    #[error("candidate {0} is not on the roster")]
    UnknownId(CandidateId),
    #[error("candidate `{0}` is not on the roster")]
    UnknownName(String),
    #[error("the set of candidates to keep is empty")]
    EmptyKeep,
    #[error("candidate `{0}` has no first-preference ballots")]
    NoFirstPreferences(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A roster plus weighted ballot groups with pairwise-distinct rankings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallotProfile {
    roster: Vec<Candidate>,
    groups: Vec<BallotGroup>,
}

impl BallotProfile {
    /// Builds a profile from candidate names and `(ranking, count)` groups.
    ///
    /// Groups with equal rankings are merged into the first occurrence.
    pub fn new<S: AsRef<str>>(names: &[S], groups: impl IntoIterator<Item = BallotGroup>) -> Result<Self, ParseError> {
        let mut roster = Vec::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            let name = name.as_ref().trim();
            if name.is_empty() {
                return Err(ParseError::Malformed {
                    line: 0,
                    reason: "empty candidate name".into(),
                });
            }
            if roster.iter().any(|c: &Candidate| c.name == name) {
                return Err(ParseError::DuplicateInRoster {
                    line: 0,
                    name: name.to_string(),
                });
            }
            roster.push(Candidate {
                id: CandidateId(i),
                name: name.to_string(),
            });
        }
        if roster.is_empty() {
            return Err(ParseError::EmptyRoster);
        }
        let mut groups: Vec<BallotGroup> = groups.into_iter().collect();
        for g in &groups {
            if g.count == 0 {
                return Err(ParseError::NonPositiveCount {
                    line: 0,
                    count: "0".into(),
                });
            }
            if let Some(bad) = g.ranking.ids().iter().find(|c| c.0 >= roster.len()) {
                return Err(ParseError::UnknownCandidate {
                    line: 0,
                    name: bad.to_string(),
                });
            }
            Ranking::new(g.ranking.ids().to_vec())?;
        }
        groups = merge_groups(groups);
        Ok(BallotProfile { roster, groups })
    }

    pub fn roster(&self) -> &[Candidate] {
        &self.roster
    }

    pub fn candidate_count(&self) -> usize {
        self.roster.len()
    }

    pub fn candidate_ids(&self) -> impl Iterator<Item = CandidateId> + '_ {
        self.roster.iter().map(|c| c.id)
    }

    pub fn groups(&self) -> &[BallotGroup] {
        &self.groups
    }

    pub fn name(&self, id: CandidateId) -> &str {
        &self.roster[id.0].name
    }

    pub fn id_of(&self, name: &str) -> Option<CandidateId> {
        let name = name.trim();
        self.roster.iter().find(|c| c.name == name).map(|c| c.id)
    }

    pub fn require_id(&self, name: &str) -> Result<CandidateId, ProfileError> {
        self.id_of(name)
            .ok_or_else(|| ProfileError::UnknownName(name.trim().to_string()))
    }

    pub fn contains(&self, id: CandidateId) -> bool {
        id.0 < self.roster.len()
    }

    pub fn total_ballots(&self) -> u64 {
        self.groups.iter().map(|g| g.count).sum()
    }

    /// Parses an `A>B>C` ranking against this roster.
    pub fn parse_ranking(&self, text: &str) -> Result<Ranking, ParseError> {
        let index: HashMap<&str, CandidateId> = self.roster.iter().map(|c| (c.name.as_str(), c.id)).collect();
        parse_ranking_with(text, 0, |name| {
            index.get(name).copied().ok_or_else(|| ParseError::UnknownCandidate {
                line: 0,
                name: name.to_string(),
            })
        })
    }

    /// Renders a ranking as `A>B>C`.
    pub fn format_ranking(&self, ids: &[CandidateId]) -> String {
        ids.iter().map(|&c| self.name(c)).collect::<Vec<_>>().join(">")
    }

    /// Keeps only the candidates in `keep`.
    ///
    /// Survivors are renumbered densely in ascending order of their old ids and
    /// keep their names. Rankings emptied by the restriction stay in the profile
    /// as abstaining ballots.
    pub fn restrict(&self, keep: &BTreeSet<CandidateId>) -> Result<BallotProfile, ProfileError> {
        if keep.is_empty() {
            return Err(ProfileError::EmptyKeep);
        }
        if let Some(bad) = keep.iter().find(|c| !self.contains(**c)) {
            return Err(ProfileError::UnknownId(*bad));
        }
        let remap: HashMap<CandidateId, CandidateId> = keep
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, CandidateId(new)))
            .collect();
        let roster = keep
            .iter()
            .enumerate()
            .map(|(new, &old)| Candidate {
                id: CandidateId(new),
                name: self.name(old).to_string(),
            })
            .collect();
        let groups = self
            .groups
            .iter()
            .map(|g| BallotGroup {
                ranking: g.ranking.restricted(&remap),
                count: g.count,
            })
            .collect();
        Ok(BallotProfile {
            roster,
            groups: merge_groups(groups),
        })
    }

    /// Profile without a single candidate.
    pub fn without(&self, removed: CandidateId) -> Result<BallotProfile, ProfileError> {
        let keep: BTreeSet<_> = self.candidate_ids().filter(|&c| c != removed).collect();
        if !self.contains(removed) {
            return Err(ProfileError::UnknownId(removed));
        }
        self.restrict(&keep)
    }

    /// Share of `candidate`'s first-preference ballots that also rank someone
    /// else.
    pub fn continuation_rate(&self, candidate: CandidateId) -> Result<Fraction, ProfileError> {
        if !self.contains(candidate) {
            return Err(ProfileError::UnknownId(candidate));
        }
        let (mut continuing, mut first) = (0, 0);
        for g in self.groups.iter().filter(|g| g.ranking.first() == Some(candidate)) {
            first += g.count;
            if g.ranking.len() > 1 {
                continuing += g.count;
            }
        }
        if first == 0 {
            return Err(ProfileError::NoFirstPreferences(self.name(candidate).to_string()));
        }
        Ok(Fraction {
            numerator: continuing,
            denominator: first,
        })
    }

    /// Returns a profile with `count` ballots moved out of the group at
    /// `group_index` and recast with `ranking`.
    pub(crate) fn with_moved_ballots(&self, moves: &[(usize, u64, Ranking)]) -> BallotProfile {
        let mut groups = self.groups.clone();
        let mut added = Vec::with_capacity(moves.len());
        for (index, count, ranking) in moves {
            groups[*index].count -= count;
            added.push(BallotGroup {
                ranking: ranking.clone(),
                count: *count,
            });
        }
        groups.retain(|g| g.count > 0);
        groups.extend(added);
        BallotProfile {
            roster: self.roster.clone(),
            groups: merge_groups(groups),
        }
    }

    /// Serializes to the ballot file format, always with a roster header.
    pub fn to_ballot_file(&self) -> String {
        let mut out = String::new();
        out.push_str(HEADER_PREFIX);
        out.push(' ');
        out.push_str(
            &self
                .roster
                .iter()
                .map(|c| c.name.as_str())
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
        for g in &self.groups {
            out.push_str(&format!("{},{}\n", g.count, self.format_ranking(g.ranking.ids())));
        }
        out
    }
}

fn merge_groups(groups: Vec<BallotGroup>) -> Vec<BallotGroup> {
    let mut index: HashMap<Ranking, usize> = HashMap::with_capacity(groups.len());
    let mut merged: Vec<BallotGroup> = Vec::with_capacity(groups.len());
    for g in groups {
        match index.get(&g.ranking) {
            Some(&i) => merged[i].count += g.count,
            None => {
                index.insert(g.ranking.clone(), merged.len());
                merged.push(g);
            }
        }
    }
    merged
}

fn parse_ranking_with(
    text: &str,
    line: usize,
    mut resolve: impl FnMut(&str) -> Result<CandidateId, ParseError>,
) -> Result<Ranking, ParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Ranking::empty());
    }
    let mut ids = Vec::new();
    for part in text.split('>') {
        let name = part.trim();
        if name.is_empty() {
            return Err(ParseError::Malformed {
                line,
                reason: "empty candidate name in ranking".into(),
            });
        }
        let id = resolve(name)?;
        if ids.contains(&id) {
            return Err(ParseError::DuplicateInRanking {
                line,
                name: name.to_string(),
            });
        }
        ids.push(id);
    }
    Ok(Ranking(ids))
}

/// Parses ballot file contents into a normalized profile.
pub fn parse_profile(text: &str) -> Result<BallotProfile, ParseError> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, CandidateId> = HashMap::new();
    let mut fixed_roster = false;
    let mut seen_ballot = false;
    let mut groups = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(header) = trimmed.strip_prefix(HEADER_PREFIX) {
            if seen_ballot || fixed_roster {
                return Err(ParseError::Malformed {
                    line,
                    reason: "roster header must appear once, before any ballot line".into(),
                });
            }
            fixed_roster = true;
            for name in header.split(',').map(str::trim) {
                if name.is_empty() {
                    return Err(ParseError::Malformed {
                        line,
                        reason: "empty candidate name in roster header".into(),
                    });
                }
                if index.contains_key(name) {
                    return Err(ParseError::DuplicateInRoster {
                        line,
                        name: name.to_string(),
                    });
                }
                index.insert(name.to_string(), CandidateId(names.len()));
                names.push(name.to_string());
            }
            continue;
        }
        if trimmed.starts_with('#') {
            continue;
        }
        seen_ballot = true;
        let (count, ranking) = trimmed.split_once(',').ok_or_else(|| ParseError::Malformed {
            line,
            reason: "expected `COUNT,Ranking`".into(),
        })?;
        let count = count.trim();
        let count = match count.parse::<u64>() {
            Ok(0) => {
                return Err(ParseError::NonPositiveCount {
                    line,
                    count: count.to_string(),
                })
            }
            Ok(n) => n,
            Err(_) if count.starts_with('-') && count[1..].chars().all(|c| c.is_ascii_digit()) => {
                return Err(ParseError::NonPositiveCount {
                    line,
                    count: count.to_string(),
                })
            }
            Err(_) => {
                return Err(ParseError::Malformed {
                    line,
                    reason: format!("invalid ballot count `{count}`"),
                })
            }
        };
        let ranking = parse_ranking_with(ranking, line, |name| {
            if let Some(&id) = index.get(name) {
                return Ok(id);
            }
            if fixed_roster {
                return Err(ParseError::UnknownCandidate {
                    line,
                    name: name.to_string(),
                });
            }
            let id = CandidateId(names.len());
            index.insert(name.to_string(), id);
            names.push(name.to_string());
            Ok(id)
        })?;
        groups.push(BallotGroup { ranking, count });
    }

    if names.is_empty() {
        return Err(ParseError::EmptyRoster);
    }
    let roster = names
        .into_iter()
        .enumerate()
        .map(|(i, name)| Candidate {
            id: CandidateId(i),
            name,
        })
        .collect();
    Ok(BallotProfile {
        roster,
        groups: merge_groups(groups),
    })
}
