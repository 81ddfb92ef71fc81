//! Text and JSON output. Every JSON document carries the roster as
//! `candidates`, indexed by the integer candidate ids used elsewhere in it.

use std::fmt::Write;

use ballotlab::criteria::{
    BallotRestriction, Criterion, IiaReport, MonotonicityReport, MonotonicityWitness, SearchOptions,
};
use ballotlab::oracle::{ProfileKind, ScanSummary};
use ballotlab::tabulation::{FirstPreferences, IrvResult, RoundLog};
use ballotlab::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct PluralityDoc {
    pub candidates: Vec<String>,
    pub ranking: SocialRanking,
    pub first_preferences: FirstPreferences,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct IrvDoc {
    pub candidates: Vec<String>,
    pub result: IrvResult,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct CondorcetDoc {
    pub candidates: Vec<String>,
    pub outcome: CondorcetOutcome,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct PairwiseDoc {
    pub candidates: Vec<String>,
    pub matrix: PairwiseMatrix,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckDoc {
    pub candidates: Vec<String>,
    pub report: CriterionReport,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityDoc {
    pub candidates: Vec<String>,
    pub report: MonotonicityReport,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct IiaDoc {
    pub candidates: Vec<String>,
    pub report: IiaReport,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareDoc {
    pub candidates: Vec<String>,
    pub irv: IrvResult,
    pub condorcet: CondorcetOutcome,
    pub irv_winner: CandidateId,
    pub condorcet_winner: Option<CandidateId>,
    pub agree: bool,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct RateEntry {
    pub candidate: CandidateId,
    pub continuing: u64,
    pub first_preferences: u64,
    /// Two decimals; absent when the candidate has no first preferences.
    pub percent: Option<String>,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuationDoc {
    pub candidates: Vec<String>,
    pub rates: Vec<RateEntry>,
}

fn names(p: &BallotProfile, ids: impl IntoIterator<Item = CandidateId>) -> String {
    ids.into_iter().map(|c| p.name(c)).collect::<Vec<_>>().join(", ")
}

fn ranking_line(p: &BallotProfile, ids: &[CandidateId]) -> String {
    ids.iter().map(|&c| p.name(c)).collect::<Vec<_>>().join(" > ")
}

fn round_line(p: &BallotProfile, round: &RoundLog) -> String {
    let tallies = round
        .tallies
        .iter()
        .map(|t| format!("{} {}", p.name(t.candidate), t.votes))
        .collect::<Vec<_>>()
        .join(", ");
    format!(
        "Round {}: {tallies}; exhausted {}; eliminated {}{}",
        round.round,
        round.exhausted,
        p.name(round.eliminated),
        if round.tiebreak { " (tie-break)" } else { "" }
    )
}

pub fn plurality(p: &BallotProfile, doc: &PluralityDoc) -> String {
    let mut out = String::from("Plurality\n");
    for &c in doc.ranking.order() {
        let _ = writeln!(out, "{} {}", p.name(c), doc.first_preferences.votes(c).unwrap_or(0));
    }
    let _ = writeln!(out, "Ranking: {}", doc.ranking.display(p));
    let _ = writeln!(out, "Winner: {}", p.name(doc.ranking.winner()));
    out
}

pub fn irv(p: &BallotProfile, result: &IrvResult) -> String {
    let mut out = String::from("IRV\n");
    for round in &result.rounds {
        let _ = writeln!(out, "{}", round_line(p, round));
    }
    let _ = writeln!(out, "Ranking: {}", result.ranking.display(p));
    let _ = writeln!(out, "Winner: {}", p.name(result.winner()));
    out
}

pub fn condorcet(p: &BallotProfile, outcome: &CondorcetOutcome) -> String {
    let mut out = String::from("Condorcet\n");
    match outcome {
        CondorcetOutcome::Ranking(r) => {
            let _ = writeln!(out, "Ranking: {}", r.display(p));
            let _ = writeln!(out, "Winner: {}", p.name(r.winner()));
        }
        CondorcetOutcome::Cycle(c) => {
            let _ = writeln!(out, "No transitive order");
            let _ = writeln!(out, "Smith set: {}", names(p, c.smith_set.iter().copied()));
            let tied = if c.tied_pairs.is_empty() {
                "none".to_string()
            } else {
                c.tied_pairs
                    .iter()
                    .map(|&(x, y)| format!("{} = {}", p.name(x), p.name(y)))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            let _ = writeln!(out, "Tied pairs: {tied}");
        }
    }
    out
}

pub fn pairwise(p: &BallotProfile, m: &PairwiseMatrix) -> String {
    let mut out = String::new();
    for x in m.ids() {
        for y in m.ids().filter(|&y| y > x) {
            let _ = writeln!(
                out,
                "{} vs {} : {} vs {} (abstain {})",
                p.name(x),
                p.name(y),
                m.beats(x, y),
                m.beats(y, x),
                m.abstain(x, y)
            );
        }
    }
    out
}

pub fn check(p: &BallotProfile, report: &CriterionReport) -> String {
    let title = match report.criterion {
        Criterion::CoreSupport => "Core support",
        Criterion::BroadSupport => "Broad support",
    };
    let mut out = format!("{title} check of {}\n", report.ranking.display(p));
    for pv in &report.pairs {
        let t = &pv.tally;
        let restriction = match t.restriction {
            BallotRestriction::CoreSupport { relative_to } => {
                format!("core support relative to {}", p.name(relative_to))
            }
            BallotRestriction::AllBallots => "all ballots".to_string(),
        };
        let _ = writeln!(
            out,
            "{} > {} : {} vs {} (abstain {}) [{restriction}] — {}",
            p.name(t.x),
            p.name(t.y),
            t.x_votes,
            t.y_votes,
            t.abstain,
            pv.verdict
        );
    }
    let _ = writeln!(out, "Overall: {}", if report.passed { "PASS" } else { "FAIL" });
    out
}

fn witness(out: &mut String, p: &BallotProfile, label: &str, w: &MonotonicityWitness) {
    let _ = writeln!(
        out,
        "{label} witness: {} ballots changed ({})",
        w.moved,
        p.name(w.candidate)
    );
    for m in &w.moves {
        let _ = writeln!(
            out,
            "  move {} `{}` -> `{}`",
            m.count,
            p.format_ranking(m.source.ids()),
            p.format_ranking(m.transformed.ids())
        );
    }
    let _ = writeln!(out, "  New winner: {}", p.name(w.new_winner));
    for round in &w.new_rounds {
        let _ = writeln!(out, "  {}", round_line(p, round));
    }
}

pub fn monotonicity(p: &BallotProfile, report: &MonotonicityReport, options: &SearchOptions) -> String {
    let mut out = format!("IRV winner: {}\n", p.name(report.winner));
    if options.promote {
        match &report.promote {
            Some(w) => witness(&mut out, p, "Promote", w),
            None => out.push_str("Promote witness: none\n"),
        }
    }
    if options.demote {
        match &report.demote {
            Some(w) => witness(&mut out, p, "Demote", w),
            None => out.push_str("Demote witness: none\n"),
        }
    }
    out
}

pub fn iia(p: &BallotProfile, report: &IiaReport) -> String {
    let mut out = format!("Removed: {}\n", p.name(report.removed));
    let _ = writeln!(out, "Before: {}", report.before.display(p));
    let _ = writeln!(out, "After: {}", ranking_line(p, &report.after));
    if report.flips.is_empty() {
        out.push_str("Flips: none\n");
    }
    for f in &report.flips {
        let _ = writeln!(
            out,
            "Flip: {a} > {b} becomes {b} > {a} ({a} {} vs {b} {}, abstain {})",
            f.above_votes,
            f.below_votes,
            f.abstain,
            a = p.name(f.before_above),
            b = p.name(f.before_below),
        );
    }
    out
}

pub fn compare(p: &BallotProfile, doc: &CompareDoc) -> String {
    let mut out = format!("IRV ranking: {}\n", doc.irv.ranking.display(p));
    match &doc.condorcet {
        CondorcetOutcome::Ranking(r) => {
            let _ = writeln!(out, "Condorcet ranking: {}", r.display(p));
        }
        CondorcetOutcome::Cycle(c) => {
            let _ = writeln!(
                out,
                "Condorcet ranking: none (Smith set {})",
                names(p, c.smith_set.iter().copied())
            );
        }
    }
    let condorcet = doc.condorcet_winner.map_or("none", |c| p.name(c));
    let flag = match doc.condorcet_winner {
        None => "NO CONDORCET WINNER",
        Some(_) if doc.agree => "AGREE",
        Some(_) => "DISAGREE",
    };
    let _ = writeln!(out, "IRV: {} | Condorcet: {condorcet} — {flag}", p.name(doc.irv_winner));
    out
}

pub fn continuation(p: &BallotProfile, rates: &[RateEntry]) -> String {
    let mut out = String::new();
    for r in rates {
        match &r.percent {
            Some(pct) => {
                let _ = writeln!(
                    out,
                    "{} {}/{} {pct}",
                    p.name(r.candidate),
                    r.continuing,
                    r.first_preferences
                );
            }
            None => {
                let _ = writeln!(out, "{} n/a (no first preferences)", p.name(r.candidate));
            }
        }
    }
    out
}

pub fn scan(s: &ScanSummary) -> String {
    let g = &s.generator;
    let kind = match g.kind {
        ProfileKind::ImpartialCulture => "impartial-culture",
        ProfileKind::Truncated => "truncated",
        ProfileKind::Fixture => "fixture",
    };
    let d = &s.disagreement_pattern;
    let counterexamples = if d.counterexamples.is_empty() {
        "none".to_string()
    } else {
        d.counterexamples
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    };
    format!(
        "Scan: {kind}, {} candidates, {} ballots, seed {}, {} trials\n\
         IRV ties: {}\n\
         Condorcet orders: {}\n\
         Condorcet cycles: {}\n\
         Compared: {}\n\
         Agree: {}\n\
         Disagree: {}\n\
         Monotonicity witnesses: {}\n\
         3-candidate pattern: {} applicable, {} hold, counterexamples: {counterexamples}\n",
        g.candidates,
        g.ballots,
        g.seed,
        s.trials,
        s.irv_ties,
        s.condorcet_rankings,
        s.condorcet_cycles,
        s.compared,
        s.agree,
        s.disagree,
        s.monotonicity_witnesses,
        d.applicable,
        d.holds,
    )
}
