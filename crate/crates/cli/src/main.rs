mod args;
mod render;

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use ballotlab::criteria::{MonotonicityReport, SearchOptions};
use ballotlab::oracle::{agreement_scan, ProfileGenerator};
use ballotlab::tabulation::TabulationError;
use ballotlab::*;
use clap::Parser;
use serde::Serialize;

use args::{Cli, Command, CriterionArg, DirectionArg, Method, Source};

/// Usage and input problems exit 2, analysis failures (ties, cycles where a
/// ranking is needed) exit 3.
#[derive(Debug)]
enum CliError {
    Usage(String),
    Analysis(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Analysis(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Analysis(m) => m,
        }
    }
}

fn analysis(e: impl std::fmt::Display) -> CliError {
    CliError::Analysis(e.to_string())
}

fn load(path: &Path) -> Result<BallotProfile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    parse_profile(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn candidate(profile: &BallotProfile, name: &str) -> Result<CandidateId, CliError> {
    profile.require_id(name).map_err(|e| CliError::Usage(e.to_string()))
}

fn tie_message(profile: &BallotProfile, e: &TabulationError) -> String {
    match e {
        TabulationError::Tie { round, tied } => format!(
            "tie in round {round} between {}",
            tied.iter().map(|&c| profile.name(c)).collect::<Vec<_>>().join(", ")
        ),
        other => other.to_string(),
    }
}

fn irv(profile: &BallotProfile, policy: TiebreakPolicy) -> Result<tabulation::IrvResult, CliError> {
    irv_ranking(profile, policy).map_err(|e| CliError::Analysis(tie_message(profile, &e)))
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) -> String {
    if json {
        let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
        s.push('\n');
        s
    } else {
        text()
    }
}

fn roster_names(profile: &BallotProfile) -> Vec<String> {
    profile.roster().iter().map(|c| c.name.clone()).collect()
}

fn execute(cli: Cli) -> Result<String, CliError> {
    let json = cli.json;
    match cli.command {
        Command::Tabulate { method, tie, file } => {
            let p = load(&file)?;
            let policy = tie.tiebreak.into();
            let candidates = roster_names(&p);
            match method {
                Method::Plurality => {
                    let (ranking, first_preferences) =
                        plurality_ranking(&p, policy).map_err(|e| CliError::Analysis(tie_message(&p, &e)))?;
                    let doc = render::PluralityDoc {
                        candidates,
                        ranking,
                        first_preferences,
                    };
                    Ok(emit(json, &doc, || render::plurality(&p, &doc)))
                }
                Method::Irv => {
                    let result = irv(&p, policy)?;
                    let doc = render::IrvDoc { candidates, result };
                    Ok(emit(json, &doc, || render::irv(&p, &doc.result)))
                }
                Method::Condorcet => {
                    let matrix = pairwise_matrix(&p);
                    let outcome = condorcet_outcome(&matrix);
                    let doc = render::CondorcetDoc { candidates, outcome };
                    let out = emit(json, &doc, || render::condorcet(&p, &doc.outcome));
                    match doc.outcome {
                        CondorcetOutcome::Ranking(_) => Ok(out),
                        // Report still goes to stdout before failing.
                        CondorcetOutcome::Cycle(_) => {
                            print!("{out}");
                            Err(CliError::Analysis("no transitive Condorcet order".into()))
                        }
                    }
                }
            }
        }
        Command::Pairwise { file } => {
            let p = load(&file)?;
            let doc = render::PairwiseDoc {
                candidates: roster_names(&p),
                matrix: pairwise_matrix(&p),
            };
            Ok(emit(json, &doc, || render::pairwise(&p, &doc.matrix)))
        }
        Command::Check {
            criterion,
            ranking,
            from,
            tie,
            file,
        } => {
            let p = load(&file)?;
            let ranking = match (ranking, from) {
                (Some(text), _) => {
                    SocialRanking::parse(&p, &text).map_err(|e| CliError::Usage(format!("--ranking: {e}")))?
                }
                (None, Some(Source::Irv)) => irv(&p, tie.tiebreak.into())?.ranking,
                (None, Some(Source::Condorcet)) => condorcet_outcome(&pairwise_matrix(&p))
                    .ranking()
                    .cloned()
                    .ok_or_else(|| analysis("no transitive Condorcet order"))?,
                (None, None) => return Err(CliError::Usage("pass --ranking or --from".into())),
            };
            let report = match criterion {
                CriterionArg::Core => check_core_support(&p, &ranking),
                CriterionArg::Broad => check_broad_support(&p, &ranking),
            }
            .map_err(analysis)?;
            let doc = render::CheckDoc {
                candidates: roster_names(&p),
                report,
            };
            Ok(emit(json, &doc, || render::check(&p, &doc.report)))
        }
        Command::Monotonicity {
            direction,
            exhaustive,
            tie,
            file,
        } => {
            let p = load(&file)?;
            let options = SearchOptions {
                promote: direction != DirectionArg::Demote,
                demote: direction != DirectionArg::Promote,
                exhaustive,
            };
            let report: MonotonicityReport =
                find_monotonicity_violations(&p, tie.tiebreak.into(), &options).map_err(|e| match e {
                    criteria::CriteriaError::Tabulation(t) => CliError::Analysis(tie_message(&p, &t)),
                    other => analysis(other),
                })?;
            let doc = render::MonotonicityDoc {
                candidates: roster_names(&p),
                report,
            };
            Ok(emit(json, &doc, || render::monotonicity(&p, &doc.report, &options)))
        }
        Command::Iia { remove, tie, file } => {
            let p = load(&file)?;
            let removed = candidate(&p, &remove)?;
            let report = iia_flip_report(&p, removed, tie.tiebreak.into()).map_err(|e| match e {
                criteria::CriteriaError::Tabulation(t) => CliError::Analysis(tie_message(&p, &t)),
                criteria::CriteriaError::RosterTooSmall(_) => CliError::Usage(e.to_string()),
                other => analysis(other),
            })?;
            let doc = render::IiaDoc {
                candidates: roster_names(&p),
                report,
            };
            Ok(emit(json, &doc, || render::iia(&p, &doc.report)))
        }
        Command::Scan {
            kind,
            candidates,
            ballots,
            seed,
            fresh_seed,
            trials,
        } => {
            let seed = if fresh_seed {
                SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_nanos() as u64)
                    .unwrap_or(0)
            } else {
                seed
            };
            let gen = ProfileGenerator {
                kind: kind.into(),
                candidates,
                ballots,
                seed,
            };
            let summary = agreement_scan(&gen, trials).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(emit(json, &summary, || render::scan(&summary)))
        }
        Command::Compare { tie, file } => {
            let p = load(&file)?;
            let irv = irv(&p, tie.tiebreak.into())?;
            let matrix = pairwise_matrix(&p);
            let outcome = condorcet_outcome(&matrix);
            let smith = smith_set(&matrix);
            let condorcet_winner = (smith.len() == 1).then(|| *smith.iter().next().expect("singleton"));
            let doc = render::CompareDoc {
                candidates: roster_names(&p),
                irv_winner: irv.winner(),
                condorcet_winner,
                agree: condorcet_winner == Some(irv.winner()),
                irv,
                condorcet: outcome,
            };
            Ok(emit(json, &doc, || render::compare(&p, &doc)))
        }
        Command::ContinuationRate { candidate: name, file } => {
            let p = load(&file)?;
            let ids: Vec<CandidateId> = match name {
                Some(name) => vec![candidate(&p, &name)?],
                None => p.candidate_ids().collect(),
            };
            let single = ids.len() == 1;
            let mut rates = Vec::new();
            for id in ids {
                match p.continuation_rate(id) {
                    Ok(rate) => rates.push(render::RateEntry {
                        candidate: id,
                        continuing: rate.numerator,
                        first_preferences: rate.denominator,
                        percent: Some(rate.percent(2)),
                    }),
                    Err(e) if single => return Err(analysis(e)),
                    Err(_) => rates.push(render::RateEntry {
                        candidate: id,
                        continuing: 0,
                        first_preferences: 0,
                        percent: None,
                    }),
                }
            }
            let doc = render::ContinuationDoc {
                candidates: roster_names(&p),
                rates,
            };
            Ok(emit(json, &doc, || render::continuation(&p, &doc.rates)))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match execute(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
