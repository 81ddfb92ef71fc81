//! Bundled ballot data.

use crate::ballots::{parse_profile, BallotProfile};

/// Ballot totals by ranking for the 2022 Alaska special congressional
/// election (Begich, Palin, Peltola).
pub const ALASKA_2022: &str = include_str!("../fixtures/alaska-2022-special.csv");

pub fn alaska() -> BallotProfile {
    parse_profile(ALASKA_2022).expect("bundled fixture parses")
}
