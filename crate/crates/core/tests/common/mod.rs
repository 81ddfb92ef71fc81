#![allow(dead_code)]

use ballotlab::{BallotGroup, BallotProfile, CandidateId, Ranking};
use proptest::prelude::*;

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'A' + i as u8) as char).to_string()).collect()
}

/// Profiles with 1..=max_n candidates and at most `max_groups` groups of
/// weight 1..=3, rankings possibly truncated or empty.
pub fn arb_profile(max_n: usize, max_groups: usize) -> impl Strategy<Value = BallotProfile> {
    (1..=max_n).prop_flat_map(move |n| {
        let ballot = (Just((0..n).collect::<Vec<usize>>()).prop_shuffle(), 0..=n, 1u64..=3);
        proptest::collection::vec(ballot, 0..=max_groups).prop_map(move |ballots| {
            let groups = ballots.into_iter().map(|(perm, len, count)| BallotGroup {
                ranking: Ranking::new(perm[..len].iter().map(|&i| CandidateId(i)).collect()).unwrap(),
                count,
            });
            BallotProfile::new(&names(n), groups).unwrap()
        })
    })
}

/// Every permutation of `0..n`, by recursion.
pub fn permutations(n: usize) -> Vec<Vec<CandidateId>> {
    fn go(prefix: &mut Vec<CandidateId>, left: &mut Vec<CandidateId>, out: &mut Vec<Vec<CandidateId>>) {
        if left.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..left.len() {
            let c = left.remove(i);
            prefix.push(c);
            go(prefix, left, out);
            prefix.pop();
            left.insert(i, c);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (0..n).map(CandidateId).collect(), &mut out);
    out
}

/// Core-support check by direct ballot scanning: for every X above Y, a
/// ballot counts for whichever of X, Y is its first listed candidate at or
/// above Y in `order`.
pub fn brute_core_support_passes(profile: &BallotProfile, order: &[CandidateId]) -> bool {
    for j in 0..order.len() {
        let major = &order[..=j];
        let y = order[j];
        for &x in &order[..j] {
            let (mut xv, mut yv) = (0u64, 0u64);
            for g in profile.groups() {
                if let Some(&top) = g.ranking.ids().iter().find(|c| major.contains(c)) {
                    if top == x {
                        xv += g.count;
                    } else if top == y {
                        yv += g.count;
                    }
                }
            }
            if xv <= yv {
                return false;
            }
        }
    }
    true
}

/// Ballots preferring x to y, counted one ballot at a time.
pub fn brute_beats(profile: &BallotProfile, x: CandidateId, y: CandidateId) -> u64 {
    profile
        .groups()
        .iter()
        .filter(|g| g.ranking.prefers(x, y))
        .map(|g| g.count)
        .sum()
}
