//! Exhaustive reference implementations for small instances.
//!
//! Nothing here shares code with the solver beyond the profile and graph
//! types, so agreement between the two is meaningful.

use thiserror::Error;

use crate::bigraph::BipartiteGraph;
use crate::prefs::PreferenceProfile;
use crate::solver::Assignment;

/// Largest number of injections `m!/(m-n)!` the assignment enumerator walks.
pub const MAX_INJECTIONS: u128 = 10_000_000;
/// Largest left side accepted by [`brute_force_hall_check`].
pub const MAX_HALL_LEFT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance too large for exhaustive search ({0})")]
    TooLarge(String),
    #[error("instance has {n_agents} agents but only {n_houses} houses")]
    TooFewHouses { n_agents: usize, n_houses: usize },
}

fn injection_count(n: usize, m: usize) -> u128 {
    (0..n).fold(1u128, |acc, k| acc.saturating_mul((m - k) as u128))
}

fn check_size(profile: &PreferenceProfile) -> Result<(), OracleError> {
    let (n, m) = (profile.n_agents(), profile.n_houses());
    if m < n {
        return Err(OracleError::TooFewHouses {
            n_agents: n,
            n_houses: m,
        });
    }
    let count = injection_count(n, m);
    if count > MAX_INJECTIONS {
        return Err(OracleError::TooLarge(format!(
            "{count} injections for n={n}, m={m}; limit {MAX_INJECTIONS}"
        )));
    }
    Ok(())
}

/// Every envy-free assignment, in lexicographic order of the house vector.
pub fn enumerate_ef_assignments(profile: &PreferenceProfile) -> Result<Vec<Assignment>, OracleError> {
    check_size(profile)?;
    let n = profile.n_agents();
    let m = profile.n_houses();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; m];
    extend(profile, &mut current, &mut used, &mut out);
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    Ok(out
        .into_iter()
        .map(|h| Assignment::new(h, m).expect("injective by construction"))
        .collect())
}

fn extend(
    profile: &PreferenceProfile,
    current: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    let agent = current.len();
    if agent == profile.n_agents() {
        out.push(current.clone());
        return;
    }
    for house in 0..profile.n_houses() {
        if used[house] {
            continue;
        }
        // Envy between the new agent and every agent already placed.
        let ok = current.iter().enumerate().all(|(other, &theirs)| {
            profile.rank(agent, house) <= profile.rank(agent, theirs)
                && profile.rank(other, theirs) <= profile.rank(other, house)
        });
        if !ok {
            continue;
        }
        used[house] = true;
        current.push(house);
        extend(profile, current, used, out);
        current.pop();
        used[house] = false;
    }
}

/// `true` iff no envy-free assignment makes some agent strictly better off
/// while making nobody worse off, comparing by rank.
pub fn is_pareto_among_ef(
    profile: &PreferenceProfile,
    candidate: &Assignment,
) -> Result<bool, OracleError> {
    let all = enumerate_ef_assignments(profile)?;
    let dominated = all.iter().any(|other| {
        let mut strictly_better = false;
        for agent in 0..profile.n_agents() {
            let mine = profile.rank(agent, candidate.house_of(agent));
            let theirs = profile.rank(agent, other.house_of(agent));
            if theirs > mine {
                return false;
            }
            strictly_better |= theirs < mine;
        }
        strictly_better
    });
    Ok(!dominated)
}

/// All inclusion-minimal Hall violators, each a sorted list of left
/// vertices. Output is ordered by bitmask.
pub fn brute_force_hall_check(graph: &BipartiteGraph) -> Result<Vec<Vec<usize>>, OracleError> {
    let n = graph.n_left();
    if n > MAX_HALL_LEFT {
        return Err(OracleError::TooLarge(format!(
            "{n} left vertices; limit {MAX_HALL_LEFT}"
        )));
    }
    let full = 1usize << n;
    let nbr: Vec<u64> = (0..n)
        .map(|x| graph.neighbors(x).iter().fold(0u64, |acc, &y| acc | 1 << y))
        .collect();
    assert!(graph.n_right() <= 64, "right side limited to 64 vertices");

    let mut violates = vec![false; full];
    for mask in 1..full {
        let mut s = 0u64;
        for (x, &bits) in nbr.iter().enumerate() {
            if mask >> x & 1 == 1 {
                s |= bits;
            }
        }
        violates[mask] = mask.count_ones() > s.count_ones();
    }
    // contains[mask]: some subset of mask (including mask) violates.
    let mut contains = violates.clone();
    for mask in 1..full {
        if !contains[mask] {
            contains[mask] = (0..n).any(|x| mask >> x & 1 == 1 && contains[mask ^ (1 << x)]);
        }
    }
    Ok((1..full)
        .filter(|&mask| {
            violates[mask] && (0..n).all(|x| mask >> x & 1 == 0 || !contains[mask ^ (1 << x)])
        })
        .map(|mask| (0..n).filter(|x| mask >> x & 1 == 1).collect())
        .collect())
}
