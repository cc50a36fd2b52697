//! Random preference model and Monte Carlo estimation of how often an
//! envy-free assignment exists.
//!
//! All randomness comes from ChaCha8 (`rand_chacha`, pinned in the
//! manifest). Trial `t` of a run with master seed `s` draws from the stream
//! `t` of the generator seeded with `s`, so trials can run in any order or
//! in parallel and still give the same counts.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::prefs::PreferenceProfile;
use crate::solver::{self, Assignment};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20190418;

/// CSV header matching [`MonteCarloStats::csv_row`].
pub const CSV_HEADER: &str = "n,m,trials,successes,mechanism_successes,success_fraction,seed";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RandError {
    #[error("need at least one agent and one house (got n={n}, m={m})")]
    EmptyInstance { n: usize, m: usize },
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("utility {value} at agent {agent}, house {house} is outside [0, 1]")]
    OutOfRange { agent: usize, house: usize, value: f64 },
    #[error("utility rows have inconsistent lengths")]
    Ragged,
}

/// Cardinal utilities `u(i, h)` in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityMatrix {
    n_agents: usize,
    n_houses: usize,
    values: Vec<f64>,
}

impl UtilityMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, RandError> {
        let n_agents = rows.len();
        let n_houses = rows.first().map_or(0, Vec::len);
        if n_agents == 0 || n_houses == 0 {
            return Err(RandError::EmptyInstance {
                n: n_agents,
                m: n_houses,
            });
        }
        let mut values = Vec::with_capacity(n_agents * n_houses);
        for (agent, row) in rows.into_iter().enumerate() {
            if row.len() != n_houses {
                return Err(RandError::Ragged);
            }
            for (house, &value) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&value) {
                    return Err(RandError::OutOfRange { agent, house, value });
                }
            }
            values.extend(row);
        }
        Ok(UtilityMatrix {
            n_agents,
            n_houses,
            values,
        })
    }

    /// Independent uniform draws on `[0, 1)`.
    pub fn sample<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Self {
        assert!(n >= 1 && m >= 1, "empty utility matrix");
        UtilityMatrix {
            n_agents: n,
            n_houses: m,
            values: (0..n * m).map(|_| rng.random::<f64>()).collect(),
        }
    }

    pub fn n_agents(&self) -> usize {
        self.n_agents
    }

    pub fn n_houses(&self) -> usize {
        self.n_houses
    }

    pub fn get(&self, agent: usize, house: usize) -> f64 {
        assert!(agent < self.n_agents && house < self.n_houses);
        self.values[agent * self.n_houses + house]
    }

    pub fn row(&self, agent: usize) -> &[f64] {
        &self.values[agent * self.n_houses..(agent + 1) * self.n_houses]
    }
}

/// Generator for trial `trial` under master seed `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Strict rankings, each an independent uniform permutation of the houses.
pub fn strict_profile_from_rng<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> PreferenceProfile {
    let orderings: Vec<Vec<usize>> = (0..n)
        .map(|_| {
            let mut order: Vec<usize> = (0..m).collect();
            order.shuffle(rng);
            order
        })
        .collect();
    PreferenceProfile::from_orderings(&orderings).expect("permutations form a valid profile")
}

/// Uniformly random strict profile, reproducible from `seed`.
///
/// Panics if `n` or `m` is zero.
pub fn sample_strict_profile(n: usize, m: usize, seed: u64) -> PreferenceProfile {
    assert!(n >= 1 && m >= 1, "need at least one agent and one house");
    strict_profile_from_rng(n, m, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Random weak profile: a uniform permutation per agent where each adjacent
/// pair is tied with probability `tie_prob`.
pub fn profile_with_ties_from_rng<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    tie_prob: f64,
    rng: &mut R,
) -> PreferenceProfile {
    let ranks = (0..n)
        .map(|_| {
            let mut order: Vec<usize> = (0..m).collect();
            order.shuffle(rng);
            let mut row = vec![0u32; m];
            let mut group_rank = 1u32;
            for (pos, &house) in order.iter().enumerate() {
                if pos > 0 && !rng.random_bool(tie_prob) {
                    group_rank = pos as u32 + 1;
                }
                row[house] = group_rank;
            }
            row
        })
        .collect();
    PreferenceProfile::from_ranks(ranks).expect("ranks are positive and complete")
}

/// Rank houses by decreasing utility; exact ties go to the lower house id.
pub fn utilities_to_profile(utilities: &UtilityMatrix) -> PreferenceProfile {
    let orderings: Vec<Vec<usize>> = (0..utilities.n_agents())
        .map(|agent| {
            let row = utilities.row(agent);
            let mut order: Vec<usize> = (0..row.len()).collect();
            order.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
            order
        })
        .collect();
    PreferenceProfile::from_orderings(&orderings).expect("orderings are permutations")
}

/// Acceptance level `1 - 1/n` for `n` agents.
pub fn threshold(n_agents: usize) -> f64 {
    1.0 - 1.0 / n_agents as f64
}

/// The only agent valuing `house` at or above the threshold, provided every
/// other agent is strictly below it.
pub fn qualifying_agent(utilities: &UtilityMatrix, house: usize) -> Option<usize> {
    let t = threshold(utilities.n_agents());
    let mut found = None;
    for agent in 0..utilities.n_agents() {
        if utilities.get(agent, house) >= t {
            if found.is_some() {
                return None;
            }
            found = Some(agent);
        }
    }
    found
}

/// Walk houses in increasing id, handing each qualifying house to its agent
/// unless that agent already holds one. `Some` only if everyone is served.
///
/// With a single agent the threshold is zero and the agent simply gets
/// house 0.
pub fn threshold_mechanism(utilities: &UtilityMatrix) -> Option<Assignment> {
    let n = utilities.n_agents();
    let m = utilities.n_houses();
    if n == 1 {
        return Some(Assignment::new(vec![0], m).expect("house 0 exists"));
    }
    let mut houses: Vec<Option<usize>> = vec![None; n];
    let mut served = 0;
    for house in 0..m {
        if let Some(agent) = qualifying_agent(utilities, house) {
            if houses[agent].is_none() {
                houses[agent] = Some(house);
                served += 1;
                if served == n {
                    break;
                }
            }
        }
    }
    let houses = houses.into_iter().collect::<Option<Vec<_>>>()?;
    Some(Assignment::new(houses, m).expect("each house handed out once"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloStats {
    pub n_agents: usize,
    pub n_houses: usize,
    pub trials: u64,
    /// Trials where an envy-free assignment exists.
    pub successes: u64,
    pub success_fraction: f64,
    pub seed: u64,
    /// Trials where the threshold mechanism served every agent.
    pub mechanism_successes: u64,
}

impl MonteCarloStats {
    pub fn mechanism_fraction(&self) -> f64 {
        self.mechanism_successes as f64 / self.trials as f64
    }

    /// Binomial standard error of `success_fraction`.
    pub fn std_error(&self) -> f64 {
        binomial_std_error(self.success_fraction, self.trials)
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6},{}",
            self.n_agents,
            self.n_houses,
            self.trials,
            self.successes,
            self.mechanism_successes,
            self.success_fraction,
            self.seed
        )
    }
}

/// `sqrt(p (1 - p) / trials)`.
pub fn binomial_std_error(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Outcome of one random instance: (envy-free assignment exists,
/// threshold mechanism completed).
pub fn run_trial(n: usize, m: usize, seed: u64, trial: u64) -> (bool, bool) {
    let mut rng = trial_rng(seed, trial);
    let utilities = UtilityMatrix::sample(n, m, &mut rng);
    let profile = utilities_to_profile(&utilities);
    // m < n: no total injective assignment, let alone an envy-free one.
    let exists = solver::envy_free_assignment(&profile).is_ok_and(|s| s.is_found());
    let mechanism = threshold_mechanism(&utilities).is_some();
    (exists, mechanism)
}

/// Estimate the probability that an envy-free assignment exists for `n`
/// agents with uniformly random strict preferences over `m` houses.
pub fn estimate_existence_probability(
    n: usize,
    m: usize,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloStats, RandError> {
    if n == 0 || m == 0 {
        return Err(RandError::EmptyInstance { n, m });
    }
    if trials == 0 {
        return Err(RandError::NoTrials);
    }
    let (successes, mechanism_successes) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let (exists, mechanism) = run_trial(n, m, seed, t);
            (exists as u64, mechanism as u64)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(MonteCarloStats {
        n_agents: n,
        n_houses: m,
        trials,
        successes,
        success_fraction: successes as f64 / trials as f64,
        seed,
        mechanism_successes,
    })
}

/// `ceil(3 n ln n)`, the house count at which existence becomes likely.
pub fn three_n_log_n(n: usize) -> usize {
    let n = n as f64;
    (3.0 * n * n.ln()).ceil() as usize
}

/// Probability that a fixed house qualifies for a fixed agent:
/// `(1/n) (1 - 1/n)^(n-1)`.
pub fn qualification_probability(n: usize) -> f64 {
    let n = n as f64;
    (1.0 / n) * (1.0 - 1.0 / n).powf(n - 1.0)
}

/// Union bound on the mechanism's failure probability: `n (1 - p)^m`.
pub fn mechanism_failure_bound(n: usize, m: usize) -> f64 {
    n as f64 * (1.0 - qualification_probability(n)).powf(m as f64)
}
