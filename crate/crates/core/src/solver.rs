//! Envy-free assignment by iterated top-choice matching.
//!
//! Each round joins every agent to its most preferred houses among the
//! houses still in play. A saturating matching of that graph is an
//! envy-free assignment. Otherwise a minimal Hall violator is extracted and
//! its neighborhood is discarded: none of those houses can appear in any
//! envy-free assignment. Once fewer houses than agents remain, none exists.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigraph::{self, BipartiteGraph, HallViolator};
use crate::prefs::PreferenceProfile;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("instance has {n_agents} agents but only {n_houses} houses")]
    TooFewHouses { n_agents: usize, n_houses: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssignmentError {
    #[error("house {house} is out of range")]
    HouseOutOfRange { house: usize },
    #[error("house {house} is assigned to more than one agent")]
    Duplicate { house: usize },
}

/// A total, injective map from agents to houses (0-based).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    houses: Vec<usize>,
}

impl Assignment {
    /// `houses[i]` is agent `i`'s house.
    pub fn new(houses: Vec<usize>, n_houses: usize) -> Result<Self, AssignmentError> {
        let mut used = vec![false; n_houses];
        for &house in &houses {
            let slot = used
                .get_mut(house)
                .ok_or(AssignmentError::HouseOutOfRange { house })?;
            if *slot {
                return Err(AssignmentError::Duplicate { house });
            }
            *slot = true;
        }
        Ok(Assignment { houses })
    }

    pub fn house_of(&self, agent: usize) -> usize {
        self.houses[agent]
    }

    pub fn houses(&self) -> &[usize] {
        &self.houses
    }

    pub fn n_agents(&self) -> usize {
        self.houses.len()
    }
}

/// `true` iff every agent weakly prefers its own house to every other
/// assigned house.
///
/// Panics if the assignment does not cover exactly the profile's agents.
pub fn verify_envy_free(profile: &PreferenceProfile, assignment: &Assignment) -> bool {
    assert_eq!(assignment.n_agents(), profile.n_agents());
    let houses = assignment.houses();
    (0..houses.len()).all(|i| {
        houses
            .iter()
            .all(|&other| profile.weakly_prefers(i, houses[i], other))
    })
}

/// One pass of the main loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Iteration {
    /// Houses still in play at the start of the pass, sorted.
    pub remaining: Vec<usize>,
    pub saturated: bool,
    /// Set when no saturating matching exists; its neighborhood is removed.
    pub violator: Option<HallViolator>,
    pub removed: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SolveTrace {
    pub iterations: Vec<Iteration>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub assignment: Option<Assignment>,
    pub trace: SolveTrace,
}

impl Solution {
    pub fn is_found(&self) -> bool {
        self.assignment.is_some()
    }
}

/// Graph joining each agent to its top choices among `remaining`.
/// The right side spans all houses; houses outside `remaining` are isolated.
pub fn top_choice_graph(profile: &PreferenceProfile, remaining: &[usize]) -> BipartiteGraph {
    let adj = (0..profile.n_agents())
        .map(|agent| {
            profile
                .top_choices(agent, remaining)
                .expect("remaining is a nonempty set of valid houses")
        })
        .collect();
    BipartiteGraph::new(profile.n_houses(), adj).expect("top choices are valid houses")
}

/// Decide whether an envy-free assignment exists and compute one if so.
///
/// Fails only when there are fewer houses than agents.
pub fn envy_free_assignment(profile: &PreferenceProfile) -> Result<Solution, SolveError> {
    let n = profile.n_agents();
    let m = profile.n_houses();
    if m < n {
        return Err(SolveError::TooFewHouses {
            n_agents: n,
            n_houses: m,
        });
    }

    let mut remaining: Vec<usize> = (0..m).collect();
    let mut trace = SolveTrace::default();
    while n <= remaining.len() {
        let graph = top_choice_graph(profile, &remaining);
        let matching = bigraph::maximum_matching(&graph);
        if bigraph::is_saturating(&matching, &graph) {
            let houses = (0..n)
                .map(|x| matching.mate_of_left(x).expect("saturating"))
                .collect();
            trace.iterations.push(Iteration {
                remaining,
                saturated: true,
                violator: None,
                removed: Vec::new(),
            });
            let assignment = Assignment::new(houses, m).expect("matching is injective");
            return Ok(Solution {
                assignment: Some(assignment),
                trace,
            });
        }

        let violator = bigraph::minimal_hall_violator(&graph, &matching)
            .expect("maximum matching is not saturating");
        let removed = violator.neighborhood.clone();
        debug_assert!(!removed.is_empty());
        let next: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|h| removed.binary_search(h).is_err())
            .collect();
        trace.iterations.push(Iteration {
            remaining,
            saturated: false,
            violator: Some(violator),
            removed,
        });
        remaining = next;
    }
    Ok(Solution {
        assignment: None,
        trace,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Found,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolatorReport {
    pub agents: Vec<usize>,
    pub houses: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationReport {
    pub iteration: usize,
    pub remaining: Vec<usize>,
    pub saturating: bool,
    pub violator: Option<ViolatorReport>,
    pub removed: Vec<usize>,
}

/// Serialized form of a [`Solution`], with 1-based ids throughout.
///
/// ```json
/// {"status":"found","assignment":{"1":2,"2":3},"trace":[...]}
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: Status,
    pub assignment: IndexMap<String, usize>,
    pub trace: Vec<IterationReport>,
}

fn one_based(ids: &[usize]) -> Vec<usize> {
    ids.iter().map(|i| i + 1).collect()
}

impl From<&Solution> for SolveReport {
    fn from(solution: &Solution) -> Self {
        let assignment = solution
            .assignment
            .iter()
            .flat_map(|a| a.houses().iter().enumerate())
            .map(|(agent, house)| ((agent + 1).to_string(), house + 1))
            .collect();
        let trace = solution
            .trace
            .iterations
            .iter()
            .enumerate()
            .map(|(i, it)| IterationReport {
                iteration: i + 1,
                remaining: one_based(&it.remaining),
                saturating: it.saturated,
                violator: it.violator.as_ref().map(|v| ViolatorReport {
                    agents: one_based(&v.vertices),
                    houses: one_based(&v.neighborhood),
                }),
                removed: one_based(&it.removed),
            })
            .collect();
        SolveReport {
            status: if solution.is_found() {
                Status::Found
            } else {
                Status::None
            },
            assignment,
            trace,
        }
    }
}

impl SolveReport {
    /// Recover the 0-based assignment, if the report carries a valid one.
    pub fn to_assignment(&self, n_houses: usize) -> Option<Assignment> {
        if self.status != Status::Found {
            return None;
        }
        let mut houses = vec![None; self.assignment.len()];
        for (agent, &house) in &self.assignment {
            let agent: usize = agent.parse().ok()?;
            let slot = houses.get_mut(agent.checked_sub(1)?)?;
            *slot = Some(house.checked_sub(1)?);
        }
        let houses = houses.into_iter().collect::<Option<Vec<_>>>()?;
        Assignment::new(houses, n_houses).ok()
    }
}
