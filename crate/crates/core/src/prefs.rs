//! Agent preference profiles over houses, with ties.
//!
//! Agents and houses are 0-based inside the library. The instance text
//! format and every other external surface use 1-based ids.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Errors from building or querying a [`PreferenceProfile`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrefsError {
    #[error("profile needs at least one agent and one house (got n={n_agents}, m={n_houses})")]
    Empty { n_agents: usize, n_houses: usize },
    #[error("agent {agent} ranks {got} houses, expected {expected}")]
    WrongLength {
        agent: usize,
        got: usize,
        expected: usize,
    },
    #[error("agent {agent} has rank value 0 for house {house}; ranks start at 1")]
    ZeroRank { agent: usize, house: usize },
    #[error("agent {agent} lists house {house} more than once")]
    DuplicateHouse { agent: usize, house: usize },
    #[error("agent id {0} out of range")]
    AgentOutOfRange(usize),
    #[error("house id {0} out of range")]
    HouseOutOfRange(usize),
    #[error("available house set is empty")]
    EmptyAvailable,
}

/// What went wrong on a particular line of an instance file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("empty input")]
    EmptyInput,
    #[error("header must be `<n> <m>` with two positive integers, got {0:?}")]
    BadHeader(String),
    #[error("unexpected token {0:?}")]
    BadToken(String),
    #[error("empty tie group in {0:?}")]
    EmptyGroup(String),
    #[error("house {house} is out of range 1..={n_houses}")]
    HouseOutOfRange { house: usize, n_houses: usize },
    #[error("house {0} appears more than once")]
    DuplicateHouse(usize),
    #[error("ranking is missing house(s) {0:?}")]
    MissingHouses(Vec<usize>),
    #[error("expected {expected} ranking lines, found {found}")]
    AgentCountMismatch { expected: usize, found: usize },
}

/// A parse failure, with the 1-based line it was detected on.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

/// Complete weak rankings of `m` houses by `n` agents.
///
/// Stored as a dense rank matrix: `rank(i, h)` is a positive integer and a
/// lower value is better. Equal values encode ties. The values need not be
/// dense; only the ordering they induce matters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceProfile {
    n_agents: usize,
    n_houses: usize,
    ranks: Vec<u32>,
}

impl PreferenceProfile {
    /// Build from a per-agent rank vector (`ranks[i][h]`, lower is better).
    pub fn from_ranks(ranks: Vec<Vec<u32>>) -> Result<Self, PrefsError> {
        let n_agents = ranks.len();
        let n_houses = ranks.first().map_or(0, Vec::len);
        if n_agents == 0 || n_houses == 0 {
            return Err(PrefsError::Empty { n_agents, n_houses });
        }
        let mut flat = Vec::with_capacity(n_agents * n_houses);
        for (agent, row) in ranks.into_iter().enumerate() {
            if row.len() != n_houses {
                return Err(PrefsError::WrongLength {
                    agent,
                    got: row.len(),
                    expected: n_houses,
                });
            }
            if let Some(house) = row.iter().position(|&r| r == 0) {
                return Err(PrefsError::ZeroRank { agent, house });
            }
            flat.extend(row);
        }
        Ok(PreferenceProfile {
            n_agents,
            n_houses,
            ranks: flat,
        })
    }

    /// Build strict preferences from per-agent orderings, best house first.
    pub fn from_orderings(orderings: &[Vec<usize>]) -> Result<Self, PrefsError> {
        let n_houses = orderings.first().map_or(0, Vec::len);
        let ranks = orderings
            .iter()
            .enumerate()
            .map(|(agent, order)| {
                if order.len() != n_houses {
                    return Err(PrefsError::WrongLength {
                        agent,
                        got: order.len(),
                        expected: n_houses,
                    });
                }
                let mut row = vec![0u32; n_houses];
                for (pos, &house) in order.iter().enumerate() {
                    if house >= n_houses {
                        return Err(PrefsError::HouseOutOfRange(house));
                    }
                    if row[house] != 0 {
                        return Err(PrefsError::DuplicateHouse { agent, house });
                    }
                    row[house] = pos as u32 + 1;
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_ranks(ranks)
    }

    pub fn n_agents(&self) -> usize {
        self.n_agents
    }

    pub fn n_houses(&self) -> usize {
        self.n_houses
    }

    /// Rank of `house` for `agent`. Panics on out-of-range ids.
    #[inline]
    pub fn rank(&self, agent: usize, house: usize) -> u32 {
        assert!(agent < self.n_agents, "agent {agent} out of range");
        assert!(house < self.n_houses, "house {house} out of range");
        self.ranks[agent * self.n_houses + house]
    }

    /// Full rank row of one agent.
    pub fn ranks_of(&self, agent: usize) -> &[u32] {
        assert!(agent < self.n_agents, "agent {agent} out of range");
        &self.ranks[agent * self.n_houses..(agent + 1) * self.n_houses]
    }

    /// `true` iff `agent` likes `h1` at least as much as `h2`.
    ///
    /// Panics if any id is out of range.
    #[inline]
    pub fn weakly_prefers(&self, agent: usize, h1: usize, h2: usize) -> bool {
        self.rank(agent, h1) <= self.rank(agent, h2)
    }

    /// The houses of `available` that `agent` ranks best, in the order they
    /// appear in `available`.
    pub fn top_choices(&self, agent: usize, available: &[usize]) -> Result<Vec<usize>, PrefsError> {
        if agent >= self.n_agents {
            return Err(PrefsError::AgentOutOfRange(agent));
        }
        if let Some(&h) = available.iter().find(|&&h| h >= self.n_houses) {
            return Err(PrefsError::HouseOutOfRange(h));
        }
        let row = self.ranks_of(agent);
        let best = available
            .iter()
            .map(|&h| row[h])
            .min()
            .ok_or(PrefsError::EmptyAvailable)?;
        Ok(available.iter().copied().filter(|&h| row[h] == best).collect())
    }

    /// Tie groups of one agent, best first, each group sorted by house id.
    pub fn tie_groups(&self, agent: usize) -> Vec<Vec<usize>> {
        let row = self.ranks_of(agent);
        let mut houses: Vec<usize> = (0..self.n_houses).collect();
        houses.sort_by_key(|&h| (row[h], h));
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut last = None;
        for h in houses {
            if last == Some(row[h]) {
                groups.last_mut().unwrap().push(h);
            } else {
                groups.push(vec![h]);
                last = Some(row[h]);
            }
        }
        groups
    }

    /// `true` if no agent has a tie anywhere in their ranking.
    pub fn is_strict(&self) -> bool {
        (0..self.n_agents).all(|i| self.tie_groups(i).len() == self.n_houses)
    }
}

impl fmt::Display for PreferenceProfile {
    /// Writes the profile in instance-file format (1-based ids).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n_agents, self.n_houses)?;
        for agent in 0..self.n_agents {
            let line = self
                .tie_groups(agent)
                .iter()
                .map(|g| {
                    g.iter()
                        .map(|h| (h + 1).to_string())
                        .collect::<Vec<_>>()
                        .join(" = ")
                })
                .collect::<Vec<_>>()
                .join(" > ");
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

impl FromStr for PreferenceProfile {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse_profile(text)
    }
}

/// Parse an instance file.
///
/// ```text
/// 2 3
/// 1 > 2 > 3
/// 1 > 3 = 2
/// ```
///
/// Blank lines are skipped. Line numbers in errors refer to the raw input.
pub fn parse_profile(text: &str) -> Result<PreferenceProfile, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(ParseError {
        line: 1,
        kind: ParseErrorKind::EmptyInput,
    })?;
    let (n_agents, n_houses) = parse_header(header).ok_or_else(|| ParseError {
        line: header_line,
        kind: ParseErrorKind::BadHeader(header.to_string()),
    })?;

    let mut ranks = Vec::with_capacity(n_agents);
    let mut last_line = header_line;
    for (line, content) in lines {
        last_line = line;
        if ranks.len() == n_agents {
            return Err(ParseError {
                line,
                kind: ParseErrorKind::AgentCountMismatch {
                    expected: n_agents,
                    found: n_agents + 1,
                },
            });
        }
        let row = parse_ranking(content, n_houses).map_err(|kind| ParseError { line, kind })?;
        ranks.push(row);
    }
    if ranks.len() != n_agents {
        return Err(ParseError {
            line: last_line,
            kind: ParseErrorKind::AgentCountMismatch {
                expected: n_agents,
                found: ranks.len(),
            },
        });
    }
    Ok(PreferenceProfile::from_ranks(ranks).expect("parser produced a valid rank matrix"))
}

fn parse_header(header: &str) -> Option<(usize, usize)> {
    let mut parts = header.split_whitespace();
    let n = parts.next()?.parse::<usize>().ok()?;
    let m = parts.next()?.parse::<usize>().ok()?;
    if parts.next().is_some() || n == 0 || m == 0 {
        return None;
    }
    Some((n, m))
}

/// One ranking line. Every member of a tie group gets the 1-based position
/// of the group's first house.
fn parse_ranking(line: &str, n_houses: usize) -> Result<Vec<u32>, ParseErrorKind> {
    let mut row = vec![0u32; n_houses];
    let mut position = 1u32;
    for group in line.split('>') {
        let group_rank = position;
        for token in group.split('=') {
            let token = token.trim();
            if token.is_empty() {
                return Err(ParseErrorKind::EmptyGroup(line.to_string()));
            }
            let house: usize = token
                .parse()
                .map_err(|_| ParseErrorKind::BadToken(token.to_string()))?;
            if house == 0 || house > n_houses {
                return Err(ParseErrorKind::HouseOutOfRange { house, n_houses });
            }
            if row[house - 1] != 0 {
                return Err(ParseErrorKind::DuplicateHouse(house));
            }
            row[house - 1] = group_rank;
            position += 1;
        }
    }
    let missing: Vec<usize> = row
        .iter()
        .enumerate()
        .filter(|(_, &r)| r == 0)
        .map(|(h, _)| h + 1)
        .collect();
    if !missing.is_empty() {
        return Err(ParseErrorKind::MissingHouses(missing));
    }
    Ok(row)
}
