//! Bipartite graphs between agents (left) and houses (right), maximum
//! matching, and minimal Hall violator extraction.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("left vertex {0} out of range")]
    LeftOutOfRange(usize),
    #[error("right vertex {0} out of range")]
    RightOutOfRange(usize),
    #[error("matching does not fit the graph")]
    MatchingMismatch,
    #[error("matching saturates the left side; there is no Hall violator")]
    Saturating,
}

/// Bipartite graph `G = (X, Y, E)` stored as sorted left-side adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    n_right: usize,
    adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// Adjacency lists are sorted and deduplicated.
    pub fn new(n_right: usize, mut adj: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            if let Some(&y) = list.last() {
                if y >= n_right {
                    return Err(GraphError::RightOutOfRange(y));
                }
            }
        }
        Ok(BipartiteGraph { n_right, adj })
    }

    pub fn from_edges(
        n_left: usize,
        n_right: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n_left];
        for (x, y) in edges {
            adj.get_mut(x).ok_or(GraphError::LeftOutOfRange(x))?.push(y);
        }
        Self::new(n_right, adj)
    }

    pub fn n_left(&self) -> usize {
        self.adj.len()
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.adj[x]
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.adj.get(x).is_some_and(|l| l.binary_search(&y).is_ok())
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(x, l)| l.iter().map(move |&y| (x, y)))
    }

    /// `S(subset)`: sorted right vertices adjacent to some vertex of `subset`.
    pub fn neighborhood(&self, subset: &[usize]) -> Result<Vec<usize>, GraphError> {
        let mut seen = vec![false; self.n_right];
        for &x in subset {
            for &y in self.adj.get(x).ok_or(GraphError::LeftOutOfRange(x))? {
                seen[y] = true;
            }
        }
        Ok(indices_of(&seen))
    }
}

/// A matching, kept as mates on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    left: Vec<Option<usize>>,
    right: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(n_left: usize, n_right: usize) -> Self {
        Matching {
            left: vec![None; n_left],
            right: vec![None; n_right],
        }
    }

    /// Builds a matching from pairs, checking they are edges of `graph` and
    /// that no vertex is used twice.
    pub fn from_pairs(
        graph: &BipartiteGraph,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut m = Matching::empty(graph.n_left(), graph.n_right());
        for (x, y) in pairs {
            if !graph.has_edge(x, y) || m.left[x].is_some() || m.right[y].is_some() {
                return Err(GraphError::MatchingMismatch);
            }
            m.left[x] = Some(y);
            m.right[y] = Some(x);
        }
        Ok(m)
    }

    pub fn mate_of_left(&self, x: usize) -> Option<usize> {
        self.left[x]
    }

    pub fn mate_of_right(&self, y: usize) -> Option<usize> {
        self.right[y]
    }

    pub fn len(&self) -> usize {
        self.left.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Pairs `(x, y)` in increasing `x`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.left
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|y| (x, y)))
    }

    pub fn unmatched_left(&self) -> impl Iterator<Item = usize> + '_ {
        self.left
            .iter()
            .enumerate()
            .filter(|(_, y)| y.is_none())
            .map(|(x, _)| x)
    }

    fn fits(&self, graph: &BipartiteGraph) -> bool {
        self.left.len() == graph.n_left()
            && self.right.len() == graph.n_right()
            && self.pairs().all(|(x, y)| graph.has_edge(x, y) && self.right[y] == Some(x))
    }
}

/// Maximum cardinality matching by repeated augmenting-path search.
///
/// Left vertices are tried in increasing order and each search scans
/// neighbors in increasing order, so the result is a fixed function of the
/// graph.
pub fn maximum_matching(graph: &BipartiteGraph) -> Matching {
    let mut matching = Matching::empty(graph.n_left(), graph.n_right());
    let mut visited = vec![false; graph.n_right()];
    for x in 0..graph.n_left() {
        visited.fill(false);
        if let Some(path) = augmenting_path_from(graph, &matching, x, &mut visited) {
            augment(&mut matching, &path);
        }
    }
    matching
}

/// Search for an augmenting path starting at unmatched left vertex `root`.
/// Returns the path as alternating `(x, y)` non-matching edges.
fn augmenting_path_from(
    graph: &BipartiteGraph,
    matching: &Matching,
    root: usize,
    visited: &mut [bool],
) -> Option<Vec<(usize, usize)>> {
    // Stack of (left vertex, next neighbor index to try).
    let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
    let mut path: Vec<(usize, usize)> = Vec::new();
    while let Some(&mut (x, ref mut next)) = stack.last_mut() {
        let neighbors = graph.neighbors(x);
        let mut advanced = false;
        while *next < neighbors.len() {
            let y = neighbors[*next];
            *next += 1;
            if visited[y] {
                continue;
            }
            visited[y] = true;
            path.push((x, y));
            match matching.right[y] {
                None => return Some(path),
                Some(x2) => {
                    stack.push((x2, 0));
                    advanced = true;
                    break;
                }
            }
        }
        if !advanced {
            stack.pop();
            path.pop();
        }
    }
    None
}

fn augment(matching: &mut Matching, path: &[(usize, usize)]) {
    for &(x, y) in path {
        matching.left[x] = Some(y);
        matching.right[y] = Some(x);
    }
}

/// Any augmenting path for `matching`, searching from every unmatched left
/// vertex. `None` certifies that the matching is maximum.
pub fn find_augmenting_path(
    graph: &BipartiteGraph,
    matching: &Matching,
) -> Option<Vec<(usize, usize)>> {
    let mut visited = vec![false; graph.n_right()];
    matching
        .unmatched_left()
        .find_map(|x| augmenting_path_from(graph, matching, x, &mut visited))
}

/// `true` iff every left vertex is matched.
pub fn is_saturating(matching: &Matching, graph: &BipartiteGraph) -> bool {
    matching.left.len() == graph.n_left() && matching.left.iter().all(Option::is_some)
}

/// A minimal Hall violator `Z` together with its neighborhood `S(Z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallViolator {
    /// Sorted left vertices.
    pub vertices: Vec<usize>,
    /// Sorted right vertices adjacent to `vertices`.
    pub neighborhood: Vec<usize>,
    /// The unmatched vertex the search started from.
    pub seed: usize,
}

/// Extract a minimal Hall violator from a maximum, non-saturating matching.
///
/// Starting at the lowest unmatched left vertex `z`, walk the auxiliary
/// digraph with arcs `x -> y` for every edge and `y -> x` for every matched
/// pair. The left vertices reached form `Z`; the right vertices reached are
/// exactly `S(Z)`, all matched into `Z`, so `|Z| = |S(Z)| + 1`.
///
/// The matching must be maximum. That is not checked.
pub fn minimal_hall_violator(
    graph: &BipartiteGraph,
    matching: &Matching,
) -> Result<HallViolator, GraphError> {
    if !matching.fits(graph) {
        return Err(GraphError::MatchingMismatch);
    }
    let seed = matching.unmatched_left().next().ok_or(GraphError::Saturating)?;
    let mut left_seen = vec![false; graph.n_left()];
    let mut right_seen = vec![false; graph.n_right()];
    left_seen[seed] = true;
    let mut stack = vec![seed];
    while let Some(x) = stack.pop() {
        for &y in graph.neighbors(x) {
            if right_seen[y] {
                continue;
            }
            right_seen[y] = true;
            if let Some(x2) = matching.right[y] {
                if !left_seen[x2] {
                    left_seen[x2] = true;
                    stack.push(x2);
                }
            }
        }
    }
    Ok(HallViolator {
        vertices: indices_of(&left_seen),
        neighborhood: indices_of(&right_seen),
        seed,
    })
}

/// Text dump of the auxiliary digraph used by [`minimal_hall_violator`].
/// Agents print as `a<i>` and houses as `h<j>`, both 1-based.
pub fn auxiliary_digraph_dump(graph: &BipartiteGraph, matching: &Matching) -> String {
    let mut out = String::new();
    for x in 0..graph.n_left() {
        let targets: Vec<String> = graph
            .neighbors(x)
            .iter()
            .map(|y| format!("h{}", y + 1))
            .collect();
        let _ = writeln!(out, "a{} -> [{}]", x + 1, targets.join(", "));
    }
    for y in 0..graph.n_right() {
        match matching.mate_of_right(y) {
            Some(x) => {
                let _ = writeln!(out, "h{} -> [a{}]", y + 1, x + 1);
            }
            None => {
                let _ = writeln!(out, "h{} -> []", y + 1);
            }
        }
    }
    out
}

fn indices_of(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i)
        .collect()
}
