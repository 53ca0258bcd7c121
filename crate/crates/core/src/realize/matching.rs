//! Maximum bipartite matching (Hopcroft-Karp) and the cycle-cover oracle.

use std::collections::{BTreeMap, VecDeque};

use crate::construct::HamDecomposition;
use crate::error::{Error, Result};
use crate::sampling::SampledGraph;

/// Disjoint `(left, right)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

const FREE: usize = usize::MAX;

/// Hopcroft-Karp on `0..adj.len()` (left) and `0..right` (right).
/// Returns the partner of every left vertex.
pub fn hopcroft_karp(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    let left = adj.len();
    let mut match_l = vec![FREE; left];
    let mut match_r = vec![FREE; right];
    let mut dist = vec![0usize; left];
    loop {
        // Layer the free left vertices.
        let mut queue = VecDeque::new();
        for u in 0..left {
            if match_l[u] == FREE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == FREE {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        let mut next = vec![0usize; left];
        for u in 0..left {
            if match_l[u] == FREE {
                augment(u, adj, &mut match_l, &mut match_r, &mut dist, &mut next);
            }
        }
    }
    match_l.into_iter().map(|v| (v != FREE).then_some(v)).collect()
}

// Iterative DFS along the layering; `next[u]` is the position of the edge
// currently being tried from `u`.
fn augment(
    root: usize,
    adj: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [usize],
    next: &mut [usize],
) -> bool {
    let mut stack = vec![root];
    while let Some(&u) = stack.last() {
        if next[u] == adj[u].len() {
            dist[u] = usize::MAX;
            stack.pop();
            if let Some(&parent) = stack.last() {
                next[parent] += 1;
            }
            continue;
        }
        let v = adj[u][next[u]];
        let w = match_r[v];
        if w == FREE {
            for &x in &stack {
                let y = adj[x][next[x]];
                match_l[x] = y;
                match_r[y] = x;
            }
            return true;
        }
        if dist[w] == dist[u] + 1 {
            stack.push(w);
        } else {
            next[u] += 1;
        }
    }
    false
}

/// Maximum matching between `left` and `right` node sets using `edges`
/// (each edge given as `(left node, right node)`).
pub fn max_bipartite_matching(left: &[usize], right: &[usize], edges: &[(usize, usize)]) -> Result<Matching> {
    let li: BTreeMap<usize, usize> = left.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let ri: BTreeMap<usize, usize> = right.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    if li.len() != left.len() || ri.len() != right.len() {
        return Err(Error::InvalidDecomposition("matching sides contain duplicates".into()));
    }
    let mut adj = vec![Vec::new(); left.len()];
    for &(a, b) in edges {
        match (li.get(&a), ri.get(&b)) {
            (Some(&x), Some(&y)) => adj[x].push(y),
            _ => return Err(Error::InvalidDecomposition(format!("edge ({a},{b}) does not join left to right"))),
        }
    }
    let partner = hopcroft_karp(&adj, right.len());
    let pairs = partner.iter().enumerate().filter_map(|(x, y)| y.map(|y| (left[x], right[y]))).collect();
    Ok(Matching { pairs })
}

/// A cycle cover of the digraph with out-neighbor lists `out`, if one exists.
/// Cycle covers are exactly perfect matchings between out-copies and in-copies.
pub fn cycle_cover(out: &[Vec<usize>]) -> Option<HamDecomposition> {
    let n = out.len();
    let adj: Vec<Vec<usize>> =
        out.iter().enumerate().map(|(v, ws)| ws.iter().copied().filter(|&w| w != v).collect()).collect();
    let partner = hopcroft_karp(&adj, n);
    let successor: Option<Vec<usize>> = partner.into_iter().collect();
    HamDecomposition::from_successor(successor?).ok()
}

/// Whether the digraph with out-neighbor lists `out` has a Hamiltonian
/// decomposition (spanning union of node-disjoint directed cycles).
pub fn oracle_exists(out: &[Vec<usize>]) -> bool {
    cycle_cover(out).is_some()
}

/// The oracle applied to the directed version of an undirected sampled graph.
pub fn graph_has_decomposition(g: &SampledGraph) -> bool {
    oracle_exists(&directed_version(g))
}

/// Out-neighbor lists with both orientations of every undirected edge.
pub fn directed_version(g: &SampledGraph) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); g.n()];
    for &(a, b) in g.edges() {
        out[a].push(b);
        out[b].push(a);
    }
    out
}
