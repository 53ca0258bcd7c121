//! Step-graphons and the combinatorial objects derived from them: the
//! concentration vector, the skeleton graph and its incidence matrix.
//!
//! Nodes and blocks are 0-based throughout the library.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, q, sum, Q};

/// Breakpoints `0 = s_0 < s_1 < ... < s_q = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    breakpoints: Vec<Q>,
}

impl Partition {
    pub fn new(breakpoints: Vec<Q>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidPartition("need at least two breakpoints".into()));
        }
        if !breakpoints[0].is_zero() {
            return Err(Error::InvalidPartition("first breakpoint must be 0".into()));
        }
        if !breakpoints[breakpoints.len() - 1].is_one() {
            return Err(Error::InvalidPartition("last breakpoint must be 1".into()));
        }
        if let Some(w) = breakpoints.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition(format!("breakpoints not strictly increasing at position {}", w + 1)));
        }
        Ok(Self { breakpoints })
    }

    /// `q` equal blocks.
    pub fn uniform(blocks: usize) -> Self {
        assert!(blocks >= 1);
        let breakpoints = (0..=blocks).map(|i| q(i as i64, blocks as i64)).collect();
        Self { breakpoints }
    }

    pub fn breakpoints(&self) -> &[Q] {
        &self.breakpoints
    }

    /// Number of blocks `q`.
    pub fn len(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Half-open interval `[s_b, s_{b+1})` of block `b`.
    pub fn interval(&self, block: usize) -> (&Q, &Q) {
        (&self.breakpoints[block], &self.breakpoints[block + 1])
    }

    /// Block containing `t`, with `t = 1` assigned to the last block.
    pub fn block_of(&self, t: &Q) -> Option<usize> {
        if t.is_negative() || *t > Q::one() {
            return None;
        }
        let inner = &self.breakpoints[1..self.breakpoints.len() - 1];
        Some(inner.partition_point(|b| b <= t))
    }
}

/// A graphon that is constant on each rectangle of a partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepGraphon {
    partition: Partition,
    values: Vec<Vec<Q>>,
}

impl StepGraphon {
    pub fn new(partition: Partition, values: Vec<Vec<Q>>) -> Result<Self> {
        let q = partition.len();
        if values.len() != q || values.iter().any(|row| row.len() != q) {
            return Err(Error::InvalidGraphon(format!("values must be a {q}x{q} matrix")));
        }
        for i in 0..q {
            for j in 0..q {
                let v = &values[i][j];
                if v.is_negative() || *v > Q::one() {
                    return Err(Error::InvalidGraphon(format!(
                        "value at ({},{}) = {} is outside [0,1]",
                        i + 1,
                        j + 1,
                        format_rational(v)
                    )));
                }
                if values[j][i] != *v {
                    return Err(Error::InvalidGraphon(format!("values not symmetric at ({},{})", i + 1, j + 1)));
                }
            }
        }
        Ok(Self { partition, values })
    }

    /// Constant graphon `W = p` on a single block.
    pub fn constant(p: Q) -> Result<Self> {
        Self::new(Partition::uniform(1), vec![vec![p]])
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn values(&self) -> &[Vec<Q>] {
        &self.values
    }

    pub fn blocks(&self) -> usize {
        self.partition.len()
    }

    pub fn value(&self, i: usize, j: usize) -> &Q {
        &self.values[i][j]
    }

    /// Evaluates `W(s, t)` for `s, t` in `[0, 1]`.
    pub fn evaluate(&self, s: &Q, t: &Q) -> Option<&Q> {
        let i = self.partition.block_of(s)?;
        let j = self.partition.block_of(t)?;
        Some(&self.values[i][j])
    }

    /// The binary graphon with the same support.
    pub fn saturation(&self) -> StepGraphon {
        let values = self
            .values
            .iter()
            .map(|row| row.iter().map(|v| if v.is_zero() { Q::zero() } else { Q::one() }).collect())
            .collect();
        StepGraphon { partition: self.partition.clone(), values }
    }
}

/// Non-negative vector summing to exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcentrationVector {
    entries: Vec<Q>,
}

impl ConcentrationVector {
    pub fn new(entries: Vec<Q>) -> Result<Self> {
        if let Some(i) = entries.iter().position(|v| v.is_negative()) {
            return Err(Error::InvalidGraphon(format!("negative concentration at {}", i + 1)));
        }
        let total = sum(&entries);
        if !total.is_one() {
            return Err(Error::NotNormalized(format_rational(&total)));
        }
        Ok(Self { entries })
    }

    /// `counts / sum(counts)`.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let n: u64 = counts.iter().sum();
        if n == 0 {
            return Err(Error::NotNormalized("0".into()));
        }
        Self::new(counts.iter().map(|&c| q(c as i64, n as i64)).collect())
    }

    pub fn entries(&self) -> &[Q] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn into_entries(self) -> Vec<Q> {
        self.entries
    }
}

/// An edge of the skeleton graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Edge {
    Loop(usize),
    /// Always stored with the smaller index first.
    Pair(usize, usize),
}

impl Edge {
    pub fn pair(a: usize, b: usize) -> Edge {
        if a == b {
            Edge::Loop(a)
        } else {
            Edge::Pair(a.min(b), a.max(b))
        }
    }

    pub fn endpoints(&self) -> (usize, usize) {
        match *self {
            Edge::Loop(i) => (i, i),
            Edge::Pair(i, j) => (i, j),
        }
    }

    pub fn is_loop(&self) -> bool {
        matches!(self, Edge::Loop(_))
    }

    pub fn touches(&self, node: usize) -> bool {
        let (a, b) = self.endpoints();
        a == node || b == node
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Edge::Loop(i) => write!(f, "({},{})", i + 1, i + 1),
            Edge::Pair(i, j) => write!(f, "({},{})", i + 1, j + 1),
        }
    }
}

/// Support graph `S = (U, F)` of a step-graphon.
///
/// `F0` is the set of loops, `F1` the set of edges between distinct nodes and
/// `F2` the edges of `F1` that do not join two looped nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonGraph {
    node_count: usize,
    loops: BTreeSet<usize>,
    edges: BTreeSet<(usize, usize)>,
    f2_edges: BTreeSet<(usize, usize)>,
}

impl SkeletonGraph {
    pub fn new(
        node_count: usize,
        loops: impl IntoIterator<Item = usize>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let loops: BTreeSet<usize> = loops.into_iter().collect();
        if let Some(&l) = loops.iter().find(|&&l| l >= node_count) {
            return Err(Error::InvalidSkeleton(format!("loop node {l} out of range")));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidSkeleton(format!("pair ({a},{b}) is a loop")));
            }
            if a >= node_count || b >= node_count {
                return Err(Error::InvalidSkeleton(format!("edge ({a},{b}) out of range")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let f2_edges = set.iter().copied().filter(|(a, b)| !(loops.contains(a) && loops.contains(b))).collect();
        Ok(Self { node_count, loops, edges: set, f2_edges })
    }

    /// Skeleton with the given loops and edges, e.g. `from_edges(3, &[Edge::Loop(0), Edge::pair(0, 1)])`.
    pub fn from_edges(node_count: usize, edges: &[Edge]) -> Result<Self> {
        let loops = edges.iter().filter_map(|e| match e {
            Edge::Loop(i) => Some(*i),
            _ => None,
        });
        let pairs = edges.iter().filter_map(|e| match e {
            Edge::Pair(i, j) => Some((*i, *j)),
            _ => None,
        });
        Self::new(node_count, loops, pairs)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn loops(&self) -> &BTreeSet<usize> {
        &self.loops
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn f2_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.f2_edges
    }

    pub fn has_loop(&self, i: usize) -> bool {
        self.loops.contains(&i)
    }

    /// `|F|`, loops included.
    pub fn edge_count(&self) -> usize {
        self.loops.len() + self.edges.len()
    }

    /// Whether the (possibly directed) block pair `(i, j)` is an edge or loop of `S`.
    pub fn allows(&self, i: usize, j: usize) -> bool {
        if i == j {
            self.has_loop(i)
        } else {
            self.edges.contains(&(i.min(j), i.max(j)))
        }
    }

    /// Fixed edge order: loops by node index, then pairs lexicographically.
    pub fn edge_order(&self) -> Vec<Edge> {
        self.loops.iter().map(|&i| Edge::Loop(i)).chain(self.edges.iter().map(|&(i, j)| Edge::Pair(i, j))).collect()
    }

    /// Position of `edge` in [`Self::edge_order`].
    pub fn edge_index(&self, edge: Edge) -> Option<usize> {
        match edge {
            Edge::Loop(i) => self.loops.iter().position(|&l| l == i),
            Edge::Pair(i, j) => self.edges.iter().position(|&e| e == (i, j)).map(|p| p + self.loops.len()),
        }
    }

    /// Neighbors of `i` along distinct-pair edges, ascending.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// `S1 = (U, F1)`: the same graph with loops removed.
    pub fn loopless(&self) -> SkeletonGraph {
        SkeletonGraph::new(self.node_count, [], self.edges.iter().copied()).expect("subgraph of a valid skeleton")
    }

    /// Connected in the graphon sense: a single component carrying at least one
    /// edge. A lone node without a loop is W = 0, which splits into isolated
    /// nodes under refinement, so it does not count.
    pub fn is_connected(&self) -> bool {
        self.edge_count() > 0 && connected_components(self).len() == 1
    }
}

/// `q x |F|` matrix whose columns are the probability vectors `z_f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    entries: Vec<Vec<Q>>,
    edge_order: Vec<Edge>,
}

impl IncidenceMatrix {
    pub fn entries(&self) -> &[Vec<Q>] {
        &self.entries
    }

    pub fn edge_order(&self) -> &[Edge] {
        &self.edge_order
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn columns(&self) -> usize {
        self.edge_order.len()
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        self.entries.iter().map(|row| row[j].clone()).collect()
    }

    /// `Z c`.
    pub fn apply(&self, coefficients: &[Q]) -> Result<Vec<Q>> {
        if coefficients.len() != self.columns() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} columns",
                coefficients.len(),
                self.columns()
            )));
        }
        Ok(self
            .entries
            .iter()
            .map(|row| row.iter().zip(coefficients).fold(Q::zero(), |acc, (z, c)| acc + z * c))
            .collect())
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        rank(&self.entries)
    }
}

/// Rank of a rational matrix by exact Gaussian elimination.
pub fn rank(matrix: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = matrix.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[r][c];
            for k in c..cols {
                let d = &f * &m[r][k];
                m[i][k] -= d;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Interval lengths of the partition.
pub fn concentration(partition: &Partition) -> ConcentrationVector {
    let entries = partition.breakpoints().windows(2).map(|w| &w[1] - &w[0]).collect();
    ConcentrationVector { entries }
}

pub fn skeleton(graphon: &StepGraphon) -> SkeletonGraph {
    let q = graphon.blocks();
    let loops = (0..q).filter(|&i| !graphon.value(i, i).is_zero());
    let edges = (0..q).flat_map(|i| (i + 1..q).map(move |j| (i, j))).filter(|&(i, j)| !graphon.value(i, j).is_zero());
    SkeletonGraph::new(q, loops, edges).expect("skeleton of a valid graphon")
}

pub fn incidence(skeleton: &SkeletonGraph) -> IncidenceMatrix {
    let edge_order = skeleton.edge_order();
    let half = q(1, 2);
    let mut entries = vec![vec![Q::zero(); edge_order.len()]; skeleton.node_count()];
    for (j, edge) in edge_order.iter().enumerate() {
        match *edge {
            Edge::Loop(i) => entries[i][j] = Q::one(),
            Edge::Pair(a, b) => {
                entries[a][j] = half.clone();
                entries[b][j] = half.clone();
            }
        }
    }
    IncidenceMatrix { entries, edge_order }
}

/// Two-colors `(U, F1)` by BFS; `None` when some component is not bipartite.
pub fn two_coloring(skeleton: &SkeletonGraph) -> Option<Vec<u8>> {
    let n = skeleton.node_count();
    let adjacency: Vec<Vec<usize>> = (0..n).map(|i| skeleton.neighbors(i)).collect();
    let mut color = vec![u8::MAX; n];
    for start in 0..n {
        if color[start] != u8::MAX {
            continue;
        }
        color[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &adjacency[u] {
                if color[v] == u8::MAX {
                    color[v] = 1 - color[u];
                    queue.push_back(v);
                } else if color[v] == color[u] {
                    return None;
                }
            }
        }
    }
    Some(color)
}

/// Loops count as odd cycles.
pub fn has_odd_cycle(skeleton: &SkeletonGraph) -> bool {
    !skeleton.loops().is_empty() || two_coloring(skeleton).is_none()
}

/// Maximal connected node sets under distinct-pair edges, each sorted, ordered
/// by smallest member.
pub fn connected_components(skeleton: &SkeletonGraph) -> Vec<Vec<usize>> {
    let n = skeleton.node_count();
    let adjacency: Vec<Vec<usize>> = (0..n).map(|i| skeleton.neighbors(i)).collect();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut component = vec![start];
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &v in &adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    component.push(v);
                    stack.push(v);
                }
            }
        }
        component.sort_unstable();
        components.push(component);
    }
    components
}
