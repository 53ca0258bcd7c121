//! Sampling graphs from step-graphons, saturation, and the block-level edge
//! tally of a Hamiltonian decomposition.

pub mod rng;

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::construct::HamDecomposition;
use crate::error::{Error, Result};
use crate::model::{ConcentrationVector, Partition, SkeletonGraph, StepGraphon};
use crate::rational::{qu, to_f64, Q};
use rng::{tag, Stream};

/// An undirected simple graph on nodes `0..n` together with the coordinate
/// and block of every node.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledGraph {
    n: usize,
    coords: Vec<f64>,
    blocks: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl SampledGraph {
    /// Edges are normalized to `(min, max)`, sorted and deduplicated.
    pub fn new(
        n: usize,
        coords: Vec<f64>,
        blocks: Vec<usize>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if coords.len() != n || blocks.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "n = {n} but {} coords and {} blocks",
                coords.len(),
                blocks.len()
            )));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraphon(format!("self-loop at node {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidGraphon(format!("edge ({a},{b}) out of range")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self { n, coords, blocks, edges: set.into_iter().collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// Sorted `(i, j)` pairs with `i < j`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacency(&self) -> Adjacency {
        let mut adj = Adjacency::new(self.n);
        for &(a, b) in &self.edges {
            adj.insert(a, b);
        }
        adj
    }

    pub fn block_sizes(&self, q: usize) -> Vec<u64> {
        let mut sizes = vec![0u64; q];
        for &b in &self.blocks {
            sizes[b] += 1;
        }
        sizes
    }

    /// Same graph, blocks re-derived from the coordinates under `partition`.
    pub fn with_partition(&self, partition: &Partition) -> SampledGraph {
        let cuts = float_breakpoints(partition);
        let blocks = self.coords.iter().map(|&y| block_of_coord(&cuts, y)).collect();
        SampledGraph { blocks, ..self.clone() }
    }

    /// Nodes of each block, ascending.
    pub fn block_members(&self, q: usize) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); q];
        for (v, &b) in self.blocks.iter().enumerate() {
            members[b].push(v);
        }
        members
    }
}

/// Dense adjacency bitset.
#[derive(Debug, Clone)]
pub struct Adjacency {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Adjacency {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self { n, words, bits: vec![0; n * words] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        self.bits[a * self.words + b / 64] |= 1 << (b % 64);
        self.bits[b * self.words + a / 64] |= 1 << (a % 64);
    }

    pub fn has(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.words + b / 64] & (1 << (b % 64)) != 0
    }

    pub fn neighbors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&b| self.has(a, b))
    }
}

/// Breakpoints `s_1..s_{q-1}` rounded to the nearest `f64`.
pub fn float_breakpoints(partition: &Partition) -> Vec<f64> {
    let bp = partition.breakpoints();
    bp[1..bp.len() - 1].iter().map(to_f64).collect()
}

/// Block of coordinate `y`; a coordinate equal to a breakpoint goes right.
pub fn block_of_coord(inner_breakpoints: &[f64], y: f64) -> usize {
    inner_breakpoints.partition_point(|&b| b <= y)
}

/// Samples `G_n ~ W`: coordinates first, then every pair `i < j` in
/// lexicographic order, each from its own derived stream.
pub fn sample_graph(w: &StepGraphon, n: usize, seed: u64) -> SampledGraph {
    let cuts = float_breakpoints(w.partition());
    let mut coord_stream = Stream::new(seed, tag::COORDS);
    let coords: Vec<f64> = (0..n).map(|_| coord_stream.uniform()).collect();
    let blocks: Vec<usize> = coords.iter().map(|&y| block_of_coord(&cuts, y)).collect();
    let probs: Vec<Vec<f64>> = w.values().iter().map(|row| row.iter().map(to_f64).collect()).collect();
    let mut edge_stream = Stream::new(seed, tag::EDGES);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if edge_stream.uniform() < probs[blocks[i]][blocks[j]] {
                edges.push((i, j));
            }
        }
    }
    SampledGraph { n, coords, blocks, edges }
}

/// Per-block node fractions.
pub fn empirical_concentration(g: &SampledGraph, q: usize) -> Result<ConcentrationVector> {
    if let Some(&b) = g.blocks().iter().find(|&&b| b >= q) {
        return Err(Error::DimensionMismatch(format!("block index {b} >= q = {q}")));
    }
    ConcentrationVector::from_counts(&g.block_sizes(q))
}

/// The complete `S`-multipartite graph on the same nodes and blocks.
pub fn saturate_graph(g: &SampledGraph, s: &SkeletonGraph) -> SampledGraph {
    let blocks = g.blocks();
    let mut edges = Vec::new();
    for i in 0..g.n() {
        for j in i + 1..g.n() {
            if s.allows(blocks[i], blocks[j]) {
                edges.push((i, j));
            }
        }
    }
    SampledGraph { edges, ..g.clone() }
}

/// Integer representation `counts / scale` of an element of the set of
/// balanced, `S`-supported, total-mass-one matrices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BalancedMatrix {
    scale: u64,
    counts: Vec<Vec<u64>>,
}

impl BalancedMatrix {
    /// Checks that row sums equal column sums and that the total equals `scale`.
    pub fn new(scale: u64, counts: Vec<Vec<u64>>) -> Result<Self> {
        let q = counts.len();
        if counts.iter().any(|r| r.len() != q) {
            return Err(Error::InvalidMatrix("counts must be square".into()));
        }
        if scale == 0 {
            return Err(Error::InvalidMatrix("scale must be positive".into()));
        }
        let m = Self { scale, counts };
        let rows = m.row_sums();
        let cols = m.column_sums();
        if let Some(i) = (0..q).find(|&i| rows[i] != cols[i]) {
            return Err(Error::InvalidMatrix(format!(
                "row {} sums to {} but column sums to {}",
                i + 1,
                rows[i],
                cols[i]
            )));
        }
        let total: u64 = rows.iter().sum();
        if total != scale {
            return Err(Error::InvalidMatrix(format!("total {total} differs from scale {scale}")));
        }
        Ok(m)
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn q(&self) -> usize {
        self.counts.len()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<u64> {
        (0..self.q()).map(|j| self.counts.iter().map(|r| r[j]).sum()).collect()
    }

    /// `A = counts / scale` as exact rationals.
    pub fn entries(&self) -> Vec<Vec<Q>> {
        let scale = qu(self.scale);
        self.counts.iter().map(|r| r.iter().map(|&c| qu(c) / &scale).collect()).collect()
    }

    /// `A 1`.
    pub fn row_vector(&self) -> Vec<Q> {
        let scale = qu(self.scale);
        self.row_sums().into_iter().map(|c| qu(c) / &scale).collect()
    }

    /// Positive entries only where `S` has the matching loop or edge.
    pub fn check_support(&self, s: &SkeletonGraph) -> Result<()> {
        for (i, row) in self.counts.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c > 0 && !s.allows(i, j) {
                    return Err(Error::Homomorphism { from: i, to: j });
                }
            }
        }
        Ok(())
    }

    /// Smallest positive entry of `A`, if any.
    pub fn min_positive_entry(&self) -> Option<Q> {
        self.counts.iter().flatten().filter(|&&c| c > 0).min().map(|&c| qu(c) / qu(self.scale)).filter(|v| !v.is_zero())
    }
}

/// Tallies the directed edges of `h` between blocks.
pub fn rho(h: &HamDecomposition, blocks: &[usize], q: usize, s: &SkeletonGraph) -> Result<BalancedMatrix> {
    if blocks.len() != h.len() {
        return Err(Error::DimensionMismatch(format!("{} block labels for {} nodes", blocks.len(), h.len())));
    }
    let mut counts = vec![vec![0u64; q]; q];
    for (v, &w) in h.successor().iter().enumerate() {
        let (a, b) = (blocks[v], blocks[w]);
        if a >= q || b >= q {
            return Err(Error::DimensionMismatch(format!("block index >= q = {q}")));
        }
        if !s.allows(a, b) {
            return Err(Error::Homomorphism { from: a, to: b });
        }
        counts[a][b] += 1;
    }
    BalancedMatrix::new(h.len() as u64, counts)
}
