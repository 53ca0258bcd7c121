//! A-matrix construction and Hamiltonian decompositions of complete
//! `S`-multipartite graphs.

mod amatrix;
mod flow;
mod hamilton;
mod rounding;

pub use amatrix::{build_a, check_prop1, construct_a, split_tau, AConstruction};
pub use hamilton::{build_h, build_h_on, canonical_blocks, check_prop2, peel_cycles, Prop2Violation};
pub use rounding::{matrix_round, round_even};

use crate::error::{Error, Result};
use crate::model::SkeletonGraph;
use crate::rational::Q;
use crate::sampling::Adjacency;

/// `x = tau0 + tau1`, with `tau0` carried by the loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauSplit {
    pub tau0: Vec<Q>,
    pub tau1: Vec<Q>,
}

/// A directed cycle of distinct skeleton nodes, consecutive ones adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockCycle {
    nodes: Vec<usize>,
}

impl BlockCycle {
    pub fn new(nodes: Vec<usize>, s: &SkeletonGraph) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidDecomposition("block cycle needs at least 2 nodes".into()));
        }
        let mut seen = vec![false; s.node_count()];
        for &b in &nodes {
            if b >= s.node_count() || std::mem::replace(&mut seen[b], true) {
                return Err(Error::InvalidDecomposition(format!("block cycle {nodes:?} is not simple")));
            }
        }
        for k in 0..nodes.len() {
            let (a, b) = (nodes[k], nodes[(k + 1) % nodes.len()]);
            if !s.allows(a, b) {
                return Err(Error::Homomorphism { from: a, to: b });
            }
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// A permutation of `0..n` without fixed points, kept together with its cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamDecomposition {
    successor: Vec<usize>,
    cycles: Vec<Vec<usize>>,
}

impl HamDecomposition {
    /// Validates that `cycles` partition `0..n` into cycles of length at least 2.
    pub fn from_cycles(n: usize, cycles: Vec<Vec<usize>>) -> Result<Self> {
        let mut successor = vec![usize::MAX; n];
        for cycle in &cycles {
            if cycle.len() < 2 {
                return Err(Error::InvalidDecomposition(format!("cycle {cycle:?} is shorter than 2")));
            }
            for k in 0..cycle.len() {
                let (v, w) = (cycle[k], cycle[(k + 1) % cycle.len()]);
                if v >= n {
                    return Err(Error::InvalidDecomposition(format!("node {v} out of range")));
                }
                if successor[v] != usize::MAX {
                    return Err(Error::InvalidDecomposition(format!("node {v} appears twice")));
                }
                successor[v] = w;
            }
        }
        if let Some(v) = successor.iter().position(|&s| s == usize::MAX) {
            return Err(Error::InvalidDecomposition(format!("node {v} is not covered")));
        }
        Ok(Self { successor, cycles })
    }

    /// Splits a fixed-point-free permutation into its cycles, each starting at
    /// its smallest node.
    pub fn from_successor(successor: Vec<usize>) -> Result<Self> {
        let n = successor.len();
        let mut hit = vec![false; n];
        for &w in &successor {
            if w >= n || std::mem::replace(&mut hit[w], true) {
                return Err(Error::InvalidDecomposition("successor is not a permutation".into()));
            }
        }
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            if successor[start] == start {
                return Err(Error::InvalidDecomposition(format!("node {start} is a fixed point")));
            }
            let mut cycle = Vec::new();
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                cycle.push(v);
                v = successor[v];
            }
            cycles.push(cycle);
        }
        Ok(Self { successor, cycles })
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.successor.len()
    }

    pub fn is_empty(&self) -> bool {
        self.successor.is_empty()
    }

    pub fn successor(&self) -> &[usize] {
        &self.successor
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    /// Every edge `v -> successor(v)` is an (undirected) edge of the graph.
    pub fn check_edges(&self, adjacency: &Adjacency) -> Result<()> {
        if adjacency.n() != self.len() {
            return Err(Error::DimensionMismatch("graph and decomposition sizes differ".into()));
        }
        for (v, &w) in self.successor.iter().enumerate() {
            if !adjacency.has(v, w) {
                return Err(Error::InvalidDecomposition(format!("edge {v} -> {w} is not in the graph")));
            }
        }
        Ok(())
    }
}
