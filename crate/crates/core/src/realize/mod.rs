//! Realizing a block-level decomposition inside a sampled graph.
//!
//! Long cycles are embedded first by randomized greedy path growth. The
//! remaining nodes of each block are then split into groups, one per
//! neighboring block, and 2-cycles come from perfect matchings between
//! paired groups (halves of the same group for a loop block).

mod matching;

pub use matching::{
    cycle_cover, directed_version, graph_has_decomposition, hopcroft_karp, max_bipartite_matching, oracle_exists,
    Matching,
};

use serde::Serialize;

use crate::construct::{BlockCycle, HamDecomposition};
use crate::error::{Error, Result};
use crate::model::SkeletonGraph;
use crate::sampling::rng::{tag, Stream};
use crate::sampling::{rho, Adjacency, BalancedMatrix, SampledGraph};

/// Default number of randomized restarts per phase.
pub const DEFAULT_ATTEMPTS: usize = 32;

/// Why embedding gave up: the pattern that could not be placed on the last attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbedFailure {
    pub pattern: usize,
    pub attempts: usize,
}

/// Embedded cycles and the number of attempts it took.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub cycles: Vec<Vec<usize>>,
    pub attempts: usize,
}

/// Places one node-disjoint cycle per pattern in `g`, the `k`-th node of a
/// cycle lying in the `k`-th block of its pattern. Nodes flagged in `used`
/// are never touched; on success the returned nodes are flagged too.
pub fn embed_cycles(
    patterns: &[BlockCycle],
    g: &SampledGraph,
    adjacency: &Adjacency,
    used: &mut [bool],
    attempts: usize,
    stream: &mut Stream,
) -> Result<Embedding, EmbedFailure> {
    let blocks = g.blocks();
    let q = blocks.iter().copied().max().map_or(0, |b| b + 1);
    let q = patterns.iter().flat_map(|p| p.nodes()).copied().max().map_or(q, |b| q.max(b + 1));
    let mut members = vec![Vec::new(); q];
    for (v, &b) in blocks.iter().enumerate() {
        members[b].push(v);
    }
    let mut last_failed = 0;
    for attempt in 1..=attempts.max(1) {
        let mut taken = used.to_vec();
        let mut cycles = Vec::with_capacity(patterns.len());
        let mut ok = true;
        for (k, pattern) in patterns.iter().enumerate() {
            match embed_one(pattern.nodes(), &members, adjacency, &mut taken, stream) {
                Some(c) => cycles.push(c),
                None => {
                    last_failed = k;
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            used.copy_from_slice(&taken);
            return Ok(Embedding { cycles, attempts: attempt });
        }
    }
    Err(EmbedFailure { pattern: last_failed, attempts: attempts.max(1) })
}

fn embed_one(
    pattern: &[usize],
    members: &[Vec<usize>],
    adjacency: &Adjacency,
    taken: &mut [bool],
    stream: &mut Stream,
) -> Option<Vec<usize>> {
    let pick = |candidates: Vec<usize>, stream: &mut Stream| -> Option<usize> {
        (!candidates.is_empty()).then(|| candidates[stream.below(candidates.len())])
    };
    let free = |b: usize, taken: &[bool]| members[b].iter().copied().filter(|&v| !taken[v]).collect::<Vec<_>>();
    let first = pick(free(pattern[0], taken), stream)?;
    taken[first] = true;
    let mut path = vec![first];
    let last = pattern.len() - 1;
    for (k, &b) in pattern.iter().enumerate().skip(1) {
        let prev = *path.last().unwrap();
        let candidates = free(b, taken)
            .into_iter()
            .filter(|&v| adjacency.has(prev, v) && (k < last || adjacency.has(v, first)))
            .collect();
        match pick(candidates, stream) {
            Some(v) => {
                taken[v] = true;
                path.push(v);
            }
            None => {
                for &v in &path {
                    taken[v] = false;
                }
                return None;
            }
        }
    }
    Some(path)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RealizationStatus {
    Success,
    Failure,
}

/// Size of one matching attempted in phase 2 (blocks are 0-based; equal for a loop block).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingReport {
    pub blocks: (usize, usize),
    pub required: usize,
    pub found: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct RealizationDiagnostics {
    pub long_cycles: usize,
    pub phase1_attempts: usize,
    pub phase2_attempts: usize,
    /// Matchings from the last phase-2 attempt.
    pub matchings: Vec<MatchingReport>,
    /// `None` on success; otherwise `(phase, message)`.
    pub failure: Option<(u8, String)>,
}

#[derive(Debug, Clone)]
pub struct RealizationOutcome {
    pub status: RealizationStatus,
    pub decomposition: Option<HamDecomposition>,
    pub diagnostics: RealizationDiagnostics,
}

impl RealizationOutcome {
    pub fn is_success(&self) -> bool {
        self.status == RealizationStatus::Success
    }

    fn failure(diagnostics: RealizationDiagnostics) -> Self {
        Self { status: RealizationStatus::Failure, decomposition: None, diagnostics }
    }
}

/// Finds a decomposition of `g` with the same block matrix `a` as
/// `pattern`, which must be a decomposition of the saturated graph on `g`'s
/// nodes and block labels.
pub fn realize(
    a: &BalancedMatrix,
    pattern: &HamDecomposition,
    g: &SampledGraph,
    s: &SkeletonGraph,
    seed: u64,
    attempts: usize,
) -> Result<RealizationOutcome> {
    let q = s.node_count();
    let blocks = g.blocks();
    if pattern.len() != g.n() {
        return Err(Error::DimensionMismatch(format!("pattern has {} nodes, graph has {}", pattern.len(), g.n())));
    }
    if rho(pattern, blocks, q, s)? != *a {
        return Err(Error::InvalidDecomposition("pattern does not realize A".into()));
    }
    let adjacency = g.adjacency();
    let mut stream = Stream::new(seed, tag::REALIZE);
    let mut diagnostics = RealizationDiagnostics::default();

    // Block patterns of long cycles and 2-cycle counts per block pair.
    let mut long = Vec::new();
    let mut pairs = vec![vec![0usize; q]; q];
    for cycle in pattern.cycles() {
        if cycle.len() == 2 {
            let (x, y) = (blocks[cycle[0]], blocks[cycle[1]]);
            pairs[x.min(y)][x.max(y)] += 1;
        } else {
            long.push(BlockCycle::new(cycle.iter().map(|&v| blocks[v]).collect(), s)?);
        }
    }
    diagnostics.long_cycles = long.len();

    let mut used = vec![false; g.n()];
    let long_cycles = if long.is_empty() {
        Vec::new()
    } else {
        match embed_cycles(&long, g, &adjacency, &mut used, attempts, &mut stream) {
            Ok(e) => {
                diagnostics.phase1_attempts = e.attempts;
                e.cycles
            }
            Err(e) => {
                diagnostics.phase1_attempts = e.attempts;
                diagnostics.failure = Some((
                    1,
                    format!("could not embed long cycle {} (blocks {:?})", e.pattern, long[e.pattern].nodes()),
                ));
                return Ok(RealizationOutcome::failure(diagnostics));
            }
        }
    };

    let mut remaining = vec![Vec::new(); q];
    for (v, &b) in blocks.iter().enumerate() {
        if !used[v] {
            remaining[b].push(v);
        }
    }
    for attempt in 1..=attempts.max(1) {
        diagnostics.phase2_attempts = attempt;
        match pair_up(&remaining, &pairs, &adjacency, &mut stream) {
            Ok((two_cycles, reports)) => {
                diagnostics.matchings = reports;
                let mut cycles = long_cycles;
                cycles.extend(two_cycles);
                let h = HamDecomposition::from_cycles(g.n(), cycles)?;
                h.check_edges(&adjacency)?;
                debug_assert_eq!(rho(&h, blocks, q, s).ok().as_ref(), Some(a));
                return Ok(RealizationOutcome {
                    status: RealizationStatus::Success,
                    decomposition: Some(h),
                    diagnostics,
                });
            }
            Err((failed, reports)) => {
                diagnostics.matchings = reports;
                diagnostics.failure =
                    Some((2, format!("no perfect matching between blocks {} and {}", failed.0 + 1, failed.1 + 1)));
            }
        }
    }
    Ok(RealizationOutcome::failure(diagnostics))
}

type PairResult = std::result::Result<(Vec<Vec<usize>>, Vec<MatchingReport>), ((usize, usize), Vec<MatchingReport>)>;

// One random split of every block into groups V_ij, then a perfect matching
// per block pair.
fn pair_up(remaining: &[Vec<usize>], pairs: &[Vec<usize>], adjacency: &Adjacency, stream: &mut Stream) -> PairResult {
    let q = remaining.len();
    // groups[i][j]: nodes of block i reserved for 2-cycles with block j.
    let mut groups = vec![vec![Vec::new(); q]; q];
    for i in 0..q {
        let mut nodes = remaining[i].clone();
        stream.shuffle(&mut nodes);
        let mut rest = nodes.into_iter();
        for j in 0..q {
            let size = if i == j { 2 * pairs[i][i] } else { pairs[i.min(j)][i.max(j)] };
            groups[i][j] = rest.by_ref().take(size).collect();
        }
        debug_assert!(rest.next().is_none(), "group sizes exhaust the block");
    }
    let mut cycles = Vec::new();
    let mut reports = Vec::new();
    for i in 0..q {
        for j in i..q {
            let (left, right): (&[usize], &[usize]) = if i == j {
                let g = &groups[i][i];
                g.split_at(g.len() / 2)
            } else {
                (&groups[i][j], &groups[j][i])
            };
            if left.is_empty() {
                continue;
            }
            let adj: Vec<Vec<usize>> =
                left.iter().map(|&u| (0..right.len()).filter(|&k| adjacency.has(u, right[k])).collect()).collect();
            let partner = hopcroft_karp(&adj, right.len());
            let found = partner.iter().flatten().count();
            reports.push(MatchingReport { blocks: (i, j), required: left.len(), found });
            if found < left.len() {
                return Err(((i, j), reports));
            }
            for (k, p) in partner.into_iter().enumerate() {
                cycles.push(vec![left[k], right[p.expect("perfect")]]);
            }
        }
    }
    Ok((cycles, reports))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{build_a, build_h_on};
    use crate::model::skeleton;
    use crate::rational::{q, qi};
    use crate::sampling::{empirical_concentration, sample_graph, saturate_graph};
    use crate::{Partition, StepGraphon};

    fn triangle_graphon(p: crate::Q) -> StepGraphon {
        let z = qi(0);
        StepGraphon::new(
            Partition::uniform(3),
            vec![vec![z.clone(), p.clone(), p.clone()], vec![p.clone(), z.clone(), p.clone()], vec![p.clone(), p, z]],
        )
        .unwrap()
    }

    #[test]
    fn saturated_graph_always_succeeds() {
        let w = triangle_graphon(q(1, 2));
        let s = skeleton(&w);
        for seed in 0..10 {
            let g = saturate_graph(&sample_graph(&w, 31, seed), &s);
            let x = empirical_concentration(&g, 3).unwrap();
            let Ok(a) = build_a(x.entries(), 31, &s) else { continue };
            let h = build_h_on(&a, g.blocks(), &s).unwrap();
            let out = realize(&a, &h, &g, &s, seed, DEFAULT_ATTEMPTS).unwrap();
            assert!(out.is_success(), "{:?}", out.diagnostics);
            assert!(out.diagnostics.phase1_attempts <= 1);
            assert_eq!(rho(out.decomposition.as_ref().unwrap(), g.blocks(), 3, &s).unwrap(), a);
        }
    }

    #[test]
    fn empty_graph_fails() {
        let s = SkeletonGraph::new(3, [], [(0, 1), (0, 2), (1, 2)]).unwrap();
        for (sizes, phase) in [([3u64, 4, 6], 1u8), ([3, 4, 5], 2)] {
            let blocks = crate::construct::canonical_blocks(&sizes);
            let n = blocks.len();
            let g = SampledGraph::new(n, vec![0.0; n], blocks.clone(), []).unwrap();
            let x: Vec<crate::Q> = sizes.iter().map(|&k| q(k as i64, n as i64)).collect();
            let a = crate::construct::construct_a(&x, n as u64, &s).unwrap().matrix;
            let h = build_h_on(&a, &blocks, &s).unwrap();
            let out = realize(&a, &h, &g, &s, 1, 4).unwrap();
            assert!(!out.is_success());
            assert_eq!(out.diagnostics.failure.as_ref().unwrap().0, phase);
        }
    }

    #[test]
    fn embed_on_empty_graph_fails() {
        let s = SkeletonGraph::new(3, [], [(0, 1), (0, 2), (1, 2)]).unwrap();
        let g = SampledGraph::new(6, vec![0.1, 0.2, 0.4, 0.5, 0.7, 0.8], vec![0, 0, 1, 1, 2, 2], []).unwrap();
        let pattern = BlockCycle::new(vec![0, 1, 2], &s).unwrap();
        let mut used = vec![false; 6];
        let mut stream = Stream::new(0, tag::REALIZE);
        let err = embed_cycles(&[pattern], &g, &g.adjacency(), &mut used, 3, &mut stream).unwrap_err();
        assert_eq!(err, EmbedFailure { pattern: 0, attempts: 3 });
        assert!(used.iter().all(|&u| !u));
    }
}
