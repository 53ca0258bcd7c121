//! Random instances and brute-force oracles shared by the integration tests.
#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use hprop_core::model::{connected_components, has_odd_cycle, incidence, Partition, SkeletonGraph, StepGraphon};
use hprop_core::polytope::{positive_certificate, Status};
use hprop_core::rational::{q, qi, qu, Q};
use hprop_core::sampling::rng::Stream;

pub fn rng(seed: u64) -> Stream {
    Stream::new(seed, 0x7465_7374)
}

/// Uniform integer in `lo..=hi`.
pub fn range(r: &mut Stream, lo: u64, hi: u64) -> u64 {
    lo + r.below((hi - lo + 1) as usize) as u64
}

pub fn coin(r: &mut Stream, num: usize, den: usize) -> bool {
    r.below(den) < num
}

/// Random skeleton on `q` nodes: each pair with probability 1/2, each loop with 1/3.
pub fn random_skeleton(r: &mut Stream, q: usize) -> SkeletonGraph {
    let loops: Vec<usize> = (0..q).filter(|_| coin(r, 1, 3)).collect();
    let mut edges = Vec::new();
    for i in 0..q {
        for j in i + 1..q {
            if coin(r, 1, 2) {
                edges.push((i, j));
            }
        }
    }
    SkeletonGraph::new(q, loops, edges).unwrap()
}

/// Connected skeleton with `3 <= q <= max_q` whose loopless part has an odd cycle.
pub fn random_normalized_skeleton(r: &mut Stream, max_q: usize) -> SkeletonGraph {
    loop {
        let q = range(r, 3, max_q as u64) as usize;
        let s = random_skeleton(r, q);
        if connected_components(&s).len() == 1 && has_odd_cycle(&s.loopless()) {
            return s;
        }
    }
}

/// An instance for the A-matrix pipeline.
#[derive(Debug, Clone)]
pub struct Instance {
    pub s: SkeletonGraph,
    pub n: u64,
    pub x: Vec<Q>,
    pub sizes: Vec<u64>,
}

/// Random positive weights in `[1, 4]` on the edges of a random normalized
/// skeleton, `n` uniform in `q..=max_n`, and `x = round(n Z c) / n` kept only
/// when it is positive and interior.
pub fn random_instance(r: &mut Stream, max_q: usize, max_n: u64) -> Instance {
    loop {
        let s = random_normalized_skeleton(r, max_q);
        let q = s.node_count();
        let z = incidence(&s);
        let weights: Vec<Q> = (0..z.columns()).map(|_| qu(range(r, 1, 4))).collect();
        let total: Q = weights.iter().sum();
        let c: Vec<Q> = weights.iter().map(|w| w / &total).collect();
        let target = z.apply(&c).unwrap();
        let n = range(r, q as u64, max_n);
        let mut sizes: Vec<i64> = target.iter().map(|t| (t * qu(n)).round().to_integer().try_into().unwrap()).collect();
        let diff = n as i64 - sizes.iter().sum::<i64>();
        let largest = (0..q).max_by_key(|&i| sizes[i]).unwrap();
        sizes[largest] += diff;
        if sizes.iter().any(|&k| k <= 0) {
            continue;
        }
        let sizes: Vec<u64> = sizes.into_iter().map(|k| k as u64).collect();
        let x: Vec<Q> = sizes.iter().map(|&k| qu(k) / qu(n)).collect();
        if positive_certificate(&z, &x).unwrap().status != Status::Interior {
            continue;
        }
        return Instance { s, n, x, sizes };
    }
}

/// Random partition of `[0, 1]` into `blocks` blocks with breakpoints of denominator `den`.
pub fn random_partition(r: &mut Stream, blocks: usize, den: i64) -> Partition {
    let mut cuts: Vec<i64> = Vec::new();
    while cuts.len() < blocks - 1 {
        let c = range(r, 1, (den - 1) as u64) as i64;
        if !cuts.contains(&c) {
            cuts.push(c);
        }
    }
    cuts.sort_unstable();
    let mut bp = vec![qi(0)];
    bp.extend(cuts.into_iter().map(|c| q(c, den)));
    bp.push(qi(1));
    Partition::new(bp).unwrap()
}

/// Random graphon on `blocks` blocks; each value is 0 with probability `zero_num / zero_den`.
pub fn random_graphon(r: &mut Stream, blocks: usize, zero_num: usize, zero_den: usize) -> StepGraphon {
    let partition = random_partition(r, blocks, 60);
    let mut values = vec![vec![qi(0); blocks]; blocks];
    for i in 0..blocks {
        for j in i..blocks {
            if !coin(r, zero_num, zero_den) {
                let v = q(range(r, 1, 10) as i64, 10);
                values[i][j] = v.clone();
                values[j][i] = v;
            }
        }
    }
    StepGraphon::new(partition, values).unwrap()
}

/// Every permutation of `0..n`, by recursion.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Brute force: some fixed-point-free permutation follows only arcs of `arcs`.
pub fn decomposition_by_search(arcs: &[Vec<bool>], perms: &[Vec<usize>]) -> bool {
    perms.iter().any(|p| p.iter().enumerate().all(|(v, &w)| v != w && arcs[v][w]))
}

/// Out-neighbor lists of a dense arc matrix.
pub fn out_lists(arcs: &[Vec<bool>]) -> Vec<Vec<usize>> {
    arcs.iter().map(|row| row.iter().enumerate().filter(|(_, &a)| a).map(|(w, _)| w).collect()).collect()
}
