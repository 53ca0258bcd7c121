//! Decompositions of the complete `S`-multipartite graph with a prescribed
//! block matrix: pair up what can be paired, peel the rest into cycles.

use thiserror::Error;

use super::{BlockCycle, HamDecomposition};
use crate::error::{Error, Result};
use crate::model::SkeletonGraph;
use crate::sampling::{rho, BalancedMatrix};

/// Splits a balanced, zero-diagonal count matrix into block cycles with
/// multiplicities. The walk starts at the lowest node with outgoing weight and
/// always takes the lowest positive out-edge; the first repeated node closes
/// the cycle, which is then subtracted as often as its lightest edge allows.
pub fn peel_cycles(counts: &[Vec<u64>], s: &SkeletonGraph) -> Result<Vec<(BlockCycle, u64)>> {
    let q = counts.len();
    if counts.iter().any(|r| r.len() != q) || s.node_count() != q {
        return Err(Error::DimensionMismatch(format!("counts must be {q}x{q}")));
    }
    if let Some(i) = (0..q).find(|&i| counts[i][i] != 0) {
        return Err(Error::InvalidMatrix(format!("diagonal entry {} is nonzero", i + 1)));
    }
    for i in 0..q {
        let out: u64 = counts[i].iter().sum();
        let inn: u64 = counts.iter().map(|r| r[i]).sum();
        if out != inn {
            return Err(Error::InvalidMatrix(format!("node {} is unbalanced ({out} out, {inn} in)", i + 1)));
        }
    }
    let mut residual = counts.to_vec();
    let mut cycles: Vec<(BlockCycle, u64)> = Vec::new();
    let mut position = vec![usize::MAX; q];
    while let Some(start) = (0..q).find(|&i| residual[i].iter().any(|&c| c > 0)) {
        let mut path = vec![start];
        position[start] = 0;
        let first = loop {
            let v = *path.last().unwrap();
            let w = residual[v].iter().position(|&c| c > 0).expect("balance keeps every visited node alive");
            if position[w] != usize::MAX {
                break position[w];
            }
            position[w] = path.len();
            path.push(w);
        };
        for &v in &path {
            position[v] = usize::MAX;
        }
        let nodes = path.split_off(first);
        let weight = (0..nodes.len()).map(|k| residual[nodes[k]][nodes[(k + 1) % nodes.len()]]).min().unwrap();
        for k in 0..nodes.len() {
            residual[nodes[k]][nodes[(k + 1) % nodes.len()]] -= weight;
        }
        let cycle = BlockCycle::new(nodes, s)?;
        match cycles.last_mut() {
            Some((last, m)) if *last == cycle => *m += weight,
            _ => cycles.push((cycle, weight)),
        }
    }
    Ok(cycles)
}

/// Block labels `0,..,0,1,..,1,...` for contiguous blocks of the given sizes.
pub fn canonical_blocks(block_sizes: &[u64]) -> Vec<usize> {
    block_sizes.iter().enumerate().flat_map(|(b, &k)| std::iter::repeat_n(b, k as usize)).collect()
}

/// Decomposition of the complete `S`-multipartite graph on contiguous blocks
/// of the given sizes with `rho(H) = A`.
pub fn build_h(a: &BalancedMatrix, block_sizes: &[u64], s: &SkeletonGraph) -> Result<HamDecomposition> {
    build_h_on(a, &canonical_blocks(block_sizes), s)
}

/// As [`build_h`], for arbitrary node block labels.
pub fn build_h_on(a: &BalancedMatrix, blocks: &[usize], s: &SkeletonGraph) -> Result<HamDecomposition> {
    let q = a.q();
    if s.node_count() != q {
        return Err(Error::DimensionMismatch(format!("A is {q}x{q} but S has {} nodes", s.node_count())));
    }
    if a.scale() as usize != blocks.len() {
        return Err(Error::DimensionMismatch(format!(
            "A has scale {} but there are {} nodes",
            a.scale(),
            blocks.len()
        )));
    }
    a.check_support(s)?;
    let mut members: Vec<std::vec::IntoIter<usize>> = {
        let mut m = vec![Vec::new(); q];
        for (v, &b) in blocks.iter().enumerate() {
            if b >= q {
                return Err(Error::DimensionMismatch(format!("block label {b} >= {q}")));
            }
            m[b].push(v);
        }
        let sizes: Vec<u64> = m.iter().map(|v| v.len() as u64).collect();
        if sizes != a.row_sums() {
            return Err(Error::InvalidMatrix(format!(
                "row sums {:?} do not match block sizes {sizes:?}",
                a.row_sums()
            )));
        }
        m.into_iter().map(Vec::into_iter).collect()
    };
    let mut take = |b: usize| members[b].next().expect("row sums match block sizes");

    let c = a.counts();
    let mut cycles = Vec::new();
    for i in 0..q {
        if !c[i][i].is_multiple_of(2) {
            return Err(Error::InvalidMatrix(format!("diagonal entry {} is odd", i + 1)));
        }
        for _ in 0..c[i][i] / 2 {
            cycles.push(vec![take(i), take(i)]);
        }
    }
    let mut residual = c.to_vec();
    for i in 0..q {
        residual[i][i] = 0;
        for j in i + 1..q {
            let m = c[i][j].min(c[j][i]);
            residual[i][j] -= m;
            residual[j][i] -= m;
            for _ in 0..m {
                cycles.push(vec![take(i), take(j)]);
            }
        }
    }
    for (pattern, multiplicity) in peel_cycles(&residual, s)? {
        for _ in 0..multiplicity {
            cycles.push(pattern.nodes().iter().map(|&b| take(b)).collect());
        }
    }
    HamDecomposition::from_cycles(blocks.len(), cycles)
}

/// A violated decomposition bound; `item` numbers follow [`check_prop2`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("decomposition property {item} violated: {detail}")]
pub struct Prop2Violation {
    pub item: u8,
    pub detail: String,
}

/// Checks `rho(H) = A` (reported as item 0) and the decomposition bounds:
/// 1. exactly `n a_ii / 2` within-block 2-cycles at each loop;
/// 2. at least `min(n a_ij, n a_ji)` 2-cycles across each edge;
/// 3. at most `ceil(2|F|/3)` cycles of length 3 or more;
/// 4. no cycle longer than `max(2, 2|F|)`;
/// 5. every cycle of length 3 or more visits distinct blocks.
pub fn check_prop2(
    h: &HamDecomposition,
    a: &BalancedMatrix,
    blocks: &[usize],
    s: &SkeletonGraph,
) -> Result<(), Prop2Violation> {
    let fail = |item: u8, detail: String| Err(Prop2Violation { item, detail });
    let q = a.q();
    match rho(h, blocks, q, s) {
        Ok(r) if r == *a => {}
        Ok(r) => return fail(0, format!("rho(H) = {:?} differs from A = {:?}", r.counts(), a.counts())),
        Err(e) => return fail(0, e.to_string()),
    }
    let c = a.counts();
    let mut pairs = vec![vec![0u64; q]; q];
    let mut long = 0usize;
    let f = s.edge_count();
    let max_len = 2.max(2 * f);
    for cycle in h.cycles() {
        if cycle.len() > max_len {
            return fail(4, format!("cycle of length {} exceeds {max_len}", cycle.len()));
        }
        if cycle.len() == 2 {
            let (x, y) = (blocks[cycle[0]], blocks[cycle[1]]);
            pairs[x.min(y)][x.max(y)] += 1;
        } else {
            long += 1;
            let mut bs: Vec<usize> = cycle.iter().map(|&v| blocks[v]).collect();
            bs.sort_unstable();
            bs.dedup();
            if bs.len() != cycle.len() {
                return fail(5, format!("cycle {cycle:?} repeats a block"));
            }
        }
    }
    for i in 0..q {
        if s.has_loop(i) && pairs[i][i] != c[i][i] / 2 {
            return fail(
                1,
                format!("block {} has {} within-block 2-cycles, expected {}", i + 1, pairs[i][i], c[i][i] / 2),
            );
        }
        for j in i + 1..q {
            let m = c[i][j].min(c[j][i]);
            if pairs[i][j] < m {
                return fail(
                    2,
                    format!("edge ({},{}) has {} 2-cycles, expected at least {m}", i + 1, j + 1, pairs[i][j]),
                );
            }
        }
    }
    let bound = (2 * f).div_ceil(3);
    if long > bound {
        return fail(3, format!("{long} cycles of length >= 3 exceed {bound}"));
    }
    Ok(())
}
