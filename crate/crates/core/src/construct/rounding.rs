use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::flow::MinCostFlow;
use crate::error::{Error, Result};
use crate::model::SkeletonGraph;
use crate::rational::{format_rational, qu, round_half_down, Q};

/// `(2/n) [n v / 2]`: the closest vector whose entries times `n` are even,
/// ties rounded down.
pub fn round_even(values: &[Q], n: u64) -> Vec<Q> {
    assert!(n >= 1, "n must be positive");
    let n = qu(n);
    let two = qu(2);
    values
        .iter()
        .map(|v| {
            let k = round_half_down(&(v * &n / &two));
            Q::from_integer(k) * &two / &n
        })
        .collect()
}

/// Rounds every entry of `m` to its floor or ceiling while keeping every row
/// and column sum, and never creating entries outside the support of `m`.
///
/// The fractional parts are routed as an integral flow from rows to columns.
/// Among all valid roundings, one that rounds up as many entries in `(0, 1)`
/// as possible is returned, so the support shrinks only when it must.
pub fn matrix_round(m: &[Vec<Q>], support: &SkeletonGraph) -> Result<Vec<Vec<u64>>> {
    let q = m.len();
    if m.iter().any(|r| r.len() != q) || support.node_count() != q {
        return Err(Error::DimensionMismatch(format!("matrix must be {q}x{q}")));
    }
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if v.is_negative() {
                return Err(Error::InvalidMatrix(format!("negative entry at ({},{})", i + 1, j + 1)));
            }
            if !v.is_zero() && !support.allows(i, j) {
                return Err(Error::Homomorphism { from: i, to: j });
            }
        }
    }
    let row_sums: Vec<Q> = m.iter().map(|r| r.iter().fold(Q::zero(), |a, v| a + v)).collect();
    let col_sums: Vec<Q> = (0..q).map(|j| m.iter().fold(Q::zero(), |a, r| a + &r[j])).collect();
    for (label, sums) in [("row", &row_sums), ("column", &col_sums)] {
        if let Some(i) = sums.iter().position(|s| !s.is_integer()) {
            return Err(Error::NonIntegerSums(format!("{label} {} sums to {}", i + 1, format_rational(&sums[i]))));
        }
    }

    let to_u64 = |v: BigInt| v.to_u64().ok_or_else(|| Error::InvalidMatrix("entry too large".into()));
    let mut floors = vec![vec![0u64; q]; q];
    for i in 0..q {
        for j in 0..q {
            floors[i][j] = to_u64(m[i][j].floor().to_integer())?;
        }
    }

    let source = 2 * q;
    let sink = 2 * q + 1;
    let mut net = MinCostFlow::new(2 * q + 2);
    let mut fractional = Vec::new();
    let mut demand = 0i64;
    for i in 0..q {
        let floor_sum: u64 = floors[i].iter().sum();
        let deficit = to_u64(row_sums[i].to_integer())? as i64 - floor_sum as i64;
        if deficit > 0 {
            net.add_arc(source, i, deficit, 0);
            demand += deficit;
        }
    }
    for j in 0..q {
        let floor_sum: u64 = floors.iter().map(|r| r[j]).sum();
        let deficit = to_u64(col_sums[j].to_integer())? as i64 - floor_sum as i64;
        if deficit > 0 {
            net.add_arc(q + j, sink, deficit, 0);
        }
    }
    for i in 0..q {
        for j in 0..q {
            if !m[i][j].is_integer() {
                let cost = if floors[i][j] == 0 { -1 } else { 0 };
                fractional.push((i, j, net.add_arc(i, q + j, 1, cost)));
            }
        }
    }
    let (flow, _) = net.run(source, sink);
    if flow != demand {
        return Err(Error::InvalidMatrix(format!("fractional parts cannot be routed ({flow} of {demand})")));
    }
    for (i, j, id) in fractional {
        floors[i][j] += net.flow(id) as u64;
    }
    Ok(floors)
}
