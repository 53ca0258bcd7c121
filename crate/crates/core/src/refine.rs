//! One-step partition refinements and certificate transport across them.
//!
//! Splitting block `b` at `t` keeps the graphon as a function but turns skeleton
//! node `b` into two nodes `b` (left part) and `b + 1` (right part); nodes after
//! `b` shift up by one. The new node copies every adjacency of the old one, and
//! if the old node had a loop both copies keep one and become adjacent.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{concentration, has_odd_cycle, incidence, skeleton, Edge, Partition, SkeletonGraph, StepGraphon};
use crate::rational::{format_rational, qu, Q};

/// Maximum number of midpoint splits [`lemma1_normalize`] ever needs.
pub const MAX_NORMALIZING_SPLITS: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementRecord {
    pub original: StepGraphon,
    pub split_block: usize,
    pub split_point: Q,
    pub refined: StepGraphon,
}

impl RefinementRecord {
    /// Index of an original node in the refined skeleton.
    pub fn map_node(&self, i: usize) -> usize {
        if i > self.split_block {
            i + 1
        } else {
            i
        }
    }

    /// Index of the new node.
    pub fn new_node(&self) -> usize {
        self.split_block + 1
    }

    /// `(left length, right length) / block length` of the split.
    pub fn ratios(&self) -> (Q, Q) {
        let (lo, hi) = self.original.partition().interval(self.split_block);
        let len = hi - lo;
        ((&self.split_point - lo) / &len, (hi - &self.split_point) / &len)
    }
}

/// Splits block `block` (0-based) at `t`, which must lie strictly inside it.
pub fn refine_once(w: &StepGraphon, block: usize, t: &Q) -> Result<RefinementRecord> {
    let q = w.blocks();
    if block >= q {
        return Err(Error::InvalidRefinement(format!("block {} does not exist (q = {q})", block + 1)));
    }
    let (lo, hi) = w.partition().interval(block);
    if !(lo < t && t < hi) {
        return Err(Error::InvalidRefinement(format!(
            "split point {} is not strictly inside ({}, {})",
            format_rational(t),
            format_rational(lo),
            format_rational(hi)
        )));
    }
    let mut breakpoints = w.partition().breakpoints().to_vec();
    breakpoints.insert(block + 1, t.clone());
    let old = |i: usize| if i > block { i - 1 } else { i };
    let values = (0..=q).map(|i| (0..=q).map(|j| w.value(old(i), old(j)).clone()).collect()).collect();
    let refined = StepGraphon::new(Partition::new(breakpoints)?, values)?;
    Ok(RefinementRecord { original: w.clone(), split_block: block, split_point: t.clone(), refined })
}

fn check_solution(s: &SkeletonGraph, c: &[Q], x: &[Q], what: &str) -> Result<()> {
    let z = incidence(s);
    if c.len() != z.columns() {
        return Err(Error::InvalidCertificate(format!(
            "{what} has {} coefficients for {} edges",
            c.len(),
            z.columns()
        )));
    }
    if c.iter().any(Signed::is_negative) {
        return Err(Error::InvalidCertificate(format!("{what} has a negative coefficient")));
    }
    if z.apply(c)? != x {
        return Err(Error::InvalidCertificate(format!("{what} does not solve Z c = x")));
    }
    Ok(())
}

/// Transports coefficients `c` with `Z_S c = x` to coefficients `c'` with
/// `Z_S' c' = x'`. Edges at the split node are scaled by the length ratio of
/// the part they end up on. When the split node carries a loop, half of the
/// smaller loop coefficient is moved from each loop onto the connecting edge,
/// so strictly positive input stays strictly positive.
pub fn push_certificate(c: &[Q], rec: &RefinementRecord) -> Result<Vec<Q>> {
    let s = skeleton(&rec.original);
    let s2 = skeleton(&rec.refined);
    check_solution(&s, c, concentration(rec.original.partition()).entries(), "certificate")?;
    let b = rec.split_block;
    let (left, right) = rec.ratios();
    let coef = |e: Edge| c[s.edge_index(e).expect("edge of the original skeleton")].clone();
    let old = |i: usize| {
        if i > b + 1 {
            i - 1
        } else if i == b + 1 {
            b
        } else {
            i
        }
    };

    let order = s2.edge_order();
    let mut out: Vec<Q> = order
        .iter()
        .map(|&e| match e {
            Edge::Pair(i, j) if i == b && j == b + 1 => Q::zero(),
            Edge::Loop(i) if i == b => &left * coef(Edge::Loop(b)),
            Edge::Loop(i) if i == b + 1 => &right * coef(Edge::Loop(b)),
            Edge::Loop(i) => coef(Edge::Loop(old(i))),
            Edge::Pair(i, j) => {
                let scale = if i == b || j == b {
                    left.clone()
                } else if i == b + 1 || j == b + 1 {
                    right.clone()
                } else {
                    qu(1)
                };
                scale * coef(Edge::pair(old(i), old(j)))
            }
        })
        .collect();

    if s.has_loop(b) {
        let lb = s2.edge_index(Edge::Loop(b)).expect("loop copied");
        let lb1 = s2.edge_index(Edge::Loop(b + 1)).expect("loop copied");
        let k = s2.edge_index(Edge::Pair(b, b + 1)).expect("connecting edge");
        let eps = out[lb].clone().min(out[lb1].clone()) / qu(2);
        out[lb] -= &eps;
        out[lb1] -= &eps;
        out[k] = eps * qu(2);
    }
    Ok(out)
}

/// Transports coefficients `c'` with `Z_S' c' = x'` back to `Z_S c = x` by
/// merging the two copies of every edge at the split node.
pub fn pull_certificate(c: &[Q], rec: &RefinementRecord) -> Result<Vec<Q>> {
    let s = skeleton(&rec.original);
    let s2 = skeleton(&rec.refined);
    check_solution(&s2, c, concentration(rec.refined.partition()).entries(), "refined certificate")?;
    let b = rec.split_block;
    let m = |i: usize| rec.map_node(i);
    let coef = |e: Edge| c[s2.edge_index(e).expect("edge of the refined skeleton")].clone();
    Ok(s.edge_order()
        .iter()
        .map(|&e| match e {
            Edge::Loop(i) if i == b => coef(Edge::Loop(b)) + coef(Edge::Loop(b + 1)) + coef(Edge::Pair(b, b + 1)),
            Edge::Loop(i) => coef(Edge::Loop(m(i))),
            Edge::Pair(i, j) if i == b || j == b => {
                let other = m(if i == b { j } else { i });
                coef(Edge::pair(other, b)) + coef(Edge::pair(other, b + 1))
            }
            Edge::Pair(i, j) => coef(Edge::pair(m(i), m(j))),
        })
        .collect())
}

/// Refines `w` until its loopless skeleton has an odd cycle, splitting the
/// lowest looped node at the midpoint of its interval. Returns `w` unchanged
/// when nothing needs to be done.
pub fn lemma1_normalize(w: &StepGraphon) -> Result<StepGraphon> {
    Ok(normalize_with_records(w)?.0)
}

/// [`lemma1_normalize`] together with the refinements it applied.
pub fn normalize_with_records(w: &StepGraphon) -> Result<(StepGraphon, Vec<RefinementRecord>)> {
    let s = skeleton(w);
    let components = crate::model::connected_components(&s);
    if components.len() > 1 {
        return Err(Error::Disconnected(components));
    }
    if !has_odd_cycle(&s) {
        return Err(Error::NoOddCycle);
    }
    let mut current = w.clone();
    let mut records = Vec::new();
    loop {
        let s = skeleton(&current);
        if has_odd_cycle(&s.loopless()) {
            return Ok((current, records));
        }
        if records.len() == MAX_NORMALIZING_SPLITS {
            return Err(Error::InvalidRefinement(format!(
                "loopless skeleton still bipartite after {MAX_NORMALIZING_SPLITS} splits"
            )));
        }
        let b = *s.loops().iter().next().expect("a skeleton with an odd cycle but bipartite S1 has a loop");
        let (lo, hi) = current.partition().interval(b);
        let mid = (lo + hi) / qu(2);
        let rec = refine_once(&current, b, &mid)?;
        current = rec.refined.clone();
        records.push(rec);
    }
}
