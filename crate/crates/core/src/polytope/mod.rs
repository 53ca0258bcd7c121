//! Edge-polytope membership with positive-coefficient certificates.
//!
//! A point `x` lies in the relative interior of `conv{z_f}` exactly when it
//! can be written as `Z c = x` with every `c_f > 0`. The certificate solve
//! maximizes the smallest coefficient, so a positive optimum proves interior
//! membership, a zero optimum proves boundary membership, and infeasibility
//! proves the point is outside.

mod simplex;

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub use simplex::{maximize, LpOutcome};

use crate::error::{Error, Result};
use crate::model::{
    concentration, connected_components, incidence, skeleton, IncidenceMatrix, SkeletonGraph, StepGraphon,
};
use crate::rational::{format_rational, sum, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    Interior,
    Boundary,
    Exterior,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Interior => "Interior",
            Status::Boundary => "Boundary",
            Status::Exterior => "Exterior",
        })
    }
}

/// Outcome of a membership test. `coefficients` and `margin` are present
/// unless the point is exterior.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub status: Status,
    pub coefficients: Option<Vec<Q>>,
    /// Smallest coefficient, maximized over all representations.
    pub margin: Option<Q>,
}

impl MembershipCertificate {
    pub fn exterior() -> Self {
        Self { status: Status::Exterior, coefficients: None, margin: None }
    }

    pub fn is_interior(&self) -> bool {
        self.status == Status::Interior
    }

    /// Coefficients as `p/q` strings.
    pub fn coefficient_strings(&self) -> Option<Vec<String>> {
        self.coefficients.as_ref().map(|c| c.iter().map(format_rational).collect())
    }
}

/// Solves `maximize t s.t. Z c = x, c >= t` exactly.
pub fn positive_certificate(z: &IncidenceMatrix, x: &[Q]) -> Result<MembershipCertificate> {
    if x.len() != z.rows() {
        return Err(Error::DimensionMismatch(format!("vector of length {} for {} rows", x.len(), z.rows())));
    }
    let total = sum(x);
    if !total.is_one() {
        return Err(Error::NotNormalized(format_rational(&total)));
    }
    let columns = z.columns();
    // Substitute c = d + t*1 with d, t >= 0.
    let a: Vec<Vec<Q>> = z
        .entries()
        .iter()
        .map(|row| {
            let mut r = row.clone();
            r.push(sum(row));
            r
        })
        .collect();
    let mut cost = vec![Q::zero(); columns + 1];
    cost[columns] = Q::one();
    match maximize(&a, x, &cost) {
        LpOutcome::Optimal { solution, value } => {
            let coefficients: Vec<Q> = solution[..columns].iter().map(|d| d + &value).collect();
            let status = if value.is_positive() { Status::Interior } else { Status::Boundary };
            Ok(MembershipCertificate { status, coefficients: Some(coefficients), margin: Some(value) })
        }
        LpOutcome::Infeasible => Ok(MembershipCertificate::exterior()),
        LpOutcome::Unbounded => unreachable!("coefficients sum to one, so the margin is bounded"),
    }
}

/// Indices (in the fixed edge order) of the vertices of the edge polytope:
/// all loops plus the distinct-pair edges not joining two looped nodes.
pub fn extremal_generators(s: &SkeletonGraph) -> Vec<usize> {
    s.edge_order()
        .iter()
        .enumerate()
        .filter(|(_, e)| match e {
            crate::model::Edge::Loop(_) => true,
            crate::model::Edge::Pair(a, b) => s.f2_edges().contains(&(*a, *b)),
        })
        .map(|(i, _)| i)
        .collect()
}

/// Whether the concentration vector of `w` is in the relative interior of the
/// edge polytope of its skeleton.
pub fn condition_b(w: &StepGraphon) -> Result<MembershipCertificate> {
    let s = skeleton(w);
    let components = connected_components(&s);
    if components.len() > 1 {
        return Err(Error::Disconnected(components));
    }
    positive_certificate(&incidence(&s), concentration(w.partition()).entries())
}
