//! Construction of an integral balanced matrix `A(x)` with `A 1 = x`.
//!
//! Pipeline: certificate for `x` on `Z_S` -> split into loop part `tau0` and
//! loopless part `tau1` -> round `n tau0` to even integers -> certificate for
//! the normalized remainder on `Z_{S1}` -> symmetric fractional matrix ->
//! balanced integral rounding -> recombine.

use num_traits::{Signed, ToPrimitive, Zero};

use super::rounding::{matrix_round, round_even};
use super::TauSplit;
use crate::error::{BuildAFailure, Error, Result};
use crate::model::{connected_components, has_odd_cycle, incidence, Edge, SkeletonGraph};
use crate::polytope::{positive_certificate, MembershipCertificate, Status};
use crate::rational::{qu, sum, Q};
use crate::sampling::BalancedMatrix;

/// `tau0 = sum over loops of c_f z_f`, `tau1 = x - tau0`.
pub fn split_tau(x: &[Q], cert: &MembershipCertificate, s: &SkeletonGraph) -> Result<TauSplit> {
    if cert.status != Status::Interior {
        return Err(Error::NotInterior(cert.status));
    }
    let coefficients = cert.coefficients.as_ref().expect("interior certificates carry coefficients");
    let order = s.edge_order();
    if coefficients.len() != order.len() || x.len() != s.node_count() {
        return Err(Error::DimensionMismatch("certificate does not match skeleton".into()));
    }
    let mut tau0 = vec![Q::zero(); s.node_count()];
    for (edge, c) in order.iter().zip(coefficients) {
        if let Edge::Loop(i) = edge {
            tau0[*i] += c;
        }
    }
    let tau1 = x.iter().zip(&tau0).map(|(a, b)| a - b).collect();
    Ok(TauSplit { tau0, tau1 })
}

/// Everything computed on the way to `A(x)`, including the postconditions
/// the candidate matrix violates (if any).
#[derive(Debug, Clone)]
pub struct AConstruction {
    pub matrix: BalancedMatrix,
    pub certificate: MembershipCertificate,
    pub tau: TauSplit,
    pub rounded_tau0: Vec<Q>,
    /// Certificate for the normalized loopless remainder; `None` when nothing remains.
    pub theta: Option<MembershipCertificate>,
    pub violations: Vec<BuildAFailure>,
}

impl AConstruction {
    /// Smallest positive entry of `A(x)`.
    pub fn min_positive_entry(&self) -> Option<Q> {
        self.matrix.min_positive_entry()
    }
}

/// Runs the full pipeline and records every violated postcondition instead of
/// stopping at the first one. Errors only when no candidate matrix exists.
pub fn construct_a(x: &[Q], n: u64, s: &SkeletonGraph) -> Result<AConstruction> {
    let q = s.node_count();
    if x.len() != q {
        return Err(Error::DimensionMismatch(format!("x has {} entries, S has {q} nodes", x.len())));
    }
    if n == 0 {
        return Err(Error::InvalidMatrix("n must be positive".into()));
    }
    let nq = qu(n);
    if x.iter().any(|v| !(v * &nq).is_integer()) {
        return Err(BuildAFailure::NotIntegral.into());
    }
    let components = connected_components(s);
    if components.len() > 1 {
        return Err(Error::Disconnected(components));
    }
    let loopless = s.loopless();

    let certificate = positive_certificate(&incidence(s), x)?;
    if certificate.status != Status::Interior {
        return Err(BuildAFailure::NotInterior(certificate.status).into());
    }
    let tau = split_tau(x, &certificate, s)?;
    let rounded_tau0 = round_even(&tau.tau0, n);
    let residual: Vec<Q> = x.iter().zip(&rounded_tau0).map(|(a, b)| a - b).collect();
    let mut counts = vec![vec![0u64; q]; q];
    if residual.iter().all(Zero::is_zero) {
        // Everything sits on loops; no loopless part to round.
        for i in 0..q {
            counts[i][i] = (&rounded_tau0[i] * &nq).to_integer().to_u64().expect("non-negative diagonal");
        }
        let matrix = BalancedMatrix::new(n, counts)?;
        let violations = prop1_violations(&matrix, x, &tau.tau0, s);
        let theta = None;
        return Ok(AConstruction { matrix, certificate, tau, rounded_tau0, theta, violations });
    }
    if !has_odd_cycle(&loopless) {
        return Err(BuildAFailure::LooplessBipartite.into());
    }
    if let Some(i) = residual.iter().position(|v| !v.is_positive()) {
        return Err(BuildAFailure::ResidualNotPositive(i).into());
    }
    let residual_mass = sum(&residual);
    let normalized: Vec<Q> = residual.iter().map(|v| v / &residual_mass).collect();
    let theta = positive_certificate(&incidence(&loopless), &normalized)?;
    let theta_coefficients = match (&theta.status, &theta.coefficients) {
        (Status::Exterior, _) | (_, None) => return Err(BuildAFailure::ThetaOutside(theta.status).into()),
        (_, Some(c)) => c,
    };

    // n1' * A1' with a'_ij = theta_f / 2; its row sums are n * tau1'.
    let n1 = &residual_mass * &nq;
    let mut fractional = vec![vec![Q::zero(); q]; q];
    for (edge, theta_f) in loopless.edge_order().iter().zip(theta_coefficients) {
        let (i, j) = edge.endpoints();
        let v = &n1 * theta_f / qu(2);
        fractional[i][j] = v.clone();
        fractional[j][i] = v;
    }
    counts = matrix_round(&fractional, &loopless)?;
    for i in 0..q {
        let d = (&rounded_tau0[i] * &nq).to_integer();
        counts[i][i] = d.to_u64().expect("non-negative diagonal");
    }
    let matrix =
        BalancedMatrix::new(n, counts).map_err(|e| BuildAFailure::Property { item: 1, detail: e.to_string() })?;
    let violations = prop1_violations(&matrix, x, &tau.tau0, s);
    Ok(AConstruction { matrix, certificate, tau, rounded_tau0, theta: Some(theta), violations })
}

/// `A(x)` with all five postconditions verified.
pub fn build_a(x: &[Q], n: u64, s: &SkeletonGraph) -> Result<BalancedMatrix> {
    let built = construct_a(x, n, s)?;
    match built.violations.into_iter().next() {
        Some(v) => Err(v.into()),
        None => Ok(built.matrix),
    }
}

/// Checks the five postconditions of `A(x)`:
/// 1. `A 1 = x`;
/// 2. `n A` integral with even diagonal;
/// 3. `|n a_ii - n tau0_i| <= 1`;
/// 4. `|n a_ij - n a_ji| <= 1`;
/// 5. `a_ij > 0` exactly on the loops and edges of `S`.
pub fn check_prop1(a: &BalancedMatrix, x: &[Q], tau0: &[Q], s: &SkeletonGraph) -> Result<(), BuildAFailure> {
    match prop1_violations(a, x, tau0, s).into_iter().next() {
        Some(v) => Err(v),
        None => Ok(()),
    }
}

fn prop1_violations(a: &BalancedMatrix, x: &[Q], tau0: &[Q], s: &SkeletonGraph) -> Vec<BuildAFailure> {
    let q = a.q();
    let n = qu(a.scale());
    let c = a.counts();
    let mut out = Vec::new();
    let mut fail = |item: u8, detail: String| out.push(BuildAFailure::Property { item, detail });

    let rows = a.row_sums();
    if x.len() != q {
        fail(1, format!("x has {} entries for a {q}x{q} matrix", x.len()));
    } else if let Some(i) = (0..q).find(|&i| qu(rows[i]) != &x[i] * &n) {
        fail(1, format!("row {} sums to {} but n*x = {}", i + 1, rows[i], &x[i] * &n));
    }
    if let Some(i) = (0..q).find(|&i| !c[i][i].is_multiple_of(2)) {
        fail(2, format!("diagonal entry {} of nA is odd ({})", i + 1, c[i][i]));
    }
    if let Some(i) = (0..q).find(|&i| {
        let gap = qu(c[i][i]) - &tau0[i] * &n;
        gap.abs() > qu(1)
    }) {
        fail(3, format!("diagonal entry {} is more than 1/n from tau0", i + 1));
    }
    'asym: for i in 0..q {
        for j in 0..q {
            if c[i][j].abs_diff(c[j][i]) > 1 {
                fail(4, format!("|n a_{0}{1} - n a_{1}{0}| = {2}", i + 1, j + 1, c[i][j].abs_diff(c[j][i])));
                break 'asym;
            }
        }
    }
    'support: for i in 0..q {
        for j in 0..q {
            if (c[i][j] > 0) != s.allows(i, j) {
                let what = if c[i][j] > 0 { "positive off the skeleton" } else { "zero on a skeleton edge" };
                fail(5, format!("entry ({},{}) is {what}", i + 1, j + 1));
                break 'support;
            }
        }
    }
    out
}
