//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.
#![allow(clippy::needless_range_loop)]

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use hprop_core::construct::{build_h, canonical_blocks, construct_a, matrix_round, HamDecomposition};
use hprop_core::driver::{montecarlo, MonteCarloConfig, MonteCarloReport};
use hprop_core::model::{
    concentration, has_odd_cycle, incidence, skeleton, Edge, Partition, SkeletonGraph, StepGraphon,
};
use hprop_core::polytope::{positive_certificate, Status};
use hprop_core::rational::{q, qi, qu, Q};
use hprop_core::realize::oracle_exists;
use hprop_core::refine::{pull_certificate, push_certificate, refine_once};
use hprop_core::sampling::{rho, BalancedMatrix};
use num_traits::{Signed, Zero};

struct Verdict {
    ok: bool,
    summary: String,
}

fn check(ok: bool, summary: impl Into<String>) -> Verdict {
    Verdict { ok, summary: summary.into() }
}

fn within(limit: Duration, elapsed: Duration) -> bool {
    elapsed < limit
}

fn triangle() -> SkeletonGraph {
    SkeletonGraph::new(3, [], [(0, 1), (0, 2), (1, 2)]).unwrap()
}

fn cycle_lengths(h: &HamDecomposition) -> (usize, usize, Vec<usize>) {
    let lens: Vec<usize> = h.cycles().iter().map(Vec::len).collect();
    (lens.iter().filter(|&&l| l == 2).count(), lens.iter().filter(|&&l| l > 2).count(), lens)
}

// Example with three blocks of sizes n1, n2, n3 on a triangle skeleton.
fn criterion_1() -> Verdict {
    let start = Instant::now();
    let s = triangle();
    let mut notes = Vec::new();
    let mut ok = true;
    for (sizes, want_two, want_three) in [([3u64, 4, 5], 6usize, 0usize), ([3, 4, 6], 5, 1)] {
        let n: u64 = sizes.iter().sum();
        let x: Vec<Q> = sizes.iter().map(|&k| qu(k) / qu(n)).collect();
        let built = construct_a(&x, n, &s).unwrap();
        // Items 1-4 must always hold; item 5 is impossible for (3,4,6) since rows
        // 3,4,6 force one of a_12, a_21 to vanish.
        let core_ok = built.violations.iter().all(|v| matches!(v, hprop_core::BuildAFailure::Property { item: 5, .. }));
        let h = build_h(&built.matrix, &sizes, &s).unwrap();
        let (two, longer, lens) = cycle_lengths(&h);
        let three = lens.iter().filter(|&&l| l == 3).count();
        let this_ok = core_ok
            && two == want_two
            && longer == want_three
            && three == want_three
            && rho(&h, &canonical_blocks(&sizes), 3, &s).unwrap() == built.matrix;
        ok &= this_ok;
        notes.push(format!("sizes {sizes:?}: {two} 2-cycles, {three} 3-cycles, {longer} long"));
    }
    let elapsed = start.elapsed();
    check(ok && within(Duration::from_secs(1), elapsed), format!("{} in {elapsed:.2?}", notes.join("; ")))
}

struct SuiteRun {
    instances: usize,
    /// `n` of each failure, and whether a block is too small for its required support.
    failures: Vec<(u64, bool)>,
    prop1_violations: Vec<String>,
    roundtrip_violations: usize,
    successes: usize,
    prop2_violations: Vec<String>,
    elapsed: Duration,
}

// Independent check of the five A-matrix postconditions.
fn prop1_independent(a: &BalancedMatrix, x: &[Q], tau0: &[Q], s: &SkeletonGraph) -> Option<String> {
    let n = qu(a.scale());
    let c = a.counts();
    let q = c.len();
    for i in 0..q {
        let row: u64 = c[i].iter().sum();
        if qu(row) != &x[i] * &n {
            return Some(format!("item 1 at row {i}"));
        }
        if c[i][i] % 2 == 1 {
            return Some(format!("item 2 at {i}"));
        }
        if (qu(c[i][i]) - &tau0[i] * &n).abs() > qi(1) {
            return Some(format!("item 3 at {i}"));
        }
        for j in 0..q {
            if c[i][j].abs_diff(c[j][i]) > 1 {
                return Some(format!("item 4 at ({i},{j})"));
            }
            let allowed = if i == j { s.loops().contains(&i) } else { s.edges().contains(&(i.min(j), i.max(j))) };
            if (c[i][j] > 0) != allowed {
                return Some(format!("item 5 at ({i},{j})"));
            }
        }
    }
    None
}

fn prop2_independent(h: &HamDecomposition, sizes: &[u64], s: &SkeletonGraph) -> Option<String> {
    let f = s.loops().len() + s.edges().len();
    let blocks = canonical_blocks(sizes);
    let long: Vec<&Vec<usize>> = h.cycles().iter().filter(|c| c.len() >= 3).collect();
    if long.len() > (2 * f).div_ceil(3) {
        return Some(format!("{} long cycles for |F| = {f}", long.len()));
    }
    if let Some(c) = h.cycles().iter().find(|c| c.len() > 2.max(2 * f)) {
        return Some(format!("cycle of length {} for |F| = {f}", c.len()));
    }
    for c in long {
        let mut bs: Vec<usize> = c.iter().map(|&v| blocks[v]).collect();
        bs.sort_unstable();
        bs.dedup();
        if bs.len() != c.len() {
            return Some("long cycle revisits a block".into());
        }
    }
    None
}

fn tau0_of(built: &hprop_core::construct::AConstruction, s: &SkeletonGraph) -> Vec<Q> {
    let coeffs = built.certificate.coefficients.as_ref().unwrap();
    let mut tau0 = vec![Q::zero(); s.node_count()];
    for (e, c) in s.edge_order().iter().zip(coeffs) {
        if let Edge::Loop(i) = e {
            tau0[*i] = c.clone();
        }
    }
    tau0
}

// Row i of any valid A sums to n x_i yet needs a positive entry per neighbor
// and an even positive loop entry, so a smaller block cannot be served.
fn support_infeasible(inst: &Instance) -> bool {
    (0..inst.s.node_count()).any(|i| {
        let needed =
            inst.s.neighbors(i).iter().filter(|&&j| j != i).count() as u64 + if inst.s.has_loop(i) { 2 } else { 0 };
        inst.sizes[i] < needed
    })
}

fn run_suite() -> SuiteRun {
    let start = Instant::now();
    let mut r = rng(20_240_601);
    let mut run = SuiteRun {
        instances: 1000,
        failures: Vec::new(),
        prop1_violations: Vec::new(),
        roundtrip_violations: 0,
        successes: 0,
        prop2_violations: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for _ in 0..run.instances {
        let inst = random_instance(&mut r, 8, 10_000);
        let built = match construct_a(&inst.x, inst.n, &inst.s) {
            Ok(b) if b.violations.is_empty() => b,
            _ => {
                run.failures.push((inst.n, support_infeasible(&inst)));
                continue;
            }
        };
        run.successes += 1;
        if let Some(v) = prop1_independent(&built.matrix, &inst.x, &tau0_of(&built, &inst.s), &inst.s) {
            run.prop1_violations.push(format!("n={}: {v}", inst.n));
        }
        let h = build_h(&built.matrix, &inst.sizes, &inst.s).unwrap();
        let back = rho(&h, &canonical_blocks(&inst.sizes), inst.s.node_count(), &inst.s).unwrap();
        if back != built.matrix || back.entries() != built.matrix.entries() {
            run.roundtrip_violations += 1;
        }
        if let Some(v) = prop2_independent(&h, &inst.sizes, &inst.s) {
            run.prop2_violations.push(format!("n={}: {v}", inst.n));
        }
    }
    run.elapsed = start.elapsed();
    run
}

fn criterion_2(run: &SuiteRun) -> Verdict {
    let rate = run.failures.len() as f64 / run.instances as f64;
    let large: Vec<String> = run
        .failures
        .iter()
        .filter(|f| f.0 >= 50)
        .map(|&(n, infeasible)| format!("n={n}{}", if infeasible { " (no valid A exists)" } else { "" }))
        .collect();
    let ok = run.prop1_violations.is_empty()
        && rate < 0.05
        && large.is_empty()
        && within(Duration::from_secs(60), run.elapsed);
    check(
        ok,
        format!(
            "{} instances, {} failures ({:.1}%, failures at n >= 50: {:?}), {} postcondition violations {:?}, {:.2?}",
            run.instances,
            run.failures.len(),
            100.0 * rate,
            large,
            run.prop1_violations.len(),
            run.prop1_violations.iter().take(3).collect::<Vec<_>>(),
            run.elapsed
        ),
    )
}

fn criterion_3(run: &SuiteRun) -> Verdict {
    check(
        run.roundtrip_violations == 0 && run.successes > 0,
        format!("{} round trips, {} mismatches", run.successes, run.roundtrip_violations),
    )
}

fn criterion_4(run: &SuiteRun) -> Verdict {
    check(
        run.prop2_violations.is_empty() && run.successes > 0,
        format!(
            "{} decompositions, {} bound violations {:?}",
            run.successes,
            run.prop2_violations.len(),
            run.prop2_violations.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn erdos_renyi() -> StepGraphon {
    StepGraphon::constant(q(1, 2)).unwrap()
}

fn triangle_graphon() -> StepGraphon {
    let (z, h) = (qi(0), q(1, 2));
    StepGraphon::new(
        Partition::uniform(3),
        vec![vec![z.clone(), h.clone(), h.clone()], vec![h.clone(), z.clone(), h.clone()], vec![h.clone(), h, z]],
    )
    .unwrap()
}

fn bipartite_graphon() -> StepGraphon {
    StepGraphon::new(
        Partition::new(vec![qi(0), q(3, 10), qi(1)]).unwrap(),
        vec![vec![qi(0), q(1, 2)], vec![q(1, 2), qi(0)]],
    )
    .unwrap()
}

fn criterion_5(reports: &[(&str, MonteCarloReport)], elapsed: Duration) -> Verdict {
    let ok = reports.iter().all(|(_, r)| r.estimate >= 0.98 && r.constructive_estimate >= 0.90)
        && within(Duration::from_secs(300), elapsed);
    let parts: Vec<String> = reports
        .iter()
        .map(|(name, r)| format!("{name}: oracle {:.3}, constructive {:.3}", r.estimate, r.constructive_estimate))
        .collect();
    check(ok, format!("{} (n=200, 200 trials) in {elapsed:.2?}", parts.join("; ")))
}

fn criterion_6(r: &MonteCarloReport) -> Verdict {
    check(
        r.estimate <= 0.02,
        format!("bipartite sigma=(0,3/10,1): oracle {:.3} (95% CI {:.3}-{:.3})", r.estimate, r.ci_low, r.ci_high),
    )
}

fn criterion_7() -> Verdict {
    let mut checked = 0usize;
    let mut disagreements = 0usize;
    for n in 1..=4usize {
        let perms = permutations(n);
        let slots: Vec<(usize, usize)> =
            (0..n).flat_map(|v| (0..n).filter(move |&w| w != v).map(move |w| (v, w))).collect();
        for mask in 0u64..(1 << slots.len()) {
            let mut arcs = vec![vec![false; n]; n];
            for (k, &(v, w)) in slots.iter().enumerate() {
                arcs[v][w] = mask >> k & 1 == 1;
            }
            checked += 1;
            if oracle_exists(&out_lists(&arcs)) != decomposition_by_search(&arcs, &perms) {
                disagreements += 1;
            }
        }
    }
    let mut r = rng(77);
    for n in [5usize, 6] {
        let perms = permutations(n);
        for _ in 0..10_000 {
            let p = range(&mut r, 1, 9) as usize;
            let arcs: Vec<Vec<bool>> =
                (0..n).map(|v| (0..n).map(|w| v != w && coin(&mut r, p, 20)).collect()).collect();
            checked += 1;
            if oracle_exists(&out_lists(&arcs)) != decomposition_by_search(&arcs, &perms) {
                disagreements += 1;
            }
        }
    }
    check(disagreements == 0, format!("{checked} digraphs, {disagreements} disagreements"))
}

fn criterion_8() -> Verdict {
    let start = Instant::now();
    let mut r = rng(8);
    let mut violations = Vec::new();
    let mut statuses = [0usize; 3];
    for k in 0..500 {
        let qn = range(&mut r, 1, 5) as usize;
        let w = random_graphon(&mut r, qn, 1, 2);
        let b = r.below(qn);
        let (lo, hi) = w.partition().interval(b);
        let t = lo + (hi - lo) * q(range(&mut r, 1, 6) as i64, 7);
        let rec = refine_once(&w, b, &t).unwrap();
        let (s, s2) = (skeleton(&w), skeleton(&rec.refined));
        let (x, x2) = (concentration(w.partition()), concentration(rec.refined.partition()));
        if s.is_connected() != s2.is_connected() {
            violations.push(format!("#{k}: connectivity"));
        }
        if has_odd_cycle(&s) != has_odd_cycle(&s2) {
            violations.push(format!("#{k}: odd cycle"));
        }
        let c = positive_certificate(&incidence(&s), x.entries()).unwrap();
        let c2 = positive_certificate(&incidence(&s2), x2.entries()).unwrap();
        statuses[c.status as usize] += 1;
        if c.status != c2.status {
            violations.push(format!("#{k}: status {} -> {}", c.status, c2.status));
        }
        if let Some(coeffs) = &c.coefficients {
            let pushed = push_certificate(coeffs, &rec).unwrap();
            if incidence(&s2).apply(&pushed).unwrap() != x2.entries() || pushed.iter().any(Signed::is_negative) {
                violations.push(format!("#{k}: push does not solve"));
            }
            if c.status == Status::Interior && !pushed.iter().all(Signed::is_positive) {
                violations.push(format!("#{k}: push lost positivity"));
            }
            let back = pull_certificate(&pushed, &rec).unwrap();
            if incidence(&s).apply(&back).unwrap() != x.entries() {
                violations.push(format!("#{k}: pull(push) does not solve"));
            }
        }
        if let Some(coeffs) = &c2.coefficients {
            let pulled = pull_certificate(coeffs, &rec).unwrap();
            if incidence(&s).apply(&pulled).unwrap() != x.entries() {
                violations.push(format!("#{k}: pull does not solve"));
            }
            if c2.status == Status::Interior && !pulled.iter().all(Signed::is_positive) {
                violations.push(format!("#{k}: pull lost positivity"));
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        violations.is_empty() && within(Duration::from_secs(30), elapsed),
        format!(
            "500 refinements (interior/boundary/exterior {:?}), {} violations {:?}, {elapsed:.2?}",
            statuses,
            violations.len(),
            violations.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn criterion_9() -> Verdict {
    let mut r = rng(9);
    let mut violations = Vec::new();
    let mut fractional_entries = 0usize;
    for k in 0..1000 {
        let qn = range(&mut r, 2, 8) as usize;
        let s = random_skeleton(&mut r, qn);
        let allowed: Vec<(usize, usize)> =
            (0..qn).flat_map(|i| (0..qn).map(move |j| (i, j))).filter(|&(i, j)| s.allows(i, j)).collect();
        let mut m = vec![vec![Q::zero(); qn]; qn];
        for &(i, j) in &allowed {
            m[i][j] = qu(range(&mut r, 0, 5));
        }
        // Rectangle moves keep every row and column sum.
        for _ in 0..range(&mut r, 1, 12) {
            let (r1, r2) = (r.below(qn), r.below(qn));
            let (c1, c2) = (r.below(qn), r.below(qn));
            if r1 == r2 || c1 == c2 || ![(r1, c1), (r1, c2), (r2, c1), (r2, c2)].iter().all(|&(i, j)| s.allows(i, j)) {
                continue;
            }
            let eps = q(range(&mut r, 1, 9) as i64, 10);
            if m[r1][c2] >= eps && m[r2][c1] >= eps {
                m[r1][c1] += &eps;
                m[r2][c2] += &eps;
                m[r1][c2] -= &eps;
                m[r2][c1] -= &eps;
            }
        }
        fractional_entries += m.iter().flatten().filter(|v| !v.is_integer()).count();
        let out = match matrix_round(&m, &s) {
            Ok(o) => o,
            Err(e) => {
                violations.push(format!("#{k}: {e}"));
                continue;
            }
        };
        for i in 0..qn {
            let row_m: Q = m[i].iter().sum();
            let col_m: Q = m.iter().map(|row| &row[i]).sum();
            if qu(out[i].iter().sum()) != row_m || qu(out.iter().map(|row| row[i]).sum()) != col_m {
                violations.push(format!("#{k}: sums differ at {i}"));
            }
            for j in 0..qn {
                if (qu(out[i][j]) - &m[i][j]).abs() >= qi(1) {
                    violations.push(format!("#{k}: |R-M| >= 1 at ({i},{j})"));
                }
                if out[i][j] > 0 && m[i][j].is_zero() {
                    violations.push(format!("#{k}: support grew at ({i},{j})"));
                }
            }
        }
    }
    check(
        violations.is_empty(),
        format!(
            "1000 matrices ({fractional_entries} fractional entries), {} violations {:?}",
            violations.len(),
            violations.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn criterion_10(reports: &[&MonteCarloReport]) -> Verdict {
    let successes: usize = reports.iter().map(|r| r.records.iter().filter(|t| t.constructive).count()).sum();
    let bad: usize = reports
        .iter()
        .map(|r| r.records.iter().filter(|t| t.constructive && !(t.oracle && t.witness_verified)).count())
        .sum();
    let agg: u64 = reports.iter().map(|r| r.witness_violations).sum();
    check(bad == 0 && agg == 0, format!("{successes} constructive successes, {bad} without oracle confirmation"))
}

fn main() -> ExitCode {
    let mut results: Vec<(u8, &str, Verdict)> = Vec::new();
    results.push((1, "worked example on a triangle skeleton", criterion_1()));

    let run = run_suite();
    results.push((2, "A-matrix postconditions", criterion_2(&run)));
    results.push((3, "round trip rho(build_H(A)) = A", criterion_3(&run)));
    results.push((4, "decomposition bounds", criterion_4(&run)));

    let start = Instant::now();
    let er = montecarlo(&erdos_renyi(), &MonteCarloConfig::new(200, 200, 5)).unwrap();
    let tri = montecarlo(&triangle_graphon(), &MonteCarloConfig::new(200, 200, 55)).unwrap();
    let elapsed = start.elapsed();
    results.push((
        5,
        "positive statistical check",
        criterion_5(&[("W=1/2", er.clone()), ("triangle", tri.clone())], elapsed),
    ));
    let bip = montecarlo(&bipartite_graphon(), &MonteCarloConfig::new(200, 200, 6)).unwrap();
    results.push((6, "necessity-side statistical check", criterion_6(&bip)));

    results.push((7, "oracle against permutation search", criterion_7()));
    results.push((8, "refinement invariance", criterion_8()));
    results.push((9, "matrix rounding contract", criterion_9()));
    results.push((10, "witness soundness", criterion_10(&[&er, &tri, &bip])));

    let mut failed = 0;
    for (id, name, v) in &results {
        if !v.ok {
            failed += 1;
        }
        println!("{} criterion {id:>2} ({name}): {}", if v.ok { "PASS" } else { "FAIL" }, v.summary);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
