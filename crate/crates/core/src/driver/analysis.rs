//! Conditions A and B for a step-graphon and the resulting verdict.

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::model::{
    concentration, connected_components, has_odd_cycle, incidence, skeleton, SkeletonGraph, StepGraphon,
};
use crate::polytope::{positive_certificate, MembershipCertificate, Status};
use crate::rational::{format_rational, sum, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    PredictsH,
    PredictsNotH,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::PredictsH => "H-property predicted",
            Verdict::PredictsNotH => "H-property not predicted",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// The verdict table: failing condition A or an exterior `x*` rules the
/// property out; otherwise a connected skeleton with interior `x*` predicts it
/// and everything else (boundary `x*`, disconnected skeleton) is open.
pub fn verdict(connected: bool, condition_a: bool, status: Status) -> Verdict {
    if !condition_a || status == Status::Exterior {
        Verdict::PredictsNotH
    } else if connected && status == Status::Interior {
        Verdict::PredictsH
    } else {
        Verdict::Inconclusive
    }
}

/// Conditions restricted to one connected component, with `x*` restricted
/// and renormalized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    /// 0-based nodes of the original skeleton.
    pub nodes: Vec<usize>,
    pub condition_a: bool,
    pub status: Status,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub skeleton: SkeletonGraph,
    pub concentration: Vec<Q>,
    pub connected: bool,
    pub condition_a: bool,
    /// Whether the loopless skeleton alone has an odd cycle.
    pub loopless_odd_cycle: bool,
    pub condition_b_status: Status,
    pub verdict: Verdict,
    pub certificate: MembershipCertificate,
    pub components: Vec<ComponentReport>,
    pub notes: Vec<String>,
}

pub fn analyze(w: &StepGraphon) -> AnalysisReport {
    let s = skeleton(w);
    let x = concentration(w.partition()).into_entries();
    let comps = connected_components(&s);
    let connected = s.is_connected();
    let condition_a = has_odd_cycle(&s);
    let z = incidence(&s);
    let certificate = positive_certificate(&z, &x).expect("concentration vectors sum to one");
    let status = certificate.status;
    let mut notes = Vec::new();
    if z.rank() == 1 && status != Status::Exterior {
        notes.push("the edge polytope is a single point; x* equals it and is treated as its relative interior".into());
    }
    if s.edge_count() == 0 {
        notes.push("the skeleton has no edges: W vanishes almost everywhere".into());
    }
    let components = if comps.len() <= 1 {
        Vec::new()
    } else {
        notes.push(format!(
            "skeleton is disconnected ({} components); each component is analyzed separately",
            comps.len()
        ));
        comps.iter().map(|nodes| component_report(&s, &x, nodes)).collect()
    };
    let verdict = verdict(connected, condition_a, status);
    if verdict == Verdict::Inconclusive && status == Status::Boundary {
        notes.push(
            "x* lies on the relative boundary of the edge polytope; the limiting probability may lie in (0,1)".into(),
        );
    }
    AnalysisReport {
        loopless_odd_cycle: has_odd_cycle(&s.loopless()),
        skeleton: s,
        concentration: x,
        connected,
        condition_a,
        condition_b_status: status,
        verdict,
        certificate,
        components,
        notes,
    }
}

fn component_report(s: &SkeletonGraph, x: &[Q], nodes: &[usize]) -> ComponentReport {
    let index = |v: usize| nodes.iter().position(|&u| u == v);
    let loops = nodes.iter().enumerate().filter(|(_, &v)| s.has_loop(v)).map(|(k, _)| k);
    let edges = s.edges().iter().filter_map(|&(a, b)| Some((index(a)?, index(b)?)));
    let sub = SkeletonGraph::new(nodes.len(), loops, edges).expect("induced subgraph");
    let restricted: Vec<Q> = nodes.iter().map(|&v| x[v].clone()).collect();
    let total = sum(&restricted);
    let normalized: Vec<Q> = restricted.iter().map(|v| v / &total).collect();
    let status = positive_certificate(&incidence(&sub), &normalized).expect("normalized").status;
    let condition_a = has_odd_cycle(&sub);
    ComponentReport { nodes: nodes.to_vec(), condition_a, status, verdict: verdict(true, condition_a, status) }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl AnalysisReport {
    /// Machine-readable form; node indices are 1-based as in the text report.
    pub fn to_json(&self) -> Value {
        let s = &self.skeleton;
        json!({
            "blocks": s.node_count(),
            "concentration": self.concentration.iter().map(format_rational).collect::<Vec<_>>(),
            "loops": s.loops().iter().map(|i| i + 1).collect::<Vec<_>>(),
            "edges": s.edges().iter().map(|&(a, b)| [a + 1, b + 1]).collect::<Vec<_>>(),
            "connected": self.connected,
            "condition_a": self.condition_a,
            "loopless_odd_cycle": self.loopless_odd_cycle,
            "condition_b_status": self.condition_b_status,
            "margin": self.certificate.margin.as_ref().map(format_rational),
            "coefficients": self.certificate.coefficient_strings(),
            "edge_order": s.edge_order().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "verdict": self.verdict,
            "components": self.components.iter().map(|c| json!({
                "nodes": c.nodes.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "condition_a": c.condition_a,
                "condition_b_status": c.status,
                "verdict": c.verdict,
            })).collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.skeleton;
        let join = |items: Vec<String>| if items.is_empty() { "none".to_string() } else { items.join(" ") };
        writeln!(f, "Blocks: {}", s.node_count())?;
        writeln!(f, "x*: ({})", self.concentration.iter().map(format_rational).collect::<Vec<_>>().join(", "))?;
        writeln!(f, "Loops: {}", join(s.loops().iter().map(|i| (i + 1).to_string()).collect()))?;
        writeln!(f, "Edges: {}", join(s.edges().iter().map(|&(a, b)| format!("({},{})", a + 1, b + 1)).collect()))?;
        writeln!(f, "Connected: {}", yes(self.connected))?;
        writeln!(f, "Condition A: {}", yes(self.condition_a))?;
        writeln!(f, "Condition B: {} ({})", yes(self.condition_b_status == Status::Interior), self.condition_b_status)?;
        if let (Some(m), Some(c)) = (&self.certificate.margin, self.certificate.coefficient_strings()) {
            writeln!(f, "Certificate margin: {}", format_rational(m))?;
            let order = s.edge_order();
            let pairs: Vec<String> = order.iter().zip(&c).map(|(e, c)| format!("{e}={c}")).collect();
            writeln!(f, "Certificate: {}", pairs.join(" "))?;
        }
        for c in &self.components {
            let nodes: Vec<String> = c.nodes.iter().map(|i| (i + 1).to_string()).collect();
            writeln!(
                f,
                "Component {{{}}}: Condition A: {}, Condition B: {}, {}",
                nodes.join(","),
                yes(c.condition_a),
                c.status,
                c.verdict
            )?;
        }
        for note in &self.notes {
            writeln!(f, "Note: {note}")?;
        }
        writeln!(f, "verdict: {}", self.verdict)
    }
}
