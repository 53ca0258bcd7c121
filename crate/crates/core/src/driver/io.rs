//! Graphon and graph files.
//!
//! Graphon: `{"sigma": [...], "values": [[...], ...]}` where every entry is a
//! `"p/q"` string, an integer or a decimal (string or JSON number), all read
//! exactly. Graph: `{"n": 3, "coords": [...], "blocks": [...], "edges": [[0, 1], ...]}`
//! with 0-based node and block indices.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{Partition, StepGraphon};
use crate::rational::{format_rational, parse_rational, Q};
use crate::sampling::SampledGraph;

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
}

fn parse_entry(v: &Value, field: &str) -> Result<Q> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(Error::Parse(format!("{field}: expected a number or \"p/q\" string, got {other}"))),
    };
    parse_rational(&text).map_err(|e| Error::Parse(format!("{field}: {e}")))
}

fn field<'a>(doc: &'a Value, name: &str) -> Result<&'a Vec<Value>> {
    doc.get(name)
        .ok_or_else(|| Error::Parse(format!("missing field `{name}`")))?
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{name}: expected an array")))
}

/// Parses a graphon document; errors name the offending line or field.
pub fn parse_graphon(text: &str) -> Result<StepGraphon> {
    let doc = parse_json(text)?;
    if !doc.is_object() {
        return Err(Error::Parse("expected a JSON object".into()));
    }
    let sigma = field(&doc, "sigma")?
        .iter()
        .enumerate()
        .map(|(i, v)| parse_entry(v, &format!("sigma[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let values = field(&doc, "values")?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.as_array()
                .ok_or_else(|| Error::Parse(format!("values[{i}]: expected an array")))?
                .iter()
                .enumerate()
                .map(|(j, v)| parse_entry(v, &format!("values[{i}][{j}]")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    StepGraphon::new(Partition::new(sigma)?, values)
}

/// Pretty-printed graphon document with `"p/q"` strings.
pub fn graphon_to_json(w: &StepGraphon) -> String {
    let strings = |v: &[Q]| v.iter().map(format_rational).collect::<Vec<_>>();
    let doc = serde_json::json!({
        "sigma": strings(w.partition().breakpoints()),
        "values": w.values().iter().map(|r| strings(r)).collect::<Vec<_>>(),
    });
    serde_json::to_string_pretty(&doc).expect("plain JSON") + "\n"
}

pub fn load_graphon(path: impl AsRef<Path>) -> Result<StepGraphon> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_graphon(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn save_graphon(path: impl AsRef<Path>, w: &StepGraphon) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, graphon_to_json(w)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    n: usize,
    coords: Vec<f64>,
    blocks: Vec<usize>,
    edges: Vec<[usize; 2]>,
}

pub fn graph_to_json(g: &SampledGraph) -> String {
    let doc = GraphDoc {
        n: g.n(),
        coords: g.coords().to_vec(),
        blocks: g.blocks().to_vec(),
        edges: g.edges().iter().map(|&(a, b)| [a, b]).collect(),
    };
    serde_json::to_string(&doc).expect("plain JSON") + "\n"
}

pub fn parse_graph(text: &str) -> Result<SampledGraph> {
    let doc: GraphDoc = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    SampledGraph::new(doc.n, doc.coords, doc.blocks, doc.edges.into_iter().map(|[a, b]| (a, b)))
}

pub fn save_graph(path: impl AsRef<Path>, g: &SampledGraph) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, graph_to_json(g)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<SampledGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_graph(&text)
}
