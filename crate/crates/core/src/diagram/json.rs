//! The diagram JSON interchange format.
//!
//! ```json
//! {
//!   "edges": [{"id": 0, "kind": "chain", "half_twists": 0}, ...],
//!   "crossings": [{"id": 0, "incident": [{"edge": 1, "dir": "in"}, ...]}, ...],
//!   "bond_vertices": [{"id": 0, "incident": [...]}, ...],
//!   "bond_orientations": {"2": {"tail": 0, "head": 1}}
//! }
//! ```
//!
//! The crossing incident list starts at the incoming under-strand and
//! proceeds counterclockwise. Serialization is canonical: elements sorted by
//! id, bond-vertex rotations anchored at the bond end, `half_twists` always
//! present, and `bond_orientations` derived from the stored directions keyed
//! by the lowest edge id of each bond path. Parsing accepts any rotation of
//! the vertex lists and an optional `bond_orientations` override that
//! re-directs the named bond paths.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use super::surgery::Surgeon;
use super::{
    BondedDiagram, CrossingId, EdgeData, EdgeId, EdgeKind, Port, Site, SlotRef, VertexId,
    Violation,
};

/// Errors from [`BondedDiagram::parse_json`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ParseError {
    /// Malformed JSON, with 1-based position.
    Syntax { line: usize, column: usize, message: String },
    /// Structurally well-formed JSON that does not fit the schema.
    Schema(String),
    /// A schema-conforming diagram that violates the model invariants.
    Invalid(Vec<Violation>),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { line, column, message } => {
                write!(f, "syntax error at line {line}, column {column}: {message}")
            }
            ParseError::Schema(m) => write!(f, "schema error: {m}"),
            ParseError::Invalid(v) => {
                write!(f, "invalid diagram:")?;
                for viol in v {
                    write!(f, " [{viol}]")?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ParseError {}

#[derive(Serialize, Deserialize)]
struct JsonDiagram {
    #[serde(default)]
    edges: Vec<JsonEdge>,
    #[serde(default)]
    crossings: Vec<JsonSite>,
    #[serde(default)]
    bond_vertices: Vec<JsonSite>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    bond_orientations: BTreeMap<String, JsonOrientation>,
}

#[derive(Serialize, Deserialize)]
struct JsonEdge {
    id: u32,
    kind: String,
    #[serde(default)]
    half_twists: i32,
}

#[derive(Serialize, Deserialize)]
struct JsonSite {
    id: u32,
    incident: Vec<JsonRef>,
}

#[derive(Serialize, Deserialize)]
struct JsonRef {
    edge: u32,
    dir: String,
}

#[derive(Serialize, Deserialize)]
struct JsonOrientation {
    tail: u32,
    head: u32,
}

pub(crate) fn parse_diagram(text: &str) -> Result<BondedDiagram, ParseError> {
    let raw: JsonDiagram = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut d = BondedDiagram::new();
    for e in &raw.edges {
        let kind = match e.kind.as_str() {
            "chain" => EdgeKind::Chain,
            "bond" => EdgeKind::Bond,
            other => {
                return Err(ParseError::Schema(alloc::format!(
                    "edge {}: unknown kind {:?}",
                    e.id,
                    other
                )))
            }
        };
        if d.edges
            .insert(EdgeId(e.id), EdgeData { kind, half_twists: e.half_twists })
            .is_some()
        {
            return Err(ParseError::Schema(alloc::format!("duplicate edge id {}", e.id)));
        }
    }
    let conv = |r: &JsonRef, what: &str, id: u32| -> Result<SlotRef, ParseError> {
        let out = match r.dir.as_str() {
            "in" => false,
            "out" => true,
            other => {
                return Err(ParseError::Schema(alloc::format!(
                    "{what} {id}: dir must be \"in\" or \"out\", got {other:?}"
                )))
            }
        };
        Ok(SlotRef { edge: EdgeId(r.edge), out })
    };
    for c in &raw.crossings {
        if c.incident.len() != 4 {
            return Err(ParseError::Schema(alloc::format!(
                "crossing {}: needs exactly 4 incident references",
                c.id
            )));
        }
        let mut slots = [SlotRef::incoming(EdgeId(0)); 4];
        for (i, r) in c.incident.iter().enumerate() {
            slots[i] = conv(r, "crossing", c.id)?;
        }
        if d.crossings.insert(CrossingId(c.id), slots).is_some() {
            return Err(ParseError::Schema(alloc::format!("duplicate crossing id {}", c.id)));
        }
    }
    for v in &raw.bond_vertices {
        if v.incident.len() != 3 {
            return Err(ParseError::Schema(alloc::format!(
                "bond vertex {}: needs exactly 3 incident references",
                v.id
            )));
        }
        let mut slots = [SlotRef::incoming(EdgeId(0)); 3];
        for (i, r) in v.incident.iter().enumerate() {
            slots[i] = conv(r, "bond vertex", v.id)?;
        }
        if d.bond_vertices.insert(VertexId(v.id), slots).is_some() {
            return Err(ParseError::Schema(alloc::format!(
                "duplicate bond vertex id {}",
                v.id
            )));
        }
    }
    normalize_vertex_rotations(&mut d);
    let violations = d.validate();
    if !violations.is_empty() {
        return Err(ParseError::Invalid(violations));
    }
    // Apply any explicit bond orientations by re-directing the named paths.
    for (key, orient) in &raw.bond_orientations {
        let edge = EdgeId(key.parse::<u32>().map_err(|_| {
            ParseError::Schema(alloc::format!("bond_orientations: bad edge id key {key:?}"))
        })?);
        match d.edges.get(&edge) {
            Some(data) if data.kind == EdgeKind::Bond => {}
            _ => {
                return Err(ParseError::Schema(alloc::format!(
                    "bond_orientations: edge {} is not a bond edge",
                    edge.0
                )))
            }
        }
        let (tail, head) = bond_path_orientation(&d, edge);
        if tail == VertexId(orient.tail) && head == VertexId(orient.head) {
            continue;
        }
        if tail == VertexId(orient.head) && head == VertexId(orient.tail) {
            let mut s = Surgeon::new(d);
            s.reverse_bond_strand(edge);
            d = s.finish();
        } else {
            return Err(ParseError::Schema(alloc::format!(
                "bond_orientations: edge {} does not connect vertices {} and {}",
                edge.0,
                orient.tail,
                orient.head
            )));
        }
    }
    Ok(d)
}

/// Anchors every bond-vertex rotation at its bond end. The incident lists
/// are cyclic, so this is a pure normalization.
pub(crate) fn normalize_vertex_rotations(d: &mut BondedDiagram) {
    let kinds: BTreeMap<EdgeId, EdgeKind> = d.edges.iter().map(|(e, data)| (*e, data.kind)).collect();
    for (_, slots) in d.bond_vertices.iter_mut() {
        if let Some(pos) = slots
            .iter()
            .position(|r| kinds.get(&r.edge).copied() == Some(EdgeKind::Bond))
        {
            slots.rotate_left(pos);
        }
    }
}

/// The (tail, head) bond vertices of the bond path through `edge`, following
/// the stored edge directions.
pub(crate) fn bond_path_orientation(d: &BondedDiagram, edge: EdgeId) -> (VertexId, VertexId) {
    let endpoints = d.endpoints();
    let walk = |start_out: bool| -> VertexId {
        // Walk in the direction of (or against) the edge until a vertex.
        let mut e = edge;
        let mut going_with = start_out;
        loop {
            let (tail, head) = endpoints[&e];
            let port = if going_with { head } else { tail }.expect("bond edge has endpoints");
            match port.site {
                Site::Vertex(v) => return v,
                Site::Crossing(c) => {
                    let next_slot = (port.slot + 2) % 4;
                    let r = d.crossings[&c][next_slot as usize];
                    going_with = r.out;
                    e = r.edge;
                }
            }
        }
    };
    let head = walk(true);
    let tail = walk(false);
    (tail, head)
}

pub(crate) fn serialize_diagram(d: &BondedDiagram) -> String {
    let edges = d
        .edges
        .iter()
        .map(|(e, data)| JsonEdge {
            id: e.0,
            kind: match data.kind {
                EdgeKind::Chain => "chain".to_string(),
                EdgeKind::Bond => "bond".to_string(),
            },
            half_twists: data.half_twists,
        })
        .collect();
    let conv = |r: &SlotRef| JsonRef {
        edge: r.edge.0,
        dir: if r.out { "out" } else { "in" }.to_string(),
    };
    let crossings = d
        .crossings
        .iter()
        .map(|(c, slots)| JsonSite {
            id: c.0,
            incident: slots.iter().map(conv).collect(),
        })
        .collect();
    let bond_vertices = d
        .bond_vertices
        .iter()
        .map(|(v, slots)| {
            // Canonical rotation: bond end first.
            let pos = slots
                .iter()
                .position(|r| d.edges[&r.edge].kind == EdgeKind::Bond)
                .unwrap_or(0);
            let mut rotated = *slots;
            rotated.rotate_left(pos);
            JsonSite {
                id: v.0,
                incident: rotated.iter().map(conv).collect(),
            }
        })
        .collect();
    let mut bond_orientations = BTreeMap::new();
    let mut seen: alloc::collections::BTreeSet<EdgeId> = alloc::collections::BTreeSet::new();
    let endpoints = d.endpoints();
    for (e, data) in &d.edges {
        if data.kind != EdgeKind::Bond || seen.contains(e) || !endpoints.contains_key(e) {
            continue;
        }
        // Mark the whole path as seen, keyed by its lowest edge id.
        let (tail, head) = bond_path_orientation(d, *e);
        let path_edges = bond_path_edges(d, *e, &endpoints);
        let key = path_edges.iter().min().copied().unwrap_or(*e);
        seen.extend(path_edges);
        bond_orientations.insert(
            key.0.to_string(),
            JsonOrientation { tail: tail.0, head: head.0 },
        );
    }
    let doc = JsonDiagram {
        edges,
        crossings,
        bond_vertices,
        bond_orientations,
    };
    serde_json::to_string(&doc).expect("serialization cannot fail")
}

fn bond_path_edges(
    d: &BondedDiagram,
    edge: EdgeId,
    endpoints: &BTreeMap<EdgeId, (Option<Port>, Option<Port>)>,
) -> Vec<EdgeId> {
    let mut out = alloc::vec![edge];
    for going_with in [true, false] {
        let mut e = edge;
        let mut dir = going_with;
        loop {
            let (tail, head) = endpoints[&e];
            let port = if dir { head } else { tail }.expect("bond edge has endpoints");
            match port.site {
                Site::Vertex(_) => break,
                Site::Crossing(c) => {
                    let r = d.crossings[&c][((port.slot + 2) % 4) as usize];
                    dir = r.out;
                    e = r.edge;
                    out.push(e);
                }
            }
        }
    }
    out
}
