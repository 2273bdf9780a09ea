//! Combinatorial model of bonded link diagrams.
//!
//! A diagram is a 4-and-3-valent plane graph given by rotation data:
//!
//! * `edges` — directed arcs with a kind (`chain` or `bond`) and an integer
//!   half-twist marker count (framing relative to the blackboard);
//! * `crossings` — 4-valent vertices; the incident list is stored in
//!   counterclockwise rotation starting at the incoming under-strand, so
//!   slots 0/2 carry the under-strand and 1/3 the over-strand;
//! * `bond_vertices` — trivalent vertices where a bond meets the chain, with
//!   their three incident references in counterclockwise rotation.
//!
//! Every edge reference appears exactly twice (once incoming, once outgoing);
//! an edge with no references is a free loop. Bonds may pass through
//! crossings, in which case they are subdivided into several bond-kind
//! pieces; the maximal bond path always terminates at two distinct bond
//! vertices. Diagrams are immutable values: every rewriter returns a new
//! diagram.

mod builders;
mod canonical;
pub(crate) mod faces;
mod json;
pub(crate) mod surgery;

pub use builders::*;
pub use faces::{face_count, is_planar};
pub use json::ParseError;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Identifier of an edge (arc) of the diagram.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeId(pub u32);

/// Identifier of a crossing.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CrossingId(pub u32);

/// Identifier of a trivalent bond vertex.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub u32);

/// Whether an arc belongs to the closed chains or to a bond segment.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum EdgeKind {
    Chain,
    Bond,
}

/// Per-edge payload.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EdgeData {
    pub kind: EdgeKind,
    /// Framing markers: signed half twists relative to blackboard framing.
    pub half_twists: i32,
}

/// A signed reference to an edge from a vertex slot: `out` means the edge
/// leaves the vertex here (this is its tail), otherwise it arrives (head).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SlotRef {
    pub edge: EdgeId,
    pub out: bool,
}

impl SlotRef {
    pub fn outgoing(edge: EdgeId) -> Self {
        SlotRef { edge, out: true }
    }
    pub fn incoming(edge: EdgeId) -> Self {
        SlotRef { edge, out: false }
    }
}

/// A vertex of the diagram graph.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Site {
    Crossing(CrossingId),
    Vertex(VertexId),
}

/// One attachment point: a site together with a slot index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Port {
    pub site: Site,
    pub slot: u8,
}

/// A violation reported by [`BondedDiagram::validate`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    pub element: String,
    pub rule: &'static str,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.element, self.rule)
    }
}

/// A combinatorial bonded link diagram. See the module docs for the data
/// conventions.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BondedDiagram {
    pub(crate) edges: BTreeMap<EdgeId, EdgeData>,
    pub(crate) crossings: BTreeMap<CrossingId, [SlotRef; 4]>,
    pub(crate) bond_vertices: BTreeMap<VertexId, [SlotRef; 3]>,
}

impl BondedDiagram {
    pub fn new() -> Self {
        BondedDiagram::default()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty() && self.crossings.is_empty() && self.bond_vertices.is_empty()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn crossing_ids(&self) -> impl Iterator<Item = CrossingId> + '_ {
        self.crossings.keys().copied()
    }

    pub fn bond_vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.bond_vertices.keys().copied()
    }

    pub fn edge(&self, e: EdgeId) -> &EdgeData {
        &self.edges[&e]
    }

    pub fn crossing(&self, c: CrossingId) -> &[SlotRef; 4] {
        &self.crossings[&c]
    }

    pub fn bond_vertex(&self, v: VertexId) -> &[SlotRef; 3] {
        &self.bond_vertices[&v]
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Number of bonds (maximal bond paths); each bond has two endpoints.
    pub fn bond_count(&self) -> usize {
        self.bond_vertices.len() / 2
    }

    pub fn has_bonds(&self) -> bool {
        !self.bond_vertices.is_empty()
    }

    pub(crate) fn slots(&self, site: Site) -> Vec<SlotRef> {
        match site {
            Site::Crossing(c) => self.crossings[&c].to_vec(),
            Site::Vertex(v) => self.bond_vertices[&v].to_vec(),
        }
    }

    pub(crate) fn degree(&self, site: Site) -> u8 {
        match site {
            Site::Crossing(_) => 4,
            Site::Vertex(_) => 3,
        }
    }

    /// Maps every referenced edge end to its port: `(tail, head)` per edge.
    /// Edges absent from the map are free loops.
    pub(crate) fn endpoints(&self) -> BTreeMap<EdgeId, (Option<Port>, Option<Port>)> {
        let mut out: BTreeMap<EdgeId, (Option<Port>, Option<Port>)> = BTreeMap::new();
        let mut record = |site: Site, slot: u8, r: &SlotRef| {
            let entry = out.entry(r.edge).or_insert((None, None));
            let p = Port { site, slot };
            if r.out {
                entry.0 = Some(p);
            } else {
                entry.1 = Some(p);
            }
        };
        for (c, slots) in &self.crossings {
            for (i, r) in slots.iter().enumerate() {
                record(Site::Crossing(*c), i as u8, r);
            }
        }
        for (v, slots) in &self.bond_vertices {
            for (i, r) in slots.iter().enumerate() {
                record(Site::Vertex(*v), i as u8, r);
            }
        }
        out
    }

    pub(crate) fn set_half_twists(&mut self, e: EdgeId, ht: i32) {
        self.edges.get_mut(&e).expect("edge exists").half_twists = ht;
    }

    /// Removes an unreferenced (free loop) edge.
    pub(crate) fn remove_edge(&mut self, e: EdgeId) {
        self.edges.remove(&e);
    }

    pub(crate) fn next_edge_id(&self) -> EdgeId {
        EdgeId(self.edges.keys().next_back().map_or(0, |e| e.0 + 1))
    }

    pub(crate) fn next_crossing_id(&self) -> CrossingId {
        CrossingId(self.crossings.keys().next_back().map_or(0, |c| c.0 + 1))
    }

    pub(crate) fn next_vertex_id(&self) -> VertexId {
        VertexId(self.bond_vertices.keys().next_back().map_or(0, |v| v.0 + 1))
    }

    /// Checks every structural invariant and returns the list of violations
    /// (empty when the diagram is valid). Planarity of the rotation system is
    /// deliberately not checked here.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut ins: BTreeMap<EdgeId, u32> = BTreeMap::new();
        let mut outs: BTreeMap<EdgeId, u32> = BTreeMap::new();
        let mut refs_ok = true;
        {
            let mut tally = |r: &SlotRef, element: String| {
                if !self.edges.contains_key(&r.edge) {
                    out.push(Violation {
                        element,
                        rule: "reference to undefined edge",
                    });
                    refs_ok = false;
                    return;
                }
                *if r.out {
                    outs.entry(r.edge).or_insert(0)
                } else {
                    ins.entry(r.edge).or_insert(0)
                } += 1;
            };
            for (c, slots) in &self.crossings {
                for r in slots {
                    tally(r, alloc::format!("crossing {}", c.0));
                }
            }
            for (v, slots) in &self.bond_vertices {
                for r in slots {
                    tally(r, alloc::format!("bond vertex {}", v.0));
                }
            }
        }
        for (e, data) in &self.edges {
            let i = ins.get(e).copied().unwrap_or(0);
            let o = outs.get(e).copied().unwrap_or(0);
            if !((i == 1 && o == 1) || (i == 0 && o == 0)) {
                out.push(Violation {
                    element: alloc::format!("edge {}", e.0),
                    rule: "edge must be referenced exactly once incoming and once outgoing, or not at all",
                });
            }
            if i == 0 && o == 0 && data.kind == EdgeKind::Bond {
                out.push(Violation {
                    element: alloc::format!("edge {}", e.0),
                    rule: "free loops must be chain edges",
                });
            }
            if data.kind == EdgeKind::Bond && data.half_twists != 0 {
                out.push(Violation {
                    element: alloc::format!("edge {}", e.0),
                    rule: "bonds carry blackboard framing (half_twists must be 0)",
                });
            }
        }
        if !refs_ok {
            return out;
        }

        for (c, slots) in &self.crossings {
            let el = alloc::format!("crossing {}", c.0);
            if slots[0].out || !slots[2].out {
                out.push(Violation {
                    element: el.clone(),
                    rule: "under-strand must enter at slot 0 and leave at slot 2",
                });
            }
            if slots[1].out == slots[3].out {
                out.push(Violation {
                    element: el.clone(),
                    rule: "over-strand must enter at one of slots 1/3 and leave at the other",
                });
            }
            let kind = |r: &SlotRef| self.edges[&r.edge].kind;
            if kind(&slots[0]) != kind(&slots[2]) {
                out.push(Violation {
                    element: el.clone(),
                    rule: "under-strand kind must match across the crossing",
                });
            }
            if kind(&slots[1]) != kind(&slots[3]) {
                out.push(Violation {
                    element: el,
                    rule: "over-strand kind must match across the crossing",
                });
            }
        }

        for (v, slots) in &self.bond_vertices {
            let el = alloc::format!("bond vertex {}", v.0);
            let bonds: Vec<_> = slots
                .iter()
                .filter(|r| self.edges[&r.edge].kind == EdgeKind::Bond)
                .collect();
            if bonds.len() != 1 {
                out.push(Violation {
                    element: el.clone(),
                    rule: "bond vertex must have exactly one bond end and two chain ends",
                });
                continue;
            }
            let chains: Vec<_> = slots
                .iter()
                .filter(|r| self.edges[&r.edge].kind == EdgeKind::Chain)
                .collect();
            if chains.len() == 2 && chains[0].out == chains[1].out && chains[0].edge != chains[1].edge {
                out.push(Violation {
                    element: el,
                    rule: "chain strand must pass through the bond vertex consistently directed",
                });
            }
        }

        // Bond paths: walk each bond strand from a bond-vertex bond slot
        // straight through crossings; it must end at a different bond vertex.
        if out.is_empty() {
            let endpoints = self.endpoints();
            let mut seen: BTreeSet<EdgeId> = BTreeSet::new();
            for (v, slots) in &self.bond_vertices {
                let bond_slot = slots
                    .iter()
                    .position(|r| self.edges[&r.edge].kind == EdgeKind::Bond)
                    .expect("validated above");
                let start = slots[bond_slot as usize];
                if seen.contains(&start.edge) {
                    continue;
                }
                match self.trace_strand(Port {
                    site: Site::Vertex(*v),
                    slot: bond_slot as u8,
                }, &endpoints) {
                    Some((edges, end)) => {
                        seen.extend(edges.iter().copied());
                        let bad_kind = edges
                            .iter()
                            .any(|e| self.edges[e].kind != EdgeKind::Bond);
                        if bad_kind {
                            out.push(Violation {
                                element: alloc::format!("bond vertex {}", v.0),
                                rule: "bond path must consist of bond-kind edges",
                            });
                        }
                        match end.site {
                            Site::Vertex(w) if w != *v => {}
                            _ => out.push(Violation {
                                element: alloc::format!("bond vertex {}", v.0),
                                rule: "bond path must end at a distinct bond vertex",
                            }),
                        }
                    }
                    None => out.push(Violation {
                        element: alloc::format!("bond vertex {}", v.0),
                        rule: "bond path must terminate (no closed bond loops)",
                    }),
                }
            }
            for (e, data) in &self.edges {
                if data.kind == EdgeKind::Bond && endpoints.contains_key(e) && !seen.contains(e) {
                    out.push(Violation {
                        element: alloc::format!("edge {}", e.0),
                        rule: "bond edge not part of any bond path",
                    });
                }
            }
        }
        out
    }

    /// Follows a strand starting from the edge at `start`, passing straight
    /// through crossings (slot `k` to `k+2`) and stopping at any bond-vertex
    /// slot. Returns the edges traversed and the terminal port, or `None`
    /// if the walk closes into a cycle through crossings only.
    pub(crate) fn trace_strand(
        &self,
        start: Port,
        endpoints: &BTreeMap<EdgeId, (Option<Port>, Option<Port>)>,
    ) -> Option<(Vec<EdgeId>, Port)> {
        let start_ref = self.slots(start.site)[start.slot as usize];
        let mut edges = Vec::new();
        let mut edge = start_ref.edge;
        // The far end of the current edge, relative to where we stand.
        let mut from = start;
        loop {
            edges.push(edge);
            let (tail, head) = endpoints[&edge];
            let far = match (tail, head) {
                (Some(t), Some(h)) => {
                    if t == from {
                        h
                    } else {
                        t
                    }
                }
                _ => return None,
            };
            match far.site {
                Site::Vertex(_) => return Some((edges, far)),
                Site::Crossing(c) => {
                    let next_slot = (far.slot + 2) % 4;
                    let next_ref = self.crossings[&c][next_slot as usize];
                    from = Port {
                        site: Site::Crossing(c),
                        slot: next_slot,
                    };
                    edge = next_ref.edge;
                    // A walk longer than the edge count means the strand
                    // closed into a cycle through crossings only.
                    if edges.len() > self.edges.len() {
                        return None;
                    }
                }
            }
        }
    }

    /// The sign of a crossing under the right-hand rule: `+1` when the
    /// over-strand enters at slot 3, `-1` when it enters at slot 1.
    pub fn crossing_sign(&self, c: CrossingId) -> i64 {
        let slots = &self.crossings[&c];
        if !slots[3].out {
            1
        } else {
            -1
        }
    }

    /// Writhe: the sum of crossing signs over crossings of oriented strands.
    ///
    /// Crossings involving bond arcs are excluded: bonds are intrinsically
    /// unoriented, and counting them breaks the invariance of the normalized
    /// value under the vertex-slide moves (a strand sliding past a bond
    /// vertex trades a bond crossing for chain crossings of balanced sign).
    /// The inclusive variant is [`BondedDiagram::writhe_with_bonds`].
    pub fn writhe(&self) -> i64 {
        self.crossings
            .iter()
            .filter(|(_, slots)| {
                slots
                    .iter()
                    .all(|r| self.edges[&r.edge].kind == EdgeKind::Chain)
            })
            .map(|(c, _)| self.crossing_sign(*c))
            .sum()
    }

    /// Writhe over all crossings, bond arcs oriented by their stored
    /// direction (canonically tail = lower bond-vertex id). Exposed for the
    /// orientation-dependence probes; not used for normalization.
    pub fn writhe_with_bonds(&self) -> i64 {
        self.crossings
            .keys()
            .map(|c| self.crossing_sign(*c))
            .sum()
    }

    /// Splits the diagram into connected components of the underlying graph.
    /// Ids are preserved, so the disjoint union of the parts reassembles the
    /// diagram exactly. Every free loop is its own component.
    pub fn split_components(&self) -> Vec<BondedDiagram> {
        let endpoints = self.endpoints();
        // Union-find over sites, seeded by edges.
        let sites: Vec<Site> = self
            .crossings
            .keys()
            .map(|c| Site::Crossing(*c))
            .chain(self.bond_vertices.keys().map(|v| Site::Vertex(*v)))
            .collect();
        let index: BTreeMap<Site, usize> = sites.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut parent: Vec<usize> = (0..sites.len()).collect();
        fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for (_, (tail, head)) in &endpoints {
            if let (Some(t), Some(h)) = (tail, head) {
                let (a, b) = (find(&mut parent, index[&t.site]), find(&mut parent, index[&h.site]));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let mut groups: BTreeMap<usize, BondedDiagram> = BTreeMap::new();
        for site in &sites {
            let root = find(&mut parent, index[site]);
            let part = groups.entry(root).or_default();
            match site {
                Site::Crossing(c) => {
                    part.crossings.insert(*c, self.crossings[c]);
                }
                Site::Vertex(v) => {
                    part.bond_vertices.insert(*v, self.bond_vertices[v]);
                }
            }
        }
        for (e, (tail, _)) in &endpoints {
            if let Some(t) = tail {
                let root = find(&mut parent, index[&t.site]);
                groups.get_mut(&root).unwrap().edges.insert(*e, self.edges[e]);
            }
        }
        let mut out: Vec<BondedDiagram> = groups.into_values().collect();
        // Free loops come last, each alone.
        for (e, data) in &self.edges {
            if !endpoints.contains_key(e) {
                let mut part = BondedDiagram::new();
                part.edges.insert(*e, *data);
                out.push(part);
            }
        }
        out
    }

    /// Disjoint union, relabeling the ids of `other` above this diagram's.
    pub fn disjoint_union(&self, other: &BondedDiagram) -> BondedDiagram {
        let mut out = self.clone();
        let eoff = out.next_edge_id().0;
        let coff = out.next_crossing_id().0;
        let voff = out.next_vertex_id().0;
        let shift = |r: &SlotRef| SlotRef {
            edge: EdgeId(r.edge.0 + eoff),
            out: r.out,
        };
        for (e, data) in &other.edges {
            out.edges.insert(EdgeId(e.0 + eoff), *data);
        }
        for (c, slots) in &other.crossings {
            out.crossings.insert(
                CrossingId(c.0 + coff),
                [shift(&slots[0]), shift(&slots[1]), shift(&slots[2]), shift(&slots[3])],
            );
        }
        for (v, slots) in &other.bond_vertices {
            out.bond_vertices.insert(
                VertexId(v.0 + voff),
                [shift(&slots[0]), shift(&slots[1]), shift(&slots[2])],
            );
        }
        out
    }

    /// Relabels all ids by the given (injective) maps; used by the order
    /// independence tests. Panics if a map entry is missing.
    pub fn relabeled(
        &self,
        edge_map: &BTreeMap<EdgeId, EdgeId>,
        crossing_map: &BTreeMap<CrossingId, CrossingId>,
        vertex_map: &BTreeMap<VertexId, VertexId>,
    ) -> BondedDiagram {
        let shift = |r: &SlotRef| SlotRef {
            edge: edge_map[&r.edge],
            out: r.out,
        };
        let mut out = BondedDiagram::new();
        for (e, data) in &self.edges {
            out.edges.insert(edge_map[e], *data);
        }
        for (c, slots) in &self.crossings {
            out.crossings.insert(
                crossing_map[c],
                [shift(&slots[0]), shift(&slots[1]), shift(&slots[2]), shift(&slots[3])],
            );
        }
        for (v, slots) in &self.bond_vertices {
            out.bond_vertices.insert(
                vertex_map[v],
                [shift(&slots[0]), shift(&slots[1]), shift(&slots[2])],
            );
        }
        out
    }

    /// The canonical memoization key: equal for diagrams that differ only by
    /// id relabeling or strand-direction reversal, distinct otherwise.
    pub fn canonical_key(&self) -> Vec<u8> {
        canonical::canonical_key(self)
    }

    /// Parses the diagram JSON interchange format.
    pub fn parse_json(text: &str) -> Result<BondedDiagram, ParseError> {
        json::parse_diagram(text)
    }

    /// Serializes to canonical (byte-stable) diagram JSON.
    pub fn to_json(&self) -> String {
        json::serialize_diagram(self)
    }
}
