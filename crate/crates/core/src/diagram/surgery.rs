//! Low-level diagram surgery.
//!
//! All rewrites (crossing smoothing, bond removal, Reidemeister moves) are
//! expressed through a [`Surgeon`]: vertices are deleted and their loose
//! edge ends are tied together through transient 2-valent connectors, which
//! are dissolved when the surgery finishes. Connectors sidestep the
//! bookkeeping hazards of splicing edges while other splices are pending,
//! and give free loops temporary ports so that moves can attach to them.
//!
//! Directions: edges stay consistently directed. When a splice meets two
//! heads (or two tails) the strand on one side is reversed first; reversing
//! an under-strand rotates the affected crossings' incident lists by two so
//! that slot 0 keeps holding the incoming under-strand.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{BondedDiagram, CrossingId, EdgeData, EdgeId, EdgeKind, SlotRef, VertexId};

/// Transient connector id.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub(crate) struct ConnId(u32);

/// Where a slot reference lives during surgery.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Holder {
    Crossing(CrossingId, u8),
    Vertex(VertexId, u8),
    Conn(ConnId, u8),
}

pub(crate) struct Surgeon {
    pub d: BondedDiagram,
    conns: BTreeMap<ConnId, [SlotRef; 2]>,
    next_conn: u32,
}

impl Surgeon {
    pub fn new(d: BondedDiagram) -> Self {
        Surgeon {
            d,
            conns: BTreeMap::new(),
            next_conn: 0,
        }
    }

    /// Ties two loose edge ends together. The ends must currently be
    /// unreferenced (their former holder already deleted).
    pub fn connect(&mut self, a: SlotRef, b: SlotRef) {
        let id = ConnId(self.next_conn);
        self.next_conn += 1;
        self.conns.insert(id, [a, b]);
    }

    /// Gives a free loop a transient pair of ports so surgery can attach to
    /// it; dissolving restores the loop if nothing else intervened.
    pub fn cut_loop(&mut self, e: EdgeId) {
        self.connect(SlotRef::incoming(e), SlotRef::outgoing(e));
    }

    /// Deletes a crossing and reconnects its four ends pairwise:
    /// `pairs` lists slot indices into the crossing's incident list.
    pub fn remove_crossing(&mut self, c: CrossingId, pairs: [(u8, u8); 2]) {
        let slots = self.d.crossings.remove(&c).expect("crossing exists");
        for (i, j) in pairs {
            self.connect(slots[i as usize], slots[j as usize]);
        }
    }

    /// Deletes a crossing without reconnecting anything; the caller owns
    /// the four loose ends.
    pub fn remove_crossing_keep_ends(&mut self, c: CrossingId) {
        self.d.crossings.remove(&c).expect("crossing exists");
    }

    /// Deletes a bond vertex, returning its slots for the caller to
    /// reconnect.
    pub fn remove_bond_vertex(&mut self, v: VertexId) -> [SlotRef; 3] {
        self.d.bond_vertices.remove(&v).expect("vertex exists")
    }

    /// Deletes an edge outright (both its ends must be loose).
    pub fn delete_edge(&mut self, e: EdgeId) {
        self.d.edges.remove(&e);
    }

    /// Splits edge `e` at an interior point: `e` keeps its tail and all half
    /// twists; a fresh edge takes over the head. Returns the new edge. The
    /// cut leaves `e`'s head end and the new edge's tail end loose; the
    /// caller must immediately place them (e.g. into a new crossing).
    pub fn split_edge(&mut self, e: EdgeId) -> EdgeId {
        let data = self.d.edges[&e];
        let new_id = self.d.next_edge_id();
        self.d.edges.insert(
            new_id,
            EdgeData {
                kind: data.kind,
                half_twists: 0,
            },
        );
        // Transfer the head reference (wherever it is) to the new edge.
        if let Some(holder) = self.find_ref(e, false) {
            self.set_ref(holder, SlotRef::incoming(new_id));
        }
        new_id
    }

    /// Splits the edge referenced at `holder` into a piece that keeps the
    /// attachment there (the near piece) and the remainder (far). Returns
    /// the two loose ends created by the cut as slot references:
    /// `(near_loose, far_loose)`. With `r` the reference at the holder, the
    /// near piece's loose end is its other end (`!r.out`), and the far
    /// piece's loose end faces the cut with the same flag as `r`.
    pub fn split_at(&mut self, h: Holder) -> (SlotRef, SlotRef) {
        let r = self.ref_at(h);
        let new_edge = self.split_edge(r.edge);
        let (near, far) = if r.out {
            // Tail stays with the original edge, which is at the holder.
            (r.edge, new_edge)
        } else {
            // The new edge takes over the head, which is at the holder.
            (new_edge, r.edge)
        };
        (
            SlotRef { edge: near, out: !r.out },
            SlotRef { edge: far, out: r.out },
        )
    }

    pub fn ref_at(&self, h: Holder) -> SlotRef {
        match h {
            Holder::Crossing(c, i) => self.d.crossings[&c][i as usize],
            Holder::Vertex(v, i) => self.d.bond_vertices[&v][i as usize],
            Holder::Conn(k, i) => self.conns[&k][i as usize],
        }
    }

    /// Inserts a new crossing with the given slots (CCW, slot 0 = incoming
    /// under-strand) and returns its id.
    pub fn add_crossing(&mut self, slots: [SlotRef; 4]) -> CrossingId {
        debug_assert!(!slots[0].out && slots[2].out, "under anchor convention");
        let id = self.d.next_crossing_id();
        self.d.crossings.insert(id, slots);
        id
    }

    /// Inserts a new bond vertex with the given CCW slots.
    pub fn add_bond_vertex(&mut self, slots: [SlotRef; 3]) -> VertexId {
        let id = self.d.next_vertex_id();
        self.d.bond_vertices.insert(id, slots);
        id
    }

    /// Adds a fresh edge and returns its id.
    pub fn add_edge(&mut self, kind: EdgeKind, half_twists: i32) -> EdgeId {
        let id = self.d.next_edge_id();
        self.d.edges.insert(id, EdgeData { kind, half_twists });
        id
    }

    /// Finds the holder of the given end of `e` (`out == true` for the tail).
    fn find_ref(&self, e: EdgeId, out: bool) -> Option<Holder> {
        for (c, slots) in &self.d.crossings {
            for (i, r) in slots.iter().enumerate() {
                if r.edge == e && r.out == out {
                    return Some(Holder::Crossing(*c, i as u8));
                }
            }
        }
        for (v, slots) in &self.d.bond_vertices {
            for (i, r) in slots.iter().enumerate() {
                if r.edge == e && r.out == out {
                    return Some(Holder::Vertex(*v, i as u8));
                }
            }
        }
        for (k, slots) in &self.conns {
            for (i, r) in slots.iter().enumerate() {
                if r.edge == e && r.out == out {
                    return Some(Holder::Conn(*k, i as u8));
                }
            }
        }
        None
    }

    fn set_ref(&mut self, h: Holder, r: SlotRef) {
        match h {
            Holder::Crossing(c, i) => self.d.crossings.get_mut(&c).unwrap()[i as usize] = r,
            Holder::Vertex(v, i) => self.d.bond_vertices.get_mut(&v).unwrap()[i as usize] = r,
            Holder::Conn(k, i) => self.conns.get_mut(&k).unwrap()[i as usize] = r,
        }
    }

    /// Reverses the direction of every edge on the strand containing `e`.
    /// The strand is followed through crossings (slot `k` to `k+2`) and
    /// through the two chain slots of bond vertices; it stops at bond-vertex
    /// bond slots, at loose ends, and at pending connectors (each connector
    /// resolves directions itself when dissolved). Crossings whose
    /// under-strand flips are rotated by two slots to restore the slot-0
    /// anchor.
    fn reverse_strand(&mut self, e: EdgeId) {
        let mut edges: Vec<EdgeId> = Vec::new();
        let mut frontier: Vec<EdgeId> = alloc::vec![e];
        while let Some(cur) = frontier.pop() {
            if edges.contains(&cur) {
                continue;
            }
            edges.push(cur);
            for out in [true, false] {
                if let Some(holder) = self.find_ref(cur, out) {
                    if let Some(next) = self.strand_continuation(holder) {
                        if !edges.contains(&next) {
                            frontier.push(next);
                        }
                    }
                }
            }
        }
        // Flip all refs of the collected edges.
        let flip = |slots: &mut [SlotRef], edges: &Vec<EdgeId>| {
            for r in slots.iter_mut() {
                if edges.contains(&r.edge) {
                    r.out = !r.out;
                }
            }
        };
        let mut rotate: Vec<CrossingId> = Vec::new();
        for (c, slots) in self.d.crossings.iter_mut() {
            flip(slots.as_mut_slice(), &edges);
            if slots[0].out {
                rotate.push(*c);
            }
        }
        for (_, slots) in self.d.bond_vertices.iter_mut() {
            flip(slots.as_mut_slice(), &edges);
        }
        for (_, slots) in self.conns.iter_mut() {
            flip(slots.as_mut_slice(), &edges);
        }
        for c in rotate {
            let s = self.d.crossings.get_mut(&c).unwrap();
            *s = [s[2], s[3], s[0], s[1]];
        }
    }

    /// The edge the strand continues into past the given holder slot, if any.
    fn strand_continuation(&self, h: Holder) -> Option<EdgeId> {
        match h {
            Holder::Crossing(c, i) => {
                let slots = &self.d.crossings[&c];
                Some(slots[((i + 2) % 4) as usize].edge)
            }
            Holder::Vertex(v, i) => {
                let slots = &self.d.bond_vertices[&v];
                let arrived_kind = self.d.edges[&slots[i as usize].edge].kind;
                if arrived_kind == EdgeKind::Bond {
                    return None;
                }
                // Continue through the other chain slot.
                for (j, r) in slots.iter().enumerate() {
                    if j != i as usize && self.d.edges[&r.edge].kind == EdgeKind::Chain {
                        return Some(r.edge);
                    }
                }
                None
            }
            Holder::Conn(_, _) => None,
        }
    }

    /// Reverses the whole bond strand through `e` (orientation override).
    pub fn reverse_bond_strand(&mut self, e: EdgeId) {
        self.reverse_strand(e);
    }

    /// Dissolves all connectors, splicing their edge pairs, and returns the
    /// finished diagram with bond-vertex rotations re-anchored at their bond
    /// ends.
    pub fn finish(mut self) -> BondedDiagram {
        while let Some((&id, _)) = self.conns.iter().next() {
            let [a, b] = self.conns.remove(&id).unwrap();
            self.splice(a, b);
        }
        super::json::normalize_vertex_rotations(&mut self.d);
        self.d
    }

    /// Splices the two edge ends of a dissolved connector into one strand.
    fn splice(&mut self, a: SlotRef, b: SlotRef) {
        if a.edge == b.edge {
            // Both ends of one edge met: it closes into a free loop (its
            // references are gone along with the connector).
            debug_assert!(a.out != b.out);
            return;
        }
        let (mut a, mut b) = (a, b);
        if a.out == b.out {
            // Two heads or two tails meet; reverse the strand on one side.
            self.reverse_strand(b.edge);
            b.out = !b.out;
            debug_assert!(
                a.out != b.out,
                "same-strand splice must arrive consistently directed"
            );
        }
        // Normalize: a is the arriving head, b the departing tail, so the
        // merged strand runs a.edge -> b.edge and keeps a.edge's id.
        if a.out {
            core::mem::swap(&mut a, &mut b);
        }
        let (keep, gone) = (a.edge, b.edge);
        let keep_data = self.d.edges[&keep];
        let gone_data = self.d.edges[&gone];
        let merged = EdgeData {
            kind: if keep_data.kind == EdgeKind::Bond && gone_data.kind == EdgeKind::Bond {
                EdgeKind::Bond
            } else {
                EdgeKind::Chain
            },
            half_twists: keep_data.half_twists + gone_data.half_twists,
        };
        // The far head of `gone` becomes the head of `keep`.
        if let Some(h) = self.find_ref(gone, false) {
            self.set_ref(h, SlotRef::incoming(keep));
        }
        self.d.edges.remove(&gone);
        self.d.edges.insert(keep, merged);
    }
}
