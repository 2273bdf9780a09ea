//! Reference diagrams and small construction helpers.
//!
//! Rotation data in the builders follows a fixed planar picture, documented
//! per builder; the face-count tests pin planarity of each one.

use super::surgery::Surgeon;
use super::{
    BondedDiagram, CrossingId, EdgeData, EdgeId, EdgeKind, SlotRef, VertexId,
};

fn chain(half_twists: i32) -> EdgeData {
    EdgeData {
        kind: EdgeKind::Chain,
        half_twists,
    }
}

fn bond() -> EdgeData {
    EdgeData {
        kind: EdgeKind::Bond,
        half_twists: 0,
    }
}

/// The 0-crossing unknot: a single free loop.
pub fn unknot() -> BondedDiagram {
    let mut d = BondedDiagram::new();
    d.edges.insert(EdgeId(0), chain(0));
    d
}

/// A free loop carrying framing markers.
pub fn unknot_with_twists(half_twists: i32) -> BondedDiagram {
    let mut d = BondedDiagram::new();
    d.edges.insert(EdgeId(0), chain(half_twists));
    d
}

/// The empty diagram.
pub fn empty() -> BondedDiagram {
    BondedDiagram::new()
}

/// A 1-crossing unknot with a kink of the given handedness.
///
/// Edge 0 is the big arc, edge 1 the small loop. For `positive` the writhe
/// is `+1`.
pub fn kink(positive: bool) -> BondedDiagram {
    let mut d = BondedDiagram::new();
    d.edges.insert(EdgeId(0), chain(0));
    d.edges.insert(EdgeId(1), chain(0));
    let e0 = EdgeId(0);
    let e1 = EdgeId(1);
    let slots = if positive {
        // Under-strand: arrive on 0, leave as the loop at slot 2 (north);
        // loop returns over, entering at slot 3 (west).
        [
            SlotRef::incoming(e0),
            SlotRef::outgoing(e0),
            SlotRef::outgoing(e1),
            SlotRef::incoming(e1),
        ]
    } else {
        [
            SlotRef::incoming(e0),
            SlotRef::incoming(e1),
            SlotRef::outgoing(e1),
            SlotRef::outgoing(e0),
        ]
    };
    d.crossings.insert(CrossingId(0), slots);
    d
}

/// The theta-curve: a circle (east arc 1 down, west arc 2 up) with a bond
/// chord 0 from the top vertex 0 to the bottom vertex 1, drawn inside.
pub fn theta() -> BondedDiagram {
    let mut d = BondedDiagram::new();
    d.edges.insert(EdgeId(0), bond());
    d.edges.insert(EdgeId(1), chain(0));
    d.edges.insert(EdgeId(2), chain(0));
    let (b, e, w) = (EdgeId(0), EdgeId(1), EdgeId(2));
    // Top vertex: bond points south into the disk; CCW from it: east, west.
    d.bond_vertices.insert(
        VertexId(0),
        [SlotRef::outgoing(b), SlotRef::outgoing(e), SlotRef::incoming(w)],
    );
    // Bottom vertex: bond points north; CCW from it: west, east.
    d.bond_vertices.insert(
        VertexId(1),
        [SlotRef::incoming(b), SlotRef::outgoing(w), SlotRef::incoming(e)],
    );
    d
}

/// The handcuff link: two circles (loops 1 and 2) joined by bond 0.
pub fn handcuff() -> BondedDiagram {
    let mut d = BondedDiagram::new();
    d.edges.insert(EdgeId(0), bond());
    d.edges.insert(EdgeId(1), chain(0));
    d.edges.insert(EdgeId(2), chain(0));
    let (b, l, r) = (EdgeId(0), EdgeId(1), EdgeId(2));
    // Left vertex: bond points east toward the partner; CCW: north, south.
    d.bond_vertices.insert(
        VertexId(0),
        [SlotRef::outgoing(b), SlotRef::outgoing(l), SlotRef::incoming(l)],
    );
    // Right vertex: bond points west; CCW: south, north.
    d.bond_vertices.insert(
        VertexId(1),
        [SlotRef::incoming(b), SlotRef::outgoing(r), SlotRef::incoming(r)],
    );
    d
}

/// Two circles joined by two parallel bonds (a two-rung ladder).
///
/// Left circle through vertices 0 (top) and 1 (bottom) via arcs 2
/// (east side, short) and 3 (around the west); right circle through 2, 3
/// via arcs 4, 5; bonds 0 (top rung) and 1 (bottom rung).
pub fn double_bond_circles() -> BondedDiagram {
    let mut d = BondedDiagram::new();
    d.edges.insert(EdgeId(0), bond());
    d.edges.insert(EdgeId(1), bond());
    for e in 2..6 {
        d.edges.insert(EdgeId(e), chain(0));
    }
    let (b0, b1) = (EdgeId(0), EdgeId(1));
    let (a0, a1, c0, c1) = (EdgeId(2), EdgeId(3), EdgeId(4), EdgeId(5));
    // Left circle: a0 runs from vertex 0 down to vertex 1 along the inner
    // (east) side, a1 returns around the west.
    d.bond_vertices.insert(
        VertexId(0),
        [SlotRef::outgoing(b0), SlotRef::incoming(a1), SlotRef::outgoing(a0)],
    );
    d.bond_vertices.insert(
        VertexId(1),
        [SlotRef::outgoing(b1), SlotRef::incoming(a0), SlotRef::outgoing(a1)],
    );
    // Right circle: c0 runs from vertex 2 down to vertex 3 along its inner
    // (west) side, c1 returns around the east.
    d.bond_vertices.insert(
        VertexId(2),
        [SlotRef::incoming(b0), SlotRef::outgoing(c0), SlotRef::incoming(c1)],
    );
    d.bond_vertices.insert(
        VertexId(3),
        [SlotRef::incoming(b1), SlotRef::outgoing(c1), SlotRef::incoming(c0)],
    );
    d
}

/// The standard positive trefoil: three crossings of sign `+1`, writhe `+3`.
pub fn trefoil() -> BondedDiagram {
    let mut d = BondedDiagram::new();
    for e in 0..6 {
        d.edges.insert(EdgeId(e), chain(0));
    }
    let e = |i: u32| EdgeId(i);
    // Strand order: e0 under c0, e1 over c1, e2 under c2, e3 over c0,
    // e4 under c1, e5 over c2, closing back to e0.
    d.crossings.insert(
        CrossingId(0),
        [
            SlotRef::incoming(e(0)),
            SlotRef::outgoing(e(4)),
            SlotRef::outgoing(e(1)),
            SlotRef::incoming(e(3)),
        ],
    );
    d.crossings.insert(
        CrossingId(1),
        [
            SlotRef::incoming(e(4)),
            SlotRef::outgoing(e(2)),
            SlotRef::outgoing(e(5)),
            SlotRef::incoming(e(1)),
        ],
    );
    d.crossings.insert(
        CrossingId(2),
        [
            SlotRef::incoming(e(2)),
            SlotRef::outgoing(e(0)),
            SlotRef::outgoing(e(3)),
            SlotRef::incoming(e(5)),
        ],
    );
    d
}

/// The Hopf link with two positive crossings.
pub fn hopf() -> BondedDiagram {
    let mut d = BondedDiagram::new();
    for e in 0..4 {
        d.edges.insert(EdgeId(e), chain(0));
    }
    let e = |i: u32| EdgeId(i);
    // Component A (edges 0, 1) goes under at crossing 0 and over at
    // crossing 1; component B (edges 2, 3) the other way around.
    d.crossings.insert(
        CrossingId(0),
        [
            SlotRef::incoming(e(0)),
            SlotRef::outgoing(e(3)),
            SlotRef::outgoing(e(1)),
            SlotRef::incoming(e(2)),
        ],
    );
    d.crossings.insert(
        CrossingId(1),
        [
            SlotRef::incoming(e(3)),
            SlotRef::outgoing(e(0)),
            SlotRef::outgoing(e(2)),
            SlotRef::incoming(e(1)),
        ],
    );
    d
}

/// Splices a theta summand onto the chain edge `at`: the strand gains two
/// bond vertices joined by a bond with a parallel arc, i.e. the connected
/// sum with a theta-curve at that point.
pub fn add_theta_summand(d: &BondedDiagram, at: EdgeId) -> BondedDiagram {
    assert_eq!(d.edges[&at].kind, EdgeKind::Chain, "summand site must be a chain edge");
    let mut s = Surgeon::new(d.clone());
    let free = !d.endpoints().contains_key(&at);
    if free {
        s.cut_loop(at);
    }
    let tail_part = at;
    let head_part = s.split_edge(at);
    let b = s.add_edge(EdgeKind::Bond, 0);
    let m = s.add_edge(EdgeKind::Chain, 0);
    // Through-strand runs west to east; the bond hangs south of it with the
    // parallel arc m between the vertices, bond drawn south of m.
    s.add_bond_vertex([
        SlotRef::outgoing(b),
        SlotRef::outgoing(m),
        SlotRef::incoming(tail_part),
    ]);
    s.add_bond_vertex([
        SlotRef::incoming(b),
        SlotRef::outgoing(head_part),
        SlotRef::incoming(m),
    ]);
    s.finish()
}

/// Splices a handcuff summand onto the chain edge `at`: the strand gains a
/// bond vertex whose bond leads to a separate loop, i.e. the connected sum
/// with a handcuff link.
pub fn add_handcuff_summand(d: &BondedDiagram, at: EdgeId) -> BondedDiagram {
    assert_eq!(d.edges[&at].kind, EdgeKind::Chain, "summand site must be a chain edge");
    let mut s = Surgeon::new(d.clone());
    let free = !d.endpoints().contains_key(&at);
    if free {
        s.cut_loop(at);
    }
    let tail_part = at;
    let head_part = s.split_edge(at);
    let b = s.add_edge(EdgeKind::Bond, 0);
    let loop_edge = s.add_edge(EdgeKind::Chain, 0);
    s.add_bond_vertex([
        SlotRef::outgoing(b),
        SlotRef::outgoing(head_part),
        SlotRef::incoming(tail_part),
    ]);
    s.add_bond_vertex([
        SlotRef::incoming(b),
        SlotRef::outgoing(loop_edge),
        SlotRef::incoming(loop_edge),
    ]);
    s.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::faces::is_planar;

    #[test]
    fn builders_validate() {
        for (name, d) in [
            ("unknot", unknot()),
            ("kink+", kink(true)),
            ("kink-", kink(false)),
            ("theta", theta()),
            ("handcuff", handcuff()),
            ("double_bond", double_bond_circles()),
            ("trefoil", trefoil()),
            ("hopf", hopf()),
        ] {
            let v = d.validate();
            assert!(v.is_empty(), "{name}: {v:?}");
            assert!(is_planar(&d), "{name} not planar under its rotations");
        }
    }

    #[test]
    fn builders_writhe() {
        assert_eq!(unknot().writhe(), 0);
        assert_eq!(kink(true).writhe(), 1);
        assert_eq!(kink(false).writhe(), -1);
        assert_eq!(trefoil().writhe(), 3);
        assert_eq!(hopf().writhe(), 2);
        assert_eq!(theta().writhe(), 0);
    }

    #[test]
    fn summand_builders_validate() {
        let host = theta();
        let t = add_theta_summand(&host, EdgeId(1));
        assert!(t.validate().is_empty(), "{:?}", t.validate());
        assert_eq!(t.bond_count(), 2);
        assert!(is_planar(&t));
        let h = add_handcuff_summand(&host, EdgeId(2));
        assert!(h.validate().is_empty(), "{:?}", h.validate());
        assert_eq!(h.bond_count(), 2);
        assert!(is_planar(&h));
        // Splicing onto a free loop reproduces the plain generators.
        let t0 = add_theta_summand(&unknot(), EdgeId(0));
        assert!(t0.validate().is_empty());
        assert_eq!(t0.canonical_key(), theta().canonical_key());
        let h0 = add_handcuff_summand(&unknot(), EdgeId(0));
        assert!(h0.validate().is_empty());
        assert_eq!(h0.canonical_key(), handcuff().canonical_key());
    }

    #[test]
    fn components_and_union() {
        let both = theta().disjoint_union(&handcuff());
        assert!(both.validate().is_empty());
        let parts = both.split_components();
        assert_eq!(parts.len(), 2);
        assert_eq!(empty().split_components().len(), 0);
        let one = trefoil().split_components();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0], trefoil());
        // Union with the empty diagram is the identity.
        assert_eq!(theta().disjoint_union(&empty()), theta());
        // Writhe is additive over disjoint union.
        let u = trefoil().disjoint_union(&kink(false));
        assert_eq!(u.writhe(), 2);
    }
}
