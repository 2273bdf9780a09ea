//! Faces of the rotation system.
//!
//! The counterclockwise incident lists define an embedding of the diagram
//! graph into an oriented surface; tracing dart orbits yields its faces.
//! Per connected component the diagram is planar iff `V - E + F = 2`. The
//! main validator deliberately skips this check; the move rewriters use the
//! face structure to pick sites that keep diagrams planar, and the test
//! suites use [`face_count`] as a sanity check after surgery.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::{BondedDiagram, Port, Site};

/// A dart: an edge traversed in a direction (`true` = tail to head).
pub(crate) type Dart = (super::EdgeId, bool);

/// The port a dart arrives at.
fn target(
    d: Dart,
    endpoints: &BTreeMap<super::EdgeId, (Option<Port>, Option<Port>)>,
) -> Option<Port> {
    let (tail, head) = endpoints.get(&d.0)?;
    if d.1 {
        *head
    } else {
        *tail
    }
}

/// The dart that continues the face after `d`: arrive at a port, turn to the
/// next port clockwise (one step back in the CCW rotation), and leave along
/// that edge.
pub(crate) fn face_next(
    diagram: &BondedDiagram,
    d: Dart,
    endpoints: &BTreeMap<super::EdgeId, (Option<Port>, Option<Port>)>,
) -> Option<Dart> {
    let arrive = target(d, endpoints)?;
    let deg = diagram.degree(arrive.site);
    let next_slot = (arrive.slot + deg - 1) % deg;
    let r = diagram.slots(arrive.site)[next_slot as usize];
    Some((r.edge, r.out))
}

/// Enumerates the faces of each connected component as orbits of darts.
/// Free loops are skipped (each free loop bounds two faces of its own
/// trivial component).
pub(crate) fn faces(diagram: &BondedDiagram) -> Vec<Vec<Dart>> {
    let endpoints = diagram.endpoints();
    let mut seen: BTreeSet<Dart> = BTreeSet::new();
    let mut out = Vec::new();
    let mut darts: Vec<Dart> = Vec::new();
    for (e, (tail, head)) in &endpoints {
        if tail.is_some() && head.is_some() {
            darts.push((*e, true));
            darts.push((*e, false));
        }
    }
    for d0 in darts {
        if seen.contains(&d0) {
            continue;
        }
        let mut face = Vec::new();
        let mut d = d0;
        loop {
            seen.insert(d);
            face.push(d);
            d = match face_next(diagram, d, &endpoints) {
                Some(n) => n,
                None => break,
            };
            if d == d0 {
                break;
            }
        }
        out.push(face);
    }
    out
}

/// Number of faces of the embedded graph, ignoring free loops.
pub fn face_count(diagram: &BondedDiagram) -> usize {
    faces(diagram).len()
}

/// `true` when every connected component (ignoring free loops) satisfies the
/// sphere Euler relation `V - E + F = 2` under its rotation system.
pub fn is_planar(diagram: &BondedDiagram) -> bool {
    for part in diagram.split_components() {
        let v = part.crossings.len() + part.bond_vertices.len();
        if v == 0 {
            continue;
        }
        let e = part
            .edges
            .len();
        let f = face_count(&part);
        if (v + f) as i64 - e as i64 != 2 {
            return false;
        }
    }
    true
}
