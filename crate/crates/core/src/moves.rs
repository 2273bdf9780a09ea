//! Diagram rewriters: Reidemeister-style moves for bonded diagrams and the
//! seeded random-move driver used by the invariance suites.
//!
//! Each rewrite is derived from a local compass picture; new crossings are
//! assembled from ports listed by angle and rotated so that slot 0 holds the
//! incoming under-strand. Faces of the rotation system (traced with the face
//! on the left of travel) pick sites that keep diagrams planar. Moves never
//! adjust the half-twist bookkeeping: a kink added by `I±` changes the
//! framing, and the evaluation suites assert exactly the `-A^{±3}` factor.

use alloc::string::String;
use alloc::vec::Vec;

use rand_core::{RngCore, SeedableRng};

use crate::diagram::surgery::{Holder, Surgeon};
use crate::diagram::{
    faces, BondedDiagram, CrossingId, EdgeId, EdgeKind, Port, Site, SlotRef, VertexId,
};

/// The move alphabet.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Move {
    /// Add or remove a positive kink.
    IPlus,
    /// Add or remove a negative kink.
    IMinus,
    /// Slide one strand across another (two cancelling crossings).
    II,
    /// Slide a strand across a crossing (triangle move).
    III,
    /// Slide a strand over a bond vertex.
    IV,
    /// Slide a strand under a bond vertex.
    IVPrime,
    /// Twist a vertex: swap its two chain legs with one new crossing.
    /// Changes the framing; only the topological class can survive it.
    V,
    /// Rigid-vertex twist: an opposite-sign clasp of the two chain legs.
    RV,
    /// Slide a bond endpoint past an adjacent crossing.
    BondSlide,
}

impl Move {
    pub fn name(self) -> &'static str {
        match self {
            Move::IPlus => "I+",
            Move::IMinus => "I-",
            Move::II => "II",
            Move::III => "III",
            Move::IV => "IV",
            Move::IVPrime => "IV'",
            Move::V => "V",
            Move::RV => "RV",
            Move::BondSlide => "bond_slide",
        }
    }

    /// Moves that leave the framed value exactly unchanged.
    pub fn framed_invariant_set() -> &'static [Move] {
        &[
            Move::II,
            Move::III,
            Move::IV,
            Move::IVPrime,
            Move::RV,
            Move::BondSlide,
        ]
    }

    /// Moves under which the writhe-normalized value is invariant (the
    /// framed-invariant set plus the kinks, whose `-A^{±3}` factor the
    /// normalization cancels).
    pub fn normalized_invariant_set() -> &'static [Move] {
        &[
            Move::IPlus,
            Move::IMinus,
            Move::II,
            Move::III,
            Move::IV,
            Move::IVPrime,
            Move::RV,
            Move::BondSlide,
        ]
    }
}

/// Where and how to apply a move; produced by [`enumerate_sites`] and
/// consumed by [`apply_move`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MoveSite {
    /// `I±`: insert a kink on this edge.
    AddKink { edge: EdgeId, positive: bool },
    /// `I±` in reverse: remove this kink crossing.
    RemoveKink { crossing: CrossingId },
    /// `II`: push `over` across `under`. The two darts (edge, direction)
    /// must border a common face.
    Push {
        over: EdgeId,
        over_forward: bool,
        under: EdgeId,
        under_forward: bool,
    },
    /// `II` in reverse: cancel the clasp formed by these two crossings (the
    /// under strand runs from `c1` into `c2`).
    Pop { c1: CrossingId, c2: CrossingId },
    /// `III`: slide the strand across the far crossing of the triangle face
    /// bounded by this slider dart.
    Triangle { slider: EdgeId, slider_forward: bool },
    /// `IV`/`IV'`: slide the transversal of `crossing` past `vertex` (the
    /// leg between them must be a single edge).
    SlidePastVertex { crossing: CrossingId, vertex: VertexId },
    /// `V`: twist the vertex, swapping its two chain legs with one crossing.
    VertexTwist { vertex: VertexId, first_leg_over: bool },
    /// `RV`: insert an opposite clasp on the two chain legs of the vertex.
    RigidTwist { vertex: VertexId, first_leg_over: bool },
    /// Bond slide: move the bond endpoint past the crossing adjacent on the
    /// chain leg at CCW slot `leg` (1 or 2).
    BondSlide { vertex: VertexId, leg: u8 },
}

/// A record of one applied move, sufficient to track the expected framed
/// factor of a random walk.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AppliedMove {
    KinkAdded { positive: bool },
    KinkRemoved { positive: bool },
    Other(Move),
}

/// Rewrite error: the site does not match the move's pattern.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MoveError {
    pub message: String,
}

impl core::fmt::Display for MoveError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "move not applicable: {}", self.message)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for MoveError {}

fn err<T>(message: impl Into<String>) -> Result<T, MoveError> {
    Err(MoveError {
        message: message.into(),
    })
}

/// Applies a move at the given site, returning the rewritten diagram.
pub fn apply_move(d: &BondedDiagram, site: &MoveSite) -> Result<BondedDiagram, MoveError> {
    Ok(apply_move_logged(d, site)?.0)
}

/// Applies a move, also reporting what happened for factor bookkeeping.
pub fn apply_move_logged(
    d: &BondedDiagram,
    site: &MoveSite,
) -> Result<(BondedDiagram, AppliedMove), MoveError> {
    match site {
        MoveSite::AddKink { edge, positive } => Ok((
            add_kink(d, *edge, *positive)?,
            AppliedMove::KinkAdded { positive: *positive },
        )),
        MoveSite::RemoveKink { crossing } => {
            if !d.crossings.contains_key(crossing) {
                return err("no such crossing");
            }
            let positive = d.crossing_sign(*crossing) > 0;
            Ok((
                remove_kink(d, *crossing)?,
                AppliedMove::KinkRemoved { positive },
            ))
        }
        MoveSite::Push {
            over,
            over_forward,
            under,
            under_forward,
        } => Ok((
            push(d, (*over, *over_forward), (*under, *under_forward))?,
            AppliedMove::Other(Move::II),
        )),
        MoveSite::Pop { c1, c2 } => Ok((pop(d, *c1, *c2)?, AppliedMove::Other(Move::II))),
        MoveSite::Triangle { slider, slider_forward } => Ok((
            triangle(d, *slider, *slider_forward)?,
            AppliedMove::Other(Move::III),
        )),
        MoveSite::SlidePastVertex { crossing, vertex } => {
            let family = match transversal_is_over(d, *crossing, *vertex) {
                Some(true) => Move::IV,
                _ => Move::IVPrime,
            };
            Ok((
                slide_past_vertex(d, *crossing, *vertex)?,
                AppliedMove::Other(family),
            ))
        }
        MoveSite::VertexTwist { vertex, first_leg_over } => Ok((
            vertex_twist(d, *vertex, *first_leg_over)?,
            AppliedMove::Other(Move::V),
        )),
        MoveSite::RigidTwist { vertex, first_leg_over } => Ok((
            rigid_twist(d, *vertex, *first_leg_over)?,
            AppliedMove::Other(Move::RV),
        )),
        MoveSite::BondSlide { vertex, leg } => Ok((
            bond_slide(d, *vertex, *leg)?,
            AppliedMove::Other(Move::BondSlide),
        )),
    }
}

/// Builds a crossing from ports listed with compass angles (degrees CCW);
/// `under` names the two edges forming the under-strand.
fn crossing_from_compass(
    s: &mut Surgeon,
    mut ports: Vec<(i32, SlotRef)>,
    under: [EdgeId; 2],
) -> CrossingId {
    assert_eq!(ports.len(), 4);
    ports.sort_by_key(|(angle, _)| *angle);
    let pos = ports
        .iter()
        .position(|(_, r)| !r.out && (r.edge == under[0] || r.edge == under[1]))
        .expect("incoming under-strand present");
    ports.rotate_left(pos);
    s.add_crossing([ports[0].1, ports[1].1, ports[2].1, ports[3].1])
}

// ---- move I ----

/// Inserts a kink on `edge` with the loop on the north side of the strand.
fn add_kink(d: &BondedDiagram, edge: EdgeId, positive: bool) -> Result<BondedDiagram, MoveError> {
    if !d.edges.contains_key(&edge) {
        return err("no such edge");
    }
    let mut s = Surgeon::new(d.clone());
    if !d.endpoints().contains_key(&edge) {
        s.cut_loop(edge);
    }
    let kind = d.edges[&edge].kind;
    let tail_part = edge;
    let head_part = s.split_edge(edge);
    let l = s.add_edge(kind, 0);
    let slots = if positive {
        [
            SlotRef::incoming(tail_part),
            SlotRef::outgoing(head_part),
            SlotRef::outgoing(l),
            SlotRef::incoming(l),
        ]
    } else {
        [
            SlotRef::incoming(tail_part),
            SlotRef::incoming(l),
            SlotRef::outgoing(l),
            SlotRef::outgoing(head_part),
        ]
    };
    s.add_crossing(slots);
    Ok(s.finish())
}

/// The loop edge of a kink crossing: an edge occupying two cyclically
/// adjacent slots. Returns the first slot of the pair and the edge.
fn kink_loop(d: &BondedDiagram, c: CrossingId) -> Option<(u8, EdgeId)> {
    let slots = d.crossings.get(&c)?;
    for i in 0..4u8 {
        let j = (i + 1) % 4;
        if slots[i as usize].edge == slots[j as usize].edge {
            return Some((i, slots[i as usize].edge));
        }
    }
    None
}

/// Removes a kink crossing, splicing the strand through. The loop's markers
/// ride onto the strand; the kink's framing contribution is deliberately
/// not compensated.
fn remove_kink(d: &BondedDiagram, c: CrossingId) -> Result<BondedDiagram, MoveError> {
    let (i, l) = match kink_loop(d, c) {
        Some(x) => x,
        None => return err("crossing is not a kink"),
    };
    let slots = d.crossings[&c];
    let a = slots[((i + 2) % 4) as usize];
    let b = slots[((i + 3) % 4) as usize];
    let mut s = Surgeon::new(d.clone());
    if a.edge == l || b.edge == l {
        // A doubled loop: the whole crossing reduces to one free loop
        // carrying the combined markers.
        let ht: i32 = slots
            .iter()
            .map(|r| if r.out { d.edges[&r.edge].half_twists } else { 0 })
            .sum();
        let kind = d.edges[&l].kind;
        s.d.crossings.remove(&c);
        for r in slots {
            s.d.edges.remove(&r.edge);
        }
        s.add_edge(kind, ht);
        return Ok(s.finish());
    }
    let loop_ht = d.edges[&l].half_twists;
    s.d.crossings.remove(&c);
    s.d.edges.remove(&l);
    s.d.edges.get_mut(&a.edge).unwrap().half_twists += loop_ht;
    s.connect(a, b);
    Ok(s.finish())
}

// ---- move II ----

/// Pushes the `over` strand across the `under` strand. The darts
/// `(edge, forward)` must bound a common face; the over strand bulges
/// across it, producing two cancelling crossings.
fn push(
    d: &BondedDiagram,
    over_dart: (EdgeId, bool),
    under_dart: (EdgeId, bool),
) -> Result<BondedDiagram, MoveError> {
    let (e, e_fwd) = over_dart;
    let (f, f_fwd) = under_dart;
    if e == f {
        return err("push across the same edge is not supported");
    }
    if !d.edges.contains_key(&e) || !d.edges.contains_key(&f) {
        return err("no such edge");
    }
    let mut s = Surgeon::new(d.clone());
    let endpoints = d.endpoints();
    if !endpoints.contains_key(&e) {
        s.cut_loop(e);
    }
    if !endpoints.contains_key(&f) {
        s.cut_loop(f);
    }
    // Pieces in dart order: (first, mid, last).
    let split3 = |s: &mut Surgeon, edge: EdgeId, fwd: bool| -> (EdgeId, EdgeId, EdgeId) {
        let head_piece = s.split_edge(edge);
        let mid_piece = s.split_edge(edge);
        if fwd {
            (edge, mid_piece, head_piece)
        } else {
            (head_piece, mid_piece, edge)
        }
    };
    // A piece's end reference: `downstream` means its dart-forward end.
    let piece_ref = |piece: EdgeId, downstream: bool, fwd: bool| -> SlotRef {
        SlotRef {
            edge: piece,
            out: downstream != fwd,
        }
    };
    let (p_first, p_mid, p_last) = split3(&mut s, e, e_fwd);
    let (q_first, q_mid, q_last) = split3(&mut s, f, f_fwd);
    // Picture: the under strand runs vertically, dart heading north, with
    // the shared face (and the over strand) to its west; the over dart
    // heads south and bulges east across it. Along the over dart the upper
    // crossing comes first.
    let upper = alloc::vec![
        (0, piece_ref(p_mid, false, e_fwd)),
        (90, piece_ref(q_last, false, f_fwd)),
        (180, piece_ref(p_first, true, e_fwd)),
        (270, piece_ref(q_mid, true, f_fwd)),
    ];
    crossing_from_compass(&mut s, upper, [q_mid, q_last]);
    let lower = alloc::vec![
        (0, piece_ref(p_mid, true, e_fwd)),
        (90, piece_ref(q_mid, false, f_fwd)),
        (180, piece_ref(p_last, false, e_fwd)),
        (270, piece_ref(q_first, true, f_fwd)),
    ];
    crossing_from_compass(&mut s, lower, [q_first, q_mid]);
    Ok(s.finish())
}

/// Detects a cancellable clasp: the under strand runs directly from `c1`'s
/// slot 2 into `c2`'s slot 0, and one edge forms the over strand directly
/// between the same over-slot index of both crossings.
fn pop_pattern(d: &BondedDiagram, c1: CrossingId, c2: CrossingId) -> bool {
    if c1 == c2 {
        return false;
    }
    let (Some(s1), Some(s2)) = (d.crossings.get(&c1), d.crossings.get(&c2)) else {
        return false;
    };
    let q = s1[2];
    if s2[0].edge != q.edge {
        return false;
    }
    let endpoints = d.endpoints();
    let Some((qt, qh)) = endpoints.get(&q.edge).copied() else {
        return false;
    };
    let direct_under = qt == Some(Port { site: Site::Crossing(c1), slot: 2 })
        && qh == Some(Port { site: Site::Crossing(c2), slot: 0 });
    if !direct_under {
        return false;
    }
    for s in [1u8, 3u8] {
        let m1 = s1[s as usize];
        let m2 = s2[s as usize];
        if m1.edge != m2.edge {
            continue;
        }
        let Some((mt, mh)) = endpoints.get(&m1.edge).copied() else {
            continue;
        };
        let ports = [mt, mh];
        let at_c1 = ports.contains(&Some(Port { site: Site::Crossing(c1), slot: s }));
        let at_c2 = ports.contains(&Some(Port { site: Site::Crossing(c2), slot: s }));
        if at_c1 && at_c2 {
            return true;
        }
    }
    false
}

/// Cancels a clasp of two crossings, splicing both strands straight.
fn pop(d: &BondedDiagram, c1: CrossingId, c2: CrossingId) -> Result<BondedDiagram, MoveError> {
    if !pop_pattern(d, c1, c2) {
        return err("crossings do not bound a cancellable clasp");
    }
    let mut s = Surgeon::new(d.clone());
    s.remove_crossing(c1, [(0, 2), (1, 3)]);
    s.remove_crossing(c2, [(0, 2), (1, 3)]);
    Ok(s.finish())
}

// ---- move III ----

struct TriangleData {
    /// Corner crossings: the slider runs from `c2` to `c3`; `c1` is the apex.
    c1: CrossingId,
    c2: CrossingId,
    c3: CrossingId,
    /// Slot of each triangle side at each of its corner crossings.
    p_at_c2: u8,
    p_at_c3: u8,
    q_at_c1: u8,
    q_at_c2: u8,
    r_at_c1: u8,
    r_at_c3: u8,
}

/// Locates the triangle face bounded by the given slider dart and checks the
/// slide conditions: three distinct crossing corners, three distinct side
/// edges, slider passing consistently over or under at its two corners.
fn find_triangle(d: &BondedDiagram, slider: EdgeId, slider_forward: bool) -> Option<TriangleData> {
    let endpoints = d.endpoints();
    let face = faces::faces(d)
        .into_iter()
        .find(|f| f.contains(&(slider, slider_forward)))?;
    if face.len() != 3 {
        return None;
    }
    let pos = face.iter().position(|&x| x == (slider, slider_forward))?;
    let sides = [face[pos], face[(pos + 1) % 3], face[(pos + 2) % 3]];
    if sides[0].0 == sides[1].0 || sides[1].0 == sides[2].0 || sides[0].0 == sides[2].0 {
        return None;
    }
    let port_of = |e: EdgeId, fwd: bool, at_target: bool| -> Option<Port> {
        let (t, h) = endpoints.get(&e).copied()?;
        if fwd == at_target {
            h
        } else {
            t
        }
    };
    let corner = |i: usize| -> Option<CrossingId> {
        let (e, fwd) = sides[i];
        match port_of(e, fwd, true)?.site {
            Site::Crossing(c) => Some(c),
            _ => None,
        }
    };
    let (c3, c1, c2) = (corner(0)?, corner(1)?, corner(2)?);
    if c1 == c2 || c2 == c3 || c1 == c3 {
        return None;
    }
    let p_at_c2 = port_of(sides[0].0, sides[0].1, false)?.slot;
    let p_at_c3 = port_of(sides[0].0, sides[0].1, true)?.slot;
    let r_at_c3 = port_of(sides[1].0, sides[1].1, false)?.slot;
    let r_at_c1 = port_of(sides[1].0, sides[1].1, true)?.slot;
    let q_at_c1 = port_of(sides[2].0, sides[2].1, false)?.slot;
    let q_at_c2 = port_of(sides[2].0, sides[2].1, true)?.slot;
    if p_at_c2 % 2 != p_at_c3 % 2 {
        return None;
    }
    Some(TriangleData {
        c1,
        c2,
        c3,
        p_at_c2,
        p_at_c3,
        q_at_c1,
        q_at_c2,
        r_at_c1,
        r_at_c3,
    })
}

/// Slides the slider strand across the apex crossing of its triangle face.
fn triangle(
    d: &BondedDiagram,
    slider: EdgeId,
    slider_forward: bool,
) -> Result<BondedDiagram, MoveError> {
    let t = match find_triangle(d, slider, slider_forward) {
        Some(t) => t,
        None => return err("no triangle face with a consistent slider here"),
    };
    let slider_over = t.p_at_c2 % 2 == 1;
    let mut s = Surgeon::new(d.clone());
    // Split the far continuations of the two crossed strands at the apex;
    // the near pieces keep the apex attachment.
    let (xf1, xf2) = s.split_at(Holder::Crossing(t.c1, (t.q_at_c1 + 2) % 4));
    let (yf1, yf2) = s.split_at(Holder::Crossing(t.c1, (t.r_at_c1 + 2) % 4));
    // Capture corner slots only now: the splits can move references.
    let c2_slots = s.d.crossings[&t.c2];
    let c3_slots = s.d.crossings[&t.c3];
    let z_w = c2_slots[((t.p_at_c2 + 2) % 4) as usize];
    let p_at_c2_ref = c2_slots[t.p_at_c2 as usize];
    let x_out = c2_slots[((t.q_at_c2 + 2) % 4) as usize];
    let q_end = c2_slots[t.q_at_c2 as usize];
    let z_e = c3_slots[((t.p_at_c3 + 2) % 4) as usize];
    let p_at_c3_ref = c3_slots[t.p_at_c3 as usize];
    let y_out = c3_slots[((t.r_at_c3 + 2) % 4) as usize];
    let r_end = c3_slots[t.r_at_c3 as usize];
    s.d.crossings.remove(&t.c2);
    s.d.crossings.remove(&t.c3);
    // Heal the crossed strands through the old corner positions.
    s.connect(x_out, q_end);
    s.connect(y_out, r_end);
    // Rebuild the slider's crossings beyond the apex. Compass picture: apex
    // at the origin, old triangle to the south; the slider now runs
    // west-east on the north side, meeting the r-strand continuation at the
    // northwest and the q continuation at the northeast.
    let under_nw = if slider_over {
        [yf1.edge, yf2.edge]
    } else {
        [z_w.edge, p_at_c2_ref.edge]
    };
    crossing_from_compass(
        &mut s,
        alloc::vec![(0, p_at_c2_ref), (135, yf2), (180, z_w), (315, yf1)],
        under_nw,
    );
    let under_ne = if slider_over {
        [xf1.edge, xf2.edge]
    } else {
        [p_at_c3_ref.edge, z_e.edge]
    };
    crossing_from_compass(
        &mut s,
        alloc::vec![(0, z_e), (45, xf2), (180, p_at_c3_ref), (225, xf1)],
        under_ne,
    );
    Ok(s.finish())
}

// ---- moves IV / IV' ----

/// Finds a single edge joining crossing `c` (slot j) to vertex `v` (slot k).
fn leg_between(d: &BondedDiagram, c: CrossingId, v: VertexId) -> Option<(u8, u8)> {
    let endpoints = d.endpoints();
    for (jc, rc) in d.crossings.get(&c)?.iter().enumerate() {
        let (tail, head) = endpoints.get(&rc.edge).copied()?;
        let here = Port {
            site: Site::Crossing(c),
            slot: jc as u8,
        };
        let far = if tail == Some(here) { head } else { tail }?;
        if let Site::Vertex(w) = far.site {
            if w == v {
                return Some((jc as u8, far.slot));
            }
        }
    }
    None
}

/// Whether the transversal at `c` passes over the leg reaching `v`.
fn transversal_is_over(d: &BondedDiagram, c: CrossingId, v: VertexId) -> Option<bool> {
    let (j, _) = leg_between(d, c, v)?;
    Some(j % 2 == 0)
}

/// Slides the transversal strand of `c` past the adjacent vertex `v`.
///
/// The transversal keeps its over/under character and ends up crossing the
/// other two legs of `v` on the far side. This is the `IV`/`IV'` rewrite and
/// also the engine's tool for clearing crossings off bonds.
pub fn slide_past_vertex(
    d: &BondedDiagram,
    c: CrossingId,
    v: VertexId,
) -> Result<BondedDiagram, MoveError> {
    if !d.crossings.contains_key(&c) {
        return err("no such crossing");
    }
    if !d.bond_vertices.contains_key(&v) {
        return err("no such vertex");
    }
    let (j, k) = match leg_between(d, c, v) {
        Some(x) => x,
        None => return err("crossing is not adjacent to the vertex through one edge"),
    };
    let mut s = Surgeon::new(d.clone());
    // Split the other two legs near the vertex (near pieces keep v).
    let (a_toward, a_away) = s.split_at(Holder::Vertex(v, (k + 1) % 3));
    let (b_toward, b_away) = s.split_at(Holder::Vertex(v, (k + 2) % 3));
    // Capture the crossing's slots only after the splits, then delete it
    // and let the leg strand pass straight through.
    let slots = s.d.crossings[&c];
    let g_end = slots[j as usize];
    let g_far = slots[((j + 2) % 4) as usize];
    let t_east = slots[((j + 1) % 4) as usize];
    let t_west = slots[((j + 3) % 4) as usize];
    let t_over = j % 2 == 0;
    let t_kind = s.d.edges[&t_east.edge].kind;
    s.d.crossings.remove(&c);
    s.connect(g_end, g_far);
    // Compass picture: v at the origin, the removed leg pointing north
    // toward where c was, the next leg counterclockwise to the southwest
    // and the last to the southeast; the transversal now runs west-east
    // below v keeping its travel direction.
    let t_w2e = !t_west.out;
    let t_mid = s.add_edge(t_kind, 0);
    let (ca_west, ca_east, cb_west, cb_east) = if t_w2e {
        (
            t_west,
            SlotRef::outgoing(t_mid),
            SlotRef::incoming(t_mid),
            t_east,
        )
    } else {
        (
            SlotRef::outgoing(t_mid),
            t_west,
            t_east,
            SlotRef::incoming(t_mid),
        )
    };
    let under_a = if t_over {
        [a_toward.edge, a_away.edge]
    } else {
        [ca_west.edge, ca_east.edge]
    };
    crossing_from_compass(
        &mut s,
        alloc::vec![(0, ca_east), (30, a_toward), (180, ca_west), (210, a_away)],
        under_a,
    );
    let under_b = if t_over {
        [b_toward.edge, b_away.edge]
    } else {
        [cb_west.edge, cb_east.edge]
    };
    crossing_from_compass(
        &mut s,
        alloc::vec![(0, cb_east), (150, b_toward), (180, cb_west), (330, b_away)],
        under_b,
    );
    Ok(s.finish())
}

// ---- moves V and RV ----

/// Twists a vertex: its two chain legs swap, crossing once just outside.
/// Changes the bond framing, so only the topological class survives it.
fn vertex_twist(
    d: &BondedDiagram,
    v: VertexId,
    first_leg_over: bool,
) -> Result<BondedDiagram, MoveError> {
    if !d.bond_vertices.contains_key(&v) {
        return err("no such vertex");
    }
    let mut s = Surgeon::new(d.clone());
    let (a_toward, a_away) = s.split_at(Holder::Vertex(v, 1));
    let (b_toward, b_away) = s.split_at(Holder::Vertex(v, 2));
    {
        let slots = s.d.bond_vertices.get_mut(&v).unwrap();
        slots.swap(1, 2);
    }
    // Compass: bond to the north of v, swapped legs leave southwest and
    // southeast and cross just south of the vertex; the strand from the old
    // first leg now runs northeast-southwest.
    let under = if first_leg_over {
        [b_toward.edge, b_away.edge]
    } else {
        [a_toward.edge, a_away.edge]
    };
    crossing_from_compass(
        &mut s,
        alloc::vec![(45, a_toward), (135, b_toward), (225, a_away), (315, b_away)],
        under,
    );
    Ok(s.finish())
}

/// The rigid-vertex move: an opposite clasp of the two chain legs right at
/// the vertex (two opposite vertex twists about the bond axis, so the bond
/// framing stays intact).
fn rigid_twist(
    d: &BondedDiagram,
    v: VertexId,
    first_leg_over: bool,
) -> Result<BondedDiagram, MoveError> {
    if !d.bond_vertices.contains_key(&v) {
        return err("no such vertex");
    }
    let slots = d.bond_vertices[&v];
    if slots[1].edge == slots[2].edge {
        return err("rigid twist needs distinct chain leg edges");
    }
    // The chain-chain corner of the vertex is the face traced through the
    // dart arriving at slot 2 and the dart leaving slot 1.
    let d2 = (slots[2].edge, !slots[2].out);
    let d1 = (slots[1].edge, slots[1].out);
    let (over_dart, under_dart) = if first_leg_over { (d1, d2) } else { (d2, d1) };
    push(d, over_dart, under_dart)
}

// ---- bond slide ----

/// Slides the bond endpoint `v` past the crossing adjacent on the chain leg
/// at CCW slot `leg`. The bond's first segment picks up a crossing with the
/// transversal on the same side the chain passed it.
fn bond_slide(d: &BondedDiagram, v: VertexId, leg: u8) -> Result<BondedDiagram, MoveError> {
    if !(leg == 1 || leg == 2) {
        return err("leg must be 1 or 2");
    }
    if !d.bond_vertices.contains_key(&v) {
        return err("no such vertex");
    }
    let endpoints = d.endpoints();
    let m2_at_v = d.bond_vertices[&v][leg as usize];
    let here = Port {
        site: Site::Vertex(v),
        slot: leg,
    };
    let (t, h) = endpoints[&m2_at_v.edge];
    let far = if t == Some(here) { h } else { t }.expect("leg edge has endpoints");
    let c = match far.site {
        Site::Crossing(c) => c,
        _ => return err("leg does not end at a crossing"),
    };
    let jc = far.slot;
    let mut s = Surgeon::new(d.clone());
    // The transversal piece on the bond's side of the chain: with the bond
    // stored at slot 0 and the chain legs CCW at 1 and 2, the bond lies to
    // the left of travel from v to c for leg 1 (crossing port jc+1) and to
    // the right for leg 2 (port jc+3).
    let t_side_slot = if leg == 1 { (jc + 1) % 4 } else { (jc + 3) % 4 };
    let chain_under = jc % 2 == 0;
    let (t_near, t_far) = s.split_at(Holder::Crossing(c, t_side_slot));
    // Re-read everything after the split.
    let m2_ref = s.d.bond_vertices[&v][leg as usize];
    let other_leg = if leg == 1 { 2u8 } else { 1u8 };
    let m3_ref = s.d.bond_vertices[&v][other_leg as usize];
    let bl_ref = s.d.bond_vertices[&v][0];
    let m1_slot = (jc + 2) % 4;
    let m1_ref = s.d.crossings[&c][m1_slot as usize];
    // The vertex hops across the crossing: the strand beyond the crossing
    // attaches to the vertex, the old far leg attaches to the crossing, and
    // the leg between them reverses direction.
    {
        let vslots = s.d.bond_vertices.get_mut(&v).unwrap();
        vslots[other_leg as usize] = m1_ref;
        vslots[leg as usize] = SlotRef {
            edge: m2_ref.edge,
            out: !m2_ref.out,
        };
    }
    {
        let cslots = s.d.crossings.get_mut(&c).unwrap();
        cslots[m1_slot as usize] = m3_ref;
        cslots[jc as usize] = SlotRef {
            edge: m2_ref.edge,
            out: m2_ref.out,
        };
        if cslots[0].out {
            *cslots = [cslots[2], cslots[3], cslots[0], cslots[1]];
        }
    }
    // The bond picks up a crossing with the transversal on its own side of
    // the chain, with the same over/under the chain had.
    let bn = s.add_edge(EdgeKind::Bond, 0);
    let (bn_at_v, bn_at_c2, bl_at_c2) = if bl_ref.out {
        (
            SlotRef::outgoing(bn),
            SlotRef::incoming(bn),
            SlotRef {
                edge: bl_ref.edge,
                out: true,
            },
        )
    } else {
        (
            SlotRef::incoming(bn),
            SlotRef::outgoing(bn),
            SlotRef {
                edge: bl_ref.edge,
                out: false,
            },
        )
    };
    {
        let vslots = s.d.bond_vertices.get_mut(&v).unwrap();
        vslots[0] = bn_at_v;
    }
    // Compass at the new crossing: the transversal runs vertically (near
    // piece toward c at the south); for leg 1 the vertex ends up west of c
    // so the bond arrives from the west, for leg 2 from the east.
    let (bn_angle, bl_angle) = if leg == 1 { (180, 0) } else { (0, 180) };
    let under = if chain_under {
        [bn, bl_ref.edge]
    } else {
        [t_near.edge, t_far.edge]
    };
    crossing_from_compass(
        &mut s,
        alloc::vec![
            (bn_angle, bn_at_c2),
            (bl_angle, bl_at_c2),
            (90, t_far),
            (270, t_near),
        ],
        under,
    );
    Ok(s.finish())
}

// ---- bond clearing ----

/// Removes every crossing sitting on a bond by sliding the transversal past
/// the bond's endpoints. Pure isotopy: the result is a diagram of the same
/// bonded link whose bonds cross nothing, leaving only chain-chain
/// crossings for the skein expansion.
pub fn clear_bond_crossings(d: &BondedDiagram) -> BondedDiagram {
    let mut d = d.clone();
    loop {
        let endpoints = d.endpoints();
        let mut site: Option<(CrossingId, VertexId)> = None;
        for (v, slots) in d
            .bond_vertex_ids()
            .map(|v| (v, *d.bond_vertex(v)))
            .collect::<Vec<_>>()
        {
            let bond_ref = slots[0];
            if d.edge(bond_ref.edge).kind != EdgeKind::Bond {
                continue;
            }
            let here = Port {
                site: Site::Vertex(v),
                slot: 0,
            };
            let (t, h) = endpoints[&bond_ref.edge];
            let far = if t == Some(here) { h } else { t }.expect("bond edge has endpoints");
            if let Site::Crossing(c) = far.site {
                site = Some((c, v));
                break;
            }
        }
        match site {
            Some((c, v)) => {
                d = slide_past_vertex(&d, c, v).expect("bond-adjacent slide applies");
            }
            None => return d,
        }
    }
}

// ---- enumeration and the random driver ----

/// Enumerates applicable sites for the given move families.
pub fn enumerate_sites(d: &BondedDiagram, allowed: &[Move]) -> Vec<MoveSite> {
    let mut out = Vec::new();
    let has = |m: Move| allowed.contains(&m);
    let endpoints = d.endpoints();
    if has(Move::IPlus) || has(Move::IMinus) {
        for e in d.edge_ids() {
            if has(Move::IPlus) {
                out.push(MoveSite::AddKink { edge: e, positive: true });
            }
            if has(Move::IMinus) {
                out.push(MoveSite::AddKink { edge: e, positive: false });
            }
        }
        for c in d.crossing_ids() {
            if kink_loop(d, c).is_some() {
                let positive = d.crossing_sign(c) > 0;
                if (positive && has(Move::IPlus)) || (!positive && has(Move::IMinus)) {
                    out.push(MoveSite::RemoveKink { crossing: c });
                }
            }
        }
    }
    if has(Move::II) {
        for face in faces::faces(d) {
            for (i, &(e1, f1)) in face.iter().enumerate() {
                for &(e2, f2) in face.iter().skip(i + 1) {
                    if e1 == e2 {
                        continue;
                    }
                    out.push(MoveSite::Push {
                        over: e1,
                        over_forward: f1,
                        under: e2,
                        under_forward: f2,
                    });
                    out.push(MoveSite::Push {
                        over: e2,
                        over_forward: f2,
                        under: e1,
                        under_forward: f1,
                    });
                }
            }
        }
        let crossings: Vec<_> = d.crossing_ids().collect();
        for &c1 in &crossings {
            for &c2 in &crossings {
                if pop_pattern(d, c1, c2) {
                    out.push(MoveSite::Pop { c1, c2 });
                }
            }
        }
    }
    if has(Move::III) {
        for face in faces::faces(d) {
            if face.len() != 3 {
                continue;
            }
            for &(e, fwd) in &face {
                if find_triangle(d, e, fwd).is_some() {
                    out.push(MoveSite::Triangle { slider: e, slider_forward: fwd });
                }
            }
        }
    }
    if has(Move::IV) || has(Move::IVPrime) {
        for v in d.bond_vertex_ids() {
            for slot in 0..3u8 {
                let r = d.bond_vertex(v)[slot as usize];
                let here = Port { site: Site::Vertex(v), slot };
                let Some((t, h)) = endpoints.get(&r.edge).copied() else {
                    continue;
                };
                let far = if t == Some(here) { h } else { t };
                if let Some(Port { site: Site::Crossing(c), .. }) = far {
                    match transversal_is_over(d, c, v) {
                        Some(true) if has(Move::IV) => {
                            out.push(MoveSite::SlidePastVertex { crossing: c, vertex: v })
                        }
                        Some(false) if has(Move::IVPrime) => {
                            out.push(MoveSite::SlidePastVertex { crossing: c, vertex: v })
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    if has(Move::V) {
        for v in d.bond_vertex_ids() {
            out.push(MoveSite::VertexTwist { vertex: v, first_leg_over: true });
            out.push(MoveSite::VertexTwist { vertex: v, first_leg_over: false });
        }
    }
    if has(Move::RV) {
        for v in d.bond_vertex_ids() {
            let slots = d.bond_vertex(v);
            if slots[1].edge != slots[2].edge {
                out.push(MoveSite::RigidTwist { vertex: v, first_leg_over: true });
                out.push(MoveSite::RigidTwist { vertex: v, first_leg_over: false });
            }
        }
    }
    if has(Move::BondSlide) {
        for v in d.bond_vertex_ids() {
            for leg in [1u8, 2u8] {
                let r = d.bond_vertex(v)[leg as usize];
                let here = Port { site: Site::Vertex(v), slot: leg };
                let Some((t, h)) = endpoints.get(&r.edge).copied() else {
                    continue;
                };
                let far = if t == Some(here) { h } else { t };
                if let Some(Port { site: Site::Crossing(_), .. }) = far {
                    out.push(MoveSite::BondSlide { vertex: v, leg });
                }
            }
        }
    }
    out
}

/// The outcome of a seeded random walk.
#[derive(Clone, Debug)]
pub struct RandomWalk {
    pub diagram: BondedDiagram,
    pub log: Vec<AppliedMove>,
}

/// Applies `count` random applicable moves drawn from the given families,
/// deterministically per seed. Inapplicable draws are skipped; once the
/// diagram grows past a dozen crossings, shrinking moves are preferred.
pub fn random_moves_with(
    d: &BondedDiagram,
    count: usize,
    seed: u64,
    allowed: &[Move],
) -> RandomWalk {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut current = d.clone();
    let mut log = Vec::new();
    for _ in 0..count {
        let mut sites = enumerate_sites(&current, allowed);
        if current.crossing_count() > 12 {
            let shrinking: Vec<MoveSite> = sites
                .iter()
                .filter(|s| matches!(s, MoveSite::RemoveKink { .. } | MoveSite::Pop { .. }))
                .cloned()
                .collect();
            if !shrinking.is_empty() {
                sites = shrinking;
            }
        }
        if sites.is_empty() {
            continue;
        }
        let pick = (rng.next_u64() % sites.len() as u64) as usize;
        match apply_move_logged(&current, &sites[pick]) {
            Ok((next, record)) => {
                current = next;
                log.push(record);
            }
            Err(_) => continue,
        }
    }
    RandomWalk {
        diagram: current,
        log,
    }
}

/// Applies `count` random moves from the normalized-invariance set
/// (everything but the vertex twist `V`), deterministically per seed.
pub fn random_moves(d: &BondedDiagram, count: usize, seed: u64) -> BondedDiagram {
    random_moves_with(d, count, seed, Move::normalized_invariant_set()).diagram
}
