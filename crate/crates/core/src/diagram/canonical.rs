//! Canonical keys for memoization.
//!
//! The key is a byte string equal for two diagrams exactly when they differ
//! only by id relabeling (or by reversing strand directions, which the
//! bracket value cannot see). Each connected component is encoded by a
//! breadth-first traversal from every possible starting port; the
//! lexicographically smallest encoding wins. Sites are identified by
//! discovery index, slots relative to the slot the site was first entered
//! through, so ids never leak into the key.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{BondedDiagram, EdgeKind, Port, Site};

const TOK_CROSSING_UNDER_ANCHOR: i64 = -10;
const TOK_CROSSING_OVER_ANCHOR: i64 = -11;
const TOK_VERTEX: i64 = -12;
const TOK_FREE_LOOP: i64 = -13;

pub(crate) fn canonical_key(d: &BondedDiagram) -> Vec<u8> {
    let mut component_keys: Vec<Vec<i64>> = Vec::new();
    for part in d.split_components() {
        if part.crossings.is_empty() && part.bond_vertices.is_empty() {
            // A free loop: kind is always chain, only the framing matters.
            let (_, data) = part.edges.iter().next().expect("loop edge");
            component_keys.push(alloc::vec![TOK_FREE_LOOP, data.half_twists as i64]);
        } else {
            component_keys.push(component_key(&part));
        }
    }
    component_keys.sort();
    let mut bytes = Vec::new();
    for key in component_keys {
        for t in key {
            bytes.extend_from_slice(&t.to_le_bytes());
        }
        bytes.push(0xFF);
    }
    bytes
}

fn component_key(part: &BondedDiagram) -> Vec<i64> {
    let endpoints = part.endpoints();
    let mut best: Option<Vec<i64>> = None;
    let starts: Vec<Port> = part
        .crossings
        .keys()
        .flat_map(|c| (0..4).map(move |s| Port { site: Site::Crossing(*c), slot: s }))
        .chain(
            part.bond_vertices
                .keys()
                .flat_map(|v| (0..3).map(move |s| Port { site: Site::Vertex(*v), slot: s })),
        )
        .collect();
    for start in starts {
        let key = encode_from(part, start, &endpoints);
        if best.as_ref().map_or(true, |b| key < *b) {
            best = Some(key);
        }
    }
    best.expect("component has at least one site")
}

fn encode_from(
    part: &BondedDiagram,
    start: Port,
    endpoints: &BTreeMap<super::EdgeId, (Option<Port>, Option<Port>)>,
) -> Vec<i64> {
    let mut index: BTreeMap<Site, (usize, u8)> = BTreeMap::new();
    let mut queue: Vec<Site> = Vec::new();
    index.insert(start.site, (0, start.slot));
    queue.push(start.site);
    let mut tokens = Vec::new();
    let mut qi = 0;
    while qi < queue.len() {
        let site = queue[qi];
        qi += 1;
        let (_, anchor) = index[&site];
        let deg = part.degree(site);
        let slots = part.slots(site);
        tokens.push(match site {
            Site::Crossing(_) => {
                if anchor % 2 == 0 {
                    TOK_CROSSING_UNDER_ANCHOR
                } else {
                    TOK_CROSSING_OVER_ANCHOR
                }
            }
            Site::Vertex(_) => TOK_VERTEX,
        });
        for j in 0..deg {
            let slot = (anchor + j) % deg;
            let r = slots[slot as usize];
            let here = Port { site, slot };
            let (tail, head) = endpoints[&r.edge];
            let other = match (tail, head) {
                (Some(t), Some(h)) => {
                    if t == here {
                        h
                    } else {
                        t
                    }
                }
                _ => unreachable!("referenced edge has both endpoints"),
            };
            let (other_index, other_anchor) = match index.get(&other.site) {
                Some(v) => *v,
                None => {
                    let v = (queue.len(), other.slot);
                    index.insert(other.site, v);
                    queue.push(other.site);
                    v
                }
            };
            let deg2 = part.degree(other.site);
            let rel = (other.slot + deg2 - other_anchor) % deg2;
            let data = part.edges[&r.edge];
            tokens.push(other_index as i64);
            tokens.push(rel as i64);
            tokens.push(match data.kind {
                EdgeKind::Chain => 0,
                EdgeKind::Bond => 1,
            });
            tokens.push(data.half_twists as i64);
        }
    }
    tokens
}
