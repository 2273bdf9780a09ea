//! Evaluation of bonded diagrams in the skein module.
//!
//! `evaluate_framed` resolves a diagram into the free basis `{Θ^m H^n}`:
//! fold the framing markers into `-A^{±3}` units, slide any crossings off
//! the bonds (an isotopy), then recursively smooth every remaining
//! chain-chain crossing, delete free circles against `δ`, split disjoint
//! components multiplicatively, and remove bonds one at a time through the
//! extraction identity `[d] = α·[d₀] + β·[d∞]`, where `d₀` reconnects the
//! strands parallel to themselves and `d∞` merges them across the bond.
//! The coefficients `α = (δH - Θ)/(δμ)` and `β = (δΘ - H)/(δμ)` are pinned
//! by the fixed points `Θ ↦ Θ` and `H ↦ H`.
//!
//! `evaluate_topological` instead multiplies by `Θ/δ` per bond removal (the
//! image of `α` under `H = δΘ`, with `β` vanishing) and cross-checks the
//! result against the substituted framed value; the two must agree exactly.
//!
//! Results are deterministic regardless of recursion order or parallelism;
//! subresults are memoized on canonical diagram keys.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicU64, Ordering};

use crate::coeff::Coefficient;
use crate::diagram::surgery::Surgeon;
use crate::diagram::{BondedDiagram, CrossingId, EdgeId, EdgeKind, Site, VertexId};
use crate::laurent::{self, IntLaurent};
use crate::moves;
use crate::skein::{self, BivariateLaurent, SkeinValue};

/// Which skein module the evaluation targets.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Mode {
    #[default]
    Framed,
    Topological,
}

/// Evaluation knobs.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EvaluationOptions {
    pub mode: Mode,
    /// Strip theta and handcuff connected summands by the `1/δ` shortcut
    /// instead of running the full extraction. Pure optimization; results
    /// are identical either way.
    pub use_connected_sum_shortcut: bool,
    /// Memoize subdiagram values on canonical keys.
    pub memoize: bool,
    /// Evaluate the two smoothing branches in parallel (requires the
    /// `parallel` feature; otherwise sequential evaluation is used).
    pub parallel: bool,
}

impl Default for EvaluationOptions {
    fn default() -> Self {
        EvaluationOptions {
            mode: Mode::Framed,
            use_connected_sum_shortcut: true,
            memoize: true,
            parallel: false,
        }
    }
}

impl EvaluationOptions {
    pub fn framed() -> Self {
        EvaluationOptions::default()
    }

    pub fn topological() -> Self {
        EvaluationOptions {
            mode: Mode::Topological,
            ..EvaluationOptions::default()
        }
    }
}

/// Evaluation counters.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct EvalStats {
    /// Number of crossings expanded through the skein relation.
    pub states_expanded: u64,
    /// Memo-table hits.
    pub cache_hits: u64,
}

/// The outcome of evaluating a diagram.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EvaluationResult {
    /// The class of the diagram in the chosen basis. In topological mode
    /// every term is a pure Θ power.
    pub value: SkeinValue,
    /// Writhe of the input diagram (signs of oriented chain crossings).
    pub writhe: i64,
    /// Number of bonds of the input diagram.
    pub bond_count: usize,
    pub stats: EvalStats,
}

/// Evaluation errors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EvalError {
    /// An edge carries an odd number of half twists; the pipeline requires
    /// integral framing relative to the blackboard.
    NonBlackboardFraming { edge: EdgeId },
    /// Smoothing this crossing would merge a bond with a chain strand,
    /// leaving the bonded-diagram category.
    BondSmoothingRejected { crossing: CrossingId },
    /// The operation needs at least one bond.
    NoBonds,
    /// The operation requires a bondless diagram.
    HasBonds,
    /// The operation requires a crossingless diagram.
    CrossingsPresent,
    /// A coefficient failed to clear its denominator during reduction;
    /// this signals an engine bug, not a property of the input.
    ResidualDenominator,
    /// The direct topological evaluation disagreed with the substituted
    /// framed value.
    TopologicalMismatch,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::NonBlackboardFraming { edge } => write!(
                f,
                "non-blackboard framing unsupported (odd half twists on edge {})",
                edge.0
            ),
            EvalError::BondSmoothingRejected { crossing } => write!(
                f,
                "smoothing crossing {} would merge a bond with a chain strand",
                crossing.0
            ),
            EvalError::NoBonds => write!(f, "operation requires at least one bond"),
            EvalError::HasBonds => write!(f, "operation requires a bondless diagram"),
            EvalError::CrossingsPresent => write!(f, "operation requires a crossingless diagram"),
            EvalError::ResidualDenominator => write!(
                f,
                "internal consistency failure: residual denominator after reduction"
            ),
            EvalError::TopologicalMismatch => write!(
                f,
                "internal consistency failure: topological evaluation disagrees with the substituted framed value"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for EvalError {}

// ---- elementary steps ----

/// Folds the framing markers: every pair of same-sign half twists on an edge
/// becomes a factor `-A^3` (positive pair) or `-A^{-3}` (negative pair);
/// opposite signs on one edge cancel outright in the stored sum. A leftover
/// odd half twist is an error. The returned diagram carries no markers.
pub fn fold_markers(d: &BondedDiagram) -> Result<(BondedDiagram, Coefficient), EvalError> {
    let mut out = d.clone();
    let mut unit = IntLaurent::one();
    let edges: Vec<EdgeId> = out.edge_ids().collect();
    for e in edges {
        let ht = out.edge(e).half_twists;
        if ht == 0 {
            continue;
        }
        if ht % 2 != 0 {
            return Err(EvalError::NonBlackboardFraming { edge: e });
        }
        let k = (ht / 2) as i64;
        unit = &unit * &neg_a_cubed_pow(k);
        out.set_half_twists(e, 0);
    }
    Ok((out, Coefficient::from_laurent(unit)))
}

/// The two smoothings of a chain-chain crossing: the first joins the
/// incoming under-strand to its counterclockwise neighbor, the second to
/// its clockwise neighbor. Crossings involving bond arcs are rejected;
/// the engine removes those by isotopy instead.
pub fn smooth_crossing(
    d: &BondedDiagram,
    c: CrossingId,
) -> Result<(BondedDiagram, BondedDiagram), EvalError> {
    let slots = d.crossing(c);
    if slots.iter().any(|r| d.edge(r.edge).kind == EdgeKind::Bond) {
        return Err(EvalError::BondSmoothingRejected { crossing: c });
    }
    let mut a = Surgeon::new(d.clone());
    a.remove_crossing(c, [(0, 1), (2, 3)]);
    let mut b = Surgeon::new(d.clone());
    b.remove_crossing(c, [(0, 3), (1, 2)]);
    Ok((a.finish(), b.finish()))
}

/// Removes all free circles (closed chain components with no bond vertices)
/// from a crossingless diagram, returning their count; each contributes a
/// factor `δ` at the call site.
pub fn delete_free_circles(d: &BondedDiagram) -> (BondedDiagram, u32) {
    let mut out = d.clone();
    let endpoints = d.endpoints();
    let mut k = 0;
    let loops: Vec<EdgeId> = d.edge_ids().filter(|e| !endpoints.contains_key(e)).collect();
    for e in loops {
        out.remove_edge(e);
        k += 1;
    }
    (out, k)
}

/// The bond path through `b`: its piece edges, the crossings it passes, and
/// its two endpoint vertices in (tail, head) order.
fn bond_path(d: &BondedDiagram, b: EdgeId) -> (Vec<EdgeId>, Vec<CrossingId>, VertexId, VertexId) {
    let endpoints = d.endpoints();
    let mut pieces = alloc::vec![b];
    let mut crossings = Vec::new();
    let mut ends = [None, None];
    for (i, going_with) in [true, false].into_iter().enumerate() {
        let mut e = b;
        let mut dir = going_with;
        loop {
            let (t, h) = endpoints[&e];
            let port = if dir { h } else { t }.expect("bond edge has endpoints");
            match port.site {
                Site::Vertex(v) => {
                    ends[i] = Some(v);
                    break;
                }
                Site::Crossing(c) => {
                    crossings.push(c);
                    let r = d.crossing(c)[((port.slot + 2) % 4) as usize];
                    dir = r.out;
                    e = r.edge;
                    pieces.push(e);
                }
            }
        }
    }
    crossings.sort();
    crossings.dedup();
    (pieces, crossings, ends[1].unwrap(), ends[0].unwrap())
}

/// Removes the bond through `b`, reconnecting the chain strands parallel to
/// themselves (each endpoint's chain legs splice straight through). Any
/// crossings along the bond disappear with it.
pub fn g0_remove(d: &BondedDiagram, b: EdgeId) -> BondedDiagram {
    remove_bond(d, b, false)
}

/// Removes the bond through `b`, merging the two strands across it (the
/// endpoint legs reconnect crosswise, respecting the rotation system).
pub fn ginf_remove(d: &BondedDiagram, b: EdgeId) -> BondedDiagram {
    remove_bond(d, b, true)
}

fn remove_bond(d: &BondedDiagram, b: EdgeId, merge: bool) -> BondedDiagram {
    assert_eq!(d.edge(b).kind, EdgeKind::Bond, "not a bond edge");
    let (pieces, crossings, tail, head) = bond_path(d, b);
    let mut s = Surgeon::new(d.clone());
    for c in crossings {
        // Splice the transversal straight; the bond side vanishes with the
        // path.
        let slots = *s.d.crossing(c);
        let bond_slot = slots
            .iter()
            .position(|r| pieces.contains(&r.edge))
            .expect("bond piece at its own crossing") as u8;
        let t1 = slots[((bond_slot + 1) % 4) as usize];
        let t2 = slots[((bond_slot + 3) % 4) as usize];
        s.remove_crossing_keep_ends(c);
        s.connect(t1, t2);
    }
    let vt = s.remove_bond_vertex(tail);
    let vh = s.remove_bond_vertex(head);
    for e in pieces {
        s.delete_edge(e);
    }
    if merge {
        // Crosswise: each vertex's counterclockwise-after-bond leg joins
        // the other's counterclockwise-before-bond leg.
        s.connect(vt[1], vh[2]);
        s.connect(vt[2], vh[1]);
    } else {
        s.connect(vt[1], vt[2]);
        s.connect(vh[1], vh[2]);
    }
    s.finish()
}

/// The symbolic extraction of one bond from a crossingless diagram:
/// `[d] = α·[strand_preserving] + β·[strand_merging]`.
pub struct BondExtraction {
    pub strand_preserving: BondedDiagram,
    pub strand_merging: BondedDiagram,
    pub alpha: SkeinValue,
    pub beta: SkeinValue,
}

/// Extracts the bond `b` from a crossingless diagram.
pub fn extract_bond(d: &BondedDiagram, b: EdgeId) -> Result<BondExtraction, EvalError> {
    if d.crossing_count() > 0 {
        return Err(EvalError::CrossingsPresent);
    }
    if d.edge(b).kind != EdgeKind::Bond {
        return Err(EvalError::NoBonds);
    }
    Ok(BondExtraction {
        strand_preserving: g0_remove(d, b),
        strand_merging: ginf_remove(d, b),
        alpha: skein::alpha(),
        beta: skein::beta(),
    })
}

/// Finds a theta or handcuff connected summand in a crossingless diagram:
/// a bond whose endpoints are also joined by a single parallel chain edge
/// (theta), or one of whose endpoints carries a chain loop (handcuff).
/// Returns the factor `(1/δ)·Θ` or `(1/δ)·H` and the remaining diagram.
/// Pure optimization: results equal extraction-only evaluation.
pub fn connected_sum_shortcut(d: &BondedDiagram) -> Option<(SkeinValue, BondedDiagram)> {
    if d.crossing_count() > 0 {
        return None;
    }
    let endpoints = d.endpoints();
    let inv_delta = Coefficient::inv_delta();
    for b in d.edge_ids() {
        if d.edge(b).kind != EdgeKind::Bond {
            continue;
        }
        let (bt, bh) = endpoints[&b];
        let (v1, v2) = match (bt.map(|p| p.site), bh.map(|p| p.site)) {
            (Some(Site::Vertex(a)), Some(Site::Vertex(c))) => (a, c),
            _ => continue,
        };
        // Theta summand: a single chain edge parallel to the bond.
        let parallel = d.edge_ids().find(|&m| {
            m != b
                && d.edge(m).kind == EdgeKind::Chain
                && endpoints.get(&m).map_or(false, |(t, h)| {
                    let sites = [t.map(|p| p.site), h.map(|p| p.site)];
                    sites.contains(&Some(Site::Vertex(v1)))
                        && sites.contains(&Some(Site::Vertex(v2)))
                })
        });
        if let Some(m) = parallel {
            let mut s = Surgeon::new(d.clone());
            let s1 = s.remove_bond_vertex(v1);
            let s2 = s.remove_bond_vertex(v2);
            let other1 = s1[1..].iter().find(|r| r.edge != m).copied().unwrap();
            let other2 = s2[1..].iter().find(|r| r.edge != m).copied().unwrap();
            s.delete_edge(b);
            s.delete_edge(m);
            s.connect(other1, other2);
            let factor = SkeinValue::theta().scale(&inv_delta);
            return Some((factor, s.finish()));
        }
        // Handcuff summand: a chain loop at one endpoint.
        for (looped, through) in [(v2, v1), (v1, v2)] {
            let slots = d.bond_vertex(looped);
            if slots[1].edge == slots[2].edge {
                let l = slots[1].edge;
                let mut s = Surgeon::new(d.clone());
                let st = s.remove_bond_vertex(through);
                s.remove_bond_vertex(looped);
                s.delete_edge(b);
                s.delete_edge(l);
                s.connect(st[1], st[2]);
                let factor = SkeinValue::handcuff().scale(&inv_delta);
                return Some((factor, s.finish()));
            }
        }
    }
    None
}

// ---- the recursive evaluator ----

#[cfg(feature = "parallel")]
type MemoCell = std::sync::Mutex<BTreeMap<Vec<u8>, SkeinValue>>;
#[cfg(not(feature = "parallel"))]
type MemoCell = core::cell::RefCell<BTreeMap<Vec<u8>, SkeinValue>>;

struct Evaluator {
    opts: EvaluationOptions,
    memo: MemoCell,
    expanded: AtomicU64,
    hits: AtomicU64,
    coeff_a: Coefficient,
    coeff_a_inv: Coefficient,
    alpha: SkeinValue,
    beta: SkeinValue,
    theta_over_delta: SkeinValue,
    delta: IntLaurent,
}

impl Evaluator {
    fn new(opts: EvaluationOptions) -> Self {
        Evaluator {
            opts,
            memo: MemoCell::default(),
            expanded: AtomicU64::new(0),
            hits: AtomicU64::new(0),
            coeff_a: Coefficient::from_laurent(IntLaurent::monomial(1, 1)),
            coeff_a_inv: Coefficient::from_laurent(IntLaurent::monomial(-1, 1)),
            alpha: skein::alpha(),
            beta: skein::beta(),
            theta_over_delta: SkeinValue::basis_term(1, 0, Coefficient::inv_delta()),
            delta: laurent::delta(),
        }
    }

    fn memo_get(&self, key: &[u8]) -> Option<SkeinValue> {
        #[cfg(feature = "parallel")]
        {
            self.memo.lock().unwrap().get(key).cloned()
        }
        #[cfg(not(feature = "parallel"))]
        {
            self.memo.borrow().get(key).cloned()
        }
    }

    fn memo_put(&self, key: Vec<u8>, value: SkeinValue) {
        #[cfg(feature = "parallel")]
        {
            self.memo.lock().unwrap().insert(key, value);
        }
        #[cfg(not(feature = "parallel"))]
        {
            self.memo.borrow_mut().insert(key, value);
        }
    }

    fn eval(&self, d: &BondedDiagram) -> SkeinValue {
        if d.is_empty() {
            return SkeinValue::unit();
        }
        let key = if self.opts.memoize {
            let key = d.canonical_key();
            if let Some(v) = self.memo_get(&key) {
                self.hits.fetch_add(1, Ordering::Relaxed);
                return v;
            }
            Some(key)
        } else {
            None
        };
        let value = if let Some(c) = d.crossing_ids().next() {
            self.expanded.fetch_add(1, Ordering::Relaxed);
            let (da, db) =
                smooth_crossing(d, c).expect("bond crossings were cleared at entry");
            let (va, vb) = self.eval_pair(&da, &db);
            &va.scale(&self.coeff_a) + &vb.scale(&self.coeff_a_inv)
        } else {
            self.eval_crossingless(d)
        };
        if let Some(key) = key {
            self.memo_put(key, value.clone());
        }
        value
    }

    #[cfg(feature = "parallel")]
    fn eval_pair(&self, a: &BondedDiagram, b: &BondedDiagram) -> (SkeinValue, SkeinValue) {
        if self.opts.parallel {
            rayon::join(|| self.eval(a), || self.eval(b))
        } else {
            (self.eval(a), self.eval(b))
        }
    }

    #[cfg(not(feature = "parallel"))]
    fn eval_pair(&self, a: &BondedDiagram, b: &BondedDiagram) -> (SkeinValue, SkeinValue) {
        (self.eval(a), self.eval(b))
    }

    fn eval_crossingless(&self, d: &BondedDiagram) -> SkeinValue {
        let mut value = SkeinValue::unit();
        for part in d.split_components() {
            let pv = if part.bond_vertex_ids().next().is_none() {
                // A free circle.
                SkeinValue::unit().scale_laurent(&self.delta)
            } else {
                self.eval_component(&part)
            };
            value = &value * &pv;
        }
        value
    }

    fn eval_component(&self, part: &BondedDiagram) -> SkeinValue {
        if self.opts.use_connected_sum_shortcut {
            if let Some((factor, rest)) = connected_sum_shortcut(part) {
                let factor = match self.opts.mode {
                    Mode::Framed => factor,
                    Mode::Topological => factor.subst_topological(),
                };
                return &factor * &self.eval(&rest);
            }
        }
        let v = part
            .bond_vertex_ids()
            .next()
            .expect("component with bonds");
        let b = part.bond_vertex(v)[0].edge;
        match self.opts.mode {
            Mode::Framed => {
                let d0 = g0_remove(part, b);
                let dinf = ginf_remove(part, b);
                let (v0, vinf) = self.eval_pair(&d0, &dinf);
                &(&self.alpha * &v0) + &(&self.beta * &vinf)
            }
            Mode::Topological => {
                let d0 = g0_remove(part, b);
                &self.theta_over_delta * &self.eval(&d0)
            }
        }
    }

    fn stats(&self) -> EvalStats {
        EvalStats {
            states_expanded: self.expanded.load(Ordering::Relaxed),
            cache_hits: self.hits.load(Ordering::Relaxed),
        }
    }
}

/// Evaluates a diagram per the options. Framing markers are folded first,
/// then any crossings involving bond arcs are slid off the bonds (an
/// isotopy) before the skein expansion runs.
pub fn evaluate(
    d: &BondedDiagram,
    opts: &EvaluationOptions,
) -> Result<EvaluationResult, EvalError> {
    let writhe = d.writhe();
    let bond_count = d.bond_count();
    let (folded, unit) = fold_markers(d)?;
    let cleared = moves::clear_bond_crossings(&folded);
    let ev = Evaluator::new(*opts);
    let value = ev.eval(&cleared).scale(&unit);
    Ok(EvaluationResult {
        value,
        writhe,
        bond_count,
        stats: ev.stats(),
    })
}

/// Evaluates in the framed module basis `{Θ^m H^n}`.
pub fn evaluate_framed(
    d: &BondedDiagram,
    opts: &EvaluationOptions,
) -> Result<EvaluationResult, EvalError> {
    let opts = EvaluationOptions {
        mode: Mode::Framed,
        ..*opts
    };
    evaluate(d, &opts)
}

/// Evaluates in the topological basis `{Θ^n}` by the direct rule, and
/// cross-checks the result against the substituted framed value; the two
/// computations must agree exactly.
pub fn evaluate_topological(
    d: &BondedDiagram,
    opts: &EvaluationOptions,
) -> Result<EvaluationResult, EvalError> {
    let topo_opts = EvaluationOptions {
        mode: Mode::Topological,
        ..*opts
    };
    let direct = evaluate(d, &topo_opts)?;
    let framed = evaluate_framed(d, opts)?;
    if framed.value.subst_topological() != direct.value {
        return Err(EvalError::TopologicalMismatch);
    }
    Ok(direct)
}

/// `(-A^3)^k` as an exact Laurent unit.
pub fn neg_a_cubed_pow(k: i64) -> IntLaurent {
    let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
    IntLaurent::monomial(3 * k, sign)
}

/// The writhe-normalized value `(-A^3)^{-w(d)} · [d]`.
pub fn normalized_value(
    d: &BondedDiagram,
    opts: &EvaluationOptions,
) -> Result<SkeinValue, EvalError> {
    let r = evaluate(d, opts)?;
    Ok(r.value.scale_laurent(&neg_a_cubed_pow(-r.writhe)))
}

/// The reduced polynomial
/// `(-A^3)^{-w} (1+A^4)^{n-1} (1+A^4+A^8)^{n-1} · [d]` in
/// `Z[A^{±1}, Θ, H]`; every coefficient must clear its denominator exactly.
pub fn reduced_polynomial(d: &BondedDiagram) -> Result<BivariateLaurent, EvalError> {
    let n = d.bond_count() as u32;
    if n == 0 {
        return Err(EvalError::NoBonds);
    }
    let r = evaluate_framed(d, &EvaluationOptions::default())?;
    let unit = neg_a_cubed_pow(-r.writhe);
    let mut out = BivariateLaurent::zero();
    for ((m, h), c) in r.value.terms() {
        let cleared = c
            .clear_denominator(n - 1, n - 1)
            .ok_or(EvalError::ResidualDenominator)?;
        out.insert((m, h), &cleared * &unit);
    }
    Ok(out)
}

/// The classical bracket of a bondless diagram, normalized so the unknot
/// evaluates to 1.
pub fn classical_bracket(d: &BondedDiagram) -> Result<IntLaurent, EvalError> {
    if d.has_bonds() {
        return Err(EvalError::HasBonds);
    }
    let r = evaluate_framed(d, &EvaluationOptions::default())?;
    let c = &r.value.coefficient(0, 0) * &Coefficient::inv_delta();
    c.clear_denominator(0, 0)
        .ok_or(EvalError::ResidualDenominator)
}
