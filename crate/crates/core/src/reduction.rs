//! Reduction from Independent Set to reaching a stable matching by
//! b-interchanges.
//!
//! For a graph with vertices `v_1..v_n`, edges `e_1..e_m` and a target `k`,
//! the left side is `V ∪ E ∪ F ∪ A ∪ X ∪ C` and the right side is
//! `S ∪ T ∪ B ∪ E^V ∪ Y ∪ D`, with `|S| = k`, `|T| = n - k` and one agent
//! `e^{v}_j` per edge endpoint. Each side has `4m + 2n` agents.
//!
//! Preferences (parentheses are ties, brackets are ascending index order):
//!
//! ```text
//! v_i     : (T) > (E(v_i)) > (S) > b_i
//! a_i     : (B) > s_i                      i <= k
//! a_i     : (B) > t_{i-k}                  i >  k
//! e_j     : (e^v_j, e^v'_j) > y_j
//! f_j     : (e^v_j, e^v'_j) > d_j
//! x_j     : y_j > (e^v_j, e^v'_j) > d_j
//! c_j     : d_j > (e^v_j, e^v'_j) > y_j
//! s_i     : [V] > a_i
//! t_i     : (V) > a_{i+k}
//! b_i     : [A] > v_i
//! e^v_j   : e_j > v > f_j > c_j > x_j
//! y_j     : x_j > e_j > c_j
//! d_j     : c_j > f_j > x_j
//! ```
//!
//! The initial matching pairs `v_i` with `b_i`, `a_i` with `s_i` or
//! `t_{i-k}`, `x_j` with `e^v_j` and `c_j` with `e^v'_j` (where `v` is the
//! endpoint with the smaller index), `e_j` with `y_j` and `f_j` with `d_j`.
//!
//! A `k`-vertex independent set yields an explicit b-interchange sequence to
//! a stable matching ([`build_certificate`]); conversely the vertices matched
//! into `S` by a reachable stable matching form one
//! ([`extract_independent_set`]).

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::dynamics::is_stable;
use crate::matching::Matching;
use crate::model::{AgentId, Instance, Pair, PreferenceList};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionError {
    SelfLoop(usize),
    DuplicateEdge(usize, usize),
    VertexOutOfRange { vertex: usize, n: usize },
    TargetTooLarge { k: usize, n: usize },
    WrongSetSize { expected: usize, found: usize },
    NotIndependent(usize, usize),
    NotStable,
}

impl fmt::Display for ReductionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionError::SelfLoop(v) => write!(f, "self-loop at vertex v{}", v + 1),
            ReductionError::DuplicateEdge(a, b) => write!(f, "duplicate edge {{v{}, v{}}}", a + 1, b + 1),
            ReductionError::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex v{} out of range for n = {n}", vertex + 1)
            }
            ReductionError::TargetTooLarge { k, n } => write!(f, "k = {k} exceeds n = {n}"),
            ReductionError::WrongSetSize { expected, found } => {
                write!(f, "vertex set has {found} vertices, expected k = {expected}")
            }
            ReductionError::NotIndependent(a, b) => {
                write!(f, "vertices v{} and v{} are adjacent", a + 1, b + 1)
            }
            ReductionError::NotStable => f.write_str("matching is not stable"),
        }
    }
}

impl core::error::Error for ReductionError {}

/// An Independent Set instance. Vertices are `0..n` (displayed 1-based);
/// edges are stored with the smaller endpoint first, in input order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    k: usize,
}

impl SourceGraph {
    pub fn new(n: usize, edges: &[(usize, usize)], k: usize) -> Result<Self, ReductionError> {
        if k > n {
            return Err(ReductionError::TargetTooLarge { k, n });
        }
        let mut seen = BTreeSet::new();
        let mut stored = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(ReductionError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(ReductionError::SelfLoop(a));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(ReductionError::DuplicateEdge(e.0, e.1));
            }
            stored.push(e);
        }
        Ok(SourceGraph { n, edges: stored, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn with_k(&self, k: usize) -> Result<Self, ReductionError> {
        SourceGraph::new(self.n, &self.edges, k)
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        let e = (a.min(b), a.max(b));
        self.edges.contains(&e)
    }

    /// Checks that `set` is an independent set of exactly `k` vertices.
    pub fn check_independent_set(&self, set: &[usize]) -> Result<(), ReductionError> {
        let distinct: BTreeSet<usize> = set.iter().copied().collect();
        if let Some(&v) = distinct.iter().find(|&&v| v >= self.n) {
            return Err(ReductionError::VertexOutOfRange { vertex: v, n: self.n });
        }
        if distinct.len() != self.k || set.len() != self.k {
            return Err(ReductionError::WrongSetSize { expected: self.k, found: distinct.len() });
        }
        for &(a, b) in &self.edges {
            if distinct.contains(&a) && distinct.contains(&b) {
                return Err(ReductionError::NotIndependent(a, b));
            }
        }
        Ok(())
    }
}

/// Agent indices of the gadget for one edge `e_j = {v, v'}`.
///
/// `v` is the endpoint whose `e^v_j` starts matched to `x_j`; `v'` starts
/// with `e^v'_j` matched to `c_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeGadget {
    pub v: usize,
    pub v_prime: usize,
    // left side
    pub e: usize,
    pub f: usize,
    pub x: usize,
    pub c: usize,
    // right side
    pub ev: usize,
    pub ev_prime: usize,
    pub y: usize,
    pub d: usize,
}

impl EdgeGadget {
    /// The `E^V` agent of this edge belonging to `vertex`, if it is an
    /// endpoint.
    pub fn endpoint_agent(&self, vertex: usize) -> Option<usize> {
        if vertex == self.v {
            Some(self.ev)
        } else if vertex == self.v_prime {
            Some(self.ev_prime)
        } else {
            None
        }
    }
}

/// Where every gadget agent lives in the reduced instance. Left-side
/// families: `vertex`, `a`, and the `e`, `f`, `x`, `c` fields of each edge;
/// right-side families: `s`, `t`, `b`, and `ev`, `ev_prime`, `y`, `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionMeta {
    pub n: usize,
    pub k: usize,
    pub vertex: Vec<usize>,
    pub a: Vec<usize>,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub b: Vec<usize>,
    pub edges: Vec<EdgeGadget>,
}

impl ReductionMeta {
    /// The vertex whose agent is `left`, if any.
    pub fn vertex_of(&self, left: usize) -> Option<usize> {
        self.vertex.iter().position(|&l| l == left)
    }

    pub fn is_s(&self, right: usize) -> bool {
        self.s.contains(&right)
    }

    pub fn is_t(&self, right: usize) -> bool {
        self.t.contains(&right)
    }

    pub fn is_b(&self, right: usize) -> bool {
        self.b.contains(&right)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionArtifact {
    pub graph: SourceGraph,
    pub instance: Instance,
    pub m0: Matching,
    pub meta: ReductionMeta,
}

pub fn vertex_name(i: usize) -> String {
    format!("v_{}", i + 1)
}

fn indexed(prefix: &str, i: usize) -> String {
    format!("{prefix}_{}", i + 1)
}

/// `e^{v_i}_j` for vertex `i` and edge `j` (both zero-based).
pub fn endpoint_name(vertex: usize, edge: usize) -> String {
    format!("e^{{v_{}}}_{}", vertex + 1, edge + 1)
}

/// Builds the reduced instance and its initial matching.
pub fn reduce(g: &SourceGraph) -> ReductionArtifact {
    let (n, m, k) = (g.n, g.edges.len(), g.k);

    // Left: V, E, F, A, X, C. Right: S, T, B, E^V, Y, D.
    let vertex: Vec<usize> = (0..n).collect();
    let e_base = n;
    let f_base = n + m;
    let a: Vec<usize> = (0..n).map(|i| n + 2 * m + i).collect();
    let x_base = 2 * n + 2 * m;
    let c_base = 2 * n + 3 * m;

    let s: Vec<usize> = (0..k).collect();
    let t: Vec<usize> = (k..n).collect();
    let b: Vec<usize> = (0..n).map(|i| n + i).collect();
    let ev_base = 2 * n;
    let y_base = 2 * n + 2 * m;
    let d_base = 2 * n + 3 * m;

    let edges: Vec<EdgeGadget> = g
        .edges
        .iter()
        .enumerate()
        .map(|(j, &(v, v_prime))| EdgeGadget {
            v,
            v_prime,
            e: e_base + j,
            f: f_base + j,
            x: x_base + j,
            c: c_base + j,
            ev: ev_base + 2 * j,
            ev_prime: ev_base + 2 * j + 1,
            y: y_base + j,
            d: d_base + j,
        })
        .collect();

    let side = 4 * m + 2 * n;
    let mut left_names = vec![String::new(); side];
    let mut right_names = vec![String::new(); side];
    for i in 0..n {
        left_names[vertex[i]] = vertex_name(i);
        left_names[a[i]] = indexed("a", i);
        right_names[b[i]] = indexed("b", i);
    }
    for i in 0..k {
        right_names[s[i]] = indexed("s", i);
    }
    for i in 0..n - k {
        right_names[t[i]] = indexed("t", i);
    }
    for (j, gad) in edges.iter().enumerate() {
        left_names[gad.e] = indexed("e", j);
        left_names[gad.f] = indexed("f", j);
        left_names[gad.x] = indexed("x", j);
        left_names[gad.c] = indexed("c", j);
        right_names[gad.ev] = endpoint_name(gad.v, j);
        right_names[gad.ev_prime] = endpoint_name(gad.v_prime, j);
        right_names[gad.y] = indexed("y", j);
        right_names[gad.d] = indexed("d", j);
    }

    let mut left_prefs = vec![PreferenceList::default(); side];
    let mut right_prefs = vec![PreferenceList::default(); side];

    let tiers = |groups: Vec<Vec<usize>>| PreferenceList::new(groups.into_iter().filter(|t| !t.is_empty()).collect());

    for i in 0..n {
        let incident: Vec<usize> = edges.iter().filter_map(|gad| gad.endpoint_agent(i)).collect();
        left_prefs[vertex[i]] = tiers(vec![t.clone(), incident, s.clone(), vec![b[i]]]);
        let fallback = if i < k { s[i] } else { t[i - k] };
        left_prefs[a[i]] = tiers(vec![b.clone(), vec![fallback]]);
    }
    for gad in &edges {
        let pair = vec![gad.ev, gad.ev_prime];
        left_prefs[gad.e] = tiers(vec![pair.clone(), vec![gad.y]]);
        left_prefs[gad.f] = tiers(vec![pair.clone(), vec![gad.d]]);
        left_prefs[gad.x] = tiers(vec![vec![gad.y], pair.clone(), vec![gad.d]]);
        left_prefs[gad.c] = tiers(vec![vec![gad.d], pair, vec![gad.y]]);
    }

    for i in 0..k {
        right_prefs[s[i]] = PreferenceList::strict(vertex.iter().copied().chain([a[i]]));
    }
    for i in 0..n - k {
        right_prefs[t[i]] = tiers(vec![vertex.clone(), vec![a[i + k]]]);
    }
    for i in 0..n {
        right_prefs[b[i]] = PreferenceList::strict(a.iter().copied().chain([vertex[i]]));
    }
    for gad in &edges {
        for (agent, endpoint) in [(gad.ev, gad.v), (gad.ev_prime, gad.v_prime)] {
            right_prefs[agent] = PreferenceList::strict([gad.e, vertex[endpoint], gad.f, gad.c, gad.x]);
        }
        right_prefs[gad.y] = PreferenceList::strict([gad.x, gad.e, gad.c]);
        right_prefs[gad.d] = PreferenceList::strict([gad.c, gad.f, gad.x]);
    }

    let instance =
        Instance::new(left_names, right_names, left_prefs, right_prefs).expect("reduction output is a valid instance");

    let mut pairs = Vec::with_capacity(side);
    for i in 0..n {
        pairs.push(Pair::new(vertex[i], b[i]));
        pairs.push(Pair::new(a[i], if i < k { s[i] } else { t[i - k] }));
    }
    for gad in &edges {
        pairs.push(Pair::new(gad.x, gad.ev));
        pairs.push(Pair::new(gad.c, gad.ev_prime));
        pairs.push(Pair::new(gad.e, gad.y));
        pairs.push(Pair::new(gad.f, gad.d));
    }
    let m0 = Matching::from_pairs(&instance, pairs).expect("initial matching is valid");

    ReductionArtifact { graph: g.clone(), instance, m0, meta: ReductionMeta { n, k, vertex, a, s, t, b, edges } }
}

/// A certificate together with where each stage ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub steps: Vec<Pair>,
    /// Steps `0..stage1_end` match the independent-set vertices into `S`.
    pub stage1_end: usize,
    /// Steps `stage1_end..stage2_end` match the other vertices into `T`.
    pub stage2_end: usize,
    /// `edge_ends[j]` is the prefix length after edge `j`'s gadget is settled.
    pub edge_ends: Vec<usize>,
}

/// The b-interchange sequence that turns the initial matching into a stable
/// one, given an independent set of size `k` (zero-based vertex indices).
pub fn build_certificate(art: &ReductionArtifact, vset: &[usize]) -> Result<Certificate, ReductionError> {
    art.graph.check_independent_set(vset)?;
    let meta = &art.meta;
    let chosen: BTreeSet<usize> = vset.iter().copied().collect();
    let mut steps = Vec::new();

    for (i, &v) in chosen.iter().enumerate() {
        steps.push(Pair::new(meta.vertex[v], meta.s[i]));
    }
    let stage1_end = steps.len();

    for (i, v) in (0..meta.n).filter(|v| !chosen.contains(v)).enumerate() {
        steps.push(Pair::new(meta.vertex[v], meta.t[i]));
    }
    let stage2_end = steps.len();

    let mut edge_ends = Vec::with_capacity(meta.edges.len());
    for gad in &meta.edges {
        if chosen.contains(&gad.v_prime) {
            // e_j takes e^v'_j, then x_j and y_j reunite, then c_j and d_j.
            steps.push(Pair::new(gad.e, gad.ev_prime));
            steps.push(Pair::new(gad.x, gad.y));
            steps.push(Pair::new(gad.c, gad.d));
        } else {
            steps.push(Pair::new(gad.e, gad.ev));
            steps.push(Pair::new(gad.f, gad.ev_prime));
        }
        edge_ends.push(steps.len());
    }

    Ok(Certificate { steps, stage1_end, stage2_end, edge_ends })
}

/// `{v_i | m(v_i) ∈ S}` for a stable matching `m`, as sorted zero-based
/// vertex indices.
pub fn extract_independent_set(art: &ReductionArtifact, m: &Matching) -> Result<Vec<usize>, ReductionError> {
    if !is_stable(&art.instance, m) {
        return Err(ReductionError::NotStable);
    }
    Ok((0..art.meta.n).filter(|&i| m.partner_of_left(art.meta.vertex[i]).is_some_and(|r| art.meta.is_s(r))).collect())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropertyCheck {
    pub holds: bool,
    /// Agents for which the property fails.
    pub counterexamples: Vec<AgentId>,
}

impl PropertyCheck {
    fn from_failures(counterexamples: Vec<AgentId>) -> Self {
        PropertyCheck { holds: counterexamples.is_empty(), counterexamples }
    }
}

/// The six structural properties every stable matching reachable from the
/// initial matching has.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim1Report {
    /// 1. every `a_i` is matched into `B`
    /// 2. every `x_j` is matched to `y_j`
    /// 3. every `c_j` is matched to `d_j`
    /// 4. every `t_i` is matched into `V`
    /// 5. every `s_i` is matched into `V`
    /// 6. for `v_i` matched into `S` and each edge `e_j = {v_i, v_l}`:
    ///    `e_j` is matched to `e^{v_i}_j` and `v_l` is matched into `T`
    pub properties: [PropertyCheck; 6],
}

impl Claim1Report {
    pub fn all_hold(&self) -> bool {
        self.properties.iter().all(|p| p.holds)
    }
}

pub const CLAIM1_DESCRIPTIONS: [&str; 6] = [
    "every a_i is matched into B",
    "every x_j is matched to y_j",
    "every c_j is matched to d_j",
    "every t_i is matched into V",
    "every s_i is matched into V",
    "for v_i matched into S and edge e_j = {v_i, v_l}: e_j is matched to e^{v_i}_j and v_l into T",
];

/// Evaluates the six properties literally on any matching.
pub fn check_claim1(art: &ReductionArtifact, m: &Matching) -> Claim1Report {
    let meta = &art.meta;
    let in_vertices = |left: Option<usize>| left.is_some_and(|l| meta.vertex_of(l).is_some());

    let p1 = meta
        .a
        .iter()
        .filter(|&&a| !m.partner_of_left(a).is_some_and(|r| meta.is_b(r)))
        .map(|&a| AgentId::left(a))
        .collect();
    let p2 = meta.edges.iter().filter(|g| m.partner_of_left(g.x) != Some(g.y)).map(|g| AgentId::left(g.x)).collect();
    let p3 = meta.edges.iter().filter(|g| m.partner_of_left(g.c) != Some(g.d)).map(|g| AgentId::left(g.c)).collect();
    let p4 = meta.t.iter().filter(|&&t| !in_vertices(m.partner_of_right(t))).map(|&t| AgentId::right(t)).collect();
    let p5 = meta.s.iter().filter(|&&s| !in_vertices(m.partner_of_right(s))).map(|&s| AgentId::right(s)).collect();

    let mut p6 = Vec::new();
    for i in 0..meta.n {
        let vi = meta.vertex[i];
        if !m.partner_of_left(vi).is_some_and(|r| meta.is_s(r)) {
            continue;
        }
        for gad in &meta.edges {
            let Some(own) = gad.endpoint_agent(i) else { continue };
            let other = if gad.v == i { gad.v_prime } else { gad.v };
            let edge_ok = m.partner_of_left(gad.e) == Some(own);
            let other_ok = m.partner_of_left(meta.vertex[other]).is_some_and(|r| meta.is_t(r));
            if !(edge_ok && other_ok) {
                p6.push(AgentId::left(vi));
                break;
            }
        }
    }

    Claim1Report {
        properties: [
            PropertyCheck::from_failures(p1),
            PropertyCheck::from_failures(p2),
            PropertyCheck::from_failures(p3),
            PropertyCheck::from_failures(p4),
            PropertyCheck::from_failures(p5),
            PropertyCheck::from_failures(p6),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{blocking_pairs, is_blocking, verify_sequence};
    use crate::model::Comparison;

    fn k2() -> SourceGraph {
        SourceGraph::new(2, &[(0, 1)], 1).unwrap()
    }

    fn name_pair(inst: &Instance, a: &str, b: &str) -> Pair {
        Pair::from_agents(inst.lookup(a).unwrap(), inst.lookup(b).unwrap()).unwrap()
    }

    #[test]
    fn sizes() {
        for (g, size) in [
            (k2(), 8),
            (SourceGraph::new(3, &[(0, 1), (1, 2), (0, 2)], 1).unwrap(), 18),
            (SourceGraph::new(1, &[], 1).unwrap(), 2),
            (SourceGraph::new(3, &[(0, 1), (1, 2)], 2).unwrap(), 14),
        ] {
            let art = reduce(&g);
            assert_eq!(art.instance.num_left(), size);
            assert_eq!(art.instance.num_right(), size);
            assert!(art.m0.is_perfect());
        }
    }

    #[test]
    fn edgeless_single_vertex() {
        let art = reduce(&SourceGraph::new(1, &[], 1).unwrap());
        let expected = Matching::from_names(&art.instance, &[("v_1", "b_1"), ("a_1", "s_1")]).unwrap();
        assert_eq!(art.m0, expected);
    }

    #[test]
    fn invalid_graphs() {
        assert_eq!(SourceGraph::new(2, &[(0, 0)], 1), Err(ReductionError::SelfLoop(0)));
        assert_eq!(SourceGraph::new(2, &[(0, 1), (1, 0)], 1), Err(ReductionError::DuplicateEdge(0, 1)));
        assert_eq!(SourceGraph::new(2, &[], 3), Err(ReductionError::TargetTooLarge { k: 3, n: 2 }));
        assert!(matches!(SourceGraph::new(2, &[(0, 2)], 1), Err(ReductionError::VertexOutOfRange { .. })));
    }

    #[test]
    fn vertex_agents_tie_t_agents() {
        let art = reduce(&SourceGraph::new(3, &[(0, 1)], 1).unwrap());
        let inst = &art.instance;
        let v1 = inst.lookup("v_1").unwrap();
        let (t1, t2) = (inst.lookup("t_1").unwrap(), inst.lookup("t_2").unwrap());
        assert_eq!(inst.compare(v1, t1, t2), Ok(Comparison::Tied));
        let (e, s1, b1) = (inst.lookup("e^{v_1}_1").unwrap(), inst.lookup("s_1").unwrap(), inst.lookup("b_1").unwrap());
        assert_eq!(inst.compare(v1, t1, e), Ok(Comparison::PrefersA));
        assert_eq!(inst.compare(v1, e, s1), Ok(Comparison::PrefersA));
        assert_eq!(inst.compare(v1, s1, b1), Ok(Comparison::PrefersA));
    }

    #[test]
    fn preference_lists_are_verbatim() {
        let art = reduce(&k2());
        let inst = &art.instance;
        let list = |who: &str| -> Vec<Vec<&str>> {
            let id = inst.lookup(who).unwrap();
            let other = id.side.opposite();
            inst.prefs(id)
                .tiers()
                .iter()
                .map(|t| t.iter().map(|&i| inst.name(AgentId { side: other, index: i })).collect())
                .collect()
        };
        assert_eq!(list("v_1"), vec![vec!["t_1"], vec!["e^{v_1}_1"], vec!["s_1"], vec!["b_1"]]);
        assert_eq!(list("a_1"), vec![vec!["b_1", "b_2"], vec!["s_1"]]);
        assert_eq!(list("a_2"), vec![vec!["b_1", "b_2"], vec!["t_1"]]);
        assert_eq!(list("e_1"), vec![vec!["e^{v_1}_1", "e^{v_2}_1"], vec!["y_1"]]);
        assert_eq!(list("f_1"), vec![vec!["e^{v_1}_1", "e^{v_2}_1"], vec!["d_1"]]);
        assert_eq!(list("x_1"), vec![vec!["y_1"], vec!["e^{v_1}_1", "e^{v_2}_1"], vec!["d_1"]]);
        assert_eq!(list("c_1"), vec![vec!["d_1"], vec!["e^{v_1}_1", "e^{v_2}_1"], vec!["y_1"]]);
        assert_eq!(list("s_1"), vec![vec!["v_1"], vec!["v_2"], vec!["a_1"]]);
        assert_eq!(list("t_1"), vec![vec!["v_1", "v_2"], vec!["a_2"]]);
        assert_eq!(list("b_2"), vec![vec!["a_1"], vec!["a_2"], vec!["v_2"]]);
        assert_eq!(list("e^{v_2}_1"), vec![vec!["e_1"], vec!["v_2"], vec!["f_1"], vec!["c_1"], vec!["x_1"]]);
        assert_eq!(list("y_1"), vec![vec!["x_1"], vec!["e_1"], vec!["c_1"]]);
        assert_eq!(list("d_1"), vec![vec!["c_1"], vec!["f_1"], vec!["x_1"]]);
        let expected_m0 = Matching::from_names(
            inst,
            &[
                ("v_1", "b_1"),
                ("v_2", "b_2"),
                ("a_1", "s_1"),
                ("a_2", "t_1"),
                ("x_1", "e^{v_1}_1"),
                ("c_1", "e^{v_2}_1"),
                ("e_1", "y_1"),
                ("f_1", "d_1"),
            ],
        )
        .unwrap();
        assert_eq!(art.m0, expected_m0);
    }

    #[test]
    fn stage_one_pair_blocks_initial_matching() {
        let g = SourceGraph::new(3, &[(0, 1), (1, 2)], 2).unwrap();
        let art = reduce(&g);
        for i in 0..g.n() {
            for &s in &art.meta.s {
                assert!(is_blocking(&art.instance, &art.m0, Pair::new(art.meta.vertex[i], s)));
            }
        }
    }

    #[test]
    fn k2_first_stage_one_step() {
        let art = reduce(&k2());
        let inst = &art.instance;
        let next = crate::dynamics::apply_b_interchange(inst, &art.m0, name_pair(inst, "v_1", "s_1")).unwrap();
        assert!(next.contains(name_pair(inst, "v_1", "s_1")));
        assert!(next.contains(name_pair(inst, "a_1", "b_1")));
    }

    #[test]
    fn k2_certificates() {
        let art = reduce(&k2());
        for (vset, len, chosen) in [(vec![1], 5, vec![1]), (vec![0], 4, vec![0])] {
            let cert = build_certificate(&art, &vset).unwrap();
            assert_eq!(cert.steps.len(), len);
            let replay = verify_sequence(&art.instance, &art.m0, &cert.steps).unwrap();
            assert!(replay.final_stable);
            assert_eq!(extract_independent_set(&art, &replay.final_matching).unwrap(), chosen);
            assert!(check_claim1(&art, &replay.final_matching).all_hold());
        }
        assert_eq!(build_certificate(&art, &[0, 1]), Err(ReductionError::WrongSetSize { expected: 1, found: 2 }));
    }

    #[test]
    fn edgeless_certificate() {
        let art = reduce(&SourceGraph::new(2, &[], 2).unwrap());
        let cert = build_certificate(&art, &[0, 1]).unwrap();
        assert_eq!(cert.steps.len(), 2);
        assert_eq!(cert.stage1_end, 2);
        let replay = verify_sequence(&art.instance, &art.m0, &cert.steps).unwrap();
        assert!(replay.final_stable);
        assert_eq!(extract_independent_set(&art, &replay.final_matching).unwrap(), vec![0, 1]);
    }

    #[test]
    fn adjacent_set_rejected() {
        let art = reduce(&SourceGraph::new(2, &[(0, 1)], 2).unwrap());
        assert_eq!(build_certificate(&art, &[0, 1]), Err(ReductionError::NotIndependent(0, 1)));
    }

    #[test]
    fn extract_rejects_unstable() {
        let art = reduce(&k2());
        assert_eq!(extract_independent_set(&art, &art.m0), Err(ReductionError::NotStable));
    }

    #[test]
    fn claim1_on_initial_and_empty_matchings() {
        let art = reduce(&k2());
        let report = check_claim1(&art, &art.m0);
        assert!(!report.properties[1].holds);
        assert!(!report.properties[2].holds);
        assert!(!report.properties[0].holds);

        let empty = Matching::empty(&art.instance);
        let report = check_claim1(&art, &empty);
        for p in &report.properties[..5] {
            assert!(!p.holds);
        }
        assert!(report.properties[5].holds);
        assert_eq!(report.properties[0].counterexamples.len(), 2);
    }

    #[test]
    fn final_matching_blocking_free_on_gadgets() {
        let g = SourceGraph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3)], 2).unwrap();
        let art = reduce(&g);
        let cert = build_certificate(&art, &[0, 2]).unwrap();
        let replay = verify_sequence(&art.instance, &art.m0, &cert.steps).unwrap();
        assert!(replay.final_stable);
        assert!(blocking_pairs(&art.instance, &replay.final_matching).is_empty());
    }
}
