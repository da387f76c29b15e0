//! Brute-force references.
//!
//! Everything here is written independently of `dynamics`, `explorer` and
//! `graph`: matchings are plain sets of `(left, right)` index pairs and
//! preferences are read by scanning the tiers, so agreement tests between
//! the two sides are meaningful. Only [`Instance`] is shared.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::explorer::{SearchVerdict, VerdictKind};
use crate::matching::Matching;
use crate::model::{AgentId, Instance, Pair, Side};
use crate::reduction::SourceGraph;

/// Largest graph accepted by [`brute_force_independent_set`].
pub const MAX_BRUTE_FORCE_VERTICES: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GuardExceeded {
    pub limit: usize,
}

impl core::fmt::Display for GuardExceeded {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "input exceeds the oracle guard of {}", self.limit)
    }
}

/// The lexicographically least `k`-subset of pairwise non-adjacent
/// vertices, if any.
pub fn brute_force_independent_set(g: &SourceGraph) -> Result<Option<Vec<usize>>, GuardExceeded> {
    if g.n() > MAX_BRUTE_FORCE_VERTICES {
        return Err(GuardExceeded { limit: MAX_BRUTE_FORCE_VERTICES });
    }
    let mut adjacent = vec![0u32; g.n()];
    for &(a, b) in g.edges() {
        adjacent[a] |= 1 << b;
        adjacent[b] |= 1 << a;
    }
    let mut chosen = Vec::with_capacity(g.k());
    Ok(choose(&adjacent, g.k(), 0, 0, &mut chosen).then_some(chosen))
}

fn choose(adjacent: &[u32], k: usize, from: usize, taken: u32, chosen: &mut Vec<usize>) -> bool {
    if chosen.len() == k {
        return true;
    }
    for v in from..adjacent.len() {
        if adjacent[v] & taken == 0 {
            chosen.push(v);
            if choose(adjacent, k, v + 1, taken | (1 << v), chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

type PairSet = BTreeSet<(usize, usize)>;

/// Position of `other` in the list of `who`, or `None` if unacceptable.
fn tier_of(inst: &Instance, who: AgentId, other: usize) -> Option<usize> {
    inst.prefs(who).tiers().iter().position(|t| t.contains(&other))
}

fn partner(m: &PairSet, who: AgentId) -> Option<usize> {
    m.iter().find_map(|&(l, r)| match who.side {
        Side::Left if l == who.index => Some(r),
        Side::Right if r == who.index => Some(l),
        _ => None,
    })
}

fn better_off(inst: &Instance, m: &PairSet, who: AgentId, candidate: usize) -> bool {
    let Some(cand) = tier_of(inst, who, candidate) else { return false };
    match partner(m, who) {
        None => true,
        Some(cur) => cand < tier_of(inst, who, cur).expect("matched partners are acceptable"),
    }
}

fn blocks(inst: &Instance, m: &PairSet, l: usize, r: usize) -> bool {
    !m.contains(&(l, r)) && better_off(inst, m, AgentId::left(l), r) && better_off(inst, m, AgentId::right(r), l)
}

fn stable(inst: &Instance, m: &PairSet) -> bool {
    (0..inst.num_left()).all(|l| (0..inst.num_right()).all(|r| !blocks(inst, m, l, r)))
}

fn acceptable(inst: &Instance, l: usize, r: usize) -> bool {
    tier_of(inst, AgentId::left(l), r).is_some() && tier_of(inst, AgentId::right(r), l).is_some()
}

/// Successor of `m` through `(l, r)` if the interchange is a legal move.
fn interchange(inst: &Instance, m: &PairSet, l: usize, r: usize) -> Option<PairSet> {
    if !blocks(inst, m, l, r) {
        return None;
    }
    let old_r = partner(m, AgentId::left(l));
    let old_l = partner(m, AgentId::right(r));
    let mut next: PairSet = m.iter().copied().filter(|&(a, b)| a != l && b != r).collect();
    next.insert((l, r));
    if let (Some(ol), Some(or)) = (old_l, old_r) {
        if !acceptable(inst, ol, or) {
            return None;
        }
        next.insert((ol, or));
    }
    Some(next)
}

fn to_matching(inst: &Instance, m: &PairSet) -> Matching {
    Matching::from_pairs(inst, m.iter().map(|&(l, r)| Pair::new(l, r))).expect("oracle produced a matching")
}

/// All matchings, each once, including the empty one. Built by deciding
/// every acceptable pair in turn (take it or skip it).
pub fn enumerate_matchings(inst: &Instance, limit: usize) -> Result<Vec<Matching>, GuardExceeded> {
    let mut edges = Vec::new();
    for l in 0..inst.num_left() {
        for r in 0..inst.num_right() {
            if acceptable(inst, l, r) {
                edges.push((l, r));
            }
        }
    }
    let mut out = Vec::new();
    let mut current = PairSet::new();
    take_or_skip(inst, &edges, 0, &mut current, &mut out, limit)?;
    Ok(out)
}

fn take_or_skip(
    inst: &Instance,
    edges: &[(usize, usize)],
    at: usize,
    current: &mut PairSet,
    out: &mut Vec<Matching>,
    limit: usize,
) -> Result<(), GuardExceeded> {
    let Some(&(l, r)) = edges.get(at) else {
        if out.len() >= limit {
            return Err(GuardExceeded { limit });
        }
        out.push(to_matching(inst, current));
        return Ok(());
    };
    take_or_skip(inst, edges, at + 1, current, out, limit)?;
    if current.iter().all(|&(a, b)| a != l && b != r) {
        current.insert((l, r));
        take_or_skip(inst, edges, at + 1, current, out, limit)?;
        current.remove(&(l, r));
    }
    Ok(())
}

pub fn all_stable_matchings(inst: &Instance, limit: usize) -> Result<Vec<Matching>, GuardExceeded> {
    Ok(enumerate_matchings(inst, limit)?.into_iter().filter(|m| stable(inst, &tuples(m))).collect())
}

fn tuples(m: &Matching) -> PairSet {
    m.pairs().map(|p| (p.left, p.right)).collect()
}

/// Left-proposing deferred acceptance after breaking every tie by a seeded
/// shuffle. Weakly stable for the original instance.
pub fn gale_shapley_tiebreak(inst: &Instance, tiebreak_seed: u64) -> Matching {
    let mut rng = crate::random::rng(tiebreak_seed);
    let mut strict = |who: AgentId| -> Vec<usize> {
        let mut order = Vec::new();
        for tier in inst.prefs(who).tiers() {
            let mut t = tier.clone();
            t.shuffle(&mut rng);
            order.extend(t);
        }
        order
    };
    let proposals: Vec<Vec<usize>> = inst.agents(Side::Left).map(&mut strict).collect();
    let receiver_rank: Vec<BTreeMap<usize, usize>> = inst
        .agents(Side::Right)
        .map(|w| strict(w).into_iter().enumerate().map(|(pos, l)| (l, pos)).collect())
        .collect();

    let mut next = vec![0usize; inst.num_left()];
    let mut holds: Vec<Option<usize>> = vec![None; inst.num_right()];
    let mut free: Vec<usize> = (0..inst.num_left()).rev().collect();
    while let Some(l) = free.pop() {
        let Some(&r) = proposals[l].get(next[l]) else { continue };
        next[l] += 1;
        match holds[r] {
            None => holds[r] = Some(l),
            Some(cur) if receiver_rank[r][&l] < receiver_rank[r][&cur] => {
                holds[r] = Some(l);
                free.push(cur);
            }
            Some(_) => free.push(l),
        }
    }
    Matching::from_pairs(inst, holds.iter().enumerate().filter_map(|(r, l)| l.map(|l| Pair::new(l, r))))
        .expect("deferred acceptance yields a matching")
}

/// Naive reachability: depth-first recursion over pair sets. Reports a
/// (not necessarily shortest) witness path when a stable matching is found.
pub fn exhaustive_reachability(inst: &Instance, m0: &Matching, limit: usize) -> SearchVerdict {
    let start = tuples(m0);
    let mut seen = BTreeSet::new();
    let mut path = Vec::new();
    let outcome = dfs(inst, &start, &mut seen, &mut path, limit);
    let explored = seen.len();
    match outcome {
        Dfs::Found => SearchVerdict {
            kind: VerdictKind::ReachableStable,
            witness: Some(path.iter().map(|&(l, r)| Pair::new(l, r)).collect()),
            explored,
            frontier_peak: 0,
        },
        Dfs::Exhausted => SearchVerdict { kind: VerdictKind::NotReachable, witness: None, explored, frontier_peak: 0 },
        Dfs::TooBig => SearchVerdict { kind: VerdictKind::Inconclusive, witness: None, explored, frontier_peak: 0 },
    }
}

enum Dfs {
    Found,
    Exhausted,
    TooBig,
}

fn dfs(
    inst: &Instance,
    m: &PairSet,
    seen: &mut BTreeSet<PairSet>,
    path: &mut Vec<(usize, usize)>,
    limit: usize,
) -> Dfs {
    if seen.contains(m) {
        return Dfs::Exhausted;
    }
    if seen.len() >= limit {
        return Dfs::TooBig;
    }
    seen.insert(m.clone());
    if stable(inst, m) {
        return Dfs::Found;
    }
    for l in 0..inst.num_left() {
        for r in 0..inst.num_right() {
            if let Some(next) = interchange(inst, m, l, r) {
                path.push((l, r));
                match dfs(inst, &next, seen, path, limit) {
                    Dfs::Exhausted => {}
                    other => return other,
                }
                path.pop();
            }
        }
    }
    Dfs::Exhausted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn independent_sets() {
        let k2 = SourceGraph::new(2, &[(0, 1)], 1).unwrap();
        assert_eq!(brute_force_independent_set(&k2), Ok(Some(vec![0])));
        assert_eq!(brute_force_independent_set(&k2.with_k(2).unwrap()), Ok(None));
        let c5 = SourceGraph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], 2).unwrap();
        assert_eq!(brute_force_independent_set(&c5), Ok(Some(vec![0, 2])));
        assert_eq!(brute_force_independent_set(&c5.with_k(3).unwrap()), Ok(None));
        let big = SourceGraph::new(26, &[], 1).unwrap();
        assert_eq!(brute_force_independent_set(&big), Err(GuardExceeded { limit: 25 }));
    }

    /// Cross-check against plain enumeration of all k-subsets of C5.
    #[test]
    fn c5_pairs_by_subset_enumeration() {
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)];
        let mut independent = Vec::new();
        for a in 0..5 {
            for b in a + 1..5 {
                if !edges.iter().any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b)) {
                    independent.push(vec![a, b]);
                }
            }
        }
        assert_eq!(independent.len(), 5);
        let g = SourceGraph::new(5, &edges, 2).unwrap();
        assert_eq!(brute_force_independent_set(&g).unwrap().unwrap(), independent[0]);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_matchings(&fixtures::single_pair(), 10).unwrap().len(), 2);
        let empty = enumerate_matchings(&Instance::empty(), 10).unwrap();
        assert_eq!(empty.len(), 1);
        assert!(empty[0].is_empty());
        let all = enumerate_matchings(&fixtures::example1(), 1_000).unwrap();
        // sum over j of C(4,j)^2 * j! = 1 + 16 + 72 + 96 + 24
        assert_eq!(all.len(), 209);
        assert_eq!(all.iter().filter(|m| m.is_perfect()).count(), 24);
        assert!(enumerate_matchings(&fixtures::example1(), 100).is_err());
    }

    #[test]
    fn stable_matchings() {
        let inst = fixtures::example1();
        let all = all_stable_matchings(&inst, 1_000).unwrap();
        assert!(all.contains(&fixtures::example1_man_optimal(&inst)));

        let inst = fixtures::mixed_3x3();
        let c = inst.lookup("c").unwrap();
        for m in all_stable_matchings(&inst, 1_000).unwrap() {
            assert!(!m.is_matched(c));
        }
    }

    #[test]
    fn gale_shapley() {
        let inst = fixtures::example1();
        for seed in 0..5 {
            assert_eq!(gale_shapley_tiebreak(&inst, seed), fixtures::example1_man_optimal(&inst));
        }
        assert!(gale_shapley_tiebreak(&Instance::empty(), 3).is_empty());
        let tied = fixtures::all_tied_2x2();
        let outputs: BTreeSet<Vec<Pair>> = (0..16).map(|s| gale_shapley_tiebreak(&tied, s).pairs().collect()).collect();
        for m in &outputs {
            assert!(stable(&tied, &m.iter().map(|p| (p.left, p.right)).collect()));
        }
        assert!(outputs.len() > 1);
    }

    #[test]
    fn exhaustive_on_example1() {
        let inst = fixtures::example1();
        let v = exhaustive_reachability(&inst, &fixtures::example1_m0(&inst), 10_000);
        assert_eq!(v.kind, VerdictKind::ReachableStable);
        let v = exhaustive_reachability(&inst, &fixtures::example1_n0(&inst), 10_000);
        assert_eq!(v.kind, VerdictKind::NotReachable);
        let v = exhaustive_reachability(&inst, &fixtures::example1_man_optimal(&inst), 10_000);
        assert_eq!(v.witness, Some(Vec::new()));
        let v = exhaustive_reachability(&inst, &fixtures::example1_n0(&inst), 3);
        assert_eq!(v.kind, VerdictKind::Inconclusive);
    }
}
