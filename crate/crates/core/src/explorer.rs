//! Breadth-first reachability search over the divorce graph.
//!
//! Nodes are matchings, deduplicated by [`CanonicalKey`]; arcs are feasible
//! b-interchanges. The search stops at the first stable matching it
//! discovers, which yields a witness of minimum length.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::dynamics::{apply_b_interchange_with, blocking_pairs, is_stable, InterchangeRule};
use crate::matching::{CanonicalKey, Matching};
use crate::model::{Instance, Pair};

/// Limits for a search. `None` means unlimited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of distinct matchings to discover, root included.
    pub max_nodes: Option<usize>,
    /// Wall-clock limit. Only enforced when a [`Clock`] is supplied.
    pub max_millis: Option<u64>,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget { max_nodes: None, max_millis: None };

    pub const fn nodes(max_nodes: usize) -> Self {
        Budget { max_nodes: Some(max_nodes), max_millis: None }
    }
}

/// Milliseconds since the search started.
pub trait Clock {
    fn elapsed_millis(&self) -> u64;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    ReachableStable,
    NotReachable,
    Inconclusive,
}

impl VerdictKind {
    pub fn code(self) -> &'static str {
        match self {
            VerdictKind::ReachableStable => "REACHABLE_STABLE",
            VerdictKind::NotReachable => "NOT_REACHABLE",
            VerdictKind::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchVerdict {
    pub kind: VerdictKind,
    /// Present exactly when `kind` is `ReachableStable`.
    pub witness: Option<Vec<Pair>>,
    /// Distinct matchings discovered, root included.
    pub explored: usize,
    /// Largest queue length seen.
    pub frontier_peak: usize,
}

/// Called for every feasible b-interchange generated during exploration,
/// including ones that lead back to an already visited matching.
pub trait TransitionObserver {
    fn transition(&mut self, from: &Matching, pair: Pair, to: &Matching);
}

impl<F: FnMut(&Matching, Pair, &Matching)> TransitionObserver for F {
    fn transition(&mut self, from: &Matching, pair: Pair, to: &Matching) {
        self(from, pair, to)
    }
}

struct Ignore;

impl TransitionObserver for Ignore {
    fn transition(&mut self, _: &Matching, _: Pair, _: &Matching) {}
}

#[derive(Clone, Copy, Default)]
pub struct SearchConfig<'a> {
    pub budget: Budget,
    pub rule: InterchangeRule,
    pub clock: Option<&'a dyn Clock>,
}

/// How often (in expansions) the clock is polled.
const CLOCK_POLL: usize = 64;

/// BFS from `m0` with a node budget only; `budget.max_millis` is ignored
/// because no clock is available here.
pub fn reachable_search(inst: &Instance, m0: &Matching, budget: &Budget) -> SearchVerdict {
    let config = SearchConfig { budget: *budget, ..SearchConfig::default() };
    reachable_search_with(inst, m0, &config, &mut Ignore)
}

struct Node {
    parent: u32,
    via: Option<Pair>,
}

pub fn reachable_search_with(
    inst: &Instance,
    m0: &Matching,
    config: &SearchConfig<'_>,
    observer: &mut dyn TransitionObserver,
) -> SearchVerdict {
    let max_nodes = config.budget.max_nodes.unwrap_or(usize::MAX);
    let deadline = config.budget.max_millis.zip(config.clock);

    let inconclusive = |explored, frontier_peak| SearchVerdict {
        kind: VerdictKind::Inconclusive,
        witness: None,
        explored,
        frontier_peak,
    };

    if max_nodes == 0 {
        return inconclusive(0, 0);
    }
    if is_stable(inst, m0) {
        return SearchVerdict {
            kind: VerdictKind::ReachableStable,
            witness: Some(Vec::new()),
            explored: 1,
            frontier_peak: 1,
        };
    }

    let mut nodes = alloc::vec![Node { parent: u32::MAX, via: None }];
    let mut visited: HashMap<CanonicalKey, u32> = HashMap::new();
    visited.insert(m0.key(), 0);
    let mut queue: VecDeque<(u32, Matching)> = VecDeque::new();
    queue.push_back((0, m0.clone()));
    let mut frontier_peak = 1;
    let mut expansions = 0usize;

    while let Some((id, m)) = queue.pop_front() {
        expansions += 1;
        if let Some((limit, clock)) = deadline {
            if expansions.is_multiple_of(CLOCK_POLL) && clock.elapsed_millis() > limit {
                return inconclusive(nodes.len(), frontier_peak);
            }
        }
        for pair in blocking_pairs(inst, &m) {
            let Ok(next) = apply_b_interchange_with(inst, &m, pair, config.rule) else {
                continue;
            };
            observer.transition(&m, pair, &next);
            let key = next.key();
            if visited.contains_key(&key) {
                continue;
            }
            if nodes.len() >= max_nodes {
                return inconclusive(nodes.len(), frontier_peak);
            }
            let next_id = nodes.len() as u32;
            nodes.push(Node { parent: id, via: Some(pair) });
            visited.insert(key, next_id);
            if is_stable(inst, &next) {
                return SearchVerdict {
                    kind: VerdictKind::ReachableStable,
                    witness: Some(trace(&nodes, next_id)),
                    explored: nodes.len(),
                    frontier_peak,
                };
            }
            queue.push_back((next_id, next));
            frontier_peak = frontier_peak.max(queue.len());
        }
    }

    SearchVerdict { kind: VerdictKind::NotReachable, witness: None, explored: nodes.len(), frontier_peak }
}

fn trace(nodes: &[Node], mut id: u32) -> Vec<Pair> {
    let mut path = Vec::new();
    while let Some(pair) = nodes[id as usize].via {
        path.push(pair);
        id = nodes[id as usize].parent;
    }
    path.reverse();
    path
}
