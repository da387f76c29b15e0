//! Wall-clock budgets and the parallel reachability search.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use dashmap::mapref::entry::Entry;
use dashmap::DashMap;
use divorce_core::dynamics::{apply_b_interchange_with, blocking_pairs, is_stable, InterchangeRule};
use divorce_core::explorer::{reachable_search_with, Budget, Clock, SearchConfig, SearchVerdict, VerdictKind};
use divorce_core::{CanonicalKey, Instance, Matching, Pair};
use rayon::prelude::*;

pub struct StdClock(Instant);

impl StdClock {
    pub fn start() -> Self {
        StdClock(Instant::now())
    }
}

impl Clock for StdClock {
    fn elapsed_millis(&self) -> u64 {
        self.0.elapsed().as_millis() as u64
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SearchOptions {
    pub budget: Budget,
    pub rule: InterchangeRule,
    /// Worker threads for the parallel search; `None` runs the sequential
    /// search.
    pub threads: Option<usize>,
}

/// Runs the sequential or the parallel search with wall-clock enforcement.
pub fn search(inst: &Instance, m0: &Matching, opts: &SearchOptions) -> SearchVerdict {
    match opts.threads {
        None => {
            let clock = StdClock::start();
            let config = SearchConfig { budget: opts.budget, rule: opts.rule, clock: Some(&clock) };
            reachable_search_with(inst, m0, &config, &mut |_: &Matching, _: Pair, _: &Matching| {})
        }
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| parallel_search(inst, m0, &opts.budget, opts.rule)),
            Err(_) => parallel_search(inst, m0, &opts.budget, opts.rule),
        },
    }
}

/// Level-synchronous breadth-first search. Each level is expanded in
/// parallel; the visited set is shared and filled with insert-if-absent.
///
/// Returns the same verdict kind and witness length as the sequential
/// search whenever the node budget is not reached. Which shortest witness
/// is returned can depend on scheduling.
pub fn parallel_search(inst: &Instance, m0: &Matching, budget: &Budget, rule: InterchangeRule) -> SearchVerdict {
    let max_nodes = budget.max_nodes.unwrap_or(usize::MAX);
    let clock = StdClock::start();
    let verdict = |kind, witness, explored, frontier_peak| SearchVerdict { kind, witness, explored, frontier_peak };

    if max_nodes == 0 {
        return verdict(VerdictKind::Inconclusive, None, 0, 0);
    }
    if is_stable(inst, m0) {
        return verdict(VerdictKind::ReachableStable, Some(Vec::new()), 1, 1);
    }

    let parents: DashMap<CanonicalKey, Option<(CanonicalKey, Pair)>> = DashMap::new();
    parents.insert(m0.key(), None);
    let explored = AtomicUsize::new(1);
    let over_budget = AtomicBool::new(false);
    let timed_out = AtomicBool::new(false);
    let found: Mutex<Option<CanonicalKey>> = Mutex::new(None);
    let mut frontier = vec![m0.clone()];
    let mut frontier_peak = 1;

    while !frontier.is_empty() {
        let next: Vec<Matching> = frontier
            .par_iter()
            .flat_map_iter(|m| {
                if let Some(limit) = budget.max_millis {
                    if clock.elapsed_millis() > limit {
                        timed_out.store(true, Ordering::Relaxed);
                    }
                }
                let stop = timed_out.load(Ordering::Relaxed);
                let parent = m.key();
                let mut out = Vec::new();
                for pair in if stop { Vec::new() } else { blocking_pairs(inst, m) } {
                    let Ok(child) = apply_b_interchange_with(inst, m, pair, rule) else { continue };
                    let key = child.key();
                    let Entry::Vacant(slot) = parents.entry(key.clone()) else { continue };
                    if explored.fetch_add(1, Ordering::Relaxed) >= max_nodes {
                        explored.fetch_sub(1, Ordering::Relaxed);
                        over_budget.store(true, Ordering::Relaxed);
                        continue;
                    }
                    slot.insert(Some((parent.clone(), pair)));
                    if is_stable(inst, &child) {
                        let mut best = found.lock().expect("search lock");
                        if best.as_ref().is_none_or(|b| key < *b) {
                            *best = Some(key);
                        }
                    }
                    out.push(child);
                }
                out
            })
            .collect();

        let explored = explored.load(Ordering::Relaxed);
        if let Some(key) = found.lock().expect("search lock").take() {
            return verdict(VerdictKind::ReachableStable, Some(trace(&parents, key)), explored, frontier_peak);
        }
        if over_budget.load(Ordering::Relaxed) || timed_out.load(Ordering::Relaxed) {
            return verdict(VerdictKind::Inconclusive, None, explored, frontier_peak);
        }
        frontier_peak = frontier_peak.max(next.len());
        frontier = next;
    }
    verdict(VerdictKind::NotReachable, None, explored.load(Ordering::Relaxed), frontier_peak)
}

fn trace(parents: &DashMap<CanonicalKey, Option<(CanonicalKey, Pair)>>, mut key: CanonicalKey) -> Vec<Pair> {
    let mut path = Vec::new();
    while let Some((parent, pair)) = parents.get(&key).and_then(|e| e.value().clone()) {
        path.push(pair);
        key = parent;
    }
    path.reverse();
    path
}

#[cfg(test)]
mod tests {
    use super::*;
    use divorce_core::dynamics::verify_sequence;
    use divorce_core::explorer::reachable_search;
    use divorce_core::fixtures;

    #[test]
    fn example1_matches_sequential() {
        let inst = fixtures::example1();
        for m0 in [fixtures::example1_m0(&inst), fixtures::example1_n0(&inst), Matching::empty(&inst)] {
            let seq = reachable_search(&inst, &m0, &Budget::UNLIMITED);
            let par = parallel_search(&inst, &m0, &Budget::UNLIMITED, InterchangeRule::default());
            assert_eq!(par.kind, seq.kind);
            assert_eq!(par.witness.as_ref().map(Vec::len), seq.witness.as_ref().map(Vec::len));
            if let Some(w) = &par.witness {
                assert!(verify_sequence(&inst, &m0, w).unwrap().final_stable);
            }
            if seq.kind == VerdictKind::NotReachable {
                assert_eq!(par.explored, seq.explored);
            }
        }
    }

    #[test]
    fn budgets() {
        let inst = fixtures::example1();
        let n0 = fixtures::example1_n0(&inst);
        let zero = parallel_search(&inst, &n0, &Budget::nodes(0), InterchangeRule::default());
        assert_eq!((zero.kind, zero.explored), (VerdictKind::Inconclusive, 0));
        let tight = parallel_search(&inst, &n0, &Budget::nodes(3), InterchangeRule::default());
        assert_eq!(tight.kind, VerdictKind::Inconclusive);
        assert!(tight.explored <= 3);
        let opts = SearchOptions { budget: Budget::nodes(3), threads: Some(2), ..Default::default() };
        assert_eq!(search(&inst, &n0, &opts).kind, VerdictKind::Inconclusive);
    }

    #[test]
    fn wall_clock_budget_of_zero_millis_still_terminates() {
        let inst = fixtures::example1();
        let n0 = fixtures::example1_n0(&inst);
        let budget = Budget { max_nodes: None, max_millis: Some(0) };
        for threads in [None, Some(2)] {
            let v = search(&inst, &n0, &SearchOptions { budget, threads, ..Default::default() });
            assert!(matches!(v.kind, VerdictKind::NotReachable | VerdictKind::Inconclusive));
        }
    }
}
