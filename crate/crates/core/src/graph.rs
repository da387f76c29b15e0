//! Explicit divorce graphs for small instances, with sink and strongly
//! connected component analysis.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;

use crate::dynamics::{apply_b_interchange_with, blocking_pairs, is_stable, InterchangeRule};
use crate::matching::{CanonicalKey, Matching, TooManyMatchings};
use crate::model::{Instance, Pair};

/// Default cap on the number of nodes of an explicit graph.
pub const DEFAULT_NODE_LIMIT: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphTooLarge {
    pub limit: usize,
}

impl fmt::Display for GraphTooLarge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "divorce graph exceeds {} nodes", self.limit)
    }
}

impl From<TooManyMatchings> for GraphTooLarge {
    fn from(e: TooManyMatchings) -> Self {
        GraphTooLarge { limit: e.limit }
    }
}

/// Arc `(from, pair, to)` exists iff `pair` blocks `from` and the
/// b-interchange by `pair` turns `from` into `to`.
#[derive(Clone, Debug)]
pub struct DivorceGraph {
    nodes: Vec<Matching>,
    stable: Vec<bool>,
    index: HashMap<CanonicalKey, usize>,
    arcs: Vec<Vec<(Pair, usize)>>,
}

impl DivorceGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.iter().map(Vec::len).sum()
    }

    pub fn node(&self, id: usize) -> &Matching {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Matching] {
        &self.nodes
    }

    pub fn find(&self, key: &CanonicalKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn successors(&self, id: usize) -> &[(Pair, usize)] {
        &self.arcs[id]
    }

    pub fn is_stable_node(&self, id: usize) -> bool {
        self.stable[id]
    }

    fn insert(&mut self, inst: &Instance, m: Matching) -> usize {
        let id = self.nodes.len();
        self.index.insert(m.key(), id);
        self.stable.push(is_stable(inst, &m));
        self.nodes.push(m);
        self.arcs.push(Vec::new());
        id
    }
}

/// Builds the divorce graph.
///
/// With `roots`, only matchings reachable from them are included. Without,
/// every matching of the instance (partial ones included) becomes a node;
/// `limit` caps the node count either way.
pub fn build_divorce_graph(
    inst: &Instance,
    roots: Option<&[Matching]>,
    limit: usize,
    rule: InterchangeRule,
) -> Result<DivorceGraph, GraphTooLarge> {
    let mut g = DivorceGraph { nodes: Vec::new(), stable: Vec::new(), index: HashMap::new(), arcs: Vec::new() };
    let mut queue = VecDeque::new();
    match roots {
        Some(roots) => {
            for m in roots {
                if g.find(&m.key()).is_none() {
                    if g.node_count() >= limit {
                        return Err(GraphTooLarge { limit });
                    }
                    queue.push_back(g.insert(inst, m.clone()));
                }
            }
        }
        None => {
            for m in Matching::enumerate_all(inst, limit)? {
                queue.push_back(g.insert(inst, m));
            }
        }
    }

    while let Some(id) = queue.pop_front() {
        let m = g.nodes[id].clone();
        for pair in blocking_pairs(inst, &m) {
            let Ok(next) = apply_b_interchange_with(inst, &m, pair, rule) else {
                continue;
            };
            let target = match g.find(&next.key()) {
                Some(t) => t,
                None => {
                    if g.node_count() >= limit {
                        return Err(GraphTooLarge { limit });
                    }
                    let t = g.insert(inst, next);
                    queue.push_back(t);
                    t
                }
            };
            g.arcs[id].push((pair, target));
        }
    }
    Ok(g)
}

/// Nodes without outgoing arcs.
pub fn sinks(g: &DivorceGraph) -> Vec<usize> {
    (0..g.node_count()).filter(|&v| g.arcs[v].is_empty()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condensation {
    /// Strongly connected components in reverse topological order (every
    /// arc between components goes from a later to an earlier entry).
    pub components: Vec<Vec<usize>>,
    pub component_of: Vec<usize>,
    pub dag_arcs: BTreeSet<(usize, usize)>,
    /// Whether some stable node is reachable from the component.
    pub reaches_stable: Vec<bool>,
}

impl Condensation {
    /// Number of graph nodes with a path to a stable node.
    pub fn nodes_reaching_stable(&self) -> usize {
        self.components.iter().zip(&self.reaches_stable).filter(|(_, &r)| r).map(|(c, _)| c.len()).sum()
    }
}

/// Tarjan's algorithm, iterative so that large graphs do not overflow the
/// stack.
pub fn condensation(g: &DivorceGraph) -> Condensation {
    const UNSEEN: usize = usize::MAX;
    let n = g.node_count();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut component_of = vec![UNSEEN; n];
    let mut next_index = 0;
    // (node, position in its arc list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for start in 0..n {
        if index[start] != UNSEEN {
            continue;
        }
        call.push((start, 0));
        index[start] = next_index;
        low[start] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&(_, w)) = g.arcs[v].get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let id = components.len();
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component_of[w] = id;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                components.push(comp);
            }
        }
    }

    let mut dag_arcs = BTreeSet::new();
    for v in 0..n {
        for &(_, w) in &g.arcs[v] {
            let (a, b) = (component_of[v], component_of[w]);
            if a != b {
                dag_arcs.insert((a, b));
            }
        }
    }

    // Reverse topological order means successors are finalised first.
    let mut reaches_stable = vec![false; components.len()];
    for (c, members) in components.iter().enumerate() {
        reaches_stable[c] = members.iter().any(|&v| g.stable[v]);
    }
    for c in 0..components.len() {
        if reaches_stable[c] {
            continue;
        }
        let succ = dag_arcs.range((c, 0)..(c + 1, 0)).any(|&(_, d)| reaches_stable[d]);
        reaches_stable[c] = succ;
    }

    Condensation { components, component_of, dag_arcs, reaches_stable }
}
