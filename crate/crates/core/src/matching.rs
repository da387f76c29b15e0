//! Matchings, raw pair sets, and the canonical key used for deduplication.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::model::{AgentId, Instance, ModelError, Pair, Side};

const UNMATCHED: u16 = u16::MAX;

/// A set of pairs that is not necessarily a matching.
pub type PairSet = BTreeSet<Pair>;

/// Fixed-length encoding of a matching: the partner index of every left
/// agent, with `u16::MAX` for unmatched. Equal keys over the same instance
/// mean equal pair sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Box<[u16]>);

impl CanonicalKey {
    pub fn as_slice(&self) -> &[u16] {
        &self.0
    }

    pub fn partner_of_left(&self, left: usize) -> Option<usize> {
        self.0.get(left).copied().filter(|&r| r != UNMATCHED).map(usize::from)
    }
}

/// A set of disjoint, mutually acceptable left/right pairs.
///
/// Both partner arrays are kept so partner lookups are O(1) from either
/// side. Values are only constructed through validated paths.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matching {
    left: Box<[u16]>,
    right: Box<[u16]>,
}

impl Matching {
    pub fn empty(inst: &Instance) -> Self {
        Matching {
            left: vec![UNMATCHED; inst.num_left()].into_boxed_slice(),
            right: vec![UNMATCHED; inst.num_right()].into_boxed_slice(),
        }
    }

    /// Validates injectivity and mutual acceptability.
    pub fn from_pairs<I: IntoIterator<Item = Pair>>(inst: &Instance, pairs: I) -> Result<Self, ModelError> {
        let mut m = Matching::empty(inst);
        for p in pairs {
            if p.left >= inst.num_left() {
                return Err(ModelError::UnknownAgent(p.left_agent()));
            }
            if p.right >= inst.num_right() {
                return Err(ModelError::UnknownAgent(p.right_agent()));
            }
            if !inst.is_acceptable(p) {
                return Err(ModelError::UnacceptablePair {
                    left: inst.name(p.left_agent()).to_string(),
                    right: inst.name(p.right_agent()).to_string(),
                });
            }
            if m.left[p.left] != UNMATCHED {
                return Err(ModelError::AgentMatchedTwice(inst.name(p.left_agent()).to_string()));
            }
            if m.right[p.right] != UNMATCHED {
                return Err(ModelError::AgentMatchedTwice(inst.name(p.right_agent()).to_string()));
            }
            m.link(p);
        }
        Ok(m)
    }

    /// Convenience constructor from display names.
    pub fn from_names(inst: &Instance, pairs: &[(&str, &str)]) -> Result<Self, ModelError> {
        let mut resolved = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            let a = inst.lookup(a).ok_or_else(|| ModelError::UnknownName(a.to_string()))?;
            let b = inst.lookup(b).ok_or_else(|| ModelError::UnknownName(b.to_string()))?;
            resolved.push(Pair::from_agents(a, b)?);
        }
        Matching::from_pairs(inst, resolved)
    }

    /// Rebuilds a matching from its key. The key must come from a matching
    /// of the same instance.
    pub fn from_key(inst: &Instance, key: &CanonicalKey) -> Self {
        let mut m = Matching::empty(inst);
        for (l, &r) in key.0.iter().enumerate() {
            if r != UNMATCHED {
                m.link(Pair::new(l, usize::from(r)));
            }
        }
        m
    }

    pub fn key(&self) -> CanonicalKey {
        CanonicalKey(self.left.clone())
    }

    #[inline]
    pub fn partner_of_left(&self, left: usize) -> Option<usize> {
        let r = self.left[left];
        (r != UNMATCHED).then_some(usize::from(r))
    }

    #[inline]
    pub fn partner_of_right(&self, right: usize) -> Option<usize> {
        let l = self.right[right];
        (l != UNMATCHED).then_some(usize::from(l))
    }

    pub fn partner(&self, agent: AgentId) -> Option<AgentId> {
        match agent.side {
            Side::Left => self.partner_of_left(agent.index).map(AgentId::right),
            Side::Right => self.partner_of_right(agent.index).map(AgentId::left),
        }
    }

    pub fn is_matched(&self, agent: AgentId) -> bool {
        self.partner(agent).is_some()
    }

    pub fn contains(&self, pair: Pair) -> bool {
        self.left.get(pair.left).is_some_and(|&r| usize::from(r) == pair.right && r != UNMATCHED)
    }

    /// Pairs ordered by left index.
    pub fn pairs(&self) -> impl Iterator<Item = Pair> + '_ {
        self.left.iter().enumerate().filter(|(_, &r)| r != UNMATCHED).map(|(l, &r)| Pair::new(l, usize::from(r)))
    }

    pub fn to_pair_set(&self) -> PairSet {
        self.pairs().collect()
    }

    pub fn len(&self) -> usize {
        self.pairs().count()
    }

    pub fn is_empty(&self) -> bool {
        self.left.iter().all(|&r| r == UNMATCHED)
    }

    /// Every agent on both sides has a partner.
    pub fn is_perfect(&self) -> bool {
        self.left.iter().chain(self.right.iter()).all(|&x| x != UNMATCHED)
    }

    /// Agents with a partner, left side first.
    pub fn matched_agents(&self) -> BTreeSet<AgentId> {
        let l = (0..self.left.len()).filter(|&i| self.left[i] != UNMATCHED).map(AgentId::left);
        let r = (0..self.right.len()).filter(|&i| self.right[i] != UNMATCHED).map(AgentId::right);
        l.chain(r).collect()
    }

    #[inline]
    pub(crate) fn link(&mut self, p: Pair) {
        self.left[p.left] = p.right as u16;
        self.right[p.right] = p.left as u16;
    }

    #[inline]
    pub(crate) fn unlink_left(&mut self, left: usize) {
        if let Some(r) = self.partner_of_left(left) {
            self.right[r] = UNMATCHED;
        }
        self.left[left] = UNMATCHED;
    }

    #[inline]
    pub(crate) fn unlink_right(&mut self, right: usize) {
        if let Some(l) = self.partner_of_right(right) {
            self.left[l] = UNMATCHED;
        }
        self.right[right] = UNMATCHED;
    }

    /// Every matching of the instance, including the empty one, in a
    /// deterministic order. Fails once more than `limit` would be produced.
    pub fn enumerate_all(inst: &Instance, limit: usize) -> Result<Vec<Matching>, TooManyMatchings> {
        let mut out = Vec::new();
        let mut current = Matching::empty(inst);
        let options: Vec<Vec<usize>> = (0..inst.num_left())
            .map(|l| (0..inst.num_right()).filter(|&r| inst.is_acceptable(Pair::new(l, r))).collect())
            .collect();
        extend(&options, 0, &mut current, &mut out, limit)?;
        Ok(out)
    }
}

/// The enumeration guard was exceeded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TooManyMatchings {
    pub limit: usize,
}

impl core::fmt::Display for TooManyMatchings {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "instance has more than {} matchings", self.limit)
    }
}

fn extend(
    options: &[Vec<usize>],
    left: usize,
    current: &mut Matching,
    out: &mut Vec<Matching>,
    limit: usize,
) -> Result<(), TooManyMatchings> {
    if left == options.len() {
        if out.len() >= limit {
            return Err(TooManyMatchings { limit });
        }
        out.push(current.clone());
        return Ok(());
    }
    extend(options, left + 1, current, out, limit)?;
    for &r in &options[left] {
        if current.partner_of_right(r).is_none() {
            current.link(Pair::new(left, r));
            extend(options, left + 1, current, out, limit)?;
            current.unlink_left(left);
        }
    }
    Ok(())
}

/// True iff `pairs` is injective and every pair is mutually acceptable.
pub fn is_matching(inst: &Instance, pairs: &PairSet) -> bool {
    let mut seen_left = BTreeSet::new();
    let mut seen_right = BTreeSet::new();
    pairs.iter().all(|&p| inst.is_acceptable(p) && seen_left.insert(p.left) && seen_right.insert(p.right))
}

pub fn canonical_key(m: &Matching) -> CanonicalKey {
    m.key()
}
