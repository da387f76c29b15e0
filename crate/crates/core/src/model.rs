//! Agents, weak-order preference lists and validated instances.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Largest number of agents allowed on one side. Matchings store partner
/// indices as `u16` with `u16::MAX` reserved for "unmatched".
pub const MAX_AGENTS_PER_SIDE: usize = u16::MAX as usize - 1;

/// Rank value stored for unacceptable partners.
const UNACCEPTABLE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub const fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "LEFT",
            Side::Right => "RIGHT",
        })
    }
}

/// An agent, addressed by side and position within that side. Display names
/// are owned by the [`Instance`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AgentId {
    pub side: Side,
    pub index: usize,
}

impl AgentId {
    pub const fn left(index: usize) -> Self {
        AgentId { side: Side::Left, index }
    }

    pub const fn right(index: usize) -> Self {
        AgentId { side: Side::Right, index }
    }
}

/// An unordered left/right pair, stored with the left agent first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair {
    pub left: usize,
    pub right: usize,
}

impl Pair {
    pub const fn new(left: usize, right: usize) -> Self {
        Pair { left, right }
    }

    /// Builds a pair from two agents given in either order.
    pub fn from_agents(a: AgentId, b: AgentId) -> Result<Self, ModelError> {
        match (a.side, b.side) {
            (Side::Left, Side::Right) => Ok(Pair::new(a.index, b.index)),
            (Side::Right, Side::Left) => Ok(Pair::new(b.index, a.index)),
            _ => Err(ModelError::SameSide { a, b }),
        }
    }

    pub const fn left_agent(self) -> AgentId {
        AgentId::left(self.left)
    }

    pub const fn right_agent(self) -> AgentId {
        AgentId::right(self.right)
    }
}

/// A weak order over acceptable partners: tiers are strictly ordered, agents
/// inside one tier are tied, and agents outside every tier are unacceptable.
///
/// Entries are indices into the opposite side of the owning instance.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PreferenceList {
    tiers: Vec<Vec<usize>>,
}

impl PreferenceList {
    /// Wraps tiers without validation; [`Instance::new`] checks them.
    pub fn new(tiers: Vec<Vec<usize>>) -> Self {
        PreferenceList { tiers }
    }

    /// A strict list: every tier is a singleton.
    pub fn strict<I: IntoIterator<Item = usize>>(order: I) -> Self {
        PreferenceList { tiers: order.into_iter().map(|x| vec![x]).collect() }
    }

    pub fn tiers(&self) -> &[Vec<usize>] {
        &self.tiers
    }

    /// Acceptable partners, best tier first.
    pub fn acceptable(&self) -> impl Iterator<Item = usize> + '_ {
        self.tiers.iter().flatten().copied()
    }

    pub fn len(&self) -> usize {
        self.tiers.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.tiers.is_empty()
    }

    /// True when some tier has more than one member.
    pub fn has_ties(&self) -> bool {
        self.tiers.iter().any(|t| t.len() > 1)
    }
}

/// Outcome of asking an agent to compare two potential partners.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    PrefersA,
    Tied,
    PrefersB,
    /// At least one of the two is unacceptable.
    Incomparable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelError {
    DuplicateName(String),
    UnknownName(String),
    UnknownAgent(AgentId),
    SameSide { a: AgentId, b: AgentId },
    TooManyAgents { side: Side, count: usize },
    PreferenceCount { side: Side, expected: usize, found: usize },
    EmptyTier { who: String },
    DuplicateTierMembership { who: String, listed: String },
    NotMutual { lister: String, listed: String },
    AgentMatchedTwice(String),
    UnacceptablePair { left: String, right: String },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::DuplicateName(n) => write!(f, "duplicate agent name `{n}`"),
            ModelError::UnknownName(n) => write!(f, "unknown agent `{n}`"),
            ModelError::UnknownAgent(a) => write!(f, "no {} agent with index {}", a.side, a.index),
            ModelError::SameSide { a, b } => {
                write!(f, "agents {}#{} and {}#{} are on the same side", a.side, a.index, b.side, b.index)
            }
            ModelError::TooManyAgents { side, count } => {
                write!(f, "{count} agents on side {side} exceeds the limit of {MAX_AGENTS_PER_SIDE}")
            }
            ModelError::PreferenceCount { side, expected, found } => {
                write!(f, "side {side} has {expected} agents but {found} preference lists")
            }
            ModelError::EmptyTier { who } => write!(f, "preference list of `{who}` has an empty tier"),
            ModelError::DuplicateTierMembership { who, listed } => {
                write!(f, "`{who}` lists `{listed}` more than once")
            }
            ModelError::NotMutual { lister, listed } => {
                write!(f, "`{lister}` lists `{listed}` but `{listed}` does not list `{lister}`")
            }
            ModelError::AgentMatchedTwice(n) => write!(f, "agent `{n}` occurs in two pairs"),
            ModelError::UnacceptablePair { left, right } => {
                write!(f, "pair {{{left}, {right}}} is not mutually acceptable")
            }
        }
    }
}

impl core::error::Error for ModelError {}

/// A validated two-sided instance.
///
/// Besides the preference lists the instance keeps dense rank tables so that
/// preference lookups used by the dynamics are O(1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    left_names: Vec<String>,
    right_names: Vec<String>,
    left_prefs: Vec<PreferenceList>,
    right_prefs: Vec<PreferenceList>,
    by_name: BTreeMap<String, AgentId>,
    /// `left_rank[l * num_right + r]` is the tier of `r` in `l`'s list.
    left_rank: Vec<u32>,
    /// `right_rank[r * num_left + l]` is the tier of `l` in `r`'s list.
    right_rank: Vec<u32>,
}

impl Instance {
    /// Validates and builds an instance.
    ///
    /// Checks name uniqueness across both sides, index ranges, empty tiers,
    /// repeated entries, and mutual acceptability.
    pub fn new(
        left_names: Vec<String>,
        right_names: Vec<String>,
        left_prefs: Vec<PreferenceList>,
        right_prefs: Vec<PreferenceList>,
    ) -> Result<Self, ModelError> {
        for (side, names, prefs) in [(Side::Left, &left_names, &left_prefs), (Side::Right, &right_names, &right_prefs)]
        {
            if names.len() > MAX_AGENTS_PER_SIDE {
                return Err(ModelError::TooManyAgents { side, count: names.len() });
            }
            if names.len() != prefs.len() {
                return Err(ModelError::PreferenceCount { side, expected: names.len(), found: prefs.len() });
            }
        }

        let mut by_name = BTreeMap::new();
        let named = left_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n, AgentId::left(i)))
            .chain(right_names.iter().enumerate().map(|(i, n)| (n, AgentId::right(i))));
        for (name, id) in named {
            if by_name.insert(name.clone(), id).is_some() {
                return Err(ModelError::DuplicateName(name.clone()));
            }
        }

        let (nl, nr) = (left_names.len(), right_names.len());
        let left_rank = rank_table(&left_names, &right_names, &left_prefs, Side::Left)?;
        let right_rank = rank_table(&right_names, &left_names, &right_prefs, Side::Right)?;

        for l in 0..nl {
            for r in 0..nr {
                let lr = left_rank[l * nr + r] != UNACCEPTABLE;
                let rl = right_rank[r * nl + l] != UNACCEPTABLE;
                if lr && !rl {
                    return Err(ModelError::NotMutual {
                        lister: left_names[l].clone(),
                        listed: right_names[r].clone(),
                    });
                }
                if rl && !lr {
                    return Err(ModelError::NotMutual {
                        lister: right_names[r].clone(),
                        listed: left_names[l].clone(),
                    });
                }
            }
        }

        Ok(Instance { left_names, right_names, left_prefs, right_prefs, by_name, left_rank, right_rank })
    }

    /// The instance with no agents.
    pub fn empty() -> Self {
        Instance::new(Vec::new(), Vec::new(), Vec::new(), Vec::new()).expect("empty instance is valid")
    }

    pub fn num_left(&self) -> usize {
        self.left_names.len()
    }

    pub fn num_right(&self) -> usize {
        self.right_names.len()
    }

    pub fn side_len(&self, side: Side) -> usize {
        match side {
            Side::Left => self.num_left(),
            Side::Right => self.num_right(),
        }
    }

    pub fn contains(&self, agent: AgentId) -> bool {
        agent.index < self.side_len(agent.side)
    }

    pub fn agents(&self, side: Side) -> impl Iterator<Item = AgentId> {
        (0..self.side_len(side)).map(move |index| AgentId { side, index })
    }

    pub fn left_names(&self) -> &[String] {
        &self.left_names
    }

    pub fn right_names(&self) -> &[String] {
        &self.right_names
    }

    /// Display name of an agent. Panics when the agent is not in the instance.
    pub fn name(&self, agent: AgentId) -> &str {
        match agent.side {
            Side::Left => &self.left_names[agent.index],
            Side::Right => &self.right_names[agent.index],
        }
    }

    pub fn lookup(&self, name: &str) -> Option<AgentId> {
        self.by_name.get(name).copied()
    }

    /// Preference list of an agent. Panics when the agent is not in the instance.
    pub fn prefs(&self, agent: AgentId) -> &PreferenceList {
        match agent.side {
            Side::Left => &self.left_prefs[agent.index],
            Side::Right => &self.right_prefs[agent.index],
        }
    }

    /// Tier index of `other` (on the opposite side) in `who`'s list, or
    /// `None` when unacceptable or out of range.
    pub fn rank(&self, who: AgentId, other: usize) -> Option<u32> {
        let (nl, nr) = (self.num_left(), self.num_right());
        let raw = match who.side {
            Side::Left if who.index < nl && other < nr => self.left_rank[who.index * nr + other],
            Side::Right if who.index < nr && other < nl => self.right_rank[who.index * nl + other],
            _ => UNACCEPTABLE,
        };
        (raw != UNACCEPTABLE).then_some(raw)
    }

    #[inline]
    pub(crate) fn left_rank_raw(&self, left: usize, right: usize) -> u32 {
        self.left_rank[left * self.num_right() + right]
    }

    #[inline]
    pub(crate) fn right_rank_raw(&self, right: usize, left: usize) -> u32 {
        self.right_rank[right * self.num_left() + left]
    }

    /// Mutual acceptability of a left/right pair (acceptability is symmetric
    /// by construction, so one lookup suffices).
    pub fn is_acceptable(&self, pair: Pair) -> bool {
        pair.left < self.num_left()
            && pair.right < self.num_right()
            && self.left_rank_raw(pair.left, pair.right) != UNACCEPTABLE
    }

    /// Iterates all mutually acceptable pairs ordered by left then right index.
    pub fn acceptable_pairs(&self) -> impl Iterator<Item = Pair> + '_ {
        (0..self.num_left()).flat_map(move |l| {
            (0..self.num_right()).map(move |r| Pair::new(l, r)).filter(move |&p| self.is_acceptable(p))
        })
    }

    /// True when every left agent finds every right agent acceptable.
    pub fn is_complete(&self) -> bool {
        self.left_rank.iter().all(|&r| r != UNACCEPTABLE)
    }

    pub fn has_ties(&self) -> bool {
        self.left_prefs.iter().chain(&self.right_prefs).any(PreferenceList::has_ties)
    }

    /// How `who` ranks `a` against `b`, both on the opposite side.
    pub fn compare(&self, who: AgentId, a: AgentId, b: AgentId) -> Result<Comparison, ModelError> {
        for agent in [who, a, b] {
            if !self.contains(agent) {
                return Err(ModelError::UnknownAgent(agent));
            }
        }
        for other in [a, b] {
            if other.side == who.side {
                return Err(ModelError::SameSide { a: who, b: other });
            }
        }
        Ok(match (self.rank(who, a.index), self.rank(who, b.index)) {
            (Some(ra), Some(rb)) if ra < rb => Comparison::PrefersA,
            (Some(ra), Some(rb)) if ra > rb => Comparison::PrefersB,
            (Some(_), Some(_)) => Comparison::Tied,
            _ => Comparison::Incomparable,
        })
    }
}

fn rank_table(own: &[String], other: &[String], prefs: &[PreferenceList], side: Side) -> Result<Vec<u32>, ModelError> {
    let width = other.len();
    let mut table = vec![UNACCEPTABLE; own.len() * width];
    for (i, list) in prefs.iter().enumerate() {
        let row = &mut table[i * width..(i + 1) * width];
        for (tier_index, tier) in list.tiers().iter().enumerate() {
            if tier.is_empty() {
                return Err(ModelError::EmptyTier { who: own[i].clone() });
            }
            for &j in tier {
                if j >= width {
                    return Err(ModelError::UnknownAgent(AgentId { side: side.opposite(), index: j }));
                }
                if row[j] != UNACCEPTABLE {
                    return Err(ModelError::DuplicateTierMembership { who: own[i].clone(), listed: other[j].clone() });
                }
                row[j] = tier_index as u32;
            }
        }
    }
    Ok(table)
}

/// Name-based construction, used by the parser and the reduction.
///
/// ```
/// use divorce_core::InstanceBuilder;
///
/// let mut b = InstanceBuilder::new();
/// b.left("u").right("w");
/// b.prefs("u", &[&["w"]]).prefs("w", &[&["u"]]);
/// let inst = b.build().unwrap();
/// assert_eq!(inst.num_left(), 1);
/// ```
#[derive(Clone, Debug, Default)]
pub struct InstanceBuilder {
    left: Vec<String>,
    right: Vec<String>,
    prefs: Vec<(String, Vec<Vec<String>>)>,
}

impl InstanceBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn left(&mut self, name: impl Into<String>) -> &mut Self {
        self.left.push(name.into());
        self
    }

    pub fn right(&mut self, name: impl Into<String>) -> &mut Self {
        self.right.push(name.into());
        self
    }

    /// Sets the tiers of `who`. A later call for the same agent replaces the
    /// earlier one.
    pub fn prefs<S: AsRef<str>, T: AsRef<[S]>>(&mut self, who: &str, tiers: &[T]) -> &mut Self {
        let tiers = tiers.iter().map(|t| t.as_ref().iter().map(|s| s.as_ref().to_string()).collect()).collect();
        self.prefs_owned(who.to_string(), tiers)
    }

    pub fn prefs_owned(&mut self, who: String, tiers: Vec<Vec<String>>) -> &mut Self {
        self.prefs.retain(|(w, _)| *w != who);
        self.prefs.push((who, tiers));
        self
    }

    pub fn build(&self) -> Result<Instance, ModelError> {
        let mut ids = BTreeMap::new();
        for (i, n) in self.left.iter().enumerate() {
            if ids.insert(n.as_str(), AgentId::left(i)).is_some() {
                return Err(ModelError::DuplicateName(n.clone()));
            }
        }
        for (i, n) in self.right.iter().enumerate() {
            if ids.insert(n.as_str(), AgentId::right(i)).is_some() {
                return Err(ModelError::DuplicateName(n.clone()));
            }
        }

        let mut left_prefs = vec![PreferenceList::default(); self.left.len()];
        let mut right_prefs = vec![PreferenceList::default(); self.right.len()];
        for (who, tiers) in &self.prefs {
            let owner = *ids.get(who.as_str()).ok_or_else(|| ModelError::UnknownName(who.clone()))?;
            let mut resolved = Vec::with_capacity(tiers.len());
            for tier in tiers {
                let mut out = Vec::with_capacity(tier.len());
                for name in tier {
                    let id = *ids.get(name.as_str()).ok_or_else(|| ModelError::UnknownName(name.clone()))?;
                    if id.side == owner.side {
                        return Err(ModelError::SameSide { a: owner, b: id });
                    }
                    out.push(id.index);
                }
                resolved.push(out);
            }
            let slot = match owner.side {
                Side::Left => &mut left_prefs[owner.index],
                Side::Right => &mut right_prefs[owner.index],
            };
            *slot = PreferenceList::new(resolved);
        }

        Instance::new(self.left.clone(), self.right.clone(), left_prefs, right_prefs)
    }
}
