//! Blocking pairs, weak stability and b-interchanges.
//!
//! A pair `{u, w}` blocks `M` when it is mutually acceptable, not in `M`, and
//! each of `u` and `w` is either unmatched or strictly prefers the other to
//! its current partner. Ties never block.
//!
//! The b-interchange by `{u, w}` produces
//! `M - {u, M(u)} - {M(w), w} + {u, w} + {M(w), M(u)}`, with absent terms
//! dropped, and is only allowed when the result is again a matching.

use alloc::vec::Vec;
use core::fmt;

use crate::matching::{is_matching, CanonicalKey, Matching, PairSet};
use crate::model::{AgentId, Instance, Pair};

/// Which reading of the interchange to apply.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum InterchangeRule {
    /// Any blocking pair may be used; missing ex-partners simply drop out of
    /// the formula.
    #[default]
    SetSemantics,
    /// Only blocking pairs whose members are both matched may be used.
    BothMatched,
}

/// Why a b-interchange cannot be applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Infeasible {
    NotBlocking,
    /// The two former partners are not mutually acceptable.
    RemarriageUnacceptable,
    /// Rejected under [`InterchangeRule::BothMatched`].
    PartnerUnmatched,
}

impl Infeasible {
    pub fn code(self) -> &'static str {
        match self {
            Infeasible::NotBlocking => "NOT_BLOCKING",
            Infeasible::RemarriageUnacceptable => "REMARRIAGE_UNACCEPTABLE",
            Infeasible::PartnerUnmatched => "PARTNER_UNMATCHED",
        }
    }
}

impl fmt::Display for Infeasible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Strict preference of left agent `l` for right agent `r` over its current
/// partner (being unmatched loses to any acceptable partner).
#[inline]
fn left_wants(inst: &Instance, m: &Matching, l: usize, r: usize) -> bool {
    match m.partner_of_left(l) {
        None => true,
        Some(cur) => inst.left_rank_raw(l, r) < inst.left_rank_raw(l, cur),
    }
}

#[inline]
fn right_wants(inst: &Instance, m: &Matching, r: usize, l: usize) -> bool {
    match m.partner_of_right(r) {
        None => true,
        Some(cur) => inst.right_rank_raw(r, l) < inst.right_rank_raw(r, cur),
    }
}

pub fn is_blocking(inst: &Instance, m: &Matching, pair: Pair) -> bool {
    inst.is_acceptable(pair)
        && !m.contains(pair)
        && left_wants(inst, m, pair.left, pair.right)
        && right_wants(inst, m, pair.right, pair.left)
}

/// All blocking pairs, ordered by left index and then right index.
pub fn blocking_pairs(inst: &Instance, m: &Matching) -> Vec<Pair> {
    let mut out = Vec::new();
    for l in 0..inst.num_left() {
        let start = out.len();
        let cur = m.partner_of_left(l).map(|r| inst.left_rank_raw(l, r));
        for (tier, members) in inst.prefs(AgentId::left(l)).tiers().iter().enumerate() {
            if cur.is_some_and(|c| tier as u32 >= c) {
                break;
            }
            for &r in members {
                if right_wants(inst, m, r, l) {
                    out.push(Pair::new(l, r));
                }
            }
        }
        out[start..].sort_unstable();
    }
    out
}

/// Weak stability: no blocking pair.
pub fn is_stable(inst: &Instance, m: &Matching) -> bool {
    for l in 0..inst.num_left() {
        let cur = m.partner_of_left(l).map(|r| inst.left_rank_raw(l, r));
        for (tier, members) in inst.prefs(AgentId::left(l)).tiers().iter().enumerate() {
            if cur.is_some_and(|c| tier as u32 >= c) {
                break;
            }
            if members.iter().any(|&r| right_wants(inst, m, r, l)) {
                return false;
            }
        }
    }
    true
}

/// The interchange formula evaluated on pair sets, without any feasibility
/// check. The result need not be a matching.
pub fn b_inter_raw(m: &Matching, pair: Pair) -> PairSet {
    let mut set = m.to_pair_set();
    let ex_of_left = m.partner_of_left(pair.left);
    let ex_of_right = m.partner_of_right(pair.right);
    if let Some(r) = ex_of_left {
        set.remove(&Pair::new(pair.left, r));
    }
    if let Some(l) = ex_of_right {
        set.remove(&Pair::new(l, pair.right));
    }
    set.insert(pair);
    if let (Some(l), Some(r)) = (ex_of_right, ex_of_left) {
        set.insert(Pair::new(l, r));
    }
    set
}

pub fn apply_b_interchange(inst: &Instance, m: &Matching, pair: Pair) -> Result<Matching, Infeasible> {
    apply_b_interchange_with(inst, m, pair, InterchangeRule::SetSemantics)
}

pub fn apply_b_interchange_with(
    inst: &Instance,
    m: &Matching,
    pair: Pair,
    rule: InterchangeRule,
) -> Result<Matching, Infeasible> {
    if !is_blocking(inst, m, pair) {
        return Err(Infeasible::NotBlocking);
    }
    let ex_of_left = m.partner_of_left(pair.left);
    let ex_of_right = m.partner_of_right(pair.right);
    if rule == InterchangeRule::BothMatched && (ex_of_left.is_none() || ex_of_right.is_none()) {
        return Err(Infeasible::PartnerUnmatched);
    }
    let remarriage = match (ex_of_right, ex_of_left) {
        (Some(l), Some(r)) => {
            let p = Pair::new(l, r);
            if !inst.is_acceptable(p) {
                return Err(Infeasible::RemarriageUnacceptable);
            }
            Some(p)
        }
        _ => None,
    };
    let mut next = m.clone();
    next.unlink_left(pair.left);
    next.unlink_right(pair.right);
    next.link(pair);
    if let Some(p) = remarriage {
        next.link(p);
    }
    Ok(next)
}

/// One replayed step of a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub pair: Pair,
    pub before: CanonicalKey,
    pub after: CanonicalKey,
}

/// A fully replayed sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replay {
    pub final_matching: Matching,
    pub steps: Vec<StepRecord>,
    pub final_stable: bool,
}

/// The first step that could not be applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rejected {
    pub index: usize,
    pub pair: Pair,
    pub reason: Infeasible,
}

impl fmt::Display for Rejected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {} rejected: {}", self.index, self.reason)
    }
}

/// Replays `seq` from `m0`, one b-interchange per pair.
pub fn verify_sequence(inst: &Instance, m0: &Matching, seq: &[Pair]) -> Result<Replay, Rejected> {
    verify_sequence_with(inst, m0, seq, InterchangeRule::SetSemantics)
}

pub fn verify_sequence_with(
    inst: &Instance,
    m0: &Matching,
    seq: &[Pair],
    rule: InterchangeRule,
) -> Result<Replay, Rejected> {
    let mut current = m0.clone();
    let mut steps = Vec::with_capacity(seq.len());
    for (index, &pair) in seq.iter().enumerate() {
        let next =
            apply_b_interchange_with(inst, &current, pair, rule).map_err(|reason| Rejected { index, pair, reason })?;
        steps.push(StepRecord { pair, before: current.key(), after: next.key() });
        current = next;
    }
    let final_stable = is_stable(inst, &current);
    Ok(Replay { final_matching: current, steps, final_stable })
}

/// Reference route for [`apply_b_interchange`]: raw formula plus the
/// matching check. Kept for cross-checking the in-place version.
pub fn apply_via_raw(inst: &Instance, m: &Matching, pair: Pair) -> Result<Matching, Infeasible> {
    if !is_blocking(inst, m, pair) {
        return Err(Infeasible::NotBlocking);
    }
    let raw = b_inter_raw(m, pair);
    if !is_matching(inst, &raw) {
        return Err(Infeasible::RemarriageUnacceptable);
    }
    Ok(Matching::from_pairs(inst, raw).expect("checked by is_matching"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{AgentId, Comparison, InstanceBuilder};
    use alloc::collections::BTreeSet;
    use alloc::vec;

    fn p(inst: &Instance, a: &str, b: &str) -> Pair {
        Pair::from_agents(inst.lookup(a).unwrap(), inst.lookup(b).unwrap()).unwrap()
    }

    #[test]
    fn example1_blocking_pairs() {
        let inst = fixtures::example1();
        let m0 = fixtures::example1_m0(&inst);
        assert_eq!(blocking_pairs(&inst, &m0), vec![p(&inst, "u2", "w2"), p(&inst, "u4", "w4")]);
        assert!(is_blocking(&inst, &m0, p(&inst, "u2", "w2")));
        assert!(!is_blocking(&inst, &m0, p(&inst, "u1", "w1")));
        assert!(!is_stable(&inst, &m0));
    }

    #[test]
    fn example1_man_optimal_is_stable() {
        let inst = fixtures::example1();
        let opt = fixtures::example1_man_optimal(&inst);
        assert!(blocking_pairs(&inst, &opt).is_empty());
        assert!(is_stable(&inst, &opt));
    }

    #[test]
    fn example1_n0_is_unstable() {
        // N0 = {u1w1, u2w2, u3w4, u4w3}. u1 and u2 hold their first choices.
        // u3 would trade w4 for w3 or w1, but w3 holds her first choice u4
        // and w1 ranks u3 below u1. u4 would trade w3 for w4, w2 or w1; w4
        // ranks u4 below u3, w2 ranks u4 below u2, and w1 ranks u4 above u1.
        let inst = fixtures::example1();
        let n0 = fixtures::example1_n0(&inst);
        assert_eq!(blocking_pairs(&inst, &n0), vec![p(&inst, "u4", "w1")]);
        assert!(!is_stable(&inst, &n0));
    }

    #[test]
    fn empty_instance_has_no_blocking_pairs() {
        let inst = Instance::empty();
        let m = Matching::empty(&inst);
        assert!(blocking_pairs(&inst, &m).is_empty());
        assert!(is_stable(&inst, &m));
    }

    #[test]
    fn raw_formula_on_example1() {
        let inst = fixtures::example1();
        let m0 = fixtures::example1_m0(&inst);
        let opt = fixtures::example1_man_optimal(&inst);
        assert_eq!(b_inter_raw(&m0, p(&inst, "u2", "w2")), opt.to_pair_set());
    }

    #[test]
    fn raw_formula_unmatched_cases() {
        let mut b = InstanceBuilder::new();
        b.left("u").left("a").right("w").right("z");
        b.prefs("u", &[&["w"], &["z"]]).prefs("a", &[&["z"]]);
        b.prefs("w", &[&["u"]]).prefs("z", &[&["u"], &["a"]]);
        let inst = b.build().unwrap();
        let uw = p(&inst, "u", "w");

        let empty = Matching::empty(&inst);
        let expect: PairSet = [uw].into_iter().collect();
        assert_eq!(b_inter_raw(&empty, uw), expect);

        // u matched to z, w single: z becomes single.
        let m = Matching::from_names(&inst, &[("u", "z")]).unwrap();
        assert_eq!(b_inter_raw(&m, uw), expect);
        let next = apply_b_interchange(&inst, &m, uw).unwrap();
        assert!(!next.is_matched(inst.lookup("z").unwrap()));
        assert_eq!(
            apply_b_interchange_with(&inst, &m, uw, InterchangeRule::BothMatched),
            Err(Infeasible::PartnerUnmatched)
        );
    }

    #[test]
    fn example1_either_pair_converges() {
        let inst = fixtures::example1();
        let m0 = fixtures::example1_m0(&inst);
        let opt = fixtures::example1_man_optimal(&inst);
        for (a, b) in [("u2", "w2"), ("u4", "w4")] {
            let next = apply_b_interchange(&inst, &m0, p(&inst, a, b)).unwrap();
            assert_eq!(next, opt);
        }
        assert_eq!(apply_b_interchange(&inst, &m0, p(&inst, "u1", "w1")), Err(Infeasible::NotBlocking));
    }

    #[test]
    fn remarriage_unacceptable() {
        let inst = fixtures::nonstable_sink();
        let m = fixtures::nonstable_sink_matching(&inst);
        let bp = blocking_pairs(&inst, &m);
        assert!(!bp.is_empty());
        for pair in bp {
            assert_eq!(apply_b_interchange(&inst, &m, pair), Err(Infeasible::RemarriageUnacceptable));
            assert_eq!(apply_via_raw(&inst, &m, pair), Err(Infeasible::RemarriageUnacceptable));
        }
    }

    #[test]
    fn verify_empty_and_single_step() {
        let inst = fixtures::example1();
        let m0 = fixtures::example1_m0(&inst);
        let replay = verify_sequence(&inst, &m0, &[]).unwrap();
        assert_eq!(replay.final_matching, m0);
        assert!(!replay.final_stable);

        let replay = verify_sequence(&inst, &m0, &[p(&inst, "u2", "w2")]).unwrap();
        assert!(replay.final_stable);
        assert_eq!(replay.final_matching, fixtures::example1_man_optimal(&inst));
        assert_eq!(replay.steps[0].before, m0.key());
        assert_eq!(replay.steps[0].after, replay.final_matching.key());

        let rejected = verify_sequence(&inst, &m0, &[p(&inst, "u1", "w1")]).unwrap_err();
        assert_eq!(rejected.index, 0);
        assert_eq!(rejected.reason, Infeasible::NotBlocking);
    }

    /// Every law of a single transition, checked over all matchings and all
    /// blocking pairs of the fixture instances.
    #[test]
    fn transition_laws_by_enumeration() {
        for inst in fixtures::all_small() {
            for m in Matching::enumerate_all(&inst, 1_000_000).unwrap() {
                let bp = blocking_pairs(&inst, &m);
                let brute: Vec<Pair> = inst.acceptable_pairs().filter(|&q| is_blocking(&inst, &m, q)).collect();
                assert_eq!(bp, brute);
                assert_eq!(is_stable(&inst, &m), bp.is_empty());
                for pair in bp {
                    let fast = apply_b_interchange(&inst, &m, pair);
                    assert_eq!(fast, apply_via_raw(&inst, &m, pair));
                    let Ok(next) = fast else { continue };
                    check_transition(&inst, &m, pair, &next);
                }
            }
        }
    }

    fn check_transition(inst: &Instance, m: &Matching, pair: Pair, next: &Matching) {
        let before = m.to_pair_set();
        let after = next.to_pair_set();
        assert!(after.contains(&pair));
        assert!(before.difference(&after).count() <= 2);
        assert!(after.difference(&before).count() <= 2);

        let (u, w) = (pair.left_agent(), pair.right_agent());
        let mut expected: BTreeSet<AgentId> = m.matched_agents();
        match (m.partner(u), m.partner(w)) {
            (Some(_), Some(_)) => {}
            (Some(ex), None) => {
                expected.remove(&ex);
                expected.insert(w);
            }
            (None, Some(ex)) => {
                expected.remove(&ex);
                expected.insert(u);
            }
            (None, None) => {
                expected.insert(u);
                expected.insert(w);
            }
        }
        assert_eq!(next.matched_agents(), expected);
        if m.is_perfect() {
            assert!(next.is_perfect());
        }
        for (who, new_partner) in [(u, w), (w, u)] {
            if let Some(old) = m.partner(who) {
                assert_eq!(inst.compare(who, new_partner, old).unwrap(), Comparison::PrefersA);
            }
        }
    }

    #[test]
    fn complete_instances_always_feasible() {
        let inst = fixtures::example1();
        for m in Matching::enumerate_all(&inst, 1_000).unwrap() {
            for pair in blocking_pairs(&inst, &m) {
                assert!(apply_b_interchange(&inst, &m, pair).is_ok());
            }
        }
    }
}
