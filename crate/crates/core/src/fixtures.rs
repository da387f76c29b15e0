//! Named instances used throughout the tests and the documentation.

use alloc::vec;
use alloc::vec::Vec;

use crate::matching::Matching;
use crate::model::{Instance, InstanceBuilder};

/// Tamura's 4x4 instance with strict complete lists.
///
/// ```text
/// u1: w1 w3 w2 w4      w1: u2 u4 u1 u3
/// u2: w2 w4 w3 w1      w2: u3 u1 u2 u4
/// u3: w3 w1 w4 w2      w3: u4 u2 u3 u1
/// u4: w4 w2 w1 w3      w4: u1 u3 u4 u2
/// ```
pub fn example1() -> Instance {
    let mut b = InstanceBuilder::new();
    for i in 1..=4 {
        b.left(alloc::format!("u{i}"));
    }
    for i in 1..=4 {
        b.right(alloc::format!("w{i}"));
    }
    let lists: [(&str, [&str; 4]); 8] = [
        ("u1", ["w1", "w3", "w2", "w4"]),
        ("u2", ["w2", "w4", "w3", "w1"]),
        ("u3", ["w3", "w1", "w4", "w2"]),
        ("u4", ["w4", "w2", "w1", "w3"]),
        ("w1", ["u2", "u4", "u1", "u3"]),
        ("w2", ["u3", "u1", "u2", "u4"]),
        ("w3", ["u4", "u2", "u3", "u1"]),
        ("w4", ["u1", "u3", "u4", "u2"]),
    ];
    for (who, order) in lists {
        let tiers: Vec<[&str; 1]> = order.iter().map(|&x| [x]).collect();
        b.prefs(who, &tiers);
    }
    b.build().expect("example 1 is valid")
}

/// `{u1w1, u2w4, u3w3, u4w2}`, blocked by `{u2,w2}` and `{u4,w4}`.
pub fn example1_m0(inst: &Instance) -> Matching {
    Matching::from_names(inst, &[("u1", "w1"), ("u2", "w4"), ("u3", "w3"), ("u4", "w2")]).unwrap()
}

/// `{u1w1, u2w2, u3w4, u4w3}`, from which no stable matching is reachable.
pub fn example1_n0(inst: &Instance) -> Matching {
    Matching::from_names(inst, &[("u1", "w1"), ("u2", "w2"), ("u3", "w4"), ("u4", "w3")]).unwrap()
}

/// `{u_i w_i}`, the man-optimal stable matching.
pub fn example1_man_optimal(inst: &Instance) -> Matching {
    Matching::from_names(inst, &[("u1", "w1"), ("u2", "w2"), ("u3", "w3"), ("u4", "w4")]).unwrap()
}

/// A 3x3 instance with incomplete lists in which
/// [`nonstable_sink_matching`] is blocked, yet every blocking pair would
/// remarry two agents who find each other unacceptable. The matching is a
/// sink of the divorce graph that is not stable.
///
/// Found by the seeded random search in `tests/nonstable_sink_search.rs`.
pub fn nonstable_sink() -> Instance {
    let mut b = InstanceBuilder::new();
    b.left("u1").left("u2").left("u3").right("w1").right("w2").right("w3");
    b.prefs("u1", &[vec!["w2"], vec!["w3"]]);
    b.prefs("u2", &[vec!["w3"], vec!["w1"], vec!["w2"]]);
    b.prefs("u3", &[vec!["w3"], vec!["w2"]]);
    b.prefs("w1", &[vec!["u2"]]);
    b.prefs("w2", &[vec!["u3"], vec!["u1", "u2"]]);
    b.prefs("w3", &[vec!["u2"], vec!["u1"], vec!["u3"]]);
    b.build().expect("fixture is valid")
}

/// `{u1w2, u2w1, u3w3}`. Its only blocking pair `{u2,w3}` would force the
/// remarriage `{u3,w1}`, which neither finds acceptable.
pub fn nonstable_sink_matching(inst: &Instance) -> Matching {
    Matching::from_names(inst, &[("u1", "w2"), ("u2", "w1"), ("u3", "w3")]).unwrap()
}

/// One mutually acceptable pair.
pub fn single_pair() -> Instance {
    let mut b = InstanceBuilder::new();
    b.left("u").right("w");
    b.prefs("u", &[["w"]]).prefs("w", &[["u"]]);
    b.build().expect("fixture is valid")
}

/// Two agents per side, everybody tied with everybody.
pub fn all_tied_2x2() -> Instance {
    let mut b = InstanceBuilder::new();
    b.left("u1").left("u2").right("w1").right("w2");
    b.prefs("u1", &[["w1", "w2"]]).prefs("u2", &[["w1", "w2"]]);
    b.prefs("w1", &[["u1", "u2"]]).prefs("w2", &[["u1", "u2"]]);
    b.build().expect("fixture is valid")
}

/// Three agents per side with ties and gaps, and an agent nobody accepts.
pub fn mixed_3x3() -> Instance {
    let mut b = InstanceBuilder::new();
    b.left("a").left("b").left("c").right("x").right("y").right("z");
    b.prefs("a", &[vec!["x", "y"], vec!["z"]]);
    b.prefs("b", &[vec!["y"], vec!["x"]]);
    b.prefs("c", &[] as &[Vec<&str>]);
    b.prefs("x", &[vec!["b"], vec!["a"]]);
    b.prefs("y", &[vec!["a", "b"]]);
    b.prefs("z", &[vec!["a"]]);
    b.build().expect("fixture is valid")
}

/// Every hand-written fixture with at most four agents per side.
pub fn all_small() -> Vec<Instance> {
    vec![example1(), nonstable_sink(), single_pair(), all_tied_2x2(), mixed_3x3(), Instance::empty()]
}
