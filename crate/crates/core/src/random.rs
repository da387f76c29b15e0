//! Seeded generators for small instances and matchings.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matching::Matching;
use crate::model::{Instance, Pair, PreferenceList};

/// Shape of a random instance.
#[derive(Clone, Copy, Debug)]
pub struct InstanceShape {
    pub max_left: usize,
    pub max_right: usize,
    /// Probability that a left/right pair is mutually acceptable.
    pub density: f64,
    /// Probability that two neighbouring entries of a list share a tier.
    pub tie_rate: f64,
}

impl Default for InstanceShape {
    fn default() -> Self {
        InstanceShape { max_left: 4, max_right: 4, density: 0.7, tie_rate: 0.25 }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random instance with `1..=max` agents per side. Left agents are named
/// `u1, u2, ...` and right agents `w1, w2, ...`.
pub fn random_instance<R: Rng>(rng: &mut R, shape: &InstanceShape) -> Instance {
    let nl = rng.gen_range(1..=shape.max_left.max(1));
    let nr = rng.gen_range(1..=shape.max_right.max(1));
    let mut acceptable = alloc::vec![alloc::vec![false; nr]; nl];
    for row in acceptable.iter_mut() {
        for cell in row.iter_mut() {
            *cell = rng.gen_bool(shape.density);
        }
    }
    instance_from_acceptability(rng, &acceptable, shape.tie_rate)
}

/// Random weak orders over a fixed acceptability pattern.
pub fn instance_from_acceptability<R: Rng>(rng: &mut R, acceptable: &[Vec<bool>], tie_rate: f64) -> Instance {
    let nl = acceptable.len();
    let nr = acceptable.first().map_or(0, Vec::len);
    let left_names: Vec<String> = (1..=nl).map(|i| format!("u{i}")).collect();
    let right_names: Vec<String> = (1..=nr).map(|i| format!("w{i}")).collect();
    let left_prefs =
        (0..nl).map(|l| random_list(rng, (0..nr).filter(|&r| acceptable[l][r]).collect(), tie_rate)).collect();
    let right_prefs =
        (0..nr).map(|r| random_list(rng, (0..nl).filter(|&l| acceptable[l][r]).collect(), tie_rate)).collect();
    Instance::new(left_names, right_names, left_prefs, right_prefs).expect("generated instance is valid")
}

fn random_list<R: Rng>(rng: &mut R, mut members: Vec<usize>, tie_rate: f64) -> PreferenceList {
    members.shuffle(rng);
    let mut tiers: Vec<Vec<usize>> = Vec::new();
    for x in members {
        match tiers.last_mut() {
            Some(t) if rng.gen_bool(tie_rate) => t.push(x),
            _ => tiers.push(alloc::vec![x]),
        }
    }
    PreferenceList::new(tiers)
}

/// A random (possibly partial) matching: acceptable pairs are visited in a
/// random order and each one that fits is kept with probability `keep`.
pub fn random_matching<R: Rng>(rng: &mut R, inst: &Instance, keep: f64) -> Matching {
    let mut pairs: Vec<Pair> = inst.acceptable_pairs().collect();
    pairs.shuffle(rng);
    let mut used_left = alloc::vec![false; inst.num_left()];
    let mut used_right = alloc::vec![false; inst.num_right()];
    let mut chosen = Vec::new();
    for p in pairs {
        if !used_left[p.left] && !used_right[p.right] && rng.gen_bool(keep) {
            used_left[p.left] = true;
            used_right[p.right] = true;
            chosen.push(p);
        }
    }
    Matching::from_pairs(inst, chosen).expect("disjoint acceptable pairs")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::is_matching;

    #[test]
    fn generator_is_deterministic_and_valid() {
        let shape = InstanceShape::default();
        let a = random_instance(&mut rng(7), &shape);
        let b = random_instance(&mut rng(7), &shape);
        assert_eq!(a, b);
        let mut r = rng(11);
        for _ in 0..50 {
            let inst = random_instance(&mut r, &shape);
            assert!(inst.num_left() <= 4 && inst.num_right() <= 4);
            let m = random_matching(&mut r, &inst, 0.7);
            assert!(is_matching(&inst, &m.to_pair_set()));
        }
    }
}
