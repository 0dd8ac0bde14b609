//! Seeded generation of valid actions (for test corpora) and of
//! deliberately broken homomorphisms (for non-example tests).
//!
//! Valid actions are assembled from orbit restrictions of two canonical
//! actions that exist for every finite inverse semigroup: the left
//! translation action on S \ {0} and the canonical action on the
//! spectrum. Unions of orbits, disjoint copies, and random relabelings
//! give a varied corpus whose members are valid by construction.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::action::{wagner_preston, Action};
use crate::groupoid::{FiniteGroupoid, GroupoidHom};
use crate::semigroup::InverseSemigroup;
use crate::spectrum::canonical_action;

/// Orbit building blocks for one semigroup, each a valid action.
pub fn orbit_blocks(sg: &Arc<InverseSemigroup>) -> Vec<Action> {
    let mut blocks = Vec::new();
    for base in [wagner_preston(sg), canonical_action(sg)] {
        for orbit in base.orbits() {
            blocks.push(base.restrict(&orbit).expect("orbits are invariant"));
        }
    }
    blocks
}

/// A random valid action on at most `max_points` points: a disjoint
/// union of randomly chosen orbit blocks, conjugated by a random
/// permutation of the space.
pub fn random_action<R: Rng>(
    sg: &Arc<InverseSemigroup>,
    rng: &mut R,
    max_points: usize,
) -> Action {
    let blocks = orbit_blocks(sg);
    let fitting: Vec<&Action> = blocks
        .iter()
        .filter(|b| b.space_size() <= max_points)
        .collect();
    assert!(
        !fitting.is_empty(),
        "no orbit block fits in {max_points} points"
    );
    let mut action = (*fitting.choose(rng).expect("nonempty")).clone();
    loop {
        let room = max_points - action.space_size();
        let candidates: Vec<&&Action> =
            fitting.iter().filter(|b| b.space_size() <= room).collect();
        if candidates.is_empty() || rng.gen_bool(0.4) {
            break;
        }
        let next = **candidates.choose(rng).expect("nonempty");
        action = action.disjoint_union(next);
    }
    let mut perm: Vec<usize> = (0..action.space_size()).collect();
    perm.shuffle(rng);
    action.relabel(&perm)
}

/// Mutates a homomorphism into a guaranteed non-example by redirecting
/// one arrow whose source fiber has at least two arrows (any such
/// redirect breaks the homomorphism equations or fiber bijectivity).
/// Returns `None` when the source groupoid has only isolated units.
pub fn mutate_hom<R: Rng>(
    source: &FiniteGroupoid,
    target: &FiniteGroupoid,
    phi: &GroupoidHom,
    rng: &mut R,
) -> Option<GroupoidHom> {
    if target.n_arrows < 2 {
        return None;
    }
    let movable: Vec<usize> = (0..source.n_arrows)
        .filter(|&a| {
            let d = source.source(a).expect("valid groupoid");
            source.d_fiber(d).expect("unit").len() >= 2
        })
        .collect();
    let arrow = *movable.choose(rng)?;
    let mut map = phi.map.clone();
    let mut replacement = rng.gen_range(0..target.n_arrows);
    while replacement == map[arrow] {
        replacement = rng.gen_range(0..target.n_arrows);
    }
    map[arrow] = replacement;
    Some(GroupoidHom { map })
}

/// Corrupts one product entry of a groupoid table to a different arrow.
/// The result cannot satisfy all groupoid axioms.
pub fn corrupt_product<R: Rng>(g: &FiniteGroupoid, rng: &mut R) -> Option<FiniteGroupoid> {
    if g.product.is_empty() || g.n_arrows < 2 {
        return None;
    }
    let keys: Vec<(usize, usize)> = g.product.keys().copied().collect();
    let key = *keys.choose(rng).expect("nonempty");
    let old = g.product[&key];
    let mut new = rng.gen_range(0..g.n_arrows);
    while new == old {
        new = rng.gen_range(0..g.n_arrows);
    }
    let mut corrupted = g.clone();
    corrupted.product.insert(key, new);
    Some(corrupted)
}
