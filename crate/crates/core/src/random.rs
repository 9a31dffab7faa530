//! Seeded generators for small groupoids, Haar systems and chains of
//! composable right-principal bibundles.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::bibundle::{hom_bibundle, Bibundle};
use crate::groupoid::{
    action_groupoid, cyclic_group, disjoint_union, pair_groupoid, pullback_groupoid,
    terminal_groupoid, unit_groupoid, FiniteGroupoid, GroupoidHom, HaarSystem,
};
use crate::scalar::rat;

pub use rand::SeedableRng;

pub type Rng64 = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One of a handful of small groupoids with at most 4 arrows.
pub fn random_base(rng: &mut Rng64) -> FiniteGroupoid {
    match rng.gen_range(0..7) {
        0 => terminal_groupoid(),
        1 => cyclic_group(2).expect("group"),
        2 => cyclic_group(3).expect("group"),
        3 => unit_groupoid(2).expect("units"),
        4 => pair_groupoid(2).expect("pair"),
        5 => disjoint_union(&cyclic_group(2).expect("group"), &terminal_groupoid()),
        _ => {
            let z2 = cyclic_group(2).expect("group");
            action_groupoid(&z2, 2, &[vec![0, 1], vec![1, 0]]).expect("swap action")
        }
    }
}

/// Positive per-object weights `p/q` with `p ≤ 5`, `q ≤ 4`.
pub fn random_haar(rng: &mut Rng64, g: &FiniteGroupoid) -> HaarSystem {
    let u: Vec<_> = (0..g.n_objects())
        .map(|_| rat(rng.gen_range(1..=5), rng.gen_range(1..=4)))
        .collect();
    HaarSystem::from_object_weights(g, &u).expect("positive weights")
}

/// A random groupoid over `k` with a functor into `k`: either a pullback
/// along a random object map, or a unit groupoid mapped onto units.
fn random_over(rng: &mut Rng64, k: &FiniteGroupoid) -> (FiniteGroupoid, GroupoidHom) {
    let n = rng.gen_range(1..=3);
    let mut phi0: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k.n_objects())).collect();
    if rng.gen_bool(0.5) && n >= k.n_objects() {
        // make the object map surjective
        for (x, slot) in phi0.iter_mut().take(k.n_objects()).enumerate() {
            *slot = x;
        }
        phi0.shuffle(rng);
    }
    if rng.gen_bool(0.2) {
        let g = unit_groupoid(n).expect("units");
        let arrow_map = (0..n).map(|x| k.unit(phi0[x])).collect();
        let hom = GroupoidHom {
            obj_map: phi0,
            arrow_map,
        };
        return (g, hom);
    }
    pullback_groupoid(k, &phi0).expect("valid object map")
}

fn shuffled(rng: &mut Rng64, p: Bibundle) -> Bibundle {
    let mut perm: Vec<usize> = (0..p.n_points()).collect();
    perm.shuffle(rng);
    p.permute_points(&perm)
}

/// `groupoids[0] ← bibundles[0] → groupoids[1] ← … → groupoids[len]`, every
/// bibundle right principal.
#[derive(Clone, Debug)]
pub struct RandomChain {
    pub groupoids: Vec<FiniteGroupoid>,
    pub haars: Vec<HaarSystem>,
    pub bibundles: Vec<Bibundle>,
}

/// A chain of `len` composable right-principal bibundles, each with at most
/// `max_points` points. Built from the right end: a base groupoid, then
/// repeated random groupoids over the previous one, joined by the
/// bibundles of the connecting functors with points shuffled.
pub fn random_chain(rng: &mut Rng64, len: usize, max_points: usize) -> RandomChain {
    'retry: loop {
        let mut groupoids = vec![random_base(rng)];
        let mut bibundles = Vec::new();
        for _ in 0..len {
            let k = groupoids.last().expect("nonempty").clone();
            let (g, phi) = random_over(rng, &k);
            let p = hom_bibundle(&phi, &g, &k).expect("functor");
            if p.n_points() > max_points {
                continue 'retry;
            }
            bibundles.push(shuffled(rng, p));
            groupoids.push(g);
        }
        groupoids.reverse();
        bibundles.reverse();
        let haars = groupoids.iter().map(|g| random_haar(rng, g)).collect();
        return RandomChain {
            groupoids,
            haars,
            bibundles,
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bibundle::is_right_principal;

    #[test]
    fn chains_are_composable_and_principal() {
        let mut rng = rng_from_seed(7);
        for _ in 0..30 {
            let c = random_chain(&mut rng, 3, 20);
            assert_eq!(c.bibundles.len(), 3);
            for (i, p) in c.bibundles.iter().enumerate() {
                assert_eq!(p.left(), &c.groupoids[i]);
                assert_eq!(p.right(), &c.groupoids[i + 1]);
                assert!(p.n_points() <= 20);
                assert!(is_right_principal(p).holds());
            }
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = random_chain(&mut rng_from_seed(42), 2, 20);
        let b = random_chain(&mut rng_from_seed(42), 2, 20);
        assert_eq!(a.bibundles, b.bibundles);
        assert_eq!(a.haars, b.haars);
    }
}
