use grpd_conv::algebra::{AlgebraElement, ConvAlgebra};
use grpd_conv::linalg::SparseVec;
use grpd_conv::random::{random_chain, rng_from_seed};
use grpd_conv::scalar::{rat, Gq};
use proptest::prelude::*;

/// A random groupoid with random object weights, taken from the left end of
/// a short random chain so that pullbacks and unit groupoids both occur.
fn algebra(seed: u64) -> ConvAlgebra {
    let c = random_chain(&mut rng_from_seed(seed), 1, 20);
    ConvAlgebra::new(c.groupoids[0].clone(), c.haars[0].clone()).unwrap()
}

fn element(a: &ConvAlgebra, raw: &[(i64, i64)]) -> AlgebraElement {
    let coeffs = (0..a.dim())
        .map(|i| {
            let (re, im) = raw[i % raw.len()];
            Gq::new(rat(re, 1 + (i as i64 % 3)), rat(im, 2))
        })
        .collect();
    a.element(coeffs).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-3i64..=3, -2i64..=2), 1..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn convolution_is_associative(seed in any::<u64>(), x in coeffs(), y in coeffs(), z in coeffs()) {
        let a = algebra(seed);
        let (x, y, z) = (element(&a, &x), element(&a, &y), element(&a, &z));
        let left = a.convolve(&a.convolve(&x, &y).unwrap(), &z).unwrap();
        let right = a.convolve(&x, &a.convolve(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn literal_sum_matches_structure_constants(seed in any::<u64>(), x in coeffs(), y in coeffs()) {
        let a = algebra(seed);
        let (x, y) = (element(&a, &x), element(&a, &y));
        let literal = a.convolve(&x, &y).unwrap();
        let table = a.to_finite_algebra().mul(&x.to_sparse(), &y.to_sparse());
        prop_assert_eq!(literal.to_sparse(), table);
    }

    #[test]
    fn unit_and_star(seed in any::<u64>(), x in coeffs(), y in coeffs()) {
        let a = algebra(seed);
        let (x, y) = (element(&a, &x), element(&a, &y));
        let e = a.unit_element();
        prop_assert_eq!(&a.convolve(&e, &x).unwrap(), &x);
        prop_assert_eq!(&a.convolve(&x, &e).unwrap(), &x);
        let xy_star = a.star(&a.convolve(&x, &y).unwrap()).unwrap();
        let swapped = a.convolve(&a.star(&y).unwrap(), &a.star(&x).unwrap()).unwrap();
        prop_assert_eq!(xy_star, swapped);
        prop_assert_eq!(a.star(&a.star(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn finite_algebra_is_associative_and_unital(seed in any::<u64>()) {
        let f = algebra(seed).to_finite_algebra();
        prop_assert_eq!(f.associativity_witness(), None);
        let u = f.unit().expect("unital");
        for i in 0..f.dim() {
            prop_assert_eq!(f.mul(&u, &SparseVec::unit(i)), SparseVec::unit(i));
        }
    }
}
