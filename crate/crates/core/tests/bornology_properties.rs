use grpd_conv::bornology::{disked_hull_gauge, is_norming, GaugeValue, PolytopalDisk};
use grpd_conv::scalar::{rat, Rational};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

/// A dimension, a generating set that spans (the unit vectors are always
/// included, scaled) and two points.
fn instance() -> impl Strategy<Value = (usize, Vec<Vec<Rational>>, Vec<Rational>, Vec<Rational>)> {
    (1usize..=6).prop_flat_map(|d| {
        let scales = prop::collection::vec((1i64..=3, 1i64..=3), d);
        let extra = prop::collection::vec(prop::collection::vec(rational(), d), 0..4);
        let point = || prop::collection::vec(rational(), d);
        (Just(d), scales, extra, point(), point())
    })
    .prop_map(|(d, scales, extra, v, w)| {
        let mut gens: Vec<Vec<Rational>> = scales
            .iter()
            .enumerate()
            .map(|(j, &(p, q))| (0..d).map(|i| if i == j { rat(p, q) } else { Rational::zero() }).collect())
            .collect();
        gens.extend(extra);
        (d, gens, v, w)
    })
}

fn gauge(d: &PolytopalDisk, v: &[Rational]) -> Rational {
    let r = disked_hull_gauge(d, v).unwrap();
    assert!(r.verify(d, v));
    match r.value {
        GaugeValue::Finite(x) => x,
        GaugeValue::Infinite => panic!("spanning disk gave an infinite gauge"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn homogeneity((d, gens, v, _) in instance(), c in rational()) {
        let disk = PolytopalDisk::new(d, gens).unwrap();
        let cv: Vec<Rational> = v.iter().map(|x| x * &c).collect();
        prop_assert_eq!(gauge(&disk, &cv), gauge(&disk, &v) * c.abs());
    }

    #[test]
    fn triangle_inequality((d, gens, v, w) in instance()) {
        let disk = PolytopalDisk::new(d, gens).unwrap();
        let vw: Vec<Rational> = v.iter().zip(&w).map(|(a, b)| a + b).collect();
        prop_assert!(gauge(&disk, &vw) <= gauge(&disk, &v) + gauge(&disk, &w));
    }

    #[test]
    fn larger_disk_gives_smaller_gauge((d, gens, v, _) in instance(), more in prop::collection::vec(rational(), 6)) {
        let small = PolytopalDisk::new(d, gens.clone()).unwrap();
        let mut bigger = gens;
        bigger.push(more[..d].to_vec());
        let big = PolytopalDisk::new(d, bigger).unwrap();
        prop_assert!(gauge(&big, &v) <= gauge(&small, &v));
    }

    #[test]
    fn coordinates_are_bounded_by_the_gauge((d, gens, v, _) in instance()) {
        let disk = PolytopalDisk::new(d, gens).unwrap();
        let cert = is_norming(&disk);
        let g = gauge(&disk, &v);
        for (x, b) in v.iter().zip(&cert.coordinate_bounds) {
            prop_assert!(x.abs() <= b * &g);
        }
    }
}
