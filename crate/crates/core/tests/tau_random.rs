use grpd_conv::bimodule::{tau_coherence_check, tau_hat};
use grpd_conv::random::{random_chain, rng_from_seed};

#[test]
fn tau_is_bijective_on_random_pairs() {
    let mut rng = rng_from_seed(2024);
    for i in 0..40 {
        let c = random_chain(&mut rng, 2, 20);
        let cert = tau_hat(&c.bibundles[0], &c.bibundles[1], &c.haars[0], &c.haars[1], &c.haars[2])
            .unwrap();
        assert!(cert.is_iso(), "pair {i}: {cert:?}");
    }
}

#[test]
fn tau_coherence_on_random_triples() {
    let mut rng = rng_from_seed(99);
    for i in 0..10 {
        let c = random_chain(&mut rng, 3, 20);
        let h: Vec<_> = c.haars.iter().collect();
        let cert =
            tau_coherence_check(&c.bibundles[0], &c.bibundles[1], &c.bibundles[2], [h[0], h[1], h[2], h[3]])
                .unwrap();
        assert!(cert.taus_are_isos && cert.associator_ok, "triple {i}: {cert:?}");
    }
}
