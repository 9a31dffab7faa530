//! The example catalog: named constructions with the certificates each one is
//! expected to pass, run in a thread pool and reported in name order.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{tensor_algebra_iso, ConvAlgebra, Side};
use crate::bibundle::{is_biprincipal, is_right_principal, Bibundle};
use crate::bimodule::{
    conv_bimodule, find_module_section, morita_check, self_induced_check, smoothness_check,
    tau_coherence_check, tau_hat, verify_module_section, MoritaSide,
};
use crate::groupoid::{counting_haar, FiniteGroupoid, HaarSystem};
use crate::random::{random_chain, rng_from_seed, RandomChain};
use crate::io::{
    bibundle_from_doc, groupoid_from_doc, BibundleDoc, BibundleSpec, GroupoidDoc, GroupoidSpec,
};
use crate::report::{sha256_hex, CertificateOutcome, Report};
use crate::scalar::parse_rational;

/// Environment variable capping the catalog thread pool.
pub const THREADS_VAR: &str = "GRPD_CONV_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// The convolution algebra is associative and unital.
    Associative,
    SelfInduced,
    RightPrincipal,
    Biprincipal,
    /// `M(P)` is smooth on both sides.
    Smooth,
    /// The right action map of `M(P)` has a module-linear section.
    ModuleSection,
    Morita,
    Tau,
    Coherence,
    TensorAlgebraIso,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subject", rename_all = "snake_case")]
pub enum Subject {
    Groupoid {
        groupoid: GroupoidDoc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        object_weights: Option<Vec<String>>,
    },
    Bibundle {
        bibundle: BibundleDoc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        left_weights: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        right_weights: Option<Vec<String>>,
    },
    /// A composable chain `P₁, P₂, …` with counting Haar systems.
    Chain { bibundles: Vec<BibundleDoc> },
    Product { left: GroupoidDoc, right: GroupoidDoc },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub subject: Subject,
    pub expected: Vec<Certificate>,
}

fn haar_for(g: &FiniteGroupoid, weights: &Option<Vec<String>>) -> Result<HaarSystem, String> {
    match weights {
        None => Ok(counting_haar(g)),
        Some(w) => {
            let u = w
                .iter()
                .map(|s| parse_rational(s).map_err(|e| format!("weight {:?}", e.0)))
                .collect::<Result<Vec<_>, _>>()?;
            HaarSystem::from_object_weights(g, &u).map_err(|e| e.to_string())
        }
    }
}

fn outcome(entry: &str, cert: Certificate, passed: bool, detail: Value) -> CertificateOutcome {
    let tag = serde_json::to_value(cert).expect("certificate name");
    CertificateOutcome::new(format!("{entry}/{}", tag.as_str().expect("string")), passed, detail)
}

fn morita_side_json(s: &Option<MoritaSide>) -> Value {
    match s {
        None => Value::Null,
        Some(s) => json!({
            "tensor_dim": s.tensor_dim,
            "algebra_dim": s.algebra_dim,
            "tau_iso": s.tau_iso,
            "unitor_found": s.unitor_found,
            "composite_iso": s.composite_iso,
        }),
    }
}

/// Runs one certificate on a bibundle with given Haar systems.
pub fn bibundle_certificate(
    entry: &str,
    cert: Certificate,
    p: &Bibundle,
    hl: &HaarSystem,
    hr: &HaarSystem,
) -> CertificateOutcome {
    let fail = |e: &dyn std::fmt::Display| outcome(entry, cert, false, json!({"error": e.to_string()}));
    match cert {
        Certificate::RightPrincipal => {
            let c = is_right_principal(p);
            outcome(
                entry,
                cert,
                c.holds(),
                json!({"l_missing": c.l_missing, "free_witness": c.free_witness,
                       "transitive_witness": c.transitive_witness}),
            )
        }
        Certificate::Biprincipal => {
            let c = is_biprincipal(p);
            outcome(
                entry,
                cert,
                c.holds(),
                json!({"right": c.right.holds(), "left": c.left.holds()}),
            )
        }
        Certificate::Smooth => match conv_bimodule(p, hl, hr) {
            Err(e) => fail(&e),
            Ok(m) => {
                let sides: Vec<_> = [Side::Left, Side::Right]
                    .into_iter()
                    .map(|s| smoothness_check(&m.module, s))
                    .collect();
                match sides.iter().find_map(|s| s.as_ref().err()) {
                    Some(e) => fail(e),
                    None => {
                        let sides: Vec<_> = sides.into_iter().map(|s| s.expect("ok")).collect();
                        let detail: Vec<Value> = sides
                            .iter()
                            .map(|s| {
                                json!({"side": format!("{:?}", s.side), "dim_tensor": s.dim_tensor,
                                       "dim_module": s.dim_module, "rank": s.rank})
                            })
                            .collect();
                        outcome(entry, cert, sides.iter().all(|s| s.is_iso()), Value::Array(detail))
                    }
                }
            }
        },
        Certificate::ModuleSection => match conv_bimodule(p, hl, hr) {
            Err(e) => fail(&e),
            Ok(m) => {
                let s = find_module_section(&m.module, Side::Right);
                let verified = s.as_ref().is_some_and(|s| verify_module_section(&m.module, s));
                outcome(entry, cert, verified, json!({"found": s.is_some(), "verified": verified}))
            }
        },
        Certificate::Morita => match morita_check(p, hl, hr) {
            Err(e) => fail(&e),
            Ok(c) => outcome(
                entry,
                cert,
                c.holds(),
                json!({"biprincipal": c.biprincipal,
                       "left_composite": morita_side_json(&c.left_composite),
                       "right_composite": morita_side_json(&c.right_composite)}),
            ),
        },
        _ => outcome(entry, cert, false, json!({"error": "not a bibundle certificate"})),
    }
}

pub fn groupoid_certificate(
    entry: &str,
    cert: Certificate,
    g: &FiniteGroupoid,
    haar: &HaarSystem,
) -> CertificateOutcome {
    let alg = match ConvAlgebra::new(g.clone(), haar.clone()) {
        Ok(a) => a.to_finite_algebra(),
        Err(e) => return outcome(entry, cert, false, json!({"error": e.to_string()})),
    };
    match cert {
        Certificate::Associative => {
            let witness = alg.associativity_witness();
            let unital = alg.unit().is_some();
            outcome(
                entry,
                cert,
                witness.is_none() && unital,
                json!({"dim": alg.dim(), "associativity_witness": witness, "unital": unital}),
            )
        }
        Certificate::SelfInduced => match self_induced_check(&alg) {
            Err(e) => outcome(entry, cert, false, json!({"error": e.to_string()})),
            Ok(c) => outcome(
                entry,
                cert,
                c.is_iso(),
                json!({"dim_tensor": c.dim_tensor, "dim_module": c.dim_module, "rank": c.rank}),
            ),
        },
        _ => outcome(entry, cert, false, json!({"error": "not a groupoid certificate"})),
    }
}

fn chain_certificate(entry: &str, cert: Certificate, chain: &[Bibundle]) -> CertificateOutcome {
    let mut haars: Vec<HaarSystem> = chain.iter().map(|p| counting_haar(p.left())).collect();
    if let Some(last) = chain.last() {
        haars.push(counting_haar(last.right()));
    }
    match (cert, chain) {
        (Certificate::Tau, [p, q]) => match tau_hat(p, q, &haars[0], &haars[1], &haars[2]) {
            Err(e) => outcome(entry, cert, false, json!({"error": e.to_string()})),
            Ok(c) => outcome(
                entry,
                cert,
                c.is_iso(),
                json!({"tensor_dim": c.tensor.quotient.dim(),
                       "composite_points": c.composite.bibundle.n_points(),
                       "rank": c.rank, "well_defined": c.well_defined,
                       "representative_independent": c.representative_independent,
                       "bimodule_map": c.bimodule_map}),
            ),
        },
        (Certificate::Coherence, [p, q, r]) => {
            match tau_coherence_check(p, q, r, [&haars[0], &haars[1], &haars[2], &haars[3]]) {
                Err(e) => outcome(entry, cert, false, json!({"error": e.to_string()})),
                Ok(c) => outcome(
                    entry,
                    cert,
                    c.holds(),
                    json!({"checked": c.checked, "failure": c.failure,
                           "taus_are_isos": c.taus_are_isos, "associator_ok": c.associator_ok}),
                ),
            }
        }
        _ => outcome(entry, cert, false, json!({"error": "chain has the wrong length"})),
    }
}

/// Builds the entry and runs each expected certificate.
pub fn run_entry(entry: &CatalogEntry) -> Vec<CertificateOutcome> {
    let name = entry.name.as_str();
    let build_failure = |e: String| {
        vec![CertificateOutcome::new(
            format!("{name}/build"),
            false,
            json!({"error": e}),
        )]
    };
    match &entry.subject {
        Subject::Groupoid {
            groupoid,
            object_weights,
        } => {
            let g = match groupoid_from_doc(groupoid) {
                Ok(g) => g,
                Err(e) => return build_failure(e.to_string()),
            };
            let h = match haar_for(&g, object_weights) {
                Ok(h) => h,
                Err(e) => return build_failure(e),
            };
            entry
                .expected
                .iter()
                .map(|&c| groupoid_certificate(name, c, &g, &h))
                .collect()
        }
        Subject::Bibundle {
            bibundle,
            left_weights,
            right_weights,
        } => {
            let p = match bibundle_from_doc(bibundle) {
                Ok(p) => p,
                Err(e) => return build_failure(e.to_string()),
            };
            let hl = haar_for(p.left(), left_weights);
            let hr = haar_for(p.right(), right_weights);
            let (hl, hr) = match (hl, hr) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => return build_failure(e),
            };
            entry
                .expected
                .iter()
                .map(|&c| bibundle_certificate(name, c, &p, &hl, &hr))
                .collect()
        }
        Subject::Chain { bibundles } => {
            let chain = match bibundles.iter().map(bibundle_from_doc).collect::<Result<Vec<_>, _>>() {
                Ok(c) => c,
                Err(e) => return build_failure(e.to_string()),
            };
            entry
                .expected
                .iter()
                .map(|&c| chain_certificate(name, c, &chain))
                .collect()
        }
        Subject::Product { left, right } => {
            let (g, h) = match (groupoid_from_doc(left), groupoid_from_doc(right)) {
                (Ok(g), Ok(h)) => (g, h),
                (Err(e), _) | (_, Err(e)) => return build_failure(e.to_string()),
            };
            entry
                .expected
                .iter()
                .map(|&c| match c {
                    Certificate::TensorAlgebraIso => {
                        let (_, cert) =
                            tensor_algebra_iso(&ConvAlgebra::counting(g.clone()), &ConvAlgebra::counting(h.clone()));
                        outcome(
                            name,
                            c,
                            cert.is_iso(),
                            json!({"rank": cert.rank, "counterexample": cert.counterexample}),
                        )
                    }
                    _ => outcome(name, c, false, json!({"error": "not a product certificate"})),
                })
                .collect()
        }
    }
}

/// Thread count from `GRPD_CONV_THREADS`, if set to a positive integer.
pub fn configured_threads() -> Option<usize> {
    std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
}

fn pool() -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = configured_threads() {
        builder = builder.num_threads(n);
    }
    builder.build().expect("thread pool")
}

/// Runs every entry in a pool and assembles the report in name order.
/// Caveats attached to every catalog report.
pub const CATALOG_NOTES: [&str; 2] = [
    "projective means projective as an ordinary module; over finite-dimensional vector spaces this \
     coincides with projectivity relative to linearly split epimorphisms",
    "every linear epimorphism of finite-dimensional spaces splits, so the plain, split and strong \
     epimorphism grades are not distinguished",
];

pub fn run_catalog(entries: &[CatalogEntry], command: &[String], timings: bool) -> Report {
    let pool = pool();
    let mut results: Vec<(String, String, Vec<CertificateOutcome>, f64)> = pool.install(|| {
        entries
            .par_iter()
            .map(|e| {
                let start = Instant::now();
                let outcomes = run_entry(e);
                let digest = sha256_hex(serde_json::to_string(e).expect("entry").as_bytes());
                (e.name.clone(), digest, outcomes, start.elapsed().as_secs_f64() * 1e3)
            })
            .collect()
    });
    results.sort_by(|a, b| a.0.cmp(&b.0));
    let mut report = Report::new(command);
    let mut times = BTreeMap::new();
    let mut summary = Vec::new();
    for (name, digest, outcomes, ms) in results {
        report.inputs.push(crate::report::InputDigest {
            name: name.clone(),
            sha256: digest,
        });
        let passed = outcomes.iter().all(|o| o.passed);
        summary.push(json!({"entry": name, "passed": passed, "certificates": outcomes.len()}));
        for o in outcomes {
            report.push(o);
        }
        times.insert(name, ms);
    }
    report.data = json!({"entries": summary, "notes": CATALOG_NOTES});
    if timings {
        report.timings_ms = Some(times);
    }
    report
}

/// `τ̂` on `pairs` random composable pairs and the associativity coherence
/// on `triples` random triples, all drawn from one seeded generator with
/// random Haar weights. Outcomes are named `random-pair-007/tau` and
/// `random-triple-003/coherence`, in generation order.
pub fn random_chain_outcomes(seed: u64, pairs: usize, triples: usize) -> Vec<CertificateOutcome> {
    let mut rng = rng_from_seed(seed);
    let mut jobs: Vec<(String, RandomChain)> = Vec::with_capacity(pairs + triples);
    for i in 0..pairs {
        jobs.push((format!("random-pair-{i:03}"), random_chain(&mut rng, 2, 20)));
    }
    for i in 0..triples {
        jobs.push((format!("random-triple-{i:03}"), random_chain(&mut rng, 3, 20)));
    }
    pool().install(|| {
        jobs.par_iter()
            .map(|(name, c)| {
                let points: Vec<usize> = c.bibundles.iter().map(Bibundle::n_points).collect();
                let h = &c.haars;
                match c.bibundles.as_slice() {
                    [p, q] => match tau_hat(p, q, &h[0], &h[1], &h[2]) {
                        Err(e) => outcome(name, Certificate::Tau, false, json!({"error": e.to_string()})),
                        Ok(t) => outcome(
                            name,
                            Certificate::Tau,
                            t.is_iso(),
                            json!({"points": points, "tensor_dim": t.tensor.quotient.dim(),
                                   "composite_points": t.composite.bibundle.n_points(),
                                   "rank": t.rank}),
                        ),
                    },
                    [p, q, r] => match tau_coherence_check(p, q, r, [&h[0], &h[1], &h[2], &h[3]]) {
                        Err(e) => outcome(name, Certificate::Coherence, false, json!({"error": e.to_string()})),
                        Ok(t) => outcome(
                            name,
                            Certificate::Coherence,
                            t.holds(),
                            json!({"points": points, "checked": t.checked, "failure": t.failure}),
                        ),
                    },
                    _ => unreachable!("chains of length 2 or 3"),
                }
            })
            .collect()
    })
}

fn gdoc(spec: GroupoidSpec) -> GroupoidDoc {
    GroupoidDoc::from_constructor(spec)
}

fn bdoc(spec: BibundleSpec) -> BibundleDoc {
    BibundleDoc::from_constructor(spec)
}

fn pair(n: usize) -> GroupoidDoc {
    gdoc(GroupoidSpec::Pair { n })
}

fn cyclic(m: usize) -> GroupoidDoc {
    gdoc(GroupoidSpec::Cyclic { m })
}

fn swap_action() -> GroupoidDoc {
    gdoc(GroupoidSpec::Action {
        group: Box::new(cyclic(2)),
        points: 2,
        act: vec![vec![0, 1], vec![1, 0]],
    })
}

fn rotation_action(q: usize) -> GroupoidDoc {
    gdoc(GroupoidSpec::Action {
        group: Box::new(cyclic(q)),
        points: q,
        act: (0..q).map(|g| (0..q).map(|x| (g + x) % q).collect()).collect(),
    })
}

/// Cover of a 3-point space by two overlapping sets.
pub fn cech3_cover() -> Vec<Vec<usize>> {
    vec![vec![0, 1], vec![1, 2]]
}

/// Cover of a 5-point space by three sets.
pub fn cech5_cover() -> Vec<Vec<usize>> {
    vec![vec![0, 1, 2], vec![2, 3], vec![3, 4, 0]]
}

/// `ℤ₂` acting freely on four points with two orbits.
pub fn gauge_spec() -> BibundleSpec {
    BibundleSpec::Gauge {
        group: cyclic(2),
        points: 4,
        right_action: vec![vec![0, 1], vec![1, 0], vec![2, 3], vec![3, 2]],
        projection: Some(vec![0, 0, 1, 1]),
    }
}

fn gauge_groupoid_doc() -> GroupoidDoc {
    gdoc(GroupoidSpec::Gauge {
        group: Box::new(cyclic(2)),
        points: 4,
        right_action: vec![vec![0, 1], vec![1, 0], vec![2, 3], vec![3, 2]],
        projection: Some(vec![0, 0, 1, 1]),
    })
}

fn strs(xs: &[&str]) -> Option<Vec<String>> {
    Some(xs.iter().map(|s| s.to_string()).collect())
}

fn groupoid_entry(name: &str, g: GroupoidDoc, w: Option<Vec<String>>) -> CatalogEntry {
    CatalogEntry {
        name: format!("groupoid/{name}"),
        subject: Subject::Groupoid {
            groupoid: g,
            object_weights: w,
        },
        expected: vec![Certificate::Associative, Certificate::SelfInduced],
    }
}

fn bibundle_entry(
    name: &str,
    b: BibundleSpec,
    weights: (Option<Vec<String>>, Option<Vec<String>>),
    biprincipal: bool,
) -> CatalogEntry {
    let mut expected = vec![
        Certificate::RightPrincipal,
        Certificate::Smooth,
        Certificate::ModuleSection,
    ];
    if biprincipal {
        expected.extend([Certificate::Biprincipal, Certificate::Morita]);
    }
    CatalogEntry {
        name: format!("bibundle/{name}"),
        subject: Subject::Bibundle {
            bibundle: bdoc(b),
            left_weights: weights.0,
            right_weights: weights.1,
        },
        expected,
    }
}

fn chain_entry(name: &str, chain: Vec<BibundleSpec>) -> CatalogEntry {
    let cert = if chain.len() == 2 {
        Certificate::Tau
    } else {
        Certificate::Coherence
    };
    CatalogEntry {
        name: format!("{}/{name}", if chain.len() == 2 { "tau" } else { "coherence" }),
        subject: Subject::Chain {
            bibundles: chain.into_iter().map(bdoc).collect(),
        },
        expected: vec![cert],
    }
}

fn product_entry(name: &str, left: GroupoidDoc, right: GroupoidDoc) -> CatalogEntry {
    CatalogEntry {
        name: format!("product/{name}"),
        subject: Subject::Product { left, right },
        expected: vec![Certificate::TensorAlgebraIso],
    }
}

/// The release catalog.
pub fn release_catalog() -> Vec<CatalogEntry> {
    use BibundleSpec as B;
    let unit3 = gdoc(GroupoidSpec::Unit { n: 3 });
    let cech3 = || B::Cech {
        points: 3,
        cover: cech3_cover(),
    };
    let none = || (None, None);
    vec![
        groupoid_entry("terminal", gdoc(GroupoidSpec::Terminal), None),
        groupoid_entry("unit3", unit3.clone(), None),
        groupoid_entry("pair2", pair(2), None),
        groupoid_entry("pair3", pair(3), None),
        groupoid_entry("pair4", pair(4), None),
        groupoid_entry("pair3-weighted", pair(3), strs(&["1", "2", "1/3"])),
        groupoid_entry("z2", cyclic(2), None),
        groupoid_entry("z3", cyclic(3), None),
        groupoid_entry("s3", gdoc(GroupoidSpec::Symmetric3), None),
        groupoid_entry("z2-swap-action", swap_action(), None),
        groupoid_entry("z3-rotation-action", rotation_action(3), None),
        groupoid_entry(
            "cech3",
            gdoc(GroupoidSpec::Cech {
                points: 3,
                cover: cech3_cover(),
            }),
            None,
        ),
        groupoid_entry(
            "cech5",
            gdoc(GroupoidSpec::Cech {
                points: 5,
                cover: cech5_cover(),
            }),
            None,
        ),
        groupoid_entry("gauge-z2", gauge_groupoid_doc(), None),
        groupoid_entry(
            "pair2-plus-z2",
            gdoc(GroupoidSpec::DisjointUnion {
                left: Box::new(pair(2)),
                right: Box::new(cyclic(2)),
            }),
            None,
        ),
        groupoid_entry(
            "pair2-times-z2",
            gdoc(GroupoidSpec::Product {
                left: Box::new(pair(2)),
                right: Box::new(cyclic(2)),
            }),
            strs(&["1/2", "3"]),
        ),
        bibundle_entry("identity-pair3", B::Identity { groupoid: pair(3) }, none(), true),
        bibundle_entry(
            "identity-s3",
            B::Identity {
                groupoid: gdoc(GroupoidSpec::Symmetric3),
            },
            none(),
            true,
        ),
        bibundle_entry("pair3-to-point", B::Terminal { groupoid: pair(3) }, none(), true),
        bibundle_entry(
            "pair3-to-point-weighted",
            B::Terminal { groupoid: pair(3) },
            (strs(&["1/2", "2", "5"]), strs(&["3"])),
            true,
        ),
        bibundle_entry("cech3", cech3(), none(), true),
        bibundle_entry(
            "cech3-weighted",
            cech3(),
            (strs(&["1", "2", "1/2", "3"]), strs(&["2", "1/3", "1"])),
            true,
        ),
        bibundle_entry(
            "cech5",
            B::Cech {
                points: 5,
                cover: cech5_cover(),
            },
            none(),
            true,
        ),
        bibundle_entry("gauge-z2", gauge_spec(), none(), true),
        bibundle_entry(
            "point-in-pair3",
            B::Point {
                groupoid: pair(3),
                object: 0,
            },
            none(),
            true,
        ),
        bibundle_entry("z3-to-point", B::Terminal { groupoid: cyclic(3) }, none(), false),
        bibundle_entry("anchor-z2-swap", B::Anchor { groupoid: swap_action() }, none(), false),
        bibundle_entry("diagonal-z2", B::Diagonal { groupoid: cyclic(2) }, none(), false),
        bibundle_entry("point-in-z3", B::Point { groupoid: cyclic(3), object: 0 }, none(), false),
        chain_entry(
            "identity-then-terminal-pair3",
            vec![B::Identity { groupoid: pair(3) }, B::Terminal { groupoid: pair(3) }],
        ),
        chain_entry(
            "cech3-then-terminal",
            vec![cech3(), B::Terminal { groupoid: unit3.clone() }],
        ),
        chain_entry(
            "diagonal-then-terminal-z2",
            vec![
                B::Diagonal { groupoid: cyclic(2) },
                B::Terminal {
                    groupoid: gdoc(GroupoidSpec::Product {
                        left: Box::new(cyclic(2)),
                        right: Box::new(cyclic(2)),
                    }),
                },
            ],
        ),
        chain_entry(
            "point-then-terminal-pair3",
            vec![
                B::Point {
                    groupoid: pair(3),
                    object: 0,
                },
                B::Terminal { groupoid: pair(3) },
            ],
        ),
        chain_entry(
            "gauge-then-terminal",
            vec![gauge_spec(), B::Terminal { groupoid: cyclic(2) }],
        ),
        chain_entry(
            "anchor-then-terminal",
            vec![B::Anchor { groupoid: swap_action() }, B::Terminal { groupoid: pair(2) }],
        ),
        chain_entry(
            "point-identity-terminal-pair3",
            vec![
                B::Point {
                    groupoid: pair(3),
                    object: 0,
                },
                B::Identity { groupoid: pair(3) },
                B::Terminal { groupoid: pair(3) },
            ],
        ),
        chain_entry(
            "cech3-identity-terminal",
            vec![
                cech3(),
                B::Identity { groupoid: unit3.clone() },
                B::Terminal { groupoid: unit3 },
            ],
        ),
        product_entry("pair2-z2", pair(2), cyclic(2)),
        product_entry("z2-z3", cyclic(2), cyclic(3)),
        product_entry("unit2-pair2", gdoc(GroupoidSpec::Unit { n: 2 }), pair(2)),
        product_entry("s3-terminal", gdoc(GroupoidSpec::Symmetric3), gdoc(GroupoidSpec::Terminal)),
        product_entry("z2-swap-z2", swap_action(), cyclic(2)),
    ]
}
