use std::path::Path;

use grpd_conv::algebra::{check_algebra_iso, ideal_check, ConvAlgebra, Side};
use grpd_conv::bibundle::{compose_bibundles_permissive, is_biprincipal, is_right_principal, Bibundle};
use grpd_conv::bimodule::{conv_bimodule, tau_hat, tensor_over};
use grpd_conv::bornology::{disked_hull_gauge, mackey_rate, BornologyError, GaugeValue};
use grpd_conv::catalog::{bibundle_certificate, random_chain_outcomes, release_catalog, run_catalog, Certificate};
use grpd_conv::groupoid::{counting_haar, FiniteGroupoid, HaarSystem};
use grpd_conv::io::{self, IoError};
use grpd_conv::linalg::{LinearMap, SparseVec};
use grpd_conv::mollifier::{
    bump_function, dirac_rate_experiment, fiber_dirac_experiment, group_approx_unit_demo,
    standard_test_functions, unit_density, wavy_density, DecayReport, Density, MollifierConfig,
    MollifierError,
};
use grpd_conv::report::{CertificateOutcome, Report};
use grpd_conv::torus::{simplicity_experiment, Theta, TorusElement};
use serde_json::{json, Value};

use crate::json;
use crate::{AlgebraCommand, BibundleCommand, ChainHaar, CliError, Command, DocKind, PairHaar, Profile};

pub struct Context {
    report: Report,
}

impl Context {
    pub fn new(command: &[String]) -> Self {
        Context {
            report: Report::new(command),
        }
    }

    fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Read {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        self.report.add_input(&path.display().to_string(), text.as_bytes());
        Ok(text)
    }

    fn load<T>(
        &mut self,
        path: &Path,
        parse: impl FnOnce(&str) -> Result<T, IoError>,
    ) -> Result<T, CliError> {
        let text = self.read(path)?;
        parse(&text).map_err(|e| CliError::Input {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    fn groupoid(&mut self, path: &Path) -> Result<FiniteGroupoid, CliError> {
        self.load(path, io::load_groupoid)
    }

    fn bibundle(&mut self, path: &Path) -> Result<Bibundle, CliError> {
        self.load(path, io::load_bibundle)
    }

    fn haar(&mut self, path: Option<&Path>, g: &FiniteGroupoid) -> Result<HaarSystem, CliError> {
        match path {
            None => Ok(counting_haar(g)),
            Some(p) => self.load(p, |t| io::load_haar(t, g)),
        }
    }

    fn pass(&mut self, name: &str, passed: bool, detail: Value) {
        self.report.push(CertificateOutcome::new(name, passed, detail));
    }

    fn data(&mut self, data: Value) {
        self.report.data = data;
    }

    pub fn finish(self) -> Report {
        self.report
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn execute(ctx: &mut Context, command: &Command) -> Result<(), CliError> {
    match command {
        Command::Validate { kind, file, groupoid } => validate(ctx, *kind, file, groupoid.as_deref()),
        Command::Algebra(cmd) => algebra(ctx, cmd),
        Command::Bibundle(cmd) => bibundle(ctx, cmd),
        Command::Tensor { p, q, haar } => tensor(ctx, p, q, haar),
        Command::TauCheck { p, q, haar } => tau_check(ctx, p, q, haar),
        Command::MoritaCheck { p, haar } => morita(ctx, p, haar),
        Command::Gauge { disk, point } => gauge(ctx, disk, point),
        Command::Mackey {
            seq,
            disk,
            slope_threshold,
        } => mackey(ctx, seq, disk, *slope_threshold),
        Command::DiracRun { profile, n } => dirac(ctx, *profile, n),
        Command::TorusRun {
            theta,
            element,
            n_max,
            literal_max,
            tolerance,
        } => torus(ctx, theta, element, *n_max, *literal_max, *tolerance),
        Command::Catalog {
            timings,
            random_pairs,
            random_triples,
            seed,
        } => catalog(ctx, *timings, *random_pairs, *random_triples, *seed),
    }
}

// ---------------------------------------------------------------- validate

fn validate(ctx: &mut Context, kind: DocKind, file: &Path, groupoid: Option<&Path>) -> Result<(), CliError> {
    let g = match groupoid {
        Some(p) => Some(ctx.groupoid(p)?),
        None => None,
    };
    let text = ctx.read(file)?;
    let summary: Result<Value, IoError> = match kind {
        DocKind::Groupoid => io::load_groupoid(&text)
            .map(|g| json!({"objects": g.n_objects(), "arrows": g.n_arrows()})),
        DocKind::Haar => {
            let g = g.ok_or_else(|| usage("validating a Haar system needs --groupoid"))?;
            io::load_haar(&text, &g).map(|h| json!({"weights": json::rationals(h.weights())}))
        }
        DocKind::Bibundle => io::load_bibundle(&text).map(|p| {
            json!({"points": p.n_points(), "left_arrows": p.left().n_arrows(),
                   "right_arrows": p.right().n_arrows()})
        }),
        DocKind::Element => io::load_element(&text).and_then(|e| match &g {
            Some(g) if e.len() != g.n_arrows() => Err(IoError::Invalid {
                what: "element",
                message: format!("{} coefficients for {} arrows", e.len(), g.n_arrows()),
            }),
            _ => Ok(json!({"length": e.len()})),
        }),
        DocKind::Disk => io::load_disk(&text)
            .map(|d| json!({"dim": d.dim(), "generators": d.generators().len()})),
        DocKind::Sequence => io::load_sequence(&text)
            .map(|s| json!({"terms": s.terms.len(), "dim": s.limit.len()})),
        DocKind::Matrix => io::load_matrix(&text)
            .map(|m| json!({"rows": m.len(), "cols": m.first().map_or(0, Vec::len)})),
    };
    match summary {
        Ok(v) => {
            ctx.pass("valid", true, Value::Null);
            ctx.data(v);
        }
        Err(e) => ctx.pass("valid", false, json!({"error": e.to_string()})),
    }
    Ok(())
}

// ---------------------------------------------------------------- algebra

fn algebra(ctx: &mut Context, cmd: &AlgebraCommand) -> Result<(), CliError> {
    match cmd {
        AlgebraCommand::StructureConstants { groupoid, haar } => {
            let g = ctx.groupoid(groupoid)?;
            let h = ctx.haar(haar.as_deref(), &g)?;
            let alg = ConvAlgebra::new(g.clone(), h).map_err(|e| usage(e.to_string()))?;
            let sc = alg.structure_constants();
            let table: Vec<Value> = sc
                .table
                .iter()
                .map(|(&(a, b), v)| {
                    let terms: Vec<Value> = v
                        .iter()
                        .map(|(k, c)| json!({"arrow": g.label(*k), "coeff": json::scalar(c)}))
                        .collect();
                    json!({"g": g.label(a), "h": g.label(b), "product": terms})
                })
                .collect();
            let fa = alg.to_finite_algebra();
            let witness = fa.associativity_witness();
            ctx.pass("associative", witness.is_none(), json!({"witness": witness}));
            let unit = fa.unit();
            ctx.pass(
                "unital",
                unit.is_some(),
                json!({"unit": unit.as_ref().map(json::sparse)}),
            );
            ctx.data(json!({"dim": sc.dim, "nonzero": sc.nnz(), "labels": g.labels(), "table": table}));
        }
        AlgebraCommand::IsoCheck {
            map,
            a,
            b,
            haar_a,
            haar_b,
        } => {
            let m = ctx.load(map, io::load_matrix)?;
            let ga = ctx.groupoid(a)?;
            let gb = ctx.groupoid(b)?;
            let ha = ctx.haar(haar_a.as_deref(), &ga)?;
            let hb = ctx.haar(haar_b.as_deref(), &gb)?;
            let fa = ConvAlgebra::new(ga, ha).map_err(|e| usage(e.to_string()))?.to_finite_algebra();
            let fb = ConvAlgebra::new(gb, hb).map_err(|e| usage(e.to_string()))?.to_finite_algebra();
            let f = LinearMap::from_dense_rows(&m);
            let cert = check_algebra_iso(&f, &fa, &fb).map_err(|e| usage(e.to_string()))?;
            ctx.pass("bijective", cert.bijective, json!({"rank": cert.rank}));
            ctx.pass(
                "multiplicative",
                cert.counterexample.is_none(),
                json!({"counterexample": cert.counterexample}),
            );
            ctx.data(json!({"dim": fa.dim()}));
        }
        AlgebraCommand::IdealCheck {
            groupoid,
            elements,
            haar,
        } => {
            let g = ctx.groupoid(groupoid)?;
            let h = ctx.haar(haar.as_deref(), &g)?;
            let mut vs = Vec::new();
            for path in elements {
                let e = ctx.load(path, io::load_element)?;
                if e.len() != g.n_arrows() {
                    return Err(CliError::Input {
                        path: path.display().to_string(),
                        message: format!("{} coefficients for {} arrows", e.len(), g.n_arrows()),
                    });
                }
                vs.push(SparseVec::from_dense(&e));
            }
            let fa = ConvAlgebra::new(g, h).map_err(|e| usage(e.to_string()))?.to_finite_algebra();
            let r = ideal_check(&fa, &vs);
            let witness = r.witness.as_ref().map(|w| {
                json!({"side": side_name(w.side), "basis": w.basis,
                       "vector": w.vector, "product": json::sparse(&w.product)})
            });
            ctx.pass("two_sided_ideal", r.is_two_sided_ideal(), json!({"witness": witness}));
            ctx.data(json!({"rank": r.rank, "left_closed": r.left_closed,
                            "right_closed": r.right_closed, "proper": r.is_proper,
                            "smoothness_omitted": r.smoothness_omitted}));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- bibundles

fn principal_json(c: &grpd_conv::bibundle::PrincipalityCertificate) -> Value {
    json!({"l_surjective": c.l_surjective, "l_missing": c.l_missing,
           "free": c.free, "free_witness": c.free_witness,
           "transitive": c.transitive, "transitive_witness": c.transitive_witness})
}

fn bibundle(ctx: &mut Context, cmd: &BibundleCommand) -> Result<(), CliError> {
    match cmd {
        BibundleCommand::PrincipalCheck { p, both } => {
            let p = ctx.bibundle(p)?;
            let c = is_biprincipal(&p);
            ctx.pass("right_principal", c.right.holds(), principal_json(&c.right));
            if *both {
                ctx.pass("left_principal", c.left.holds(), principal_json(&c.left));
            }
            let (orbit, n_orbits) = p.biorbits();
            ctx.data(json!({"points": p.n_points(), "biorbits": n_orbits, "orbit_of_point": orbit}));
        }
        BibundleCommand::Compose { p, q } => {
            let p = ctx.bibundle(p)?;
            let q = ctx.bibundle(q)?;
            let (c, warning) = compose_bibundles_permissive(&p, &q).map_err(|e| usage(e.to_string()))?;
            ctx.pass(
                "left_factor_right_principal",
                warning.is_none(),
                json!({"warning": warning}),
            );
            let rp = is_right_principal(&c.bibundle);
            ctx.pass("composite_right_principal", rp.holds(), principal_json(&rp));
            let doc = serde_json::to_value(io::bibundle_to_doc(&c.bibundle)).expect("document");
            ctx.data(json!({"pairs": c.pairs.len(), "points": c.bibundle.n_points(),
                            "class_of_pair": c.class_of_pair, "composite": doc}));
        }
        BibundleCommand::MoritaCheck { p, haar } => morita(ctx, p, haar)?,
    }
    Ok(())
}

fn morita(ctx: &mut Context, path: &Path, haar: &PairHaar) -> Result<(), CliError> {
    let p = ctx.bibundle(path)?;
    let hl = ctx.haar(haar.haar_left.as_deref(), p.left())?;
    let hr = ctx.haar(haar.haar_right.as_deref(), p.right())?;
    let c = is_biprincipal(&p);
    ctx.pass("right_principal", c.right.holds(), principal_json(&c.right));
    ctx.pass("left_principal", c.left.holds(), principal_json(&c.left));
    let m = bibundle_certificate("morita", Certificate::Morita, &p, &hl, &hr);
    ctx.pass("morita", m.passed, m.detail);
    Ok(())
}

fn chain(ctx: &mut Context, p: &Path, q: &Path, haar: &ChainHaar) -> Result<ChainInputs, CliError> {
    let p = ctx.bibundle(p)?;
    let q = ctx.bibundle(q)?;
    if p.right() != q.left() {
        return Err(usage("bibundles are not composable: P's right groupoid differs from Q's left"));
    }
    let hg = ctx.haar(haar.haar_left.as_deref(), p.left())?;
    let hh = ctx.haar(haar.haar_middle.as_deref(), p.right())?;
    let hk = ctx.haar(haar.haar_right.as_deref(), q.right())?;
    Ok(ChainInputs { p, q, hg, hh, hk })
}

struct ChainInputs {
    p: Bibundle,
    q: Bibundle,
    hg: HaarSystem,
    hh: HaarSystem,
    hk: HaarSystem,
}

fn action_columns(labels: &[String], dim: usize, act: impl Fn(usize, usize) -> SparseVec) -> Value {
    Value::Array(
        labels
            .iter()
            .enumerate()
            .map(|(a, label)| {
                let cols: Vec<Value> = (0..dim).map(|k| json::sparse(&act(a, k))).collect();
                json!({"arrow": label, "columns": cols})
            })
            .collect(),
    )
}

fn tensor(ctx: &mut Context, p: &Path, q: &Path, haar: &ChainHaar) -> Result<(), CliError> {
    let c = chain(ctx, p, q, haar)?;
    let (mp, mq) = match (conv_bimodule(&c.p, &c.hg, &c.hh), conv_bimodule(&c.q, &c.hh, &c.hk)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            ctx.pass("bimodules", false, json!({"error": e.to_string()}));
            return Ok(());
        }
    };
    ctx.pass("bimodules", true, Value::Null);
    match tensor_over(&mp.module, &mq.module) {
        Err(e) => ctx.pass("actions_descend", false, json!({"error": e.to_string()})),
        Ok(t) => {
            ctx.pass("actions_descend", true, Value::Null);
            let d = t.quotient.dim();
            let dn = t.dim_right;
            let basis: Vec<Value> = t
                .quotient
                .basis_coordinates()
                .iter()
                .map(|&x| json!([c.p.label(x / dn), c.q.label(x % dn)]))
                .collect();
            let left = action_columns(c.p.left().labels(), d, |a, k| t.bimodule.basis_left(a, k).clone());
            let right = action_columns(c.q.right().labels(), d, |b, k| t.bimodule.basis_right(k, b).clone());
            ctx.data(json!({"ambient_dim": t.quotient.ambient(), "relations_rank": t.quotient.relations().rank(),
                            "dim": d, "basis": basis, "left_action": left, "right_action": right}));
        }
    }
    Ok(())
}

fn tau_check(ctx: &mut Context, p: &Path, q: &Path, haar: &ChainHaar) -> Result<(), CliError> {
    let c = chain(ctx, p, q, haar)?;
    match tau_hat(&c.p, &c.q, &c.hg, &c.hh, &c.hk) {
        Err(e) => ctx.pass("tau", false, json!({"error": e.to_string()})),
        Ok(t) => {
            ctx.pass("representative_independent", t.representative_independent, Value::Null);
            ctx.pass("well_defined", t.well_defined, Value::Null);
            ctx.pass("bimodule_map", t.bimodule_map, Value::Null);
            ctx.pass(
                "bijective",
                t.rank == t.tensor.quotient.dim() && t.rank == t.composite.bibundle.n_points(),
                json!({"rank": t.rank, "tensor_dim": t.tensor.quotient.dim(),
                       "composite_points": t.composite.bibundle.n_points()}),
            );
            ctx.data(json!({"matrix": json::matrix(&t.map),
                            "composite_labels": t.composite.bibundle.labels()}));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- bornology

const REAL_CIRCLING: &str = "scalars are real rationals: disks are circled under multiplication by \
     [-1, 1] only, not by the complex unit disk";

fn gauge(ctx: &mut Context, disk: &Path, point: &str) -> Result<(), CliError> {
    let d = ctx.load(disk, io::load_disk)?;
    let v = io::parse_point(point).map_err(|e| usage(e.to_string()))?;
    let r = disked_hull_gauge(&d, &v).map_err(|e| usage(e.to_string()))?;
    let verified = r.verify(&d, &v);
    let opt = |x: &Option<Vec<_>>| x.as_ref().map_or(Value::Null, |x| json::rationals(x));
    ctx.pass(
        if r.value == GaugeValue::Infinite { "farkas_certificate" } else { "primal_dual_certificate" },
        verified,
        Value::Null,
    );
    ctx.data(json!({"point": json::rationals(&v), "gauge": r.value.to_string(),
                    "coefficients": opt(&r.coefficients), "dual": opt(&r.dual),
                    "farkas": opt(&r.farkas), "notes": [REAL_CIRCLING]}));
    Ok(())
}

fn mackey(ctx: &mut Context, seq: &Path, disk: &Path, threshold: f64) -> Result<(), CliError> {
    let s = ctx.load(seq, io::load_sequence)?;
    let d = ctx.load(disk, io::load_disk)?;
    match mackey_rate(&s.terms, &s.limit, &d, threshold) {
        Ok(r) => {
            ctx.pass(
                "mackey_convergent",
                r.convergent,
                json!({"slope": r.slope, "slope_threshold": threshold}),
            );
            let gauges: Vec<String> = r.gauges.iter().map(ToString::to_string).collect();
            ctx.data(json!({"gauges": gauges, "slope": r.slope, "notes": [REAL_CIRCLING]}));
        }
        Err(BornologyError::OffSpan(n)) => ctx.pass(
            "mackey_convergent",
            false,
            json!({"off_span_term": n, "reason": "v_n - v is not in the span of the disk"}),
        ),
        Err(e) => return Err(usage(e.to_string())),
    }
    Ok(())
}

// ---------------------------------------------------------------- experiments

fn parse_ns(s: &str) -> Result<Vec<u32>, CliError> {
    let bad = || usage(format!("invalid --n {s:?}: expected \"a..b\" or a comma-separated list"));
    let ns: Vec<u32> = if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        (a..=b).collect()
    } else {
        s.split(',')
            .map(|x| x.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?
    };
    if ns.is_empty() || ns.contains(&0) {
        return Err(bad());
    }
    Ok(ns)
}

fn decay_outcome(ctx: &mut Context, name: &str, r: Result<DecayReport, MollifierError>) -> Value {
    match r {
        Ok(r) => {
            ctx.pass(
                name,
                r.eventually_monotone && r.below_tolerance,
                json!({"final_error": r.final_error, "eventually_monotone": r.eventually_monotone}),
            );
            serde_json::to_value(&r).expect("report")
        }
        Err(e) => {
            ctx.pass(name, false, json!({"error": e.to_string()}));
            Value::Null
        }
    }
}

fn dirac(ctx: &mut Context, profile: Profile, n: &str) -> Result<(), CliError> {
    let Profile::Std = profile;
    let ns = parse_ns(n)?;
    let cfg = MollifierConfig::default();
    let rate = match dirac_rate_experiment(&standard_test_functions(), &ns, &cfg) {
        Ok(r) => {
            for t in &r.tables {
                ctx.pass(
                    &format!("dirac_rate/{}", t.name),
                    t.all_hold,
                    json!({"max_ratio": t.max_ratio}),
                );
            }
            serde_json::to_value(&r).expect("report")
        }
        Err(e) => {
            ctx.pass("dirac_rate", false, json!({"error": e.to_string()}));
            Value::Null
        }
    };
    let section = |x: f64, y: f64| bump_function(x / 2.0) * (y.exp() + y.cos());
    let mut fiber = Vec::new();
    for (label, rho) in [("unit", unit_density as Density), ("wavy", wavy_density)] {
        let r = fiber_dirac_experiment(&section, rho, 3.0, &ns, &cfg);
        fiber.push(json!({"density": label, "report": decay_outcome(ctx, &format!("fiber_dirac/{label}"), r)}));
    }
    let group = group_approx_unit_demo(&bump_function, 1.5, &ns, &cfg);
    let group = decay_outcome(ctx, "group_approx_unit", group);
    ctx.data(json!({"profile": "std", "config": cfg, "rate": rate, "fiber": fiber, "group": group}));
    Ok(())
}

fn torus(
    ctx: &mut Context,
    theta: &str,
    element: &str,
    n_max: u32,
    literal_max: u32,
    tolerance: f64,
) -> Result<(), CliError> {
    let th = Theta::parse(theta).map_err(|e| usage(e.to_string()))?;
    let a = TorusElement::parse(th, element).map_err(|e| usage(e.to_string()))?;
    if n_max == 0 {
        return Err(usage("--n-max must be positive"));
    }
    let mut ns: Vec<u32> = std::iter::successors(Some(1u32), |&n| n.checked_mul(2))
        .take_while(|&n| n < n_max)
        .collect();
    ns.push(n_max);
    let r = simplicity_experiment(&a, &ns, literal_max, tolerance).map_err(|e| usage(e.to_string()))?;
    let worst = r
        .rows
        .iter()
        .filter_map(|row| row.closed_vs_literal)
        .fold(0.0, f64::max);
    ctx.pass("closed_form_matches_literal", worst <= 1e-10, json!({"max_difference": worst}));
    ctx.pass(
        "averages_reach_scalar",
        r.first_below_tolerance.is_some(),
        json!({"first_below_tolerance": r.first_below_tolerance,
               "non_decaying_modes": r.non_decaying_modes}),
    );
    ctx.data(serde_json::to_value(&r).expect("report"));
    Ok(())
}

// ---------------------------------------------------------------- catalog

fn catalog(
    ctx: &mut Context,
    timings: bool,
    pairs: usize,
    triples: usize,
    seed: Option<u64>,
) -> Result<(), CliError> {
    if (pairs > 0 || triples > 0) && seed.is_none() {
        return Err(usage("random chains need an explicit --seed"));
    }
    let command = ctx.report.command.clone();
    let mut report = run_catalog(&release_catalog(), &command, timings);
    if let Some(seed) = seed {
        for o in random_chain_outcomes(seed, pairs, triples) {
            report.push(o);
        }
        if let Value::Object(m) = &mut report.data {
            m.insert("random".into(), json!({"seed": seed, "pairs": pairs, "triples": triples}));
        }
    }
    ctx.report = report;
    Ok(())
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::Left => "left",
        Side::Right => "right",
        Side::Both => "both",
    }
}
