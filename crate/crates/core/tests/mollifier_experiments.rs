use grpd_conv::mollifier::*;

fn g(x: f64) -> f64 {
    bump_function(x / 2.0)
}

const NS: [u32; 6] = [1, 2, 4, 8, 16, 32];

#[test]
fn rate_bound_holds_for_standard_functions() {
    let ns: Vec<u32> = (4..=64).collect();
    let cfg = MollifierConfig::default();
    let report = dirac_rate_experiment(&standard_test_functions(), &ns, &cfg).unwrap();
    for t in &report.tables {
        assert!(t.all_hold, "{}: max ratio {}", t.name, t.max_ratio);
    }
    let constant = report.tables.iter().find(|t| t.name == "constant").unwrap();
    assert!(constant.rows.iter().all(|r| r.error < 1e-14));
    let linear = report.tables.iter().find(|t| t.name == "linear").unwrap();
    assert!(linear.max_ratio < 1e-10);
    let cos = report.tables.iter().find(|t| t.name == "cos").unwrap();
    assert!(cos.max_ratio <= 1.0);
}

#[test]
fn fiber_independent_section_is_recovered() {
    let cfg = MollifierConfig::default();
    for rho in [unit_density as Density, wavy_density] {
        let r = fiber_dirac_experiment(&|x, _| g(x), rho, 3.0, &NS, &cfg).unwrap();
        assert!(r.final_error <= 1e-3, "{}", r.final_error);
        assert!(r.eventually_monotone);
    }
}

#[test]
fn fiber_dependent_sections_decay() {
    let cfg = MollifierConfig::default();
    let odd = fiber_dirac_experiment(&|x, y| g(x) * y, unit_density, 3.0, &NS, &cfg).unwrap();
    assert!(odd.final_error < 1e-12);
    let r = fiber_dirac_experiment(&|x, y| g(x) * (y.exp() + y.cos()), wavy_density, 3.0, &NS, &cfg)
        .unwrap();
    assert!(r.below_tolerance, "{}", r.final_error);
    assert!(r.eventually_monotone);
}

#[test]
fn group_convolution_approximate_unit() {
    let cfg = MollifierConfig::default();
    let ns = [2, 4, 8, 16, 32];
    let r = group_approx_unit_demo(&bump_function, 1.5, &ns, &cfg).unwrap();
    let at16 = r.rows.iter().find(|row| row.n == 16).unwrap().error;
    assert!(at16 < 1e-2, "{at16}");
    assert!(r.eventually_monotone && r.below_tolerance);
    let shifted = group_approx_unit_demo(&|x| bump_function(x - 0.5), 2.0, &ns, &cfg).unwrap();
    for (a, b) in r.rows.iter().zip(&shifted.rows) {
        assert!((a.error - b.error).abs() <= 0.05 * a.error, "{} vs {}", a.error, b.error);
    }
}
