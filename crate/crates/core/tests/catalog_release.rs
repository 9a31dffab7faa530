use grpd_conv::catalog::{release_catalog, run_catalog};

#[test]
fn release_catalog_passes_and_is_deterministic() {
    let entries = release_catalog();
    let first = run_catalog(&entries, &["catalog".to_string()], false);
    for f in first.failures() {
        eprintln!("FAILED {} {}", f.name, f.detail);
    }
    assert!(first.passed);
    let second = run_catalog(&entries, &["catalog".to_string()], false);
    assert_eq!(first.to_json(), second.to_json());
}
