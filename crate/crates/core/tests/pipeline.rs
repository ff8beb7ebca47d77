use acm_wild::cohomology::{
    closed_form_table, cohomology_table_exact, cohomology_table_exact_with, default_window, TableOptions,
};
use acm_wild::moduli::{wildness_certificate, WildnessReport};
use acm_wild::presentation::build_kernel_bundle;
use acm_wild::report::{table_markdown, to_canonical_json};
use acm_wild::restriction::{make_ci_variety, AcmVerdict};
use acm_wild::{AcmVarietyDescriptor, CohomologyTable, Error, FieldSpec, ResolutionDegreeData, SeededRng};

fn f() -> FieldSpec {
    FieldSpec::default_prime()
}

fn integers_only(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Number(x) => x.is_i64() || x.is_u64(),
        serde_json::Value::Array(xs) => xs.iter().all(integers_only),
        serde_json::Value::Object(m) => m.values().all(integers_only),
        _ => true,
    }
}

#[test]
fn exact_tables_match_closed_form() {
    for (n, a) in [(2, 1), (2, 3), (3, 1), (5, 1)] {
        let built = build_kernel_bundle(n, a, &mut SeededRng::new(2024), f(), 8).unwrap();
        let (lo, hi) = default_window(n);
        let exact = cohomology_table_exact(&built.bundle, lo, hi);
        assert!(
            exact.differences(&closed_form_table(n, a, lo, hi)).is_empty(),
            "({n},{a})"
        );
        let audit = cohomology_table_exact_with(&built.bundle, lo, hi, TableOptions { audit: true });
        assert_eq!(audit.cells, exact.cells);
    }
}

#[test]
fn tables_are_deterministic() {
    let build = || {
        let built = build_kernel_bundle(3, 2, &mut SeededRng::new(99), f(), 8).unwrap();
        cohomology_table_exact(&built.bundle, -7, 4)
    };
    assert_eq!(to_canonical_json(&build()), to_canonical_json(&build()));
}

#[test]
fn empty_table_json() {
    let t = CohomologyTable::new(2, 0, -1);
    let v: serde_json::Value = serde_json::from_str(&to_canonical_json(&t)).unwrap();
    assert_eq!(v["cells"], serde_json::json!([]));
    assert_eq!((v["t_min"].as_i64(), v["t_max"].as_i64()), (Some(0), Some(-1)));
    assert_eq!(v["dim"], 2);
}

#[test]
fn wildness_report_round_trip() {
    let mut rng = SeededRng::new(42);
    let x = make_ci_variety(3, &[3], Some(&mut rng), f()).unwrap();
    let report = wildness_certificate(&x, 4, 1, &mut rng, f()).unwrap();
    assert!(report.verdict);
    let json = to_canonical_json(&report);
    let back: WildnessReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, report);
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(integers_only(&value), "reports carry integers only");
}

#[test]
fn codimension_two_by_degree_data() {
    // (2,2) complete intersection in P^5, given only by its Koszul twists
    let res = ResolutionDegreeData::koszul(5, &[2, 2]).unwrap();
    let x = AcmVarietyDescriptor::from_degree_data(res).unwrap();
    assert_eq!(x.dim(), 3);
    let report = wildness_certificate(&x, 3, 1, &mut SeededRng::new(3), f()).unwrap();
    assert!(report.verdict);
    assert_eq!(report.ambient_dim_for_s, 56 - 2 * 6 - 1);
    assert_eq!(report.vanishing.len(), 2);
}

#[test]
fn exact_quadric_threefold_certificate() {
    let mut rng = SeededRng::new(5);
    let x = make_ci_variety(4, &[2], Some(&mut rng), f()).unwrap();
    let report = wildness_certificate(&x, 3, 1, &mut rng, f()).unwrap();
    assert!(report.verdict);
    assert_eq!(report.acm, AcmVerdict::Acm);
    let table = report.restricted_table.as_ref().unwrap();
    assert!(table_markdown(table).lines().count() == 2 + 4);
}

#[test]
fn curves_are_refused() {
    let err = make_ci_variety(3, &[2, 2], None, f()).unwrap_err();
    assert!(matches!(err, Error::DimensionTooSmall { d: 1 }));
    assert!(err.is_refusal());
}
