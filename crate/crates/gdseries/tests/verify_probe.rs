use gdseries::field::FieldSpec;
use gdseries::verify;

#[test]
fn run_theorems_scope() {
    let spec = FieldSpec::alpha2();
    let report = verify::check_theorems(&spec).unwrap();
    print!("{}", report.render_text());
    assert!(report.passed());
}
