use skewbrace::families::ParamChoice;
use skewbrace::report::export::{from_json, to_json, to_markdown};
use skewbrace::report::{classify, ClassifyOptions};

#[test]
fn order_28_markdown_matches_golden_file() {
    let report = classify(2, 7, &ClassifyOptions::default()).unwrap();
    let golden = include_str!("golden/order28.md");
    assert_eq!(to_markdown(&report), golden);
}

#[test]
fn order_28_nonabelian_rows() {
    let report = classify(2, 7, &ClassifyOptions::default()).unwrap();
    let md = to_markdown(&report);
    assert!(md.contains("| Z_q x|_r Z_{p^2} | 2 | 2 | 2 | 4 |\n"));
    assert!(md.contains("| Z_p x (Z_q x|_r Z_p) | 2 | 2 | 2 | 4 |\n"));
}

#[test]
fn json_export_then_import_is_identical() {
    let report = classify(2, 5, &ClassifyOptions::default()).unwrap();
    let back = from_json(&to_json(&report).unwrap()).unwrap();
    assert_eq!(back, report);
    assert_eq!(to_json(&back).unwrap(), to_json(&report).unwrap());
}

#[test]
fn other_parameter_choices_give_the_same_tables() {
    let base = to_markdown(&classify(2, 13, &ClassifyOptions::default()).unwrap());
    // h can be 5 or 8 mod 13, r is always -1
    let choice = ParamChoice { h: 1, ..Default::default() };
    let opts = ClassifyOptions { choice, ..Default::default() };
    let other = classify(2, 13, &opts).unwrap();
    assert_eq!(other.params.h, Some(8));
    assert_eq!(to_markdown(&other), base);
    let r1 = ClassifyOptions { choice: ParamChoice { r: 1, ..Default::default() }, ..Default::default() };
    assert!(classify(2, 13, &r1).is_err());
}
