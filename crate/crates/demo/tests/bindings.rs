use subset_syzygy_demo::{analysis, chain, enumeration, parse_points, MAX_POINTS};

const FIVE: &str = r#"[{"x":0,"y":0},{"x":1,"y":0},{"x":1,"y":1},{"x":1,"y":2},{"x":2,"y":2}]"#;

#[test]
fn three_collinear_plus_two() {
    let x = parse_points(FIVE).unwrap();
    let a = analysis(&x).unwrap();
    assert_eq!(a.hilbert.values, vec![1, 3, 5, 5]);
    assert_eq!(a.label.case, 3);
    assert_eq!(a.gcd_degree, Some(2));
    assert!(a.diagram.contains("total"));
    let json = serde_json::to_value(&a).unwrap();
    assert!(json["betti"]["entries"].is_array());
}

#[test]
fn chain_and_enumeration_agree() {
    let x = parse_points(FIVE).unwrap();
    for m in 1..x.len() {
        let c = chain(&x, m).unwrap();
        let e = enumeration(&x, m).unwrap();
        assert!(e.winners >= 1);
        let found = e
            .records
            .iter()
            .find(|r| r.subset == c.subset)
            .expect("chain subset appears in the enumeration");
        assert_eq!(found.achieves_prediction, Some(true));
    }
}

#[test]
fn rejects_bad_input() {
    assert!(parse_points("[]").is_err());
    assert!(parse_points("[{\"x\":1}]").is_err());
    assert!(parse_points(r#"[{"x":1,"y":2},{"x":1,"y":2}]"#)
        .unwrap_err()
        .contains("duplicates"));
    let many: Vec<String> = (0..=MAX_POINTS)
        .map(|i| format!(r#"{{"x":{i},"y":0}}"#))
        .collect();
    assert!(parse_points(&format!("[{}]", many.join(","))).is_err());
    let x = parse_points(FIVE).unwrap();
    assert!(chain(&x, 5).is_err());
    assert!(enumeration(&x, 0).is_err());
}

#[test]
fn json_exports_round_trip() {
    let out = subset_syzygy_demo::find_subset(FIVE, 4).unwrap();
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["subset"].as_array().unwrap().len(), 4);
}
