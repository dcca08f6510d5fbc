use serde_json::Value;
use unicover_demo::{facility_on_points, lower_bound_curve, set_cover_comparison};

#[test]
fn facility_points_round_trip() {
    let points = r#"{
        "clients": [{"x": 0, "y": 0, "p": 0.9}, {"x": 1, "y": 0, "p": 0.5}, {"x": 10, "y": 0, "p": 0.7}],
        "facilities": [{"x": 0.5, "y": 0, "open_cost": 1}, {"x": 10, "y": 1, "open_cost": 1}]
    }"#;
    let v: Value = serde_json::from_str(&facility_on_points(points).unwrap()).unwrap();
    let assignment: Vec<u64> = v["assignment"].as_array().unwrap().iter().map(|a| a.as_u64().unwrap()).collect();
    assert_eq!(assignment, vec![0, 0, 1]);
    let cost = v["cost"].as_f64().unwrap();
    let opt = v["brute_cost"].as_f64().unwrap();
    assert!(opt <= cost + 1e-9);
    assert!(cost <= 4.0 * v["lp_value"].as_f64().unwrap() + 1e-9);
}

#[test]
fn facility_needs_clients_and_facilities() {
    assert!(facility_on_points(r#"{"clients": [], "facilities": [{"x": 0, "y": 0, "open_cost": 1}]}"#).is_err());
    assert!(facility_on_points(r#"{"clients": [{"x": 0, "y": 0, "p": 1}], "facilities": []}"#).is_err());
    assert!(facility_on_points("not json").is_err());
}

#[test]
fn gap_curve_rises() {
    let v: Value = serde_json::from_str(&lower_bound_curve(100.0, 64).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    let ns: Vec<u64> = rows.iter().map(|r| r["n"].as_u64().unwrap()).collect();
    assert_eq!(ns, vec![4, 8, 16, 32, 64]);
    assert!((rows[0]["singleton_cost"].as_f64().unwrap() - 5.9).abs() < 1e-12);
    let ratios: Vec<f64> = rows.iter().map(|r| r["single_branch_ratio"].as_f64().unwrap()).collect();
    assert!(ratios.windows(2).all(|w| w[1] > w[0]));
    assert!(lower_bound_curve(2.0, 16).is_err());
}

#[test]
fn comparison_rows_in_fixed_order() {
    let text = set_cover_comparison(5, 4, 3, 11).unwrap();
    assert_eq!(text, set_cover_comparison(5, 4, 3, 11).unwrap());
    let v: Value = serde_json::from_str(&text).unwrap();
    let algos: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["algorithm"].as_str().unwrap()).collect();
    assert_eq!(algos, vec!["lp-round", "greedy", "freq-round"]);
    for row in v["rows"].as_array().unwrap() {
        assert!(row["error"].is_null(), "{row}");
        assert!(row["ratio_vs_opt"].as_f64().unwrap() >= 1.0 - 1e-9);
    }
    assert!(set_cover_comparison(0, 4, 3, 1).is_err());
}
