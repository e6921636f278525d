use trigonal_sigma::grading::json::{series_from_json, series_to_json};
use trigonal_sigma::sigma::{build_sigma, schur_weierstrass, BuildConfig, SigmaSeries};

fn small() -> SigmaSeries {
    build_sigma(&BuildConfig {
        max_grade: 2,
        strata_order: 16,
        ..BuildConfig::default()
    })
    .unwrap()
}

#[test]
fn sigma_round_trip_is_byte_stable() {
    let s = small();
    let text = s.to_json_string(false).unwrap();
    let back = SigmaSeries::from_json_str(&text).unwrap();
    assert_eq!(back.series, s.series);
    assert_eq!(back.provenance, s.provenance);
    assert_eq!(back.to_json_string(false).unwrap(), text);
}

#[test]
fn tampering_is_rejected() {
    let text = small().to_json_string(false).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["content_hash"] = serde_json::json!("00");
    assert!(SigmaSeries::from_json_str(&v.to_string()).is_err());

    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["provenance"]["max_grade"] = serde_json::json!(3);
    assert!(SigmaSeries::from_json_str(&v.to_string()).is_err());

    assert!(SigmaSeries::from_json_str("{}").is_err());
    assert!(SigmaSeries::from_json_str("not json").is_err());
}

#[test]
fn plain_series_round_trip() {
    let s = schur_weierstrass();
    let back = series_from_json(&series_to_json(&s).unwrap()).unwrap();
    assert_eq!(back, s);
}
