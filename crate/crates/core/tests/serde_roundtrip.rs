//! Typed serde round-trips for every report type, covering the custom
//! calendar-quarter string representation.

use copbreak::synthetic::gdp_like_series;
use copbreak::{
    az_scan, descriptives, embed, growth_rates, indep_report, scan, AzResult, AzSpec,
    BreakScanResult, DependogramReport, MarginalTable, Normalization, Quarter, ScanConfig,
    SupMode,
};

#[test]
fn quarter_serializes_as_its_display_form() {
    let q = Quarter::new(1981, 4);
    let text = serde_json::to_string(&q).unwrap();
    assert_eq!(text, "\"1981Q4\"");
    let back: Quarter = serde_json::from_str(&text).unwrap();
    assert_eq!(back, q);
    assert!(serde_json::from_str::<Quarter>("\"1981Q7\"").is_err());
}

#[test]
fn reports_round_trip_through_json() {
    let growth = growth_rates(&gdp_like_series(3)).unwrap();

    let table = descriptives(&growth, 4).unwrap();
    let back: MarginalTable =
        serde_json::from_str(&serde_json::to_string(&table).unwrap()).unwrap();
    assert_eq!(back, table);

    let cfg = ScanConfig::new(0.2, 2, Normalization::AsPrinted, SupMode::ExactGrid);
    let result = scan(&embed(&growth, 2).unwrap(), &cfg).unwrap();
    let back: BreakScanResult =
        serde_json::from_str(&serde_json::to_string(&result).unwrap()).unwrap();
    assert_eq!(back, result);

    let report = indep_report(&growth, 2, 2, 0.05, 120, 9).unwrap();
    let back: DependogramReport =
        serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(back, report);

    let az = az_scan(&growth, AzSpec::Both, 0.2).unwrap();
    let back: AzResult = serde_json::from_str(&serde_json::to_string(&az).unwrap()).unwrap();
    assert_eq!(back, az);
}

#[test]
fn enum_labels_are_stable_in_json() {
    let cfg = ScanConfig::new(0.15, 2, Normalization::RootN, SupMode::PooledPoints);
    let text = serde_json::to_string(&cfg).unwrap();
    assert!(text.contains("\"root-N\""), "{text}");
    assert!(text.contains("\"pooled-points\""), "{text}");
    let printed = serde_json::to_string(&Normalization::AsPrinted).unwrap();
    assert_eq!(printed, "\"as-printed\"");
    let spec = serde_json::to_string(&AzSpec::Intercept).unwrap();
    assert_eq!(spec, "\"intercept\"");
}
