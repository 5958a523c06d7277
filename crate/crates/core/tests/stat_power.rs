use lamperti_core::path_core::StreamSeed;
use lamperti_core::stat_tests::ks_two_sample;

use rand::Rng;
use rand_distr::StandardNormal;

fn sample(seed: u64, stream: u64, shift: f64) -> Vec<f64> {
    let mut rng = StreamSeed::new(seed, stream).rng();
    (0..1000).map(|_| shift + rng.sample::<f64, _>(StandardNormal)).collect()
}

fn rejections(shift: f64) -> usize {
    (0..50u64)
        .filter(|&r| !ks_two_sample(&sample(51, 2 * r, 0.0), &sample(51, 2 * r + 1, shift)).unwrap().pass)
        .count()
}

#[test]
fn power_grows_with_separation() {
    let small = rejections(0.1);
    let large = rejections(0.3);
    assert!(small < large, "{small} vs {large}");
    assert_eq!(large, 50);
    assert_eq!(rejections(5.0), 50);
}

#[test]
fn reports_serialize_with_the_documented_fields() {
    let r = ks_two_sample(&sample(52, 0, 0.0), &sample(52, 1, 0.0)).unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    for key in ["name", "statistic", "threshold", "pass", "n_samples", "details"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["n_samples"], serde_json::json!([1000, 1000]));
}
