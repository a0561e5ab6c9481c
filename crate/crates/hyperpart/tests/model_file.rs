use std::path::Path;

use hyperpart::model_file::{from_json, load, save, to_json};
use hyperpart_core::dataprep::{synth_generate, Preset};
use hyperpart_core::partitioner::FORMAT_VERSION;
use hyperpart_core::{fit_model, FitConfig, PartitionModel, Pool};
use rand::{Rng, SeedableRng};

fn trained() -> PartitionModel {
    let data = synth_generate(&Preset::Piecewise.spec(1500, 3)).unwrap().complete;
    fit_model(
        &data,
        &FitConfig { seed: 3, ..FitConfig::default() },
        &Pool::from_ids(&["constant", "logistic"]).unwrap(),
    )
    .unwrap()
}

#[test]
fn round_trip_predicts_bit_identically() {
    let model = trained();
    assert!(model.len() > 1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    save(&model, &path).unwrap();
    let loaded = load(&path).unwrap();
    assert_eq!(loaded, model);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let x: Vec<f64> = (0..model.dim()).map(|_| rng.gen_range(-0.5..1.5)).collect();
        assert_eq!(model.predict(&x).unwrap().to_bits(), loaded.predict(&x).unwrap().to_bits());
    }
    assert_eq!(to_json(&loaded), to_json(&model));
}

#[test]
fn truncated_file_is_an_error() {
    let text = to_json(&trained());
    for cut in [0, 1, text.len() / 3, text.len() / 2, text.len() - 3] {
        let err = from_json(&text[..cut], Path::new("m.json")).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }
}

#[test]
fn version_mismatch_names_both_versions() {
    let mut value: serde_json::Value = serde_json::from_str(&to_json(&trained())).unwrap();
    value["format_version"] = serde_json::json!(FORMAT_VERSION + 1);
    let err = from_json(&value.to_string(), Path::new("m.json")).unwrap_err().to_string();
    assert!(err.contains(&format!("{}", FORMAT_VERSION + 1)), "{err}");
    assert!(err.contains(&format!("version {FORMAT_VERSION}")), "{err}");
}

#[test]
fn tampered_partition_is_rejected() {
    let mut value: serde_json::Value = serde_json::from_str(&to_json(&trained())).unwrap();
    let cells = value["cells"].as_array_mut().unwrap();
    cells.pop();
    assert!(from_json(&value.to_string(), Path::new("m.json")).is_err());
    assert!(from_json("{\"format_version\": 1}", Path::new("m.json")).is_err());
    assert!(from_json("[]", Path::new("m.json")).is_err());
}

#[test]
fn missing_model_file_exits_two() {
    let err = load(Path::new("/definitely/not/here.json")).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}
