//! Every checked-in config must parse; the quick ones must materialize.

use std::path::{Path, PathBuf};

use fraudloss::config::{DgpConfig, ExperimentFile};
use fraudloss_cli::commands::SelectFile;
use fraudloss_cli::standin::StandinConfig;

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn read(name: &str) -> String {
    std::fs::read_to_string(configs_dir().join(name)).unwrap()
}

#[test]
fn all_study_configs_parse() {
    let mut count = 0;
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        if !(name.starts_with("desk_") || name.starts_with("full_") || name.starts_with("tiny_")) {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let file: ExperimentFile =
            toml::from_str(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(file.study.replicates >= 1, "{name}");
        assert!(!file.plans.is_empty(), "{name}");
        count += 1;
    }
    assert!(count >= 12, "expected the shipped study configs, found {count}");
}

#[test]
fn desk_and_tiny_configs_materialize() {
    for name in ["tiny_demo.toml", "desk_linear_ridge.toml"] {
        let file: ExperimentFile = toml::from_str(&read(name)).unwrap();
        let config = file.materialize::<f64>().unwrap();
        assert!(config.n_test >= config.k_grid[config.k_grid.len() - 1]);
    }
}

#[test]
fn standin_and_select_configs_parse() {
    let standin: StandinConfig = toml::from_str(&read("standin.toml")).unwrap();
    assert_eq!(standin.periods, (6..=12).collect::<Vec<_>>());
    let select: SelectFile = toml::from_str(&read("select_ridge_fraud.toml")).unwrap();
    assert!(select.ingestion.is_some());
    assert!((select.selection.tau - 0.2).abs() < 1e-12);
}

#[test]
fn full_scale_configs_match_their_scales() {
    // spot-check the highest-dimensional config: block-stacked correlation
    let file: ExperimentFile =
        toml::from_str(&read("full_p4000_linear_ridge_auc.toml")).unwrap();
    let dgp: &DgpConfig = &file.dgp;
    assert_eq!(dgp.p, 4000);
    assert_eq!(dgp.correlation_blocks, 4);
    assert_eq!(file.study.n_train, 1000);
    assert_eq!(file.study.replicates, 100);
}
