#![allow(dead_code)]

use std::path::PathBuf;
use tropaz_core::model::TropicalModel;

pub fn fixture_text(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"));
    std::fs::read_to_string(path).expect("fixture file")
}

pub fn load(name: &str) -> TropicalModel {
    TropicalModel::from_json_str(&fixture_text(name)).expect("fixture builds")
}
