#![allow(dead_code)]

use std::path::PathBuf;
use tropaz_core::model::TropicalModel;

pub const SMOOTH_FIXTURES: [&str; 6] = ["ex1", "k2l2_generic", "k2l3_generic", "k3l3_generic", "degenerate_triangle", "two_maximizer"];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"))
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).expect("fixture file")
}

pub fn load(name: &str) -> TropicalModel {
    TropicalModel::from_json_str(&fixture_text(name)).expect("fixture builds")
}
