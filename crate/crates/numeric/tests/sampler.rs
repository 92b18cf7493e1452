mod common;

use std::collections::BTreeMap;
use tropaz_core::lattice::{EdgeType, FundamentalDomain};
use tropaz_core::rational::to_f64;
use tropaz_numeric::aztec::*;

const PREC: u32 = 128;

#[test]
fn samples_are_seed_deterministic_covers() {
    let d = common::load("k2l2_generic").domain;
    let g = build_aztec(&d, 2).unwrap();
    let a = sample_cover(&g, 1.0, 42, PREC).unwrap();
    let b = sample_cover(&g, 1.0, 42, PREC).unwrap();
    assert_eq!(a, b);
    g.validate_cover(&a).unwrap();
    let distinct: std::collections::BTreeSet<Vec<usize>> = (0..20).map(|s| sample_cover(&g, 1.0, s, PREC).unwrap()).collect();
    assert!(distinct.len() > 1);
}

#[test]
fn sampled_heights_close_every_loop() {
    let g = build_aztec(&FundamentalDomain::uniform(1, 1).unwrap(), 8).unwrap();
    for seed in 0..5 {
        let c = sample_cover(&g, 0.0, seed, PREC).unwrap();
        let h = cover_height(&g, &c).unwrap();
        assert_eq!(h.get((0, 0)), Some(&0));
        assert_eq!(h.values.len(), g.faces().len());
    }
}

#[test]
fn single_block_binomial_agreement() {
    let g = build_aztec(&common::load("ex1").domain, 1).unwrap();
    let beta = 1.0f64;
    let p = 1.0 / (1.0 + (-beta).exp());
    let trials = 10_000;
    let hits = (0..trials)
        .filter(|&s| {
            let c = sample_cover(&g, beta, s as u64, PREC).unwrap();
            c.iter().any(|&id| g.edges[id].ty == EdgeType::South)
        })
        .count();
    let sd = (trials as f64 * p * (1.0 - p)).sqrt();
    assert!((hits as f64 - trials as f64 * p).abs() < 3.0 * sd, "{hits} of {trials}, expected {}", trials as f64 * p);
}

fn chi_square(g: &AztecGraph, beta: f64, samples: u64) -> (f64, usize) {
    let covers = enumerate_aztec_covers(g, 4).unwrap();
    let weights: Vec<f64> = covers.iter().map(|c| (beta * to_f64(&g.energy(c))).exp()).collect();
    let z: f64 = weights.iter().sum();
    let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for s in 0..samples {
        *counts.entry(sample_cover(g, beta, s, PREC).unwrap()).or_default() += 1;
    }
    assert!(counts.keys().all(|c| covers.contains(c)));
    let stat = covers
        .iter()
        .zip(&weights)
        .map(|(c, w)| {
            let expected = samples as f64 * w / z;
            let observed = *counts.get(c).unwrap_or(&0) as f64;
            (observed - expected).powi(2) / expected
        })
        .sum();
    (stat, covers.len() - 1)
}

#[test]
fn zero_temperature_parameter_gives_uniform_samples() {
    let g = build_aztec(&common::load("ex1").domain, 2).unwrap();
    let (stat, dof) = chi_square(&g, 0.0, 8000);
    assert_eq!(dof, 7);
    // 0.999 quantile of chi-square with 7 degrees of freedom.
    assert!(stat < 24.32, "chi-square {stat}");
}

#[test]
fn weighted_samples_follow_the_boltzmann_law() {
    let d = FundamentalDomain::from_json_str(r#"{"k":1,"ell":2,"logw":{"0,0,W":"1/2","0,0,S":"-1","0,0,E":"0","0,0,N":"1","1,0,W":"0","1,0,S":"1/3","1,0,E":"-1/2","1,0,N":"0"}}"#).unwrap();
    let g = build_aztec(&d, 1).unwrap();
    let (stat, dof) = chi_square(&g, 1.0, 8000);
    assert_eq!(dof, 7);
    assert!(stat < 24.32, "chi-square {stat}");
}
