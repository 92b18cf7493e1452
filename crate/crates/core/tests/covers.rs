mod common;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropaz_core::covers::{color_multiweb, enumerate_covers, surface_tension_table, DimerCover};
use tropaz_core::lattice::{build_torus_graph, EdgeType, FundamentalDomain, Slope, TorusGraph};
use tropaz_core::newton::build_subdivision;
use tropaz_core::rational::{int, Rational};
use tropaz_core::Error;

fn random_domain(rng: &mut ChaCha8Rng, k: usize, ell: usize) -> FundamentalDomain {
    FundamentalDomain::from_fn(k, ell, |_, _, _| int(rng.gen_range(-6..=6))).unwrap()
}

fn domains() -> Vec<FundamentalDomain> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut out = vec![common::load("k2l2_generic").domain, common::load("two_maximizer").domain];
    for (k, ell) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        out.push(FundamentalDomain::uniform(k, ell).unwrap());
        out.push(random_domain(&mut rng, k, ell));
    }
    out
}

fn permanent(m: &[Vec<u64>]) -> u64 {
    (0..m.len()).permutations(m.len()).map(|p| p.iter().enumerate().map(|(r, &c)| m[r][c]).product::<u64>()).sum()
}

fn edge_multiset(covers: &[DimerCover]) -> Vec<usize> {
    covers.iter().flat_map(|c| c.edges.iter().copied()).sorted().collect()
}

fn check_coloring(graph: &TorusGraph, table: &tropaz_core::covers::SurfaceTensionTable, input: &[DimerCover]) {
    let d = input.len() as i64;
    let sum = input.iter().fold((0, 0), |a, c| (a.0 + c.slope.0, a.1 + c.slope.1));
    let result = color_multiweb(input, graph);
    if sum.0 % d != 0 || sum.1 % d != 0 {
        assert!(matches!(result, Err(Error::SlopeSumMismatch(..))));
        return;
    }
    let mu: Slope = (sum.0 / d, sum.1 / d);
    let output = result.unwrap();
    assert_eq!(output.len(), input.len());
    assert_eq!(edge_multiset(&output), edge_multiset(input));
    for c in &output {
        assert_eq!(c.slope, mu);
        assert_eq!(DimerCover::new(c.edges.clone(), graph).unwrap(), *c);
    }
    let estar = |s: Slope| table.estar(s).unwrap().clone();
    let inputs_maximal = input.iter().all(|c| c.energy == estar(c.slope));
    let budget: Rational = input.iter().map(|c| estar(c.slope)).sum();
    if inputs_maximal && budget == int(d) * estar(mu) {
        for c in &output {
            assert_eq!(c.energy, estar(mu), "outputs of maximal inputs are maximizers");
        }
    }
}

#[test]
fn coloring_pairs_and_triples() {
    for d in domains() {
        let graph = build_torus_graph(&d);
        let table = surface_tension_table(&graph).unwrap();
        let covers = enumerate_covers(&graph).unwrap();
        for pair in covers.iter().cloned().combinations_with_replacement(2) {
            check_coloring(&graph, &table, &pair);
        }
        for triple in covers.iter().cloned().combinations_with_replacement(3) {
            check_coloring(&graph, &table, &triple);
        }
    }
}

#[test]
fn coloring_maximizers_at_strictly_concave_slopes() {
    let m = common::load("two_maximizer");
    let mut exercised = 0;
    for mu in m.subdivision.polygon.points() {
        if !m.subdivision.is_vertex(mu) {
            continue;
        }
        let maxs = m.table.maximizers(mu);
        for d in 2..=3 {
            for input in maxs.iter().cloned().combinations_with_replacement(d) {
                for c in color_multiweb(&input, &m.graph).unwrap() {
                    assert!(maxs.contains(&c), "{mu:?}: output is a maximizer");
                }
                exercised += 1;
            }
        }
    }
    assert!(exercised > 0);
}

#[test]
fn coloring_spec_cases() {
    let ex1 = common::load("ex1");
    let g = &ex1.graph;
    let single = |ty| DimerCover::new(vec![g.edge_id(0, ty)], g).unwrap();
    for (a, b) in [(EdgeType::South, EdgeType::North), (EdgeType::East, EdgeType::West)] {
        assert!(matches!(color_multiweb(&[single(a), single(b)], g), Err(Error::SlopeSumMismatch(..))));
    }
    let m = common::load("k2l2_generic");
    let covers = enumerate_covers(&m.graph).unwrap();
    let d1 = covers.iter().find(|c| c.slope == (-2, 1)).unwrap();
    let d2 = covers.iter().find(|c| c.slope == (0, 1)).unwrap();
    let out = color_multiweb(&[d1.clone(), d2.clone()], &m.graph).unwrap();
    assert!(out.iter().all(|c| c.slope == (-1, 1)));
}

#[test]
fn cover_count_matches_permanent() {
    for d in domains() {
        let graph = build_torus_graph(&d);
        let n = graph.vertex_count();
        let mut adjacency = vec![vec![0u64; n]; n];
        for e in &graph.edges {
            adjacency[e.white][e.black] += 1;
        }
        assert_eq!(enumerate_covers(&graph).unwrap().len() as u64, permanent(&adjacency));
    }
}

#[test]
fn cover_counts_invariant_under_cyclic_shift() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (k, ell) in [(1, 2), (2, 2), (2, 3), (3, 2)] {
        let d = random_domain(&mut rng, k, ell);
        let graph = build_torus_graph(&d);
        let base = enumerate_covers(&graph).unwrap();
        let energies: Vec<Rational> = base.iter().map(|c| c.energy.clone()).sorted().collect();
        for (a, b) in (0..ell).cartesian_product(0..k) {
            let shifted = FundamentalDomain::from_fn(k, ell, |i, j, ty| d.logw((i + a) % ell, (j + b) % k, ty).clone()).unwrap();
            let covers = enumerate_covers(&build_torus_graph(&shifted)).unwrap();
            assert_eq!(covers.len(), base.len());
            assert_eq!(covers.iter().map(|c| c.energy.clone()).sorted().collect::<Vec<_>>(), energies);
        }
    }
}

#[test]
fn surface_tension_is_concave() {
    for d in domains() {
        let graph = build_torus_graph(&d);
        let table = surface_tension_table(&graph).unwrap();
        let points: Vec<Slope> = table.entries.keys().copied().collect();
        let estar = |s: Slope| table.estar(s).unwrap().clone();
        for &mu in &points {
            for tri in points.iter().combinations(3) {
                let [a, b, c] = [*tri[0], *tri[1], *tri[2]];
                let det = (b.0 - a.0) * (c.1 - a.1) - (c.0 - a.0) * (b.1 - a.1);
                if det == 0 {
                    continue;
                }
                let tb = Rational::new(((mu.0 - a.0) * (c.1 - a.1) - (c.0 - a.0) * (mu.1 - a.1)).into(), det.into());
                let tc = Rational::new(((b.0 - a.0) * (mu.1 - a.1) - (mu.0 - a.0) * (b.1 - a.1)).into(), det.into());
                let ta = int(1) - &tb - &tc;
                if ta < int(0) || tb < int(0) || tc < int(0) {
                    continue;
                }
                assert!(estar(mu) >= ta * estar(a) + tb * estar(b) + tc * estar(c), "{mu:?} in {tri:?}");
            }
            for pair in points.iter().combinations(2) {
                let [a, b] = [*pair[0], *pair[1]];
                let cross = (b.0 - a.0) * (mu.1 - a.1) - (mu.0 - a.0) * (b.1 - a.1);
                let along = (mu.0 - a.0) * (b.0 - a.0) + (mu.1 - a.1) * (b.1 - a.1);
                let len2 = (b.0 - a.0).pow(2) + (b.1 - a.1).pow(2);
                if cross != 0 || along < 0 || along > len2 {
                    continue;
                }
                let t = Rational::new(along.into(), len2.into());
                assert!(estar(mu) >= (int(1) - &t) * estar(a) + t * estar(b));
            }
        }
        let sub = build_subdivision(&table);
        for (&mu, entry) in &table.entries {
            if entry.maximizers.len() == 1 {
                assert!(sub.is_vertex(mu), "unique maximizer implies strict concavity at {mu:?}");
            }
        }
    }
}
