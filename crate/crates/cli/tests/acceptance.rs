//! Acceptance report: one PASS/FAIL line per criterion, nonzero exit on any failure.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;
use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::time::{Duration, Instant};
use tropaz_cli::check::run_suites;
use tropaz_core::covers::{color_multiweb, enumerate_covers, is_strictly_concave, surface_tension_table, DimerCover};
use tropaz_core::gibbs0::{char_poly_mu, oracle_component_measure, LiftedEdge};
use tropaz_core::lattice::{build_torus_graph, EdgeType, FundamentalDomain, Slope};
use tropaz_core::model::TropicalModel;
use tropaz_core::newton::{build_subdivision, classify_genericity, PointClass};
use tropaz_core::rational::{frac, int, to_f64, Rational};
use tropaz_numeric::aztec::*;
use tropaz_numeric::finite_beta::{anchor_point, char_poly_beta, gibbs_beta_marginal, surface_tension_beta, QuadratureSpec};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

const SMOOTH_FIXTURES: [&str; 6] = ["ex1", "k2l2_generic", "k2l3_generic", "k3l3_generic", "degenerate_triangle", "two_maximizer"];
const QUAD: QuadratureSpec = QuadratureSpec { nodes: 256, precision: 256 };
const PREC: u32 = 256;

fn load(name: &str) -> TropicalModel {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"));
    TropicalModel::from_json_str(&std::fs::read_to_string(path).expect("fixture file")).expect("fixture builds")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ex1_golden() -> Outcome {
    let m = load("ex1");
    let s = m.stages().map_err(|e| e.to_string())?;
    let slopes = [(0, 0), (0, 1), (-1, 0), (-1, 1)];
    let values: Vec<Rational> = slopes.iter().map(|&mu| s.fstar.value(mu).clone()).collect();
    ensure(values == [int(0), int(0), int(1), int(0)], || format!("f* = {values:?}"))?;

    let a = m.action().map_err(|e| e.to_string())?;
    let geo = a.arctic_curve().map_err(|e| e.to_string())?;
    ensure(geo.segments.len() == 1, || format!("{} segments", geo.segments.len()))?;
    let ends: BTreeSet<_> = [geo.segments[0].from.clone(), geo.segments[0].to.clone()].into_iter().collect();
    let expected: BTreeSet<_> = [(int(0), int(-1)), (int(-1), int(0))].into_iter().collect();
    ensure(ends == expected, || format!("segment {ends:?}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let (u, v) = (frac(-rng.gen_range(1..1000), 1000), frac(-rng.gen_range(1..1000), 1000));
        let h = a.limit_shape(&u, &v).map_err(|e| e.to_string())?;
        let expected = if &u + &v >= int(-1) { -(&u + &v) } else { int(1) };
        ensure(h == expected, || format!("h({u}, {v}) = {h}"))?;
    }
    Ok("f* = (0,0,1,0), segment (0,-1)-(-1,0), h = max(-u-v) / 1 at 200 points".into())
}

fn genericity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut summary = Vec::new();
    for (k, ell) in [(1, 2), (2, 2), (2, 3), (3, 3)] {
        let mut smooth = 0;
        for draw in 0..100 {
            let d = FundamentalDomain::from_fn(k, ell, |_, _, _| int(rng.gen_range(-1_000_000..=1_000_000))).map_err(|e| e.to_string())?;
            let table = surface_tension_table(&build_torus_graph(&d)).map_err(|e| e.to_string())?;
            let report = classify_genericity(&build_subdivision(&table));
            if report.smooth && report.triangles == 2 * k * ell {
                smooth += 1;
            } else {
                println!("  violation k={k} ell={ell} draw {draw}: {:?}", report.reasons);
            }
        }
        ensure(smooth >= 99, || format!("({k},{ell}): {smooth}/100 smooth"))?;
        summary.push(format!("({k},{ell}) {smooth}/100"));
    }
    Ok(summary.join(", "))
}

fn invariant_suites() -> Outcome {
    for name in SMOOTH_FIXTURES {
        let report = run_suites(&load(name), 0);
        ensure(report.passed(), || format!("{name}: {:?}", report.failures()))?;
        ensure(report.suites.len() == 10, || format!("{name}: suites skipped"))?;
    }
    Ok(format!("10 suites on {} fixtures", SMOOTH_FIXTURES.len()))
}

fn geometry() -> Outcome {
    let mut regions = 0;
    for name in SMOOTH_FIXTURES {
        let m = load(name);
        let a = m.action().map_err(|e| e.to_string())?;
        let report = a.verify_geometry(&a.arctic_curve().map_err(|e| e.to_string())?);
        ensure(report.passed(), || format!("{name}: {report:?}"))?;
        for (mu, n) in &report.n_one_counts {
            if report.merged_regions.contains(mu) {
                continue;
            }
            let expected = match m.subdivision.polygon.classify(*mu) {
                PointClass::Interior => 4,
                PointClass::Side => 3,
                PointClass::Corner => 2,
            };
            ensure(*n == expected, || format!("{name} {mu:?}: {n} vertices with n = 1"))?;
            regions += 1;
        }
    }
    Ok(format!("{regions} regions with counts (4,3,2)"))
}

fn gibbs_zero() -> Outcome {
    let mut halves = 0;
    let mut slopes = 0;
    for name in SMOOTH_FIXTURES {
        let m = load(name);
        let g = &m.graph;
        for mu in m.subdivision.polygon.points().into_iter().filter(|&mu| is_strictly_concave(&m.subdivision, mu)) {
            let mg = m.maximizer_graph(mu);
            let (poly, _, _) = char_poly_mu(g, &mg).map_err(|e| format!("{name} {mu:?}: {e}"))?;
            let (_, exp) = poly.as_monomial().ok_or_else(|| format!("{name} {mu:?}: not a monomial"))?;
            ensure(exp == mu, || format!("{name} {mu:?}: exponent {exp:?}"))?;
            let measure = m.gibbs(mu).map_err(|e| e.to_string())?;
            let p = |e: LiftedEdge| measure.edge_probabilities(g, &[e]).map_err(|e| e.to_string());
            for w in 0..g.vertex_count() {
                let mut total = int(0);
                for id in g.white_edges(w).filter(|&id| mg.contains(id)) {
                    total += p(LiftedEdge { edge: id, copy: (0, 0) })?;
                }
                ensure(total == int(1), || format!("{name} {mu:?}: white {w} sums to {total}"))?;
                let mut total = int(0);
                for &id in g.black_edges(w).iter().filter(|&&id| mg.contains(id)) {
                    let (dm, dn) = g.edges[id].black_copy_shift();
                    total += p(LiftedEdge { edge: id, copy: (-dm, -dn) })?;
                }
                ensure(total == int(1), || format!("{name} {mu:?}: black {w} sums to {total}"))?;
            }
            for comp in mg.components.iter().filter(|c| c.bounded) {
                for (e, expected) in oracle_component_measure(g, comp).map_err(|e| e.to_string())? {
                    ensure(p(e)? == expected, || format!("{name} {mu:?}: oracle disagrees at {e:?}"))?;
                    if name == "two_maximizer" && expected == frac(1, 2) {
                        halves += 1;
                    }
                }
            }
            slopes += 1;
        }
    }
    ensure(halves > 0, || "no edge of probability 1/2 on the two-maximizer fixture".into())?;
    Ok(format!("{slopes} slopes, {halves} half-probability edges"))
}

fn random_domain(rng: &mut ChaCha8Rng, k: usize, ell: usize) -> FundamentalDomain {
    FundamentalDomain::from_fn(k, ell, |_, _, _| int(rng.gen_range(-6..=6))).unwrap()
}

fn coloring() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut domains = vec![load("ex1").domain, load("k2l2_generic").domain, load("two_maximizer").domain];
    for (k, ell) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        domains.push(FundamentalDomain::uniform(k, ell).unwrap());
        domains.push(random_domain(&mut rng, k, ell));
    }
    let mut colored = 0;
    let mut maximal = 0;
    for d in &domains {
        let graph = build_torus_graph(d);
        let table = surface_tension_table(&graph).map_err(|e| e.to_string())?;
        let sub = build_subdivision(&table);
        let covers = enumerate_covers(&graph).map_err(|e| e.to_string())?;
        for size in [2, 3] {
            for input in covers.iter().cloned().combinations_with_replacement(size) {
                let n = size as i64;
                let sum = input.iter().fold((0, 0), |a, c| (a.0 + c.slope.0, a.1 + c.slope.1));
                if sum.0 % n != 0 || sum.1 % n != 0 {
                    continue;
                }
                let mu: Slope = (sum.0 / n, sum.1 / n);
                let output = color_multiweb(&input, &graph).map_err(|e| e.to_string())?;
                let multiset = |cs: &[DimerCover]| cs.iter().flat_map(|c| c.edges.iter().copied()).sorted().collect::<Vec<_>>();
                ensure(output.len() == input.len() && multiset(&output) == multiset(&input), || format!("{mu:?}: multiset differs"))?;
                for c in &output {
                    ensure(c.slope == mu, || format!("output slope {:?} for {mu:?}", c.slope))?;
                    ensure(DimerCover::new(c.edges.clone(), &graph).as_ref() == Ok(c), || format!("{mu:?}: invalid cover"))?;
                }
                let estar = table.estar(mu).unwrap();
                let maximizers = input.iter().all(|c| c.slope == mu && &c.energy == estar);
                if maximizers && is_strictly_concave(&sub, mu) {
                    ensure(output.iter().all(|c| &c.energy == estar), || format!("{mu:?}: output is not a maximizer"))?;
                    maximal += 1;
                }
                colored += 1;
            }
        }
    }
    Ok(format!("{colored} multiwebs on {} domains, {maximal} from maximizers", domains.len()))
}

fn tension_gaps(name: &str) -> Result<Vec<(Slope, Vec<f64>)>, String> {
    let m = load(name);
    let sum = char_poly_beta(&m.graph).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for mu in m.subdivision.polygon.points().into_iter().filter(|&mu| is_strictly_concave(&m.subdivision, mu)) {
        let estar = to_f64(m.table.estar(mu).unwrap());
        let mut gaps = Vec::new();
        for beta in [2.0, 5.0, 10.0] {
            let t = surface_tension_beta(&sum, mu, beta, &QUAD).map_err(|e| e.to_string())?;
            gaps.push((t.normalized() + estar).abs());
        }
        out.push((mu, gaps));
    }
    Ok(out)
}

fn tension() -> Outcome {
    // Gaps below this floor are exact up to quadrature round-off.
    let floor = 1e-12;
    let mut strict = 0;
    for name in ["ex1", "k2l2_generic"] {
        for (mu, g) in tension_gaps(name)? {
            ensure(g[2] <= 0.05, || format!("{name} {mu:?}: gap {} at beta 10", g[2]))?;
            ensure(g[1] <= g[0].max(floor) && g[2] <= g[1].max(floor), || format!("{name} {mu:?}: gaps {g:?}"))?;
            println!("  {name} {mu:?}: gaps {:?}", g.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>());
            if name == "k2l2_generic" && g[0] > g[1] && g[1] > g[2] && g[0] > floor {
                strict += 1;
            }
        }
    }
    ensure(strict > 0, || "no strictly decreasing gap on the generic fixture".into())?;
    Ok(format!("gaps <= 0.05 at beta 10, {strict} generic slopes strictly decreasing"))
}

fn gibbs_beta() -> Outcome {
    let m = load("ex1");
    let sum = char_poly_beta(&m.graph).map_err(|e| e.to_string())?;
    let a = anchor_point(&sum.tropical(), (-1, 0)).map_err(|e| e.to_string())?;
    let south = LiftedEdge { edge: m.graph.edge_id(0, EdgeType::South), copy: (0, 0) };
    let exact = to_f64(&m.gibbs((-1, 0)).map_err(|e| e.to_string())?.edge_probabilities(&m.graph, &[south]).map_err(|e| e.to_string())?);
    let p = gibbs_beta_marginal(&m.graph, &[south], &a.x, &a.y, 12.0, &QUAD).map_err(|e| e.to_string())?.value.to_f64();
    ensure((p - exact).abs() < 1e-3, || format!("EX1 South {p} vs {exact}"))?;

    let m = load("two_maximizer");
    let sum = char_poly_beta(&m.graph).map_err(|e| e.to_string())?;
    let mu = *m.table.entries.keys().find(|&&mu| m.table.maximizers(mu).len() == 2).ok_or("no two-maximizer slope")?;
    let a = anchor_point(&sum.tropical(), mu).map_err(|e| e.to_string())?;
    let measure = m.gibbs(mu).map_err(|e| e.to_string())?;
    let edge = measure
        .maxgraph
        .edges
        .iter()
        .map(|&id| LiftedEdge { edge: id, copy: (0, 0) })
        .find(|e| measure.edge_probabilities(&m.graph, &[*e]).ok() == Some(frac(1, 2)))
        .ok_or("no half-probability edge")?;
    let mut errors = Vec::new();
    for beta in [8.0, 12.0] {
        let p = gibbs_beta_marginal(&m.graph, &[edge], &a.x, &a.y, beta, &QUAD).map_err(|e| e.to_string())?;
        errors.push((p.value.to_f64() - 0.5).abs());
    }
    ensure(errors[1] < errors[0], || format!("errors {errors:?}"))?;
    Ok(format!("EX1 |p - {exact}| = {:.1e}, two-maximizer errors {:.1e} > {:.1e}", (p - exact).abs(), errors[0], errors[1]))
}

fn deviations(name: &str, blocks: &[usize], beta: f64) -> Result<Vec<LimitDeviation>, String> {
    let m = load(name);
    let action = m.action().map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for &b in blocks {
        let g = build_aztec(&m.domain, b).map_err(|e| e.to_string())?;
        let marginals = aztec_edge_marginals(&g, beta, PREC).map_err(|e| e.to_string())?;
        let (field, _) = expected_height_field(&g, &marginals);
        out.push(compare_with_limit_shape(&g, &field, &action, 0.1).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

fn tikz_to_plane(a: i64, b: i64) -> (i64, i64) {
    (a + b + 3, b + 3 - a)
}

fn printed_heights() -> Result<usize, String> {
    let g = build_aztec(&FundamentalDomain::uniform(1, 1).unwrap(), 4).map_err(|e| e.to_string())?;
    let vertical = [(-4, 0), (-3, 1), (-2, 2), (-3, -1), (0, -2), (1, -2), (2, -1), (3, 0), (2, 1), (-1, 2)];
    let horizontal = [(-1, -3), (-2, -2), (0, 2), (0, 0), (-2, 0), (-2, 1), (0, 1), (0, 3), (-1, 4), (-2, -1)];
    let white_at: BTreeMap<(i64, i64), usize> = (0..g.whites.len()).map(|w| (g.white_position(w), w)).collect();
    let black_at: BTreeMap<(i64, i64), usize> = (0..g.blacks.len()).map(|b| (g.black_position(b), b)).collect();
    // Dimer ends sit at the cell centres `(x + 1/2, y + 1/2)`.
    let ends = vertical.iter().map(|&(x, y)| ((x, y), (x, y + 1))).chain(horizontal.iter().map(|&(x, y)| ((x, y), (x + 1, y))));
    let mut cover = Vec::new();
    for (p, q) in ends {
        let to_plane = |(x, y): (i64, i64)| (x + y + 4, y - x + 3);
        let (p, q) = (to_plane(p), to_plane(q));
        let (w, b) = if p.0.rem_euclid(2) == 1 { (p, q) } else { (q, p) };
        cover.push(g.edge_between(white_at[&w], black_at[&b]).ok_or("printed dimer is not an edge")?);
    }
    let field = cover_height(&g, &cover).map_err(|e| e.to_string())?;
    let mut printed: Vec<((i64, i64), i64)> = Vec::new();
    for x in 0..=4 {
        printed.push(((x, x - 3), x));
        printed.push(((-x, 5 - x), 4));
    }
    for y in 1..=3 {
        printed.push(((-y, y - 3), y));
        printed.push(((y, 5 - y), 4));
    }
    printed.extend([
        ((0, -2), 1), ((0, -1), 2), ((0, 0), 2), ((0, 1), 3), ((0, 2), 3), ((0, 3), 4), ((0, 4), 4),
        ((-1, -1), 2), ((-1, 0), 2), ((-1, 1), 3), ((-1, 2), 3), ((-1, 3), 3),
        ((1, -1), 1), ((1, 0), 2), ((1, 1), 3), ((1, 2), 3), ((1, 3), 4),
        ((-2, 0), 2), ((-2, 1), 3), ((-2, 2), 3),
        ((2, 0), 2), ((2, 1), 3), ((2, 2), 3),
        ((-3, 1), 3), ((3, 1), 3),
    ]);
    let mut faces = BTreeSet::new();
    for ((a, b), value) in printed {
        let face = tikz_to_plane(a, b);
        ensure(field.get(face) == Some(&value), || format!("face {face:?}: {:?} vs {value}", field.get(face)))?;
        faces.insert(face);
    }
    ensure(faces.into_iter().collect::<Vec<_>>() == g.faces(), || "printed faces do not cover the diamond".into())?;
    Ok(g.faces().len())
}

fn aztec() -> Outcome {
    let ex1 = deviations("ex1", &[4, 8, 16], 20.0)?;
    let bulk: Vec<f64> = ex1.iter().map(|d| d.max_bulk).collect();
    ensure(ex1.iter().all(|d| d.bulk_faces > 0), || "no bulk faces".into())?;
    ensure(bulk.windows(2).all(|w| w[1] <= w[0]), || format!("EX1 bulk deviations {bulk:?}"))?;
    ensure(ex1.iter().all(|d| d.max_all < 1e-8), || format!("EX1 deviations {ex1:?}"))?;
    let generic: Vec<f64> = deviations("k2l2_generic", &[1, 2, 4], 20.0)?.iter().map(|d| d.max_all).collect();
    ensure(generic.windows(2).all(|w| w[1] < w[0]), || format!("generic deviations {generic:?}"))?;
    println!("  EX1 n = 4, 8, 16: bulk {bulk:?}, all faces {:?}", ex1.iter().map(|d| format!("{:.1e}", d.max_all)).collect::<Vec<_>>());
    println!("  k2l2_generic n = 4, 8, 16: all faces {:?}", generic.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>());

    let g = build_aztec(&load("ex1").domain, 1).map_err(|e| e.to_string())?;
    for beta in [1.0, 5.0, 20.0] {
        let m = aztec_edge_marginals(&g, beta, PREC).map_err(|e| e.to_string())?;
        let expected = Float::with_val(PREC, 1) / (Float::with_val(PREC, -beta).exp() + 1u32);
        for e in g.edges.iter().filter(|e| e.ty == EdgeType::South) {
            let diff = Float::with_val(PREC, &m[e.id] - &expected).abs();
            ensure(diff < 1e-20, || format!("N=1 South marginal at beta {beta}: {}", m[e.id]))?;
        }
    }
    let faces = printed_heights()?;
    Ok(format!("EX1 bulk deviation non-increasing, generic strictly decreasing, N=1 marginal to 1e-20, {faces} printed heights"))
}

fn sampling() -> Outcome {
    let g = build_aztec(&load("k2l2_generic").domain, 2).map_err(|e| e.to_string())?;
    let a = sample_cover(&g, 1.0, 42, PREC).map_err(|e| e.to_string())?;
    ensure(a == sample_cover(&g, 1.0, 42, PREC).map_err(|e| e.to_string())?, || "seed 42 is not reproducible".into())?;
    g.validate_cover(&a).map_err(|e| e.to_string())?;

    let g = build_aztec(&load("ex1").domain, 2).map_err(|e| e.to_string())?;
    let covers = enumerate_aztec_covers(&g, 4).map_err(|e| e.to_string())?;
    let samples = 8000u64;
    let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for s in 0..samples {
        *counts.entry(sample_cover(&g, 0.0, s, 128).map_err(|e| e.to_string())?).or_default() += 1;
    }
    ensure(counts.keys().all(|c| covers.contains(c)), || "sample outside the enumeration".into())?;
    let expected = samples as f64 / covers.len() as f64;
    let stat: f64 = covers.iter().map(|c| (*counts.get(c).unwrap_or(&0) as f64 - expected).powi(2) / expected).sum();
    // 0.999 quantile of chi-square with 7 degrees of freedom.
    ensure(covers.len() == 8 && stat < 24.32, || format!("chi-square {stat} over {} covers", covers.len()))?;

    let g = build_aztec(&load("ex1").domain, 1).map_err(|e| e.to_string())?;
    let beta = 1.0f64;
    let p = 1.0 / (1.0 + (-beta).exp());
    let trials = 10_000u64;
    let mut hits = 0u64;
    for s in 0..trials {
        let c = sample_cover(&g, beta, s, 128).map_err(|e| e.to_string())?;
        hits += c.iter().any(|&id| g.edges[id].ty == EdgeType::South) as u64;
    }
    let sd = (trials as f64 * p * (1.0 - p)).sqrt();
    let z = (hits as f64 - trials as f64 * p) / sd;
    ensure(z.abs() < 3.0, || format!("{hits} of {trials} South, z = {z:.2}"))?;
    Ok(format!("chi-square {stat:.2} (dof 7), binomial z = {z:.2}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("worked example", Duration::from_secs(1), ex1_golden),
        ("genericity", Duration::from_secs(120), genericity),
        ("invariant suites", Duration::from_secs(60), invariant_suites),
        ("angle geometry", Duration::MAX, geometry),
        ("zero-temperature Gibbs", Duration::MAX, gibbs_zero),
        ("multiweb coloring", Duration::MAX, coloring),
        ("tension convergence", Duration::from_secs(60), tension),
        ("Gibbs low temperature", Duration::MAX, gibbs_beta),
        ("Aztec crystallization", Duration::from_secs(180), aztec),
        ("sampling", Duration::MAX, sampling),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|d| if elapsed <= *budget { Ok(d) } else { Err(format!("{d}; took {elapsed:.2?} > {budget:?}")) });
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(detail) => {
                println!("FAIL criterion {}: {name} ({elapsed:.2?}): {detail}", i + 1);
                failed += 1;
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
