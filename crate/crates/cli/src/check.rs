//! Invariant suites run by `tropaz check`.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tropaz_core::covers::is_strictly_concave;
use tropaz_core::gibbs0::{oracle_component_measure, LiftedEdge};
use tropaz_core::kirchhoff::{laplacian_residuals, reconstruct_fstar, verify_exactness};
use tropaz_core::model::TropicalModel;
use tropaz_core::rational::{cross, format_rational, frac, int, Rational};
use tropaz_core::tropical_curve::{leaf_lines_from_weights, LeafGroup};

/// Random points drawn for the zero-counting identity.
pub const COUNTING_POINTS: usize = 200;
/// Random points drawn for the facet path comparison.
pub const FACET_POINTS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CheckReport {
    pub suites: Vec<SuiteResult>,
    pub warnings: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.status != Status::Fail)
    }

    pub fn failures(&self) -> Vec<String> {
        self.suites.iter().filter(|s| s.status == Status::Fail).map(|s| format!("{}: {}", s.name, s.detail)).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.passed(),
            "suites": self.suites.iter().map(|s| json!({
                "name": s.name,
                "status": match s.status { Status::Pass => "pass", Status::Fail => "fail", Status::Skipped => "skipped" },
                "detail": s.detail,
            })).collect::<Vec<_>>(),
        })
    }

    fn record(&mut self, name: &'static str, outcome: Result<String, String>) {
        let (status, detail) = match outcome {
            Ok(d) => (Status::Pass, d),
            Err(d) => (Status::Fail, d),
        };
        self.suites.push(SuiteResult { name, status, detail });
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_point(rng: &mut ChaCha8Rng, k: usize, ell: usize) -> (Rational, Rational) {
    let den = 7919i64;
    (frac(-rng.gen_range(1..den), den * ell as i64), frac(-rng.gen_range(1..den), den * k as i64))
}

const SMOOTH_SUITES: [&str; 9] =
    ["balancing", "leaf_lines", "laplacian", "exactness", "zero_count", "leaf_boundary", "arctic_segments", "facet_paths", "geometry"];

pub fn run_suites(model: &TropicalModel, seed: u64) -> CheckReport {
    let mut report = CheckReport::default();
    report.record("gibbs_zero", gibbs_suite(model));
    if !model.genericity.smooth {
        report.warnings.push("NotSmooth: the subdivision is not a unit triangulation".into());
        for name in SMOOTH_SUITES {
            report.suites.push(SuiteResult { name, status: Status::Skipped, detail: "subdivision is not smooth".into() });
        }
        return report;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = model.stages().expect("smooth stages");
    let curve = &s.curve;
    let (k, ell) = (model.domain.k(), model.domain.ell());

    report.record("balancing", (|| {
        for v in 0..curve.vertices.len() {
            ensure(curve.balancing_defect(v) == (0, 0), || format!("vertex {v} is unbalanced"))?;
        }
        for (i, e) in curve.bounded.iter().enumerate() {
            let (a, b) = (&curve.vertices[e.from].position, &curve.vertices[e.to].position);
            let d = (&b.0 - &a.0, &b.1 - &a.1);
            ensure(d == (&e.length * int(e.eta.0), &e.length * int(e.eta.1)), || format!("edge {i} is not l(e) eta(e)"))?;
        }
        Ok(format!("{} vertices", curve.vertices.len()))
    })());

    report.record("leaf_lines", (|| {
        ensure(curve.leaf_lines() == leaf_lines_from_weights(&model.domain), || "leaf lines differ from the weight formulas".into())?;
        Ok(format!("{} leaves", curve.leaves.len()))
    })());

    report.record("laplacian", (|| {
        let residuals = laplacian_residuals(&model.subdivision, curve, &s.fstar);
        for (mu, r) in &residuals {
            ensure(r.is_zero(), || format!("residual {} at {mu:?}", format_rational(r)))?;
        }
        Ok(format!("{} interior vertices", residuals.len()))
    })());

    report.record("exactness", (|| {
        let r = verify_exactness(&s.primal.form, curve);
        ensure(r.exact(), || format!("{r:?}"))?;
        ensure(reconstruct_fstar(&model.subdivision, curve, &s.primal.form) == s.fstar.fstar, || "f* is not recovered from the 1-form".into())?;
        Ok(format!("{} cycles", r.cycles_checked))
    })());

    let action = model.action().expect("smooth model");

    report.record("zero_count", (|| {
        let mut checked = 0;
        let mut skipped = 0;
        while checked < COUNTING_POINTS {
            let (u, v) = random_point(&mut rng, k, ell);
            let zeros = action.classify_zeros(&action.slopes(&u, &v));
            if zeros.has_triple() {
                skipped += 1;
                ensure(skipped < 10 * COUNTING_POINTS, || "too many triple zeros".into())?;
                continue;
            }
            ensure(zeros.zero_count() == 2 * k * ell, || format!("count {} at ({u}, {v})", zeros.zero_count()))?;
            checked += 1;
        }
        Ok(format!("{checked} points"))
    })());

    report.record("leaf_boundary", (|| {
        let images = action.vertex_map().map_err(|e| e.to_string())?;
        for leaf in &curve.leaves {
            let p = &images[leaf.vertex];
            let ok = match leaf.group {
                LeafGroup::L1 => p.1 == int(0),
                LeafGroup::L2 => p.0 == int(0),
                LeafGroup::L3 => p.1 == frac(-1, k as i64),
                LeafGroup::L4 => p.0 == frac(-1, ell as i64),
            };
            ensure(ok, || format!("leaf at vertex {} is off its side", leaf.vertex))?;
        }
        Ok(format!("{} images", images.len()))
    })());

    let geometry = action.arctic_curve();

    report.record("arctic_segments", (|| {
        let geo = geometry.as_ref().map_err(|e| e.to_string())?;
        for seg in &geo.segments {
            let eta = curve.bounded[seg.edge].eta;
            let d = (&seg.to.0 - &seg.from.0, &seg.to.1 - &seg.from.1);
            ensure(cross(&d, &(int(eta.0), int(eta.1))).is_zero(), || format!("segment {} is not parallel to eta", seg.edge))?;
            let (left, right) = (action.left_component(seg.edge), action.right_component(seg.edge));
            for p in [&seg.from, &seg.to] {
                ensure(action.facet(left, &p.0, &p.1) == action.facet(right, &p.0, &p.1), || {
                    format!("height jumps across segment {}", seg.edge)
                })?;
            }
        }
        Ok(format!("{} segments", geo.segments.len()))
    })());

    report.record("facet_paths", (|| {
        for _ in 0..FACET_POINTS {
            let (u, v) = random_point(&mut rng, k, ell);
            for mu in model.subdivision.polygon.points() {
                ensure(action.facet(mu, &u, &v) == action.facet_by_default_path(mu, &u, &v), || format!("facet {mu:?} at ({u}, {v})"))?;
            }
        }
        Ok(format!("{FACET_POINTS} points"))
    })());

    report.record("geometry", (|| {
        let geo = geometry.as_ref().map_err(|e| e.to_string())?;
        let r = action.verify_geometry(geo);
        ensure(r.passed(), || format!("{r:?}"))?;
        Ok(format!("{} regions checked", r.n_one_counts.len()))
    })());

    report
}

/// Monomial determinant, vertex sums and the uniform oracle at every vertex of the subdivision.
fn gibbs_suite(model: &TropicalModel) -> Result<String, String> {
    let graph = &model.graph;
    let mut checked = 0;
    for mu in model.subdivision.polygon.points() {
        if !is_strictly_concave(&model.subdivision, mu) {
            continue;
        }
        let measure = model.gibbs(mu).map_err(|e| format!("{mu:?}: {e}"))?;
        ensure(measure.partition as usize == model.table.maximizers(mu).len(), || format!("{mu:?}: partition function"))?;
        let prob = |id: usize| -> Result<Rational, String> {
            if !measure.maxgraph.contains(id) {
                return Ok(int(0));
            }
            measure.edge_probabilities(graph, &[LiftedEdge { edge: id, copy: (0, 0) }]).map_err(|e| e.to_string())
        };
        for w in 0..graph.vertex_count() {
            let total: Rational = graph.white_edges(w).map(&prob).collect::<Result<Vec<_>, _>>()?.into_iter().sum();
            ensure(total == int(1), || format!("{mu:?}: white {w} sums to {}", format_rational(&total)))?;
            let total: Rational = graph.black_edges(w).iter().map(|&id| prob(id)).collect::<Result<Vec<_>, _>>()?.into_iter().sum();
            ensure(total == int(1), || format!("{mu:?}: black {w} sums to {}", format_rational(&total)))?;
        }
        for component in measure.maxgraph.components.iter().filter(|c| c.bounded) {
            for (edge, p) in oracle_component_measure(graph, component).map_err(|e| e.to_string())? {
                let q = measure.edge_probabilities(graph, &[edge]).map_err(|e| e.to_string())?;
                ensure(p == q, || format!("{mu:?}: oracle disagrees at edge {}", edge.edge))?;
            }
        }
        checked += 1;
    }
    Ok(format!("{checked} slopes"))
}
