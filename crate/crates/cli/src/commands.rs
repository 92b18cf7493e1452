//! Subcommand implementations. Each one returns its result object, warnings
//! and an optional SVG; [`execute`] wraps them in the document envelope.

use crate::check::run_suites;
use crate::manifest::{resolve_precision, sha256_hex, RunManifest};
use crate::svg;
use crate::{CliError, CliResult, Command, Common, EdgeSpec, RenderObject};
use serde_json::{json, Value};
use std::path::Path;
use tropaz_core::action::Phase;
use tropaz_core::covers::is_strictly_concave;
use tropaz_core::gibbs0::LiftedEdge;
use tropaz_core::kirchhoff::{laplacian_residuals, verify_exactness};
use tropaz_core::lattice::{FundamentalDomain, Slope, TorusGraph};
use tropaz_core::model::TropicalModel;
use tropaz_core::newton::{GenericityReport, GenericityViolation};
use tropaz_core::rational::{format_rational, frac, Rational};
use tropaz_core::tropical_curve::LeafGroup;
use tropaz_numeric::aztec::{
    aztec_edge_marginals, build_aztec, compare_with_limit_shape, cover_height, expected_height_field, sample_cover,
    AztecGraph,
};
use tropaz_numeric::finite_beta::{char_poly_beta, gibbs_beta_marginal, ronkin, surface_tension_beta, QuadratureSpec};

/// Distance from the arctic curve beyond which a face counts as bulk.
pub const BULK_MARGIN: f64 = 0.1;

struct Output {
    result: Value,
    warnings: Vec<String>,
    svg: Option<String>,
}

impl Output {
    fn plain(result: Value) -> Self {
        Output { result, warnings: Vec::new(), svg: None }
    }
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Tension(c) | Command::Subdivision(c) | Command::Curve(c) | Command::Kirchhoff(c) | Command::Arctic(c) => c,
            Command::Limitshape { common, .. }
            | Command::Gibbs { common, .. }
            | Command::Ronkin { common, .. }
            | Command::TensionBeta { common, .. }
            | Command::GibbsBeta { common, .. }
            | Command::AztecMarginals { common, .. }
            | Command::AztecHeight { common, .. }
            | Command::Sample { common, .. }
            | Command::Check { common, .. }
            | Command::Render { common, .. } => common,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Tension(_) => "tension",
            Command::Subdivision(_) => "subdivision",
            Command::Curve(_) => "curve",
            Command::Kirchhoff(_) => "kirchhoff",
            Command::Arctic(_) => "arctic",
            Command::Limitshape { .. } => "limitshape",
            Command::Gibbs { .. } => "gibbs",
            Command::Ronkin { .. } => "ronkin",
            Command::TensionBeta { .. } => "tension-beta",
            Command::GibbsBeta { .. } => "gibbs-beta",
            Command::AztecMarginals { .. } => "aztec-marginals",
            Command::AztecHeight { .. } => "aztec-height",
            Command::Sample { .. } => "sample",
            Command::Check { .. } => "check",
            Command::Render { .. } => "render",
        }
    }

    fn draws(&self) -> bool {
        matches!(
            self,
            Command::Subdivision(_)
                | Command::Curve(_)
                | Command::Arctic(_)
                | Command::Limitshape { .. }
                | Command::Sample { .. }
                | Command::Render { .. }
        )
    }

    fn uses_precision(&self) -> bool {
        matches!(
            self,
            Command::Ronkin { .. }
                | Command::TensionBeta { .. }
                | Command::GibbsBeta { .. }
                | Command::AztecMarginals { .. }
                | Command::AztecHeight { .. }
                | Command::Sample { .. }
                | Command::Render { object: RenderObject::Sample, .. }
        )
    }

    fn parameters(&self) -> Value {
        let edges = |es: &[EdgeSpec]| es.iter().map(edge_spec_json).collect::<Vec<_>>();
        let point = |p: &(Rational, Rational)| json!([format_rational(&p.0), format_rational(&p.1)]);
        match self {
            Command::Limitshape { grid, .. } => json!({"grid": grid}),
            Command::Gibbs { mu, edges: es, .. } => json!({"mu": [mu.0, mu.1], "edges": edges(es)}),
            Command::Ronkin { quad, point: p, .. } => json!({"beta": quad.beta, "point": point(p)}),
            Command::TensionBeta { quad, mu, .. } => json!({"beta": quad.beta, "mu": mu.map(|m| [m.0, m.1])}),
            Command::GibbsBeta { quad, point: p, edges: es, .. } => json!({"beta": quad.beta, "point": point(p), "edges": edges(es)}),
            Command::AztecMarginals { diamond, .. } | Command::AztecHeight { diamond, .. } | Command::Sample { diamond, .. } => {
                json!({"blocks": diamond.blocks, "beta": diamond.beta})
            }
            Command::Render { object, grid, blocks, beta, .. } => {
                json!({"object": format!("{object:?}").to_lowercase(), "grid": grid, "blocks": blocks, "beta": beta})
            }
            _ => json!({}),
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            Command::Sample { seed, .. } | Command::Check { seed, .. } | Command::Render { seed, .. } => Some(*seed),
            _ => None,
        }
    }

    fn nodes(&self) -> Option<usize> {
        match self {
            Command::Ronkin { quad, .. } | Command::TensionBeta { quad, .. } | Command::GibbsBeta { quad, .. } => Some(quad.nodes),
            _ => None,
        }
    }
}

fn path_string(p: &Option<std::path::PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.display().to_string())
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

pub fn execute(cmd: &Command) -> CliResult<()> {
    let common = cmd.common();
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", common.config.display())))?;
    let domain = FundamentalDomain::from_json_str(&text)?;
    if common.svg.is_some() && !cmd.draws() {
        return Err(CliError::Config(format!("{} does not produce SVG", cmd.name())));
    }
    let precision = if cmd.uses_precision() { Some(resolve_precision(common.precision)?) } else { None };
    let manifest = RunManifest {
        config: common.config.display().to_string(),
        config_sha256: sha256_hex(text.as_bytes()),
        subcommand: cmd.name().to_string(),
        json_out: path_string(&common.out),
        svg_out: path_string(&common.svg),
        seed: cmd.seed(),
        precision,
        nodes: cmd.nodes(),
        parameters: cmd.parameters(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    };
    let hash = manifest.hash();
    let prec = precision.unwrap_or(tropaz_numeric::DEFAULT_PRECISION);
    let model = TropicalModel::from_domain(domain)?;
    let mut failure = None;
    let out = match cmd {
        Command::Tension(_) => tension(&model),
        Command::Subdivision(_) => subdivision(&model, &hash),
        Command::Curve(_) => curve(&model, &hash)?,
        Command::Kirchhoff(_) => kirchhoff(&model)?,
        Command::Arctic(_) => arctic(&model, &hash)?,
        Command::Limitshape { grid, .. } => limitshape(&model, *grid, &hash)?,
        Command::Gibbs { mu, edges, .. } => gibbs(&model, *mu, edges)?,
        Command::Ronkin { quad, point, .. } => {
            let sum = char_poly_beta(&model.graph)?;
            let spec = QuadratureSpec { nodes: quad.nodes, precision: prec };
            let est = ronkin(&sum, quad.beta, &point.0, &point.1, &spec)?;
            let (top, _, _) = sum.tropical_at(&point.0, &point.1);
            Output::plain(json!({
                "point": [format_rational(&point.0), format_rational(&point.1)],
                "beta": quad.beta,
                "ronkin": est.to_json(),
                "tropical_value": format_rational(&top),
            }))
        }
        Command::TensionBeta { quad, mu, .. } => tension_beta(&model, quad.beta, *mu, QuadratureSpec { nodes: quad.nodes, precision: prec })?,
        Command::GibbsBeta { quad, point, edges, .. } => {
            let lifted = resolve_edges(&model.graph, edges)?;
            let spec = QuadratureSpec { nodes: quad.nodes, precision: prec };
            let est = gibbs_beta_marginal(&model.graph, &lifted, &point.0, &point.1, quad.beta, &spec)?;
            Output::plain(json!({
                "point": [format_rational(&point.0), format_rational(&point.1)],
                "beta": quad.beta,
                "edges": edges.iter().map(edge_spec_json).collect::<Vec<_>>(),
                "probability": est.value.to_string_radix(10, Some(40)),
                "error": est.error().to_f64(),
                "imaginary": est.imaginary.to_f64(),
                "nodes": est.nodes,
            }))
        }
        Command::AztecMarginals { diamond, .. } => {
            let graph = build_aztec(&model.domain, diamond.blocks)?;
            let marginals = aztec_edge_marginals(&graph, diamond.beta, prec)?;
            Output::plain(json!({
                "blocks": diamond.blocks,
                "size": graph.size,
                "beta": diamond.beta,
                "edges": graph.edges.iter().zip(&marginals).map(|(e, m)| json!({
                    "id": e.id,
                    "white": [e.at.0, e.at.1],
                    "type": e.ty.letter(),
                    "probability": m.to_string_radix(10, Some(40)),
                })).collect::<Vec<_>>(),
            }))
        }
        Command::AztecHeight { diamond, .. } => aztec_height(&model, diamond.blocks, diamond.beta, prec)?,
        Command::Sample { diamond, seed, .. } => {
            let graph = build_aztec(&model.domain, diamond.blocks)?;
            sample(&graph, diamond.beta, *seed, prec, &hash)?
        }
        Command::Check { seed, .. } => {
            let report = run_suites(&model, *seed);
            if !report.passed() {
                failure = Some(report.failures().join("; "));
            }
            Output { result: report.to_json(), warnings: report.warnings.clone(), svg: None }
        }
        Command::Render { object, grid, blocks, beta, seed, .. } => {
            let picture = match object {
                RenderObject::Subdivision => subdivision(&model, &hash).svg,
                RenderObject::Curve => curve(&model, &hash)?.svg,
                RenderObject::Arctic => arctic(&model, &hash)?.svg,
                RenderObject::Limitshape => limitshape(&model, *grid, &hash)?.svg,
                RenderObject::Sample => sample(&build_aztec(&model.domain, *blocks)?, *beta, *seed, prec, &hash)?.svg,
            }
            .expect("renderers always draw");
            if common.svg.is_none() {
                print!("{picture}");
                if let Some(path) = &common.out {
                    let doc = manifest.document(json!({"svg_sha256": sha256_hex(picture.as_bytes())}), &[]);
                    write_file(path, format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable")).as_bytes())?;
                }
                return Ok(());
            }
            Output::plain(json!({"svg_sha256": sha256_hex(picture.as_bytes())})).with_svg(picture)
        }
    };
    let doc = manifest.document(out.result, &out.warnings);
    let body = format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"));
    match &common.out {
        Some(path) => write_file(path, body.as_bytes())?,
        None => print!("{body}"),
    }
    if let (Some(path), Some(picture)) = (&common.svg, &out.svg) {
        write_file(path, picture.as_bytes())?;
    }
    for w in &out.warnings {
        eprintln!("tropaz: warning: {w}");
    }
    match failure {
        Some(msg) => Err(CliError::Invariant(msg)),
        None => Ok(()),
    }
}

impl Output {
    fn with_svg(mut self, picture: String) -> Self {
        self.svg = Some(picture);
        self
    }
}

fn slope_json(mu: Slope) -> Value {
    json!([mu.0, mu.1])
}

fn edge_spec_json(e: &EdgeSpec) -> Value {
    json!({"cell": [e.i, e.j], "type": e.ty.letter(), "copy": [e.copy.0, e.copy.1]})
}

fn resolve_edges(graph: &TorusGraph, specs: &[EdgeSpec]) -> CliResult<Vec<LiftedEdge>> {
    specs
        .iter()
        .map(|s| {
            if s.i >= graph.ell || s.j >= graph.k {
                return Err(CliError::Config(format!("cell ({}, {}) outside the {} x {} domain", s.i, s.j, graph.ell, graph.k)));
            }
            Ok(LiftedEdge { edge: graph.edge_id(graph.vertex_index(s.i, s.j), s.ty), copy: s.copy })
        })
        .collect()
}

pub fn genericity_json(report: &GenericityReport, k: usize, ell: usize) -> Value {
    let pts = |v: &[Slope]| v.iter().map(|&m| slope_json(m)).collect::<Vec<_>>();
    json!({
        "smooth": report.smooth,
        "triangles": report.triangles,
        "expected_triangles": 2 * k * ell,
        "violations": report.reasons.iter().map(|r| match r {
            GenericityViolation::NonVertexLatticePoint(mu) => json!({"kind": "non_vertex_point", "points": [slope_json(*mu)]}),
            GenericityViolation::NonTriangleFace(f) => json!({"kind": "non_triangle_face", "points": pts(f)}),
            GenericityViolation::OversizedTriangle(f) => json!({"kind": "oversized_triangle", "points": pts(f)}),
        }).collect::<Vec<_>>(),
    })
}

fn smoothness_warnings(model: &TropicalModel) -> Vec<String> {
    if model.genericity.smooth {
        Vec::new()
    } else {
        vec!["NotSmooth: the subdivision is not a unit triangulation, so curve, kirchhoff, arctic and limitshape are unavailable".into()]
    }
}

fn tension(model: &TropicalModel) -> Output {
    let (k, ell) = (model.domain.k(), model.domain.ell());
    Output {
        result: json!({
            "k": k,
            "ell": ell,
            "table": model.table.to_json(),
            "genericity": genericity_json(&model.genericity, k, ell),
        }),
        warnings: smoothness_warnings(model),
        svg: None,
    }
}

fn subdivision(model: &TropicalModel, hash: &str) -> Output {
    let (k, ell) = (model.domain.k(), model.domain.ell());
    Output {
        result: json!({
            "subdivision": model.subdivision.to_json(),
            "genericity": genericity_json(&model.genericity, k, ell),
        }),
        warnings: smoothness_warnings(model),
        svg: Some(svg::subdivision(&model.subdivision, hash)),
    }
}

fn curve(model: &TropicalModel, hash: &str) -> CliResult<Output> {
    let curve = model.curve()?;
    let lines = curve.leaf_lines();
    let groups: serde_json::Map<String, Value> = [LeafGroup::L1, LeafGroup::L2, LeafGroup::L3, LeafGroup::L4]
        .into_iter()
        .map(|g| (g.name().to_string(), Value::from(lines.group(g).iter().map(format_rational).collect::<Vec<_>>())))
        .collect();
    Ok(Output {
        result: json!({"curve": curve.to_json(), "leaf_lines": groups}),
        warnings: Vec::new(),
        svg: Some(svg::curve(curve, hash)),
    })
}

fn kirchhoff(model: &TropicalModel) -> CliResult<Output> {
    let s = model.stages()?;
    let residuals = laplacian_residuals(&model.subdivision, &s.curve, &s.fstar);
    let exactness = verify_exactness(&s.primal.form, &s.curve);
    Ok(Output::plain(json!({
        "dual": s.fstar.to_json(),
        "one_form": s.primal.form.to_json(),
        "vertex_gradients": s.primal.gradients.iter().map(|g| json!([format_rational(&g.0), format_rational(&g.1)])).collect::<Vec<_>>(),
        "laplacian_residuals": residuals.iter().map(|(mu, r)| json!({"mu": slope_json(*mu), "residual": format_rational(r)})).collect::<Vec<_>>(),
        "exact": exactness.exact(),
    })))
}

pub fn phase_json(phase: &Phase) -> Value {
    match phase {
        Phase::Frozen(mu) => json!({"frozen": slope_json(*mu)}),
        Phase::Smooth(mu) => json!({"smooth": slope_json(*mu)}),
        Phase::ArcticCurve => json!("arctic_curve"),
    }
}

fn arctic(model: &TropicalModel, hash: &str) -> CliResult<Output> {
    let action = model.action()?;
    let geometry = action.arctic_curve()?;
    let mut result = geometry.to_json();
    result["classes"] = model
        .subdivision
        .polygon
        .points()
        .into_iter()
        .map(|mu| json!({"mu": slope_json(mu), "class": format!("{:?}", model.subdivision.polygon.classify(mu)).to_lowercase()}))
        .collect();
    Ok(Output {
        result,
        warnings: Vec::new(),
        svg: Some(svg::arctic(model.domain.k(), model.domain.ell(), &model.subdivision, &geometry, hash)),
    })
}

/// Exact limit-shape samples at the cell centres `u = -(2i + 1) / (2 G ell)`, `v = -(2j + 1) / (2 G k)`.
pub struct LimitGrid {
    pub grid: usize,
    pub values: Vec<((usize, usize), (Rational, Rational), Rational, Option<Phase>)>,
}

pub fn limit_grid(model: &TropicalModel, grid: usize) -> CliResult<LimitGrid> {
    if grid == 0 {
        return Err(CliError::Config("grid must be positive".into()));
    }
    let action = model.action()?;
    let (k, ell) = (model.domain.k() as i64, model.domain.ell() as i64);
    let g = grid as i64;
    let mut values = Vec::new();
    for i in 0..grid {
        for j in 0..grid {
            let (u, v) = (frac(-(2 * i as i64 + 1), 2 * g * ell), frac(-(2 * j as i64 + 1), 2 * g * k));
            let h = action.limit_shape(&u, &v)?;
            let phase = action.classify_point(&u, &v).ok();
            values.push(((i, j), (u, v), h, phase));
        }
    }
    Ok(LimitGrid { grid, values })
}

fn limitshape(model: &TropicalModel, grid: usize, hash: &str) -> CliResult<Output> {
    let samples = limit_grid(model, grid)?;
    let result = json!({
        "grid": grid,
        "points": samples.values.iter().map(|(ij, (u, v), h, phase)| json!({
            "index": [ij.0, ij.1],
            "u": format_rational(u),
            "v": format_rational(v),
            "height": format_rational(h),
            "phase": phase.as_ref().map(phase_json),
        })).collect::<Vec<_>>(),
    });
    Ok(Output { result, warnings: Vec::new(), svg: Some(svg::limit_shape(model.domain.k(), model.domain.ell(), &samples, hash)) })
}

fn gibbs(model: &TropicalModel, mu: Slope, specs: &[EdgeSpec]) -> CliResult<Output> {
    if !model.subdivision.polygon.contains(mu) {
        return Err(tropaz_core::Error::SlopeOutsideRectangle(mu.0, mu.1).into());
    }
    if !is_strictly_concave(&model.subdivision, mu) {
        return Err(CliError::Config(format!("E* is not strictly concave at ({}, {})", mu.0, mu.1)));
    }
    let measure = model.gibbs(mu)?;
    let graph = &model.graph;
    let mut singles = Vec::new();
    for &id in &measure.maxgraph.edges {
        let e = &graph.edges[id];
        let p = measure.edge_probabilities(graph, &[LiftedEdge { edge: id, copy: (0, 0) }])?;
        singles.push(json!({"edge": id, "cell": [e.i, e.j], "type": e.ty.letter(), "probability": format_rational(&p)}));
    }
    let joint = if specs.is_empty() {
        Value::Null
    } else {
        format_rational(&measure.edge_probabilities(graph, &resolve_edges(graph, specs)?)?).into()
    };
    Ok(Output::plain(json!({
        "mu": slope_json(mu),
        "tau": measure.tau,
        "partition": measure.partition,
        "maximizer_edges": measure.maxgraph.edges,
        "components": measure.maxgraph.components.iter().map(|c| json!({"edges": c.edges, "bounded": c.bounded})).collect::<Vec<_>>(),
        "marginals": singles,
        "joint": joint,
    })))
}

fn tension_beta(model: &TropicalModel, beta: f64, mu: Option<Slope>, spec: QuadratureSpec) -> CliResult<Output> {
    let sum = char_poly_beta(&model.graph)?;
    let slopes: Vec<Slope> = match mu {
        Some(mu) => vec![mu],
        None => model.subdivision.polygon.points().into_iter().filter(|&m| model.subdivision.is_vertex(m)).collect(),
    };
    let mut rows = Vec::new();
    for mu in slopes {
        let t = surface_tension_beta(&sum, mu, beta, &spec)?;
        let estar = model.table.estar(mu).cloned().ok_or(tropaz_core::Error::UnreachedSlope(mu.0, mu.1))?;
        let estar_f = tropaz_core::rational::to_f64(&estar);
        rows.push(json!({
            "mu": slope_json(mu),
            "anchor": [format_rational(&t.anchor.x), format_rational(&t.anchor.y)],
            "margin": format_rational(&t.anchor.margin),
            "sigma_beta": t.value.to_string_radix(10, Some(40)),
            "normalized": t.normalized(),
            "estar": format_rational(&estar),
            "gap": (t.normalized() + estar_f).abs(),
            "quadrature_error": t.error(),
        }));
    }
    Ok(Output::plain(json!({"beta": beta, "nodes": spec.nodes, "rows": rows})))
}

fn aztec_height(model: &TropicalModel, blocks: usize, beta: f64, prec: u32) -> CliResult<Output> {
    let graph = build_aztec(&model.domain, blocks)?;
    let marginals = aztec_edge_marginals(&graph, beta, prec)?;
    let (field, residual) = expected_height_field(&graph, &marginals);
    let deviation = match model.action() {
        Ok(action) => {
            let d = compare_with_limit_shape(&graph, &field, &action, BULK_MARGIN)?;
            json!({"max_all": d.max_all, "max_bulk": d.max_bulk, "bulk_faces": d.bulk_faces, "bulk_margin": BULK_MARGIN})
        }
        Err(_) => Value::Null,
    };
    Ok(Output {
        result: json!({
            "blocks": blocks,
            "size": graph.size,
            "beta": beta,
            "path_residual": residual.to_f64(),
            "heights": field.values.iter().map(|(face, h)| {
                let (u, v) = graph.scaled(*face);
                json!({"face": [face.0, face.1], "u": format_rational(&u), "v": format_rational(&v), "height": h.to_string_radix(10, Some(30))})
            }).collect::<Vec<_>>(),
            "limit_deviation": deviation,
        }),
        warnings: smoothness_warnings(model),
        svg: None,
    })
}

fn sample(graph: &AztecGraph, beta: f64, seed: u64, prec: u32, hash: &str) -> CliResult<Output> {
    let cover = sample_cover(graph, beta, seed, prec)?;
    let heights = cover_height(graph, &cover)?;
    Ok(Output {
        result: json!({
            "size": graph.size,
            "beta": beta,
            "seed": seed,
            "energy": format_rational(&graph.energy(&cover)),
            "dimers": cover.iter().map(|&id| {
                let e = &graph.edges[id];
                json!({"id": id, "white": [e.at.0, e.at.1], "type": e.ty.letter()})
            }).collect::<Vec<_>>(),
            "heights": heights.values.iter().map(|(f, h)| json!({"face": [f.0, f.1], "height": h})).collect::<Vec<_>>(),
        }),
        warnings: Vec::new(),
        svg: Some(svg::sample(graph, &cover, hash)),
    })
}
