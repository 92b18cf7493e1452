//! The tropical curve dual to a smooth subdivision.

use crate::covers::SurfaceTensionTable;
use crate::error::{Error, Result};
use crate::lattice::{EdgeType, FundamentalDomain, Slope};
use crate::newton::{classify_genericity, NewtonPolygon, PointClass, Side, Subdivision};
use crate::rational::{ccw_cmp, format_rational, primitive, primitive_int, Point, Rational};
use num_traits::Zero;
use serde_json::{json, Value};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LeafGroup {
    L1,
    L2,
    L3,
    L4,
}

impl LeafGroup {
    pub const ALL: [LeafGroup; 4] = [LeafGroup::L1, LeafGroup::L2, LeafGroup::L3, LeafGroup::L4];

    pub fn from_side(side: Side) -> Self {
        match side {
            Side::Left => LeafGroup::L1,
            Side::Bottom => LeafGroup::L2,
            Side::Right => LeafGroup::L3,
            Side::Top => LeafGroup::L4,
        }
    }

    /// Primitive direction pointing from infinity toward the leaf's vertex.
    pub fn inward(self) -> (i64, i64) {
        match self {
            LeafGroup::L1 => (1, 0),
            LeafGroup::L2 => (0, 1),
            LeafGroup::L3 => (-1, 0),
            LeafGroup::L4 => (0, -1),
        }
    }

    /// Horizontal leaves carry a `y` coordinate, vertical ones an `x` coordinate.
    pub fn is_horizontal(self) -> bool {
        matches!(self, LeafGroup::L1 | LeafGroup::L3)
    }

    pub fn name(self) -> &'static str {
        match self {
            LeafGroup::L1 => "L1",
            LeafGroup::L2 => "L2",
            LeafGroup::L3 => "L3",
            LeafGroup::L4 => "L4",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveVertex {
    pub position: Point,
    /// Index of the dual subdivision face.
    pub face: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedEdge {
    pub from: usize,
    pub to: usize,
    /// Primitive direction from `from` to `to`.
    pub eta: (i64, i64),
    pub length: Rational,
    /// Index of the dual subdivision edge.
    pub dual: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leaf {
    pub vertex: usize,
    /// Primitive direction pointing toward `vertex`.
    pub eta: (i64, i64),
    pub group: LeafGroup,
    /// `y` for horizontal leaves, `x` for vertical ones.
    pub line: Rational,
    pub dual: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveEdge {
    Bounded(usize),
    Leaf(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkStep {
    pub edge: CurveEdge,
    /// The lattice point across the dual subdivision edge.
    pub neighbor: Slope,
}

/// Boundary of the complement component dual to a lattice point, with the
/// component on the left of the direction of travel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentWalk {
    pub mu: Slope,
    pub closed: bool,
    pub steps: Vec<WalkStep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalCurve {
    pub k: usize,
    pub ell: usize,
    pub vertices: Vec<CurveVertex>,
    pub bounded: Vec<BoundedEdge>,
    pub leaves: Vec<Leaf>,
    pub components: BTreeMap<Slope, ComponentWalk>,
    /// Curve edge dual to each subdivision edge.
    pub dual_of: Vec<CurveEdge>,
    /// Curve edges incident to each vertex.
    pub incident: Vec<Vec<CurveEdge>>,
}

/// Direction at `mu` from which a counterclockwise sweep covers the rectangle.
fn sweep_start(polygon: &NewtonPolygon, mu: Slope) -> (i64, i64) {
    let left = -(polygon.ell as i64);
    let top = polygon.k as i64;
    match polygon.classify(mu) {
        PointClass::Interior => (1, 0),
        PointClass::Corner => match (mu.0 == 0, mu.1 == 0) {
            (true, true) => (0, 1),
            (false, true) => (1, 0),
            (false, false) => (0, -1),
            (true, false) => (-1, 0),
        },
        PointClass::Side => {
            if mu.1 == 0 {
                (1, 0)
            } else if mu.0 == 0 {
                (0, 1)
            } else if mu.1 == top {
                (-1, 0)
            } else {
                debug_assert_eq!(mu.0, left);
                (0, -1)
            }
        }
    }
}

pub fn build_curve(sub: &Subdivision, table: &SurfaceTensionTable) -> Result<TropicalCurve> {
    if !classify_genericity(sub).smooth {
        return Err(Error::NotSmooth);
    }
    let vertices: Vec<CurveVertex> = sub
        .faces
        .iter()
        .enumerate()
        .map(|(face, f)| CurveVertex { position: (-f.gradient.0.clone(), -f.gradient.1.clone()), face })
        .collect();
    debug_assert!(vertices.iter().all(|v| {
        let f = &sub.faces[v.face];
        let value = |mu: Slope| {
            Rational::from_integer(mu.0.into()) * &v.position.0
                + Rational::from_integer(mu.1.into()) * &v.position.1
                + table.estar(mu).cloned().unwrap_or_default()
        };
        f.vertices.iter().all(|&mu| value(mu) == value(f.vertices[0]))
    }));
    let mut bounded = Vec::new();
    let mut leaves = Vec::new();
    let mut dual_of = Vec::with_capacity(sub.edges.len());
    let mut incident = vec![Vec::new(); vertices.len()];
    for (index, e) in sub.edges.iter().enumerate() {
        match (e.left, e.right) {
            (Some(b), Some(a)) => {
                let diff = (&vertices[b].position.0 - &vertices[a].position.0, &vertices[b].position.1 - &vertices[a].position.1);
                let (eta, length) = primitive(&diff).ok_or(Error::NotSmooth)?;
                let id = bounded.len();
                bounded.push(BoundedEdge { from: a, to: b, eta, length, dual: index });
                dual_of.push(CurveEdge::Bounded(id));
                incident[a].push(CurveEdge::Bounded(id));
                incident[b].push(CurveEdge::Bounded(id));
            }
            (Some(f), None) | (None, Some(f)) => {
                let side = e.side.ok_or(Error::NotSmooth)?;
                let group = LeafGroup::from_side(side);
                let pos = &vertices[f].position;
                let line = if group.is_horizontal() { pos.1.clone() } else { pos.0.clone() };
                let id = leaves.len();
                leaves.push(Leaf { vertex: f, eta: group.inward(), group, line, dual: index });
                dual_of.push(CurveEdge::Leaf(id));
                incident[f].push(CurveEdge::Leaf(id));
            }
            (None, None) => return Err(Error::NotSmooth),
        }
    }
    let polygon = sub.polygon;
    let mut components = BTreeMap::new();
    for mu in polygon.points() {
        let start = sweep_start(&polygon, mu);
        let mut steps: Vec<(i64, i64, WalkStep)> = sub
            .edges_at(mu)
            .iter()
            .map(|&i| {
                let nu = sub.edges[i].other_end(mu);
                let (dir, _) = primitive_int((nu.0 - mu.0, nu.1 - mu.1));
                (dir.0, dir.1, WalkStep { edge: dual_of[i], neighbor: nu })
            })
            .collect();
        steps.sort_by(|a, b| ccw_cmp(start, (a.0, a.1), (b.0, b.1)));
        let closed = polygon.classify(mu) == PointClass::Interior;
        components.insert(mu, ComponentWalk { mu, closed, steps: steps.into_iter().map(|s| s.2).collect() });
    }
    Ok(TropicalCurve { k: sub.polygon.k, ell: sub.polygon.ell, vertices, bounded, leaves, components, dual_of, incident })
}

/// Leaf coordinates grouped by leaf group, each list sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LeafLines {
    pub l1: Vec<Rational>,
    pub l2: Vec<Rational>,
    pub l3: Vec<Rational>,
    pub l4: Vec<Rational>,
}

impl LeafLines {
    fn sorted(mut self) -> Self {
        for list in [&mut self.l1, &mut self.l2, &mut self.l3, &mut self.l4] {
            list.sort();
        }
        self
    }

    pub fn group(&self, g: LeafGroup) -> &[Rational] {
        match g {
            LeafGroup::L1 => &self.l1,
            LeafGroup::L2 => &self.l2,
            LeafGroup::L3 => &self.l3,
            LeafGroup::L4 => &self.l4,
        }
    }
}

/// Closed-form leaf coordinates read off the weights alone. North weights
/// enter the L3 and L4 lines and drop out when they vanish.
pub fn leaf_lines_from_weights(domain: &FundamentalDomain) -> LeafLines {
    let (k, ell) = (domain.k(), domain.ell());
    let w = |i, j, t| domain.logw(i, j, t).clone();
    let mut lines = LeafLines::default();
    for i in 0..ell {
        let mut l2 = Rational::zero();
        let mut l4 = Rational::zero();
        for j in 0..k {
            l2 += w(i, j, EdgeType::South) - w(i, j, EdgeType::West);
            l4 += w(i, j, EdgeType::East) - w(i, j, EdgeType::North);
        }
        lines.l2.push(l2);
        lines.l4.push(l4);
    }
    for j in 0..k {
        let mut l1 = Rational::zero();
        let mut l3 = Rational::zero();
        for i in 0..ell {
            l1 += w(i, j, EdgeType::South) - w(i, j, EdgeType::East);
            l3 += w(i, j, EdgeType::West) - w(i, j, EdgeType::North);
        }
        lines.l1.push(l1);
        lines.l3.push(l3);
    }
    lines.sorted()
}

impl TropicalCurve {
    pub fn leaf_lines(&self) -> LeafLines {
        let mut lines = LeafLines::default();
        for leaf in &self.leaves {
            let list = match leaf.group {
                LeafGroup::L1 => &mut lines.l1,
                LeafGroup::L2 => &mut lines.l2,
                LeafGroup::L3 => &mut lines.l3,
                LeafGroup::L4 => &mut lines.l4,
            };
            list.push(leaf.line.clone());
        }
        lines.sorted()
    }

    /// Outward primitive direction of `edge` at `vertex`.
    pub fn outward(&self, vertex: usize, edge: CurveEdge) -> (i64, i64) {
        match edge {
            CurveEdge::Bounded(i) => {
                let e = &self.bounded[i];
                if e.from == vertex {
                    e.eta
                } else {
                    (-e.eta.0, -e.eta.1)
                }
            }
            CurveEdge::Leaf(i) => {
                let eta = self.leaves[i].eta;
                (-eta.0, -eta.1)
            }
        }
    }

    /// Sum of outward primitive directions at a vertex.
    pub fn balancing_defect(&self, vertex: usize) -> (i64, i64) {
        self.incident[vertex].iter().fold((0, 0), |acc, &e| {
            let d = self.outward(vertex, e);
            (acc.0 + d.0, acc.1 + d.1)
        })
    }

    /// The other endpoint of a bounded edge.
    pub fn across(&self, vertex: usize, edge: usize) -> usize {
        let e = &self.bounded[edge];
        if e.from == vertex {
            e.to
        } else {
            e.from
        }
    }

    /// Vertices met along a component walk, in walk order.
    pub fn walk_vertices(&self, mu: Slope) -> Vec<usize> {
        let walk = &self.components[&mu];
        let n = walk.steps.len();
        let ends = |e: CurveEdge| -> Vec<usize> {
            match e {
                CurveEdge::Bounded(i) => vec![self.bounded[i].from, self.bounded[i].to],
                CurveEdge::Leaf(i) => vec![self.leaves[i].vertex],
            }
        };
        let mut out = Vec::new();
        let pairs = if walk.closed { n } else { n.saturating_sub(1) };
        for s in 0..pairs {
            let a = ends(walk.steps[s].edge);
            let b = ends(walk.steps[(s + 1) % n].edge);
            if let Some(&v) = a.iter().find(|v| b.contains(v)) {
                out.push(v);
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let point = |p: &Point| json!([format_rational(&p.0), format_rational(&p.1)]);
        let edge_ref = |e: &CurveEdge| match e {
            CurveEdge::Bounded(i) => json!({"bounded": i}),
            CurveEdge::Leaf(i) => json!({"leaf": i}),
        };
        json!({
            "vertices": self.vertices.iter().map(|v| json!({"position": point(&v.position), "dual_face": v.face})).collect::<Vec<_>>(),
            "bounded_edges": self.bounded.iter().map(|e| json!({
                "from": e.from, "to": e.to, "eta": [e.eta.0, e.eta.1],
                "length": format_rational(&e.length), "dual_edge": e.dual,
            })).collect::<Vec<_>>(),
            "leaves": self.leaves.iter().map(|l| json!({
                "vertex": l.vertex, "eta_inward": [l.eta.0, l.eta.1], "group": l.group.name(),
                "line": format_rational(&l.line), "dual_edge": l.dual,
            })).collect::<Vec<_>>(),
            "components": self.components.values().map(|c| json!({
                "mu": [c.mu.0, c.mu.1],
                "closed": c.closed,
                "walk": c.steps.iter().map(|s| edge_ref(&s.edge)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}
