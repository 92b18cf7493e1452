//! Newton rectangle, regular subdivision induced by the surface tension, and
//! the tropical polynomial.

use crate::covers::SurfaceTensionTable;
use crate::rational::{format_rational, int, Rational};
use crate::lattice::Slope;
use num_traits::Zero;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointClass {
    /// Corner of the rectangle.
    Corner,
    /// Boundary point that is not a corner.
    Side,
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Bottom,
    Right,
    Top,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Bottom => "bottom",
            Side::Right => "right",
            Side::Top => "top",
        }
    }
}

/// The rectangle `[-ell, 0] x [0, k]` and its lattice points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub k: usize,
    pub ell: usize,
}

impl NewtonPolygon {
    pub fn new(k: usize, ell: usize) -> Self {
        NewtonPolygon { k, ell }
    }

    /// Lattice points ordered by `mu1` then `mu2`.
    pub fn points(&self) -> Vec<Slope> {
        let mut out = Vec::with_capacity((self.k + 1) * (self.ell + 1));
        for m1 in -(self.ell as i64)..=0 {
            for m2 in 0..=self.k as i64 {
                out.push((m1, m2));
            }
        }
        out
    }

    pub fn contains(&self, mu: Slope) -> bool {
        (-(self.ell as i64)..=0).contains(&mu.0) && (0..=self.k as i64).contains(&mu.1)
    }

    pub fn classify(&self, mu: Slope) -> PointClass {
        let on_x = mu.0 == 0 || mu.0 == -(self.ell as i64);
        let on_y = mu.1 == 0 || mu.1 == self.k as i64;
        match (on_x, on_y) {
            (true, true) => PointClass::Corner,
            (false, false) => PointClass::Interior,
            _ => PointClass::Side,
        }
    }

    /// The reference corner `(0, k)`.
    pub fn top_right(&self) -> Slope {
        (0, self.k as i64)
    }

    /// Side containing the segment `a b`, if it lies on the boundary.
    pub fn side_of_segment(&self, a: Slope, b: Slope) -> Option<Side> {
        let left = -(self.ell as i64);
        let top = self.k as i64;
        if a.0 == left && b.0 == left {
            Some(Side::Left)
        } else if a.1 == 0 && b.1 == 0 {
            Some(Side::Bottom)
        } else if a.0 == 0 && b.0 == 0 {
            Some(Side::Right)
        } else if a.1 == top && b.1 == top {
            Some(Side::Top)
        } else {
            None
        }
    }
}

/// A face of the subdivision: the projection of a bounded upper face of the lift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    /// Extreme points in counterclockwise order.
    pub vertices: Vec<Slope>,
    /// All lattice points of the face on its boundary, counterclockwise.
    pub boundary: Vec<Slope>,
    /// All lattice points whose lift lies on the face plane.
    pub points: Vec<Slope>,
    /// The lift plane is `s = gradient . mu + offset`.
    pub gradient: (Rational, Rational),
    pub offset: Rational,
    pub twice_area: i64,
}

/// A segment between two consecutive boundary points of a face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubEdge {
    /// Endpoints with `ends.0 < ends.1` lexicographically.
    pub ends: (Slope, Slope),
    /// Face on the left of `ends.0 -> ends.1`.
    pub left: Option<usize>,
    /// Face on the right of `ends.0 -> ends.1`.
    pub right: Option<usize>,
    pub side: Option<Side>,
}

impl SubEdge {
    pub fn lattice_length(&self) -> i64 {
        let d = (self.ends.1 .0 - self.ends.0 .0, self.ends.1 .1 - self.ends.0 .1);
        num_integer::Integer::gcd(&d.0, &d.1)
    }

    pub fn other_end(&self, mu: Slope) -> Slope {
        if self.ends.0 == mu {
            self.ends.1
        } else {
            self.ends.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subdivision {
    pub polygon: NewtonPolygon,
    pub lift: BTreeMap<Slope, Rational>,
    pub faces: Vec<Face>,
    pub edges: Vec<SubEdge>,
    vertex_set: BTreeSet<Slope>,
    incidence: BTreeMap<Slope, Vec<usize>>,
}

impl Subdivision {
    pub fn is_vertex(&self, mu: Slope) -> bool {
        self.vertex_set.contains(&mu)
    }

    /// Indices of the edges with an endpoint at `mu`.
    pub fn edges_at(&self, mu: Slope) -> &[usize] {
        self.incidence.get(&mu).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn edge_between(&self, a: Slope, b: Slope) -> Option<usize> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edges_at(a).iter().copied().find(|&i| self.edges[i].ends == key)
    }

    /// Shortest path from `from` to `to` along subdivision edges; ties are
    /// broken by neighbor order, which is lexicographic.
    pub fn path(&self, from: Slope, to: Slope) -> Option<Vec<Slope>> {
        let mut prev: BTreeMap<Slope, Slope> = BTreeMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = BTreeSet::from([from]);
        while let Some(mu) = queue.pop_front() {
            if mu == to {
                let mut out = vec![to];
                let mut at = to;
                while at != from {
                    at = prev[&at];
                    out.push(at);
                }
                out.reverse();
                return Some(out);
            }
            let mut next: Vec<Slope> = self.edges_at(mu).iter().map(|&i| self.edges[i].other_end(mu)).collect();
            next.sort_unstable();
            for nu in next {
                if seen.insert(nu) {
                    prev.insert(nu, mu);
                    queue.push_back(nu);
                }
            }
        }
        None
    }

    pub fn to_json(&self) -> Value {
        let points = self.polygon.points();
        let index: BTreeMap<Slope, usize> = points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        json!({
            "points": points.iter().map(|p| json!([p.0, p.1])).collect::<Vec<_>>(),
            "lift": points.iter().map(|p| format_rational(&self.lift[p])).collect::<Vec<_>>(),
            "faces": self.faces.iter().map(|f| f.vertices.iter().map(|v| index[v]).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| json!({
                "ends": [index[&e.ends.0], index[&e.ends.1]],
                "left": e.left,
                "right": e.right,
                "side": e.side.map(Side::name),
            })).collect::<Vec<_>>(),
        })
    }
}

fn orient(a: Slope, b: Slope, c: Slope) -> i64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

/// Plane `s = g . mu + c` through three lifted points with non-collinear projections.
fn plane_through(p: [Slope; 3], s: [&Rational; 3]) -> ((Rational, Rational), Rational) {
    let det = int(orient(p[0], p[1], p[2]));
    let (dx1, dy1) = (int(p[1].0 - p[0].0), int(p[1].1 - p[0].1));
    let (dx2, dy2) = (int(p[2].0 - p[0].0), int(p[2].1 - p[0].1));
    let ds1 = s[1] - s[0];
    let ds2 = s[2] - s[0];
    let gx = (&ds1 * &dy2 - &ds2 * &dy1) / &det;
    let gy = (&dx1 * &ds2 - &dx2 * &ds1) / &det;
    let c = s[0] - &gx * int(p[0].0) - &gy * int(p[0].1);
    ((gx, gy), c)
}

/// Strict convex hull in counterclockwise order (monotone chain).
fn convex_hull(points: &[Slope]) -> Vec<Slope> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Slope> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Slope> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn boundary_walk(vertices: &[Slope], points: &[Slope]) -> Vec<Slope> {
    let mut out = Vec::new();
    for (i, &a) in vertices.iter().enumerate() {
        let b = vertices[(i + 1) % vertices.len()];
        let mut on: Vec<(i64, Slope)> = points
            .iter()
            .filter(|&&p| p != b && orient(a, b, p) == 0)
            .map(|&p| ((p.0 - a.0) * (b.0 - a.0) + (p.1 - a.1) * (b.1 - a.1), p))
            .filter(|&(t, _)| t >= 0)
            .collect();
        on.sort_unstable();
        out.extend(on.into_iter().map(|(_, p)| p));
    }
    out
}

fn polygon_twice_area(vertices: &[Slope]) -> i64 {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            a.0 * b.1 - a.1 * b.0
        })
        .sum()
}

/// Regular subdivision of the Newton rectangle induced by `estar`.
///
/// Every triple of lattice points with non-collinear projection spans a
/// candidate plane; it supports an upper face when no lifted point lies
/// strictly above it. Coplanar points are grouped into a single face.
pub fn build_subdivision(table: &SurfaceTensionTable) -> Subdivision {
    let polygon = NewtonPolygon::new(table.k, table.ell);
    let points = polygon.points();
    let lift: BTreeMap<Slope, Rational> =
        points.iter().map(|&p| (p, table.estar(p).cloned().unwrap_or_else(Rational::zero))).collect();
    let mut seen_faces: BTreeSet<Vec<Slope>> = BTreeSet::new();
    let mut faces = Vec::new();
    let n = points.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let tri = [points[a], points[b], points[c]];
                if orient(tri[0], tri[1], tri[2]) == 0 {
                    continue;
                }
                let (g, off) = plane_through(tri, [&lift[&tri[0]], &lift[&tri[1]], &lift[&tri[2]]]);
                let height = |p: Slope| &g.0 * int(p.0) + &g.1 * int(p.1) + &off;
                let mut on_plane = Vec::new();
                let mut supporting = true;
                for &p in &points {
                    let h = height(p);
                    if lift[&p] > h {
                        supporting = false;
                        break;
                    }
                    if lift[&p] == h {
                        on_plane.push(p);
                    }
                }
                if !supporting || !seen_faces.insert(on_plane.clone()) {
                    continue;
                }
                let vertices = convex_hull(&on_plane);
                let boundary = boundary_walk(&vertices, &on_plane);
                let twice_area = polygon_twice_area(&vertices);
                faces.push(Face { vertices, boundary, points: on_plane, gradient: g, offset: off, twice_area });
            }
        }
    }
    faces.sort_by(|x, y| x.vertices.cmp(&y.vertices));
    let mut edge_map: BTreeMap<(Slope, Slope), SubEdge> = BTreeMap::new();
    for (fi, face) in faces.iter().enumerate() {
        let m = face.boundary.len();
        for i in 0..m {
            let (a, b) = (face.boundary[i], face.boundary[(i + 1) % m]);
            let key = if a < b { (a, b) } else { (b, a) };
            let entry = edge_map
                .entry(key)
                .or_insert_with(|| SubEdge { ends: key, left: None, right: None, side: polygon.side_of_segment(a, b) });
            if a < b {
                entry.left = Some(fi);
            } else {
                entry.right = Some(fi);
            }
        }
    }
    let edges: Vec<SubEdge> = edge_map.into_values().collect();
    let vertex_set: BTreeSet<Slope> = faces.iter().flat_map(|f| f.vertices.iter().copied()).collect();
    let mut incidence: BTreeMap<Slope, Vec<usize>> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        incidence.entry(e.ends.0).or_default().push(i);
        incidence.entry(e.ends.1).or_default().push(i);
    }
    Subdivision { polygon, lift, faces, edges, vertex_set, incidence }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenericityViolation {
    NonVertexLatticePoint(Slope),
    NonTriangleFace(Vec<Slope>),
    OversizedTriangle(Vec<Slope>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericityReport {
    pub smooth: bool,
    pub triangles: usize,
    pub reasons: Vec<GenericityViolation>,
}

pub fn classify_genericity(sub: &Subdivision) -> GenericityReport {
    let mut reasons = Vec::new();
    for mu in sub.polygon.points() {
        if !sub.is_vertex(mu) {
            reasons.push(GenericityViolation::NonVertexLatticePoint(mu));
        }
    }
    let mut triangles = 0;
    for face in &sub.faces {
        if face.vertices.len() > 3 {
            reasons.push(GenericityViolation::NonTriangleFace(face.vertices.clone()));
        } else if face.twice_area > 1 {
            reasons.push(GenericityViolation::OversizedTriangle(face.vertices.clone()));
        } else {
            triangles += 1;
        }
    }
    GenericityReport { smooth: reasons.is_empty(), triangles, reasons }
}

/// Value and maximizing slopes of `max(mu . (x, y) + estar(mu))`.
pub fn eval_tropical_poly(table: &SurfaceTensionTable, x: &Rational, y: &Rational) -> (Rational, Vec<Slope>) {
    let mut best: Option<Rational> = None;
    let mut argmax = Vec::new();
    for (&mu, entry) in &table.entries {
        let value = int(mu.0) * x + int(mu.1) * y + &entry.estar;
        match &best {
            Some(b) if &value < b => {}
            Some(b) if &value == b => argmax.push(mu),
            _ => {
                best = Some(value);
                argmax = vec![mu];
            }
        }
    }
    (best.unwrap_or_else(Rational::zero), argmax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::surface_tension_table;
    use crate::lattice::{build_torus_graph, EdgeType, FundamentalDomain};
    use crate::rational::frac;

    fn table_for(s: i64, w: i64) -> SurfaceTensionTable {
        let d = FundamentalDomain::from_fn(1, 1, |_, _, ty| match ty {
            EdgeType::South => int(s),
            EdgeType::West => int(w),
            _ => int(0),
        })
        .unwrap();
        surface_tension_table(&build_torus_graph(&d)).unwrap()
    }

    #[test]
    fn ex1_two_triangles() {
        let sub = build_subdivision(&table_for(1, 0));
        let faces: Vec<Vec<Slope>> = sub.faces.iter().map(|f| f.vertices.clone()).collect();
        assert_eq!(faces, vec![vec![(-1, 0), (0, 0), (0, 1)], vec![(-1, 0), (0, 1), (-1, 1)]]);
        let report = classify_genericity(&sub);
        assert!(report.smooth);
        assert_eq!(report.triangles, 2);
        assert_eq!(sub.edges.len(), 5);
        assert_eq!(sub.edges.iter().filter(|e| e.side.is_some()).count(), 4);
    }

    #[test]
    fn swapped_weights_flip_diagonal() {
        let sub = build_subdivision(&table_for(0, 1));
        let diagonal: Vec<_> = sub.edges.iter().filter(|e| e.side.is_none()).map(|e| e.ends).collect();
        assert_eq!(diagonal, vec![((-1, 1), (0, 0))]);
    }

    #[test]
    fn uniform_is_one_square() {
        let sub = build_subdivision(&table_for(0, 0));
        assert_eq!(sub.faces.len(), 1);
        assert_eq!(sub.faces[0].vertices.len(), 4);
        let report = classify_genericity(&sub);
        assert!(!report.smooth);
        assert!(matches!(report.reasons[0], GenericityViolation::NonTriangleFace(_)));
    }

    #[test]
    fn tropical_polynomial_values() {
        let table = table_for(1, 0);
        let (value, argmax) = eval_tropical_poly(&table, &int(1), &int(0));
        assert_eq!(value, int(0));
        assert_eq!(argmax, vec![(-1, 0), (0, 0), (0, 1)]);
        let (value, argmax) = eval_tropical_poly(&table, &int(5), &int(5));
        assert_eq!(value, int(5));
        assert_eq!(argmax, vec![(0, 1)]);
        let uniform = table_for(0, 0);
        let (_, argmax) = eval_tropical_poly(&uniform, &frac(-1, 3), &frac(2, 7));
        assert_eq!(argmax, vec![(-1, 1)]);
    }
}
