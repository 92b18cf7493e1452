//! The tropical action function: zeros, phases, the arctic curve and the
//! limit shape.

use crate::error::{Error, Result};
use crate::kirchhoff::{DualActionFunction, OneForm, PrimalGradients};
use crate::lattice::Slope;
use crate::newton::{PointClass, Subdivision};
use crate::rational::{cross, format_rational, frac, int, primitive_int, sign, sub as vsub, to_f64, Point, Rational};
use crate::tropical_curve::{CurveEdge, TropicalCurve};
use num_traits::Zero;
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Values of `dF_t(.; u, v)` on every curve edge, oriented as in [`OneForm`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSlopes {
    pub u: Rational,
    pub v: Rational,
    pub form: OneForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroKind {
    Simple,
    Double,
    Triple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VZero {
    pub vertex: usize,
    pub mu: Slope,
    pub kind: ZeroKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EZero {
    pub edge: usize,
    pub kind: ZeroKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroReport {
    pub v_zeros: Vec<VZero>,
    pub e_zeros: Vec<EZero>,
    pub z: BTreeMap<Slope, usize>,
}

impl ZeroReport {
    pub fn has_triple(&self) -> bool {
        self.v_zeros.iter().any(|z| z.kind == ZeroKind::Triple)
    }

    pub fn double_count(&self) -> usize {
        self.e_zeros.iter().filter(|z| z.kind == ZeroKind::Double).count()
    }

    /// `2 * #double e-zeros + sum of Z_mu`.
    pub fn zero_count(&self) -> usize {
        2 * self.double_count() + self.z.values().sum::<usize>()
    }

    pub fn z_of(&self, mu: Slope) -> usize {
        self.z.get(&mu).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Frozen(Slope),
    Smooth(Slope),
    ArcticCurve,
}

impl Phase {
    pub fn slope(&self) -> Option<Slope> {
        match *self {
            Phase::Frozen(mu) | Phase::Smooth(mu) => Some(mu),
            Phase::ArcticCurve => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub edge: usize,
    pub from: Point,
    pub to: Point,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionPolygon {
    pub mu: Slope,
    /// Polygon vertices in walk order with consecutive duplicates merged.
    pub vertices: Vec<Point>,
    /// Curve vertices mapped to each polygon vertex; empty for a domain corner.
    pub sources: Vec<Vec<usize>>,
    /// Whether each polygon vertex contains a corner of the domain.
    pub corner: Vec<bool>,
    pub twice_area: Rational,
}

impl RegionPolygon {
    pub fn is_empty(&self) -> bool {
        self.twice_area.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcticCurveGeometry {
    pub images: Vec<Point>,
    pub segments: Vec<Segment>,
    pub regions: BTreeMap<Slope, RegionPolygon>,
}

impl ArcticCurveGeometry {
    pub fn to_json(&self) -> Value {
        let point = |p: &Point| json!([format_rational(&p.0), format_rational(&p.1)]);
        json!({
            "vertex_images": self.images.iter().map(point).collect::<Vec<_>>(),
            "segments": self.segments.iter().map(|s| json!({"edge": s.edge, "from": point(&s.from), "to": point(&s.to)})).collect::<Vec<_>>(),
            "regions": self.regions.values().map(|r| json!({
                "mu": [r.mu.0, r.mu.1],
                "empty": r.is_empty(),
                "polygon": r.vertices.iter().map(point).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GeometryReport {
    pub angle_violations: Vec<String>,
    pub count_violations: Vec<String>,
    pub parallel_violations: Vec<usize>,
    pub half_plane_violations: Vec<usize>,
    pub orientation_violations: Vec<usize>,
    /// `(mu, number of vertices with n = 1)` for every nonempty region checked.
    pub n_one_counts: Vec<(Slope, usize)>,
    /// Regions where several curve vertices share one image.
    pub merged_regions: Vec<Slope>,
    pub skipped_vertices: usize,
}

impl GeometryReport {
    pub fn passed(&self) -> bool {
        self.angle_violations.is_empty()
            && self.count_violations.is_empty()
            && self.parallel_violations.is_empty()
            && self.half_plane_violations.is_empty()
            && self.orientation_violations.is_empty()
    }
}

/// Bundles everything the action function depends on.
#[derive(Debug, Clone, Copy)]
pub struct ActionFunction<'a> {
    pub sub: &'a Subdivision,
    pub curve: &'a TropicalCurve,
    pub fstar: &'a DualActionFunction,
    pub primal: &'a PrimalGradients,
}

fn ccw(v: (i64, i64)) -> (i64, i64) {
    (-v.1, v.0)
}

fn in_open_domain(k: usize, ell: usize, u: &Rational, v: &Rational) -> bool {
    u > &frac(-1, ell as i64) && u < &Rational::zero() && v > &frac(-1, k as i64) && v < &Rational::zero()
}

fn in_closed_domain(k: usize, ell: usize, p: &Point) -> bool {
    p.0 >= frac(-1, ell as i64) && p.0 <= Rational::zero() && p.1 >= frac(-1, k as i64) && p.1 <= Rational::zero()
}

fn twice_signed_area(points: &[Point]) -> Rational {
    let n = points.len();
    (0..n).map(|i| cross(&points[i], &points[(i + 1) % n])).sum()
}

fn unsigned_angle(a: (f64, f64), b: (f64, f64)) -> f64 {
    let c = a.0 * b.1 - a.1 * b.0;
    let d = a.0 * b.0 + a.1 * b.1;
    c.abs().atan2(d)
}

/// Nonzero integer vectors lying in one closed half-plane.
fn in_half_plane(vectors: &[Point]) -> bool {
    let nonzero: Vec<&Point> = vectors.iter().filter(|p| !(p.0.is_zero() && p.1.is_zero())).collect();
    if nonzero.len() < 2 {
        return true;
    }
    nonzero.iter().any(|a| {
        let signs: Vec<i8> = nonzero.iter().map(|b| sign(&cross(a, b))).collect();
        signs.iter().all(|&s| s >= 0) || signs.iter().all(|&s| s <= 0)
    })
}

impl<'a> ActionFunction<'a> {
    pub fn new(sub: &'a Subdivision, curve: &'a TropicalCurve, fstar: &'a DualActionFunction, primal: &'a PrimalGradients) -> Self {
        ActionFunction { sub, curve, fstar, primal }
    }

    fn kl(&self) -> (i64, i64) {
        (self.curve.k as i64, self.curve.ell as i64)
    }

    fn linear_part(&self, eta: (i64, i64), u: &Rational, v: &Rational) -> Rational {
        let (k, l) = self.kl();
        int(k) * (int(1) + int(l) * u) * int(eta.1) - int(l) * (int(1) + int(k) * v) * int(eta.0)
    }

    pub fn slopes(&self, u: &Rational, v: &Rational) -> ActionSlopes {
        let form = OneForm {
            bounded: self
                .curve
                .bounded
                .iter()
                .zip(&self.primal.form.bounded)
                .map(|(e, df)| self.linear_part(e.eta, u, v) - df)
                .collect(),
            leaves: self
                .curve
                .leaves
                .iter()
                .zip(&self.primal.form.leaves)
                .map(|(l, df)| self.linear_part(l.eta, u, v) - df)
                .collect(),
        };
        ActionSlopes { u: u.clone(), v: v.clone(), form }
    }

    /// The two curve edges at `vertex` bounding the component of `mu`.
    fn component_edges_at(&self, vertex: usize, mu: Slope) -> Option<(CurveEdge, CurveEdge)> {
        let face = &self.sub.faces[self.curve.vertices[vertex].face];
        let pos = face.boundary.iter().position(|&p| p == mu)?;
        let n = face.boundary.len();
        let prev = face.boundary[(pos + n - 1) % n];
        let next = face.boundary[(pos + 1) % n];
        let a = self.sub.edge_between(prev, mu)?;
        let b = self.sub.edge_between(mu, next)?;
        Some((self.curve.dual_of[a], self.curve.dual_of[b]))
    }

    pub fn classify_zeros(&self, slopes: &ActionSlopes) -> ZeroReport {
        let form = &slopes.form;
        let curve = self.curve;
        let mut z: BTreeMap<Slope, usize> = self.sub.polygon.points().into_iter().map(|p| (p, 0)).collect();
        let mut v_zeros = Vec::new();
        for (vi, vertex) in curve.vertices.iter().enumerate() {
            for &mu in &self.sub.faces[vertex.face].vertices {
                let Some((a, b)) = self.component_edges_at(vi, mu) else { continue };
                let (sa, sb) = (sign(&form.outward(curve, vi, a)), sign(&form.outward(curve, vi, b)));
                if sa == 0 && sb == 0 {
                    v_zeros.push(VZero { vertex: vi, mu, kind: ZeroKind::Triple });
                } else if sa == sb {
                    v_zeros.push(VZero { vertex: vi, mu, kind: ZeroKind::Simple });
                    *z.entry(mu).or_default() += 1;
                }
            }
        }
        let mut e_zeros = Vec::new();
        for (i, e) in curve.bounded.iter().enumerate() {
            if !form.bounded[i].is_zero() {
                continue;
            }
            let this = CurveEdge::Bounded(i);
            let neighbors_nonzero = [e.from, e.to].iter().all(|&v| {
                curve.incident[v].iter().filter(|&&x| x != this).all(|&x| !form.outward(curve, v, x).is_zero())
            });
            if !neighbors_nonzero {
                continue;
            }
            let dual = &self.sub.edges[e.dual];
            let mu = dual.ends.0;
            let other_at = |v: usize| -> Option<i8> {
                let (a, b) = self.component_edges_at(v, mu)?;
                let other = if a == this { b } else { a };
                Some(sign(&form.outward(curve, v, other)))
            };
            let kind = match (other_at(e.from), other_at(e.to)) {
                (Some(p), Some(q)) if p == q => ZeroKind::Simple,
                _ => ZeroKind::Double,
            };
            if kind == ZeroKind::Simple {
                *z.entry(dual.ends.0).or_default() += 1;
                *z.entry(dual.ends.1).or_default() += 1;
            }
            e_zeros.push(EZero { edge: i, kind });
        }
        ZeroReport { v_zeros, e_zeros, z }
    }

    fn check_domain(&self, u: &Rational, v: &Rational) -> Result<()> {
        if in_open_domain(self.curve.k, self.curve.ell, u, v) {
            Ok(())
        } else {
            Err(Error::OutsideDomain { u: format_rational(u), v: format_rational(v) })
        }
    }

    /// Phase from the zero counts; points on arctic lines classify as [`Phase::ArcticCurve`].
    pub fn phase_unchecked(&self, u: &Rational, v: &Rational) -> Phase {
        let report = self.classify_zeros(&self.slopes(u, v));
        if report.has_triple() {
            return Phase::ArcticCurve;
        }
        for (&mu, &count) in &report.z {
            match (self.sub.polygon.classify(mu), count) {
                (PointClass::Corner, 2) | (PointClass::Side, 3) => return Phase::Frozen(mu),
                (PointClass::Interior, 4) => return Phase::Smooth(mu),
                _ => {}
            }
        }
        Phase::ArcticCurve
    }

    pub fn classify_point(&self, u: &Rational, v: &Rational) -> Result<Phase> {
        self.check_domain(u, v)?;
        Ok(self.phase_unchecked(u, v))
    }

    /// Images of the curve vertices, the unique points where they are triple v-zeros.
    pub fn vertex_map(&self) -> Result<Vec<Point>> {
        let (k, l) = self.kl();
        let kl = int(k * l);
        self.primal
            .gradients
            .iter()
            .enumerate()
            .map(|(i, (gx, gy))| {
                let image = ((gy - int(k)) / &kl, (-gx - int(l)) / &kl);
                if in_closed_domain(self.curve.k, self.curve.ell, &image) {
                    Ok(image)
                } else {
                    Err(Error::ImageOutsideDomain { vertex: i })
                }
            })
            .collect()
    }

    /// Image of the corner of the domain attached to a corner of the rectangle.
    fn corner_image(&self, mu: Slope) -> Point {
        let (k, l) = self.kl();
        match (mu.0 == 0, mu.1 == 0) {
            (true, true) => (int(0), frac(-1, k)),
            (false, true) => (int(0), int(0)),
            (false, false) => (frac(-1, l), int(0)),
            (true, false) => (frac(-1, l), frac(-1, k)),
        }
    }

    pub fn arctic_curve(&self) -> Result<ArcticCurveGeometry> {
        let images = self.vertex_map()?;
        let segments = self
            .curve
            .bounded
            .iter()
            .enumerate()
            .map(|(i, e)| Segment { edge: i, from: images[e.from].clone(), to: images[e.to].clone() })
            .collect();
        let mut regions = BTreeMap::new();
        for &mu in self.curve.components.keys() {
            let mut vertices: Vec<Point> = Vec::new();
            let mut sources: Vec<Vec<usize>> = Vec::new();
            let mut corner: Vec<bool> = Vec::new();
            let mut push = |p: Point, source: Option<usize>| {
                if vertices.last() == Some(&p) {
                    if let Some(s) = source {
                        sources.last_mut().unwrap().push(s);
                    } else {
                        *corner.last_mut().unwrap() = true;
                    }
                } else {
                    vertices.push(p);
                    sources.push(source.into_iter().collect());
                    corner.push(source.is_none());
                }
            };
            for v in self.curve.walk_vertices(mu) {
                push(images[v].clone(), Some(v));
            }
            if self.sub.polygon.classify(mu) == PointClass::Corner {
                push(self.corner_image(mu), None);
            }
            if vertices.len() > 1 && vertices.first() == vertices.last() {
                vertices.pop();
                let tail = sources.pop().unwrap();
                let tail_corner = corner.pop().unwrap();
                sources[0].splice(0..0, tail);
                corner[0] |= tail_corner;
            }
            let twice_area = if vertices.len() >= 3 { twice_signed_area(&vertices) } else { Rational::zero() };
            regions.insert(mu, RegionPolygon { mu, vertices, sources, corner, twice_area });
        }
        Ok(ArcticCurveGeometry { images, segments, regions })
    }

    /// Height of the facet of slope `mu` at `(u, v)`.
    pub fn facet(&self, mu: Slope, u: &Rational, v: &Rational) -> Rational {
        let (k, l) = self.kl();
        let mu0 = self.sub.polygon.top_right();
        (u + frac(1, l)) * int(mu.0 - mu0.0)
            + (v + frac(1, k)) * int(mu.1 - mu0.1)
            + (self.fstar.value(mu) - self.fstar.value(mu0)) / int(k * l)
            + int(1)
    }

    /// Facet height obtained by integrating `dF_t` across the curve edges
    /// dual to a lattice path from `mu` to `(0, k)`.
    pub fn facet_by_path(&self, path: &[Slope], u: &Rational, v: &Rational) -> Rational {
        let (k, l) = self.kl();
        let slopes = self.slopes(u, v);
        let mut total = Rational::zero();
        for w in path.windows(2) {
            let (a, b) = (w[0], w[1]);
            let e = self.sub.edge_between(a, b).expect("path follows subdivision edges");
            let (d, len) = primitive_int((b.0 - a.0, b.1 - a.1));
            let eta = (d.1, -d.0);
            let (edge_eta, value) = match self.curve.dual_of[e] {
                CurveEdge::Bounded(i) => (self.curve.bounded[i].eta, &slopes.form.bounded[i]),
                CurveEdge::Leaf(i) => (self.curve.leaves[i].eta, &slopes.form.leaves[i]),
            };
            let oriented = if edge_eta == eta { value.clone() } else { -value.clone() };
            total += int(len) * oriented;
        }
        total / int(k * l) + int(1)
    }

    pub fn facet_by_default_path(&self, mu: Slope, u: &Rational, v: &Rational) -> Rational {
        let path = self.sub.path(mu, self.sub.polygon.top_right()).expect("subdivision is connected");
        self.facet_by_path(&path, u, v)
    }

    /// Limit shape, extended continuously onto the arctic curve.
    pub fn limit_shape(&self, u: &Rational, v: &Rational) -> Result<Rational> {
        self.check_domain(u, v)?;
        if let Some(mu) = self.phase_unchecked(u, v).slope() {
            return Ok(self.facet(mu, u, v));
        }
        let dirs = [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, 1), (-1, -1), (1, -1), (2, 1), (1, 2)];
        for p in 8..48u32 {
            let eps = Rational::new(1.into(), num_bigint::BigInt::from(2).pow(p));
            for &(a, b) in &dirs {
                let (pu, pv) = (u + &eps * int(a), v + &eps * int(b));
                if !in_open_domain(self.curve.k, self.curve.ell, &pu, &pv) {
                    continue;
                }
                if let Some(mu) = self.phase_unchecked(&pu, &pv).slope() {
                    return Ok(self.facet(mu, u, v));
                }
            }
        }
        Err(Error::OutsideDomain { u: format_rational(u), v: format_rational(v) })
    }

    /// Component on the left of a bounded curve edge.
    pub fn left_component(&self, edge: usize) -> Slope {
        let e = &self.curve.bounded[edge];
        let (a, b) = self.sub.edges[e.dual].ends;
        let (dir, _) = primitive_int((b.0 - a.0, b.1 - a.1));
        if dir == ccw(e.eta) {
            b
        } else {
            a
        }
    }

    pub fn right_component(&self, edge: usize) -> Slope {
        let (a, b) = self.sub.edges[self.curve.bounded[edge].dual].ends;
        if self.left_component(edge) == a {
            b
        } else {
            a
        }
    }

    pub fn verify_geometry(&self, geometry: &ArcticCurveGeometry) -> GeometryReport {
        let mut report = GeometryReport::default();
        let curve = self.curve;
        let images = &geometry.images;
        for (i, e) in curve.bounded.iter().enumerate() {
            let d = vsub(&images[e.to], &images[e.from]);
            if !cross(&d, &(int(e.eta.0), int(e.eta.1))).is_zero() {
                report.parallel_violations.push(i);
            }
            if d.0.is_zero() && d.1.is_zero() {
                continue;
            }
            for (mu, expected) in [(self.left_component(i), -1i8), (self.right_component(i), 1)] {
                let region = &geometry.regions[&mu];
                if region.is_empty() {
                    continue;
                }
                let r = region.vertices.len();
                let (a, b) = (&images[e.from], &images[e.to]);
                let forward = (0..r).find(|&j| &region.vertices[j] == a && &region.vertices[(j + 1) % r] == b);
                let backward = (0..r).find(|&j| &region.vertices[j] == b && &region.vertices[(j + 1) % r] == a);
                // Interior lies left of the boundary when the polygon is counterclockwise.
                let interior_left = region.twice_area > Rational::zero();
                let side = match (forward, backward) {
                    (Some(_), _) => interior_left,
                    (None, Some(_)) => !interior_left,
                    (None, None) => {
                        report.orientation_violations.push(i);
                        continue;
                    }
                };
                if (if side { 1 } else { -1 }) != expected {
                    report.orientation_violations.push(i);
                }
            }
        }
        for v in 0..curve.vertices.len() {
            let vectors: Vec<Point> = curve.incident[v]
                .iter()
                .filter_map(|&e| match e {
                    CurveEdge::Bounded(i) => Some(vsub(&images[curve.across(v, i)], &images[v])),
                    CurveEdge::Leaf(_) => None,
                })
                .collect();
            if !in_half_plane(&vectors) {
                report.half_plane_violations.push(v);
            }
        }
        let tol = 1e-9;
        let pi = std::f64::consts::PI;
        for (&mu, region) in &geometry.regions {
            if region.is_empty() {
                continue;
            }
            let orient = if region.twice_area > Rational::zero() { 1.0 } else { -1.0 };
            let pts: Vec<(f64, f64)> = region.vertices.iter().map(|p| (to_f64(&p.0), to_f64(&p.1))).collect();
            let m = pts.len();
            let mut n_one = 0;
            let mut deficit = 0i64;
            let mut merges = 0usize;
            let mut skipped = false;
            for idx in 0..m {
                if region.corner[idx] {
                    if !region.sources[idx].is_empty() {
                        skipped = true;
                        report.skipped_vertices += 1;
                    }
                    continue;
                }
                let c = region.sources[idx].len();
                merges += c - 1;
                let p = pts[idx];
                let prev = pts[(idx + m - 1) % m];
                let next = pts[(idx + 1) % m];
                let a = (next.0 - p.0, next.1 - p.1);
                let b = (prev.0 - p.0, prev.1 - p.1);
                let mut theta = (orient * (a.0 * b.1 - a.1 * b.0)).atan2(a.0 * b.0 + a.1 * b.1);
                if theta < 0.0 {
                    theta += 2.0 * pi;
                }
                let theta_prime: f64 = region.sources[idx]
                    .iter()
                    .map(|&cv| {
                        let (e1, e2) = self.component_edges_at(cv, mu).expect("walk vertex touches component");
                        let (d1, d2) = (curve.outward(cv, e1), curve.outward(cv, e2));
                        unsigned_angle((d1.0 as f64, d1.1 as f64), (d2.0 as f64, d2.1 as f64))
                    })
                    .sum();
                let n = (theta + theta_prime) / pi;
                let rounded = n.round();
                // A vertex merging c curve vertices carries n in 1..=c+1.
                if (n - rounded).abs() >= tol || rounded < 1.0 || rounded > (c + 1) as f64 {
                    report.angle_violations.push(format!("region {mu:?} vertex {idx}: theta + theta' = {n:.12} pi"));
                    continue;
                }
                if rounded == 1.0 {
                    n_one += 1;
                }
                deficit += 2 - rounded as i64;
            }
            let expected = match self.sub.polygon.classify(mu) {
                PointClass::Interior => 4,
                PointClass::Side => 3,
                PointClass::Corner => 2,
            };
            if !skipped {
                report.n_one_counts.push((mu, n_one));
                if merges > 0 {
                    report.merged_regions.push(mu);
                }
                if deficit + merges as i64 != expected {
                    report.count_violations.push(format!(
                        "region {mu:?}: {n_one} vertices with n = 1 and {merges} merged images, expected {expected}"
                    ));
                }
            }
        }
        report
    }
}

/// `true` when `(u, v)` lies in the open scaled domain.
pub fn in_domain(k: usize, ell: usize, u: &Rational, v: &Rational) -> bool {
    in_open_domain(k, ell, u, v)
}

pub fn midpoint(a: &Point, b: &Point) -> Point {
    let half = frac(1, 2);
    ((&a.0 + &b.0) * &half, (&a.1 + &b.1) * &half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TropicalModel;
    use crate::rational::point;

    fn ex1() -> TropicalModel {
        TropicalModel::from_json_str(r#"{"k":1,"ell":1,"logw":{"0,0,W":"0","0,0,S":"1","0,0,E":"0","0,0,N":"0"}}"#).unwrap()
    }

    #[test]
    fn ex1_slopes() {
        let m = ex1();
        let a = m.action().unwrap();
        let s = a.slopes(&frac(-1, 4), &frac(-1, 4));
        assert_eq!(s.form.bounded, vec![frac(1, 2)]);
        let s = a.slopes(&frac(-1, 2), &frac(-1, 2));
        assert_eq!(s.form.bounded, vec![int(0)]);
    }

    #[test]
    fn ex1_phases() {
        let m = ex1();
        let a = m.action().unwrap();
        let q = frac(-1, 4);
        let report = a.classify_zeros(&a.slopes(&q, &q));
        assert_eq!(report.z_of((-1, 0)), 2);
        assert_eq!(report.zero_count(), 2);
        assert_eq!(a.classify_point(&q, &q).unwrap(), Phase::Frozen((-1, 0)));
        let t = frac(-3, 4);
        assert_eq!(a.classify_point(&t, &t).unwrap(), Phase::Frozen((0, 1)));
        let h = frac(-1, 2);
        let report = a.classify_zeros(&a.slopes(&h, &h));
        assert_eq!(report.double_count(), 1);
        assert_eq!(a.classify_point(&h, &h).unwrap(), Phase::ArcticCurve);
        assert!(matches!(a.classify_point(&int(0), &h), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn ex1_images_and_shape() {
        let m = ex1();
        let a = m.action().unwrap();
        assert_eq!(a.vertex_map().unwrap(), vec![point(0, -1), point(-1, 0)]);
        let geo = a.arctic_curve().unwrap();
        assert_eq!(geo.segments.len(), 1);
        assert!(geo.regions[&(0, 0)].is_empty());
        assert!(!geo.regions[&(-1, 0)].is_empty());
        assert_eq!(a.limit_shape(&frac(-1, 4), &frac(-1, 4)).unwrap(), frac(1, 2));
        assert_eq!(a.limit_shape(&frac(-3, 4), &frac(-3, 4)).unwrap(), int(1));
        assert_eq!(a.limit_shape(&frac(-1, 3), &frac(-2, 3)).unwrap(), int(1));
        let q = frac(-1, 4);
        assert_eq!(a.facet_by_default_path((-1, 0), &q, &q), a.facet((-1, 0), &q, &q));
        let report = a.verify_geometry(&geo);
        assert!(report.passed(), "{report:?}");
    }
}
