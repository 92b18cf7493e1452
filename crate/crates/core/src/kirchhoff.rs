//! The dual action function on the Newton rectangle and the exact 1-form it
//! induces on the tropical curve.
//!
//! With inward leaf directions and `eta* = ccw(eta)`, the boundary data are
//! `f*(-i, 0) = k i`, `f*(-ell, j) = ell (k - j)` and zero on the right and
//! top sides, so `f*((0, k)) = 0` fixes the gauge.

use crate::error::{Error, Result};
use crate::lattice::Slope;
use crate::linalg::{solve, Matrix};
use crate::newton::{PointClass, Subdivision};
use crate::rational::{format_rational, int, primitive_int, Rational};
use crate::tropical_curve::{CurveEdge, TropicalCurve};
use num_traits::Zero;
use serde_json::{json, Value};
use std::collections::{BTreeMap, VecDeque};

fn ccw(v: (i64, i64)) -> (i64, i64) {
    (-v.1, v.0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualActionFunction {
    pub fstar: BTreeMap<Slope, Rational>,
    /// Gradient of the linear interpolation of `f*` on each subdivision face.
    pub face_gradients: Vec<(Rational, Rational)>,
}

impl DualActionFunction {
    pub fn value(&self, mu: Slope) -> &Rational {
        &self.fstar[&mu]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "gauge": "fstar(0,k) = 0",
            "fstar": self.fstar.iter().map(|(mu, f)| json!({"mu": [mu.0, mu.1], "value": format_rational(f)})).collect::<Vec<_>>(),
            "face_gradients": self.face_gradients.iter().map(|g| json!([format_rational(&g.0), format_rational(&g.1)])).collect::<Vec<_>>(),
        })
    }
}

/// Boundary value of `f*`, or `None` for interior points.
pub fn boundary_value(k: usize, ell: usize, mu: Slope) -> Option<Rational> {
    let (k, ell) = (k as i64, ell as i64);
    if mu.1 == 0 {
        Some(int(-k * mu.0))
    } else if mu.0 == -ell {
        Some(int(ell * (k - mu.1)))
    } else if mu.0 == 0 || mu.1 == k {
        Some(int(0))
    } else {
        None
    }
}

/// Kirchhoff weight of a subdivision edge: dual length over lattice length.
fn conductance(sub: &Subdivision, curve: &TropicalCurve, edge: usize) -> Rational {
    let length = match curve.dual_of[edge] {
        CurveEdge::Bounded(i) => curve.bounded[i].length.clone(),
        CurveEdge::Leaf(_) => int(0),
    };
    length / int(sub.edges[edge].lattice_length())
}

fn plane_gradient(points: [(Slope, &Rational); 3]) -> (Rational, Rational) {
    let [(p0, s0), (p1, s1), (p2, s2)] = points;
    let (dx1, dy1) = (int(p1.0 - p0.0), int(p1.1 - p0.1));
    let (dx2, dy2) = (int(p2.0 - p0.0), int(p2.1 - p0.1));
    let det = &dx1 * &dy2 - &dx2 * &dy1;
    let ds1 = s1 - s0;
    let ds2 = s2 - s0;
    ((&ds1 * &dy2 - &ds2 * &dy1) / &det, (&dx1 * &ds2 - &dx2 * &ds1) / &det)
}

pub fn solve_dual(sub: &Subdivision, curve: &TropicalCurve) -> Result<DualActionFunction> {
    let (k, ell) = (curve.k, curve.ell);
    let points = sub.polygon.points();
    let interior: Vec<Slope> = points.iter().copied().filter(|&p| sub.polygon.classify(p) == PointClass::Interior).collect();
    let index: BTreeMap<Slope, usize> = interior.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let n = interior.len();
    let mut a: Matrix = vec![vec![Rational::zero(); n]; n];
    let mut b = vec![Rational::zero(); n];
    for (row, &mu) in interior.iter().enumerate() {
        for &e in sub.edges_at(mu) {
            let nu = sub.edges[e].other_end(mu);
            let c = conductance(sub, curve, e);
            a[row][row] -= &c;
            match index.get(&nu) {
                Some(&col) => a[row][col] += &c,
                None => {
                    let fixed = boundary_value(k, ell, nu).expect("non-interior point has boundary data");
                    b[row] -= &c * fixed;
                }
            }
        }
    }
    let x = if n > 0 { solve(&a, &b)? } else { Vec::new() };
    let fstar: BTreeMap<Slope, Rational> = points
        .iter()
        .map(|&p| {
            let value = match index.get(&p) {
                Some(&i) => x[i].clone(),
                None => boundary_value(k, ell, p).expect("boundary point"),
            };
            (p, value)
        })
        .collect();
    let face_gradients = sub
        .faces
        .iter()
        .map(|f| {
            let v = &f.vertices;
            plane_gradient([(v[0], &fstar[&v[0]]), (v[1], &fstar[&v[1]]), (v[2], &fstar[&v[2]])])
        })
        .collect();
    Ok(DualActionFunction { fstar, face_gradients })
}

/// Weighted Laplacian of `f*` at every interior lattice point.
pub fn laplacian_residuals(sub: &Subdivision, curve: &TropicalCurve, fstar: &DualActionFunction) -> Vec<(Slope, Rational)> {
    sub.polygon
        .points()
        .into_iter()
        .filter(|&p| sub.polygon.classify(p) == PointClass::Interior)
        .map(|mu| {
            let residual = sub
                .edges_at(mu)
                .iter()
                .map(|&e| conductance(sub, curve, e) * (fstar.value(sub.edges[e].other_end(mu)) - fstar.value(mu)))
                .sum();
            (mu, residual)
        })
        .collect()
}

/// A 1-form on the curve: values on bounded edges oriented `from -> to` and
/// on leaves oriented inward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneForm {
    pub bounded: Vec<Rational>,
    pub leaves: Vec<Rational>,
}

impl OneForm {
    /// The 1-form `eta -> phi(eta)` for a linear functional `phi`.
    pub fn from_linear(curve: &TropicalCurve, phi: impl Fn((i64, i64)) -> Rational) -> Self {
        OneForm {
            bounded: curve.bounded.iter().map(|e| phi(e.eta)).collect(),
            leaves: curve.leaves.iter().map(|l| phi(l.eta)).collect(),
        }
    }

    /// Value on `edge` oriented away from `vertex`.
    pub fn outward(&self, curve: &TropicalCurve, vertex: usize, edge: CurveEdge) -> Rational {
        match edge {
            CurveEdge::Bounded(i) if curve.bounded[i].from == vertex => self.bounded[i].clone(),
            CurveEdge::Bounded(i) => -self.bounded[i].clone(),
            CurveEdge::Leaf(i) => -self.leaves[i].clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "bounded": self.bounded.iter().map(format_rational).collect::<Vec<_>>(),
            "leaves": self.leaves.iter().map(format_rational).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimalGradients {
    pub form: OneForm,
    /// `(d/dx f_t, d/dy f_t)` at each curve vertex.
    pub gradients: Vec<(Rational, Rational)>,
}

/// Value of `df*` along the primitive direction `ccw(eta)` of the dual edge.
fn dual_difference(sub: &Subdivision, fstar: &DualActionFunction, dual: usize, eta: (i64, i64)) -> Rational {
    let e = &sub.edges[dual];
    let (a, b) = e.ends;
    let (dir, len) = primitive_int((b.0 - a.0, b.1 - a.1));
    let target = ccw(eta);
    let (start, end) = if dir == target { (a, b) } else { (b, a) };
    debug_assert!(dir == target || dir == (-target.0, -target.1));
    (fstar.value(end) - fstar.value(start)) / int(len)
}

pub fn derive_primal(sub: &Subdivision, curve: &TropicalCurve, fstar: &DualActionFunction) -> Result<PrimalGradients> {
    let form = OneForm {
        bounded: curve.bounded.iter().map(|e| dual_difference(sub, fstar, e.dual, e.eta)).collect(),
        leaves: curve.leaves.iter().map(|l| dual_difference(sub, fstar, l.dual, l.eta)).collect(),
    };
    let mut gradients = Vec::with_capacity(curve.vertices.len());
    for v in 0..curve.vertices.len() {
        let rows: Vec<((i64, i64), Rational)> =
            curve.incident[v].iter().map(|&e| (curve.outward(v, e), form.outward(curve, v, e))).collect();
        let pair = (0..rows.len())
            .flat_map(|i| (i + 1..rows.len()).map(move |j| (i, j)))
            .find(|&(i, j)| rows[i].0 .0 * rows[j].0 .1 - rows[i].0 .1 * rows[j].0 .0 != 0)
            .ok_or_else(|| Error::InconsistentThirdEdge { vertex: v, detail: "parallel incident edges".into() })?;
        let ((a, p), (b, q)) = (&rows[pair.0], &rows[pair.1]);
        let det = int(a.0 * b.1 - a.1 * b.0);
        let gx = (p * int(b.1) - q * int(a.1)) / &det;
        let gy = (q * int(a.0) - p * int(b.0)) / &det;
        for (eta, value) in &rows {
            let predicted = &gx * int(eta.0) + &gy * int(eta.1);
            if &predicted != value {
                return Err(Error::InconsistentThirdEdge {
                    vertex: v,
                    detail: format!("direction {eta:?}: {} != {}", format_rational(&predicted), format_rational(value)),
                });
            }
        }
        gradients.push((gx, gy));
    }
    Ok(PrimalGradients { form, gradients })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessReport {
    /// Integrals over a cycle basis that fail to vanish, by closing edge.
    pub nonzero_cycles: Vec<(usize, Rational)>,
    pub cycles_checked: usize,
    pub residue_sum: Rational,
    /// Vertices where the outward values do not sum to zero.
    pub unbalanced: Vec<usize>,
}

impl ExactnessReport {
    pub fn exact(&self) -> bool {
        self.nonzero_cycles.is_empty() && self.residue_sum.is_zero() && self.unbalanced.is_empty()
    }
}

/// Checks cycle integrals over a spanning-tree cycle basis, the residue sum
/// and balancing of a 1-form.
pub fn verify_exactness(form: &OneForm, curve: &TropicalCurve) -> ExactnessReport {
    let n = curve.vertices.len();
    let mut potential: Vec<Option<Rational>> = vec![None; n];
    let mut tree_edge = vec![false; curve.bounded.len()];
    for root in 0..n {
        if potential[root].is_some() {
            continue;
        }
        potential[root] = Some(Rational::zero());
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &e in &curve.incident[v] {
                if let CurveEdge::Bounded(i) = e {
                    let w = curve.across(v, i);
                    if potential[w].is_none() {
                        let step = &curve.bounded[i].length * form.outward(curve, v, e);
                        potential[w] = Some(potential[v].as_ref().unwrap() + step);
                        tree_edge[i] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    let mut nonzero_cycles = Vec::new();
    let mut cycles_checked = 0;
    for (i, e) in curve.bounded.iter().enumerate() {
        if tree_edge[i] {
            continue;
        }
        cycles_checked += 1;
        let integral =
            potential[e.from].as_ref().unwrap() + &e.length * &form.bounded[i] - potential[e.to].as_ref().unwrap();
        if !integral.is_zero() {
            nonzero_cycles.push((i, integral));
        }
    }
    let residue_sum = form.leaves.iter().sum();
    let unbalanced = (0..n)
        .filter(|&v| {
            let total: Rational = curve.incident[v].iter().map(|&e| form.outward(curve, v, e)).sum();
            !total.is_zero()
        })
        .collect();
    ExactnessReport { nonzero_cycles, cycles_checked, residue_sum, unbalanced }
}

/// Rebuilds `f*` from the 1-form by integrating along subdivision edges
/// from `(0, k)`, where it is set to zero.
pub fn reconstruct_fstar(sub: &Subdivision, curve: &TropicalCurve, form: &OneForm) -> BTreeMap<Slope, Rational> {
    let origin = sub.polygon.top_right();
    let mut values = BTreeMap::from([(origin, Rational::zero())]);
    let mut queue = VecDeque::from([origin]);
    while let Some(mu) = queue.pop_front() {
        for &e in sub.edges_at(mu) {
            let nu = sub.edges[e].other_end(mu);
            if values.contains_key(&nu) {
                continue;
            }
            let (eta, value) = match curve.dual_of[e] {
                CurveEdge::Bounded(i) => (curve.bounded[i].eta, &form.bounded[i]),
                CurveEdge::Leaf(i) => (curve.leaves[i].eta, &form.leaves[i]),
            };
            let (dir, len) = primitive_int((nu.0 - mu.0, nu.1 - mu.1));
            let sign = if dir == ccw(eta) { int(1) } else { int(-1) };
            let next = &values[&mu] + sign * int(len) * value;
            values.insert(nu, next);
            queue.push_back(nu);
        }
    }
    values
}
