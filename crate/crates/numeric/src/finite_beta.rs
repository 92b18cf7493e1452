//! Characteristic polynomial, Ronkin function, surface tension and Gibbs
//! marginals at finite inverse temperature.
//!
//! All torus integrals use the tensor-product midpoint rule with `M` nodes
//! per circle at angles `2 pi (a + 1/2) / M`. The same run also sums over
//! every other node, a shifted rule with `M/2` nodes, which gives the error
//! estimate.

use crate::error::{NumericError, Result};
use crate::scalar::{exp_scaled, from_f64, from_rational, invert, determinant, Complex, Scalar, DEFAULT_PRECISION};
use crate::BETA_GUARD;
use rayon::prelude::*;
use rug::Float;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use tropaz_core::covers::enumerate_covers;
use tropaz_core::gibbs0::LiftedEdge;
use tropaz_core::lattice::{Slope, TorusGraph};
use tropaz_core::matching::permutation_sign;
use tropaz_core::rational::{format_rational, int, to_f64, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    /// Nodes per circle.
    pub nodes: usize,
    pub precision: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { nodes: 256, precision: DEFAULT_PRECISION }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes < 16 || !self.nodes.is_power_of_two() {
            return Err(NumericError::InvalidQuadrature(self.nodes));
        }
        Ok(())
    }
}

/// One torus cover in the expansion of the characteristic polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverTerm {
    pub sign: i8,
    pub energy: Rational,
    pub slope: Slope,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedCoverSum {
    pub k: usize,
    pub ell: usize,
    pub terms: Vec<CoverTerm>,
    /// Largest `|log w|` of the domain.
    pub max_abs_logw: Rational,
}

pub fn char_poly_beta(graph: &TorusGraph) -> Result<SignedCoverSum> {
    let covers = enumerate_covers(graph)?;
    let terms = covers
        .iter()
        .map(|c| {
            let perm: Vec<usize> = c.edges.iter().map(|&id| graph.edges[id].black).collect();
            let sigma: i8 = c.edges.iter().map(|&id| graph.edges[id].sign).product();
            CoverTerm { sign: permutation_sign(&perm) * sigma, energy: c.energy.clone(), slope: c.slope }
        })
        .collect();
    let max_abs_logw = graph.edges.iter().map(|e| if e.logw < int(0) { -e.logw.clone() } else { e.logw.clone() }).max().unwrap_or_else(|| int(0));
    Ok(SignedCoverSum { k: graph.k, ell: graph.ell, terms, max_abs_logw })
}

impl SignedCoverSum {
    /// Largest energy at each slope, i.e. the tropical coefficients.
    pub fn tropical(&self) -> BTreeMap<Slope, Rational> {
        let mut out: BTreeMap<Slope, Rational> = BTreeMap::new();
        for t in &self.terms {
            out.entry(t.slope).and_modify(|e| if t.energy > *e { *e = t.energy.clone() }).or_insert_with(|| t.energy.clone());
        }
        out
    }

    /// Per slope: tropical coefficient and `sum sign e^{beta (E - E*)}`.
    fn mantissas(&self, prec: u32, beta: &Float) -> Vec<(Slope, Rational, Float)> {
        let top = self.tropical();
        top.into_iter()
            .map(|(mu, estar)| {
                let mut m = Float::new(prec);
                for t in self.terms.iter().filter(|t| t.slope == mu) {
                    let x = exp_scaled(prec, beta, &(&t.energy - &estar));
                    if t.sign > 0 {
                        m += x;
                    } else {
                        m -= x;
                    }
                }
                (mu, estar, m)
            })
            .collect()
    }

    /// Tropical value and argmax of `max(mu . (x, y) + E*(mu))`.
    pub fn tropical_at(&self, x: &Rational, y: &Rational) -> (Rational, Vec<Slope>, Rational) {
        let values: Vec<(Slope, Rational)> =
            self.tropical().into_iter().map(|(mu, e)| (mu, int(mu.0) * x + int(mu.1) * y + e)).collect();
        let best = values.iter().map(|(_, v)| v.clone()).max().expect("nonempty");
        let argmax: Vec<Slope> = values.iter().filter(|(_, v)| *v == best).map(|(mu, _)| *mu).collect();
        let gap = values.iter().filter(|(_, v)| *v != best).map(|(_, v)| &best - v).min().unwrap_or_else(|| int(0));
        (best, argmax, gap)
    }

    pub fn check_beta(&self, beta: f64) -> Result<()> {
        let scale = beta.abs() * to_f64(&self.max_abs_logw);
        if scale > BETA_GUARD {
            return Err(NumericError::BetaGuard(scale, BETA_GUARD));
        }
        Ok(())
    }

    /// `P_beta(z, w)` at a single complex point, without rescaling.
    pub fn evaluate(&self, beta: f64, z: &Complex, w: &Complex) -> Complex {
        let prec = z.prec();
        let b = from_f64(prec, beta);
        let mut total = Complex::zero(prec);
        for t in &self.terms {
            let mut term = Complex::from_real(exp_scaled(prec, &b, &t.energy));
            if t.sign < 0 {
                term.re = -term.re;
            }
            term = term.mul(&power(z, t.slope.0)).mul(&power(w, t.slope.1));
            total = total.add(&term);
        }
        total
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "ell": self.ell,
            "terms": self.terms.iter().map(|t| json!({
                "sign": t.sign,
                "energy": format_rational(&t.energy),
                "mu": [t.slope.0, t.slope.1],
            })).collect::<Vec<_>>(),
        })
    }
}

fn power(z: &Complex, e: i64) -> Complex {
    let one = z.one_like();
    let mut out = one.clone();
    for _ in 0..e.unsigned_abs() {
        out = out.mul(z);
    }
    if e < 0 {
        one.div(&out)
    } else {
        out
    }
}

/// A quadrature result at `M` nodes with the `M/2` comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub value: Float,
    pub coarse: Float,
    pub nodes: usize,
}

impl Estimate {
    pub fn error(&self) -> Float {
        Float::with_val(self.value.prec(), &self.value - &self.coarse).abs()
    }

    pub fn to_json(&self) -> Value {
        json!({"value": self.value.to_string_radix(10, Some(40)), "error": self.error().to_f64(), "nodes": self.nodes})
    }
}

/// `e^{2 pi i t / 2M}` for `t < 2M`.
fn roots(prec: u32, m: usize) -> Vec<Complex> {
    (0..2 * m).map(|t| Complex::root_of_unity(prec, t, 2 * m)).collect()
}

/// Phase of `z^p` at node `a`.
fn node_phase(table: &[Complex], a: usize, p: i64) -> &Complex {
    &table[((2 * a as i64 + 1) * p).rem_euclid(table.len() as i64) as usize]
}

/// Quadrature means over the `M x M` grid and its even sub-grid of a
/// vector-valued integrand; rows run in parallel, sums in fixed order.
fn torus_mean<T, F>(m: usize, zero: &T, add: impl Fn(&T, &T) -> T + Sync, integrand: F) -> Result<(Vec<T>, Vec<T>)>
where
    T: Clone + Send + Sync,
    F: Fn(usize, usize) -> Result<Vec<T>> + Sync,
{
    let rows: Vec<Result<(Vec<T>, Vec<T>)>> = (0..m)
        .into_par_iter()
        .map(|a| {
            let mut fine: Option<Vec<T>> = None;
            let mut coarse: Option<Vec<T>> = None;
            for b in 0..m {
                let vals = integrand(a, b)?;
                fine = Some(match fine {
                    None => vals.clone(),
                    Some(acc) => acc.iter().zip(&vals).map(|(x, y)| add(x, y)).collect(),
                });
                if a % 2 == 0 && b % 2 == 0 {
                    coarse = Some(match coarse {
                        None => vals,
                        Some(acc) => acc.iter().zip(&vals).map(|(x, y)| add(x, y)).collect(),
                    });
                }
            }
            let len = fine.as_ref().map_or(0, |v| v.len());
            Ok((fine.unwrap_or_default(), coarse.unwrap_or_else(|| vec![zero.clone(); len])))
        })
        .collect();
    let mut fine: Vec<T> = Vec::new();
    let mut coarse: Vec<T> = Vec::new();
    for row in rows {
        let (f, c) = row?;
        if fine.is_empty() {
            fine = f;
            coarse = c;
        } else {
            fine = fine.iter().zip(&f).map(|(x, y)| add(x, y)).collect();
            coarse = coarse.iter().zip(&c).map(|(x, y)| add(x, y)).collect();
        }
    }
    Ok((fine, coarse))
}

/// `R_beta(x, y)`: the torus mean of `log |P_beta(e^{beta x} z, e^{beta y} w)|`.
pub fn ronkin(sum: &SignedCoverSum, beta: f64, x: &Rational, y: &Rational, spec: &QuadratureSpec) -> Result<Estimate> {
    spec.validate()?;
    sum.check_beta(beta)?;
    let (top, argmax, _) = sum.tropical_at(x, y);
    if argmax.len() != 1 {
        return Err(NumericError::NearZeroOnTorus { x: format_rational(x), y: format_rational(y) });
    }
    let prec = spec.precision;
    let b = from_f64(prec, beta);
    let coeffs: Vec<(Slope, Float)> = sum
        .mantissas(prec, &b)
        .into_iter()
        .map(|(mu, estar, mant)| {
            let exponent = int(mu.0) * x + int(mu.1) * y + estar - &top;
            (mu, mant * exp_scaled(prec, &b, &exponent))
        })
        .collect();
    let m = spec.nodes;
    let table = roots(prec, m);
    let zero = Float::new(prec);
    // Per row, the coefficient of each power of `w`.
    let rows: Vec<BTreeMap<i64, Complex>> = (0..m)
        .map(|a| {
            let mut row: BTreeMap<i64, Complex> = BTreeMap::new();
            for (mu, c) in &coeffs {
                let term = node_phase(&table, a, mu.0).scale(c);
                let entry = row.entry(mu.1).or_insert_with(|| Complex::zero(prec));
                *entry = entry.add(&term);
            }
            row
        })
        .collect();
    let (fine, coarse) = torus_mean(m, &zero, |p, q| Float::with_val(prec, p + q), |a, bn| {
        let mut total = Complex::zero(prec);
        for (q, c) in &rows[a] {
            total = total.add(&c.mul(node_phase(&table, bn, *q)));
        }
        if total.is_zero() {
            return Err(NumericError::NearZeroOnTorus { x: format_rational(x), y: format_rational(y) });
        }
        Ok(vec![total.norm_sqr().ln() / 2u32])
    })?;
    let shift = from_rational(prec, &top) * &b;
    let value = Float::with_val(prec, &fine[0] / (m * m) as u64) + &shift;
    let half = (m / 2) as u64;
    let coarse = Float::with_val(prec, &coarse[0] / (half * half)) + &shift;
    Ok(Estimate { value, coarse, nodes: m })
}

/// A point where one slope is the unique tropical argmax, with its margin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Anchor {
    pub x: Rational,
    pub y: Rational,
    pub margin: Rational,
}

/// Grid search for the point of largest margin in the complement component of `mu`.
pub fn anchor_point(estar: &BTreeMap<Slope, Rational>, mu: Slope) -> Result<Anchor> {
    let own = estar.get(&mu).ok_or(NumericError::EmptyComponentInterior(mu.0, mu.1))?;
    let lo = estar.values().min().expect("nonempty");
    let hi = estar.values().max().expect("nonempty");
    let range = (to_f64(hi) - to_f64(lo)).ceil() as i64;
    let bound = 2 * range + 2;
    let steps = 64i64;
    let others: Vec<(Slope, f64)> = estar.iter().filter(|(s, _)| **s != mu).map(|(s, e)| (*s, to_f64(e))).collect();
    let own_f = to_f64(own);
    let margin_at = |x: f64, y: f64| {
        others
            .iter()
            .map(|(s, e)| (mu.0 - s.0) as f64 * x + (mu.1 - s.1) as f64 * y + own_f - e)
            .fold(f64::INFINITY, f64::min)
    };
    let mut best: Option<(f64, i64, i64)> = None;
    for i in -steps..=steps {
        for j in -steps..=steps {
            let (x, y) = (bound as f64 * i as f64 / steps as f64, bound as f64 * j as f64 / steps as f64);
            let m = margin_at(x, y);
            let better = match best {
                None => true,
                Some((bm, bi, bj)) => m > bm + 1e-12 || ((m - bm).abs() <= 1e-12 && i.abs() + j.abs() < bi.abs() + bj.abs()),
            };
            if better {
                best = Some((m, i, j));
            }
        }
    }
    let (_, i, j) = best.expect("grid is nonempty");
    let x = Rational::new((bound * i).into(), steps.into());
    let y = Rational::new((bound * j).into(), steps.into());
    let margin = estar
        .iter()
        .filter(|(s, _)| **s != mu)
        .map(|(s, e)| int(mu.0 - s.0) * &x + int(mu.1 - s.1) * &y + own - e)
        .min()
        .unwrap_or_else(|| int(bound));
    if margin <= int(0) {
        return Err(NumericError::EmptyComponentInterior(mu.0, mu.1));
    }
    Ok(Anchor { x, y, margin })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TensionEstimate {
    pub mu: Slope,
    pub beta: f64,
    pub anchor: Anchor,
    pub ronkin: Estimate,
    /// `sigma_beta(mu)`.
    pub value: Float,
}

impl TensionEstimate {
    /// `sigma_beta(mu) / beta`.
    pub fn normalized(&self) -> f64 {
        self.value.to_f64() / self.beta
    }

    pub fn error(&self) -> f64 {
        self.ronkin.error().to_f64() / self.beta
    }
}

/// `sigma_beta(mu) = -R_beta(x, y) + beta (mu1 x + mu2 y)` at the anchor of `mu`.
pub fn surface_tension_beta(sum: &SignedCoverSum, mu: Slope, beta: f64, spec: &QuadratureSpec) -> Result<TensionEstimate> {
    let anchor = anchor_point(&sum.tropical(), mu)?;
    let r = ronkin(sum, beta, &anchor.x, &anchor.y, spec)?;
    let prec = spec.precision;
    let linear = from_rational(prec, &(int(mu.0) * &anchor.x + int(mu.1) * &anchor.y)) * from_f64(prec, beta);
    let value = linear - &r.value;
    Ok(TensionEstimate { mu, beta, anchor, ronkin: r, value })
}

/// Edge marginal of the translation-invariant Gibbs measure at `(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalEstimate {
    pub value: Float,
    pub coarse: Float,
    pub imaginary: Float,
    pub nodes: usize,
}

impl MarginalEstimate {
    pub fn error(&self) -> Float {
        Float::with_val(self.value.prec(), &self.value - &self.coarse).abs()
    }
}

/// Joint probability of lifted edges under `P_{beta,(x,y)}`, by quadrature of
/// the inverse Kasteleyn matrix on `|z| = e^{beta x}`, `|w| = e^{beta y}`.
pub fn gibbs_beta_marginal(
    graph: &TorusGraph,
    edges: &[LiftedEdge],
    x: &Rational,
    y: &Rational,
    beta: f64,
    spec: &QuadratureSpec,
) -> Result<MarginalEstimate> {
    spec.validate()?;
    let prec = spec.precision;
    let sum = char_poly_beta(graph)?;
    sum.check_beta(beta)?;
    let b = from_f64(prec, beta);
    let n = graph.vertex_count();
    let m = spec.nodes;
    let table = roots(prec, m);
    let rz = exp_scaled(prec, &b, x);
    let rw = exp_scaled(prec, &b, y);
    let weights: Vec<Float> = graph.edges.iter().map(|e| exp_scaled(prec, &b, &e.logw)).collect();
    // Each needed inverse entry: (black index, white index, z exponent, w exponent).
    let pairs: Vec<(usize, usize, i64, i64)> = edges
        .iter()
        .flat_map(|s| {
            edges.iter().map(move |t| {
                let bl = s.black(graph);
                let wh = t.white(graph);
                (bl.index, wh.index, wh.copy.1 - bl.copy.1, bl.copy.0 - wh.copy.0)
            })
        })
        .collect();
    let radius_power = |base: &Float, e: i64| -> Float {
        let mut out = Float::with_val(prec, 1);
        for _ in 0..e.unsigned_abs() {
            out *= base;
        }
        if e < 0 {
            Float::with_val(prec, 1) / out
        } else {
            out
        }
    };
    let zero = Complex::zero(prec);
    let (fine, coarse) = torus_mean(m, &zero, |p, q| p.add(q), |a, bn| {
        let z = node_phase(&table, a, 1).scale(&rz);
        let w = node_phase(&table, bn, 1).scale(&rw);
        let mut k = vec![vec![Complex::zero(prec); n]; n];
        for (e, wt) in graph.edges.iter().zip(&weights) {
            let mut entry = Complex::from_real(if e.sign < 0 { Float::with_val(prec, -wt) } else { wt.clone() });
            if e.cross_u {
                entry = entry.div(&z);
            }
            if e.cross_v {
                entry = entry.mul(&w);
            }
            k[e.white][e.black] = k[e.white][e.black].add(&entry);
        }
        let inv = invert(&k).ok_or(NumericError::SingularKasteleynOnContour)?;
        Ok(pairs
            .iter()
            .map(|&(bi, wi, pz, pw)| {
                let phase = node_phase(&table, a, pz).mul(node_phase(&table, bn, pw));
                let modulus = radius_power(&rz, pz) * radius_power(&rw, pw);
                inv[bi][wi].mul(&phase).scale(&modulus)
            })
            .collect())
    })?;
    let p = edges.len();
    let assemble = |sums: &[Complex], count: u64| -> Complex {
        let scale = Float::with_val(prec, 1) / count;
        let mat: Vec<Vec<Complex>> = (0..p)
            .map(|s| {
                (0..p)
                    .map(|t| {
                        let e = &graph.edges[edges[t].edge];
                        let kwb = if e.sign < 0 { Float::with_val(prec, -&weights[e.id]) } else { weights[e.id].clone() };
                        sums[s * p + t].scale(&scale).scale(&kwb)
                    })
                    .collect()
            })
            .collect();
        determinant(&mat).unwrap_or_else(|| Complex::from_real(Float::with_val(prec, 1)))
    };
    let fine_det = assemble(&fine, (m * m) as u64);
    let half = (m / 2) as u64;
    let coarse_det = assemble(&coarse, half * half);
    Ok(MarginalEstimate { value: fine_det.re, coarse: coarse_det.re, imaginary: fine_det.im, nodes: m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use tropaz_core::lattice::{build_torus_graph, EdgeType, FundamentalDomain};

    fn ex1() -> TorusGraph {
        let d = FundamentalDomain::from_fn(1, 1, |_, _, t| int((t == EdgeType::South) as i64)).unwrap();
        build_torus_graph(&d)
    }

    #[test]
    fn ex1_terms() {
        let s = char_poly_beta(&ex1()).unwrap();
        let got: Vec<(i8, i64, Slope)> = s.terms.iter().map(|t| (t.sign, to_f64(&t.energy) as i64, t.slope)).collect();
        assert_eq!(got, vec![(1, 0, (0, 0)), (1, 1, (-1, 0)), (1, 0, (-1, 1)), (-1, 0, (0, 1))]);
    }

    #[test]
    fn quadrature_spec_validation() {
        assert!(QuadratureSpec { nodes: 8, precision: 64 }.validate().is_err());
        assert!(QuadratureSpec { nodes: 48, precision: 64 }.validate().is_err());
        assert!(QuadratureSpec { nodes: 64, precision: 64 }.validate().is_ok());
    }

    #[test]
    fn ex1_ronkin_far_out() {
        let s = char_poly_beta(&ex1()).unwrap();
        let spec = QuadratureSpec { nodes: 32, precision: 128 };
        let r = ronkin(&s, 10.0, &int(5), &int(5), &spec).unwrap();
        assert!((r.value.to_f64() / 10.0 - 5.0).abs() < 1e-6);
    }

    #[test]
    fn ex1_anchor_lies_in_its_component() {
        let s = char_poly_beta(&ex1()).unwrap();
        for mu in [(0, 0), (-1, 0), (-1, 1), (0, 1)] {
            let a = anchor_point(&s.tropical(), mu).unwrap();
            let (_, argmax, _) = s.tropical_at(&a.x, &a.y);
            assert_eq!(argmax, vec![mu]);
        }
    }
}
