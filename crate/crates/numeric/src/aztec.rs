//! Finite Aztec diamonds built from a fundamental domain.
//!
//! Black vertices are `b_{x,y}` with `0 <= x <= n`, `0 <= y < n` and white
//! vertices `w_{x,y}` with `0 <= x < n`, `-1 <= y < n`, where `n = k ell N`.
//! Every lattice edge between two of these vertices belongs to the graph.

use crate::error::{NumericError, Result};
use crate::scalar::{exp_scaled, from_f64, invert, Scalar};
use crate::BETA_GUARD;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;
use std::collections::{BTreeMap, VecDeque};
use tropaz_core::action::ActionFunction;
use tropaz_core::lattice::{black_point, edge_faces, white_point, EdgeType, FundamentalDomain};
use tropaz_core::matching::Bipartite;
use tropaz_core::rational::{frac, int, to_f64, Rational};

/// Largest size accepted by the dense marginal solve.
pub const MARGINAL_SIZE_LIMIT: usize = 48;
/// Largest size accepted by the sequential sampler.
pub const SAMPLER_SIZE_LIMIT: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AztecEdge {
    pub id: usize,
    pub white: usize,
    pub black: usize,
    pub ty: EdgeType,
    /// Coordinates `(x, y)` of the white endpoint.
    pub at: (i64, i64),
    pub logw: Rational,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AztecGraph {
    pub k: usize,
    pub ell: usize,
    pub blocks: usize,
    pub size: usize,
    pub whites: Vec<(i64, i64)>,
    pub blacks: Vec<(i64, i64)>,
    pub edges: Vec<AztecEdge>,
    pub white_edges: Vec<Vec<usize>>,
    pub black_edges: Vec<Vec<usize>>,
}

pub fn build_aztec(domain: &FundamentalDomain, blocks: usize) -> Result<AztecGraph> {
    if blocks == 0 {
        return Err(NumericError::InvalidSize);
    }
    let (k, ell) = (domain.k(), domain.ell());
    let n = (k * ell * blocks) as i64;
    let blacks: Vec<(i64, i64)> = (0..=n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
    let whites: Vec<(i64, i64)> = (0..n).flat_map(|x| (-1..n).map(move |y| (x, y))).collect();
    let black_index: BTreeMap<(i64, i64), usize> = blacks.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut edges = Vec::new();
    let mut white_edges = vec![Vec::new(); whites.len()];
    let mut black_edges = vec![Vec::new(); blacks.len()];
    for (wi, &(x, y)) in whites.iter().enumerate() {
        for ty in EdgeType::ALL {
            let (dx, dy) = ty.black_shift();
            if let Some(&bi) = black_index.get(&(x + dx, y + dy)) {
                let id = edges.len();
                white_edges[wi].push(id);
                black_edges[bi].push(id);
                edges.push(AztecEdge { id, white: wi, black: bi, ty, at: (x, y), logw: domain.logw_lifted(x, y, ty).clone(), sign: ty.sign() });
            }
        }
    }
    Ok(AztecGraph { k, ell, blocks, size: n as usize, whites, blacks, edges, white_edges, black_edges })
}

/// Values of a height function at face midpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightField<T> {
    pub values: BTreeMap<(i64, i64), T>,
}

impl<T> HeightField<T> {
    pub fn get(&self, face: (i64, i64)) -> Option<&T> {
        self.values.get(&face)
    }
}

impl AztecGraph {
    pub fn max_abs_logw(&self) -> Rational {
        self.edges.iter().map(|e| if e.logw < int(0) { -e.logw.clone() } else { e.logw.clone() }).max().unwrap_or_else(|| int(0))
    }

    pub fn check_beta(&self, beta: f64) -> Result<()> {
        let scale = beta.abs() * to_f64(&self.max_abs_logw());
        if scale > BETA_GUARD {
            return Err(NumericError::BetaGuard(scale, BETA_GUARD));
        }
        Ok(())
    }

    /// Faces `(from, to)` crossed by each edge, white endpoint on the right.
    pub fn crossings(&self) -> Vec<((i64, i64), (i64, i64))> {
        self.edges.iter().map(|e| edge_faces(e.ty, e.at.0, e.at.1)).collect()
    }

    /// Every face midpoint touched by an edge, sorted.
    pub fn faces(&self) -> Vec<(i64, i64)> {
        let mut faces: Vec<(i64, i64)> = self.crossings().into_iter().flat_map(|(a, b)| [a, b]).collect();
        faces.sort_unstable();
        faces.dedup();
        faces
    }

    /// Scaled coordinates `(u, v)` of a face midpoint.
    pub fn scaled(&self, face: (i64, i64)) -> (Rational, Rational) {
        let n = self.size as i64;
        (frac(-face.0, 2 * self.ell as i64 * n), frac(-face.1, 2 * self.k as i64 * n))
    }

    pub fn white_position(&self, w: usize) -> (i64, i64) {
        white_point(self.whites[w].0, self.whites[w].1)
    }

    pub fn black_position(&self, b: usize) -> (i64, i64) {
        black_point(self.blacks[b].0, self.blacks[b].1)
    }

    /// Dense white-by-black Kasteleyn matrix `sigma e^{beta log w}`.
    pub fn kasteleyn(&self, beta: f64, prec: u32) -> Result<Vec<Vec<Float>>> {
        self.check_beta(beta)?;
        let b = from_f64(prec, beta);
        let mut k = vec![vec![Float::new(prec); self.blacks.len()]; self.whites.len()];
        for e in &self.edges {
            let value = exp_scaled(prec, &b, &e.logw);
            k[e.white][e.black] = if e.sign < 0 { -value } else { value };
        }
        Ok(k)
    }

    pub fn energy(&self, cover: &[usize]) -> Rational {
        cover.iter().map(|&id| self.edges[id].logw.clone()).sum()
    }

    /// Checks that the edge ids form a perfect matching.
    pub fn validate_cover(&self, cover: &[usize]) -> Result<()> {
        let mut seen_w = vec![false; self.whites.len()];
        let mut seen_b = vec![false; self.blacks.len()];
        for &id in cover {
            let e = self.edges.get(id).ok_or_else(|| NumericError::NotACover(format!("unknown edge {id}")))?;
            if std::mem::replace(&mut seen_w[e.white], true) || std::mem::replace(&mut seen_b[e.black], true) {
                return Err(NumericError::NotACover(format!("vertex covered twice at edge {id}")));
            }
        }
        if cover.len() != self.whites.len() {
            return Err(NumericError::NotACover(format!("{} dimers for {} white vertices", cover.len(), self.whites.len())));
        }
        Ok(())
    }

    /// Edge id joining the given white and black vertices.
    pub fn edge_between(&self, white: usize, black: usize) -> Option<usize> {
        self.white_edges[white].iter().copied().find(|&id| self.edges[id].black == black)
    }
}

/// Edge marginals `K(w, b) K^{-1}(b, w)` of the Boltzmann measure, indexed by edge id.
pub fn aztec_edge_marginals(graph: &AztecGraph, beta: f64, prec: u32) -> Result<Vec<Float>> {
    if graph.size > MARGINAL_SIZE_LIMIT {
        return Err(NumericError::SizeGuardExceeded { what: "Aztec size", value: graph.size, limit: MARGINAL_SIZE_LIMIT });
    }
    let k = graph.kasteleyn(beta, prec)?;
    let inv = invert(&k).ok_or(NumericError::SingularKasteleyn)?;
    Ok(graph.edges.iter().map(|e| k[e.white][e.black].times(&inv[e.black][e.white])).collect())
}

/// Breadth-first integration of face increments from the origin face.
/// Returns the field and the largest disagreement found on non-tree crossings.
fn integrate<T: Clone>(
    graph: &AztecGraph,
    zero: T,
    increment: impl Fn(usize) -> T,
    add: impl Fn(&T, &T) -> T,
    neg: impl Fn(&T) -> T,
    mut mismatch: impl FnMut(&T, &T),
) -> HeightField<T> {
    let crossings = graph.crossings();
    let mut adjacent: BTreeMap<(i64, i64), Vec<((i64, i64), usize, bool)>> = BTreeMap::new();
    for (id, &(from, to)) in crossings.iter().enumerate() {
        adjacent.entry(from).or_default().push((to, id, true));
        adjacent.entry(to).or_default().push((from, id, false));
    }
    let mut values: BTreeMap<(i64, i64), T> = BTreeMap::new();
    let origin = (0, 0);
    values.insert(origin, zero);
    let mut queue = VecDeque::from([origin]);
    while let Some(f) = queue.pop_front() {
        let here = values[&f].clone();
        for &(g, id, forward) in adjacent.get(&f).map(Vec::as_slice).unwrap_or(&[]) {
            let step = increment(id);
            let there = add(&here, &if forward { step } else { neg(&step) });
            match values.get(&g) {
                Some(existing) => mismatch(existing, &there),
                None => {
                    values.insert(g, there);
                    queue.push_back(g);
                }
            }
        }
    }
    HeightField { values }
}

/// Integer height of a dimer cover, `h(0, 0) = 0`.
pub fn cover_height(graph: &AztecGraph, cover: &[usize]) -> Result<HeightField<i64>> {
    graph.validate_cover(cover)?;
    let mut present = vec![false; graph.edges.len()];
    for &id in cover {
        present[id] = true;
    }
    let mut bad = None;
    let field = integrate(
        graph,
        0i64,
        |id| present[id] as i64 - (graph.edges[id].ty == EdgeType::North) as i64,
        |a, b| a + b,
        |a| -a,
        |a, b| {
            if a != b && bad.is_none() {
                bad = Some(format!("face reached with heights {a} and {b}"));
            }
        },
    );
    match bad {
        Some(msg) => Err(NumericError::InconsistentHeight(msg)),
        None => Ok(field),
    }
}

/// Expected height from edge marginals, with the largest path disagreement.
pub fn expected_height_field(graph: &AztecGraph, marginals: &[Float]) -> (HeightField<Float>, Float) {
    let prec = marginals.first().map_or(crate::DEFAULT_PRECISION, |m| m.prec());
    let mut residual = Float::new(prec);
    let field = integrate(
        graph,
        Float::new(prec),
        |id| {
            let north = (graph.edges[id].ty == EdgeType::North) as u32;
            Float::with_val(prec, &marginals[id] - north)
        },
        |a, b| Float::with_val(prec, a + b),
        |a| Float::with_val(prec, -a),
        |a, b| {
            let d = Float::with_val(prec, a - b).abs();
            if d > residual {
                residual = d;
            }
        },
    );
    (field, residual)
}

/// Exact sequential sampler: the lowest uncovered white vertex is matched
/// with probability `K(w, b) K^{-1}(b, w)` of the remaining graph, and the
/// inverse is updated by a Schur complement.
pub fn sample_cover(graph: &AztecGraph, beta: f64, seed: u64, prec: u32) -> Result<Vec<usize>> {
    if graph.size > SAMPLER_SIZE_LIMIT {
        return Err(NumericError::SizeGuardExceeded { what: "Aztec size", value: graph.size, limit: SAMPLER_SIZE_LIMIT });
    }
    let k = graph.kasteleyn(beta, prec)?;
    let mut inv = invert(&k).ok_or(NumericError::SingularKasteleyn)?;
    let nv = graph.whites.len();
    let mut white_alive = vec![true; nv];
    let mut black_alive = vec![true; nv];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cover = Vec::with_capacity(nv);
    for w in 0..nv {
        let options: Vec<(usize, f64)> = graph.white_edges[w]
            .iter()
            .filter(|&&id| black_alive[graph.edges[id].black])
            .map(|&id| {
                let b = graph.edges[id].black;
                (id, k[w][b].times(&inv[b][w]).to_f64().max(0.0))
            })
            .collect();
        let total: f64 = options.iter().map(|o| o.1).sum();
        if options.is_empty() || total <= 0.0 {
            return Err(NumericError::SingularKasteleyn);
        }
        let mut target = rng.gen::<f64>() * total;
        let mut chosen = options[options.len() - 1].0;
        for &(id, p) in &options {
            if target < p {
                chosen = id;
                break;
            }
            target -= p;
        }
        let b = graph.edges[chosen].black;
        cover.push(chosen);
        white_alive[w] = false;
        black_alive[b] = false;
        let pivot = inv[b][w].clone();
        let column: Vec<(usize, Float)> = (0..nv).filter(|&r| black_alive[r]).map(|r| (r, inv[r][w].over(&pivot))).collect();
        let row: Vec<(usize, Float)> = (0..nv).filter(|&c| white_alive[c]).map(|c| (c, inv[b][c].clone())).collect();
        for (r, factor) in &column {
            if factor.is_zero() {
                continue;
            }
            for (c, value) in &row {
                if !value.is_zero() {
                    inv[*r][*c] = inv[*r][*c].minus(&factor.times(value));
                }
            }
        }
    }
    cover.sort_unstable();
    Ok(cover)
}

/// Every dimer cover by exhaustive search, as sorted edge-id lists.
pub fn enumerate_aztec_covers(graph: &AztecGraph, limit: usize) -> Result<Vec<Vec<usize>>> {
    if graph.size > limit {
        return Err(NumericError::SizeGuardExceeded { what: "Aztec size", value: graph.size, limit });
    }
    let adjacency =
        graph.white_edges.iter().map(|ids| ids.iter().map(|&id| (graph.edges[id].black, id)).collect()).collect();
    let mut out = Vec::new();
    Bipartite::new(graph.blacks.len(), adjacency).for_each_perfect_matching(|labels, _| {
        let mut c = labels.to_vec();
        c.sort_unstable();
        out.push(c);
    });
    Ok(out)
}

/// Distance comparison between `(1/n) E[h]` and the tropical limit shape.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitDeviation {
    /// Largest deviation over interior faces.
    pub max_all: f64,
    /// Largest deviation over interior faces at distance at least the bulk margin from the arctic curve.
    pub max_bulk: f64,
    pub bulk_faces: usize,
}

pub fn compare_with_limit_shape(
    graph: &AztecGraph,
    field: &HeightField<Float>,
    action: &ActionFunction<'_>,
    bulk_margin: f64,
) -> tropaz_core::Result<LimitDeviation> {
    let segments: Vec<((f64, f64), (f64, f64))> = action
        .arctic_curve()?
        .segments
        .iter()
        .map(|s| ((to_f64(&s.from.0), to_f64(&s.from.1)), (to_f64(&s.to.0), to_f64(&s.to.1))))
        .collect();
    let n = graph.size as f64;
    let mut out = LimitDeviation { max_all: 0.0, max_bulk: 0.0, bulk_faces: 0 };
    for (&face, h) in &field.values {
        let (u, v) = graph.scaled(face);
        let Ok(limit) = action.limit_shape(&u, &v) else { continue };
        if !tropaz_core::action::in_domain(graph.k, graph.ell, &u, &v) {
            continue;
        }
        let dev = (h.to_f64() / n - to_f64(&limit)).abs();
        out.max_all = out.max_all.max(dev);
        let p = (to_f64(&u), to_f64(&v));
        if segments.iter().all(|&(a, b)| point_segment_distance(p, a, b) >= bulk_margin) {
            out.max_bulk = out.max_bulk.max(dev);
            out.bulk_faces += 1;
        }
    }
    Ok(out)
}

fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let d = (b.0 - a.0, b.1 - a.1);
    let len2 = d.0 * d.0 + d.1 * d.1;
    let t = if len2 == 0.0 { 0.0 } else { (((p.0 - a.0) * d.0 + (p.1 - a.1) * d.1) / len2).clamp(0.0, 1.0) };
    let q = (a.0 + t * d.0, a.1 + t * d.1);
    ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex1() -> FundamentalDomain {
        FundamentalDomain::from_fn(1, 1, |_, _, t| int((t == EdgeType::South) as i64)).unwrap()
    }

    #[test]
    fn ex1_small_diamond() {
        let g = build_aztec(&ex1(), 1).unwrap();
        assert_eq!((g.whites.len(), g.blacks.len(), g.edges.len()), (2, 2, 4));
        assert_eq!(enumerate_aztec_covers(&g, 4).unwrap().len(), 2);
        assert!(matches!(build_aztec(&ex1(), 0), Err(NumericError::InvalidSize)));
    }

    #[test]
    fn face_count() {
        let g = build_aztec(&ex1(), 3).unwrap();
        assert_eq!(g.faces().len(), 16 + 9);
    }
}
