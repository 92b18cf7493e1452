//! Zero-temperature Gibbs measures on the lift of a maximizer graph.
//!
//! Determinants and cofactors of the Laurent Kasteleyn matrix are expanded
//! over perfect matchings, so no Laurent division is ever needed: the
//! determinant is a monomial `tau Z z^mu1 w^mu2` and inverse entries are
//! read off as single coefficients of the adjugate.

use crate::covers::{LiftComponent, MaximizerGraph};
use crate::error::{Error, Result};
use crate::lattice::{Slope, TorusGraph};
use crate::laurent::LaurentPoly;
use crate::linalg::determinant;
use crate::matching::{permutation_sign, Bipartite};
use crate::rational::{int, Rational};
use num_traits::Zero;
use std::collections::BTreeMap;

/// White-by-black matrix of Laurent polynomials.
pub type LaurentMatrix = Vec<Vec<LaurentPoly>>;

/// A vertex of the lift: quotient index and copy offset `(m, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LiftedVertex {
    pub index: usize,
    pub copy: (i64, i64),
}

/// A lifted edge, located by its torus edge id and the copy of its white endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LiftedEdge {
    pub edge: usize,
    pub copy: (i64, i64),
}

impl LiftedEdge {
    pub fn white(&self, graph: &TorusGraph) -> LiftedVertex {
        LiftedVertex { index: graph.edges[self.edge].white, copy: self.copy }
    }

    pub fn black(&self, graph: &TorusGraph) -> LiftedVertex {
        let e = &graph.edges[self.edge];
        let (dm, dn) = e.black_copy_shift();
        LiftedVertex { index: e.black, copy: (self.copy.0 + dm, self.copy.1 + dn) }
    }
}

fn edge_entry(graph: &TorusGraph, id: usize) -> LaurentPoly {
    let e = &graph.edges[id];
    LaurentPoly::monomial(int(e.sign as i64), -(e.cross_u as i64), e.cross_v as i64)
}

pub fn laurent_kasteleyn(graph: &TorusGraph, maxgraph: &MaximizerGraph) -> LaurentMatrix {
    let n = graph.vertex_count();
    let mut k = vec![vec![LaurentPoly::zero(); n]; n];
    for &id in &maxgraph.edges {
        let e = &graph.edges[id];
        k[e.white][e.black] = &k[e.white][e.black] + &edge_entry(graph, id);
    }
    k
}

/// Signed matching expansion of the determinant of the submatrix of `K`
/// on the given rows (whites) and columns (blacks).
fn matching_determinant(graph: &TorusGraph, edges: &[usize], whites: &[usize], blacks: &[usize]) -> LaurentPoly {
    let col: BTreeMap<usize, usize> = blacks.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let adjacency = whites
        .iter()
        .map(|&w| {
            edges
                .iter()
                .filter(|&&id| graph.edges[id].white == w)
                .filter_map(|&id| col.get(&graph.edges[id].black).map(|&c| (c, id)))
                .collect()
        })
        .collect();
    let mut det = LaurentPoly::zero();
    Bipartite::new(blacks.len(), adjacency).for_each_perfect_matching(|labels, partners| {
        let mut term = LaurentPoly::monomial(int(permutation_sign(partners) as i64), 0, 0);
        for &id in labels {
            term = &term * &edge_entry(graph, id);
        }
        det = &det + &term;
    });
    det
}

/// Determinant of the maximizer Kasteleyn matrix with its sign and weight.
pub fn char_poly_mu(graph: &TorusGraph, maxgraph: &MaximizerGraph) -> Result<(LaurentPoly, i8, u64)> {
    let all: Vec<usize> = (0..graph.vertex_count()).collect();
    let det = matching_determinant(graph, &maxgraph.edges, &all, &all);
    let (c, exp) = det.as_monomial().ok_or(Error::NotMonomial)?;
    if exp != maxgraph.mu || !c.is_integer() {
        return Err(Error::NotMonomial);
    }
    let tau = if c > Rational::zero() { 1 } else { -1 };
    let z: u64 = num_traits::ToPrimitive::to_u64(&(c.to_integer() * num_bigint::BigInt::from(tau))).ok_or(Error::NotMonomial)?;
    Ok((det, tau, z))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GibbsZeroMeasure {
    pub mu: Slope,
    pub tau: i8,
    pub partition: u64,
    /// `adjugate[b][w]` of the Laurent Kasteleyn matrix.
    pub adjugate: Vec<Vec<LaurentPoly>>,
    pub maxgraph: MaximizerGraph,
}

pub fn gibbs_measure(graph: &TorusGraph, maxgraph: &MaximizerGraph) -> Result<GibbsZeroMeasure> {
    let (_, tau, partition) = char_poly_mu(graph, maxgraph)?;
    let n = graph.vertex_count();
    let mut adjugate = vec![vec![LaurentPoly::zero(); n]; n];
    for w in 0..n {
        let whites: Vec<usize> = (0..n).filter(|&x| x != w).collect();
        for b in 0..n {
            let blacks: Vec<usize> = (0..n).filter(|&x| x != b).collect();
            let minor = matching_determinant(graph, &maxgraph.edges, &whites, &blacks);
            adjugate[b][w] = if (w + b) % 2 == 0 { minor } else { -&minor };
        }
    }
    Ok(GibbsZeroMeasure { mu: maxgraph.mu, tau, partition, adjugate, maxgraph: maxgraph.clone() })
}

impl GibbsZeroMeasure {
    /// Entry `(b, w)` of the inverse Kasteleyn matrix of the lift.
    pub fn inverse_coefficient(&self, black: LiftedVertex, white: LiftedVertex) -> Rational {
        let (mb, nb) = black.copy;
        let (mw, nw) = white.copy;
        let a = nb - nw + self.mu.0;
        let b = mw - mb + self.mu.1;
        self.adjugate[black.index][white.index].coefficient(a, b) / int(self.tau as i64 * self.partition as i64)
    }

    /// Probability that all given lifted edges are present.
    pub fn edge_probabilities(&self, graph: &TorusGraph, edges: &[LiftedEdge]) -> Result<Rational> {
        for e in edges {
            if !self.maxgraph.contains(e.edge) {
                return Err(Error::EdgeNotInMaximizerGraph(format!("edge {} at copy {:?}", e.edge, e.copy)));
            }
        }
        let m: Vec<Vec<Rational>> = edges
            .iter()
            .map(|es| {
                edges
                    .iter()
                    .map(|et| int(graph.edges[et.edge].sign as i64) * self.inverse_coefficient(es.black(graph), et.white(graph)))
                    .collect()
            })
            .collect();
        Ok(determinant(&m))
    }
}

/// Uniform measure over the perfect matchings of a finite lifted component,
/// returned as exact marginals for each component edge (white copy as in the component).
pub fn oracle_component_measure(graph: &TorusGraph, component: &LiftComponent) -> Result<Vec<(LiftedEdge, Rational)>> {
    if !component.bounded {
        return Err(Error::UnboundedComponent);
    }
    let white_copy: BTreeMap<usize, (i64, i64)> = component.whites.iter().copied().collect();
    let black_pos: BTreeMap<usize, usize> = component.blacks.iter().enumerate().map(|(i, &(b, _))| (b, i)).collect();
    let lifted: Vec<LiftedEdge> =
        component.edges.iter().map(|&id| LiftedEdge { edge: id, copy: white_copy[&graph.edges[id].white] }).collect();
    let adjacency = component
        .whites
        .iter()
        .map(|&(w, _)| {
            lifted
                .iter()
                .enumerate()
                .filter(|(_, le)| graph.edges[le.edge].white == w)
                .map(|(i, le)| (black_pos[&graph.edges[le.edge].black], i))
                .collect()
        })
        .collect();
    let mut hits = vec![0u64; lifted.len()];
    let mut total = 0u64;
    Bipartite::new(component.blacks.len(), adjacency).for_each_perfect_matching(|labels, _| {
        total += 1;
        for &i in labels {
            hits[i] += 1;
        }
    });
    if total == 0 {
        return Err(Error::NotAPerfectMatching("component has no perfect matching".into()));
    }
    Ok(lifted.into_iter().zip(hits).map(|(e, h)| (e, Rational::new(h.into(), total.into()))).collect())
}
