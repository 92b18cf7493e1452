//! Torus dimer covers, the tropical surface tension table, maximizer graphs
//! and the edge coloring of multiwebs.

use crate::error::{Error, Result};
use crate::lattice::{edge_faces, slope_and_energy, torus_face_index, Slope, TorusGraph};
use crate::matching::Bipartite;
use crate::newton::Subdivision;
use crate::rational::{format_rational, Rational};
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Default bound on `k * ell` for exhaustive enumeration.
pub const DEFAULT_MAX_CELLS: usize = 16;

/// A perfect matching of the torus graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimerCover {
    /// Edge id used at each white vertex.
    pub edges: Vec<usize>,
    pub slope: Slope,
    pub energy: Rational,
}

impl DimerCover {
    pub fn new(edges: Vec<usize>, graph: &TorusGraph) -> Result<Self> {
        let (slope, energy) = slope_and_energy(&edges, graph)?;
        let mut by_white = vec![usize::MAX; graph.vertex_count()];
        for &id in &edges {
            by_white[graph.edges[id].white] = id;
        }
        Ok(DimerCover { edges: by_white, slope, energy })
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.edges.contains(&edge)
    }
}

fn torus_bipartite(graph: &TorusGraph, allowed: impl Fn(usize) -> bool) -> Bipartite {
    let adjacency = (0..graph.vertex_count())
        .map(|w| {
            graph
                .white_edges(w)
                .filter(|&id| allowed(id))
                .map(|id| (graph.edges[id].black, id))
                .collect()
        })
        .collect();
    Bipartite::new(graph.vertex_count(), adjacency)
}

/// Every perfect matching of the torus graph, white vertices in index order
/// and edge types in the order W, S, E, N.
pub fn enumerate_covers(graph: &TorusGraph) -> Result<Vec<DimerCover>> {
    enumerate_covers_with_limit(graph, DEFAULT_MAX_CELLS)
}

pub fn enumerate_covers_with_limit(graph: &TorusGraph, max_cells: usize) -> Result<Vec<DimerCover>> {
    let cells = graph.vertex_count();
    if cells > max_cells {
        return Err(Error::SizeGuardExceeded { what: "k*ell", value: cells, limit: max_cells });
    }
    let mut out = Vec::new();
    let mut failure = None;
    torus_bipartite(graph, |_| true).for_each_perfect_matching(|labels, _| {
        if failure.is_some() {
            return;
        }
        match DimerCover::new(labels.to_vec(), graph) {
            Ok(cover) => out.push(cover),
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensionEntry {
    pub estar: Rational,
    pub maximizers: Vec<DimerCover>,
    pub count_covers: usize,
}

/// Exact tropical surface tension over the Newton rectangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceTensionTable {
    pub k: usize,
    pub ell: usize,
    pub entries: BTreeMap<Slope, TensionEntry>,
}

impl SurfaceTensionTable {
    pub fn from_covers(k: usize, ell: usize, covers: &[DimerCover]) -> Result<Self> {
        let mut entries: BTreeMap<Slope, TensionEntry> = BTreeMap::new();
        for cover in covers {
            let (m1, m2) = cover.slope;
            if m1 < -(ell as i64) || m1 > 0 || m2 < 0 || m2 > k as i64 {
                return Err(Error::SlopeOutsideRectangle(m1, m2));
            }
            match entries.get_mut(&cover.slope) {
                None => {
                    entries.insert(
                        cover.slope,
                        TensionEntry { estar: cover.energy.clone(), maximizers: vec![cover.clone()], count_covers: 1 },
                    );
                }
                Some(entry) => {
                    entry.count_covers += 1;
                    if cover.energy > entry.estar {
                        entry.estar = cover.energy.clone();
                        entry.maximizers = vec![cover.clone()];
                    } else if cover.energy == entry.estar {
                        entry.maximizers.push(cover.clone());
                    }
                }
            }
        }
        for m1 in -(ell as i64)..=0 {
            for m2 in 0..=k as i64 {
                if !entries.contains_key(&(m1, m2)) {
                    return Err(Error::UnreachedSlope(m1, m2));
                }
            }
        }
        Ok(SurfaceTensionTable { k, ell, entries })
    }

    pub fn estar(&self, mu: Slope) -> Option<&Rational> {
        self.entries.get(&mu).map(|e| &e.estar)
    }

    pub fn maximizers(&self, mu: Slope) -> &[DimerCover] {
        self.entries.get(&mu).map(|e| e.maximizers.as_slice()).unwrap_or(&[])
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|(mu, e)| {
                    json!({
                        "mu": [mu.0, mu.1],
                        "estar": format_rational(&e.estar),
                        "n_max": e.maximizers.len(),
                        "n_covers": e.count_covers,
                    })
                })
                .collect(),
        )
    }
}

pub fn surface_tension_table(graph: &TorusGraph) -> Result<SurfaceTensionTable> {
    let covers = enumerate_covers(graph)?;
    SurfaceTensionTable::from_covers(graph.k, graph.ell, &covers)
}

/// A connected component of the periodic lift of a maximizer graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftComponent {
    /// Quotient white vertices with their copy offsets `(m, n)` in one lifted representative.
    pub whites: Vec<(usize, (i64, i64))>,
    pub blacks: Vec<(usize, (i64, i64))>,
    /// Torus edge ids of the component.
    pub edges: Vec<usize>,
    pub bounded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximizerGraph {
    pub mu: Slope,
    /// Sorted torus edge ids in the union of the maximizers.
    pub edges: Vec<usize>,
    pub components: Vec<LiftComponent>,
}

impl MaximizerGraph {
    pub fn contains(&self, edge: usize) -> bool {
        self.edges.binary_search(&edge).is_ok()
    }

    pub fn all_bounded(&self) -> bool {
        self.components.iter().all(|c| c.bounded)
    }
}

pub fn maximizer_graph(table: &SurfaceTensionTable, graph: &TorusGraph, mu: Slope) -> MaximizerGraph {
    let edges: BTreeSet<usize> = table.maximizers(mu).iter().flat_map(|c| c.edges.iter().copied()).collect();
    let edges: Vec<usize> = edges.into_iter().collect();
    let components = lift_components(graph, &edges);
    MaximizerGraph { mu, edges, components }
}

/// Breadth-first search on the quotient tracking copy offsets; a component is
/// unbounded exactly when some vertex is reached with two different offsets.
pub fn lift_components(graph: &TorusGraph, edges: &[usize]) -> Vec<LiftComponent> {
    let n = graph.vertex_count();
    // Vertices 0..n are white, n..2n black.
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
    for &id in edges {
        let e = &graph.edges[id];
        incident[e.white].push(id);
        incident[n + e.black].push(id);
    }
    let mut offset: Vec<Option<(i64, i64)>> = vec![None; 2 * n];
    let mut components = Vec::new();
    for root in 0..2 * n {
        if offset[root].is_some() || incident[root].is_empty() {
            continue;
        }
        offset[root] = Some((0, 0));
        let mut queue = VecDeque::from([root]);
        let mut members = vec![root];
        let mut comp_edges = BTreeSet::new();
        let mut bounded = true;
        while let Some(v) = queue.pop_front() {
            let here = offset[v].expect("visited");
            for &id in &incident[v] {
                comp_edges.insert(id);
                let e = &graph.edges[id];
                let (dm, dn) = e.black_copy_shift();
                let (other, there) = if v < n {
                    (n + e.black, (here.0 + dm, here.1 + dn))
                } else {
                    (e.white, (here.0 - dm, here.1 - dn))
                };
                match offset[other] {
                    None => {
                        offset[other] = Some(there);
                        members.push(other);
                        queue.push_back(other);
                    }
                    Some(seen) if seen != there => bounded = false,
                    Some(_) => {}
                }
            }
        }
        members.sort_unstable();
        let whites = members.iter().filter(|&&v| v < n).map(|&v| (v, offset[v].unwrap())).collect();
        let blacks = members.iter().filter(|&&v| v >= n).map(|&v| (v - n, offset[v].unwrap())).collect();
        components.push(LiftComponent { whites, blacks, edges: comp_edges.into_iter().collect(), bounded });
    }
    components
}

/// True iff `mu` is a vertex of the regular subdivision.
pub fn is_strictly_concave(sub: &Subdivision, mu: Slope) -> bool {
    sub.is_vertex(mu)
}

/// Splits the multiset union of `d` covers whose slopes sum to `d * mu` into
/// `d` covers of slope exactly `mu`.
///
/// A height function with values in `Z/dZ` is built on the torus faces by
/// adding the edge multiplicity on every black-left crossing; an edge of
/// multiplicity `m` crossed from face `f` receives colors `h(f)+1 ..= h(f)+m`.
pub fn color_multiweb(covers: &[DimerCover], graph: &TorusGraph) -> Result<Vec<DimerCover>> {
    let d = covers.len();
    if d == 0 {
        return Ok(Vec::new());
    }
    let total = covers.iter().fold((0i64, 0i64), |acc, c| (acc.0 + c.slope.0, acc.1 + c.slope.1));
    if total.0 % d as i64 != 0 || total.1 % d as i64 != 0 {
        return Err(Error::SlopeSumMismatch(total.0, total.1, d));
    }
    let mu = (total.0 / d as i64, total.1 / d as i64);
    let mut mult = vec![0usize; graph.edges.len()];
    for cover in covers {
        for &id in &cover.edges {
            mult[id] += 1;
        }
    }
    let (k, ell) = (graph.k, graph.ell);
    let faces = 2 * k * ell;
    let mut steps: Vec<Vec<(usize, usize)>> = vec![Vec::new(); faces];
    let mut crossing = Vec::with_capacity(graph.edges.len());
    for e in &graph.edges {
        let (from, to) = edge_faces(e.ty, e.i as i64, e.j as i64);
        let (from, to) = (torus_face_index(k, ell, from), torus_face_index(k, ell, to));
        let m = mult[e.id] % d;
        steps[from].push((to, m));
        steps[to].push((from, (d - m) % d));
        crossing.push(from);
    }
    let mut height: Vec<Option<usize>> = vec![None; faces];
    height[0] = Some(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        let h = height[f].unwrap();
        for &(g, m) in &steps[f] {
            let value = (h + m) % d;
            match height[g] {
                None => {
                    height[g] = Some(value);
                    queue.push_back(g);
                }
                Some(existing) if existing != value => {
                    return Err(Error::HeightInconsistency(format!(
                        "face {g} reached with heights {existing} and {value} mod {d}"
                    )));
                }
                Some(_) => {}
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); d];
    for e in &graph.edges {
        let base = height[crossing[e.id]]
            .ok_or_else(|| Error::HeightInconsistency("disconnected face graph".into()))?;
        for c in 1..=mult[e.id] {
            classes[(base + c) % d].push(e.id);
        }
    }
    let mut out = Vec::with_capacity(d);
    for class in classes {
        let cover = DimerCover::new(class, graph)?;
        if cover.slope != mu {
            return Err(Error::HeightInconsistency(format!(
                "color class has slope {:?} instead of {:?}",
                cover.slope, mu
            )));
        }
        out.push(cover);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_torus_graph, EdgeType, FundamentalDomain};
    use crate::rational::int;

    fn ex1_graph() -> TorusGraph {
        build_torus_graph(
            &FundamentalDomain::from_fn(1, 1, |_, _, ty| int((ty == EdgeType::South) as i64)).unwrap(),
        )
    }

    #[test]
    fn ex1_table() {
        let g = ex1_graph();
        let covers = enumerate_covers(&g).unwrap();
        assert_eq!(covers.len(), 4);
        let table = SurfaceTensionTable::from_covers(1, 1, &covers).unwrap();
        let expected = [((0, 0), 0), ((-1, 0), 1), ((-1, 1), 0), ((0, 1), 0)];
        for (mu, e) in expected {
            assert_eq!(table.estar(mu), Some(&int(e)));
            assert_eq!(table.maximizers(mu).len(), 1);
        }
        assert_eq!(table.maximizers((-1, 0))[0].edges, vec![g.edge_id(0, EdgeType::South)]);
    }

    #[test]
    fn ex1_maximizer_graph_is_bounded() {
        let g = ex1_graph();
        let table = surface_tension_table(&g).unwrap();
        let mg = maximizer_graph(&table, &g, (-1, 0));
        assert_eq!(mg.edges, vec![1]);
        assert!(mg.all_bounded());
    }

    #[test]
    fn uniform_torus_is_one_unbounded_component() {
        let g = build_torus_graph(&FundamentalDomain::uniform(1, 1).unwrap());
        let all: Vec<usize> = (0..4).collect();
        let comps = lift_components(&g, &all);
        assert_eq!(comps.len(), 1);
        assert!(!comps[0].bounded);
    }

    #[test]
    fn coloring_rejects_indivisible_sums() {
        let g = ex1_graph();
        let covers = enumerate_covers(&g).unwrap();
        let s = covers.iter().find(|c| c.slope == (-1, 0)).unwrap().clone();
        let n = covers.iter().find(|c| c.slope == (0, 1)).unwrap().clone();
        assert_eq!(color_multiweb(&[s, n], &g), Err(Error::SlopeSumMismatch(-1, 1, 2)));
    }

    #[test]
    fn coloring_single_cover_is_identity() {
        let g = build_torus_graph(&FundamentalDomain::uniform(2, 2).unwrap());
        for cover in enumerate_covers(&g).unwrap() {
            let out = color_multiweb(std::slice::from_ref(&cover), &g).unwrap();
            assert_eq!(out, vec![cover]);
        }
    }
}
