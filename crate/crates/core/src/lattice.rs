//! The weighted periodic square lattice, its torus quotient and the planar
//! embedding shared by heights and colorings.
//!
//! Vertices of the fundamental domain are indexed lexicographically in
//! `(i, j)`: index `i * k + j`. The edge leaving white vertex `w` with type
//! `t` has id `4 * w + t`, with types ordered West, South, East, North.

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};
use num_traits::Zero;
use serde_json::{Map, Value};
use std::collections::BTreeMap;
use std::fmt;

/// Slope of a dimer cover, an integer point of the Newton rectangle.
pub type Slope = (i64, i64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeType {
    West,
    South,
    East,
    North,
}

impl EdgeType {
    pub const ALL: [EdgeType; 4] = [EdgeType::West, EdgeType::South, EdgeType::East, EdgeType::North];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> &'static str {
        match self {
            EdgeType::West => "W",
            EdgeType::South => "S",
            EdgeType::East => "E",
            EdgeType::North => "N",
        }
    }

    pub fn parse(text: &str) -> Option<EdgeType> {
        match text.trim() {
            "W" | "West" | "west" => Some(EdgeType::West),
            "S" | "South" | "south" => Some(EdgeType::South),
            "E" | "East" | "east" => Some(EdgeType::East),
            "N" | "North" | "north" => Some(EdgeType::North),
            _ => None,
        }
    }

    /// Offset of the black endpoint `b_{x+dx, y+dy}` from the white vertex `w_{x,y}`.
    pub fn black_shift(self) -> (i64, i64) {
        match self {
            EdgeType::West => (0, 0),
            EdgeType::South => (0, 1),
            EdgeType::East => (1, 1),
            EdgeType::North => (1, 0),
        }
    }

    /// Kasteleyn sign: `-1` on North edges.
    pub fn sign(self) -> i8 {
        if self == EdgeType::North {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for EdgeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

/// Periods and exact log-weights of a doubly periodic weight function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalDomain {
    k: usize,
    ell: usize,
    logw: Vec<Rational>,
}

impl FundamentalDomain {
    /// Builds a domain from a weight callback `(i, j, type) -> log ν`.
    pub fn from_fn(k: usize, ell: usize, mut weight: impl FnMut(usize, usize, EdgeType) -> Rational) -> Result<Self> {
        if k == 0 || ell == 0 {
            return Err(Error::NonPositivePeriod { k: k as i64, ell: ell as i64 });
        }
        let mut logw = Vec::with_capacity(4 * k * ell);
        for i in 0..ell {
            for j in 0..k {
                for ty in EdgeType::ALL {
                    logw.push(weight(i, j, ty));
                }
            }
        }
        Ok(FundamentalDomain { k, ell, logw })
    }

    pub fn uniform(k: usize, ell: usize) -> Result<Self> {
        Self::from_fn(k, ell, |_, _, _| Rational::zero())
    }

    /// Builds a domain from a complete key map, rejecting missing and extra keys.
    pub fn from_map(k: usize, ell: usize, map: &BTreeMap<(usize, usize, EdgeType), Rational>) -> Result<Self> {
        if k == 0 || ell == 0 {
            return Err(Error::NonPositivePeriod { k: k as i64, ell: ell as i64 });
        }
        for &(i, j, ty) in map.keys() {
            if i >= ell || j >= k {
                return Err(Error::UnexpectedEdgeKey(format!("{i},{j},{ty}")));
            }
        }
        let mut missing = None;
        let domain = Self::from_fn(k, ell, |i, j, ty| match map.get(&(i, j, ty)) {
            Some(q) => q.clone(),
            None => {
                missing.get_or_insert(Error::MissingEdgeWeight { i, j, ty });
                Rational::zero()
            }
        })?;
        match missing {
            Some(err) => Err(err),
            None => Ok(domain),
        }
    }

    /// Parses the JSON config `{"k", "ell", "logw": {"i,j,TYPE": "p/q"}}`.
    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value.as_object().ok_or_else(|| Error::Config("config must be a JSON object".into()))?;
        let period = |name: &str| -> Result<i64> {
            obj.get(name)
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::Config(format!("missing integer field {name:?}")))
        };
        let (k, ell) = (period("k")?, period("ell")?);
        if k <= 0 || ell <= 0 {
            return Err(Error::NonPositivePeriod { k, ell });
        }
        let table = obj
            .get("logw")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Config("missing object field \"logw\"".into()))?;
        let mut map = BTreeMap::new();
        for (key, raw) in table {
            let parsed_key = parse_key(key).ok_or_else(|| Error::UnexpectedEdgeKey(key.clone()))?;
            let text = match raw {
                Value::String(s) => s.clone(),
                Value::Number(n) if n.is_i64() => n.to_string(),
                other => {
                    return Err(Error::MalformedRational { key: key.clone(), value: other.to_string() });
                }
            };
            let q = parse_rational(&text).ok_or_else(|| Error::MalformedRational { key: key.clone(), value: text })?;
            if map.insert(parsed_key, q).is_some() {
                return Err(Error::UnexpectedEdgeKey(format!("duplicate key {key}")));
            }
        }
        Self::from_map(k as usize, ell as usize, &map)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_json(&value)
    }

    pub fn to_json(&self) -> Value {
        let mut table = Map::new();
        for i in 0..self.ell {
            for j in 0..self.k {
                for ty in EdgeType::ALL {
                    table.insert(format!("{i},{j},{ty}"), Value::String(format_rational(self.logw(i, j, ty))));
                }
            }
        }
        let mut obj = Map::new();
        obj.insert("k".into(), Value::from(self.k));
        obj.insert("ell".into(), Value::from(self.ell));
        obj.insert("logw".into(), Value::Object(table));
        Value::Object(obj)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn logw(&self, i: usize, j: usize, ty: EdgeType) -> &Rational {
        &self.logw[(i * self.k + j) * 4 + ty.index()]
    }

    /// Log-weight of the edge of type `ty` at the lifted white vertex `w_{x,y}`.
    pub fn logw_lifted(&self, x: i64, y: i64, ty: EdgeType) -> &Rational {
        let i = x.rem_euclid(self.ell as i64) as usize;
        let j = y.rem_euclid(self.k as i64) as usize;
        self.logw(i, j, ty)
    }

    /// Largest absolute log-weight.
    pub fn max_abs_logw(&self) -> Rational {
        self.logw.iter().map(|q| if q < &Rational::zero() { -q } else { q.clone() }).max().unwrap_or_default()
    }
}

fn parse_key(key: &str) -> Option<(usize, usize, EdgeType)> {
    let mut parts = key.split(',');
    let i = parts.next()?.trim().parse().ok()?;
    let j = parts.next()?.trim().parse().ok()?;
    let ty = EdgeType::parse(parts.next()?)?;
    if parts.next().is_some() {
        return None;
    }
    Some((i, j, ty))
}

/// An edge of the torus graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusEdge {
    pub id: usize,
    pub i: usize,
    pub j: usize,
    pub ty: EdgeType,
    pub white: usize,
    pub black: usize,
    pub sign: i8,
    /// Crosses the horizontal loop (black endpoint wraps in `y`).
    pub cross_u: bool,
    /// Crosses the vertical loop (black endpoint wraps in `x`).
    pub cross_v: bool,
    pub logw: Rational,
}

impl TorusEdge {
    /// Copy offset `(dm, dn)` of the black endpoint relative to the white one in the lift.
    pub fn black_copy_shift(&self) -> (i64, i64) {
        (self.cross_v as i64, self.cross_u as i64)
    }

    /// Contribution of this edge to the slope of a cover.
    pub fn slope_contribution(&self) -> Slope {
        (-(self.cross_u as i64), self.cross_v as i64)
    }
}

/// The fundamental domain wrapped on the torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusGraph {
    pub k: usize,
    pub ell: usize,
    pub edges: Vec<TorusEdge>,
    black_edges: Vec<Vec<usize>>,
}

impl TorusGraph {
    pub fn vertex_count(&self) -> usize {
        self.k * self.ell
    }

    pub fn vertex_index(&self, i: usize, j: usize) -> usize {
        i * self.k + j
    }

    pub fn vertex_cell(&self, index: usize) -> (usize, usize) {
        (index / self.k, index % self.k)
    }

    pub fn edge_id(&self, white: usize, ty: EdgeType) -> usize {
        white * 4 + ty.index()
    }

    pub fn white_edges(&self, white: usize) -> std::ops::Range<usize> {
        white * 4..white * 4 + 4
    }

    pub fn black_edges(&self, black: usize) -> &[usize] {
        &self.black_edges[black]
    }
}

pub fn build_torus_graph(domain: &FundamentalDomain) -> TorusGraph {
    let (k, ell) = (domain.k(), domain.ell());
    let mut edges = Vec::with_capacity(4 * k * ell);
    let mut black_edges = vec![Vec::with_capacity(4); k * ell];
    for i in 0..ell {
        for j in 0..k {
            for ty in EdgeType::ALL {
                let (dx, dy) = ty.black_shift();
                let bx = i + dx as usize;
                let by = j + dy as usize;
                let black = (bx % ell) * k + by % k;
                let id = edges.len();
                black_edges[black].push(id);
                edges.push(TorusEdge {
                    id,
                    i,
                    j,
                    ty,
                    white: i * k + j,
                    black,
                    sign: ty.sign(),
                    cross_u: by == k,
                    cross_v: bx == ell,
                    logw: domain.logw(i, j, ty).clone(),
                });
            }
        }
    }
    TorusGraph { k, ell, edges, black_edges }
}

/// Slope and energy of a perfect matching given by its edge ids.
pub fn slope_and_energy(cover: &[usize], graph: &TorusGraph) -> Result<(Slope, Rational)> {
    let n = graph.vertex_count();
    if cover.len() != n {
        return Err(Error::NotAPerfectMatching(format!("{} edges for {} white vertices", cover.len(), n)));
    }
    let mut white_seen = vec![false; n];
    let mut black_seen = vec![false; n];
    let mut slope = (0i64, 0i64);
    let mut energy = Rational::zero();
    for &id in cover {
        let edge = graph
            .edges
            .get(id)
            .ok_or_else(|| Error::NotAPerfectMatching(format!("unknown edge id {id}")))?;
        if std::mem::replace(&mut white_seen[edge.white], true) {
            return Err(Error::NotAPerfectMatching(format!("white vertex {} covered twice", edge.white)));
        }
        if std::mem::replace(&mut black_seen[edge.black], true) {
            return Err(Error::NotAPerfectMatching(format!("black vertex {} covered twice", edge.black)));
        }
        let (du, dv) = edge.slope_contribution();
        slope.0 += du;
        slope.1 += dv;
        energy += &edge.logw;
    }
    Ok((slope, energy))
}

/// Planar embedding: `w_{x,y}` sits at `(2x+1, 2y+2)`.
pub fn white_point(x: i64, y: i64) -> (i64, i64) {
    (2 * x + 1, 2 * y + 2)
}

/// Planar embedding: `b_{x,y}` sits at `(2x, 2y+1)`.
pub fn black_point(x: i64, y: i64) -> (i64, i64) {
    (2 * x, 2 * y + 1)
}

/// Midpoints of the two faces separated by the edge of type `ty` at `w_{x,y}`.
///
/// Crossing from the first face to the second has the black endpoint on the
/// left and the white endpoint on the right.
pub fn edge_faces(ty: EdgeType, x: i64, y: i64) -> ((i64, i64), (i64, i64)) {
    let w = white_point(x, y);
    let (dx, dy) = ty.black_shift();
    let b = black_point(x + dx, y + dy);
    let d = (b.0 - w.0, b.1 - w.1);
    let p = (-d.1, d.0);
    let s = (w.0 + b.0, w.1 + b.1);
    (((s.0 + p.0) / 2, (s.1 + p.1) / 2), ((s.0 - p.0) / 2, (s.1 - p.1) / 2))
}

/// Index of the torus face containing the planar face midpoint `(a, b)`.
///
/// Faces sit at `(2X, 2Y)` and `(2X+1, 2Y+1)`; the parity comes first, then
/// `X mod ell`, then `Y mod k`.
pub fn torus_face_index(k: usize, ell: usize, face: (i64, i64)) -> usize {
    let parity = face.0.rem_euclid(2);
    let x = ((face.0 - parity) / 2).rem_euclid(ell as i64) as usize;
    let y = ((face.1 - parity) / 2).rem_euclid(k as i64) as usize;
    parity as usize * k * ell + x * k + y
}
