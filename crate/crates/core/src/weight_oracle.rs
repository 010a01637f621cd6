//! Brute-force census of `Σ_t W_{B_t}²` on a torus.
//!
//! Every translated (and for honeycomb/triangular, rotated) weighted box is laid
//! down explicitly; the coefficient of each `h_e` and of each anticommutator
//! `{h_e, h_e'}` is accumulated exactly and grouped by the geometric shape of
//! the edge pair.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::criteria::{KSet, LatticeKind};
use crate::profiles::CoefficientProfile;
use crate::scalars::{to_common_integers, QuadraticInt, QuadraticScalar, ScalarError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("torus side {l} is too small (need at least {min})")]
    TorusTooSmall { l: usize, min: usize },
    #[error("box size {ell} needs a torus side L > {}, got L = {l}", 2 * ell)]
    BoxWraps { ell: usize, l: usize },
    #[error("profile has ell = {profile}, box requested with ell = {ell}")]
    EllMismatch { ell: usize, profile: usize },
    #[error("census is for {census}, constants are for {kset}")]
    LatticeMismatch { census: String, kset: String },
    #[error("box edge appears twice on the torus")]
    OverlappingBox,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Edge orientation labels: hypercubic `e_j` is class `j`; honeycomb classes
/// are `S`, `V`, `D`; triangular classes are `a = (1,0)`, `b = (0,1)`, `c = (1,-1)`.
pub const HONEYCOMB_CLASSES: [&str; 3] = ["S", "V", "D"];
pub const TRIANGULAR_CLASSES: [&str; 3] = ["a", "b", "c"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub class: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TorusGraph {
    pub lattice: LatticeKind,
    #[serde(rename = "L")]
    pub l: usize,
    pub vertices: Vec<Vec<i64>>,
    pub edges: Vec<Edge>,
}

fn wrap(x: i64, l: usize) -> i64 {
    x.rem_euclid(l as i64)
}

/// Triangular generators indexed by class.
const TRI_GEN: [(i64, i64); 3] = [(1, 0), (0, 1), (1, -1)];

pub fn build_torus(lattice: LatticeKind, l: usize) -> Result<TorusGraph, OracleError> {
    if l < 2 {
        return Err(OracleError::TorusTooSmall { l, min: 2 });
    }
    let li = l as i64;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    match lattice {
        LatticeKind::Hypercubic { dim } => {
            let n = l.pow(dim as u32);
            for v in 0..n {
                let mut x = Vec::with_capacity(dim);
                let mut r = v;
                for _ in 0..dim {
                    x.push((r % l) as i64);
                    r /= l;
                }
                vertices.push(x);
            }
            for (v, x) in vertices.iter().enumerate() {
                for j in 0..dim {
                    let mut y = x.clone();
                    y[j] = wrap(y[j] + 1, l);
                    edges.push(Edge {
                        a: v,
                        b: hyper_index(&y, l),
                        class: j,
                    });
                }
            }
        }
        LatticeKind::Honeycomb => {
            for v in 0..li {
                for u in 0..li {
                    vertices.push(vec![u, v, 0]);
                    vertices.push(vec![u, v, 1]);
                }
            }
            for v in 0..li {
                for u in 0..li {
                    let a = 2 * (u + li * v) as usize;
                    let b_at = |u: i64, v: i64| 2 * (wrap(u, l) + li * wrap(v, l)) as usize + 1;
                    edges.push(Edge {
                        a,
                        b: b_at(u, v),
                        class: 0,
                    });
                    edges.push(Edge {
                        a,
                        b: b_at(u, v - 1),
                        class: 1,
                    });
                    edges.push(Edge {
                        a,
                        b: b_at(u - 1, v),
                        class: 2,
                    });
                }
            }
        }
        LatticeKind::Triangular => {
            for j in 0..li {
                for i in 0..li {
                    vertices.push(vec![i, j]);
                }
            }
            for j in 0..li {
                for i in 0..li {
                    let a = (i + li * j) as usize;
                    for (class, (di, dj)) in TRI_GEN.iter().enumerate() {
                        let b = (wrap(i + di, l) + li * wrap(j + dj, l)) as usize;
                        edges.push(Edge { a, b, class });
                    }
                }
            }
        }
    }
    Ok(TorusGraph {
        lattice,
        l,
        vertices,
        edges,
    })
}

fn hyper_index(x: &[i64], l: usize) -> usize {
    x.iter()
        .rev()
        .fold(0usize, |acc, &c| acc * l + wrap(c, l) as usize)
}

impl TorusGraph {
    pub fn dim(&self) -> usize {
        self.lattice.dim().unwrap_or(2)
    }

    /// Id of the edge of orientation `class` based at `base` (wrapped).
    pub fn edge_id(&self, base: &[i64], class: usize) -> usize {
        match self.lattice {
            LatticeKind::Hypercubic { dim } => hyper_index(base, self.l) * dim + class,
            _ => {
                let l = self.l as i64;
                3 * (wrap(base[0], self.l) + l * wrap(base[1], self.l)) as usize + class
            }
        }
    }

    /// Minimal-image difference of two coordinates.
    fn delta(&self, from: i64, to: i64) -> i64 {
        let l = self.l as i64;
        let d = wrap(to - from, self.l);
        if 2 * d > l {
            d - l
        } else {
            d
        }
    }

    /// Minimal-image displacement between two vertices (lattice coordinates only).
    pub fn displacement(&self, from: usize, to: usize) -> Vec<i64> {
        let n = match self.lattice {
            LatticeKind::Hypercubic { dim } => dim,
            _ => 2,
        };
        (0..n)
            .map(|k| self.delta(self.vertices[from][k], self.vertices[to][k]))
            .collect()
    }

    /// Plain graph view for spectral computations.
    pub fn to_graph(&self) -> SimpleGraph {
        SimpleGraph {
            n: self.vertices.len(),
            edges: self.edges.iter().map(|e| (e.a, e.b)).collect(),
        }
    }
}

/// Vertex count and undirected edge list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn open_chain(n: usize) -> Self {
        SimpleGraph {
            n,
            edges: (1..n).map(|i| (i - 1, i)).collect(),
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxInstance {
    pub translate: Vec<i64>,
    pub rotation: u8,
    /// `(edge id, weight)` sorted by edge id.
    pub weighted_edges: Vec<(usize, QuadraticScalar)>,
}

/// Box edges as `(base, class, weight)` before translation and rotation.
fn canonical_box(
    lattice: LatticeKind,
    p: &CoefficientProfile,
) -> Vec<(Vec<i64>, usize, QuadraticScalar)> {
    let ell = p.ell as i64;
    let (c, d) = (&p.c, &p.d);
    let mut out = Vec::new();
    match lattice {
        LatticeKind::Hypercubic { dim } => {
            for j in 0..dim {
                let mut x = vec![0i64; dim];
                loop {
                    let mut w = c[x[j] as usize].clone();
                    for (k, &xk) in x.iter().enumerate() {
                        if k != j {
                            w = &w * &d[xk as usize];
                        }
                    }
                    out.push((x.clone(), j, w));
                    // odometer over x_j < ℓ, x_k ≤ ℓ
                    let mut k = 0;
                    loop {
                        if k == dim {
                            break;
                        }
                        let top = if k == j { ell - 1 } else { ell };
                        if x[k] < top {
                            x[k] += 1;
                            break;
                        }
                        x[k] = 0;
                        k += 1;
                    }
                    if k == dim {
                        break;
                    }
                }
            }
        }
        LatticeKind::Honeycomb => {
            for v in -1..ell {
                for u in -1..ell {
                    let (du, dv) = (&d[(u + 1) as usize], &d[(v + 1) as usize]);
                    let corner = (u == -1 && v == -1) || (u == ell - 1 && v == ell - 1);
                    if !corner {
                        out.push((vec![u, v], 0, du * dv));
                    }
                    if v >= 0 {
                        out.push((vec![u, v], 1, du * &c[v as usize]));
                    }
                    if u >= 0 {
                        out.push((vec![u, v], 2, &c[u as usize] * dv));
                    }
                }
            }
        }
        LatticeKind::Triangular => {
            for j in 0..=ell {
                for i in 0..=ell {
                    if i < ell {
                        out.push((vec![i, j], 0, &c[i as usize] * &d[j as usize]));
                    }
                    if j < ell {
                        out.push((vec![i, j], 1, &d[i as usize] * &c[j as usize]));
                    }
                    if i < ell && j < ell {
                        out.push((vec![i, j + 1], 2, &c[i as usize] * &c[j as usize]));
                    }
                }
            }
        }
    }
    out
}

/// One 120° turn of an edge `(base, class)`.
fn rotate_edge(lattice: LatticeKind, base: &[i64], class: usize) -> (Vec<i64>, usize) {
    let (x, y) = (base[0], base[1]);
    match lattice {
        // cells (u,v) -> (v, -u-v); S -> V -> D -> S
        LatticeKind::Honeycomb => (vec![y, -x - y], (class + 1) % 3),
        // points (x,y) -> (-x-y, x); a -> -c, b -> -a, c -> b
        LatticeKind::Triangular => {
            let (rx, ry) = (-x - y, x);
            match class {
                0 => (vec![rx - 1, ry + 1], 2),
                1 => (vec![rx - 1, ry], 0),
                _ => (vec![rx, ry], 1),
            }
        }
        LatticeKind::Hypercubic { .. } => (base.to_vec(), class),
    }
}

pub fn enumerate_boxes(
    g: &TorusGraph,
    ell: usize,
    p: &CoefficientProfile,
) -> Result<Vec<BoxInstance>, OracleError> {
    if p.ell != ell {
        return Err(OracleError::EllMismatch {
            ell,
            profile: p.ell,
        });
    }
    if g.l <= 2 * ell {
        return Err(OracleError::BoxWraps { ell, l: g.l });
    }
    let canon = canonical_box(g.lattice, p);
    let rotations: Vec<Vec<(Vec<i64>, usize, QuadraticScalar)>> = match g.lattice {
        LatticeKind::Hypercubic { .. } => vec![canon],
        lat => {
            let mut rs = vec![canon];
            for r in 1..3 {
                let next = rs[r - 1]
                    .iter()
                    .map(|(b, cl, w)| {
                        let (nb, nc) = rotate_edge(lat, b, *cl);
                        (nb, nc, w.clone())
                    })
                    .collect();
                rs.push(next);
            }
            rs
        }
    };
    let translates: Vec<Vec<i64>> = match g.lattice {
        LatticeKind::Hypercubic { .. } => g.vertices.clone(),
        _ => (0..g.l as i64)
            .flat_map(|v| (0..g.l as i64).map(move |u| vec![u, v]))
            .collect(),
    };
    let mut boxes = Vec::with_capacity(translates.len() * rotations.len());
    for (r, shape) in rotations.iter().enumerate() {
        for t in &translates {
            let mut weighted_edges: Vec<(usize, QuadraticScalar)> = shape
                .iter()
                .map(|(b, cl, w)| {
                    let base: Vec<i64> = b.iter().zip(t).map(|(x, y)| x + y).collect();
                    (g.edge_id(&base, *cl), w.clone())
                })
                .collect();
            weighted_edges.sort_by_key(|(e, _)| *e);
            if weighted_edges.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(OracleError::OverlappingBox);
            }
            boxes.push(BoxInstance {
                translate: t.clone(),
                rotation: r as u8,
                weighted_edges,
            });
        }
    }
    Ok(boxes)
}

/// Endpoint sublattice of a honeycomb vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sublattice {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeClass {
    CollinearTouching,
    ParallelAdjacent,
    OrthogonalTouching,
    TriangleApex,
    WideAngle,
    /// Two honeycomb edges meeting at a vertex; classes sorted.
    HoneycombAdjacent {
        at: Sublattice,
        classes: (usize, usize),
    },
    Other,
}

impl ShapeClass {
    pub fn label(&self) -> String {
        match self {
            ShapeClass::CollinearTouching => "collinear_touching".into(),
            ShapeClass::ParallelAdjacent => "parallel_adjacent".into(),
            ShapeClass::OrthogonalTouching => "orthogonal_touching".into(),
            ShapeClass::TriangleApex => "triangle_apex".into(),
            ShapeClass::WideAngle => "wide_angle".into(),
            ShapeClass::HoneycombAdjacent { at, classes } => format!(
                "adjacent_{:?}_{}{}",
                at, HONEYCOMB_CLASSES[classes.0], HONEYCOMB_CLASSES[classes.1]
            ),
            ShapeClass::Other => "other".into(),
        }
    }

    pub fn is_adjacent(&self) -> bool {
        !matches!(self, ShapeClass::Other)
    }

    /// Constant that this shape's coefficient should equal.
    pub fn k_name(&self, lattice: LatticeKind) -> Option<&'static str> {
        match (lattice, self) {
            (LatticeKind::Hypercubic { .. }, ShapeClass::CollinearTouching) => Some("K_collinear"),
            (LatticeKind::Hypercubic { .. }, ShapeClass::ParallelAdjacent) => Some("K_parallel"),
            (LatticeKind::Hypercubic { .. }, ShapeClass::OrthogonalTouching) => Some("K3"),
            (LatticeKind::Triangular, ShapeClass::CollinearTouching) => Some("K1"),
            (LatticeKind::Triangular, ShapeClass::TriangleApex) => Some("K2"),
            (LatticeKind::Triangular, ShapeClass::WideAngle) => Some("K3"),
            (LatticeKind::Honeycomb, ShapeClass::HoneycombAdjacent { .. }) => Some("K1"),
            _ => None,
        }
    }
}

fn shared_vertex(e1: &Edge, e2: &Edge) -> Option<(usize, usize, usize)> {
    if e1.a == e2.a {
        Some((e1.a, e1.b, e2.b))
    } else if e1.a == e2.b {
        Some((e1.a, e1.b, e2.a))
    } else if e1.b == e2.a {
        Some((e1.b, e1.a, e2.b))
    } else if e1.b == e2.b {
        Some((e1.b, e1.a, e2.a))
    } else {
        None
    }
}

/// Geometric shape of an edge pair, from minimal-image displacements.
pub fn classify_pair(e1: usize, e2: usize, g: &TorusGraph) -> ShapeClass {
    let (x, y) = (&g.edges[e1], &g.edges[e2]);
    match g.lattice {
        LatticeKind::Hypercubic { .. } => {
            if shared_vertex(x, y).is_some() {
                if x.class == y.class {
                    ShapeClass::CollinearTouching
                } else {
                    ShapeClass::OrthogonalTouching
                }
            } else if x.class == y.class {
                let d = g.displacement(x.a, y.a);
                let nonzero: Vec<usize> = (0..d.len()).filter(|&k| d[k] != 0).collect();
                if nonzero.len() == 1 && nonzero[0] != x.class && d[nonzero[0]].abs() == 1 {
                    ShapeClass::ParallelAdjacent
                } else {
                    ShapeClass::Other
                }
            } else {
                ShapeClass::Other
            }
        }
        LatticeKind::Honeycomb => match shared_vertex(x, y) {
            Some((s, _, _)) => {
                let at = if s % 2 == 0 {
                    Sublattice::A
                } else {
                    Sublattice::B
                };
                let classes = (x.class.min(y.class), x.class.max(y.class));
                ShapeClass::HoneycombAdjacent { at, classes }
            }
            None => ShapeClass::Other,
        },
        LatticeKind::Triangular => match shared_vertex(x, y) {
            Some((s, p, q)) => {
                let u = g.displacement(s, p);
                let v = g.displacement(s, q);
                let sum = (u[0] + v[0], u[1] + v[1]);
                let unit = |(a, b): (i64, i64)| {
                    TRI_GEN
                        .iter()
                        .any(|&(gi, gj)| (a, b) == (gi, gj) || (a, b) == (-gi, -gj))
                };
                if sum == (0, 0) {
                    ShapeClass::CollinearTouching
                } else if unit(sum) {
                    ShapeClass::WideAngle
                } else {
                    ShapeClass::TriangleApex
                }
            }
            None => ShapeClass::Other,
        },
    }
}

/// Exact coefficients of `Σ_boxes W²` and `Σ_boxes W`.
///
/// Integer-valued maps are scaled: diagonal and pair entries by `den²`, linear
/// entries and class sums by `den`, where `den` is the common denominator of
/// all box weights.
#[derive(Debug, Clone)]
pub struct Census {
    pub lattice: LatticeKind,
    pub l: usize,
    pub boxes: usize,
    den: BigInt,
    k: u32,
    diag: Vec<QuadraticInt>,
    linear: Vec<QuadraticInt>,
    pairs: HashMap<(u32, u32), QuadraticInt>,
    pub shape_max: BTreeMap<ShapeClass, QuadraticScalar>,
    /// Smallest per-orientation average weight over all boxes.
    pub min_class_average: QuadraticScalar,
}

type Accum = (
    Vec<QuadraticInt>,
    Vec<QuadraticInt>,
    HashMap<(u32, u32), QuadraticInt>,
);

fn merge_into(
    dst: &mut HashMap<(u32, u32), QuadraticInt>,
    src: HashMap<(u32, u32), QuadraticInt>,
) -> Result<(), ScalarError> {
    for (key, v) in src {
        let slot = dst.entry(key).or_insert(QuadraticInt::zero(v.k));
        *slot = slot.checked_add(v)?;
    }
    Ok(())
}

pub fn census(g: &TorusGraph, boxes: &[BoxInstance]) -> Result<Census, OracleError> {
    let all: Vec<QuadraticScalar> = boxes
        .iter()
        .flat_map(|b| b.weighted_edges.iter().map(|(_, w)| w.clone()))
        .collect();
    let (ints, den, k) = to_common_integers(&all)?;
    let m = g.edges.len();
    let mut offsets = Vec::with_capacity(boxes.len() + 1);
    offsets.push(0);
    for b in boxes {
        offsets.push(offsets.last().unwrap() + b.weighted_edges.len());
    }
    let zero = QuadraticInt::zero(k);

    let (diag, linear, pairs) = (0..boxes.len())
        .into_par_iter()
        .try_fold(
            || -> Accum { (vec![zero; m], vec![zero; m], HashMap::new()) },
            |mut acc, bi| -> Result<Accum, ScalarError> {
                let es = &boxes[bi].weighted_edges;
                let ws = &ints[offsets[bi]..offsets[bi + 1]];
                for (i, (e, _)) in es.iter().enumerate() {
                    acc.0[*e] = acc.0[*e].checked_add(ws[i].checked_mul(ws[i])?)?;
                    acc.1[*e] = acc.1[*e].checked_add(ws[i])?;
                    for j in i + 1..es.len() {
                        let key = (*e as u32, es[j].0 as u32);
                        let slot = acc.2.entry(key).or_insert(zero);
                        *slot = slot.checked_add(ws[i].checked_mul(ws[j])?)?;
                    }
                }
                Ok(acc)
            },
        )
        .try_reduce(
            || (vec![zero; m], vec![zero; m], HashMap::new()),
            |mut a, b| {
                for i in 0..m {
                    a.0[i] = a.0[i].checked_add(b.0[i])?;
                    a.1[i] = a.1[i].checked_add(b.1[i])?;
                }
                if a.2.len() < b.2.len() {
                    let small = std::mem::replace(&mut a.2, b.2);
                    merge_into(&mut a.2, small)?;
                } else {
                    merge_into(&mut a.2, b.2)?;
                }
                Ok(a)
            },
        )?;

    let den2 = &den * &den;
    let mut best: BTreeMap<ShapeClass, QuadraticInt> = BTreeMap::new();
    let mut keys: Vec<&(u32, u32)> = pairs.keys().collect();
    keys.sort_unstable();
    for key in keys {
        let v = pairs[key];
        let shape = classify_pair(key.0 as usize, key.1 as usize, g);
        match best.get(&shape) {
            Some(cur) if cur.cmp_exact(v)? != std::cmp::Ordering::Less => {}
            _ => {
                best.insert(shape, v);
            }
        }
    }
    let shape_max = best
        .into_iter()
        .map(|(s, v)| (s, v.to_scalar(&den2)))
        .collect();

    let classes = match g.lattice {
        LatticeKind::Hypercubic { dim } => dim,
        _ => 3,
    };
    let mut min_avg: Option<QuadraticScalar> = None;
    for (bi, b) in boxes.iter().enumerate() {
        let ws = &ints[offsets[bi]..offsets[bi + 1]];
        let mut sums = vec![zero; classes];
        let mut counts = vec![0i64; classes];
        for (i, (e, _)) in b.weighted_edges.iter().enumerate() {
            let cl = g.edges[*e].class;
            sums[cl] = sums[cl].checked_add(ws[i])?;
            counts[cl] += 1;
        }
        for cl in 0..classes {
            if counts[cl] == 0 {
                continue;
            }
            let avg = sums[cl].to_scalar(&(&den * BigInt::from(counts[cl])));
            if min_avg.as_ref().is_none_or(|m| avg < *m) {
                min_avg = Some(avg);
            }
        }
    }

    Ok(Census {
        lattice: g.lattice,
        l: g.l,
        boxes: boxes.len(),
        den,
        k,
        diag,
        linear,
        pairs,
        shape_max,
        min_class_average: min_avg.unwrap_or_else(QuadraticScalar::zero),
    })
}

impl Census {
    pub fn diagonal(&self, e: usize) -> QuadraticScalar {
        self.diag[e].to_scalar(&(&self.den * &self.den))
    }

    /// Coefficient of `h_e` in `Σ_boxes W`.
    pub fn linear(&self, e: usize) -> QuadraticScalar {
        self.linear[e].to_scalar(&self.den)
    }

    pub fn pair_weight(&self, e1: usize, e2: usize) -> QuadraticScalar {
        let key = (e1.min(e2) as u32, e1.max(e2) as u32);
        match self.pairs.get(&key) {
            Some(v) => v.to_scalar(&(&self.den * &self.den)),
            None => QuadraticScalar::zero(),
        }
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// All stored pairs `(e1, e2, weight)` with `e1 < e2`, sorted.
    pub fn pairs(&self) -> Vec<(usize, usize, QuadraticScalar)> {
        let den2 = &self.den * &self.den;
        let mut out: Vec<_> = self
            .pairs
            .iter()
            .map(|(&(a, b), v)| (a as usize, b as usize, v.to_scalar(&den2)))
            .collect();
        out.sort_by_key(|(a, b, _)| (*a, *b));
        out
    }

    pub fn edges(&self) -> usize {
        self.diag.len()
    }

    /// The common value of `f(e)` over all edges, if edge-independent.
    fn uniform(&self, xs: &[QuadraticInt]) -> Option<QuadraticInt> {
        let first = *xs.first()?;
        xs.iter().all(|x| *x == first).then_some(first)
    }

    pub fn diagonal_uniform(&self) -> Option<QuadraticScalar> {
        self.uniform(&self.diag)
            .map(|v| v.to_scalar(&(&self.den * &self.den)))
    }

    pub fn linear_uniform(&self) -> Option<QuadraticScalar> {
        self.uniform(&self.linear).map(|v| v.to_scalar(&self.den))
    }

    /// Diagonal coefficient shared by every edge of orientation `class`, if uniform.
    pub fn class_diagonal(&self, g: &TorusGraph, class: usize) -> Option<QuadraticScalar> {
        let xs: Vec<QuadraticInt> = (0..self.diag.len())
            .filter(|&e| g.edges[e].class == class)
            .map(|e| self.diag[e])
            .collect();
        self.uniform(&xs)
            .map(|v| v.to_scalar(&(&self.den * &self.den)))
    }

    /// Largest pair weight among non-adjacent pairs.
    pub fn residual_max(&self) -> Option<QuadraticScalar> {
        self.shape_max.get(&ShapeClass::Other).cloned()
    }

    /// Largest pair weight among adjacent shapes.
    pub fn adjacent_max(&self) -> Option<QuadraticScalar> {
        QuadraticScalar::max_of(
            self.shape_max
                .iter()
                .filter(|(s, _)| s.is_adjacent())
                .map(|(_, v)| v),
        )
    }

    pub fn radicand(&self) -> u32 {
        self.k
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub name: String,
    pub census: Option<QuadraticScalar>,
    pub formula: QuadraticScalar,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub lattice: LatticeKind,
    pub ell: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub rows: Vec<ComparisonRow>,
    pub dominating: String,
    pub residual_max: Option<QuadraticScalar>,
    pub residual_ok: bool,
    pub all_equal: bool,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.all_equal && self.residual_ok
    }

    pub fn row(&self, name: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.name == name)
    }
}

pub fn census_vs_kset(c: &Census, k: &KSet) -> Result<ComparisonReport, OracleError> {
    if c.lattice != k.lattice {
        return Err(OracleError::LatticeMismatch {
            census: c.lattice.to_string(),
            kset: k.lattice.to_string(),
        });
    }
    let shape = |s: ShapeClass| c.shape_max.get(&s).cloned();
    let scaled = |x: &QuadraticScalar| c.linear_uniform().map(|lin| x * lin);
    let avg = c.min_class_average.clone();
    let census_vals: Vec<(&str, Option<QuadraticScalar>)> = match k.lattice {
        LatticeKind::Hypercubic { .. } => vec![
            ("K0", c.diagonal_uniform()),
            ("K_collinear", shape(ShapeClass::CollinearTouching)),
            ("K_parallel", shape(ShapeClass::ParallelAdjacent)),
            ("K3", shape(ShapeClass::OrthogonalTouching)),
            ("K4", scaled(&avg)),
        ],
        LatticeKind::Honeycomb => vec![
            ("K0", c.diagonal_uniform()),
            ("K1", c.adjacent_max()),
            ("K2", Some(avg.clone())),
            ("K3", scaled(&avg)),
        ],
        LatticeKind::Triangular => vec![
            ("K0", c.diagonal_uniform()),
            ("K1", shape(ShapeClass::CollinearTouching)),
            ("K2", shape(ShapeClass::TriangleApex)),
            ("K3", shape(ShapeClass::WideAngle)),
            ("K4", Some(avg.clone())),
            ("K5", scaled(&avg)),
        ],
    };
    let rows: Vec<ComparisonRow> = census_vals
        .into_iter()
        .map(|(name, cv)| {
            let formula = k.get(name).expect("named constant").clone();
            let equal = cv.as_ref() == Some(&formula);
            ComparisonRow {
                name: name.to_string(),
                census: cv,
                formula,
                equal,
            }
        })
        .collect();
    let (dom_name, dom) = k.dominating();
    let residual_max = c.residual_max();
    let residual_ok = residual_max.as_ref().is_none_or(|r| r <= dom);
    Ok(ComparisonReport {
        lattice: k.lattice,
        ell: k.ell,
        l: c.l,
        all_equal: rows.iter().all(|r| r.equal),
        rows,
        dominating: dom_name.to_string(),
        residual_max,
        residual_ok,
    })
}

/// Census JSON export: shape maxima and diagonal summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub lattice: LatticeKind,
    #[serde(rename = "L")]
    pub l: usize,
    pub ell: usize,
    pub boxes: usize,
    pub edges: usize,
    pub pairs: usize,
    pub diagonal: Option<QuadraticScalar>,
    pub linear: Option<QuadraticScalar>,
    pub min_class_average: QuadraticScalar,
    pub shape_max: Vec<ShapeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_dump: Option<Vec<PairEntry>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeEntry {
    pub shape: String,
    pub k: Option<String>,
    pub value: QuadraticScalar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairEntry {
    pub e1: usize,
    pub e2: usize,
    pub shape: String,
    pub weight: QuadraticScalar,
}

impl CensusSummary {
    pub fn new(c: &Census, g: &TorusGraph, ell: usize, with_pairs: bool) -> Self {
        CensusSummary {
            lattice: c.lattice,
            l: c.l,
            ell,
            boxes: c.boxes,
            edges: c.edges(),
            pairs: c.pair_count(),
            diagonal: c.diagonal_uniform(),
            linear: c.linear_uniform(),
            min_class_average: c.min_class_average.clone(),
            shape_max: c
                .shape_max
                .iter()
                .map(|(s, v)| ShapeEntry {
                    shape: s.label(),
                    k: s.k_name(c.lattice).map(str::to_string),
                    value: v.clone(),
                })
                .collect(),
            pair_dump: with_pairs.then(|| {
                c.pairs()
                    .into_iter()
                    .map(|(e1, e2, weight)| PairEntry {
                        e1,
                        e2,
                        shape: classify_pair(e1, e2, g).label(),
                        weight,
                    })
                    .collect()
            }),
        }
    }
}

/// Torus at the default side `2ℓ+1`, all boxes, census, and comparison.
pub fn run_census(
    lattice: LatticeKind,
    p: &CoefficientProfile,
    l: Option<usize>,
) -> Result<(TorusGraph, Census), OracleError> {
    let g = build_torus(lattice, l.unwrap_or(2 * p.ell + 1))?;
    let boxes = enumerate_boxes(&g, p.ell, p)?;
    let c = census(&g, &boxes)?;
    Ok((g, c))
}

/// Open box graph: the edges of the unrotated box at the origin, vertices relabeled.
pub fn open_box_graph(lattice: LatticeKind, ell: usize) -> Result<SimpleGraph, OracleError> {
    let p = CoefficientProfile::uniform(ell)
        .map_err(|_| OracleError::TorusTooSmall { l: ell, min: 1 })?;
    let g = build_torus(lattice, 2 * ell + 2)?;
    let canon = canonical_box(lattice, &p);
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let mut edges = Vec::with_capacity(canon.len());
    for (b, cl, _) in &canon {
        let e = g.edges[g.edge_id(b, *cl)];
        let mut id = |v: usize| {
            let n = ids.len();
            *ids.entry(v).or_insert(n)
        };
        let (a, bb) = (id(e.a), id(e.b));
        edges.push((a, bb));
    }
    Ok(SimpleGraph {
        n: ids.len(),
        edges,
    })
}
