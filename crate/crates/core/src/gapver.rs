//! Exact diagonalization of the spin-½ ferromagnetic Heisenberg model with
//! singlet-projector edge terms, one-magnon gaps, and criterion checks.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::criteria::{LatticeKind, ThresholdReport};
use crate::weight_oracle::{build_torus, open_box_graph, OracleError, SimpleGraph};

/// 2^20 basis states.
pub const MAX_SITES: usize = 20;
/// Eigenvalues below this are ground states.
pub const ZERO_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted as a gap.
pub const GAP_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GapError {
    #[error("{n} sites exceed the exact-diagonalization cap of {MAX_SITES}")]
    TooLarge { n: usize },
    #[error("edge ({0}, {1}) is out of range or a self-loop")]
    BadEdge(usize, usize),
    #[error(
        "eigenvalue {value:e} in block with {up} up spins lies between the zero and gap thresholds"
    )]
    IllSeparated { up: usize, value: f64 },
    #[error("no nonzero eigenvalue found")]
    NoGap,
    #[error(
        "iterative solver did not converge in block with {up} up spins (residual {residual:e})"
    )]
    NotConverged { up: usize, residual: f64 },
    #[error(
        "iterative block with {up} up spins has extra zero modes; the graph may be disconnected"
    )]
    ExtraZeroModes { up: usize },
    #[error("non-finite input to criterion check")]
    NonFinite,
    #[error("threshold report is not feasible")]
    Infeasible,
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interaction {
    HeisenbergFmSingletProjector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinSystem {
    pub graph: SimpleGraph,
    pub local_dim: usize,
    pub interaction: Interaction,
}

impl SpinSystem {
    pub fn heisenberg(graph: SimpleGraph) -> Result<Self, GapError> {
        if graph.n > MAX_SITES {
            return Err(GapError::TooLarge { n: graph.n });
        }
        for &(a, b) in &graph.edges {
            if a == b || a >= graph.n || b >= graph.n {
                return Err(GapError::BadEdge(a, b));
            }
        }
        Ok(SpinSystem {
            graph,
            local_dim: 2,
            interaction: Interaction::HeisenbergFmSingletProjector,
        })
    }

    pub fn sites(&self) -> usize {
        self.graph.n
    }
}

/// One fixed-magnetization block in CSR form.
#[derive(Debug, Clone)]
pub struct SparseBlock {
    pub up: usize,
    pub states: Vec<u32>,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

impl SparseBlock {
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.vals[p] * x[self.cols[p] as usize];
            }
            *yi = s;
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                m[(i, self.cols[p] as usize)] += self.vals[p];
            }
        }
        m
    }
}

/// `Σ_e (1 - SWAP_e)/2` restricted to the states with `up` spins up.
pub fn build_block(sys: &SpinSystem, up: usize) -> SparseBlock {
    let n = sys.sites();
    let states: Vec<u32> = (0u32..(1u32 << n))
        .filter(|s| s.count_ones() as usize == up)
        .collect();
    let mut row_ptr = Vec::with_capacity(states.len() + 1);
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    row_ptr.push(0);
    for (i, &s) in states.iter().enumerate() {
        let mut diag = 0.0;
        let mut off: Vec<(u32, f64)> = Vec::new();
        for &(a, b) in &sys.graph.edges {
            if ((s >> a) ^ (s >> b)) & 1 == 1 {
                diag += 0.5;
                let t = s ^ (1 << a) ^ (1 << b);
                let j = states
                    .binary_search(&t)
                    .expect("swap preserves magnetization");
                off.push((j as u32, -0.5));
            }
        }
        off.push((i as u32, diag));
        off.sort_by_key(|(j, _)| *j);
        // merge repeated columns from parallel edges
        for (j, v) in off {
            if cols.len() > row_ptr[i] && *cols.last().unwrap() == j {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(j);
                vals.push(v);
            }
        }
        row_ptr.push(cols.len());
    }
    SparseBlock {
        up,
        states,
        row_ptr,
        cols,
        vals,
    }
}

/// All magnetization blocks, `0..=n` up spins.
pub fn build_hamiltonian(sys: &SpinSystem) -> Vec<SparseBlock> {
    (0..=sys.sites())
        .into_par_iter()
        .map(|up| build_block(sys, up))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapMethod {
    Dense,
    Iterative,
    OneMagnon,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSummary {
    pub up_spins: usize,
    pub dim: usize,
    pub method: GapMethod,
    pub zero_modes: usize,
    pub ground_energy: f64,
    pub lowest_nonzero: Option<f64>,
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lowest: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub gamma: f64,
    pub method: GapMethod,
    pub dimension: u64,
    pub residual: f64,
    pub ground_degeneracy: usize,
    pub ground_energy: f64,
    pub blocks: Vec<BlockSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdOptions {
    /// Largest block handled by dense diagonalization.
    pub dense_max: usize,
    /// Residual tolerance for iterative eigenpairs.
    pub tol: f64,
    /// Krylov dimension per restart cycle.
    pub max_iter: usize,
    /// Keep the lowest eigenvalues of each block in the report.
    pub dump: usize,
}

impl Default for EdOptions {
    fn default() -> Self {
        EdOptions {
            dense_max: 4096,
            tol: 1e-9,
            max_iter: 300,
            dump: 0,
        }
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn project_out(basis: &[Vec<f64>], w: &mut [f64]) {
    for v in basis {
        let c = dot(v, w);
        axpy(-c, v, w);
    }
}

/// Deterministic start vector.
fn start_vector(n: usize) -> Vec<f64> {
    let mut s: u64 = 0x9E37_79B9_7F4A_7C15;
    (0..n)
        .map(|_| {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect()
}

struct Ritz {
    value: f64,
    residual: f64,
    converged: bool,
    vector: Vec<f64>,
}

const MAX_RESTARTS: usize = 30;

/// Lowest eigenpair on the orthogonal complement of `deflate`, by Lanczos with full reorthogonalization.
fn lanczos_cycle<F: Fn(&[f64], &mut [f64])>(
    op: &F,
    start: Vec<f64>,
    deflate: &[Vec<f64>],
    tol: f64,
    max_iter: usize,
) -> Option<Ritz> {
    let n = start.len();
    let room = n.saturating_sub(deflate.len());
    if room == 0 {
        return None;
    }
    let mut v = start;
    project_out(deflate, &mut v);
    project_out(deflate, &mut v);
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut basis: Vec<Vec<f64>> = vec![v];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let steps = max_iter.min(room);
    let mut last: Option<(f64, DVector<f64>)> = None;
    for j in 0..steps {
        op(&basis[j], &mut w);
        let a = dot(&basis[j], &w);
        alpha.push(a);
        for _ in 0..2 {
            project_out(deflate, &mut w);
            project_out(&basis, &mut w);
        }
        let b = norm(&w);
        let m = alpha.len();
        let check = j + 1 == steps || b < 1e-13 || m.is_multiple_of(8);
        if check {
            let mut t = DMatrix::<f64>::zeros(m, m);
            for i in 0..m {
                t[(i, i)] = alpha[i];
                if i + 1 < m {
                    t[(i, i + 1)] = beta[i];
                    t[(i + 1, i)] = beta[i];
                }
            }
            let eig = t.symmetric_eigen();
            let (k, &theta) = eig
                .eigenvalues
                .iter()
                .enumerate()
                .min_by(|x, y| x.1.total_cmp(y.1))
                .unwrap();
            let y = eig.eigenvectors.column(k).into_owned();
            let est = (b * y[m - 1]).abs();
            last = Some((theta, y));
            if est < tol || b < 1e-13 || j + 1 == steps {
                break;
            }
        }
        beta.push(b);
        let next: Vec<f64> = w.iter().map(|x| x / b).collect();
        basis.push(next);
    }
    let (theta, y) = last?;
    let mut x = vec![0.0; n];
    for (i, yi) in y.iter().enumerate() {
        axpy(*yi, &basis[i], &mut x);
    }
    let nx = norm(&x);
    x.iter_mut().for_each(|v| *v /= nx);
    op(&x, &mut w);
    axpy(-theta, &x, &mut w);
    let residual = norm(&w);
    Some(Ritz {
        value: theta,
        residual,
        converged: residual < tol,
        vector: x,
    })
}

/// Explicitly restarted Lanczos: each cycle starts from the previous Ritz vector.
fn lanczos_lowest<F: Fn(&[f64], &mut [f64])>(
    op: F,
    n: usize,
    deflate: &[Vec<f64>],
    tol: f64,
    max_iter: usize,
) -> Option<Ritz> {
    let mut r = lanczos_cycle(&op, start_vector(n), deflate, tol, max_iter)?;
    for _ in 0..MAX_RESTARTS {
        if r.converged {
            break;
        }
        let next = lanczos_cycle(&op, r.vector.clone(), deflate, tol, max_iter)?;
        if next.residual >= r.residual && next.value >= r.value {
            break;
        }
        r = next;
    }
    Some(r)
}

fn dense_block(blk: &SparseBlock, dump: usize) -> Result<BlockSummary, GapError> {
    let h = blk.to_dense();
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..blk.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut zero_modes = 0;
    let mut gap: Option<(f64, usize)> = None;
    for &i in &order {
        let e = eig.eigenvalues[i];
        if e.abs() < ZERO_TOL {
            zero_modes += 1;
        } else if e < GAP_TOL {
            return Err(GapError::IllSeparated {
                up: blk.up,
                value: e,
            });
        } else {
            gap = Some((e, i));
            break;
        }
    }
    let residual = match gap {
        Some((e, i)) => {
            let v = eig.eigenvectors.column(i);
            (&h * v - v * e).norm()
        }
        None => 0.0,
    };
    Ok(BlockSummary {
        up_spins: blk.up,
        dim: blk.dim(),
        method: GapMethod::Dense,
        zero_modes,
        ground_energy: eig.eigenvalues[order[0]],
        lowest_nonzero: gap.map(|g| g.0),
        residual,
        lowest: order
            .iter()
            .take(dump)
            .map(|&i| eig.eigenvalues[i])
            .collect(),
    })
}

fn iterative_block(blk: &SparseBlock, opts: &EdOptions) -> Result<BlockSummary, GapError> {
    let n = blk.dim();
    // the fully symmetric state spans the ground space of a connected FM block
    let g = vec![1.0 / (n as f64).sqrt(); n];
    let mut hg = vec![0.0; n];
    blk.matvec(&g, &mut hg);
    let ground_res = norm(&hg);
    let ground_energy = dot(&g, &hg);
    let r = lanczos_lowest(|x, y| blk.matvec(x, y), n, &[g], opts.tol, opts.max_iter)
        .ok_or(GapError::NoGap)?;
    if r.value.abs() < ZERO_TOL {
        return Err(GapError::ExtraZeroModes { up: blk.up });
    }
    if r.value < GAP_TOL {
        return Err(GapError::IllSeparated {
            up: blk.up,
            value: r.value,
        });
    }
    if !r.converged || ground_res > opts.tol {
        return Err(GapError::NotConverged {
            up: blk.up,
            residual: r.residual.max(ground_res),
        });
    }
    Ok(BlockSummary {
        up_spins: blk.up,
        dim: n,
        method: GapMethod::Iterative,
        zero_modes: 1,
        ground_energy,
        lowest_nonzero: Some(r.value),
        residual: r.residual,
        lowest: if opts.dump > 0 {
            vec![0.0, r.value]
        } else {
            vec![]
        },
    })
}

pub fn spectral_gap(sys: &SpinSystem) -> Result<GapReport, GapError> {
    spectral_gap_with(sys, &EdOptions::default())
}

/// Gap from every magnetization block.
pub fn spectral_gap_with(sys: &SpinSystem, opts: &EdOptions) -> Result<GapReport, GapError> {
    let n = sys.sites();
    let blocks: Vec<BlockSummary> = (0..=n)
        .into_par_iter()
        .map(|up| {
            let blk = build_block(sys, up);
            if blk.dim() <= opts.dense_max {
                dense_block(&blk, opts.dump)
            } else {
                iterative_block(&blk, opts)
            }
        })
        .collect::<Result<_, _>>()?;
    let best = blocks
        .iter()
        .filter_map(|b| b.lowest_nonzero.map(|g| (g, b)))
        .min_by(|x, y| x.0.total_cmp(&y.0))
        .ok_or(GapError::NoGap)?;
    Ok(GapReport {
        gamma: best.0,
        method: best.1.method,
        dimension: 1u64 << n,
        residual: best.1.residual,
        ground_degeneracy: blocks.iter().map(|b| b.zero_modes).sum(),
        ground_energy: blocks
            .iter()
            .map(|b| b.ground_energy)
            .fold(f64::INFINITY, f64::min),
        blocks,
    })
}

/// Boundary condition for lattice graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

/// Graph Laplacian in CSR form.
struct Laplacian {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl Laplacian {
    fn new(g: &SimpleGraph) -> Self {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); g.n];
        for &(a, b) in &g.edges {
            rows[a].push((a, 1.0));
            rows[b].push((b, 1.0));
            rows[a].push((b, -1.0));
            rows[b].push((a, -1.0));
        }
        let mut row_ptr = vec![0];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for mut r in rows {
            r.sort_by_key(|x| x.0);
            for (c, v) in r {
                if cols.len() > *row_ptr.last().unwrap() && *cols.last().unwrap() == c {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Laplacian {
            row_ptr,
            cols,
            vals,
        }
    }

    fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.vals[p] * x[self.cols[p]];
            }
            *yi = s;
        }
    }
}

/// Number of eigenvalues of the tridiagonal `(alpha, beta)` below `x` (Sturm count).
fn sturm_count(alpha: &[f64], beta: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..alpha.len() {
        let b2 = if i == 0 {
            0.0
        } else {
            beta[i - 1] * beta[i - 1]
        };
        q = alpha[i] - x - if i == 0 { 0.0 } else { b2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (alpha[i].abs() + x.abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Smallest eigenvalue of a symmetric tridiagonal matrix by bisection.
fn tridiagonal_min(alpha: &[f64], beta: &[f64]) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..alpha.len() {
        let r = if i > 0 { beta[i - 1].abs() } else { 0.0 }
            + if i < beta.len() { beta[i].abs() } else { 0.0 };
        lo = lo.min(alpha[i] - r);
        hi = hi.max(alpha[i] + r);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(alpha, beta, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Last component of the normalized eigenvector of the tridiagonal for eigenvalue `theta`.
fn tridiagonal_last_component(alpha: &[f64], beta: &[f64], theta: f64) -> f64 {
    // three-term recurrence from the top, normalized at the end
    let m = alpha.len();
    let mut y = vec![0.0; m];
    y[0] = 1.0;
    for i in 0..m - 1 {
        let prev = if i > 0 { beta[i - 1] * y[i - 1] } else { 0.0 };
        y[i + 1] = ((theta - alpha[i]) * y[i] - prev) / beta[i];
        let s = y[i + 1].abs().max(y[i].abs());
        if s > 1e100 {
            y.iter_mut().for_each(|v| *v /= s);
        }
    }
    let nrm = norm(&y);
    y[m - 1] / nrm
}

const MAGNON_RESIDUAL_TOL: f64 = 1e-9;

/// Smallest nonzero eigenvalue of the Laplacian of a connected graph.
fn laplacian_gap(g: &SimpleGraph) -> Result<f64, GapError> {
    let n = g.n;
    if n < 2 {
        return Err(GapError::NoGap);
    }
    if n <= 1500 {
        let mut m = DMatrix::<f64>::zeros(n, n);
        for &(a, b) in &g.edges {
            m[(a, a)] += 1.0;
            m[(b, b)] += 1.0;
            m[(a, b)] -= 1.0;
            m[(b, a)] -= 1.0;
        }
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        return ev
            .into_iter()
            .find(|&e| e >= GAP_TOL)
            .ok_or(GapError::NoGap);
    }
    let lap = Laplacian::new(g);
    let ones = vec![1.0 / (n as f64).sqrt(); n];
    // plain Lanczos with the constant vector projected out; ghosts only duplicate Ritz values
    let mut v = start_vector(n);
    project_out(std::slice::from_ref(&ones), &mut v);
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut v_prev = vec![0.0; n];
    let mut w = vec![0.0; n];
    let (mut alpha, mut beta) = (Vec::new(), Vec::<f64>::new());
    let max_iter = 40_000.min(n);
    let mut theta = f64::NAN;
    let mut prev = f64::INFINITY;
    for j in 0..max_iter {
        lap.matvec(&v, &mut w);
        let a = dot(&v, &w);
        alpha.push(a);
        axpy(-a, &v, &mut w);
        if j > 0 {
            axpy(-beta[j - 1], &v_prev, &mut w);
        }
        project_out(std::slice::from_ref(&ones), &mut w);
        let b = norm(&w);
        if (j + 1) % 50 == 0 || b < 1e-12 {
            theta = tridiagonal_min(&alpha, &beta);
            let est = (b * tridiagonal_last_component(&alpha, &beta, theta)).abs();
            // the Ritz value error is of order est² over the distance to the next eigenvalue
            if est < MAGNON_RESIDUAL_TOL || (prev - theta).abs() <= 1e-13 * theta || b < 1e-12 {
                break;
            }
            prev = theta;
        }
        beta.push(b);
        std::mem::swap(&mut v_prev, &mut v);
        v = w.iter().map(|x| x / b).collect();
    }
    if !theta.is_finite() {
        theta = tridiagonal_min(&alpha, &beta[..alpha.len() - 1]);
    }
    if theta < GAP_TOL {
        return Err(GapError::IllSeparated {
            up: 1,
            value: theta,
        });
    }
    Ok(theta)
}

/// Half the smallest nonzero Laplacian eigenvalue: the single-flip sector of the model.
pub fn one_magnon_gap_graph(g: &SimpleGraph) -> Result<f64, GapError> {
    Ok(0.5 * laplacian_gap(g)?)
}

/// One-magnon gap of a torus of side `l` or an open box of side `l`.
pub fn one_magnon_gap(lattice: LatticeKind, l: usize, bc: Boundary) -> Result<f64, GapError> {
    let g = match bc {
        Boundary::Periodic => build_torus(lattice, l)?.to_graph(),
        Boundary::Open => open_box_graph(lattice, l)?,
    };
    one_magnon_gap_graph(&g)
}

pub fn one_magnon_report(g: &SimpleGraph) -> Result<GapReport, GapError> {
    let gamma = one_magnon_gap_graph(g)?;
    Ok(GapReport {
        gamma,
        method: GapMethod::OneMagnon,
        dimension: g.n as u64,
        residual: 0.0,
        ground_degeneracy: 1,
        ground_energy: 0.0,
        blocks: Vec::new(),
    })
}

/// Full ED when the graph fits under the cap, one-magnon otherwise.
pub fn graph_gap(g: &SimpleGraph, opts: &EdOptions) -> Result<GapReport, GapError> {
    if g.n <= MAX_SITES {
        spectral_gap_with(&SpinSystem::heisenberg(g.clone())?, opts)
    } else {
        one_magnon_report(g)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineResult {
    pub lattice: LatticeKind,
    #[serde(rename = "L")]
    pub l: usize,
    pub ell: usize,
    pub torus: GapReport,
    pub open_box: GapReport,
    pub verdict: CriterionVerdict,
}

/// Gap of the torus of side `l`, gap of the open box of side `ell`, and the criterion check.
pub fn verify_pipeline(
    lattice: LatticeKind,
    l: usize,
    ell: usize,
    report: &ThresholdReport,
    opts: &EdOptions,
) -> Result<PipelineResult, GapError> {
    let torus_graph = build_torus(lattice, l)?.to_graph();
    let box_graph = open_box_graph(lattice, ell)?;
    let (torus, open_box) = rayon::join(
        || graph_gap(&torus_graph, opts),
        || graph_gap(&box_graph, opts),
    );
    let (torus, open_box) = (torus?, open_box?);
    let verdict = check_criterion(torus.gamma, open_box.gamma, report)?;
    Ok(PipelineResult {
        lattice,
        l,
        ell,
        torus,
        open_box,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub holds: bool,
    pub margin: f64,
    pub certifying: bool,
    pub gamma_l: f64,
    pub gamma_ell: f64,
    pub t_ell: f64,
    pub prefactor: f64,
}

/// `γ_L ≥ prefactor·(γ_ℓ − t_ℓ)`.
pub fn check_criterion(
    gamma_l: f64,
    gamma_ell: f64,
    report: &ThresholdReport,
) -> Result<CriterionVerdict, GapError> {
    check_criterion_raw(
        gamma_l,
        gamma_ell,
        report.t_float,
        report.prefactor_float,
        report.feasible,
    )
}

pub fn check_criterion_raw(
    gamma_l: f64,
    gamma_ell: f64,
    t_ell: f64,
    prefactor: f64,
    feasible: bool,
) -> Result<CriterionVerdict, GapError> {
    if ![gamma_l, gamma_ell, t_ell, prefactor]
        .iter()
        .all(|x| x.is_finite())
    {
        return Err(GapError::NonFinite);
    }
    if !feasible {
        return Err(GapError::Infeasible);
    }
    let margin = gamma_l - prefactor * (gamma_ell - t_ell);
    Ok(CriterionVerdict {
        holds: margin >= 0.0,
        margin,
        certifying: gamma_ell > t_ell,
        gamma_l,
        gamma_ell,
        t_ell,
        prefactor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn chain(n: usize) -> SpinSystem {
        SpinSystem::heisenberg(SimpleGraph::open_chain(n)).unwrap()
    }

    #[test]
    fn two_site_spectrum() {
        let blocks = build_hamiltonian(&chain(2));
        let mut ev: Vec<f64> = blocks
            .iter()
            .flat_map(|b| {
                b.to_dense()
                    .symmetric_eigenvalues()
                    .iter()
                    .copied()
                    .collect::<Vec<_>>()
            })
            .collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        let expect = [0.0, 0.0, 0.0, 1.0];
        assert!(ev.iter().zip(expect).all(|(a, b)| (a - b).abs() < 1e-12));
    }

    #[test]
    fn block_dims() {
        let dims: Vec<usize> = build_hamiltonian(&chain(3))
            .iter()
            .map(|b| b.dim())
            .collect();
        assert_eq!(dims, vec![1, 3, 3, 1]);
    }

    #[test]
    fn chain_gaps() {
        for n in 2..=6 {
            let r = spectral_gap(&chain(n)).unwrap();
            assert!((r.gamma - (1.0 - (PI / n as f64).cos())).abs() < 1e-10);
            assert_eq!(r.ground_degeneracy, n + 1);
        }
    }

    #[test]
    fn iterative_matches_dense() {
        let sys = chain(8);
        let dense = spectral_gap(&sys).unwrap();
        let opts = EdOptions {
            dense_max: 8,
            ..EdOptions::default()
        };
        let it = spectral_gap_with(&sys, &opts).unwrap();
        assert!((dense.gamma - it.gamma).abs() < 1e-10);
        assert!(it.blocks.iter().any(|b| b.method == GapMethod::Iterative));
    }

    #[test]
    fn too_large_rejected() {
        assert!(matches!(
            SpinSystem::heisenberg(SimpleGraph::open_chain(21)),
            Err(GapError::TooLarge { .. })
        ));
    }

    #[test]
    fn magnon_half_laplacian() {
        let g = one_magnon_gap_graph(&SimpleGraph::open_chain(3)).unwrap();
        assert!((g - 0.5).abs() < 1e-12);
        let sq = one_magnon_gap(LatticeKind::Hypercubic { dim: 2 }, 6, Boundary::Periodic).unwrap();
        assert!((sq - 0.5).abs() < 1e-12);
    }

    #[test]
    fn lanczos_magnon_matches_dense() {
        // 45x45 torus has 2025 sites, above the dense cutoff
        let l = 45;
        let g = one_magnon_gap(LatticeKind::Hypercubic { dim: 2 }, l, Boundary::Periodic).unwrap();
        assert!(
            (g - (1.0 - (2.0 * PI / l as f64).cos())).abs() < 1e-9,
            "{g}"
        );
    }

    #[test]
    fn criterion_arithmetic() {
        let v = check_criterion_raw(0.2, 0.5, 0.667, 25.0 / 36.0, true).unwrap();
        assert!(v.holds && !v.certifying);
        assert!((v.margin - 0.315_972).abs() < 1e-3);
        let eq = check_criterion_raw(1e-6, 0.4, 0.4, 2.0, true).unwrap();
        assert!(eq.holds && eq.margin > 0.0);
        assert!(check_criterion_raw(f64::NAN, 0.4, 0.4, 2.0, true).is_err());
        assert!(check_criterion_raw(0.1, 0.4, 0.4, 2.0, false).is_err());
    }

    #[test]
    fn open_grid_counts() {
        let g = open_box_graph(LatticeKind::Hypercubic { dim: 2 }, 2).unwrap();
        assert_eq!((g.n, g.edges.len()), (9, 12));
        let blocks = build_hamiltonian(&SpinSystem::heisenberg(g).unwrap());
        assert_eq!(blocks.iter().map(|b| b.dim()).sum::<usize>(), 512);
    }
}
