//! One-parameter search over λ minimizing `t_ℓ` under validity and feasibility,
//! plus table assembly and large-ℓ probes.

use std::cmp::Ordering;
use std::io::{Read, Write};
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::criteria::{
    default_lambda, kset_unchecked, threshold_of, CriteriaError, LatticeKind, ProfileSums,
    ThresholdReport,
};
use crate::profiles::{CoefficientProfile, ProfileError};
use crate::scalars::QuadraticScalar;

#[derive(Debug, Error)]
pub enum TuneError {
    #[error("invalid tuning configuration: {0}")]
    Config(String),
    #[error("no feasible lambda in [{lo}, {hi}] (scaled by ell) for {lattice} at ell={ell}")]
    NoFeasibleLambda {
        lattice: LatticeKind,
        ell: usize,
        lo: f64,
        hi: f64,
    },
    #[error("profile at ell={ell} is invalid or infeasible for {lattice}")]
    DefaultInfeasible { lattice: LatticeKind, ell: usize },
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TuneMode {
    LambdaOnly,
    PaperDefault,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneConfig {
    pub lattice: LatticeKind,
    pub ell: usize,
    /// Search interval for `λ·ℓ`.
    pub lambda_bracket: (f64, f64),
    pub grid_points: usize,
    pub refine_iters: usize,
    pub mode: TuneMode,
}

impl TuneConfig {
    pub fn new(lattice: LatticeKind, ell: usize) -> Self {
        TuneConfig {
            lattice,
            ell,
            lambda_bracket: (-6.0, 6.0),
            grid_points: 241,
            refine_iters: 60,
            mode: TuneMode::LambdaOnly,
        }
    }

    pub fn check(&self) -> Result<(), TuneError> {
        let (lo, hi) = self.lambda_bracket;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(TuneError::Config(format!(
                "bracket ({lo}, {hi}) is not ordered"
            )));
        }
        if self.grid_points < 16 {
            return Err(TuneError::Config(format!(
                "grid_points = {} is below 16",
                self.grid_points
            )));
        }
        if self.ell < 2 {
            return Err(TuneError::Config(format!("ell = {} is below 2", self.ell)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneOutcome {
    pub mode: TuneMode,
    pub lambda_star: QuadraticScalar,
    pub lambda_star_float: f64,
    pub report: ThresholdReport,
    pub evaluations: usize,
}

/// Threshold at a given λ, or `None` when the profile is invalid or infeasible.
pub fn evaluate_lambda(
    lattice: LatticeKind,
    ell: usize,
    lambda: &QuadraticScalar,
) -> Result<Option<ThresholdReport>, TuneError> {
    let p = CoefficientProfile::quadratic(ell, lambda.clone())?;
    if !p.validate().is_valid() {
        return Ok(None);
    }
    let k = kset_unchecked(lattice, &ProfileSums::new(&p))?;
    if !k.feasible {
        return Ok(None);
    }
    Ok(Some(threshold_of(&k)?))
}

/// Probe points are `λ·ℓ` rounded to a multiple of `2^-40`, so every probe is an exact rational.
fn probe_lambda(x: f64, ell: usize) -> QuadraticScalar {
    let scale = 1i64 << 40;
    let n = (x * scale as f64).round() as i64;
    QuadraticScalar::rational(BigRational::new(
        BigInt::from(n),
        BigInt::from(scale) * BigInt::from(ell),
    ))
}

struct Search {
    lattice: LatticeKind,
    ell: usize,
    evaluations: usize,
    best: Option<(QuadraticScalar, ThresholdReport)>,
}

impl Search {
    /// Objective value for golden-section comparisons; infeasible is `+∞`.
    fn eval(&mut self, lambda: QuadraticScalar) -> Result<Option<QuadraticScalar>, TuneError> {
        self.evaluations += 1;
        let r = evaluate_lambda(self.lattice, self.ell, &lambda)?;
        Ok(r.map(|rep| {
            let t = rep.t_ell.clone();
            let better = match &self.best {
                None => true,
                Some((_, b)) => t.cmp_exact(&b.t_ell) == Ok(Ordering::Less),
            };
            if better {
                self.best = Some((lambda, rep));
            }
            t
        }))
    }
}

fn less(a: &Option<QuadraticScalar>, b: &Option<QuadraticScalar>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x.cmp_exact(y) == Ok(Ordering::Less),
        (Some(_), None) => true,
        _ => false,
    }
}

/// Grid scan over the bracket, golden-section refinement around the best grid
/// cell, and the fixed default λ as an extra candidate.
pub fn optimize_lambda(cfg: &TuneConfig) -> Result<TuneOutcome, TuneError> {
    cfg.check()?;
    let mut s = Search {
        lattice: cfg.lattice,
        ell: cfg.ell,
        evaluations: 0,
        best: None,
    };
    if cfg.mode == TuneMode::PaperDefault {
        s.eval(default_lambda(cfg.lattice, cfg.ell))?;
    } else {
        let (lo, hi) = cfg.lambda_bracket;
        let n = cfg.grid_points;
        let xs: Vec<f64> = (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect();
        let mut vals = Vec::with_capacity(n);
        for &x in &xs {
            vals.push(s.eval(probe_lambda(x, cfg.ell))?);
        }
        let mut bi = None;
        for i in 0..n {
            if vals[i].is_some() && (bi.is_none() || less(&vals[i], &vals[bi.unwrap()])) {
                bi = Some(i);
            }
        }
        if let Some(i) = bi {
            let (mut a, mut b) = (xs[i.saturating_sub(1)], xs[(i + 1).min(n - 1)]);
            let g = (5f64.sqrt() - 1.0) / 2.0;
            let mut x1 = b - g * (b - a);
            let mut x2 = a + g * (b - a);
            let mut f1 = s.eval(probe_lambda(x1, cfg.ell))?;
            let mut f2 = s.eval(probe_lambda(x2, cfg.ell))?;
            for _ in 0..cfg.refine_iters {
                let keep_left = match (&f1, &f2) {
                    (None, None) => xs[i] <= x1,
                    _ => !less(&f2, &f1),
                };
                if keep_left {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - g * (b - a);
                    f1 = s.eval(probe_lambda(x1, cfg.ell))?;
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + g * (b - a);
                    f2 = s.eval(probe_lambda(x2, cfg.ell))?;
                }
            }
        }
        s.eval(default_lambda(cfg.lattice, cfg.ell))?;
    }
    let evaluations = s.evaluations;
    match s.best {
        Some((lambda_star, report)) => Ok(TuneOutcome {
            mode: cfg.mode,
            lambda_star_float: lambda_star.to_f64(),
            lambda_star,
            report,
            evaluations,
        }),
        None if cfg.mode == TuneMode::PaperDefault => Err(TuneError::DefaultInfeasible {
            lattice: cfg.lattice,
            ell: cfg.ell,
        }),
        None => Err(TuneError::NoFeasibleLambda {
            lattice: cfg.lattice,
            ell: cfg.ell,
            lo: cfg.lambda_bracket.0,
            hi: cfg.lambda_bracket.1,
        }),
    }
}

/// Threshold at the fixed default λ for the lattice.
pub fn paper_default_threshold(
    lattice: LatticeKind,
    ell: usize,
) -> Result<ThresholdReport, TuneError> {
    evaluate_lambda(lattice, ell, &default_lambda(lattice, ell))?
        .ok_or(TuneError::DefaultInfeasible { lattice, ell })
}

/// Threshold at the default λ without the feasibility filter (validity still required).
pub fn default_threshold_unfiltered(
    lattice: LatticeKind,
    ell: usize,
) -> Result<ThresholdReport, TuneError> {
    let p = CoefficientProfile::quadratic(ell, default_lambda(lattice, ell))?;
    if !p.validate().is_valid() {
        return Err(TuneError::DefaultInfeasible { lattice, ell });
    }
    Ok(threshold_of(&kset_unchecked(
        lattice,
        &ProfileSums::new(&p),
    )?)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub lattice: String,
    #[serde(rename = "D")]
    pub dim: Option<usize>,
    pub ell: usize,
    pub t_ell: f64,
    pub ell_sq_t: f64,
    pub lambda_star: f64,
    pub feasible: bool,
}

impl TableRow {
    fn from_outcome(lattice: LatticeKind, ell: usize, out: Option<&TuneOutcome>) -> Self {
        match out {
            Some(o) => {
                let l2 = QuadraticScalar::from_integer((ell * ell) as i64);
                TableRow {
                    lattice: lattice.name().to_string(),
                    dim: lattice.dim(),
                    ell,
                    t_ell: o.report.t_float,
                    ell_sq_t: (&o.report.t_ell * &l2).to_f64(),
                    lambda_star: o.lambda_star_float,
                    feasible: true,
                }
            }
            None => TableRow {
                lattice: lattice.name().to_string(),
                dim: lattice.dim(),
                ell,
                t_ell: f64::NAN,
                ell_sq_t: f64::NAN,
                lambda_star: f64::NAN,
                feasible: false,
            },
        }
    }
}

/// One optimized row per ℓ, computed in parallel and returned in ℓ order.
pub fn reproduce_table(
    lattice: LatticeKind,
    ells: RangeInclusive<usize>,
) -> Result<Vec<TableRow>, TuneError> {
    let ells: Vec<usize> = ells.collect();
    ells.par_iter()
        .map(|&ell| {
            let cfg = TuneConfig::new(lattice, ell);
            match optimize_lambda(&cfg) {
                Ok(o) => Ok(TableRow::from_outcome(lattice, ell, Some(&o))),
                Err(TuneError::NoFeasibleLambda { .. }) => {
                    Ok(TableRow::from_outcome(lattice, ell, None))
                }
                Err(e) => Err(e),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbePoint {
    pub ell: usize,
    pub ell_sq_t: QuadraticScalar,
    pub ell_sq_t_float: f64,
}

/// `ℓ²·t_ℓ` at the default λ for each requested ℓ.
pub fn asymptotic_probe(
    lattice: LatticeKind,
    ells: &[usize],
) -> Result<Vec<ProbePoint>, TuneError> {
    if ells.windows(2).any(|w| w[0] >= w[1]) {
        return Err(TuneError::Config("ells must be increasing".into()));
    }
    ells.par_iter()
        .map(|&ell| {
            let r = default_threshold_unfiltered(lattice, ell)?;
            let v = &r.t_ell * QuadraticScalar::from_integer((ell * ell) as i64);
            Ok(ProbePoint {
                ell,
                ell_sq_t_float: v.to_f64(),
                ell_sq_t: v,
            })
        })
        .collect()
}

pub const CSV_HEADER: [&str; 7] = [
    "lattice",
    "D",
    "ell",
    "t_ell",
    "ell_sq_t",
    "lambda_star",
    "feasible",
];

pub fn write_table_csv<W: Write>(rows: &[TableRow], w: W) -> Result<(), TuneError> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_table_csv<R: Read>(r: R) -> Result<Vec<TableRow>, TuneError> {
    let mut rd = csv::Reader::from_reader(r);
    let headers = rd.headers()?.clone();
    if headers.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(TuneError::Config(format!(
            "unexpected CSV header {headers:?}"
        )));
    }
    Ok(rd.deserialize().collect::<Result<Vec<TableRow>, _>>()?)
}

/// Published three-decimal thresholds, indexed from their first ℓ.
pub mod published {
    use crate::criteria::LatticeKind;

    pub const HYPERCUBIC_D2: (usize, [f64; 8]) =
        (2, [0.667, 0.395, 0.257, 0.181, 0.134, 0.104, 0.082, 0.067]);
    pub const HYPERCUBIC_D2_SCALED: [f64; 8] =
        [2.667, 3.547, 4.102, 4.503, 4.808, 5.049, 5.245, 5.407];
    pub const HYPERCUBIC_D3: (usize, [f64; 8]) =
        (2, [0.667, 0.400, 0.264, 0.188, 0.141, 0.110, 0.088, 0.073]);
    pub const HYPERCUBIC_D3_SCALED: [f64; 8] =
        [2.667, 3.593, 4.212, 4.685, 5.061, 5.369, 5.627, 5.846];
    pub const HONEYCOMB: (usize, [f64; 7]) = (3, [0.246, 0.161, 0.113, 0.084, 0.065, 0.051, 0.042]);
    #[allow(clippy::approx_constant)]
    pub const HONEYCOMB_SCALED: [f64; 7] = [2.212, 2.576, 2.824, 3.003, 3.140, 3.247, 3.333];
    pub const TRIANGULAR: (usize, [f64; 7]) =
        (3, [1.318, 0.872, 0.628, 0.476, 0.373, 0.301, 0.248]);
    pub const TRIANGULAR_SCALED: [f64; 7] =
        [11.861, 13.946, 15.700, 17.113, 18.263, 19.213, 20.010];

    /// Published `t_ℓ`, if tabulated.
    pub fn t_ell(lattice: LatticeKind, ell: usize) -> Option<f64> {
        let (start, vals): (usize, &[f64]) = match lattice {
            LatticeKind::Hypercubic { dim: 2 } => (HYPERCUBIC_D2.0, &HYPERCUBIC_D2.1),
            LatticeKind::Hypercubic { dim: 3 } => (HYPERCUBIC_D3.0, &HYPERCUBIC_D3.1),
            LatticeKind::Honeycomb => (HONEYCOMB.0, &HONEYCOMB.1),
            LatticeKind::Triangular => (TRIANGULAR.0, &TRIANGULAR.1),
            _ => return None,
        };
        ell.checked_sub(start).and_then(|i| vals.get(i)).copied()
    }

    /// Tabulated ℓ range, if any.
    pub fn ell_range(lattice: LatticeKind) -> Option<std::ops::RangeInclusive<usize>> {
        match lattice {
            LatticeKind::Hypercubic { dim: 2 | 3 } => Some(2..=9),
            LatticeKind::Honeycomb | LatticeKind::Triangular => Some(3..=9),
            _ => None,
        }
    }
}

/// Absolute tolerance on `t_ℓ` when comparing with published values.
pub const TABLE_TOLERANCE: f64 = 0.005;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowComparison {
    pub ell: usize,
    pub computed: f64,
    pub computed_rounded: String,
    pub published: Option<f64>,
    pub abs_diff: Option<f64>,
    pub within_tolerance: bool,
}

/// Compares rows with the published values; rows without a reference are marked not within tolerance.
pub fn compare_with_published(lattice: LatticeKind, rows: &[TableRow]) -> Vec<RowComparison> {
    rows.iter()
        .map(|r| {
            let rounded = QuadraticScalar::from_f64_exact(r.t_ell)
                .map(|x| x.round_decimal(3))
                .unwrap_or_default();
            let rounded_f = rounded.to_f64().unwrap_or(f64::NAN);
            let published = published::t_ell(lattice, r.ell);
            let abs_diff = published.map(|p| (rounded_f - p).abs());
            RowComparison {
                ell: r.ell,
                computed: r.t_ell,
                computed_rounded: format!("{rounded_f:.3}"),
                published,
                abs_diff,
                within_tolerance: r.feasible
                    && abs_diff.is_some_and(|d| d <= TABLE_TOLERANCE + 1e-12),
            }
        })
        .collect()
}
