//! Effective constants and local gap thresholds for hypercubic, honeycomb and
//! triangular lattices.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::profiles::{CoefficientProfile, ValidationReport};
use crate::scalars::{QuadraticScalar, ScalarError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CriteriaError {
    #[error("invalid coefficient profile: {0:?}")]
    InvalidProfile(ValidationReport),
    #[error("hypercubic dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("closed-form bound needs ell >= 10, got {0}")]
    EllOutsideBoundRange(usize),
    #[error("box size must be at least 2, got {0}")]
    EllTooSmall(usize),
    #[error("constant set is for {found}, expected {expected}")]
    WrongLattice { expected: String, found: String },
    #[error("denominator constant {0} vanishes")]
    ZeroDenominator(&'static str),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LatticeKind {
    Hypercubic { dim: usize },
    Honeycomb,
    Triangular,
}

impl LatticeKind {
    pub fn hypercubic(dim: usize) -> Result<Self, CriteriaError> {
        if dim < 2 {
            return Err(CriteriaError::DimensionTooSmall(dim));
        }
        Ok(LatticeKind::Hypercubic { dim })
    }

    pub fn name(&self) -> &'static str {
        match self {
            LatticeKind::Hypercubic { .. } => "hypercubic",
            LatticeKind::Honeycomb => "honeycomb",
            LatticeKind::Triangular => "triangular",
        }
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            LatticeKind::Hypercubic { dim } => Some(*dim),
            _ => None,
        }
    }

    /// Smallest box size covered by the gap theorems for this lattice.
    pub fn min_theorem_ell(&self) -> usize {
        match self {
            LatticeKind::Hypercubic { .. } => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeKind::Hypercubic { dim } => write!(f, "hypercubic(D={dim})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Named constants per lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "lattice", rename_all = "lowercase")]
pub enum KValues {
    Hypercubic {
        #[serde(rename = "K0")]
        k0: QuadraticScalar,
        #[serde(rename = "K_collinear")]
        k_collinear: QuadraticScalar,
        #[serde(rename = "K_parallel")]
        k_parallel: QuadraticScalar,
        #[serde(rename = "K3")]
        k3: QuadraticScalar,
        #[serde(rename = "K4")]
        k4: QuadraticScalar,
    },
    Honeycomb {
        #[serde(rename = "K0")]
        k0: QuadraticScalar,
        #[serde(rename = "K1")]
        k1: QuadraticScalar,
        #[serde(rename = "K2")]
        k2: QuadraticScalar,
        #[serde(rename = "K3")]
        k3: QuadraticScalar,
    },
    Triangular {
        #[serde(rename = "K0")]
        k0: QuadraticScalar,
        #[serde(rename = "K1")]
        k1: QuadraticScalar,
        #[serde(rename = "K2")]
        k2: QuadraticScalar,
        #[serde(rename = "K3")]
        k3: QuadraticScalar,
        #[serde(rename = "K4")]
        k4: QuadraticScalar,
        #[serde(rename = "K5")]
        k5: QuadraticScalar,
    },
}

impl KValues {
    pub fn named(&self) -> Vec<(&'static str, &QuadraticScalar)> {
        match self {
            KValues::Hypercubic {
                k0,
                k_collinear,
                k_parallel,
                k3,
                k4,
            } => vec![
                ("K0", k0),
                ("K_collinear", k_collinear),
                ("K_parallel", k_parallel),
                ("K3", k3),
                ("K4", k4),
            ],
            KValues::Honeycomb { k0, k1, k2, k3 } => {
                vec![("K0", k0), ("K1", k1), ("K2", k2), ("K3", k3)]
            }
            KValues::Triangular {
                k0,
                k1,
                k2,
                k3,
                k4,
                k5,
            } => vec![
                ("K0", k0),
                ("K1", k1),
                ("K2", k2),
                ("K3", k3),
                ("K4", k4),
                ("K5", k5),
            ],
        }
    }

    pub fn get(&self, name: &str) -> Option<&QuadraticScalar> {
        self.named()
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| v)
    }
}

pub const HYPERCUBIC_LABEL_NOTE: &str =
    "K_collinear = (sum c_i c_(i+1)) (sum d^2)^(D-1) enters the threshold numerator; \
K_parallel = (sum c^2)(sum d_i d_(i+1))(sum d^2)^(D-2) enters only the feasibility test. \
Published sources attach the labels K1/K2 to these two constants in both orders.";

pub const HONEYCOMB_LABEL_NOTE: &str = "K1 is evaluated with the closed form (sum d^2)(sum cd) + (sum_(i<l) d_i^2)(sum cd) + (sum cd)^2 - c0 d0^3; \
feasibility is not a closed-form condition here and is reported as profile validity.";

pub const TRIANGULAR_LABEL_NOTE: &str =
    "K1 collinear, K2 60-degree apex, K3 120-degree wedge; feasible iff K2 >= max(K1, K3).";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KSet {
    pub lattice: LatticeKind,
    pub ell: usize,
    pub values: KValues,
    pub feasible: bool,
    pub in_theorem_range: bool,
    pub label_note: String,
}

impl KSet {
    pub fn get(&self, name: &str) -> Option<&QuadraticScalar> {
        self.values.get(name)
    }

    /// The pair coefficient that every non-adjacent pair must stay below.
    pub fn dominating(&self) -> (&'static str, &QuadraticScalar) {
        match &self.values {
            KValues::Hypercubic { k3, .. } => ("K3", k3),
            KValues::Honeycomb { k1, .. } => ("K1", k1),
            KValues::Triangular { k2, .. } => ("K2", k2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub t_ell: QuadraticScalar,
    pub prefactor: QuadraticScalar,
    pub t_float: f64,
    pub prefactor_float: f64,
    pub feasible: bool,
    pub kset: KSet,
}

/// Sums over a profile used by every constant.
#[derive(Debug, Clone)]
pub struct ProfileSums {
    pub ell: usize,
    pub sum_c: QuadraticScalar,
    pub sum_d: QuadraticScalar,
    pub sum_c2: QuadraticScalar,
    pub sum_d2: QuadraticScalar,
    /// `Σ_{i<ℓ} d_i²`
    pub sum_d2_head: QuadraticScalar,
    /// `Σ_{i≤ℓ-2} c_i c_{i+1}`
    pub sum_cc: QuadraticScalar,
    /// `Σ_{i≤ℓ-1} d_i d_{i+1}`
    pub sum_dd: QuadraticScalar,
    /// `Σ_{i<ℓ} c_i d_i`
    pub sum_cd: QuadraticScalar,
    pub c0: QuadraticScalar,
    pub d0: QuadraticScalar,
}

impl ProfileSums {
    pub fn new(p: &CoefficientProfile) -> Self {
        let ell = p.ell;
        let sq = |x: &QuadraticScalar| x * x;
        let sum_c2: QuadraticScalar = p.c.iter().map(sq).sum();
        let sum_d2_head: QuadraticScalar = p.d[..ell].iter().map(sq).sum();
        ProfileSums {
            ell,
            sum_c: p.c.iter().sum(),
            sum_d: p.d.iter().sum(),
            sum_c2,
            sum_d2: &sum_d2_head + sq(&p.d[ell]),
            sum_d2_head,
            sum_cc: p.c.windows(2).map(|w| &w[0] * &w[1]).sum(),
            sum_dd: p.d.windows(2).map(|w| &w[0] * &w[1]).sum(),
            sum_cd: p.c.iter().zip(&p.d).map(|(c, d)| c * d).sum(),
            c0: p.c[0].clone(),
            d0: p.d[0].clone(),
        }
    }
}

fn int(n: i64) -> QuadraticScalar {
    QuadraticScalar::from_integer(n)
}

fn checked_profile(p: &CoefficientProfile) -> Result<(), CriteriaError> {
    let r = p.validate();
    if r.is_valid() {
        Ok(())
    } else {
        Err(CriteriaError::InvalidProfile(r))
    }
}

fn ge(x: &QuadraticScalar, y: &QuadraticScalar) -> bool {
    !(x - y).is_negative()
}

pub fn k_hypercubic(p: &CoefficientProfile, dim: usize) -> Result<KSet, CriteriaError> {
    checked_profile(p)?;
    k_hypercubic_unchecked(&ProfileSums::new(p), dim)
}

/// Constants from precomputed sums; skips profile validation.
pub fn k_hypercubic_unchecked(s: &ProfileSums, dim: usize) -> Result<KSet, CriteriaError> {
    if dim < 2 {
        return Err(CriteriaError::DimensionTooSmall(dim));
    }
    let ell = s.ell as i64;
    let d2_pow = |e: usize| s.sum_d2.pow(e as u32);
    let k0 = &s.sum_c2 * d2_pow(dim - 1);
    let k_collinear = &s.sum_cc * d2_pow(dim - 1);
    let k_parallel = &s.sum_c2 * &s.sum_dd * d2_pow(dim - 2);
    let k3 = &s.sum_cd * &s.sum_cd * d2_pow(dim - 2);
    let count = int(ell) * int(ell + 1).pow(dim as u32 - 1);
    let k4 = (&s.sum_c * &s.sum_c * s.sum_d.pow(2 * (dim as u32 - 1))).checked_div(&count)?;
    let feasible = ge(&k3, &k_collinear) && ge(&k3, &k_parallel);
    Ok(KSet {
        lattice: LatticeKind::Hypercubic { dim },
        ell: s.ell,
        values: KValues::Hypercubic {
            k0,
            k_collinear,
            k_parallel,
            k3,
            k4,
        },
        feasible,
        in_theorem_range: s.ell >= 2,
        label_note: HYPERCUBIC_LABEL_NOTE.to_string(),
    })
}

pub fn k_honeycomb(p: &CoefficientProfile) -> Result<KSet, CriteriaError> {
    checked_profile(p)?;
    k_honeycomb_unchecked(&ProfileSums::new(p))
}

pub fn k_honeycomb_unchecked(s: &ProfileSums) -> Result<KSet, CriteriaError> {
    if s.ell < 2 {
        return Err(CriteriaError::EllTooSmall(s.ell));
    }
    let ell = s.ell as i64;
    let d0_2 = &s.d0 * &s.d0;
    let d0_4 = &d0_2 * &d0_2;
    let k0 = int(2) * &s.sum_d2 * &s.sum_c2 + &s.sum_d2 * &s.sum_d2 - int(2) * &d0_4;
    let k1 = &s.sum_d2 * &s.sum_cd + &s.sum_d2_head * &s.sum_cd + &s.sum_cd * &s.sum_cd
        - &s.c0 * &d0_2 * &s.d0;
    let dc = &s.sum_d * &s.sum_c;
    let dd_corr = &s.sum_d * &s.sum_d - int(2) * &d0_2;
    let a = dc.checked_div(&int(ell * ell + ell))?;
    let b = dd_corr.checked_div(&int(ell * ell + 2 * ell - 1))?;
    let k2 = if a < b { a } else { b };
    let k3 = &k2 * (int(2) * &dc + &dd_corr);
    Ok(KSet {
        lattice: LatticeKind::Honeycomb,
        ell: s.ell,
        values: KValues::Honeycomb { k0, k1, k2, k3 },
        feasible: true,
        in_theorem_range: s.ell >= 3,
        label_note: HONEYCOMB_LABEL_NOTE.to_string(),
    })
}

pub fn k_triangular(p: &CoefficientProfile) -> Result<KSet, CriteriaError> {
    checked_profile(p)?;
    k_triangular_unchecked(&ProfileSums::new(p))
}

pub fn k_triangular_unchecked(s: &ProfileSums) -> Result<KSet, CriteriaError> {
    if s.ell < 2 {
        return Err(CriteriaError::EllTooSmall(s.ell));
    }
    let ell = s.ell as i64;
    let two = int(2);
    let k0 = &two * &s.sum_d2 * &s.sum_c2 + &s.sum_c2 * &s.sum_c2;
    let k1 = &two * &s.sum_d2 * &s.sum_cc + &s.sum_cc * &s.sum_cc;
    let k2 = &two * &s.sum_c2 * &s.sum_cd + &s.sum_cd * &s.sum_cd;
    let k3 = &two * &s.sum_cc * &s.sum_cd + &s.sum_cd * &s.sum_cd;
    let dc = &s.sum_d * &s.sum_c;
    let cc = &s.sum_c * &s.sum_c;
    let a = dc.checked_div(&int(ell * ell + ell))?;
    let b = cc.checked_div(&int(ell * ell))?;
    let k4 = if a < b { a } else { b };
    let k5 = &k4 * (&two * &dc + &cc);
    let feasible = ge(&k2, &k1) && ge(&k2, &k3);
    Ok(KSet {
        lattice: LatticeKind::Triangular,
        ell: s.ell,
        values: KValues::Triangular {
            k0,
            k1,
            k2,
            k3,
            k4,
            k5,
        },
        feasible,
        in_theorem_range: s.ell >= 3,
        label_note: TRIANGULAR_LABEL_NOTE.to_string(),
    })
}

/// Dispatches to the lattice-specific constants.
pub fn kset(lattice: LatticeKind, p: &CoefficientProfile) -> Result<KSet, CriteriaError> {
    match lattice {
        LatticeKind::Hypercubic { dim } => k_hypercubic(p, dim),
        LatticeKind::Honeycomb => k_honeycomb(p),
        LatticeKind::Triangular => k_triangular(p),
    }
}

/// Constants without profile validation, for probing arbitrary λ.
pub fn kset_unchecked(lattice: LatticeKind, s: &ProfileSums) -> Result<KSet, CriteriaError> {
    match lattice {
        LatticeKind::Hypercubic { dim } => k_hypercubic_unchecked(s, dim),
        LatticeKind::Honeycomb => k_honeycomb_unchecked(s),
        LatticeKind::Triangular => k_triangular_unchecked(s),
    }
}

fn report(t_ell: QuadraticScalar, prefactor: QuadraticScalar, k: &KSet) -> ThresholdReport {
    ThresholdReport {
        t_float: t_ell.to_f64(),
        prefactor_float: prefactor.to_f64(),
        t_ell,
        prefactor,
        feasible: k.feasible,
        kset: k.clone(),
    }
}

fn nonzero<'a>(
    x: &'a QuadraticScalar,
    name: &'static str,
) -> Result<&'a QuadraticScalar, CriteriaError> {
    if x.is_zero() {
        Err(CriteriaError::ZeroDenominator(name))
    } else {
        Ok(x)
    }
}

fn wrong(expected: &str, k: &KSet) -> CriteriaError {
    CriteriaError::WrongLattice {
        expected: expected.to_string(),
        found: k.lattice.to_string(),
    }
}

/// `t = (K0 + K3 - 2K_collinear)/K4`, prefactor `K4/K3`.
pub fn threshold_hypercubic(k: &KSet) -> Result<ThresholdReport, CriteriaError> {
    let KValues::Hypercubic {
        k0,
        k_collinear,
        k3,
        k4,
        ..
    } = &k.values
    else {
        return Err(wrong("hypercubic", k));
    };
    let num = k0 + k3 - int(2) * k_collinear;
    let t = num.checked_div(nonzero(k4, "K4")?)?;
    let pre = k4.checked_div(nonzero(k3, "K3")?)?;
    Ok(report(t, pre, k))
}

/// `t = (K0 - K1)/K3`, prefactor `K3/K1`.
pub fn threshold_honeycomb(k: &KSet) -> Result<ThresholdReport, CriteriaError> {
    let KValues::Honeycomb { k0, k1, k3, .. } = &k.values else {
        return Err(wrong("honeycomb", k));
    };
    let t = (k0 - k1).checked_div(nonzero(k3, "K3")?)?;
    let pre = k3.checked_div(nonzero(k1, "K1")?)?;
    Ok(report(t, pre, k))
}

/// `t = (K0 + 5K2 - 2K1 - 4K3)/K5`, prefactor `K5/K2`.
pub fn threshold_triangular(k: &KSet) -> Result<ThresholdReport, CriteriaError> {
    let KValues::Triangular {
        k0, k1, k2, k3, k5, ..
    } = &k.values
    else {
        return Err(wrong("triangular", k));
    };
    let num = k0 + int(5) * k2 - int(2) * k1 - int(4) * k3;
    let t = num.checked_div(nonzero(k5, "K5")?)?;
    let pre = k5.checked_div(nonzero(k2, "K2")?)?;
    Ok(report(t, pre, k))
}

pub fn threshold_of(k: &KSet) -> Result<ThresholdReport, CriteriaError> {
    match k.lattice {
        LatticeKind::Hypercubic { .. } => threshold_hypercubic(k),
        LatticeKind::Honeycomb => threshold_honeycomb(k),
        LatticeKind::Triangular => threshold_triangular(k),
    }
}

/// Validated profile to threshold in one step.
pub fn threshold(
    lattice: LatticeKind,
    p: &CoefficientProfile,
) -> Result<ThresholdReport, CriteriaError> {
    threshold_of(&kset(lattice, p)?)
}

/// The fixed interpolation parameter used by the closed-form bounds.
///
/// hypercubic `2(√2-1)/ℓ`, honeycomb `-30/(11ℓ)`, triangular `(-30+20√5)/(11ℓ)`.
pub fn default_lambda(lattice: LatticeKind, ell: usize) -> QuadraticScalar {
    let l = ell as i64;
    let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let (a, b, k) = match lattice {
        LatticeKind::Hypercubic { .. } => (r(-2, l), r(2, l), 2),
        LatticeKind::Honeycomb => (r(-30, 11 * l), r(0, 1), 1),
        LatticeKind::Triangular => (r(-30, 11 * l), r(20, 11 * l), 5),
    };
    QuadraticScalar::new(a, b, k).expect("supported radicand")
}

/// Published closed-form upper bound on `t_ℓ`, valid for `ℓ ≥ 10`.
pub fn closed_form_bound(lattice: LatticeKind, ell: usize) -> Result<BigRational, CriteriaError> {
    if ell < 10 {
        return Err(CriteriaError::EllOutsideBoundRange(ell));
    }
    let l = BigInt::from(ell);
    let r = |n: i64, d: BigInt| BigRational::new(BigInt::from(n), d);
    let l2 = &l * &l;
    let l3 = &l2 * &l;
    Ok(match lattice {
        LatticeKind::Hypercubic { dim } => {
            let six_fifths = BigRational::new(6.into(), 5.into());
            num_traits::pow(six_fifths, dim) * (r(5, l2) + r(300, l3))
        }
        LatticeKind::Honeycomb => r(228, BigInt::from(55) * l2) + r(108, l3),
        LatticeKind::Triangular => r(144, BigInt::from(5) * l2) + r(432, l3),
    })
}

/// Leading coefficient `lim ℓ²t_ℓ` of the closed-form bounds.
pub fn asymptotic_constant(lattice: LatticeKind) -> BigRational {
    match lattice {
        LatticeKind::Hypercubic { dim } => {
            num_traits::pow(BigRational::new(6.into(), 5.into()), dim)
                * BigRational::from_integer(5.into())
        }
        LatticeKind::Honeycomb => BigRational::new(228.into(), 55.into()),
        LatticeKind::Triangular => BigRational::new(144.into(), 5.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> QuadraticScalar {
        QuadraticScalar::from_integer(n)
    }

    fn qr(n: i64, d: i64) -> QuadraticScalar {
        QuadraticScalar::from_ratio(n, d).unwrap()
    }

    #[test]
    fn hypercubic_uniform_two_dims() {
        let p = CoefficientProfile::uniform(2).unwrap();
        let k = k_hypercubic(&p, 2).unwrap();
        let got: Vec<_> = k
            .values
            .named()
            .into_iter()
            .map(|(_, v)| v.clone())
            .collect();
        assert_eq!(got, vec![q(6), q(3), q(4), q(4), q(6)]);
        assert!(k.feasible);
        let t = threshold_hypercubic(&k).unwrap();
        assert_eq!(t.t_ell, qr(2, 3));
        assert_eq!(t.prefactor, qr(3, 2));
    }

    #[test]
    fn hypercubic_uniform_three_dims() {
        let p = CoefficientProfile::uniform(2).unwrap();
        let k = k_hypercubic(&p, 3).unwrap();
        assert_eq!(k.get("K0"), Some(&q(18)));
        assert_eq!(k.get("K_collinear"), Some(&q(9)));
        assert_eq!(k.get("K_parallel"), Some(&q(12)));
        assert_eq!(k.get("K3"), Some(&q(12)));
        assert_eq!(k.get("K4"), Some(&q(18)));
        assert!(k.feasible);
        assert_eq!(threshold_hypercubic(&k).unwrap().t_ell, qr(2, 3));
    }

    #[test]
    fn hypercubic_k0_at_lambda_zero() {
        let p = CoefficientProfile::quadratic(4, q(0)).unwrap();
        assert_eq!(p.d, vec![q(5), q(8), q(9), q(8), q(5)]);
        let k = k_hypercubic(&p, 2).unwrap();
        assert_eq!(k.get("K0"), Some(&q(104 * 259)));
    }

    #[test]
    fn honeycomb_uniform() {
        let k = k_honeycomb(&CoefficientProfile::uniform(2).unwrap()).unwrap();
        assert_eq!(k.get("K0"), Some(&q(19)));
        assert_eq!(k.get("K1"), Some(&q(13)));
        assert_eq!(k.get("K2"), Some(&q(1)));
        assert_eq!(k.get("K3"), Some(&q(19)));
        assert!(!k.in_theorem_range);
        assert_eq!(threshold_honeycomb(&k).unwrap().t_ell, qr(6, 19));
    }

    #[test]
    fn triangular_uniform() {
        let k = k_triangular(&CoefficientProfile::uniform(2).unwrap()).unwrap();
        let got: Vec<_> = k
            .values
            .named()
            .into_iter()
            .map(|(_, v)| v.clone())
            .collect();
        assert_eq!(got, vec![q(16), q(7), q(12), q(8), q(1), q(16)]);
        assert!(k.feasible);
        let t = threshold_triangular(&k).unwrap();
        assert_eq!(t.t_ell, qr(15, 8));
        assert_eq!(t.prefactor, qr(4, 3));
    }

    #[test]
    fn bounds_at_ten() {
        let h = closed_form_bound(LatticeKind::Hypercubic { dim: 2 }, 10).unwrap();
        assert_eq!(h, BigRational::new(63.into(), 125.into()));
        let t = closed_form_bound(LatticeKind::Triangular, 10).unwrap();
        assert_eq!(t, BigRational::new(18.into(), 25.into()));
        let hc = closed_form_bound(LatticeKind::Honeycomb, 10).unwrap();
        assert_eq!(
            hc,
            BigRational::new(228.into(), 5500.into()) + BigRational::new(108.into(), 1000.into())
        );
        assert!(closed_form_bound(LatticeKind::Honeycomb, 9).is_err());
    }

    #[test]
    fn wrong_lattice_rejected() {
        let k = k_triangular(&CoefficientProfile::uniform(2).unwrap()).unwrap();
        assert!(matches!(
            threshold_hypercubic(&k),
            Err(CriteriaError::WrongLattice { .. })
        ));
        assert!(LatticeKind::hypercubic(1).is_err());
    }

    #[test]
    fn invalid_profile_rejected() {
        let p = CoefficientProfile::from_integers(&[1, 2, 1], &[2, 1, 1, 2]).unwrap();
        assert!(matches!(
            k_triangular(&p),
            Err(CriteriaError::InvalidProfile(_))
        ));
    }

    #[test]
    fn default_lambdas() {
        let l = default_lambda(LatticeKind::Honeycomb, 5);
        assert_eq!(l, qr(-30, 55));
        let t = default_lambda(LatticeKind::Triangular, 1);
        assert!((t.to_f64() - (-30.0 + 20.0 * 5f64.sqrt()) / 11.0).abs() < 1e-15);
    }
}
