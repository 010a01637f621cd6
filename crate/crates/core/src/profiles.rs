//! Coefficient profiles `(c_0..c_{ℓ-1})` and `(d_0..d_ℓ)` weighting the edges of a box.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalars::{QuadraticScalar, ScalarError, Sign};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProfileError {
    #[error("box size must be at least {min}, got {ell}")]
    EllTooSmall { ell: usize, min: usize },
    #[error("expected {expected} d-coefficients for {c_len} c-coefficients, got {got}")]
    LengthMismatch {
        c_len: usize,
        expected: usize,
        got: usize,
    },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Which of the two coefficient families a violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    C,
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Requirement {
    Positivity,
    Symmetry,
    Monotonicity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub requirement: Requirement,
    pub family: Family,
    pub index: usize,
}

/// Outcome of [`CoefficientProfile::validate`]; holds the first violation of each requirement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub positive: bool,
    pub symmetric: bool,
    pub monotone: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.positive && self.symmetric && self.monotone
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientProfile {
    pub ell: usize,
    pub lambda: Option<QuadraticScalar>,
    pub c: Vec<QuadraticScalar>,
    pub d: Vec<QuadraticScalar>,
}

/// `c_j = ℓ + (ℓ-1)j - j²` for `j = 0..ℓ-1`.
pub fn euclid_c(ell: usize) -> Result<Vec<QuadraticScalar>, ProfileError> {
    if ell < 2 {
        return Err(ProfileError::EllTooSmall { ell, min: 2 });
    }
    let l = ell as i64;
    Ok((0..l)
        .map(|j| QuadraticScalar::from_integer(l + (l - 1) * j - j * j))
        .collect())
}

/// `d_j = (1-λ)(ℓ+1+ℓj-j²) + λ(ℓ+2)²/4` for `j = 0..ℓ`.
pub fn quadratic_d(
    ell: usize,
    lambda: &QuadraticScalar,
) -> Result<Vec<QuadraticScalar>, ProfileError> {
    if ell < 2 {
        return Err(ProfileError::EllTooSmall { ell, min: 2 });
    }
    let l = ell as i64;
    let one_minus = QuadraticScalar::one() - lambda;
    let plateau = lambda * QuadraticScalar::from_ratio((l + 2) * (l + 2), 4)?;
    Ok((0..=l)
        .map(|j| &one_minus * QuadraticScalar::from_integer(l + 1 + l * j - j * j) + &plateau)
        .collect())
}

impl CoefficientProfile {
    pub fn new(c: Vec<QuadraticScalar>, d: Vec<QuadraticScalar>) -> Result<Self, ProfileError> {
        if c.is_empty() {
            return Err(ProfileError::EllTooSmall { ell: 0, min: 1 });
        }
        if d.len() != c.len() + 1 {
            return Err(ProfileError::LengthMismatch {
                c_len: c.len(),
                expected: c.len() + 1,
                got: d.len(),
            });
        }
        let mut k = 1;
        for x in c.iter().chain(d.iter()) {
            match (k, x.k()) {
                (_, 1) => {}
                (1, q) => k = q,
                (p, q) if p != q => return Err(ScalarError::IncompatibleFields(p, q).into()),
                _ => {}
            }
        }
        Ok(CoefficientProfile {
            ell: c.len(),
            lambda: None,
            c,
            d,
        })
    }

    pub fn from_integers(c: &[i64], d: &[i64]) -> Result<Self, ProfileError> {
        Self::new(
            c.iter()
                .map(|&x| QuadraticScalar::from_integer(x))
                .collect(),
            d.iter()
                .map(|&x| QuadraticScalar::from_integer(x))
                .collect(),
        )
    }

    /// The two-parameter family `euclid_c(ℓ)`, `quadratic_d(ℓ, λ)`.
    pub fn quadratic(ell: usize, lambda: QuadraticScalar) -> Result<Self, ProfileError> {
        let c = euclid_c(ell)?;
        let d = quadratic_d(ell, &lambda)?;
        let mut p = Self::new(c, d)?;
        p.lambda = Some(lambda);
        Ok(p)
    }

    /// All coefficients equal to one.
    pub fn uniform(ell: usize) -> Result<Self, ProfileError> {
        if ell < 1 {
            return Err(ProfileError::EllTooSmall { ell, min: 1 });
        }
        Self::new(
            vec![QuadraticScalar::one(); ell],
            vec![QuadraticScalar::one(); ell + 1],
        )
    }

    /// Radicand shared by all coefficients.
    pub fn field(&self) -> u32 {
        self.c
            .iter()
            .chain(self.d.iter())
            .map(QuadraticScalar::k)
            .find(|&k| k != 1)
            .unwrap_or(1)
    }

    /// Positivity, reflection symmetry and monotonicity up to the midpoint.
    ///
    /// Monotonicity is checked for `c_i ≤ c_{i+1}` with `i ≤ ⌊(ℓ-2)/2⌋` and
    /// `d_i ≤ d_{i+1}` with `i ≤ ⌊(ℓ-1)/2⌋`, i.e. while `i+1` does not pass the
    /// mirror image of `i`.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let families = [(Family::C, &self.c), (Family::D, &self.d)];

        let positive = families.iter().all(|(fam, xs)| {
            match xs.iter().position(|x| x.signum() != Sign::Positive) {
                Some(i) => {
                    violations.push(Violation {
                        requirement: Requirement::Positivity,
                        family: *fam,
                        index: i,
                    });
                    false
                }
                None => true,
            }
        });

        let symmetric = families.iter().all(|(fam, xs)| {
            let n = xs.len();
            match (0..n).position(|i| xs[i] != xs[n - 1 - i]) {
                Some(i) => {
                    violations.push(Violation {
                        requirement: Requirement::Symmetry,
                        family: *fam,
                        index: i,
                    });
                    false
                }
                None => true,
            }
        });

        let monotone = families.iter().all(|(fam, xs)| {
            let n = xs.len();
            if n < 2 {
                return true;
            }
            let last = (n - 2) / 2;
            match (0..=last).position(|i| xs[i].signum_cmp(&xs[i + 1]) == Sign::Positive) {
                Some(i) => {
                    violations.push(Violation {
                        requirement: Requirement::Monotonicity,
                        family: *fam,
                        index: i,
                    });
                    false
                }
                None => true,
            }
        });

        ValidationReport {
            positive,
            symmetric,
            monotone,
            violations,
        }
    }
}

trait SignCmp {
    fn signum_cmp(&self, other: &Self) -> Sign;
}

impl SignCmp for QuadraticScalar {
    fn signum_cmp(&self, other: &Self) -> Sign {
        (self - other).signum()
    }
}
