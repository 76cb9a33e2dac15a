//! Rational cuspidal curves.
//!
//! `C_β` counts rational curves in class `β` through `δ_β - 1` general points
//! with one cusp:
//!
//! ```text
//! C_β = (x₂([X]) - x₁·x₁ / β·x₁) N_β
//!     + Σ_{β1+β2=β} C(δ_β-1, δ_β1) N_β1 N_β2 (β1·β2) ((β1·x₁)(β2·x₁) / (2 β·x₁) - 1)
//! ```
//!
//! The sum runs over ordered splittings with both parts nonzero. The count
//! is proved enumerative when `N_{β-3L} > 0`; otherwise it is still computed
//! and flagged.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::binomial::binomial;
use crate::engine::GwEngine;
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CuspResult {
    #[serde(serialize_with = "crate::serde_big::ser")]
    pub value: BigInt,
    /// `β = 3L` or `N_{β-3L} > 0`.
    pub valid: bool,
    #[serde(serialize_with = "ser_ratio")]
    pub first_term: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub boundary_term: BigRational,
    pub warnings: Vec<String>,
}

fn ser_ratio<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn check_degree(beta: &DivisorClass) -> Result<i64> {
    let degree = beta.anticanonical_degree();
    if degree == 0 {
        return Err(Error::ZeroDegree(beta.to_string()));
    }
    Ok(degree)
}

impl GwEngine {
    /// `(x₂([X]) - x₁·x₁ / β·x₁) · N_β`.
    pub fn first_term(&self, surface: &SurfaceModel, beta: &DivisorClass) -> Result<BigRational> {
        surface.check(beta)?;
        let degree = check_degree(beta)?;
        let factor = ratio(surface.euler(), 1) - ratio(surface.c1_sq(), degree);
        Ok(factor * BigRational::from_integer(self.n_beta(surface, beta)?))
    }

    /// The summand of the boundary sum for the ordered splitting `(β1, β2)`.
    pub fn splitting_term(
        &self,
        surface: &SurfaceModel,
        beta: &DivisorClass,
        first: &DivisorClass,
        second: &DivisorClass,
    ) -> Result<BigRational> {
        for c in [beta, first, second] {
            surface.check(c)?;
        }
        if first.is_zero() || second.is_zero() || &(first + second) != beta {
            return Err(Error::Precondition(format!(
                "({first}, {second}) is not a splitting of {beta} into nonzero parts"
            )));
        }
        let degree = check_degree(beta)?;
        let weight = binomial(beta.delta() - 1, first.delta())
            * self.n_beta(surface, first)?
            * self.n_beta(surface, second)?
            * first.dot(second);
        if weight.is_zero() {
            return Ok(BigRational::zero());
        }
        let bracket = ratio(
            first.anticanonical_degree() * second.anticanonical_degree(),
            2 * degree,
        ) - ratio(1, 1);
        Ok(BigRational::from_integer(weight) * bracket)
    }

    /// Sum of [`splitting_term`](Self::splitting_term) over all ordered splittings.
    pub fn boundary_term(&self, surface: &SurfaceModel, beta: &DivisorClass) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for (first, second) in self.enumerate_splittings(surface, beta)? {
            total += self.splitting_term(surface, beta, &first, &second)?;
        }
        Ok(total)
    }

    /// `C_β` with its two terms and the validity flag.
    pub fn c_beta(&self, surface: &SurfaceModel, beta: &DivisorClass) -> Result<CuspResult> {
        surface.check(beta)?;
        if beta.m().iter().any(|&x| x < 0) {
            return Err(Error::Precondition(format!(
                "cuspidal counts need every m_i >= 0, got {beta}"
            )));
        }
        if beta.delta() < 1 {
            return Err(Error::Precondition(format!(
                "cuspidal counts need δ >= 1, but {beta} has δ = {}",
                beta.delta()
            )));
        }
        let mut warnings = Vec::new();
        let valid = self.validity(surface, beta)?;
        if !valid {
            warnings.push(format!(
                "N_(β-3L) = 0 for {beta}: enumerativity of the result is expected but not proved in this case"
            ));
        }

        if self.quick_vanishing(surface, beta) {
            warnings.push(format!(
                "{beta} carries no irreducible rational curve; C = 0 without evaluating the formula"
            ));
            return Ok(CuspResult {
                value: BigInt::zero(),
                valid,
                first_term: BigRational::zero(),
                boundary_term: BigRational::zero(),
                warnings,
            });
        }

        let first_term = self.first_term(surface, beta)?;
        let boundary_term = self.boundary_term(surface, beta)?;
        let total = &first_term + &boundary_term;
        if !total.is_integer() {
            return Err(Error::Inconsistent {
                class: beta.to_string(),
                detail: format!(
                    "cusp count {total} is not an integer (first term {first_term}, boundary {boundary_term})"
                ),
            });
        }
        let value = total.to_integer();
        if value.is_negative() {
            warnings.push(format!("negative cusp count {value} for {beta}"));
        }
        Ok(CuspResult {
            value,
            valid,
            first_term,
            boundary_term,
            warnings,
        })
    }

    /// `β = 3L`, or `N_{β-3L} > 0`.
    pub fn validity(&self, surface: &SurfaceModel, beta: &DivisorClass) -> Result<bool> {
        let rest = beta - &DivisorClass::new(3, vec![0; surface.k()]);
        if rest.is_zero() {
            return Ok(true);
        }
        Ok(self.n_beta(surface, &rest)?.is_positive())
    }

    /// Whether `C` at `(d; pattern)` on `surface` equals `C_{dL}` on the plane.
    /// `pattern[i]` marks the points that carry multiplicity one.
    pub fn blowup_invariance_check(&self, surface: &SurfaceModel, d: i64, pattern: &[bool]) -> Result<bool> {
        if pattern.len() != surface.k() {
            return Err(Error::Precondition(format!(
                "pattern has {} entries but k = {}",
                pattern.len(),
                surface.k()
            )));
        }
        let blown = DivisorClass::new(d, pattern.iter().map(|&b| b as i64).collect());
        let plane = SurfaceModel::new(0)?;
        let lhs = self.c_beta(surface, &blown)?;
        let rhs = self.c_beta(&plane, &DivisorClass::new(d, Vec::new()))?;
        Ok(lhs.value == rhs.value)
    }
}
