//! The three associativity relations used to solve for `N_β`.
//!
//! Each relation comes from the WDVV equation with four insertions, reduced
//! with the divisor axiom to a linear identity `lhs_coeff · N_β = rhs` whose
//! right-hand side only involves counts of strictly smaller classes:
//!
//! * R1, insertions `(pt, pt, A, B)`, needs `δ_β >= 3`;
//! * R2, insertions `(A, B, C, pt)`, needs `δ_β >= 2`;
//! * R3, insertions `(A, B, C, D)`, needs `δ_β >= 1`.
//!
//! With `k = 0` and `A = B = L`, R1 is Kontsevich's recursion.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::GwEngine;
use crate::binomial::binomial;
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelationKind {
    R1,
    R2,
    R3,
}

impl RelationKind {
    pub fn min_delta(self) -> i64 {
        match self {
            RelationKind::R1 => 3,
            RelationKind::R2 => 2,
            RelationKind::R3 => 1,
        }
    }

    pub fn arity(self) -> usize {
        match self {
            RelationKind::R1 => 2,
            RelationKind::R2 => 3,
            RelationKind::R3 => 4,
        }
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RelationKind::R1 => "R1",
            RelationKind::R2 => "R2",
            RelationKind::R3 => "R3",
        };
        f.write_str(s)
    }
}

/// One linear constraint `lhs_coeff · N_β = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WdvvRelation {
    pub kind: RelationKind,
    pub beta: DivisorClass,
    pub tuple: Vec<DivisorClass>,
    pub lhs_coeff: BigInt,
    pub rhs: BigInt,
}

impl WdvvRelation {
    pub fn is_degenerate(&self) -> bool {
        self.lhs_coeff.is_zero()
    }

    /// The value of `N_β` this relation forces, `None` when degenerate.
    pub fn implied_value(&self) -> Option<Result<BigInt>> {
        if self.is_degenerate() {
            return None;
        }
        let (q, r) = self.rhs.div_rem(&self.lhs_coeff);
        if !r.is_zero() {
            return Some(Err(Error::Inconsistent {
                class: self.beta.to_string(),
                detail: format!(
                    "{} with tuple [{}]: rhs {} is not divisible by lhs coefficient {}",
                    self.kind,
                    format_tuple(&self.tuple),
                    self.rhs,
                    self.lhs_coeff
                ),
            }));
        }
        Some(Ok(q))
    }
}

pub(crate) fn format_tuple(tuple: &[DivisorClass]) -> String {
    tuple.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" | ")
}

/// Binomial-weighted products `C(·,·) · N_{β1} N_{β2} (β1·β2)` for one splitting.
#[derive(Debug, Clone)]
struct Weights {
    /// R1: `C(δ-3, δ1-1)` and `C(δ-3, δ1-2)`; R2: `C(δ-2, δ1)`; R3: `C(δ-1, δ1)`.
    big: [BigInt; 4],
    small: Option<[i128; 4]>,
}

#[derive(Debug, Clone)]
pub(crate) struct SplitEntry {
    pub first: DivisorClass,
    pub second: DivisorClass,
    weights: Weights,
}

/// The splittings of `β` together with the counts of their parts, reused
/// across every relation evaluated for `β`.
#[derive(Debug, Clone)]
pub(crate) struct PreparedClass {
    pub beta: DivisorClass,
    pub delta: i64,
    pub entries: Vec<SplitEntry>,
}

impl PreparedClass {
    pub fn new(engine: &GwEngine, surface: &SurfaceModel, beta: &DivisorClass) -> Result<Self> {
        let delta = beta.delta();
        let mut entries = Vec::new();
        for (first, second) in engine.enumerate_splittings(surface, beta)? {
            let product = engine.n_beta(surface, &first)? * engine.n_beta(surface, &second)?;
            let w = product * first.dot(&second);
            if w.is_zero() {
                continue;
            }
            let d1 = first.delta();
            let big = [
                binomial(delta - 3, d1 - 1) * &w,
                binomial(delta - 3, d1 - 2) * &w,
                binomial(delta - 2, d1) * &w,
                binomial(delta - 1, d1) * &w,
            ];
            let small = match (big[0].to_i128(), big[1].to_i128(), big[2].to_i128(), big[3].to_i128()) {
                (Some(a), Some(b), Some(c), Some(d)) => Some([a, b, c, d]),
                _ => None,
            };
            entries.push(SplitEntry {
                first,
                second,
                weights: Weights { big, small },
            });
        }
        Ok(PreparedClass {
            beta: beta.clone(),
            delta,
            entries,
        })
    }

    /// Left-hand coefficient of a relation; cheap, no splitting sum.
    pub fn lhs(&self, kind: RelationKind, tuple: &[DivisorClass]) -> i128 {
        let b = &self.beta;
        let p = |x: &DivisorClass, y: &DivisorClass| x.dot(y) as i128;
        match kind {
            RelationKind::R1 => p(&tuple[0], &tuple[1]),
            RelationKind::R2 => {
                let (a, bb, c) = (&tuple[0], &tuple[1], &tuple[2]);
                p(a, bb) * p(c, b) - p(a, c) * p(bb, b)
            }
            RelationKind::R3 => {
                let (a, bb, c, d) = (&tuple[0], &tuple[1], &tuple[2], &tuple[3]);
                p(a, bb) * p(c, b) * p(d, b) + p(c, d) * p(a, b) * p(bb, b)
                    - p(a, c) * p(bb, b) * p(d, b)
                    - p(bb, d) * p(a, b) * p(c, b)
            }
        }
    }

    /// Full relation for `tuple`.
    pub fn relation(&self, kind: RelationKind, tuple: &[DivisorClass]) -> WdvvRelation {
        let lhs = self.lhs(kind, tuple);
        let pairs: Vec<Vec<(i128, i128)>> = self
            .entries
            .iter()
            .map(|e| {
                tuple
                    .iter()
                    .map(|t| (t.dot(&e.first) as i128, t.dot(&e.second) as i128))
                    .collect()
            })
            .collect();
        let rhs = self.rhs_by(kind, |s, j| pairs[s][j]);
        WdvvRelation {
            kind,
            beta: self.beta.clone(),
            tuple: tuple.to_vec(),
            lhs_coeff: BigInt::from(lhs),
            rhs,
        }
    }

    /// Right-hand side of a relation; `pairing(s, j)` gives the pairings of
    /// tuple member `j` with the two parts of splitting `s`.
    pub fn rhs_by(&self, kind: RelationKind, pairing: impl Fn(usize, usize) -> (i128, i128)) -> BigInt {
        // Per splitting: (weight slot, integer factor) terms.
        let terms = |s: usize| -> [(usize, i128); 2] {
            let (p0, q0) = pairing(s, 0);
            let (p1, q1) = pairing(s, 1);
            match kind {
                RelationKind::R1 => [(0, p0 * q1), (1, -(q0 * q1))],
                RelationKind::R2 => {
                    let (p2, q2) = pairing(s, 2);
                    [(2, p0 * (p2 * q1 - p1 * q2)), (2, 0)]
                }
                RelationKind::R3 => {
                    let (p2, q2) = pairing(s, 2);
                    let (_, q3) = pairing(s, 3);
                    [(3, p0 * q3 * (p2 * q1 - p1 * q2)), (3, 0)]
                }
            }
        };
        let fast = || -> Option<i128> {
            let mut acc: i128 = 0;
            for (s, entry) in self.entries.iter().enumerate() {
                let small = entry.weights.small.as_ref()?;
                for (slot, factor) in terms(s) {
                    if factor != 0 {
                        acc = acc.checked_add(small[slot].checked_mul(factor)?)?;
                    }
                }
            }
            Some(acc)
        };
        if let Some(v) = fast() {
            return BigInt::from(v);
        }
        let mut acc = BigInt::zero();
        for (s, entry) in self.entries.iter().enumerate() {
            for (slot, factor) in terms(s) {
                if factor != 0 {
                    acc += &entry.weights.big[slot] * factor;
                }
            }
        }
        acc
    }
}

impl GwEngine {
    fn relation(
        &self,
        kind: RelationKind,
        surface: &SurfaceModel,
        beta: &DivisorClass,
        tuple: &[DivisorClass],
    ) -> Result<WdvvRelation> {
        surface.check(beta)?;
        for t in tuple {
            surface.check(t)?;
        }
        if beta.delta() < kind.min_delta() {
            return Err(Error::Precondition(format!(
                "{kind} needs δ >= {}, but {beta} has δ = {}",
                kind.min_delta(),
                beta.delta()
            )));
        }
        Ok(PreparedClass::new(self, surface, beta)?.relation(kind, tuple))
    }

    /// Insertions `(pt, pt, A, B)`: `lhs_coeff = A·B`.
    pub fn relation_r1(
        &self,
        surface: &SurfaceModel,
        beta: &DivisorClass,
        a: &DivisorClass,
        b: &DivisorClass,
    ) -> Result<WdvvRelation> {
        self.relation(RelationKind::R1, surface, beta, &[a.clone(), b.clone()])
    }

    /// Insertions `(A, B, C, pt)`: `lhs_coeff = (A·B)(C·β) - (A·C)(B·β)`.
    pub fn relation_r2(
        &self,
        surface: &SurfaceModel,
        beta: &DivisorClass,
        a: &DivisorClass,
        b: &DivisorClass,
        c: &DivisorClass,
    ) -> Result<WdvvRelation> {
        self.relation(RelationKind::R2, surface, beta, &[a.clone(), b.clone(), c.clone()])
    }

    /// Insertions `(A, B, C, D)`.
    pub fn relation_r3(
        &self,
        surface: &SurfaceModel,
        beta: &DivisorClass,
        a: &DivisorClass,
        b: &DivisorClass,
        c: &DivisorClass,
        d: &DivisorClass,
    ) -> Result<WdvvRelation> {
        self.relation(
            RelationKind::R3,
            surface,
            beta,
            &[a.clone(), b.clone(), c.clone(), d.clone()],
        )
    }
}
