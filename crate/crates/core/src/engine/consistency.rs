//! Cross-checks `N_β` against every applicable relation in the divisor pool.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use super::relations::{format_tuple, PreparedClass, RelationKind};
use super::{for_each_tuple, GwEngine};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel};

/// Where the reference value of `N_β` came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueSource {
    Seed,
    Vanishing,
    Relation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyEntry {
    pub kind: RelationKind,
    pub tuple: Vec<String>,
    #[serde(serialize_with = "crate::serde_big::ser")]
    pub lhs_coeff: BigInt,
    #[serde(serialize_with = "crate::serde_big::ser")]
    pub implied: BigInt,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyReport {
    pub class: String,
    #[serde(serialize_with = "crate::serde_big::ser")]
    pub value: BigInt,
    pub source: ValueSource,
    pub entries: Vec<ConsistencyEntry>,
}

impl ConsistencyReport {
    pub fn is_vacuous(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for ConsistencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let source = match self.source {
            ValueSource::Seed => "seed",
            ValueSource::Vanishing => "vanishing filter",
            ValueSource::Relation => "relation",
        };
        if self.entries.is_empty() {
            return write!(
                f,
                "{}: no applicable nondegenerate relation; value from {source} = {}",
                self.class, self.value
            );
        }
        writeln!(
            f,
            "{}: {} nondegenerate relations, all imply {} (value from {source})",
            self.class,
            self.entries.len(),
            self.value
        )?;
        for e in &self.entries {
            writeln!(f, "  {} [{}] lhs={} N={}", e.kind, e.tuple.join(" | "), e.lhs_coeff, e.implied)?;
        }
        Ok(())
    }
}

impl GwEngine {
    /// Evaluates R1 on every pair, R2 on every triple and R3 on every 4-tuple
    /// drawn from the first `pool_size` pool divisors (as far as `δ_β`
    /// allows) and checks that every nondegenerate one implies `N_β`.
    pub fn consistency_check(
        &self,
        surface: &SurfaceModel,
        beta: &DivisorClass,
        pool_size: usize,
    ) -> Result<ConsistencyReport> {
        let value = self.n_beta(surface, beta)?;
        let source = if self.seed_value(surface, beta).is_some() {
            ValueSource::Seed
        } else if self.quick_vanishing(surface, beta) {
            ValueSource::Vanishing
        } else {
            ValueSource::Relation
        };
        let mut report = ConsistencyReport {
            class: beta.to_string(),
            value: value.clone(),
            source,
            entries: Vec::new(),
        };
        if source == ValueSource::Vanishing || beta.delta() < 1 {
            return Ok(report);
        }

        let mut pool = GwEngine::divisor_pool(surface);
        pool.truncate(pool_size);
        let prep = PreparedClass::new(self, surface, beta)?;
        // pairings[s][p] = (pool_p·β1, pool_p·β2) for splitting s.
        let pairings: Vec<Vec<(i128, i128)>> = prep
            .entries
            .iter()
            .map(|e| {
                pool.iter()
                    .map(|p| (p.dot(&e.first) as i128, p.dot(&e.second) as i128))
                    .collect()
            })
            .collect();

        let mut first_tuple: Option<String> = None;
        for kind in [RelationKind::R1, RelationKind::R2, RelationKind::R3] {
            if prep.delta < kind.min_delta() {
                continue;
            }
            let mut failure = None;
            for_each_tuple(pool.len(), kind.arity(), |idx| {
                let tuple: Vec<DivisorClass> = idx.iter().map(|&i| pool[i].clone()).collect();
                let lhs = prep.lhs(kind, &tuple);
                if lhs == 0 {
                    return true;
                }
                let rhs = prep.rhs_by(kind, |s, j| pairings[s][idx[j]]);
                let lhs = BigInt::from(lhs);
                let label = format!("{kind} [{}]", format_tuple(&tuple));
                if &rhs % &lhs != BigInt::from(0) {
                    failure = Some(format!("{label}: rhs {rhs} not divisible by lhs {lhs}"));
                    return false;
                }
                let implied = &rhs / &lhs;
                if implied != value {
                    let reference = first_tuple
                        .clone()
                        .unwrap_or_else(|| format!("{source:?}").to_lowercase());
                    failure = Some(format!(
                        "{reference} gives N = {value} but {label} gives N = {implied}"
                    ));
                    return false;
                }
                first_tuple.get_or_insert(label);
                report.entries.push(ConsistencyEntry {
                    kind,
                    tuple: tuple.iter().map(|c| c.to_string()).collect(),
                    lhs_coeff: lhs,
                    implied,
                });
                true
            });
            if let Some(detail) = failure {
                return Err(Error::Inconsistent {
                    class: beta.to_string(),
                    detail,
                });
            }
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(s: &str) -> DivisorClass {
        s.parse().unwrap()
    }

    #[test]
    fn quartic_with_line_pool() {
        let e = GwEngine::new();
        let s = SurfaceModel::new(0).unwrap();
        let r = e.consistency_check(&s, &class("4;"), 1).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].implied, BigInt::from(620));
    }

    #[test]
    fn line_through_assigned_point_full_pool() {
        let e = GwEngine::new();
        let s = SurfaceModel::new(2).unwrap();
        let r = e.consistency_check(&s, &class("1;1,0"), usize::MAX).unwrap();
        assert_eq!(r.source, ValueSource::Seed);
        assert!(!r.entries.is_empty());
        assert!(r.entries.iter().all(|x| x.implied == BigInt::from(1)));
    }

    #[test]
    fn seeded_line_minus_point_at_k1_is_vacuous() {
        let e = GwEngine::new();
        let s = SurfaceModel::new(1).unwrap();
        let r = e.consistency_check(&s, &class("1;1"), usize::MAX).unwrap();
        assert!(r.is_vacuous());
        assert_eq!(r.value, BigInt::from(1));
        assert_eq!(
            r.to_string(),
            "1;1: no applicable nondegenerate relation; value from seed = 1"
        );
    }

    #[test]
    fn mixed_classes_full_pool() {
        let e = GwEngine::new();
        for text in ["3;1,1,0", "4;2,1,1", "2;1,1,1", "3;2,1,1,1", "5;2,2,1"] {
            let c = class(text);
            let s = SurfaceModel::of(&c).unwrap();
            let r = e.consistency_check(&s, &c, usize::MAX).unwrap();
            assert!(!r.is_vacuous(), "{text}");
        }
    }
}
