//! Class sweeps and their output rows.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::GwEngine;
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel};

/// One output row: `k<TAB>d;m...<TAB>N<TAB>C<TAB>valid`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub k: usize,
    pub class: String,
    #[serde(serialize_with = "crate::serde_big::ser", deserialize_with = "crate::serde_big::de")]
    pub n: BigInt,
    #[serde(serialize_with = "crate::serde_big::ser", deserialize_with = "crate::serde_big::de")]
    pub c: BigInt,
    pub valid: bool,
}

impl ResultRecord {
    pub fn compute(engine: &GwEngine, surface: &SurfaceModel, beta: &DivisorClass) -> Result<Self> {
        let n = engine.n_beta(surface, beta)?;
        let cusp = engine.c_beta(surface, beta)?;
        Ok(ResultRecord {
            k: surface.k(),
            class: beta.to_string(),
            n,
            c: cusp.value,
            valid: cusp.valid,
        })
    }

    pub fn to_tsv(&self) -> String {
        format!("{}\t{}\t{}\t{}\t{}", self.k, self.class, self.n, self.c, self.valid)
    }
}

/// Bounds for a `table` sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepBounds {
    pub k: usize,
    pub dmax: i64,
    pub mmax: Option<i64>,
}

/// Canonical classes with `1 <= d <= dmax`, `0 <= m_i <= min(d, mmax)` and
/// `Σ m_i <= 3d - 2`, in class order.
pub fn sweep_classes(bounds: SweepBounds) -> Result<Vec<DivisorClass>> {
    SurfaceModel::new(bounds.k)?;
    let mut out = Vec::new();
    for d in 1..=bounds.dmax {
        let cap = bounds.mmax.map_or(d, |m| m.min(d));
        if cap < 0 {
            continue;
        }
        let mut m = Vec::with_capacity(bounds.k);
        non_increasing(bounds.k, cap, 3 * d - 2, &mut m, &mut |m| {
            out.push(DivisorClass::new(d, m.to_vec()));
        });
    }
    out.sort();
    Ok(out)
}

fn non_increasing(len: usize, cap: i64, budget: i64, m: &mut Vec<i64>, emit: &mut impl FnMut(&[i64])) {
    if m.len() == len {
        emit(m);
        return;
    }
    for x in 0..=cap.min(budget) {
        m.push(x);
        non_increasing(len, x, budget - x, m, emit);
        m.pop();
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepOutput {
    pub records: Vec<ResultRecord>,
    /// Classes skipped because they fail the cusp formula's preconditions.
    pub skipped: Vec<String>,
}

/// Evaluates every class in parallel on the current rayon pool; rows keep the input order.
pub fn sweep(engine: &GwEngine, surface: &SurfaceModel, classes: &[DivisorClass]) -> Result<SweepOutput> {
    let rows: Vec<Result<Option<ResultRecord>>> = classes
        .par_iter()
        .map(|beta| match ResultRecord::compute(engine, surface, beta) {
            Ok(r) => Ok(Some(r)),
            Err(e) if e.is_usage() => Ok(None),
            Err(Error::Inconsistent { class, detail }) => Err(Error::Inconsistent {
                class,
                detail: format!("{detail} (while sweeping {beta})"),
            }),
            Err(e) => Err(e),
        })
        .collect();
    let mut out = SweepOutput::default();
    for (beta, row) in classes.iter().zip(rows) {
        match row? {
            Some(r) => out.records.push(r),
            None => out.skipped.push(beta.to_string()),
        }
    }
    Ok(out)
}
