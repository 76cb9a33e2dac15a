//! Verification suites shared by the CLI and the test suites.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::engine::GwEngine;
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel};

/// Seed for every randomized suite, so reruns see the same classes.
pub const DEFAULT_SEED: u64 = 0x5eed_d9c0;

/// `N_{dL}` on the plane for `d = 1..7`.
pub const PLANE_COUNTS: [u64; 7] = [1, 1, 12, 620, 87304, 26312976, 14616808192];

/// Number of `(-1)`-classes for `k = 0..8`.
pub const MINUS_ONE_COUNTS: [usize; 9] = [0, 1, 3, 6, 10, 16, 27, 56, 240];

/// Cuspidal counts on the plane for `d = 2..5`.
pub const PLANE_CUSP_COUNTS: [(i64, u64); 4] = [(2, 0), (3, 24), (4, 2304), (5, 435168)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Classical,
    Consistency,
    Symmetry,
    Blowup,
    Cremona,
    Specialization,
    Integrality,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Classical,
        Suite::Consistency,
        Suite::Symmetry,
        Suite::Blowup,
        Suite::Cremona,
        Suite::Specialization,
        Suite::Integrality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Classical => "classical",
            Suite::Consistency => "consistency",
            Suite::Symmetry => "symmetry",
            Suite::Blowup => "blowup",
            Suite::Cremona => "cremona",
            Suite::Specialization => "specialization",
            Suite::Integrality => "integrality",
        }
    }

    pub fn run(self, engine: &GwEngine) -> SuiteReport {
        match self {
            Suite::Classical => classical(engine),
            Suite::Consistency => consistency(engine, 200, DEFAULT_SEED),
            Suite::Symmetry => symmetry(engine, 100, DEFAULT_SEED),
            Suite::Blowup => blowup(engine, 5, 3),
            Suite::Cremona => cremona(engine, 6),
            Suite::Specialization => specialization(engine, 5, 4),
            Suite::Integrality => integrality(engine, 4, 14),
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn record<T>(&mut self, r: Result<T>, context: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                self.failures.push(format!("{}: {e}", context()));
                None
            }
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {} checks, {} failures", self.name, self.checks, self.failures.len())?;
        for failure in &self.failures {
            write!(f, "\n  {failure}")?;
        }
        Ok(())
    }
}

fn surface(k: usize) -> SurfaceModel {
    SurfaceModel::new(k).expect("k <= 8")
}

/// Plane counts, `(-1)`-class counts and the classical cuspidal counts.
pub fn classical(engine: &GwEngine) -> SuiteReport {
    let mut rep = SuiteReport::new("classical");
    let plane = surface(0);
    for (i, &expect) in PLANE_COUNTS.iter().enumerate() {
        let d = i as i64 + 1;
        let beta = DivisorClass::new(d, vec![]);
        if let Some(n) = rep.record(engine.n_beta(&plane, &beta), || format!("N_{d}L")) {
            rep.check(n == BigInt::from(expect), || format!("N_{d}L = {n}, expected {expect}"));
        }
    }
    for (k, &expect) in MINUS_ONE_COUNTS.iter().enumerate() {
        let got = surface(k).minus_one_classes().len();
        rep.check(got == expect, || format!("k={k}: {got} (-1)-classes, expected {expect}"));
    }
    for (d, expect) in PLANE_CUSP_COUNTS {
        let beta = DivisorClass::new(d, vec![]);
        if let Some(c) = rep.record(engine.c_beta(&plane, &beta), || format!("C_{d}L")) {
            rep.check(c.value == BigInt::from(expect), || {
                format!("C_{d}L = {}, expected {expect}", c.value)
            });
        }
    }
    rep
}

/// Random classes with `k <= 4`, `1 <= δ <= 10` that are not filtered out.
pub fn random_classes(engine: &GwEngine, count: usize, max_delta: i64, seed: u64) -> Vec<DivisorClass> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count && attempts < 1_000_000 {
        attempts += 1;
        let k = rng.random_range(0..=4usize);
        let d = rng.random_range(1..=6i64);
        let m: Vec<i64> = (0..k).map(|_| rng.random_range(0..=d)).collect();
        let beta = DivisorClass::new(d, m);
        let delta = beta.delta();
        if !(1..=max_delta).contains(&delta) || engine.quick_vanishing(&surface(k), &beta) {
            continue;
        }
        if seen.insert(beta.clone()) {
            out.push(beta);
        }
    }
    out
}

/// Every nondegenerate pool relation agrees with `N_β` on random classes.
pub fn consistency(engine: &GwEngine, samples: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("consistency");
    for beta in random_classes(engine, samples, 10, seed) {
        let s = surface(beta.k());
        let r = engine.consistency_check(&s, &beta, usize::MAX);
        if rep.record(r, || beta.to_string()).is_some() {
            rep.checks += 1;
        }
    }
    rep
}

/// `N` and `C` are unchanged by shuffling the multiplicities.
pub fn symmetry(engine: &GwEngine, samples: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("symmetry");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a);
    let mut classes = Vec::new();
    while classes.len() < samples {
        let k = rng.random_range(2..=5usize);
        let d = rng.random_range(1..=6i64);
        let m: Vec<i64> = (0..k).map(|_| rng.random_range(0..=d.min(3))).collect();
        let beta = DivisorClass::new(d, m);
        if beta.delta() >= 1 && beta.delta() <= 12 {
            classes.push(beta);
        }
    }
    for beta in classes {
        let s = surface(beta.k());
        let mut perm: Vec<usize> = (0..beta.k()).collect();
        perm.shuffle(&mut rng);
        let shuffled = beta.permuted(&perm);
        let pair = engine
            .n_beta_direct(&s, &beta)
            .and_then(|a| Ok((a, engine.n_beta_direct(&s, &shuffled)?)));
        if let Some((a, b)) = rep.record(pair, || format!("N at {beta}")) {
            rep.check(a == b, || format!("N_{beta} = {a} but N_{shuffled} = {b}"));
        }
        let pair = engine
            .c_beta(&s, &beta)
            .and_then(|a| Ok((a, engine.c_beta(&s, &shuffled)?)));
        if let Some((a, b)) = rep.record(pair, || format!("C at {beta}")) {
            rep.check(a.value == b.value && a.valid == b.valid, || {
                format!("C_{beta} = {} but C_{shuffled} = {}", a.value, b.value)
            });
        }
    }
    rep
}

/// `C` at `(d; pattern)` equals `C_{dL}` for `2 <= d <= dmax`, `k <= max_k`
/// and every 0/1 pattern (at most three ones when `k <= 3`).
pub fn blowup(engine: &GwEngine, dmax: i64, max_k: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("blowup");
    for k in 1..=max_k {
        let s = surface(k);
        for mask in 0u32..(1 << k) {
            if mask.count_ones() > 3 {
                continue;
            }
            let pattern: Vec<bool> = (0..k).map(|i| mask & (1 << i) != 0).collect();
            for d in 2..=dmax {
                let r = engine.blowup_invariance_check(&s, d, &pattern);
                if let Some(ok) = rep.record(r, || format!("d={d} pattern={mask:0k$b}")) {
                    rep.check(ok, || format!("C at d={d}, k={k}, pattern {mask:0k$b} differs from C_{d}L"));
                }
            }
        }
    }
    rep
}

/// `N` at `(d; 1×r, 0, ...)` equals `N_{dL}` for `r <= min(k, 3d-2)`.
pub fn specialization(engine: &GwEngine, dmax: i64, max_k: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("specialization");
    let plane = surface(0);
    for d in 1..=dmax {
        let Some(expect) = rep.record(engine.n_beta(&plane, &DivisorClass::new(d, vec![])), || format!("N_{d}L")) else {
            continue;
        };
        for k in 1..=max_k {
            let s = surface(k);
            for r in 1..=k.min((3 * d - 2) as usize) {
                let m: Vec<i64> = (0..k).map(|i| (i < r) as i64).collect();
                let beta = DivisorClass::new(d, m);
                if let Some(n) = rep.record(engine.n_beta(&s, &beta), || beta.to_string()) {
                    rep.check(n == expect, || format!("N_{beta} = {n}, expected N_{d}L = {expect}"));
                }
            }
        }
    }
    rep
}

/// Admissible classes for the integrality sweep: canonical, `m_i >= 0`,
/// `1 <= δ <= max_delta`, not filtered. Stops once a whole degree yields nothing.
pub fn admissible_classes(engine: &GwEngine, k: usize, max_delta: i64) -> Vec<DivisorClass> {
    let s = surface(k);
    let mut out = Vec::new();
    let mut d = 1i64;
    let mut empty_run = 0;
    while empty_run < 3 {
        let before = out.len();
        let mut m = Vec::with_capacity(k);
        canonical_vectors(k, d, &mut m, &mut |m| {
            let beta = DivisorClass::new(d, m.to_vec());
            let delta = beta.delta();
            if (1..=max_delta).contains(&delta) && !engine.quick_vanishing(&s, &beta) {
                out.push(beta);
            }
        });
        empty_run = if out.len() == before && d > max_delta { empty_run + 1 } else { 0 };
        d += 1;
    }
    out
}

fn canonical_vectors(len: usize, cap: i64, m: &mut Vec<i64>, emit: &mut impl FnMut(&[i64])) {
    if m.len() == len {
        emit(m);
        return;
    }
    for x in 0..=cap {
        m.push(x);
        canonical_vectors(len, x, m, emit);
        m.pop();
    }
}

/// Every `C_β` with `k <= max_k`, `δ <= max_delta` is an integer and equals
/// the sum of its two terms; proved-valid counts are nonnegative.
pub fn integrality(engine: &GwEngine, max_k: usize, max_delta: i64) -> SuiteReport {
    let mut rep = SuiteReport::new("integrality");
    for k in 0..=max_k {
        let s = surface(k);
        for beta in admissible_classes(engine, k, max_delta) {
            match engine.c_beta(&s, &beta) {
                Ok(c) => {
                    let sum = &c.first_term + &c.boundary_term;
                    rep.check(sum.is_integer() && sum.to_integer() == c.value, || {
                        format!("C_{beta}: terms sum to {sum}, value {}", c.value)
                    });
                    rep.check(!c.valid || c.value >= BigInt::from(0), || {
                        format!("C_{beta} = {} is negative but flagged valid", c.value)
                    });
                }
                Err(e @ Error::Inconsistent { .. }) => {
                    rep.check(false, || format!("C_{beta}: {e}"));
                }
                Err(e) => {
                    rep.check(false, || format!("C_{beta}: unexpected error {e}"));
                }
            }
        }
    }
    rep
}

/// `N` is unchanged by the quadratic transformation at the first three
/// points, on classes with `d <= dmax` and `k ∈ {3, 4}` where neither side is
/// filtered. Expected but not gating.
pub fn cremona(engine: &GwEngine, dmax: i64) -> SuiteReport {
    let mut rep = SuiteReport::new("cremona");
    for k in 3..=4 {
        let s = surface(k);
        for d in 1..=dmax {
            let mut m = vec![0i64; k];
            loop {
                let beta = DivisorClass::new(d, m.clone());
                let image = beta.cremona().expect("k >= 3");
                if !engine.quick_vanishing(&s, &beta) && !engine.quick_vanishing(&s, &image) {
                    let pair = engine
                        .n_beta(&s, &beta)
                        .and_then(|a| Ok((a, engine.n_beta(&s, &image)?)));
                    if let Some((a, b)) = rep.record(pair, || beta.to_string()) {
                        rep.check(a == b, || format!("N_{beta} = {a} but N_{image} = {b}"));
                    }
                }
                let mut pos = 0;
                while pos < k && m[pos] == d {
                    m[pos] = 0;
                    pos += 1;
                }
                if pos == k {
                    break;
                }
                m[pos] += 1;
            }
        }
    }
    rep
}
