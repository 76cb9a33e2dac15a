//! Genus-0 counts `N_β` on del Pezzo surfaces.
//!
//! `N_β` is the number of rational curves in class `β` through `δ_β` general
//! points. Counts are seeded on the classes where every associativity
//! relation degenerates and obtained everywhere else by solving one of the
//! relations in [`relations`] for the unknown. Results are memoized under the
//! canonical form of the class.
//!
//! Recursion is well founded: both parts of a splitting have anticanonical
//! degree at least 1, so each is strictly smaller than `β`.

pub mod cache;
pub mod consistency;
pub mod relations;

use std::collections::HashSet;
use std::sync::OnceLock;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{enumerate_minus_one_classes, DivisorClass, SurfaceModel, MAX_POINTS};
use relations::{PreparedClass, RelationKind, WdvvRelation};

pub use cache::CacheLoadReport;
pub use consistency::{ConsistencyEntry, ConsistencyReport};

/// `N_{-K}` at `k = 8`: the pencil of cubics through eight points has twelve nodal members.
pub const ANTICANONICAL_SEED_K8: u64 = 12;

/// Memoized `N_β` solver shared by all surfaces.
///
/// The memo table is insert-only; concurrent callers may duplicate work but
/// always store identical values.
pub struct GwEngine {
    memo: DashMap<DivisorClass, BigInt>,
    minus_one: [OnceLock<HashSet<DivisorClass>>; MAX_POINTS + 1],
}

impl Default for GwEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl GwEngine {
    pub fn new() -> Self {
        GwEngine {
            memo: DashMap::new(),
            minus_one: Default::default(),
        }
    }

    fn minus_one_set(&self, k: usize) -> &HashSet<DivisorClass> {
        self.minus_one[k].get_or_init(|| {
            let s = SurfaceModel::new(k).expect("k checked by caller");
            enumerate_minus_one_classes(&s).into_iter().collect()
        })
    }

    pub fn is_minus_one_class(&self, beta: &DivisorClass) -> bool {
        beta.k() <= MAX_POINTS && self.minus_one_set(beta.k()).contains(beta)
    }

    /// Base data for the recursion: `(-1)`-classes, `L` and `L - E_i` count 1,
    /// and `-K` counts 12 at `k = 8`.
    pub fn seed_value(&self, surface: &SurfaceModel, beta: &DivisorClass) -> Option<u64> {
        if beta.k() != surface.k() {
            return None;
        }
        if self.is_minus_one_class(beta) {
            return Some(1);
        }
        if beta.d() == 1 {
            let ones = beta.m().iter().filter(|&&x| x == 1).count();
            let zeros = beta.m().iter().filter(|&&x| x == 0).count();
            if zeros == beta.k() || (ones == 1 && zeros + 1 == beta.k()) {
                return Some(1);
            }
        }
        if surface.k() == 8 && *beta == surface.anticanonical() {
            return Some(ANTICANONICAL_SEED_K8);
        }
        None
    }

    /// Every seed class on `surface` with its value, sorted by class.
    pub fn seed_classes(&self, surface: &SurfaceModel) -> Vec<(DivisorClass, u64)> {
        let k = surface.k();
        let mut classes: Vec<DivisorClass> = surface.minus_one_classes();
        classes.push(surface.line());
        for i in 0..k {
            let mut m = vec![0; k];
            m[i] = 1;
            classes.push(DivisorClass::new(1, m));
        }
        if k == 8 {
            classes.push(surface.anticanonical());
        }
        classes.sort();
        classes.dedup();
        classes
            .into_iter()
            .map(|c| {
                let v = self.seed_value(surface, &c).expect("seed class");
                (c, v)
            })
            .collect()
    }

    /// True when `N_β = 0` is certain: no irreducible rational curve can live in `β`.
    pub fn quick_vanishing(&self, surface: &SurfaceModel, beta: &DivisorClass) -> bool {
        let d = beta.d();
        if d < 0 {
            return true;
        }
        if d == 0 {
            return beta.exceptional_index().is_none();
        }
        if beta.m().iter().any(|&x| x < 0 || x > d) {
            return true;
        }
        let delta = beta.delta();
        if delta < 0 || beta.arithmetic_genus() < 0 {
            return true;
        }
        delta == 0 && self.seed_value(surface, beta).is_none()
    }

    /// Ordered pairs `(β1, β2)` with `β1 + β2 = β`, both nonzero and neither
    /// certainly vanishing. Sorted by `d1`, then by exceptional index or `m1`.
    pub fn enumerate_splittings(
        &self,
        surface: &SurfaceModel,
        beta: &DivisorClass,
    ) -> Result<Vec<(DivisorClass, DivisorClass)>> {
        surface.check(beta)?;
        if beta.m().iter().any(|&x| x < -1) {
            return Err(Error::Precondition(format!(
                "splittings need every m_i >= -1, got {beta}"
            )));
        }
        let k = surface.k();
        let d = beta.d();
        let mut out = Vec::new();
        let mut push = |first: DivisorClass, second: DivisorClass| {
            if !self.quick_vanishing(surface, &first) && !self.quick_vanishing(surface, &second) {
                out.push((first, second));
            }
        };
        if d < 0 {
            return Ok(out);
        }
        // d1 = 0: the first part is some E_i.
        for i in 0..k {
            let e = surface.exceptional(i);
            let rest = beta - &e;
            push(e, rest);
        }
        // Both parts of positive degree.
        for d1 in 1..d {
            let d2 = d - d1;
            let ranges: Vec<(i64, i64)> = beta
                .m()
                .iter()
                .map(|&mi| ((mi - d2).max(0), mi.min(d1)))
                .collect();
            if ranges.iter().any(|(lo, hi)| lo > hi) {
                continue;
            }
            let mut m1: Vec<i64> = ranges.iter().map(|r| r.0).collect();
            loop {
                let first = DivisorClass::new(d1, m1.clone());
                let second = beta - &first;
                push(first, second);
                if !advance(&mut m1, &ranges) {
                    break;
                }
            }
        }
        // d2 = 0: the second part is some E_i.
        if d > 0 {
            for i in 0..k {
                let e = surface.exceptional(i);
                let rest = beta - &e;
                push(rest, e);
            }
        }
        Ok(out)
    }

    /// Fixed-order divisor pool: `L`, `E_1..E_k`, `-K`, `L - E_i`, `L - E_i - E_j`.
    pub fn divisor_pool(surface: &SurfaceModel) -> Vec<DivisorClass> {
        let k = surface.k();
        let mut pool = vec![surface.line()];
        pool.extend((0..k).map(|i| surface.exceptional(i)));
        pool.push(surface.anticanonical());
        for i in 0..k {
            let mut m = vec![0; k];
            m[i] = 1;
            pool.push(DivisorClass::new(1, m));
        }
        for i in 0..k {
            for j in i + 1..k {
                let mut m = vec![0; k];
                m[i] = 1;
                m[j] = 1;
                pool.push(DivisorClass::new(1, m));
            }
        }
        pool
    }

    /// `N_β`, the number of rational curves in `β` through `δ_β` general points.
    pub fn n_beta(&self, surface: &SurfaceModel, beta: &DivisorClass) -> Result<BigInt> {
        surface.check(beta)?;
        if let Some(v) = self.seed_value(surface, beta) {
            return Ok(BigInt::from(v));
        }
        if self.quick_vanishing(surface, beta) {
            return Ok(BigInt::zero());
        }
        let key = beta.canonical_form();
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let value = self.solve(surface, &key)?;
        if value.sign() == num_bigint::Sign::Minus {
            return Err(Error::Inconsistent {
                class: key.to_string(),
                detail: format!("solved to a negative count {value}"),
            });
        }
        self.memo.insert(key, value.clone());
        Ok(value)
    }

    /// Like [`n_beta`](Self::n_beta) but solves the relation for `β` in its
    /// given coordinate order instead of reading the memo for its canonical form.
    pub fn n_beta_direct(&self, surface: &SurfaceModel, beta: &DivisorClass) -> Result<BigInt> {
        surface.check(beta)?;
        if let Some(v) = self.seed_value(surface, beta) {
            return Ok(BigInt::from(v));
        }
        if self.quick_vanishing(surface, beta) {
            return Ok(BigInt::zero());
        }
        self.solve(surface, beta)
    }

    /// The relation `n_beta` solves for `β`, or `None` for seeds and filtered classes.
    pub fn solving_relation_for(&self, surface: &SurfaceModel, beta: &DivisorClass) -> Result<Option<WdvvRelation>> {
        surface.check(beta)?;
        if self.seed_value(surface, beta).is_some() || self.quick_vanishing(surface, beta) {
            return Ok(None);
        }
        self.solving_relation(surface, beta).map(Some)
    }

    /// The first nondegenerate relation for a non-seed, non-vanishing class.
    fn solving_relation(&self, surface: &SurfaceModel, beta: &DivisorClass) -> Result<WdvvRelation> {
        let prep = PreparedClass::new(self, surface, beta)?;
        if prep.delta >= 3 {
            let mk = surface.anticanonical();
            return Ok(prep.relation(RelationKind::R1, &[mk.clone(), mk]));
        }
        let pool = Self::divisor_pool(surface);
        let mut tried = 0usize;
        for kind in [RelationKind::R2, RelationKind::R3] {
            if prep.delta < kind.min_delta() {
                continue;
            }
            let mut found = None;
            for_each_tuple(pool.len(), kind.arity(), |idx| {
                tried += 1;
                let tuple: Vec<DivisorClass> = idx.iter().map(|&i| pool[i].clone()).collect();
                if prep.lhs(kind, &tuple) != 0 {
                    found = Some(tuple);
                    return false;
                }
                true
            });
            if let Some(tuple) = found {
                return Ok(prep.relation(kind, &tuple));
            }
        }
        Err(Error::Underdetermined {
            class: beta.to_string(),
            diagnostics: format!(
                "δ = {}, k = {}, pool of {} divisors, {} tuples tried; add a seed for this class",
                prep.delta,
                surface.k(),
                pool.len(),
                tried
            ),
        })
    }

    fn solve(&self, surface: &SurfaceModel, beta: &DivisorClass) -> Result<BigInt> {
        let relation = self.solving_relation(surface, beta)?;
        relation
            .implied_value()
            .expect("solving relation is nondegenerate")
    }

    /// Number of memoized (computed, non-seed) values.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Memoized entries sorted by `(k, class)`.
    pub fn memo_entries(&self) -> Vec<(DivisorClass, BigInt)> {
        let mut v: Vec<_> = self
            .memo
            .iter()
            .map(|e| (e.key().clone(), e.value().clone()))
            .collect();
        v.sort_by(|a, b| a.0.k().cmp(&b.0.k()).then_with(|| a.0.cmp(&b.0)));
        v
    }

    pub(crate) fn memo_get(&self, key: &DivisorClass) -> Option<BigInt> {
        self.memo.get(key).map(|v| v.clone())
    }

    pub(crate) fn memo_insert(&self, key: DivisorClass, value: BigInt) {
        self.memo.insert(key, value);
    }
}

/// Steps `m` to the next point of the box `ranges`, last coordinate fastest.
fn advance(m: &mut [i64], ranges: &[(i64, i64)]) -> bool {
    for pos in (0..m.len()).rev() {
        if m[pos] < ranges[pos].1 {
            m[pos] += 1;
            for j in pos + 1..m.len() {
                m[j] = ranges[j].0;
            }
            return true;
        }
    }
    false
}

/// Visits every index tuple in `0..n` of length `arity`, first index slowest.
/// Stops early when `visit` returns false.
pub(crate) fn for_each_tuple(n: usize, arity: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if n == 0 {
        return;
    }
    let mut idx = vec![0usize; arity];
    loop {
        if !visit(&idx) {
            return;
        }
        let mut pos = arity;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
        }
    }
}
