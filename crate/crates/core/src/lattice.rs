//! The Picard lattice of the plane blown up at `k <= 8` general points.
//!
//! A class is stored as `dL - m_1 E_1 - ... - m_k E_k`, so the exceptional
//! curve `E_i` itself has `m_i = -1`. The intersection pairing has signature
//! `(1, k)`: `L·L = 1`, `E_i·E_j = -δ_ij`, `L·E_i = 0`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of blown-up points for which the surface is del Pezzo.
pub const MAX_POINTS: usize = 8;

/// Largest absolute coordinate accepted by the class parser.
pub const MAX_COORDINATE: i64 = 1_000_000;

/// The plane blown up at `k` general points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurfaceModel {
    k: usize,
}

impl SurfaceModel {
    pub fn new(k: usize) -> Result<Self> {
        if k > MAX_POINTS {
            return Err(Error::TooManyPoints(k));
        }
        Ok(SurfaceModel { k })
    }

    /// The surface `class` lives on.
    pub fn of(class: &DivisorClass) -> Result<Self> {
        Self::new(class.k())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `x₁·x₁ = K² = 9 - k`.
    pub fn c1_sq(&self) -> i64 {
        9 - self.k as i64
    }

    /// Topological Euler number `x₂([X]) = 3 + k`.
    pub fn euler(&self) -> i64 {
        3 + self.k as i64
    }

    /// `x₁ = -K = 3L - ΣE_i`.
    pub fn anticanonical(&self) -> DivisorClass {
        DivisorClass::new(3, vec![1; self.k])
    }

    pub fn line(&self) -> DivisorClass {
        DivisorClass::new(1, vec![0; self.k])
    }

    /// The exceptional class `E_i`, zero-based.
    pub fn exceptional(&self, i: usize) -> DivisorClass {
        assert!(i < self.k, "exceptional index {i} out of range for k = {}", self.k);
        let mut m = vec![0; self.k];
        m[i] = -1;
        DivisorClass::new(0, m)
    }

    pub fn zero(&self) -> DivisorClass {
        DivisorClass::new(0, vec![0; self.k])
    }

    /// Fails unless `class` lives on this surface.
    pub fn check(&self, class: &DivisorClass) -> Result<()> {
        if class.k() != self.k {
            return Err(Error::SurfaceMismatch {
                class: class.to_string(),
                class_k: class.k(),
                surface_k: self.k,
            });
        }
        Ok(())
    }

    /// All `(-1)`-classes, see [`enumerate_minus_one_classes`].
    pub fn minus_one_classes(&self) -> Vec<DivisorClass> {
        enumerate_minus_one_classes(self)
    }
}

/// A second-homology class `dL - Σ m_i E_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisorClass {
    d: i64,
    m: Vec<i64>,
}

impl DivisorClass {
    pub fn new(d: i64, m: Vec<i64>) -> Self {
        DivisorClass { d, m }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn m(&self) -> &[i64] {
        &self.m
    }

    pub fn k(&self) -> usize {
        self.m.len()
    }

    pub fn is_zero(&self) -> bool {
        self.d == 0 && self.m.iter().all(|&x| x == 0)
    }

    /// Intersection number with `other`; both must live on the same surface.
    pub fn intersect(&self, other: &DivisorClass) -> Result<i64> {
        if self.k() != other.k() {
            return Err(Error::SurfaceMismatch {
                class: other.to_string(),
                class_k: other.k(),
                surface_k: self.k(),
            });
        }
        Ok(self.dot(other))
    }

    /// Unchecked pairing for classes already known to share a surface.
    pub(crate) fn dot(&self, other: &DivisorClass) -> i64 {
        debug_assert_eq!(self.k(), other.k());
        self.d * other.d - self.m.iter().zip(&other.m).map(|(a, b)| a * b).sum::<i64>()
    }

    pub fn self_intersection(&self) -> i64 {
        self.dot(self)
    }

    /// `-K·β = 3d - Σ m_i`.
    pub fn anticanonical_degree(&self) -> i64 {
        3 * self.d - self.m.iter().sum::<i64>()
    }

    /// `δ_β = ⟨x₁, β⟩ - 1`, the number of point conditions on a rational curve in this class.
    pub fn delta(&self) -> i64 {
        self.anticanonical_degree() - 1
    }

    /// Adjunction: `p_a = (β² + K·β)/2 + 1`.
    pub fn arithmetic_genus(&self) -> i64 {
        let twice = self.self_intersection() - self.anticanonical_degree();
        // β² ≡ K·β (mod 2) on this lattice.
        debug_assert_eq!(twice.rem_euclid(2), 0);
        twice.div_euclid(2) + 1
    }

    /// Sorts `m` into non-increasing order; blown-up points are interchangeable.
    pub fn canonical_form(&self) -> DivisorClass {
        let mut m = self.m.clone();
        m.sort_unstable_by(|a, b| b.cmp(a));
        DivisorClass { d: self.d, m }
    }

    pub fn is_canonical(&self) -> bool {
        self.m.windows(2).all(|w| w[0] >= w[1])
    }

    /// The exceptional index `i` if this class is `E_i`.
    pub fn exceptional_index(&self) -> Option<usize> {
        if self.d != 0 {
            return None;
        }
        let mut found = None;
        for (i, &x) in self.m.iter().enumerate() {
            match x {
                0 => {}
                -1 if found.is_none() => found = Some(i),
                _ => return None,
            }
        }
        found
    }

    /// Applies a permutation: entry `i` of the result is `m[perm[i]]`.
    pub fn permuted(&self, perm: &[usize]) -> DivisorClass {
        assert_eq!(perm.len(), self.k());
        DivisorClass {
            d: self.d,
            m: perm.iter().map(|&j| self.m[j]).collect(),
        }
    }

    /// Quadratic Cremona transformation centred at the first three points.
    pub fn cremona(&self) -> Option<DivisorClass> {
        if self.k() < 3 {
            return None;
        }
        let (d, m) = (self.d, &self.m);
        let mut out = m.clone();
        out[0] = d - m[1] - m[2];
        out[1] = d - m[0] - m[2];
        out[2] = d - m[0] - m[1];
        Some(DivisorClass {
            d: 2 * d - m[0] - m[1] - m[2],
            m: out,
        })
    }
}

/// Orders by `d`, then `m` lexicographically.
impl Ord for DivisorClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.d.cmp(&other.d).then_with(|| self.m.cmp(&other.m))
    }
}

impl PartialOrd for DivisorClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;

    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.k(), rhs.k(), "adding classes from different surfaces");
        DivisorClass {
            d: self.d + rhs.d,
            m: self.m.iter().zip(&rhs.m).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;

    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.k(), rhs.k(), "subtracting classes from different surfaces");
        DivisorClass {
            d: self.d - rhs.d,
            m: self.m.iter().zip(&rhs.m).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;

    fn neg(self) -> DivisorClass {
        DivisorClass {
            d: -self.d,
            m: self.m.iter().map(|x| -x).collect(),
        }
    }
}

/// Writes the literal form `d;m1,...,mk`.
impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.d)?;
        for (i, x) in self.m.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for DivisorClass {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let err = |reason: String| Error::Parse {
            text: text.to_string(),
            reason,
        };
        let coord = |field: &str, what: &str| -> Result<i64> {
            let v: i64 = field
                .trim()
                .parse()
                .map_err(|_| err(format!("{what} `{}` is not an integer", field.trim())))?;
            if v.abs() > MAX_COORDINATE {
                return Err(err(format!("{what} {v} exceeds the supported magnitude {MAX_COORDINATE}")));
            }
            Ok(v)
        };
        let (d, rest) = text
            .split_once(';')
            .ok_or_else(|| err("expected `d;m1,...,mk`".to_string()))?;
        let d = coord(d, "degree")?;
        let m = if rest.trim().is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|f| coord(f, "multiplicity"))
                .collect::<Result<Vec<_>>>()?
        };
        if m.len() > MAX_POINTS {
            return Err(Error::TooManyPoints(m.len()));
        }
        Ok(DivisorClass { d, m })
    }
}

/// Parses a class literal and returns it with its surface (`k` is the list length).
pub fn parse_class(text: &str) -> Result<(SurfaceModel, DivisorClass)> {
    let class: DivisorClass = text.parse()?;
    Ok((SurfaceModel::of(&class)?, class))
}

/// Search box for `(-1)`-classes. By Cauchy-Schwarz `(3d-1)² <= k(d²+1)`,
/// so `d <= 7` for `k <= 8`; the box is one step larger than any solution
/// and the search asserts that its outer shell stays empty.
const SEARCH_MAX_D: i64 = 7;
const SEARCH_MIN_M: i64 = -1;
const SEARCH_MAX_M: i64 = 4;

/// All lattice classes with `β² = -1` and `-K·β = 1`, sorted by `d` then `m`.
///
/// Lattice solutions coincide with the exceptional curves on a generic
/// blow-up for `k <= 8`; effectiveness is assumed rather than re-proved.
pub fn enumerate_minus_one_classes(surface: &SurfaceModel) -> Vec<DivisorClass> {
    let k = surface.k();
    let mut out = Vec::new();
    let mut m = vec![0i64; k];
    for d in 0..=SEARCH_MAX_D {
        search(d, 0, 3 * d - 1, d * d + 1, &mut m, &mut out);
    }
    for class in &out {
        let on_shell = class.d == SEARCH_MAX_D
            || class.m.contains(&SEARCH_MAX_M)
            || (class.d > 0 && class.m.contains(&SEARCH_MIN_M));
        assert!(!on_shell, "(-1)-class {class} on the search boundary; widen the box");
    }
    out.sort();
    out
}

/// Fills `m[pos..]` so the remaining entries sum to `sum` with squares summing to `sq`.
fn search(d: i64, pos: usize, sum: i64, sq: i64, m: &mut Vec<i64>, out: &mut Vec<DivisorClass>) {
    let left = (m.len() - pos) as i64;
    if left == 0 {
        if sum == 0 && sq == 0 {
            out.push(DivisorClass::new(d, m.clone()));
        }
        return;
    }
    // Each remaining entry lies in [MIN, MAX]; prune infeasible sums early.
    if sum < left * SEARCH_MIN_M || sum > left * SEARCH_MAX_M || sq < 0 {
        return;
    }
    // Σx² >= (Σx)²/n.
    if sum * sum > left * sq {
        return;
    }
    for x in SEARCH_MIN_M..=SEARCH_MAX_M {
        m[pos] = x;
        search(d, pos + 1, sum - x, sq - x * x, m, out);
    }
    m[pos] = 0;
}
