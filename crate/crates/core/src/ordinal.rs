//! Ordinal vector algebra.
//!
//! Levels are integers in `1..=K` where 1 is the best level and `K` the worst.
//! Paths are compared through their level sequences after sorting; vectors of
//! unequal length are compared on the overlapping best/worst portion.
//!
//! Two dominance routes live here: [`dominates`] works on explicit sorted
//! sequences, [`FrequencyVector::dominates`] works on per-level counts in
//! `O(K)` without materialising the sequence. The solvers use the latter.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

/// An ordinal level; `1` is best.
pub type Level = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("prefix/suffix length {m} exceeds vector length {len}")]
    OutOfRange { m: usize, len: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("level {level} outside scale 1..={k}")]
    LevelOutOfScale { level: Level, k: u32 },
    #[error("ordinal scale must have at least one level")]
    EmptyScale,
    #[error("cannot parse vector: {0}")]
    Parse(String),
}

/// Number of totally ordered levels `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrdinalScale(u32);

impl OrdinalScale {
    pub fn new(k: u32) -> Result<Self, OrdinalError> {
        if k == 0 {
            return Err(OrdinalError::EmptyScale);
        }
        Ok(OrdinalScale(k))
    }

    pub fn k(self) -> u32 {
        self.0
    }

    pub fn contains(self, level: Level) -> bool {
        (1..=self.0).contains(&level)
    }

    pub fn levels(self) -> impl Iterator<Item = Level> {
        1..=self.0
    }
}

impl fmt::Display for OrdinalScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Levels of a path in traversal order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct OrdinalVector(pub Vec<Level>);

/// Levels in non-decreasing order (best first).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SortedOrdinalVector(Vec<Level>);

impl OrdinalVector {
    pub fn new(levels: Vec<Level>) -> Self {
        OrdinalVector(levels)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn levels(&self) -> &[Level] {
        &self.0
    }

    /// Multiset-preserving non-decreasing rearrangement.
    pub fn sorted(&self) -> SortedOrdinalVector {
        let mut levels = self.0.clone();
        levels.sort_unstable();
        SortedOrdinalVector(levels)
    }

    /// The `m` best levels, ascending.
    pub fn sort_forw(&self, m: usize) -> Result<SortedOrdinalVector, OrdinalError> {
        self.sorted().best(m)
    }

    /// The `m` worst levels, ascending.
    pub fn sort_backw(&self, m: usize) -> Result<SortedOrdinalVector, OrdinalError> {
        self.sorted().worst(m)
    }
}

impl From<Vec<Level>> for OrdinalVector {
    fn from(levels: Vec<Level>) -> Self {
        OrdinalVector(levels)
    }
}

impl SortedOrdinalVector {
    /// Sorts `levels` on construction.
    pub fn new(mut levels: Vec<Level>) -> Self {
        levels.sort_unstable();
        SortedOrdinalVector(levels)
    }

    pub fn empty() -> Self {
        SortedOrdinalVector(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn levels(&self) -> &[Level] {
        &self.0
    }

    pub fn best(&self, m: usize) -> Result<SortedOrdinalVector, OrdinalError> {
        if m > self.len() {
            return Err(OrdinalError::OutOfRange { m, len: self.len() });
        }
        Ok(SortedOrdinalVector(self.0[..m].to_vec()))
    }

    pub fn worst(&self, m: usize) -> Result<SortedOrdinalVector, OrdinalError> {
        if m > self.len() {
            return Err(OrdinalError::OutOfRange { m, len: self.len() });
        }
        Ok(SortedOrdinalVector(self.0[self.len() - m..].to_vec()))
    }
}

impl fmt::Display for SortedOrdinalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, level) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{level}")?;
        }
        Ok(())
    }
}

impl FromStr for SortedOrdinalVector {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(SortedOrdinalVector::empty());
        }
        let levels = s
            .split(',')
            .map(|tok| tok.trim().parse::<Level>().map_err(|e| OrdinalError::Parse(format!("{tok:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if levels.windows(2).any(|w| w[0] > w[1]) {
            return Err(OrdinalError::Parse(format!("{s:?} is not ascending")));
        }
        Ok(SortedOrdinalVector(levels))
    }
}

pub fn sort_vector(v: &OrdinalVector) -> SortedOrdinalVector {
    v.sorted()
}

/// `x[i] <= y[i]` for every `i`; both vectors must have the same length.
pub fn leq_componentwise(x: &SortedOrdinalVector, y: &SortedOrdinalVector) -> Result<bool, OrdinalError> {
    if x.len() != y.len() {
        return Err(OrdinalError::LengthMismatch { left: x.len(), right: y.len() });
    }
    Ok(slice_leq(&x.0, &y.0))
}

fn slice_leq(x: &[Level], y: &[Level]) -> bool {
    x.iter().zip(y).all(|(a, b)| a <= b)
}

/// Ordinal dominance of `a` over `b`.
///
/// With `m = len(a)` and `n = len(b)`: equal lengths compare componentwise;
/// if `a` is longer its `n` worst levels are compared against `b`; if `a` is
/// shorter it is compared against the `m` best levels of `b`. The empty
/// vector dominates everything.
pub fn dominates(a: &SortedOrdinalVector, b: &SortedOrdinalVector) -> bool {
    let (m, n) = (a.len(), b.len());
    match m.cmp(&n) {
        Ordering::Equal => slice_leq(&a.0, &b.0),
        Ordering::Greater => slice_leq(&a.0[m - n..], &b.0),
        Ordering::Less => slice_leq(&a.0, &b.0[..m]),
    }
}

/// Dominance with distinct sorted vectors. Not asymmetric: `(j)` and `(j,j)`
/// strictly dominate each other.
pub fn strictly_dominates(a: &SortedOrdinalVector, b: &SortedOrdinalVector) -> bool {
    a != b && dominates(a, b)
}

/// Dominance in one direction only: `a` dominates `b` and `b` does not
/// dominate `a`.
pub fn one_sided_dominates(a: &SortedOrdinalVector, b: &SortedOrdinalVector) -> bool {
    dominates(a, b) && !dominates(b, a)
}

/// Distinct vectors not strictly dominated by any other member.
///
/// This is the literal efficiency test: a mutually dominating pair such as
/// `(1)` and `(1,1)` removes both. See [`frontier_filter`] for the rule the
/// labeling algorithm applies at the sink.
pub fn nondominated_filter(vs: &[SortedOrdinalVector]) -> Vec<SortedOrdinalVector> {
    let distinct = dedup_sorted(vs);
    distinct.iter().filter(|v| !distinct.iter().any(|u| strictly_dominates(u, v))).cloned().collect()
}

/// Distinct vectors not one-sidedly dominated by any other member.
///
/// Mutually dominating pairs survive together. This matches the sink update
/// of the labeling algorithm and is what the oracle reports.
pub fn frontier_filter(vs: &[SortedOrdinalVector]) -> Vec<SortedOrdinalVector> {
    let distinct = dedup_sorted(vs);
    distinct.iter().filter(|v| !distinct.iter().any(|u| one_sided_dominates(u, v))).cloned().collect()
}

fn dedup_sorted(vs: &[SortedOrdinalVector]) -> Vec<SortedOrdinalVector> {
    let mut distinct = vs.to_vec();
    distinct.sort();
    distinct.dedup();
    distinct
}

/// Per-level arc counts `(h(P,1), ..., h(P,K))`.
///
/// The derived `Ord` is the lexicographic order on counts: at the first
/// differing level, more arcs is greater. Equal `K` is assumed when comparing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FrequencyVector(Box<[u32]>);

impl FrequencyVector {
    pub fn zeros(k: OrdinalScale) -> Self {
        FrequencyVector(vec![0; k.k() as usize].into_boxed_slice())
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        FrequencyVector(counts.into_boxed_slice())
    }

    pub fn from_levels(levels: &[Level], k: OrdinalScale) -> Result<Self, OrdinalError> {
        let mut freq = Self::zeros(k);
        for &level in levels {
            if !k.contains(level) {
                return Err(OrdinalError::LevelOutOfScale { level, k: k.k() });
            }
            freq.0[level as usize - 1] += 1;
        }
        Ok(freq)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// Count at `level` (1-based).
    pub fn count(&self, level: Level) -> u32 {
        self.0[level as usize - 1]
    }

    /// Length of the underlying vector.
    pub fn total(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    /// Copy with one more arc at `level`.
    pub fn incremented(&self, level: Level) -> Self {
        let mut next = self.clone();
        next.0[level as usize - 1] += 1;
        next
    }

    pub fn to_sorted(&self) -> SortedOrdinalVector {
        let mut levels = Vec::with_capacity(self.total());
        for (i, &c) in self.0.iter().enumerate() {
            levels.extend(std::iter::repeat_n(i as Level + 1, c as usize));
        }
        SortedOrdinalVector(levels)
    }

    /// Ordinal dominance computed on counts.
    ///
    /// For equal lengths, `a <= b` componentwise after sorting iff for every
    /// level `l` the number of entries `<= l` in `a` is at least that in `b`.
    /// Dropping the `d` best entries of the longer vector lowers each of its
    /// cumulative counts by `d` (floored at zero); keeping the `m` best of the
    /// longer one caps its cumulative counts at `m`.
    pub fn dominates(&self, other: &FrequencyVector) -> bool {
        debug_assert_eq!(self.k(), other.k());
        let (m, n) = (self.total(), other.total());
        let (mut cum_a, mut cum_b) = (0usize, 0usize);
        for (&ca, &cb) in self.0.iter().zip(other.0.iter()) {
            cum_a += ca as usize;
            cum_b += cb as usize;
            let ok = if m >= n { cum_a.saturating_sub(m - n) >= cum_b } else { cum_a >= cum_b.min(m) };
            if !ok {
                return false;
            }
        }
        true
    }

    /// Componentwise comparison of the sorted forms; `None` on length mismatch.
    pub fn leq_same_length(&self, other: &FrequencyVector) -> Option<bool> {
        if self.total() != other.total() {
            return None;
        }
        Some(self.dominates(other))
    }

    pub fn one_sided_dominates(&self, other: &FrequencyVector) -> bool {
        self.dominates(other) && !other.dominates(self)
    }
}

impl fmt::Display for FrequencyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for FrequencyVector {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let counts = s
            .trim()
            .split('|')
            .map(|tok| tok.trim().parse::<u32>().map_err(|e| OrdinalError::Parse(format!("{tok:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FrequencyVector::from_counts(counts))
    }
}

pub fn freq_vector(v: &OrdinalVector, k: OrdinalScale) -> Result<FrequencyVector, OrdinalError> {
    FrequencyVector::from_levels(v.levels(), k)
}

pub fn sorted_from_freq(s: &FrequencyVector) -> SortedOrdinalVector {
    s.to_sorted()
}

/// `s1 == s2`, or `s1` has more arcs at the first level where they differ.
pub fn lex_ge(s1: &FrequencyVector, s2: &FrequencyVector) -> Result<bool, OrdinalError> {
    if s1.k() != s2.k() {
        return Err(OrdinalError::LengthMismatch { left: s1.k(), right: s2.k() });
    }
    Ok(s1 >= s2)
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::default();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Upper bound on the number of distinct sorted vectors of `s`-`v` paths in a
/// DAG with `n` nodes: multisets of size `1..n` over `K` levels, in closed
/// form `n * C(K+n-1, n) / K - 1`.
pub fn label_bound(n: u64, k: OrdinalScale) -> BigUint {
    assert!(n >= 1, "label_bound needs at least one node");
    let k = u64::from(k.k());
    binomial(k + n - 1, n) * n / k - BigUint::one()
}
