//! Multi-index combinatorics: boxes, down-sets, level and sublevel sets,
//! projections, slices and up-set closures.
//!
//! Exponent sets are kept in a canonical graded order: ascending total
//! degree, and within one degree, lexicographically descending. For `d = 2`
//! this lists `(1,0), (0,1), (2,0), (1,1), (0,2), ...`, which is the usual
//! coordinate order of the moment map `t -> (t1, t2, t1^2, t1 t2, ...)`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A point of `N^d`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    pub fn unit(dim: usize, coord: usize) -> Self {
        let mut entries = vec![0; dim];
        entries[coord] = 1;
        MultiIndex(entries)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.0
    }

    /// Total degree `|i|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise `self <= other` (the product order).
    pub fn precedes(&self, other: &MultiIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Deletes coordinate `coord` (0-based).
    pub fn delete(&self, coord: usize) -> MultiIndex {
        let mut entries = self.0.clone();
        entries.remove(coord);
        MultiIndex(entries)
    }

    /// Splits off the last coordinate.
    pub fn split_last(&self) -> Option<(MultiIndex, u32)> {
        let (&last, rest) = self.0.split_last()?;
        Some((MultiIndex(rest.to_vec()), last))
    }

    pub fn push(&self, value: u32) -> MultiIndex {
        let mut entries = self.0.clone();
        entries.push(value);
        MultiIndex(entries)
    }

    /// Immediate predecessors `i - e_m` for every coordinate with `i_m > 0`.
    pub fn immediate_predecessors(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        (0..self.0.len()).filter(|&m| self.0[m] > 0).map(move |m| {
            let mut entries = self.0.clone();
            entries[m] -= 1;
            MultiIndex(entries)
        })
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
            .then_with(|| self.0.len().cmp(&other.0.len()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (n, e) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(entries: [u32; N]) -> Self {
        MultiIndex(entries.to_vec())
    }
}

/// The box `D(k) = {0..k_1} x ... x {0..k_d}`; `d = 0` is allowed.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct KBox(Vec<u32>);

impl KBox {
    pub fn new(caps: Vec<u32>) -> Result<Self> {
        if caps.contains(&0) {
            return Err(Error::ZeroCap(caps));
        }
        Ok(KBox(caps))
    }

    pub fn caps(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `k_1 + ... + k_d`, the largest degree present in the box.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn sorted(&self) -> KBox {
        let mut caps = self.0.clone();
        caps.sort_unstable();
        KBox(caps)
    }

    /// The box with cap `coord` removed.
    pub fn delete(&self, coord: usize) -> KBox {
        let mut caps = self.0.clone();
        caps.remove(coord);
        KBox(caps)
    }

    /// `(k', k_d)`.
    pub fn split_last(&self) -> Option<(KBox, u32)> {
        let (&last, rest) = self.0.split_last()?;
        Some((KBox(rest.to_vec()), last))
    }

    /// The first `j` caps.
    pub fn prefix(&self, j: usize) -> KBox {
        KBox(self.0[..j].to_vec())
    }

    pub fn contains(&self, index: &MultiIndex) -> bool {
        index.dim() == self.dim() && index.entries().iter().zip(&self.0).all(|(a, k)| a <= k)
    }

    /// Every point of the box, including zero, in odometer order.
    pub fn points(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zero(0)];
        for &cap in &self.0 {
            out = out
                .iter()
                .flat_map(|prefix| (0..=cap).map(move |v| prefix.push(v)))
                .collect();
        }
        out
    }

    /// The level set `V^k_l`, canonically sorted.
    pub fn level(&self, l: i64) -> Vec<MultiIndex> {
        let mut out: Vec<_> = self
            .points()
            .into_iter()
            .filter(|p| i64::from(p.degree()) == l)
            .collect();
        out.sort();
        out
    }

    /// The sublevel set `S^k_l = {a <= k : 1 <= |a| <= l}`, canonically sorted.
    pub fn sublevel(&self, l: i64) -> Vec<MultiIndex> {
        let mut out: Vec<_> = self
            .points()
            .into_iter()
            .filter(|p| p.degree() >= 1 && i64::from(p.degree()) <= l)
            .collect();
        out.sort();
        out
    }
}

impl fmt::Display for KBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (n, c) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

/// The truncated box family `D(k, <= deg_cap)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BoxSpec {
    pub caps: KBox,
    pub deg_cap: u32,
}

impl BoxSpec {
    pub fn new(caps: Vec<u32>, deg_cap: u32) -> Result<Self> {
        if deg_cap == 0 {
            return Err(Error::ZeroDegreeCap);
        }
        Ok(BoxSpec {
            caps: KBox::new(caps)?,
            deg_cap,
        })
    }

    pub fn dim(&self) -> usize {
        self.caps.dim()
    }

    pub fn set(&self) -> ExponentSet {
        ExponentSet::from_box(&self.caps, self.deg_cap)
    }
}

impl fmt::Display for BoxSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "box d={} k={} deg<={}", self.dim(), self.caps, self.deg_cap)
    }
}

/// A finite set of nonzero multi-indices in canonical order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExponentSet {
    dim: usize,
    elements: Vec<MultiIndex>,
    degree: u32,
}

impl ExponentSet {
    pub fn empty(dim: usize) -> Self {
        ExponentSet {
            dim,
            elements: Vec::new(),
            degree: 0,
        }
    }

    /// Builds a set from arbitrary elements; duplicates are merged.
    pub fn from_elements<I>(dim: usize, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = MultiIndex>,
    {
        let mut set = BTreeSet::new();
        for e in elements {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    got: e.dim(),
                    expected: dim,
                    index: e,
                });
            }
            if e.is_zero() {
                return Err(Error::ZeroIndex);
            }
            set.insert(e);
        }
        Ok(Self::from_sorted(dim, set.into_iter().collect()))
    }

    fn from_sorted(dim: usize, elements: Vec<MultiIndex>) -> Self {
        let degree = elements.last().map_or(0, MultiIndex::degree);
        ExponentSet {
            dim,
            elements,
            degree,
        }
    }

    /// `D(caps, <= deg_cap)`.
    pub fn box_set(caps: &KBox, deg_cap: u32) -> Result<Self> {
        if deg_cap == 0 {
            return Err(Error::ZeroDegreeCap);
        }
        Ok(Self::from_box(caps, deg_cap))
    }

    fn from_box(caps: &KBox, deg_cap: u32) -> Self {
        Self::from_sorted(caps.dim(), caps.sublevel(i64::from(deg_cap)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn elements(&self) -> &[MultiIndex] {
        &self.elements
    }

    pub fn position(&self, index: &MultiIndex) -> Option<usize> {
        self.elements.binary_search(index).ok()
    }

    pub fn contains(&self, index: &MultiIndex) -> bool {
        self.position(index).is_some()
    }

    /// Returns the first missing predecessor, if any. Checking immediate
    /// predecessors suffices because the product order is generated by them.
    pub fn down_set_violation(&self) -> Option<(MultiIndex, MultiIndex)> {
        for e in &self.elements {
            for p in e.immediate_predecessors() {
                if !p.is_zero() && !self.contains(&p) {
                    return Some((p, e.clone()));
                }
            }
        }
        None
    }

    pub fn is_down_set(&self) -> bool {
        self.down_set_violation().is_none()
    }

    pub fn require_down_set(&self) -> Result<()> {
        match self.down_set_violation() {
            None => Ok(()),
            Some((missing, element)) => Err(Error::NotDownSet { missing, element }),
        }
    }

    /// `D ∩ S_l`.
    pub fn truncate(&self, l: u32) -> ExponentSet {
        let cut = self.elements.partition_point(|e| e.degree() <= l);
        Self::from_sorted(self.dim, self.elements[..cut].to_vec())
    }

    /// `K(D) = sum of |i|`.
    pub fn homogeneous_dimension(&self) -> u64 {
        self.elements.iter().map(|e| u64::from(e.degree())).sum()
    }

    pub fn profile(&self) -> Result<LevelProfile> {
        self.require_down_set()?;
        let deg = self.degree as usize;
        let mut lambda = vec![0u64; deg + 1];
        for e in &self.elements {
            lambda[e.degree() as usize] += 1;
        }
        let mut n = vec![0u64; deg + 1];
        let mut k = vec![0u64; deg + 1];
        for l in 1..=deg {
            n[l] = n[l - 1] + lambda[l];
            k[l] = k[l - 1] + l as u64 * lambda[l];
        }
        Ok(LevelProfile { n, k, lambda })
    }

    /// Deletes coordinate `coord` (0-based) from every element and drops the
    /// zero index that may result.
    pub fn project(&self, coord: usize) -> Result<ExponentSet> {
        if coord >= self.dim {
            return Err(Error::CoordinateOutOfRange {
                coord,
                dim: self.dim,
            });
        }
        let image: BTreeSet<_> = self
            .elements
            .iter()
            .map(|e| e.delete(coord))
            .filter(|e| !e.is_zero())
            .collect();
        Ok(Self::from_sorted(self.dim - 1, image.into_iter().collect()))
    }

    /// Coordinates used by at least one element.
    pub fn active_coordinates(&self) -> Vec<usize> {
        (0..self.dim)
            .filter(|&m| self.elements.iter().any(|e| e.entries()[m] > 0))
            .collect()
    }

    /// The number of active coordinates.
    pub fn essential_dim(&self) -> usize {
        self.active_coordinates().len()
    }

    /// Whether the set equals `D(k, <= deg)` for its own bounding box.
    pub fn as_box(&self) -> Option<BoxSpec> {
        if self.is_empty() {
            return None;
        }
        let caps: Vec<u32> = (0..self.dim)
            .map(|m| self.elements.iter().map(|e| e.entries()[m]).max().unwrap_or(0))
            .collect();
        let spec = BoxSpec::new(caps, self.degree).ok()?;
        (spec.set() == *self).then_some(spec)
    }
}

impl fmt::Display for ExponentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "set d={} {{", self.dim)?;
        for (n, e) in self.elements.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Per-degree counts of a down-set, indexed `0..=deg`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LevelProfile {
    /// `n[l] = |D ∩ S_l|`.
    pub n: Vec<u64>,
    /// `k[l] = K(D ∩ S_l)`.
    pub k: Vec<u64>,
    /// `lambda[l] = |D ∩ V_l|`.
    pub lambda: Vec<u64>,
}

impl LevelProfile {
    pub fn degree(&self) -> u32 {
        (self.n.len() - 1) as u32
    }

    pub fn homogeneous_dimension(&self) -> u64 {
        *self.k.last().unwrap_or(&0)
    }

    pub fn rank(&self) -> u64 {
        *self.n.last().unwrap_or(&0)
    }

    /// Checks `K_{l+1} - K_l = (l+1)(n_{l+1} - n_l)` at every level.
    pub fn ladder_holds(&self) -> bool {
        (0..self.n.len().saturating_sub(1)).all(|l| {
            self.k[l + 1] - self.k[l] == (l as u64 + 1) * (self.n[l + 1] - self.n[l])
        })
    }
}

/// Level cardinalities `Λ^k_l` for `l = 0..=l_max`, by the convolution
/// recursion over the caps.
pub fn level_counts(caps: &KBox, l_max: usize) -> Vec<u64> {
    LevelCounts::new(caps).upto(l_max)
}

/// `Λ^k_l` as a total function of an integer `l`; zero outside `0..=|k|`.
#[derive(Clone, Debug)]
pub struct LevelCounts {
    values: Vec<u64>,
}

impl LevelCounts {
    pub fn new(caps: &KBox) -> Self {
        let mut values = vec![1u64];
        for &cap in caps.caps() {
            let prev = LevelCounts { values };
            let len = prev.values.len() + cap as usize;
            values = (0..len as i64)
                .map(|l| (0..=i64::from(cap)).map(|j| prev.get(l - j)).sum())
                .collect();
        }
        LevelCounts { values }
    }

    pub fn get(&self, l: i64) -> u64 {
        usize::try_from(l)
            .ok()
            .and_then(|l| self.values.get(l))
            .copied()
            .unwrap_or(0)
    }

    pub fn upto(&self, l_max: usize) -> Vec<u64> {
        (0..=l_max as i64).map(|l| self.get(l)).collect()
    }

    /// `|S_l| = Λ_1 + ... + Λ_l`.
    pub fn sublevel(&self, l: i64) -> u64 {
        (1..=l).map(|m| self.get(m)).sum()
    }
}

/// `{p in ambient : b <= p for some b in generators}`.
pub fn upset_closure(generators: &[MultiIndex], ambient: &[MultiIndex]) -> Vec<MultiIndex> {
    ambient
        .iter()
        .filter(|p| generators.iter().any(|b| b.precedes(p)))
        .cloned()
        .collect()
}

/// `{a' : (a', value) in points}`, slicing on the last coordinate.
pub fn slice(points: &[MultiIndex], value: u32) -> Vec<MultiIndex> {
    points
        .iter()
        .filter_map(|p| {
            let (head, last) = p.split_last()?;
            (last == value).then_some(head)
        })
        .collect()
}

/// Whether a finite set (zero allowed) is closed under predecessors.
pub fn is_down_closed(points: &[MultiIndex]) -> bool {
    let set: BTreeSet<_> = points.iter().collect();
    points
        .iter()
        .all(|p| p.immediate_predecessors().all(|q| set.contains(&q)))
}
