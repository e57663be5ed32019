//! Finite combinatorics behind the rank bound: the Schwartz-Zippel type
//! counting lemma, density of up-sets across level sets (with the explicit
//! weights of its proof), the sublevel corollary and level-size concavity.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lattice::{is_down_closed, slice, upset_closure, KBox, LevelCounts, MultiIndex};
use crate::rational::Rational;

/// Inductively defined residue sets `R_{l; n_{l+1}, ..., n_d; b}`.
///
/// `l` is 1-based and `tail` holds `(n_{l+1}, ..., n_d)`.
pub trait ResidueFamily {
    fn residues(&self, b: &MultiIndex, l: usize, tail: &[u32]) -> BTreeSet<u32>;
}

/// `R_{l;*;b} = {0, ..., b_l - 1}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ThresholdFamily;

impl ResidueFamily for ThresholdFamily {
    fn residues(&self, b: &MultiIndex, l: usize, _tail: &[u32]) -> BTreeSet<u32> {
        (0..b.entries()[l - 1]).collect()
    }
}

/// Pseudo-random residue sets of size at most `b_l` drawn from
/// `{0, ..., range - 1}`, a pure function of `(seed, b, l, tail)`.
#[derive(Clone, Copy, Debug)]
pub struct SeededFamily {
    pub seed: u64,
    pub range: u32,
}

impl ResidueFamily for SeededFamily {
    fn residues(&self, b: &MultiIndex, l: usize, tail: &[u32]) -> BTreeSet<u32> {
        let mut h = Sha256::new();
        h.update(self.seed.to_le_bytes());
        h.update(format!("{b};{l};{tail:?}").as_bytes());
        let digest: [u8; 32] = h.finalize().into();
        let mut rng = ChaCha8Rng::from_seed(digest);
        let cap = b.entries()[l - 1].min(self.range) as usize;
        let size = rng.gen_range(0..=cap);
        let mut pool: Vec<u32> = (0..self.range).collect();
        pool.shuffle(&mut rng);
        pool.into_iter().take(size).collect()
    }
}

/// Whether `a` satisfies the forcing hypothesis for `b`: following the
/// residue chain from the last coordinate down, some `a_l` lands in
/// `R_{l; a_{l+1}, ..., a_d; b}`.
fn forced_by<F: ResidueFamily>(family: &F, a: &MultiIndex, b: &MultiIndex) -> bool {
    let e = a.entries();
    (1..=e.len()).rev().any(|l| family.residues(b, l, &e[l..]).contains(&e[l - 1]))
}

/// All points of `d` satisfying the forcing hypothesis for every `b`.
pub fn forced_set<F: ResidueFamily>(
    family: &F,
    d: &[MultiIndex],
    b: &[MultiIndex],
) -> Vec<MultiIndex> {
    d.iter()
        .filter(|a| b.iter().all(|bb| forced_by(family, a, bb)))
        .cloned()
        .collect()
}

/// A residue set larger than allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeFailure {
    pub b: MultiIndex,
    pub l: usize,
    pub tail: Vec<u32>,
    pub size: usize,
}

/// Outcome of the counting lemma on one instance.
#[derive(Clone, Debug)]
pub struct SzReport {
    pub size_failures: Vec<SizeFailure>,
    pub forcing_failures: Vec<(MultiIndex, MultiIndex)>,
    pub a_len: usize,
    pub bound: usize,
}

impl SzReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.size_failures.is_empty() && self.forcing_failures.is_empty()
    }

    pub fn conclusion_holds(&self) -> bool {
        self.a_len <= self.bound
    }
}

fn size_scan<F: ResidueFamily>(
    family: &F,
    b: &MultiIndex,
    l: usize,
    tail: &mut Vec<u32>,
    scan: u32,
    out: &mut Vec<SizeFailure>,
) {
    let r = family.residues(b, l, tail);
    if r.len() > b.entries()[l - 1] as usize {
        out.push(SizeFailure {
            b: b.clone(),
            l,
            tail: tail.clone(),
            size: r.len(),
        });
    }
    if l == 1 {
        return;
    }
    for n in (0..scan).filter(|n| !r.contains(n)) {
        tail.insert(0, n);
        size_scan(family, b, l - 1, tail, scan, out);
        tail.remove(0);
    }
}

/// Checks both hypotheses (sizes over admissible tails with entries below
/// `scan`, forcing on every `a in A`) and then `|A| <= |D \ up(B)|`.
pub fn sz_check<F: ResidueFamily>(
    d: &[MultiIndex],
    a: &[MultiIndex],
    b: &[MultiIndex],
    family: &F,
    scan: u32,
) -> Result<SzReport> {
    if !is_down_closed(d) {
        return Err(Error::Precondition("D must be down-closed".into()));
    }
    let dset: BTreeSet<_> = d.iter().collect();
    if let Some(bad) = a.iter().find(|x| !dset.contains(x)) {
        return Err(Error::Precondition(format!("{bad} is not in D")));
    }
    let dim = d.first().map_or(0, MultiIndex::dim);
    let mut size_failures = Vec::new();
    for bb in b {
        size_scan(family, bb, dim, &mut Vec::new(), scan, &mut size_failures);
    }
    let forcing_failures = a
        .iter()
        .flat_map(|x| b.iter().map(move |bb| (x, bb)))
        .filter(|(x, bb)| !forced_by(family, x, bb))
        .map(|(x, bb)| (x.clone(), bb.clone()))
        .collect();
    let a_len = a.iter().collect::<BTreeSet<_>>().len();
    let bound = d.len() - upset_closure(b, d).len();
    Ok(SzReport {
        size_failures,
        forcing_failures,
        a_len,
        bound,
    })
}

/// The sharp instance `A = D \ up(B)` with threshold residues.
pub fn sz_sharpness(d: &[MultiIndex], b: &[MultiIndex], scan: u32) -> Result<SzReport> {
    let up: BTreeSet<_> = upset_closure(b, d).into_iter().collect();
    let a: Vec<_> = d.iter().filter(|x| !up.contains(x)).cloned().collect();
    sz_check(d, &a, b, &ThresholdFamily, scan)
}

/// The weights `A_j`, `B_j` for one level `m` of a box.
#[derive(Clone, Debug)]
pub struct LevelWitness {
    pub j_min: i64,
    pub j_max: i64,
    pub a: Vec<Rational>,
    pub b: Vec<Rational>,
}

impl LevelWitness {
    /// `None` when the index range is empty.
    pub fn new(caps: &KBox, m: u32) -> Option<Self> {
        let (head, kd) = caps.split_last()?;
        let full = LevelCounts::new(caps);
        let part = LevelCounts::new(&head);
        let m = i64::from(m);
        let kd = i64::from(kd);
        let j_min = (m - i64::from(head.total())).max(0);
        let j_max = m.min(kd);
        if j_min > j_max {
            return None;
        }
        let lam = |l: i64| Rational::from_integer(full.get(l).into());
        let lp = |l: i64| Rational::from_integer(part.get(l).into());
        let diff = lam(m + 1) - lam(m);
        let tail_sum = |j: i64| -> Rational { (m - j + 1..=m).map(lp).sum() };
        let mut a = Vec::new();
        let mut b = Vec::new();
        for j in j_min..=j_max {
            let s = tail_sum(j);
            a.push((lp(m - j) * lam(m + 1) - lp(m + 1) * lam(m) + &diff * &s) / lp(m - j));
            let bj = if j == j_min {
                lam(m) / lp(m - j)
            } else {
                (lp(m + 1) * lam(m) - &diff * &s) / (lp(m - j) * lp(m - j + 1))
            };
            b.push(bj);
        }
        Some(LevelWitness { j_min, j_max, a, b })
    }

    fn at(&self, v: &[Rational], j: i64) -> Rational {
        v[(j - self.j_min) as usize].clone()
    }

    /// Every constraint the weights must satisfy, as a list of failures.
    pub fn violations(&self, caps: &KBox, m: u32) -> Vec<String> {
        let (head, kd) = caps.split_last().expect("nonempty caps");
        let full = LevelCounts::new(caps);
        let part = LevelCounts::new(&head);
        let m = i64::from(m);
        let lam = |l: i64| Rational::from_integer(full.get(l).into());
        let lp = |l: i64| Rational::from_integer(part.get(l).into());
        let mut out = Vec::new();
        for j in self.j_min..=self.j_max {
            let (aj, bj) = (self.at(&self.a, j), self.at(&self.b, j));
            if aj.is_negative() || bj.is_negative() {
                out.push(format!("negative weight at j = {j}"));
            }
            if lam(m + 1) != &aj + lp(m - j + 1) * &bj {
                out.push(format!("split identity fails at j = {j}"));
            }
            if j > self.j_min && lp(m - j) * &bj + self.at(&self.a, j - 1) != lam(m) {
                out.push(format!("recombination fails at j = {j}"));
            }
        }
        if lam(m) != self.at(&self.b, self.j_min) * lp(m - self.j_min) {
            out.push("boundary condition at j_min fails".into());
        }
        let a_max = if m < i64::from(kd) { lam(m) } else { Rational::zero() };
        if self.at(&self.a, self.j_max) != a_max {
            out.push("boundary condition at j_max fails".into());
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct LevelDensityReport {
    pub lhs: u64,
    pub rhs: u64,
    pub t_plus: Vec<MultiIndex>,
    pub witness: Option<LevelWitness>,
    pub witness_violations: Vec<String>,
}

impl LevelDensityReport {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs && self.witness_violations.is_empty()
    }
}

/// `|V_{m+1}| |T| <= |V_m| |T+|` with `T+ = up(T) cap V_{m+1}`, together
/// with the weights that prove it.
pub fn upset_level_check(caps: &KBox, m: u32, t: &[MultiIndex]) -> Result<LevelDensityReport> {
    let level = caps.level(i64::from(m));
    let t: BTreeSet<_> = t.iter().cloned().collect();
    if let Some(bad) = t.iter().find(|x| !level.contains(x)) {
        return Err(Error::Precondition(format!("{bad} is not in level {m}")));
    }
    let t: Vec<_> = t.into_iter().collect();
    let next = caps.level(i64::from(m) + 1);
    let t_plus = upset_closure(&t, &next);
    let witness = LevelWitness::new(caps, m);
    let witness_violations = witness
        .as_ref()
        .map_or_else(Vec::new, |w| w.violations(caps, m));
    Ok(LevelDensityReport {
        lhs: (next.len() * t.len()) as u64,
        rhs: (level.len() * t_plus.len()) as u64,
        t_plus,
        witness,
        witness_violations,
    })
}

/// Slices of a level set on the last coordinate, for cross-checking the
/// decomposition `|T| = sum_j |S_j T|`.
pub fn slice_sizes(t: &[MultiIndex], kd: u32) -> Vec<usize> {
    (0..=kd).map(|j| slice(t, j).len()).collect()
}

/// Equality configurations of the sublevel inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SublevelEquality {
    FullOrEmpty,
    /// `d = 2`, `1 = k_1 < k_2`, `B = up{(1,0)}`, `l' <= k_2`.
    FirstUnit,
    /// `d = 2`, `1 = k_2 < k_1`, `B = up{(0,1)}`, `l' <= k_1`.
    SecondUnit,
}

#[derive(Clone, Debug)]
pub struct SublevelReport {
    pub lhs: u64,
    pub rhs: u64,
    /// `V_{l'}` is empty, so an equality needs no classification.
    pub top_level_empty: bool,
    pub equality_case: Option<SublevelEquality>,
}

impl SublevelReport {
    pub fn violation(&self) -> bool {
        self.lhs > self.rhs
            || (self.lhs == self.rhs && !self.top_level_empty && self.equality_case.is_none())
    }
}

/// `|S_{l'}| |B cap S_l| <= |S_l| |B cap S_{l'}|` for the up-set generated
/// by `generators`.
pub fn sublevel_density_check(
    caps: &KBox,
    l: u32,
    l_prime: u32,
    generators: &[MultiIndex],
) -> Result<SublevelReport> {
    if l == 0 || l >= l_prime {
        return Err(Error::Precondition(format!(
            "need 1 <= l < l', got l = {l}, l' = {l_prime}"
        )));
    }
    let s_l = caps.sublevel(i64::from(l));
    let s_top = caps.sublevel(i64::from(l_prime));
    let b_l = upset_closure(generators, &s_l);
    let b_top = upset_closure(generators, &s_top);
    let lhs = (s_top.len() * b_l.len()) as u64;
    let rhs = (s_l.len() * b_top.len()) as u64;
    let top_level_empty = caps.level(i64::from(l_prime)).is_empty();
    let equality_case = if lhs != rhs {
        None
    } else if b_top.is_empty() || b_top.len() == s_top.len() {
        Some(SublevelEquality::FullOrEmpty)
    } else {
        // Compared inside S_{l'}, the only part of B the inequality sees.
        let unit_case = |unit: [u32; 2], other_cap: u32, case| {
            let target = upset_closure(&[MultiIndex::from(unit)], &s_top);
            (l_prime <= other_cap && b_top == target).then_some(case)
        };
        match caps.caps() {
            [1, k2] if *k2 > 1 => unit_case([1, 0], *k2, SublevelEquality::FirstUnit),
            [k1, 1] if *k1 > 1 => unit_case([0, 1], *k1, SublevelEquality::SecondUnit),
            _ => None,
        }
    };
    Ok(SublevelReport {
        lhs,
        rhs,
        top_level_empty,
        equality_case,
    })
}

/// The minimal elements of every up-closed subset of `ambient`, one
/// antichain per up-set. `ambient` must be small.
pub fn upset_generators(ambient: &[MultiIndex]) -> Vec<Vec<MultiIndex>> {
    let n = ambient.len();
    assert!(n <= 24, "ambient too large to enumerate");
    let mut out = Vec::new();
    for mask in 0u32..1 << n {
        let members: Vec<&MultiIndex> = (0..n)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| &ambient[i])
            .collect();
        let closed = (0..n).filter(|&i| mask >> i & 1 == 0).all(|i| {
            !members.iter().any(|m| m.precedes(&ambient[i]))
        });
        if !closed {
            continue;
        }
        let minimal: Vec<MultiIndex> = members
            .iter()
            .filter(|x| !members.iter().any(|y| y != *x && y.precedes(x)))
            .map(|x| (*x).clone())
            .collect();
        out.push(minimal);
    }
    out
}

/// Quadruples `(a, b, a', b')` in `[lo, hi]` with `a + b = a' + b'`,
/// `b' >= max(a, b)` and `Lambda_a Lambda_b < Lambda_a' Lambda_b'`.
pub fn concavity_violations(caps: &KBox, lo: i64, hi: i64) -> Vec<(i64, i64, i64, i64)> {
    let lam = LevelCounts::new(caps);
    let mut out = Vec::new();
    for a in lo..=hi {
        for b in lo..=hi {
            for bp in a.max(b)..=hi {
                let ap = a + b - bp;
                if ap < lo {
                    continue;
                }
                let left = u128::from(lam.get(a)) * u128::from(lam.get(b));
                let right = u128::from(lam.get(ap)) * u128::from(lam.get(bp));
                if left < right {
                    out.push((a, b, ap, bp));
                }
            }
        }
    }
    out
}
