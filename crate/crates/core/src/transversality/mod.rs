//! Transversality of moment manifolds: tangent-space matrices, their generic
//! rank against the dimension bound, projection dimensions at sample points,
//! leading-power reduction and the Vandermonde-type rank estimate.
//!
//! The combinatorial inequalities behind the rank bound live in
//! [`combinatorics`].

pub mod combinatorics;
pub mod rank;

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::{ExponentSet, KBox, MultiIndex};
use crate::linalg::{det_cofactor, RationalMatrix};
use crate::poly::{PolyMatrix, Polynomial};
use crate::rational::Rational;

pub use rank::{generic_rank, EliminationTranscript, RankCertificate, Witness};

fn check_order(set: &ExponentSet, l: u32) -> Result<()> {
    if l == 0 || l > set.degree() {
        return Err(Error::OrderOutOfRange {
            l,
            max: set.degree(),
        });
    }
    Ok(())
}

/// `Phi(t) = (t^i)` differentiated: rows are the coordinates `i` of the set,
/// columns the multi-indices `j` of degree at most `l`, entry `d^j t^i`.
pub fn tangent_columns(set: &ExponentSet, l: u32) -> Result<PolyMatrix> {
    set.require_down_set()?;
    check_order(set, l)?;
    let cols = set.truncate(l);
    let rows = set
        .elements()
        .iter()
        .map(|i| {
            let mono = Polynomial::monomial(i.clone(), 1);
            cols.elements().iter().map(|j| mono.derivative(j)).collect()
        })
        .collect();
    Ok(PolyMatrix::from_rows(set.dim(), rows))
}

/// A subspace of `R^D` given by an integer basis, coordinates labelled by
/// the elements of `D` in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: ExponentSet,
    basis: Vec<Vec<BigInt>>,
}

fn rational_rows(rows: &[Vec<BigInt>], width: usize) -> RationalMatrix {
    if rows.is_empty() {
        return RationalMatrix::zeros(0, width);
    }
    RationalMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
            .collect(),
    )
}

impl Subspace {
    pub fn new(ambient: ExponentSet, basis: Vec<Vec<BigInt>>) -> Result<Self> {
        if basis.iter().any(|v| v.len() != ambient.len()) {
            return Err(Error::AmbientMismatch);
        }
        if rational_rows(&basis, ambient.len()).rank() != basis.len() {
            return Err(Error::DependentBasis);
        }
        Ok(Subspace { ambient, basis })
    }

    pub fn zero(ambient: ExponentSet) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: ExponentSet) -> Self {
        let labels = ambient.elements().to_vec();
        Self::coordinate(ambient, &labels).expect("labels come from the ambient set")
    }

    /// The span of the unit vectors at the given labels.
    pub fn coordinate(ambient: ExponentSet, labels: &[MultiIndex]) -> Result<Self> {
        let mut basis = Vec::new();
        for label in labels {
            let pos = ambient.position(label).ok_or(Error::AmbientMismatch)?;
            let mut v = vec![BigInt::zero(); ambient.len()];
            v[pos] = BigInt::one();
            basis.push(v);
        }
        Self::new(ambient, basis)
    }

    /// A subspace of the given dimension with entries in `-3..=3`.
    pub fn random<R: Rng>(ambient: ExponentSet, dim: usize, rng: &mut R) -> Self {
        assert!(dim <= ambient.len());
        loop {
            let basis: Vec<Vec<BigInt>> = (0..dim)
                .map(|_| (0..ambient.len()).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect())
                .collect();
            if let Ok(v) = Self::new(ambient.clone(), basis) {
                return v;
            }
        }
    }

    /// A subspace in reduced echelon form: random pivot columns, and entries
    /// in `-3..=3` in the non-pivot columns right of each pivot. Sparser than
    /// [`Subspace::random`], so its rank certificates are much cheaper.
    pub fn random_echelon<R: Rng>(ambient: ExponentSet, dim: usize, rng: &mut R) -> Self {
        let n = ambient.len();
        assert!(dim <= n);
        let pivots: BTreeSet<usize> = rand::seq::index::sample(rng, n, dim).into_iter().collect();
        let basis = pivots
            .iter()
            .map(|&c| {
                (0..n)
                    .map(|j| match j {
                        _ if j == c => BigInt::one(),
                        _ if j > c && !pivots.contains(&j) => BigInt::from(rng.gen_range(-3..=3)),
                        _ => BigInt::zero(),
                    })
                    .collect()
            })
            .collect();
        Self::new(ambient, basis).expect("echelon rows are independent")
    }

    pub fn ambient(&self) -> &ExponentSet {
        &self.ambient
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Whether the span of `vectors` equals this subspace.
    pub fn spans_same(&self, vectors: &[Vec<BigInt>]) -> bool {
        let n = self.ambient.len();
        let other = rational_rows(vectors, n).rank();
        let mut joint = self.basis.clone();
        joint.extend_from_slice(vectors);
        let joint = rational_rows(&joint, n).rank();
        other == self.dim() && joint == self.dim()
    }

    /// Whether this is the span of the unit vectors at `labels`.
    pub fn is_coordinate_span(&self, labels: &[MultiIndex]) -> bool {
        let mut vectors = Vec::new();
        for label in labels {
            let Some(pos) = self.ambient.position(label) else {
                return false;
            };
            let mut v = vec![BigInt::zero(); self.ambient.len()];
            v[pos] = BigInt::one();
            vectors.push(v);
        }
        self.spans_same(&vectors)
    }

    /// `sum_i v_{h,i} t^i` for each basis vector.
    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.basis
            .iter()
            .map(|v| {
                Polynomial::from_terms(
                    self.ambient.dim(),
                    self.ambient.elements().iter().cloned().zip(v.iter().cloned()),
                )
            })
            .collect()
    }
}

/// Every coordinate subspace of `R^D`, one per subset of labels.
pub fn coordinate_subspaces(ambient: &ExponentSet) -> Vec<Subspace> {
    let n = ambient.len();
    assert!(n < 24, "too many coordinate subspaces");
    (0u32..1 << n)
        .map(|mask| {
            let labels: Vec<_> = (0..n)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| ambient.elements()[i].clone())
                .collect();
            Subspace::coordinate(ambient.clone(), &labels).expect("labels from ambient")
        })
        .collect()
}

/// `M_V^(l)(t)`: entry `(h, j)` is `d^j` of the `h`-th basis polynomial.
pub fn mv_matrix(v: &Subspace, set: &ExponentSet, l: u32) -> Result<PolyMatrix> {
    if v.ambient() != set {
        return Err(Error::AmbientMismatch);
    }
    set.require_down_set()?;
    check_order(set, l)?;
    let cols = set.truncate(l);
    let rows = v
        .polynomials()
        .into_iter()
        .map(|f| cols.elements().iter().map(|j| f.derivative(j)).collect())
        .collect();
    if v.dim() == 0 {
        return Ok(PolyMatrix::zeros(set.dim(), 0, cols.len()));
    }
    Ok(PolyMatrix::from_rows(set.dim(), rows))
}

/// The configurations in which the rank bound can be attained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EqualityCase {
    /// Trivial or full subspace (or subset).
    FullOrEmpty,
    /// `d = 2`, `1 = k_1 < k_2`, spanned by `(0,1), ..., (0,k)`.
    SecondAxis,
    /// `d = 2`, `1 = k_2 < k_1`, spanned by `(1,0), ..., (k,0)`.
    FirstAxis,
}

impl EqualityCase {
    pub fn tag(self) -> &'static str {
        match self {
            EqualityCase::FullOrEmpty => "full-or-empty",
            EqualityCase::SecondAxis => "d2-second-axis",
            EqualityCase::FirstAxis => "d2-first-axis",
        }
    }
}

fn axis_labels(axis: usize, top: u32) -> Vec<MultiIndex> {
    (1..=top)
        .map(|h| {
            let mut e = vec![0, 0];
            e[axis] = h;
            MultiIndex::new(e)
        })
        .collect()
}

/// Which axis case, if any, applies to caps `k` with `d = 2`.
fn axis_case(caps: &KBox) -> Option<(EqualityCase, usize)> {
    match caps.caps() {
        [1, k2] if *k2 > 1 => Some((EqualityCase::SecondAxis, 1)),
        [k1, 1] if *k1 > 1 => Some((EqualityCase::FirstAxis, 0)),
        _ => None,
    }
}

#[derive(Clone, Debug)]
pub struct RankAudit {
    pub rank: usize,
    pub bound: Rational,
    pub strict: bool,
    pub equality_case: Option<EqualityCase>,
    pub certificate: RankCertificate,
}

impl RankAudit {
    /// Bound broken, or attained outside the known configurations.
    pub fn violation(&self) -> bool {
        Rational::from_integer(self.rank.into()) < self.bound
            || (!self.strict && self.equality_case.is_none())
    }
}

/// Generic rank of `M_V^(l)` against `|D_l| dim V / |D_k|` for a box family
/// `D(caps, <= k)` with `1 <= l < k <= |caps|`.
pub fn bl_rank_audit(v: &Subspace, set: &ExponentSet, l: u32) -> Result<RankAudit> {
    let spec = set
        .as_box()
        .ok_or_else(|| Error::Precondition("the rank bound needs a box family".into()))?;
    let k = spec.deg_cap;
    if l == 0 || l >= k || k > spec.caps.total() {
        return Err(Error::Precondition(format!(
            "need 1 <= l < k <= |caps|, got l = {l}, k = {k}, |caps| = {}",
            spec.caps.total()
        )));
    }
    let m = mv_matrix(v, set, l)?;
    let certificate = generic_rank(&m);
    let rank = certificate.rank;
    let bound = Rational::new(
        (set.truncate(l).len() * v.dim()).into(),
        set.len().into(),
    );
    let strict = Rational::from_integer(rank.into()) > bound;
    let equality_case = if strict {
        None
    } else if v.dim() == 0 || v.dim() == set.len() {
        Some(EqualityCase::FullOrEmpty)
    } else {
        axis_case(&spec.caps)
            .filter(|&(_, axis)| v.is_coordinate_span(&axis_labels(axis, k)))
            .map(|(case, _)| case)
    };
    Ok(RankAudit {
        rank,
        bound,
        strict,
        equality_case,
        certificate,
    })
}

/// Ranks of `M_V^(l)` at given points and the dimension criterion
/// `dim V <= n_k / (n_l M) * sum_j dim pi_j(V)`.
#[derive(Clone, Debug)]
pub struct ProjectionReport {
    pub ranks: Vec<usize>,
    pub dim_v: usize,
    pub rhs: Rational,
    pub transverse: bool,
}

pub fn projection_dims(
    points: &[Vec<Rational>],
    v: &Subspace,
    set: &ExponentSet,
    l: u32,
) -> Result<ProjectionReport> {
    let zero = Rational::zero();
    let one = Rational::one();
    for pt in points {
        if pt.len() != set.dim() || pt.iter().any(|t| *t <= zero || *t >= one) {
            return Err(Error::Precondition(
                "points must lie strictly inside the unit cube".into(),
            ));
        }
    }
    if points.is_empty() {
        return Err(Error::Precondition("need at least one point".into()));
    }
    let m = mv_matrix(v, set, l)?;
    let ranks: Vec<usize> = points.iter().map(|pt| m.eval(pt).rank()).collect();
    let n_k = set.len();
    let n_l = set.truncate(l).len();
    let total: usize = ranks.iter().sum();
    let rhs = Rational::new((n_k * total).into(), (n_l * points.len()).into());
    let transverse = Rational::from_integer(v.dim().into()) <= rhs;
    Ok(ProjectionReport {
        ranks,
        dim_v: v.dim(),
        rhs,
        transverse,
    })
}

/// Outcome of the two-alternative rank statement for `0 < dim V < n_k`.
#[derive(Clone, Debug)]
pub enum Dichotomy {
    /// Some minor of order `floor(dim V n_l / n_k) + 1` is not identically zero.
    Generic { order: usize, certificate: RankCertificate },
    /// A minor of order `dim V n_l / n_k` is nonzero at every grid point.
    Pointwise {
        order: usize,
        rows: Vec<usize>,
        cols: Vec<usize>,
        grid_points: usize,
    },
    /// Neither alternative could be exhibited.
    Neither { rank: usize, bound: Rational },
}

/// The grid `{1/(g+1), ..., g/(g+1)}^d`.
pub fn open_grid(dim: usize, g: u32) -> Vec<Vec<Rational>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p: Vec<Rational>| {
                (1..=g).map(move |i| {
                    let mut q = p.clone();
                    q.push(Rational::new(i.into(), (g + 1).into()));
                    q
                })
            })
            .collect();
    }
    out
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

pub fn rank_dichotomy(v: &Subspace, set: &ExponentSet, l: u32, grid: u32) -> Result<Dichotomy> {
    if v.dim() == 0 || v.dim() >= set.len() {
        return Err(Error::Precondition("need 0 < dim V < n_k".into()));
    }
    let m = mv_matrix(v, set, l)?;
    let certificate = generic_rank(&m);
    let n_l = set.truncate(l).len();
    let num = v.dim() * n_l;
    let floor = num / set.len();
    if certificate.rank > floor {
        return Ok(Dichotomy::Generic {
            order: floor + 1,
            certificate,
        });
    }
    let bound = Rational::new(num.into(), set.len().into());
    if num.is_multiple_of(set.len()) && floor > 0 {
        let points = open_grid(set.dim(), grid);
        let evaluated: Vec<RationalMatrix> = points.iter().map(|p| m.eval(p)).collect();
        for rows in subsets(m.rows(), floor) {
            for cols in subsets(m.cols(), floor) {
                let nonvanishing = evaluated
                    .iter()
                    .all(|e| !det_cofactor(&e.select(&rows, &cols)).is_zero());
                if nonvanishing {
                    return Ok(Dichotomy::Pointwise {
                        order: floor,
                        rows,
                        cols,
                        grid_points: points.len(),
                    });
                }
            }
        }
    }
    Ok(Dichotomy::Neither {
        rank: certificate.rank,
        bound,
    })
}

/// Monomial orders used for leading powers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    #[default]
    Lex,
    GrLex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &MultiIndex, b: &MultiIndex) -> Ordering {
        match self {
            MonomialOrder::Lex => a.entries().cmp(b.entries()),
            MonomialOrder::GrLex => a
                .degree()
                .cmp(&b.degree())
                .then_with(|| a.entries().cmp(b.entries())),
        }
    }
}

/// A basis of `V` with pairwise distinct leading powers, and those powers.
#[derive(Clone, Debug)]
pub struct LeadingPowers {
    pub powers: Vec<MultiIndex>,
    pub basis: Vec<Vec<Rational>>,
}

pub fn leading_powers(v: &Subspace, order: MonomialOrder) -> LeadingPowers {
    let labels = v.ambient().elements();
    let mut perm: Vec<usize> = (0..labels.len()).collect();
    perm.sort_by(|&a, &b| order.cmp(&labels[b], &labels[a]));
    let m = rational_rows(v.basis(), labels.len());
    let rows: Vec<usize> = (0..m.rows()).collect();
    let (ech, pivots) = m.select(&rows, &perm).echelon();
    let mut basis = Vec::new();
    let mut powers = Vec::new();
    for (r, &pc) in pivots.iter().enumerate() {
        let mut row = vec![Rational::zero(); labels.len()];
        for (c, &orig) in perm.iter().enumerate() {
            row[orig] = ech.get(r, c).clone();
        }
        basis.push(row);
        powers.push(labels[perm[pc]].clone());
    }
    LeadingPowers { powers, basis }
}

/// `a^i` with `0^0 = 1`.
pub fn power(a: &MultiIndex, i: &MultiIndex) -> BigInt {
    a.entries()
        .iter()
        .zip(i.entries())
        .map(|(&base, &e)| num_traits::pow(BigInt::from(base), e as usize))
        .product()
}

#[derive(Clone, Debug)]
pub struct VandermondeReport {
    pub rank: usize,
    pub bound: Rational,
    pub strict: bool,
    /// The top level `V_{l'}` is empty, so equality needs no explanation.
    pub level_empty: bool,
    pub equality_case: Option<EqualityCase>,
}

impl VandermondeReport {
    pub fn violation(&self) -> bool {
        Rational::from_integer(self.rank.into()) < self.bound
            || (!self.strict && !self.level_empty && self.equality_case.is_none())
    }
}

/// Rank of `(a^i)` for `a in A`, `i in S_l`, against `|S_l| |A| / |S_{l'}|`.
pub fn vandermonde_rank(
    a: &[MultiIndex],
    caps: &KBox,
    l: u32,
    l_prime: u32,
) -> Result<VandermondeReport> {
    if l == 0 || l >= l_prime {
        return Err(Error::Precondition(format!(
            "need 1 <= l < l', got l = {l}, l' = {l_prime}"
        )));
    }
    let s_l = caps.sublevel(i64::from(l));
    let s_top = caps.sublevel(i64::from(l_prime));
    if let Some(bad) = a.iter().find(|x| !s_top.contains(x)) {
        return Err(Error::Precondition(format!("{bad} is not in S_{l_prime}")));
    }
    let mut a_sorted = a.to_vec();
    a_sorted.sort();
    a_sorted.dedup();
    let rows: Vec<Vec<Rational>> = a_sorted
        .iter()
        .map(|x| s_l.iter().map(|i| Rational::from_integer(power(x, i))).collect())
        .collect();
    let rank = if rows.is_empty() {
        0
    } else {
        RationalMatrix::from_rows(rows).rank()
    };
    let bound = Rational::new((s_l.len() * a_sorted.len()).into(), s_top.len().into());
    let strict = Rational::from_integer(rank.into()) > bound;
    let level_empty = caps.level(i64::from(l_prime)).is_empty();
    let equality_case = if strict {
        None
    } else if a_sorted.is_empty() || a_sorted.len() == s_top.len() {
        Some(EqualityCase::FullOrEmpty)
    } else {
        axis_case(caps)
            .filter(|&(_, axis)| {
                let mut target = axis_labels(axis, l_prime);
                target.sort();
                target == a_sorted
            })
            .map(|(case, _)| case)
    };
    Ok(VandermondeReport {
        rank,
        bound,
        strict,
        level_empty,
        equality_case,
    })
}

/// `k^(k^d)`, the degree bound for the clustering polynomial.
pub fn degree_bound(d: u32, k: u32) -> BigUint {
    let exponent = num_traits::pow(BigUint::from(k), d as usize);
    let exponent = u32::try_from(exponent).expect("exponent fits in 32 bits");
    BigUint::from(k).pow(exponent)
}

/// The tighter `k^(n_k)` for a concrete set of degree `k`.
pub fn degree_bound_for_set(set: &ExponentSet) -> BigUint {
    BigUint::from(set.degree()).pow(set.len() as u32)
}
