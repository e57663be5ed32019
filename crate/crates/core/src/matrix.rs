//! The induction-on-scales weight system of a down-set: exponents `q_l`,
//! `t_l`, interpolation weights `alpha_l`, `beta_l`, the matrix `M` on the
//! nodes `q(1..k-1), t(1..k-1)`, and its explicit positive fixed vector.
//!
//! The weights depend only on the level profile `(n_l, K_l)`; `p` enters
//! `q_l` and `t_l` but not `M`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{ExponentSet, LevelProfile};
use crate::linalg::RationalMatrix;
use crate::rational::{int, is_unit_interval, max_q, two, Rational};

/// A row/column label of `M`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Node {
    Q(u32),
    T(u32),
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Q(l) => write!(f, "q({l})"),
            Node::T(l) => write!(f, "t({l})"),
        }
    }
}

fn q(value: u64) -> Rational {
    Rational::from_integer(value.into())
}

fn profile_of(set: &ExponentSet) -> Result<LevelProfile> {
    let profile = set.profile()?;
    if profile.degree() < 2 {
        return Err(Error::DegreeTooSmall {
            degree: profile.degree(),
            min: 2,
        });
    }
    Ok(profile)
}

/// Exponents and weights, all indexed by `l` with unused slots zero.
#[derive(Clone, Debug)]
pub struct ScaleParameters {
    pub k: u32,
    pub p: Rational,
    pub profile: LevelProfile,
    /// `q[l]` for `l = 0..=k`.
    pub q: Vec<Rational>,
    /// `t[l]` for `l = 0..=k`.
    pub t: Vec<Rational>,
    /// `alpha[l]` for `l = 0..=k-1`, with `alpha[0] = 0`.
    pub alpha: Vec<Rational>,
    /// `beta[l]` for `l = 0..=k`, with `beta[1] = beta[k] = 1` and `beta[0]` unused.
    pub beta: Vec<Rational>,
}

impl ScaleParameters {
    pub fn new(set: &ExponentSet, p: &Rational) -> Result<Self> {
        if *p < two() {
            return Err(Error::ExponentBelowTwo(crate::rational::fmt_q(p)));
        }
        let profile = profile_of(set)?;
        Ok(Self::from_profile(profile, p))
    }

    /// Solves the two harmonic-mean equations
    /// `n_k/n_l = alpha n_k/n_{l+1} + (1-alpha) K_k/K_l` and
    /// `K_k/K_l = (1-beta) K_k/K_{l-1} + beta n_k/n_l`.
    pub fn from_profile(profile: LevelProfile, p: &Rational) -> Self {
        let k = profile.degree();
        let ku = k as usize;
        let n = |l: usize| q(profile.n[l]);
        let kk = |l: usize| q(profile.k[l]);
        let mut qs = vec![Rational::zero(); ku + 1];
        let mut ts = vec![Rational::zero(); ku + 1];
        for l in 1..=ku {
            qs[l] = max_q(two(), p * kk(l) / kk(ku));
            ts[l] = max_q(two(), p * n(l) / n(ku));
        }
        let mut alpha = vec![Rational::zero(); ku];
        for (l, a) in alpha.iter_mut().enumerate().skip(1) {
            let num = n(ku) / n(l) - kk(ku) / kk(l);
            let den = n(ku) / n(l + 1) - kk(ku) / kk(l);
            *a = num / den;
        }
        let mut beta = vec![Rational::zero(); ku + 1];
        beta[1] = Rational::one();
        beta[ku] = Rational::one();
        for (l, b) in beta.iter_mut().enumerate().take(ku).skip(2) {
            let num = kk(ku) / kk(l) - kk(ku) / kk(l - 1);
            let den = n(ku) / n(l) - kk(ku) / kk(l - 1);
            *b = num / den;
        }
        ScaleParameters {
            k,
            p: p.clone(),
            profile,
            q: qs,
            t: ts,
            alpha,
            beta,
        }
    }

    pub fn alpha(&self, l: u32) -> &Rational {
        &self.alpha[l as usize]
    }

    pub fn beta(&self, l: u32) -> &Rational {
        &self.beta[l as usize]
    }

    /// Whether every `alpha_l`, `beta_l` with `1 <= l < k` lies in `[0, 1]`.
    pub fn weights_in_unit_interval(&self) -> bool {
        (1..self.k).all(|l| is_unit_interval(self.alpha(l)) && is_unit_interval(self.beta(l)))
    }

    /// Residuals of the two defining equations, zero when solved exactly.
    pub fn defining_residuals(&self) -> Vec<Rational> {
        let ku = self.k as usize;
        let n = |l: usize| q(self.profile.n[l]);
        let kk = |l: usize| q(self.profile.k[l]);
        let one = Rational::one();
        let mut out = Vec::new();
        for l in 1..ku {
            let a = &self.alpha[l];
            out.push(n(ku) / n(l) - (a * n(ku) / n(l + 1) + (&one - a) * kk(ku) / kk(l)));
        }
        for l in 2..ku {
            let b = &self.beta[l];
            out.push(kk(ku) / kk(l) - ((&one - b) * kk(ku) / kk(l - 1) + b * n(ku) / n(l)));
        }
        out
    }
}

pub fn scale_parameters(set: &ExponentSet, p: &Rational) -> Result<ScaleParameters> {
    ScaleParameters::new(set, p)
}

/// `M` with its labels `q(1..k-1)` followed by `t(1..k-1)`.
#[derive(Clone, Debug)]
pub struct InductionMatrix {
    pub k: u32,
    pub labels: Vec<Node>,
    pub entries: RationalMatrix,
}

impl InductionMatrix {
    pub fn from_parameters(params: &ScaleParameters) -> Self {
        let k = params.k;
        let m = (k - 1) as usize;
        let labels: Vec<Node> = (1..k).map(Node::Q).chain((1..k).map(Node::T)).collect();
        let qi = |l: u32| (l - 1) as usize;
        let ti = |l: u32| m + (l - 1) as usize;
        let one = Rational::one();
        let mut e = RationalMatrix::zeros(2 * m, 2 * m);
        for l in 1..k {
            e.set(qi(l), ti(l), &one - params.alpha(l));
            if l + 1 < k {
                let f = Rational::new((l + 2).into(), (l + 1).into());
                e.set(qi(l), qi(l + 1), f * (&one - params.beta(l + 1)));
            }
            let f = Rational::new((l + 1).into(), l.into());
            e.set(ti(l), qi(l), f * params.beta(l));
            if l >= 2 {
                e.set(ti(l), ti(l - 1), params.alpha(l - 1).clone());
            }
        }
        InductionMatrix {
            k,
            labels,
            entries: e,
        }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, node: Node) -> Option<usize> {
        self.labels.iter().position(|&n| n == node)
    }

    pub fn entry(&self, row: Node, col: Node) -> Rational {
        match (self.index_of(row), self.index_of(col)) {
            (Some(i), Some(j)) => self.entries.get(i, j).clone(),
            _ => Rational::zero(),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        (0..self.size()).all(|i| (0..self.size()).all(|j| *self.entries.get(i, j) >= Rational::zero()))
    }

    /// Arrows of the weight graph: `col -> row` for every nonzero entry.
    pub fn edges(&self) -> Vec<(Node, Node)> {
        let mut out = Vec::new();
        for (i, &row) in self.labels.iter().enumerate() {
            for (j, &col) in self.labels.iter().enumerate() {
                if !self.entries.get(i, j).is_zero() {
                    out.push((col, row));
                }
            }
        }
        out
    }

    /// Whether every arrow is one of `q(l) -> t(l)`, `t(l) -> q(l)`,
    /// `q(l+1) -> q(l)` or `t(l) -> t(l+1)`; returns the first stray arrow.
    pub fn stray_edge(&self) -> Option<(Node, Node)> {
        self.edges().into_iter().find(|&(from, to)| {
            !matches!(
                (from, to),
                (Node::Q(a), Node::T(b)) | (Node::T(a), Node::Q(b)) if a == b
            ) && !matches!((from, to), (Node::Q(a), Node::Q(b)) if a == b + 1)
                && !matches!((from, to), (Node::T(a), Node::T(b)) if b == a + 1)
        })
    }
}

pub fn build_matrix(set: &ExponentSet, p: &Rational) -> Result<InductionMatrix> {
    Ok(InductionMatrix::from_parameters(&ScaleParameters::new(set, p)?))
}

/// The fixed vector `v_{q(l)} = K_l/(l+1)`, `v_{t(l)} = n_l`, in label order.
pub fn pf_vector(set: &ExponentSet) -> Result<Vec<(Node, Rational)>> {
    let profile = profile_of(set)?;
    Ok(pf_vector_from_profile(&profile))
}

pub fn pf_vector_from_profile(profile: &LevelProfile) -> Vec<(Node, Rational)> {
    let k = profile.degree();
    let qs = (1..k).map(|l| {
        let v = Rational::new(profile.k[l as usize].into(), (l + 1).into());
        (Node::Q(l), v)
    });
    let ts = (1..k).map(|l| (Node::T(l), q(profile.n[l as usize])));
    qs.chain(ts).collect()
}

/// Outcome of checking the fixed-point and total-loss identities.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub matrix: InductionMatrix,
    pub params: ScaleParameters,
    pub v: Vec<(Node, Rational)>,
    /// `(Mv - v)` per label.
    pub fixed_point_residual: Vec<(Node, Rational)>,
    /// `sum v_{q(l)}/l - v_{t(k-1)} alpha_{k-1}`.
    pub total_loss_residual: Rational,
    pub total_loss_lhs: Rational,
    pub total_loss_rhs: Rational,
    /// `n_{k-1} - K_{k-1}/k`.
    pub total_loss_closed: Rational,
    /// Residuals of the equations defining `alpha` and `beta`.
    pub weight_residuals: Vec<Rational>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.fixed_point_residual.iter().all(|(_, r)| r.is_zero())
            && self.total_loss_residual.is_zero()
            && self.total_loss_lhs == self.total_loss_closed
            && self.total_loss_rhs == self.total_loss_closed
            && self.weight_residuals.iter().all(Zero::is_zero)
            && self.params.weights_in_unit_interval()
            && self.matrix.is_nonnegative()
            && self.matrix.stray_edge().is_none()
    }
}

pub fn verify_identities(set: &ExponentSet, p: &Rational) -> Result<IdentityReport> {
    let params = ScaleParameters::new(set, p)?;
    let matrix = InductionMatrix::from_parameters(&params);
    let v = pf_vector_from_profile(&params.profile);
    let values: Vec<Rational> = v.iter().map(|(_, x)| x.clone()).collect();
    let mv = matrix.entries.mul_vec(&values);
    let fixed_point_residual = v
        .iter()
        .zip(mv)
        .map(|((node, x), y)| (*node, y - x))
        .collect();
    let k = params.k;
    let total_loss_lhs = v
        .iter()
        .filter_map(|(node, x)| match node {
            Node::Q(l) => Some(x / int(i64::from(*l))),
            Node::T(_) => None,
        })
        .fold(Rational::zero(), |a, b| a + b);
    let total_loss_rhs = q(params.profile.n[(k - 1) as usize]) * params.alpha(k - 1);
    let total_loss_closed = q(params.profile.n[(k - 1) as usize])
        - Rational::new(params.profile.k[(k - 1) as usize].into(), k.into());
    Ok(IdentityReport {
        total_loss_residual: &total_loss_lhs - &total_loss_rhs,
        weight_residuals: params.defining_residuals(),
        matrix,
        v,
        fixed_point_residual,
        total_loss_lhs,
        total_loss_rhs,
        total_loss_closed,
        params,
    })
}
