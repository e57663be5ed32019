//! Decoupling exponents in exact arithmetic.
//!
//! Four formulas are evaluated here:
//! - `gamma_tilde`: the projection/truncation recursion for a down-set,
//! - `gamma_tilde_l2`: the same recursion with a `1/2` projection penalty,
//! - `gamma_lower`: the lower-bound recursion over cap vectors,
//! - `gamma_closed`: the closed form over sorted caps.
//!
//! On box sets the first, third and fourth agree; `audit` checks that.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{ExponentSet, KBox, LevelCounts};
use crate::rational::{fmt_q, int, max_q, ratio, two, Rational};

fn check_p(p: &Rational) -> Result<()> {
    if *p < two() {
        return Err(Error::ExponentBelowTwo(fmt_q(p)));
    }
    Ok(())
}

fn half(d: usize) -> Rational {
    ratio(d as i64, 2)
}

/// `K(D(caps, <= deg))` without materialising the set.
pub fn box_homogeneous_dimension(caps: &KBox, deg: u32) -> u64 {
    let counts = LevelCounts::new(caps);
    (1..=i64::from(deg)).map(|l| l as u64 * counts.get(l)).sum()
}

/// Projection penalty used by the recursion.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Penalty {
    /// `+1/p`, the decoupling recursion.
    InverseP,
    /// `+1/2`, the `l^2` decoupling recursion.
    Half,
}

/// Memoized evaluator for the projection/truncation recursion.
///
/// The memo is keyed on the canonical set together with `p`, so one
/// evaluator can be reused across queries.
#[derive(Debug)]
pub struct RecursionEvaluator {
    penalty: Penalty,
    memo: HashMap<(ExponentSet, Rational), Rational>,
    trace: Vec<(String, Rational)>,
    degenerate_base: bool,
}

impl RecursionEvaluator {
    pub fn new(penalty: Penalty) -> Self {
        RecursionEvaluator {
            penalty,
            memo: HashMap::new(),
            trace: Vec::new(),
            degenerate_base: false,
        }
    }

    pub fn evaluate(&mut self, set: &ExponentSet, p: &Rational) -> Result<Rational> {
        check_p(p)?;
        set.require_down_set()?;
        Ok(self.eval(set, p))
    }

    /// Sub-problems in the order they were first solved.
    pub fn trace(&self) -> &[(String, Rational)] {
        &self.trace
    }

    pub fn take_trace(&mut self) -> Vec<(String, Rational)> {
        std::mem::take(&mut self.trace)
    }

    /// Whether some degree-1 sub-problem used fewer active coordinates than
    /// its ambient dimension.
    pub fn hit_degenerate_base(&self) -> bool {
        self.degenerate_base
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    fn eval(&mut self, set: &ExponentSet, p: &Rational) -> Rational {
        let key = (set.clone(), p.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let value = self.step(set, p, true);
        self.trace.push((format!("{set} @ p={}", fmt_q(p)), value.clone()));
        self.memo.insert(key, value.clone());
        value
    }

    /// One level of the recursion; with `memo = false` the children are
    /// evaluated afresh, which the tests use as a reference.
    fn step(&mut self, set: &ExponentSet, p: &Rational, memo: bool) -> Rational {
        if set.dim() == 0 || set.degree() == 0 {
            return Rational::zero();
        }
        if set.degree() == 1 {
            let active = set.essential_dim();
            if active < set.dim() {
                self.degenerate_base = true;
            }
            return int(active as i64) * (Rational::one() - p.recip());
        }
        let penalty = match self.penalty {
            Penalty::InverseP => p.recip(),
            Penalty::Half => ratio(1, 2),
        };
        let mut best: Option<Rational> = None;
        for coord in 0..set.dim() {
            let projected = set.project(coord).expect("coordinate in range");
            let v = if memo {
                self.eval(&projected, p)
            } else {
                self.step(&projected, p, false)
            } + &penalty;
            best = Some(match best {
                Some(b) => max_q(b, v),
                None => v,
            });
        }
        let k = set.degree();
        let lower = set.truncate(k - 1);
        let ratio_k = Rational::new(
            lower.homogeneous_dimension().into(),
            set.homogeneous_dimension().into(),
        );
        let q = max_q(two(), p * ratio_k);
        let v = if memo {
            self.eval(&lower, &q)
        } else {
            self.step(&lower, &q, false)
        };
        max_q(best.expect("dimension is positive"), v)
    }

    /// Evaluation without any memo table.
    pub fn evaluate_unmemoized(&mut self, set: &ExponentSet, p: &Rational) -> Result<Rational> {
        check_p(p)?;
        set.require_down_set()?;
        Ok(self.step(set, p, false))
    }
}

/// The projection/truncation recursion with `+1/p` penalty.
pub fn gamma_tilde(set: &ExponentSet, p: &Rational) -> Result<Rational> {
    RecursionEvaluator::new(Penalty::InverseP).evaluate(set, p)
}

/// The `l^2` variant with `+1/2` penalty on the projection branch.
pub fn gamma_tilde_l2(set: &ExponentSet, p: &Rational) -> Result<Rational> {
    RecursionEvaluator::new(Penalty::Half).evaluate(set, p)
}

/// Memoized evaluator of the lower-bound recursion over cap vectors.
#[derive(Debug, Default)]
pub struct LowerEvaluator {
    memo: HashMap<(Vec<u32>, u32, Rational), Rational>,
}

impl LowerEvaluator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn evaluate(&mut self, caps: &KBox, deg_cap: u32, p: &Rational) -> Result<Rational> {
        check_p(p)?;
        Ok(self.eval(caps, deg_cap, p))
    }

    fn eval(&mut self, caps: &KBox, deg_cap: u32, p: &Rational) -> Rational {
        let d = caps.dim();
        if d == 0 || deg_cap == 0 {
            return Rational::zero();
        }
        let key = (caps.caps().to_vec(), deg_cap, p.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let k = box_homogeneous_dimension(caps, deg_cap);
        let mut value = max_q(
            half(d),
            int(d as i64) - Rational::from_integer(k.into()) / p,
        );
        for j in 0..d {
            let sub = self.eval(&caps.delete(j), deg_cap, p) + p.recip();
            value = max_q(value, sub);
        }
        self.memo.insert(key, value.clone());
        value
    }
}

/// The lower-bound recursion `gamma_{k,deg}(p)`.
pub fn gamma_lower(caps: &KBox, deg_cap: u32, p: &Rational) -> Result<Rational> {
    LowerEvaluator::new().evaluate(caps, deg_cap, p)
}

/// Which branch of the closed form attains the maximum.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Argmax {
    /// The `d/2` floor; also reported on ties with it.
    HalfDim,
    /// The term with this `j` (smallest such `j` on ties).
    Index(usize),
}

impl fmt::Display for Argmax {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Argmax::HalfDim => f.write_str("d/2 branch"),
            Argmax::Index(j) => write!(f, "{j}"),
        }
    }
}

/// One term `j + (d-j)/p - K_{j,deg}/p` of the closed form.
pub fn closed_term(caps: &KBox, deg_cap: u32, j: usize, p: &Rational) -> Rational {
    let d = caps.dim() as i64;
    let kj = box_homogeneous_dimension(&caps.prefix(j), deg_cap) as i64;
    int(j as i64) + Rational::new((d - j as i64 - kj).into(), 1.into()) / p
}

/// The closed form over sorted caps, with the branch attaining it.
pub fn gamma_closed(caps: &KBox, deg_cap: u32, p: &Rational) -> Result<(Rational, Argmax)> {
    check_p(p)?;
    if !caps.is_sorted() {
        return Err(Error::UnsortedCaps(caps.caps().to_vec()));
    }
    let d = caps.dim();
    if d == 0 || deg_cap == 0 {
        return Ok((Rational::zero(), Argmax::HalfDim));
    }
    let mut best = (half(d), Argmax::HalfDim);
    for j in d / 2 + 1..=d {
        let term = closed_term(caps, deg_cap, j, p);
        if term > best.0 {
            best = (term, Argmax::Index(j));
        }
    }
    Ok(best)
}

/// The predicted growth exponent `2s * gamma(p = 2s)` of `J_s(X)`.
pub fn js_exponent(caps: &KBox, deg_cap: u32, s: u32) -> Result<Rational> {
    if s == 0 {
        return Err(Error::Precondition("s must be at least 1".into()));
    }
    let p = int(2 * i64::from(s));
    let (gamma, _) = gamma_closed(&caps.sorted(), deg_cap, &p)?;
    Ok(p * gamma)
}

/// A failed assertion found by [`audit`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AuditFailure {
    /// The three evaluations of a box set disagree.
    Disagreement {
        p: Rational,
        gamma_tilde: Rational,
        gamma_lower: Rational,
        gamma_closed: Rational,
    },
    /// Raising cap `coord` by one increased `gamma_lower`.
    NotAntitone {
        p: Rational,
        coord: usize,
        before: Rational,
        after: Rational,
    },
    /// `gamma_{k,deg-1}(p) > gamma_{k,deg}(p K_deg / K_{deg-1})`.
    RescalingFails {
        p: Rational,
        lhs: Rational,
        rhs: Rational,
    },
    /// The recursion fell below the lower bound.
    BelowLower {
        p: Rational,
        gamma_tilde: Rational,
        gamma_lower: Rational,
    },
}

impl fmt::Display for AuditFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuditFailure::Disagreement {
                p,
                gamma_tilde,
                gamma_lower,
                gamma_closed,
            } => write!(
                f,
                "p={}: gamma_tilde={} gamma_lower={} gamma_closed={}",
                fmt_q(p),
                fmt_q(gamma_tilde),
                fmt_q(gamma_lower),
                fmt_q(gamma_closed)
            ),
            AuditFailure::NotAntitone {
                p,
                coord,
                before,
                after,
            } => write!(
                f,
                "p={}: raising cap {coord} moved gamma_lower from {} up to {}",
                fmt_q(p),
                fmt_q(before),
                fmt_q(after)
            ),
            AuditFailure::RescalingFails { p, lhs, rhs } => write!(
                f,
                "p={}: truncated value {} exceeds rescaled value {}",
                fmt_q(p),
                fmt_q(lhs),
                fmt_q(rhs)
            ),
            AuditFailure::BelowLower {
                p,
                gamma_tilde,
                gamma_lower,
            } => write!(
                f,
                "p={}: gamma_tilde={} below gamma_lower={}",
                fmt_q(p),
                fmt_q(gamma_tilde),
                fmt_q(gamma_lower)
            ),
        }
    }
}

/// Shared evaluators for running many audits.
#[derive(Debug)]
pub struct Auditor {
    tilde: RecursionEvaluator,
    lower: LowerEvaluator,
}

impl Default for Auditor {
    fn default() -> Self {
        Auditor {
            tilde: RecursionEvaluator::new(Penalty::InverseP),
            lower: LowerEvaluator::new(),
        }
    }
}

impl Auditor {
    pub fn new() -> Self {
        Self::default()
    }

    /// Checks, for every `p` in the grid: the three box evaluations agree,
    /// `gamma_lower` is antitone in each cap, the rescaling inequality between
    /// consecutive degrees holds, and `gamma_tilde >= gamma_lower`.
    /// Returns the first failure.
    pub fn audit(
        &mut self,
        caps: &KBox,
        deg_cap: u32,
        p_grid: &[Rational],
    ) -> Result<Option<AuditFailure>> {
        let sorted = caps.sorted();
        let set = ExponentSet::box_set(caps, deg_cap)?;
        for p in p_grid {
            let gt = self.tilde.evaluate(&set, p)?;
            let gl = self.lower.evaluate(caps, deg_cap, p)?;
            let (gc, _) = gamma_closed(&sorted, deg_cap, p)?;
            if gt < gl {
                return Ok(Some(AuditFailure::BelowLower {
                    p: p.clone(),
                    gamma_tilde: gt,
                    gamma_lower: gl,
                }));
            }
            if gt != gl || gl != gc {
                return Ok(Some(AuditFailure::Disagreement {
                    p: p.clone(),
                    gamma_tilde: gt,
                    gamma_lower: gl,
                    gamma_closed: gc,
                }));
            }
            for coord in 0..caps.dim() {
                let mut raised = caps.caps().to_vec();
                raised[coord] += 1;
                let after = self.lower.evaluate(&KBox::new(raised)?, deg_cap, p)?;
                if after > gl {
                    return Ok(Some(AuditFailure::NotAntitone {
                        p: p.clone(),
                        coord,
                        before: gl.clone(),
                        after,
                    }));
                }
            }
            if deg_cap >= 2 {
                let k_hi = box_homogeneous_dimension(caps, deg_cap);
                let k_lo = box_homogeneous_dimension(caps, deg_cap - 1);
                let lhs = self.lower.evaluate(caps, deg_cap - 1, p)?;
                let scaled = p * Rational::new(k_hi.into(), k_lo.into());
                let rhs = self.lower.evaluate(caps, deg_cap, &scaled)?;
                if lhs > rhs {
                    return Ok(Some(AuditFailure::RescalingFails {
                        p: p.clone(),
                        lhs,
                        rhs,
                    }));
                }
            }
        }
        Ok(None)
    }
}

/// One-shot form of [`Auditor::audit`].
pub fn audit(caps: &KBox, deg_cap: u32, p_grid: &[Rational]) -> Result<Option<AuditFailure>> {
    Auditor::new().audit(caps, deg_cap, p_grid)
}

/// All four exponents for one query.
#[derive(Clone, Debug)]
pub struct ExponentReport {
    pub set: ExponentSet,
    pub p: Rational,
    pub gamma_tilde_recursive: Rational,
    pub gamma_l2: Rational,
    /// Present only for box sets.
    pub gamma_tilde_closed: Option<Rational>,
    pub gamma_lower: Option<Rational>,
    pub argmax_j: Option<Argmax>,
    /// Set when a degree-1 sub-problem was not a full set of unit vectors.
    pub non_box_degree_one: bool,
    pub recursion_trace: Vec<(String, Rational)>,
}

pub fn report(set: &ExponentSet, p: &Rational) -> Result<ExponentReport> {
    let mut tilde = RecursionEvaluator::new(Penalty::InverseP);
    let gamma_tilde_recursive = tilde.evaluate(set, p)?;
    let gamma_l2 = gamma_tilde_l2(set, p)?;
    let (gamma_tilde_closed, gamma_lower, argmax_j) = match set.as_box() {
        Some(spec) => {
            let (closed, arg) = gamma_closed(&spec.caps.sorted(), spec.deg_cap, p)?;
            let lower = gamma_lower(&spec.caps, spec.deg_cap, p)?;
            (Some(closed), Some(lower), Some(arg))
        }
        None => (None, None, None),
    };
    Ok(ExponentReport {
        set: set.clone(),
        p: p.clone(),
        gamma_tilde_recursive,
        gamma_l2,
        gamma_tilde_closed,
        gamma_lower,
        argmax_j,
        non_box_degree_one: tilde.hit_degenerate_base(),
        recursion_trace: tilde.take_trace(),
    })
}

/// Outcome of one worked-example regression.
#[derive(Clone, Debug)]
pub struct ExampleCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// The grid used by the worked-example regressions.
pub fn example_grid() -> Vec<Rational> {
    [(2, 1), (5, 2), (3, 1), (4, 1), (6, 1), (12, 1), (24, 1), (100, 1)]
        .into_iter()
        .map(|(n, d)| ratio(n, d))
        .collect()
}

fn run_example(
    name: &'static str,
    cases: impl IntoIterator<Item = (String, Rational, Rational)>,
) -> ExampleCheck {
    let mut count = 0usize;
    for (label, got, want) in cases {
        count += 1;
        if got != want {
            return ExampleCheck {
                name,
                passed: false,
                detail: format!("{label}: got {} want {}", fmt_q(&got), fmt_q(&want)),
            };
        }
    }
    ExampleCheck {
        name,
        passed: true,
        detail: format!("{count} identities"),
    }
}

fn kb(caps: Vec<u32>) -> KBox {
    KBox::new(caps).expect("positive caps")
}

fn closed(caps: &KBox, deg: u32, p: &Rational) -> Rational {
    gamma_closed(caps, deg, p).expect("valid input").0
}

/// Regression of the closed form against the hand-derived special cases:
/// the moment curve, equal caps, `k = (1, k2)`, general boxes, the binary
/// case, and the equal-caps instance where the maximum is not at `j = d`.
pub fn worked_examples() -> Vec<ExampleCheck> {
    let grid = example_grid();
    let q = |n: u64| Rational::from_integer(n.into());
    let mut out = Vec::new();

    let mut cases = Vec::new();
    for k in 1..=6u32 {
        for p in &grid {
            let want = max_q(ratio(1, 2), Rational::one() - q(u64::from(k * (k + 1) / 2)) / p);
            cases.push((format!("k={k} p={}", fmt_q(p)), closed(&kb(vec![k]), k, p), want));
        }
    }
    out.push(run_example("moment curve", cases));

    let mut cases = Vec::new();
    for j in 1..=4u64 {
        for k in 1..=4u64 {
            let caps = kb(vec![k as u32; j as usize]);
            let got = q(box_homogeneous_dimension(&caps, k as u32));
            let want = Rational::new((j * k * binomial(k + j, j)).into(), (j + 1).into());
            cases.push((format!("K_{{{j},{k}}}"), got, want));
        }
    }
    for d in 1..=4usize {
        for k in 1..=4u32 {
            let caps = kb(vec![k; d]);
            for p in &grid {
                let mut want = half(d);
                for j in d / 2 + 1..=d {
                    let kj = j as u64 * u64::from(k) * binomial(u64::from(k) + j as u64, j as u64)
                        / (j as u64 + 1);
                    let term = int(j as i64) + (q((d - j) as u64) - q(kj)) / p;
                    want = max_q(want, term);
                }
                cases.push((format!("d={d} k={k} p={}", fmt_q(p)), closed(&caps, k, p), want));
            }
        }
    }
    out.push(run_example("equal caps, degree at most the cap", cases));

    let mut cases = Vec::new();
    for k2 in 1..=6u32 {
        let caps = kb(vec![1, k2]);
        for p in &grid {
            for k in 1..=k2 {
                let want = max_q(int(1), int(2) - q(u64::from(k * (k + 1))) / p);
                cases.push((format!("k2={k2} k={k} p={}", fmt_q(p)), closed(&caps, k, p), want));
            }
            let want = max_q(int(1), int(2) - q(u64::from((k2 + 1) * (k2 + 1))) / p);
            let label = format!("k2={k2} k=k2+1 p={}", fmt_q(p));
            cases.push((label, closed(&caps, k2 + 1, p), want));
        }
    }
    out.push(run_example("caps (1, k2)", cases));

    let mut cases = Vec::new();
    for k1 in 1..=4u32 {
        for k2 in k1..=4u32 {
            let caps = kb(vec![k1, k2]);
            let got = q(box_homogeneous_dimension(&caps, k1 + k2));
            let want = q(u64::from((k1 + 1) * (k2 + 1) * (k1 + k2)) / 2);
            cases.push((format!("K for caps ({k1},{k2})"), got, want));
        }
    }
    for caps in [vec![1, 2, 3], vec![2, 2, 3], vec![1, 1, 2, 4]] {
        let b = kb(caps.clone());
        let prod: u64 = caps.iter().map(|&c| u64::from(c) + 1).product();
        let sum: u64 = caps.iter().map(|&c| u64::from(c)).sum();
        let got = q(box_homogeneous_dimension(&b, sum as u32));
        cases.push((format!("K for caps {caps:?}"), got, Rational::new((prod * sum).into(), 2.into())));
    }
    out.push(run_example("full box homogeneous dimension", cases));

    let mut cases = Vec::new();
    for k1 in 1..=4u32 {
        for k2 in k1..=4u32 {
            let caps = kb(vec![k1, k2]);
            for extra in 0..=1 {
                for p in &grid {
                    let kk = Rational::new(((k1 + 1) * (k2 + 1) * (k1 + k2)).into(), 2.into());
                    let want = max_q(int(1), int(2) - kk / p);
                    let deg = k1 + k2 + extra;
                    let label = format!("caps ({k1},{k2}) deg {deg} p={}", fmt_q(p));
                    cases.push((label, closed(&caps, deg, p), want));
                }
            }
        }
    }
    out.push(run_example("binary box", cases));

    let p = int(40);
    let caps = kb(vec![2, 2, 2]);
    let (value, arg) = gamma_closed(&caps, 6, &p).expect("valid input");
    let top = closed_term(&caps, 6, 3, &p);
    let passed = arg == Argmax::Index(2) && value == int(2) - ratio(17, 40) && top < value;
    out.push(ExampleCheck {
        name: "equal caps (2,2,2): maximum not at j = d",
        passed,
        detail: format!(
            "argmax {arg}, value {}, j=d term {}",
            fmt_q(&value),
            fmt_q(&top)
        ),
    });
    out
}
