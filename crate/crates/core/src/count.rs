//! Solution counts of Vinogradov-type systems
//! `sum_j Phi(x_j) = sum_j Phi(y_j)` over `x_j, y_j in [1, X]^d`, by
//! convolving representation counts and summing their squares.

use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exponents::gamma_tilde;
use crate::lattice::ExponentSet;
use crate::rational::Rational;

/// `Phi(x) = (x^i)_{i in D}` in canonical order.
pub fn moment_map(x: &[u64], set: &ExponentSet) -> Option<Vec<u64>> {
    assert_eq!(x.len(), set.dim(), "point dimension");
    set.elements()
        .iter()
        .map(|i| {
            x.iter()
                .zip(i.entries())
                .try_fold(1u64, |acc, (&base, &e)| acc.checked_mul(base.checked_pow(e)?))
        })
        .collect()
}

/// Worker count and memory ceiling for the convolution.
#[derive(Clone, Copy, Debug)]
pub struct CountConfig {
    pub workers: usize,
    pub mem_cap_bytes: Option<u64>,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig {
            workers: 1,
            mem_cap_bytes: None,
        }
    }
}

/// `r_s(v)`: ordered `s`-tuples of points with moment sum `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub s: u32,
    pub x_max: u64,
    pub dim: usize,
    pub table: BTreeMap<Vec<u64>, u64>,
}

impl CountTable {
    pub fn support(&self) -> usize {
        self.table.len()
    }

    pub fn mass(&self) -> BigUint {
        self.table.values().map(|&c| BigUint::from(c)).sum()
    }

    /// `J_s = sum_v r_s(v)^2`.
    pub fn second_moment(&self) -> BigUint {
        self.table
            .values()
            .map(|&c| {
                let c = BigUint::from(c);
                &c * &c
            })
            .sum()
    }
}

fn points(dim: usize, x_max: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u64>| {
                (1..=x_max).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// Rough bytes per table entry: key payload plus map overhead.
fn entry_bytes(len: usize) -> u128 {
    8 * len as u128 + 8 + 48
}

fn check_cap(s: u32, keys: u128, len: usize, cap: Option<u64>) -> Result<()> {
    let bytes = keys * entry_bytes(len);
    match cap {
        Some(cap) if bytes > u128::from(cap) => Err(Error::MemoryCap {
            s,
            estimated_keys: keys,
            estimated_bytes: bytes,
            cap,
        }),
        _ => Ok(()),
    }
}

/// `left * right` as a key-wise convolution; `None` on overflow.
fn convolve(
    left: &BTreeMap<Vec<u64>, u64>,
    right: &BTreeMap<Vec<u64>, u64>,
) -> Option<BTreeMap<Vec<u64>, u64>> {
    let left: Vec<_> = left.iter().collect();
    let chunk = (left.len() / (4 * rayon::current_num_threads()).max(1)).max(1);
    let parts: Vec<HashMap<Vec<u64>, u64>> = left
        .par_chunks(chunk)
        .map(|part| {
            let mut local: HashMap<Vec<u64>, u64> = HashMap::new();
            for (u, cu) in part {
                for (w, cw) in right {
                    let key: Option<Vec<u64>> =
                        u.iter().zip(w).map(|(a, b)| a.checked_add(*b)).collect();
                    let slot = local.entry(key?).or_default();
                    *slot = slot.checked_add(cu.checked_mul(*cw)?)?;
                }
            }
            Some(local)
        })
        .collect::<Option<_>>()?;
    let mut out = BTreeMap::new();
    for part in parts {
        for (k, c) in part {
            let slot: &mut u64 = out.entry(k).or_default();
            *slot = slot.checked_add(c)?;
        }
    }
    Some(out)
}

/// Builds `r_s` by repeated convolution `r_s = r_{s-1} * r_1` on a pool of
/// `config.workers` threads. Any partition gives the same table.
pub fn representation_counts(
    s: u32,
    x_max: u64,
    set: &ExponentSet,
    config: &CountConfig,
) -> Result<CountTable> {
    if s == 0 || x_max == 0 {
        return Err(Error::Precondition("need s >= 1 and X >= 1".into()));
    }
    let overflow = || Error::MomentOverflow {
        x_max,
        degree: set.degree(),
        s,
    };
    let dim = set.dim();
    let len = set.len();
    let worst = |t: u32| (x_max as u128).checked_pow(t * dim as u32).unwrap_or(u128::MAX);
    check_cap(1, worst(1), len, config.mem_cap_bytes)?;
    let mut r1: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for x in points(dim, x_max) {
        let v = moment_map(&x, set).ok_or_else(overflow)?;
        *r1.entry(v).or_default() += 1;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let mut table = r1.clone();
    for t in 2..=s {
        let pairs = table.len() as u128 * r1.len() as u128;
        check_cap(t, worst(t).min(pairs), len, config.mem_cap_bytes)?;
        table = pool.install(|| convolve(&table, &r1)).ok_or_else(overflow)?;
    }
    Ok(CountTable {
        s,
        x_max,
        dim,
        table,
    })
}

/// `J_s(X; D)`.
pub fn count_solutions(
    s: u32,
    x_max: u64,
    set: &ExponentSet,
    config: &CountConfig,
) -> Result<BigUint> {
    Ok(representation_counts(s, x_max, set, config)?.second_moment())
}

/// Direct enumeration of all `2s`-tuples; only for tiny instances.
pub fn brute_force_count(s: u32, x_max: u64, set: &ExponentSet) -> BigUint {
    let pts = points(set.dim(), x_max);
    let phis: Vec<Vec<u64>> = pts
        .iter()
        .map(|x| moment_map(x, set).expect("tiny instance"))
        .collect();
    let n = phis.len();
    let slots = 2 * s as usize;
    let mut idx = vec![0usize; slots];
    let mut count = 0u64;
    loop {
        let balanced = (0..set.len()).all(|c| {
            let lhs: u64 = idx[..s as usize].iter().map(|&i| phis[i][c]).sum();
            let rhs: u64 = idx[s as usize..].iter().map(|&i| phis[i][c]).sum();
            lhs == rhs
        });
        count += u64::from(balanced);
        let mut pos = 0;
        loop {
            if pos == slots {
                return BigUint::from(count);
            }
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBounds {
    pub j: BigUint,
    pub diagonal: BigUint,
    pub cauchy_schwarz: BigUint,
    pub pass: bool,
}

/// `J >= X^{sd}` and `J >= ceil(X^{2sd} / |supp r_s|)`.
pub fn lower_bounds(table: &CountTable) -> LowerBounds {
    let j = table.second_moment();
    let diagonal = BigUint::from(table.x_max).pow(table.s * table.dim as u32);
    let support = BigUint::from(table.support());
    let square = &diagonal * &diagonal;
    let cauchy_schwarz = if support.is_zero() {
        BigUint::zero()
    } else {
        (&square + &support - 1u32) / &support
    };
    let pass = j >= diagonal && j >= cauchy_schwarz && table.mass() == diagonal;
    LowerBounds {
        j,
        diagonal,
        cauchy_schwarz,
        pass,
    }
}

/// Slope of `ln J` against `ln X` and its comparison with `2s * gamma`.
#[derive(Clone, Debug)]
pub struct GrowthFit {
    pub s: u32,
    pub samples: Vec<(u64, BigUint)>,
    pub slope: f64,
    pub predicted: Rational,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

impl GrowthFit {
    pub fn difference(&self) -> f64 {
        self.slope - crate::rational::to_f64(&self.predicted)
    }
}

/// Allowed shortfall below the predicted slope.
pub const SLOPE_LOWER_SLACK: f64 = 0.5;
/// Reported, never enforced, excess above the predicted slope.
pub const SLOPE_UPPER_SLACK: f64 = 1.0;

/// Least-squares slope of `ys` against `xs`.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

/// `ln v`, accurate for values far beyond the `f64` range.
pub fn ln_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits < 1000 {
        return v.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    (v >> shift).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn growth_fit(
    s: u32,
    set: &ExponentSet,
    x_list: &[u64],
    config: &CountConfig,
) -> Result<GrowthFit> {
    if x_list.len() < 3 || x_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition(
            "need at least three strictly increasing X values".into(),
        ));
    }
    let samples = x_list
        .iter()
        .map(|&x| Ok((x, count_solutions(s, x, set, config)?)))
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = samples.iter().map(|(x, _)| (*x as f64).ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|(_, j)| ln_big(j)).collect();
    let slope = least_squares_slope(&xs, &ys);
    let p = Rational::from_integer((2 * s).into());
    let predicted = &p * gamma_tilde(set, &p)?;
    let target = crate::rational::to_f64(&predicted);
    Ok(GrowthFit {
        s,
        samples,
        slope,
        predicted,
        lower_ok: slope >= target - SLOPE_LOWER_SLACK,
        upper_ok: slope <= target + SLOPE_UPPER_SLACK,
    })
}

/// Writes one record per key in key order: the LEB128 payload length, then
/// the payload (each moment entry, then the count, all LEB128).
pub fn write_table<W: Write>(table: &CountTable, out: &mut W) -> Result<()> {
    let mut payload = Vec::new();
    for (key, count) in &table.table {
        payload.clear();
        for &v in key.iter().chain(std::iter::once(count)) {
            leb128::write::unsigned(&mut payload, v)?;
        }
        leb128::write::unsigned(out, payload.len() as u64)?;
        out.write_all(&payload)?;
    }
    Ok(())
}

/// Reads records written by [`write_table`].
pub fn read_table<R: Read>(input: &mut R) -> Result<BTreeMap<Vec<u64>, u64>> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let mut rest = bytes.as_slice();
    let mut out = BTreeMap::new();
    let bad = |e: leb128::read::Error| Error::MalformedDump(e.to_string());
    while !rest.is_empty() {
        let len = leb128::read::unsigned(&mut rest).map_err(bad)? as usize;
        if len > rest.len() {
            return Err(Error::MalformedDump("record runs past end of input".into()));
        }
        let (mut payload, tail) = rest.split_at(len);
        rest = tail;
        let mut values = Vec::new();
        while !payload.is_empty() {
            values.push(leb128::read::unsigned(&mut payload).map_err(bad)?);
        }
        let count = values
            .pop()
            .ok_or_else(|| Error::MalformedDump("empty record".into()))?;
        if out.insert(values, count).is_some() {
            return Err(Error::MalformedDump("duplicate key".into()));
        }
    }
    Ok(out)
}
