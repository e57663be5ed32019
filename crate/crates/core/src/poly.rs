//! Sparse multivariate polynomials with integer coefficients, and matrices
//! of them.
//!
//! Terms are keyed by exponent in the canonical graded order of
//! [`MultiIndex`], which is a monomial order, so the last key is the leading
//! term.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::lattice::MultiIndex;
use crate::linalg::RationalMatrix;
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<MultiIndex, BigInt>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(MultiIndex::zero(dim), c)
    }

    pub fn monomial(exp: MultiIndex, c: impl Into<BigInt>) -> Self {
        let dim = exp.dim();
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Polynomial { dim, terms }
    }

    /// `sum c_i t^i` over the given coefficients.
    pub fn from_terms<I>(dim: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, BigInt)>,
    {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            assert_eq!(e.dim(), dim, "exponent dimension");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: MultiIndex, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exp: &MultiIndex) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    pub fn leading_term(&self) -> Option<(&MultiIndex, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// `d^j / dt^j`, with falling-factorial coefficients.
    pub fn derivative(&self, j: &MultiIndex) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (e, c) in &self.terms {
            if !j.precedes(e) {
                continue;
            }
            let mut coeff = c.clone();
            let mut exp = Vec::with_capacity(self.dim);
            for (&em, &jm) in e.entries().iter().zip(j.entries()) {
                for f in 0..jm {
                    coeff *= em - f;
                }
                exp.push(em - jm);
            }
            out.add_term(MultiIndex::new(exp), coeff);
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.dim, "point dimension");
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = Rational::from_integer(c.clone());
            for (t, &k) in point.iter().zip(e.entries()) {
                if k > 0 {
                    term *= num_traits::pow(t.clone(), k as usize);
                }
            }
            total += term;
        }
        total
    }

    /// Multiplies by the monomial `t^exp`.
    pub fn shift(&self, exp: &MultiIndex) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let sum = e.entries().iter().zip(exp.entries()).map(|(a, b)| a + b).collect();
                (MultiIndex::new(sum), c.clone())
            })
            .collect();
        Polynomial {
            dim: self.dim,
            terms,
        }
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// `self / divisor` when the division is exact over `Z[t]`.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let (lead_exp, lead_c) = divisor.leading_term()?;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.dim);
        while let Some((e, c)) = rem.leading_term() {
            if !lead_exp.precedes(e) {
                return None;
            }
            let (q, r) = c.div_rem(lead_c);
            if !r.is_zero() {
                return None;
            }
            let shift: Vec<u32> = e
                .entries()
                .iter()
                .zip(lead_exp.entries())
                .map(|(a, b)| a - b)
                .collect();
            let shift = MultiIndex::new(shift);
            let step = divisor.shift(&shift).scale(&q);
            quot.add_term(shift, q);
            rem = &rem - &step;
        }
        Some(quot)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            write!(f, "{}", c.abs())?;
            if !e.is_zero() {
                write!(f, "*t^{e}")?;
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-BigInt::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut acc: BTreeMap<MultiIndex, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.entries().iter().zip(eb.entries()).map(|(a, b)| a + b).collect();
                *acc.entry(MultiIndex::new(e)).or_default() += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Polynomial {
            dim: self.dim,
            terms: acc,
        }
    }
}

/// Rectangular matrix of polynomials in a common number of variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    dim: usize,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zeros(dim: usize, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            dim,
            rows,
            cols,
            entries: vec![Polynomial::zero(dim); rows * cols],
        }
    }

    pub fn from_rows(dim: usize, rows: Vec<Vec<Polynomial>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        assert!(rows.iter().flatten().all(|p| p.dim() == dim), "mixed dimensions");
        PolyMatrix {
            dim,
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        assert_eq!(p.dim(), self.dim);
        self.entries[i * self.cols + j] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    pub fn eval(&self, point: &[Rational]) -> RationalMatrix {
        let rows = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).eval(point)).collect())
            .collect();
        let mut m = RationalMatrix::from_rows(rows);
        if self.rows == 0 {
            m = RationalMatrix::zeros(0, self.cols);
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut out = PolyMatrix::zeros(self.dim, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn x(e: &[u32], c: i64) -> Polynomial {
        Polynomial::monomial(MultiIndex::new(e.to_vec()), c)
    }

    #[test]
    fn derivative_uses_falling_factorials() {
        let p = &x(&[3, 2], 1) + &x(&[1, 0], 5);
        let d = p.derivative(&MultiIndex::new(vec![2, 1]));
        assert_eq!(d, x(&[1, 1], 12));
        assert!(x(&[1, 0], 1).derivative(&MultiIndex::new(vec![0, 1])).is_zero());
    }

    #[test]
    fn arithmetic_and_exact_division() {
        let a = &x(&[1, 0], 1) + &x(&[0, 1], -2);
        let b = &x(&[2, 1], 3) + &x(&[0, 0], 7);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&b), Some(a.clone()));
        assert_eq!(x(&[1, 0], 1).div_exact(&x(&[0, 1], 1)), None);
        assert_eq!(x(&[1, 0], 3).div_exact(&x(&[1, 0], 2)), None);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn evaluation() {
        let p = &x(&[2, 0], 1) + &x(&[0, 1], -3);
        assert_eq!(p.eval(&[ratio(1, 2), int(1)]), ratio(1, 4) - int(3));
        assert_eq!(p.to_string(), "1*t^(2,0) - 3*t^(0,1)");
    }
}
