//! Generic rank of polynomial matrices with replayable certificates.
//!
//! The upper side is fraction-free (Bareiss) elimination over `Z[t]` with
//! full pivoting: once every entry of the remaining block vanishes, all
//! larger minors vanish identically. The lower side is a rational point at
//! which the pivot minor is nonzero, re-checked by cofactor expansion.

use num_traits::Zero;
use sha2::{Digest, Sha256};

use crate::linalg::det_cofactor;
use crate::poly::{PolyMatrix, Polynomial};
use crate::rational::Rational;

/// A point and an `r x r` minor that is nonzero there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub point: Vec<Rational>,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub determinant: Rational,
}

/// The pivot positions chosen during elimination and a SHA-256 digest of
/// the pivot polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationTranscript {
    pub pivots: Vec<(usize, usize)>,
    pub digest: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub rank: usize,
    pub witness: Option<Witness>,
    pub transcript: EliminationTranscript,
}

struct Elimination {
    rank: usize,
    pivots: Vec<(usize, usize)>,
    row_order: Vec<usize>,
    col_order: Vec<usize>,
    digest: String,
}

/// Runs Bareiss elimination. With `forced`, the recorded pivot positions are
/// used instead of searching; `None` is returned if one of them is zero.
fn eliminate(m: &PolyMatrix, forced: Option<&[(usize, usize)]>) -> Option<Elimination> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut row_order: Vec<usize> = (0..rows).collect();
    let mut col_order: Vec<usize> = (0..cols).collect();
    let mut prev = Polynomial::constant(m.dim(), 1);
    let mut pivots = Vec::new();
    let mut hasher = Sha256::new();
    hasher.update(format!("{rows}x{cols};").as_bytes());
    let steps = rows.min(cols);
    for s in 0..steps {
        let pick = match forced {
            Some(list) => match list.get(s) {
                Some(&(i, j)) if i >= s && j >= s && i < rows && j < cols => Some((i, j)),
                Some(_) => return None,
                None => None,
            },
            // Sparsest nonzero entry, first in row-major order on ties; this
            // keeps the intermediate polynomials small.
            None => (s..rows)
                .flat_map(|i| (s..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !a.get(i, j).is_zero())
                .min_by_key(|&(i, j)| a.get(i, j).num_terms()),
        };
        let Some((pi, pj)) = pick else { break };
        if a.get(pi, pj).is_zero() {
            return None;
        }
        a.swap_rows(s, pi);
        a.swap_cols(s, pj);
        row_order.swap(s, pi);
        col_order.swap(s, pj);
        pivots.push((pi, pj));
        let pivot = a.get(s, s).clone();
        hasher.update(format!("({pi},{pj}):{pivot};").as_bytes());
        for i in s + 1..rows {
            let lead = a.get(i, s).clone();
            for j in s + 1..cols {
                let num = &(&pivot * a.get(i, j)) - &(&lead * a.get(s, j));
                let q = num
                    .div_exact(&prev)
                    .expect("Bareiss quotients are exact in an integral domain");
                a.set(i, j, q);
            }
            a.set(i, s, Polynomial::zero(m.dim()));
        }
        prev = pivot;
    }
    let r = pivots.len();
    if forced.is_some_and(|list| list.len() != r) {
        return None;
    }
    let rest_zero = (r..rows).all(|i| (r..cols).all(|j| a.get(i, j).is_zero()));
    if !rest_zero {
        return None;
    }
    hasher.update(format!("rank={r}").as_bytes());
    Some(Elimination {
        rank: r,
        pivots,
        row_order,
        col_order,
        digest: hex::encode(hasher.finalize()),
    })
}

fn nth_prime(n: usize) -> u64 {
    let mut count = 0;
    let mut candidate = 1u64;
    loop {
        candidate += 1;
        if (2..candidate).take_while(|d| d * d <= candidate).all(|d| !candidate.is_multiple_of(d)) {
            if count == n {
                return candidate;
            }
            count += 1;
        }
    }
}

/// The `n`-th point of the deterministic sample: with `P` the `n`-th prime,
/// coordinate `m` is `i_m / (P + 1)` where `i_m = 1 + (m + 1)(n + 1) mod P`.
pub fn sample_point(dim: usize, n: usize) -> Vec<Rational> {
    let p = nth_prime(n);
    (0..dim)
        .map(|m| {
            let i = 1 + ((m as u64 + 1) * (n as u64 + 1)) % p;
            Rational::new(i.into(), (p + 1).into())
        })
        .collect()
}

/// How many sample points are tried before giving up on a witness.
pub const WITNESS_SEARCH_LIMIT: usize = 256;

/// Exact generic rank with both certificates.
pub fn generic_rank(m: &PolyMatrix) -> RankCertificate {
    let e = eliminate(m, None).expect("unforced elimination always completes");
    let rows = e.row_order[..e.rank].to_vec();
    let cols = e.col_order[..e.rank].to_vec();
    let witness = if e.rank == 0 {
        None
    } else {
        (0..WITNESS_SEARCH_LIMIT).find_map(|n| {
            let point = sample_point(m.dim(), n);
            let det = det_cofactor(&m.eval(&point).select(&rows, &cols));
            (!det.is_zero()).then(|| Witness {
                point,
                rows: rows.clone(),
                cols: cols.clone(),
                determinant: det,
            })
        })
    };
    RankCertificate {
        rank: e.rank,
        witness,
        transcript: EliminationTranscript {
            pivots: e.pivots,
            digest: e.digest,
        },
    }
}

impl RankCertificate {
    /// Re-runs elimination along the recorded pivots and re-evaluates the
    /// witness minor; both must agree with the claimed rank.
    pub fn verify(&self, m: &PolyMatrix) -> bool {
        let Some(e) = eliminate(m, Some(&self.transcript.pivots)) else {
            return false;
        };
        if e.rank != self.rank || e.digest != self.transcript.digest {
            return false;
        }
        match &self.witness {
            None => self.rank == 0,
            Some(w) => {
                w.rows.len() == self.rank
                    && w.cols.len() == self.rank
                    && {
                        let det = det_cofactor(&m.eval(&w.point).select(&w.rows, &w.cols));
                        !det.is_zero() && det == w.determinant
                    }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::MultiIndex;

    fn x(e: &[u32], c: i64) -> Polynomial {
        Polynomial::monomial(MultiIndex::new(e.to_vec()), c)
    }

    #[test]
    fn rank_of_zero_matrix() {
        let m = PolyMatrix::zeros(2, 3, 2);
        let cert = generic_rank(&m);
        assert_eq!(cert.rank, 0);
        assert!(cert.witness.is_none());
        assert!(cert.verify(&m));
    }

    #[test]
    fn symbolic_rank_deficiency() {
        // Rows (t, t^2) and (t^2, t^3) are dependent over Q(t).
        let m = PolyMatrix::from_rows(
            1,
            vec![vec![x(&[1], 1), x(&[2], 1)], vec![x(&[2], 1), x(&[3], 1)]],
        );
        let cert = generic_rank(&m);
        assert_eq!(cert.rank, 1);
        assert!(cert.verify(&m));
    }

    #[test]
    fn full_rank_with_witness() {
        let m = PolyMatrix::from_rows(
            2,
            vec![
                vec![x(&[1, 0], 1), x(&[0, 1], 1)],
                vec![x(&[0, 1], 1), x(&[1, 0], 1)],
            ],
        );
        let cert = generic_rank(&m);
        assert_eq!(cert.rank, 2);
        let w = cert.witness.as_ref().unwrap();
        assert!(!w.determinant.is_zero());
        assert!(cert.verify(&m));
    }

    #[test]
    fn tampered_certificate_fails() {
        let m = PolyMatrix::from_rows(1, vec![vec![x(&[1], 1), x(&[0], 2)]]);
        let mut cert = generic_rank(&m);
        cert.transcript.digest = "00".into();
        assert!(!cert.verify(&m));
    }

    #[test]
    fn sample_points_are_interior() {
        for n in 0..20 {
            for t in sample_point(3, n) {
                assert!(t > Rational::zero() && t < Rational::from_integer(1.into()));
            }
        }
    }
}
