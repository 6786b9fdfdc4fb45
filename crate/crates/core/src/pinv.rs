//! Exact Moore-Penrose inverses.
//!
//! [`mp_inverse`] uses a rank factorization; [`mp_inverse_hedge`] and
//! [`mp_entry`] average over hedges and serve as independent oracles.

use num::{One, Zero};

use crate::ratlin::{rref, RatMatrix, Rational};

/// Default largest row or column count for hedge enumeration.
pub const DEFAULT_HEDGE_BOUND: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("hedge enumeration is limited to {bound}x{bound} matrices, got {rows}x{cols}")]
pub struct TooLarge {
    pub rows: usize,
    pub cols: usize,
    pub bound: usize,
}

/// Row set `S` and column set `T` of size `rank A` with `det A[S,T] != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hedge {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub det: Rational,
}

/// `A+ = C^T (C C^T)^-1 (B^T B)^-1 B^T` for `A = B C` with `B` the pivot
/// columns of `A` and `C` the nonzero rows of its reduced echelon form.
pub fn mp_inverse(a: &RatMatrix) -> RatMatrix {
    let (r, pivots) = rref(a);
    if pivots.is_empty() {
        return RatMatrix::zeros(a.cols(), a.rows());
    }
    let all_rows: Vec<usize> = (0..a.rows()).collect();
    let b = a.submatrix(&all_rows, &pivots);
    let c_rows: Vec<usize> = (0..pivots.len()).collect();
    let all_cols: Vec<usize> = (0..a.cols()).collect();
    let c = r.submatrix(&c_rows, &all_cols);
    let ct = c.transpose();
    let bt = b.transpose();
    let cct_inv = c.mul(&ct).inverse().expect("C has full row rank");
    let btb_inv = bt.mul(&b).inverse().expect("B has full column rank");
    ct.mul(&cct_inv).mul(&btb_inv).mul(&bt)
}

fn check_bound(a: &RatMatrix, bound: usize) -> Result<(), TooLarge> {
    if a.rows() > bound || a.cols() > bound {
        return Err(TooLarge { rows: a.rows(), cols: a.cols(), bound });
    }
    Ok(())
}

/// Increasing `size`-subsets of `0..n`.
fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < size - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, size, &mut Vec::new(), &mut out);
    out
}

pub fn hedges(a: &RatMatrix, bound: usize) -> Result<Vec<Hedge>, TooLarge> {
    check_bound(a, bound)?;
    let r = a.rank();
    let mut out = Vec::new();
    for rows in subsets(a.rows(), r) {
        for cols in subsets(a.cols(), r) {
            let det = a.submatrix(&rows, &cols).determinant();
            if !det.is_zero() {
                out.push(Hedge { rows: rows.clone(), cols, det });
            }
        }
    }
    Ok(out)
}

/// `(1/Delta) sum_{(S,T)} det(A[S,T])^2 X_{S,T}`, where `X_{S,T}` carries
/// `A[S,T]^-1` at rows `T`, columns `S` and zeros elsewhere, and `Delta` is
/// the sum of the squared minors.
pub fn mp_inverse_hedge(a: &RatMatrix, bound: usize) -> Result<RatMatrix, TooLarge> {
    let hs = hedges(a, bound)?;
    let mut acc = RatMatrix::zeros(a.cols(), a.rows());
    let mut delta = Rational::zero();
    for h in &hs {
        let weight = &h.det * &h.det;
        let inv = a.submatrix(&h.rows, &h.cols).inverse().expect("hedge minor is invertible");
        for (ti, &t) in h.cols.iter().enumerate() {
            for (si, &s) in h.rows.iter().enumerate() {
                acc[(t, s)] += &weight * &inv[(ti, si)];
            }
        }
        delta += weight;
    }
    if delta.is_zero() {
        return Ok(acc);
    }
    Ok(acc.scale(&(Rational::one() / delta)))
}

/// Entry `(i, j)` of `A+` (so `i` indexes columns of `A`, `j` rows) from
/// signed products of a hedge minor and its `(j, i)` cofactor minor.
pub fn mp_entry(a: &RatMatrix, i: usize, j: usize, bound: usize) -> Result<Rational, TooLarge> {
    let hs = hedges(a, bound)?;
    let mut num = Rational::zero();
    let mut delta = Rational::zero();
    for h in &hs {
        delta += &h.det * &h.det;
        let (Some(b), Some(pos_j)) = (h.cols.iter().position(|&t| t == i), h.rows.iter().position(|&s| s == j)) else {
            continue;
        };
        let rows: Vec<usize> = h.rows.iter().copied().filter(|&s| s != j).collect();
        let cols: Vec<usize> = h.cols.iter().copied().filter(|&t| t != i).collect();
        let minor = a.submatrix(&rows, &cols).determinant();
        let term = &h.det * minor;
        if (b + pos_j) % 2 == 0 {
            num += term;
        } else {
            num -= term;
        }
    }
    if delta.is_zero() {
        return Ok(Rational::zero());
    }
    Ok(num / delta)
}

/// The four Penrose identities, with transpose in place of adjoint.
pub fn verify_penrose(a: &RatMatrix, p: &RatMatrix) -> bool {
    if p.rows() != a.cols() || p.cols() != a.rows() {
        return false;
    }
    let ap = a.mul(p);
    let pa = p.mul(a);
    ap.mul(a) == *a && pa.mul(p) == *p && ap.transpose() == ap && pa.transpose() == pa
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::{rat, ratio};
    use proptest::prelude::*;

    fn col(v: &[i64]) -> RatMatrix {
        RatMatrix::from_i64(&v.iter().map(|&x| vec![x]).collect::<Vec<_>>())
    }

    #[test]
    fn column_of_ones() {
        let a = col(&[1, 1, 1]);
        let expected = RatMatrix::from_rows(3, vec![vec![ratio(1, 3), ratio(1, 3), ratio(1, 3)]]);
        assert_eq!(mp_inverse(&a), expected);
        assert_eq!(mp_inverse_hedge(&a, 8).unwrap(), expected);
        assert_eq!(hedges(&a, 8).unwrap().len(), 3);
    }

    #[test]
    fn two_hedges_for_pair() {
        let a = col(&[1, 1]);
        assert_eq!(hedges(&a, 8).unwrap().len(), 2);
        assert_eq!(mp_inverse_hedge(&a, 8).unwrap(), RatMatrix::from_rows(2, vec![vec![ratio(1, 2), ratio(1, 2)]]));
        assert_eq!(mp_entry(&a, 0, 0, 8).unwrap(), ratio(1, 2));
    }

    #[test]
    fn row_with_opposite_signs() {
        let a = RatMatrix::from_i64(&[vec![0, 1, -1]]);
        let expected = RatMatrix::from_rows(1, vec![vec![rat(0)], vec![ratio(1, 2)], vec![ratio(-1, 2)]]);
        assert_eq!(mp_inverse(&a), expected);
    }

    #[test]
    fn trivial_cases() {
        let z = RatMatrix::zeros(2, 3);
        assert_eq!(mp_inverse(&z), RatMatrix::zeros(3, 2));
        assert_eq!(mp_inverse_hedge(&z, 8).unwrap(), RatMatrix::zeros(3, 2));
        assert!(verify_penrose(&z, &RatMatrix::zeros(3, 2)));
        let m = RatMatrix::from_i64(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(mp_inverse(&m), m.inverse().unwrap());
        let d = RatMatrix::from_i64(&[vec![2, 0], vec![0, 0]]);
        assert_eq!(hedges(&d, 8).unwrap().len(), 1);
        assert_eq!(mp_inverse_hedge(&d, 8).unwrap(), RatMatrix::from_rows(2, vec![vec![ratio(1, 2), rat(0)], vec![rat(0), rat(0)]]));
        let a = col(&[1, 1]);
        assert!(!verify_penrose(&a, &a.transpose()));
        assert_eq!(mp_entry(&RatMatrix::from_i64(&[vec![1, 0], vec![0, 0]]), 1, 0, 8).unwrap(), rat(0));
    }

    #[test]
    fn bound_is_enforced() {
        let a = RatMatrix::zeros(9, 2);
        assert_eq!(mp_inverse_hedge(&a, 8), Err(TooLarge { rows: 9, cols: 2, bound: 8 }));
        assert!(mp_entry(&a, 0, 0, 8).is_err());
    }

    fn small_matrix() -> impl Strategy<Value = RatMatrix> {
        (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), r)
                .prop_map(|rows| RatMatrix::from_i64(&rows))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn oracles_agree(a in small_matrix()) {
            let p = mp_inverse(&a);
            prop_assert!(verify_penrose(&a, &p));
            prop_assert_eq!(&mp_inverse_hedge(&a, 8).unwrap(), &p);
            prop_assert_eq!(mp_inverse(&p), a.clone());
            let pa = p.mul(&a);
            prop_assert_eq!(pa.rank(), a.rank());
        }
    }
}
