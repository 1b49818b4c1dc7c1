use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::incidence::BinaryMatrix;

/// Rank over the rationals by fraction-free (Bareiss) elimination.
pub fn rank_rational(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    bareiss_rank(&mut m)
}

pub fn rank_rational_binary(b: &BinaryMatrix) -> usize {
    // Eliminate along the shorter side.
    let b = if b.rows() > b.cols() {
        b.transpose()
    } else {
        b.clone()
    };
    let mut m: Vec<Vec<BigInt>> = b
        .to_dense()
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect();
    bareiss_rank(&mut m)
}

/// In-place Bareiss elimination; returns the rank. After step `k` every entry
/// below the pivot rows is the corresponding `(k+1)`-minor, so divisions are exact.
fn bareiss_rank(m: &mut [Vec<BigInt>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(sel) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, sel);
        let (top, bottom) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            for j in c + 1..cols {
                let v = &pivot_row[c] * &row[j] - &row[c] * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot_row[c].clone();
        r += 1;
    }
    r
}

/// Basis of `{x : M x = 0}` over Q from the free-variable construction, each
/// vector scaled by [`primitive_integer_vector`].
pub fn kernel_basis_rational(rows: &[Vec<i64>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(sel) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, sel);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = &*x - &f * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..cols)
        .filter(|f| !pivots.contains(f))
        .map(|f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[i][f].clone();
            }
            primitive_integer_vector(&v)
        })
        .collect()
}

/// Scales a rational vector to coprime integers whose first nonzero entry is positive.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() {
        ints.iter_mut().for_each(|x| *x /= &g);
    }
    if ints
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative())
    {
        ints.iter_mut().for_each(|x| *x = -&*x);
    }
    ints
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranks() {
        assert_eq!(rank_rational(&[vec![0, 0], vec![0, 0]]), 0);
        assert_eq!(rank_rational(&[vec![1, 0], vec![0, 1]]), 2);
        assert_eq!(
            rank_rational(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]),
            2
        );
        // Singular mod 2 but not over Q.
        assert_eq!(rank_rational(&[vec![1, 1], vec![1, -1]]), 2);
        assert_eq!(rank_rational(&[]), 0);
    }

    #[test]
    fn bareiss_handles_large_intermediates() {
        // Vandermonde matrix on 1..=8.
        let rows: Vec<Vec<i64>> = (0..8)
            .map(|i| (0..8).map(|j| ((i + 1) as i64).pow(j as u32)).collect())
            .collect();
        assert_eq!(rank_rational(&rows), 8);
    }

    #[test]
    fn rational_kernel() {
        let k = kernel_basis_rational(&[vec![1, 1, 0], vec![0, 1, 1]], 3);
        assert_eq!(
            k,
            vec![vec![BigInt::from(1), BigInt::from(-1), BigInt::from(1)]]
        );
        assert!(kernel_basis_rational(&[vec![1, 0], vec![0, 1]], 2).is_empty());
    }

    #[test]
    fn binary_rank_uses_either_orientation() {
        let b =
            BinaryMatrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 1]]);
        assert_eq!(rank_rational_binary(&b), 3);
        assert_eq!(rank_rational_binary(&b.transpose()), 3);
    }
}
