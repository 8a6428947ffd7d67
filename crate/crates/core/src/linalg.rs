//! Small exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Reduces `rows` in place to reduced row echelon form and returns the pivot
/// column of each nonzero row.
pub fn row_reduce(rows: &mut [Vec<BigRational>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = BigRational::one() / rows[r][c].clone();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let d = &f * &rows[r][j];
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

pub fn rational(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}
