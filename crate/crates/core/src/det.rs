//! Exact determinants of polynomial matrices.
//!
//! Bareiss fraction-free elimination for size ≥ 3: every intermediate entry
//! stays a polynomial (the division by the previous pivot is exact), so no
//! rational functions in the coordinates ever appear. Sizes 1 and 2 expand
//! directly.

use crate::error::{Error, Result};
use crate::poly::MultiPoly;

pub fn poly_det(mat: &[Vec<MultiPoly>]) -> Result<MultiPoly> {
    let n = mat.len();
    if n == 0 || mat.iter().any(|row| row.len() != n) {
        return Err(Error::NonSquareMatrix);
    }
    let ctx = mat[0][0].context().clone();
    match n {
        1 => Ok(mat[0][0].clone()),
        2 => {
            let ad = mat[0][0].mul(&mat[1][1])?;
            let bc = mat[0][1].mul(&mat[1][0])?;
            ad.sub(&bc)
        }
        _ => {
            let mut a: Vec<Vec<MultiPoly>> = mat.to_vec();
            let mut sign_neg = false;
            let mut prev = MultiPoly::one(&ctx);
            for k in 0..n - 1 {
                if a[k][k].is_zero() {
                    match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                        Some(r) => {
                            a.swap(k, r);
                            sign_neg = !sign_neg;
                        }
                        None => return Ok(MultiPoly::zero(&ctx)),
                    }
                }
                for i in k + 1..n {
                    for j in k + 1..n {
                        let t = a[k][k].mul(&a[i][j])?.sub(&a[i][k].mul(&a[k][j])?)?;
                        a[i][j] = t.div_exact(&prev)?;
                    }
                }
                for row in a.iter_mut().skip(k + 1) {
                    row[k] = MultiPoly::zero(&ctx);
                }
                prev = a[k][k].clone();
            }
            let d = a[n - 1][n - 1].clone();
            Ok(if sign_neg { d.neg() } else { d })
        }
    }
}
