//! 3x3 integer matrices.
//!
//! Branch products of the gasket generators have small nonnegative entries
//! (the total entry sum at most doubles per factor), so `i64` with checked
//! arithmetic covers every word length that is affordable to sweep.

use crate::error::{Error, Result};

/// Row-major 3x3 integer matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mat3(pub [[i64; 3]; 3]);

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);

    /// Checked matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Mat3) -> Result<Mat3> {
        let mut out = [[0i64; 3]; 3];
        for (i, row) in self.0.iter().enumerate() {
            for j in 0..3 {
                let mut acc: i64 = 0;
                for (k, &a) in row.iter().enumerate() {
                    let term = a
                        .checked_mul(rhs.0[k][j])
                        .ok_or(Error::Overflow("matrix product"))?;
                    acc = acc.checked_add(term).ok_or(Error::Overflow("matrix product"))?;
                }
                out[i][j] = acc;
            }
        }
        Ok(Mat3(out))
    }

    /// Checked matrix-vector product.
    pub fn apply(&self, v: [i64; 3]) -> Result<[i64; 3]> {
        let mut out = [0i64; 3];
        for (i, row) in self.0.iter().enumerate() {
            let mut acc: i64 = 0;
            for (k, &a) in row.iter().enumerate() {
                let term = a
                    .checked_mul(v[k])
                    .ok_or(Error::Overflow("matrix-vector product"))?;
                acc = acc
                    .checked_add(term)
                    .ok_or(Error::Overflow("matrix-vector product"))?;
            }
            out[i] = acc;
        }
        Ok(out)
    }

    pub fn det(&self) -> i128 {
        let m = &self.0;
        let a = m[0][0] as i128;
        let b = m[0][1] as i128;
        let c = m[0][2] as i128;
        let d = m[1][0] as i128;
        let e = m[1][1] as i128;
        let f = m[1][2] as i128;
        let g = m[2][0] as i128;
        let h = m[2][1] as i128;
        let i = m[2][2] as i128;
        a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    }

    pub fn col(&self, k: usize) -> [i64; 3] {
        [self.0[0][k], self.0[1][k], self.0[2][k]]
    }

    pub fn col_sum(&self, k: usize) -> i64 {
        self.0[0][k] + self.0[1][k] + self.0[2][k]
    }

    pub fn max_entry(&self) -> i64 {
        self.0.iter().flatten().copied().max().unwrap()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().flatten().all(|&e| e >= 0)
    }

    /// Conjugation by the cyclic coordinate permutation 1 -> 2 -> 3 -> 1
    /// (simultaneous row and column permutation).
    pub fn cyclic_conjugate(&self) -> Mat3 {
        // new[i][j] = old[perm_inv(i)][perm_inv(j)] with perm_inv = 0<-1, 1<-2, 2<-0
        const INV: [usize; 3] = [2, 0, 1];
        let mut out = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = self.0[INV[i]][INV[j]];
            }
        }
        Mat3(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_neutral() {
        let m = Mat3([[1, 2, 3], [4, 5, 6], [7, 8, 10]]);
        assert_eq!(m.mul(&Mat3::IDENTITY).unwrap(), m);
        assert_eq!(Mat3::IDENTITY.mul(&m).unwrap(), m);
        assert_eq!(Mat3::IDENTITY.det(), 1);
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let m = Mat3([[2, 0, 1], [1, 3, 2], [1, 1, 1]]);
        // 2*(3-2) - 0 + 1*(1-3) = 0
        assert_eq!(m.det(), 0);
    }

    #[test]
    fn overflow_is_reported() {
        let m = Mat3([[i64::MAX, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert!(matches!(m.mul(&m), Err(Error::Overflow(_))));
    }
}
