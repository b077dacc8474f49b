//! Dense exact linear algebra over Q(i): row reduction, nullspace and
//! clearing denominators of rational relation vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::GaussRational;

/// Row-major dense matrix of Gaussian rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussRational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![GaussRational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<GaussRational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        let n = rows.len();
        ExactMatrix {
            rows: n,
            cols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| GaussRational::from_int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussRational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GaussRational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn mul_vec(&self, v: &[GaussRational]) -> Vec<GaussRational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = GaussRational::zero();
                for (c, x) in v.iter().enumerate() {
                    let e = self.get(r, c);
                    if !e.is_zero() && !x.is_zero() {
                        acc += &(e * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    ///
    /// Pivot choice is the first nonzero entry at or below the current row,
    /// so the result is deterministic.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv().expect("nonzero pivot");
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let pivot_entry = m.get(row, c);
                    if pivot_entry.is_zero() {
                        continue;
                    }
                    let v = m.get(r, c) - &(&factor * pivot_entry);
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// Basis of `{v : m v = 0}`, one vector per free column, each scaled so its
/// first nonzero entry is 1.
pub fn nullspace(m: &ExactMatrix) -> Vec<Vec<GaussRational>> {
    let (r, pivots) = m.rref();
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![GaussRational::zero(); m.cols];
        v[free] = GaussRational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -r.get(row, free);
        }
        let lead = v.iter().find(|x| !x.is_zero()).cloned().expect("nonzero");
        let inv = lead.inv().expect("nonzero");
        basis.push(v.iter().map(|x| x * &inv).collect());
    }
    basis
}

/// Positive integer multiple of a rational vector with entry gcd 1.
pub fn integer_scale(v: &[GaussRational]) -> Result<Vec<BigInt>> {
    if let Some(index) = v.iter().position(|x| !x.is_real()) {
        return Err(Error::NonRationalEntry { index });
    }
    if v.iter().all(GaussRational::is_zero) {
        return Err(Error::ZeroVector);
    }
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.re.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (&x.re * num_rational::BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints
        .iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(x))
        .abs();
    Ok(ints.into_iter().map(|x| x / &g).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn gi(xs: &[i64]) -> Vec<GaussRational> {
        xs.iter().map(|&x| GaussRational::from_int(x)).collect()
    }

    #[test]
    fn nullspace_examples() {
        let m = ExactMatrix::from_int_rows(&[&[1, 1]]);
        assert_eq!(nullspace(&m), vec![gi(&[1, -1])]);

        let id = ExactMatrix::from_int_rows(&[&[1, 0], &[0, 1]]);
        assert!(nullspace(&id).is_empty());

        let m = ExactMatrix::from_int_rows(&[&[1, 1, 0], &[0, 1, 1]]);
        assert_eq!(nullspace(&m), vec![gi(&[1, -1, 1])]);
    }

    #[test]
    fn nullspace_gaussian_entries() {
        // [1, i] has kernel spanned by (1, i)
        let m = ExactMatrix::from_rows(vec![vec![GaussRational::one(), GaussRational::i()]]);
        let ns = nullspace(&m);
        assert_eq!(ns, vec![vec![GaussRational::one(), GaussRational::i()]]);
        assert!(m.mul_vec(&ns[0]).iter().all(GaussRational::is_zero));
    }

    #[test]
    fn integer_scale_examples() {
        let v = vec![
            GaussRational::from_rational(rat(1, 2)),
            GaussRational::from_rational(rat(-1, 3)),
        ];
        assert_eq!(integer_scale(&v).unwrap(), vec![BigInt::from(3), BigInt::from(-2)]);
        assert_eq!(
            integer_scale(&gi(&[1, 2])).unwrap(),
            vec![BigInt::from(1), BigInt::from(2)]
        );
        assert_eq!(integer_scale(&gi(&[0, 0])), Err(Error::ZeroVector));
        assert_eq!(
            integer_scale(&[GaussRational::one(), GaussRational::i()]),
            Err(Error::NonRationalEntry { index: 1 })
        );
    }

    #[test]
    fn integer_scale_keeps_sign() {
        assert_eq!(
            integer_scale(&gi(&[-4, 6])).unwrap(),
            vec![BigInt::from(-2), BigInt::from(3)]
        );
    }
}
