//! Exact linear algebra over the rationals for integer operator matrices.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn rank(matrix: &DMatrix<i64>) -> usize {
    let (rows, cols) = matrix.shape();
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| (0..cols).map(|j| BigInt::from(matrix[(i, j)])).collect())
        .collect();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Dense rational matrix in row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn from_integer(matrix: &DMatrix<i64>) -> RationalMatrix {
        let (rows, cols) = matrix.shape();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(Rational::from_integer(matrix[(i, j)].into()));
            }
        }
        RationalMatrix { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> RationalMatrix {
        let cols = columns.len();
        let mut data = vec![Rational::zero(); rows * cols];
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                data[i * cols + j] = v.clone();
            }
        }
        RationalMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form and pivot columns. Pivots are chosen as the
    /// first nonzero entry scanning rows top-down, columns left to right.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut a = self.clone();
        let cols = a.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            let inv = a.get(r, c).recip();
            for j in c..cols {
                let idx = r * cols + j;
                a.data[idx] = &a.data[idx] * &inv;
            }
            for i in 0..a.rows {
                if i == r || a.get(i, c).is_zero() {
                    continue;
                }
                let factor = a.get(i, c).clone();
                for j in c..cols {
                    let delta = &factor * &a.data[r * cols + j];
                    let idx = i * cols + j;
                    a.data[idx] = &a.data[idx] - delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, one vector per free column in increasing
    /// column order.
    pub fn null_space(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of `A x = b` (free variables set to zero), or `None` when
    /// `b` is outside the column space.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut columns: Vec<Vec<Rational>> = (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j).clone()).collect())
            .collect();
        columns.push(b.to_vec());
        let (r, pivots) = RationalMatrix::from_columns(self.rows, &columns).rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                x.iter()
                    .enumerate()
                    .fold(Rational::zero(), |acc, (j, v)| acc + self.get(i, j) * v)
            })
            .collect()
    }
}

/// Scales a rational vector to a primitive integer vector with the same direction.
pub fn clear_denominators(v: &[Rational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &gcd).collect()
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Exact conversion of a finite `f64` to a rational.
pub fn rational_from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite value")
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn abs_max(v: &[Rational]) -> Rational {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn ranks_agree_between_routes() {
        let m = DMatrix::from_row_slice(3, 4, &[1, 2, 3, 4, 2, 4, 6, 8, 0, 1, -1, 2]);
        assert_eq!(rank(&m), 2);
        assert_eq!(RationalMatrix::from_integer(&m).rank(), 2);
        let z = DMatrix::<i64>::zeros(3, 2);
        assert_eq!(rank(&z), 0);
        let id = DMatrix::<i64>::identity(5, 5) * 3;
        assert_eq!(rank(&id), 5);
    }

    #[test]
    fn null_space_is_annihilated() {
        let m = DMatrix::from_row_slice(2, 4, &[1, -1, 0, 2, 0, 3, 1, -1]);
        let a = RationalMatrix::from_integer(&m);
        let ns = a.null_space();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(is_zero_vector(&a.mul_vec(v)));
        }
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = DMatrix::from_row_slice(2, 2, &[1, 1, 2, 2]);
        let a = RationalMatrix::from_integer(&m);
        assert!(a.solve(&[q(1), q(3)]).is_none());
        let x = a.solve(&[q(2), q(4)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![q(2), q(4)]);
    }

    #[test]
    fn denominators_cleared_to_primitive_vector() {
        let v = vec![Rational::new(1.into(), 2.into()), Rational::new((-3).into(), 4.into()), q(0)];
        assert_eq!(clear_denominators(&v), vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
    }
}
