use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::int_matrix::IntMatrix;

/// Dense exact rational matrix. `BigRational` keeps every entry reduced with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows * cols");
        RatMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<BigRational>>) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row");
            data.extend(row);
        }
        RatMatrix { rows: nrows, cols, data }
    }

    pub fn from_i64(cols: usize, rows: &[&[i64]]) -> Self {
        IntMatrix::from_i64(cols, rows).to_rat()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.rows, v.len(), "dimension mismatch in vector-matrix product");
        let mut out = vec![BigRational::zero(); self.cols];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(self.row(i)) {
                if !x.is_zero() {
                    *o += c * x;
                }
            }
        }
        out
    }

    pub fn vstack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        RatMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> RatMatrix {
        RatMatrix::from_rows(self.cols, idx.iter().map(|&i| self.row(i).to_vec()).collect())
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for col in 0..a.cols {
            if pr == a.rows {
                break;
            }
            let Some(p) = (pr..a.rows).find(|&i| !a[(i, col)].is_zero()) else {
                continue;
            };
            if p != pr {
                for j in 0..a.cols {
                    a.data.swap(p * a.cols + j, pr * a.cols + j);
                }
            }
            let inv = a[(pr, col)].recip();
            for j in col..a.cols {
                let v = &a[(pr, j)] * &inv;
                a[(pr, j)] = v;
            }
            for i in 0..a.rows {
                if i == pr || a[(i, col)].is_zero() {
                    continue;
                }
                let factor = a[(i, col)].clone();
                for j in col..a.cols {
                    if a[(pr, j)].is_zero() {
                        continue;
                    }
                    let v = &a[(i, j)] - &factor * &a[(pr, j)];
                    a[(i, j)] = v;
                }
            }
            pivots.push(col);
            pr += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        // Fraction-free forward elimination is much cheaper than full RREF here.
        let (num, _) = self.to_int_rows_scaled();
        let mut a = num;
        let mut rank = 0;
        let (rows, cols) = (a.rows(), a.cols());
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&i| !a[(i, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(p, rank);
            for i in rank + 1..rows {
                if a[(i, col)].is_zero() {
                    continue;
                }
                let g = a[(rank, col)].gcd(&a[(i, col)]);
                let x = &a[(rank, col)] / &g;
                let y = &a[(i, col)] / &g;
                for j in col..cols {
                    let v = &a[(i, j)] * &x - &a[(rank, j)] * &y;
                    a[(i, j)] = v;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Basis of the right null space `{x : self·x = 0}`, returned as rows in
    /// reduced echelon form.
    pub fn kernel(&self) -> RatMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![BigRational::zero(); self.cols];
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(row, f)].clone();
            }
            basis.push(v);
        }
        let k = RatMatrix::from_rows(self.cols, basis);
        k.rref().0.select_rows(&(0..free.len()).collect::<Vec<_>>())
    }

    /// Scales each row by the lcm of its denominators, giving an integer matrix
    /// with the same row spaces. Also returns the per-row scale factors.
    pub fn to_int_rows_scaled(&self) -> (IntMatrix, Vec<BigInt>) {
        let mut scales = Vec::with_capacity(self.rows);
        let mut out = IntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            let l = self.row(i).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            for j in 0..self.cols {
                let x = &self[(i, j)];
                out[(i, j)] = x.numer() * (&l / x.denom());
            }
            scales.push(l);
        }
        (out, scales)
    }

    /// Integer rows with the same Q-span, each row divided by its content.
    pub fn primitive_int_rows(&self) -> IntMatrix {
        let (mut m, _) = self.to_int_rows_scaled();
        for i in 0..m.rows() {
            let g = m.row(i).iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if !g.is_zero() && !g.is_one() {
                for j in 0..m.cols() {
                    let v = &m[(i, j)] / &g;
                    m[(i, j)] = v;
                }
            }
        }
        m
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatMatrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_vec(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Rank of a list of rational vectors of common length `dim`.
pub fn rank_of_vectors(dim: usize, vectors: &[Vec<BigRational>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    RatMatrix::from_rows(dim, vectors.to_vec()).rank()
}
