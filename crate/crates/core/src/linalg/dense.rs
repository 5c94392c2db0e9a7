use std::fmt;

use super::PrimeField;

/// Small dense matrix over F_p, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl DenseMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        DenseMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        let p = field.modulus();
        DenseMatrix {
            field,
            rows,
            cols,
            data: data.into_iter().map(|v| v % p).collect(),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.modulus();
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let f = self.field;
        let mut out = DenseMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let idx = i * other.cols + j;
                        out.data[idx] = f.add(out.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_echelon().len()
    }

    /// In-place Gauss–Jordan elimination; returns the pivot columns in order.
    fn row_echelon(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(sel) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            self.swap_rows(row, sel);
            let inv = f.inv(self.get(row, col));
            for c in col..self.cols {
                let v = f.mul(self.get(row, c), inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..self.cols {
                    let v = f.sub(self.get(r, c), f.mul(factor, self.get(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Some solution of `self * x = rhs`, or `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(rhs.len(), self.rows);
        let mut aug = DenseMatrix::zeros(self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, rhs[r]);
        }
        let pivots = aug.row_echelon();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Some(x)
    }

    /// Indices of a maximal set of linearly independent rows, greedily from the top.
    pub fn independent_rows(&self) -> Vec<usize> {
        let f = self.field;
        // echelon basis kept as (pivot column, normalized row)
        let mut basis: Vec<(usize, Vec<u32>)> = Vec::new();
        let mut keep = Vec::new();
        for r in 0..self.rows {
            let mut v: Vec<u32> = self.data[r * self.cols..(r + 1) * self.cols].to_vec();
            for (pc, b) in &basis {
                let factor = v[*pc];
                if factor != 0 {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x = f.sub(*x, f.mul(factor, *y));
                    }
                }
            }
            if let Some(pc) = v.iter().position(|&x| x != 0) {
                let inv = f.inv(v[pc]);
                for x in v.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                // keep earlier basis rows reduced in the new pivot column
                for (_, b) in basis.iter_mut() {
                    let factor = b[pc];
                    if factor != 0 {
                        for (x, y) in b.iter_mut().zip(&v) {
                            *x = f.sub(*x, f.mul(factor, *y));
                        }
                    }
                }
                basis.push((pc, v));
                keep.push(r);
            }
        }
        keep
    }

    /// Submatrix made of the given rows.
    pub fn select_rows(&self, rows: &[usize]) -> DenseMatrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(&self.data[r * self.cols..(r + 1) * self.cols]);
        }
        DenseMatrix {
            field: self.field,
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_solve() {
        let f = PrimeField::new(3).unwrap();
        let a = DenseMatrix::from_rows(f, 3, 3, vec![1, 2, 0, 2, 1, 0, 0, 0, 1]);
        // rows 0 and 1 are dependent mod 3 (row1 = 2*row0)
        assert_eq!(a.rank(), 2);
        let x = a.solve(&[1, 2, 2]).unwrap();
        let ax: Vec<u32> = (0..3)
            .map(|r| (0..3).fold(0, |acc, c| f.add(acc, f.mul(a.get(r, c), x[c]))))
            .collect();
        assert_eq!(ax, vec![1, 2, 2]);
        assert!(a.solve(&[1, 0, 0]).is_none());
        assert_eq!(a.independent_rows(), vec![0, 2]);
    }

    #[test]
    fn product_with_identity() {
        let f = PrimeField::new(5).unwrap();
        let a = DenseMatrix::from_rows(f, 2, 3, vec![1, 2, 3, 4, 0, 1]);
        assert_eq!(DenseMatrix::identity(f, 2).mul(&a), a);
        assert_eq!(a.mul(&DenseMatrix::identity(f, 3)), a);
    }
}
