use std::collections::HashMap;

use super::PrimeField;

/// A sparse column: strictly increasing row indices with nonzero coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FpColumn {
    entries: Vec<(usize, u32)>,
}

impl FpColumn {
    pub fn new() -> Self {
        FpColumn::default()
    }

    /// Builds a column from arbitrary `(row, coefficient)` pairs, summing repeated rows
    /// and dropping zeros.
    pub fn from_entries(
        field: PrimeField,
        entries: impl IntoIterator<Item = (usize, u32)>,
    ) -> Self {
        let mut raw: Vec<(usize, u32)> = entries.into_iter().collect();
        raw.sort_by_key(|&(r, _)| r);
        let mut out: Vec<(usize, u32)> = Vec::with_capacity(raw.len());
        for (row, c) in raw {
            let c = c % field.modulus();
            match out.last_mut() {
                Some((last, acc)) if *last == row => *acc = field.add(*acc, c),
                _ => out.push((row, c)),
            }
        }
        out.retain(|&(_, c)| c != 0);
        FpColumn { entries: out }
    }

    /// Column with a single entry `1` in row `row`.
    pub fn unit(row: usize) -> Self {
        FpColumn {
            entries: vec![(row, 1)],
        }
    }

    pub fn entries(&self) -> &[(usize, u32)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest row index carrying a nonzero entry.
    pub fn low(&self) -> Option<(usize, u32)> {
        self.entries.last().copied()
    }

    pub fn get(&self, row: usize) -> u32 {
        match self.entries.binary_search_by_key(&row, |&(r, _)| r) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0,
        }
    }

    /// `self += k * other`.
    pub fn add_scaled(&mut self, field: PrimeField, other: &FpColumn, k: u32) {
        if k.is_multiple_of(field.modulus()) || other.is_zero() {
            return;
        }
        let mut merged = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                merged.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                merged.push((b[j].0, field.mul(k, b[j].1)));
                j += 1;
            } else {
                let c = field.add(a[i].1, field.mul(k, b[j].1));
                if c != 0 {
                    merged.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        self.entries = merged;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    field: PrimeField,
    nrows: usize,
    columns: Vec<FpColumn>,
}

impl FpMatrix {
    pub fn new(field: PrimeField, nrows: usize, columns: Vec<FpColumn>) -> Self {
        for col in &columns {
            if let Some((r, _)) = col.low() {
                assert!(r < nrows, "row index {r} out of range for {nrows} rows");
            }
        }
        FpMatrix {
            field,
            nrows,
            columns,
        }
    }

    pub fn zeros(field: PrimeField, nrows: usize, ncols: usize) -> Self {
        FpMatrix {
            field,
            nrows,
            columns: vec![FpColumn::new(); ncols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        FpMatrix {
            field,
            nrows: n,
            columns: (0..n).map(FpColumn::unit).collect(),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[FpColumn] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &FpColumn {
        &self.columns[j]
    }

    /// Rank over F_p; equal to the number of pivots after [`reduce`].
    pub fn rank(&self) -> usize {
        reduce(self).pivots.iter().filter(|p| p.is_some()).count()
    }
}

/// Output of a left-to-right column reduction.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub reduced: FpMatrix,
    /// Lowest row of each reduced column, `None` for zero columns.
    pub pivots: Vec<Option<usize>>,
    /// Column operations `V` with `D * V = R`, when requested.
    pub basis: Option<Vec<FpColumn>>,
}

impl Reduction {
    pub fn rank(&self) -> usize {
        self.pivots.iter().filter(|p| p.is_some()).count()
    }

    /// Column whose pivot sits in `row`, if any.
    pub fn column_with_pivot(&self) -> HashMap<usize, usize> {
        self.pivots
            .iter()
            .enumerate()
            .filter_map(|(j, p)| p.map(|r| (r, j)))
            .collect()
    }
}

/// Standard persistence reduction: afterwards distinct nonzero columns have distinct lows.
pub fn reduce(matrix: &FpMatrix) -> Reduction {
    run_reduction(matrix, false)
}

/// Like [`reduce`], additionally tracking the column operations `V`.
pub fn reduce_with_basis(matrix: &FpMatrix) -> Reduction {
    run_reduction(matrix, true)
}

fn run_reduction(matrix: &FpMatrix, track: bool) -> Reduction {
    let field = matrix.field;
    let mut columns = matrix.columns.clone();
    let mut basis: Option<Vec<FpColumn>> =
        track.then(|| (0..columns.len()).map(FpColumn::unit).collect());
    let mut owner: HashMap<usize, usize> = HashMap::new();
    let mut pivots = vec![None; columns.len()];

    for j in 0..columns.len() {
        while let Some((low, c)) = columns[j].low() {
            let Some(&k) = owner.get(&low) else { break };
            let (_, ck) = columns[k].low().expect("pivot column is nonzero");
            let factor = field.neg(field.mul(c, field.inv(ck)));
            let (left, right) = columns.split_at_mut(j);
            right[0].add_scaled(field, &left[k], factor);
            if let Some(v) = basis.as_mut() {
                let (vl, vr) = v.split_at_mut(j);
                vr[0].add_scaled(field, &vl[k], factor);
            }
        }
        if let Some((low, _)) = columns[j].low() {
            owner.insert(low, j);
            pivots[j] = Some(low);
        }
    }

    Reduction {
        reduced: FpMatrix {
            field,
            nrows: matrix.nrows,
            columns,
        },
        pivots,
        basis,
    }
}

/// Basis of the kernel `{x : A x = 0}`, read off from the zero columns of the reduction.
pub fn nullspace(matrix: &FpMatrix) -> Vec<FpColumn> {
    let red = reduce_with_basis(matrix);
    let basis = red.basis.expect("basis tracked");
    red.pivots
        .iter()
        .zip(basis)
        .filter_map(|(p, v)| p.is_none().then_some(v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    fn col(rows: &[usize]) -> FpColumn {
        FpColumn::from_entries(f2(), rows.iter().map(|&r| (r, 1)))
    }

    #[test]
    fn zero_matrix_is_unchanged() {
        let m = FpMatrix::zeros(f2(), 3, 4);
        let red = reduce(&m);
        assert_eq!(red.reduced, m);
        assert!(red.pivots.iter().all(Option::is_none));
        assert_eq!(m.rank(), 0);
    }

    #[test]
    fn identity_is_unchanged() {
        let m = FpMatrix::identity(f2(), 5);
        let red = reduce(&m);
        assert_eq!(red.reduced, m);
        for (i, p) in red.pivots.iter().enumerate() {
            assert_eq!(*p, Some(i));
        }
        assert_eq!(m.rank(), 5);
    }

    #[test]
    fn all_ones_two_by_two_has_rank_one() {
        let m = FpMatrix::new(f2(), 2, vec![col(&[0, 1]), col(&[0, 1])]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn filled_triangle_pairs_last_edge() {
        // order: v0 v1 v2 e01 e02 e12 t
        let cols = vec![
            col(&[]),
            col(&[]),
            col(&[]),
            col(&[0, 1]),
            col(&[0, 2]),
            col(&[1, 2]),
            col(&[3, 4, 5]),
        ];
        let red = reduce(&FpMatrix::new(f2(), 7, cols));
        assert_eq!(red.pivots[3], Some(1));
        assert_eq!(red.pivots[4], Some(2));
        // e12 reduces to zero: it closes the cycle
        assert_eq!(red.pivots[5], None);
        // the 2-cell kills the cycle born at e12
        assert_eq!(red.pivots[6], Some(5));
    }

    #[test]
    fn basis_satisfies_dv_equals_r() {
        let field = PrimeField::new(3).unwrap();
        let cols = vec![
            FpColumn::from_entries(field, [(0, 1), (2, 2)]),
            FpColumn::from_entries(field, [(1, 1), (2, 1)]),
            FpColumn::from_entries(field, [(0, 2), (1, 1), (2, 2)]),
        ];
        let m = FpMatrix::new(field, 3, cols);
        let red = reduce_with_basis(&m);
        let v = red.basis.as_ref().unwrap();
        for (j, vj) in v.iter().enumerate() {
            let mut acc = FpColumn::new();
            for &(i, c) in vj.entries() {
                acc.add_scaled(field, m.column(i), c);
            }
            assert_eq!(&acc, red.reduced.column(j));
        }
        assert_eq!(red.rank(), 2);
        let ker = nullspace(&m);
        assert_eq!(ker.len(), 1);
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let field = PrimeField::new(5).unwrap();
        let m = FpMatrix::new(
            field,
            2,
            vec![
                FpColumn::from_entries(field, [(0, 1), (1, 2)]),
                FpColumn::from_entries(field, [(0, 2), (1, 4)]),
                FpColumn::from_entries(field, [(0, 3)]),
                FpColumn::new(),
            ],
        );
        let ker = nullspace(&m);
        assert_eq!(ker.len(), 4 - m.rank());
        for v in ker {
            let mut acc = FpColumn::new();
            for &(i, c) in v.entries() {
                acc.add_scaled(field, m.column(i), c);
            }
            assert!(acc.is_zero());
        }
    }
}
