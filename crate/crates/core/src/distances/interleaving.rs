//! Exact interleaving distance between grid modules with explicit internal maps.
//!
//! For a shift `eps`, morphisms `phi: a -> b[eps]` and `psi: b -> a[eps]` are
//! constant on the cells of a refined grid, so they are finite families of
//! matrices. Naturality is linear in each family and is solved first. The
//! interleaving equations `psi phi = a(2 eps)`, `phi psi = b(2 eps)` are
//! bilinear; they are checked by enumerating the coefficients of the smaller
//! solution space and solving the remaining linear system for the other.

use super::{Distance, DistanceError, Rational};
use crate::grid::{coordinate_axis, GridError, GridModule, GridPoint};
use crate::linalg::{nullspace, DenseMatrix, FpColumn, FpMatrix, PrimeField};

/// Default bound on the number of free coefficients enumerated per shift.
pub const DEFAULT_BUDGET: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interleaving {
    /// Smallest integer shift admitting an interleaving.
    Exact(u64),
    /// No interleaving with shift at most the given value.
    Exceeds(u64),
}

impl Interleaving {
    pub fn distance(self) -> Distance {
        match self {
            Interleaving::Exact(e) => Distance::from_int(e as i64),
            Interleaving::Exceeds(e) => Distance::Above(Rational::from_integer(e as i64)),
        }
    }
}

pub fn interleaving_exact(
    a: &GridModule,
    b: &GridModule,
    max_eps: u64,
) -> Result<Interleaving, DistanceError> {
    interleaving_exact_with(a, b, max_eps, DEFAULT_BUDGET)
}

pub fn interleaving_exact_with(
    a: &GridModule,
    b: &GridModule,
    max_eps: u64,
    budget: usize,
) -> Result<Interleaving, DistanceError> {
    // an eps-interleaving followed by the internal maps is an (eps+1)-interleaving,
    // so feasibility is monotone in eps
    if !interleaves(a, b, max_eps, budget)? {
        return Ok(Interleaving::Exceeds(max_eps));
    }
    let (mut lo, mut hi) = (0, max_eps);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if interleaves(a, b, mid, budget)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Interleaving::Exact(lo))
}

fn shifted(axis: &[u64], eps: u64) -> impl Iterator<Item = u64> + '_ {
    axis.iter()
        .filter(move |&&v| v >= eps)
        .map(move |&v| v - eps)
}

/// Solution space of the naturality equations for degree-`eps` morphisms `source -> target[eps]`.
struct MorphismSpace {
    xs: Vec<u64>,
    ys: Vec<u64>,
    /// `basis[k][cell]`: block of the `k`-th basis morphism at `cell`.
    basis: Vec<Vec<DenseMatrix>>,
}

impl MorphismSpace {
    fn new(source: &GridModule, target: &GridModule, eps: u64, xs: Vec<u64>, ys: Vec<u64>) -> Self {
        let field = source.field();
        let (nx, ny) = (xs.len(), ys.len());
        let point = |i: usize, j: usize| GridPoint::new(xs[i], ys[j]);
        let shapes: Vec<(usize, usize)> = (0..nx * ny)
            .map(|c| {
                let r = point(c / ny, c % ny);
                (target.dim_at(r.shift(eps)), source.dim_at(r))
            })
            .collect();
        let mut offsets = Vec::with_capacity(shapes.len() + 1);
        let mut total = 0usize;
        for &(rows, cols) in &shapes {
            offsets.push(total);
            total += rows * cols;
        }

        let mut columns: Vec<Vec<(usize, u32)>> = vec![Vec::new(); total];
        let mut nrows = 0usize;
        let mut step = |c0: usize, c1: usize| {
            let (r0, r1) = (point(c0 / ny, c0 % ny), point(c1 / ny, c1 % ny));
            let tmap = target
                .map_at(r0.shift(eps), r1.shift(eps))
                .expect("structure checked");
            let smap = source.map_at(r0, r1).expect("structure checked");
            let (rows0, cols0) = shapes[c0];
            let (rows1, cols1) = shapes[c1];
            // tmap * phi(c0) - phi(c1) * smap = 0, entry (p, q)
            for p in 0..rows1 {
                for q in 0..cols0 {
                    for k in 0..rows0 {
                        let v = tmap.get(p, k);
                        if v != 0 {
                            columns[offsets[c0] + k * cols0 + q].push((nrows, v));
                        }
                    }
                    for l in 0..cols1 {
                        let v = smap.get(l, q);
                        if v != 0 {
                            columns[offsets[c1] + p * cols1 + l].push((nrows, field.neg(v)));
                        }
                    }
                    nrows += 1;
                }
            }
        };
        for i in 0..nx {
            for j in 0..ny {
                if i + 1 < nx {
                    step(i * ny + j, (i + 1) * ny + j);
                }
                if j + 1 < ny {
                    step(i * ny + j, i * ny + j + 1);
                }
            }
        }
        let matrix = FpMatrix::new(
            field,
            nrows,
            columns
                .into_iter()
                .map(|c| FpColumn::from_entries(field, c))
                .collect(),
        );
        let basis = nullspace(&matrix)
            .into_iter()
            .map(|v| blocks(field, &v, &shapes, &offsets))
            .collect();
        MorphismSpace { xs, ys, basis }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn block(&self, k: usize, r: GridPoint) -> &DenseMatrix {
        let i = floor_in(&self.xs, r.x);
        let j = floor_in(&self.ys, r.y);
        &self.basis[k][i * self.ys.len() + j]
    }
}

fn floor_in(axis: &[u64], v: u64) -> usize {
    let v = v.min(*axis.last().unwrap());
    match axis.binary_search(&v) {
        Ok(i) => i,
        Err(i) => i - 1,
    }
}

fn blocks(
    field: PrimeField,
    v: &FpColumn,
    shapes: &[(usize, usize)],
    offsets: &[usize],
) -> Vec<DenseMatrix> {
    shapes
        .iter()
        .zip(offsets)
        .map(|(&(rows, cols), &off)| {
            let mut m = DenseMatrix::zeros(field, rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    m.set(r, c, v.get(off + r * cols + c));
                }
            }
            m
        })
        .collect()
}

/// Whether an `eps`-interleaving between `a` and `b` exists.
pub fn interleaves(
    a: &GridModule,
    b: &GridModule,
    eps: u64,
    budget: usize,
) -> Result<bool, DistanceError> {
    if a.bound() != b.bound() {
        return Err(GridError::BoxMismatch(a.bound(), b.bound()).into());
    }
    if a.field() != b.field() {
        return Err(GridError::FieldMismatch.into());
    }
    if a.structure().is_none() || b.structure().is_none() {
        return Err(DistanceError::MissingStructure);
    }
    let field = a.field();
    let bound = a.bound();

    let phi_x = coordinate_axis(a.xs().iter().copied().chain(shifted(b.xs(), eps)), bound.x);
    let phi_y = coordinate_axis(a.ys().iter().copied().chain(shifted(b.ys(), eps)), bound.y);
    let psi_x = coordinate_axis(b.xs().iter().copied().chain(shifted(a.xs(), eps)), bound.x);
    let psi_y = coordinate_axis(b.ys().iter().copied().chain(shifted(a.ys(), eps)), bound.y);
    let check_x = coordinate_axis(
        phi_x
            .iter()
            .chain(&psi_x)
            .copied()
            .chain(shifted(&phi_x, eps))
            .chain(shifted(&psi_x, eps))
            .chain(shifted(a.xs(), 2 * eps))
            .chain(shifted(b.xs(), 2 * eps)),
        bound.x,
    );
    let check_y = coordinate_axis(
        phi_y
            .iter()
            .chain(&psi_y)
            .copied()
            .chain(shifted(&phi_y, eps))
            .chain(shifted(&psi_y, eps))
            .chain(shifted(a.ys(), 2 * eps))
            .chain(shifted(b.ys(), 2 * eps)),
        bound.y,
    );
    let checks: Vec<GridPoint> = check_x
        .iter()
        .flat_map(|&x| check_y.iter().map(move |&y| GridPoint::new(x, y)))
        .collect();

    // constant term: the 2*eps internal maps of both modules
    let mut rhs = Vec::new();
    for &r in &checks {
        for module in [a, b] {
            let m = module
                .map_at(r, r.shift(2 * eps))
                .expect("structure checked");
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    rhs.push(m.get(i, j));
                }
            }
        }
    }
    if rhs.iter().all(|&v| v == 0) {
        return Ok(true);
    }

    let phi = MorphismSpace::new(a, b, eps, phi_x, phi_y);
    let psi = MorphismSpace::new(b, a, eps, psi_x, psi_y);
    let (n, m) = (phi.dim(), psi.dim());
    if n == 0 || m == 0 {
        return Ok(false);
    }
    let free = n.min(m);
    if free > budget {
        return Err(DistanceError::BudgetExceeded {
            what: format!("{free} free map coefficients at shift {eps}, budget {budget}"),
            partial: None,
        });
    }

    // coefficient of x_i y_j in every scalar equation, followed by the constant
    let width = n * m + 1;
    let mut rows: Vec<u32> = Vec::with_capacity(rhs.len() * width);
    let mut line = 0usize;
    for &r in &checks {
        let ra = r.shift(eps);
        let (da0, da2) = (a.dim_at(r), a.dim_at(r.shift(2 * eps)));
        let (db0, db2) = (b.dim_at(r), b.dim_at(r.shift(2 * eps)));
        // psi(r + eps) * phi(r) = a(r -> r + 2eps)
        let prod_a: Vec<Vec<DenseMatrix>> = (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| psi.block(j, ra).mul(phi.block(i, r)))
                    .collect()
            })
            .collect();
        // phi(r + eps) * psi(r) = b(r -> r + 2eps)
        let prod_b: Vec<Vec<DenseMatrix>> = (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| phi.block(i, ra).mul(psi.block(j, r)))
                    .collect()
            })
            .collect();
        for (prods, rows_n, cols_n) in [(&prod_a, da2, da0), (&prod_b, db2, db0)] {
            for p in 0..rows_n {
                for q in 0..cols_n {
                    for i in 0..n {
                        for j in 0..m {
                            rows.push(prods[i][j].get(p, q));
                        }
                    }
                    rows.push(rhs[line]);
                    line += 1;
                }
            }
        }
    }
    debug_assert_eq!(line, rhs.len());
    let system = DenseMatrix::from_rows(field, rhs.len(), width, rows);
    let keep = system.independent_rows();
    let system = system.select_rows(&keep);
    let constant: Vec<u32> = (0..system.rows()).map(|l| system.get(l, n * m)).collect();

    let enumerate_phi = n <= m;
    let (outer, inner) = if enumerate_phi { (n, m) } else { (m, n) };
    let coef = |l: usize, o: usize, k: usize| -> u32 {
        if enumerate_phi {
            system.get(l, o * m + k)
        } else {
            system.get(l, k * m + o)
        }
    };
    let p = field.modulus();
    let mut digits = vec![0u32; outer];
    loop {
        let mut lin = DenseMatrix::zeros(field, system.rows(), inner);
        for l in 0..system.rows() {
            for k in 0..inner {
                let mut acc = 0;
                for (o, &d) in digits.iter().enumerate() {
                    if d != 0 {
                        acc = field.add(acc, field.mul(d, coef(l, o, k)));
                    }
                }
                lin.set(l, k, acc);
            }
        }
        if lin.solve(&constant).is_some() {
            return Ok(true);
        }
        // odometer over F_p^outer
        let mut pos = 0;
        loop {
            if pos == outer {
                return Ok(false);
            }
            digits[pos] += 1;
            if digits[pos] < p {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}
