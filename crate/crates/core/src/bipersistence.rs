//! The biparameter module of a bifiltered complex, evaluated on a compressed grid.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::complex::{ComplexError, FilteredComplex, Function, Threshold};
use crate::grid::{coordinate_axis, GridModule, GridPoint, Structure};
use crate::linalg::{reduce, reduce_with_basis, DenseMatrix, FpColumn, FpMatrix, PrimeField};
use crate::persistence::{compute_diagram, PersistenceDiagram};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum BipersistenceError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("box {bound} does not exceed the largest values ({max_f},{max_g})")]
    BoxTooSmall {
        bound: GridPoint,
        max_f: u64,
        max_g: u64,
    },
}

/// Largest values plus a margin of two on each axis.
pub fn default_box(complex: &FilteredComplex) -> Result<GridPoint, ComplexError> {
    let mf = complex.max_value(Function::F)?.unwrap_or(0);
    let mg = complex.max_value(Function::G)?.unwrap_or(0);
    Ok(GridPoint::new(mf + 2, mg + 2))
}

/// Simplices of `sub` first, then the rest of `sup`, each block by dimension then index.
fn inclusion_order(complex: &FilteredComplex, sub: &[usize], sup: &[usize]) -> Vec<usize> {
    let key = |&i: &usize| (complex.simplex(i).dimension(), i);
    let mut first = sub.to_vec();
    first.sort_by_key(key);
    let mut second: Vec<usize> = sup
        .iter()
        .copied()
        .filter(|i| sub.binary_search(i).is_err())
        .collect();
    second.sort_by_key(key);
    first.extend(second);
    first
}

fn ordered_boundary(complex: &FilteredComplex, order: &[usize], field: PrimeField) -> FpMatrix {
    let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let columns = order
        .iter()
        .map(|&i| {
            let entries = complex
                .facet_indices(i)
                .into_iter()
                .enumerate()
                .map(|(k, face)| (pos[&face], if k % 2 == 0 { 1 } else { field.neg(1) }));
            FpColumn::from_entries(field, entries)
        })
        .collect();
    FpMatrix::new(field, order.len(), columns)
}

/// Rank of `H_k(sub) -> H_k(sup)` for simplex index sets `sub ⊆ sup` (both sorted).
///
/// With the sub-complex ordered first, a class of `sub` survives in `sup` iff
/// its creating simplex is positive and never paired.
pub fn inclusion_rank(
    complex: &FilteredComplex,
    sub: &[usize],
    sup: &[usize],
    k: usize,
    field: PrimeField,
) -> usize {
    let order = inclusion_order(complex, sub, sup);
    let red = reduce(&ordered_boundary(complex, &order, field));
    let mut is_pivot = vec![false; order.len()];
    for p in red.pivots.iter().flatten() {
        is_pivot[*p] = true;
    }
    (0..sub.len())
        .filter(|&pos| complex.simplex(order[pos]).dimension() == k)
        .filter(|&pos| red.pivots[pos].is_none() && !is_pivot[pos])
        .count()
}

/// Homology basis of one sublevel complex, with a way to read off coordinates of cycles.
struct CellHomology {
    order: Vec<usize>,
    position: HashMap<usize, usize>,
    /// Reduced columns by their pivot row.
    boundary_by_low: HashMap<usize, FpColumn>,
    /// Basis cycles keyed by the row of their creating simplex, in basis order.
    cycles: Vec<(usize, FpColumn)>,
    field: PrimeField,
}

impl CellHomology {
    fn new(complex: &FilteredComplex, members: &[usize], k: usize, field: PrimeField) -> Self {
        let order = inclusion_order(complex, members, members);
        let position: HashMap<usize, usize> =
            order.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let red = reduce_with_basis(&ordered_boundary(complex, &order, field));
        let basis = red.basis.as_ref().expect("basis tracked");
        let mut is_pivot = vec![false; order.len()];
        let mut boundary_by_low = HashMap::new();
        for (j, p) in red.pivots.iter().enumerate() {
            if let Some(row) = *p {
                is_pivot[row] = true;
                boundary_by_low.insert(row, red.reduced.column(j).clone());
            }
        }
        let cycles = (0..order.len())
            .filter(|&pos| complex.simplex(order[pos]).dimension() == k)
            .filter(|&pos| red.pivots[pos].is_none() && !is_pivot[pos])
            .map(|pos| (pos, basis[pos].clone()))
            .collect();
        CellHomology {
            order,
            position,
            boundary_by_low,
            cycles,
            field,
        }
    }

    fn dim(&self) -> usize {
        self.cycles.len()
    }

    /// Basis cycle `i` as `(simplex index, coefficient)` pairs.
    fn cycle_chain(&self, i: usize) -> Vec<(usize, u32)> {
        self.cycles[i]
            .1
            .entries()
            .iter()
            .map(|&(pos, c)| (self.order[pos], c))
            .collect()
    }

    /// Coordinates of the class of a cycle of this complex in the basis.
    fn coordinates(&self, chain: &[(usize, u32)]) -> Vec<u32> {
        let f = self.field;
        let cycle_index: HashMap<usize, usize> = self
            .cycles
            .iter()
            .enumerate()
            .map(|(i, (row, _))| (*row, i))
            .collect();
        let mut col = FpColumn::from_entries(f, chain.iter().map(|&(s, c)| (self.position[&s], c)));
        let mut coords = vec![0u32; self.cycles.len()];
        while let Some((low, c)) = col.low() {
            if let Some(&e) = cycle_index.get(&low) {
                coords[e] = f.add(coords[e], c);
                col.add_scaled(f, &self.cycles[e].1, f.neg(c));
            } else if let Some(b) = self.boundary_by_low.get(&low) {
                let (_, cb) = b.low().unwrap();
                col.add_scaled(f, b, f.neg(f.mul(c, f.inv(cb))));
            } else {
                panic!("chain is not a cycle of this complex");
            }
        }
        coords
    }
}

fn induced_map(from: &CellHomology, to: &CellHomology) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(from.field, to.dim(), from.dim());
    for i in 0..from.dim() {
        for (row, v) in to.coordinates(&from.cycle_chain(i)).into_iter().enumerate() {
            m.set(row, i, v);
        }
    }
    m
}

/// `M_{(f,g)}` in homological degree `k` on the box, as dimensions, inclusion
/// ranks and explicit step maps over the critical grid of the complex.
pub fn grid_module_of_pair(
    complex: &FilteredComplex,
    k: usize,
    field: PrimeField,
    bound: GridPoint,
) -> Result<GridModule, BipersistenceError> {
    let fvals = complex.values(Function::F)?;
    let gvals = complex.values(Function::G)?;
    let max_f = fvals.iter().copied().max().unwrap_or(0);
    let max_g = gvals.iter().copied().max().unwrap_or(0);
    if bound.x <= max_f || bound.y <= max_g {
        return Err(BipersistenceError::BoxTooSmall {
            bound,
            max_f,
            max_g,
        });
    }
    let xs = coordinate_axis(fvals.iter().copied(), bound.x);
    let ys = coordinate_axis(gvals.iter().copied(), bound.y);
    let (nx, ny) = (xs.len(), ys.len());
    let points: Vec<GridPoint> = xs
        .iter()
        .flat_map(|&x| ys.iter().map(move |&y| GridPoint::new(x, y)))
        .collect();
    let members: Vec<Vec<usize>> = points
        .iter()
        .map(|r| {
            (0..complex.len())
                .filter(|&i| {
                    complex
                        .contains_at(i, Threshold::Pair(r.x, r.y))
                        .expect("g present")
                })
                .collect()
        })
        .collect();

    let cells: Vec<CellHomology> = members
        .par_iter()
        .map(|m| CellHomology::new(complex, m, k, field))
        .collect();
    let dims: Vec<usize> = cells.iter().map(CellHomology::dim).collect();

    let n = points.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| points[a].le(points[b]))
        .collect();
    let ranks: HashMap<(usize, usize), usize> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let r = if a == b {
                dims[a]
            } else {
                inclusion_rank(complex, &members[a], &members[b], k, field)
            };
            ((a, b), r)
        })
        .collect();

    let xmaps: Vec<DenseMatrix> = (0..(nx - 1) * ny)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / ny, idx % ny);
            induced_map(&cells[i * ny + j], &cells[(i + 1) * ny + j])
        })
        .collect();
    let ymaps: Vec<DenseMatrix> = (0..nx * (ny - 1))
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / (ny - 1), idx % (ny - 1));
            induced_map(&cells[i * ny + j], &cells[i * ny + j + 1])
        })
        .collect();

    let locate = |r: GridPoint| points.iter().position(|&p| p == r).expect("grid point");
    let module = GridModule::from_ranks(field, bound, xs, ys, dims, |r, s| {
        ranks[&(locate(r), locate(s))]
    })
    .with_structure(Structure { xmaps, ymaps });
    Ok(module)
}

/// `PD_k(f)` and `PD_k(g)`, the barcodes of the two axis modules.
pub fn axis_barcodes(
    complex: &FilteredComplex,
    k: usize,
    field: PrimeField,
) -> Result<(PersistenceDiagram, PersistenceDiagram), ComplexError> {
    if !complex.has_g() && !complex.is_empty() {
        return Err(ComplexError::MissingG);
    }
    let pd_f = compute_diagram(complex, Function::F, k, field)?;
    let pd_g = if complex.is_empty() {
        PersistenceDiagram::default()
    } else {
        compute_diagram(complex, Function::G, k, field)?
    };
    Ok((pd_f, pd_g))
}
