//! Finite-window representations of `N^2`-graded modules.
//!
//! A [`GridModule`] stores a module on a compressed grid: a sorted list of
//! x-coordinates and y-coordinates, both starting at `0` and ending at the
//! truncation box. The module is assumed constant between consecutive
//! coordinates, and beyond the box. Point queries floor each coordinate to the
//! nearest stored one.

use std::collections::BTreeSet;
use std::fmt;
use std::io;

use thiserror::Error;

use crate::ext::{parse_nat, ExtNat, ParseExtNatError};
use crate::linalg::{DenseMatrix, PrimeField};

#[derive(Error, Debug)]
pub enum GridError {
    #[error("module is not hook-decomposable: {0}")]
    NotHookDecomposable(String),
    #[error(
        "unstable tail along the {axis} axis: the module still changes at the box edge {edge}"
    )]
    UnstableTail { axis: char, edge: u64 },
    #[error("invalid hook: {0}")]
    InvalidHook(String),
    #[error("modules live on different boxes ({0} vs {1})")]
    BoxMismatch(GridPoint, GridPoint),
    #[error("modules use different coefficient fields")]
    FieldMismatch,
    #[error("box coordinates must be at least 1, got {0}")]
    DegenerateBox(GridPoint),
    #[error("hook csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("hook row {row}: {message}")]
    Row { row: usize, message: String },
    #[error("hook header must be `p1,p2,q1,q2`")]
    Header,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPoint {
    pub x: u64,
    pub y: u64,
}

impl GridPoint {
    pub const fn new(x: u64, y: u64) -> Self {
        GridPoint { x, y }
    }

    /// Product order.
    pub fn le(self, other: GridPoint) -> bool {
        self.x <= other.x && self.y <= other.y
    }

    pub fn shift(self, eps: u64) -> GridPoint {
        GridPoint {
            x: self.x + eps,
            y: self.y + eps,
        }
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Interval module with support `{r >= p, r not >= q}`.
///
/// `q = (∞, ∞)` is the free quadrant. A `q` with a single infinite
/// coordinate is accepted and has the same support as the free quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HookModule {
    p: GridPoint,
    q: (ExtNat, ExtNat),
}

impl HookModule {
    pub fn new(p: GridPoint, q: (ExtNat, ExtNat)) -> Result<Self, GridError> {
        if q.0 < p.x || q.1 < p.y {
            return Err(GridError::InvalidHook(format!(
                "corner ({},{}) is not above {p}",
                q.0, q.1
            )));
        }
        if q == (ExtNat::Fin(p.x), ExtNat::Fin(p.y)) {
            return Err(GridError::InvalidHook(format!(
                "empty support: q = p = {p}"
            )));
        }
        Ok(HookModule { p, q })
    }

    pub fn bounded(p: GridPoint, q: GridPoint) -> Result<Self, GridError> {
        Self::new(p, (ExtNat::Fin(q.x), ExtNat::Fin(q.y)))
    }

    pub fn free(p: GridPoint) -> Self {
        HookModule {
            p,
            q: (ExtNat::Inf, ExtNat::Inf),
        }
    }

    pub fn p(&self) -> GridPoint {
        self.p
    }

    pub fn q(&self) -> (ExtNat, ExtNat) {
        self.q
    }

    /// Finite death corner, if any.
    pub fn q_finite(&self) -> Option<GridPoint> {
        match self.q {
            (ExtNat::Fin(x), ExtNat::Fin(y)) => Some(GridPoint::new(x, y)),
            _ => None,
        }
    }

    pub fn is_free_quadrant(&self) -> bool {
        self.q == (ExtNat::Inf, ExtNat::Inf)
    }

    /// Exactly one infinite coordinate in `q`.
    pub fn is_mixed(&self) -> bool {
        self.q.0.is_finite() != self.q.1.is_finite()
    }

    pub fn contains(&self, r: GridPoint) -> bool {
        self.p.le(r) && !(self.q.0 <= r.x && self.q.1 <= r.y)
    }
}

impl fmt::Display for HookModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_free_quadrant() {
            write!(f, "<{},inf>", self.p)
        } else {
            write!(f, "<{},({},{})>", self.p, self.q.0, self.q.1)
        }
    }
}

/// Finite multiset of hooks, kept in sorted order so that equality is multiset equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct HookDecomposition {
    hooks: Vec<HookModule>,
}

impl HookDecomposition {
    pub fn new(mut hooks: Vec<HookModule>) -> Self {
        hooks.sort();
        HookDecomposition { hooks }
    }

    pub fn hooks(&self) -> &[HookModule] {
        &self.hooks
    }

    pub fn len(&self) -> usize {
        self.hooks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hooks.is_empty()
    }

    /// Multiset union.
    pub fn union(&self, other: &HookDecomposition) -> HookDecomposition {
        HookDecomposition::new(self.hooks.iter().chain(&other.hooks).copied().collect())
    }

    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<(), GridError> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["p1", "p2", "q1", "q2"])?;
        for h in &self.hooks {
            w.write_record([
                h.p.x.to_string(),
                h.p.y.to_string(),
                h.q.0.to_string(),
                h.q.1.to_string(),
            ])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn read_csv<R: io::Read>(reader: R) -> Result<Self, GridError> {
        let mut r = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header = r.headers()?.clone();
        if header.iter().collect::<Vec<_>>() != ["p1", "p2", "q1", "q2"] {
            return Err(GridError::Header);
        }
        let mut hooks = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let row = i + 1;
            let bad = |e: ParseExtNatError| GridError::Row {
                row,
                message: e.to_string(),
            };
            let p = GridPoint::new(
                parse_nat(&rec[0]).map_err(bad)?,
                parse_nat(&rec[1]).map_err(bad)?,
            );
            let q = (
                rec[2].parse::<ExtNat>().map_err(bad)?,
                rec[3].parse::<ExtNat>().map_err(bad)?,
            );
            let hook = HookModule::new(p, q).map_err(|e| GridError::Row {
                row,
                message: e.to_string(),
            })?;
            hooks.push(hook);
        }
        Ok(HookDecomposition::new(hooks))
    }

    pub fn from_csv_str(text: &str) -> Result<Self, GridError> {
        Self::read_csv(text.as_bytes())
    }
}

/// Explicit internal maps between horizontally and vertically adjacent cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    /// `xmaps[i * ny + j]`: cell `(i, j)` to `(i + 1, j)`.
    pub xmaps: Vec<DenseMatrix>,
    /// `ymaps[i * (ny - 1) + j]`: cell `(i, j)` to `(i, j + 1)`.
    pub ymaps: Vec<DenseMatrix>,
}

/// A bigraded module restricted to the truncation box `{0..=bx} x {0..=by}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridModule {
    field: PrimeField,
    bound: GridPoint,
    xs: Vec<u64>,
    ys: Vec<u64>,
    dims: Vec<usize>,
    /// `ranks[a * ncells + b]` for cells `a <= b`; zero otherwise.
    ranks: Vec<u32>,
    structure: Option<Structure>,
}

/// Sorted, deduplicated coordinate list clipped to `[0, edge]` and containing both ends.
pub fn coordinate_axis(values: impl IntoIterator<Item = u64>, edge: u64) -> Vec<u64> {
    let mut set: BTreeSet<u64> = values.into_iter().filter(|&v| v <= edge).collect();
    set.insert(0);
    set.insert(edge);
    set.into_iter().collect()
}

fn floor_index(axis: &[u64], v: u64) -> usize {
    match axis.binary_search(&v) {
        Ok(i) => i,
        Err(i) => i - 1,
    }
}

impl GridModule {
    /// Module given by explicit step maps; ranks are derived from composites.
    pub fn from_structure(
        field: PrimeField,
        bound: GridPoint,
        xs: Vec<u64>,
        ys: Vec<u64>,
        dims: Vec<usize>,
        structure: Structure,
    ) -> Self {
        let mut m = GridModule::skeleton(field, bound, xs, ys, dims);
        let (nx, ny) = (m.xs.len(), m.ys.len());
        assert_eq!(structure.xmaps.len(), (nx - 1) * ny);
        assert_eq!(structure.ymaps.len(), nx * (ny - 1));
        m.structure = Some(structure);
        let n = m.ncells();
        for a in 0..n {
            for b in 0..n {
                if m.cell_le(a, b) {
                    m.ranks[a * n + b] =
                        m.map_cells(a, b).expect("structure present").rank() as u32;
                }
            }
        }
        m
    }

    /// Module known only through its rank invariant.
    pub fn from_ranks(
        field: PrimeField,
        bound: GridPoint,
        xs: Vec<u64>,
        ys: Vec<u64>,
        dims: Vec<usize>,
        rank: impl Fn(GridPoint, GridPoint) -> usize,
    ) -> Self {
        let mut m = GridModule::skeleton(field, bound, xs, ys, dims);
        let n = m.ncells();
        for a in 0..n {
            for b in 0..n {
                if m.cell_le(a, b) {
                    m.ranks[a * n + b] = rank(m.cell_point(a), m.cell_point(b)) as u32;
                }
            }
        }
        m
    }

    /// Attaches explicit step maps; their shapes must match the stored dimensions.
    pub fn with_structure(mut self, structure: Structure) -> Self {
        let (nx, ny) = (self.xs.len(), self.ys.len());
        assert_eq!(structure.xmaps.len(), (nx - 1) * ny);
        assert_eq!(structure.ymaps.len(), nx * (ny - 1));
        for i in 0..nx - 1 {
            for j in 0..ny {
                let m = &structure.xmaps[i * ny + j];
                assert_eq!(
                    (m.rows(), m.cols()),
                    (self.dims[self.cell(i + 1, j)], self.dims[self.cell(i, j)])
                );
            }
        }
        for i in 0..nx {
            for j in 0..ny - 1 {
                let m = &structure.ymaps[i * (ny - 1) + j];
                assert_eq!(
                    (m.rows(), m.cols()),
                    (self.dims[self.cell(i, j + 1)], self.dims[self.cell(i, j)])
                );
            }
        }
        self.structure = Some(structure);
        self
    }

    pub fn zero(field: PrimeField, bound: GridPoint) -> Self {
        evaluate_hooks_in(&HookDecomposition::default(), bound, field)
    }

    fn skeleton(
        field: PrimeField,
        bound: GridPoint,
        xs: Vec<u64>,
        ys: Vec<u64>,
        dims: Vec<usize>,
    ) -> Self {
        assert!(
            xs.first() == Some(&0) && xs.last() == Some(&bound.x),
            "x axis must span 0..={}",
            bound.x
        );
        assert!(
            ys.first() == Some(&0) && ys.last() == Some(&bound.y),
            "y axis must span 0..={}",
            bound.y
        );
        assert!(xs.windows(2).all(|w| w[0] < w[1]) && ys.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(dims.len(), xs.len() * ys.len());
        let n = dims.len();
        GridModule {
            field,
            bound,
            xs,
            ys,
            dims,
            ranks: vec![0; n * n],
            structure: None,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Upper corner of the truncation box.
    pub fn bound(&self) -> GridPoint {
        self.bound
    }

    pub fn xs(&self) -> &[u64] {
        &self.xs
    }

    pub fn ys(&self) -> &[u64] {
        &self.ys
    }

    pub fn structure(&self) -> Option<&Structure> {
        self.structure.as_ref()
    }

    pub fn ncells(&self) -> usize {
        self.xs.len() * self.ys.len()
    }

    pub fn cell(&self, i: usize, j: usize) -> usize {
        i * self.ys.len() + j
    }

    pub fn cell_coords(&self, c: usize) -> (usize, usize) {
        (c / self.ys.len(), c % self.ys.len())
    }

    pub fn cell_point(&self, c: usize) -> GridPoint {
        let (i, j) = self.cell_coords(c);
        GridPoint::new(self.xs[i], self.ys[j])
    }

    pub fn cell_le(&self, a: usize, b: usize) -> bool {
        let (ai, aj) = self.cell_coords(a);
        let (bi, bj) = self.cell_coords(b);
        ai <= bi && aj <= bj
    }

    /// Cell holding the point `r`; coordinates beyond the box are clamped.
    pub fn locate(&self, r: GridPoint) -> usize {
        let i = floor_index(&self.xs, r.x.min(self.bound.x));
        let j = floor_index(&self.ys, r.y.min(self.bound.y));
        self.cell(i, j)
    }

    pub fn cell_dim(&self, c: usize) -> usize {
        self.dims[c]
    }

    pub fn cell_rank(&self, a: usize, b: usize) -> usize {
        debug_assert!(self.cell_le(a, b));
        self.ranks[a * self.ncells() + b] as usize
    }

    pub fn dim_at(&self, r: GridPoint) -> usize {
        self.dims[self.locate(r)]
    }

    /// Rank of the internal map `M_r -> M_s`; `r <= s` is required.
    pub fn rank_at(&self, r: GridPoint, s: GridPoint) -> usize {
        assert!(r.le(s), "rank queried for incomparable {r} and {s}");
        self.cell_rank(self.locate(r), self.locate(s))
    }

    /// Sum of dimensions over the stored cells strictly inside the box.
    pub fn total_dimension(&self) -> usize {
        (0..self.ncells())
            .filter(|&c| {
                let p = self.cell_point(c);
                p.x < self.bound.x && p.y < self.bound.y
            })
            .map(|c| self.dims[c])
            .sum()
    }

    /// Internal map between cells `a <= b`, composed along x first and then y.
    pub fn map_cells(&self, a: usize, b: usize) -> Option<DenseMatrix> {
        let st = self.structure.as_ref()?;
        let (mut i, mut j) = self.cell_coords(a);
        let (bi, bj) = self.cell_coords(b);
        assert!(i <= bi && j <= bj, "map between incomparable cells");
        let ny = self.ys.len();
        let mut acc = DenseMatrix::identity(self.field, self.dims[a]);
        while i < bi {
            acc = st.xmaps[i * ny + j].mul(&acc);
            i += 1;
        }
        while j < bj {
            acc = st.ymaps[i * (ny - 1) + j].mul(&acc);
            j += 1;
        }
        Some(acc)
    }

    /// Internal map `M_r -> M_s` for arbitrary points `r <= s`.
    pub fn map_at(&self, r: GridPoint, s: GridPoint) -> Option<DenseMatrix> {
        assert!(r.le(s));
        self.map_cells(self.locate(r), self.locate(s))
    }

    /// The same module stored on different coordinate lists (values floored).
    pub fn refine(&self, xs: Vec<u64>, ys: Vec<u64>) -> GridModule {
        let dims: Vec<usize> = xs
            .iter()
            .flat_map(|&x| ys.iter().map(move |&y| GridPoint::new(x, y)))
            .map(|r| self.dim_at(r))
            .collect();
        match &self.structure {
            Some(_) => {
                let (nx, ny) = (xs.len(), ys.len());
                let mut xmaps = Vec::with_capacity((nx - 1) * ny);
                for i in 0..nx - 1 {
                    for &y in &ys {
                        xmaps.push(
                            self.map_at(GridPoint::new(xs[i], y), GridPoint::new(xs[i + 1], y))
                                .unwrap(),
                        );
                    }
                }
                let mut ymaps = Vec::with_capacity(nx * (ny - 1));
                for &x in &xs {
                    for j in 0..ny - 1 {
                        ymaps.push(
                            self.map_at(GridPoint::new(x, ys[j]), GridPoint::new(x, ys[j + 1]))
                                .unwrap(),
                        );
                    }
                }
                let mut out = GridModule::skeleton(self.field, self.bound, xs, ys, dims);
                out.structure = Some(Structure { xmaps, ymaps });
                let n = out.ncells();
                for a in 0..n {
                    for b in 0..n {
                        if out.cell_le(a, b) {
                            out.ranks[a * n + b] =
                                self.rank_at(out.cell_point(a), out.cell_point(b)) as u32;
                        }
                    }
                }
                out
            }
            None => GridModule::from_ranks(self.field, self.bound, xs, ys, dims, |r, s| {
                self.rank_at(r, s)
            }),
        }
    }

    /// Whether dimensions and ranks agree at every comparable pair of points.
    pub fn same_rank_invariant(&self, other: &GridModule) -> Result<bool, GridError> {
        if self.bound != other.bound {
            return Err(GridError::BoxMismatch(self.bound, other.bound));
        }
        let xs = coordinate_axis(self.xs.iter().chain(&other.xs).copied(), self.bound.x);
        let ys = coordinate_axis(self.ys.iter().chain(&other.ys).copied(), self.bound.y);
        let points: Vec<GridPoint> = xs
            .iter()
            .flat_map(|&x| ys.iter().map(move |&y| GridPoint::new(x, y)))
            .collect();
        for &r in &points {
            if self.dim_at(r) != other.dim_at(r) {
                return Ok(false);
            }
            for &s in &points {
                if r.le(s) && self.rank_at(r, s) != other.rank_at(r, s) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Checks `rank(r,r) = dim(r)`, `rank(r,s) <= min(dim r, dim s)`, and monotonicity under composition.
    pub fn check_rank_invariants(&self) -> Result<(), String> {
        let n = self.ncells();
        for a in 0..n {
            if self.cell_rank(a, a) != self.dims[a] {
                return Err(format!("rank({0},{0}) != dim at {0}", self.cell_point(a)));
            }
            for b in 0..n {
                if !self.cell_le(a, b) {
                    continue;
                }
                let rab = self.cell_rank(a, b);
                if rab > self.dims[a].min(self.dims[b]) {
                    return Err(format!(
                        "rank({},{}) exceeds dimensions",
                        self.cell_point(a),
                        self.cell_point(b)
                    ));
                }
                for c in 0..n {
                    if self.cell_le(b, c) {
                        let rac = self.cell_rank(a, c);
                        if rac > rab || rac > self.cell_rank(b, c) {
                            return Err(format!(
                                "rank not monotone along {} <= {} <= {}",
                                self.cell_point(a),
                                self.cell_point(b),
                                self.cell_point(c)
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The last row and column reproduce the data one step inside the box.
    pub fn check_tail_stable(&self) -> Result<(), GridError> {
        let inward = |r: GridPoint, axis: char| -> GridPoint {
            match axis {
                'x' if r.x == self.bound.x => GridPoint::new(r.x - 1, r.y),
                'y' if r.y == self.bound.y => GridPoint::new(r.x, r.y - 1),
                _ => r,
            }
        };
        let n = self.ncells();
        for (axis, edge) in [('x', self.bound.x), ('y', self.bound.y)] {
            for a in 0..n {
                let r = self.cell_point(a);
                for b in 0..n {
                    if !self.cell_le(a, b) {
                        continue;
                    }
                    let s = self.cell_point(b);
                    let (r2, s2) = (inward(r, axis), inward(s, axis));
                    if (r2, s2) != (r, s) && self.cell_rank(a, b) != self.rank_at(r2, s2) {
                        return Err(GridError::UnstableTail { axis, edge });
                    }
                }
            }
        }
        Ok(())
    }

    /// CSV dump `r1,r2,s1,s2,rank` over the stored cells; the rows with `r = s` carry dimensions.
    pub fn dump_csv(&self) -> String {
        let mut out = String::from("r1,r2,s1,s2,rank\n");
        let n = self.ncells();
        for a in 0..n {
            for b in 0..n {
                if self.cell_le(a, b) {
                    let (r, s) = (self.cell_point(a), self.cell_point(b));
                    out.push_str(&format!(
                        "{},{},{},{},{}\n",
                        r.x,
                        r.y,
                        s.x,
                        s.y,
                        self.cell_rank(a, b)
                    ));
                }
            }
        }
        out
    }
}

/// Evaluates a hook multiset on the box over F_2.
pub fn evaluate_hooks(decomp: &HookDecomposition, bound: GridPoint) -> GridModule {
    evaluate_hooks_in(decomp, bound, PrimeField::default())
}

/// Evaluates a hook multiset on the box. Each hook contributes a one-dimensional
/// summand with identity maps on its support.
pub fn evaluate_hooks_in(
    decomp: &HookDecomposition,
    bound: GridPoint,
    field: PrimeField,
) -> GridModule {
    let xs = coordinate_axis(
        decomp
            .hooks
            .iter()
            .flat_map(|h| [Some(h.p.x), h.q.0.finite()])
            .flatten(),
        bound.x,
    );
    let ys = coordinate_axis(
        decomp
            .hooks
            .iter()
            .flat_map(|h| [Some(h.p.y), h.q.1.finite()])
            .flatten(),
        bound.y,
    );
    hooks_on_axes(decomp, bound, field, xs, ys)
}

fn hooks_on_axes(
    decomp: &HookDecomposition,
    bound: GridPoint,
    field: PrimeField,
    xs: Vec<u64>,
    ys: Vec<u64>,
) -> GridModule {
    let (nx, ny) = (xs.len(), ys.len());
    let alive: Vec<Vec<usize>> = xs
        .iter()
        .flat_map(|&x| ys.iter().map(move |&y| GridPoint::new(x, y)))
        .map(|r| {
            (0..decomp.hooks.len())
                .filter(|&h| decomp.hooks[h].contains(r))
                .collect()
        })
        .collect();
    let inclusion = |from: &[usize], to: &[usize]| {
        let mut m = DenseMatrix::zeros(field, to.len(), from.len());
        for (col, h) in from.iter().enumerate() {
            if let Ok(row) = to.binary_search(h) {
                m.set(row, col, 1);
            }
        }
        m
    };
    let mut xmaps = Vec::with_capacity((nx - 1) * ny);
    for i in 0..nx - 1 {
        for j in 0..ny {
            xmaps.push(inclusion(&alive[i * ny + j], &alive[(i + 1) * ny + j]));
        }
    }
    let mut ymaps = Vec::with_capacity(nx * (ny - 1));
    for i in 0..nx {
        for j in 0..ny - 1 {
            ymaps.push(inclusion(&alive[i * ny + j], &alive[i * ny + j + 1]));
        }
    }
    let dims = alive.iter().map(Vec::len).collect();
    let mut m = GridModule::skeleton(field, bound, xs, ys, dims);
    let n = m.ncells();
    for a in 0..n {
        for b in 0..n {
            if m.cell_le(a, b) {
                let common = alive[a]
                    .iter()
                    .filter(|h| alive[b].binary_search(h).is_ok())
                    .count();
                m.ranks[a * n + b] = common as u32;
            }
        }
    }
    m.structure = Some(Structure { xmaps, ymaps });
    m
}

/// Recovers the unique hook multiset whose evaluation equals `module`.
///
/// Births are isolated by inclusion–exclusion of the rank invariant in the
/// source variable, deaths by a second inclusion–exclusion in the target
/// variable. Negative multiplicities, or a mismatch when the candidate is
/// evaluated back, mean the module lies outside the hook-decomposable class.
pub fn hook_decompose(module: &GridModule) -> Result<HookDecomposition, GridError> {
    if module.bound.x == 0 || module.bound.y == 0 {
        return Err(GridError::DegenerateBox(module.bound));
    }
    module.check_tail_stable()?;
    let (nx, ny) = (module.xs.len(), module.ys.len());
    let rk = |i: Option<usize>, j: Option<usize>, k: usize, l: usize| -> i64 {
        match (i, j) {
            (Some(i), Some(j)) => module.cell_rank(module.cell(i, j), module.cell(k, l)) as i64,
            _ => 0,
        }
    };
    let prev = |i: usize| i.checked_sub(1);

    let mut hooks = Vec::new();
    for i in 0..nx {
        for j in 0..ny {
            // born[(k, l)]: summands born at (i, j) still alive at (k, l)
            let mut born = vec![0i64; nx * ny];
            for k in i..nx {
                for l in j..ny {
                    born[k * ny + l] = rk(Some(i), Some(j), k, l)
                        - rk(prev(i), Some(j), k, l)
                        - rk(Some(i), prev(j), k, l)
                        + rk(prev(i), prev(j), k, l);
                }
            }
            let total = born[i * ny + j];
            if total < 0 {
                return Err(GridError::NotHookDecomposable(format!(
                    "negative birth count at {}",
                    module.cell_point(module.cell(i, j))
                )));
            }
            if total == 0 {
                continue;
            }
            let quadrants = born[(nx - 1) * ny + ny - 1];
            // dead[(k, l)]: summands born at (i, j) already dead at (k, l)
            let dead = |k: Option<usize>, l: Option<usize>| -> i64 {
                match (k, l) {
                    (Some(k), Some(l)) if k >= i && l >= j => total - born[k * ny + l],
                    _ => 0,
                }
            };
            let p = module.cell_point(module.cell(i, j));
            for k in i..nx {
                for l in j..ny {
                    if (k, l) == (i, j) {
                        continue;
                    }
                    let mult =
                        dead(Some(k), Some(l)) - dead(prev(k), Some(l)) - dead(Some(k), prev(l))
                            + dead(prev(k), prev(l));
                    let q = module.cell_point(module.cell(k, l));
                    if mult < 0 {
                        return Err(GridError::NotHookDecomposable(format!(
                            "negative multiplicity {mult} for hook <{p},{q}>"
                        )));
                    }
                    for _ in 0..mult {
                        hooks.push(HookModule::bounded(p, q)?);
                    }
                }
            }
            if quadrants < 0 {
                return Err(GridError::NotHookDecomposable(format!(
                    "negative quadrant count at {p}"
                )));
            }
            for _ in 0..quadrants {
                hooks.push(HookModule::free(p));
            }
        }
    }
    let decomp = HookDecomposition::new(hooks);
    let check = hooks_on_axes(
        &decomp,
        module.bound,
        module.field,
        module.xs.clone(),
        module.ys.clone(),
    );
    if check.dims != module.dims || check.ranks != module.ranks {
        return Err(GridError::NotHookDecomposable(
            "the rank invariant is not a nonnegative sum of hook rank invariants".into(),
        ));
    }
    Ok(decomp)
}

/// Isomorphism test within the hook-decomposable class.
pub fn iso_hook_decomposable(a: &GridModule, b: &GridModule) -> Result<bool, GridError> {
    if a.bound != b.bound {
        return Err(GridError::BoxMismatch(a.bound, b.bound));
    }
    Ok(hook_decompose(a)? == hook_decompose(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: u64, y: u64) -> GridPoint {
        GridPoint::new(x, y)
    }

    fn hook(p: (u64, u64), q: (u64, u64)) -> HookModule {
        HookModule::bounded(pt(p.0, p.1), pt(q.0, q.1)).unwrap()
    }

    #[test]
    fn single_hook_evaluation() {
        let m = evaluate_hooks(
            &HookDecomposition::new(vec![hook((0, 0), (1, 1))]),
            pt(2, 2),
        );
        assert_eq!(m.dim_at(pt(0, 0)), 1);
        assert_eq!(m.dim_at(pt(1, 1)), 0);
        assert_eq!(m.dim_at(pt(0, 2)), 1);
        assert_eq!(m.rank_at(pt(0, 0), pt(1, 1)), 0);
        assert_eq!(m.rank_at(pt(0, 0), pt(0, 2)), 1);
        m.check_rank_invariants().unwrap();
    }

    #[test]
    fn free_quadrant_is_constant() {
        let m = evaluate_hooks(
            &HookDecomposition::new(vec![HookModule::free(pt(0, 0))]),
            pt(3, 3),
        );
        for x in 0..=3 {
            for y in 0..=3 {
                assert_eq!(m.dim_at(pt(x, y)), 1);
                assert_eq!(m.rank_at(pt(0, 0), pt(x, y)), 1);
            }
        }
    }

    #[test]
    fn empty_decomposition_is_zero() {
        let m = evaluate_hooks(&HookDecomposition::default(), pt(4, 4));
        assert_eq!(m.total_dimension(), 0);
        assert!(hook_decompose(&m).unwrap().is_empty());
    }

    #[test]
    fn invalid_hooks() {
        assert!(HookModule::bounded(pt(2, 2), pt(2, 2)).is_err());
        assert!(HookModule::bounded(pt(2, 2), pt(1, 3)).is_err());
        assert!(HookModule::new(pt(2, 2), (ExtNat::Inf, ExtNat::Fin(1))).is_err());
        let mixed = HookModule::new(pt(2, 2), (ExtNat::Inf, ExtNat::Fin(3))).unwrap();
        assert!(mixed.is_mixed());
        // r >= (inf, 3) never holds
        assert!(mixed.contains(pt(100, 100)));
    }

    #[test]
    fn decomposes_example_hooks() {
        let d = HookDecomposition::new(vec![hook((0, 100), (1, 101)), hook((100, 0), (101, 1))]);
        let m = evaluate_hooks(&d, pt(103, 103));
        assert_eq!(hook_decompose(&m).unwrap(), d);
    }

    #[test]
    fn decomposes_bands_and_quadrants() {
        let d = HookDecomposition::new(vec![
            hook((2, 3), (5, 3)),
            hook((1, 1), (1, 4)),
            HookModule::free(pt(0, 2)),
            HookModule::free(pt(0, 2)),
            hook((0, 0), (3, 3)),
        ]);
        let m = evaluate_hooks(&d, pt(7, 7));
        assert_eq!(hook_decompose(&m).unwrap(), d);
    }

    #[test]
    fn bounded_l_shape_is_not_hook_decomposable() {
        let support = [pt(0, 0), pt(0, 1), pt(1, 0)];
        let xs = vec![0, 1, 2, 3, 4];
        let ys = xs.clone();
        let dims = xs
            .iter()
            .flat_map(|&x| ys.iter().map(move |&y| pt(x, y)))
            .map(|r| usize::from(support.contains(&r)))
            .collect();
        let m = GridModule::from_ranks(PrimeField::default(), pt(4, 4), xs, ys, dims, |r, s| {
            usize::from(support.contains(&r) && support.contains(&s))
        });
        assert!(matches!(
            hook_decompose(&m),
            Err(GridError::NotHookDecomposable(_))
        ));
    }

    #[test]
    fn death_at_box_edge_is_unstable() {
        let m = evaluate_hooks(
            &HookDecomposition::new(vec![hook((0, 0), (4, 0))]),
            pt(4, 4),
        );
        assert!(matches!(
            hook_decompose(&m),
            Err(GridError::UnstableTail { axis: 'x', .. })
        ));
    }

    #[test]
    fn iso_test() {
        let a = evaluate_hooks(
            &HookDecomposition::new(vec![hook((0, 0), (1, 1))]),
            pt(3, 3),
        );
        let b = evaluate_hooks(
            &HookDecomposition::new(vec![hook((0, 0), (1, 2))]),
            pt(3, 3),
        );
        assert!(iso_hook_decomposable(&a, &a).unwrap());
        assert!(!iso_hook_decomposable(&a, &b).unwrap());
    }

    #[test]
    fn refine_preserves_everything() {
        let d = HookDecomposition::new(vec![hook((1, 0), (3, 2)), HookModule::free(pt(2, 2))]);
        let m = evaluate_hooks(&d, pt(5, 5));
        let fine = m.refine((0..=5).collect(), (0..=5).collect());
        assert!(m.same_rank_invariant(&fine).unwrap());
        assert_eq!(hook_decompose(&fine).unwrap(), d);
        fine.check_rank_invariants().unwrap();
    }

    #[test]
    fn hook_csv() {
        let d = HookDecomposition::new(vec![hook((0, 100), (1, 101)), HookModule::free(pt(3, 4))]);
        let text = d.to_csv();
        assert_eq!(text, "p1,p2,q1,q2\n0,100,1,101\n3,4,inf,inf\n");
        assert_eq!(HookDecomposition::from_csv_str(&text).unwrap(), d);
        assert!(matches!(
            HookDecomposition::from_csv_str("p1,p2,q1,q2\n3,3,3,3\n"),
            Err(GridError::Row { row: 1, .. })
        ));
    }
}
