//! Brute-force oracles and random generators shared by the integration tests.
//!
//! The oracles avoid the library's algorithms: homology ranks come from
//! enumerating every cycle of a tiny complex over F2, graded pieces come from
//! counting monomials, and interleavings come from enumerating every family
//! of maps on a unit grid.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use hookprod::{
    DiagramPoint, ExtNat, FilteredComplex, Function, GridModule, GridPoint, HookDecomposition,
    HookModule, MatchEntry, Matching, PersistenceDiagram, Simplex,
};
use rand::seq::SliceRandom;
use rand::Rng;

// ---------- random inputs ----------

/// Random closed complex with at most `max_simplices` simplices of dimension at most 3,
/// with monotone f and g values in `0..=max_value`.
pub fn random_complex<R: Rng>(
    rng: &mut R,
    max_simplices: usize,
    max_value: u64,
) -> FilteredComplex {
    let nv = rng.gen_range(1..=5u64);
    let mut set: BTreeSet<Vec<u64>> = BTreeSet::new();
    for _ in 0..20 {
        let dim = rng.gen_range(0..=3usize).min(nv as usize - 1);
        let mut verts: Vec<u64> = (0..nv).collect();
        verts.shuffle(rng);
        let mut simplex: Vec<u64> = verts[..=dim].to_vec();
        simplex.sort();
        let mut closure = BTreeSet::new();
        for mask in 1u32..(1 << simplex.len()) {
            let face: Vec<u64> = (0..simplex.len())
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| simplex[b])
                .collect();
            closure.insert(face);
        }
        let merged: BTreeSet<Vec<u64>> = set.union(&closure).cloned().collect();
        if merged.len() <= max_simplices {
            set = merged;
        }
    }
    let mut simplices: Vec<Vec<u64>> = set.into_iter().collect();
    simplices.sort_by_key(|s| (s.len(), s.clone()));
    let mut fvals: Vec<u64> = Vec::new();
    let mut gvals: Vec<u64> = Vec::new();
    for (i, s) in simplices.iter().enumerate() {
        let mut f = rng.gen_range(0..=max_value);
        let mut g = rng.gen_range(0..=max_value);
        for (j, t) in simplices[..i].iter().enumerate() {
            if t.len() + 1 == s.len() && t.iter().all(|v| s.contains(v)) {
                f = f.max(fvals[j]);
                g = g.max(gvals[j]);
            }
        }
        fvals.push(f);
        gvals.push(g);
    }
    let simplices = simplices
        .into_iter()
        .map(|v| Simplex::new(v).unwrap())
        .collect();
    FilteredComplex::new(simplices, fvals, Some(gvals)).unwrap()
}

pub fn random_point<R: Rng>(rng: &mut R, max_value: u64) -> DiagramPoint {
    let b = rng.gen_range(0..=max_value);
    match rng.gen_range(0..10) {
        0 => DiagramPoint::essential(b),
        1 => DiagramPoint::diagonal(b),
        _ => DiagramPoint::finite(b, rng.gen_range(b..=max_value)),
    }
}

pub fn random_diagram<R: Rng>(
    rng: &mut R,
    max_points: usize,
    max_value: u64,
) -> PersistenceDiagram {
    let n = rng.gen_range(0..=max_points);
    PersistenceDiagram::new((0..n).map(|_| random_point(rng, max_value)).collect())
}

/// Random valid matching: a random partial injection, everything else to the diagonal.
pub fn random_matching<R: Rng>(
    rng: &mut R,
    pd_f: &PersistenceDiagram,
    pd_g: &PersistenceDiagram,
    max_t: u64,
) -> Matching {
    let mut gs: Vec<usize> = (0..pd_g.len()).collect();
    gs.shuffle(rng);
    let mut free_g: Vec<usize> = gs;
    let mut entries = Vec::new();
    for f in 0..pd_f.len() {
        if !free_g.is_empty() && rng.gen_bool(0.6) {
            let g = free_g.pop().unwrap();
            entries.push(MatchEntry::Pair { f, g });
        } else {
            entries.push(MatchEntry::FDiag {
                f,
                t: rng.gen_range(0..=max_t),
            });
        }
    }
    for g in free_g {
        entries.push(MatchEntry::GDiag {
            t: rng.gen_range(0..=max_t),
            g,
        });
    }
    Matching::new(entries)
}

/// Random hook: bounded with `p <= q <= max`, or a free quadrant; never mixed.
pub fn random_hook<R: Rng>(rng: &mut R, max: u64) -> HookModule {
    let p = GridPoint::new(rng.gen_range(0..max), rng.gen_range(0..max));
    if rng.gen_range(0..5) == 0 {
        return HookModule::free(p);
    }
    loop {
        let q = GridPoint::new(rng.gen_range(p.x..=max), rng.gen_range(p.y..=max));
        if q != p {
            return HookModule::bounded(p, q).unwrap();
        }
    }
}

pub fn random_hooks<R: Rng>(rng: &mut R, max_hooks: usize, max: u64) -> HookDecomposition {
    let n = rng.gen_range(0..=max_hooks);
    HookDecomposition::new((0..n).map(|_| random_hook(rng, max)).collect())
}

// ---------- homology over F2 by enumeration ----------

fn boundary_mask(
    complex: &FilteredComplex,
    k_index: &BTreeMap<Vec<u64>, usize>,
    s: &Simplex,
) -> u64 {
    let mut mask = 0u64;
    for face in s.facets() {
        mask ^= 1 << k_index[face.vertices()];
    }
    let _ = complex;
    mask
}

fn xor_rank(vectors: impl IntoIterator<Item = u64>) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for mut v in vectors {
        for b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Rank of `H_k(S) -> H_k(T)` over F2 for subcomplexes given by membership predicates.
pub fn inclusion_rank_oracle(
    complex: &FilteredComplex,
    k: usize,
    in_s: impl Fn(usize) -> bool,
    in_t: impl Fn(usize) -> bool,
) -> usize {
    let simplices = complex.simplices();
    let k_simplices: Vec<usize> = (0..simplices.len())
        .filter(|&i| simplices[i].dimension() == k)
        .collect();
    let k_index: BTreeMap<Vec<u64>, usize> = k_simplices
        .iter()
        .enumerate()
        .map(|(pos, &i)| (simplices[i].vertices().to_vec(), pos))
        .collect();
    let lower: BTreeMap<Vec<u64>, usize> = (0..simplices.len())
        .filter(|&i| k > 0 && simplices[i].dimension() == k - 1)
        .enumerate()
        .map(|(pos, i)| (simplices[i].vertices().to_vec(), pos))
        .collect();
    let in_s_pos: Vec<usize> = (0..k_simplices.len())
        .filter(|&pos| in_s(k_simplices[pos]))
        .collect();
    // every chain on the k-simplices of S, kept when its boundary vanishes
    let mut cycles = Vec::new();
    for mask in 1u64..(1 << in_s_pos.len()) {
        let mut chain = 0u64;
        let mut bd = 0u64;
        for (bit, &pos) in in_s_pos.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                chain |= 1 << pos;
                if k > 0 {
                    bd ^= boundary_mask(complex, &lower, &simplices[k_simplices[pos]]);
                }
            }
        }
        if bd == 0 {
            cycles.push(chain);
        }
    }
    let boundaries: Vec<u64> = (0..simplices.len())
        .filter(|&i| simplices[i].dimension() == k + 1 && in_t(i))
        .map(|i| boundary_mask(complex, &k_index, &simplices[i]))
        .collect();
    xor_rank(boundaries.iter().copied().chain(cycles)) - xor_rank(boundaries)
}

/// Off-diagonal diagram of `function` in degree `k`, from ranks between sublevel sets.
pub fn diagram_oracle(
    complex: &FilteredComplex,
    function: Function,
    k: usize,
) -> BTreeMap<(u64, ExtNat), usize> {
    let vals = complex.values(function).unwrap().to_vec();
    let levels: Vec<u64> = vals
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let n = levels.len();
    let r = |i: isize, j: usize| -> i64 {
        if i < 0 {
            return 0;
        }
        let (s, t) = (levels[i as usize], levels[j]);
        inclusion_rank_oracle(complex, k, |x| vals[x] <= s, |x| vals[x] <= t) as i64
    };
    let mut out = BTreeMap::new();
    for i in 0..n {
        let si = i as isize;
        for j in i + 1..n {
            let m = r(si, j - 1) - r(si, j) - r(si - 1, j - 1) + r(si - 1, j);
            assert!(m >= 0);
            if m > 0 {
                *out.entry((levels[i], ExtNat::Fin(levels[j]))).or_insert(0) += m as usize;
            }
        }
        let m = r(si, n - 1) - r(si - 1, n - 1);
        if m > 0 {
            *out.entry((levels[i], ExtNat::Inf)).or_insert(0) += m as usize;
        }
    }
    out
}

pub fn off_diagonal_multiset(pd: &PersistenceDiagram) -> BTreeMap<(u64, ExtNat), usize> {
    let mut out = BTreeMap::new();
    for p in pd.points().iter().filter(|p| !p.is_diagonal()) {
        *out.entry((p.birth, p.death)).or_insert(0) += 1;
    }
    out
}

// ---------- the product, by counting monomials ----------

/// Bidegree and the x and y exponents of the annihilator; `None` is infinite.
pub type Generator = ((u64, u64), Option<u64>, Option<u64>);

/// `(bidegree, x exponent, y exponent)` of every generator, read straight from the matching.
pub fn product_generators(
    pd_f: &PersistenceDiagram,
    pd_g: &PersistenceDiagram,
    gamma: &Matching,
) -> Vec<Generator> {
    let exp = |p: DiagramPoint| p.death.finite().map(|d| d - p.birth);
    let mut gens = Vec::new();
    for e in gamma.entries() {
        let (pf, pg) = match *e {
            MatchEntry::Pair { f, g } => (pd_f.point(f), pd_g.point(g)),
            MatchEntry::FDiag { f, t } => (pd_f.point(f), DiagramPoint::diagonal(t)),
            MatchEntry::GDiag { t, g } => (DiagramPoint::diagonal(t), pd_g.point(g)),
        };
        if pf.is_diagonal() && pg.is_diagonal() {
            continue;
        }
        gens.push(((pf.birth, pg.birth), exp(pf), exp(pg)));
    }
    gens
}

/// Whether the monomial `x^i y^j` times a generator survives its annihilator `x^a y^c`.
fn survives(i: u64, j: u64, a: Option<u64>, c: Option<u64>) -> bool {
    match (a, c) {
        (Some(a), Some(c)) => !(i >= a && j >= c),
        _ => true,
    }
}

/// Dimension of the graded piece at `r` and rank of multiplication from `r` to `s`.
pub fn product_piece(gens: &[Generator], r: GridPoint, s: GridPoint) -> (usize, usize) {
    let mut dim = 0;
    let mut rank = 0;
    for &((b, bp), a, c) in gens {
        if r.x >= b && r.y >= bp && survives(r.x - b, r.y - bp, a, c) {
            dim += 1;
            if survives(s.x - b, s.y - bp, a, c) {
                rank += 1;
            }
        }
    }
    (dim, rank)
}

// ---------- interleavings by enumeration ----------

/// Every unit-grid point of the box, edge included.
fn unit_points(bound: GridPoint) -> Vec<GridPoint> {
    (0..=bound.x)
        .flat_map(|x| (0..=bound.y).map(move |y| GridPoint::new(x, y)))
        .collect()
}

/// All natural families `r -> map source_r -> target_{r+eps}`, for modules of dimension at most one per point.
fn natural_families(
    source: &GridModule,
    target: &GridModule,
    eps: u64,
) -> Vec<BTreeMap<GridPoint, u32>> {
    let pts = unit_points(source.bound());
    let slots: Vec<GridPoint> = pts
        .iter()
        .copied()
        .filter(|&r| source.dim_at(r) == 1 && target.dim_at(r.shift(eps)) == 1)
        .collect();
    assert!(pts
        .iter()
        .all(|&r| source.dim_at(r) <= 1 && target.dim_at(r) <= 1));
    assert!(slots.len() <= 20, "too many unknowns for enumeration");
    let value = |fam: &BTreeMap<GridPoint, u32>, r: GridPoint| *fam.get(&r).unwrap_or(&0);
    let scalar = |m: &GridModule, r: GridPoint, s: GridPoint| -> u32 {
        if m.dim_at(r) == 0 || m.dim_at(s) == 0 {
            0
        } else {
            m.map_at(r, s).unwrap().get(0, 0)
        }
    };
    let mut out = Vec::new();
    for mask in 0u32..(1 << slots.len()) {
        let fam: BTreeMap<GridPoint, u32> = slots
            .iter()
            .enumerate()
            .filter(|(b, _)| mask & (1 << b) != 0)
            .map(|(_, &r)| (r, 1))
            .collect();
        let natural = pts.iter().all(|&r| {
            [GridPoint::new(r.x + 1, r.y), GridPoint::new(r.x, r.y + 1)]
                .iter()
                .all(|&s| {
                    if s.x > source.bound().x || s.y > source.bound().y {
                        return true;
                    }
                    // target(r+eps -> s+eps) phi_r = phi_s source(r -> s)
                    let left = if source.dim_at(r) == 1 {
                        value(&fam, r) * scalar(target, r.shift(eps), s.shift(eps))
                    } else {
                        0
                    };
                    let right = if source.dim_at(r) == 1 {
                        scalar(source, r, s) * value(&fam, s)
                    } else {
                        0
                    };
                    left % 2 == right % 2
                })
        });
        if natural {
            out.push(fam);
        }
    }
    out
}

/// Whether an `eps`-interleaving exists, by enumerating all map families over F2.
/// Only for modules with dimension at most one at every point.
pub fn interleaves_oracle(a: &GridModule, b: &GridModule, eps: u64) -> bool {
    let phis = natural_families(a, b, eps);
    let psis = natural_families(b, a, eps);
    let pts = unit_points(a.bound());
    let scalar = |m: &GridModule, r: GridPoint, s: GridPoint| -> u32 {
        if m.dim_at(r) == 0 || m.dim_at(s) == 0 {
            0
        } else {
            m.map_at(r, s).unwrap().get(0, 0)
        }
    };
    let get = |fam: &BTreeMap<GridPoint, u32>, r: GridPoint| -> u32 {
        let r = GridPoint::new(r.x.min(a.bound().x), r.y.min(a.bound().y));
        *fam.get(&r).unwrap_or(&0)
    };
    phis.iter().any(|phi| {
        psis.iter().any(|psi| {
            pts.iter().all(|&r| {
                let ra = r.shift(eps);
                let two = r.shift(2 * eps);
                let ok_a =
                    a.dim_at(r) == 0 || (get(psi, ra) * get(phi, r)) % 2 == scalar(a, r, two);
                let ok_b =
                    b.dim_at(r) == 0 || (get(phi, ra) * get(psi, r)) % 2 == scalar(b, r, two);
                ok_a && ok_b
            })
        })
    })
}

/// Whether every internal map over a `(2 eps, 2 eps)` step vanishes, so that zero maps interleave.
pub fn shift_vanishes(m: &GridModule, eps: u64) -> bool {
    let mut xs: Vec<u64> = m.xs().to_vec();
    let mut ys: Vec<u64> = m.ys().to_vec();
    xs.dedup();
    ys.dedup();
    xs.iter().all(|&x| {
        ys.iter().all(|&y| {
            let r = GridPoint::new(x, y);
            m.rank_at(r, r.shift(2 * eps)) == 0
        })
    })
}
