//! Lower bound for the interleaving distance from restrictions to lines.
//!
//! A line with direction `m` (normalized so its largest component is 1) meets
//! a grid module in a one-parameter module whose barcode is read off the rank
//! invariant by inclusion-exclusion. Weighted by the smallest component of `m`,
//! the bottleneck distance of the two restrictions never exceeds `d_I`.

use std::collections::BTreeSet;

use super::bottleneck::bottleneck_value;
use super::{Distance, DistanceError, Rational, RealPoint};
use crate::grid::{GridError, GridModule, GridPoint};

/// The half-line `base + t * direction / max(direction)`, `t >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Line {
    pub base: (u64, u64),
    pub direction: (u64, u64),
}

impl Line {
    /// Both direction components must be positive.
    pub fn new(base: (u64, u64), direction: (u64, u64)) -> Self {
        assert!(
            direction.0 > 0 && direction.1 > 0,
            "lines must have positive slope"
        );
        Line { base, direction }
    }

    pub fn diagonal() -> Self {
        Line::new((0, 0), (1, 1))
    }

    fn scale(&self) -> i64 {
        self.direction.0.max(self.direction.1) as i64
    }

    /// Smallest component of the normalized direction.
    pub fn weight(&self) -> Rational {
        Rational::new(self.direction.0.min(self.direction.1) as i64, self.scale())
    }

    pub fn point_at(&self, t: Rational) -> GridPoint {
        let s = self.scale();
        let x = Rational::from_integer(self.base.0 as i64)
            + t * Rational::new(self.direction.0 as i64, s);
        let y = Rational::from_integer(self.base.1 as i64)
            + t * Rational::new(self.direction.1 as i64, s);
        GridPoint::new(x.floor().to_integer() as u64, y.floor().to_integer() as u64)
    }

    /// Parameters where the line reaches one of the given coordinates.
    fn crossings(&self, xs: &[u64], ys: &[u64]) -> Vec<Rational> {
        let s = self.scale();
        let mut ts = BTreeSet::new();
        ts.insert(Rational::from_integer(0));
        for &c in xs.iter().filter(|&&c| c >= self.base.0) {
            ts.insert(Rational::new(
                (c - self.base.0) as i64 * s,
                self.direction.0 as i64,
            ));
        }
        for &c in ys.iter().filter(|&&c| c >= self.base.1) {
            ts.insert(Rational::new(
                (c - self.base.1) as i64 * s,
                self.direction.1 as i64,
            ));
        }
        ts.into_iter().collect()
    }
}

/// Which lines `matching_distance_estimate` samples.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum LineSampling {
    /// Directions (1,1), (1,2), (2,1) through the origin and through every
    /// critical coordinate on both axes.
    #[default]
    Standard,
    /// Only the main diagonal.
    Diagonal,
    Explicit(Vec<Line>),
}

impl LineSampling {
    pub fn lines(&self, a: &GridModule, b: &GridModule) -> Vec<Line> {
        match self {
            LineSampling::Diagonal => vec![Line::diagonal()],
            LineSampling::Explicit(lines) => lines.clone(),
            LineSampling::Standard => {
                let coords: BTreeSet<u64> = a
                    .xs()
                    .iter()
                    .chain(a.ys())
                    .chain(b.xs())
                    .chain(b.ys())
                    .copied()
                    .collect();
                let mut bases = BTreeSet::new();
                for &c in &coords {
                    bases.insert((c, 0));
                    bases.insert((0, c));
                }
                let mut lines = Vec::new();
                for dir in [(1, 1), (1, 2), (2, 1)] {
                    lines.extend(bases.iter().map(|&base| Line::new(base, dir)));
                }
                lines
            }
        }
    }
}

/// Barcode of the restriction of `module` to `line`, in the line parameter.
pub fn restriction_barcode(module: &GridModule, line: &Line) -> Vec<RealPoint> {
    let ts = line.crossings(module.xs(), module.ys());
    let pts: Vec<GridPoint> = ts.iter().map(|&t| line.point_at(t)).collect();
    let last = pts.len() - 1;
    let rk = |i: isize, j: usize| -> i64 {
        if i < 0 {
            0
        } else {
            module.rank_at(pts[i as usize], pts[j]) as i64
        }
    };
    let mut bars = Vec::new();
    for i in 0..=last {
        let si = i as isize;
        for j in i + 1..=last {
            let mult = rk(si, j - 1) - rk(si, j) - rk(si - 1, j - 1) + rk(si - 1, j);
            debug_assert!(mult >= 0, "negative bar multiplicity");
            for _ in 0..mult {
                bars.push((ts[i], Some(ts[j])));
            }
        }
        let essential = rk(si, last) - rk(si - 1, last);
        for _ in 0..essential {
            bars.push((ts[i], None));
        }
    }
    bars
}

/// Largest weighted bottleneck distance between restrictions over the sampled lines.
pub fn matching_distance_estimate(
    a: &GridModule,
    b: &GridModule,
    sampling: &LineSampling,
) -> Result<Distance, DistanceError> {
    if a.bound() != b.bound() {
        return Err(GridError::BoxMismatch(a.bound(), b.bound()).into());
    }
    let mut best = Distance::zero();
    for line in sampling.lines(a, b) {
        let d = bottleneck_value(
            &restriction_barcode(a, &line),
            &restriction_barcode(b, &line),
        )
        .scale(line.weight());
        best = best.max(d);
    }
    Ok(best)
}
