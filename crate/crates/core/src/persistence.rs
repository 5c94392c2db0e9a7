//! One-parameter persistence: diagrams, the pruned generating set of a matching,
//! and barcode presentations of the corresponding graded `F[x]`-modules.

use std::collections::BTreeMap;
use std::fmt;
use std::io;

use thiserror::Error;

use crate::complex::{ComplexError, FilteredComplex, Function, Value};
use crate::ext::{parse_nat, ExtNat};
use crate::linalg::{reduce, FpColumn, FpMatrix, PrimeField};
use crate::product::{MatchEntry, Matching, MatchingError};

#[derive(Error, Debug)]
pub enum DiagramError {
    #[error("diagram csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("diagram row {row}: {message}")]
    Row { row: usize, message: String },
    #[error("diagram header must be `birth,death`")]
    Header,
}

/// A point `(birth, death)` with `birth <= death`; `death == birth` is a diagonal point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagramPoint {
    pub birth: Value,
    pub death: ExtNat,
}

impl DiagramPoint {
    pub fn new(birth: Value, death: ExtNat) -> Self {
        assert!(death >= birth, "death {death} precedes birth {birth}");
        DiagramPoint { birth, death }
    }

    pub fn finite(birth: Value, death: Value) -> Self {
        Self::new(birth, ExtNat::Fin(death))
    }

    pub fn essential(birth: Value) -> Self {
        DiagramPoint {
            birth,
            death: ExtNat::Inf,
        }
    }

    pub fn diagonal(t: Value) -> Self {
        DiagramPoint {
            birth: t,
            death: ExtNat::Fin(t),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.death == self.birth
    }

    pub fn is_essential(&self) -> bool {
        self.death == ExtNat::Inf
    }

    /// `death - birth`, the relation exponent of the corresponding generator.
    pub fn lifetime(&self) -> ExtNat {
        self.death.minus(self.birth)
    }
}

impl fmt::Display for DiagramPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.birth, self.death)
    }
}

/// Finite multiset of stored points. The infinitely many diagonal copies are
/// implicit and only materialize through a [`Matching`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PersistenceDiagram {
    points: Vec<DiagramPoint>,
}

impl PersistenceDiagram {
    pub fn new(points: Vec<DiagramPoint>) -> Self {
        PersistenceDiagram { points }
    }

    pub fn points(&self) -> &[DiagramPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> DiagramPoint {
        self.points[i]
    }

    /// Multiplicity of every distinct stored point.
    pub fn multiset(&self) -> BTreeMap<DiagramPoint, usize> {
        let mut out = BTreeMap::new();
        for p in &self.points {
            *out.entry(*p).or_insert(0) += 1;
        }
        out
    }

    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, DiagramPoint)> + '_ {
        self.points
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, p)| !p.is_diagonal())
    }

    /// Copy with the stored diagonal points removed.
    pub fn without_diagonal(&self) -> PersistenceDiagram {
        PersistenceDiagram::new(
            self.points
                .iter()
                .copied()
                .filter(|p| !p.is_diagonal())
                .collect(),
        )
    }

    /// Same multiset, points in canonical order.
    pub fn sorted(&self) -> PersistenceDiagram {
        let mut points = self.points.clone();
        points.sort();
        PersistenceDiagram { points }
    }

    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<(), DiagramError> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["birth", "death"])?;
        for p in &self.points {
            w.write_record([p.birth.to_string(), p.death.to_string()])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    /// Reads the `birth,death` CSV format; repeated rows encode multiplicity.
    pub fn read_csv<R: io::Read>(reader: R) -> Result<Self, DiagramError> {
        let mut r = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header = r.headers()?.clone();
        if header.len() != 2 || &header[0] != "birth" || &header[1] != "death" {
            return Err(DiagramError::Header);
        }
        let mut points = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let row = i + 1;
            let bad = |message: String| DiagramError::Row { row, message };
            let birth = parse_nat(&rec[0]).map_err(|e| bad(e.to_string()))?;
            let death: ExtNat = rec[1]
                .parse()
                .map_err(|e: crate::ext::ParseExtNatError| bad(e.to_string()))?;
            if death < birth {
                return Err(bad(format!("death {death} precedes birth {birth}")));
            }
            points.push(DiagramPoint { birth, death });
        }
        Ok(PersistenceDiagram { points })
    }

    pub fn from_csv_str(text: &str) -> Result<Self, DiagramError> {
        Self::read_csv(text.as_bytes())
    }
}

/// Simplex order used for reduction: by value, then dimension, then input position.
/// Faces always precede their cofaces.
pub fn filtration_order(
    complex: &FilteredComplex,
    function: Function,
) -> Result<Vec<usize>, ComplexError> {
    let vals = complex.values(function)?;
    let mut order: Vec<usize> = (0..complex.len()).collect();
    order.sort_by_key(|&i| (vals[i], complex.simplex(i).dimension(), i));
    Ok(order)
}

/// Signed boundary matrix of the complex with columns (and rows) in `order`.
pub fn boundary_matrix(complex: &FilteredComplex, order: &[usize], field: PrimeField) -> FpMatrix {
    let mut position = vec![usize::MAX; complex.len()];
    for (pos, &i) in order.iter().enumerate() {
        position[i] = pos;
    }
    let columns = order
        .iter()
        .map(|&i| {
            let entries = complex
                .facet_indices(i)
                .into_iter()
                .enumerate()
                .map(|(k, face)| {
                    let sign = if k % 2 == 0 { 1 } else { field.neg(1) };
                    assert!(
                        position[face] != usize::MAX,
                        "face outside the ordered simplices"
                    );
                    (position[face], sign)
                });
            FpColumn::from_entries(field, entries)
        })
        .collect();
    FpMatrix::new(field, order.len(), columns)
}

/// `PD_k` of the sublevel filtration of `function`, with coefficients in `field`.
///
/// Zero-persistence pairs are kept as diagonal points. Points come out sorted.
pub fn compute_diagram(
    complex: &FilteredComplex,
    function: Function,
    k: usize,
    field: PrimeField,
) -> Result<PersistenceDiagram, ComplexError> {
    let vals = complex.values(function)?;
    let order = filtration_order(complex, function)?;
    let red = reduce(&boundary_matrix(complex, &order, field));
    let dim = |pos: usize| complex.simplex(order[pos]).dimension();
    let val = |pos: usize| vals[order[pos]];

    let mut paired = vec![false; order.len()];
    let mut points = Vec::new();
    for (j, pivot) in red.pivots.iter().enumerate() {
        if let Some(i) = *pivot {
            paired[i] = true;
            paired[j] = true;
            if dim(i) == k {
                points.push(DiagramPoint::finite(val(i), val(j)));
            }
        }
    }
    for pos in 0..order.len() {
        if !paired[pos] && dim(pos) == k {
            // unpaired columns are all zero, hence positive
            points.push(DiagramPoint::essential(val(pos)));
        }
    }
    points.sort();
    Ok(PersistenceDiagram { points })
}

/// The elements of `S_gamma`: stored points of the first diagram, minus diagonal
/// points sent to the diagonal, plus diagonal copies matched to off-diagonal
/// points of the second diagram. One element per generator of the product.
pub fn s_gamma(
    pd_f: &PersistenceDiagram,
    pd_g: &PersistenceDiagram,
    gamma: &Matching,
) -> Result<Vec<DiagramPoint>, MatchingError> {
    gamma.validate(pd_f, pd_g)?;
    Ok(gamma
        .entries()
        .iter()
        .filter_map(|e| match *e {
            MatchEntry::Pair { f, g } => {
                let (a, b) = (pd_f.point(f), pd_g.point(g));
                (!(a.is_diagonal() && b.is_diagonal())).then_some(a)
            }
            MatchEntry::FDiag { f, .. } => {
                let a = pd_f.point(f);
                (!a.is_diagonal()).then_some(a)
            }
            MatchEntry::GDiag { t, g } => {
                (!pd_g.point(g).is_diagonal()).then_some(DiagramPoint::diagonal(t))
            }
        })
        .collect())
}

/// A generator of degree `degree` subject to `m * x^exponent = 0` (no relation when infinite).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarcodeGenerator {
    pub degree: Value,
    pub exponent: ExtNat,
}

/// Presentation of a graded `F[x]`-module with one cyclic relation per generator.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BarcodePresentation {
    pub generators: Vec<BarcodeGenerator>,
}

impl BarcodePresentation {
    pub fn is_zero_module(&self) -> bool {
        self.generators.iter().all(|g| g.exponent == 0)
    }

    /// Dimension of the graded piece of degree `t`.
    pub fn dimension_at(&self, t: Value) -> usize {
        self.generators
            .iter()
            .filter(|g| g.degree <= t && ExtNat::Fin(t - g.degree) < g.exponent)
            .count()
    }
}

pub fn presentation_from_diagram(points: &[DiagramPoint]) -> BarcodePresentation {
    BarcodePresentation {
        generators: points
            .iter()
            .map(|p| BarcodeGenerator {
                degree: p.birth,
                exponent: p.lifetime(),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::parse_complex;

    fn f2() -> PrimeField {
        PrimeField::default()
    }

    #[test]
    fn hollow_triangle_has_one_essential_cycle() {
        let c = parse_complex(
            "simplex 0 f=0\nsimplex 1 f=0\nsimplex 2 f=0\nsimplex 0 1 f=0\nsimplex 0 2 f=0\nsimplex 1 2 f=0\n",
        )
        .unwrap();
        let pd = compute_diagram(&c, Function::F, 1, f2()).unwrap();
        assert_eq!(pd.points(), &[DiagramPoint::essential(0)]);
        // H0: one essential component, two zero-length merges
        let pd0 = compute_diagram(&c, Function::F, 0, f2()).unwrap();
        assert_eq!(pd0.off_diagonal().count(), 1);
        assert_eq!(pd0.len(), 3);
    }

    #[test]
    fn empty_complex_has_empty_diagrams() {
        let c = FilteredComplex::empty();
        for k in 0..3 {
            assert!(compute_diagram(&c, Function::F, k, f2())
                .unwrap()
                .is_empty());
        }
        assert_eq!(
            compute_diagram(&c, Function::G, 0, f2()).unwrap_err(),
            ComplexError::MissingG
        );
    }

    #[test]
    fn s_gamma_identity_drops_diagonal_pairs() {
        let pd = PersistenceDiagram::new(vec![
            DiagramPoint::finite(0, 1),
            DiagramPoint::diagonal(4),
            DiagramPoint::finite(100, 101),
        ]);
        let gamma = Matching::new(vec![
            MatchEntry::Pair { f: 0, g: 0 },
            MatchEntry::Pair { f: 1, g: 1 },
            MatchEntry::Pair { f: 2, g: 2 },
        ]);
        let s = s_gamma(&pd, &pd, &gamma).unwrap();
        assert_eq!(
            s,
            vec![DiagramPoint::finite(0, 1), DiagramPoint::finite(100, 101)]
        );
    }

    #[test]
    fn s_gamma_keeps_off_diagonal_points_matched_to_diagonal() {
        let pd_f = PersistenceDiagram::new(vec![DiagramPoint::finite(0, 1)]);
        let pd_g = PersistenceDiagram::default();
        let gamma = Matching::new(vec![MatchEntry::FDiag { f: 0, t: 0 }]);
        assert_eq!(
            s_gamma(&pd_f, &pd_g, &gamma).unwrap(),
            vec![DiagramPoint::finite(0, 1)]
        );
    }

    #[test]
    fn s_gamma_keeps_diagonal_point_matched_off_diagonal() {
        let pd_f = PersistenceDiagram::new(vec![DiagramPoint::diagonal(3)]);
        let pd_g = PersistenceDiagram::new(vec![DiagramPoint::finite(2, 5)]);
        let gamma = Matching::new(vec![MatchEntry::Pair { f: 0, g: 0 }]);
        assert_eq!(
            s_gamma(&pd_f, &pd_g, &gamma).unwrap(),
            vec![DiagramPoint::diagonal(3)]
        );
        let inv = s_gamma(&pd_g, &pd_f, &gamma.inverse()).unwrap();
        assert_eq!(inv, vec![DiagramPoint::finite(2, 5)]);
    }

    #[test]
    fn s_gamma_requires_full_cover() {
        let pd =
            PersistenceDiagram::new(vec![DiagramPoint::finite(0, 1), DiagramPoint::finite(2, 3)]);
        let gamma = Matching::new(vec![MatchEntry::Pair { f: 0, g: 0 }]);
        assert!(matches!(
            s_gamma(&pd, &pd, &gamma),
            Err(MatchingError::Uncovered { .. })
        ));
    }

    #[test]
    fn presentations() {
        let p = presentation_from_diagram(&[
            DiagramPoint::finite(0, 1),
            DiagramPoint::finite(100, 101),
        ]);
        assert_eq!(
            p.generators,
            vec![
                BarcodeGenerator {
                    degree: 0,
                    exponent: ExtNat::Fin(1)
                },
                BarcodeGenerator {
                    degree: 100,
                    exponent: ExtNat::Fin(1)
                },
            ]
        );
        let p = presentation_from_diagram(&[DiagramPoint::essential(3)]);
        assert_eq!(
            p.generators,
            vec![BarcodeGenerator {
                degree: 3,
                exponent: ExtNat::Inf
            }]
        );
        assert_eq!(p.dimension_at(2), 0);
        assert_eq!(p.dimension_at(1000), 1);
        assert!(presentation_from_diagram(&[]).generators.is_empty());
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let pd = PersistenceDiagram::new(vec![
            DiagramPoint::finite(0, 1),
            DiagramPoint::finite(0, 1),
            DiagramPoint::essential(7),
        ]);
        let text = pd.to_csv();
        assert_eq!(text, "birth,death\n0,1\n0,1\n7,inf\n");
        assert_eq!(PersistenceDiagram::from_csv_str(&text).unwrap(), pd);
        assert!(matches!(
            PersistenceDiagram::from_csv_str("birth,death\n5,3\n"),
            Err(DiagramError::Row { row: 1, .. })
        ));
        assert!(matches!(
            PersistenceDiagram::from_csv_str("b,d\n1,2\n"),
            Err(DiagramError::Header)
        ));
        assert!(matches!(
            PersistenceDiagram::from_csv_str("birth,death\ninf,inf\n"),
            Err(DiagramError::Row { .. })
        ));
    }
}
