//! Gamma-products of two one-parameter persistence modules.
//!
//! A [`Matching`] pairs the stored points of two diagrams, possibly sending a
//! point to an explicit diagonal copy `(t, t)` of the other diagram. Each
//! matched pair `((b, d), (b', d'))` that is not diagonal-to-diagonal yields a
//! generator of bidegree `(b, b')` annihilated by `x^(d-b) y^(d'-b')`, under
//! the action `(m, m') * s(x, y) = (m * s(x, 1), m' * s(1, y))`. The graded
//! piece at `(b + i, b' + j)` is nonzero iff `i < d - b` or `j < d' - b'`, so
//! every generator spans a hook summand.
//!
//! The construction is not bilinear in its two arguments and depends on the
//! matching: different matchings of the same diagrams can give non-isomorphic
//! products.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use log::warn;
use thiserror::Error;

use crate::complex::Value;
use crate::ext::{parse_nat, ExtNat};
use crate::grid::{GridPoint, HookDecomposition, HookModule};
use crate::persistence::{DiagramPoint, PersistenceDiagram};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("{side} point {index} does not exist")]
    IndexOutOfRange { side: Side, index: usize },
    #[error("{side} point {index} is matched more than once")]
    UsedTwice { side: Side, index: usize },
    #[error("{side} point {index} is not matched")]
    Uncovered { side: Side, index: usize },
    #[error("matching line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ProductError {
    #[error("invalid matching: {0}")]
    InvalidMatching(#[from] MatchingError),
    #[error("unsupported hook {0}: exactly one infinite death coordinate")]
    UnsupportedHook(HookModule),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    F,
    G,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::F => write!(f, "f"),
            Side::G => write!(f, "g"),
        }
    }
}

/// One entry of a matching. Indices refer to stored diagram points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatchEntry {
    /// Stored point `f` of the first diagram to stored point `g` of the second.
    Pair { f: usize, g: usize },
    /// Stored point `f` to the diagonal copy `(t, t)` of the second diagram.
    FDiag { f: usize, t: Value },
    /// The diagonal copy `(t, t)` of the first diagram to stored point `g`.
    GDiag { t: Value, g: usize },
}

/// A finitely supported bijection between two augmented diagrams. Diagonal
/// copies not mentioned are matched diagonal-to-diagonal.
///
/// Entries are kept sorted, which makes the derived ordering the
/// lexicographic order on encodings.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    entries: Vec<MatchEntry>,
}

impl Matching {
    pub fn new(mut entries: Vec<MatchEntry>) -> Self {
        entries.sort();
        Matching { entries }
    }

    pub fn entries(&self) -> &[MatchEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Pairs stored point `i` with stored point `i`. Both diagrams must have the same length.
    pub fn identity(n: usize) -> Self {
        Matching::new((0..n).map(|i| MatchEntry::Pair { f: i, g: i }).collect())
    }

    /// The inverse bijection, with the roles of the two diagrams exchanged.
    pub fn inverse(&self) -> Matching {
        Matching::new(
            self.entries
                .iter()
                .map(|e| match *e {
                    MatchEntry::Pair { f, g } => MatchEntry::Pair { f: g, g: f },
                    MatchEntry::FDiag { f, t } => MatchEntry::GDiag { t, g: f },
                    MatchEntry::GDiag { t, g } => MatchEntry::FDiag { f: g, t },
                })
                .collect(),
        )
    }

    /// Every stored point of both diagrams is used exactly once.
    pub fn validate(
        &self,
        pd_f: &PersistenceDiagram,
        pd_g: &PersistenceDiagram,
    ) -> Result<(), MatchingError> {
        let mut used_f = vec![false; pd_f.len()];
        let mut used_g = vec![false; pd_g.len()];
        let mut mark = |side: Side, index: usize| -> Result<(), MatchingError> {
            let used = match side {
                Side::F => &mut used_f,
                Side::G => &mut used_g,
            };
            let slot = used
                .get_mut(index)
                .ok_or(MatchingError::IndexOutOfRange { side, index })?;
            if *slot {
                return Err(MatchingError::UsedTwice { side, index });
            }
            *slot = true;
            Ok(())
        };
        for e in &self.entries {
            match *e {
                MatchEntry::Pair { f, g } => {
                    mark(Side::F, f)?;
                    mark(Side::G, g)?;
                }
                MatchEntry::FDiag { f, .. } => mark(Side::F, f)?,
                MatchEntry::GDiag { g, .. } => mark(Side::G, g)?,
            }
        }
        if let Some(index) = used_f.iter().position(|u| !u) {
            return Err(MatchingError::Uncovered {
                side: Side::F,
                index,
            });
        }
        if let Some(index) = used_g.iter().position(|u| !u) {
            return Err(MatchingError::Uncovered {
                side: Side::G,
                index,
            });
        }
        Ok(())
    }

    /// The matched pairs of points, diagonal copies made explicit.
    pub fn matched_points(
        &self,
        pd_f: &PersistenceDiagram,
        pd_g: &PersistenceDiagram,
    ) -> Result<Vec<(DiagramPoint, DiagramPoint)>, MatchingError> {
        self.validate(pd_f, pd_g)?;
        Ok(self
            .entries
            .iter()
            .map(|e| match *e {
                MatchEntry::Pair { f, g } => (pd_f.point(f), pd_g.point(g)),
                MatchEntry::FDiag { f, t } => (pd_f.point(f), DiagramPoint::diagonal(t)),
                MatchEntry::GDiag { t, g } => (DiagramPoint::diagonal(t), pd_g.point(g)),
            })
            .collect())
    }

    /// Line-oriented encoding: `match i j`, `fdiag i t`, `gdiag t j`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            match *e {
                MatchEntry::Pair { f, g } => writeln!(out, "match {f} {g}"),
                MatchEntry::FDiag { f, t } => writeln!(out, "fdiag {f} {t}"),
                MatchEntry::GDiag { t, g } => writeln!(out, "gdiag {t} {g}"),
            }
            .unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Matching, MatchingError> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let syntax = |message: String| MatchingError::Syntax { line, message };
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            if tokens.len() != 3 {
                return Err(syntax(format!("expected 3 fields, found {}", tokens.len())));
            }
            let a = parse_nat(tokens[1]).map_err(|e| syntax(e.to_string()))?;
            let b = parse_nat(tokens[2]).map_err(|e| syntax(e.to_string()))?;
            let entry = match tokens[0] {
                "match" => MatchEntry::Pair {
                    f: a as usize,
                    g: b as usize,
                },
                "fdiag" => MatchEntry::FDiag {
                    f: a as usize,
                    t: b,
                },
                "gdiag" => MatchEntry::GDiag {
                    t: a,
                    g: b as usize,
                },
                other => return Err(syntax(format!("unknown entry kind `{other}`"))),
            };
            entries.push(entry);
        }
        Ok(Matching::new(entries))
    }
}

/// Generator of bidegree `(b, b')` with relation `x^a y^c = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductGenerator {
    pub b: Value,
    pub b_prime: Value,
    pub a: ExtNat,
    pub c: ExtNat,
    /// The matched pair of diagram points this generator comes from.
    pub source: (DiagramPoint, DiagramPoint),
}

impl ProductGenerator {
    pub fn bidegree(&self) -> GridPoint {
        GridPoint::new(self.b, self.b_prime)
    }

    /// Whether the graded piece at `r` contains a nonzero multiple of this generator.
    pub fn alive_at(&self, r: GridPoint) -> bool {
        r.x >= self.b
            && r.y >= self.b_prime
            && (self.a > r.x - self.b || self.c > r.y - self.b_prime)
    }
}

/// Finite presentation of a gamma-product: one generator and at most one relation per matched pair.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GammaProduct {
    generators: Vec<ProductGenerator>,
}

impl GammaProduct {
    pub fn generators(&self) -> &[ProductGenerator] {
        &self.generators
    }

    /// Dimension of the graded piece at `r`, read directly from the presentation.
    pub fn dimension_at(&self, r: GridPoint) -> usize {
        self.generators.iter().filter(|g| g.alive_at(r)).count()
    }
}

pub fn build_product(
    pd_f: &PersistenceDiagram,
    pd_g: &PersistenceDiagram,
    gamma: &Matching,
) -> Result<GammaProduct, ProductError> {
    let mut generators = Vec::new();
    for (pf, pg) in gamma.matched_points(pd_f, pd_g)? {
        if pf.is_diagonal() && pg.is_diagonal() {
            // both sides removed from S_gamma
            continue;
        }
        generators.push(ProductGenerator {
            b: pf.birth,
            b_prime: pg.birth,
            a: pf.lifetime(),
            c: pg.lifetime(),
            source: (pf, pg),
        });
    }
    Ok(GammaProduct { generators })
}

/// One hook per generator: `<(b,b'),(b+a,b'+c)>`, or the free quadrant when an exponent is infinite.
pub fn hooks_of_product(prod: &GammaProduct) -> HookDecomposition {
    let mut hooks = Vec::with_capacity(prod.generators.len());
    for g in &prod.generators {
        let p = g.bidegree();
        match (g.a, g.c) {
            (ExtNat::Fin(0), ExtNat::Fin(0)) => {
                warn!("dropping zero generator at {p}");
            }
            (ExtNat::Fin(a), ExtNat::Fin(c)) => {
                hooks.push(
                    HookModule::bounded(p, GridPoint::new(p.x + a, p.y + c))
                        .expect("q >= p, q != p"),
                );
            }
            _ => hooks.push(HookModule::free(p)),
        }
    }
    HookDecomposition::new(hooks)
}

/// Reads off diagrams and a matching whose product has exactly the given hooks.
///
/// Hook `<(p1,p2),(q1,q2)>` becomes the f-point `(p1,q1)` matched with the
/// g-point `(p2,q2)`; the free quadrant `<p,∞>` becomes `(p1,∞)` matched with `(p2,∞)`.
pub fn reconstruct_from_hooks(
    decomp: &HookDecomposition,
) -> Result<(PersistenceDiagram, PersistenceDiagram, Matching), ProductError> {
    let mut pf = Vec::with_capacity(decomp.len());
    let mut pg = Vec::with_capacity(decomp.len());
    for h in decomp.hooks() {
        if h.is_mixed() {
            return Err(ProductError::UnsupportedHook(*h));
        }
        let (q1, q2) = h.q();
        pf.push(DiagramPoint::new(h.p().x, q1));
        pg.push(DiagramPoint::new(h.p().y, q2));
    }
    let n = pf.len();
    Ok((
        PersistenceDiagram::new(pf),
        PersistenceDiagram::new(pg),
        Matching::identity(n),
    ))
}

/// All distinct bidegrees and finite relation corners; the critical coordinates of the product.
pub fn product_coordinates(prod: &GammaProduct) -> (BTreeSet<u64>, BTreeSet<u64>) {
    let mut xs = BTreeSet::new();
    let mut ys = BTreeSet::new();
    for g in &prod.generators {
        xs.insert(g.b);
        ys.insert(g.b_prime);
        if let ExtNat::Fin(a) = g.a {
            xs.insert(g.b + a);
        }
        if let ExtNat::Fin(c) = g.c {
            ys.insert(g.b_prime + c);
        }
    }
    (xs, ys)
}
