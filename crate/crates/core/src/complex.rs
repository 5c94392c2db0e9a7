//! Simplicial complexes carrying one or two simplex-wise filtration functions.
//!
//! The text format is line oriented:
//!
//! ```text
//! # comment
//! simplex 0 1  f=0 g=100
//! ```
//!
//! Vertices may be listed in any order and are sorted on parse. Either every
//! data line carries `g=` or none does.

use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

pub type Vertex = u64;
pub type Value = u64;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("simplex {simplex} is missing its face {face}")]
    Closure { simplex: Simplex, face: Simplex },
    #[error("{function} value of face {face} ({face_value}) exceeds that of coface {coface} ({coface_value})")]
    Monotonicity {
        function: Function,
        face: Simplex,
        face_value: Value,
        coface: Simplex,
        coface_value: Value,
    },
    #[error("simplex {0} is listed twice")]
    Duplicate(Simplex),
    #[error("the complex carries no g values")]
    MissingG,
    #[error("either all or none of the simplices must carry g values")]
    PartialG,
    #[error("value list length {got} does not match {expected} simplices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),
}

/// One of the two filtration functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Function {
    F,
    G,
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Function::F => write!(f, "f"),
            Function::G => write!(f, "g"),
        }
    }
}

/// Sorted list of distinct vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    /// Canonicalizes the vertex list; duplicates and the empty simplex are rejected.
    pub fn new(mut vertices: Vec<Vertex>) -> Result<Self, ComplexError> {
        if vertices.is_empty() {
            return Err(ComplexError::InvalidSimplex("no vertices".into()));
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(ComplexError::InvalidSimplex(format!(
                "repeated vertex in {vertices:?}"
            )));
        }
        Ok(Simplex(vertices))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-one faces; the `i`-th face omits the `i`-th vertex.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n).map(move |i| {
            let mut v = self.0.clone();
            v.remove(i);
            Simplex(v)
        })
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Sublevel threshold for one function or for the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threshold {
    F(Value),
    G(Value),
    Pair(Value, Value),
}

/// A closed simplicial complex with monotone simplex-wise values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredComplex {
    simplices: Vec<Simplex>,
    fvals: Vec<Value>,
    gvals: Option<Vec<Value>>,
    index: HashMap<Simplex, usize>,
}

impl FilteredComplex {
    /// Validates closure and monotonicity. Simplices keep their given order.
    pub fn new(
        simplices: Vec<Simplex>,
        fvals: Vec<Value>,
        gvals: Option<Vec<Value>>,
    ) -> Result<Self, ComplexError> {
        if fvals.len() != simplices.len() {
            return Err(ComplexError::LengthMismatch {
                expected: simplices.len(),
                got: fvals.len(),
            });
        }
        if let Some(g) = &gvals {
            if g.len() != simplices.len() {
                return Err(ComplexError::LengthMismatch {
                    expected: simplices.len(),
                    got: g.len(),
                });
            }
        }
        let mut index = HashMap::with_capacity(simplices.len());
        for (i, s) in simplices.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(ComplexError::Duplicate(s.clone()));
            }
        }
        for (i, s) in simplices.iter().enumerate() {
            for face in s.facets() {
                let Some(&j) = index.get(&face) else {
                    return Err(ComplexError::Closure {
                        simplex: s.clone(),
                        face,
                    });
                };
                let check = |function: Function, vals: &[Value]| {
                    if vals[j] > vals[i] {
                        Err(ComplexError::Monotonicity {
                            function,
                            face: face.clone(),
                            face_value: vals[j],
                            coface: s.clone(),
                            coface_value: vals[i],
                        })
                    } else {
                        Ok(())
                    }
                };
                check(Function::F, &fvals)?;
                if let Some(g) = &gvals {
                    check(Function::G, g)?;
                }
            }
        }
        Ok(FilteredComplex {
            simplices,
            fvals,
            gvals,
            index,
        })
    }

    pub fn empty() -> Self {
        FilteredComplex {
            simplices: vec![],
            fvals: vec![],
            gvals: None,
            index: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn simplex(&self, i: usize) -> &Simplex {
        &self.simplices[i]
    }

    pub fn has_g(&self) -> bool {
        self.gvals.is_some()
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn values(&self, function: Function) -> Result<&[Value], ComplexError> {
        match function {
            Function::F => Ok(&self.fvals),
            Function::G => self.gvals.as_deref().ok_or(ComplexError::MissingG),
        }
    }

    pub fn value(&self, function: Function, i: usize) -> Result<Value, ComplexError> {
        Ok(self.values(function)?[i])
    }

    /// Largest value of `function`, or `None` for an empty complex.
    pub fn max_value(&self, function: Function) -> Result<Option<Value>, ComplexError> {
        Ok(self.values(function)?.iter().copied().max())
    }

    /// Indices of the facets of simplex `i`, in the order of [`Simplex::facets`].
    pub fn facet_indices(&self, i: usize) -> Vec<usize> {
        self.simplices[i].facets().map(|f| self.index[&f]).collect()
    }

    /// Whether simplex `i` belongs to the sublevel set at `threshold`.
    pub fn contains_at(&self, i: usize, threshold: Threshold) -> Result<bool, ComplexError> {
        Ok(match threshold {
            Threshold::F(t) => self.fvals[i] <= t,
            Threshold::G(t) => self.values(Function::G)?[i] <= t,
            Threshold::Pair(a, b) => self.fvals[i] <= a && self.values(Function::G)?[i] <= b,
        })
    }

    /// The subcomplex of simplices whose values lie below `threshold` coordinate-wise.
    pub fn sublevel(&self, threshold: Threshold) -> Result<FilteredComplex, ComplexError> {
        if matches!(threshold, Threshold::G(_) | Threshold::Pair(..)) && self.gvals.is_none() {
            return Err(ComplexError::MissingG);
        }
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| self.contains_at(i, threshold).expect("g presence checked"))
            .collect();
        let simplices: Vec<Simplex> = keep.iter().map(|&i| self.simplices[i].clone()).collect();
        let index = simplices
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        Ok(FilteredComplex {
            simplices,
            fvals: keep.iter().map(|&i| self.fvals[i]).collect(),
            gvals: self
                .gvals
                .as_ref()
                .map(|g| keep.iter().map(|&i| g[i]).collect()),
            index,
        })
    }

    /// Whether every simplex of `self` is a simplex of `other`.
    pub fn is_subcomplex_of(&self, other: &FilteredComplex) -> bool {
        self.simplices.iter().all(|s| other.index.contains_key(s))
    }

    /// Renders the complex in the line-oriented text format.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.simplices.iter().enumerate() {
            out.push_str("simplex");
            for v in s.vertices() {
                write!(out, " {v}").unwrap();
            }
            write!(out, "  f={}", self.fvals[i]).unwrap();
            if let Some(g) = &self.gvals {
                write!(out, " g={}", g[i]).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Parses the line-oriented complex format.
pub fn parse_complex(text: &str) -> Result<FilteredComplex, ComplexError> {
    let mut simplices = Vec::new();
    let mut fvals = Vec::new();
    let mut gvals = Vec::new();
    let mut g_lines = 0usize;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let syntax = |message: String| ComplexError::Syntax { line, message };
        let mut tokens = trimmed.split_whitespace();
        match tokens.next() {
            Some("simplex") => {}
            Some(other) => return Err(syntax(format!("expected `simplex`, found `{other}`"))),
            None => unreachable!(),
        }
        let mut vertices = Vec::new();
        let mut f = None;
        let mut g = None;
        for tok in tokens {
            if let Some(v) = tok.strip_prefix("f=") {
                if f.is_some() {
                    return Err(syntax("repeated f=".into()));
                }
                f = Some(parse_nat(v).map_err(|m| syntax(format!("f value: {m}")))?);
            } else if let Some(v) = tok.strip_prefix("g=") {
                if g.is_some() {
                    return Err(syntax("repeated g=".into()));
                }
                g = Some(parse_nat(v).map_err(|m| syntax(format!("g value: {m}")))?);
            } else if f.is_some() || g.is_some() {
                return Err(syntax(format!("vertex `{tok}` after values")));
            } else {
                vertices.push(parse_nat(tok).map_err(|m| syntax(format!("vertex: {m}")))?);
            }
        }
        let f = f.ok_or_else(|| syntax("missing f=".into()))?;
        if vertices.is_empty() {
            return Err(syntax("no vertices".into()));
        }
        let simplex = Simplex::new(vertices).map_err(|e| syntax(e.to_string()))?;
        simplices.push(simplex);
        fvals.push(f);
        if let Some(g) = g {
            g_lines += 1;
            gvals.push(g);
        } else {
            gvals.push(0);
        }
    }

    let gvals = if g_lines == 0 {
        None
    } else if g_lines == simplices.len() {
        Some(gvals)
    } else {
        return Err(ComplexError::PartialG);
    };
    FilteredComplex::new(simplices, fvals, gvals)
}

fn parse_nat(tok: &str) -> Result<u64, String> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("`{tok}` is not a natural number"));
    }
    tok.parse::<u64>().map_err(|e| format!("`{tok}`: {e}"))
}
