use num_traits::Signed;
use petgraph::algo::maximum_matching;
use petgraph::graph::{NodeIndex, UnGraph};

use super::{Distance, Rational};
use crate::ext::ExtNat;
use crate::persistence::{DiagramPoint, PersistenceDiagram};
use crate::product::{MatchEntry, Matching};

/// A diagram point with rational coordinates; `None` death is infinite.
pub type RealPoint = (Rational, Option<Rational>);

/// Optimal bottleneck value together with a witnessing matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bottleneck {
    pub value: Distance,
    pub matching: Matching,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Node {
    A(usize),
    B(usize),
    /// Diagonal copy facing `A(i)`.
    DiagA(usize),
    /// Diagonal copy facing `B(j)`.
    DiagB(usize),
}

fn linf(a: RealPoint, b: RealPoint) -> Option<Rational> {
    let db = (a.0 - b.0).abs();
    match (a.1, b.1) {
        (Some(x), Some(y)) => Some(db.max((x - y).abs())),
        (None, None) => Some(db),
        _ => None,
    }
}

fn to_diagonal(a: RealPoint) -> Option<Rational> {
    a.1.map(|d| (d - a.0) / Rational::from_integer(2))
}

/// Bottleneck matching between two finite rational diagrams.
///
/// Binary search over the candidate costs, checking for a perfect matching in
/// the threshold graph on `A ∪ diag(B)` vs `B ∪ diag(A)`. When essential
/// classes cannot be matched the value is infinite and the returned pairing
/// still covers every point.
fn optimal(a: &[RealPoint], b: &[RealPoint]) -> (Distance, Vec<(Node, Node)>) {
    let (n, m) = (a.len(), b.len());
    let mut edges: Vec<(Node, Node, Option<Rational>)> = Vec::new();
    for i in 0..n {
        for j in 0..m {
            edges.push((Node::A(i), Node::B(j), linf(a[i], b[j])));
        }
        edges.push((Node::A(i), Node::DiagA(i), to_diagonal(a[i])));
    }
    for j in 0..m {
        edges.push((Node::DiagB(j), Node::B(j), to_diagonal(b[j])));
        for i in 0..n {
            edges.push((
                Node::DiagB(j),
                Node::DiagA(i),
                Some(Rational::from_integer(0)),
            ));
        }
    }

    let mut candidates: Vec<Rational> = edges.iter().filter_map(|e| e.2).collect();
    candidates.sort();
    candidates.dedup();

    let index = |node: Node| -> usize {
        match node {
            Node::A(i) => i,
            Node::DiagB(j) => n + j,
            Node::B(j) => n + m + j,
            Node::DiagA(i) => n + m + m + i,
        }
    };
    let solve = |threshold: Option<Rational>| -> Option<Vec<(Node, Node)>> {
        let mut graph = UnGraph::<Node, ()>::with_capacity(2 * (n + m), edges.len());
        let mut nodes: Vec<Node> = (0..n).map(Node::A).collect();
        nodes.extend((0..m).map(Node::DiagB));
        nodes.extend((0..m).map(Node::B));
        nodes.extend((0..n).map(Node::DiagA));
        for node in &nodes {
            graph.add_node(*node);
        }
        for &(u, v, cost) in &edges {
            let allowed = match (threshold, cost) {
                (None, _) => true,
                (Some(t), Some(c)) => c <= t,
                (Some(_), None) => false,
            };
            if allowed {
                graph.add_edge(NodeIndex::new(index(u)), NodeIndex::new(index(v)), ());
            }
        }
        let matching = maximum_matching(&graph);
        if !matching.is_perfect() {
            return None;
        }
        let mut pairs: Vec<(Node, Node)> = (0..n + m)
            .map(|k| {
                let mate = matching.mate(NodeIndex::new(k)).expect("perfect");
                (graph[NodeIndex::new(k)], graph[mate])
            })
            .collect();
        pairs.sort_by_key(|&(u, v)| (index(u), index(v)));
        Some(pairs)
    };

    if n + m == 0 {
        return (Distance::zero(), vec![]);
    }
    let (mut lo, mut hi) = (0usize, candidates.len());
    // smallest index whose threshold admits a perfect matching; `len` stands for "no finite threshold"
    while lo < hi {
        let mid = (lo + hi) / 2;
        if solve(Some(candidates[mid])).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    if lo < candidates.len() {
        let pairs = solve(Some(candidates[lo])).expect("feasible threshold");
        (Distance::Finite(candidates[lo]), pairs)
    } else {
        (
            Distance::Infinite,
            solve(None).expect("complete graph has a perfect matching"),
        )
    }
}

fn real(p: DiagramPoint) -> RealPoint {
    (
        Rational::from_integer(p.birth as i64),
        p.death.finite().map(|d| Rational::from_integer(d as i64)),
    )
}

/// Diagonal copy used when a point is matched to the diagonal: `floor((b + d) / 2)`,
/// or the birth for essential points.
pub fn diagonal_projection(p: DiagramPoint) -> u64 {
    match p.death {
        ExtNat::Fin(d) => (p.birth + d) / 2,
        ExtNat::Inf => p.birth,
    }
}

/// Bottleneck distance between two diagrams and an optimal matching.
pub fn bottleneck(pd_a: &PersistenceDiagram, pd_b: &PersistenceDiagram) -> Bottleneck {
    let a: Vec<RealPoint> = pd_a.points().iter().copied().map(real).collect();
    let b: Vec<RealPoint> = pd_b.points().iter().copied().map(real).collect();
    let (value, pairs) = optimal(&a, &b);
    let entries = pairs
        .into_iter()
        .filter_map(|(u, v)| match (u, v) {
            (Node::A(i), Node::B(j)) => Some(MatchEntry::Pair { f: i, g: j }),
            (Node::A(i), Node::DiagA(_)) => Some(MatchEntry::FDiag {
                f: i,
                t: diagonal_projection(pd_a.point(i)),
            }),
            (Node::DiagB(j), Node::B(_)) => Some(MatchEntry::GDiag {
                t: diagonal_projection(pd_b.point(j)),
                g: j,
            }),
            _ => None,
        })
        .collect();
    Bottleneck {
        value,
        matching: Matching::new(entries),
    }
}

/// Bottleneck value between rational diagrams.
pub fn bottleneck_value(a: &[RealPoint], b: &[RealPoint]) -> Distance {
    optimal(a, b).0
}
