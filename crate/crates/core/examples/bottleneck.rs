//! Bottleneck distance between diagrams, with the optimal matching.

use hookprod::distances::bottleneck;
use hookprod::{DiagramPoint, PersistenceDiagram};

fn show(pd: &PersistenceDiagram) -> String {
    let pts: Vec<String> = pd
        .points()
        .iter()
        .map(|p| format!("({},{})", p.birth, p.death))
        .collect();
    format!("{{{}}}", pts.join(", "))
}

fn main() {
    let cases = [
        (
            vec![DiagramPoint::finite(0, 1), DiagramPoint::finite(100, 101)],
            vec![DiagramPoint::finite(0, 1), DiagramPoint::finite(100, 101)],
        ),
        (vec![DiagramPoint::finite(0, 1)], vec![]),
        (
            vec![DiagramPoint::finite(0, 10)],
            vec![DiagramPoint::finite(1, 10)],
        ),
        (
            vec![DiagramPoint::essential(2), DiagramPoint::finite(3, 9)],
            vec![DiagramPoint::essential(5)],
        ),
    ];
    for (a, b) in cases {
        let (a, b) = (PersistenceDiagram::new(a), PersistenceDiagram::new(b));
        let res = bottleneck(&a, &b);
        println!("{} vs {}", show(&a), show(&b));
        println!(
            "  value {}\n  matching: {}",
            res.value,
            res.matching.to_text().trim().replace('\n', "; ")
        );
    }
}
