//! Write the supports of the identity and swap products over the module's hooks as SVG files.
//!
//! Usage: `cargo run --example svg [-- output-dir]`

use std::path::PathBuf;

use hookprod::svg::render_supports;
use hookprod::{
    build_product, compute_diagram, default_box, grid_module_of_pair, hook_decompose,
    hooks_of_product, parse_complex, Function, MatchEntry, Matching, PrimeField,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let complex = parse_complex(include_str!("../data/two_triangles.complex"))?;
    let field = PrimeField::default();
    let pd_f = compute_diagram(&complex, Function::F, 1, field)?;
    let pd_g = compute_diagram(&complex, Function::G, 1, field)?;
    let bound = default_box(&complex)?;
    let target = hook_decompose(&grid_module_of_pair(&complex, 1, field, bound)?)?;

    let identity = Matching::identity(2);
    let swap = Matching::new(vec![
        MatchEntry::Pair { f: 0, g: 1 },
        MatchEntry::Pair { f: 1, g: 0 },
    ]);
    for (name, gamma) in [("identity", identity), ("swap", swap)] {
        let hooks = hooks_of_product(&build_product(&pd_f, &pd_g, &gamma)?);
        let path = dir.join(format!("supports_{name}.svg"));
        std::fs::write(&path, render_supports(&target, Some(&hooks), bound))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
