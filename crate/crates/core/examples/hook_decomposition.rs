//! Compute biparameter modules from complexes and decompose them into hooks.

use hookprod::{default_box, grid_module_of_pair, hook_decompose, parse_complex, PrimeField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, text, degree) in [
        (
            "two triangles, H1",
            include_str!("../data/two_triangles.complex"),
            1,
        ),
        (
            "one cycle with f = g, H1",
            include_str!("../data/one_cycle.complex"),
            1,
        ),
        (
            "two merging components, H0",
            include_str!("../data/merge.complex"),
            0,
        ),
    ] {
        let complex = parse_complex(text)?;
        let bound = default_box(&complex)?;
        let module = grid_module_of_pair(&complex, degree, PrimeField::default(), bound)?;
        println!(
            "{name} (box {bound}, total dimension {}):",
            module.total_dimension()
        );
        match hook_decompose(&module) {
            Ok(decomp) => {
                for hook in decomp.hooks() {
                    println!("  {hook}");
                }
            }
            Err(e) => println!("  {e}"),
        }
    }
    Ok(())
}
