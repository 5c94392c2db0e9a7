//! Parse a bifiltered complex and print the persistence diagrams of both functions.
//!
//! Usage: `cargo run --example diagrams [-- path/to/file.complex [degree]]`

use hookprod::{compute_diagram, parse_complex, Function, PrimeField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let text = match args.next() {
        Some(path) => std::fs::read_to_string(path)?,
        None => include_str!("../data/two_triangles.complex").to_string(),
    };
    let degree: usize = args.next().map(|d| d.parse()).transpose()?.unwrap_or(1);
    let complex = parse_complex(&text)?;
    println!("{} simplices", complex.len());
    for function in [Function::F, Function::G] {
        let pd = compute_diagram(&complex, function, degree, PrimeField::default())?;
        println!("\nPD{degree}({function}), zero-length pairs omitted:");
        print!("{}", pd.without_diagonal().to_csv());
    }
    Ok(())
}
