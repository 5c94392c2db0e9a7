//! Search for the matching whose product best approximates the biparameter module,
//! once with each objective.

use hookprod::distances::{gamma_bar_search, ObjectiveChoice, SearchConfig};
use hookprod::{
    compute_diagram, default_box, grid_module_of_pair, parse_complex, Function, PrimeField,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let complex = parse_complex(include_str!("../data/two_triangles.complex"))?;
    let field = PrimeField::default();
    let pd_f = compute_diagram(&complex, Function::F, 1, field)?;
    let pd_g = compute_diagram(&complex, Function::G, 1, field)?;
    let target = grid_module_of_pair(&complex, 1, field, default_box(&complex)?)?;
    for objective in [ObjectiveChoice::Exact, ObjectiveChoice::Matching] {
        let config = SearchConfig {
            objective,
            ..SearchConfig::default()
        };
        let report = gamma_bar_search(&pd_f, &pd_g, &target, &config)?;
        println!("{report}");
    }
    Ok(())
}
