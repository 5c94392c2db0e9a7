//! Full pipeline on the two-triangle complex: diagrams, bottleneck matching,
//! the biparameter module, its hooks, and the search for the closest product.

use std::time::Instant;

use hookprod::distances::{bottleneck, gamma_bar_search, score_matching, Objective, SearchConfig};
use hookprod::{
    build_product, compute_diagram, default_box, evaluate_hooks, grid_module_of_pair,
    hook_decompose, hooks_of_product, iso_hook_decomposable, parse_complex, Function, PrimeField,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let start = Instant::now();
    let complex = parse_complex(include_str!("../data/two_triangles.complex"))?;
    let field = PrimeField::default();
    let pd_f = compute_diagram(&complex, Function::F, 1, field)?;
    let pd_g = compute_diagram(&complex, Function::G, 1, field)?;
    println!("PD1(f):\n{}", pd_f.to_csv());
    println!("PD1(g):\n{}", pd_g.to_csv());

    let bott = bottleneck(&pd_f, &pd_g);
    println!(
        "bottleneck = {}, matching:\n{}",
        bott.value,
        bott.matching.to_text()
    );

    let bound = default_box(&complex)?;
    let target = grid_module_of_pair(&complex, 1, field, bound)?;
    println!("hooks of M(f,g):\n{}", hook_decompose(&target)?.to_csv());

    let product = build_product(&pd_f, &pd_g, &bott.matching)?;
    let module = evaluate_hooks(&hooks_of_product(&product), bound);
    println!(
        "bottleneck product isomorphic to M(f,g): {}",
        iso_hook_decomposable(&module, &target)?
    );
    let config = SearchConfig::default();
    let score = score_matching(
        &pd_f,
        &pd_g,
        &bott.matching,
        &target,
        Objective::ExactInterleaving,
        &config,
    )?;
    println!("interleaving distance of the bottleneck product: {score}");

    let report = gamma_bar_search(&pd_f, &pd_g, &target, &config)?;
    println!("\nsearch report:\n{report}");
    println!("elapsed: {:?}", start.elapsed());
    Ok(())
}
