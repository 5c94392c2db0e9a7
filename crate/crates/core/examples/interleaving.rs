//! Exact interleaving distance and the matching-distance lower bound on small modules.

use hookprod::distances::{interleaving_exact, matching_distance_estimate, LineSampling};
use hookprod::{evaluate_hooks, GridModule, GridPoint, HookDecomposition, HookModule, PrimeField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bound = GridPoint::new(8, 8);
    let pt = GridPoint::new;
    let module = |hooks: Vec<HookModule>| evaluate_hooks(&HookDecomposition::new(hooks), bound);

    let pairs = [
        (
            "hook <(0,0),(1,1)> vs zero",
            module(vec![HookModule::bounded(pt(0, 0), pt(1, 1))?]),
            GridModule::zero(PrimeField::default(), bound),
        ),
        (
            "two hooks vs their swap",
            module(vec![
                HookModule::bounded(pt(0, 4), pt(1, 5))?,
                HookModule::bounded(pt(4, 0), pt(5, 1))?,
            ]),
            module(vec![
                HookModule::bounded(pt(0, 0), pt(1, 1))?,
                HookModule::bounded(pt(4, 4), pt(5, 5))?,
            ]),
        ),
        (
            "free quadrants at (0,0) and (2,1)",
            module(vec![HookModule::free(pt(0, 0))]),
            module(vec![HookModule::free(pt(2, 1))]),
        ),
    ];
    for (name, a, b) in pairs {
        let exact = interleaving_exact(&a, &b, 8)?;
        let estimate = matching_distance_estimate(&a, &b, &LineSampling::Standard)?;
        println!(
            "{name}: d_I = {}, line estimate = {estimate}",
            exact.distance()
        );
    }
    Ok(())
}
