//! Build gamma-products from two diagrams and turn hooks back into diagrams.

use hookprod::{
    build_product, hooks_of_product, reconstruct_from_hooks, DiagramPoint, GridPoint,
    HookDecomposition, HookModule, MatchEntry, Matching, PersistenceDiagram,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pd_f = PersistenceDiagram::new(vec![
        DiagramPoint::finite(0, 1),
        DiagramPoint::finite(100, 101),
    ]);
    let pd_g = pd_f.clone();

    for (name, gamma) in [
        ("identity", Matching::identity(2)),
        (
            "swap",
            Matching::new(vec![
                MatchEntry::Pair { f: 0, g: 1 },
                MatchEntry::Pair { f: 1, g: 0 },
            ]),
        ),
        (
            "one point sent to the diagonal",
            Matching::new(vec![
                MatchEntry::Pair { f: 0, g: 0 },
                MatchEntry::FDiag { f: 1, t: 50 },
                MatchEntry::GDiag { t: 50, g: 1 },
            ]),
        ),
    ] {
        let product = build_product(&pd_f, &pd_g, &gamma)?;
        println!("{name}:");
        for hook in hooks_of_product(&product).hooks() {
            println!("  {hook}");
        }
    }

    let hooks = HookDecomposition::new(vec![
        HookModule::bounded(GridPoint::new(0, 3), GridPoint::new(2, 5))?,
        HookModule::free(GridPoint::new(1, 1)),
    ]);
    let (rf, rg, gamma) = reconstruct_from_hooks(&hooks)?;
    println!("\nreconstructed f diagram:\n{}", rf.to_csv());
    println!("reconstructed g diagram:\n{}", rg.to_csv());
    println!("matching:\n{}", gamma.to_text());
    let again = hooks_of_product(&build_product(&rf, &rg, &gamma)?);
    println!("round trip reproduces the hooks: {}", again == hooks);
    Ok(())
}
