//! The check-out scanner: an admissible supervisor that still fails the
//! specification because `cancel` disappears after one of the scan branches.

use ccsynth::automaton::{sync_product, ProductMode};
use ccsynth::instances;
use ccsynth::relation::{holds, RelationKind};
use ccsynth::synthesis::{is_solvable, verify_solution};

fn main() -> ccsynth::Result<()> {
    let g = instances::scanner_plant();
    let r = instances::scanner_spec();
    let s = instances::scanner_supervisor();
    println!("alphabet {}", g.alphabet());

    let report = verify_solution(&s, &g, &r)?;
    println!("admissible: {}", report.admissible);
    println!("cc-simulated: {}", report.cc_simulated);
    if let Some(cx) = &report.cc_counterexample {
        println!("{cx}");
    }
    println!("solvable with cancel required: {}", is_solvable(&g, &r)?);

    let (g0, r0, s0) = instances::scanner_unrequired();
    let p = sync_product(&s0, &g0, ProductMode::Reachable)?.automaton;
    let sim = holds(&p, &r0, &RelationKind::simulation(r0.alphabet()))?;
    println!(
        "without required events, S||G is simulated by R: {}",
        sim.holds
    );
    println!(
        "solvable without required events: {}",
        is_solvable(&g0, &r0)?
    );
    Ok(())
}
