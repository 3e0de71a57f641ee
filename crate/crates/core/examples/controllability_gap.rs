//! A plant related to its specification by a ucr-simulation for which no
//! supervisor exists: after `l` the plant may land in a state without `l1`,
//! and the supervisor cannot tell which.

use ccsynth::instances;
use ccsynth::relation::{greatest_relation, holds, RelationKind};
use ccsynth::synthesis::{deterministic_fastpath, greatest_family, is_solvable};

fn main() -> ccsynth::Result<()> {
    let (g, r) = instances::gap();
    let kind = RelationKind::ucr_simulation(g.alphabet());
    println!("ucr-simulation holds: {}", holds(&g, &r, &kind)?.holds);
    println!(
        "greatest relation: {:?}",
        greatest_relation(&g, &r, &kind)?.to_names(&g, &r)
    );
    println!(
        "greatest family: {:?}",
        greatest_family(&g, &r)?.describe(&g, &r)
    );
    println!("solvable: {}", is_solvable(&g, &r)?);
    println!(
        "deterministic shortcut applies: {}",
        deterministic_fastpath(&g, &r)?.is_some()
    );
    Ok(())
}
