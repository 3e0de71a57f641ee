//! Builds a supervisor by hand from a four-member pair set family and shows
//! the supervised plant.

use ccsynth::automaton::{sync_product, ProductMode};
use ccsynth::instances;
use ccsynth::synthesis::{
    build_supervisor, is_controllability_family, verify_solution, PairSetFamily,
};

fn main() -> ccsynth::Result<()> {
    let (g, r) = instances::branching();
    let e = PairSetFamily::from_names(
        &g,
        &r,
        &[
            &[("x0", "z0")],
            &[("x1", "z1")],
            &[("x2", "z2"), ("x3", "z3")],
            &[("x4", "z4")],
        ],
    )?;
    println!("family: {:?}", e.describe(&g, &r));
    println!(
        "controllability family: {}",
        is_controllability_family(&e, &g, &r)?
    );
    println!("closure: {:?}", e.downward_closure()?.describe(&g, &r));

    let sup = build_supervisor(&e, &g, &r)?;
    let a = sup.automaton();
    for &(s, ev, d) in a.transitions() {
        println!(
            "{} -{}-> {}",
            a.state_name(s),
            a.alphabet().name(ev),
            a.state_name(d)
        );
    }
    let supervised = sync_product(a, &g, ProductMode::Reachable)?.automaton;
    println!("supervised states: {:?}", supervised.state_names());
    println!("solution: {}", verify_solution(a, &g, &r)?.overall);
    Ok(())
}
