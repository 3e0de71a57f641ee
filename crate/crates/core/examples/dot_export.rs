//! Graphviz rendering of a synthesized supervisor composed with its plant.
//! Pipe the output into `dot -Tsvg`.

use ccsynth::automaton::{sync_product, ProductMode};
use ccsynth::dot::export_dot;
use ccsynth::instances;
use ccsynth::synthesis::synthesize;

fn main() -> ccsynth::Result<()> {
    let (g, r) = instances::branching();
    let sup = synthesize(&g, &r)?
        .supervisor
        .expect("instance is solvable");
    let supervised = sync_product(sup.automaton(), &g, ProductMode::Reachable)?.automaton;
    print!("{}", export_dot(&supervised));
    Ok(())
}
