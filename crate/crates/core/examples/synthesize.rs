//! Maximally permissive supervisor for a small plant, printed in the text
//! format together with the fixpoint statistics.

use ccsynth::format::serialize_automaton;
use ccsynth::instances;
use ccsynth::synthesis::synthesize;

fn main() -> ccsynth::Result<()> {
    let (g, r) = instances::branching();
    let outcome = synthesize(&g, &r)?;
    println!(
        "pairs: {}, family members: {}, filter passes: {}",
        outcome.stats.universe_size, outcome.stats.family_size, outcome.stats.iterations
    );
    let Some(sup) = outcome.supervisor else {
        println!("no supervisor exists");
        return Ok(());
    };
    print!("{}", serialize_automaton(sup.automaton()));
    let report = outcome.report.expect("solvable outcomes carry a report");
    println!("# verified: {}", report.overall);
    Ok(())
}
