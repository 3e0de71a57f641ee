//! Bundled instances: the check-out scanner and the small plant/specification
//! pairs used throughout the examples and tests. The `.aut` sources live in
//! the crate's `instances/` directory.

use crate::automaton::Automaton;
use crate::format::parse_automaton;

pub const SCANNER_PLANT: &str = include_str!("../instances/scanner-G.aut");
pub const SCANNER_SPEC: &str = include_str!("../instances/scanner-R.aut");
pub const SCANNER_SUPERVISOR: &str = include_str!("../instances/scanner-S.aut");
pub const BRANCHING_PLANT: &str = include_str!("../instances/branching-G.aut");
pub const BRANCHING_SPEC: &str = include_str!("../instances/branching-R.aut");
pub const GAP_PLANT: &str = include_str!("../instances/gap-G.aut");
pub const GAP_SPEC: &str = include_str!("../instances/gap-R.aut");
pub const NONUNIFORM_PLANT: &str = include_str!("../instances/nonuniform-G.aut");
pub const NONUNIFORM_SPEC: &str = include_str!("../instances/nonuniform-R.aut");

fn load(text: &str) -> Automaton {
    parse_automaton(text).expect("bundled instance parses")
}

/// Scanner plant; `cancel` is required.
pub fn scanner_plant() -> Automaton {
    load(SCANNER_PLANT)
}

pub fn scanner_spec() -> Automaton {
    load(SCANNER_SPEC)
}

/// The admissible supervisor that fails to keep `cancel` available.
pub fn scanner_supervisor() -> Automaton {
    load(SCANNER_SUPERVISOR)
}

/// Scanner plant, specification and supervisor with no required events.
pub fn scanner_unrequired() -> (Automaton, Automaton, Automaton) {
    let g = scanner_plant();
    let alphabet = g
        .alphabet()
        .with_required(&crate::alphabet::EventSet::empty(g.alphabet().len()));
    let relabel = |a: Automaton| a.with_alphabet(alphabet.clone()).expect("same events");
    (
        relabel(g),
        relabel(scanner_spec()),
        relabel(scanner_supervisor()),
    )
}

/// Plant and specification solved by a four-state supervisor
/// (`c` and `l` controllable, `uc1`/`uc2` uncontrollable, `l` required).
pub fn branching() -> (Automaton, Automaton) {
    (load(BRANCHING_PLANT), load(BRANCHING_SPEC))
}

/// A pair related by a ucr-simulation that admits no supervisor.
pub fn gap() -> (Automaton, Automaton) {
    (load(GAP_PLANT), load(GAP_SPEC))
}

/// A pair whose controllability family has a non-uniform union.
pub fn nonuniform() -> (Automaton, Automaton) {
    (load(NONUNIFORM_PLANT), load(NONUNIFORM_SPEC))
}
