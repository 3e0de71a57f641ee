//! Deciding solvability and building maximally permissive supervisors.
//!
//! The search space is the powerset of [`pairs_universe`]. The filter
//! [`f_step`] keeps the pair sets whose uncontrollable moves and required
//! specification moves can be matched inside the current family; its greatest
//! fixpoint contains every controllability family, and the supervisor built
//! from it is maximally permissive.

mod family;
mod fixpoint;
mod supervisor;

use serde::Serialize;

pub use family::{downward_closure, PairSetFamily, MAX_CLOSURE_MEMBER, MAX_UNIVERSE};
pub use fixpoint::{
    f_step, family_defect, greatest_family, greatest_fixpoint, is_controllability_family,
    is_solvable, is_solvable_with, pairs_universe, Fixpoint,
};
pub use supervisor::{
    build_supervisor, build_supervisor_with, extract_family, extract_family_with, verify_solution,
    SupervisorAutomaton, VerificationReport,
};

use crate::alphabet::EventSet;
use crate::automaton::{is_deterministic, Automaton, ProductMode};
use crate::error::Result;
use crate::relation::{holds, RelationKind};

use fixpoint::Tables;

/// Default bound on the pair universe size.
pub const DEFAULT_CAP: usize = 20;

/// Default bound on supervisor states.
pub const DEFAULT_MAX_SUPERVISOR_STATES: usize = 100_000;

/// Default bound on supervisor transitions.
pub const DEFAULT_MAX_SUPERVISOR_TRANSITIONS: usize = 1_000_000;

/// Environment variable overriding [`DEFAULT_CAP`].
pub const CAP_ENV: &str = "CCSYNTH_CAP";

/// How the greatest fixpoint is computed. Both give identical families.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Filter every subset of the universe explicitly.
    Enumeration,
    /// Track maximal members only.
    #[default]
    Antichain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisConfig {
    pub cap: usize,
    pub strategy: Strategy,
    /// `Full` keeps every family member as a supervisor state.
    pub product_mode: ProductMode,
    pub max_supervisor_states: usize,
    pub max_supervisor_transitions: usize,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        SynthesisConfig {
            cap: DEFAULT_CAP,
            strategy: Strategy::default(),
            product_mode: ProductMode::Reachable,
            max_supervisor_states: DEFAULT_MAX_SUPERVISOR_STATES,
            max_supervisor_transitions: DEFAULT_MAX_SUPERVISOR_TRANSITIONS,
        }
    }
}

impl SynthesisConfig {
    /// Defaults, with the cap taken from `CCSYNTH_CAP` when set.
    pub fn from_env() -> std::result::Result<Self, std::num::ParseIntError> {
        let mut config = Self::default();
        if let Ok(v) = std::env::var(CAP_ENV) {
            config.cap = v.trim().parse()?;
        }
        Ok(config)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SynthesisStats {
    pub universe_size: usize,
    pub family_size: usize,
    pub iterations: usize,
}

#[derive(Clone, Debug)]
pub struct SynthesisOutcome {
    pub solvable: bool,
    /// The greatest fixpoint, downward closed.
    pub family: PairSetFamily,
    pub supervisor: Option<SupervisorAutomaton>,
    pub report: Option<VerificationReport>,
    pub stats: SynthesisStats,
}

pub fn synthesize(g: &Automaton, r: &Automaton) -> Result<SynthesisOutcome> {
    synthesize_with(g, r, &SynthesisConfig::default())
}

/// Computes the greatest fixpoint; when some member meets the initial-state
/// clause, builds its supervisor and verifies it independently.
pub fn synthesize_with(
    g: &Automaton,
    r: &Automaton,
    config: &SynthesisConfig,
) -> Result<SynthesisOutcome> {
    let fix = greatest_fixpoint(g, r, config)?;
    let solvable = fix.solvable(g, r)?;
    let t = Tables::new(g, r, fix.family.universe())?;
    let has_initial = fix.maximal.iter().any(|&m| t.istate(m & t.init_box));
    assert_eq!(
        solvable, has_initial,
        "solvability must coincide with a nonempty set of supervisor initial states"
    );
    let stats = SynthesisStats {
        universe_size: fix.family.universe().len(),
        family_size: fix.family.len(),
        iterations: fix.iterations,
    };
    let (supervisor, report) = if solvable {
        let sup = build_supervisor_with(&fix.family, g, r, config)?;
        let report = verify_solution(sup.automaton(), g, r)?;
        (Some(sup), Some(report))
    } else {
        (None, None)
    };
    Ok(SynthesisOutcome {
        solvable,
        family: fix.family,
        supervisor,
        report,
        stats,
    })
}

/// For deterministic plant and specification, solvability is decided by a
/// single relation check. `None` when either side is nondeterministic.
pub fn deterministic_fastpath(g: &Automaton, r: &Automaton) -> Result<Option<bool>> {
    if !is_deterministic(g) || !is_deterministic(r) {
        return Ok(None);
    }
    Ok(Some(
        holds(g, r, &RelationKind::ucr_simulation(g.alphabet()))?.holds,
    ))
}

/// Whether a supervisor exists making `S || G` bisimilar to `R`. Every event
/// is treated as required; the members of the greatest fixpoint inside
/// `X0 × Z0` meeting the initial-state clause must together touch every
/// specification initial state.
pub fn bisimilarity_solvable(g: &Automaton, r: &Automaton) -> Result<bool> {
    bisimilarity_solvable_with(g, r, &SynthesisConfig::default())
}

pub fn bisimilarity_solvable_with(
    g: &Automaton,
    r: &Automaton,
    config: &SynthesisConfig,
) -> Result<bool> {
    let alphabet = g
        .alphabet()
        .with_required(&EventSet::full(g.alphabet().len()));
    let g = g.with_alphabet(alphabet.clone())?;
    let r = r.with_alphabet(alphabet)?;
    let fix = greatest_fixpoint(&g, &r, config)?;
    let t = Tables::new(&g, &r, fix.family.universe())?;
    // Every initial member lies below some maximal member cut to X0 × Z0.
    let union = fix
        .maximal
        .iter()
        .map(|&m| m & t.init_box)
        .filter(|&w| t.istate(w))
        .fold(0u64, |acc, w| acc | w);
    let mut covered = vec![false; r.num_states()];
    for (_, z) in fix.family.pairs(union) {
        covered[z] = true;
    }
    Ok(union != 0 && r.initial().iter().all(|&z0| covered[z0]))
}
