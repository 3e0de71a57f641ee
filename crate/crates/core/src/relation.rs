//! Greatest simulation-style relations between two automata.
//!
//! Every preorder handled here is an instance of [`RelationKind`]: a set of
//! events checked forward (each move of the left side is matched on the
//! right), a set checked backward (each move of the right side is matched on
//! the left), and which initial-state clauses apply. Relations satisfying
//! such existential clauses are closed under union, so a greatest one exists
//! and is reached by deleting violating pairs from the full product.

use std::fmt;

use serde::Serialize;

use crate::alphabet::{Alphabet, EventId, EventSet};
use crate::automaton::{require_same_alphabet, Automaton, StateId};
use crate::error::{Error, Result};

/// A set of pairs `(left state, right state)` over fixed state counts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairRelation {
    left: usize,
    right: usize,
    bits: Vec<bool>,
}

impl PairRelation {
    pub fn empty(left: usize, right: usize) -> Self {
        PairRelation {
            left,
            right,
            bits: vec![false; left * right],
        }
    }

    pub fn full(left: usize, right: usize) -> Self {
        PairRelation {
            left,
            right,
            bits: vec![true; left * right],
        }
    }

    /// Empty relation over the states of `a` and `b`.
    pub fn between(a: &Automaton, b: &Automaton) -> Self {
        Self::empty(a.num_states(), b.num_states())
    }

    pub fn from_pairs(
        left: usize,
        right: usize,
        pairs: impl IntoIterator<Item = (StateId, StateId)>,
    ) -> Self {
        let mut rel = Self::empty(left, right);
        for (x, z) in pairs {
            rel.insert(x, z);
        }
        rel
    }

    /// Builds a relation from state names of `a` and `b`.
    pub fn from_names(a: &Automaton, b: &Automaton, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut rel = Self::between(a, b);
        for (x, z) in pairs {
            rel.insert(a.state(x)?, b.state(z)?);
        }
        Ok(rel)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.left, self.right)
    }

    /// Whether the relation is over the state sets of `a` and `b`.
    pub fn is_over(&self, a: &Automaton, b: &Automaton) -> bool {
        self.dims() == (a.num_states(), b.num_states())
    }

    pub fn contains(&self, x: StateId, z: StateId) -> bool {
        self.bits[x * self.right + z]
    }

    pub fn insert(&mut self, x: StateId, z: StateId) -> bool {
        assert!(
            x < self.left && z < self.right,
            "pair outside relation universe"
        );
        !std::mem::replace(&mut self.bits[x * self.right + z], true)
    }

    pub fn remove(&mut self, x: StateId, z: StateId) -> bool {
        std::mem::replace(&mut self.bits[x * self.right + z], false)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// Pairs in row-major `(left, right)` order.
    pub fn iter(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        let right = self.right;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i / right, i % right))
    }

    pub fn is_subset(&self, other: &PairRelation) -> bool {
        self.dims() == other.dims() && self.iter().all(|(x, z)| other.contains(x, z))
    }

    pub fn union(&self, other: &PairRelation) -> Result<PairRelation> {
        if self.dims() != other.dims() {
            return Err(Error::UniverseMismatch);
        }
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| *a || *b)
            .collect();
        Ok(PairRelation { bits, ..*self })
    }

    pub fn inverse(&self) -> PairRelation {
        PairRelation::from_pairs(self.right, self.left, self.iter().map(|(x, z)| (z, x)))
    }

    pub fn to_names(&self, a: &Automaton, b: &Automaton) -> Vec<(String, String)> {
        self.iter()
            .map(|(x, z)| (a.state_name(x).to_string(), b.state_name(z).to_string()))
            .collect()
    }
}

/// Which clauses a relation must satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationKind {
    /// Events whose left moves must be matched on the right.
    pub forward: EventSet,
    /// Events whose right moves must be matched on the left.
    pub backward: EventSet,
    /// Every left initial state relates to some right initial state.
    pub check_initial: bool,
    /// Every right initial state relates to some left initial state.
    pub check_inverse_initial: bool,
}

impl RelationKind {
    pub fn simulation(alphabet: &Alphabet) -> Self {
        Self::simulation_wrt(alphabet.all())
    }

    /// Simulation with forward clause `Σ` and backward clause on the
    /// required events.
    pub fn cc_simulation(alphabet: &Alphabet) -> Self {
        RelationKind {
            forward: alphabet.all(),
            backward: alphabet.required(),
            check_initial: true,
            check_inverse_initial: false,
        }
    }

    pub fn bisimulation(alphabet: &Alphabet) -> Self {
        RelationKind {
            forward: alphabet.all(),
            backward: alphabet.all(),
            check_initial: true,
            check_inverse_initial: true,
        }
    }

    pub fn uc_simulation(alphabet: &Alphabet) -> Self {
        Self::simulation_wrt(alphabet.uncontrollable())
    }

    pub fn ucr_simulation(alphabet: &Alphabet) -> Self {
        RelationKind {
            forward: alphabet.uncontrollable(),
            backward: alphabet.required(),
            check_initial: true,
            check_inverse_initial: false,
        }
    }

    /// Forward clause restricted to `events`, no backward clause.
    pub fn simulation_wrt(events: EventSet) -> Self {
        let n = events.universe_len();
        RelationKind {
            forward: events,
            backward: EventSet::empty(n),
            check_initial: true,
            check_inverse_initial: false,
        }
    }

    pub fn without_initial(mut self) -> Self {
        self.check_initial = false;
        self.check_inverse_initial = false;
        self
    }

    fn check_alphabet(&self, alphabet: &Alphabet) -> Result<()> {
        if self.forward.universe_len() != alphabet.len()
            || self.backward.universe_len() != alphabet.len()
        {
            return Err(Error::AlphabetMismatch);
        }
        Ok(())
    }
}

/// The named preorders, for command-line and table-driven use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preorder {
    Simulation,
    CcSimulation,
    Bisimulation,
    UcSimulation,
    UcrSimulation,
}

impl Preorder {
    pub const ALL: [Preorder; 5] = [
        Preorder::Simulation,
        Preorder::CcSimulation,
        Preorder::Bisimulation,
        Preorder::UcSimulation,
        Preorder::UcrSimulation,
    ];

    pub fn kind(self, alphabet: &Alphabet) -> RelationKind {
        match self {
            Preorder::Simulation => RelationKind::simulation(alphabet),
            Preorder::CcSimulation => RelationKind::cc_simulation(alphabet),
            Preorder::Bisimulation => RelationKind::bisimulation(alphabet),
            Preorder::UcSimulation => RelationKind::uc_simulation(alphabet),
            Preorder::UcrSimulation => RelationKind::ucr_simulation(alphabet),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preorder::Simulation => "sim",
            Preorder::CcSimulation => "ccsim",
            Preorder::Bisimulation => "bisim",
            Preorder::UcSimulation => "ucsim",
            Preorder::UcrSimulation => "ucrsim",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Clause {
    InitialState,
    InverseInitialState,
    Forward,
    Backward,
    Admissibility,
}

/// One failed clause instance, with states and events by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub clause: Clause,
    pub left: Option<String>,
    pub right: Option<String>,
    pub event: Option<String>,
    /// The unmatched successor: on the left for forward failures, on the
    /// right for backward failures.
    pub successor: Option<String>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |o: &Option<String>| o.clone().unwrap_or_default();
        match self.clause {
            Clause::InitialState => {
                write!(
                    f,
                    "initial state {} is related to no initial state",
                    s(&self.left)
                )
            }
            Clause::InverseInitialState => write!(
                f,
                "initial state {} of the right side is related to no initial state",
                s(&self.right)
            ),
            Clause::Forward => write!(
                f,
                "forward clause fails at ({}, {}) on {}: {} -{}-> {} is unmatched",
                s(&self.left),
                s(&self.right),
                s(&self.event),
                s(&self.left),
                s(&self.event),
                s(&self.successor)
            ),
            Clause::Backward => write!(
                f,
                "backward clause fails at ({}, {}) on {}: {} -{}-> {} is unmatched",
                s(&self.left),
                s(&self.right),
                s(&self.event),
                s(&self.right),
                s(&self.event),
                s(&self.successor)
            ),
            Clause::Admissibility => write!(
                f,
                "uncontrollable {} is enabled by the plant but disabled at {}",
                s(&self.event),
                s(&self.left)
            ),
        }
    }
}

/// The first failing clause, followed by the chain of pair deletions that
/// caused it. The last element of `trail` is a root cause that needed no
/// earlier deletion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub failure: Violation,
    pub trail: Vec<Violation>,
}

impl Counterexample {
    pub fn root(&self) -> &Violation {
        self.trail.last().unwrap_or(&self.failure)
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.failure)?;
        for v in &self.trail {
            write!(f, "\n  because {v}")?;
        }
        Ok(())
    }
}

/// Outcome of [`holds`].
#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub holds: bool,
    /// The greatest relation satisfying the kind's transition clauses.
    pub relation: PairRelation,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Copy, Debug)]
struct Deletion {
    x: StateId,
    z: StateId,
    clause: Clause,
    event: EventId,
    successor: StateId,
    blame: Option<(StateId, StateId)>,
}

/// First transition clause violated by `(x, z)` against `rel`. `order`
/// breaks ties when blaming an already deleted successor pair.
fn pair_violation(
    a: &Automaton,
    b: &Automaton,
    kind: &RelationKind,
    rel: &PairRelation,
    x: StateId,
    z: StateId,
    order: &[usize],
) -> Option<Deletion> {
    let earliest = |cands: &mut dyn Iterator<Item = (StateId, StateId)>| {
        cands.min_by_key(|&(p, q)| order[p * rel.right + q])
    };
    for e in kind.forward.iter() {
        for &x1 in a.successors(x, e) {
            let targets = b.successors(z, e);
            if !targets.iter().any(|&z1| rel.contains(x1, z1)) {
                return Some(Deletion {
                    x,
                    z,
                    clause: Clause::Forward,
                    event: e,
                    successor: x1,
                    blame: earliest(&mut targets.iter().map(|&z1| (x1, z1))),
                });
            }
        }
    }
    for e in kind.backward.iter() {
        for &z1 in b.successors(z, e) {
            let sources = a.successors(x, e);
            if !sources.iter().any(|&x1| rel.contains(x1, z1)) {
                return Some(Deletion {
                    x,
                    z,
                    clause: Clause::Backward,
                    event: e,
                    successor: z1,
                    blame: earliest(&mut sources.iter().map(|&x1| (x1, z1))),
                });
            }
        }
    }
    None
}

struct Refinement {
    relation: PairRelation,
    log: Vec<Deletion>,
    /// Deletion position per pair index; `usize::MAX` for kept pairs.
    order: Vec<usize>,
}

fn refine(a: &Automaton, b: &Automaton, kind: &RelationKind) -> Result<Refinement> {
    require_same_alphabet(a, b)?;
    kind.check_alphabet(a.alphabet())?;
    let mut rel = PairRelation::full(a.num_states(), b.num_states());
    let mut order = vec![usize::MAX; rel.bits.len()];
    let mut log = Vec::new();
    loop {
        let mut changed = false;
        for x in a.states() {
            for z in b.states() {
                if !rel.contains(x, z) {
                    continue;
                }
                if let Some(d) = pair_violation(a, b, kind, &rel, x, z, &order) {
                    rel.remove(x, z);
                    order[x * rel.right + z] = log.len();
                    log.push(d);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(Refinement {
        relation: rel,
        log,
        order,
    })
}

fn describe(a: &Automaton, b: &Automaton, d: &Deletion) -> Violation {
    let successor = match d.clause {
        Clause::Forward => a.state_name(d.successor),
        _ => b.state_name(d.successor),
    };
    Violation {
        clause: d.clause,
        left: Some(a.state_name(d.x).to_string()),
        right: Some(b.state_name(d.z).to_string()),
        event: Some(a.alphabet().name(d.event).to_string()),
        successor: Some(successor.to_string()),
    }
}

impl Refinement {
    /// Follows blame links from the deletion of `start` down to a root cause.
    fn trail(&self, a: &Automaton, b: &Automaton, start: (StateId, StateId)) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut next = Some(start);
        while let Some((x, z)) = next {
            let pos = self.order[x * self.relation.right + z];
            let Some(d) = self.log.get(pos) else { break };
            out.push(describe(a, b, d));
            next = d.blame;
        }
        out
    }

    fn earliest_deleted(
        &self,
        pairs: impl Iterator<Item = (StateId, StateId)>,
    ) -> Option<(StateId, StateId)> {
        let right = self.relation.right;
        pairs.min_by_key(|&(x, z)| self.order[x * right + z])
    }
}

/// The largest relation closed under `kind`'s forward and backward clauses.
/// Initial-state clauses are not applied.
pub fn greatest_relation(
    a: &Automaton,
    b: &Automaton,
    kind: &RelationKind,
) -> Result<PairRelation> {
    Ok(refine(a, b, kind)?.relation)
}

/// Every pair deletion performed while computing the greatest relation, in
/// order. Intended for debugging counterexamples.
pub fn deletion_log(a: &Automaton, b: &Automaton, kind: &RelationKind) -> Result<Vec<Violation>> {
    let r = refine(a, b, kind)?;
    Ok(r.log.iter().map(|d| describe(a, b, d)).collect())
}

/// Every left initial state relates to some right initial state.
pub fn initial_condition(a: &Automaton, b: &Automaton, rel: &PairRelation) -> bool {
    a.initial()
        .iter()
        .all(|&x0| b.initial().iter().any(|&z0| rel.contains(x0, z0)))
}

/// Every right initial state relates to some left initial state.
pub fn inverse_initial_condition(a: &Automaton, b: &Automaton, rel: &PairRelation) -> bool {
    b.initial()
        .iter()
        .all(|&z0| a.initial().iter().any(|&x0| rel.contains(x0, z0)))
}

/// Decides whether `a` is related to `b` by some relation of `kind`.
pub fn holds(a: &Automaton, b: &Automaton, kind: &RelationKind) -> Result<RelationCheck> {
    let r = refine(a, b, kind)?;
    let rel = &r.relation;
    let mut counterexample = None;
    if kind.check_initial {
        if let Some(&x0) = a
            .initial()
            .iter()
            .find(|&&x0| !b.initial().iter().any(|&z0| rel.contains(x0, z0)))
        {
            let blamed = r.earliest_deleted(b.initial().iter().map(|&z0| (x0, z0)));
            counterexample = Some(Counterexample {
                failure: Violation {
                    clause: Clause::InitialState,
                    left: Some(a.state_name(x0).to_string()),
                    right: None,
                    event: None,
                    successor: None,
                },
                trail: blamed.map(|p| r.trail(a, b, p)).unwrap_or_default(),
            });
        }
    }
    if counterexample.is_none() && kind.check_inverse_initial {
        if let Some(&z0) = b
            .initial()
            .iter()
            .find(|&&z0| !a.initial().iter().any(|&x0| rel.contains(x0, z0)))
        {
            let blamed = r.earliest_deleted(a.initial().iter().map(|&x0| (x0, z0)));
            counterexample = Some(Counterexample {
                failure: Violation {
                    clause: Clause::InverseInitialState,
                    left: None,
                    right: Some(b.state_name(z0).to_string()),
                    event: None,
                    successor: None,
                },
                trail: blamed.map(|p| r.trail(a, b, p)).unwrap_or_default(),
            });
        }
    }
    Ok(RelationCheck {
        holds: counterexample.is_none(),
        relation: r.relation,
        counterexample,
    })
}

/// Checks a given relation against every clause of `kind`, returning the
/// first violation found in pair order, then the initial clauses.
pub fn check_relation(
    a: &Automaton,
    b: &Automaton,
    rel: &PairRelation,
    kind: &RelationKind,
) -> Result<Option<Violation>> {
    require_same_alphabet(a, b)?;
    kind.check_alphabet(a.alphabet())?;
    if !rel.is_over(a, b) {
        return Err(Error::UniverseMismatch);
    }
    let order = vec![0; rel.bits.len()];
    for (x, z) in rel.iter() {
        if let Some(d) = pair_violation(a, b, kind, rel, x, z, &order) {
            return Ok(Some(describe(a, b, &d)));
        }
    }
    if kind.check_initial {
        if let Some(&x0) = a
            .initial()
            .iter()
            .find(|&&x0| !b.initial().iter().any(|&z0| rel.contains(x0, z0)))
        {
            return Ok(Some(Violation {
                clause: Clause::InitialState,
                left: Some(a.state_name(x0).to_string()),
                right: None,
                event: None,
                successor: None,
            }));
        }
    }
    if kind.check_inverse_initial && !inverse_initial_condition(a, b, rel) {
        let z0 = *b
            .initial()
            .iter()
            .find(|&&z0| !a.initial().iter().any(|&x0| rel.contains(x0, z0)))
            .unwrap();
        return Ok(Some(Violation {
            clause: Clause::InverseInitialState,
            left: None,
            right: Some(b.state_name(z0).to_string()),
            event: None,
            successor: None,
        }));
    }
    Ok(None)
}

/// `w` satisfies the `e`-forward condition up to `w2`: every `e`-move of a
/// left component of `w` is matched by an `e`-move of its partner landing in
/// `w2`.
pub fn match_predicate(
    g: &Automaton,
    r: &Automaton,
    w: &PairRelation,
    e: EventId,
    w2: &PairRelation,
) -> Result<bool> {
    require_same_alphabet(g, r)?;
    if !w.is_over(g, r) || !w2.is_over(g, r) {
        return Err(Error::UniverseMismatch);
    }
    if e.index() >= g.alphabet().len() {
        return Err(Error::UnknownEvent(format!("#{}", e.index())));
    }
    Ok(w.iter().all(|(x, z)| {
        g.successors(x, e)
            .iter()
            .all(|&x1| r.successors(z, e).iter().any(|&z1| w2.contains(x1, z1)))
    }))
}
