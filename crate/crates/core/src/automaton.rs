//! Nondeterministic finite automata, synchronous products and trace-level
//! queries (reachability, determinism, bounded language inclusion).

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::alphabet::{Alphabet, EventId};
use crate::error::{Error, Result, ValidationError};

/// Dense index of a state, assigned in declaration order.
pub type StateId = usize;

/// An automaton over a shared alphabet. Immutable once built; successor
/// lists are precomputed and sorted so every traversal is deterministic.
#[derive(Clone, Debug)]
pub struct Automaton {
    alphabet: Alphabet,
    names: Vec<String>,
    index: HashMap<String, StateId>,
    transitions: Vec<(StateId, EventId, StateId)>,
    initial: Vec<StateId>,
    is_initial: Vec<bool>,
    succ: Vec<Vec<Vec<StateId>>>,
}

impl PartialEq for Automaton {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.names == other.names
            && self.transitions == other.transitions
            && self.initial == other.initial
    }
}

impl Eq for Automaton {}

/// Collects named states and transitions; [`AutomatonBuilder::build`]
/// checks every invariant before producing an [`Automaton`].
#[derive(Clone, Debug)]
pub struct AutomatonBuilder {
    alphabet: Alphabet,
    states: Vec<String>,
    initial: Vec<String>,
    transitions: Vec<(String, String, String)>,
}

impl AutomatonBuilder {
    pub fn new(alphabet: Alphabet) -> Self {
        AutomatonBuilder {
            alphabet,
            states: Vec::new(),
            initial: Vec::new(),
            transitions: Vec::new(),
        }
    }

    pub fn state(&mut self, name: &str) -> &mut Self {
        self.states.push(name.to_string());
        self
    }

    pub fn initial_state(&mut self, name: &str) -> &mut Self {
        self.states.push(name.to_string());
        self.initial.push(name.to_string());
        self
    }

    /// Marks an already declared (or later declared) state as initial.
    pub fn mark_initial(&mut self, name: &str) -> &mut Self {
        self.initial.push(name.to_string());
        self
    }

    pub fn transition(&mut self, src: &str, event: &str, dst: &str) -> &mut Self {
        self.transitions
            .push((src.to_string(), event.to_string(), dst.to_string()));
        self
    }

    /// Checks the automaton invariants, reporting the first violation.
    pub fn validate(&self) -> Result<(), ValidationError> {
        let mut seen = HashSet::new();
        for s in &self.states {
            if s.is_empty() {
                return Err(ValidationError::EmptyStateName);
            }
            if !seen.insert(s.as_str()) {
                return Err(ValidationError::DuplicateStateId(s.clone()));
            }
        }
        if self.initial.is_empty() {
            return Err(ValidationError::EmptyInitialSet);
        }
        for s in &self.initial {
            if !seen.contains(s.as_str()) {
                return Err(ValidationError::UnknownState(s.clone()));
            }
        }
        for (src, ev, dst) in &self.transitions {
            if self.alphabet.lookup(ev).is_none() {
                return Err(ValidationError::UnknownEvent(ev.clone()));
            }
            for s in [src, dst] {
                if !seen.contains(s.as_str()) {
                    return Err(ValidationError::UnknownState(s.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Automaton, ValidationError> {
        self.validate()?;
        let index: HashMap<&str, StateId> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let transitions = self
            .transitions
            .iter()
            .map(|(s, e, d)| {
                (
                    index[s.as_str()],
                    self.alphabet.lookup(e).unwrap(),
                    index[d.as_str()],
                )
            })
            .collect();
        let initial = self.initial.iter().map(|s| index[s.as_str()]).collect();
        Ok(Automaton::from_indexed(
            self.alphabet.clone(),
            self.states.clone(),
            transitions,
            initial,
        ))
    }
}

impl Automaton {
    /// Assembles an automaton from already-resolved indices. Transitions and
    /// initial states are sorted and deduplicated.
    pub(crate) fn from_indexed(
        alphabet: Alphabet,
        names: Vec<String>,
        mut transitions: Vec<(StateId, EventId, StateId)>,
        mut initial: Vec<StateId>,
    ) -> Automaton {
        assert!(!initial.is_empty(), "automaton needs an initial state");
        transitions.sort_unstable();
        transitions.dedup();
        initial.sort_unstable();
        initial.dedup();
        let n = names.len();
        let mut succ = vec![vec![Vec::new(); alphabet.len()]; n];
        for &(s, e, d) in &transitions {
            succ[s][e.0].push(d);
        }
        let mut is_initial = vec![false; n];
        for &s in &initial {
            is_initial[s] = true;
        }
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Automaton {
            alphabet,
            names,
            index,
            transitions,
            initial,
            is_initial,
            succ,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.names.len()
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.names[s]
    }

    pub fn state_names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup_state(&self, name: &str) -> Option<StateId> {
        self.index.get(name).copied()
    }

    /// Looks up a state by name, failing with `UnknownState`.
    pub fn state(&self, name: &str) -> Result<StateId> {
        self.lookup_state(name)
            .ok_or_else(|| ValidationError::UnknownState(name.to_string()).into())
    }

    /// Looks up an event by name, failing with `UnknownEvent`.
    pub fn event(&self, name: &str) -> Result<EventId> {
        self.alphabet
            .lookup(name)
            .ok_or_else(|| Error::UnknownEvent(name.to_string()))
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_initial(&self, s: StateId) -> bool {
        self.is_initial[s]
    }

    /// Transitions in lexicographic `(source, event, target)` index order.
    pub fn transitions(&self) -> &[(StateId, EventId, StateId)] {
        &self.transitions
    }

    pub fn successors(&self, s: StateId, e: EventId) -> &[StateId] {
        &self.succ[s][e.0]
    }

    pub fn enables(&self, s: StateId, e: EventId) -> bool {
        !self.succ[s][e.0].is_empty()
    }

    /// One-step `e`-image of a state set.
    pub fn post(&self, states: &BTreeSet<StateId>, e: EventId) -> BTreeSet<StateId> {
        states
            .iter()
            .flat_map(|&s| self.succ[s][e.0].iter().copied())
            .collect()
    }

    /// Same states and transitions over a different alphabet with identical
    /// event names (used to change the required or uncontrollable subsets).
    pub fn with_alphabet(&self, alphabet: Alphabet) -> Result<Automaton> {
        if alphabet.len() != self.alphabet.len()
            || self
                .alphabet
                .events()
                .any(|e| alphabet.name(e) != self.alphabet.name(e))
        {
            return Err(Error::AlphabetMismatch);
        }
        let mut out = self.clone();
        out.alphabet = alphabet;
        Ok(out)
    }

    pub fn renamed<F: Fn(StateId, &str) -> String>(&self, f: F) -> Automaton {
        let names = self
            .names
            .iter()
            .enumerate()
            .map(|(i, n)| f(i, n))
            .collect();
        Automaton::from_indexed(
            self.alphabet.clone(),
            names,
            self.transitions.clone(),
            self.initial.clone(),
        )
    }

    /// The same automaton with the transitions at the given positions of
    /// [`Automaton::transitions`] removed.
    pub fn without_transitions(&self, removed: &[usize]) -> Automaton {
        let removed: HashSet<usize> = removed.iter().copied().collect();
        let transitions = self
            .transitions
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .map(|(_, t)| *t)
            .collect();
        Automaton::from_indexed(
            self.alphabet.clone(),
            self.names.clone(),
            transitions,
            self.initial.clone(),
        )
    }
}

/// Fails with `AlphabetMismatch` unless both automata share one alphabet.
pub fn require_same_alphabet(a: &Automaton, b: &Automaton) -> Result<()> {
    if a.alphabet != b.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    Ok(())
}

/// A finite sequence of events.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EventSequence(pub Vec<EventId>);

impl EventSequence {
    pub fn empty() -> Self {
        EventSequence(Vec::new())
    }

    pub fn from_names(alphabet: &Alphabet, names: &[&str]) -> Result<Self> {
        names
            .iter()
            .map(|n| {
                alphabet
                    .lookup(n)
                    .ok_or_else(|| Error::UnknownEvent(n.to_string()))
            })
            .collect::<Result<Vec<_>>>()
            .map(EventSequence)
    }

    pub fn push(&mut self, e: EventId) {
        self.0.push(e);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// States reached from some initial state along `seq`.
pub fn reach(a: &Automaton, seq: &EventSequence) -> Result<BTreeSet<StateId>> {
    let mut current: BTreeSet<StateId> = a.initial.iter().copied().collect();
    for &e in &seq.0 {
        if e.0 >= a.alphabet.len() {
            return Err(Error::UnknownEvent(format!("#{}", e.0)));
        }
        current = a.post(&current, e);
    }
    Ok(current)
}

/// Which part of a product to materialize.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ProductMode {
    #[default]
    Reachable,
    Full,
}

/// The synchronous composition of two automata, with the component pair
/// behind every product state.
#[derive(Clone, Debug)]
pub struct Product {
    pub automaton: Automaton,
    pub components: Vec<(StateId, StateId)>,
}

impl Product {
    pub fn index_of(&self, left: StateId, right: StateId) -> Option<StateId> {
        self.components.iter().position(|&c| c == (left, right))
    }
}

/// `left || right`: a joint move on `e` exists iff both components move on `e`.
/// Product states are named `(l,r)`. In reachable mode states are numbered in
/// breadth-first discovery order; in full mode in row-major order.
pub fn sync_product(left: &Automaton, right: &Automaton, mode: ProductMode) -> Result<Product> {
    require_same_alphabet(left, right)?;
    let alphabet = left.alphabet.clone();
    let mut components = Vec::new();
    let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut transitions = Vec::new();
    let mut initial = Vec::new();

    let mut intern =
        |pair: (StateId, StateId), components: &mut Vec<(StateId, StateId)>| -> (StateId, bool) {
            if let Some(&id) = ids.get(&pair) {
                return (id, false);
            }
            let id = components.len();
            components.push(pair);
            ids.insert(pair, id);
            (id, true)
        };

    match mode {
        ProductMode::Full => {
            for l in left.states() {
                for r in right.states() {
                    intern((l, r), &mut components);
                }
            }
            for &l0 in &left.initial {
                for &r0 in &right.initial {
                    initial.push(intern((l0, r0), &mut components).0);
                }
            }
            for id in 0..components.len() {
                let (l, r) = components[id];
                for e in alphabet.events() {
                    for &l1 in left.successors(l, e) {
                        for &r1 in right.successors(r, e) {
                            transitions.push((id, e, intern((l1, r1), &mut components).0));
                        }
                    }
                }
            }
        }
        ProductMode::Reachable => {
            let mut queue = VecDeque::new();
            for &l0 in &left.initial {
                for &r0 in &right.initial {
                    let (id, fresh) = intern((l0, r0), &mut components);
                    initial.push(id);
                    if fresh {
                        queue.push_back(id);
                    }
                }
            }
            while let Some(id) = queue.pop_front() {
                let (l, r) = components[id];
                for e in alphabet.events() {
                    for &l1 in left.successors(l, e) {
                        for &r1 in right.successors(r, e) {
                            let (next, fresh) = intern((l1, r1), &mut components);
                            if fresh {
                                queue.push_back(next);
                            }
                            transitions.push((id, e, next));
                        }
                    }
                }
            }
        }
    }

    let names = components
        .iter()
        .map(|&(l, r)| format!("({},{})", left.state_name(l), right.state_name(r)))
        .collect();
    Ok(Product {
        automaton: Automaton::from_indexed(alphabet, names, transitions, initial),
        components,
    })
}

/// States reachable from the initial set, in ascending index order.
pub fn reachable_states(a: &Automaton) -> Vec<bool> {
    let mut seen = vec![false; a.num_states()];
    let mut stack: Vec<StateId> = a.initial.clone();
    for &s in &stack {
        seen[s] = true;
    }
    while let Some(s) = stack.pop() {
        for e in a.alphabet.events() {
            for &t in a.successors(s, e) {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
    }
    seen
}

/// Restriction to reachable states, keeping their relative order and names.
pub fn reachable_part(a: &Automaton) -> Automaton {
    let seen = reachable_states(a);
    let mut remap = vec![usize::MAX; a.num_states()];
    let mut names = Vec::new();
    for s in a.states() {
        if seen[s] {
            remap[s] = names.len();
            names.push(a.names[s].clone());
        }
    }
    let transitions = a
        .transitions
        .iter()
        .filter(|(s, _, _)| seen[*s])
        .map(|&(s, e, d)| (remap[s], e, remap[d]))
        .collect();
    let initial = a.initial.iter().map(|&s| remap[s]).collect();
    Automaton::from_indexed(a.alphabet.clone(), names, transitions, initial)
}

/// One initial state and at most one successor per state and event.
pub fn is_deterministic(a: &Automaton) -> bool {
    a.initial.len() == 1 && a.succ.iter().all(|row| row.iter().all(|t| t.len() <= 1))
}

/// Default exploration depth for [`language_included`].
pub fn default_inclusion_bound(a: &Automaton, b: &Automaton) -> usize {
    a.num_states() * b.num_states() + 1
}

/// Whether every trace of `a` of length at most `bound` is a trace of `b`.
/// Explores pairs of subsets reached by common traces; `b`'s side is the
/// subset construction.
pub fn language_included(a: &Automaton, b: &Automaton, bound: usize) -> Result<bool> {
    require_same_alphabet(a, b)?;
    type Config = (BTreeSet<StateId>, BTreeSet<StateId>);
    let start: Config = (
        a.initial.iter().copied().collect(),
        b.initial.iter().copied().collect(),
    );
    let mut seen: HashSet<Config> = HashSet::new();
    seen.insert(start.clone());
    let mut frontier = vec![start];
    for _ in 0..bound {
        let mut next = Vec::new();
        for (sa, sb) in &frontier {
            for e in a.alphabet.events() {
                let ta = a.post(sa, e);
                if ta.is_empty() {
                    continue;
                }
                let tb = b.post(sb, e);
                if tb.is_empty() {
                    return Ok(false);
                }
                let c = (ta, tb);
                if seen.insert(c.clone()) {
                    next.push(c);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::EventAttrs;
    use crate::instances;

    fn two_events() -> Alphabet {
        Alphabet::from_decls([
            ("l", EventAttrs::CONTROLLABLE),
            ("l1", EventAttrs::UNCONTROLLABLE),
        ])
        .unwrap()
    }

    #[test]
    fn scanner_plant_validates() {
        let g = instances::scanner_plant();
        assert_eq!(g.num_states(), 5);
        assert_eq!(g.transitions().len(), 8);
        assert_eq!(g.initial(), &[g.state("x0").unwrap()]);
    }

    #[test]
    fn empty_initial_set_rejected() {
        let mut b = AutomatonBuilder::new(two_events());
        b.state("a");
        assert_eq!(b.build().unwrap_err(), ValidationError::EmptyInitialSet);
    }

    #[test]
    fn unknown_event_and_state_rejected() {
        let mut b = AutomatonBuilder::new(two_events());
        b.initial_state("a").transition("a", "go", "a");
        assert_eq!(
            b.validate(),
            Err(ValidationError::UnknownEvent("go".into()))
        );

        let mut b = AutomatonBuilder::new(two_events());
        b.initial_state("a").transition("a", "l", "b");
        assert_eq!(b.validate(), Err(ValidationError::UnknownState("b".into())));

        let mut b = AutomatonBuilder::new(two_events());
        b.initial_state("a").state("a");
        assert_eq!(
            b.validate(),
            Err(ValidationError::DuplicateStateId("a".into()))
        );
    }

    #[test]
    fn scanner_reach_after_start_scan() {
        let g = instances::scanner_plant();
        let s = EventSequence::from_names(g.alphabet(), &["start", "scan"]).unwrap();
        let got: Vec<&str> = reach(&g, &s)
            .unwrap()
            .into_iter()
            .map(|x| g.state_name(x))
            .collect();
        assert_eq!(got, ["x2", "x3"]);
        let eps = reach(&g, &EventSequence::empty()).unwrap();
        assert_eq!(eps.into_iter().collect::<Vec<_>>(), g.initial());
        assert!(matches!(
            EventSequence::from_names(g.alphabet(), &["fly"]),
            Err(Error::UnknownEvent(_))
        ));
    }

    #[test]
    fn gap_reach_l_l1() {
        let (g, _) = instances::gap();
        let s = EventSequence::from_names(g.alphabet(), &["l", "l1"]).unwrap();
        let got: Vec<&str> = reach(&g, &s)
            .unwrap()
            .into_iter()
            .map(|x| g.state_name(x))
            .collect();
        assert_eq!(got, ["x3"]);
    }

    #[test]
    fn scanner_supervised_product() {
        let g = instances::scanner_plant();
        let s = instances::scanner_supervisor();
        let p = sync_product(&s, &g, ProductMode::Reachable).unwrap();
        assert_eq!(
            p.automaton.state_names(),
            ["(y0,x0)", "(y1,x1)", "(y2,x2)", "(y2,x3)", "(y4,x4)"]
        );
        let full = sync_product(&s, &g, ProductMode::Full).unwrap();
        assert_eq!(full.automaton.num_states(), 4 * 5);
        assert_eq!(reachable_part(&full.automaton).num_states(), 5);
    }

    #[test]
    fn universal_supervisor_product_is_plant() {
        let g = instances::scanner_plant();
        let mut b = AutomatonBuilder::new(g.alphabet().clone());
        b.initial_state("u");
        for e in g.alphabet().events() {
            b.transition("u", g.alphabet().name(e), "u");
        }
        let u = b.build().unwrap();
        let p = sync_product(&u, &g, ProductMode::Reachable).unwrap();
        assert_eq!(p.automaton.num_states(), g.num_states());
        assert_eq!(p.automaton.transitions().len(), g.transitions().len());
    }

    #[test]
    fn empty_supervisor_blocks_everything() {
        let g = instances::scanner_plant();
        let mut b = AutomatonBuilder::new(g.alphabet().clone());
        b.initial_state("y");
        let p = sync_product(&b.build().unwrap(), &g, ProductMode::Reachable).unwrap();
        assert!(p.automaton.transitions().is_empty());
        assert_eq!(p.automaton.num_states(), 1);
    }

    #[test]
    fn product_rejects_foreign_alphabet() {
        let g = instances::scanner_plant();
        let (f6, _) = instances::gap();
        assert_eq!(
            sync_product(&g, &f6, ProductMode::Reachable).unwrap_err(),
            Error::AlphabetMismatch
        );
    }

    #[test]
    fn reachable_part_drops_disconnected_component() {
        let mut b = AutomatonBuilder::new(two_events());
        b.initial_state("a").state("b").state("c").state("d");
        b.transition("a", "l", "b").transition("c", "l", "d");
        let r = reachable_part(&b.build().unwrap());
        assert_eq!(r.state_names(), ["a", "b"]);

        let mut b = AutomatonBuilder::new(two_events());
        b.initial_state("a")
            .initial_state("b")
            .transition("a", "l1", "b");
        let a = b.build().unwrap();
        assert_eq!(reachable_part(&a), a);
    }

    #[test]
    fn determinism() {
        assert!(!is_deterministic(&instances::scanner_plant()));
        assert!(is_deterministic(&instances::scanner_spec()));
        let mut b = AutomatonBuilder::new(two_events());
        b.initial_state("a");
        assert!(is_deterministic(&b.build().unwrap()));
    }

    #[test]
    fn bounded_language_inclusion() {
        let g = instances::scanner_plant();
        assert!(language_included(&g, &g, 6).unwrap());

        let r = instances::scanner_spec();
        let s = instances::scanner_supervisor();
        let p = sync_product(&s, &g, ProductMode::Reachable).unwrap();
        assert!(language_included(&p.automaton, &r, 12).unwrap());

        let mut a = AutomatonBuilder::new(two_events());
        a.initial_state("p").state("q").state("r");
        a.transition("p", "l", "q").transition("q", "l1", "r");
        let mut b = AutomatonBuilder::new(two_events());
        b.initial_state("p").state("q").transition("p", "l", "q");
        assert!(!language_included(&a.build().unwrap(), &b.build().unwrap(), 2).unwrap());
    }
}
