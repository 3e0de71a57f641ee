//! Reproducible random instances and brute-force oracles for testing the
//! engines against independent computations.

use std::collections::{BTreeSet, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Alphabet, EventAttrs, EventId};
use crate::automaton::{Automaton, StateId};
use crate::error::{Error, Result};
use crate::relation::{PairRelation, RelationKind};
use crate::synthesis::SupervisorAutomaton;

/// Parameters of a random plant/specification pair.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceSpec {
    pub g_states: usize,
    pub r_states: usize,
    pub events: usize,
    /// Probability that an event is uncontrollable.
    pub uncontrollable: f64,
    /// Probability that an event is required.
    pub required: f64,
    /// Nondeterministic: probability of each `(source, event, target)`.
    /// Deterministic: probability that a `(source, event)` has a successor.
    pub density: f64,
    pub seed: u64,
    pub deterministic: bool,
}

impl Default for InstanceSpec {
    fn default() -> Self {
        InstanceSpec {
            g_states: 3,
            r_states: 3,
            events: 2,
            uncontrollable: 0.5,
            required: 0.5,
            density: 0.3,
            seed: 0,
            deterministic: false,
        }
    }
}

impl InstanceSpec {
    fn check(&self) {
        assert!(
            self.g_states >= 1 && self.r_states >= 1 && self.events >= 1,
            "counts must be positive"
        );
        for f in [self.uncontrollable, self.required, self.density] {
            assert!((0.0..=1.0).contains(&f), "fractions must lie in [0, 1]");
        }
    }
}

pub fn random_alphabet(
    rng: &mut impl Rng,
    events: usize,
    uncontrollable: f64,
    required: f64,
) -> Alphabet {
    let mut alphabet = Alphabet::new();
    for i in 0..events {
        let attrs = EventAttrs {
            uncontrollable: rng.gen_bool(uncontrollable),
            required: rng.gen_bool(required),
        };
        alphabet
            .add_event(&format!("e{i}"), attrs)
            .expect("fresh event name");
    }
    alphabet
}

/// Random automaton with states `{prefix}0..`. State 0 is always initial;
/// nondeterministic automata may get further initial states.
pub fn random_automaton(
    rng: &mut impl Rng,
    alphabet: &Alphabet,
    states: usize,
    density: f64,
    deterministic: bool,
    prefix: &str,
) -> Automaton {
    let names: Vec<String> = (0..states).map(|i| format!("{prefix}{i}")).collect();
    let mut transitions = Vec::new();
    for s in 0..states {
        for e in alphabet.events() {
            if deterministic {
                if rng.gen_bool(density) {
                    transitions.push((s, e, rng.gen_range(0..states)));
                }
            } else {
                for d in 0..states {
                    if rng.gen_bool(density) {
                        transitions.push((s, e, d));
                    }
                }
            }
        }
    }
    let mut initial = vec![0];
    if !deterministic {
        initial.extend((1..states).filter(|_| rng.gen_bool(0.15)));
    }
    Automaton::from_indexed(alphabet.clone(), names, transitions, initial)
}

/// Plant `x*` and specification `z*` over a shared random alphabet.
pub fn random_instance(spec: &InstanceSpec) -> (Automaton, Automaton) {
    spec.check();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let alphabet = random_alphabet(&mut rng, spec.events, spec.uncontrollable, spec.required);
    let g = random_automaton(
        &mut rng,
        &alphabet,
        spec.g_states,
        spec.density,
        spec.deterministic,
        "x",
    );
    let r = random_automaton(
        &mut rng,
        &alphabet,
        spec.r_states,
        spec.density,
        spec.deterministic,
        "z",
    );
    (g, r)
}

/// Default pair limit of [`brute_greatest_relation`].
pub const BRUTE_PAIR_CAP: usize = 9;

/// Union of all relations satisfying `kind`'s transition clauses, found by
/// trying every subset of `states(a) × states(b)`.
pub fn brute_greatest_relation(
    a: &Automaton,
    b: &Automaton,
    kind: &RelationKind,
) -> Result<PairRelation> {
    brute_greatest_relation_with_cap(a, b, kind, BRUTE_PAIR_CAP)
}

pub fn brute_greatest_relation_with_cap(
    a: &Automaton,
    b: &Automaton,
    kind: &RelationKind,
    cap: usize,
) -> Result<PairRelation> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let (na, nb) = (a.num_states(), b.num_states());
    let n = na * nb;
    if n > cap.min(30) {
        return Err(Error::CapExceeded {
            what: "brute-force pair space",
            size: n,
            cap: cap.min(30),
        });
    }
    let steps = |aut: &Automaton, s: StateId, e: EventId| -> Vec<StateId> {
        aut.transitions()
            .iter()
            .filter(|&&(p, f, _)| p == s && f == e)
            .map(|&(_, _, d)| d)
            .collect()
    };
    let has = |rel: u32, x: StateId, z: StateId| rel >> (x * nb + z) & 1 == 1;
    let closed = |rel: u32| -> bool {
        (0..n).filter(|&i| rel >> i & 1 == 1).all(|i| {
            let (x, z) = (i / nb, i % nb);
            let fwd = kind.forward.iter().all(|e| {
                steps(a, x, e)
                    .iter()
                    .all(|&x1| steps(b, z, e).iter().any(|&z1| has(rel, x1, z1)))
            });
            let back = kind.backward.iter().all(|e| {
                steps(b, z, e)
                    .iter()
                    .all(|&z1| steps(a, x, e).iter().any(|&x1| has(rel, x1, z1)))
            });
            fwd && back
        })
    };
    let mut union = 0u32;
    for rel in 0..(1u32 << n) {
        if rel & !union != 0 && closed(rel) {
            union |= rel;
        }
    }
    Ok(PairRelation::from_pairs(
        na,
        nb,
        (0..n)
            .filter(|&i| union >> i & 1 == 1)
            .map(|i| (i / nb, i % nb)),
    ))
}

/// Automata obtained from `s` by deleting nonempty sets of transitions,
/// smallest deletions first, then lexicographically by position.
pub fn enumerate_subsupervisors(
    s: &Automaton,
    limit: usize,
) -> impl Iterator<Item = Automaton> + '_ {
    let k = s.transitions().len();
    let mut size = 1;
    let mut combo: Vec<usize> = (0..size.min(k)).collect();
    std::iter::from_fn(move || {
        if size > k {
            return None;
        }
        let out = s.without_transitions(&combo);
        // Advance to the next combination, or the first of the next size.
        let mut i = size;
        loop {
            if i == 0 {
                size += 1;
                combo = (0..size).collect();
                break;
            }
            i -= 1;
            if combo[i] < k - size + i {
                combo[i] += 1;
                for j in i + 1..size {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
    .take(limit)
}

/// Structural isomorphism ignoring state names: same alphabet, and a
/// bijection on states preserving transitions and initial states.
pub fn isomorphic(a: &Automaton, b: &Automaton) -> bool {
    if a.alphabet() != b.alphabet()
        || a.num_states() != b.num_states()
        || a.transitions().len() != b.transitions().len()
        || a.initial().len() != b.initial().len()
    {
        return false;
    }
    let n = a.num_states();
    let signature = |m: &Automaton, s: StateId| {
        let mut out: Vec<usize> = m
            .alphabet()
            .events()
            .map(|e| m.successors(s, e).len())
            .collect();
        let mut incoming = vec![0; m.alphabet().len()];
        for &(_, e, d) in m.transitions() {
            if d == s {
                incoming[e.0] += 1;
            }
        }
        out.extend(incoming);
        out.push(usize::from(m.is_initial(s)));
        out
    };
    let sa: Vec<_> = (0..n).map(|s| signature(a, s)).collect();
    let sb: Vec<_> = (0..n).map(|s| signature(b, s)).collect();
    let tb: HashSet<(StateId, EventId, StateId)> = b.transitions().iter().copied().collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn extend(
        x: usize,
        a: &Automaton,
        sa: &[Vec<usize>],
        sb: &[Vec<usize>],
        tb: &HashSet<(StateId, EventId, StateId)>,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if x == map.len() {
            return a
                .transitions()
                .iter()
                .all(|&(s, e, d)| tb.contains(&(map[s], e, map[d])));
        }
        for y in 0..map.len() {
            if used[y] || sa[x] != sb[y] {
                continue;
            }
            // Edges among already mapped states must be preserved.
            let consistent = a.transitions().iter().all(|&(s, e, d)| {
                let ok = |v: usize| v <= x;
                if !(ok(s) && ok(d)) {
                    return true;
                }
                let ms = if s == x { y } else { map[s] };
                let md = if d == x { y } else { map[d] };
                tb.contains(&(ms, e, md))
            });
            if !consistent {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if extend(x + 1, a, sa, sb, tb, map, used) {
                return true;
            }
            used[y] = false;
            map[x] = usize::MAX;
        }
        false
    }
    extend(0, a, &sa, &sb, &tb, &mut map, &mut used)
}

/// Outcome of [`projection_check`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProjectionReport {
    /// Distinct `(supervisor state, plant reach set)` nodes explored.
    pub visited: usize,
    /// Supervisor states whose plant projection differs from the plant
    /// states reached by the same string.
    pub violations: Vec<String>,
}

/// Walks the supervisor and the plant's subset construction in step and
/// compares, at each reached supervisor state `W`, the plant states
/// occurring in `W` with the plant states reached by the same string.
pub fn projection_check(
    sup: &SupervisorAutomaton,
    g: &Automaton,
    r: &Automaton,
) -> ProjectionReport {
    let a = sup.automaton();
    let proj = |s: StateId| -> BTreeSet<StateId> {
        sup.member_relation(s, g, r)
            .iter()
            .map(|(x, _)| x)
            .collect()
    };
    let start: BTreeSet<StateId> = g.initial().iter().copied().collect();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    for &w in a.initial() {
        if seen.insert((w, start.clone())) {
            queue.push_back((w, start.clone()));
        }
    }
    let mut report = ProjectionReport::default();
    while let Some((w, xs)) = queue.pop_front() {
        report.visited += 1;
        if proj(w) != xs {
            report.violations.push(a.state_name(w).to_string());
        }
        for e in a.alphabet().events() {
            let next = g.post(&xs, e);
            for &w2 in a.successors(w, e) {
                if seen.insert((w2, next.clone())) {
                    queue.push_back((w2, next.clone()));
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::serialize_automaton;
    use crate::instances;
    use crate::relation::greatest_relation;

    #[test]
    fn generator_is_deterministic() {
        let spec = InstanceSpec {
            seed: 1,
            ..InstanceSpec::default()
        };
        let (g1, r1) = random_instance(&spec);
        let (g2, r2) = random_instance(&spec);
        assert_eq!(serialize_automaton(&g1), serialize_automaton(&g2));
        assert_eq!(serialize_automaton(&r1), serialize_automaton(&r2));
    }

    #[test]
    fn zero_density_and_zero_required() {
        let spec = InstanceSpec {
            density: 0.0,
            required: 0.0,
            seed: 7,
            ..InstanceSpec::default()
        };
        let (g, r) = random_instance(&spec);
        assert!(g.transitions().is_empty() && r.transitions().is_empty());
        assert!(g.alphabet().required().is_empty());
    }

    #[test]
    fn gap_oracle_value() {
        let (g, r) = instances::gap();
        let kind = RelationKind::ucr_simulation(g.alphabet());
        assert!(matches!(
            brute_greatest_relation(&g, &r, &kind),
            Err(Error::CapExceeded { size: 12, .. })
        ));
        let brute = brute_greatest_relation_with_cap(&g, &r, &kind, 12).unwrap();
        let mut names = brute.to_names(&g, &r);
        names.sort();
        let expected: Vec<(String, String)> = [
            ("x0", "z0"),
            ("x0", "z2"),
            ("x1", "z1"),
            ("x2", "z2"),
            ("x3", "z2"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        assert_eq!(names, expected);
        assert_eq!(brute, greatest_relation(&g, &r, &kind).unwrap());
    }

    #[test]
    fn trivial_oracle_cases() {
        let a = Alphabet::from_decls([("a", EventAttrs::CONTROLLABLE.required())]).unwrap();
        let empty =
            Automaton::from_indexed(a.clone(), vec!["p".into(), "q".into()], vec![], vec![0]);
        let full = brute_greatest_relation(&empty, &empty, &RelationKind::simulation(&a)).unwrap();
        assert_eq!(full.len(), 4);
        let looped = Automaton::from_indexed(
            a.clone(),
            vec!["s".into()],
            vec![(0, EventId(0), 0)],
            vec![0],
        );
        let bisim =
            brute_greatest_relation(&looped, &looped, &RelationKind::bisimulation(&a)).unwrap();
        assert_eq!(bisim.len(), 1);
    }

    #[test]
    fn subsupervisor_counts() {
        let g = instances::scanner_spec();
        let k = g.transitions().len();
        assert_eq!(enumerate_subsupervisors(&g, 0).count(), 0);
        let all: Vec<_> = enumerate_subsupervisors(&g, usize::MAX).collect();
        assert_eq!(all.len(), (1 << k) - 1);
        assert_eq!(all[0].transitions().len(), k - 1);
        assert!(all.last().unwrap().transitions().is_empty());
    }

    #[test]
    fn isomorphism_ignores_names() {
        let g = instances::scanner_plant();
        let n = g.num_states();
        let flip = |s: StateId| n - 1 - s;
        let permuted = Automaton::from_indexed(
            g.alphabet().clone(),
            (0..n).map(|i| format!("q{i}")).collect(),
            g.transitions()
                .iter()
                .map(|&(s, e, d)| (flip(s), e, flip(d)))
                .collect(),
            g.initial().iter().map(|&s| flip(s)).collect(),
        );
        assert!(isomorphic(&g, &permuted));
        assert!(!isomorphic(&g, &instances::scanner_spec()));
    }
}
