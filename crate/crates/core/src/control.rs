//! Checks on supervisors and relations that look at the plant's
//! uncontrollable moves: admissibility, state-controllability and
//! uniformity.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use crate::automaton::{require_same_alphabet, sync_product, Automaton, ProductMode, StateId};
use crate::error::{Error, Result};
use crate::relation::{Clause, Counterexample, PairRelation, Violation};

/// Default bound on explored subset pairs in [`is_state_controllable`].
pub const DEFAULT_SUBSET_PAIR_CAP: usize = 100_000;

/// Outcome of a yes/no check with an optional witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
}

impl Verdict {
    fn pass() -> Self {
        Verdict {
            holds: true,
            counterexample: None,
        }
    }
}

/// Whether `s` never disables an uncontrollable event the plant `g` offers,
/// at any reachable state of `s || g`. The witness is the first violation in
/// breadth-first product order, then event order.
pub fn is_admissible(s: &Automaton, g: &Automaton) -> Result<Verdict> {
    let product = sync_product(s, g, ProductMode::Reachable)?;
    let p = &product.automaton;
    let alphabet = g.alphabet();
    for (ps, &(_, x)) in product.components.iter().enumerate() {
        for e in alphabet.uncontrollable().iter() {
            if g.enables(x, e) && !p.enables(ps, e) {
                return Ok(Verdict {
                    holds: false,
                    counterexample: Some(Counterexample {
                        failure: Violation {
                            clause: Clause::Admissibility,
                            left: Some(p.state_name(ps).to_string()),
                            right: None,
                            event: Some(alphabet.name(e).to_string()),
                            successor: None,
                        },
                        trail: Vec::new(),
                    }),
                });
            }
        }
    }
    Ok(Verdict::pass())
}

/// String-based controllability: for every common string `s` and
/// uncontrollable `σ`, if the plant can do `sσ` then every supervisor state
/// reached by `s` enables `σ`.
pub fn is_state_controllable(s: &Automaton, g: &Automaton) -> Result<bool> {
    is_state_controllable_with_cap(s, g, DEFAULT_SUBSET_PAIR_CAP)
}

pub fn is_state_controllable_with_cap(s: &Automaton, g: &Automaton, cap: usize) -> Result<bool> {
    require_same_alphabet(s, g)?;
    type Node = (BTreeSet<StateId>, BTreeSet<StateId>);
    let start: Node = (
        g.initial().iter().copied().collect(),
        s.initial().iter().copied().collect(),
    );
    let mut seen: HashSet<Node> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    let alphabet = g.alphabet();
    while let Some((xs, ys)) = queue.pop_front() {
        for e in alphabet.uncontrollable().iter() {
            let plant_can = xs.iter().any(|&x| g.enables(x, e));
            if plant_can && !ys.iter().all(|&y| s.enables(y, e)) {
                return Ok(false);
            }
        }
        for e in alphabet.events() {
            let xs2 = g.post(&xs, e);
            let ys2 = s.post(&ys, e);
            if xs2.is_empty() || ys2.is_empty() {
                continue;
            }
            let next = (xs2, ys2);
            if seen.insert(next.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded {
                        what: "subset-pair exploration",
                        size: seen.len(),
                        cap,
                    });
                }
                queue.push_back(next);
            }
        }
    }
    Ok(true)
}

/// A violation of uniformity: `(x1, z1)` and `(x2, z2)` are both in the
/// relation and reached by a common string, `z1` enables the required
/// `event`, but the move `x2 -event-> x2_next` has no partner from `z2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniformityWitness {
    pub x1: String,
    pub z1: String,
    pub x2: String,
    pub z2: String,
    pub event: String,
    pub x2_next: String,
}

/// First uniformity violation of `phi` with respect to the required events,
/// exploring quadruples `(x1, x2, z1, z2)` reachable by a common string.
pub fn uniformity_witness(
    phi: &PairRelation,
    g: &Automaton,
    r: &Automaton,
) -> Result<Option<UniformityWitness>> {
    require_same_alphabet(g, r).map_err(|_| Error::UniverseMismatch)?;
    if !phi.is_over(g, r) {
        return Err(Error::UniverseMismatch);
    }
    let alphabet = g.alphabet();
    let required = alphabet.required();
    let mut seen: HashSet<[StateId; 4]> = HashSet::new();
    let mut queue = VecDeque::new();
    for &x1 in g.initial() {
        for &x2 in g.initial() {
            for &z1 in r.initial() {
                for &z2 in r.initial() {
                    if seen.insert([x1, x2, z1, z2]) {
                        queue.push_back([x1, x2, z1, z2]);
                    }
                }
            }
        }
    }
    while let Some([x1, x2, z1, z2]) = queue.pop_front() {
        if phi.contains(x1, z1) && phi.contains(x2, z2) {
            for e in required.iter() {
                if !r.enables(z1, e) {
                    continue;
                }
                for &x2n in g.successors(x2, e) {
                    if !r
                        .successors(z2, e)
                        .iter()
                        .any(|&z2n| phi.contains(x2n, z2n))
                    {
                        return Ok(Some(UniformityWitness {
                            x1: g.state_name(x1).into(),
                            z1: r.state_name(z1).into(),
                            x2: g.state_name(x2).into(),
                            z2: r.state_name(z2).into(),
                            event: alphabet.name(e).into(),
                            x2_next: g.state_name(x2n).into(),
                        }));
                    }
                }
            }
        }
        for e in alphabet.events() {
            for &a in g.successors(x1, e) {
                for &b in g.successors(x2, e) {
                    for &c in r.successors(z1, e) {
                        for &d in r.successors(z2, e) {
                            if seen.insert([a, b, c, d]) {
                                queue.push_back([a, b, c, d]);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

pub fn is_uniform(phi: &PairRelation, g: &Automaton, r: &Automaton) -> Result<bool> {
    Ok(uniformity_witness(phi, g, r)?.is_none())
}
