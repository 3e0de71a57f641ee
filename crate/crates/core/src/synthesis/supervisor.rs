//! Supervisors built from controllability families, families read back from
//! supervisors, and end-to-end verification.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::automaton::{sync_product, Automaton, ProductMode, StateId};
use crate::control::is_admissible;
use crate::error::{Error, Result};
use crate::relation::{check_relation, holds, Counterexample, PairRelation, RelationKind};

use super::family::PairSetFamily;
use super::fixpoint::Tables;
use super::SynthesisConfig;

/// A supervisor whose states are pair sets.
#[derive(Clone, Debug)]
pub struct SupervisorAutomaton {
    automaton: Automaton,
    members: Vec<u64>,
    family: PairSetFamily,
}

impl SupervisorAutomaton {
    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    pub fn into_automaton(self) -> Automaton {
        self.automaton
    }

    /// The downward-closed family the states are drawn from.
    pub fn family(&self) -> &PairSetFamily {
        &self.family
    }

    /// Member mask behind a state.
    pub fn member(&self, s: StateId) -> u64 {
        self.members[s]
    }

    pub fn member_relation(&self, s: StateId, g: &Automaton, r: &Automaton) -> PairRelation {
        self.family.relation(self.members[s], g, r)
    }

    pub fn state_of(&self, mask: u64) -> Option<StateId> {
        self.members.iter().position(|&m| m == mask)
    }
}

/// Builds the supervisor of a controllability family with the default
/// configuration (reachable part only).
pub fn build_supervisor(
    e: &PairSetFamily,
    g: &Automaton,
    r: &Automaton,
) -> Result<SupervisorAutomaton> {
    build_supervisor_with(e, g, r, &SynthesisConfig::default())
}

/// States are the subsets of members of `e`. Initial states relate every
/// plant initial state to some specification initial state and stay inside
/// `X0 × Z0`. `W -e-> W'` iff `W'` is nonempty, matches `W` on `e`, and lies
/// within the pairwise `e`-successors of `W`; nonemptiness plus the bound
/// gives a joint step into `W'`.
pub fn build_supervisor_with(
    e: &PairSetFamily,
    g: &Automaton,
    r: &Automaton,
    config: &SynthesisConfig,
) -> Result<SupervisorAutomaton> {
    let t = Tables::new(g, r, e.universe())?;
    let maxes = e.maximal_members();
    if !maxes.iter().any(|&m| t.istate(m)) {
        return Err(Error::NotAFamily(
            "no member relates every plant initial state to a specification initial state".into(),
        ));
    }
    if let Some(&bad) = maxes.iter().find(|&&m| !t.satisfies(m, &maxes)) {
        return Err(Error::NotAFamily(format!(
            "member {} has no matching successor member",
            e.member_name(bad, g, r)
        )));
    }
    let closed = e.downward_closure()?;
    let members = closed.members();
    let initial: Vec<u64> = members
        .iter()
        .copied()
        .filter(|&w| w & !t.init_box == 0 && t.istate(w))
        .collect();
    assert!(
        !initial.is_empty(),
        "a member meeting the initial-state clause must leave a member inside X0 x Z0"
    );
    let alphabet = g.alphabet();

    let successors = |w: u64, ev| -> Vec<u64> {
        let post = t.post(w, ev);
        let mut out = Vec::new();
        if (1usize << post.count_ones().min(63)) <= members.len() {
            let mut sub = post;
            while sub != 0 {
                if closed.contains(sub) && t.matches(w, ev, sub) {
                    out.push(sub);
                }
                sub = (sub - 1) & post;
            }
            out.sort_unstable();
        } else {
            out.extend(
                members
                    .iter()
                    .copied()
                    .filter(|&m| m != 0 && m & !post == 0 && t.matches(w, ev, m)),
            );
        }
        out
    };

    let mut states: Vec<u64> = Vec::new();
    let mut ids: HashMap<u64, StateId> = HashMap::new();
    let mut transitions = Vec::new();
    let too_many = |n: usize| Error::CapExceeded {
        what: "supervisor state count",
        size: n,
        cap: config.max_supervisor_states,
    };
    let too_many_edges = || Error::CapExceeded {
        what: "supervisor transition count",
        size: config.max_supervisor_transitions + 1,
        cap: config.max_supervisor_transitions,
    };
    match config.product_mode {
        ProductMode::Full => {
            if members.len() > config.max_supervisor_states {
                return Err(too_many(members.len()));
            }
            for (i, &w) in members.iter().enumerate() {
                states.push(w);
                ids.insert(w, i);
            }
            for (i, &w) in members.iter().enumerate() {
                for ev in alphabet.events() {
                    for w2 in successors(w, ev) {
                        if transitions.len() >= config.max_supervisor_transitions {
                            return Err(too_many_edges());
                        }
                        transitions.push((i, ev, ids[&w2]));
                    }
                }
            }
        }
        ProductMode::Reachable => {
            let mut queue = VecDeque::new();
            for &w in &initial {
                ids.insert(w, states.len());
                states.push(w);
                queue.push_back(w);
            }
            while let Some(w) = queue.pop_front() {
                let src = ids[&w];
                for ev in alphabet.events() {
                    for w2 in successors(w, ev) {
                        let dst = match ids.get(&w2) {
                            Some(&d) => d,
                            None => {
                                if states.len() >= config.max_supervisor_states {
                                    return Err(too_many(states.len() + 1));
                                }
                                let d = states.len();
                                ids.insert(w2, d);
                                states.push(w2);
                                queue.push_back(w2);
                                d
                            }
                        };
                        if transitions.len() >= config.max_supervisor_transitions {
                            return Err(too_many_edges());
                        }
                        transitions.push((src, ev, dst));
                    }
                }
            }
        }
    }
    let names = states
        .iter()
        .map(|&w| closed.member_name(w, g, r))
        .collect();
    let initial_ids = initial.iter().map(|w| ids[w]).collect();
    let automaton = Automaton::from_indexed(alphabet.clone(), names, transitions, initial_ids);
    Ok(SupervisorAutomaton {
        automaton,
        members: states,
        family: closed,
    })
}

/// Slices a cc-simulation from `s || g` to `r` into one pair set per
/// supervisor state, using the greatest cc-simulation.
pub fn extract_family(s: &Automaton, g: &Automaton, r: &Automaton) -> Result<PairSetFamily> {
    let product = sync_product(s, g, ProductMode::Reachable)?;
    let check = holds(
        &product.automaton,
        r,
        &RelationKind::cc_simulation(r.alphabet()),
    )?;
    if let Some(cx) = check.counterexample {
        return Err(Error::NotCcSimulation(cx.failure.to_string()));
    }
    slices(s, &product.components, &check.relation)
}

/// As [`extract_family`] with a given relation over the reachable product
/// `s || g` (states numbered as [`sync_product`] numbers them).
pub fn extract_family_with(
    s: &Automaton,
    g: &Automaton,
    r: &Automaton,
    phi: &PairRelation,
) -> Result<PairSetFamily> {
    let product = sync_product(s, g, ProductMode::Reachable)?;
    if !phi.is_over(&product.automaton, r) {
        return Err(Error::UniverseMismatch);
    }
    if let Some(v) = check_relation(
        &product.automaton,
        r,
        phi,
        &RelationKind::cc_simulation(r.alphabet()),
    )? {
        return Err(Error::NotCcSimulation(v.to_string()));
    }
    slices(s, &product.components, phi)
}

fn slices(
    s: &Automaton,
    components: &[(StateId, StateId)],
    phi: &PairRelation,
) -> Result<PairSetFamily> {
    let mut per_state: Vec<Vec<(StateId, StateId)>> = vec![Vec::new(); s.num_states()];
    for (p, z) in phi.iter() {
        let (y, x) = components[p];
        per_state[y].push((x, z));
    }
    let mut universe: Vec<(StateId, StateId)> = per_state.iter().flatten().copied().collect();
    universe.sort_unstable();
    universe.dedup();
    let mut masks = Vec::new();
    for pairs in &per_state {
        let mut m = 0u64;
        for p in pairs {
            let i = universe.binary_search(p).expect("pair collected above");
            if i >= 64 {
                return Err(Error::CapExceeded {
                    what: "pair universe",
                    size: universe.len(),
                    cap: 64,
                });
            }
            m |= 1 << i;
        }
        masks.push(m);
    }
    PairSetFamily::new(universe, masks)
}

/// Whether `s` solves the control problem for `g` and `r`, checked without
/// any family machinery.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub admissible: bool,
    pub admissibility_counterexample: Option<Counterexample>,
    pub cc_simulated: bool,
    pub cc_counterexample: Option<Counterexample>,
    pub overall: bool,
}

impl VerificationReport {
    pub fn counterexamples(&self) -> impl Iterator<Item = &Counterexample> {
        self.admissibility_counterexample
            .iter()
            .chain(&self.cc_counterexample)
    }
}

pub fn verify_solution(s: &Automaton, g: &Automaton, r: &Automaton) -> Result<VerificationReport> {
    let adm = is_admissible(s, g)?;
    let product = sync_product(s, g, ProductMode::Reachable)?;
    let cc = holds(
        &product.automaton,
        r,
        &RelationKind::cc_simulation(r.alphabet()),
    )?;
    Ok(VerificationReport {
        admissible: adm.holds,
        admissibility_counterexample: adm.counterexample,
        cc_simulated: cc.holds,
        cc_counterexample: cc.counterexample,
        overall: adm.holds && cc.holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::AutomatonBuilder;
    use crate::instances;

    fn branching_family(g: &Automaton, r: &Automaton) -> PairSetFamily {
        PairSetFamily::from_names(
            g,
            r,
            &[
                &[("x0", "z0")],
                &[("x1", "z1")],
                &[("x2", "z2"), ("x3", "z3")],
                &[("x4", "z4")],
            ],
        )
        .unwrap()
    }

    #[test]
    fn branching_supervisor_shape() {
        let (g, r) = instances::branching();
        let sup = build_supervisor(&branching_family(&g, &r), &g, &r).unwrap();
        let a = sup.automaton();
        assert_eq!(
            a.state_names(),
            ["W{x0:z0}", "W{x1:z1}", "W{x2:z2,x3:z3}", "W{x4:z4}"]
        );
        let edges: Vec<(String, String, String)> = a
            .transitions()
            .iter()
            .map(|&(s, e, d)| {
                (
                    a.state_name(s).to_string(),
                    a.alphabet().name(e).to_string(),
                    a.state_name(d).to_string(),
                )
            })
            .collect();
        assert_eq!(edges.len(), 5);
        assert!(edges.contains(&("W{x2:z2,x3:z3}".into(), "l".into(), "W{x4:z4}".into())));
        assert!(edges.contains(&("W{x2:z2,x3:z3}".into(), "uc1".into(), "W{x4:z4}".into())));
        let p = sync_product(a, &g, ProductMode::Reachable).unwrap();
        assert_eq!(p.automaton.num_states(), 5);
        assert!(verify_solution(a, &g, &r).unwrap().overall);
    }

    #[test]
    fn transition_cap_is_enforced() {
        let (g, r) = instances::branching();
        let config = SynthesisConfig {
            max_supervisor_transitions: 3,
            ..SynthesisConfig::default()
        };
        let err = build_supervisor_with(&branching_family(&g, &r), &g, &r, &config).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { cap: 3, .. }));
    }

    #[test]
    fn full_mode_keeps_every_member() {
        let (g, r) = instances::branching();
        let config = SynthesisConfig {
            product_mode: ProductMode::Full,
            ..SynthesisConfig::default()
        };
        let sup = build_supervisor_with(&branching_family(&g, &r), &g, &r, &config).unwrap();
        assert_eq!(sup.automaton().num_states(), 7);
    }

    #[test]
    fn non_family_is_rejected() {
        let (g, r) = instances::branching();
        let idle = PairSetFamily::from_names(&g, &r, &[&[("x0", "z0")]]).unwrap();
        assert_eq!(
            build_supervisor(&idle, &g, &r)
                .unwrap()
                .automaton()
                .transitions()
                .len(),
            0
        );
        let e = PairSetFamily::from_names(&g, &r, &[&[("x0", "z0")], &[("x1", "z1")]]).unwrap();
        assert!(matches!(
            build_supervisor(&e, &g, &r),
            Err(Error::NotAFamily(_))
        ));
    }

    #[test]
    fn scanner_supervisor_report() {
        let g = instances::scanner_plant();
        let r = instances::scanner_spec();
        let s = instances::scanner_supervisor();
        let report = verify_solution(&s, &g, &r).unwrap();
        assert!(report.admissible && !report.cc_simulated && !report.overall);
        assert!(matches!(
            extract_family(&s, &g, &r),
            Err(Error::NotCcSimulation(_))
        ));
    }

    #[test]
    fn scanner_slices_without_required_events() {
        let (g, r, s) = instances::scanner_unrequired();
        let e = extract_family(&s, &g, &r).unwrap();
        let theta_y2 = e.mask_of([
            (g.state("x2").unwrap(), r.state("z2").unwrap()),
            (g.state("x3").unwrap(), r.state("z2").unwrap()),
        ]);
        assert!(e.contains(theta_y2.unwrap()));
        assert!(crate::synthesis::is_controllability_family(&e, &g, &r).unwrap());
    }

    #[test]
    fn blocking_supervisor_is_not_admissible() {
        let (g, r) = instances::nonuniform();
        let mut b = AutomatonBuilder::new(g.alphabet().clone());
        b.initial_state("y");
        let s = b.build().unwrap();
        let report = verify_solution(&s, &g, &r).unwrap();
        assert!(!report.admissible);
    }
}
