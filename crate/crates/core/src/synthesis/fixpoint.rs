//! The family filter, its greatest fixpoint, and the family checks built on
//! the same per-pair tables.

use std::collections::HashSet;

use crate::alphabet::EventId;
use crate::automaton::{require_same_alphabet, Automaton, StateId};
use crate::error::{Error, Result};
use crate::relation::{greatest_relation, RelationKind};

use super::family::{bits, full_mask, maximal, PairSetFamily};
use super::{Strategy, SynthesisConfig};

/// Precomputed step information for every pair of a universe.
pub(crate) struct Tables {
    pub n: usize,
    /// `fwd[i][e]`: for each `e`-successor `x'` of pair `i`'s plant state,
    /// the mask of universe pairs `(x', z')` with `z'` an `e`-successor of
    /// its specification state. `match` needs each mask hit.
    fwd: Vec<Vec<Vec<u64>>>,
    /// `back[i][e]`, required `e` only: for each `e`-successor `z'` of the
    /// specification state, the mask of pairs `(x', z')` with `x'` an
    /// `e`-successor of the plant state.
    back: Vec<Vec<Vec<u64>>>,
    post: Vec<Vec<u64>>,
    pub uc: Vec<EventId>,
    pub req: Vec<EventId>,
    /// One mask per plant initial state: its pairs with specification
    /// initial states.
    istate_cover: Vec<u64>,
    /// Pairs inside `X0 × Z0`.
    pub init_box: u64,
}

impl Tables {
    pub fn new(g: &Automaton, r: &Automaton, universe: &[(StateId, StateId)]) -> Result<Tables> {
        require_same_alphabet(g, r)?;
        let (nx, nz) = (g.num_states(), r.num_states());
        if universe.iter().any(|&(x, z)| x >= nx || z >= nz) {
            return Err(Error::UniverseMismatch);
        }
        let mut index = vec![None; nx * nz];
        for (i, &(x, z)) in universe.iter().enumerate() {
            index[x * nz + z] = Some(i);
        }
        let bit = |x: StateId, z: StateId| index[x * nz + z].map_or(0, |i| 1u64 << i);
        let alphabet = g.alphabet();
        let ne = alphabet.len();
        let mut fwd = vec![vec![Vec::new(); ne]; universe.len()];
        let mut back = vec![vec![Vec::new(); ne]; universe.len()];
        let mut post = vec![vec![0u64; ne]; universe.len()];
        for (i, &(x, z)) in universe.iter().enumerate() {
            for e in alphabet.events() {
                let xs = g.successors(x, e);
                let zs = r.successors(z, e);
                for &x1 in xs {
                    let m = zs.iter().fold(0, |acc, &z1| acc | bit(x1, z1));
                    fwd[i][e.0].push(m);
                    post[i][e.0] |= m;
                }
                if alphabet.is_required(e) {
                    for &z1 in zs {
                        back[i][e.0].push(xs.iter().fold(0, |acc, &x1| acc | bit(x1, z1)));
                    }
                }
            }
        }
        let istate_cover = g
            .initial()
            .iter()
            .map(|&x0| r.initial().iter().fold(0, |acc, &z0| acc | bit(x0, z0)))
            .collect();
        let mut init_box = 0;
        for &x0 in g.initial() {
            for &z0 in r.initial() {
                init_box |= bit(x0, z0);
            }
        }
        Ok(Tables {
            n: universe.len(),
            fwd,
            back,
            post,
            uc: alphabet.uncontrollable().iter().collect(),
            req: alphabet.required().iter().collect(),
            istate_cover,
            init_box,
        })
    }

    pub fn full(&self) -> u64 {
        full_mask(self.n)
    }

    /// `match(w, e, m)`.
    pub fn matches(&self, w: u64, e: EventId, m: u64) -> bool {
        bits(w).all(|i| self.fwd[i][e.0].iter().all(|&req| req & m != 0))
    }

    /// Union of the pairwise `e`-successor boxes of `w`, within the universe.
    pub fn post(&self, w: u64, e: EventId) -> u64 {
        bits(w).fold(0, |acc, i| acc | self.post[i][e.0])
    }

    /// Every plant initial state is paired with some specification initial
    /// state inside `w`.
    pub fn istate(&self, w: u64) -> bool {
        self.istate_cover.iter().all(|&c| c & w != 0)
    }

    /// Whether `w` passes the filter against a family whose members are
    /// covered by `maxes`.
    pub fn satisfies(&self, w: u64, maxes: &[u64]) -> bool {
        for &e in &self.uc {
            if !maxes.iter().any(|&m| self.matches(w, e, m)) {
                return false;
            }
        }
        for &e in &self.req {
            let mut reqs = bits(w)
                .flat_map(|i| self.back[i][e.0].iter().copied())
                .peekable();
            if reqs.peek().is_none() {
                continue;
            }
            let reachable = maxes
                .iter()
                .filter(|&&m| self.matches(w, e, m))
                .fold(0, |acc, &m| acc | m);
            if reqs.any(|req| req & reachable == 0) {
                return false;
            }
        }
        true
    }

    /// Literal form of the filter, quantifying over all of `members`.
    fn satisfies_literally(&self, w: u64, members: &[u64]) -> bool {
        let uc_ok = self
            .uc
            .iter()
            .all(|&e| members.iter().any(|&m| self.matches(w, e, m)));
        uc_ok
            && bits(w).all(|i| {
                self.req.iter().all(|&e| {
                    self.back[i][e.0].iter().all(|&req| {
                        members
                            .iter()
                            .any(|&m| req & m != 0 && self.matches(w, e, m))
                    })
                })
            })
    }
}

/// Pairs of the greatest relation with forward clause on uncontrollable
/// events and backward clause on required events, without initial checks,
/// in row-major order. Every member of every controllability family lies
/// inside it.
pub fn pairs_universe(g: &Automaton, r: &Automaton) -> Result<Vec<(StateId, StateId)>> {
    let kind = RelationKind::ucr_simulation(g.alphabet()).without_initial();
    Ok(greatest_relation(g, r, &kind)?.iter().collect())
}

/// One application of the filter: the members of `e` satisfying the
/// uncontrollable-forward and required-backward conditions against `e`.
pub fn f_step(e: &PairSetFamily, g: &Automaton, r: &Automaton) -> Result<PairSetFamily> {
    let t = Tables::new(g, r, e.universe())?;
    let maxes = e.maximal_members();
    let kept = e
        .members()
        .iter()
        .copied()
        .filter(|&w| t.satisfies(w, &maxes));
    PairSetFamily::new(e.universe().to_vec(), kept)
}

/// The three clauses of a controllability family, checked directly against
/// the members of `e`.
pub fn is_controllability_family(e: &PairSetFamily, g: &Automaton, r: &Automaton) -> Result<bool> {
    Ok(family_defect(e, g, r)?.is_none())
}

/// Why `e` fails to be a controllability family, if it does.
pub fn family_defect(e: &PairSetFamily, g: &Automaton, r: &Automaton) -> Result<Option<String>> {
    let t = Tables::new(g, r, e.universe())?;
    if !e.members().iter().any(|&w| t.istate(w)) {
        return Ok(Some(
            "no member relates every plant initial state to a specification initial state".into(),
        ));
    }
    for &w in e.members() {
        if !t.satisfies_literally(w, e.members()) {
            return Ok(Some(format!(
                "member {} has no matching successor member",
                e.member_name(w, g, r)
            )));
        }
    }
    Ok(None)
}

/// Greatest fixpoint and the work it took.
#[derive(Clone, Debug)]
pub struct Fixpoint {
    /// All members, downward closed.
    pub family: PairSetFamily,
    /// Maximal members in descending size order.
    pub maximal: Vec<u64>,
    /// Filter applications, counting the final one that changed nothing.
    pub iterations: usize,
}

impl Fixpoint {
    /// Some member satisfies the initial-state clause.
    pub fn solvable(&self, g: &Automaton, r: &Automaton) -> Result<bool> {
        let t = Tables::new(g, r, self.family.universe())?;
        Ok(self.maximal.iter().any(|&m| t.istate(m)))
    }
}

/// Greatest fixpoint of the filter over the powerset of
/// [`pairs_universe`], with the default configuration.
pub fn greatest_family(g: &Automaton, r: &Automaton) -> Result<PairSetFamily> {
    Ok(greatest_fixpoint(g, r, &SynthesisConfig::default())?.family)
}

pub fn greatest_fixpoint(
    g: &Automaton,
    r: &Automaton,
    config: &SynthesisConfig,
) -> Result<Fixpoint> {
    let universe = pairs_universe(g, r)?;
    let cap = config.cap.min(super::family::MAX_UNIVERSE);
    if universe.len() > cap {
        return Err(Error::CapExceeded {
            what: "pair universe",
            size: universe.len(),
            cap,
        });
    }
    let t = Tables::new(g, r, &universe)?;
    let (maxes, iterations) = match config.strategy {
        Strategy::Enumeration => {
            let (members, iterations) = enumerate(&t);
            (maximal(&members), iterations)
        }
        Strategy::Antichain => antichain(&t),
    };
    let family = PairSetFamily::new(universe, maxes.iter().copied())?.downward_closure()?;
    Ok(Fixpoint {
        family,
        maximal: maxes,
        iterations,
    })
}

/// Baseline: filter the explicit member list until it stops shrinking.
fn enumerate(t: &Tables) -> (Vec<u64>, usize) {
    let mut members: Vec<u64> = (0..=t.full()).collect();
    let mut iterations = 0;
    loop {
        iterations += 1;
        let maxes = maximal(&members);
        let next: Vec<u64> = members
            .iter()
            .copied()
            .filter(|&w| t.satisfies(w, &maxes))
            .collect();
        if next.len() == members.len() {
            return (members, iterations);
        }
        members = next;
    }
}

/// Tracks only the maximal members. The filter condition is antitone in the
/// member, so the next family is the downward closure of the maximal
/// passing subsets of the current maximal members.
fn antichain(t: &Tables) -> (Vec<u64>, usize) {
    let mut maxes = vec![t.full()];
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut found = Vec::new();
        for &m in &maxes {
            passing_subsets(t, m, &maxes, &mut found);
        }
        let next = maximal(&found);
        let same = next.len() == maxes.len() && {
            let a: HashSet<u64> = next.iter().copied().collect();
            maxes.iter().all(|m| a.contains(m))
        };
        if same {
            return (maxes, iterations);
        }
        maxes = next;
    }
}

/// Pushes every subset of `top` that passes while all its supersets within
/// `top` fail. Includes all maximal passing subsets.
fn passing_subsets(t: &Tables, top: u64, maxes: &[u64], out: &mut Vec<u64>) {
    let mut seen = HashSet::new();
    let mut stack = vec![top];
    seen.insert(top);
    while let Some(w) = stack.pop() {
        if t.satisfies(w, maxes) {
            out.push(w);
            continue;
        }
        for i in bits(w) {
            let sub = w & !(1u64 << i);
            if seen.insert(sub) {
                stack.push(sub);
            }
        }
    }
}

/// Some member of the greatest fixpoint satisfies the initial-state clause.
pub fn is_solvable(g: &Automaton, r: &Automaton) -> Result<bool> {
    is_solvable_with(g, r, &SynthesisConfig::default())
}

pub fn is_solvable_with(g: &Automaton, r: &Automaton, config: &SynthesisConfig) -> Result<bool> {
    greatest_fixpoint(g, r, config)?.solvable(g, r)
}
