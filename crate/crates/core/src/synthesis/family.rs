//! Families of pair sets over a fixed, ordered pair universe.
//!
//! A member `W ⊆ X × Z` is a bit mask over the universe: bit `i` stands for
//! `universe[i]`. Universes are limited to 64 pairs.

use std::collections::HashSet;

use crate::automaton::{Automaton, StateId};
use crate::error::{Error, Result};
use crate::relation::PairRelation;

/// Widest universe a mask can address.
pub const MAX_UNIVERSE: usize = 64;

/// Largest member the downward closure will expand (2^24 subsets).
pub const MAX_CLOSURE_MEMBER: usize = 24;

/// A set of pair sets. Members are kept sorted and deduplicated, so two
/// families are equal exactly when they have the same universe and members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSetFamily {
    universe: Vec<(StateId, StateId)>,
    members: Vec<u64>,
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Maximal elements under inclusion, in descending size then ascending mask
/// order.
pub(crate) fn maximal(masks: &[u64]) -> Vec<u64> {
    let mut sorted: Vec<u64> = masks.to_vec();
    sorted.sort_unstable_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(a.cmp(b)));
    sorted.dedup();
    let mut out: Vec<u64> = Vec::new();
    for m in sorted {
        if !out.iter().any(|&k| m & !k == 0) {
            out.push(m);
        }
    }
    out
}

impl PairSetFamily {
    pub fn new(
        universe: Vec<(StateId, StateId)>,
        members: impl IntoIterator<Item = u64>,
    ) -> Result<Self> {
        if universe.len() > MAX_UNIVERSE {
            return Err(Error::CapExceeded {
                what: "pair universe",
                size: universe.len(),
                cap: MAX_UNIVERSE,
            });
        }
        let distinct: HashSet<_> = universe.iter().collect();
        if distinct.len() != universe.len() {
            return Err(Error::UniverseMismatch);
        }
        let full = full_mask(universe.len());
        let mut members: Vec<u64> = members.into_iter().collect();
        if members.iter().any(|&m| m & !full != 0) {
            return Err(Error::UniverseMismatch);
        }
        members.sort_unstable();
        members.dedup();
        Ok(PairSetFamily { universe, members })
    }

    /// Family over `universe` whose members are the given relations. Every
    /// pair of every relation must belong to the universe.
    pub fn from_relations(
        universe: Vec<(StateId, StateId)>,
        relations: &[PairRelation],
    ) -> Result<Self> {
        let masks = relations
            .iter()
            .map(|rel| mask_in(&universe, rel.iter()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(universe, masks)
    }

    /// Family given by state names; the universe is the sorted union of the
    /// members' pairs.
    pub fn from_names(g: &Automaton, r: &Automaton, members: &[&[(&str, &str)]]) -> Result<Self> {
        let mut resolved = Vec::new();
        for m in members {
            let mut pairs = Vec::new();
            for (x, z) in m.iter() {
                pairs.push((g.state(x)?, r.state(z)?));
            }
            resolved.push(pairs);
        }
        let mut universe: Vec<(StateId, StateId)> = resolved.iter().flatten().copied().collect();
        universe.sort_unstable();
        universe.dedup();
        let masks = resolved
            .iter()
            .map(|pairs| mask_in(&universe, pairs.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(universe, masks)
    }

    pub fn universe(&self) -> &[(StateId, StateId)] {
        &self.universe
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.members.binary_search(&mask).is_ok()
    }

    /// Mask of `pairs`, or `None` if some pair lies outside the universe.
    pub fn mask_of(&self, pairs: impl IntoIterator<Item = (StateId, StateId)>) -> Option<u64> {
        mask_in(&self.universe, pairs).ok()
    }

    pub fn contains_pairs(&self, pairs: impl IntoIterator<Item = (StateId, StateId)>) -> bool {
        self.mask_of(pairs).is_some_and(|m| self.contains(m))
    }

    pub fn pairs(&self, mask: u64) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        bits(mask).map(|i| self.universe[i])
    }

    pub fn relation(&self, mask: u64, g: &Automaton, r: &Automaton) -> PairRelation {
        PairRelation::from_pairs(g.num_states(), r.num_states(), self.pairs(mask))
    }

    /// Union of all members.
    pub fn union_relation(&self, g: &Automaton, r: &Automaton) -> PairRelation {
        let all = self.members.iter().fold(0, |acc, m| acc | m);
        self.relation(all, g, r)
    }

    pub fn maximal_members(&self) -> Vec<u64> {
        maximal(&self.members)
    }

    pub fn is_downward_closed(&self) -> bool {
        let set: HashSet<u64> = self.members.iter().copied().collect();
        self.members
            .iter()
            .all(|&m| bits(m).all(|i| set.contains(&(m & !(1u64 << i)))))
    }

    /// Every subset of every member.
    pub fn downward_closure(&self) -> Result<PairSetFamily> {
        let maxes = self.maximal_members();
        let mut out: HashSet<u64> = HashSet::new();
        for &m in &maxes {
            let k = m.count_ones() as usize;
            if k > MAX_CLOSURE_MEMBER {
                return Err(Error::CapExceeded {
                    what: "downward closure member",
                    size: k,
                    cap: MAX_CLOSURE_MEMBER,
                });
            }
            let mut sub = m;
            loop {
                out.insert(sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & m;
            }
        }
        Self::new(self.universe.clone(), out)
    }

    /// The same members expressed over another universe containing every
    /// pair in use.
    pub fn reindex(&self, universe: Vec<(StateId, StateId)>) -> Result<PairSetFamily> {
        let masks = self
            .members
            .iter()
            .map(|&m| mask_in(&universe, self.pairs(m)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(universe, masks)
    }

    /// Textual name of a member, e.g. `W{x2:z2,x3:z3}`.
    pub fn member_name(&self, mask: u64, g: &Automaton, r: &Automaton) -> String {
        let inner: Vec<String> = self
            .pairs(mask)
            .map(|(x, z)| format!("{}:{}", g.state_name(x), r.state_name(z)))
            .collect();
        format!("W{{{}}}", inner.join(","))
    }

    pub fn describe(&self, g: &Automaton, r: &Automaton) -> Vec<String> {
        self.members
            .iter()
            .map(|&m| self.member_name(m, g, r))
            .collect()
    }
}

fn mask_in(
    universe: &[(StateId, StateId)],
    pairs: impl IntoIterator<Item = (StateId, StateId)>,
) -> Result<u64> {
    let mut mask = 0u64;
    for p in pairs {
        let i = universe
            .iter()
            .position(|&u| u == p)
            .ok_or(Error::UniverseMismatch)?;
        mask |= 1 << i;
    }
    Ok(mask)
}

/// Free-function form of [`PairSetFamily::downward_closure`].
pub fn downward_closure(e: &PairSetFamily) -> Result<PairSetFamily> {
    e.downward_closure()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: usize, members: &[u64]) -> PairSetFamily {
        let universe = (0..n).map(|i| (i, 0)).collect();
        PairSetFamily::new(universe, members.iter().copied()).unwrap()
    }

    #[test]
    fn closure_sizes() {
        assert_eq!(fam(2, &[0]).downward_closure().unwrap(), fam(2, &[0]));
        assert_eq!(fam(2, &[0b11]).downward_closure().unwrap().len(), 4);
        let c = fam(3, &[0b011, 0b110]).downward_closure().unwrap();
        assert_eq!(c.members(), &[0, 1, 2, 3, 4, 6]);
        assert!(c.is_downward_closed());
        assert!(!fam(3, &[0b011]).is_downward_closed());
    }

    #[test]
    fn maximal_members_of_chain() {
        assert_eq!(fam(3, &[0, 1, 3, 4]).maximal_members(), vec![3, 4]);
    }

    #[test]
    fn members_outside_universe_rejected() {
        let universe = vec![(0, 0)];
        assert_eq!(
            PairSetFamily::new(universe, [0b10]),
            Err(Error::UniverseMismatch)
        );
        assert_eq!(
            PairSetFamily::new(vec![(0, 0), (0, 0)], []),
            Err(Error::UniverseMismatch)
        );
    }

    #[test]
    fn bit_iteration() {
        assert_eq!(bits(0b1010_0001).collect::<Vec<_>>(), vec![0, 5, 7]);
        assert_eq!(full_mask(64), u64::MAX);
        assert_eq!(full_mask(3), 7);
    }
}
