//! Event alphabets partitioned into controllable and uncontrollable events,
//! with a distinguished subset of required events.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::ValidationError;

/// Dense index of an event, assigned in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EventId(pub usize);

impl EventId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Attributes carried by each event declaration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct EventAttrs {
    pub uncontrollable: bool,
    pub required: bool,
}

impl EventAttrs {
    pub const CONTROLLABLE: EventAttrs = EventAttrs {
        uncontrollable: false,
        required: false,
    };
    pub const UNCONTROLLABLE: EventAttrs = EventAttrs {
        uncontrollable: true,
        required: false,
    };

    pub fn required(mut self) -> Self {
        self.required = true;
        self
    }
}

/// A subset of an alphabet, stored as a membership vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EventSet(Vec<bool>);

impl EventSet {
    pub fn empty(len: usize) -> Self {
        EventSet(vec![false; len])
    }

    pub fn full(len: usize) -> Self {
        EventSet(vec![true; len])
    }

    pub fn from_ids(len: usize, ids: impl IntoIterator<Item = EventId>) -> Self {
        let mut set = Self::empty(len);
        for id in ids {
            set.insert(id);
        }
        set
    }

    pub fn universe_len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, e: EventId) -> bool {
        self.0.get(e.0).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, e: EventId) {
        self.0[e.0] = true;
    }

    pub fn iter(&self) -> impl Iterator<Item = EventId> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| EventId(i))
    }

    pub fn is_empty(&self) -> bool {
        !self.0.iter().any(|&b| b)
    }

    pub fn len(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn is_subset(&self, other: &EventSet) -> bool {
        self.0.len() == other.0.len() && self.iter().all(|e| other.contains(e))
    }
}

/// A finite, ordered event set. The controllable events are exactly the
/// events not marked uncontrollable.
#[derive(Clone, Debug, Default)]
pub struct Alphabet {
    names: Vec<String>,
    attrs: Vec<EventAttrs>,
    index: HashMap<String, EventId>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.attrs == other.attrs
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an alphabet from `(name, attrs)` declarations.
    pub fn from_decls<'a>(
        decls: impl IntoIterator<Item = (&'a str, EventAttrs)>,
    ) -> Result<Self, ValidationError> {
        let mut alphabet = Alphabet::new();
        for (name, attrs) in decls {
            alphabet.add_event(name, attrs)?;
        }
        Ok(alphabet)
    }

    pub fn add_event(&mut self, name: &str, attrs: EventAttrs) -> Result<EventId, ValidationError> {
        if name.is_empty() {
            return Err(ValidationError::EmptyEventName);
        }
        if self.index.contains_key(name) {
            return Err(ValidationError::DuplicateEvent(name.to_string()));
        }
        let id = EventId(self.names.len());
        self.names.push(name.to_string());
        self.attrs.push(attrs);
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn events(&self) -> impl Iterator<Item = EventId> {
        (0..self.names.len()).map(EventId)
    }

    pub fn name(&self, e: EventId) -> &str {
        &self.names[e.0]
    }

    pub fn attrs(&self, e: EventId) -> EventAttrs {
        self.attrs[e.0]
    }

    pub fn lookup(&self, name: &str) -> Option<EventId> {
        self.index.get(name).copied()
    }

    pub fn is_uncontrollable(&self, e: EventId) -> bool {
        self.attrs[e.0].uncontrollable
    }

    pub fn is_controllable(&self, e: EventId) -> bool {
        !self.is_uncontrollable(e)
    }

    pub fn is_required(&self, e: EventId) -> bool {
        self.attrs[e.0].required
    }

    pub fn all(&self) -> EventSet {
        EventSet::full(self.len())
    }

    pub fn uncontrollable(&self) -> EventSet {
        EventSet(self.attrs.iter().map(|a| a.uncontrollable).collect())
    }

    pub fn controllable(&self) -> EventSet {
        EventSet(self.attrs.iter().map(|a| !a.uncontrollable).collect())
    }

    pub fn required(&self) -> EventSet {
        EventSet(self.attrs.iter().map(|a| a.required).collect())
    }

    /// Resolves event names into a set, failing on the first unknown name.
    pub fn set_of(&self, names: &[&str]) -> Result<EventSet, ValidationError> {
        let mut set = EventSet::empty(self.len());
        for name in names {
            let id = self
                .lookup(name)
                .ok_or_else(|| ValidationError::UnknownEvent(name.to_string()))?;
            set.insert(id);
        }
        Ok(set)
    }

    /// Same events and controllability, with the required subset replaced.
    pub fn with_required(&self, required: &EventSet) -> Alphabet {
        assert_eq!(
            required.universe_len(),
            self.len(),
            "event set over another alphabet"
        );
        let mut out = self.clone();
        for (i, a) in out.attrs.iter_mut().enumerate() {
            a.required = required.contains(EventId(i));
        }
        out
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, name) in self.names.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{name}")?;
            let a = self.attrs[i];
            if a.uncontrollable {
                write!(f, "/uc")?;
            }
            if a.required {
                write!(f, "/r")?;
            }
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_is_complementary() {
        let a = Alphabet::from_decls([
            ("c", EventAttrs::CONTROLLABLE),
            ("uc1", EventAttrs::UNCONTROLLABLE),
            ("l", EventAttrs::CONTROLLABLE.required()),
        ])
        .unwrap();
        for e in a.events() {
            assert_ne!(a.uncontrollable().contains(e), a.controllable().contains(e));
        }
        assert_eq!(
            a.required().iter().map(|e| a.name(e)).collect::<Vec<_>>(),
            ["l"]
        );
    }

    #[test]
    fn duplicate_and_empty_names_rejected() {
        let mut a = Alphabet::new();
        a.add_event("go", EventAttrs::CONTROLLABLE).unwrap();
        assert_eq!(
            a.add_event("go", EventAttrs::UNCONTROLLABLE),
            Err(ValidationError::DuplicateEvent("go".into()))
        );
        assert_eq!(
            a.add_event("", EventAttrs::CONTROLLABLE),
            Err(ValidationError::EmptyEventName)
        );
    }

    #[test]
    fn with_required_keeps_controllability() {
        let a = Alphabet::from_decls([
            ("a", EventAttrs::UNCONTROLLABLE.required()),
            ("b", EventAttrs::CONTROLLABLE),
        ])
        .unwrap();
        let b = a.with_required(&EventSet::empty(2));
        assert!(b.required().is_empty());
        assert_eq!(a.uncontrollable(), b.uncontrollable());
        assert_ne!(a, b);
    }
}
