use thiserror::Error;

/// A violated automaton invariant, reported for the first offending item.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("initial state set is empty")]
    EmptyInitialSet,
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("duplicate state id `{0}`")]
    DuplicateStateId(String),
    #[error("duplicate event `{0}`")]
    DuplicateEvent(String),
    #[error("event names must be nonempty")]
    EmptyEventName,
    #[error("state names must be nonempty")]
    EmptyStateName,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("automata are defined over different alphabets")]
    AlphabetMismatch,
    #[error("relation universes do not match")]
    UniverseMismatch,
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("{what} of size {size} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("not a controllability family: {0}")]
    NotAFamily(String),
    #[error("relation is not a cc-simulation: {0}")]
    NotCcSimulation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
