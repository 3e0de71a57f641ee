//! Supervisory control synthesis for nondeterministic discrete-event
//! systems under a simulation-based specification with required events.
//!
//! A plant `G` and a specification `R` share an alphabet whose events are
//! either controllable or uncontrollable, and some of which are required. A
//! supervisor `S` solves the problem when it never blocks an uncontrollable
//! plant move and `S || G` is cc-simulated by `R`: every move of the
//! supervised plant is matched by `R`, and every required move `R` offers is
//! offered back.
//!
//! The [`synthesis`] module decides whether a solution exists and builds a
//! maximally permissive one; [`relation`] and [`control`] provide the
//! independent checks used to verify it.

pub mod alphabet;
pub mod automaton;
pub mod cli;
pub mod control;
pub mod dot;
pub mod error;
pub mod format;
pub mod instances;
pub mod relation;
pub mod synthesis;
pub mod testkit;

pub use alphabet::{Alphabet, EventAttrs, EventId, EventSet};
pub use automaton::{Automaton, AutomatonBuilder, StateId};
pub use error::{Error, Result, ValidationError};
