//! Line-oriented text format for automata.
//!
//! ```text
//! # comment
//! event start uncontrollable
//! event cancel uncontrollable required
//! event next
//! state x0 initial
//! state x1
//! trans x0 start x1
//! ```
//!
//! Tokens are whitespace separated and `#` starts a comment. Declarations may
//! appear in any order; transitions are resolved after all events and states
//! are known. Serialization is canonical: events and states in declaration
//! order, transitions sorted by `(source, event, target)` index.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::alphabet::{Alphabet, EventAttrs};
use crate::automaton::{Automaton, AutomatonBuilder};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownDirective(String),
    MissingArgument(&'static str),
    UnexpectedToken(String),
    UnknownEvent(String),
    UnknownState(String),
    DuplicateState(String),
    InconsistentEvent(String),
    MissingInitial,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ParseErrorKind::*;
        match self {
            UnknownDirective(d) => write!(f, "unknown directive `{d}`"),
            MissingArgument(what) => write!(f, "missing {what}"),
            UnexpectedToken(t) => write!(f, "unexpected token `{t}`"),
            UnknownEvent(e) => write!(f, "unknown event `{e}`"),
            UnknownState(s) => write!(f, "unknown state `{s}`"),
            DuplicateState(s) => write!(f, "duplicate state `{s}`"),
            InconsistentEvent(e) => write!(f, "event `{e}` redeclared with different attributes"),
            MissingInitial => write!(f, "no initial state declared"),
        }
    }
}

/// A parse failure at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

impl Token<'_> {
    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            kind,
        }
    }
}

fn tokenize(line_no: usize, line: &str) -> Vec<Token<'_>> {
    let code = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, c) in code.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                tokens.push((s, i));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        tokens.push((s, code.len()));
    }
    tokens
        .into_iter()
        .map(|(s, e)| Token {
            text: &code[s..e],
            line: line_no,
            col: code[..s].chars().count() + 1,
        })
        .collect()
}

/// Parses one automaton from text.
pub fn parse_automaton(text: &str) -> Result<Automaton, ParseError> {
    let mut alphabet = Alphabet::new();
    let mut states: Vec<String> = Vec::new();
    let mut state_index: HashMap<String, usize> = HashMap::new();
    let mut initial: Vec<String> = Vec::new();
    let mut transitions: Vec<[Token<'_>; 3]> = Vec::new();
    let mut last_line = 0;

    for (i, line) in text.lines().enumerate() {
        last_line = i + 1;
        let tokens = tokenize(i + 1, line);
        let Some(head) = tokens.first() else { continue };
        let args = &tokens[1..];
        match head.text {
            "event" => {
                let name = args
                    .first()
                    .ok_or_else(|| head.error(ParseErrorKind::MissingArgument("event name")))?;
                let mut attrs = EventAttrs::default();
                for t in &args[1..] {
                    match t.text {
                        "uncontrollable" if !attrs.uncontrollable => attrs.uncontrollable = true,
                        "required" if !attrs.required => attrs.required = true,
                        other => return Err(t.error(ParseErrorKind::UnexpectedToken(other.into()))),
                    }
                }
                match alphabet.lookup(name.text) {
                    Some(id) if alphabet.attrs(id) == attrs => {}
                    Some(_) => {
                        return Err(name.error(ParseErrorKind::InconsistentEvent(name.text.into())))
                    }
                    None => {
                        alphabet
                            .add_event(name.text, attrs)
                            .expect("fresh nonempty event name");
                    }
                }
            }
            "state" => {
                let name = args
                    .first()
                    .ok_or_else(|| head.error(ParseErrorKind::MissingArgument("state name")))?;
                let mut is_initial = false;
                for t in &args[1..] {
                    match t.text {
                        "initial" if !is_initial => is_initial = true,
                        other => return Err(t.error(ParseErrorKind::UnexpectedToken(other.into()))),
                    }
                }
                if state_index.contains_key(name.text) {
                    return Err(name.error(ParseErrorKind::DuplicateState(name.text.into())));
                }
                state_index.insert(name.text.to_string(), states.len());
                states.push(name.text.to_string());
                if is_initial {
                    initial.push(name.text.to_string());
                }
            }
            "trans" => {
                const WHAT: [&str; 3] = ["source state", "event", "target state"];
                for (k, what) in WHAT.iter().enumerate() {
                    if args.len() <= k {
                        return Err(head.error(ParseErrorKind::MissingArgument(what)));
                    }
                }
                if let Some(extra) = args.get(3) {
                    return Err(extra.error(ParseErrorKind::UnexpectedToken(extra.text.into())));
                }
                transitions.push([args[0], args[1], args[2]]);
            }
            other => return Err(head.error(ParseErrorKind::UnknownDirective(other.into()))),
        }
    }

    let mut builder = AutomatonBuilder::new(alphabet.clone());
    for s in &states {
        builder.state(s);
    }
    for s in &initial {
        builder.mark_initial(s);
    }
    for [src, ev, dst] in &transitions {
        for s in [src, dst] {
            if !state_index.contains_key(s.text) {
                return Err(s.error(ParseErrorKind::UnknownState(s.text.into())));
            }
        }
        if alphabet.lookup(ev.text).is_none() {
            return Err(ev.error(ParseErrorKind::UnknownEvent(ev.text.into())));
        }
        builder.transition(src.text, ev.text, dst.text);
    }
    if initial.is_empty() {
        return Err(ParseError {
            line: last_line.max(1),
            col: 1,
            kind: ParseErrorKind::MissingInitial,
        });
    }
    Ok(builder.build().expect("all references resolved above"))
}

/// Canonical text form; `parse_automaton` of the output reproduces `a`.
pub fn serialize_automaton(a: &Automaton) -> String {
    let mut out = String::new();
    let alphabet = a.alphabet();
    for e in alphabet.events() {
        out.push_str("event ");
        out.push_str(alphabet.name(e));
        if alphabet.is_uncontrollable(e) {
            out.push_str(" uncontrollable");
        }
        if alphabet.is_required(e) {
            out.push_str(" required");
        }
        out.push('\n');
    }
    for s in a.states() {
        out.push_str("state ");
        out.push_str(a.state_name(s));
        if a.is_initial(s) {
            out.push_str(" initial");
        }
        out.push('\n');
    }
    for &(s, e, d) in a.transitions() {
        let _ = writeln!(
            out,
            "trans {} {} {}",
            a.state_name(s),
            alphabet.name(e),
            a.state_name(d)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    #[test]
    fn scanner_plant_attributes() {
        let g = instances::scanner_plant();
        let alphabet = g.alphabet();
        let uc: Vec<&str> = alphabet
            .uncontrollable()
            .iter()
            .map(|e| alphabet.name(e))
            .collect();
        assert_eq!(uc, ["start", "scan", "put", "cancel", "pay"]);
        let req: Vec<&str> = alphabet
            .required()
            .iter()
            .map(|e| alphabet.name(e))
            .collect();
        assert_eq!(req, ["cancel"]);
        let x1 = g.state("x1").unwrap();
        let scan = g.event("scan").unwrap();
        assert_eq!(g.successors(x1, scan).len(), 2);
    }

    #[test]
    fn undeclared_event_is_reported_at_its_column() {
        let err = parse_automaton("state x0 initial\nstate x1\ntrans x0 go x1\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownEvent("go".into()));
        assert_eq!((err.line, err.col), (3, 10));
    }

    #[test]
    fn empty_file_has_no_initial_state() {
        assert_eq!(
            parse_automaton("").unwrap_err().kind,
            ParseErrorKind::MissingInitial
        );
        assert_eq!(
            parse_automaton("# nothing here\n").unwrap_err().kind,
            ParseErrorKind::MissingInitial
        );
    }

    #[test]
    fn malformed_lines() {
        let cases = [
            (
                "evnt a",
                ParseErrorKind::UnknownDirective("evnt".into()),
                (1, 1),
            ),
            (
                "event",
                ParseErrorKind::MissingArgument("event name"),
                (1, 1),
            ),
            (
                "event a fast",
                ParseErrorKind::UnexpectedToken("fast".into()),
                (1, 9),
            ),
            (
                "event a\nevent a uncontrollable",
                ParseErrorKind::InconsistentEvent("a".into()),
                (2, 7),
            ),
            (
                "state s initial\n  state s",
                ParseErrorKind::DuplicateState("s".into()),
                (2, 9),
            ),
            (
                "event a\nstate s initial\ntrans s a",
                ParseErrorKind::MissingArgument("target state"),
                (3, 1),
            ),
            (
                "event a\nstate s initial\ntrans s a t",
                ParseErrorKind::UnknownState("t".into()),
                (3, 11),
            ),
        ];
        for (text, kind, pos) in cases {
            let err = parse_automaton(text).unwrap_err();
            assert_eq!(err.kind, kind, "{text}");
            assert_eq!((err.line, err.col), pos, "{text}");
        }
    }

    #[test]
    fn comments_and_forward_references() {
        let a = parse_automaton(
            "trans b e a  # before declarations\nstate a initial\nstate b initial # two\nevent e required\n",
        )
        .unwrap();
        assert_eq!(a.initial().len(), 2);
        assert_eq!(a.transitions().len(), 1);
    }

    #[test]
    fn canonical_form_is_a_fixed_point() {
        let g = instances::scanner_plant();
        let once = serialize_automaton(&g);
        let again = serialize_automaton(&parse_automaton(&once).unwrap());
        assert_eq!(once, again);
        assert_eq!(parse_automaton(&once).unwrap(), g);
    }

    #[test]
    fn transition_free_automaton_has_only_declarations() {
        let text = "event a uncontrollable\nstate s initial\nstate t\n";
        let a = parse_automaton(text).unwrap();
        assert_eq!(serialize_automaton(&a), text);
    }
}
