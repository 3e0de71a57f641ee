//! Graphviz output.

use std::fmt::Write as _;

use crate::automaton::Automaton;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per state in state order, initial states drawn with a double
/// border, one edge per transition in canonical order. Uncontrollable events
/// are dashed; required events are bold.
pub fn export_dot(a: &Automaton) -> String {
    let alphabet = a.alphabet();
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
    for s in a.states() {
        let name = quote(a.state_name(s));
        if a.is_initial(s) {
            let _ = writeln!(out, "  {name} [peripheries=2];");
        } else {
            let _ = writeln!(out, "  {name};");
        }
    }
    for &(s, e, d) in a.transitions() {
        let mut attrs = vec![format!("label={}", quote(alphabet.name(e)))];
        if alphabet.is_uncontrollable(e) {
            attrs.push("style=dashed".into());
        }
        if alphabet.is_required(e) {
            attrs.push("penwidth=2".into());
        }
        let _ = writeln!(
            out,
            "  {} -> {} [{}];",
            quote(a.state_name(s)),
            quote(a.state_name(d)),
            attrs.join(", ")
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{Alphabet, EventAttrs};
    use crate::automaton::AutomatonBuilder;
    use crate::instances;

    #[test]
    fn single_state() {
        let a = Alphabet::from_decls([("a", EventAttrs::CONTROLLABLE)]).unwrap();
        let mut b = AutomatonBuilder::new(a);
        b.initial_state("s");
        let dot = export_dot(&b.build().unwrap());
        assert_eq!(dot.matches("->").count(), 0);
        assert!(dot.contains("\"s\" [peripheries=2];"));
    }

    #[test]
    fn edges_and_styles() {
        let g = instances::scanner_plant();
        let dot = export_dot(&g);
        assert_eq!(dot.matches("->").count(), g.transitions().len());
        assert!(dot.contains("\"x0\" -> \"x1\" [label=\"start\", style=dashed];"));
        assert!(dot.contains("label=\"next\"]"));
        assert_eq!(dot, export_dot(&g));
    }
}
