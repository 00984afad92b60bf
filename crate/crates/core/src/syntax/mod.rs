//! Input language: terms, formulas, rules, programs and their parsers.

mod ast;
mod formula;
mod lexer;
mod parser;
mod term;

pub use ast::*;
pub use formula::{AuxAtom, Formula, AUX_PREFIX};
pub use parser::{parse_formula, parse_program, parse_program_with, parse_term, ParseOptions, Parsed};
pub use term::{Atom, BinOp, EvalError, GroundAtom, Pred, Term, Value};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error("{line}:{col}: {message}")]
    Parse { line: usize, col: usize, message: String },
    #[error("line {line}: predicate `{predicate}` used with arity {second} but earlier with arity {first}")]
    ArityClash { predicate: String, first: usize, second: usize, line: usize },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
}

#[cfg(test)]
mod roundtrip {
    use super::*;
    use proptest::prelude::*;

    fn atom_text() -> impl Strategy<Value = String> {
        (
            prop::sample::select(vec!["p", "q", "r"]),
            prop::collection::vec(prop::sample::select(vec!["X", "Y", "1", "a", "X+1", "-2"]), 0..2),
        )
            .prop_map(|(p, args)| {
                if args.is_empty() {
                    p.to_string()
                } else {
                    format!("{p}{}({})", args.len(), args.join(","))
                }
            })
    }

    fn body_text() -> impl Strategy<Value = String> {
        prop_oneof![
            atom_text(),
            atom_text().prop_map(|a| format!("not {a}")),
            Just("X < Y".to_string()),
            atom_text().prop_map(|a| format!("1 {{ {a} : s(X) }} 2")),
            atom_text().prop_map(|a| format!("not #count{{ {a}; not t }} >= 1")),
        ]
    }

    fn rule_text() -> impl Strategy<Value = String> {
        let head = prop_oneof![
            atom_text(),
            Just(String::new()),
            atom_text().prop_map(|a| format!("{{ {a} }}")),
            atom_text().prop_map(|a| format!("0 {{ {a}; u }} 1")),
        ];
        (head, prop::collection::vec(body_text(), 0..3)).prop_map(|(h, b)| {
            if b.is_empty() {
                if h.is_empty() {
                    ":- s(1).".to_string()
                } else {
                    format!("{h}.")
                }
            } else {
                format!("{h} :- {}.", b.join(", "))
            }
        })
    }

    fn formula_text() -> impl Strategy<Value = String> {
        let leaf = prop::sample::select(vec!["a", "b", "c", "#false", "#true"]).prop_map(String::from);
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|f| format!("not {f}")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} & {b})")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} | {b})")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} -> {b})")),
                (inner.clone(), inner).prop_map(|(a, b)| format!("({a} <-> {b})")),
            ]
        })
    }

    proptest! {
        #[test]
        fn program_print_parse_fixpoint(rules in prop::collection::vec(rule_text(), 0..6)) {
            let src = format!("{}\n#minimize {{ 2,X : p1(X) ; q }}.", rules.join("\n"));
            if let Ok(p) = parse_program(&src) {
                let again = parse_program(&p.to_string()).unwrap();
                prop_assert_eq!(again, p);
            }
        }

        #[test]
        fn formula_print_parse_fixpoint(src in formula_text()) {
            let f = parse_formula(&src).unwrap();
            let again = parse_formula(&f.to_string()).unwrap();
            prop_assert_eq!(again, f);
        }
    }
}
