//! Abstract syntax of the type theory, index calculus, parser and printer.

pub mod ast;
pub mod ops;
pub mod parse;
pub mod print;

pub use ast::{Context, Entry, Hint, Judgement, Term, Type};
pub use ops::{lift, occurs_free, rename, shift, substitute, NegativeIndex, Syntax};
pub use parse::{parse_script, parse_term, parse_type, Loc, ParseError, Scope, Script, Statement};
pub use print::{print_context, print_judgement, print_term, print_type};

/// Alpha-equality. Binders are positional, so this is plain structural
/// equality.
pub fn struct_equal<T: PartialEq>(a: &T, b: &T) -> bool {
    a == b
}
