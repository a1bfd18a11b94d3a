//! Signatures, formulas, parsing/printing and syntactic translations.

mod formula;
mod parser;
mod printer;
mod signature;
mod translate;

pub use formula::{Formula, SortError, Var};
pub use parser::{is_keyword, parse_formula, ParseError};
pub use printer::print_formula;
pub use signature::{
    dyn_arity, dyn_sort, manifest_rel, RelKind, RelationDecl, Signature, SignatureError, STAT,
};
pub use translate::{
    classify, dynamic_substitute, is_sigma2, potentialist_translate, split_sigma2, Classification,
    TranslateError, WrapMode,
};
