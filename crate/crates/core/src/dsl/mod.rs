//! A small expression language for q-series and a line-oriented corpus
//! format of identities.

mod ast;
mod corpus;
mod eval;
mod parser;

pub use ast::{Expr, Slot};
pub use corpus::{parse_corpus, verify_identity, CorpusError, IdentityRecord, Status, VerificationReport};
pub use eval::evaluate;
pub use parser::{parse, parse_with, ParseError, ParseErrorKind};
