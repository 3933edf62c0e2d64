//! Formulas: syntax, serialization, the vocabulary transports, encoding
//! sentences, and fragment classification.

pub mod ast;
pub mod check;
pub mod fragment;
pub mod godel;
pub mod parse;
mod print;
pub mod psi;
pub mod transform;

pub use ast::{CharLeaf, Fixpoint, Formula};
pub use check::{check_formula, check_sentence, WfError};
pub use fragment::{fragment_of, Fragment};
pub use godel::{godel_decode, godel_encode, GodelError};
pub use parse::{parse, SyntaxError};
pub use psi::{psi_encode, psi_recognize, EmptyString};
pub use transform::{apply_t_ord, apply_t_unord, fresh_variable, TransformError};
