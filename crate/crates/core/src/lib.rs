pub mod aristotelian;
pub mod bits;
pub mod cfg;
pub mod charsets;
pub mod config;
pub mod eval;
pub mod forms;
pub mod logic;
pub mod machine;
pub mod natcode;
pub mod structure;
pub mod vocab;

pub use bits::Bits;
pub use logic::Formula;
pub use structure::{enumerate_structures, is_isomorphic, Structure, StructureError};
pub use vocab::Vocabulary;
