//! Shipped distinguished sentences.

use crate::forms::Class;
use crate::logic::{parse, Formula};

/// 3-colorability of the graph `R`, over `{R²}`.
pub const THREE_COLORING: &str = "EC1:1 EC2:1 EC3:1 (Ax ((C1(x) | C2(x)) | C3(x)) & \
     Ax Ay (R(x,y) -> ((~(C1(x) & C1(y)) & ~(C2(x) & C2(y))) & ~(C3(x) & C3(y)))))";

/// Non-3-colorability of `R`, over `{R²}`.
pub const NON_THREE_COLORING: &str = "AC1:1 AC2:1 AC3:1 ~(Ax ((C1(x) | C2(x)) | C3(x)) & \
     Ax Ay (R(x,y) -> ((~(C1(x) & C1(y)) & ~(C2(x) & C2(y))) & ~(C3(x) & C3(y)))))";

/// The shipped distinguished sentence for `class` over the unordered base
/// vocabulary `{R²}` (`ordered = false`) or `{R¹, <}` (`ordered = true`).
/// Only NP and coNP on unordered graphs ship one.
pub fn default_upsilon(class: Class, ordered: bool) -> Option<Formula> {
    let text = match (class, ordered) {
        (Class::Np, false) => THREE_COLORING,
        (Class::CoNp, false) => NON_THREE_COLORING,
        _ => return None,
    };
    Some(parse(text).expect("shipped sentences parse"))
}
