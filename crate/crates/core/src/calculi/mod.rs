//! The four calculi: security posets, typing, and denotation into classified sets.

mod denote;
mod poset;
mod typing;

pub use denote::{semantic_violation_count, DenEnv, DenoteError};
pub use poset::{PosetError, SecurityPoset};
pub use typing::{
    check_against, check_type, is_codiscrete_type, is_protected_type, typecheck, Calculus,
    TypeError, TypingContext,
};
