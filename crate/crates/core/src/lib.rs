//! Finite classified sets, levelled cohesion, and noninterference checking for
//! four modal information-flow calculi.

pub mod calculi;
pub mod cohesion;
pub mod cset;
pub mod harness;
pub mod syntax;
