//! Randomized law suites and the noninterference and soundness checkers.

mod constancy;
pub mod corpus;
mod inhabit;
mod laws;
mod nonint;
mod program;
mod random;
mod report;
mod soundness;

pub use constancy::{check_constancy, check_constancy_between};
pub use inhabit::enumerate_inhabitants;
pub use laws::{run_law_suite, LawGroup};
pub use nonint::{check_noninterference, is_ground, validate_side_conditions, NiQuery};
pub use program::{Program, ProgramError};
pub use random::{random_classified_set, random_set, random_set_of_size, random_subset, trial_rng};
pub use report::{CheckReport, Failure, Tally};
pub use soundness::{check_soundness, is_canonical};

use serde_json::{json, Value};
use thiserror::Error;

use crate::calculi::{DenoteError, PosetError, TypeError};
use crate::cset::{CSetError, ClassifiedSet, LabelUniverse, Morphism};
use crate::syntax::NormalizeError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("side condition unmet: {0}")]
    SideConditionUnmet(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0}")]
    UnknownGroup(String),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error(transparent)]
    Denote(#[from] DenoteError),
    #[error(transparent)]
    Set(#[from] CSetError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// Unwraps a construction needed by a law. A cap overflow becomes a note,
/// anything else a failure.
pub(crate) fn attempt<T>(
    tally: &mut Tally,
    law: &str,
    inputs: impl Fn() -> Value,
    r: Result<T, CSetError>,
) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e @ CSetError::EnumerationCapExceeded { .. }) => {
            tally.note(format!("{law}: skipped ({e})"));
            None
        }
        Err(e) => {
            tally.fail(law, inputs(), json!({"error": e.to_string()}));
            None
        }
    }
}

pub(crate) fn set_json(x: &ClassifiedSet) -> Value {
    serde_json::to_value(x).expect("sets serialize")
}

pub(crate) fn labels_json(u: &LabelUniverse) -> Value {
    json!(u.labels().iter().map(|l| l.as_str()).collect::<Vec<_>>())
}

pub(crate) fn table_json(f: &Morphism) -> Value {
    json!(f
        .mapping_table()
        .iter()
        .map(|(x, y)| [x.to_string(), y.to_string()])
        .collect::<Vec<_>>())
}
