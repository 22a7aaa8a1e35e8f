//! Finite classified sets and their bicartesian closed structure.

mod element;
mod exponential;
mod label;
mod limits;
mod morphism;
mod serial;
mod set;

pub use element::Element;
pub use exponential::{candidate_count, enumerate_hom, enumerate_points, EnumCap, Exponential};
pub use label::{Label, LabelUniverse};
pub use limits::{
    absurd, bang, initial, point, product_morphism, terminal, Coequalizer, Coproduct, Equalizer,
    Product,
};
pub(crate) use limits::{factor_through_classes, quotient_by};
pub use morphism::Morphism;
pub use set::{ClassifiedSet, Relation};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CSetError {
    #[error("invalid label `{0}`")]
    InvalidLabel(String),
    #[error("duplicate label {0}")]
    DuplicateLabel(Label),
    #[error("unknown label {0}")]
    UnknownLabel(Label),
    #[error("relation at {label} mentions {element}, which is not in the carrier")]
    RelationOutOfCarrier { label: Label, element: Element },
    #[error("duplicate carrier element {0}")]
    DuplicateElement(Element),
    #[error("label universes differ")]
    UniverseMismatch,
    #[error("mapping is not total: no image for {0}")]
    NotTotal(Element),
    #[error("mapping gives {0} two images")]
    AmbiguousMapping(Element),
    #[error("{0} is not in the source carrier")]
    NotInSource(Element),
    #[error("{0} is not in the target carrier")]
    NotInTarget(Element),
    #[error("not a morphism: {x} R_{label} {y} is not preserved")]
    NotAMorphism {
        label: Label,
        x: Element,
        y: Element,
    },
    #[error("morphism endpoints do not match")]
    EndpointMismatch,
    #[error("morphisms are not parallel")]
    NotParallel,
    #[error("morphism is not equalized")]
    NotEqualized,
    #[error("morphism is not coequalized")]
    NotCoequalized,
    #[error("map is not constant on the class of {0}")]
    NotConstantOnClasses(Element),
    #[error("enumeration cap {limit} exceeded by {codomain}^{domain} candidate functions")]
    EnumerationCapExceeded {
        limit: u64,
        domain: usize,
        codomain: usize,
    },
    #[error("morphism endpoints are not of the required modal form")]
    ShapeMismatch,
    #[error("element syntax error at byte {pos}: {msg}")]
    ElementParse { pos: usize, msg: String },
}
