use alloc::string::String;

use crate::coset::EnumerationError;
use crate::parse::ParseError;
use crate::word::PresentationError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error("relator {index} (`{relator}`) is not mapped to the identity")]
    RelatorViolated { index: usize, relator: String },
    #[error(
        "generator images do not define a homomorphism (element {element}, generator {generator})"
    )]
    NotHomomorphism { element: u32, generator: usize },
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group of order {order} is not a {p}-group")]
    NotPGroup { order: usize, p: u64 },
    #[error("group is not abelian")]
    NotAbelian,
    #[error("action is not regular: {0}")]
    NotRegular(String),
    #[error("coset table is incomplete")]
    IncompleteTable,
    #[error("coset table was enumerated over a nontrivial subgroup")]
    NontrivialSubgroup,
    #[error("group has no source presentation")]
    NoPresentation,
    #[error("generating set is not closed under inversion")]
    NotSymmetric,
    #[error("set does not generate the group")]
    NotGenerating,
    #[error("homomorphism is not surjective")]
    NotSurjective,
    #[error("homomorphisms do not share a codomain")]
    CodomainMismatch,
    #[error("group of order {order} exceeds the bound {bound}")]
    TooLarge { order: usize, bound: usize },
    #[error("element set is not a subgroup")]
    NotSubgroup,
}

pub type Result<T> = core::result::Result<T, Error>;
