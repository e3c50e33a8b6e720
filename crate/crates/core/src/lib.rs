//! Cohomology of complements of central toric arrangements.
//!
//! Given the integer matrix of characters of a central toric arrangement this
//! crate computes its arithmetic matroid, the poset of layers, the Poincaré
//! polynomial of the complement, and an explicit presentation of the rational
//! cohomology ring by generators `e_{W,A;B}` and relations. The [`verifier`]
//! checks the graded dimensions of that presentation against two independent
//! combinatorial formulas.

pub mod arithmetic_matroid;
pub mod exact_linalg;
pub mod layers;
pub mod presentation;
pub mod subset;
pub mod verifier;

pub use arithmetic_matroid::{poincare_polynomial, ArithmeticMatroid, CharacterMatrix, CircuitDependency};
pub use exact_linalg::{IntMatrix, RatVector};
pub use layers::{essentialize, CoveringData, Layer, LayerId, LayerPoset, ToricArrangement};
pub use presentation::{build_presentation, GeneratorSymbol, LinComb, Presentation};
pub use subset::{inversion_length, Subset};
pub use verifier::{graded_decomposition_dims, quotient_dimensions, verify, GradedDims, VerifyReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("zero character at index {0}")]
    ZeroCharacter(usize),
    #[error("character {0} is not primitive")]
    NotPrimitive(usize),
    #[error("character has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("at most 64 characters are supported, got {0}")]
    TooManyCharacters(usize),
    #[error("subset {0} is not contained in a ground set of size {1}")]
    IndexOutOfRange(Subset, usize),
    #[error("subset {0} is dependent")]
    Dependent(Subset),
    #[error("subset {0} is not a circuit")]
    NotACircuit(Subset),
    #[error("sets {0} and {1} overlap")]
    OverlappingSets(Subset, Subset),
    #[error("{0} does not contain exactly one circuit")]
    NotCorankOne(Subset),
    #[error("covering degree of {0} depends on the chosen circuit element")]
    CoveringDegreeMismatch(Subset),
    #[error("layer or element {0} is not contained where required")]
    NotContained(usize),
    #[error("layer {layer} is not a component of the intersection over {subset}")]
    NotAComponent { layer: usize, subset: Subset },
    #[error("vector is not an integer dependency among the characters")]
    NotADependency,
    #[error("arrangement is not unimodular")]
    NotUnimodular,
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
}
