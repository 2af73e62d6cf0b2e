//! Error type shared by the whole crate.

use thiserror::Error;

/// Errors raised by construction and geometry predicates.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("angle denominator must be nonzero")]
    ZeroDenominator,

    #[error("digit {digit} is not a valid base-{base} digit")]
    InvalidDigit { digit: u32, base: u32 },

    #[error("digit string must be nonempty")]
    EmptyDigits,

    #[error("map degree must be at least 2, got {0}")]
    DegreeTooSmall(u32),

    #[error("operation rejects degenerate chords")]
    DegenerateChord,

    #[error("image leaf is a diameter; sibling collections over diameters are not modeled")]
    DiameterImage,

    #[error("endpoint distance is undefined for crossing chords")]
    CrossingChords,

    #[error("leaf of length {length} is a multiple of 1/(2·{d}); portrait arcs would be neither short nor long")]
    BoundaryLeaf { d: u32, length: String },

    #[error("{context}: value {value} is outside {expected}")]
    OutOfRange {
        context: &'static str,
        value: String,
        expected: &'static str,
    },

    #[error("cannot parse {kind} from {input:?}")]
    Parse { kind: &'static str, input: String },

    #[error("leaves do not form a sibling collection over the image: {0}")]
    InvalidCollection(String),

    #[error("polygon needs at least two distinct vertices")]
    TooFewVertices,

    #[error("polygon vertices must be pairwise distinct")]
    DuplicateVertices,

    #[error("orbit analysis requires an identity-return orbit under sigma_3")]
    NotSigma3IdentityReturn,

    #[error("canonical tree code is malformed: {0}")]
    BadTreeCode(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
