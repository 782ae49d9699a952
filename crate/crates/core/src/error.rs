use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(i64),
    #[error("empty pitch-class segment")]
    EmptySegment,
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("unknown chord quality {0:?}")]
    UnknownQuality(String),
    #[error("segment {0} has a nontrivial stabilizer")]
    NontrivialStabilizer(String),
    #[error("orbit size mismatch: {0} vs {1}")]
    OrbitSizeMismatch(usize, usize),
    #[error("segment {0} is not in the universe")]
    NotInUniverse(String),
    #[error("segment {0} is not a catalog chord")]
    NotInCatalog(String),
    #[error("duplicate segment {0} in universe")]
    DuplicateSegment(String),
    #[error("universe mismatch")]
    UniverseMismatch,
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("closure exceeded cap of {0} elements")]
    ClosureCap(usize),
    #[error("element is not a member of the group")]
    NotAMember,
    #[error("group is not simply transitive")]
    NotSimplyTransitive,
    #[error("block {0} has no T-form/I-form partition")]
    NoFormPartition(String),
    #[error("contextual inversion index out of range: K{0},{1} on length {2}")]
    IndexOutOfRange(usize, usize, usize),
    #[error("scope error: {0}")]
    Scope(String),
    #[error("tritone condition fails for {0}")]
    TritoneCondition(String),
    #[error("{0} is not a prefix of {1}")]
    NotAPrefix(String, String),
    #[error("bijection check failed: {0}")]
    Bijection(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("matrix is not invertible mod 12")]
    NotInvertible,
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
