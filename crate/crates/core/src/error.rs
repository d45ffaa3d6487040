use thiserror::Error;

/// Errors shared across the crate.
///
/// Constructors and operations validate their combinatorial preconditions
/// eagerly and return one of these variants instead of panicking, so that the
/// CLI can surface a readable message and a nonzero exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("unsupported word length {0} (this crate handles lengths 1..=16)")]
    BadLength(usize),

    #[error("word {word:#06x} does not fit in length {len}")]
    WordOutOfRange { word: u16, len: usize },

    #[error("coordinate {0} out of range for length {1}")]
    BadCoordinate(usize, usize),

    #[error("{0}")]
    NotExtendedPerfect(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("not a permutation of 0..=7: {0:?}")]
    NotAPermutation(Vec<u8>),

    #[error("code is not a doubling of two length-8 partitions: {0}")]
    NotADoubling(String),

    #[error("difference supports of the class pair do not form a perfect matching ({0} pair masks seen)")]
    NotAMatching(usize),

    #[error("not a Steiner triple system: {0}")]
    NotSteiner(String),

    #[error("subspace is not contained in the kernel of the code (offending word {0:#06x})")]
    NotInKernel(u16),

    #[error("word {0:#06x} is not a codeword")]
    NotACodeword(u16),

    #[error("code is not foldable over the subspace: word {word:#06x} sees a different label set on coset pair ({pair:?})")]
    NotFoldable { word: u16, pair: (usize, usize) },

    #[error("mask {0:#06x} does not have exactly {1} bits set")]
    BadMask(u16, u32),

    #[error("kernel dimension {0} outside the range handled by the verifier (5..=9)")]
    KappaOutOfRange(usize),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
