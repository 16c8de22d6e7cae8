use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty chain")]
    EmptyChain,

    #[error("invalid fraction {r}/{a}: need gcd(r, a) = 1 and 0 < a < r")]
    InvalidFraction { r: String, a: String },

    #[error("chain entry {entry} at position {position} is below the minimum {min}")]
    EntryTooSmall {
        position: usize,
        entry: String,
        min: u32,
    },

    #[error("sequence too short: need length at least {min}, got {len}")]
    TooShort { len: usize, min: usize },

    #[error("depth {depth} exceeds the configured limit {limit}")]
    DepthExceeded { depth: usize, limit: usize },

    #[error("{chain} is not a k-Wahl chain")]
    NotWahl { chain: String },

    #[error("blow-up position {position} is invalid for a sequence of length {len}")]
    BadPosition { position: String, len: usize },

    #[error("invalid triangulation: {0}")]
    BadTriangulation(String),

    #[error("mutation at index {index} gives non-positive value {value}")]
    NonPositiveRoot { index: usize, value: String },

    #[error("({x}, {y}, {z}) is not a {k}-GM triple")]
    NotGmTriple {
        k: u64,
        x: String,
        y: String,
        z: String,
    },

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    #[error("{value} is too large for the brute-force oracle (limit {limit})")]
    TooLarge { value: String, limit: u64 },

    #[error("counterexample {reproducer}: {detail}")]
    Counterexample { reproducer: String, detail: String },

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}
