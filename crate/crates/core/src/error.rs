use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong while parsing, planning, embedding or
/// extracting.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported JPEG format: {0}")]
    UnsupportedFormat(String),

    #[error("corrupt JPEG stream: {0}")]
    CorruptStream(String),

    #[error("missing table: {0}")]
    MissingTable(String),

    /// A coefficient (or DC difference) does not fit the baseline size categories.
    #[error("coefficient {value} exceeds the baseline size-category range")]
    CoefficientOverflow { value: i32 },

    /// The Huffman table in use has no code for a run/size symbol.
    #[error("Huffman table has no code for symbol 0x{symbol:02x}")]
    UncodableSymbol { symbol: u8 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("reference signal has zero coded length")]
    ZeroLength,

    #[error("frequency ({u},{v}) has no embeddable coefficient")]
    EmptyFrequency { u: usize, v: usize },

    #[error("infeasible selection: need {required} bits, eligible capacity is {available}")]
    Infeasible { required: u64, available: u64 },

    #[error("no selection satisfies the size-expansion budget")]
    BudgetUnsatisfiable,

    #[error("problem too large for exhaustive search ({k} signals, limit {limit})")]
    TooLarge { k: usize, limit: usize },

    #[error("invalid selection problem: {0}")]
    InvalidProblem(String),

    #[error("block {block} has an AC coefficient that would overflow when shifted")]
    OverflowRisk { block: usize },

    #[error("bit stream too short: block needs {needed} bits, {available} left")]
    ShortStream { needed: usize, available: usize },

    #[error("payload of {requested} bits exceeds capacity of {available} bits")]
    InsufficientCapacity { requested: u64, available: u64 },

    #[error("auxiliary channel needs {needed} LSB slots, image offers {available}")]
    InsufficientAuxCapacity { needed: u64, available: u64 },

    #[error("auxiliary record rejected: {0}")]
    AuxDecode(String),

    #[error("stego image ends before the embedded data does")]
    TruncatedStego,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
