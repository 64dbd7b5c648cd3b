use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty array")]
    EmptyArray,
    #[error("nonpositive wave number: {0}")]
    NonPositiveWaveNumber(f64),
    #[error("expansion too large: {0} barriers (limit {limit})", limit = crate::transfer::EXPANSION_LIMIT)]
    ExpansionTooLarge(usize),
    #[error("barrier positions must be strictly increasing (index {0})")]
    NonIncreasingPositions(usize),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("bad scan range: [{0}, {1}] with {2} points")]
    BadScanRange(f64, f64, usize),
    #[error("too few points: need at least {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("pole of transcendental form; use oracle")]
    Pole,
    #[error("tangent pole at phase {0}")]
    TanPole(f64),
    #[error("branch empty: no positive wave number on branch {0}")]
    BranchEmpty(u32),
    #[error("nonpositive energy: {0} meV")]
    NonPositiveEnergy(f64),
    #[error("invalid material: {0}")]
    InvalidMaterial(String),
    #[error("overlapping cells: spacer {index} is {value} nm")]
    OverlappingCells { index: usize, value: f64 },
    #[error("invalid cell: {0}")]
    InvalidCell(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
