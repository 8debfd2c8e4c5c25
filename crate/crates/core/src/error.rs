use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {requested} exceeds the configured cap of {cap}")]
    DimensionCap { requested: usize, cap: usize },

    #[error("shape mismatch: expected dimension {expected}, found {found}")]
    Shape { expected: usize, found: usize },

    #[error("operator is not self-adjoint (max |A - A^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("slot {slot} out of range 1..={n_particles}")]
    SlotOutOfRange { slot: usize, n_particles: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("sector has dimension zero")]
    EmptySector,

    #[error("sampling produced a zero vector {retries} times in a row")]
    Sampling { retries: usize },

    #[error("mixed-state rank {rank} outside 1..={sector_dim}")]
    Rank { rank: usize, sector_dim: usize },

    #[error("degree {degree} exceeds the cap of {cap} per variable")]
    DegreeCap { degree: u32, cap: u32 },

    #[error("quantum numbers out of range: {0}")]
    Domain(String),

    #[error("could not resolve coupled eigenbasis: {0}")]
    Diagonalization(String),

    #[error("at least two particles are required, got {0}")]
    Arity(usize),

    #[error("total-spin relation needs spin > 0")]
    DegenerateSpin,

    #[error("invalid permutation: {0}")]
    Permutation(String),

    #[error("parse error: {0}")]
    Parse(String),
}
