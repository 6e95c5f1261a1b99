use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("internal invariant failure: {0}")]
    Invariant(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
}

impl Error {
    /// Process exit status used by the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) => 1,
            Error::Precondition(_) | Error::Unsupported(_) => 2,
            Error::Invariant(_) => 3,
            Error::Resource(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Enumeration caps shared by the expensive operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub vertices: usize,
    pub omega_vertices: usize,
    pub states: usize,
    pub word_len: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { vertices: 12, omega_vertices: 8, states: 1_000_000, word_len: 12 }
    }
}
