use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid credential: {0}")]
    InvalidCredential(&'static str),

    #[error("selector budget exceeded: requested {requested}, at most {max} available")]
    SelectorBudgetExceeded { requested: usize, max: usize },

    #[error("memristor image I/O error: {0}")]
    ImageIo(#[source] io::Error),

    #[error("I/O error: {0}")]
    Io(#[source] io::Error),

    #[error("memristor image format error: {0}")]
    ImageFormat(String),

    #[error("memristor image value error at address {address}, current {current}: {value}")]
    ImageValue {
        address: usize,
        current: usize,
        value: f64,
    },

    #[error("plaintext is empty")]
    EmptyPlaintext,

    #[error("plaintext of {len} bytes exceeds the {max}-byte limit")]
    MessageTooLong { len: usize, max: usize },

    #[error("nibble {value} at index {index} is outside 0..=15")]
    NibbleRange { index: usize, value: u8 },

    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("malformed permutation: {0}")]
    Permutation(&'static str),

    #[error("corrupt cipher at transit position {index}")]
    CorruptCipher { index: usize },

    #[error("malformed cipher of length {len}")]
    MalformedCipher { len: usize },

    #[error("invalid nonce: {0}")]
    NonceFormat(String),

    #[error("no saved nonce on record")]
    NoSavedNonce,

    #[error("randomness source unavailable: {0}")]
    Entropy(String),

    #[error("wrong protocol magic")]
    WrongProtocol,

    #[error("unsupported frame version {0:#04x}")]
    UnsupportedVersion(u8),

    #[error("malformed frame: {0}")]
    MalformedFrame(String),

    #[error("corrupt frame value at index {index}")]
    CorruptFrame { index: usize },

    #[error("transport error: {0}")]
    Transport(#[source] io::Error),
}

impl Error {
    /// Stable identifier, printed by the CLI and returned over the C ABI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidCredential(_) => "InvalidCredential",
            Error::SelectorBudgetExceeded { .. } => "SelectorBudgetExceeded",
            Error::ImageIo(_) => "ImageIoError",
            Error::Io(_) => "IoError",
            Error::ImageFormat(_) => "ImageFormatError",
            Error::ImageValue { .. } => "ImageValueError",
            Error::EmptyPlaintext => "EmptyPlaintext",
            Error::MessageTooLong { .. } => "MessageTooLong",
            Error::NibbleRange { .. } => "NibbleRangeError",
            Error::SizeMismatch { .. } => "SizeMismatch",
            Error::Permutation(_) => "PermutationError",
            Error::CorruptCipher { .. } => "CorruptCipher",
            Error::MalformedCipher { .. } => "MalformedCipher",
            Error::NonceFormat(_) => "NonceFormatError",
            Error::NoSavedNonce => "NoSavedNonce",
            Error::Entropy(_) => "EntropyError",
            Error::WrongProtocol => "WrongProtocol",
            Error::UnsupportedVersion(_) => "UnsupportedVersion",
            Error::MalformedFrame(_) => "MalformedFrame",
            Error::CorruptFrame { .. } => "CorruptFrame",
            Error::Transport(_) => "TransportError",
        }
    }

    /// Process exit code for this error. These values are part of the CLI
    /// contract and are mirrored by the C ABI status codes.
    ///
    /// | code | error |
    /// |------|-------|
    /// | 3  | ImageIoError |
    /// | 4  | ImageFormatError |
    /// | 5  | ImageValueError |
    /// | 6  | IoError |
    /// | 10 | InvalidCredential |
    /// | 11 | NonceFormatError |
    /// | 12 | NoSavedNonce |
    /// | 13 | EntropyError |
    /// | 20 | EmptyPlaintext |
    /// | 21 | MessageTooLong |
    /// | 22 | NibbleRangeError |
    /// | 23 | SizeMismatch |
    /// | 24 | PermutationError |
    /// | 25 | SelectorBudgetExceeded |
    /// | 30 | CorruptCipher |
    /// | 31 | MalformedCipher |
    /// | 40 | WrongProtocol |
    /// | 41 | UnsupportedVersion |
    /// | 42 | MalformedFrame |
    /// | 43 | CorruptFrame |
    /// | 50 | TransportError |
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ImageIo(_) => 3,
            Error::Io(_) => 6,
            Error::ImageFormat(_) => 4,
            Error::ImageValue { .. } => 5,
            Error::InvalidCredential(_) => 10,
            Error::NonceFormat(_) => 11,
            Error::NoSavedNonce => 12,
            Error::Entropy(_) => 13,
            Error::EmptyPlaintext => 20,
            Error::MessageTooLong { .. } => 21,
            Error::NibbleRange { .. } => 22,
            Error::SizeMismatch { .. } => 23,
            Error::Permutation(_) => 24,
            Error::SelectorBudgetExceeded { .. } => 25,
            Error::CorruptCipher { .. } => 30,
            Error::MalformedCipher { .. } => 31,
            Error::WrongProtocol => 40,
            Error::UnsupportedVersion(_) => 41,
            Error::MalformedFrame(_) => 42,
            Error::CorruptFrame { .. } => 43,
            Error::Transport(_) => 50,
        }
    }
}
