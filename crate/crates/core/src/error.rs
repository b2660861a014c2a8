use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug)]
pub enum Error {
    #[error("'{0}' is not a precomposed Hangul syllable")]
    NotHangulSyllable(char),

    #[error("jamo index out of range: initial {initial}, medial {medial}, final {coda}")]
    IndexOutOfRange { initial: u8, medial: u8, coda: u8 },

    #[error("no eligible target for this rule")]
    NoEligibleTarget,

    #[error("symbol pool is empty")]
    EmptyPool,

    #[error("rule candidates exhausted after applying {applied:?}")]
    Incomplete { applied: Vec<u8> },

    #[error("unknown rule id {0}")]
    UnknownRule(u8),

    #[error("transliteration backend unavailable: {0}")]
    BackendUnavailable(String),

    #[error("malformed remote response: {0}")]
    MalformedRemoteResponse(String),

    #[error("remote output altered {altered} word tokens, cap is {cap}")]
    RemoteCapExceeded { altered: usize, cap: usize },

    #[error("reference is empty")]
    EmptyReference,

    #[error("rule {0} is not invertible")]
    NonInvertibleRule(u8),

    #[error("provenance does not match text at offset {at}: expected {expected:?}")]
    ProvenanceMismatch { at: usize, expected: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("source corpus is empty")]
    EmptyCorpus,

    #[error("{0}")]
    InvalidArgument(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable name, used by the CLI and the C API.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotHangulSyllable(_) => "not_hangul_syllable",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::NoEligibleTarget => "no_eligible_target",
            Error::EmptyPool => "empty_pool",
            Error::Incomplete { .. } => "incomplete",
            Error::UnknownRule(_) => "unknown_rule",
            Error::BackendUnavailable(_) => "backend_unavailable",
            Error::MalformedRemoteResponse(_) => "malformed_remote_response",
            Error::RemoteCapExceeded { .. } => "remote_cap_exceeded",
            Error::EmptyReference => "empty_reference",
            Error::NonInvertibleRule(_) => "non_invertible_rule",
            Error::ProvenanceMismatch { .. } => "provenance_mismatch",
            Error::Parse { .. } => "parse_error",
            Error::EmptyCorpus => "empty_corpus",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Config(_) => "config_error",
            Error::Io(_) => "io_error",
            Error::Json(_) => "json_error",
        }
    }
}
