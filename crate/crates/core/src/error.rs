use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed token {0:?}")]
    MalformedToken(String),

    #[error("undeclared event {0:?}")]
    UndeclaredEvent(String),

    #[error("unknown path {0:?}")]
    UnknownPath(String),

    #[error("duplicate path name {0:?}")]
    DuplicatePath(String),

    #[error("path {0:?} needs at least two distinct events")]
    PathTooSmall(String),

    #[error("unknown event {0:?}")]
    UnknownEvent(String),

    /// Two distinct paths share at least two events (axiom I3).
    #[error("I3 violation: paths {0:?} and {1:?} share two or more events")]
    I3Violation(String, String),

    #[error("event {event:?} is not on path {path:?}")]
    NotOnPath { event: String, path: String },

    #[error("event {event:?} lies on path {path:?}")]
    OnPath { event: String, path: String },

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("missing betweenness [{0} {1} {2}]")]
    MissingBetweenness(String, String, String),

    #[error("event {0:?} is already in the chain")]
    AlreadyInChain(String),

    /// No ordering of three distinct events holds (axiom O5).
    #[error("totality failure: no ordering of {{{0}, {1}, {2}}}")]
    Totality(String, String, String),

    #[error("inconsistent betweenness: {0}")]
    Inconsistent(String),

    #[error("exhaustive bound exceeded: {size} events > {bound}")]
    BoundExceeded { size: usize, bound: usize },

    #[error("intervals lie on different paths ({0:?}, {1:?})")]
    DifferentPaths(String, String),

    #[error("degenerate interval |{0},{0}| where a proper interval is required")]
    DegenerateInterval(String),

    #[error("event {x:?} is not a meeting point of {q:?} and {r:?}")]
    NotMeetingPoint { x: String, q: String, r: String },

    #[error("malformed designated pair: {0}")]
    MalformedPair(String),

    #[error("degenerate configuration: {0}")]
    DegenerateConfig(String),

    #[error("events are not collinear: {0}")]
    NotCollinear(String),

    #[error("malformed coordinate: {0}")]
    MalformedCoordinate(String),
}
