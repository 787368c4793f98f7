use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported root system label `{0}`")]
    UnsupportedType(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("weight has {got} coordinates, root datum has lattice rank {expected}")]
    DatumMismatch { expected: usize, got: usize },
    #[error("invalid generator index {0}")]
    BadGenerator(usize),
    #[error("weight is not dominant: pairing with coroot {coroot} is {pairing}")]
    NotDominant { coroot: String, pairing: i64 },
    #[error("weight lies outside the antidominant {p}-alcove")]
    OutsideAlcove { p: i64 },
    #[error("p = {p} is below the required bound {bound}")]
    PTooSmall { p: i64, bound: i64 },
    #[error("odd pairing {pairing} of h with root {root} in distinguished mode")]
    OddPairing { root: String, pairing: i64 },
    #[error("invalid nilpotent datum: {0}")]
    BadNilpotent(String),
    #[error("element {0} is not longest in its parabolic coset")]
    NotLongestInCoset(String),
    #[error("element {0} is not shortest in its parabolic coset")]
    NotShortestInCoset(String),
    #[error("enumeration guard exceeded: max length {requested} > {guard}")]
    GuardExceeded { requested: usize, guard: usize },
    #[error("support would reach length {length}, beyond the truncation guard {guard}")]
    SupportGuard { length: usize, guard: usize },
    #[error("no stabilization within {steps} theta steps{}", detail.as_ref().map(|d| format!(" ({d})")).unwrap_or_default())]
    BudgetExhausted { steps: usize, detail: Option<String> },
    #[error("KL cache rejected: {0}")]
    CacheCorrupt(String),
    #[error("window of length {window} cannot contain element of length {length}")]
    WindowTooSmall { window: usize, length: usize },
    #[error("label {0} is certified outside the cell; its class is zero")]
    NotInCell(String),
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
