use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    NotPrime(u64),
    ZeroDegree,
    FieldTooLarge {
        q: u128,
        limit: u64,
    },
    ElementOutOfRange {
        value: u64,
        q: u64,
    },
    InverseOfZero,
    /// A multiplicative character was evaluated at zero.
    CharacterAtZero,
    CharacterIndexOutOfRange {
        index: u64,
        order: u64,
    },
    /// Operands live in different fields or different cyclotomic rings.
    MixedFields,
    MixedOrders {
        left: u64,
        right: u64,
    },
    DimensionMismatch {
        left: usize,
        right: usize,
    },
    InvalidDimension(usize),
    MalformedMatrix(&'static str),
    /// `sl_rank_normal_form` needs a rank-deficient input.
    FullRank,
    BudgetExceeded {
        candidates: u128,
        budget: u64,
    },
    /// The closed forms are only valid for a nonprincipal additive character.
    TrivialAdditiveCharacter,
    KloostermanAtZero,
    KloostermanLength(usize),
    InvalidOrder(u64),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::ZeroDegree => write!(f, "extension degree must be at least 1"),
            Error::FieldTooLarge { q, limit } => {
                write!(f, "field size {q} exceeds the limit {limit}")
            }
            Error::ElementOutOfRange { value, q } => {
                write!(f, "element encoding {value} is outside [0, {q})")
            }
            Error::InverseOfZero => write!(f, "zero has no multiplicative inverse"),
            Error::CharacterAtZero => {
                write!(f, "multiplicative characters are not defined at zero")
            }
            Error::CharacterIndexOutOfRange { index, order } => {
                write!(f, "character index {index} is outside [0, {order})")
            }
            Error::MixedFields => write!(f, "operands belong to different fields"),
            Error::MixedOrders { left, right } => {
                write!(f, "cyclotomic orders {left} and {right} do not match")
            }
            Error::DimensionMismatch { left, right } => {
                write!(f, "matrix dimensions {left} and {right} do not match")
            }
            Error::InvalidDimension(n) => write!(f, "matrix dimension {n} is outside [1, 8]"),
            Error::MalformedMatrix(why) => write!(f, "malformed matrix: {why}"),
            Error::FullRank => write!(f, "matrix has full rank"),
            Error::BudgetExceeded { candidates, budget } => write!(
                f,
                "enumeration of {candidates} candidate matrices exceeds the budget of {budget}"
            ),
            Error::TrivialAdditiveCharacter => {
                write!(f, "the additive character must be nontrivial")
            }
            Error::KloostermanAtZero => write!(f, "Kloosterman sums need a nonzero argument"),
            Error::KloostermanLength(n) => {
                write!(f, "Kloosterman sums need n >= 1 variables, got {n}")
            }
            Error::InvalidOrder(m) => write!(f, "invalid root-of-unity order {m}"),
        }
    }
}

impl core::error::Error for Error {}
