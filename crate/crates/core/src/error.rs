use thiserror::Error;

use crate::field::Elem;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("modulus {0} is not irreducible")]
    NotIrreducible(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("field order {order} does not fit in 32 bits")]
    FieldTooLarge { order: u128 },
    #[error("field of order {order} exceeds the exhaustive bound {limit}")]
    DeskScaleExceeded { order: u64, limit: u64 },
    #[error("tower mismatch: {0}")]
    TowerMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("duplicate interpolation node {0}")]
    DuplicateNode(Elem),
    #[error("not a permutation: {a} and {b} have the same image")]
    NotPermutation { a: Elem, b: Elem },
    #[error("map is not a bijection between the given sets{}", fmt_witness(.witness))]
    NotBijectiveOnDomain { witness: Option<Elem> },
    #[error("Dickson matrix is singular")]
    SingularDickson,
    #[error("basis system is singular")]
    SingularBasisSystem,
    #[error("map is not a bijection between the subspaces{}", fmt_witness(.witness))]
    NotBijectiveOnSubspace { witness: Option<Elem> },
    #[error("linear system has no solution")]
    NoSolution,
    #[error("no primitive {len}-th root of unity in an extension of degree <= {bound}")]
    NoSuitableRoot { len: usize, bound: u32 },
    #[error("hypothesis violated: {hypothesis}{}", fmt_witness(.witness))]
    HypothesisViolated {
        hypothesis: String,
        witness: Option<Elem>,
    },
    #[error("exponent s={s} does not satisfy s(q^k - 1) = 0 mod (q^n - 1) for k={k}")]
    BadExponent { s: u64, k: u32 },
    #[error("scalar c must be nonzero")]
    ZeroScalar,
    #[error("trace of alpha is zero")]
    TraceZero,
    #[error("arithmetic overflow")]
    Overflow,
    #[error("cannot parse '{token}': {reason}")]
    Parse { token: String, reason: String },
}

fn fmt_witness(w: &Option<Elem>) -> String {
    match w {
        Some(e) => format!(" (witness {e})"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn hypothesis(h: impl Into<String>, witness: Option<Elem>) -> Self {
        Error::HypothesisViolated {
            hypothesis: h.into(),
            witness,
        }
    }

    pub(crate) fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            reason: reason.into(),
        }
    }
}
