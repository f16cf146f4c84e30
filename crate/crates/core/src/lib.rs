//! Exact-arithmetic calculus on weighted dual graphs of curve divisors.
//!
//! The library models a reduced divisor with smooth rational components as a
//! weighted intersection graph and provides the combinatorial machinery built
//! on top of it: discriminants, inductance and barks of twigs, characteristic
//! (Hamburger-Noether) pairs of plane curve germs, blowup/blowdown calculus,
//! half-integral peeling data, and a configuration-search engine with a set of
//! named Diophantine scenarios.
//!
//! All arithmetic is exact: intersection-theoretic quantities are integers or
//! arbitrary-precision rationals, never floats.

pub mod birational;
pub mod graph;
pub mod hn;
pub mod par;
pub mod peeling;
pub mod scenarios;
pub mod search;
pub mod twig;

pub use graph::{Component, DivisorGraph, FractionalDivisor};
pub use hn::{CharPair, CharPairSeq, CuspInvariants};
pub use peeling::{MmpParams, PeelingData};
pub use search::{CurveCandidate, CuspConfig};
pub use twig::OrderedChain;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational used for all fractional quantities (bark coefficients,
/// inductance, delta). Always in lowest terms with a positive denominator.
pub type Rat = BigRational;

/// Shorthand for an integer-valued [`Rat`].
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n/d` as a [`Rat`]; panics if `d == 0`.
pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `p/q` (or `p` when integral), the wire form used by
/// every JSON interface of this crate.
pub fn rat_to_string(r: &Rat) -> String {
    r.to_string()
}

/// Parses the `p/q` wire form.
pub fn rat_from_str(s: &str) -> Result<Rat, Error> {
    s.parse::<Rat>()
        .map_err(|e| Error::Format(format!("bad rational {s:?}: {e}")))
}

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown component id {0}")]
    UnknownComponent(u32),
    #[error("component id {0} already present")]
    DuplicateComponent(u32),
    #[error("self-loop on component {0}")]
    SelfLoop(u32),
    #[error("edge multiplicity must be >= 1 on edge {0}-{1}")]
    ZeroMultiplicity(u32, u32),
    #[error("at most one component may be marked E (components {0} and {1} both are)")]
    TwoMarkedE(u32, u32),
    #[error("graph is not snc: edge {0}-{1} has multiplicity {2}")]
    NotSnc(u32, u32, u32),
    #[error("divisor is not a tree: {0}")]
    NotATree(String),
    #[error("not a chain: {0}")]
    NotAChain(String),
    #[error("subdivisor is not negative definite")]
    NotNegativeDefinite,
    #[error("superfluous (-1)-curve on component {0}")]
    Superfluous(u32),
    #[error("intersection matrix is negative definite (expected a boundary)")]
    NegativeDefiniteBoundary,
    #[error("graph is not connected")]
    NotConnected,
    #[error("K^2 of the ambient surface is not tracked on this graph")]
    MissingKsq,
    #[error("missing field {0}")]
    MissingField(&'static str),
    #[error("inadmissible pair sequence: {0}")]
    Inadmissible(String),
    #[error("component {0} is not a (-1)-curve")]
    NotMinusOne(u32),
    #[error("component {0} has incident multiplicity {1} > 2, cannot contract")]
    TooManyBranches(u32, u32),
    #[error("invalid blowup target: {0}")]
    BadBlowupTarget(String),
    #[error("A-curve candidate rejected: {0}")]
    BadCandidate(String),
    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),
    #[error("scenario {name}: solutions differ from the expected list: {detail}")]
    ScenarioMismatch { name: String, detail: String },
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("{0}")]
    Format(String),
    #[error("bound {0} exceeds the configured ceiling {1}")]
    BoundTooLarge(u64, u64),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse { line: e.line(), column: e.column(), msg: e.to_string() }
    }
}
