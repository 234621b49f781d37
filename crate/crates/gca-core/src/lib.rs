//! Exact-arithmetic core for generalized complex structures on standard
//! Courant algebroids `TM ⊕ T*M ⊕ (M × g)`.
//!
//! Everything is computed over the Gaussian rationals and multivariate
//! polynomials over them, so every identity check in this crate is an exact
//! equality, never a floating-point comparison. The crate is `no_std`
//! (with `alloc`); IO, file formats and the command line live in the
//! companion `gca-cli` crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod scalar;
pub mod stream;
pub mod poly;
pub mod matrix;
pub mod liealg;
pub mod roots;
pub mod extcalc;
pub mod courant;
pub mod dirac;
pub mod gcs;
pub mod lagrangian;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use scalar::GaussianRational;

/// Error type shared by every module of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition on the input data does not hold.
    InvalidInput(String),
    /// Fraction-field rank and rank at a concrete sample point disagree.
    RankDropAtPoint {
        point: Vec<GaussianRational>,
        context: String,
    },
    /// A form required to be closed is not; carries the offending component.
    NotClosed(String),
    /// Cartan data whose ad-eigenvalues do not land in the Gaussian rationals.
    UnsupportedCartan(String),
    /// A nonzero simultaneous eigenspace of dimension > 1, or a non-maximal
    /// commuting family.
    NotSemisimpleCartan(String),
    /// The fiber algebra fails a structural requirement (essential/perfect).
    UnsupportedAlgebra(String),
    /// No adapted Cartan splitting with the requested (p, q) exists.
    NoAdaptedSplit(String),
    /// Data violating the standard Courant algebroid defining relations.
    InconsistentData(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(s) => write!(f, "invalid input: {s}"),
            Error::RankDropAtPoint { point, context } => {
                write!(f, "rank drop at sample point (")?;
                for (i, c) in point.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "): {context}")
            }
            Error::NotClosed(s) => write!(f, "form is not closed: {s}"),
            Error::UnsupportedCartan(s) => write!(f, "unsupported Cartan data: {s}"),
            Error::NotSemisimpleCartan(s) => write!(f, "not a semisimple Cartan: {s}"),
            Error::UnsupportedAlgebra(s) => write!(f, "unsupported algebra: {s}"),
            Error::NoAdaptedSplit(s) => write!(f, "no adapted split: {s}"),
            Error::InconsistentData(s) => write!(f, "inconsistent data: {s}"),
        }
    }
}

#[cfg(any(test, feature = "std"))]
impl std::error::Error for Error {}

/// Convenience constructor used across the crate.
pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub type Result<T> = core::result::Result<T, Error>;
