// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not an odd negative fundamental discriminant")]
    NotFundamental(i64),
    #[error("level {0} is not squarefree")]
    NotSquarefree(i64),
    #[error("class index {index} out of range (class number {h})")]
    BadClass { index: usize, h: usize },
    #[error("character index {index} out of range ({count} characters)")]
    BadCharacter { index: usize, count: usize },
    #[error("matrix is not in Gamma0({0})")]
    NotInGamma0(i64),
    #[error("leading coefficient {a} is not coprime to {d}")]
    NotCoprime { a: i64, d: i64 },
    #[error("point is outside the domain of validity: {0}")]
    Domain(String),
    #[error("pairing diverges: neither argument is a cusp form")]
    NotCuspidal,
    #[error("closed form undefined for two trivial characters")]
    BothTrivial,
    #[error("discriminant {0} is not minus a prime")]
    NotPrimeDiscriminant(i64),
    #[error("truncation insufficient: {0}")]
    Truncation(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("search bound exceeded: {0}")]
    SearchExhausted(String),
}

pub type Result<T> = std::result::Result<T, Error>;
