// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use thiserror::Error;

use crate::classgroup::BinaryQuadraticForm;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero is not a valid input")]
    Zero,
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("form {form} has discriminant {found}, expected {expected}")]
    DiscriminantMismatch {
        form: BinaryQuadraticForm,
        found: i128,
        expected: i128,
    },
    #[error("form {0} is not primitive")]
    NotPrimitive(BinaryQuadraticForm),
    #[error("form {0} is not positive definite")]
    NotPositiveDefinite(BinaryQuadraticForm),
    #[error("invalid parameter A = {a}: {reason}")]
    InvalidParameter { a: i64, reason: ParameterRejection },
    #[error("twist (A = {a}, D = {d}) rejected: {reason}")]
    InvalidTwist { a: i64, d: i64, reason: TwistRejection },
    #[error("discriminant {delta} has extra units; its class number is fixed at {class_number}")]
    ExtraUnits { delta: i64, class_number: u64 },
    #[error("analytic estimate {estimate} for discriminant {delta} is not within 0.25 of an integer")]
    Inconclusive { delta: i64, estimate: f64 },
    #[error("class number {class_number} exceeds the brute-force guard {guard}")]
    GuardExceeded { class_number: u64, guard: u64 },
    #[error("the family for A = {a} below X = {x} is empty")]
    EmptyFamily { a: i64, x: u64 },
    #[error("the progression family is empty")]
    EmptyProgression,
    #[error("{0} is not a power of 3")]
    NotPowerOfThree(u64),
    #[error("empty input list")]
    EmptyInput,
    #[error("value out of range: {0}")]
    OutOfRange(String),
}

impl Error {
    /// True for errors caused by inputs that fail a mathematical precondition,
    /// as opposed to internal or resource failures.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Zero
                | Error::NotFundamental(_)
                | Error::DiscriminantMismatch { .. }
                | Error::NotPrimitive(_)
                | Error::NotPositiveDefinite(_)
                | Error::InvalidParameter { .. }
                | Error::InvalidTwist { .. }
                | Error::ExtraUnits { .. }
                | Error::EmptyFamily { .. }
                | Error::EmptyProgression
                | Error::NotPowerOfThree(_)
                | Error::EmptyInput
        )
    }
}

/// Reason a curve parameter `A` is outside the reach of the Selmer formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParameterRejection {
    Zero,
    NotSquarefree,
    NotOneModTwelve,
    /// `A ≡ 1 mod 12` but the class of `−A mod 9` is not covered.
    ResidueOutsideFormula,
    /// Valid for the formula but excluded from family scans (`−A ≡ 5 mod 9`).
    NotInFamilyCase,
    /// The operation needs `A > 0`.
    NotPositive,
}

impl fmt::Display for ParameterRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParameterRejection::Zero => "A = 0",
            ParameterRejection::NotSquarefree => "A not square-free",
            ParameterRejection::NotOneModTwelve => "A ≢ 1 mod 12",
            ParameterRejection::ResidueOutsideFormula => "−A mod 9 outside the formula's cases",
            ParameterRejection::NotInFamilyCase => "−A ≡ 5 mod 9 is not a family-scan case (need A ≡ 1 or 25 mod 36)",
            ParameterRejection::NotPositive => "A not positive",
        })
    }
}

/// Reason a twist `D` is rejected for a given `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwistRejection {
    Parameter(ParameterRejection),
    NotPositive,
    NotSquarefree,
    NotCoprime,
    NotOneModTwelve,
    NotOneModNine,
    /// `D` shares a factor with 6, so `A·D²` leaves the `1 mod 12` class.
    NotCoprimeToSix,
}

impl fmt::Display for TwistRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwistRejection::Parameter(p) => p.fmt(f),
            TwistRejection::NotPositive => f.write_str("D not positive"),
            TwistRejection::NotSquarefree => f.write_str("D not square-free"),
            TwistRejection::NotCoprime => f.write_str("gcd(A, D) ≠ 1"),
            TwistRejection::NotOneModTwelve => f.write_str("D ≢ 1 mod 12"),
            TwistRejection::NotOneModNine => f.write_str("D ≢ 1 mod 9"),
            TwistRejection::NotCoprimeToSix => f.write_str("gcd(D, 6) ≠ 1"),
        }
    }
}
