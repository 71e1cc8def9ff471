// SPDX-License-Identifier: Apache-2.0

//! Selmer dimension of `y² = x³ − A` for the 3-isogeny `1 − ζ` over `ℚ(ζ₃)`.
//!
//! For square-free `A ≡ 1 mod 12` the dimension is determined by the 3-rank
//! `r` of an auxiliary quadratic field:
//!
//! | `−A mod 9` | sign of `A` | field      | dimension |
//! |------------|-------------|------------|-----------|
//! | 2 or 8     | `A > 0`     | `ℚ(√−A)`   | `2r`      |
//! | 2 or 8     | `A < 0`     | `ℚ(√−A)`   | `1 + 2r`  |
//! | 5          | `A < 0`     | `ℚ(√3A)`   | `2r`      |
//! | 5          | `A > 0`     | `ℚ(√3A)`   | `1 + 2r`  |
//!
//! The dimension bounds the Mordell–Weil rank over `ℚ`. Twists are accepted
//! only under congruence conditions that guarantee the formula's local
//! hypotheses; nothing outside them is evaluated.

use std::fmt;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::arith::{self, canonical_residue, is_perfect_cube, is_perfect_square};
use crate::classgroup::{class_group_summary, ClassGroupSummary};
use crate::discriminants::is_fundamental;
use crate::error::{Error, ParameterRejection, Result, TwistRejection};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StollCase {
    /// `−A ≡ 2, 8 mod 9`, `A > 0`.
    Neg28APos,
    /// `−A ≡ 2, 8 mod 9`, `A < 0`.
    Neg28ANeg,
    /// `−A ≡ 5 mod 9`, `A < 0`.
    Neg5ANeg,
    /// `−A ≡ 5 mod 9`, `A > 0`.
    Neg5APos,
}

impl StollCase {
    pub fn tag(self) -> &'static str {
        match self {
            StollCase::Neg28APos => "NEG2_8_A_POS",
            StollCase::Neg28ANeg => "NEG2_8_A_NEG",
            StollCase::Neg5ANeg => "NEG5_A_NEG",
            StollCase::Neg5APos => "NEG5_A_POS",
        }
    }

    /// Whether the auxiliary field is `ℚ(√−A)` and the case is used for
    /// quadratic-twist families.
    pub fn is_family_case(self) -> bool {
        matches!(self, StollCase::Neg28APos | StollCase::Neg28ANeg)
    }

    /// Selmer dimension from the 3-rank of the auxiliary field.
    pub fn dimension(self, three_rank: u32) -> u32 {
        match self {
            StollCase::Neg28APos | StollCase::Neg5ANeg => 2 * three_rank,
            StollCase::Neg28ANeg | StollCase::Neg5APos => 1 + 2 * three_rank,
        }
    }

    /// Discriminant of the auxiliary field for the curve `y² = x³ − A·Dᵉ`
    /// (`A`, `D` coprime and square-free), i.e. of `ℚ(√(−A·D^(e mod 2)))` or
    /// `ℚ(√(3A·D^(e mod 2)))`.
    pub fn field_discriminant(self, a: i64, d: i64, exponent: u32) -> Result<i64> {
        let twist = if exponent % 2 == 1 { d as i128 } else { 1 };
        let radicand = if self.is_family_case() { -(a as i128) * twist } else { 3 * a as i128 * twist };
        let disc = if radicand.rem_euclid(4) == 1 { radicand } else { 4 * radicand };
        let disc = i64::try_from(disc).map_err(|_| Error::OutOfRange(format!("field discriminant {disc}")))?;
        if !is_fundamental(disc)? {
            // The congruence conditions make the radicand square-free and ≡ 3 mod 4.
            return Err(Error::NotFundamental(disc));
        }
        Ok(disc)
    }
}

impl fmt::Display for StollCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl Serialize for StollCase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

fn reject_a(a: i64, reason: ParameterRejection) -> Error {
    Error::InvalidParameter { a, reason }
}

/// Classifies `A` into its formula case, rejecting parameters outside the
/// formula's reach.
pub fn validate_a(a: i64) -> Result<StollCase> {
    if a == 0 {
        return Err(reject_a(a, ParameterRejection::Zero));
    }
    if !arith::is_squarefree(a)? {
        return Err(reject_a(a, ParameterRejection::NotSquarefree));
    }
    if canonical_residue(a, 12) != 1 {
        return Err(reject_a(a, ParameterRejection::NotOneModTwelve));
    }
    match (canonical_residue(-a, 9), a > 0) {
        (2 | 8, true) => Ok(StollCase::Neg28APos),
        (2 | 8, false) => Ok(StollCase::Neg28ANeg),
        (5, false) => Ok(StollCase::Neg5ANeg),
        (5, true) => Ok(StollCase::Neg5APos),
        _ => Err(reject_a(a, ParameterRejection::ResidueOutsideFormula)),
    }
}

/// [`validate_a`] restricted to `A ≡ 1, 25 mod 36`, the quadratic-twist
/// family cases.
pub fn validate_family_a(a: i64) -> Result<StollCase> {
    let case = validate_a(a)?;
    if !case.is_family_case() {
        return Err(reject_a(a, ParameterRejection::NotInFamilyCase));
    }
    Ok(case)
}

fn reject_twist(a: i64, d: i64, reason: TwistRejection) -> Error {
    Error::InvalidTwist { a, d, reason }
}

fn check_twist_base(a: i64, d: i64) -> Result<StollCase> {
    let case = validate_a(a).map_err(|e| match e {
        Error::InvalidParameter { reason, .. } => reject_twist(a, d, TwistRejection::Parameter(reason)),
        other => other,
    })?;
    if d <= 0 {
        return Err(reject_twist(a, d, TwistRejection::NotPositive));
    }
    if !arith::is_squarefree(d)? {
        return Err(reject_twist(a, d, TwistRejection::NotSquarefree));
    }
    if a.gcd(&d) != 1 {
        return Err(reject_twist(a, d, TwistRejection::NotCoprime));
    }
    Ok(case)
}

/// Accepts a quadratic twist `D` of `A`: `D > 0` square-free, coprime to `A`,
/// `D ≡ 1 mod 12`. Then `−A·D³` meets the formula's hypotheses and
/// `D³ ≡ 1 mod 9`.
pub fn validate_pair(a: i64, d: i64) -> Result<StollCase> {
    let case = check_twist_base(a, d)?;
    if canonical_residue(d, 12) != 1 {
        return Err(reject_twist(a, d, TwistRejection::NotOneModTwelve));
    }
    let twisted = -(a as i128) * (d as i128).pow(3);
    assert_eq!(
        twisted.rem_euclid(9),
        canonical_residue(-a, 9) as i128,
        "−A·D³ must stay in the class of −A mod 9"
    );
    Ok(case)
}

/// Selmer dimension of the quadratic twist `y² = x³ − A·D³`.
pub fn selmer_dimension(a: i64, d: i64) -> Result<u32> {
    let case = validate_pair(a, d)?;
    let summary = class_group_summary(case.field_discriminant(a, d, 3)?)?;
    Ok(case.dimension(summary.three_rank))
}

/// Selmer dimension of the cubic twist `y² = x³ − A·D²` for `D ≡ 1 mod 9`,
/// `D` square-free, coprime to `6A`.
///
/// Since `D² ≡ 1 mod 9` and `ℚ(√(−A·D²)) = ℚ(√−A)`, the formula returns the
/// untwisted value. Only the congruence side of the hypotheses is checked;
/// local conditions at primes dividing `D` are not certified.
pub fn selmer_dimension_cubic(a: i64, d: i64) -> Result<u32> {
    let case = check_twist_base(a, d)?;
    if canonical_residue(d, 9) != 1 {
        return Err(reject_twist(a, d, TwistRejection::NotOneModNine));
    }
    if d.gcd(&6) != 1 {
        return Err(reject_twist(a, d, TwistRejection::NotCoprimeToSix));
    }
    let twisted = a as i128 * (d as i128).pow(2);
    debug_assert_eq!(twisted.rem_euclid(12), 1);
    debug_assert_eq!((-twisted).rem_euclid(9), canonical_residue(-a, 9) as i128);
    let summary = class_group_summary(case.field_discriminant(a, d, 2)?)?;
    Ok(case.dimension(summary.three_rank))
}

/// One-sided torsion criterion for `y² = x³ + B`: `true` means the torsion
/// subgroup is trivial; `false` only means the criterion does not apply.
pub fn torsion_is_trivial(b: i128) -> Result<bool> {
    if b == 0 {
        return Err(Error::Zero);
    }
    Ok(b != -432 && b != 1 && !is_perfect_cube(b) && !is_perfect_square(b))
}

/// One quadratic twist with its Selmer bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistRecord {
    #[serde(rename = "A")]
    pub a: i64,
    #[serde(rename = "D")]
    pub d: i64,
    /// `−A·D³`, the constant term of the twisted curve `y² = x³ − A·D³`.
    #[serde(skip)]
    pub twisted_coefficient: i128,
    pub delta: i64,
    pub case: StollCase,
    pub selmer_dim: u32,
    pub rank_bound: u32,
    pub torsion_trivial: bool,
}

pub fn twist_record(a: i64, d: i64) -> Result<TwistRecord> {
    let case = validate_pair(a, d)?;
    let summary = class_group_summary(case.field_discriminant(a, d, 3)?)?;
    twist_record_from_summary(a, d, &summary)
}

/// Builds the record from a precomputed summary of the auxiliary field.
pub fn twist_record_from_summary(a: i64, d: i64, summary: &ClassGroupSummary) -> Result<TwistRecord> {
    let case = validate_pair(a, d)?;
    let delta = case.field_discriminant(a, d, 3)?;
    if summary.delta != delta {
        return Err(Error::OutOfRange(format!(
            "summary for {} supplied, twist (A = {a}, D = {d}) needs {delta}",
            summary.delta
        )));
    }
    let twisted_coefficient = -(a as i128) * (d as i128).pow(3);
    let selmer_dim = case.dimension(summary.three_rank);
    Ok(TwistRecord {
        a,
        d,
        twisted_coefficient,
        delta,
        case,
        selmer_dim,
        rank_bound: selmer_dim,
        torsion_trivial: torsion_is_trivial(twisted_coefficient)?,
    })
}
