// SPDX-License-Identifier: Apache-2.0

//! Rank bounds for quadratic twists `y² = x³ − A·D³` of Mordell curves.
//!
//! The 3-isogeny Selmer dimension of a twist is obtained from the 3-rank of
//! the class group of an associated quadratic field, which this crate
//! computes from scratch with binary quadratic forms. On top of that sit the
//! family statistics: twist families indexed by arithmetic progressions of
//! fundamental discriminants, exact density constants, and empirical means
//! of `#Cl[3]`.
//!
//! Module layout:
//! - [`arith`]: factorization, square-free sieves, Kronecker symbols.
//! - [`discriminants`]: fundamental discriminants and progression families.
//! - [`classgroup`]: forms, reduction, composition, class group summaries and
//!   the independent oracles used to check them.
//! - [`selmer`]: parameter validation and the Selmer dimension formula.
//! - [`stats`]: exact constants, family scans and report types.

pub mod arith;
pub mod classgroup;
pub mod discriminants;
mod error;
pub mod rational;
pub mod selmer;
pub mod stats;

pub use classgroup::{class_group_summary, BinaryQuadraticForm, ClassGroup, ClassGroupSummary};
pub use discriminants::{FundamentalDiscriminant, ProgressionFamily, Sign};
pub use error::{Error, ParameterRejection, Result, TwistRejection};
pub use rational::Rational;
pub use selmer::{StollCase, TwistRecord};
pub use stats::{FamilyReport, FamilyScan, SummarySource};
