// SPDX-License-Identifier: Apache-2.0

//! Form class groups of quadratic fields.
//!
//! For `Δ < 0` classes are represented by reduced forms. For `Δ > 0` they are
//! rho-cycles of reduced forms under proper equivalence, which gives the
//! narrow class group. The narrow group surjects onto the ordinary class
//! group with an elementary 2-group kernel, so their 3-torsion subgroups have
//! the same order.

mod analytic;
mod compose;
mod form;
pub mod reduce;
mod structure;

use std::collections::{HashMap, HashSet};

use num_integer::Roots;
use serde::{Deserialize, Serialize};

pub use analytic::{analytic_class_number_estimate, analytic_class_number_oracle};
pub use compose::compose;
pub use form::BinaryQuadraticForm;
pub use reduce::{cycle_of, reduce, reduce_definite, reduce_indefinite, Cycle, Reduction};
pub use structure::{brute_force_group_structure, STRUCTURE_GUARD};

use crate::arith::log3_exact;
use crate::discriminants::FundamentalDiscriminant;
use crate::error::{Error, Result};
use reduce::{canonical_cycle, is_reduced_indefinite_with, raw_cycle, reduce_indefinite_with};

/// Class number and 3-torsion of one quadratic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassGroupSummary {
    pub delta: i64,
    /// Narrow class number when `delta > 0`.
    pub class_number: u64,
    pub three_torsion: u64,
    pub three_rank: u32,
}

/// The class group of a fundamental discriminant with its composition law.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    delta: i64,
    sqrt_floor: i64,
    classes: Vec<BinaryQuadraticForm>,
    cycles: Vec<Cycle>,
    index: HashMap<BinaryQuadraticForm, usize>,
    identity: usize,
}

impl ClassGroup {
    pub fn new(delta: FundamentalDiscriminant) -> Result<Self> {
        let delta = delta.get();
        if delta < 0 {
            Self::definite(delta)
        } else {
            Self::indefinite(delta)
        }
    }

    fn definite(delta: i64) -> Result<Self> {
        let forms = reduced_definite_forms(delta);
        let index: HashMap<_, _> = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let identity = *index
            .get(&reduce_definite(&BinaryQuadraticForm::principal(delta))?)
            .expect("principal form is reduced");
        Ok(Self { delta, sqrt_floor: 0, classes: forms, cycles: Vec::new(), index, identity })
    }

    fn indefinite(delta: i64) -> Result<Self> {
        let s = delta.sqrt();
        let mut cycles = Vec::new();
        let mut seen = HashSet::new();
        for f in reduced_indefinite_forms(delta, s) {
            if seen.contains(&f) {
                continue;
            }
            let cycle = raw_cycle(&f, delta, s)?;
            for g in &cycle {
                seen.insert(*g);
            }
            cycles.push(canonical_cycle(cycle));
        }
        cycles.sort_by_key(Cycle::leader);
        let mut index = HashMap::new();
        for (i, cycle) in cycles.iter().enumerate() {
            for f in cycle.forms() {
                index.insert(*f, i);
            }
        }
        let classes = cycles.iter().map(Cycle::leader).collect();
        let principal = reduce_indefinite_with(&BinaryQuadraticForm::principal(delta), delta, s)?;
        let identity = index[&principal];
        Ok(Self { delta, sqrt_floor: s, classes, cycles, index, identity })
    }

    pub fn discriminant(&self) -> i64 {
        self.delta
    }

    /// Class number (narrow when `Δ > 0`).
    pub fn order(&self) -> usize {
        self.classes.len()
    }

    /// One reduced representative per class, in index order.
    pub fn representatives(&self) -> &[BinaryQuadraticForm] {
        &self.classes
    }

    /// The cycles of reduced forms (empty for `Δ < 0`).
    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Index of the class containing `f`.
    pub fn class_of(&self, f: &BinaryQuadraticForm) -> Result<usize> {
        f.check(self.delta)?;
        let reduced = if self.delta < 0 {
            reduce_definite(f)?
        } else {
            reduce_indefinite_with(f, self.delta, self.sqrt_floor)?
        };
        self.index
            .get(&reduced)
            .copied()
            .ok_or_else(|| Error::OutOfRange(format!("reduced form {reduced} missing from class table")))
    }

    pub fn mul(&self, i: usize, j: usize) -> Result<usize> {
        self.class_of(&compose(&self.classes[i], &self.classes[j])?)
    }

    pub fn is_equivalent(&self, f: &BinaryQuadraticForm, g: &BinaryQuadraticForm) -> Result<bool> {
        Ok(self.class_of(f)? == self.class_of(g)?)
    }

    /// `#{x : x³ = 1}`, cubing each class by two compositions.
    pub fn three_torsion(&self) -> Result<u64> {
        let mut count = 0;
        for i in 0..self.order() {
            let sq = self.mul(i, i)?;
            if self.mul(sq, i)? == self.identity {
                count += 1;
            }
        }
        Ok(count)
    }

    pub fn summary(&self) -> Result<ClassGroupSummary> {
        let three_torsion = self.three_torsion()?;
        let three_rank = log3_exact(three_torsion).ok_or(Error::NotPowerOfThree(three_torsion))?;
        Ok(ClassGroupSummary {
            delta: self.delta,
            class_number: self.order() as u64,
            three_torsion,
            three_rank,
        })
    }
}

/// All reduced positive definite primitive forms of discriminant `delta < 0`.
pub fn reduced_definite_forms(delta: i64) -> Vec<BinaryQuadraticForm> {
    let mut out = Vec::new();
    let n = -delta;
    let parity = delta.rem_euclid(2);
    let mut a = 1i64;
    while 3 * a * a <= n {
        let mut b = if parity == (1 - a).rem_euclid(2) { -a + 1 } else { -a + 2 };
        while b <= a {
            let num = b * b + n;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                let f = BinaryQuadraticForm::new(a, b, c);
                if c >= a && !(b < 0 && a == c) && f.is_primitive() {
                    out.push(f);
                }
            }
            b += 2;
        }
        a += 1;
    }
    out
}

/// All reduced primitive forms of discriminant `delta > 0`, `s = ⌊√Δ⌋`.
fn reduced_indefinite_forms(delta: i64, s: i64) -> Vec<BinaryQuadraticForm> {
    let mut out = Vec::new();
    let mut b = if (s - delta).rem_euclid(2) == 0 { s } else { s - 1 };
    while b > 0 {
        let n = (delta - b * b) / 4;
        for a in ((s - b) / 2 + 1)..=((s + b) / 2) {
            if n % a != 0 {
                continue;
            }
            for sa in [a, -a] {
                let f = BinaryQuadraticForm::new(sa, b, -n / sa);
                if is_reduced_indefinite_with(&f, s) && f.is_primitive() {
                    out.push(f);
                }
            }
        }
        b -= 2;
    }
    out
}

/// Class number and 3-torsion of the quadratic field of discriminant `delta`.
pub fn class_group_summary(delta: i64) -> Result<ClassGroupSummary> {
    ClassGroup::new(FundamentalDiscriminant::new(delta)?)?.summary()
}
