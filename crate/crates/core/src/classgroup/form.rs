// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The form `a·x² + b·x·y + c·y²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BinaryQuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl BinaryQuadraticForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    /// `(a, b, (b² − Δ)/4a)`, if `4a` divides `b² − Δ`.
    pub fn from_ab(a: i64, b: i64, delta: i64) -> Option<Self> {
        let num = b as i128 * b as i128 - delta as i128;
        let den = 4 * a as i128;
        if den == 0 || num % den != 0 {
            return None;
        }
        i64::try_from(num / den).ok().map(|c| Self { a, b, c })
    }

    pub fn discriminant(&self) -> i128 {
        self.b as i128 * self.b as i128 - 4 * self.a as i128 * self.c as i128
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    /// The identity class: `(1, 0, −Δ/4)` or `(1, 1, (1 − Δ)/4)`.
    pub fn principal(delta: i64) -> Self {
        let b = delta.rem_euclid(2);
        Self { a: 1, b, c: (b - delta) / 4 }
    }

    /// `(a, −b, c)`, representing the inverse class.
    pub fn inverse(&self) -> Self {
        Self { a: self.a, b: -self.b, c: self.c }
    }

    pub fn evaluate(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }

    /// The form `f(p·x + q·y, r·x + s·y)`. A determinant of `+1` preserves the
    /// proper equivalence class.
    pub fn act(&self, [[p, q], [r, s]]: [[i64; 2]; 2]) -> Result<Self> {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (p, q, r, s) = (p as i128, q as i128, r as i128, s as i128);
        let na = a * p * p + b * p * r + c * r * r;
        let nb = 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s;
        let nc = a * q * q + b * q * s + c * s * s;
        let narrow = |v: i128| i64::try_from(v).map_err(|_| Error::OutOfRange(format!("coefficient {v}")));
        Ok(Self { a: narrow(na)?, b: narrow(nb)?, c: narrow(nc)? })
    }

    pub(crate) fn check(&self, delta: i64) -> Result<()> {
        let found = self.discriminant();
        if found != delta as i128 {
            return Err(Error::DiscriminantMismatch { form: *self, found, expected: delta as i128 });
        }
        if !self.is_primitive() {
            return Err(Error::NotPrimitive(*self));
        }
        Ok(())
    }
}

impl fmt::Display for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}
