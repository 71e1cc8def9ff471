// SPDX-License-Identifier: Apache-2.0

//! Gauss reduction for definite forms and rho-cycles for indefinite forms.

use num_integer::Roots;

use super::BinaryQuadraticForm;
use crate::arith::is_perfect_square;
use crate::error::{Error, Result};

/// Result of [`reduce`]: a unique representative when `Δ < 0`, the proper
/// equivalence cycle when `Δ > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduction {
    Definite(BinaryQuadraticForm),
    Cycle(Cycle),
}

pub fn reduce(form: &BinaryQuadraticForm) -> Result<Reduction> {
    let delta = discriminant_i64(form)?;
    form.check(delta)?;
    if delta < 0 {
        reduce_definite(form).map(Reduction::Definite)
    } else {
        cycle_of(form).map(Reduction::Cycle)
    }
}

fn discriminant_i64(form: &BinaryQuadraticForm) -> Result<i64> {
    let d = form.discriminant();
    if d == 0 || (d > 0 && is_perfect_square(d)) {
        return Err(Error::OutOfRange(format!("discriminant {d} of {form} is a square")));
    }
    i64::try_from(d).map_err(|_| Error::OutOfRange(format!("discriminant {d}")))
}

fn narrow(a: i128, b: i128, c: i128) -> Result<BinaryQuadraticForm> {
    let n = |v: i128| i64::try_from(v).map_err(|_| Error::OutOfRange(format!("coefficient {v}")));
    Ok(BinaryQuadraticForm::new(n(a)?, n(b)?, n(c)?))
}

pub fn is_reduced_definite(f: &BinaryQuadraticForm) -> bool {
    let (a, b, c) = (f.a, f.b, f.c);
    a > 0 && b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
}

/// The reduced representative `|b| ≤ a ≤ c` (with `b ≥ 0` on the boundary)
/// of a positive definite form.
pub fn reduce_definite(form: &BinaryQuadraticForm) -> Result<BinaryQuadraticForm> {
    if form.discriminant() >= 0 {
        return Err(Error::OutOfRange(format!("{form} is not definite")));
    }
    if form.a <= 0 {
        return Err(Error::NotPositiveDefinite(*form));
    }
    let (mut a, mut b, mut c) = (form.a as i128, form.b as i128, form.c as i128);
    loop {
        // translate b into (−a, a]
        let mut r = b.rem_euclid(2 * a);
        if r > a {
            r -= 2 * a;
        }
        let k = (r - b) / (2 * a);
        c += k * (b + a * k);
        b = r;
        if a > c || (a == c && b < 0) {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        return narrow(a, b, c);
    }
}

/// A full cycle of reduced indefinite forms, rotated so that its
/// lexicographically least form comes first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cycle {
    forms: Vec<BinaryQuadraticForm>,
}

impl Cycle {
    pub fn forms(&self) -> &[BinaryQuadraticForm] {
        &self.forms
    }

    pub fn leader(&self) -> BinaryQuadraticForm {
        self.forms[0]
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn contains(&self, f: &BinaryQuadraticForm) -> bool {
        self.forms.contains(f)
    }
}

/// Exact reduction test for `Δ > 0` using `s = ⌊√Δ⌋` (Δ is never a square):
/// `0 < b < √Δ` and `√Δ − b < 2|a| < √Δ + b`.
pub(crate) fn is_reduced_indefinite_with(f: &BinaryQuadraticForm, s: i64) -> bool {
    let two_a = 2 * f.a.unsigned_abs() as i64;
    0 < f.b && f.b <= s && s < two_a + f.b && two_a - f.b <= s
}

pub fn is_reduced_indefinite(f: &BinaryQuadraticForm) -> bool {
    let d = f.discriminant();
    d > 0 && !is_perfect_square(d) && is_reduced_indefinite_with(f, d.sqrt() as i64)
}

/// One rho step `(a, b, c) ↦ (c, r, (r² − Δ)/4c)` with `r ≡ −b mod 2c`
/// chosen in `(√Δ − 2|c|, √Δ)` when `|c| < √Δ`, else in `(−|c|, |c|]`.
pub(crate) fn rho_with(f: &BinaryQuadraticForm, delta: i64, s: i64) -> Result<BinaryQuadraticForm> {
    let (b, c) = (f.b as i128, f.c as i128);
    let s = s as i128;
    let two_c = 2 * c.abs();
    let r = if c.abs() <= s {
        s - (s + b).rem_euclid(two_c)
    } else {
        let mut r = (-b).rem_euclid(two_c);
        if r > c.abs() {
            r -= two_c;
        }
        r
    };
    let next_c = (r * r - delta as i128) / (4 * c);
    narrow(c, r, next_c)
}

pub fn rho(f: &BinaryQuadraticForm) -> Result<BinaryQuadraticForm> {
    let delta = discriminant_i64(f)?;
    if delta < 0 {
        return Err(Error::OutOfRange(format!("{f} is definite")));
    }
    rho_with(f, delta, delta.sqrt())
}

/// A reduced form properly equivalent to the indefinite `form`.
pub fn reduce_indefinite(form: &BinaryQuadraticForm) -> Result<BinaryQuadraticForm> {
    let delta = discriminant_i64(form)?;
    if delta < 0 {
        return Err(Error::OutOfRange(format!("{form} is definite")));
    }
    reduce_indefinite_with(form, delta, delta.sqrt())
}

pub(crate) fn reduce_indefinite_with(form: &BinaryQuadraticForm, delta: i64, s: i64) -> Result<BinaryQuadraticForm> {
    let mut f = *form;
    // Reduction takes O(log(|a|/√Δ)) steps; the cap only guards against bugs.
    for _ in 0..10_000 {
        if is_reduced_indefinite_with(&f, s) {
            return Ok(f);
        }
        f = rho_with(&f, delta, s)?;
    }
    Err(Error::OutOfRange(format!("rho reduction of {form} did not terminate")))
}

/// The rho-cycle through a reduced form, starting from `start`.
pub(crate) fn raw_cycle(start: &BinaryQuadraticForm, delta: i64, s: i64) -> Result<Vec<BinaryQuadraticForm>> {
    let mut forms = vec![*start];
    let mut f = rho_with(start, delta, s)?;
    while f != *start {
        forms.push(f);
        f = rho_with(&f, delta, s)?;
    }
    Ok(forms)
}

pub(crate) fn canonical_cycle(mut forms: Vec<BinaryQuadraticForm>) -> Cycle {
    let lead = forms
        .iter()
        .enumerate()
        .min_by_key(|(_, f)| **f)
        .map(|(i, _)| i)
        .unwrap_or(0);
    forms.rotate_left(lead);
    Cycle { forms }
}

/// The canonical cycle of reduced forms properly equivalent to `form`.
pub fn cycle_of(form: &BinaryQuadraticForm) -> Result<Cycle> {
    let delta = discriminant_i64(form)?;
    if delta < 0 {
        return Err(Error::OutOfRange(format!("{form} is definite")));
    }
    let s = delta.sqrt();
    let start = reduce_indefinite_with(form, delta, s)?;
    Ok(canonical_cycle(raw_cycle(&start, delta, s)?))
}
