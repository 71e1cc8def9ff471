// SPDX-License-Identifier: Apache-2.0

use super::BinaryQuadraticForm;
use crate::error::{Error, Result};

/// `(g, x, y)` with `g = gcd(a, b) ≥ 0` and `x·a + y·b = g`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

/// Dirichlet composition of two primitive forms of the same discriminant.
///
/// With `s = (b₁ + b₂)/2` and `u·a₁ + v·a₂ + w·s = d = gcd(a₁, a₂, s)` the
/// product is `(a₁a₂/d², B, (B² − Δ)/4a₃)` where
/// `B = b₂ + 2(a₂/d)(v(s − b₂) − w·c₂)`, taken mod `2a₃`. The result is not
/// reduced.
pub fn compose(f: &BinaryQuadraticForm, g: &BinaryQuadraticForm) -> Result<BinaryQuadraticForm> {
    let delta = f.discriminant();
    if g.discriminant() != delta {
        return Err(Error::DiscriminantMismatch { form: *g, found: g.discriminant(), expected: delta });
    }
    let (a1, b1) = (f.a as i128, f.b as i128);
    let (a2, b2, c2) = (g.a as i128, g.b as i128, g.c as i128);
    let s = (b1 + b2) / 2;
    let (d1, _, y1) = ext_gcd(a1, a2);
    let (d, x2, y2) = ext_gcd(d1, s);
    let v = x2 * y1;
    let w = y2;
    let a3 = (a1 / d) * (a2 / d);
    let m = 2 * a3.abs();
    let mut b3 = (b2 + 2 * (a2 / d) * (v * (s - b2) - w * c2)).rem_euclid(m);
    if b3 > a3.abs() {
        b3 -= m;
    }
    let num = b3 * b3 - delta;
    if num % (4 * a3) != 0 {
        return Err(Error::OutOfRange(format!("composition of {f} and {g} failed the divisibility check")));
    }
    let c3 = num / (4 * a3);
    let n = |v: i128| i64::try_from(v).map_err(|_| Error::OutOfRange(format!("coefficient {v}")));
    Ok(BinaryQuadraticForm::new(n(a3)?, n(b3)?, n(c3)?))
}
