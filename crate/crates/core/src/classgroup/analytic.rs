// SPDX-License-Identifier: Apache-2.0

//! Class numbers of imaginary quadratic fields from the analytic class number
//! formula `h = √|Δ|·L(1, χ_Δ)/π` (`Δ < −4`), independent of forms.

use crate::arith::kronecker;
use crate::discriminants::FundamentalDiscriminant;
use crate::error::{Error, Result};

/// Largest admissible distance between the estimate and its nearest integer.
const ROUNDING_TOLERANCE: f64 = 0.25;

/// Truncated estimate of `h(Δ)`.
///
/// The character sum `Σ_{n ≤ N} χ(n)/n` runs over whole periods
/// (`N = J·|Δ|`, `J ≥ 2`, at least `terms` terms). Over whole periods the
/// tail `Σ_{n > N}` is governed by the moments `Σ r^k χ(r)` of one period, so
/// the first two moments are added back as a tail estimate.
pub fn analytic_class_number_estimate(delta: FundamentalDiscriminant, terms: u64) -> Result<f64> {
    let d = delta.get();
    if d == -3 || d == -4 {
        return Err(Error::ExtraUnits { delta: d, class_number: 1 });
    }
    if d > 0 {
        return Err(Error::OutOfRange(format!("analytic oracle needs Δ < 0, got {d}")));
    }
    let q = d.unsigned_abs();
    let chi: Vec<f64> = (1..=q).map(|r| kronecker(d, r as i64) as f64).collect();
    let periods = terms.div_ceil(q).max(2);

    let mut partial = 0.0f64;
    for j in 0..periods {
        let base = (j * q) as f64;
        partial += chi
            .iter()
            .enumerate()
            .map(|(i, &x)| x / (base + (i + 1) as f64))
            .sum::<f64>();
    }

    let qf = q as f64;
    let (m1, m2) = chi.iter().enumerate().fold((0.0, 0.0), |(m1, m2), (i, &x)| {
        let r = (i + 1) as f64;
        (m1 + x * r, m2 + x * r * r)
    });
    let tail = -m1 / (qf * qf) * zeta_tail(2, periods) + m2 / (qf * qf * qf) * zeta_tail(3, periods);
    Ok(qf.sqrt() / std::f64::consts::PI * (partial + tail))
}

/// `Σ_{j ≥ from} j^{−s}` by Euler–Maclaurin.
fn zeta_tail(s: i32, from: u64) -> f64 {
    let n = from as f64;
    let sf = s as f64;
    n.powi(1 - s) / (sf - 1.0) + 0.5 * n.powi(-s) + sf / 12.0 * n.powi(-s - 1)
        - sf * (sf + 1.0) * (sf + 2.0) / 720.0 * n.powi(-s - 3)
}

/// Nearest integer to [`analytic_class_number_estimate`]; estimates farther
/// than 0.25 from an integer are reported as [`Error::Inconclusive`].
pub fn analytic_class_number_oracle(delta: FundamentalDiscriminant, terms: u64) -> Result<u64> {
    let estimate = analytic_class_number_estimate(delta, terms)?;
    let nearest = estimate.round();
    if (estimate - nearest).abs() > ROUNDING_TOLERANCE || nearest < 1.0 {
        return Err(Error::Inconclusive { delta: delta.get(), estimate });
    }
    Ok(nearest as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(d: i64) -> FundamentalDiscriminant {
        FundamentalDiscriminant::new(d).unwrap()
    }

    #[test]
    fn known_values() {
        assert_eq!(analytic_class_number_oracle(fd(-23), 10_000), Ok(3));
        assert_eq!(analytic_class_number_oracle(fd(-163), 100_000), Ok(1));
        assert_eq!(analytic_class_number_oracle(fd(-20), 10_000), Ok(2));
        assert_eq!(analytic_class_number_oracle(fd(-4), 10_000), Err(Error::ExtraUnits { delta: -4, class_number: 1 }));
        assert!(analytic_class_number_oracle(fd(-3), 10).is_err());
        assert!(analytic_class_number_oracle(fd(5), 10).is_err());
    }

    #[test]
    fn estimates_are_sharp() {
        for d in [-23i64, -47, -71, -163, -1924, -9587] {
            let e = analytic_class_number_estimate(fd(d), 10_000).unwrap();
            assert!((e - e.round()).abs() < 0.05, "Δ = {d}: {e}");
        }
    }
}
