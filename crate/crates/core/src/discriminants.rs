// SPDX-License-Identifier: Apache-2.0

//! Fundamental discriminants and their arithmetic-progression families.

use std::fmt;
use std::io::{self, Write};

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, canonical_residue, squarefree_flags_range, SquarefreeFlags};
use crate::error::{Error, Result};

/// Discriminant of a quadratic number field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct FundamentalDiscriminant(i64);

impl FundamentalDiscriminant {
    pub fn new(delta: i64) -> Result<Self> {
        if is_fundamental(delta)? {
            Ok(Self(delta))
        } else {
            Err(Error::NotFundamental(delta))
        }
    }

    pub fn get(self) -> i64 {
        self.0
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    /// Square-free `d` with `ℚ(√d)` of this discriminant.
    pub fn radicand(self) -> i64 {
        if self.0 % 4 == 0 {
            self.0 / 4
        } else {
            self.0
        }
    }
}

impl TryFrom<i64> for FundamentalDiscriminant {
    type Error = Error;

    fn try_from(delta: i64) -> Result<Self> {
        Self::new(delta)
    }
}

impl From<FundamentalDiscriminant> for i64 {
    fn from(d: FundamentalDiscriminant) -> i64 {
        d.0
    }
}

impl fmt::Display for FundamentalDiscriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// True iff `delta` is the discriminant of a quadratic field.
pub fn is_fundamental(delta: i64) -> Result<bool> {
    if delta == 0 {
        return Err(Error::Zero);
    }
    if delta == 1 {
        return Ok(false);
    }
    Ok(match canonical_residue(delta, 4) {
        1 => arith::is_squarefree(delta)?,
        0 => {
            let d = delta / 4;
            matches!(canonical_residue(d, 4), 2 | 3) && arith::is_squarefree(d)?
        }
        _ => false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Positive,
}

impl Sign {
    pub fn of(n: i64) -> Self {
        if n < 0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    fn apply(self, magnitude: u64) -> i64 {
        match self {
            Sign::Negative => -(magnitude as i64),
            Sign::Positive => magnitude as i64,
        }
    }
}

/// Fundamental discriminants `Δ ≡ m mod N` with `0 < ±Δ < X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProgressionFamily {
    bound: u64,
    residue: u64,
    modulus: u64,
    sign: Sign,
}

impl ProgressionFamily {
    /// The residue is reduced mod `modulus` on construction.
    pub fn new(bound: u64, residue: i64, modulus: u64, sign: Sign) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Zero);
        }
        Ok(Self {
            bound,
            residue: canonical_residue(residue, modulus),
            modulus,
            sign,
        })
    }

    pub fn negative(bound: u64, residue: i64, modulus: u64) -> Result<Self> {
        Self::new(bound, residue, modulus, Sign::Negative)
    }

    pub fn positive(bound: u64, residue: i64, modulus: u64) -> Result<Self> {
        Self::new(bound, residue, modulus, Sign::Positive)
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn contains(&self, delta: i64) -> bool {
        let magnitude = delta.unsigned_abs();
        delta != 0
            && Sign::of(delta) == self.sign
            && magnitude < self.bound
            && canonical_residue(delta, self.modulus) == self.residue
            && is_fundamental(delta).unwrap_or(false)
    }
}

/// Members of the family whose magnitude lies in `[lo, hi)`, in increasing
/// magnitude.
///
/// One segmented square-free sieve covers both shapes `Δ ≡ 1 mod 4` and
/// `Δ = 4d`.
pub fn enumerate_progression_range(
    family: &ProgressionFamily,
    lo: u64,
    hi: u64,
) -> Vec<FundamentalDiscriminant> {
    let lo = lo.max(1);
    let hi = hi.min(family.bound);
    if lo >= hi {
        return Vec::new();
    }
    let odd = squarefree_flags_range(lo, hi);
    let quarter = squarefree_flags_range(lo.div_ceil(4), hi.div_ceil(4));
    let mut out = Vec::new();
    for n in lo..hi {
        let delta = family.sign.apply(n);
        if delta == 1 || canonical_residue(delta, family.modulus) != family.residue {
            continue;
        }
        if shape_is_fundamental(delta, n, &odd, &quarter) {
            out.push(FundamentalDiscriminant(delta));
        }
    }
    out
}

fn shape_is_fundamental(delta: i64, n: u64, odd: &SquarefreeFlags, quarter: &SquarefreeFlags) -> bool {
    match canonical_residue(delta, 4) {
        1 => odd.get(n),
        0 => {
            let d = delta / 4;
            matches!(canonical_residue(d, 4), 2 | 3) && quarter.get(n / 4)
        }
        _ => false,
    }
}

/// All members of the family, sorted by absolute value.
pub fn enumerate_progression(family: &ProgressionFamily) -> Vec<FundamentalDiscriminant> {
    enumerate_progression_range(family, 1, family.bound)
}

/// Same as [`enumerate_progression`], sieving `parts` disjoint sub-intervals
/// in parallel.
pub fn enumerate_progression_partitioned(
    family: &ProgressionFamily,
    parts: usize,
) -> Vec<FundamentalDiscriminant> {
    let parts = parts.max(1) as u64;
    let step = family.bound.div_ceil(parts).max(1);
    (0..parts)
        .into_par_iter()
        .map(|i| enumerate_progression_range(family, i * step, ((i + 1) * step).min(family.bound)))
        .flatten_iter()
        .collect()
}

/// Writes one discriminant per line.
pub fn write_newline_delimited<W: Write>(
    out: &mut W,
    members: impl IntoIterator<Item = FundamentalDiscriminant>,
) -> io::Result<()> {
    for d in members {
        writeln!(out, "{d}")?;
    }
    Ok(())
}

/// First failing clause of the progression admissibility condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum ConditionStarFailure {
    /// Odd `p | gcd(m, N)` with `p² ∤ N`.
    OddPrimeSquareNotDividingModulus { p: u64 },
    /// Odd `p | gcd(m, N)` with `p² | m`.
    OddPrimeSquareDividingResidue { p: u64 },
    /// `N` even but neither `4 | N, m ≡ 1 mod 4` nor `16 | N, m ≡ 8, 12 mod 16`.
    EvenModulus,
}

impl fmt::Display for ConditionStarFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::OddPrimeSquareNotDividingModulus { p } => {
                write!(f, "odd common prime {p}: {p}² does not divide N")
            }
            Self::OddPrimeSquareDividingResidue { p } => {
                write!(f, "odd common prime {p}: {p}² divides m")
            }
            Self::EvenModulus => f.write_str(
                "N even but neither (4 | N and m ≡ 1 mod 4) nor (16 | N and m ≡ 8, 12 mod 16)",
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionStar {
    pub holds: bool,
    /// Every failing clause, odd-prime clause first.
    pub failures: Vec<ConditionStarFailure>,
}

impl ConditionStar {
    pub fn first_failure(&self) -> Option<ConditionStarFailure> {
        self.failures.first().copied()
    }
}

/// Checks the admissibility hypothesis on `(m, N)` for the averaged 3-torsion
/// theorem in arithmetic progressions.
pub fn condition_star(m: u64, modulus: u64) -> Result<ConditionStar> {
    if m == 0 || modulus == 0 {
        return Err(Error::Zero);
    }
    let mut failures = Vec::new();
    let common = m.gcd(&modulus);
    if common > 1 {
        let factorization = arith::factorize(common as i64)?;
        for p in factorization.primes().filter(|&p| p != 2) {
            let sq = p * p;
            if modulus % sq != 0 {
                failures.push(ConditionStarFailure::OddPrimeSquareNotDividingModulus { p });
                break;
            }
            if m % sq == 0 {
                failures.push(ConditionStarFailure::OddPrimeSquareDividingResidue { p });
                break;
            }
        }
    }
    if modulus % 2 == 0 {
        let four = modulus % 4 == 0 && m % 4 == 1;
        let sixteen = modulus % 16 == 0 && matches!(m % 16, 8 | 12);
        if !(four || sixteen) {
            failures.push(ConditionStarFailure::EvenModulus);
        }
    }
    Ok(ConditionStar { holds: failures.is_empty(), failures })
}

/// `#{n : 0 < n < x, n square-free}` via `Σ μ(d)·⌊(x−1)/d²⌋`.
pub fn count_squarefree(x: u64) -> u64 {
    if x <= 1 {
        return 0;
    }
    let n = x - 1;
    let root = num_integer::Roots::sqrt(&n) as usize;
    let mobius = mobius_table(root);
    let total: i64 = (1..=root)
        .map(|d| mobius[d] as i64 * (n / (d as u64 * d as u64)) as i64)
        .sum();
    total as u64
}

fn mobius_table(limit: usize) -> Vec<i8> {
    let mut mu = vec![1i8; limit + 1];
    let mut composite = vec![false; limit + 1];
    for p in 2..=limit {
        if composite[p] {
            continue;
        }
        for m in (p..=limit).step_by(p) {
            if m > p {
                composite[m] = true;
            }
            mu[m] = -mu[m];
        }
        let sq = p * p;
        for m in (sq..=limit).step_by(sq) {
            mu[m] = 0;
        }
    }
    mu
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(family: &ProgressionFamily) -> Vec<i64> {
        let mut out = Vec::new();
        for n in 1..family.bound() as i64 {
            let delta = match family.sign() {
                Sign::Negative => -n,
                Sign::Positive => n,
            };
            if is_fundamental(delta).unwrap() && canonical_residue(delta, family.modulus()) == family.residue() {
                out.push(delta);
            }
        }
        out
    }

    #[test]
    fn fundamental_examples() {
        assert!(is_fundamental(-4).unwrap());
        assert!(!is_fundamental(-9).unwrap());
        assert!(is_fundamental(140).unwrap());
        assert!(!is_fundamental(1).unwrap());
        assert!(!is_fundamental(10).unwrap());
        assert!(is_fundamental(-3).unwrap());
        assert!(is_fundamental(8).unwrap());
        assert!(!is_fundamental(-16).unwrap());
        assert_eq!(is_fundamental(0), Err(Error::Zero));
        assert_eq!(FundamentalDiscriminant::new(12).unwrap().radicand(), 3);
        assert!(FundamentalDiscriminant::new(10).is_err());
    }

    #[test]
    fn enumerate_small_negative_family() {
        let fam = ProgressionFamily::negative(50, 1, 4).unwrap();
        let got: Vec<i64> = enumerate_progression(&fam).into_iter().map(i64::from).collect();
        assert_eq!(got, vec![-3, -7, -11, -15, -19, -23, -31, -35, -39, -43, -47]);
        assert_eq!(got, brute(&fam));
    }

    #[test]
    fn one_is_not_a_member() {
        let fam = ProgressionFamily::positive(4, 1, 4).unwrap();
        assert!(enumerate_progression(&fam).is_empty());
    }

    #[test]
    fn enumeration_matches_brute_force_scan() {
        // brute-force count frozen from an independent scan: 183
        let fam = ProgressionFamily::negative(10_000, 44, 48).unwrap();
        let got: Vec<i64> = enumerate_progression(&fam).into_iter().map(i64::from).collect();
        assert_eq!(got.len(), 183);
        assert_eq!(got, brute(&fam));
        for (bound, m, n, sign) in [(3000, 0, 1, Sign::Positive), (3000, 5, 12, Sign::Positive), (2000, -3, 8, Sign::Negative)] {
            let fam = ProgressionFamily::new(bound, m, n, sign).unwrap();
            let got: Vec<i64> = enumerate_progression(&fam).into_iter().map(i64::from).collect();
            assert_eq!(got, brute(&fam));
            assert!(got.iter().all(|&d| fam.contains(d)));
        }
    }

    #[test]
    fn residues_partition_all_discriminants() {
        let n = 48;
        for sign in [Sign::Negative, Sign::Positive] {
            let all = enumerate_progression(&ProgressionFamily::new(5000, 0, 1, sign).unwrap()).len();
            let split: usize = (0..n)
                .map(|m| enumerate_progression(&ProgressionFamily::new(5000, m, n as u64, sign).unwrap()).len())
                .sum();
            assert_eq!(all, split);
        }
    }

    #[test]
    fn partitioned_enumeration_is_partition_independent() {
        let fam = ProgressionFamily::negative(100_000, 44, 48).unwrap();
        let whole = enumerate_progression(&fam);
        for parts in [1, 2, 3, 7, 64] {
            assert_eq!(enumerate_progression_partitioned(&fam, parts), whole);
        }
    }

    #[test]
    fn residue_is_canonicalized() {
        let fam = ProgressionFamily::negative(100, -4, 48).unwrap();
        assert_eq!(fam.residue(), 44);
    }

    #[test]
    fn newline_stream() {
        let fam = ProgressionFamily::negative(20, 1, 4).unwrap();
        let mut buf = Vec::new();
        write_newline_delimited(&mut buf, enumerate_progression(&fam)).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "-3\n-7\n-11\n-15\n-19\n");
    }

    #[test]
    fn condition_star_examples() {
        assert!(condition_star(44, 48).unwrap().holds);
        assert!(condition_star(140, 58800).unwrap().holds);
        let r = condition_star(3, 6).unwrap();
        assert!(!r.holds);
        // both clauses fail: 9 ∤ 6, and 6 is even without 4 | 6
        assert!(r.failures.contains(&ConditionStarFailure::EvenModulus));
        assert_eq!(r.first_failure(), Some(ConditionStarFailure::OddPrimeSquareNotDividingModulus { p: 3 }));
        assert_eq!(condition_star(1, 6).unwrap().failures, vec![ConditionStarFailure::EvenModulus]);
        assert_eq!(
            condition_star(9, 27).unwrap().first_failure(),
            Some(ConditionStarFailure::OddPrimeSquareDividingResidue { p: 3 })
        );
        assert!(condition_star(1, 4).unwrap().holds);
        assert!(condition_star(8, 16).unwrap().holds);
        assert!(condition_star(8, 48).unwrap().holds);
        assert!(condition_star(7, 15).unwrap().holds);
    }

    #[test]
    fn count_squarefree_examples() {
        assert_eq!(count_squarefree(1), 0);
        assert_eq!(count_squarefree(2), 1);
        assert_eq!(count_squarefree(11), 7);
        let sieve = arith::squarefree_flags(999_999).count();
        let million = count_squarefree(1_000_000);
        assert_eq!(million, sieve);
        let expected = 6.0 / (std::f64::consts::PI * std::f64::consts::PI) * 1e6;
        assert!((million as f64 - expected).abs() / expected < 0.01);
        for x in 1..2000 {
            assert_eq!(count_squarefree(x), arith::squarefree_flags(x.saturating_sub(1)).count());
        }
    }
}
