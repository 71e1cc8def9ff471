// SPDX-License-Identifier: Apache-2.0

//! Exact density constants and empirical statistics of twist families.
//!
//! A family for `A` consists of the square-free `D ≡ 1 mod 12|A|` with
//! `4|A|·D < X`. The map `D ↦ −4AD` sends it onto the fundamental
//! discriminants `Δ ≡ −4A mod 48A²` with `0 < |Δ| < X` (negative for `A > 0`,
//! positive for `A < 0`), and the Selmer dimension of each twist is read off
//! the 3-rank of `Δ`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, log3_exact};
use crate::classgroup::{class_group_summary, ClassGroupSummary};
use crate::discriminants::{
    condition_star, count_squarefree, enumerate_progression, ConditionStar, ProgressionFamily, Sign,
};
use crate::error::{Error, ParameterRejection, Result};
use crate::rational::Rational;
use crate::selmer::{twist_record_from_summary, validate_a, validate_family_a, StollCase, TwistRecord};

/// Largest `k` whose `3^(k+1)` fits the rational representation.
const MAX_K: u32 = 78;

fn three_pow(e: u32) -> Result<i128> {
    3i128.checked_pow(e).ok_or_else(|| Error::OutOfRange(format!("3^{e}")))
}

/// `(3^(k+1) − 2)/(3^(k+1) − 1)`.
pub fn delta_k(k: u32) -> Result<Rational> {
    if k > MAX_K {
        return Err(Error::OutOfRange(format!("k = {k} > {MAX_K}")));
    }
    let t = three_pow(k + 1)?;
    Ok(Rational::new(t - 2, t - 1))
}

/// `(1/8)·∏_{p | A} p/((p − 1)(p + 1))`.
pub fn density_constant(a: i64) -> Result<Rational> {
    validate_a(a)?;
    let factorization = arith::factorize(a)?;
    let product: Rational = factorization
        .primes()
        .map(|p| {
            let p = p as i128;
            Rational::new(p, (p - 1) * (p + 1))
        })
        .product();
    Ok(Rational::new(1, 8) * product)
}

/// `δ_k · density_constant(A)` for `A > 0`.
pub fn theorem1_lower_bound(a: i64, k: u32) -> Result<Rational> {
    validate_family_a(a)?;
    if a < 0 {
        return Err(Error::InvalidParameter { a, reason: ParameterRejection::NotPositive });
    }
    Ok(delta_k(k)? * density_constant(a)?)
}

/// Asymptotic bound on the average Selmer dimension: `1` for `A > 0`,
/// `4/3` for `A < 0`.
pub fn theorem2_bound(a: i64) -> Rational {
    if a > 0 {
        Rational::one()
    } else {
        Rational::new(4, 3)
    }
}

/// `2·log₃ h₃ ≤ h₃ − 1` for a power of 3.
pub fn log3_inequality_holds(three_torsion: u64) -> Result<bool> {
    let r = log3_exact(three_torsion).ok_or(Error::NotPowerOfThree(three_torsion))?;
    Ok(2 * r as u64 <= three_torsion - 1)
}

/// Where class group summaries come from during a scan.
pub trait SummarySource: Sync {
    fn summary(&self, delta: i64) -> Result<ClassGroupSummary>;
}

/// Computes every summary from scratch.
#[derive(Debug, Clone, Copy, Default)]
pub struct DirectSource;

impl SummarySource for DirectSource {
    fn summary(&self, delta: i64) -> Result<ClassGroupSummary> {
        class_group_summary(delta)
    }
}

impl<S: SummarySource + ?Sized> SummarySource for &S {
    fn summary(&self, delta: i64) -> Result<ClassGroupSummary> {
        (**self).summary(delta)
    }
}

/// The quadratic twists `D` of `y² = x³ − A` indexed below `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwistFamily {
    a: i64,
    x: u64,
    case: StollCase,
}

impl TwistFamily {
    pub fn new(a: i64, x: u64) -> Result<Self> {
        let case = validate_family_a(a)?;
        Ok(Self { a, x, case })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn case(&self) -> StollCase {
        self.case
    }

    fn abs_a(&self) -> u64 {
        self.a.unsigned_abs()
    }

    /// Exclusive bound on `D`: `D < X/4|A|` iff `D < ⌈X/4|A|⌉`.
    pub fn d_bound(&self) -> u64 {
        self.x.div_ceil(4 * self.abs_a())
    }

    /// Positive fundamental discriminants `D ≡ 1 mod 12|A|` below the bound.
    pub fn d_progression(&self) -> ProgressionFamily {
        ProgressionFamily::positive(self.d_bound(), 1, 12 * self.abs_a()).expect("nonzero modulus")
    }

    /// `48A²`.
    pub fn discriminant_modulus(&self) -> u64 {
        48 * self.abs_a() * self.abs_a()
    }

    /// `48A² − 4A` for `A > 0`, `−4A` for `A < 0`.
    pub fn discriminant_residue(&self) -> u64 {
        let a = self.a as i128;
        let m = if self.a > 0 { 48 * a * a - 4 * a } else { -4 * a };
        m as u64
    }

    /// The image family `Δ ≡ m mod 48A²`, `0 < |Δ| < X`.
    pub fn discriminant_family(&self) -> ProgressionFamily {
        let sign = if self.a > 0 { Sign::Negative } else { Sign::Positive };
        ProgressionFamily::new(self.x, self.discriminant_residue() as i64, self.discriminant_modulus(), sign)
            .expect("nonzero modulus")
    }

    /// Family members in increasing order: the trivial twist `D = 1` (whose
    /// image `−4A` is a fundamental discriminant although 1 is not) followed
    /// by the progression.
    pub fn members(&self) -> Vec<i64> {
        let mut out = Vec::new();
        if self.d_bound() > 1 {
            out.push(1);
        }
        out.extend(enumerate_progression(&self.d_progression()).into_iter().map(i64::from));
        out
    }

    pub fn discriminant_of(&self, d: i64) -> i64 {
        -4 * self.a * d
    }
}

/// Whether `D ↦ −4AD` is a bijection from the twist family onto its
/// discriminant family, both enumerated independently.
pub fn correspondence_check(a: i64, x: u64) -> Result<bool> {
    let family = TwistFamily::new(a, x)?;
    let images: Vec<i64> = family.members().iter().map(|&d| family.discriminant_of(d)).collect();
    let image_set: BTreeSet<i64> = images.iter().copied().collect();
    let injective = image_set.len() == images.len();
    let target: BTreeSet<i64> = enumerate_progression(&family.discriminant_family())
        .into_iter()
        .map(i64::from)
        .collect();
    Ok(injective && image_set == target)
}

/// A twist record with the class group data it was derived from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub record: TwistRecord,
    pub summary: ClassGroupSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoreticalConstants {
    pub delta_k: Rational,
    pub density_constant: Rational,
    /// `δ_k·density_constant`; only for `A > 0`.
    pub theorem1_bound: Option<Rational>,
    pub theorem2_bound: Rational,
    /// Mean of `#Cl[3]` over the discriminant family in the limit.
    pub nh_mean_limit: Rational,
}

/// Aggregate statistics of a scanned family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    #[serde(rename = "A")]
    pub a: i64,
    #[serde(rename = "X")]
    pub x: u64,
    pub k: u32,
    pub case: StollCase,
    pub family_size: u64,
    /// `#{0 < n < X/4|A| : n square-free}`.
    pub squarefree_count: u64,
    pub family_density: Rational,
    pub h3_mean: Rational,
    /// `#{D : rank_bound ≤ 2j} / squarefree_count` for `j = 0..=k`.
    pub certified_proportion_per_k: BTreeMap<u32, Rational>,
    /// Same counts divided by the family size.
    pub conditional_proportion_per_k: BTreeMap<u32, Rational>,
    pub avg_selmer_dim: Rational,
    /// `(3^(k+1) − mean)/(3^(k+1) − 1)` at the empirical `h3_mean`.
    pub lemma_bound_at_mean: Rational,
    pub condition_star_holds: bool,
    pub correspondence_holds: bool,
    /// Every `Δ` with `#Cl[3] ≤ 3^j` yields `rank_bound ≤ 2j`; `A > 0` only.
    pub inclusion_holds: Option<bool>,
    pub log3_inequality_holds: bool,
    pub theoretical: TheoreticalConstants,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyScan {
    pub report: FamilyReport,
    pub rows: Vec<ScanRow>,
}

/// Scans every twist of the family for `A` below `X`, reporting exact
/// empirical statistics beside the theoretical constants. Per-twist work runs
/// on the current rayon pool; results do not depend on its size.
pub fn scan_family<S: SummarySource>(a: i64, x: u64, k: u32, source: &S) -> Result<FamilyScan> {
    let family = TwistFamily::new(a, x)?;
    let members = family.members();
    if members.is_empty() {
        return Err(Error::EmptyFamily { a, x });
    }
    let rows = members
        .par_iter()
        .map(|&d| {
            let summary = source.summary(family.discriminant_of(d))?;
            let record = twist_record_from_summary(a, d, &summary)?;
            Ok(ScanRow { record, summary })
        })
        .collect::<Result<Vec<_>>>()?;
    let report = summarize(&family, k, &rows)?;
    Ok(FamilyScan { report, rows })
}

fn summarize(family: &TwistFamily, k: u32, rows: &[ScanRow]) -> Result<FamilyReport> {
    let a = family.a();
    let size = rows.len() as i128;
    let squarefree_count = count_squarefree(family.d_bound());
    let t = squarefree_count as i128;

    let h3_sum: i128 = rows.iter().map(|r| r.summary.three_torsion as i128).sum();
    let rank_sum: i128 = rows.iter().map(|r| r.summary.three_rank as i128).sum();
    let dim_sum: i128 = rows.iter().map(|r| r.record.selmer_dim as i128).sum();
    let avg_selmer_dim = Rational::new(dim_sum, size);
    let offset = if a < 0 { Rational::one() } else { Rational::zero() };
    debug_assert_eq!(avg_selmer_dim, offset + Rational::new(2 * rank_sum, size));

    let mut certified = BTreeMap::new();
    let mut conditional = BTreeMap::new();
    for j in 0..=k {
        let count = rows.iter().filter(|r| r.record.rank_bound <= 2 * j).count() as i128;
        certified.insert(j, Rational::new(count, t));
        conditional.insert(j, Rational::new(count, size));
    }

    let three_k = three_pow(k + 1)?;
    let h3_mean = Rational::new(h3_sum, size);
    let lemma_bound_at_mean = (Rational::integer(three_k) - h3_mean) / Rational::integer(three_k - 1);

    let inclusion_holds = (a > 0).then(|| {
        (0..=k).all(|j| {
            let cap = 3u64.saturating_pow(j);
            rows.iter()
                .filter(|r| r.summary.three_torsion <= cap)
                .all(|r| r.record.rank_bound <= 2 * j)
        })
    });
    let mut log3_ok = true;
    for r in rows {
        log3_ok &= log3_inequality_holds(r.summary.three_torsion)?;
    }

    let disc_family = family.discriminant_family();
    let theoretical = TheoreticalConstants {
        delta_k: delta_k(k)?,
        density_constant: density_constant(a)?,
        theorem1_bound: if a > 0 { Some(theorem1_lower_bound(a, k)?) } else { None },
        theorem2_bound: theorem2_bound(a),
        nh_mean_limit: if a > 0 { Rational::integer(2) } else { Rational::new(4, 3) },
    };
    Ok(FamilyReport {
        a,
        x: family.x(),
        k,
        case: family.case(),
        family_size: size as u64,
        squarefree_count,
        family_density: Rational::new(size, t),
        h3_mean,
        certified_proportion_per_k: certified,
        conditional_proportion_per_k: conditional,
        avg_selmer_dim,
        lemma_bound_at_mean,
        condition_star_holds: condition_star(disc_family.residue(), disc_family.modulus())?.holds,
        correspondence_holds: correspondence_check(a, family.x())?,
        inclusion_holds,
        log3_inequality_holds: log3_ok,
        theoretical,
    })
}

/// Empirical mean of `#Cl[3]` over a progression family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NhMean {
    pub mean: Rational,
    pub count: u64,
    /// When this fails the limiting-mean theorem does not apply to the family.
    pub condition_star: ConditionStar,
}

pub fn nh_mean<S: SummarySource>(family: &ProgressionFamily, source: &S) -> Result<NhMean> {
    let members = enumerate_progression(family);
    if members.is_empty() {
        return Err(Error::EmptyProgression);
    }
    let sum: i128 = members
        .par_iter()
        .map(|d| source.summary(d.get()).map(|s| s.three_torsion as i128))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    let residue = if family.residue() == 0 { family.modulus() } else { family.residue() };
    Ok(NhMean {
        mean: Rational::new(sum, members.len() as i128),
        count: members.len() as u64,
        condition_star: condition_star(residue, family.modulus())?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiminfOutcome {
    pub mean: Rational,
    /// `#{a : h(a) ≤ 3^k} / #S`.
    pub proportion: Rational,
    /// `(3^(k+1) − B)/(3^(k+1) − 1)`.
    pub bound: Rational,
    /// Whether the sample mean is at most `B`.
    pub hypothesis_met: bool,
    /// `!hypothesis_met || proportion ≥ bound`.
    pub holds: bool,
}

/// Finite-sample form of the lower bound on the proportion of small values of
/// a power-of-3 valued function with mean at most `B`.
///
/// With `s = #S_k`, every value outside `S_k` is at least `3^(k+1)`, so
/// `Σh ≥ s + 3^(k+1)(#S − s)`, which rearranges to the bound whenever the
/// mean is at most `B`.
pub fn liminf_harness(h_values: &[u64], b_target: Rational, k: u32) -> Result<LiminfOutcome> {
    if h_values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(&bad) = h_values.iter().find(|&&h| log3_exact(h).is_none()) {
        return Err(Error::NotPowerOfThree(bad));
    }
    let n = h_values.len() as i128;
    let cap = three_pow(k)?;
    let small = h_values.iter().filter(|&&h| (h as i128) <= cap).count() as i128;
    let sum: i128 = h_values.iter().map(|&h| h as i128).sum();
    let mean = Rational::new(sum, n);
    let proportion = Rational::new(small, n);
    let t = Rational::integer(three_pow(k + 1)?);
    let bound = (t - b_target) / (t - Rational::one());
    let hypothesis_met = mean <= b_target;
    Ok(LiminfOutcome { mean, proportion, bound, hypothesis_met, holds: !hypothesis_met || proportion >= bound })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem2Report {
    #[serde(rename = "A")]
    pub a: i64,
    #[serde(rename = "X")]
    pub x: u64,
    pub avg_selmer_dim: Rational,
    pub asymptotic_bound: Rational,
    pub within_bound: bool,
    /// Records satisfying `2·log₃ h₃ ≤ h₃ − 1`, out of all records.
    pub log3_inequality_count: u64,
    pub record_count: u64,
}

impl Theorem2Report {
    pub fn from_scan(scan: &FamilyScan) -> Result<Self> {
        let r = &scan.report;
        let mut ok = 0;
        for row in &scan.rows {
            if log3_inequality_holds(row.summary.three_torsion)? {
                ok += 1;
            }
        }
        Ok(Self {
            a: r.a,
            x: r.x,
            avg_selmer_dim: r.avg_selmer_dim,
            asymptotic_bound: r.theoretical.theorem2_bound,
            within_bound: r.avg_selmer_dim <= r.theoretical.theorem2_bound,
            log3_inequality_count: ok,
            record_count: scan.rows.len() as u64,
        })
    }
}

pub fn theorem2_report<S: SummarySource>(a: i64, x: u64, source: &S) -> Result<Theorem2Report> {
    Theorem2Report::from_scan(&scan_family(a, x, 0, source)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discriminants::is_fundamental;

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn delta_k_values() {
        assert_eq!(delta_k(0).unwrap(), q(1, 2));
        assert_eq!(delta_k(1).unwrap(), q(7, 8));
        assert_eq!(delta_k(3).unwrap(), q(79, 80));
        let mut prev = delta_k(0).unwrap();
        for k in 1..=MAX_K {
            let d = delta_k(k).unwrap();
            assert!(d > prev && d < Rational::one());
            prev = d;
        }
        assert!(delta_k(MAX_K + 1).is_err());
    }

    #[test]
    fn density_constants() {
        assert_eq!(density_constant(1).unwrap(), q(1, 8));
        assert_eq!(density_constant(37).unwrap(), q(37, 10944));
        // (1/8)(5/24)(7/48)
        assert_eq!(density_constant(-35).unwrap(), q(35, 9216));
        assert!(density_constant(2).is_err());
        for a in -2000i64..2000 {
            if let Ok(c) = density_constant(a) {
                assert_eq!(c == q(1, 8), a.abs() == 1);
                assert!(c <= q(1, 8));
            }
        }
    }

    #[test]
    fn theorem1_bounds() {
        assert_eq!(theorem1_lower_bound(1, 0).unwrap(), q(1, 16));
        assert_eq!(theorem1_lower_bound(1, 1).unwrap(), q(7, 64));
        assert_eq!(theorem1_lower_bound(37, 0).unwrap(), q(37, 21888));
        assert!(theorem1_lower_bound(-35, 0).is_err());
        assert!(theorem1_lower_bound(13, 0).is_err());
    }

    #[test]
    fn family_members_small() {
        let f = TwistFamily::new(1, 400).unwrap();
        assert_eq!(f.members(), vec![1, 13, 37, 61, 73, 85, 97]);
        assert_eq!(TwistFamily::new(-35, 100_000).unwrap().members(), vec![1, 421]);
        assert!(TwistFamily::new(1, 4).unwrap().members().is_empty());
        assert_eq!(f.discriminant_residue(), 44);
        assert_eq!(TwistFamily::new(-35, 1).unwrap().discriminant_residue(), 140);
        assert_eq!(TwistFamily::new(-35, 1).unwrap().discriminant_modulus(), 58800);
    }

    #[test]
    fn correspondence_small() {
        assert!(correspondence_check(1, 1000).unwrap());
        assert!(correspondence_check(-35, 10_000).unwrap());
        assert!(correspondence_check(37, 20_000).unwrap());
    }

    #[test]
    fn scan_small_family() {
        // frozen from an independent computation: h₃ over
        // Δ ∈ {−4, −52, −148, −244, −292, −340, −388} is (1,1,1,3,1,1,1)
        let scan = scan_family(1, 400, 2, &DirectSource).unwrap();
        let r = &scan.report;
        assert_eq!(r.family_size, 7);
        assert_eq!(r.squarefree_count, 61);
        assert_eq!(r.h3_mean, q(9, 7));
        assert_eq!(r.avg_selmer_dim, q(2, 7));
        assert_eq!(r.certified_proportion_per_k[&0], q(6, 61));
        assert_eq!(r.certified_proportion_per_k[&1], q(7, 61));
        assert_eq!(r.conditional_proportion_per_k[&0], q(6, 7));
        assert_eq!(r.inclusion_holds, Some(true));
        assert!(r.correspondence_holds && r.condition_star_holds && r.log3_inequality_holds);
        assert_eq!(r.theoretical.theorem1_bound, Some(q(25, 208)));
        let deltas: Vec<i64> = scan.rows.iter().map(|r| r.record.delta).collect();
        assert_eq!(deltas, vec![-4, -52, -148, -244, -292, -340, -388]);
        assert!(matches!(scan_family(1, 4, 0, &DirectSource), Err(Error::EmptyFamily { .. })));
    }

    #[test]
    fn scan_is_pool_size_independent() {
        let reference = scan_family(1, 40_000, 2, &DirectSource).unwrap();
        for threads in [1, 3, 8] {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let scan = pool.install(|| scan_family(1, 40_000, 2, &DirectSource)).unwrap();
            assert_eq!(scan, reference);
        }
    }

    #[test]
    fn proportions_monotone_and_average_identity() {
        for (a, x) in [(1, 100_000), (37, 100_000), (-35, 100_000), (61, 50_000)] {
            let scan = scan_family(a, x, 4, &DirectSource).unwrap();
            let r = &scan.report;
            let vals: Vec<Rational> = r.certified_proportion_per_k.values().copied().collect();
            assert!(vals.windows(2).all(|w| w[0] <= w[1]));
            let ranks: i128 = scan.rows.iter().map(|row| row.summary.three_rank as i128).sum();
            let offset = if a < 0 { 1 } else { 0 };
            assert_eq!(r.avg_selmer_dim, Rational::integer(offset) + q(2 * ranks, r.family_size as i128));
            for row in &scan.rows {
                assert!(is_fundamental(row.record.delta).unwrap());
                if a > 0 {
                    assert_eq!(row.record.rank_bound % 2, 0);
                }
            }
        }
    }

    #[test]
    fn nh_mean_small() {
        let fam = ProgressionFamily::negative(100, 44, 48).unwrap();
        let m = nh_mean(&fam, &DirectSource).unwrap();
        assert_eq!((m.mean, m.count), (Rational::one(), 2));
        assert!(m.condition_star.holds);
        // {−3}
        let single = ProgressionFamily::negative(8, 5, 8).unwrap();
        assert_eq!(nh_mean(&single, &DirectSource).unwrap(), NhMean {
            mean: Rational::one(),
            count: 1,
            condition_star: condition_star(5, 8).unwrap(),
        });
        let single = ProgressionFamily::negative(24, 1, 24).unwrap();
        assert_eq!(nh_mean(&single, &DirectSource).unwrap().mean, Rational::integer(3));
        let empty = ProgressionFamily::negative(3, 1, 4).unwrap();
        assert_eq!(nh_mean(&empty, &DirectSource), Err(Error::EmptyProgression));
    }

    #[test]
    fn liminf_examples() {
        let o = liminf_harness(&[1, 1, 1], Rational::one(), 0).unwrap();
        assert_eq!((o.proportion, o.bound, o.holds), (Rational::one(), Rational::one(), true));
        let o = liminf_harness(&[1, 1, 1, 3, 3, 9], Rational::integer(3), 1).unwrap();
        assert_eq!(o.mean, Rational::integer(3));
        assert_eq!(o.bound, q(3, 4));
        assert_eq!(o.proportion, q(5, 6));
        assert!(o.holds && o.hypothesis_met);
        let o = liminf_harness(&[9, 9, 9], Rational::integer(9), 0).unwrap();
        assert_eq!(o.proportion, Rational::zero());
        assert!(o.bound < Rational::zero() && o.holds);
        assert_eq!(liminf_harness(&[1, 2], Rational::one(), 0), Err(Error::NotPowerOfThree(2)));
        assert_eq!(liminf_harness(&[], Rational::one(), 0), Err(Error::EmptyInput));
    }

    #[test]
    fn log3_inequality() {
        assert!(log3_inequality_holds(1).unwrap());
        assert!(log3_inequality_holds(9).unwrap());
        assert!(log3_inequality_holds(3).unwrap());
        assert!(log3_inequality_holds(6).is_err());
    }

    #[test]
    fn theorem2_small() {
        let t = theorem2_report(1, 400, &DirectSource).unwrap();
        assert_eq!(t.avg_selmer_dim, q(2, 7));
        assert_eq!(t.asymptotic_bound, Rational::one());
        assert!(t.within_bound);
        assert_eq!(t.log3_inequality_count, t.record_count);
        let t = theorem2_report(-35, 20_000, &DirectSource).unwrap();
        assert_eq!(t.avg_selmer_dim, Rational::one());
        assert_eq!(t.asymptotic_bound, q(4, 3));
    }
}
