// SPDX-License-Identifier: Apache-2.0

//! Oracle suites behind the `verify` command.

use std::fmt;
use std::path::Path;

use mordell_core::classgroup::{analytic_class_number_oracle, brute_force_group_structure};
use mordell_core::discriminants::{condition_star, is_fundamental};
use mordell_core::selmer::validate_a;
use mordell_core::stats::{correspondence_check, liminf_harness};
use mordell_core::{class_group_summary, FundamentalDiscriminant, Rational};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::cache;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checked: u64,
    pub failures: Vec<String>,
    pub note: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status}  {:<16} {:>8} checked", self.name, self.checked)?;
        if let Some(note) = &self.note {
            write!(f, "  ({note})")?;
        }
        for failure in self.failures.iter().take(10) {
            write!(f, "\n      {failure}")?;
        }
        if self.failures.len() > 10 {
            write!(f, "\n      ... {} more", self.failures.len() - 10)?;
        }
        Ok(())
    }
}

fn fundamentals(range: impl IntoIterator<Item = i64>) -> Vec<i64> {
    range.into_iter().filter(|&d| is_fundamental(d).unwrap_or(false)).collect()
}

/// Form-based class numbers against the analytic class number formula for
/// `−bound ≤ Δ < −4`.
pub fn analytic_suite(bound: i64) -> SuiteResult {
    let deltas = fundamentals(-bound..-4);
    let failures: Vec<String> = deltas
        .par_iter()
        .filter_map(|&d| {
            let fd = FundamentalDiscriminant::new(d).ok()?;
            let forms = class_group_summary(d).map(|s| s.class_number);
            let analytic = analytic_class_number_oracle(fd, 0);
            match (forms, analytic) {
                (Ok(h), Ok(a)) if h == a => None,
                (h, a) => Some(format!("Δ = {d}: forms {h:?}, analytic {a:?}")),
            }
        })
        .collect();
    SuiteResult {
        name: "analytic",
        checked: deltas.len() as u64,
        failures,
        note: Some(format!("-{bound} <= Δ < -4")),
    }
}

/// 3-torsion against a brute-force invariant factor decomposition for
/// `0 < |Δ| ≤ bound`.
pub fn structure_suite(bound: i64) -> SuiteResult {
    let deltas = fundamentals((-bound..=bound).filter(|&d| d != 0));
    let failures: Vec<String> = deltas
        .par_iter()
        .filter_map(|&d| {
            let fd = FundamentalDiscriminant::new(d).ok()?;
            let (summary, factors) = match (class_group_summary(d), brute_force_group_structure(fd)) {
                (Ok(s), Ok(f)) => (s, f),
                (s, f) => return Some(format!("Δ = {d}: {s:?} / {f:?}")),
            };
            let order: u64 = factors.iter().product();
            let three_part = 3u64.pow(factors.iter().filter(|&&n| n % 3 == 0).count() as u32);
            (order != summary.class_number || three_part != summary.three_torsion).then(|| {
                format!("Δ = {d}: summary {summary:?}, invariant factors {factors:?}")
            })
        })
        .collect();
    SuiteResult {
        name: "structure",
        checked: deltas.len() as u64,
        failures,
        note: Some(format!("0 < |Δ| <= {bound}")),
    }
}

pub fn bijection_suite(x: u64) -> SuiteResult {
    let params = [1, 37, 61, -35];
    let failures = params
        .par_iter()
        .filter_map(|&a| match correspondence_check(a, x) {
            Ok(true) => None,
            other => Some(format!("A = {a}, X = {x}: {other:?}")),
        })
        .collect();
    SuiteResult { name: "bijection", checked: params.len() as u64, failures, note: Some(format!("X = {x}")) }
}

/// The progression hypothesis for every admissible `A` with `0 < |A| < bound`.
pub fn condition_star_suite(bound: i64) -> SuiteResult {
    let mut checked = 0;
    let mut failures = Vec::new();
    for a in (1 - bound..bound).filter(|&a| a != 0 && validate_a(a).is_ok()) {
        checked += 1;
        let abs = a.unsigned_abs();
        let a2 = abs * abs;
        let m = if a > 0 { 48 * a2 - 4 * abs } else { 4 * abs };
        match condition_star(m, 48 * a2) {
            Ok(c) if c.holds => {}
            other => failures.push(format!("A = {a}: {other:?}")),
        }
    }
    SuiteResult { name: "condition_star", checked, failures, note: Some(format!("0 < |A| < {bound}")) }
}

/// Random lists of powers of 3, targets at and above their mean.
pub fn liminf_suite(trials: u64, seed: u64) -> SuiteResult {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let len = rng.random_range(1..=60);
        let values: Vec<u64> = (0..len).map(|_| 3u64.pow(rng.random_range(0..5))).collect();
        let k = rng.random_range(0..4);
        let sum: u64 = values.iter().sum();
        let mean = Rational::new(sum as i128, len as i128);
        let target = mean + Rational::new(rng.random_range(0..4), rng.random_range(1..4));
        match liminf_harness(&values, target, k) {
            Ok(o) if o.hypothesis_met && o.holds && o.proportion >= o.bound => {}
            other => failures.push(format!("trial {trial}: {values:?}, k = {k}: {other:?}")),
        }
    }
    SuiteResult { name: "liminf", checked: trials, failures, note: Some(format!("seed {seed}")) }
}

/// Quarantines unreadable lines and entries that disagree with a fresh
/// computation (all entries at the full level, the first 500 otherwise).
pub fn cache_suite(path: &Path, level: Level) -> anyhow::Result<SuiteResult> {
    let limit = match level {
        Level::Quick => 500,
        Level::Full => usize::MAX,
    };
    let parsed = cache::parse_file(path)?;
    let audited: std::collections::HashSet<i64> = parsed.entries.iter().take(limit).map(|e| e.delta).collect();
    let checked = parsed.entries.len() + parsed.bad.len();
    let quarantined = cache::quarantine(path, |e| {
        if !audited.contains(&e.delta) {
            return Ok(());
        }
        match class_group_summary(e.delta) {
            Ok(s) if cache::CacheEntry::from_summary(&s) == *e => Ok(()),
            Ok(s) => Err(format!("recomputed {s:?}")),
            Err(err) => Err(err.to_string()),
        }
    })?;
    let note = if quarantined.is_empty() {
        "clean".to_string()
    } else {
        let lines: Vec<String> = quarantined
            .iter()
            .map(|b| if b.line > 0 { format!("line {}: {}", b.line, b.reason) } else { b.reason.clone() })
            .collect();
        format!("quarantined {}: {}", quarantined.len(), lines.join("; "))
    };
    Ok(SuiteResult { name: "cache", checked: checked as u64, failures: Vec::new(), note: Some(note) })
}

pub fn run(level: Level, cache_path: Option<&Path>) -> anyhow::Result<Vec<SuiteResult>> {
    let (analytic_bound, bijection_x) = match level {
        Level::Quick => (2000, 10_000),
        Level::Full => (10_000, 100_000),
    };
    let mut results = vec![
        analytic_suite(analytic_bound),
        structure_suite(2000),
        bijection_suite(bijection_x),
        condition_star_suite(2000),
        liminf_suite(1000, 0x5eed),
    ];
    if let Some(path) = cache_path {
        results.push(cache_suite(path, level)?);
    }
    Ok(results)
}
