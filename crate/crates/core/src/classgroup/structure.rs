// SPDX-License-Identifier: Apache-2.0

use super::ClassGroup;
use crate::arith::factorize;
use crate::discriminants::FundamentalDiscriminant;
use crate::error::{Error, Result};

/// Largest class number the full composition table is built for.
pub const STRUCTURE_GUARD: u64 = 200;

/// Invariant factors `d₁ | d₂ | …` of the (narrow) class group, from the full
/// composition table.
pub fn brute_force_group_structure(delta: FundamentalDiscriminant) -> Result<Vec<u64>> {
    let group = ClassGroup::new(delta)?;
    let h = group.order();
    if h as u64 > STRUCTURE_GUARD {
        return Err(Error::GuardExceeded { class_number: h as u64, guard: STRUCTURE_GUARD });
    }
    let mut table = vec![vec![0usize; h]; h];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = group.mul(i, j)?;
        }
    }
    let e = group.identity();
    let power = |x: usize, n: u64| (0..n).fold(e, |acc, _| table[acc][x]);

    // For each p | h: log_p #G[p^i] for increasing i gives the number of
    // cyclic p-factors of order ≥ p^i.
    let mut per_prime: Vec<Vec<u64>> = Vec::new();
    for &(p, exp) in factorize(h as i64)?.factors() {
        let mut ranks = vec![0u32];
        for i in 1..=exp {
            let pi = p.pow(i);
            let killed = (0..h).filter(|&x| power(x, pi) == e).count() as u64;
            ranks.push(ilog_exact(killed, p)?);
        }
        // cyclic factors of order exactly p^i
        let mut factors = Vec::new();
        for i in 1..=exp as usize {
            let at_least = ranks[i] - ranks[i - 1];
            let at_least_next = if i < exp as usize { ranks[i + 1] - ranks[i] } else { 0 };
            for _ in 0..(at_least - at_least_next) {
                factors.push(p.pow(i as u32));
            }
        }
        factors.sort_unstable_by(|a, b| b.cmp(a));
        per_prime.push(factors);
    }
    let len = per_prime.iter().map(Vec::len).max().unwrap_or(0);
    let mut invariants: Vec<u64> = (0..len)
        .map(|k| per_prime.iter().filter_map(|f| f.get(k)).product())
        .collect();
    invariants.reverse();
    debug_assert_eq!(invariants.iter().product::<u64>(), h as u64);
    Ok(invariants)
}

fn ilog_exact(n: u64, p: u64) -> Result<u32> {
    let mut k = 0;
    let mut m = n;
    while m % p == 0 && m > 1 {
        m /= p;
        k += 1;
    }
    if m == 1 {
        Ok(k)
    } else {
        Err(Error::OutOfRange(format!("{n} is not a power of {p}")))
    }
}
