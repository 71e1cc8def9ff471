// SPDX-License-Identifier: Apache-2.0

//! Shared inputs for the benchmarks.

use mordell_core::discriminants::is_fundamental;

/// Fundamental discriminants `Δ` with `lo ≤ |Δ| < hi` of the given sign.
pub fn fundamentals(lo: i64, hi: i64, negative: bool) -> Vec<i64> {
    (lo..hi)
        .map(|n| if negative { -n } else { n })
        .filter(|&d| is_fundamental(d).unwrap_or(false))
        .collect()
}
