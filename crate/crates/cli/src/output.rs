// SPDX-License-Identifier: Apache-2.0

use std::io::{self, Write};

use mordell_core::stats::ScanRow;
use mordell_core::{ClassGroupSummary, TwistRecord};

/// Column order of scan traces.
pub const TRACE_COLUMNS: [&str; 6] = ["D", "delta", "h", "h3_rank", "selmer_dim", "rank_bound"];

pub fn write_trace<W: Write>(mut out: W, rows: &[ScanRow]) -> io::Result<()> {
    writeln!(out, "{}", TRACE_COLUMNS.join(","))?;
    for row in rows {
        let r = &row.record;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.d, r.delta, row.summary.class_number, row.summary.three_rank, r.selmer_dim, r.rank_bound
        )?;
    }
    Ok(())
}

pub fn describe_summary(s: &ClassGroupSummary) -> String {
    let label = if s.delta > 0 { "h+" } else { "h" };
    format!(
        "delta={} {label}={} h3={} rank={}",
        s.delta, s.class_number, s.three_torsion, s.three_rank
    )
}

pub fn describe_twist(r: &TwistRecord) -> String {
    format!(
        "A={} D={} delta={} case={} selmer_dim={} rank_bound={} torsion_trivial={}",
        r.a, r.d, r.delta, r.case, r.selmer_dim, r.rank_bound, r.torsion_trivial
    )
}
