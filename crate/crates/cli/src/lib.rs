// SPDX-License-Identifier: Apache-2.0

//! Command-line front end: argument parsing, the class group cache, report
//! emission and the oracle suites.

pub mod cache;
pub mod commands;
pub mod output;
pub mod verify;

pub use commands::{run, Cli};

/// Exit status for an error: 2 for rejected inputs, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<mordell_core::Error>() {
        Some(e) if e.is_validation() => 2,
        _ => 1,
    }
}
