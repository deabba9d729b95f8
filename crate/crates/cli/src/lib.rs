//! JSON documents, reports and the `congforge` command line over
//! [`congforge_core`].

pub mod commands;
pub mod format;
pub mod report;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_RESIDUAL: u8 = 1;
pub const EXIT_STRUCTURAL: u8 = 2;
pub const EXIT_BRANCH: u8 = 3;
