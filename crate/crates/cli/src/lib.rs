//! IO companion to `czjump-core`: catalogue files, canonical reports,
//! subcommand drivers and the self-test suites.

pub mod catalogue;
pub mod commands;
pub mod report;
pub mod selftest;
