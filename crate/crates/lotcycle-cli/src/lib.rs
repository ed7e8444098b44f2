//! Library surface of the `lotcycle` command-line tool: scenario-file
//! parsing and report/artifact rendering, kept importable so integration
//! tests and downstream tooling can reuse the exact same plumbing.

pub mod report;
pub mod scenario;
