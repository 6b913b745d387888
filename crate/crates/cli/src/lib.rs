//! Command-line front end for the exact strengthening toolkit: problem-file
//! parsing, the five subcommands, and the seeded property suites.

pub mod output;
pub mod parse;
pub mod run;
pub mod verify;
