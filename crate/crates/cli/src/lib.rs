//! Script language, runner and reports for the `chowkit` command line tool.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod report;
pub mod runner;
pub mod suite;

pub use parser::{parse, ParseError};
pub use report::Report;
pub use runner::{run, RunError, RunOptions};
