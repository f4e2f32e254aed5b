//! Command-line front end for the differential-difference algebra kernel:
//! expression parser, session state, and the subcommand dispatcher.

pub mod ast;
pub mod commands;
pub mod lower;
pub mod parser;
pub mod session;
