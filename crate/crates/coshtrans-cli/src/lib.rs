//! Library side of the `coshtrans` command-line tool: input loading,
//! report assembly, and the acceptance-check bundle shared by the
//! `verify` and `reproduce` subcommands.

pub mod acceptance;
pub mod io;
pub mod reports;
