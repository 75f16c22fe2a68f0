//! Library side of the `splitdecomp` command-line tool: the graph file
//! format, reports, and the commands behind each subcommand.

pub mod commands;
pub mod graphfile;
pub mod report;
