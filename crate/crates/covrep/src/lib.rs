//! JSON instances, seeded random generators and the `covrep` command-line
//! front end over [`covrep_core`].

pub mod cli;
pub mod commands;
pub mod corpus;
pub mod error;
pub mod io;
pub mod json;
pub mod random;

pub use covrep_core;
pub use error::{CliError, CliResult};
