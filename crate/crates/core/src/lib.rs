pub mod config;
pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod harness;
pub mod reference;
pub mod run;
pub mod scheme;
pub mod snapshot;
pub mod tridiag;
