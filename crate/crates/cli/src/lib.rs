//! Command-line front end for the `itw` library.

pub mod commands;
pub mod config;
pub mod output;
pub mod pipeline;
pub mod svg;

pub use commands::run;
