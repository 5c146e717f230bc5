//! File formats, configuration and the command-line front end for
//! `selfsim-core`.

#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod io;
pub mod parallel;
