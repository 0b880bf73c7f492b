//! File formats, SVG output, parallel experiments and the command line for
//! `symiso-core`.

pub mod cli;
pub mod io;
pub mod render;
pub mod runner;
