//! Command implementations behind the `twostep` binary.
pub mod commands;
pub mod input;
pub mod output;
pub mod spiral;
pub mod survey;
