//! C ABI for the mtdgame toolkit: opaque handles, status codes, and a
//! caller-owned last-error message, so other languages can load inputs,
//! build and solve games, and run coverage sweeps.

pub mod capi;

pub use capi::*;
