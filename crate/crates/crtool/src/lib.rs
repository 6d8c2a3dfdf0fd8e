//! File formats, the verification battery and the command-line front end
//! for `crtool-core`.

pub mod io;
pub mod suite;
