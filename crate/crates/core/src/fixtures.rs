//! Bundled substitution documents for the two worked examples.
//!
//! The canonical files live in `specs/` at the repository root; they are
//! embedded here so library tests and downstream tools can load them
//! without touching the filesystem.

use crate::substitution::Substitution;

pub const RSL_DOCUMENT: &str = include_str!("../../../specs/rsl.toml");
pub const RS_DOCUMENT: &str = include_str!("../../../specs/rs.toml");

pub fn rsl_substitution() -> Substitution {
    Substitution::parse(RSL_DOCUMENT).expect("bundled RSL document is valid")
}

pub fn rs_substitution() -> Substitution {
    Substitution::parse(RS_DOCUMENT).expect("bundled RS document is valid")
}
