//! Exact invariants of Landau–Ginzburg orbifolds.

#![allow(clippy::needless_range_loop)]

pub mod ainfty_formal;
pub mod exact_algebra;
pub mod lg_core;
pub mod mf_restrict;
pub mod popsicle_moduli;
pub mod reeb_sectors;
