//! Exact-arithmetic workbench for truncated prisms, Breuil-Kisin modules,
//! display groups and banal G-mu-displays.

pub mod bkmod;
pub mod cli;
pub mod descent;
pub mod displays;
pub mod error;
pub mod prisms;
pub mod rings;
pub mod zlinalg;

pub use error::{Error, Result};
