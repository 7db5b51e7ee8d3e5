//! Coefficient rings, truncated power series with a Frobenius lift and
//! delta-structure, and length-2 Witt vectors.

pub mod algebra;
pub mod coeff;
pub mod delta;
pub mod matrix;
pub mod parse;
pub mod witt;

pub use algebra::{Algebra, DeltaCtx, Elt, Prec};
pub use coeff::CoeffRing;
pub use delta::{axiom_suite, AxiomReport};
pub use matrix::Mat;
pub use parse::{format_elt, parse_elt};
pub use witt::{witt2_section, Witt2};
