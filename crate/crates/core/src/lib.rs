//! Exact identifiability checks for Waring decompositions of ternary (and
//! general) forms over prime fields.

pub mod criteria;
pub mod error;
pub mod field;
pub mod gen;
pub mod io;
pub mod matrix;
pub mod octic;
pub mod points;
pub mod poly;

pub use criteria::{Certificate, Criterion, Instance, Verdict, Witness};
pub use error::*;
pub use field::{PrimeField, DEFAULT_PRIME};
pub use matrix::DenseMatrix;
pub use octic::{certify_octic14, SystemMode};
pub use points::PointSet;
pub use poly::{GradedPoly, MonomialBasis};
