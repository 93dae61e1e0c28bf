//! Exact Lipschitz extension over ultrametric valued fields.
//!
//! Elements live in one of three computable backends (`t`-adic rational
//! functions, Puiseux-type fractions with rational exponents, or `Q` with a
//! `p`-adic norm). Everything is exact; there is no floating point anywhere.

pub mod error;
pub mod extension;
pub mod generate;
pub mod io;
pub mod geometry;
pub mod lipschitz;
pub mod sampling;
pub mod skeleton;
pub mod valued_field;

pub use error::{Error, Result};
pub use valued_field::{
    integer_average, Average, CutValue, FieldDescriptor, FieldElement, NormValue, Point, RvValue,
};
pub use geometry::{AffineCenter, Ball, Cell1D, CellND, RvBox};
