//! Exact arithmetic, norms and the rv map for the supported backends.

mod element;
pub(crate) mod series;
mod text;
mod value;

pub use element::{integer_average, Average, FieldDescriptor, FieldElement, Point};
pub use value::{CutValue, NormValue, RvValue};
pub(crate) use value::parse_exponent_json;

pub(crate) use element::big;
