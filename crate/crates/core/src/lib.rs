pub mod catalog;
pub mod checks;
pub mod classify;
pub mod defval;
pub mod dsl;
pub mod error;
pub mod groups;
pub mod numeric;
pub mod sample;
pub mod series;

pub use classify::{ClassificationReport, ValuationDescriptor};
pub use defval::{CaseTag, CutPoint};
pub use error::{Error, Result};
pub use groups::{FinalSegment, GroupDescriptor, GroupElement, HullElement, Index, Rule, Val};
pub use numeric::{QuadExt, Rational};
pub use series::{CoefficientField, Series, TruncatedResult};
